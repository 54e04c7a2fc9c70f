use serde::{Deserialize, Serialize};

use super::{JumpRule, TimeScale};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

const MAX_GENERATED_POINTS: usize = 5_000_000;

/// Tagged time-scale description as found in configuration files.
///
/// ```json
/// {"kind": "interval", "lo": 0, "hi": 1}
/// {"kind": "uniform", "h": 0.5, "window": [0, 10]}
/// {"kind": "geometric", "q": 2, "include_zero": true, "k_min": -10, "window": [0, 32]}
/// {"kind": "points", "xs": [0, 0.5, 3]}
/// {"kind": "union", "parts": [ ... ]}
/// ```
///
/// Generators (`uniform`, `geometric`) need a `window`. For `geometric`,
/// `k_min` is the smallest exponent kept; it defaults to the smallest
/// exponent inside the window when the window starts above zero, and to `0`
/// otherwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Descriptor<S> {
    Interval {
        lo: S,
        hi: S,
    },
    Uniform {
        h: S,
        window: [S; 2],
    },
    Geometric {
        q: S,
        #[serde(default)]
        include_zero: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        k_min: Option<i32>,
        window: [S; 2],
    },
    Points {
        xs: Vec<S>,
    },
    Union {
        parts: Vec<Descriptor<S>>,
    },
}

fn check_window<S: Scalar>(window: [S; 2]) -> Result<(S, S)> {
    let [lo, hi] = window;
    if !lo.is_finite() || !hi.is_finite() || lo > hi {
        return Err(Error::InvalidDescriptor(format!(
            "window [{lo}, {hi}] must be finite with lo <= hi"
        )));
    }
    Ok((lo, hi))
}

impl<S: Scalar> Descriptor<S> {
    /// Materializes the described set.
    pub fn build(&self) -> Result<TimeScale<S>> {
        match self {
            Descriptor::Interval { lo, hi } => TimeScale::interval(*lo, *hi),
            Descriptor::Points { xs } => TimeScale::points(xs.iter().copied()),
            Descriptor::Union { parts } => {
                if parts.is_empty() {
                    return Err(Error::InvalidDescriptor("union has no parts".into()));
                }
                let built = parts
                    .iter()
                    .map(|p| p.build())
                    .collect::<Result<Vec<_>>>()?;
                TimeScale::union(&built)
            }
            Descriptor::Uniform { h, window } => {
                let (lo, hi) = check_window(*window)?;
                let h = *h;
                if !(h > S::zero()) || !h.is_finite() {
                    return Err(Error::InvalidDescriptor(format!(
                        "step h = {h} must be positive"
                    )));
                }
                let slack = S::lit(1e-9);
                let k_lo = (lo / h - slack).ceil();
                let k_hi = (hi / h + slack).floor();
                let count = (k_hi - k_lo + S::one()).to_f64().unwrap_or(f64::INFINITY);
                if count > MAX_GENERATED_POINTS as f64 {
                    return Err(Error::InvalidDescriptor(format!(
                        "uniform grid would have {count} points"
                    )));
                }
                if count < 1.0 {
                    return Err(Error::EmptyTimeScale);
                }
                let k0 = k_lo.to_i64().expect("bounded");
                let n = count as i64;
                let pts = (0..n).map(|j| h * S::lit((k0 + j) as f64));
                Ok(TimeScale::points(pts)?.with_jump_rule(JumpRule::Uniform { h }))
            }
            Descriptor::Geometric {
                q,
                include_zero,
                k_min,
                window,
            } => {
                let (lo, hi) = check_window(*window)?;
                let q = *q;
                if !(q > S::one()) || !q.is_finite() {
                    return Err(Error::InvalidDescriptor(format!(
                        "ratio q = {q} must exceed 1"
                    )));
                }
                let k_start = match *k_min {
                    Some(k) => k,
                    None if lo > S::zero() => {
                        let k = (lo.ln() / q.ln() - S::lit(1e-9)).ceil();
                        k.to_i32().ok_or_else(|| {
                            Error::InvalidDescriptor(format!("window start {lo} out of range"))
                        })?
                    }
                    None => 0,
                };
                let tol = S::membership_tol();
                let mut pts = Vec::new();
                if *include_zero && lo <= S::zero() && hi >= S::zero() {
                    pts.push(S::zero());
                }
                let mut k = k_start;
                loop {
                    let x = q.powi(k);
                    if x > hi + tol || !x.is_finite() {
                        break;
                    }
                    if x >= lo - tol && x > tol {
                        pts.push(x);
                    }
                    if pts.len() > MAX_GENERATED_POINTS {
                        return Err(Error::InvalidDescriptor("geometric grid too large".into()));
                    }
                    k += 1;
                }
                if pts.is_empty() {
                    return Err(Error::EmptyTimeScale);
                }
                Ok(TimeScale::points(pts)?.with_jump_rule(JumpRule::Geometric { q }))
            }
        }
    }
}

impl<S: Scalar> TryFrom<&Descriptor<S>> for TimeScale<S> {
    type Error = Error;

    fn try_from(d: &Descriptor<S>) -> Result<Self> {
        d.build()
    }
}
