//! Delta calculus on a time scale.
//!
//! The delta integral over `[a, b]` splits into a sum over the
//! right-scattered points `s ∈ [a, b)` of `f(s) μ(s)` plus ordinary
//! integrals over the continuous segments. The delta derivative is an exact
//! forward quotient at right-scattered points and a Richardson-extrapolated
//! one-sided difference quotient at dense points.
//!
//! Integrands are assumed rd-continuous and bounded; that is not checked.

mod kernel;
pub mod quadrature;

pub use kernel::kernel_integral;
pub use quadrature::{integrate, Estimate, QuadratureSpec};

use crate::error::{Error, Result};
use crate::func::UnaryFn;
use crate::scalar::{KahanSum, Scalar};
use crate::timescale::{Piece, PointClass, TimeScale};

const RICHARDSON_STEPS: usize = 9;

/// Delta (Hilger) derivative `f^Δ(t)` for `t ∈ T^κ`.
pub fn delta_derivative<S, F>(f: &F, ts: &TimeScale<S>, t: S) -> Result<S>
where
    S: Scalar,
    F: UnaryFn<S> + ?Sized,
{
    delta_derivative_above(f, ts, t, S::neg_infinity())
}

/// [`delta_derivative`] for a function that is only defined at points
/// `≥ lower`; backward differences never step below `lower`.
pub(crate) fn delta_derivative_above<S, F>(f: &F, ts: &TimeScale<S>, t: S, lower: S) -> Result<S>
where
    S: Scalar,
    F: UnaryFn<S> + ?Sized,
{
    let t = ts.snap(t)?;
    let class = ts.classify(t)?;
    if class.contains(PointClass::RIGHT_SCATTERED) {
        let sigma = ts.sigma(t)?;
        return Ok((f.call(sigma)? - f.call(t)?) / (sigma - t));
    }
    let Piece::Interval { lo, hi } = ts.piece_at(t)? else {
        return Err(Error::NotInKappa { t: t.as_f64() });
    };
    let right = class.contains(PointClass::RIGHT_DENSE);
    let left = class.contains(PointClass::LEFT_DENSE);
    let (forward_room, backward_room) = (hi - t, t - lo.max(lower));
    if right && (!left || forward_room >= backward_room) {
        richardson(f, t, S::one(), forward_room)
    } else if left && backward_room > S::zero() {
        richardson(f, t, -S::one(), backward_room)
    } else {
        Err(Error::NotInKappa { t: t.as_f64() })
    }
}

/// One-sided difference quotients with steps `h0 / 2^k`, `h0 = min(room,
/// 1e-3)`, combined by a Neville table. Returns the entry whose neighbours
/// agree best.
fn richardson<S, F>(f: &F, t: S, direction: S, room: S) -> Result<S>
where
    S: Scalar,
    F: UnaryFn<S> + ?Sized,
{
    let h0 = room.min(S::lit(1e-3));
    if !(h0 > S::zero()) {
        return Err(Error::NotInKappa { t: t.as_f64() });
    }
    let ft = f.call(t)?;
    let mut prev: Vec<S> = Vec::with_capacity(RICHARDSON_STEPS);
    let mut best = S::nan();
    let mut best_err = S::infinity();
    let two = S::lit(2.0);
    for k in 0..RICHARDSON_STEPS {
        let h = h0 / two.powi(k as i32);
        let x = t + direction * h;
        let mut row = Vec::with_capacity(k + 1);
        row.push((f.call(x)? - ft) / (x - t));
        let mut factor = S::one();
        for j in 1..=k {
            factor = factor * two;
            let next = row[j - 1] + (row[j - 1] - prev[j - 1]) / (factor - S::one());
            let err = (next - row[j - 1]).abs().max((next - prev[j - 1]).abs());
            if err <= best_err {
                best = next;
                best_err = err;
            }
            row.push(next);
        }
        if k >= 1 && (row[k] - prev[k - 1]).abs() >= two * best_err {
            break;
        }
        prev = row;
    }
    let tol = S::lit(1e-6).max(S::epsilon().sqrt()) * best.abs().max(S::one());
    if !best.is_finite() || best_err > tol {
        return Err(Error::NoConvergence {
            t: t.as_f64(),
            spread: best_err.as_f64(),
        });
    }
    Ok(best)
}

/// Delta integral `∫_a^b f(s) Δs`.
pub fn delta_integral<S, F>(
    f: &F,
    ts: &TimeScale<S>,
    a: S,
    b: S,
    q: &QuadratureSpec<S>,
) -> Result<S>
where
    S: Scalar,
    F: UnaryFn<S> + ?Sized,
{
    delta_integral_with_breaks(f, ts, a, b, q, &[])
}

/// [`delta_integral`] with extra panel boundaries on the continuous
/// segments (kinks of the integrand, e.g. interpolation nodes).
pub fn delta_integral_with_breaks<S, F>(
    f: &F,
    ts: &TimeScale<S>,
    a: S,
    b: S,
    q: &QuadratureSpec<S>,
    breaks: &[S],
) -> Result<S>
where
    S: Scalar,
    F: UnaryFn<S> + ?Sized,
{
    q.validate()?;
    let a = ts.snap(a)?;
    let b = ts.snap(b)?;
    if a > b {
        return Err(Error::invalid(
            "calculus",
            format!("integration limits [{a}, {b}] are reversed"),
        ));
    }
    if a == b {
        return Ok(S::zero());
    }
    let mut discrete = KahanSum::new();
    for p in ts.scattered_points(a, b)? {
        let v = f.call(p.t)?;
        if !v.is_finite() {
            return Err(Error::NonFiniteValue {
                context: "calculus integrand",
                t: p.t.as_f64(),
            });
        }
        discrete.add(v * p.mu);
    }

    const PLAIN: usize = 0;
    const GRADED: usize = 1;
    let gamma = q.endpoint_exponent;
    let kappa = gamma + S::one();
    let power = S::one() / kappa;
    let mut panels = Vec::new();
    for (c, d) in ts.dense_segments(a, b)? {
        let mut edges = vec![c];
        edges.extend(breaks.iter().copied().filter(|&x| x > c && x < d));
        edges.push(d);
        edges.sort_by(|x, y| x.partial_cmp(y).expect("finite breaks"));
        edges.dedup();
        if gamma < S::zero() && d == b {
            for w in edges.windows(2) {
                panels.push(((b - w[1]).powf(kappa), (b - w[0]).powf(kappa), GRADED));
            }
        } else {
            for w in edges.windows(2) {
                panels.push((w[0], w[1], PLAIN));
            }
        }
    }
    let continuous = if panels.is_empty() {
        S::zero()
    } else {
        quadrature::integrate_panels(
            |x, tag| {
                if tag == PLAIN {
                    f.call(x)
                } else {
                    // s = b − u^p, ds = p u^(p−1) du = p (b − s)^(−γ) du; the
                    // Jacobian is taken from the rounded b − s so that it
                    // cancels the integrand's (b − s)^γ exactly.
                    let mut s = b - x.powf(power);
                    let mut d = b - s;
                    if !(d > S::zero()) {
                        s = b - S::epsilon() * b.abs().max(S::min_positive_value());
                        d = b - s;
                    }
                    Ok(f.call(s)? * power * d.powf(-gamma))
                }
            },
            &panels,
            q,
        )?
        .value
    };
    Ok(discrete.value() + continuous)
}

/// Both sides of `∫_a^b f Δt = μ(a) f(a) + ∫_{σ(a)}^b f Δt`.
pub fn split_identity_check<S, F>(
    f: &F,
    ts: &TimeScale<S>,
    a: S,
    b: S,
    q: &QuadratureSpec<S>,
) -> Result<(S, S)>
where
    S: Scalar,
    F: UnaryFn<S> + ?Sized,
{
    let lhs = delta_integral(f, ts, a, b, q)?;
    let a = ts.snap(a)?;
    let b = ts.snap(b)?;
    if a >= b {
        return Ok((lhs, S::zero()));
    }
    let sigma = ts.sigma(a)?;
    let rhs = (sigma - a) * f.call(a)? + delta_integral(f, ts, sigma, b, q)?;
    Ok((lhs, rhs))
}

/// Step extension of a function on `T ∩ [a, b]` to the real interval
/// `[a, b]`: `F(s) = f(s)` on the scale and `F(s) = f(t)` on each gap
/// `(t, σ(t))`.
#[derive(Clone, Copy)]
pub struct RealExtension<'a, S, F: ?Sized> {
    f: &'a F,
    ts: &'a TimeScale<S>,
    a: S,
    b: S,
}

impl<'a, S: Scalar, F: UnaryFn<S> + ?Sized> RealExtension<'a, S, F> {
    pub fn eval(&self, s: S) -> Result<S> {
        let eps = S::membership_tol();
        if s < self.a - eps || s > self.b + eps {
            return Err(Error::invalid(
                "calculus",
                format!(
                    "{s} is outside the extension domain [{}, {}]",
                    self.a, self.b
                ),
            ));
        }
        let anchor = self
            .ts
            .floor_point(s)
            .ok_or(Error::PointNotInScale { t: s.as_f64() })?;
        self.f.call(anchor)
    }

    /// Ordinary integral of the extension over `[a, b]`, computed by
    /// quadrature on the real line with panels split at the landmarks.
    pub fn integrate(&self, q: &QuadratureSpec<S>) -> Result<S> {
        q.validate()?;
        let marks = self.ts.landmarks(self.a, self.b)?;
        let panels: Vec<_> = marks.windows(2).map(|w| (w[0], w[1], 0)).collect();
        let plain = QuadratureSpec {
            endpoint_exponent: S::zero(),
            ..*q
        };
        Ok(quadrature::integrate_panels(|x, _| self.eval(x), &panels, &plain)?.value)
    }
}

impl<S: Scalar, F: UnaryFn<S> + ?Sized> UnaryFn<S> for RealExtension<'_, S, F> {
    fn call(&self, s: S) -> Result<S> {
        self.eval(s)
    }
}

/// Builds the step extension of an increasing function. Monotonicity is
/// spot-checked on a deterministic sample of `T ∩ [a, b]`.
pub fn extend_to_reals<'a, S, F>(
    f: &'a F,
    ts: &'a TimeScale<S>,
    a: S,
    b: S,
) -> Result<RealExtension<'a, S, F>>
where
    S: Scalar,
    F: UnaryFn<S> + ?Sized,
{
    let a = ts.snap(a)?;
    let b = ts.snap(b)?;
    let samples = ts.sample(a, b, 64)?;
    let mut prev: Option<(S, S)> = None;
    for &s in &samples {
        let v = f.call(s)?;
        if let Some((ps, pv)) = prev {
            let slack = S::lit(1e-12) * pv.abs().max(v.abs()).max(S::one());
            if v < pv - slack {
                return Err(Error::NotIncreasing {
                    s1: ps.as_f64(),
                    s2: s.as_f64(),
                });
            }
        }
        prev = Some((s, v));
    }
    Ok(RealExtension { f, ts, a, b })
}
