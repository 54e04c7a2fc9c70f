//! Time scales: nonempty closed subsets of the real line.
//!
//! A [`TimeScale`] is stored canonically as a strictly increasing list of
//! disjoint [`Piece`]s, each a closed interval of positive length or an
//! isolated point, with a positive gap between neighbours. Unbounded scales
//! such as `hℤ` or `q^ℤ` are only ever materialized over a finite window
//! (see [`Descriptor`]).
//!
//! Membership is decided with the absolute tolerance
//! [`Scalar::membership_tol`]; queries snap their argument onto the stored
//! point first so that generator noise (e.g. `0.1 * 3`) does not matter.

mod descriptor;

pub use descriptor::Descriptor;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// One component of a time scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Piece<S> {
    Interval { lo: S, hi: S },
    Point { x: S },
}

impl<S: Scalar> Piece<S> {
    pub fn lo(&self) -> S {
        match *self {
            Piece::Interval { lo, .. } => lo,
            Piece::Point { x } => x,
        }
    }

    pub fn hi(&self) -> S {
        match *self {
            Piece::Interval { hi, .. } => hi,
            Piece::Point { x } => x,
        }
    }

    pub fn is_interval(&self) -> bool {
        matches!(self, Piece::Interval { .. })
    }
}

/// Rule used by generated scales to continue the forward jump operator to
/// real arguments that fall in the gaps of the scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum JumpRule<S> {
    /// `σ(s) = s + h` (grids `hℤ`).
    Uniform { h: S },
    /// `σ(s) = q s` (grids `q^ℤ`, with or without the accumulation point 0).
    Geometric { q: S },
}

impl<S: Scalar> JumpRule<S> {
    /// The continued jump `σ̃(s)`, or `None` when the rule does not apply.
    pub fn forward(&self, s: S) -> Option<S> {
        match *self {
            JumpRule::Uniform { h } => Some(s + h),
            JumpRule::Geometric { q } => (s > S::zero()).then(|| q * s),
        }
    }
}

bitflags::bitflags! {
    /// Local structure of a point: right kind × left kind, with boundary
    /// markers for the extremes of the scale.
    #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
    pub struct PointClass: u8 {
        const RIGHT_SCATTERED = 1;
        const RIGHT_DENSE = 1 << 1;
        const LEFT_SCATTERED = 1 << 2;
        const LEFT_DENSE = 1 << 3;
        /// The maximum of the scale (never right-scattered).
        const MAX = 1 << 4;
        /// The minimum of the scale (never left-scattered).
        const MIN = 1 << 5;
    }
}

impl PointClass {
    /// Neither right-dense nor left-dense.
    pub fn is_isolated(self) -> bool {
        !self.intersects(PointClass::RIGHT_DENSE | PointClass::LEFT_DENSE)
    }

    /// Both right-dense and left-dense.
    pub fn is_dense(self) -> bool {
        self.contains(PointClass::RIGHT_DENSE | PointClass::LEFT_DENSE)
    }
}

/// A right-scattered point `t` with its jump `σ(t)` and graininess `μ(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScatteredPoint<S> {
    pub t: S,
    pub sigma: S,
    pub mu: S,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeScale<S> {
    pieces: Vec<Piece<S>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    jump_rule: Option<JumpRule<S>>,
}

impl<S: Scalar> TimeScale<S> {
    /// Builds the canonical form of the union of `raw` pieces: sorted,
    /// touching pieces merged, isolated points on interval endpoints
    /// absorbed, zero-length intervals stored as points.
    pub fn canonicalize<I>(raw: I) -> Result<Self>
    where
        I: IntoIterator<Item = Piece<S>>,
    {
        let eps = S::membership_tol();
        let mut spans: Vec<(S, S)> = Vec::new();
        for piece in raw {
            let (lo, hi) = (piece.lo(), piece.hi());
            if !lo.is_finite() || !hi.is_finite() {
                return Err(Error::InvalidPiece(format!(
                    "non-finite bound in [{lo}, {hi}]"
                )));
            }
            if lo > hi {
                return Err(Error::InvalidPiece(format!(
                    "interval [{lo}, {hi}] has lo > hi"
                )));
            }
            spans.push((lo, hi));
        }
        if spans.is_empty() {
            return Err(Error::EmptyTimeScale);
        }
        spans.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite bounds"));

        let mut merged: Vec<(S, S)> = Vec::with_capacity(spans.len());
        for (lo, hi) in spans {
            match merged.last_mut() {
                Some(last) if lo <= last.1 + eps => {
                    if hi > last.1 {
                        last.1 = hi;
                    }
                }
                _ => merged.push((lo, hi)),
            }
        }
        let pieces = merged
            .into_iter()
            .map(|(lo, hi)| {
                if hi - lo > eps {
                    Piece::Interval { lo, hi }
                } else {
                    Piece::Point { x: lo }
                }
            })
            .collect();
        Ok(Self {
            pieces,
            jump_rule: None,
        })
    }

    /// The real interval `[lo, hi]`.
    pub fn interval(lo: S, hi: S) -> Result<Self> {
        Self::canonicalize([Piece::Interval { lo, hi }])
    }

    /// A finite set of points.
    pub fn points<I: IntoIterator<Item = S>>(xs: I) -> Result<Self> {
        Self::canonicalize(xs.into_iter().map(|x| Piece::Point { x }))
    }

    /// `hℤ ∩ [lo, hi]`.
    pub fn uniform(h: S, lo: S, hi: S) -> Result<Self> {
        Descriptor::Uniform {
            h,
            window: [lo, hi],
        }
        .build()
    }

    /// `{q^k : k ≥ k_min} ∩ [0, hi]`, plus `0` when `include_zero`.
    pub fn geometric(q: S, include_zero: bool, k_min: i32, hi: S) -> Result<Self> {
        Descriptor::Geometric {
            q,
            include_zero,
            k_min: Some(k_min),
            window: [S::zero(), hi],
        }
        .build()
    }

    /// Union of several scales.
    pub fn union<'a, I>(parts: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a TimeScale<S>>,
    {
        Self::canonicalize(parts.into_iter().flat_map(|p| p.pieces.iter().copied()))
    }

    pub(crate) fn with_jump_rule(mut self, rule: JumpRule<S>) -> Self {
        self.jump_rule = Some(rule);
        self
    }

    pub fn pieces(&self) -> &[Piece<S>] {
        &self.pieces
    }

    pub fn jump_rule(&self) -> Option<&JumpRule<S>> {
        self.jump_rule.as_ref()
    }

    pub fn min(&self) -> S {
        self.pieces[0].lo()
    }

    pub fn max(&self) -> S {
        self.pieces[self.pieces.len() - 1].hi()
    }

    /// Index of the piece containing `t`.
    fn locate(&self, t: S) -> Option<usize> {
        let eps = S::membership_tol();
        let idx = self.pieces.partition_point(|p| p.hi() + eps < t);
        let piece = self.pieces.get(idx)?;
        (piece.lo() - eps <= t).then_some(idx)
    }

    pub fn contains(&self, t: S) -> bool {
        t.is_finite() && self.locate(t).is_some()
    }

    fn locate_snapped(&self, t: S) -> Result<(usize, S)> {
        let idx = self
            .locate(t)
            .ok_or(Error::PointNotInScale { t: t.as_f64() })?;
        let eps = S::membership_tol();
        let snapped = match self.pieces[idx] {
            Piece::Point { x } => x,
            Piece::Interval { lo, hi } => {
                if (t - lo).abs() <= eps {
                    lo
                } else if (t - hi).abs() <= eps {
                    hi
                } else {
                    t
                }
            }
        };
        Ok((idx, snapped))
    }

    /// The piece of the scale that contains `t`.
    pub fn piece_at(&self, t: S) -> Result<Piece<S>> {
        self.locate_snapped(t).map(|(idx, _)| self.pieces[idx])
    }

    /// Largest point of the scale not exceeding the real number `s`.
    pub fn floor_point(&self, s: S) -> Option<S> {
        if let Ok(snapped) = self.snap(s) {
            return Some(snapped);
        }
        let idx = self.pieces.partition_point(|p| p.lo() <= s);
        let piece = self.pieces.get(idx.checked_sub(1)?)?;
        Some(if s <= piece.hi() { s } else { piece.hi() })
    }

    /// The stored representative of `t` (exact endpoint or isolated point
    /// when `t` is within tolerance of one).
    pub fn snap(&self, t: S) -> Result<S> {
        self.locate_snapped(t).map(|(_, s)| s)
    }

    /// Forward jump `σ(t) = inf{s ∈ T : s > t}`, with `σ(max T) = max T`.
    pub fn sigma(&self, t: S) -> Result<S> {
        let (idx, t) = self.locate_snapped(t)?;
        Ok(self.sigma_at(idx, t))
    }

    fn sigma_at(&self, idx: usize, t: S) -> S {
        match self.pieces[idx] {
            Piece::Interval { hi, .. } if t < hi => t,
            _ => self.pieces.get(idx + 1).map_or(t, |p| p.lo()),
        }
    }

    /// Backward jump `ρ(t) = sup{s ∈ T : s < t}`, with `ρ(min T) = min T`.
    pub fn rho(&self, t: S) -> Result<S> {
        let (idx, t) = self.locate_snapped(t)?;
        Ok(self.rho_at(idx, t))
    }

    fn rho_at(&self, idx: usize, t: S) -> S {
        match self.pieces[idx] {
            Piece::Interval { lo, .. } if t > lo => t,
            _ if idx > 0 => self.pieces[idx - 1].hi(),
            _ => t,
        }
    }

    /// Graininess `μ(t) = σ(t) − t`.
    pub fn graininess(&self, t: S) -> Result<S> {
        let (idx, t) = self.locate_snapped(t)?;
        Ok(self.sigma_at(idx, t) - t)
    }

    pub fn classify(&self, t: S) -> Result<PointClass> {
        let (idx, t) = self.locate_snapped(t)?;
        let piece = self.pieces[idx];
        let last = idx + 1 == self.pieces.len();
        let mut class = if last && t == piece.hi() {
            PointClass::MAX
        } else if self.sigma_at(idx, t) > t {
            PointClass::RIGHT_SCATTERED
        } else {
            PointClass::RIGHT_DENSE
        };
        class |= if idx == 0 && t == piece.lo() {
            PointClass::MIN
        } else if self.rho_at(idx, t) < t {
            PointClass::LEFT_SCATTERED
        } else {
            PointClass::LEFT_DENSE
        };
        Ok(class)
    }

    /// `T^κ`: the scale without its maximum when that maximum is
    /// left-scattered.
    pub fn kappa(&self) -> Self {
        let mut out = self.clone();
        if out.pieces.len() > 1 && !out.pieces[out.pieces.len() - 1].is_interval() {
            out.pieces.pop();
        }
        out
    }

    /// Whether `t ∈ T^κ`.
    pub fn in_kappa(&self, t: S) -> Result<bool> {
        let class = self.classify(t)?;
        Ok(!(class.contains(PointClass::MAX | PointClass::LEFT_SCATTERED)))
    }

    fn check_range(&self, a: S, b: S) -> Result<(S, S)> {
        let a = self.snap(a)?;
        let b = self.snap(b)?;
        if a > b {
            return Err(Error::invalid(
                "timescale",
                format!("range [{a}, {b}] has a > b"),
            ));
        }
        Ok((a, b))
    }

    /// The right-scattered points of `[a, b)` in increasing order.
    pub fn scattered_points(&self, a: S, b: S) -> Result<Vec<ScatteredPoint<S>>> {
        let (a, b) = self.check_range(a, b)?;
        let start = self.locate(a).unwrap_or(0);
        let mut out = Vec::new();
        for (i, piece) in self.pieces.iter().enumerate().skip(start) {
            if piece.lo() >= b {
                break;
            }
            let t = piece.hi();
            if t >= a && t < b {
                let sigma = self.pieces[i + 1].lo();
                out.push(ScatteredPoint {
                    t,
                    sigma,
                    mu: sigma - t,
                });
            }
        }
        Ok(out)
    }

    /// Maximal continuous sub-intervals of `T ∩ [a, b]` with positive length.
    pub fn dense_segments(&self, a: S, b: S) -> Result<Vec<(S, S)>> {
        let (a, b) = self.check_range(a, b)?;
        let start = self.locate(a).unwrap_or(0);
        let mut out = Vec::new();
        for piece in &self.pieces[start..] {
            if piece.lo() >= b {
                break;
            }
            if let Piece::Interval { lo, hi } = *piece {
                let (c, d) = (lo.max(a), hi.min(b));
                if d > c {
                    out.push((c, d));
                }
            }
        }
        Ok(out)
    }

    /// True when `T ∩ [a, b]` has no continuous part.
    pub fn is_discrete_on(&self, a: S, b: S) -> Result<bool> {
        Ok(self.dense_segments(a, b)?.is_empty())
    }

    /// Every isolated point and every interval endpoint lying in `[a, b]`,
    /// together with `a` and `b` themselves.
    pub fn landmarks(&self, a: S, b: S) -> Result<Vec<S>> {
        let (a, b) = self.check_range(a, b)?;
        let start = self.locate(a).unwrap_or(0);
        let mut out = vec![a];
        for piece in &self.pieces[start..] {
            if piece.lo() > b {
                break;
            }
            for x in [piece.lo(), piece.hi()] {
                if x > a && x < b {
                    out.push(x);
                }
            }
        }
        out.push(b);
        out.dedup();
        Ok(out)
    }

    /// Deterministic sample of `T ∩ [a, b]`: all landmarks plus about `n`
    /// evenly spread points on the continuous parts.
    pub fn sample(&self, a: S, b: S, n: usize) -> Result<Vec<S>> {
        let mut pts = self.landmarks(a, b)?;
        let segs = self.dense_segments(a, b)?;
        let total: S = segs.iter().map(|&(c, d)| d - c).sum();
        for &(c, d) in &segs {
            let share = ((d - c) / total * S::lit(n as f64)).ceil();
            let k = share.to_usize().unwrap_or(1).max(1);
            for j in 1..k {
                pts.push(c + (d - c) * S::lit(j as f64) / S::lit(k as f64));
            }
        }
        pts.sort_by(|x, y| x.partial_cmp(y).expect("finite"));
        pts.dedup();
        Ok(pts)
    }
}
