//! Reference values computed without the crate's integration code:
//! closed forms on the real line, exact finite sums on discrete scales and
//! a product-integration solver for the Volterra form of the IVP.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exprlang::gamma;
use crate::fracops::GridFunction;
use crate::func::{BinaryFn, UnaryFn};
use crate::scalar::Scalar;
use crate::solver::IVProblem;
use crate::timescale::{Piece, TimeScale};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleMethod {
    ClosedForm,
    FiniteSum,
    DenseQuadrature,
    VolterraGrid,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct OracleResult<S> {
    pub value: S,
    pub method: OracleMethod,
    pub est_error: S,
}

/// `I^α t^ν = Γ(ν+1)/Γ(ν+1+α) t^(ν+α)` on the real line.
pub fn rl_power_rule<S: Scalar>(alpha: S, nu: S, t: S) -> Result<OracleResult<S>> {
    if !(alpha > S::zero() && alpha < S::one()) || !(nu > -S::one()) || !(t >= S::zero()) {
        return Err(Error::OracleDomain(format!(
            "power rule needs 0 < alpha < 1, nu > -1, t >= 0 (got {alpha}, {nu}, {t})"
        )));
    }
    let one = S::one();
    let value = gamma(nu + one) / gamma(nu + one + alpha) * t.powf(nu + alpha);
    Ok(OracleResult {
        value,
        method: OracleMethod::ClosedForm,
        est_error: S::lit(64.0) * S::epsilon() * value.abs(),
    })
}

/// Exact generalized fractional integral on a scale without continuous
/// parts in `[a, t]`:
/// `(1/Γ(α)) Σ_{s ∈ [a,t)} (z(t) − z(s))^(α−1) ((z(σ(s)) − z(s))/μ(s)) h(s) μ(s)`,
/// summed left to right with compensation.
pub fn discrete_frac_sum<S, Z, H>(
    ts: &TimeScale<S>,
    alpha: S,
    z: &Z,
    h: &H,
    a: S,
    t: S,
) -> Result<OracleResult<S>>
where
    S: Scalar,
    Z: UnaryFn<S> + ?Sized,
    H: UnaryFn<S> + ?Sized,
{
    let a = ts.snap(a)?;
    let t = ts.snap(t)?;
    if t < a {
        return Err(Error::OracleDomain(format!("t = {t} precedes a = {a}")));
    }
    for piece in ts.pieces() {
        if let Piece::Interval { lo, hi } = *piece {
            if lo < t && hi > a {
                return Err(Error::ScaleHasContinuousPart {
                    lo: lo.as_f64(),
                    hi: hi.as_f64(),
                });
            }
        }
    }
    let zt = z.call(t)?;
    let (mut sum, mut comp) = (S::zero(), S::zero());
    let mut terms = 0usize;
    let mut s = a;
    while s < t {
        let next = ts.sigma(s)?;
        let mu = next - s;
        let zs = z.call(s)?;
        let slope = (z.call(next)? - zs) / mu;
        let term = (zt - zs).powf(alpha - S::one()) * slope * h.call(s)? * mu;
        let y = sum + term;
        comp = comp
            + if sum.abs() >= term.abs() {
                (sum - y) + term
            } else {
                (term - y) + sum
            };
        sum = y;
        terms += 1;
        s = next;
    }
    let value = (sum + comp) / gamma(alpha);
    Ok(OracleResult {
        value,
        method: OracleMethod::FiniteSum,
        est_error: S::lit(4.0 * (terms + 16) as f64) * S::epsilon() * value.abs(),
    })
}

/// Mittag-Leffler function `E_{α,β}(x) = Σ x^k / Γ(αk + β)`.
pub fn mittag_leffler<S: Scalar>(alpha: S, beta: S, x: S) -> Result<S> {
    if !(alpha > S::zero()) || !(beta > S::zero()) {
        return Err(Error::OracleDomain(format!(
            "Mittag-Leffler needs alpha, beta > 0 (got {alpha}, {beta})"
        )));
    }
    if x.abs() > S::lit(20.0) {
        return Err(Error::OracleDomain(format!(
            "Mittag-Leffler series is not used for |x| > 20 (got {x})"
        )));
    }
    let mut sum = S::zero();
    let mut power = S::one();
    for k in 0..1000 {
        let term = power / gamma(alpha * S::lit(k as f64) + beta);
        sum = sum + term;
        if k > 2 && term.abs() <= S::epsilon() * sum.abs() {
            return Ok(sum);
        }
        power = power * x;
    }
    Err(Error::OracleDomain(format!(
        "Mittag-Leffler series did not converge at {x}"
    )))
}

/// Solves `y(t) = (z'(t)/Γ(α)) ∫_{t0}^t (z(t) − z(s))^(α−1) z'(s) f(s, y(s)) ds`
/// on a uniform grid of `grid_n` nodes. The integral is taken in
/// `u = z(s)` with `f(s, y(s))` linear in `u` on each cell and the power
/// kernel integrated exactly; the implicit last node is resolved by
/// fixed-point iteration.
pub fn volterra_dense_solve<S, Z, F>(
    p: &IVProblem<S, Z, F>,
    grid_n: usize,
) -> Result<GridFunction<S>>
where
    S: Scalar,
    Z: UnaryFn<S> + Sync,
    F: BinaryFn<S> + Sync,
{
    if grid_n < 64 {
        return Err(Error::OracleDomain(format!(
            "grid_n must be at least 64 (got {grid_n})"
        )));
    }
    let (t0, end) = (p.t0(), p.end());
    let ts = p.time_scale();
    let single = ts
        .pieces()
        .iter()
        .any(|piece| matches!(*piece, Piece::Interval { lo, hi } if lo <= t0 && hi >= end));
    if !single {
        return Err(Error::OracleDomain(
            "the Volterra oracle needs J inside a single interval of the scale".into(),
        ));
    }
    let alpha = p.alpha();
    let z = p.weight();
    let f = p.rhs();
    let n = grid_n - 1;
    let step = (end - t0) / S::lit(n as f64);
    let nodes: Vec<S> = (0..=n)
        .map(|j| {
            if j == n {
                end
            } else {
                t0 + step * S::lit(j as f64)
            }
        })
        .collect();
    let u = nodes
        .iter()
        .map(|&s| z.call(s))
        .collect::<Result<Vec<_>>>()?;
    let zd = nodes
        .iter()
        .map(|&s| slope(z, s, t0, end))
        .collect::<Result<Vec<_>>>()?;
    let scale = S::one() / gamma(alpha);
    let ap1 = alpha + S::one();

    let mut y = vec![S::zero(); n + 1];
    let mut g = vec![S::zero(); n + 1];
    g[0] = f.call(nodes[0], S::zero())?;
    for m in 1..=n {
        let um = u[m];
        // weights w_j for g_j = f(s_j, y_j), j = 0..=m
        let mut w = vec![S::zero(); m + 1];
        for j in 0..m {
            let (aa, bb) = (um - u[j], um - u[j + 1]);
            let du = u[j + 1] - u[j];
            if !(du > S::zero()) {
                return Err(Error::NonMonotoneWeight {
                    t: nodes[j].as_f64(),
                });
            }
            let bb = bb.max(S::zero());
            let i0 = (aa.powf(alpha) - bb.powf(alpha)) / alpha;
            let i1 = aa * i0 - (aa.powf(ap1) - bb.powf(ap1)) / ap1;
            w[j] = w[j] + i0 - i1 / du;
            w[j + 1] = w[j + 1] + i1 / du;
        }
        let factor = zd[m] * scale;
        let known: S = (0..m).map(|j| w[j] * g[j]).sum::<S>() * factor;
        let mut ym = y[m - 1];
        for _ in 0..200 {
            let next = known + factor * w[m] * f.call(nodes[m], ym)?;
            let done = (next - ym).abs() <= S::lit(4.0) * S::epsilon() * next.abs().max(S::one());
            ym = next;
            if done {
                break;
            }
        }
        if !ym.is_finite() {
            return Err(Error::NonFiniteValue {
                context: "Volterra oracle",
                t: nodes[m].as_f64(),
            });
        }
        y[m] = ym;
        g[m] = f.call(nodes[m], ym)?;
    }
    let linked = vec![true; n];
    GridFunction::new(nodes, y, linked)
}

/// Finite-difference derivative of `z` at `s`, one-sided at the ends of
/// `[lo, hi]`.
fn slope<S, Z>(z: &Z, s: S, lo: S, hi: S) -> Result<S>
where
    S: Scalar,
    Z: UnaryFn<S> + ?Sized,
{
    let h = S::epsilon().cbrt() * s.abs().max(S::one());
    let two = S::lit(2.0);
    if s - h < lo {
        Ok(
            (-S::lit(3.0) * z.call(s)? + S::lit(4.0) * z.call(s + h)? - z.call(s + two * h)?)
                / (two * h),
        )
    } else if s + h > hi {
        Ok(
            (S::lit(3.0) * z.call(s)? - S::lit(4.0) * z.call(s - h)? + z.call(s - two * h)?)
                / (two * h),
        )
    } else {
        Ok((z.call(s + h)? - z.call(s - h)?) / (two * h))
    }
}
