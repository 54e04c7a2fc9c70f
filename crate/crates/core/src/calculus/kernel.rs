//! Weighted power-kernel integrals
//! `∫_a^t (z(t) − z(s))^e z^Δ(s) φ(s) Δs` with `e ∈ (−1, 0]`.
//!
//! On a gap `[s, σ(s))` the product `z^Δ(s) μ(s)` is `z(σ(s)) − z(s)`, so the
//! scattered part needs only values of `z`. On a continuous segment the
//! substitution `u = z(s)` gives `∫ (z(t) − u)^e φ(z⁻¹(u)) du` and the second
//! substitution `v = (z(t) − u)^(e+1)` removes the endpoint singularity.

use super::quadrature::{integrate_panels, QuadratureSpec};
use crate::error::{Error, Result};
use crate::func::UnaryFn;
use crate::scalar::{KahanSum, Scalar};
use crate::timescale::TimeScale;

/// Generalized kernel integral over `[a, t]`. `breaks` are extra panel
/// boundaries inside the continuous segments. `z` must be strictly
/// increasing on `T ∩ [a, t]`.
#[allow(clippy::too_many_arguments)]
pub fn kernel_integral<S, Z, P>(
    z: &Z,
    ts: &TimeScale<S>,
    a: S,
    t: S,
    exponent: S,
    phi: &P,
    breaks: &[S],
    q: &QuadratureSpec<S>,
) -> Result<S>
where
    S: Scalar,
    Z: UnaryFn<S> + ?Sized,
    P: UnaryFn<S> + ?Sized,
{
    q.validate()?;
    if !(exponent > -S::one() && exponent <= S::zero()) {
        return Err(Error::invalid(
            "calculus",
            format!("kernel exponent {exponent} must lie in (-1, 0]"),
        ));
    }
    let a = ts.snap(a)?;
    let t = ts.snap(t)?;
    if a > t {
        return Err(Error::invalid(
            "calculus",
            format!("integration limits [{a}, {t}] are reversed"),
        ));
    }
    if a == t {
        return Ok(S::zero());
    }
    let zt = z.call(t)?;

    let mut discrete = KahanSum::new();
    for p in ts.scattered_points(a, t)? {
        let zs = z.call(p.t)?;
        let zn = z.call(p.t + p.mu)?;
        if !(zn > zs) || !(zt > zs) {
            return Err(Error::NonMonotoneWeight { t: p.t.as_f64() });
        }
        let term = (zt - zs).powf(exponent) * (zn - zs) * phi.call(p.t)?;
        if !term.is_finite() {
            return Err(Error::NonFiniteValue {
                context: "kernel integrand",
                t: p.t.as_f64(),
            });
        }
        discrete.add(term);
    }

    let kappa = exponent + S::one();
    let root = S::one() / kappa;
    // (s_lo, s_hi, z(s_lo), z(s_hi)) for each continuous panel
    let mut brackets: Vec<(S, S, S, S)> = Vec::new();
    let mut panels = Vec::new();
    for (c, d) in ts.dense_segments(a, t)? {
        let mut edges = vec![c];
        edges.extend(breaks.iter().copied().filter(|&x| x > c && x < d));
        edges.push(d);
        edges.sort_by(|x, y| x.partial_cmp(y).expect("finite breaks"));
        edges.dedup();
        let mut zs = Vec::with_capacity(edges.len());
        for &e in &edges {
            zs.push(if e == t { zt } else { z.call(e)? });
        }
        for j in 0..edges.len() - 1 {
            if !(zs[j + 1] > zs[j]) || zs[j + 1] > zt {
                return Err(Error::NonMonotoneWeight {
                    t: edges[j].as_f64(),
                });
            }
            let v_hi = (zt - zs[j]).powf(kappa);
            let v_lo = (zt - zs[j + 1]).max(S::zero()).powf(kappa);
            panels.push((v_lo, v_hi, brackets.len()));
            brackets.push((edges[j], edges[j + 1], zs[j], zs[j + 1]));
        }
    }
    let continuous = if panels.is_empty() {
        S::zero()
    } else {
        let identity = z.is_identity();
        let est = integrate_panels(
            |v, tag| {
                let u = zt - v.powf(root);
                let s = if identity {
                    u
                } else {
                    let (s_lo, s_hi, z_lo, z_hi) = brackets[tag];
                    invert_increasing(z, u, s_lo, s_hi, z_lo, z_hi)?
                };
                phi.call(s)
            },
            &panels,
            q,
        )?;
        est.value / kappa
    };
    Ok(discrete.value() + continuous)
}

/// Solves `z(s) = u` for `s ∈ [s_lo, s_hi]` with `z` increasing, by the
/// Illinois variant of regula falsi. Values of `u` outside `[z_lo, z_hi]`
/// clamp to the bracket ends.
fn invert_increasing<S, Z>(z: &Z, u: S, s_lo: S, s_hi: S, z_lo: S, z_hi: S) -> Result<S>
where
    S: Scalar,
    Z: UnaryFn<S> + ?Sized,
{
    if u <= z_lo {
        return Ok(s_lo);
    }
    if u >= z_hi {
        return Ok(s_hi);
    }
    let (mut a, mut b) = (s_lo, s_hi);
    let (mut fa, mut fb) = (z_lo - u, z_hi - u);
    let mut side = 0i8;
    let mut c = a;
    let ftol = S::lit(4.0) * S::epsilon() * u.abs().max(S::min_positive_value());
    for _ in 0..200 {
        c = (a * fb - b * fa) / (fb - fa);
        if !(c > a && c < b) {
            c = (a + b) * S::lit(0.5);
        }
        let fc = z.call(c)? - u;
        if fc.abs() <= ftol {
            return Ok(c);
        }
        if fc > S::zero() {
            b = c;
            fb = fc;
            if side == 1 {
                fa = fa * S::lit(0.5);
            }
            side = 1;
        } else {
            a = c;
            fa = fc;
            if side == -1 {
                fb = fb * S::lit(0.5);
            }
            side = -1;
        }
        if b - a <= S::lit(4.0) * S::epsilon() * a.abs().max(b.abs()) {
            break;
        }
    }
    Ok(c)
}
