//! Riemann–Liouville fractional integrals and derivatives on a time scale,
//! classical (kernel `(t − s)^(α−1)`) and with respect to an increasing
//! weight `z` (kernel `(z(t) − z(s))^(α−1) z^Δ(s)`).
//!
//! ```
//! use tsfrac::fracops::{frac_integral, FracOpSpec};
//! use tsfrac::{QuadratureSpec, TimeScale};
//!
//! let ts = TimeScale::interval(0.0, 4.0).unwrap();
//! let spec = FracOpSpec::classical(0.5, 0.0, ts, QuadratureSpec::default()).unwrap();
//! let v = frac_integral(&spec, &|_t: f64| 1.0, 1.0).unwrap();
//! assert!((v - 2.0 / std::f64::consts::PI.sqrt()).abs() < 1e-9);
//! ```

mod grid;

pub(crate) use grid::link_nodes;
pub use grid::GridFunction;

use crate::calculus::{
    delta_derivative, delta_derivative_above, delta_integral, kernel_integral, QuadratureSpec,
};
use crate::error::{Error, Result};
use crate::exprlang::gamma;
use crate::func::{Borrowed, Fallible, Identity, UnaryFn};
use crate::scalar::Scalar;
use crate::timescale::TimeScale;

/// Smallest admissible `|z^Δ|`.
pub(crate) const WEIGHT_FLOOR: f64 = 1e-12;

/// Order, base point, weight, scale and quadrature settings shared by the
/// operators.
#[derive(Debug, Clone)]
pub struct FracOpSpec<S, Z = Identity> {
    alpha: S,
    a: S,
    z: Z,
    ts: TimeScale<S>,
    quad: QuadratureSpec<S>,
}

impl<S: Scalar> FracOpSpec<S, Identity> {
    /// Spec for the classical operators (`z = t`).
    pub fn classical(alpha: S, a: S, ts: TimeScale<S>, quad: QuadratureSpec<S>) -> Result<Self> {
        Self::new(alpha, a, Identity, ts, quad)
    }
}

impl<S: Scalar, Z: UnaryFn<S>> FracOpSpec<S, Z> {
    /// Validates `0 < α < 1`, `a ∈ T`, the quadrature settings and the
    /// weight: `z^Δ` sampled at every scattered point and every continuous
    /// segment midpoint of `T ∩ [a, max T]` must exceed `1e-12`.
    pub fn new(alpha: S, a: S, z: Z, ts: TimeScale<S>, quad: QuadratureSpec<S>) -> Result<Self> {
        validate_order(alpha)?;
        quad.validate()?;
        let a = ts.snap(a)?;
        if !z.is_identity() {
            validate_weight(&z, &ts, a, ts.max())?;
        }
        Ok(Self {
            alpha,
            a,
            z,
            ts,
            quad,
        })
    }

    /// Spec without the weight validation, for callers that have already
    /// validated `z` on the range they use.
    pub(crate) fn prevalidated(
        alpha: S,
        a: S,
        z: Z,
        ts: TimeScale<S>,
        quad: QuadratureSpec<S>,
    ) -> Self {
        Self {
            alpha,
            a,
            z,
            ts,
            quad,
        }
    }

    pub fn alpha(&self) -> S {
        self.alpha
    }

    pub fn base(&self) -> S {
        self.a
    }

    pub fn weight(&self) -> &Z {
        &self.z
    }

    pub fn time_scale(&self) -> &TimeScale<S> {
        &self.ts
    }

    pub fn quadrature(&self) -> &QuadratureSpec<S> {
        &self.quad
    }

    /// The same spec with another order.
    pub fn with_alpha(&self, alpha: S) -> Result<Self>
    where
        Z: Clone,
    {
        validate_order(alpha)?;
        Ok(Self {
            alpha,
            ..self.clone()
        })
    }

    fn require_identity(&self, op: &str) -> Result<()> {
        if self.z.is_identity() {
            Ok(())
        } else {
            Err(Error::invalid(
                "fracops",
                format!("{op} is the classical operator and needs the identity weight"),
            ))
        }
    }

    fn upper_limit(&self, t: S) -> Result<S> {
        let t = self.ts.snap(t)?;
        if t < self.a {
            return Err(Error::invalid(
                "fracops",
                format!("t = {t} lies before the base point {}", self.a),
            ));
        }
        Ok(t)
    }

    fn derivative_point(&self, t: S) -> Result<S> {
        let t = self.upper_limit(t)?;
        if t == self.a && self.ts.graininess(t)? == S::zero() {
            return Err(Error::invalid(
                "fracops",
                format!("the derivative at the right-dense base point {t} is not defined"),
            ));
        }
        Ok(t)
    }
}

fn validate_order<S: Scalar>(alpha: S) -> Result<()> {
    if alpha > S::zero() && alpha < S::one() {
        Ok(())
    } else {
        Err(Error::InvalidOrder {
            alpha: alpha.as_f64(),
        })
    }
}

/// Sampled positivity check of `z^Δ` on `T ∩ [a, b]`.
pub(crate) fn validate_weight<S, Z>(z: &Z, ts: &TimeScale<S>, a: S, b: S) -> Result<()>
where
    S: Scalar,
    Z: UnaryFn<S> + ?Sized,
{
    let floor = S::lit(WEIGHT_FLOOR);
    let check = |t: S, d: S| -> Result<()> {
        if !d.is_finite() {
            Err(Error::NonFiniteValue {
                context: "weight derivative",
                t: t.as_f64(),
            })
        } else if d < -floor {
            Err(Error::NonMonotoneWeight { t: t.as_f64() })
        } else if d <= floor {
            Err(Error::ZeroWeightDerivative {
                t: t.as_f64(),
                value: d.as_f64(),
            })
        } else {
            Ok(())
        }
    };
    for p in ts.scattered_points(a, b)? {
        let d = (z.call(p.sigma)? - z.call(p.t)?) / p.mu;
        check(p.t, d)?;
    }
    for (c, d) in ts.dense_segments(a, b)? {
        let mid = (c + d) * S::lit(0.5);
        check(mid, delta_derivative(z, ts, mid)?)?;
    }
    Ok(())
}

/// Classical fractional integral
/// `(1/Γ(α)) ∫_a^t (t − s)^(α−1) h(s) Δs`.
pub fn frac_integral<S, Z, H>(spec: &FracOpSpec<S, Z>, h: &H, t: S) -> Result<S>
where
    S: Scalar,
    Z: UnaryFn<S>,
    H: UnaryFn<S> + ?Sized,
{
    spec.require_identity("frac_integral")?;
    let t = spec.upper_limit(t)?;
    let value = classical_kernel(spec, h, t, spec.alpha - S::one(), &spec.quad)?;
    Ok(value / gamma(spec.alpha))
}

/// `∫_a^t (t − s)^e h(s) Δs` through the Δ-integral with a graded
/// endpoint.
fn classical_kernel<S, Z, H>(
    spec: &FracOpSpec<S, Z>,
    h: &H,
    t: S,
    exponent: S,
    quad: &QuadratureSpec<S>,
) -> Result<S>
where
    S: Scalar,
    H: UnaryFn<S> + ?Sized,
{
    let integrand = Fallible(|s: S| -> Result<S> { Ok((t - s).powf(exponent) * h.call(s)?) });
    delta_integral(
        &integrand,
        &spec.ts,
        spec.a,
        t,
        &quad.with_endpoint_exponent(exponent),
    )
}

/// Classical Riemann–Liouville derivative
/// `(1/Γ(1−α)) [∫_a^t (t − s)^(−α) h(s) Δs]^Δ`.
pub fn frac_derivative<S, Z, H>(spec: &FracOpSpec<S, Z>, h: &H, t: S) -> Result<S>
where
    S: Scalar,
    Z: UnaryFn<S>,
    H: UnaryFn<S> + ?Sized,
{
    spec.require_identity("frac_derivative")?;
    let t = spec.derivative_point(t)?;
    let inner = spec.quad.tightened();
    let w = Fallible(|tau: S| classical_kernel(spec, h, tau, -spec.alpha, &inner));
    let dw = delta_derivative_above(&w, &spec.ts, t, spec.a)?;
    Ok(dw / gamma(S::one() - spec.alpha))
}

/// Generalized fractional integral
/// `(1/Γ(α)) ∫_a^t (z(t) − z(s))^(α−1) z^Δ(s) h(s) Δs`.
pub fn gen_frac_integral<S, Z, H>(spec: &FracOpSpec<S, Z>, h: &H, t: S) -> Result<S>
where
    S: Scalar,
    Z: UnaryFn<S>,
    H: UnaryFn<S> + ?Sized,
{
    gen_integral_of_order(spec, h, spec.alpha, t)
}

/// Generalized integral of any order in `(0, 1]` under the scale, base
/// point and weight of `spec`.
fn gen_integral_of_order<S, Z, H>(spec: &FracOpSpec<S, Z>, h: &H, order: S, t: S) -> Result<S>
where
    S: Scalar,
    Z: UnaryFn<S>,
    H: UnaryFn<S> + ?Sized,
{
    let t = spec.upper_limit(t)?;
    let value = kernel_integral(
        &spec.z,
        &spec.ts,
        spec.a,
        t,
        order - S::one(),
        h,
        &[],
        &spec.quad,
    )?;
    Ok(value / gamma(order))
}

/// Generalized Riemann–Liouville derivative
/// `(1/Γ(1−α)) (1/z^Δ(t)) [∫_a^t (z(t) − z(s))^(−α) z^Δ(s) h(s) Δs]^Δ`.
pub fn gen_frac_derivative<S, Z, H>(spec: &FracOpSpec<S, Z>, h: &H, t: S) -> Result<S>
where
    S: Scalar,
    Z: UnaryFn<S>,
    H: UnaryFn<S> + ?Sized,
{
    let t = spec.derivative_point(t)?;
    let zd = delta_derivative(&spec.z, &spec.ts, t)?;
    if zd.abs() <= S::lit(WEIGHT_FLOOR) {
        return Err(Error::ZeroWeightDerivative {
            t: t.as_f64(),
            value: zd.as_f64(),
        });
    }
    let inner = spec.quad.tightened();
    let v = Fallible(|tau: S| {
        kernel_integral(&spec.z, &spec.ts, spec.a, tau, -spec.alpha, h, &[], &inner)
    });
    let dv = delta_derivative_above(&v, &spec.ts, t, spec.a)?;
    Ok(dv / zd / gamma(S::one() - spec.alpha))
}

/// `I^α[I^β h](t) − I^(α+β) h(t)` for the generalized integrals of `spec`.
/// The orders must satisfy `α, β, α + β ∈ (0, 1]`.
pub fn semigroup_defect<S, Z, H>(
    spec: &FracOpSpec<S, Z>,
    h: &H,
    alpha: S,
    beta: S,
    t: S,
) -> Result<S>
where
    S: Scalar,
    Z: UnaryFn<S>,
    H: UnaryFn<S> + ?Sized,
{
    let in_range = |x: S| x > S::zero() && x <= S::one();
    if !in_range(alpha) || !in_range(beta) || !in_range(alpha + beta) {
        return Err(Error::invalid(
            "fracops",
            format!("semigroup orders {alpha}, {beta} and their sum must lie in (0, 1]"),
        ));
    }
    let t = spec.upper_limit(t)?;
    if t == spec.a {
        return Ok(S::zero());
    }
    let inner_spec = FracOpSpec {
        quad: spec.quad.tightened(),
        ..shallow(spec)
    };
    let inner = Fallible(|s: S| gen_integral_of_order(&inner_spec, h, beta, s));
    let nested = gen_integral_of_order(spec, &inner, alpha, t)?;
    let direct = gen_integral_of_order(spec, h, alpha + beta, t)?;
    Ok(nested - direct)
}

/// Borrowing copy of a spec, so nested operators can change settings
/// without cloning the weight.
fn shallow<S: Scalar, Z: UnaryFn<S>>(spec: &FracOpSpec<S, Z>) -> FracOpSpec<S, Borrowed<'_, Z>> {
    FracOpSpec {
        alpha: spec.alpha,
        a: spec.a,
        z: Borrowed(&spec.z),
        ts: spec.ts.clone(),
        quad: spec.quad,
    }
}
