//! Globally adaptive Gauss–Kronrod (7/15) quadrature over a set of panels.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Accuracy settings for every integral computed by the crate.
///
/// `endpoint_exponent` is a hint that the integrand behaves like
/// `(b − s)^γ` near the right end `b`; with `γ < 0` the last continuous
/// segment is integrated in the graded variable `u = (b − s)^(γ+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec<S> {
    pub rel_tol: S,
    pub abs_tol: S,
    pub max_subdivisions: usize,
    pub endpoint_exponent: S,
}

impl<S: Scalar> Default for QuadratureSpec<S> {
    fn default() -> Self {
        let floor = S::epsilon() * S::lit(100.0);
        Self {
            rel_tol: S::lit(1e-8).max(floor),
            abs_tol: S::lit(1e-10).max(floor),
            max_subdivisions: 2000,
            endpoint_exponent: S::zero(),
        }
    }
}

impl<S: Scalar> QuadratureSpec<S> {
    pub fn with_endpoint_exponent(mut self, gamma: S) -> Self {
        self.endpoint_exponent = gamma;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > S::zero()) || !(self.abs_tol > S::zero()) {
            return Err(Error::InvalidQuadrature(format!(
                "tolerances must be positive (rel {}, abs {})",
                self.rel_tol, self.abs_tol
            )));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidQuadrature(
                "max_subdivisions must be at least 1".into(),
            ));
        }
        let g = self.endpoint_exponent;
        if !(g > -S::one() && g <= S::zero()) {
            return Err(Error::InvalidQuadrature(format!(
                "endpoint exponent {g} must lie in (-1, 0]"
            )));
        }
        Ok(())
    }

    /// Settings for integrals whose values get differenced by a derivative.
    pub(crate) fn tightened(&self) -> Self {
        let floor = S::epsilon() * S::lit(1e3);
        Self {
            rel_tol: (self.rel_tol * S::lit(1e-4)).max(floor),
            abs_tol: (self.abs_tol * S::lit(1e-4)).max(floor * S::lit(0.1)),
            max_subdivisions: self.max_subdivisions.max(4000),
            endpoint_exponent: self.endpoint_exponent,
        }
    }

    /// Settings for outer integrals over numerically noisy integrands.
    pub(crate) fn relaxed(&self, rel: f64) -> Self {
        Self {
            rel_tol: self.rel_tol.max(S::lit(rel)),
            abs_tol: self.abs_tol.max(S::lit(rel * 1e-2)),
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<S> {
    pub value: S,
    pub error: S,
    pub evaluations: usize,
}

struct Panel<S> {
    lo: S,
    hi: S,
    tag: usize,
    value: S,
    error: S,
}

fn kronrod15<S, F>(f: &mut F, lo: S, hi: S, tag: usize) -> Result<(S, S)>
where
    S: Scalar,
    F: FnMut(S, usize) -> Result<S>,
{
    let centre = (lo + hi) * S::lit(0.5);
    let half = (hi - lo) * S::lit(0.5);
    let mut eval = |x: S| -> Result<S> {
        let v = f(x, tag)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFiniteValue {
                context: "calculus integrand",
                t: x.as_f64(),
            })
        }
    };
    let fc = eval(centre)?;
    let mut res_g = fc * S::lit(WG[3]);
    let mut res_k = fc * S::lit(WGK[7]);
    let mut res_abs = res_k.abs();
    let mut fv1 = [S::zero(); 7];
    let mut fv2 = [S::zero(); 7];
    for (j, &wg) in WG.iter().take(3).enumerate() {
        let k = 2 * j + 1;
        let dx = half * S::lit(XGK[k]);
        let (f1, f2) = (eval(centre - dx)?, eval(centre + dx)?);
        fv1[k] = f1;
        fv2[k] = f2;
        res_g = res_g + S::lit(wg) * (f1 + f2);
        res_k = res_k + S::lit(WGK[k]) * (f1 + f2);
        res_abs = res_abs + S::lit(WGK[k]) * (f1.abs() + f2.abs());
    }
    for j in 0..4 {
        let k = 2 * j;
        let dx = half * S::lit(XGK[k]);
        let (f1, f2) = (eval(centre - dx)?, eval(centre + dx)?);
        fv1[k] = f1;
        fv2[k] = f2;
        res_k = res_k + S::lit(WGK[k]) * (f1 + f2);
        res_abs = res_abs + S::lit(WGK[k]) * (f1.abs() + f2.abs());
    }
    let mean = res_k * S::lit(0.5);
    let mut res_asc = S::lit(WGK[7]) * (fc - mean).abs();
    for k in 0..7 {
        res_asc = res_asc + S::lit(WGK[k]) * ((fv1[k] - mean).abs() + (fv2[k] - mean).abs());
    }
    let width = half.abs();
    let value = res_k * half;
    res_abs = res_abs * width;
    res_asc = res_asc * width;
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != S::zero() && error != S::zero() {
        let ratio = (S::lit(200.0) * error / res_asc).powf(S::lit(1.5));
        error = res_asc * ratio.min(S::one());
    }
    let floor = S::lit(50.0) * S::epsilon() * res_abs;
    if res_abs > S::min_positive_value() / (S::lit(50.0) * S::epsilon()) {
        error = error.max(floor);
    }
    Ok((value, error))
}

/// Integrates `f` over a union of panels `(lo, hi, tag)`; `f` receives the
/// abscissa and the tag of the panel it belongs to. Panels are refined by
/// bisection, largest error first, until the summed error estimate meets
/// `max(abs_tol, rel_tol |I|)`.
pub(crate) fn integrate_panels<S, F>(
    mut f: F,
    panels: &[(S, S, usize)],
    spec: &QuadratureSpec<S>,
) -> Result<Estimate<S>>
where
    S: Scalar,
    F: FnMut(S, usize) -> Result<S>,
{
    let mut work: Vec<Panel<S>> = Vec::with_capacity(panels.len() * 4);
    for &(lo, hi, tag) in panels {
        if hi > lo {
            let (value, error) = kronrod15(&mut f, lo, hi, tag)?;
            work.push(Panel {
                lo,
                hi,
                tag,
                value,
                error,
            });
        }
    }
    let mut subdivisions = 0;
    loop {
        let total: S = work.iter().map(|p| p.value).sum();
        let error: S = work.iter().map(|p| p.error).sum();
        let tol = spec.abs_tol.max(spec.rel_tol * total.abs());
        let evaluations = 15 * (work.len() + subdivisions);
        if error <= tol {
            return Ok(Estimate {
                value: total,
                error,
                evaluations,
            });
        }
        let min_width = |p: &Panel<S>| {
            S::lit(1e3) * S::epsilon() * p.lo.abs().max(p.hi.abs()).max(S::min_positive_value())
        };
        let worst = work
            .iter()
            .enumerate()
            .filter(|(_, p)| p.hi - p.lo > min_width(p))
            .max_by(|a, b| a.1.error.partial_cmp(&b.1.error).expect("finite errors"))
            .map(|(i, _)| i);
        let Some(i) = worst.filter(|_| subdivisions < spec.max_subdivisions) else {
            let lo = work.iter().map(|p| p.lo).fold(S::infinity(), S::min);
            let hi = work.iter().map(|p| p.hi).fold(S::neg_infinity(), S::max);
            return Err(Error::QuadratureFailure {
                lo: lo.as_f64(),
                hi: hi.as_f64(),
                estimate: total.as_f64(),
                error: error.as_f64(),
                subdivisions,
            });
        };
        let Panel { lo, hi, tag, .. } = work.swap_remove(i);
        let mid = (lo + hi) * S::lit(0.5);
        for (a, b) in [(lo, mid), (mid, hi)] {
            let (value, error) = kronrod15(&mut f, a, b, tag)?;
            work.push(Panel {
                lo: a,
                hi: b,
                tag,
                value,
                error,
            });
        }
        subdivisions += 1;
    }
}

/// Integrates `f` over `[lo, hi]`.
pub fn integrate<S, F>(mut f: F, lo: S, hi: S, spec: &QuadratureSpec<S>) -> Result<Estimate<S>>
where
    S: Scalar,
    F: FnMut(S) -> Result<S>,
{
    spec.validate()?;
    if hi < lo {
        let est = integrate(f, hi, lo, spec)?;
        return Ok(Estimate {
            value: -est.value,
            ..est
        });
    }
    integrate_panels(|x, _| f(x), &[(lo, hi, 0)], spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let q = QuadratureSpec::default();
        let est = integrate(|x: f64| Ok(x.powi(5) - 2.0 * x), 0.0, 2.0, &q).unwrap();
        assert!((est.value - (64.0 / 6.0 - 4.0)).abs() < 1e-13);
    }

    #[test]
    fn smooth_and_endpoint_singular() {
        let q = QuadratureSpec::default();
        let est = integrate(|x: f64| Ok(x.sin()), 0.0, std::f64::consts::PI, &q).unwrap();
        assert!((est.value - 2.0).abs() < 1e-12);
        let est = integrate(|x: f64| Ok(1.0 / x.sqrt()), 0.0, 1.0, &q).unwrap();
        assert!((est.value - 2.0).abs() < 1e-8);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let q = QuadratureSpec::default();
        let est = integrate(|x: f64| Ok(x), 1.0, 0.0, &q).unwrap();
        assert!((est.value + 0.5).abs() < 1e-15);
    }

    #[test]
    fn reports_failure_when_budget_is_exhausted() {
        let q = QuadratureSpec {
            max_subdivisions: 3,
            ..QuadratureSpec::default()
        };
        let err = integrate(|x: f64| Ok((50.0 * x).sin().abs()), 0.0, 10.0, &q).unwrap_err();
        assert!(matches!(
            err,
            Error::QuadratureFailure {
                subdivisions: 3,
                ..
            }
        ));
    }

    #[test]
    fn rejects_bad_settings() {
        let q = QuadratureSpec {
            rel_tol: 0.0,
            ..QuadratureSpec::<f64>::default()
        };
        assert!(matches!(q.validate(), Err(Error::InvalidQuadrature(_))));
        let q = QuadratureSpec::<f64>::default().with_endpoint_exponent(-1.0);
        assert!(matches!(q.validate(), Err(Error::InvalidQuadrature(_))));
    }

    #[test]
    fn non_finite_integrand_is_an_error() {
        let q = QuadratureSpec::default();
        let err = integrate(|_x: f64| Ok(f64::NAN), 0.0, 1.0, &q).unwrap_err();
        assert!(matches!(err, Error::NonFiniteValue { .. }));
    }
}
