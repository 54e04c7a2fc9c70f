mod common;

use common::{arb_discrete_scale, arb_nontrivial_scale, ordered_points};
use common::{quad as q, smooth as poly};
use proptest::prelude::*;
use tsfrac::calculus::{delta_derivative, delta_integral};
use tsfrac::{Fallible, Result, TimeScale};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn linearity(
        ts in arb_nontrivial_scale(),
        u in 0.0..=1.0f64, v in 0.0..=1.0f64,
        c in prop::array::uniform3(-2.0..2.0f64),
        d in prop::array::uniform3(-2.0..2.0f64),
        (x, y) in (-3.0..3.0f64, -3.0..3.0f64),
    ) {
        common::linearity(&ts, u, v, c, d, x, y)?;
    }

    #[test]
    fn additivity(
        ts in arb_nontrivial_scale(),
        u in 0.0..=1.0f64, v in 0.0..=1.0f64, w in 0.0..=1.0f64,
        c in prop::array::uniform3(-2.0..2.0f64),
    ) {
        common::additivity(&ts, u, v, w, c)?;
    }

    #[test]
    fn split_identity(
        ts in arb_nontrivial_scale(),
        u in 0.0..=1.0f64, v in 0.0..=1.0f64,
        c in prop::array::uniform3(-2.0..2.0f64),
    ) {
        common::split_identity(&ts, u, v, c)?;
    }

    #[test]
    fn extension_bound(
        ts in arb_nontrivial_scale(),
        u in 0.0..=1.0f64, v in 0.0..=1.0f64,
        c0 in -2.0..2.0f64, c1 in 0.0..2.0f64, c3 in 0.0..0.5f64,
    ) {
        common::extension_bound(&ts, u, v, c0, c1, c3)?;
    }

    #[test]
    fn discrete_integrals_are_exact_sums(
        ts in arb_discrete_scale(),
        u in 0.0..=1.0f64, v in 0.0..=1.0f64,
        c in prop::array::uniform3(-2.0..2.0f64),
    ) {
        let (a, b) = ordered_points(&ts, u, v);
        let f = poly(c);
        let mut exact = 0.0;
        let mut s = a;
        while s < b {
            let next = ts.sigma(s).unwrap();
            exact += f(s) * (next - s);
            s = next;
        }
        let value = delta_integral(&f, &ts, a, b, &q()).unwrap();
        prop_assert!((value - exact).abs() <= 1e-12, "{} vs {}", value, exact);
    }

    #[test]
    fn dense_derivative_matches_central_differences(
        t in 0.1..3.9f64,
        c in prop::array::uniform3(-2.0..2.0f64),
    ) {
        let ts = TimeScale::interval(0.0, 4.0).unwrap();
        let f = move |x: f64| c[0] * x.exp() + c[1] * x * x + c[2] * x.sin() + 1.0;
        let h = 1e-4;
        let central = (f(t + h) - f(t - h)) / (2.0 * h);
        let d = delta_derivative(&f, &ts, t).unwrap();
        prop_assert!((d - central).abs() <= 1e-6 * central.abs().max(1.0), "{} vs {}", d, central);
    }

    #[test]
    fn scattered_derivative_is_a_forward_difference(
        ts in arb_discrete_scale(),
        u in 0.0..1.0f64,
        c in prop::array::uniform3(-2.0..2.0f64),
    ) {
        let f = poly(c);
        let t = common::point_at(&ts, u);
        prop_assume!(t < ts.max());
        let sigma = ts.sigma(t).unwrap();
        let d = delta_derivative(&f, &ts, t).unwrap();
        prop_assert_eq!(d, (f(sigma) - f(t)) / (sigma - t));
    }
}

#[test]
fn fallible_integrand_errors_surface() {
    let ts = TimeScale::interval(0.0, 1.0).unwrap();
    let f = Fallible(|t: f64| -> Result<f64> { Ok(1.0 / (t - 0.5)) });
    assert!(delta_integral(&f, &ts, 0.0, 1.0, &q()).is_err());
}
