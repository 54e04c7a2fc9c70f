mod common;

use common::{arb_discrete_scale, arb_nontrivial_scale, ordered_points};
use proptest::prelude::*;
use tsfrac::fracops::{frac_derivative, frac_integral, gen_frac_derivative, gen_frac_integral};
use tsfrac::oracle::{discrete_frac_sum, rl_power_rule};
use tsfrac::{ExprFn, FracOpSpec, Identity, QuadratureSpec, TimeScale};

fn q() -> QuadratureSpec<f64> {
    QuadratureSpec::default()
}

fn tol(scale: f64) -> f64 {
    let q = q();
    q.abs_tol.max(q.rel_tol * scale.abs())
}

fn smooth(c: [f64; 3]) -> impl Fn(f64) -> f64 {
    move |t: f64| c[0] + c[1] * t + c[2] * (t / 2.0).cos()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn identity_weight_reduces_integral(
        ts in arb_nontrivial_scale(),
        u in 0.0..=1.0f64, v in 0.0..=1.0f64,
        alpha in 0.1..0.9f64,
        c in prop::array::uniform3(-2.0..2.0f64),
    ) {
        let (a, t) = ordered_points(&ts, u, v);
        let h = smooth(c);
        let classical = FracOpSpec::classical(alpha, a, ts.clone(), q()).unwrap();
        let expr = FracOpSpec::new(alpha, a, ExprFn::of_t("t").unwrap(), ts, q()).unwrap();
        let x = frac_integral(&classical, &h, t).unwrap();
        let y = gen_frac_integral(&expr, &h, t).unwrap();
        prop_assert!((x - y).abs() <= 2.0 * (tol(x) + tol(y)), "{} vs {}", x, y);
    }

    #[test]
    fn identity_weight_reduces_derivative(
        ts in arb_nontrivial_scale(),
        u in 0.0..=1.0f64, v in 0.0..=1.0f64,
        alpha in 0.1..0.9f64,
        c in prop::array::uniform3(-2.0..2.0f64),
    ) {
        let (a, t) = ordered_points(&ts, u, v);
        let h = smooth(c);
        let classical = FracOpSpec::classical(alpha, a, ts.clone(), q()).unwrap();
        let expr = FracOpSpec::new(alpha, a, ExprFn::of_t("t").unwrap(), ts, q()).unwrap();
        // both fail together (t ∉ T^κ, t = a dense) or agree
        match (frac_derivative(&classical, &h, t), gen_frac_derivative(&expr, &h, t)) {
            (Ok(x), Ok(y)) => prop_assert!((x - y).abs() <= 1e-6 * x.abs().max(1.0), "{} vs {}", x, y),
            (Err(_), Err(_)) => {}
            (x, y) => prop_assert!(false, "{:?} vs {:?}", x, y),
        }
    }

    #[test]
    fn positivity(
        ts in arb_nontrivial_scale(),
        u in 0.0..=1.0f64, v in 0.0..=1.0f64,
        alpha in 0.1..0.9f64,
        c in prop::array::uniform3(0.0..2.0f64),
        k in 0.2..2.0f64,
    ) {
        let (a, t) = ordered_points(&ts, u, v);
        let h = move |s: f64| c[0] + c[1] * (s * c[2]).sin().abs();
        let z = move |s: f64| (k * s).exp();
        let spec = FracOpSpec::new(alpha, a, z, ts, q()).unwrap();
        prop_assert!(gen_frac_integral(&spec, &h, t).unwrap() >= 0.0);
    }

    #[test]
    fn linearity(
        ts in arb_nontrivial_scale(),
        u in 0.0..=1.0f64, v in 0.0..=1.0f64,
        alpha in 0.1..0.9f64,
        c in prop::array::uniform3(-2.0..2.0f64),
        d in prop::array::uniform3(-2.0..2.0f64),
        x in -3.0..3.0f64,
    ) {
        let (a, t) = ordered_points(&ts, u, v);
        let (f, g) = (smooth(c), smooth(d));
        let combo = |s: f64| x * f(s) + g(s);
        let classical = FracOpSpec::classical(alpha, a, ts.clone(), q()).unwrap();
        let lhs = frac_integral(&classical, &combo, t).unwrap();
        let fi = frac_integral(&classical, &f, t).unwrap();
        let gi = frac_integral(&classical, &g, t).unwrap();
        prop_assert!((lhs - x * fi - gi).abs() <= 2.0 * (x.abs() * tol(fi) + tol(gi)) + tol(lhs));

        let weighted = FracOpSpec::new(alpha, a, |s: f64| s + s * s * s / 30.0, ts, q()).unwrap();
        let lhs = gen_frac_integral(&weighted, &combo, t).unwrap();
        let fi = gen_frac_integral(&weighted, &f, t).unwrap();
        let gi = gen_frac_integral(&weighted, &g, t).unwrap();
        prop_assert!((lhs - x * fi - gi).abs() <= 2.0 * (x.abs() * tol(fi) + tol(gi)) + tol(lhs));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn discrete_exactness(
        ts in arb_discrete_scale(),
        u in 0.0..=1.0f64, v in 0.0..=1.0f64,
        alpha in 0.05..0.95f64,
        c in prop::array::uniform3(-2.0..2.0f64),
    ) {
        let (a, t) = ordered_points(&ts, u, v);
        let h = smooth(c);
        let spec = FracOpSpec::classical(alpha, a, ts.clone(), q()).unwrap();
        let value = frac_integral(&spec, &h, t).unwrap();
        let oracle = discrete_frac_sum(&ts, alpha, &Identity, &h, a, t).unwrap().value;
        prop_assert!((value - oracle).abs() <= 1e-12, "{} vs {}", value, oracle);

        let z = |s: f64| s + (s / 4.0).exp();
        let spec = FracOpSpec::new(alpha, a, z, ts.clone(), q()).unwrap();
        let value = gen_frac_integral(&spec, &h, t).unwrap();
        let oracle = discrete_frac_sum(&ts, alpha, &z, &h, a, t).unwrap().value;
        prop_assert!((value - oracle).abs() <= 1e-12 * oracle.abs().max(1.0), "{} vs {}", value, oracle);
    }
}

#[test]
fn power_rule_on_the_reals() {
    let ts = TimeScale::interval(0.0, 2.0).unwrap();
    for alpha in [0.25, 0.5, 0.75] {
        let spec = FracOpSpec::classical(alpha, 0.0, ts.clone(), q()).unwrap();
        for nu in [0.0, 1.0, 2.0, 0.5] {
            for t in [0.3, 1.0, 2.0] {
                let h = move |s: f64| s.powf(nu);
                let v = frac_integral(&spec, &h, t).unwrap();
                let exact = rl_power_rule(alpha, nu, t).unwrap().value;
                assert!(
                    (v - exact).abs() <= 1e-6 * exact,
                    "alpha {alpha} nu {nu} t {t}: {v} vs {exact}"
                );
            }
        }
    }
}

#[test]
fn weighted_closed_forms() {
    let ts = TimeScale::interval(0.0, 2.0).unwrap();
    let one = |_s: f64| 1.0;
    for src in ["t", "t^2", "exp(t)"] {
        let z = ExprFn::of_t(src).unwrap();
        for alpha in [0.25, 0.5, 0.75] {
            let spec = FracOpSpec::new(alpha, 0.0, z.clone(), ts.clone(), q()).unwrap();
            for t in [0.5, 1.0, 2.0] {
                let za: f64 = z.eval(&[0.0]).unwrap();
                let zt: f64 = z.eval(&[t]).unwrap();
                let exact = (zt - za).powf(alpha) / tsfrac::gamma(alpha + 1.0);
                let v = gen_frac_integral(&spec, &one, t).unwrap();
                assert!(
                    (v - exact).abs() <= 1e-6 * exact,
                    "{src} {alpha} {t}: {v} vs {exact}"
                );
            }
        }
    }
}

#[test]
fn single_precision_instantiation() {
    let ts = TimeScale::<f32>::interval(0.0, 2.0).unwrap();
    let spec = FracOpSpec::classical(0.5f32, 0.0, ts, QuadratureSpec::default()).unwrap();
    let v = frac_integral(&spec, &|_s: f32| 1.0f32, 1.0).unwrap();
    assert!((v - 2.0 / std::f32::consts::PI.sqrt()).abs() < 1e-5);
}
