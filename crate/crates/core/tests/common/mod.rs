#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use tsfrac::calculus::{delta_integral, extend_to_reals, split_identity_check};
use tsfrac::solver::solve_picard;
use tsfrac::{IVProblem, Identity, Piece, PointClass, QuadratureSpec, SolverConfig, TimeScale};

pub type CheckResult = Result<(), TestCaseError>;

/// Raw pieces on a 1/16 lattice of [-8, 8]; overlapping pieces are merged
/// by canonicalization.
pub fn arb_pieces() -> impl Strategy<Value = Vec<Piece<f64>>> {
    prop::collection::vec((any::<bool>(), -128i32..128, 1i32..48), 1..8).prop_map(|raw| {
        raw.into_iter()
            .map(|(interval, lo, len)| {
                let lo = f64::from(lo) / 16.0;
                if interval {
                    Piece::Interval {
                        lo,
                        hi: lo + f64::from(len) / 16.0,
                    }
                } else {
                    Piece::Point { x: lo }
                }
            })
            .collect()
    })
}

pub fn arb_scale() -> impl Strategy<Value = TimeScale<f64>> {
    arb_pieces().prop_map(|p| TimeScale::canonicalize(p).unwrap())
}

/// Scales with at least two points.
pub fn arb_nontrivial_scale() -> impl Strategy<Value = TimeScale<f64>> {
    arb_scale().prop_filter("needs two points", |ts| ts.max() > ts.min())
}

/// Finite point sets with at least two points.
pub fn arb_discrete_scale() -> impl Strategy<Value = TimeScale<f64>> {
    prop::collection::btree_set(-64i32..64, 2..14)
        .prop_map(|xs| TimeScale::points(xs.into_iter().map(|x| f64::from(x) / 8.0)).unwrap())
}

/// A point of the scale picked by the fraction `u ∈ [0, 1]` of its span.
pub fn point_at(ts: &TimeScale<f64>, u: f64) -> f64 {
    let x = ts.min() + u * (ts.max() - ts.min());
    ts.floor_point(x).unwrap()
}

/// An ordered pair of scale points.
pub fn ordered_points(ts: &TimeScale<f64>, u: f64, v: f64) -> (f64, f64) {
    let (a, b) = (point_at(ts, u.min(v)), point_at(ts, u.max(v)));
    (a.min(b), a.max(b))
}

pub fn quad() -> QuadratureSpec<f64> {
    QuadratureSpec::default()
}

/// Tolerance of one integral whose value is about `scale`.
pub fn tol(scale: f64) -> f64 {
    let q = quad();
    q.abs_tol.max(q.rel_tol * scale.abs())
}

pub fn smooth(c: [f64; 3]) -> impl Fn(f64) -> f64 {
    move |t: f64| c[0] + c[1] * t + c[2] * (t / 3.0).sin()
}

pub fn canonical_idempotent(raw: Vec<Piece<f64>>) -> CheckResult {
    let once = TimeScale::canonicalize(raw).unwrap();
    let twice = TimeScale::canonicalize(once.pieces().to_vec()).unwrap();
    prop_assert_eq!(once.pieces(), twice.pieces());
    for w in once.pieces().windows(2) {
        prop_assert!(w[0].hi() < w[1].lo());
    }
    Ok(())
}

pub fn jump_operators(ts: &TimeScale<f64>, u: f64) -> CheckResult {
    let t = point_at(ts, u);
    let sigma = ts.sigma(t).unwrap();
    let rho = ts.rho(t).unwrap();
    prop_assert!(sigma >= t && rho <= t);
    prop_assert!(ts.contains(sigma) && ts.contains(rho));
    prop_assert!(ts.sigma(sigma).unwrap() >= sigma);
    if sigma > t
        && ts
            .classify(sigma)
            .unwrap()
            .contains(PointClass::LEFT_SCATTERED)
    {
        prop_assert_eq!(ts.rho(sigma).unwrap(), t);
    }
    prop_assert_eq!(ts.graininess(t).unwrap(), sigma - t);
    Ok(())
}

pub fn classification(ts: &TimeScale<f64>, u: f64) -> CheckResult {
    let t = point_at(ts, u);
    let class = ts.classify(t).unwrap();
    let sigma = ts.sigma(t).unwrap();
    let rho = ts.rho(t).unwrap();
    if t == ts.max() {
        prop_assert!(class.contains(PointClass::MAX));
        prop_assert!(!class.intersects(PointClass::RIGHT_SCATTERED | PointClass::RIGHT_DENSE));
    } else {
        prop_assert_eq!(class.contains(PointClass::RIGHT_SCATTERED), sigma > t);
        prop_assert_eq!(class.contains(PointClass::RIGHT_DENSE), sigma == t);
    }
    if t == ts.min() {
        prop_assert!(class.contains(PointClass::MIN));
    } else {
        prop_assert_eq!(class.contains(PointClass::LEFT_SCATTERED), rho < t);
        prop_assert_eq!(class.contains(PointClass::LEFT_DENSE), rho == t);
    }
    Ok(())
}

pub fn graininess_partition(ts: &TimeScale<f64>, u: f64, v: f64) -> CheckResult {
    let (a, b) = ordered_points(ts, u, v);
    let gaps: f64 = ts
        .scattered_points(a, b)
        .unwrap()
        .iter()
        .map(|p| p.mu)
        .sum();
    let dense: f64 = ts
        .dense_segments(a, b)
        .unwrap()
        .iter()
        .map(|(c, d)| d - c)
        .sum();
    prop_assert!((gaps + dense - (b - a)).abs() < 1e-12);
    Ok(())
}

pub fn linearity(
    ts: &TimeScale<f64>,
    u: f64,
    v: f64,
    c: [f64; 3],
    d: [f64; 3],
    x: f64,
    y: f64,
) -> CheckResult {
    let (a, b) = ordered_points(ts, u, v);
    let (f, g) = (smooth(c), smooth(d));
    let combo = |t: f64| x * f(t) + y * g(t);
    let lhs = delta_integral(&combo, ts, a, b, &quad()).unwrap();
    let fi = delta_integral(&f, ts, a, b, &quad()).unwrap();
    let gi = delta_integral(&g, ts, a, b, &quad()).unwrap();
    let rhs = x * fi + y * gi;
    let slack = 2.0 * (x.abs() * tol(fi) + y.abs() * tol(gi)) + tol(lhs);
    prop_assert!((lhs - rhs).abs() <= slack, "{} vs {}", lhs, rhs);
    Ok(())
}

pub fn additivity(ts: &TimeScale<f64>, u: f64, v: f64, w: f64, c: [f64; 3]) -> CheckResult {
    let (a, b) = ordered_points(ts, u, v);
    let mid = point_at(ts, w).clamp(a, b);
    let f = smooth(c);
    let whole = delta_integral(&f, ts, a, b, &quad()).unwrap();
    let left = delta_integral(&f, ts, a, mid, &quad()).unwrap();
    let right = delta_integral(&f, ts, mid, b, &quad()).unwrap();
    prop_assert!((whole - left - right).abs() <= 2.0 * (tol(left) + tol(right)) + tol(whole));
    Ok(())
}

pub fn split_identity(ts: &TimeScale<f64>, u: f64, v: f64, c: [f64; 3]) -> CheckResult {
    let (a, b) = ordered_points(ts, u, v);
    let (lhs, rhs) = split_identity_check(&smooth(c), ts, a, b, &quad()).unwrap();
    prop_assert!((lhs - rhs).abs() <= 2.0 * tol(lhs) + tol(rhs));
    Ok(())
}

pub fn extension_bound(
    ts: &TimeScale<f64>,
    u: f64,
    v: f64,
    c0: f64,
    c1: f64,
    c3: f64,
) -> CheckResult {
    // increasing for c1, c3 ≥ 0
    let f = move |t: f64| c0 + c1 * t + c3 * t * t * t;
    let (a, b) = ordered_points(ts, u, v);
    let lhs = delta_integral(&f, ts, a, b, &quad()).unwrap();
    let rhs = extend_to_reals(&f, ts, a, b)
        .unwrap()
        .integrate(&quad())
        .unwrap();
    prop_assert!(lhs <= rhs + tol(lhs) + tol(rhs), "{} > {}", lhs, rhs);
    Ok(())
}

/// Under a contraction bound `q < 1` the Picard sup-deltas shrink by at
/// least `q + 0.1` per sweep from the second sweep on.
pub fn geometric_convergence(
    alpha: f64,
    horizon: f64,
    lambda: f64,
    c: f64,
    discrete: bool,
) -> CheckResult {
    let ts = if discrete {
        TimeScale::uniform(0.125, 0.0, 2.0).unwrap()
    } else {
        TimeScale::interval(0.0, 2.0).unwrap()
    };
    let horizon = if discrete {
        (horizon * 8.0).ceil() / 8.0
    } else {
        horizon
    };
    let f = move |t: f64, y: f64| c + lambda * (y + t).sin();
    let p = IVProblem::new(alpha, 0.0, horizon, Identity, f, ts).unwrap();
    let config = SolverConfig {
        lipschitz: Some(lambda.abs()),
        min_segment_nodes: 16,
        ..SolverConfig::default()
    };
    let report = solve_picard(&p, &config).unwrap();
    let q = report.contraction.max_bound;
    if q >= 1.0 {
        return Ok(());
    }
    prop_assert!(report.converged);
    let d = &report.sup_deltas;
    for k in 2..d.len() {
        if d[k - 1] > 1e-13 {
            prop_assert!(
                d[k] <= (q + 0.1) * d[k - 1],
                "step {}: {} > ({} + 0.1) {}",
                k,
                d[k],
                q,
                d[k - 1]
            );
        }
    }
    Ok(())
}
