mod common;

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use tsfrac::fracops::{frac_integral, gen_frac_integral, semigroup_defect};
use tsfrac::oracle::{discrete_frac_sum, rl_power_rule, volterra_dense_solve};
use tsfrac::solver::{check_contraction, m_alpha, solve_picard};
use tsfrac::{
    gamma, ExprFn, FracOpSpec, IVProblem, Identity, QuadratureSpec, SolverConfig, TimeScale,
};

type Outcome = Result<String, String>;

fn quad() -> QuadratureSpec<f64> {
    QuadratureSpec::default()
}

fn example_problem() -> IVProblem<f64, ExprFn, ExprFn> {
    let ts = TimeScale::geometric(2.0, true, -10, 32.0).unwrap();
    let z = ExprFn::of_t("t^2").unwrap();
    let f = ExprFn::of_t_y("sin(y)").unwrap();
    IVProblem::new(0.5, 0.0, 16.0, z, f, ts).unwrap()
}

fn rel(v: f64, exact: f64) -> f64 {
    if exact == 0.0 {
        v.abs()
    } else {
        ((v - exact) / exact).abs()
    }
}

fn mass_is_three() -> Outcome {
    let p = example_problem();
    let mut worst: f64 = 0.0;
    for t in [0.25, 0.5, 1.0, 2.0] {
        let m = m_alpha(&p, t).map_err(|e| e.to_string())?;
        if (m - 3.0).abs() > 1e-6 {
            return Err(format!("M({t}) = {m}"));
        }
        worst = worst.max((m - 3.0).abs());
    }
    Ok(format!("max |M - 3| = {worst:.1e}"))
}

fn contraction_bound() -> Outcome {
    let p = example_problem();
    let mut worst: f64 = 0.0;
    for l in [0.01, 0.1] {
        let r = check_contraction(&p, l, &SolverConfig::default()).map_err(|e| e.to_string())?;
        for (&t, &b) in r.nodes.iter().zip(&r.bound_fn) {
            let exact = 9.0 * t * t * l / PI.sqrt();
            let e = rel(b, exact);
            if e > 1e-5 {
                return Err(format!("L = {l}, t = {t}: {b} vs {exact}"));
            }
            worst = worst.max(e);
        }
    }
    Ok(format!("max rel err = {worst:.1e}"))
}

fn power_rule() -> Outcome {
    let ts = TimeScale::interval(0.0, 1.0).unwrap();
    let mut worst: f64 = 0.0;
    for alpha in [0.25, 0.5, 0.75] {
        let spec =
            FracOpSpec::classical(alpha, 0.0, ts.clone(), quad()).map_err(|e| e.to_string())?;
        for nu in [0.0, 1.0, 2.0] {
            let h = move |s: f64| s.powf(nu);
            for t in [0.25, 0.5, 1.0] {
                let v = frac_integral(&spec, &h, t).map_err(|e| e.to_string())?;
                let exact = rl_power_rule(alpha, nu, t)
                    .map_err(|e| e.to_string())?
                    .value;
                let e = rel(v, exact);
                if e > 1e-6 {
                    return Err(format!("alpha {alpha}, nu {nu}, t {t}: {v} vs {exact}"));
                }
                worst = worst.max(e);
            }
        }
    }
    Ok(format!("max rel err = {worst:.1e}"))
}

fn weighted_closed_forms() -> Outcome {
    let ts = TimeScale::interval(0.0, 1.0).unwrap();
    let one = |_s: f64| 1.0;
    let mut worst: f64 = 0.0;
    for src in ["t", "t^2", "exp(t)"] {
        let z = ExprFn::of_t(src).unwrap();
        let za: f64 = z.eval(&[0.0]).map_err(|e| e.to_string())?;
        for alpha in [0.25, 0.5, 0.75] {
            let spec = FracOpSpec::new(alpha, 0.0, z.clone(), ts.clone(), quad())
                .map_err(|e| e.to_string())?;
            for t in [0.25, 0.5, 1.0] {
                let zt: f64 = z.eval(&[t]).map_err(|e| e.to_string())?;
                let exact = (zt - za).powf(alpha) / gamma(alpha + 1.0);
                let v = gen_frac_integral(&spec, &one, t).map_err(|e| e.to_string())?;
                let e = rel(v, exact);
                if e > 1e-6 {
                    return Err(format!("z = {src}, alpha {alpha}, t {t}: {v} vs {exact}"));
                }
                worst = worst.max(e);
            }
        }
    }
    Ok(format!("max rel err = {worst:.1e}"))
}

fn discrete_exactness() -> Outcome {
    let scales = [
        TimeScale::uniform(1.0, 0.0, 10.0).unwrap(),
        TimeScale::geometric(2.0, true, 0, 16.0).unwrap(),
    ];
    let h = |s: f64| 1.0 + s * s / 7.0 + s.cos();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for ts in &scales {
        let points: Vec<f64> = ts
            .scattered_points(0.0, ts.max())
            .unwrap()
            .iter()
            .map(|p| p.t)
            .collect();
        for alpha in [0.3, 0.5, 0.7] {
            let spec =
                FracOpSpec::classical(alpha, 0.0, ts.clone(), quad()).map_err(|e| e.to_string())?;
            for &t in points.iter().skip(1).chain(std::iter::once(&ts.max())) {
                let exact = discrete_frac_sum(ts, alpha, &Identity, &h, 0.0, t)
                    .map_err(|e| e.to_string())?
                    .value;
                let a = frac_integral(&spec, &h, t).map_err(|e| e.to_string())?;
                let b = gen_frac_integral(&spec, &h, t).map_err(|e| e.to_string())?;
                for v in [a, b] {
                    let e = (v - exact).abs();
                    if e > 1e-12 {
                        return Err(format!("alpha {alpha}, t {t}: {v} vs {exact}"));
                    }
                    worst = worst.max(e);
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} points, max abs err = {worst:.1e}"))
}

fn picard_vs_oracle() -> Outcome {
    let ts = TimeScale::interval(0.0, 0.5).unwrap();
    let f = |_t: f64, y: f64| 1.0 + y / 2.0;
    let p = IVProblem::new(0.5, 0.0, 0.5, Identity, f, ts).map_err(|e| e.to_string())?;
    let cfg = SolverConfig {
        lipschitz: Some(0.5),
        ..SolverConfig::default()
    };
    let r = solve_picard(&p, &cfg).map_err(|e| e.to_string())?;
    if !r.converged {
        return Err("Picard iteration did not converge".into());
    }
    if !r.contraction.satisfied {
        return Err(format!(
            "contraction bound {} >= 1",
            r.contraction.max_bound
        ));
    }
    let oracle = volterra_dense_solve(&p, 4096).map_err(|e| e.to_string())?;
    // measured at the solver nodes, oracle interpolated linearly
    let mut sup: f64 = 0.0;
    for (&t, &y) in r.solution.nodes().iter().zip(r.solution.values()) {
        sup = sup.max((y - oracle.eval(t).map_err(|e| e.to_string())?).abs());
    }
    if sup > 1e-4 {
        return Err(format!("sup-norm distance {sup:.3e}"));
    }
    Ok(format!(
        "sup-norm distance {sup:.1e}, {} sweeps, contraction bound {:.3}",
        r.iterations, r.contraction.max_bound
    ))
}

fn semigroup() -> Outcome {
    let one = |_s: f64| 1.0;
    let reals = FracOpSpec::classical(0.25, 0.0, TimeScale::interval(0.0, 1.0).unwrap(), quad())
        .map_err(|e| e.to_string())?;
    let d = semigroup_defect(&reals, &one, 0.25, 0.25, 1.0).map_err(|e| e.to_string())?;
    if d.abs() > 1e-6 {
        return Err(format!("defect on the reals {d:.3e}"));
    }
    let ints = FracOpSpec::classical(0.5, 0.0, TimeScale::uniform(1.0, 0.0, 6.0).unwrap(), quad())
        .map_err(|e| e.to_string())?;
    let first = semigroup_defect(&ints, &one, 0.5, 0.5, 4.0).map_err(|e| e.to_string())?;
    let second = semigroup_defect(&ints, &one, 0.5, 0.5, 4.0).map_err(|e| e.to_string())?;
    if first.to_bits() != second.to_bits() {
        return Err(format!(
            "discrete defect not reproducible: {first} vs {second}"
        ));
    }
    Ok(format!(
        "defect on reals {d:.1e}, on integers at t = 4: {first:.15}"
    ))
}

fn runner(cases: u32, seed: u8) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(
        config,
        TestRng::from_seed(RngAlgorithm::ChaCha, &[seed; 32]),
    )
}

fn run<S: Strategy>(
    name: &str,
    cases: u32,
    seed: u8,
    strategy: S,
    test: impl Fn(S::Value) -> common::CheckResult,
) -> Result<(), String> {
    runner(cases, seed)
        .run(&strategy, test)
        .map_err(|e| format!("{name}: {e}"))
}

fn property_suites() -> Outcome {
    use common::{arb_nontrivial_scale, arb_pieces, arb_scale};
    let u = || 0.0..=1.0f64;
    let c = || prop::array::uniform3(-2.0..2.0f64);
    run(
        "canonicalize",
        1000,
        1,
        arb_pieces(),
        common::canonical_idempotent,
    )?;
    run("jumps", 1000, 2, (arb_scale(), u()), |(ts, u)| {
        common::jump_operators(&ts, u)
    })?;
    run("classify", 1000, 3, (arb_scale(), u()), |(ts, u)| {
        common::classification(&ts, u)
    })?;
    run(
        "graininess",
        1000,
        4,
        (arb_scale(), u(), u()),
        |(ts, u, v)| common::graininess_partition(&ts, u, v),
    )?;
    run(
        "linearity",
        1000,
        5,
        (
            arb_nontrivial_scale(),
            u(),
            u(),
            c(),
            c(),
            -3.0..3.0f64,
            -3.0..3.0f64,
        ),
        |(ts, u, v, c, d, x, y)| common::linearity(&ts, u, v, c, d, x, y),
    )?;
    run(
        "additivity",
        1000,
        6,
        (arb_nontrivial_scale(), u(), u(), u(), c()),
        |(ts, u, v, w, c)| common::additivity(&ts, u, v, w, c),
    )?;
    run(
        "split identity",
        1000,
        7,
        (arb_nontrivial_scale(), u(), u(), c()),
        |(ts, u, v, c)| common::split_identity(&ts, u, v, c),
    )?;
    run(
        "extension bound",
        1000,
        8,
        (
            arb_nontrivial_scale(),
            u(),
            u(),
            -2.0..2.0f64,
            0.0..2.0f64,
            0.0..0.5f64,
        ),
        |(ts, u, v, c0, c1, c3)| common::extension_bound(&ts, u, v, c0, c1, c3),
    )?;
    run(
        "geometric convergence",
        1000,
        9,
        (
            0.2..0.9f64,
            0.2..2.0f64,
            -1.5..1.5f64,
            -2.0..2.0f64,
            any::<bool>(),
        ),
        |(alpha, horizon, lambda, c, discrete)| {
            common::geometric_convergence(alpha, horizon, lambda, c, discrete)
        },
    )?;
    Ok("9 properties x 1000 cases".into())
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    check: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            id: 1,
            name: "mass function on the example scale",
            limit: Duration::from_secs(1),
            check: mass_is_three,
        },
        Criterion {
            id: 2,
            name: "contraction bound on the example scale",
            limit: Duration::from_secs(1),
            check: contraction_bound,
        },
        Criterion {
            id: 3,
            name: "power rule on [0, 1]",
            limit: Duration::from_secs(5),
            check: power_rule,
        },
        Criterion {
            id: 4,
            name: "generalized integral closed forms",
            limit: Duration::from_secs(5),
            check: weighted_closed_forms,
        },
        Criterion {
            id: 5,
            name: "discrete exactness",
            limit: Duration::from_secs(1),
            check: discrete_exactness,
        },
        Criterion {
            id: 6,
            name: "Picard vs product integration",
            limit: Duration::from_secs(10),
            check: picard_vs_oracle,
        },
        Criterion {
            id: 7,
            name: "semigroup defect",
            limit: Duration::from_secs(2),
            check: semigroup,
        },
        Criterion {
            id: 8,
            name: "property suites",
            limit: Duration::from_secs(60),
            check: property_suites,
        },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.check)();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > c.limit => {
                Err(format!("{msg}; took {elapsed:.2?}, limit {:?}", c.limit))
            }
            other => other,
        };
        match outcome {
            Ok(msg) => println!("PASS criterion {}: {} ({msg}; {elapsed:.2?})", c.id, c.name),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {}: {} ({msg})", c.id, c.name);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
