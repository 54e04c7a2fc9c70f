use serde::Serialize;
use tsfrac::fracops::{frac_derivative, frac_integral, gen_frac_derivative, gen_frac_integral};
use tsfrac::oracle::{discrete_frac_sum, volterra_dense_solve};
use tsfrac::solver::{
    check_boundedness, check_contraction, estimate_lipschitz, m_alpha, picard_operator,
    solve_picard, verify_solution, ContractionReport, Probe,
};
use tsfrac::{gamma, ExprFn, FracOpSpec, IVProblem, PointClass, TimeScale, UnaryFn, Variable};

use crate::error::{CliError, Context};
use crate::output::{num, Output, Table};
use crate::problem::{expr, Settings};
use crate::{CheckArgs, ExampleArgs, OpArgs, SolveArgs, TsInfoArgs};

const DEFAULT_SAMPLES: usize = 20;
const ORACLE_GRID: usize = 4096;
const MAX_LISTED_POINTS: usize = 10_000;

#[derive(Serialize)]
struct OpValue {
    t: f64,
    value: f64,
}

#[derive(Serialize)]
struct OpReport<'a> {
    operator: &'static str,
    alpha: f64,
    a: f64,
    z: &'a str,
    h: &'a str,
    points: Vec<OpValue>,
}

/// Points at which an operator is evaluated when none are given.
fn default_points(ts: &TimeScale<f64>, a: f64, end: f64) -> Result<Vec<f64>, CliError> {
    ts.sample(a, end, DEFAULT_SAMPLES)
        .at(format_args!("sampling [{a}, {end}]"))
}

pub fn fracop(args: &OpArgs, derivative: bool) -> Result<(), CliError> {
    let name = if derivative { "fracderiv" } else { "fracint" };
    let s = Settings::load(&args.common)?;
    let ts = s.timescale()?;
    let alpha = s.alpha()?;
    let a = s.t0(&ts);
    let z = s.z()?;
    let h_src = args.h.as_deref().or(s.file.h.as_deref()).ok_or_else(|| {
        CliError::config("cli: no integrand given (set `h` in the problem file or pass --h)")
    })?;
    let h = expr("h", h_src, &[Variable::T])?;
    let spec = FracOpSpec::new(alpha, a, z.clone(), ts.clone(), s.quadrature()?).at(
        format_args!("{name} alpha = {alpha}, a = {a}, z = {:?}", z.source()),
    )?;
    let points = match args.at.clone().or_else(|| s.file.at.clone()) {
        Some(p) => p,
        None => {
            let mut p = default_points(&ts, a, s.end(&ts))?;
            if derivative {
                // the derivative blows up where a continuous piece starts
                let keep = |t: &f64| {
                    let Ok(class) = ts.classify(*t) else {
                        return false;
                    };
                    ts.in_kappa(*t).unwrap_or(false)
                        && (class.contains(PointClass::RIGHT_SCATTERED)
                            || (*t > a && class.contains(PointClass::LEFT_DENSE)))
                };
                p.retain(keep);
            }
            p
        }
    };

    let identity = z.is_identity();
    let eval = |t: f64| -> tsfrac::Result<f64> {
        match (derivative, identity) {
            (false, true) => frac_integral(&spec, &h, t),
            (false, false) => gen_frac_integral(&spec, &h, t),
            (true, true) => frac_derivative(&spec, &h, t),
            (true, false) => gen_frac_derivative(&spec, &h, t),
        }
    };

    let mut table = Table::new(&["t", "value"]);
    let mut values = Vec::new();
    let mut failure = None;
    for &t in &points {
        match eval(t).at(format_args!("{name} at t = {t}")) {
            Ok(v) => {
                table.push(vec![num(t), num(v)]);
                values.push(OpValue { t, value: v });
            }
            Err(e) => {
                failure = Some(e);
                break;
            }
        }
    }

    println!(
        "{name}: alpha = {alpha}, a = {a}, z = {}, h = {}, {} of {} points evaluated",
        z.source(),
        h.source(),
        values.len(),
        points.len()
    );
    for v in values.iter().take(12) {
        println!("  t = {:<12} value = {}", v.t, v.value);
    }
    if values.len() > 12 {
        println!("  ...");
    }
    if args.oracle && failure.is_none() {
        discrete_oracle(&ts, alpha, a, &z, &h, &values, derivative)?;
    }
    let report = OpReport {
        operator: name,
        alpha,
        a,
        z: z.source(),
        h: h.source(),
        points: values,
    };
    s.output.write(&table, &report)?;
    failure.map_or(Ok(()), Err)
}

/// Compares against exact sums when `[a, t]` has no continuous part.
fn discrete_oracle(
    ts: &TimeScale<f64>,
    alpha: f64,
    a: f64,
    z: &ExprFn,
    h: &ExprFn,
    values: &[OpValue],
    derivative: bool,
) -> Result<(), CliError> {
    let mut worst: f64 = 0.0;
    let mut compared = 0;
    for v in values {
        if v.t <= a || !ts.is_discrete_on(a, v.t).unwrap_or(false) {
            continue;
        }
        let exact = if derivative {
            let sigma = ts.sigma(v.t).at("oracle")?;
            if !ts.is_discrete_on(a, sigma).unwrap_or(false) {
                continue;
            }
            let w = |t: f64| discrete_frac_sum(ts, 1.0 - alpha, z, h, a, t).map(|r| r.value);
            let dz = z.call(sigma).at("oracle")? - z.call(v.t).at("oracle")?;
            (w(sigma).at("oracle")? - w(v.t).at("oracle")?) / dz
        } else {
            discrete_frac_sum(ts, alpha, z, h, a, v.t)
                .at("oracle")?
                .value
        };
        worst = worst.max((v.value - exact).abs());
        compared += 1;
    }
    if compared == 0 {
        println!("oracle: no point with a purely discrete [a, t]; nothing to compare");
    } else {
        println!("oracle: exact discrete sums at {compared} points, max |difference| = {worst:e}");
    }
    Ok(())
}

pub fn solve(args: &SolveArgs) -> Result<(), CliError> {
    let s = Settings::load(&args.common)?;
    let p = s.problem(args.f.as_deref())?;
    let cfg = s.solver_config(args.max_iter, args.nodes, args.lipschitz)?;
    let report = solve_picard(&p, &cfg).at("solve")?;

    let y = &report.solution;
    let residuals: Vec<f64> = match picard_operator(&p, y) {
        Ok(fy) => fy
            .values()
            .iter()
            .zip(y.values())
            .map(|(a, b)| (a - b).abs())
            .collect(),
        Err(_) => vec![f64::NAN; y.len()],
    };
    let mut table = Table::new(&["t", "y", "residual"]);
    for ((&t, &v), &r) in y.nodes().iter().zip(y.values()).zip(&residuals) {
        table.push(vec![num(t), num(v), num(r)]);
    }

    println!(
        "solve: alpha = {}, J = [{}, {}], z = {}, f = {}",
        p.alpha(),
        p.t0(),
        p.end(),
        p.weight().source(),
        p.rhs().source()
    );
    println!(
        "  {} nodes, {} sweeps, final sup delta {:e}, residual {:e}, converged: {}",
        y.len(),
        report.iterations,
        report.final_sup_delta,
        report.residual_sup,
        report.converged
    );
    print_contraction(&report.contraction);
    if report.converged {
        match verify_solution(&p, y) {
            Ok(r) => println!("  independent residual check: {r:e}"),
            Err(e) => println!("  independent residual check failed: {e}"),
        }
        let last = y.len() - 1;
        println!("  y({}) = {}", y.nodes()[last], y.values()[last]);
    }
    if args.oracle {
        solve_oracle(&p, y)?;
    }
    s.output.write(&table, &report)?;
    if report.converged {
        Ok(())
    } else {
        Err(CliError::Numeric(format!(
            "solver: Picard iteration did not converge after {} sweeps (last sup delta {:e})",
            report.iterations, report.final_sup_delta
        )))
    }
}

fn solve_oracle(
    p: &IVProblem<f64, ExprFn, ExprFn>,
    y: &tsfrac::GridFunction<f64>,
) -> Result<(), CliError> {
    let single = p
        .time_scale()
        .dense_segments(p.t0(), p.end())
        .map(|segs| segs.len() == 1 && segs[0] == (p.t0(), p.end()))
        .unwrap_or(false);
    if !single {
        println!("oracle: product integration needs J to be a single interval; skipped");
        return Ok(());
    }
    let reference = volterra_dense_solve(p, ORACLE_GRID).at("oracle")?;
    let mut sup: f64 = 0.0;
    for (&t, &v) in y.nodes().iter().zip(y.values()) {
        sup = sup.max((v - reference.eval(t).at("oracle")?).abs());
    }
    println!("oracle: product integration on {ORACLE_GRID} nodes, sup |difference| = {sup:e}");
    Ok(())
}

fn print_contraction(c: &ContractionReport<f64>) {
    println!(
        "  contraction: L = {}, max bound {} -> {}",
        c.lipschitz,
        c.max_bound,
        if c.satisfied {
            "satisfied"
        } else {
            "not satisfied"
        }
    );
}

pub fn check(args: &CheckArgs) -> Result<(), CliError> {
    let s = Settings::load(&args.common)?;
    let p = s.problem(args.f.as_deref())?;
    let cfg = s.solver_config(None, args.nodes, args.lipschitz)?;
    let probe = Probe {
        samples: cfg.lipschitz_probe,
        y_range: cfg.probe_range,
    };
    let lipschitz = match cfg.lipschitz {
        Some(l) => l,
        None => {
            let l = estimate_lipschitz(&p, &probe).at("check")?;
            println!("check: estimated Lipschitz constant {l}");
            l
        }
    };
    let report = check_contraction(&p, lipschitz, &cfg).at("check")?;
    let bounded = check_boundedness(&p, &probe).at("check")?;

    println!(
        "check: alpha = {}, J = [{}, {}]",
        p.alpha(),
        p.t0(),
        p.end()
    );
    print_contraction(&report);
    println!(
        "  boundedness: sup |f| = {} on |y| <= {}, {} on |y| <= {} -> {}",
        bounded.n_hat,
        bounded.y_range,
        bounded.n_hat_wide,
        2.0 * bounded.y_range,
        if bounded.bounded {
            "bounded"
        } else {
            "possibly unbounded"
        }
    );
    let mut table = Table::new(&["t", "value"]);
    for (&t, &b) in report.nodes.iter().zip(&report.bound_fn) {
        table.push(vec![num(t), num(b)]);
    }
    s.output.write(&table, &report)
}

#[derive(Serialize)]
struct ExampleRow {
    quantity: String,
    t: f64,
    expected: f64,
    computed: f64,
    abs_error: f64,
}

#[derive(Serialize)]
struct ExampleReport {
    rows: Vec<ExampleRow>,
    contraction: Vec<ContractionReport<f64>>,
}

const EXAMPLE_POINTS: [f64; 7] = [0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0];

/// z(t) = t² and α = 1/2 on {0} ∪ {2^k : k ≥ −10} up to 32, J = [0, 16].
fn example_problem(c: f64) -> Result<IVProblem<f64, ExprFn, ExprFn>, CliError> {
    let ts = TimeScale::geometric(2.0, true, -10, 32.0).at("example time scale")?;
    let z = expr("z", "t^2", &[Variable::T])?;
    let f = expr("f", &format!("{c}"), &[Variable::T, Variable::Y])?;
    IVProblem::new(0.5, 0.0, 16.0, z, f, ts).at("example problem")
}

pub fn reproduce_example4(args: &ExampleArgs) -> Result<(), CliError> {
    let output = Output::new(args.out.clone(), args.format);
    let p = example_problem(args.c)?;
    let sqrt_pi = std::f64::consts::PI.sqrt();
    let mut rows = Vec::new();
    let mut row = |quantity: String, t: f64, expected: f64, computed: f64| {
        rows.push(ExampleRow {
            quantity,
            t,
            expected,
            computed,
            abs_error: (computed - expected).abs(),
        })
    };

    println!("example: z(t) = t^2, alpha = 1/2, T = {{0}} u {{2^k : k >= -10}}, J = [0, 16]");
    println!("  M_alpha(t):");
    for t in EXAMPLE_POINTS {
        let m = m_alpha(&p, t).at(format_args!("M_alpha at t = {t}"))?;
        println!("    t = {t:<6} {m:.12}   (expected 3)");
        row("M_alpha".into(), t, 3.0, m);
    }

    let cfg = tsfrac::SolverConfig::default();
    let mut reports = Vec::new();
    for &l in &args.lipschitz {
        let report =
            check_contraction(&p, l, &cfg).at(format_args!("contraction bound with L = {l}"))?;
        println!("  contraction bound 9 t^2 L / sqrt(pi), L = {l}:");
        for t in EXAMPLE_POINTS {
            let Some(i) = report.nodes.iter().position(|&n| n == t) else {
                continue;
            };
            let b = report.bound_fn[i];
            let expected = 9.0 * t * t * l / sqrt_pi;
            let mark = if b < 1.0 { "< 1" } else { ">= 1" };
            println!("    t = {t:<6} {b:.10}   (expected {expected:.10}) {mark}");
            row(format!("bound(L={l})"), t, expected, b);
        }
        println!(
            "    max over J {} -> {}",
            report.max_bound,
            if report.satisfied {
                "satisfied"
            } else {
                "not satisfied"
            }
        );
        reports.push(report);
    }

    // with f ≡ c the solution is c z^Δ(t) I^α 1(t), summed exactly on the scale
    let solved = solve_picard(&p, &cfg).at("example solve")?;
    let one = |_s: f64| 1.0;
    println!("  solution of the problem with f = {}:", args.c);
    for t in EXAMPLE_POINTS {
        let computed = solved.solution.eval(t).at("example solution")?;
        let sigma = p.time_scale().sigma(t).at("example solution")?;
        let zd = (sigma * sigma - t * t) / (sigma - t);
        let sum = discrete_frac_sum(p.time_scale(), 0.5, p.weight(), &one, 0.0, t)
            .at("example oracle")?;
        let expected = args.c * zd * sum.value;
        println!("    t = {t:<6} y = {computed:.12}   (exact sum {expected:.12})");
        row(format!("y(c={})", args.c), t, expected, computed);
    }
    println!("  Gamma(1/2) = {}", gamma(0.5));

    let mut table = Table::new(&["quantity", "t", "expected", "computed", "abs_error"]);
    for r in &rows {
        table.push(vec![
            r.quantity.clone(),
            num(r.t),
            num(r.expected),
            num(r.computed),
            num(r.abs_error),
        ]);
    }
    output.write(
        &table,
        &ExampleReport {
            rows,
            contraction: reports,
        },
    )
}

#[derive(Serialize)]
struct PointInfo {
    t: f64,
    sigma: f64,
    rho: f64,
    mu: f64,
    class: Vec<&'static str>,
}

#[derive(Serialize)]
struct ScaleInfo<'a> {
    min: f64,
    max: f64,
    pieces: &'a [tsfrac::Piece<f64>],
    points: Vec<PointInfo>,
}

fn class_names(c: PointClass) -> Vec<&'static str> {
    c.iter_names().map(|(name, _)| name).collect()
}

pub fn ts_info(args: &TsInfoArgs) -> Result<(), CliError> {
    let s = Settings::load(&args.common)?;
    let ts = s.timescale()?;
    let points = match args.at.clone().or_else(|| s.file.at.clone()) {
        Some(p) => p,
        None => ts.landmarks(ts.min(), ts.max()).at("ts-info")?,
    };
    let intervals = ts.pieces().iter().filter(|p| p.is_interval()).count();
    let dense: f64 = ts
        .pieces()
        .iter()
        .filter(|p| p.is_interval())
        .map(|p| p.hi() - p.lo())
        .fold(0.0, |acc, x| acc + x);
    println!(
        "ts-info: [{}, {}], {} pieces ({} intervals, {} isolated points), continuous length {}",
        ts.min(),
        ts.max(),
        ts.pieces().len(),
        intervals,
        ts.pieces().len() - intervals,
        dense
    );
    if points.len() > MAX_LISTED_POINTS {
        println!(
            "  listing the first {MAX_LISTED_POINTS} of {} landmarks",
            points.len()
        );
    }
    let mut table = Table::new(&["t", "sigma", "rho", "mu", "class"]);
    let mut info = Vec::new();
    for &t in points.iter().take(MAX_LISTED_POINTS) {
        let at = format_args!("ts-info at t = {t}").to_string();
        let p = PointInfo {
            t,
            sigma: ts.sigma(t).at(&at)?,
            rho: ts.rho(t).at(&at)?,
            mu: ts.graininess(t).at(&at)?,
            class: class_names(ts.classify(t).at(&at)?),
        };
        if info.len() < 12 {
            println!(
                "  t = {:<12} sigma = {:<12} rho = {:<12} mu = {:<12} {}",
                p.t,
                p.sigma,
                p.rho,
                p.mu,
                p.class.join("|")
            );
        }
        table.push(vec![
            num(p.t),
            num(p.sigma),
            num(p.rho),
            num(p.mu),
            p.class.join("|"),
        ]);
        info.push(p);
    }
    s.output.write(
        &table,
        &ScaleInfo {
            min: ts.min(),
            max: ts.max(),
            pieces: ts.pieces(),
            points: info,
        },
    )
}
