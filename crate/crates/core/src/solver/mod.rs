//! The fractional initial value problem
//!
//! ```text
//! D^α_{t0; z} y(t) = f(t, y(t)),  t ∈ J = [t0, t0 + horizon] ∩ T,
//! I^{1−α}_{t0; z} y(t0) = 0,
//! ```
//!
//! solved in its integral form `y = F(y)` with
//! `F(y)(t) = (z^Δ(t)/Γ(α)) ∫_{t0}^t (z(t) − z(s))^(α−1) z^Δ(s) f(s, y(s)) Δs`
//! by Picard iteration on a node grid. Besides the solve itself the module
//! screens the hypotheses of the existence results: the contraction bound
//! `L z^Δ(t) M_α(t) (t − t0)/Γ(α) < 1` and an empirical bound on `|f|`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::calculus::{
    delta_derivative, delta_integral_with_breaks, integrate, kernel_integral, QuadratureSpec,
};
use crate::error::{Error, Result};
use crate::exprlang::{gamma, ExprFn};
use crate::fracops::{
    gen_frac_derivative, gen_frac_integral, link_nodes, validate_weight, FracOpSpec, GridFunction,
};
use crate::func::{BinaryFn, Borrowed, Fallible, UnaryFn};
use crate::scalar::Scalar;
use crate::timescale::TimeScale;

/// How `z^Δ` is continued across the gaps `(τ, σ(τ))` of the scale when
/// `M_α` is computed as a real integral.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MassExtension {
    /// The jump rule of a generated scale when there is one (`σ̃(s) = qs`
    /// or `s + h`, giving `(z(σ̃(s)) − z(s))/(σ̃(s) − s)`), otherwise
    /// [`MassExtension::Linear`].
    #[default]
    Auto,
    /// Linear interpolation between `z^Δ(τ)` and `z^Δ(σ(τ))`; constant
    /// `z^Δ(τ)` when `σ(τ) ∉ T^κ`.
    Linear,
    /// Constant `z^Δ(τ)` on the whole gap.
    Step,
}

/// Problem data. `z` is the weight, `f` the right-hand side `f(t, y)`.
#[derive(Debug, Clone)]
pub struct IVProblem<S, Z = ExprFn, F = ExprFn> {
    alpha: S,
    t0: S,
    horizon: S,
    end: S,
    z: Z,
    f: F,
    ts: TimeScale<S>,
    quad: QuadratureSpec<S>,
    mass: MassExtension,
}

impl<S, Z, F> IVProblem<S, Z, F>
where
    S: Scalar,
    Z: UnaryFn<S> + Sync,
    F: BinaryFn<S> + Sync,
{
    /// Checks `0 < α < 1`, `horizon > 0`, `t0, t0 + horizon ∈ T` and the
    /// weight on `J`. A non-identity weight also needs `t0 + horizon ∈ T^κ`
    /// so that `z^Δ` exists at every node.
    pub fn new(alpha: S, t0: S, horizon: S, z: Z, f: F, ts: TimeScale<S>) -> Result<Self> {
        if !(alpha > S::zero() && alpha < S::one()) {
            return Err(Error::InvalidOrder {
                alpha: alpha.as_f64(),
            });
        }
        if !(horizon > S::zero()) || !horizon.is_finite() {
            return Err(Error::invalid(
                "solver",
                format!("horizon must be positive (got {horizon})"),
            ));
        }
        let t0 = ts.snap(t0)?;
        let end = ts.snap(t0 + horizon)?;
        if !z.is_identity() {
            validate_weight(&z, &ts, t0, end)?;
            if !ts.in_kappa(end)? {
                return Err(Error::NotInKappa { t: end.as_f64() });
            }
        }
        Ok(Self {
            alpha,
            t0,
            horizon,
            end,
            z,
            f,
            ts,
            quad: QuadratureSpec::default(),
            mass: MassExtension::Auto,
        })
    }

    pub fn with_quadrature(mut self, quad: QuadratureSpec<S>) -> Result<Self> {
        quad.validate()?;
        self.quad = quad;
        Ok(self)
    }

    pub fn with_mass_extension(mut self, mass: MassExtension) -> Self {
        self.mass = mass;
        self
    }

    pub fn alpha(&self) -> S {
        self.alpha
    }

    pub fn t0(&self) -> S {
        self.t0
    }

    pub fn horizon(&self) -> S {
        self.horizon
    }

    /// `t0 + horizon`, snapped onto the scale.
    pub fn end(&self) -> S {
        self.end
    }

    pub fn weight(&self) -> &Z {
        &self.z
    }

    pub fn rhs(&self) -> &F {
        &self.f
    }

    pub fn time_scale(&self) -> &TimeScale<S> {
        &self.ts
    }

    pub fn quadrature(&self) -> &QuadratureSpec<S> {
        &self.quad
    }

    pub fn mass_extension(&self) -> MassExtension {
        self.mass
    }

    fn weight_delta(&self, t: S) -> Result<S> {
        if self.z.is_identity() {
            Ok(S::one())
        } else {
            delta_derivative(&self.z, &self.ts, t)
        }
    }

    fn in_horizon(&self, t: S) -> Result<S> {
        let t = self.ts.snap(t)?;
        if t < self.t0 || t > self.end {
            return Err(Error::invalid(
                "solver",
                format!("{t} is outside J = [{}, {}]", self.t0, self.end),
            ));
        }
        Ok(t)
    }
}

/// Iteration and discretization settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar", default, deny_unknown_fields)]
pub struct SolverConfig<S> {
    pub max_iterations: usize,
    pub sup_norm_tol: S,
    /// Nodes per continuous segment of `J`.
    pub min_segment_nodes: usize,
    /// Grade the nodes of a segment starting at `t0` as `(j/n)^(1/α)`.
    pub graded: bool,
    /// Lipschitz constant of `f` in `y`; probed when absent.
    pub lipschitz: Option<S>,
    pub lipschitz_probe: usize,
    /// Half-width `Y` of the `y` range used by the probes.
    pub probe_range: S,
}

impl<S: Scalar> Default for SolverConfig<S> {
    fn default() -> Self {
        Self {
            max_iterations: 100,
            sup_norm_tol: S::lit(1e-9),
            min_segment_nodes: 64,
            graded: true,
            lipschitz: None,
            lipschitz_probe: 1000,
            probe_range: S::lit(10.0),
        }
    }
}

impl<S: Scalar> SolverConfig<S> {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::invalid("solver", m));
        if self.max_iterations == 0 {
            return bad("max_iterations must be positive".into());
        }
        if !(self.sup_norm_tol > S::zero()) {
            return bad(format!(
                "sup_norm_tol must be positive (got {})",
                self.sup_norm_tol
            ));
        }
        if self.min_segment_nodes < 2 {
            return bad("min_segment_nodes must be at least 2".into());
        }
        if let Some(l) = self.lipschitz {
            if !(l >= S::zero()) || !l.is_finite() {
                return bad(format!(
                    "lipschitz constant must be finite and >= 0 (got {l})"
                ));
            }
        }
        if self.lipschitz_probe < 2 {
            return bad("lipschitz_probe must be at least 2".into());
        }
        if !(self.probe_range > S::zero()) {
            return bad(format!(
                "probe_range must be positive (got {})",
                self.probe_range
            ));
        }
        Ok(())
    }

    fn probe(&self) -> Probe<S> {
        Probe {
            samples: self.lipschitz_probe,
            y_range: self.probe_range,
        }
    }
}

/// Deterministic sampling of `J × [−Y, Y]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct Probe<S> {
    pub samples: usize,
    pub y_range: S,
}

impl<S: Scalar> Default for Probe<S> {
    fn default() -> Self {
        Self {
            samples: 1000,
            y_range: S::lit(10.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct ContractionReport<S> {
    #[serde(rename = "L")]
    pub lipschitz: S,
    pub nodes: Vec<S>,
    /// `L z^Δ(t) M_α(t) (t − t0)/Γ(α)` at each node.
    pub bound_fn: Vec<S>,
    pub max_bound: S,
    pub satisfied: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct BoundednessReport<S> {
    /// `max |f(t, y)|` over the probe of `J × [−Y, Y]`.
    pub n_hat: S,
    /// The same maximum over `J × [−2Y, 2Y]`.
    pub n_hat_wide: S,
    /// Whether doubling the range left the maximum (nearly) unchanged.
    pub bounded: bool,
    pub y_range: S,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct SolveReport<S> {
    pub solution: GridFunction<S>,
    pub iterations: usize,
    pub final_sup_delta: S,
    /// `max |y − F(y)|` over the nodes at termination.
    pub residual_sup: S,
    pub contraction: ContractionReport<S>,
    pub converged: bool,
    /// `sup |y_k − y_{k−1}|` for every sweep.
    pub sup_deltas: Vec<S>,
}

/// Nodes of the solution grid: every landmark of `J` plus
/// `min_segment_nodes` points on each continuous segment.
pub fn grid_nodes<S, Z, F>(p: &IVProblem<S, Z, F>, cfg: &SolverConfig<S>) -> Result<Vec<S>>
where
    S: Scalar,
    Z: UnaryFn<S> + Sync,
    F: BinaryFn<S> + Sync,
{
    cfg.validate()?;
    let mut nodes = p.ts.landmarks(p.t0, p.end)?;
    let n = cfg.min_segment_nodes;
    let nf = S::lit(n as f64);
    for (c, d) in p.ts.dense_segments(p.t0, p.end)? {
        let graded = cfg.graded && c == p.t0;
        for j in 1..n {
            let x = S::lit(j as f64) / nf;
            let x = if graded {
                x.powf(S::one() / p.alpha)
            } else {
                x
            };
            nodes.push(c + (d - c) * x);
        }
    }
    nodes.sort_by(|x, y| x.partial_cmp(y).expect("finite nodes"));
    nodes.dedup();
    Ok(nodes)
}

/// Applies `F` at every node of `y`.
pub fn picard_operator<S, Z, F>(
    p: &IVProblem<S, Z, F>,
    y: &GridFunction<S>,
) -> Result<GridFunction<S>>
where
    S: Scalar,
    Z: UnaryFn<S> + Sync,
    F: BinaryFn<S> + Sync,
{
    let zd = weight_deltas(p, y.nodes())?;
    y.with_values(sweep(p, &zd, y)?)
}

fn weight_deltas<S, Z, F>(p: &IVProblem<S, Z, F>, nodes: &[S]) -> Result<Vec<S>>
where
    S: Scalar,
    Z: UnaryFn<S> + Sync,
    F: BinaryFn<S> + Sync,
{
    nodes.par_iter().map(|&t| p.weight_delta(t)).collect()
}

fn sweep<S, Z, F>(p: &IVProblem<S, Z, F>, zd: &[S], y: &GridFunction<S>) -> Result<Vec<S>>
where
    S: Scalar,
    Z: UnaryFn<S> + Sync,
    F: BinaryFn<S> + Sync,
{
    let nodes = y.nodes();
    if nodes[0] != p.t0 {
        return Err(Error::invalid(
            "solver",
            format!("grid starts at {} instead of t0 = {}", nodes[0], p.t0),
        ));
    }
    let scale = S::one() / gamma(p.alpha);
    let phi = Fallible(|s: S| -> Result<S> {
        let v = p.f.call(s, y.eval(s)?)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFiniteValue {
                context: "right-hand side",
                t: s.as_f64(),
            })
        }
    });
    (0..nodes.len())
        .into_par_iter()
        .map(|i| {
            let t = nodes[i];
            if t == p.t0 {
                return Ok(S::zero());
            }
            let integral = kernel_integral(
                &p.z,
                &p.ts,
                p.t0,
                t,
                p.alpha - S::one(),
                &phi,
                &nodes[..=i],
                &p.quad,
            )?;
            Ok(zd[i] * scale * integral)
        })
        .collect()
}

/// `M_α(t) = (1/(t − t0)) ∫_{t0}^t (z(t) − z(s))^(α−1) z^Δ_ext(s) ds`, an
/// ordinary integral over the reals. On continuous segments `z^Δ = z'` and
/// the integral has a closed form; on gaps `z^Δ` is continued according to
/// the problem's [`MassExtension`].
pub fn m_alpha<S, Z, F>(p: &IVProblem<S, Z, F>, t: S) -> Result<S>
where
    S: Scalar,
    Z: UnaryFn<S> + Sync,
    F: BinaryFn<S> + Sync,
{
    let t = p.in_horizon(t)?;
    if t == p.t0 {
        return Err(Error::invalid("solver", "M_alpha needs t > t0"));
    }
    let alpha = p.alpha;
    let zt = p.z.call(t)?;
    let mut total = S::zero();
    for (c, d) in p.ts.dense_segments(p.t0, t)? {
        let zc = p.z.call(c)?;
        let zd = if d == t { zt } else { p.z.call(d)? };
        if !(zc < zd) || zd > zt {
            return Err(Error::NonMonotoneWeight { t: c.as_f64() });
        }
        total = total + ((zt - zc).powf(alpha) - (zt - zd).powf(alpha)) / alpha;
    }
    let rule = match p.mass {
        MassExtension::Auto => p.ts.jump_rule().copied(),
        _ => None,
    };
    let quad = QuadratureSpec {
        endpoint_exponent: S::zero(),
        ..p.quad
    };
    for gap in p.ts.scattered_points(p.t0, t)? {
        let (tau, sigma) = (gap.t, gap.sigma);
        let step = (p.z.call(sigma)? - p.z.call(tau)?) / gap.mu;
        let far = if p.mass == MassExtension::Step || rule.is_some() {
            step
        } else {
            p.weight_delta(sigma).unwrap_or(step)
        };
        let ext = |s: S| -> Result<S> {
            if let Some(next) = rule.and_then(|r| r.forward(s)) {
                return Ok((p.z.call(next)? - p.z.call(s)?) / (next - s));
            }
            Ok(step + (far - step) * (s - tau) / gap.mu)
        };
        let piece = if sigma < t {
            integrate(
                |s| Ok((zt - p.z.call(s)?).powf(alpha - S::one()) * ext(s)?),
                tau,
                sigma,
                &quad,
            )?
        } else {
            // w = (t − s)^α; (t − s)^(α−1) ds = −dw/α
            let root = S::one() / alpha;
            integrate(
                |w| {
                    let mut s = t - w.powf(root);
                    if s >= t {
                        s = t - S::epsilon() * t.abs().max(S::one());
                    }
                    let ratio = (zt - p.z.call(s)?) / (t - s);
                    Ok(ratio.powf(alpha - S::one()) * ext(s)? / alpha)
                },
                S::zero(),
                (t - tau).powf(alpha),
                &quad,
            )?
        };
        total = total + piece.value;
    }
    Ok(total / (t - p.t0))
}

/// Evaluates `b(t) = L z^Δ(t) M_α(t) (t − t0)/Γ(α)` on the solver grid.
pub fn check_contraction<S, Z, F>(
    p: &IVProblem<S, Z, F>,
    lipschitz: S,
    cfg: &SolverConfig<S>,
) -> Result<ContractionReport<S>>
where
    S: Scalar,
    Z: UnaryFn<S> + Sync,
    F: BinaryFn<S> + Sync,
{
    let nodes = grid_nodes(p, cfg)?;
    contraction_on(p, lipschitz, nodes)
}

fn contraction_on<S, Z, F>(
    p: &IVProblem<S, Z, F>,
    lipschitz: S,
    nodes: Vec<S>,
) -> Result<ContractionReport<S>>
where
    S: Scalar,
    Z: UnaryFn<S> + Sync,
    F: BinaryFn<S> + Sync,
{
    if !(lipschitz >= S::zero()) || !lipschitz.is_finite() {
        return Err(Error::invalid(
            "solver",
            format!("Lipschitz constant must be finite and >= 0 (got {lipschitz})"),
        ));
    }
    let scale = S::one() / gamma(p.alpha);
    let bound_fn: Vec<S> = nodes
        .par_iter()
        .map(|&t| {
            if t == p.t0 || lipschitz == S::zero() {
                return Ok(S::zero());
            }
            Ok(lipschitz * p.weight_delta(t)? * m_alpha(p, t)? * (t - p.t0) * scale)
        })
        .collect::<Result<_>>()?;
    let max_bound = bound_fn.iter().copied().fold(S::zero(), S::max);
    Ok(ContractionReport {
        lipschitz,
        nodes,
        bound_fn,
        max_bound,
        satisfied: max_bound < S::one(),
    })
}

/// Time samples and `y` values of a probe over `[−range, range]`.
fn probe_points<S, Z, F>(
    p: &IVProblem<S, Z, F>,
    probe: &Probe<S>,
    range: S,
) -> Result<(Vec<S>, Vec<S>)>
where
    S: Scalar,
    Z: UnaryFn<S> + Sync,
    F: BinaryFn<S> + Sync,
{
    if probe.samples < 2 || !(probe.y_range > S::zero()) {
        return Err(Error::invalid(
            "solver",
            "probe needs at least 2 samples and a positive y range",
        ));
    }
    let n_t = ((probe.samples as f64).sqrt().ceil() as usize).max(2);
    let mut ts = p.ts.sample(p.t0, p.end, n_t)?;
    if ts.len() > n_t {
        let stride = ts.len().div_ceil(n_t);
        let last = *ts.last().expect("nonempty sample");
        ts = ts.into_iter().step_by(stride).collect();
        if ts.last() != Some(&last) {
            ts.push(last);
        }
    }
    let n_y = (probe.samples / ts.len()).max(2);
    let ys = (0..n_y)
        .map(|k| -range + S::lit(2.0) * range * S::lit(k as f64) / S::lit((n_y - 1) as f64))
        .collect();
    Ok((ts, ys))
}

fn checked<S: Scalar>(v: S, t: S) -> Result<S> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFiniteValue {
            context: "right-hand side",
            t: t.as_f64(),
        })
    }
}

/// Empirical bound of `|f|` over `J × [−Y, Y]`. `bounded` compares it with
/// the bound over `J × [−2Y, 2Y]`; it says nothing about `y` outside the
/// probed range.
pub fn check_boundedness<S, Z, F>(
    p: &IVProblem<S, Z, F>,
    probe: &Probe<S>,
) -> Result<BoundednessReport<S>>
where
    S: Scalar,
    Z: UnaryFn<S> + Sync,
    F: BinaryFn<S> + Sync,
{
    let sup = |range: S| -> Result<(S, usize)> {
        let (ts, ys) = probe_points(p, probe, range)?;
        let mut best = S::zero();
        for &t in &ts {
            for &y in &ys {
                best = best.max(checked(p.f.call(t, y)?, t)?.abs());
            }
        }
        Ok((best, ts.len() * ys.len()))
    };
    let (n_hat, samples) = sup(probe.y_range)?;
    let (n_hat_wide, _) = sup(probe.y_range * S::lit(2.0))?;
    Ok(BoundednessReport {
        n_hat,
        n_hat_wide,
        bounded: n_hat_wide <= S::lit(1.01) * n_hat + S::lit(1e-12),
        y_range: probe.y_range,
        samples,
    })
}

/// Largest difference quotient `|f(t, y1) − f(t, y2)|/|y1 − y2|` over
/// neighbouring probe values and the pairs `(y, −y)`; a lower bound for the
/// Lipschitz constant on the probed range.
pub fn estimate_lipschitz<S, Z, F>(p: &IVProblem<S, Z, F>, probe: &Probe<S>) -> Result<S>
where
    S: Scalar,
    Z: UnaryFn<S> + Sync,
    F: BinaryFn<S> + Sync,
{
    let (ts, ys) = probe_points(p, probe, probe.y_range)?;
    let mut best = S::zero();
    for &t in &ts {
        let vals = ys
            .iter()
            .map(|&y| checked(p.f.call(t, y)?, t))
            .collect::<Result<Vec<_>>>()?;
        for k in 0..ys.len() - 1 {
            best = best.max((vals[k + 1] - vals[k]).abs() / (ys[k + 1] - ys[k]));
        }
        for (k, &y) in ys.iter().enumerate() {
            let m = ys.len() - 1 - k;
            if y > S::zero() {
                best = best.max((vals[k] - vals[m]).abs() / (y - ys[m]));
            }
        }
    }
    Ok(best)
}

/// Picard iteration `y_{k+1} = F(y_k)` from `y_0 ≡ 0`. A run that hits
/// `max_iterations` or overflows is reported with `converged = false`.
pub fn solve_picard<S, Z, F>(
    p: &IVProblem<S, Z, F>,
    cfg: &SolverConfig<S>,
) -> Result<SolveReport<S>>
where
    S: Scalar,
    Z: UnaryFn<S> + Sync,
    F: BinaryFn<S> + Sync,
{
    let nodes = grid_nodes(p, cfg)?;
    let zd = weight_deltas(p, &nodes)?;
    let linked = link_nodes(&p.ts, &nodes)?;
    let mut y = GridFunction::new(nodes.clone(), vec![S::zero(); nodes.len()], linked)?;
    let mut sup_deltas = Vec::new();
    let mut converged = false;
    let mut diverged = false;
    while sup_deltas.len() < cfg.max_iterations {
        let values = match sweep(p, &zd, &y) {
            Ok(v) => v,
            Err(Error::NonFiniteValue { .. }) if !sup_deltas.is_empty() => {
                diverged = true;
                break;
            }
            Err(e) => return Err(e),
        };
        let next = y.with_values(values)?;
        let delta = next.sup_distance(&y)?;
        sup_deltas.push(delta);
        if !delta.is_finite() {
            diverged = true;
            break;
        }
        y = next;
        if delta <= cfg.sup_norm_tol {
            converged = true;
            break;
        }
    }
    let residual_sup = if diverged {
        S::infinity()
    } else {
        match sweep(p, &zd, &y) {
            Ok(v) => y.with_values(v)?.sup_distance(&y)?,
            Err(Error::NonFiniteValue { .. }) => S::infinity(),
            Err(e) => return Err(e),
        }
    };
    let lipschitz = match cfg.lipschitz {
        Some(l) => l,
        None => estimate_lipschitz(p, &cfg.probe())?,
    };
    let contraction = contraction_on(p, lipschitz, nodes)?;
    Ok(SolveReport {
        solution: y,
        iterations: sup_deltas.len(),
        final_sup_delta: if diverged {
            S::infinity()
        } else {
            sup_deltas.last().copied().unwrap_or(S::zero())
        },
        residual_sup,
        contraction,
        converged,
        sup_deltas,
    })
}

/// `max |y(t) − F(y)(t)|` over the nodes of `y`, recomputed through the
/// plain Δ-integral in `s` with `z^Δ(s)` from [`delta_derivative`].
pub fn verify_solution<S, Z, F>(p: &IVProblem<S, Z, F>, y: &GridFunction<S>) -> Result<S>
where
    S: Scalar,
    Z: UnaryFn<S> + Sync,
    F: BinaryFn<S> + Sync,
{
    let nodes = y.nodes();
    let scale = S::one() / gamma(p.alpha);
    let quad = p.quad.with_endpoint_exponent(p.alpha - S::one());
    let residuals: Vec<S> = (0..nodes.len())
        .into_par_iter()
        .map(|i| {
            let t = nodes[i];
            let yt = y.values()[i];
            if t == p.t0 {
                return Ok(yt.abs());
            }
            let zt = p.z.call(t)?;
            let integrand = Fallible(|s: S| -> Result<S> {
                let kernel = (zt - p.z.call(s)?).powf(p.alpha - S::one());
                let zd = delta_derivative(&p.z, &p.ts, s)?;
                Ok(kernel * zd * checked(p.f.call(s, y.eval(s)?)?, s)?)
            });
            let integral =
                delta_integral_with_breaks(&integrand, &p.ts, p.t0, t, &quad, &nodes[..=i])?;
            let zdt = p.weight_delta(t)?;
            Ok((yt - zdt * scale * integral).abs())
        })
        .collect::<Result<_>>()?;
    Ok(residuals.into_iter().fold(S::zero(), S::max))
}

/// The pair `(z^Δ(t) I^α[D^α y](t), y(t))` with the generalized operators
/// based at `t0`.
pub fn roundtrip_check<S, Z, F, Y>(p: &IVProblem<S, Z, F>, y: &Y, t: S) -> Result<(S, S)>
where
    S: Scalar,
    Z: UnaryFn<S> + Sync,
    F: BinaryFn<S> + Sync,
    Y: UnaryFn<S> + ?Sized,
{
    let t = p.in_horizon(t)?;
    let rhs = y.call(t)?;
    if t == p.t0 {
        return Ok((S::zero(), rhs));
    }
    let inner = FracOpSpec::prevalidated(p.alpha, p.t0, Borrowed(&p.z), p.ts.clone(), p.quad);
    let outer = FracOpSpec::prevalidated(
        p.alpha,
        p.t0,
        Borrowed(&p.z),
        p.ts.clone(),
        p.quad.relaxed(1e-7),
    );
    let derivative = Fallible(|s: S| gen_frac_derivative(&inner, y, s));
    let lhs = p.weight_delta(t)? * gen_frac_integral(&outer, &derivative, t)?;
    Ok((lhs, rhs))
}
