use std::fs;
use std::path::PathBuf;

use clap::Args;
use serde::Deserialize;
use tsfrac::solver::MassExtension;
use tsfrac::{Descriptor, ExprFn, IVProblem, QuadratureSpec, SolverConfig, TimeScale, Variable};

use crate::error::{CliError, Context};
use crate::output::{Format, Output};

/// Problem file layout. Every key is optional; flags take precedence.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub alpha: Option<f64>,
    pub t0: Option<f64>,
    pub horizon: Option<f64>,
    pub z: Option<String>,
    pub f: Option<String>,
    pub h: Option<String>,
    pub at: Option<Vec<f64>>,
    pub timescale: Option<Descriptor<f64>>,
    pub solver: Option<SolverConfig<f64>>,
    pub quadrature: Option<QuadratureOverrides>,
    pub mass_extension: Option<MassExtension>,
}

#[derive(Debug, Default, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureOverrides {
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub max_subdivisions: Option<usize>,
}

/// Flags shared by every command that reads a problem.
#[derive(Debug, Args)]
pub struct CommonArgs {
    /// JSON problem file
    #[arg(long, value_name = "PATH")]
    pub problem: Option<PathBuf>,
    /// Result file; nothing is written without it
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Result format (default: from the --out extension, else csv)
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Fractional order in (0, 1)
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Base point (default: minimum of the time scale)
    #[arg(long)]
    pub t0: Option<f64>,
    /// Length of the interval J = [t0, t0 + horizon]
    #[arg(long)]
    pub horizon: Option<f64>,
    /// Weight z(t)
    #[arg(long, value_name = "EXPR")]
    pub z: Option<String>,
    /// Time-scale descriptor as inline JSON
    #[arg(long, value_name = "JSON")]
    pub timescale: Option<String>,
    #[arg(long)]
    pub rel_tol: Option<f64>,
    #[arg(long)]
    pub abs_tol: Option<f64>,
    /// Subdivision budget of the adaptive quadrature
    #[arg(long)]
    pub max_subdiv: Option<usize>,
}

/// Problem file merged with the command-line overrides.
#[derive(Debug)]
pub struct Settings {
    pub file: ProblemFile,
    pub output: Output,
}

impl Settings {
    pub fn load(args: &CommonArgs) -> Result<Self, CliError> {
        let mut file = match &args.problem {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| {
                    CliError::config(format!(
                        "cli: cannot read problem file {}: {e}",
                        path.display()
                    ))
                })?;
                serde_json::from_str(&text).map_err(|e| {
                    CliError::config(format!("cli: problem file {}: {e}", path.display()))
                })?
            }
            None => ProblemFile::default(),
        };
        if let Some(src) = &args.timescale {
            let d = serde_json::from_str(src)
                .map_err(|e| CliError::config(format!("cli: --timescale {src:?}: {e}")))?;
            file.timescale = Some(d);
        }
        file.alpha = args.alpha.or(file.alpha);
        file.t0 = args.t0.or(file.t0);
        file.horizon = args.horizon.or(file.horizon);
        if let Some(z) = &args.z {
            file.z = Some(z.clone());
        }
        let mut q = file.quadrature.unwrap_or_default();
        q.rel_tol = args.rel_tol.or(q.rel_tol);
        q.abs_tol = args.abs_tol.or(q.abs_tol);
        q.max_subdivisions = args.max_subdiv.or(q.max_subdivisions);
        file.quadrature = Some(q);
        Ok(Settings {
            file,
            output: Output::new(args.out.clone(), args.format),
        })
    }

    pub fn timescale(&self) -> Result<TimeScale<f64>, CliError> {
        let d = self.file.timescale.as_ref().ok_or_else(|| {
            CliError::config("cli: no time scale given (set `timescale` in the problem file or pass --timescale)")
        })?;
        d.build().at("timescale")
    }

    pub fn alpha(&self) -> Result<f64, CliError> {
        self.file.alpha.ok_or_else(|| {
            CliError::config(
                "cli: no order given (set `alpha` in the problem file or pass --alpha)",
            )
        })
    }

    /// Base point, defaulting to the minimum of the scale.
    pub fn t0(&self, ts: &TimeScale<f64>) -> f64 {
        self.file.t0.unwrap_or(ts.min())
    }

    /// Right end of `J`, defaulting to the maximum of the scale.
    pub fn end(&self, ts: &TimeScale<f64>) -> f64 {
        match self.file.horizon {
            Some(h) => self.t0(ts) + h,
            None => ts.max(),
        }
    }

    pub fn z(&self) -> Result<ExprFn, CliError> {
        expr("z", self.file.z.as_deref().unwrap_or("t"), &[Variable::T])
    }

    pub fn quadrature(&self) -> Result<QuadratureSpec<f64>, CliError> {
        let mut spec = QuadratureSpec::default();
        let q = self.file.quadrature.unwrap_or_default();
        spec.rel_tol = q.rel_tol.unwrap_or(spec.rel_tol);
        spec.abs_tol = q.abs_tol.unwrap_or(spec.abs_tol);
        spec.max_subdivisions = q.max_subdivisions.unwrap_or(spec.max_subdivisions);
        spec.validate().at("quadrature settings")?;
        Ok(spec)
    }

    pub fn solver_config(
        &self,
        max_iter: Option<usize>,
        nodes: Option<usize>,
        lipschitz: Option<f64>,
    ) -> Result<SolverConfig<f64>, CliError> {
        let mut cfg = self.file.solver.unwrap_or_default();
        cfg.max_iterations = max_iter.unwrap_or(cfg.max_iterations);
        cfg.min_segment_nodes = nodes.unwrap_or(cfg.min_segment_nodes);
        cfg.lipschitz = lipschitz.or(cfg.lipschitz);
        cfg.validate().at("solver settings")?;
        Ok(cfg)
    }

    pub fn problem(&self, f: Option<&str>) -> Result<IVProblem<f64, ExprFn, ExprFn>, CliError> {
        let ts = self.timescale()?;
        let alpha = self.alpha()?;
        let t0 = self.t0(&ts);
        let horizon = self.end(&ts) - t0;
        let source = f.or(self.file.f.as_deref()).ok_or_else(|| {
            CliError::config(
                "cli: no right-hand side given (set `f` in the problem file or pass --f)",
            )
        })?;
        let f = expr("f", source, &[Variable::T, Variable::Y])?;
        let p = IVProblem::new(alpha, t0, horizon, self.z()?, f, ts)
            .at(format_args!(
                "problem alpha = {alpha}, t0 = {t0}, horizon = {horizon}"
            ))?
            .with_quadrature(self.quadrature()?)
            .at("quadrature settings")?;
        Ok(p.with_mass_extension(self.file.mass_extension.unwrap_or_default()))
    }
}

pub fn expr(name: &str, source: &str, signature: &[Variable]) -> Result<ExprFn, CliError> {
    ExprFn::parse(source, signature)
        .map_err(tsfrac::Error::from)
        .at(format_args!("expression `{name}` = {source:?}"))
}
