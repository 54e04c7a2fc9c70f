//! Generalized Riemann–Liouville fractional calculus on time scales.
//!
//! A time scale is a nonempty closed subset of the real line. This crate
//! represents bounded windows of such sets as finite unions of closed
//! intervals and isolated points and builds on top of them:
//!
//! - [`timescale`]: jump operators, graininess, point classification, `T^κ`.
//! - [`exprlang`]: a small expression language for user-supplied functions,
//!   plus the gamma function.
//! - [`calculus`]: delta derivative and delta integral, singular-weight
//!   quadrature, the step extension of a function to the reals.
//! - [`fracops`]: classical and generalized (with respect to a weight `z`)
//!   fractional integrals and derivatives.
//! - [`solver`]: Picard iteration for `D^α_z y = f(t, y)`, contraction and
//!   boundedness screening, residual checks.
//! - [`oracle`]: closed forms, exact finite sums and a product-integration
//!   Volterra solver used as independent references.
//!
//! All numerics are generic over [`Scalar`] (`f64` and `f32`); the `*64`
//! aliases below pin the common double-precision instantiation.

// `!(a > b)` is the NaN-rejecting form used throughout
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod calculus;
pub mod error;
pub mod exprlang;
pub mod fracops;
pub mod func;
pub mod oracle;
pub mod scalar;
pub mod solver;
pub mod timescale;

pub use calculus::{QuadratureSpec, RealExtension};
pub use error::{Error, Result};
pub use exprlang::{gamma, ExprError, ExprFn, Variable};
pub use fracops::{FracOpSpec, GridFunction};
pub use func::{BinaryFn, Fallible, Identity, UnaryFn};
pub use scalar::Scalar;
pub use solver::{
    BoundednessReport, ContractionReport, IVProblem, MassExtension, Probe, SolveReport,
    SolverConfig,
};
pub use timescale::{Descriptor, Piece, PointClass, TimeScale};

pub type TimeScale64 = TimeScale<f64>;
pub type TimeScale32 = TimeScale<f32>;
pub type QuadratureSpec64 = QuadratureSpec<f64>;
pub type GridFunction64 = GridFunction<f64>;
pub type SolverConfig64 = SolverConfig<f64>;
pub type SolveReport64 = SolveReport<f64>;
pub type ContractionReport64 = ContractionReport<f64>;
pub type Descriptor64 = Descriptor<f64>;
