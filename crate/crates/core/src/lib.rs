//! Numerical laboratory for radial semistable solutions of
//! -Δu = λ f(u) on the unit ball, and for the a priori estimates that
//! control their regularity.
//!
//! The pipeline:
//!
//! 1. [`nonlinearity`] represents f with exact first and second
//!    derivatives (built-in families or parsed expressions run through
//!    second-order jets).
//! 2. [`asymptotics`] classifies the tail of f: the convexity ratio
//!    liminf/limsup (τ₋, τ₊) and a battery of growth conditions.
//! 3. [`verdict`] turns the classification into certificates — uniform L¹
//!    bounds on f̃(u)^α/u^σ — and aggregates them into per-dimension
//!    regularity guarantees with open thresholds.
//! 4. [`radial`] computes the actual solution branch λ(m) by
//!    scaling-shooting, locates the fold, and [`eigen`] measures
//!    semistability via the principal eigenvalue of the linearization.
//! 5. [`estimates`] and [`analysis`] evaluate the estimate functionals on
//!    the computed branch, verifying the predicted uniform bounds.
//!
//! The [`verify`] module packages the whole acceptance suite; the CLI
//! drives everything from the command line.

pub mod analysis;
pub mod asymptotics;
pub mod eigen;
pub mod estimates;
pub mod expr;
pub mod jet;
pub mod nonlinearity;
pub mod ode;
pub mod quad;
pub mod radial;
pub mod verdict;
pub mod verify;

pub use expr::ExprAst;
pub use nonlinearity::{Nonlinearity, ValidationReport};
