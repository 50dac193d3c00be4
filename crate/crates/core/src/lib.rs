//! The modified error function `Φ_{δγ}`: the solution of
//!
//! ```text
//! ((1+δy)y')' + 2x(1+γy)y' = 0,   y(0) = 0,   y(+∞) = 1,   δ, γ > −1,
//! ```
//!
//! which reduces to the classical error function at `δ = γ = 0`.
//!
//! Two independent solvers are provided: the fixed-point iteration
//! [`picard::solve_phi`], which carries an a-posteriori error bound whenever
//! the contraction constant [`contraction::contraction_constants`] is below
//! one, and [`shooting::shoot`], which integrates the equation as an initial
//! value problem and bisects on the initial slope.
//!
//! ```
//! use moderf::{Params, SolverOptions, solve_phi};
//!
//! let p = Params::new(0.1, 0.1).unwrap();
//! let sol = solve_phi(&p, &SolverOptions::default()).unwrap();
//! assert!(sol.converged_under_guarantee);
//! assert_eq!(sol.phi.last(), 1.0);
//! ```

// Negated comparisons double as NaN rejection.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod contraction;
pub mod error;
pub mod grid;
pub mod picard;
pub mod shooting;
pub mod stefan;

pub use analysis::{
    check_properties, compare_solutions, erf_reference, ode_residual, PropertyReport,
};
pub use contraction::{
    contraction_constants, region_boundary, region_scan, Axis, ContractionReport, Params,
    RegionRecord,
};
pub use error::{Error, Result};
pub use grid::{Grid, GridFunction};
pub use picard::{apply_t, solve_phi, Method, PhiSolution, SolverOptions};
pub use shooting::{shoot, ShootingOptions};
pub use stefan::{solve_phase_parameters, StefanPhaseParams, ThermalCoefficients};
