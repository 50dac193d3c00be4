use thiserror::Error;

use crate::grid::GridFunction;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grids do not match")]
    GridMismatch,

    #[error("x = {x} lies outside [0, {x_max}]")]
    OutOfDomain { x: f64, x_max: f64 },

    #[error("{name} outside (−1,∞): 1+{name} = {one_plus} is below the floor 1e-6")]
    ParamOutOfDomain { name: &'static str, one_plus: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("function is not in K: {0}")]
    NotInK(String),

    #[error(
        "picard iteration did not converge after {iterations} iterations (last step {last_step:e})"
    )]
    NoConvergence {
        iterations: usize,
        last_step: f64,
        last_iterate: Box<GridFunction>,
    },

    #[error("singular coefficient 1+δy = {denominator:e} at x = {x}, y = {y}")]
    Singularity { x: f64, y: f64, denominator: f64 },

    #[error("could not bracket the initial slope: terminal value {terminal} < 1 at slope {slope}")]
    BracketFailure { slope: f64, terminal: f64 },

    #[error("terminal value is not increasing in the initial slope near {slope}")]
    NonMonotoneTerminal { slope: f64 },

    #[error("unphysical coefficient {name} = {value} at θ = {theta}")]
    Unphysical {
        name: &'static str,
        theta: f64,
        value: f64,
    },

    #[error("infeasible phase parameters: {0}")]
    Infeasible(String),

    #[error("consistency sweep did not converge after {sweeps} sweeps (residual {residual:e})")]
    SweepNoConvergence { sweeps: usize, residual: f64 },
}
