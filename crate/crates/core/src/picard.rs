//! Fixed-point construction of the modified error function.
//!
//! For `h` in K the linear problem `((1+δh)y')' + 2x(1+γh)y' = 0` is solved
//! in closed form by `T(h) = F(·;h) / F(+∞;h)` with
//!
//! ```text
//! F(x;h) = ∫_0^x exp(−∫_0^w 2z(1+γh)/(1+δh) dz) / (1+δh(w)) dw
//! ```
//!
//! and the solution is the fixed point of `T`. Starting from `h ≡ 0` the
//! first iterate is the classical error function.

use serde::{Deserialize, Serialize};

use crate::contraction::{contraction_constants, Params};
use crate::error::{Error, Result};
use crate::grid::{Grid, GridFunction, DEFAULT_POINTS};

/// Smallest truncation point returned by [`truncation_bound`].
pub const MIN_X_MAX: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Picard,
    Shooting,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Method::Picard => write!(f, "picard"),
            Method::Shooting => write!(f, "shooting"),
        }
    }
}

/// A computed `Φ_{δγ}` on `[0, x_max]`.
#[derive(Debug, Clone)]
pub struct PhiSolution {
    pub params: Params,
    pub phi: GridFunction,
    /// `Φ'(0)`, equal to `1 / f_infinity`.
    pub derivative_at_zero: f64,
    /// `F(+∞;Φ)`, truncated at `x_max`.
    pub f_infinity: f64,
    pub method: Method,
    pub error_estimate: f64,
    /// Picard iterations, or bisection steps on the initial slope.
    pub iterations_or_steps: usize,
    /// `M(δ,γ) < 1` and the stopping criterion was met.
    pub converged_under_guarantee: bool,
    /// Contraction constant `M(δ,γ)`.
    pub contraction: f64,
    /// Set when the result carries no uniqueness guarantee.
    pub warning: Option<String>,
}

impl PhiSolution {
    pub fn x_max(&self) -> f64 {
        self.phi.grid().x_max()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iterations: usize,
    pub grid_points: usize,
    pub x_max_override: Option<f64>,
    pub tail_epsilon: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iterations: 200,
            grid_points: DEFAULT_POINTS,
            x_max_override: None,
            tail_epsilon: 1e-16,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: String| Err(Error::InvalidArgument(what));
        if !(self.tol > 0.0) {
            return bad(format!("tol must be positive, got {}", self.tol));
        }
        if self.max_iterations == 0 {
            return bad("max_iterations must be positive".into());
        }
        if self.grid_points < 201 || self.grid_points.is_multiple_of(2) {
            return bad(format!(
                "grid_points must be odd and >= 201, got {}",
                self.grid_points
            ));
        }
        if let Some(x) = self.x_max_override {
            if !(x > 0.0 && x.is_finite()) {
                return bad(format!("x_max must be positive, got {x}"));
            }
        }
        if !(self.tail_epsilon > 0.0 && self.tail_epsilon < 1.0) {
            return bad(format!(
                "tail_epsilon must lie in (0,1), got {}",
                self.tail_epsilon
            ));
        }
        Ok(())
    }

    pub fn x_max_for(&self, p: &Params) -> f64 {
        self.x_max_override
            .unwrap_or_else(|| truncation_bound(p, self.tail_epsilon))
    }
}

/// Truncation point where the Gaussian envelope `exp(−c x²)` of the integrand
/// of `F` drops to `tail_epsilon`, with `c = min(1,1+γ)/max(1,1+δ)`.
pub fn truncation_bound(p: &Params, tail_epsilon: f64) -> f64 {
    let b = p.bounds();
    let c = b.min_g / b.max_d;
    ((1.0 / tail_epsilon).ln() / c).sqrt().max(MIN_X_MAX)
}

/// Returns `F(·;h)` at every grid point and `F(x_max;h)`.
pub fn compute_f(h: &GridFunction, p: &Params) -> Result<(GridFunction, f64)> {
    p.validate()?;
    h.check_in_k()?;
    let (delta, gamma) = (p.delta, p.gamma);
    let exponent = h
        .map(|z, hz| 2.0 * z * (1.0 + gamma * hz) / (1.0 + delta * hz))?
        .cumulative_integral();
    let integrand = GridFunction::new(
        h.grid().clone(),
        exponent
            .values()
            .iter()
            .zip(h.values())
            .map(|(e, hz)| (-e).exp() / (1.0 + delta * hz))
            .collect(),
    )?;
    let f = integrand.cumulative_integral();
    let f_inf = f.last();
    Ok((f, f_inf))
}

/// `T(h) = F(·;h) / F(x_max;h)`, together with the normalizer.
pub fn apply_t_with_norm(h: &GridFunction, p: &Params) -> Result<(GridFunction, f64)> {
    let (f, f_inf) = compute_f(h, p)?;
    let values = f.into_values().into_iter().map(|v| v / f_inf).collect();
    Ok((GridFunction::new(h.grid().clone(), values)?, f_inf))
}

pub fn apply_t(h: &GridFunction, p: &Params) -> Result<GridFunction> {
    apply_t_with_norm(h, p).map(|(t, _)| t)
}

/// Banach a-posteriori bound `M/(1−M)·‖h_{k+1} − h_k‖`, defined for `M < 1`.
pub fn posterior_error_bound(m: f64, last_step: f64) -> Option<f64> {
    (m < 1.0).then(|| m / (1.0 - m) * last_step)
}

/// Iterates `h_{k+1} = T(h_k)` from `h_0 ≡ 0`.
///
/// Inside the contraction region the loop stops once the a-posteriori bound
/// drops below `tol`; outside it falls back to `‖h_{k+1} − h_k‖ ≤ tol` and the
/// result is flagged as carrying no guarantee. At least two applications of
/// `T` are made so the returned iterate always has a measured step.
pub fn solve_phi(p: &Params, opts: &SolverOptions) -> Result<PhiSolution> {
    p.validate()?;
    opts.validate()?;
    let report = contraction_constants(p)?;
    let grid = Grid::uniform(opts.x_max_for(p), opts.grid_points)?;

    let mut h = GridFunction::zeros(&grid);
    let mut last_step = f64::INFINITY;
    for k in 1..=opts.max_iterations {
        let (next, f_inf) = apply_t_with_norm(&h, p)?;
        last_step = next.sup_norm_diff(&h)?;
        h = next;
        if k < 2 {
            continue;
        }
        let (done, estimate, guaranteed) = match posterior_error_bound(report.m, last_step) {
            Some(bound) => (bound <= opts.tol, bound, true),
            None => (last_step <= opts.tol, last_step, false),
        };
        if done {
            return Ok(PhiSolution {
                params: *p,
                phi: h,
                derivative_at_zero: 1.0 / f_inf,
                f_infinity: f_inf,
                method: Method::Picard,
                error_estimate: estimate,
                iterations_or_steps: k,
                converged_under_guarantee: guaranteed,
                contraction: report.m,
                warning: (!guaranteed).then(|| no_guarantee_warning(report.m)),
            });
        }
    }
    Err(Error::NoConvergence {
        iterations: opts.max_iterations,
        last_step,
        last_iterate: Box::new(h),
    })
}

pub(crate) fn no_guarantee_warning(m: f64) -> String {
    format!("M(delta,gamma) = {m} >= 1: solution computed without uniqueness guarantee")
}
