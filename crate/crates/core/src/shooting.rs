//! Shooting on the initial slope: an independent route to `Φ_{δγ}`.
//!
//! The boundary value problem is written as the first-order system
//! `(y, y')' = (y', y'')` with
//! `y'' = −(δ y'² + 2x(1+γy) y') / (1+δy)`, integrated by classical RK4 from
//! `(0, s)`. The terminal value `y(x_max)` grows with `s`, so the slope that
//! hits `y(x_max) = 1` is found by bracketing and bisection.

use crate::contraction::{contraction_constants, Params};
use crate::error::{Error, Result};
use crate::grid::{Grid, GridFunction, DEFAULT_POINTS};
use crate::picard::{no_guarantee_warning, truncation_bound, Method, PhiSolution, SolverOptions};

/// Floor on `1+δy` below which the equation is treated as singular.
pub const SINGULAR_FLOOR: f64 = 1e-12;

/// Trajectories leaving this band are stopped early.
pub const ESCAPE_BAND: (f64, f64) = (-0.1, 1.5);

#[derive(Debug, Clone, PartialEq)]
pub struct ShootingOptions {
    pub x_max: f64,
    pub step_count: usize,
    /// Samples of the returned solution; `step_count` must be a multiple of
    /// `output_points − 1`.
    pub output_points: usize,
    pub slope_bracket_hi_start: f64,
    pub tol_boundary: f64,
    pub max_bracket_doublings: usize,
}

impl ShootingOptions {
    /// Defaults with `x_max` from [`truncation_bound`] at `tail_epsilon = 1e-16`.
    pub fn for_params(p: &Params) -> Self {
        Self::with_x_max(truncation_bound(p, 1e-16))
    }

    /// Matches the grid of a fixed-point solve with `opts`, so that both
    /// solutions share sample points; at least 20000 RK4 steps are used.
    pub fn matching(p: &Params, opts: &SolverOptions) -> Self {
        let intervals = opts.grid_points.saturating_sub(1).max(1);
        Self {
            output_points: opts.grid_points,
            step_count: intervals * 20_000usize.div_ceil(intervals),
            ..Self::with_x_max(opts.x_max_for(p))
        }
    }

    pub fn with_x_max(x_max: f64) -> Self {
        Self {
            x_max,
            step_count: 20_000,
            output_points: DEFAULT_POINTS,
            slope_bracket_hi_start: 2.0,
            tol_boundary: 1e-12,
            max_bracket_doublings: 60,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: String| Err(Error::InvalidArgument(what));
        if !(self.x_max > 0.0 && self.x_max.is_finite()) {
            return bad(format!("x_max must be positive, got {}", self.x_max));
        }
        if self.output_points < 3 || self.output_points.is_multiple_of(2) {
            return bad(format!(
                "output_points must be odd and >= 3, got {}",
                self.output_points
            ));
        }
        if self.step_count == 0 || !self.step_count.is_multiple_of(self.output_points - 1) {
            return bad(format!(
                "step_count {} is not a positive multiple of {}",
                self.step_count,
                self.output_points - 1
            ));
        }
        if !(self.slope_bracket_hi_start > 0.0) || !(self.tol_boundary > 0.0) {
            return bad("bracket start and boundary tolerance must be positive".into());
        }
        if self.max_bracket_doublings == 0 {
            return bad("max_bracket_doublings must be positive".into());
        }
        Ok(())
    }
}

/// `y''` from the expanded form of `((1+δy)y')' + 2x(1+γy)y' = 0`.
pub fn ode_second_derivative(x: f64, y: f64, yp: f64, p: &Params) -> Result<f64> {
    let denominator = 1.0 + p.delta * y;
    if !(denominator >= SINGULAR_FLOOR) {
        return Err(Error::Singularity { x, y, denominator });
    }
    Ok(-(p.delta * yp * yp + 2.0 * x * (1.0 + p.gamma * y) * yp) / denominator)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IvpExit {
    Completed,
    /// Left [`ESCAPE_BAND`] at `x`; `above` tells which side.
    Escaped {
        x: f64,
        above: bool,
    },
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub grid: Grid,
    /// `y` on `grid`; shorter than the grid when the trajectory escaped.
    pub samples: Vec<f64>,
    pub terminal_y: f64,
    pub terminal_slope: f64,
    pub exit: IvpExit,
}

impl Trajectory {
    pub fn into_grid_function(self) -> Result<GridFunction> {
        if self.exit != IvpExit::Completed {
            return Err(Error::InvalidArgument(
                "trajectory did not reach x_max".into(),
            ));
        }
        GridFunction::new(self.grid, self.samples)
    }

    /// The trajectory overshot the target `y(x_max) = 1`.
    fn overshoots(&self) -> bool {
        match self.exit {
            IvpExit::Completed => self.terminal_y > 1.0,
            IvpExit::Escaped { above, .. } => above,
        }
    }

    fn terminal_key(&self) -> f64 {
        match self.exit {
            IvpExit::Completed => self.terminal_y,
            IvpExit::Escaped { above: true, .. } => f64::INFINITY,
            IvpExit::Escaped { above: false, .. } => f64::NEG_INFINITY,
        }
    }
}

/// Fixed-step RK4 for `(y, y')` from `(0, slope0)` to `x_max`.
pub fn integrate_ivp(slope0: f64, p: &Params, opts: &ShootingOptions) -> Result<Trajectory> {
    opts.validate()?;
    if !(slope0 >= 0.0 && slope0.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "initial slope must be non-negative, got {slope0}"
        )));
    }
    let grid = Grid::uniform(opts.x_max, opts.output_points)?;
    let stride = opts.step_count / (opts.output_points - 1);
    let h = opts.x_max / opts.step_count as f64;
    let rhs = |x: f64, y: f64, yp: f64| -> Result<(f64, f64)> {
        Ok((yp, ode_second_derivative(x, y, yp, p)?))
    };

    let mut samples = Vec::with_capacity(opts.output_points);
    samples.push(0.0);
    let (mut y, mut yp) = (0.0f64, slope0);
    for i in 0..opts.step_count {
        let x = i as f64 * h;
        let (k1y, k1p) = rhs(x, y, yp)?;
        let (k2y, k2p) = rhs(x + 0.5 * h, y + 0.5 * h * k1y, yp + 0.5 * h * k1p)?;
        let (k3y, k3p) = rhs(x + 0.5 * h, y + 0.5 * h * k2y, yp + 0.5 * h * k2p)?;
        let (k4y, k4p) = rhs(x + h, y + h * k3y, yp + h * k3p)?;
        let y_next = y + h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        let yp_next = yp + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        let x_next = (i + 1) as f64 * h;
        if !(y_next.is_finite() && yp_next.is_finite()) {
            return Err(Error::Singularity {
                x: x_next,
                y,
                denominator: 1.0 + p.delta * y,
            });
        }
        y = y_next;
        yp = yp_next;
        if (i + 1) % stride == 0 {
            samples.push(y);
        }
        if y < ESCAPE_BAND.0 || y > ESCAPE_BAND.1 {
            return Ok(Trajectory {
                grid,
                samples,
                terminal_y: y,
                terminal_slope: yp,
                exit: IvpExit::Escaped {
                    x: x_next,
                    above: y > ESCAPE_BAND.1,
                },
            });
        }
    }
    // the last sample sits exactly at x_max
    if let Some(last) = samples.last_mut() {
        *last = y;
    }
    Ok(Trajectory {
        grid,
        samples,
        terminal_y: y,
        terminal_slope: yp,
        exit: IvpExit::Completed,
    })
}

/// Integrates and folds a singularity reached above `y = 1` into an
/// overshooting trajectory: `y` increases along the trajectory, so it has
/// already passed the target.
fn shot(slope: f64, p: &Params, opts: &ShootingOptions) -> Result<Trajectory> {
    match integrate_ivp(slope, p, opts) {
        Err(Error::Singularity { x, y, .. }) if y > 1.0 => Ok(Trajectory {
            grid: Grid::uniform(opts.x_max, opts.output_points)?,
            samples: Vec::new(),
            terminal_y: y,
            terminal_slope: f64::NAN,
            exit: IvpExit::Escaped { x, above: true },
        }),
        other => other,
    }
}

/// Solves the boundary value problem by shooting on `y'(0)`.
pub fn shoot(p: &Params, opts: &ShootingOptions) -> Result<PhiSolution> {
    p.validate()?;
    opts.validate()?;
    let report = contraction_constants(p)?;

    let mut lo = 0.0;
    let mut lo_traj = shot(lo, p, opts)?;
    let mut hi = opts.slope_bracket_hi_start;
    let mut hi_traj = shot(hi, p, opts)?;
    let mut doublings = 0;
    while !hi_traj.overshoots() {
        if doublings == opts.max_bracket_doublings {
            return Err(Error::BracketFailure {
                slope: hi,
                terminal: hi_traj.terminal_y,
            });
        }
        lo = hi;
        lo_traj = hi_traj;
        hi *= 2.0;
        hi_traj = shot(hi, p, opts)?;
        doublings += 1;
    }

    let mut steps = 0;
    while (1.0 - lo_traj.terminal_key()).abs() > opts.tol_boundary {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let mid_traj = shot(mid, p, opts)?;
        let key = mid_traj.terminal_key();
        if key < lo_traj.terminal_key() || key > hi_traj.terminal_key() {
            return Err(Error::NonMonotoneTerminal { slope: mid });
        }
        steps += 1;
        if mid_traj.overshoots() {
            hi = mid;
            hi_traj = mid_traj;
        } else {
            lo = mid;
            lo_traj = mid_traj;
        }
    }

    // prefer the undershooting end: it keeps every sample at or below 1
    let (slope, traj) = if (1.0 - lo_traj.terminal_key()).abs() <= opts.tol_boundary
        || (hi_traj.terminal_key() - 1.0) >= (1.0 - lo_traj.terminal_key())
    {
        (lo, lo_traj)
    } else {
        (hi, hi_traj)
    };
    let error_estimate = (traj.terminal_y - 1.0).abs();
    let met = error_estimate <= opts.tol_boundary;
    let guaranteed = report.in_region && met;
    let phi = traj.into_grid_function()?;
    Ok(PhiSolution {
        params: *p,
        phi,
        derivative_at_zero: slope,
        f_infinity: 1.0 / slope,
        method: Method::Shooting,
        error_estimate,
        iterations_or_steps: steps,
        converged_under_guarantee: guaranteed,
        contraction: report.m,
        warning: (!report.in_region).then(|| no_guarantee_warning(report.m)),
    })
}
