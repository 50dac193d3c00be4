//! Linear thermal coefficients and the (δ, γ) consistency relations of the
//! one-phase solidification problem.
//!
//! For a front at `s(t) = 2λ√(a t)` the similarity solution exists when
//! `γ Φ_{δγ}(λ) = α` and `δ Φ_{δγ}(λ) = β`. Given `(α, β, λ)` we solve these
//! two relations for `(δ, γ)`.

use serde::{Deserialize, Serialize};

use crate::contraction::{contraction_constants, Params, PARAM_FLOOR};
use crate::error::{Error, Result};
use crate::picard::{solve_phi, Method, PhiSolution, SolverOptions};
use crate::shooting::{shoot, ShootingOptions};

/// `c(θ) = c₀(1 + α(θ−θₒ)/(θᵢ−θₒ))`, `k(θ) = k₀(1 + β(θ−θₒ)/(θᵢ−θₒ))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalCoefficients {
    /// Reference specific heat, J/(kg·K).
    pub c_ref: f64,
    /// Reference conductivity, W/(m·K).
    pub k_ref: f64,
    pub alpha: f64,
    pub beta: f64,
    /// Initial (phase-change) temperature, K.
    pub theta_i: f64,
    /// Boundary temperature, K.
    pub theta_o: f64,
}

impl ThermalCoefficients {
    pub fn new(
        c_ref: f64,
        k_ref: f64,
        alpha: f64,
        beta: f64,
        theta_i: f64,
        theta_o: f64,
    ) -> Result<Self> {
        if !(c_ref > 0.0 && k_ref > 0.0) {
            return Err(Error::InvalidArgument(
                "reference specific heat and conductivity must be positive".into(),
            ));
        }
        if !(theta_o < theta_i) {
            return Err(Error::InvalidArgument(format!(
                "boundary temperature {theta_o} must lie below the initial temperature {theta_i}"
            )));
        }
        Ok(Self {
            c_ref,
            k_ref,
            alpha,
            beta,
            theta_i,
            theta_o,
        })
    }

    fn offset(&self, theta: f64) -> f64 {
        (theta - self.theta_o) / (self.theta_i - self.theta_o)
    }

    pub fn specific_heat(&self, theta: f64) -> Result<f64> {
        let value = self.c_ref * (1.0 + self.alpha * self.offset(theta));
        positive("specific heat", theta, value)
    }

    pub fn thermal_conductivity(&self, theta: f64) -> Result<f64> {
        let value = self.k_ref * (1.0 + self.beta * self.offset(theta));
        positive("thermal conductivity", theta, value)
    }
}

fn positive(name: &'static str, theta: f64, value: f64) -> Result<f64> {
    if value > 0.0 {
        Ok(value)
    } else {
        Err(Error::Unphysical { name, theta, value })
    }
}

pub fn specific_heat(theta: f64, tc: &ThermalCoefficients) -> Result<f64> {
    tc.specific_heat(theta)
}

pub fn thermal_conductivity(theta: f64, tc: &ThermalCoefficients) -> Result<f64> {
    tc.thermal_conductivity(theta)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StefanPhaseParams {
    pub alpha: f64,
    pub beta: f64,
    /// Front coefficient `λ = s(t) / (2√(a t))`, with `s` the front position
    /// and `a` the diffusivity of the solid.
    pub lambda: f64,
    pub delta: f64,
    pub gamma: f64,
    pub phi_at_lambda: f64,
    /// `|γ Φ(λ) − α|`.
    pub residual_alpha: f64,
    /// `|δ Φ(λ) − β|`.
    pub residual_beta: f64,
    pub sweeps: usize,
    /// Solver used for `Φ` in the final sweep.
    pub method: Method,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StefanOptions {
    pub tol: f64,
    pub max_sweeps: usize,
    pub solver: SolverOptions,
}

impl Default for StefanOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_sweeps: 100,
            solver: SolverOptions::default(),
        }
    }
}

/// `Φ_{δγ}` by the fixed-point map inside the contraction region, by
/// shooting outside it.
pub fn solve_phi_auto(p: &Params, opts: &SolverOptions) -> Result<PhiSolution> {
    if contraction_constants(p)?.in_region {
        solve_phi(p, opts)
    } else {
        shoot(p, &ShootingOptions::matching(p, opts))
    }
}

/// `Φ_{δγ}` by the method other than the one [`solve_phi_auto`] picks.
pub fn solve_phi_other(p: &Params, opts: &SolverOptions) -> Result<PhiSolution> {
    if contraction_constants(p)?.in_region {
        shoot(p, &ShootingOptions::matching(p, opts))
    } else {
        solve_phi(p, opts)
    }
}

pub fn solve_phase_parameters(
    alpha: f64,
    beta: f64,
    lambda: f64,
    tol: f64,
) -> Result<StefanPhaseParams> {
    solve_phase_parameters_with(
        alpha,
        beta,
        lambda,
        &StefanOptions {
            tol,
            ..StefanOptions::default()
        },
    )
}

/// Sweeps `δ ← β/Φ_{δγ}(λ)`, `γ ← α/Φ_{δγ}(λ)` from `(δ, γ) = (β, α)`.
///
/// An update that would land at or below `−1` is halved towards the current
/// value; if it still does the inputs are reported infeasible.
pub fn solve_phase_parameters_with(
    alpha: f64,
    beta: f64,
    lambda: f64,
    opts: &StefanOptions,
) -> Result<StefanPhaseParams> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "lambda must be positive, got {lambda}"
        )));
    }
    if !(alpha.is_finite() && beta.is_finite()) {
        return Err(Error::InvalidArgument(
            "alpha and beta must be finite".into(),
        ));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tol must be positive, got {}",
            opts.tol
        )));
    }
    let floor = -1.0 + PARAM_FLOOR;
    let mut delta = beta;
    let mut gamma = alpha;
    if delta <= floor || gamma <= floor {
        return Err(Error::Infeasible(format!(
            "starting point (delta, gamma) = ({delta}, {gamma}) lies outside (-1, inf)"
        )));
    }

    let mut residual = f64::INFINITY;
    for sweep in 1..=opts.max_sweeps {
        let p = Params::new(delta, gamma)?;
        let sol = solve_phi_auto(&p, &opts.solver)?;
        if lambda > sol.x_max() {
            return Err(Error::InvalidArgument(format!(
                "lambda = {lambda} lies beyond the truncated domain [0, {}]",
                sol.x_max()
            )));
        }
        let phi = sol.phi.eval(lambda)?;
        if !(phi > 0.0) {
            return Err(Error::Infeasible(format!(
                "Phi(lambda) = {phi} is not positive"
            )));
        }
        let residual_alpha = (gamma * phi - alpha).abs();
        let residual_beta = (delta * phi - beta).abs();
        residual = residual_alpha.max(residual_beta);
        if residual <= opts.tol {
            check_signs(alpha, beta, delta, gamma)?;
            return Ok(StefanPhaseParams {
                alpha,
                beta,
                lambda,
                delta,
                gamma,
                phi_at_lambda: phi,
                residual_alpha,
                residual_beta,
                sweeps: sweep,
                method: sol.method,
            });
        }
        delta = damped(delta, beta / phi, floor, "delta")?;
        gamma = damped(gamma, alpha / phi, floor, "gamma")?;
    }
    Err(Error::SweepNoConvergence {
        sweeps: opts.max_sweeps,
        residual,
    })
}

fn damped(current: f64, target: f64, floor: f64, name: &str) -> Result<f64> {
    if target > floor {
        return Ok(target);
    }
    let halfway = 0.5 * (current + target);
    if halfway > floor {
        Ok(halfway)
    } else {
        Err(Error::Infeasible(format!(
            "{name} update {target} leaves (-1, inf)"
        )))
    }
}

fn check_signs(alpha: f64, beta: f64, delta: f64, gamma: f64) -> Result<()> {
    let agrees = |input: f64, solved: f64| input == 0.0 || input.signum() == solved.signum();
    if agrees(alpha, gamma) && agrees(beta, delta) {
        Ok(())
    } else {
        Err(Error::Infeasible(format!(
            "sign mismatch: (alpha, beta) = ({alpha}, {beta}) but (gamma, delta) = ({gamma}, {delta})"
        )))
    }
}
