//! Reference values and property verdicts for computed solutions.

use serde::{Deserialize, Serialize};

use crate::contraction::Params;
use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::picard::{apply_t, PhiSolution};

const TWO_OVER_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;
const ONE_OVER_SQRT_PI: f64 = 0.564_189_583_547_756_3;

/// Switch point between the power series and the continued fraction.
pub const ERF_CROSSOVER: f64 = 3.0;

/// `erf(x) = 2/√π e^{−x²} Σ_n 2^n x^{2n+1} / (1·3···(2n+1))`.
///
/// All terms are positive, so there is no cancellation for `x <= 3`.
fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0.0;
    loop {
        n += 1.0;
        term *= 2.0 * x2 / (2.0 * n + 1.0);
        sum += term;
        if term <= sum * 1e-17 {
            break;
        }
    }
    TWO_OVER_SQRT_PI * (-x2).exp() * sum
}

/// `erfc(x) = e^{−x²}/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))`,
/// evaluated bottom-up.
fn erfc_continued_fraction(x: f64) -> f64 {
    let mut tail = x;
    for k in (1..=120).rev() {
        tail = x + 0.5 * k as f64 / tail;
    }
    ONE_OVER_SQRT_PI * (-x * x).exp() / tail
}

/// The classical error function on `x >= 0`.
pub fn erf_reference(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "erf_reference needs x >= 0, got {x}"
        )));
    }
    if x <= ERF_CROSSOVER {
        Ok(erf_series(x))
    } else {
        Ok(1.0 - erfc_continued_fraction(x))
    }
}

/// `1 − erf(x)` on `x >= 0`, accurate in the tail.
pub fn erfc_reference(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "erfc_reference needs x >= 0, got {x}"
        )));
    }
    if x <= ERF_CROSSOVER {
        Ok(1.0 - erf_series(x))
    } else {
        Ok(erfc_continued_fraction(x))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub bounds_ok: bool,
    pub monotone_ok: bool,
    /// Evaluated only for `δ >= 0`.
    pub concave_ok: Option<bool>,
    pub fixed_point_residual: f64,
    pub ode_residual: f64,
    /// Largest violation among the checked verdicts (≤ 0 when all pass).
    pub max_violation: f64,
}

impl PropertyReport {
    pub fn all_pass(&self) -> bool {
        self.bounds_ok && self.monotone_ok && self.concave_ok.unwrap_or(true)
    }
}

/// Tolerances used by [`check_properties_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropertyTolerances {
    /// For `0 <= Φ <= 1` and non-negative forward differences.
    pub shape: f64,
    /// Relative to the largest `|Φ''|` on the grid.
    pub concavity: f64,
}

impl PropertyTolerances {
    pub fn uniform(tol: f64) -> Self {
        Self {
            shape: tol,
            concavity: tol,
        }
    }
}

impl Default for PropertyTolerances {
    fn default() -> Self {
        Self {
            shape: 1e-8,
            concavity: 1e-6,
        }
    }
}

pub fn check_properties(sol: &PhiSolution, p: &Params, tol: f64) -> Result<PropertyReport> {
    check_properties_with(sol, p, PropertyTolerances::uniform(tol))
}

pub fn check_properties_with(
    sol: &PhiSolution,
    p: &Params,
    tol: PropertyTolerances,
) -> Result<PropertyReport> {
    let y = sol.phi.values();
    let h = sol.phi.grid().step();

    let bound_excess = y
        .iter()
        .map(|&v| (-v).max(v - 1.0))
        .fold(f64::NEG_INFINITY, f64::max);
    let bounds_ok = bound_excess <= tol.shape;

    let descent = y
        .windows(2)
        .map(|w| w[0] - w[1])
        .fold(f64::NEG_INFINITY, f64::max);
    let monotone_ok = descent <= tol.shape;

    let mut violations = vec![bound_excess - tol.shape, descent - tol.shape];
    let concave_ok = (p.delta >= 0.0).then(|| {
        let second: Vec<f64> = y
            .windows(3)
            .map(|w| (w[0] - 2.0 * w[1] + w[2]) / (h * h))
            .collect();
        let scale = second.iter().map(|v| v.abs()).fold(0.0, f64::max);
        let worst = second.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let threshold = tol.concavity * scale;
        violations.push(if scale > 0.0 {
            (worst - threshold) / scale
        } else {
            worst
        });
        worst <= threshold
    });

    // T is defined on K only; a sample outside it already failed above
    let fixed_point_residual = match apply_t(&sol.phi, p) {
        Ok(t) => t.sup_norm_diff(&sol.phi)?,
        Err(Error::NotInK(_)) => f64::INFINITY,
        Err(e) => return Err(e),
    };

    Ok(PropertyReport {
        bounds_ok,
        monotone_ok,
        concave_ok,
        fixed_point_residual,
        ode_residual: ode_residual(sol, p),
        max_violation: violations.into_iter().fold(f64::NEG_INFINITY, f64::max),
    })
}

/// Largest conservative-form residual `|(q_{i+½} − q_{i−½})/Δx + 2x(1+γy)y'|`
/// with the flux `q = (1+δy)y'` taken at half points. Three points at each
/// end are skipped.
pub fn ode_residual(sol: &PhiSolution, p: &Params) -> f64 {
    ode_residual_of(&sol.phi, p)
}

pub fn ode_residual_of(f: &GridFunction, p: &Params) -> f64 {
    let y = f.values();
    let x = f.grid().points();
    let h = f.grid().step();
    let n = y.len();
    if n < 8 {
        return 0.0;
    }
    let flux = |i: usize| (1.0 + p.delta * 0.5 * (y[i] + y[i + 1])) * (y[i + 1] - y[i]) / h;
    (3..n - 3)
        .map(|i| {
            let dq = (flux(i) - flux(i - 1)) / h;
            let yp = (y[i + 1] - y[i - 1]) / (2.0 * h);
            (dq + 2.0 * x[i] * (1.0 + p.gamma * y[i]) * yp).abs()
        })
        .fold(0.0, f64::max)
}

/// Sup-norm distance between two solutions of the same problem. When the
/// grids differ the coarser solution is interpolated onto the finer grid.
pub fn compare_solutions(a: &PhiSolution, b: &PhiSolution) -> Result<f64> {
    if a.params != b.params {
        return Err(Error::InvalidArgument(format!(
            "cannot compare solutions for {:?} and {:?}",
            a.params, b.params
        )));
    }
    if a.phi.grid() == b.phi.grid() {
        return a.phi.sup_norm_diff(&b.phi);
    }
    let (fine, coarse) = if a.phi.grid().len() >= b.phi.grid().len() {
        (&a.phi, &b.phi)
    } else {
        (&b.phi, &a.phi)
    };
    let reach = coarse.grid().x_max();
    let mut worst: f64 = 0.0;
    for (&x, &v) in fine.grid().points().iter().zip(fine.values()) {
        if x > reach {
            // beyond the coarse domain its boundary value 1 continues
            worst = worst.max((v - coarse.last()).abs());
            continue;
        }
        worst = worst.max((v - coarse.eval(x)?).abs());
    }
    Ok(worst)
}
