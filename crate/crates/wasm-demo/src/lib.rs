//! Browser bindings for the `moderf` solvers, used by `www/index.html`.
//!
//! Three operations: solve for a curve, evaluate the contraction constants at
//! a point, and map `M(δ,γ)` over a rectangle with its `M = 1` boundary.

use wasm_bindgen::prelude::*;

use moderf::stefan::solve_phi_auto;
use moderf::{
    contraction_constants, region_boundary, region_scan, shoot, solve_phi, Axis, Params,
    PhiSolution, ShootingOptions, SolverOptions,
};

/// Grid size used by the page; smaller than the library default to keep
/// slider dragging responsive.
pub const DEMO_POINTS: usize = 801;

/// A solved curve with its diagnostics.
#[wasm_bindgen]
pub struct Curve {
    x: Vec<f64>,
    phi: Vec<f64>,
    method: String,
    guaranteed: bool,
    contraction: f64,
    derivative_at_zero: f64,
    error_estimate: f64,
    iterations: usize,
}

#[wasm_bindgen]
impl Curve {
    #[wasm_bindgen(getter)]
    pub fn x(&self) -> Vec<f64> {
        self.x.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn phi(&self) -> Vec<f64> {
        self.phi.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn method(&self) -> String {
        self.method.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn guaranteed(&self) -> bool {
        self.guaranteed
    }
    #[wasm_bindgen(getter)]
    pub fn contraction(&self) -> f64 {
        self.contraction
    }
    #[wasm_bindgen(getter, js_name = derivativeAtZero)]
    pub fn derivative_at_zero(&self) -> f64 {
        self.derivative_at_zero
    }
    #[wasm_bindgen(getter, js_name = errorEstimate)]
    pub fn error_estimate(&self) -> f64 {
        self.error_estimate
    }
    #[wasm_bindgen(getter)]
    pub fn iterations(&self) -> usize {
        self.iterations
    }
}

impl From<PhiSolution> for Curve {
    fn from(s: PhiSolution) -> Self {
        Self {
            x: s.phi.grid().points().to_vec(),
            method: s.method.to_string(),
            guaranteed: s.converged_under_guarantee,
            contraction: s.contraction,
            derivative_at_zero: s.derivative_at_zero,
            error_estimate: s.error_estimate,
            iterations: s.iterations_or_steps,
            phi: s.phi.into_values(),
        }
    }
}

/// `M(δ,γ)` sampled on a lattice, row-major in γ, plus the boundary curve.
#[wasm_bindgen]
pub struct RegionMap {
    deltas: Vec<f64>,
    gammas: Vec<f64>,
    m: Vec<f64>,
    boundary_gamma: Vec<f64>,
    boundary_delta: Vec<f64>,
}

#[wasm_bindgen]
impl RegionMap {
    #[wasm_bindgen(getter)]
    pub fn deltas(&self) -> Vec<f64> {
        self.deltas.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn gammas(&self) -> Vec<f64> {
        self.gammas.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn m(&self) -> Vec<f64> {
        self.m.clone()
    }
    #[wasm_bindgen(getter, js_name = boundaryGamma)]
    pub fn boundary_gamma(&self) -> Vec<f64> {
        self.boundary_gamma.clone()
    }
    #[wasm_bindgen(getter, js_name = boundaryDelta)]
    pub fn boundary_delta(&self) -> Vec<f64> {
        self.boundary_delta.clone()
    }
}

pub fn curve(delta: f64, gamma: f64, method: &str) -> Result<Curve, String> {
    let p = Params::new(delta, gamma).map_err(|e| e.to_string())?;
    let opts = SolverOptions {
        grid_points: DEMO_POINTS,
        ..SolverOptions::default()
    };
    let sol = match method {
        "picard" => solve_phi(&p, &opts),
        "shooting" => shoot(&p, &ShootingOptions::matching(&p, &opts)),
        "auto" => solve_phi_auto(&p, &opts),
        other => return Err(format!("unknown method {other:?}")),
    };
    sol.map(Curve::from).map_err(|e| e.to_string())
}

/// `[M1, M2, M3, M]`.
pub fn constants(delta: f64, gamma: f64) -> Result<Vec<f64>, String> {
    let p = Params::new(delta, gamma).map_err(|e| e.to_string())?;
    let c = contraction_constants(&p).map_err(|e| e.to_string())?;
    Ok(vec![c.m1, c.m2, c.m3, c.m])
}

pub fn region(
    delta_lo: f64,
    delta_hi: f64,
    gamma_lo: f64,
    gamma_hi: f64,
    resolution: usize,
) -> Result<RegionMap, String> {
    let da = Axis::new(delta_lo, delta_hi, resolution);
    let ga = Axis::new(gamma_lo, gamma_hi, resolution);
    let deltas = da.values("delta").map_err(|e| e.to_string())?;
    let gammas = ga.values("gamma").map_err(|e| e.to_string())?;
    let records = region_scan(da, ga).map_err(|e| e.to_string())?;
    let mut map = RegionMap {
        deltas,
        m: records.iter().map(|r| r.m).collect(),
        gammas: Vec::new(),
        boundary_gamma: Vec::new(),
        boundary_delta: Vec::new(),
    };
    for &g in &gammas {
        if let Some(d) = region_boundary(g, 1e-10).map_err(|e| e.to_string())? {
            map.boundary_gamma.push(g);
            map.boundary_delta.push(d);
        }
    }
    map.gammas = gammas;
    Ok(map)
}

/// Solves for `Φ_δγ`; `method` is `"picard"`, `"shooting"` or `"auto"`.
#[wasm_bindgen(js_name = solveCurve)]
pub fn solve_curve(delta: f64, gamma: f64, method: &str) -> Result<Curve, JsError> {
    curve(delta, gamma, method).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = contractionConstants)]
pub fn contraction_at(delta: f64, gamma: f64) -> Result<Vec<f64>, JsError> {
    constants(delta, gamma).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = regionMap)]
pub fn region_map(
    delta_lo: f64,
    delta_hi: f64,
    gamma_lo: f64,
    gamma_hi: f64,
    resolution: usize,
) -> Result<RegionMap, JsError> {
    region(delta_lo, delta_hi, gamma_lo, gamma_hi, resolution).map_err(|e| JsError::new(&e))
}
