use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;

use moderf::analysis::{check_properties_with, PropertyReport, PropertyTolerances};
use moderf::{
    compare_solutions, contraction_constants, region_boundary, region_scan, shoot,
    solve_phase_parameters, solve_phi, Axis, ContractionReport, GridFunction, Params, PhiSolution,
    RegionRecord, ShootingOptions, SolverOptions, StefanPhaseParams,
};

use crate::output::{boundary_path, emit, json, real, sidecar_path, Csv};
use crate::{Command, Common, Format, MethodArg, SelfTest};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum Status {
    Guaranteed = 0,
    Failed = 1,
    Heuristic = 2,
}

pub fn run(command: Command) -> Result<Status> {
    match command {
        Command::Phi {
            delta,
            gamma,
            method,
            common,
        } => cmd_phi(delta, gamma, method, &common),
        Command::Region {
            delta_min,
            delta_max,
            gamma_min,
            gamma_max,
            resolution,
            boundary_output,
            common,
        } => cmd_region(
            Axis::new(delta_min, delta_max, resolution),
            Axis::new(gamma_min, gamma_max, resolution),
            boundary_output.as_deref(),
            &common,
        ),
        Command::Verify {
            delta,
            gamma,
            selftest,
            common,
        } => cmd_verify(delta, gamma, selftest, &common),
        Command::Compare {
            delta,
            gamma,
            common,
        } => cmd_compare(delta, gamma, &common),
        Command::Stefan {
            alpha,
            beta,
            lambda,
            common,
        } => cmd_stefan(alpha, beta, lambda, &common),
    }
}

fn solver_options(common: &Common) -> SolverOptions {
    SolverOptions {
        tol: common.tol.unwrap_or(1e-10),
        grid_points: common.grid_points,
        x_max_override: common.xmax,
        ..SolverOptions::default()
    }
}

fn params(delta: f64, gamma: f64) -> Result<Params> {
    Ok(Params::new(delta, gamma)?)
}

fn status_of(solutions: &[&PhiSolution]) -> Status {
    if solutions.iter().all(|s| s.converged_under_guarantee) {
        Status::Guaranteed
    } else {
        for s in solutions {
            if let Some(w) = &s.warning {
                eprintln!("warning: {} ({})", w, s.method);
            }
        }
        Status::Heuristic
    }
}

/// Solution samples plus diagnostics, as written by `phi --format json`.
#[derive(Serialize)]
struct PhiRecord<'a> {
    params: Params,
    method: String,
    x: &'a [f64],
    phi: &'a [f64],
    derivative_at_zero: f64,
    f_infinity: f64,
    error_estimate: f64,
    iterations_or_steps: usize,
    converged_under_guarantee: bool,
    contraction: f64,
    warning: Option<&'a str>,
}

impl<'a> From<&'a PhiSolution> for PhiRecord<'a> {
    fn from(s: &'a PhiSolution) -> Self {
        Self {
            params: s.params,
            method: s.method.to_string(),
            x: s.phi.grid().points(),
            phi: s.phi.values(),
            derivative_at_zero: s.derivative_at_zero,
            f_infinity: s.f_infinity,
            error_estimate: s.error_estimate,
            iterations_or_steps: s.iterations_or_steps,
            converged_under_guarantee: s.converged_under_guarantee,
            contraction: s.contraction,
            warning: s.warning.as_deref(),
        }
    }
}

/// Run metadata kept out of the data file.
#[derive(Serialize)]
struct Meta<'a> {
    command: &'a str,
    version: &'a str,
    params: Option<Params>,
    contraction: Option<ContractionReport>,
    solvers: Vec<SolverMeta>,
    options: OptionsMeta,
}

#[derive(Serialize)]
struct SolverMeta {
    method: String,
    converged_under_guarantee: bool,
    error_estimate: f64,
    iterations_or_steps: usize,
    x_max: f64,
    grid_points: usize,
    warning: Option<String>,
}

#[derive(Serialize)]
struct OptionsMeta {
    tol: Option<f64>,
    grid_points: usize,
    xmax: Option<f64>,
}

impl SolverMeta {
    fn of(s: &PhiSolution) -> Self {
        Self {
            method: s.method.to_string(),
            converged_under_guarantee: s.converged_under_guarantee,
            error_estimate: s.error_estimate,
            iterations_or_steps: s.iterations_or_steps,
            x_max: s.x_max(),
            grid_points: s.phi.grid().len(),
            warning: s.warning.clone(),
        }
    }
}

fn write_sidecar(
    common: &Common,
    command: &str,
    p: Option<Params>,
    solutions: &[&PhiSolution],
) -> Result<()> {
    let Some(path) = common.output.as_deref() else {
        return Ok(());
    };
    let meta = Meta {
        command,
        version: env!("CARGO_PKG_VERSION"),
        params: p,
        contraction: p.map(|p| contraction_constants(&p)).transpose()?,
        solvers: solutions.iter().map(|s| SolverMeta::of(s)).collect(),
        options: OptionsMeta {
            tol: common.tol,
            grid_points: common.grid_points,
            xmax: common.xmax,
        },
    };
    emit(Some(&sidecar_path(path)), &json(&meta)?)
}

fn both(p: &Params, opts: &SolverOptions) -> Result<(PhiSolution, PhiSolution)> {
    let picard = solve_phi(p, opts).context("picard solve")?;
    let shot = shoot(p, &ShootingOptions::matching(p, opts)).context("shooting solve")?;
    Ok((picard, shot))
}

fn side_by_side(a: &GridFunction, b: &GridFunction) -> String {
    let mut csv = Csv::new(&["x", "phi_picard", "phi_shooting", "diff"]);
    for ((x, u), v) in a.grid().points().iter().zip(a.values()).zip(b.values()) {
        csv.reals(&[*x, *u, *v, u - v]);
    }
    csv.into_string()
}

pub fn cmd_phi(delta: f64, gamma: f64, method: MethodArg, common: &Common) -> Result<Status> {
    let p = params(delta, gamma)?;
    let opts = solver_options(common);
    let format = common.format.unwrap_or(Format::Csv);
    let out = common.output.as_deref();

    let solutions = match method {
        MethodArg::Picard => vec![solve_phi(&p, &opts)?],
        MethodArg::Shooting => vec![shoot(&p, &ShootingOptions::matching(&p, &opts))?],
        MethodArg::Both => {
            let (a, b) = both(&p, &opts)?;
            vec![a, b]
        }
    };
    let body = match (format, solutions.as_slice()) {
        (Format::Csv, [one]) => {
            let mut csv = Csv::new(&["x", "phi"]);
            for (x, v) in one.phi.grid().points().iter().zip(one.phi.values()) {
                csv.reals(&[*x, *v]);
            }
            csv.into_string()
        }
        (Format::Csv, [a, b]) => side_by_side(&a.phi, &b.phi),
        (Format::Json, [one]) => json(&PhiRecord::from(one))?,
        (Format::Json, [a, b]) => json(&serde_json::json!({
            "picard": PhiRecord::from(a),
            "shooting": PhiRecord::from(b),
            "sup_diff": compare_solutions(a, b)?,
        }))?,
        _ => unreachable!("one or two solutions"),
    };
    emit(out, &body)?;
    let refs: Vec<&PhiSolution> = solutions.iter().collect();
    write_sidecar(common, "phi", Some(p), &refs)?;
    Ok(status_of(&refs))
}

#[derive(Serialize)]
struct BoundaryPoint {
    gamma: f64,
    delta_star: f64,
}

#[derive(Serialize)]
struct RegionReport {
    records: Vec<RegionRecord>,
    boundary: Vec<BoundaryPoint>,
}

pub fn cmd_region(
    delta: Axis,
    gamma: Axis,
    boundary_output: Option<&Path>,
    common: &Common,
) -> Result<Status> {
    let records = region_scan(delta, gamma)?;
    let tol = common.tol.unwrap_or(1e-12);
    let mut boundary = Vec::new();
    for g in gamma.values("gamma")? {
        if let Some(d) = region_boundary(g, tol)? {
            boundary.push(BoundaryPoint {
                gamma: g,
                delta_star: d,
            });
        }
    }

    match common.format.unwrap_or(Format::Csv) {
        Format::Json => emit(
            common.output.as_deref(),
            &json(&RegionReport { records, boundary })?,
        )?,
        Format::Csv => {
            let mut csv = Csv::new(&["delta", "gamma", "M", "in_region"]);
            for r in &records {
                csv.row(&[
                    real(r.delta),
                    real(r.gamma),
                    real(r.m),
                    r.in_region.to_string(),
                ]);
            }
            emit(common.output.as_deref(), &csv.into_string())?;

            let target = boundary_output
                .map(Path::to_path_buf)
                .or_else(|| common.output.as_deref().map(boundary_path));
            if let Some(target) = target {
                let mut csv = Csv::new(&["gamma", "delta_star"]);
                for b in &boundary {
                    csv.reals(&[b.gamma, b.delta_star]);
                }
                emit(Some(&target), &csv.into_string())?;
            }
        }
    }
    write_sidecar(common, "region", None, &[])?;
    Ok(Status::Guaranteed)
}

#[derive(Serialize)]
struct MethodVerdict {
    method: String,
    converged_under_guarantee: bool,
    #[serde(flatten)]
    report: PropertyReport,
    pass: bool,
}

#[derive(Serialize)]
struct VerifyReport {
    params: Params,
    contraction: ContractionReport,
    reports: Vec<MethodVerdict>,
    failures: Vec<String>,
    cross_method_sup_diff: Option<f64>,
    all_pass: bool,
}

/// Tolerance on the picard-vs-shooting sup-norm difference.
const CROSS_TOL: f64 = 1e-6;

fn corrupt(sol: &mut PhiSolution) -> Result<()> {
    let mut v = sol.phi.values().to_vec();
    let i = v.len() / 3;
    v[i] += 0.1;
    sol.phi = GridFunction::new(sol.phi.grid().clone(), v)?;
    Ok(())
}

pub fn cmd_verify(
    delta: f64,
    gamma: f64,
    selftest: Option<SelfTest>,
    common: &Common,
) -> Result<Status> {
    let p = params(delta, gamma)?;
    let opts = solver_options(common);
    let contraction = contraction_constants(&p)?;

    let mut failures = Vec::new();
    let mut solutions = Vec::new();
    match solve_phi(&p, &opts) {
        Ok(s) => solutions.push(s),
        Err(e) => failures.push(format!("picard: {e}")),
    }
    match shoot(&p, &ShootingOptions::matching(&p, &opts)) {
        Ok(s) => solutions.push(s),
        Err(e) => failures.push(format!("shooting: {e}")),
    }
    if solutions.is_empty() {
        bail!("both solvers failed: {}", failures.join("; "));
    }
    // outside the contraction region picard is allowed to stall
    if !contraction.in_region {
        failures.retain(|f| !f.starts_with("picard"));
    }
    if selftest == Some(SelfTest::Corrupt) {
        for s in &mut solutions {
            corrupt(s)?;
        }
    }

    let tol = PropertyTolerances::default();
    let mut reports = Vec::new();
    for s in &solutions {
        let report = check_properties_with(s, &p, tol)?;
        let residual_limit = if s.converged_under_guarantee && s.method == moderf::Method::Picard {
            2.0 * opts.tol
        } else {
            CROSS_TOL
        };
        let pass = report.all_pass() && report.fixed_point_residual <= residual_limit;
        if !pass {
            failures.push(format!("{}: property verdicts failed", s.method));
        }
        reports.push(MethodVerdict {
            method: s.method.to_string(),
            converged_under_guarantee: s.converged_under_guarantee,
            report,
            pass,
        });
    }
    let cross = match solutions.as_slice() {
        [a, b] => Some(compare_solutions(a, b)?),
        _ => None,
    };
    if let Some(d) = cross {
        if d > CROSS_TOL {
            failures.push(format!(
                "cross-method difference {d:e} exceeds {CROSS_TOL:e}"
            ));
        }
    }
    let all_pass = failures.is_empty();
    let report = VerifyReport {
        params: p,
        contraction,
        reports,
        failures,
        cross_method_sup_diff: cross,
        all_pass,
    };

    let body = match common.format.unwrap_or(Format::Json) {
        Format::Json => json(&report)?,
        Format::Csv => {
            let mut csv = Csv::new(&[
                "method",
                "bounds_ok",
                "monotone_ok",
                "concave_ok",
                "fixed_point_residual",
                "ode_residual",
                "max_violation",
            ]);
            for r in &report.reports {
                csv.row(&[
                    r.method.clone(),
                    r.report.bounds_ok.to_string(),
                    r.report.monotone_ok.to_string(),
                    r.report.concave_ok.map_or("na".into(), |c| c.to_string()),
                    real(r.report.fixed_point_residual),
                    real(r.report.ode_residual),
                    real(r.report.max_violation),
                ]);
            }
            csv.into_string()
        }
    };
    emit(common.output.as_deref(), &body)?;
    let refs: Vec<&PhiSolution> = solutions.iter().collect();
    write_sidecar(common, "verify", Some(p), &refs)?;
    if all_pass {
        Ok(Status::Guaranteed)
    } else {
        for f in &report.failures {
            eprintln!("verify: {f}");
        }
        Ok(Status::Failed)
    }
}

pub fn cmd_compare(delta: f64, gamma: f64, common: &Common) -> Result<Status> {
    let p = params(delta, gamma)?;
    let opts = solver_options(common);
    let (a, b) = both(&p, &opts)?;
    let diff = compare_solutions(&a, &b)?;
    let body = match common.format.unwrap_or(Format::Json) {
        Format::Csv => side_by_side(&a.phi, &b.phi),
        Format::Json => json(&serde_json::json!({
            "params": p,
            "sup_diff": diff,
            "derivative_at_zero": {
                "picard": a.derivative_at_zero,
                "shooting": b.derivative_at_zero,
            },
            "ode_residual": {
                "picard": moderf::ode_residual(&a, &p),
                "shooting": moderf::ode_residual(&b, &p),
            },
            "converged_under_guarantee": {
                "picard": a.converged_under_guarantee,
                "shooting": b.converged_under_guarantee,
            },
        }))?,
    };
    emit(common.output.as_deref(), &body)?;
    write_sidecar(common, "compare", Some(p), &[&a, &b])?;
    Ok(status_of(&[&a, &b]))
}

pub fn cmd_stefan(alpha: f64, beta: f64, lambda: f64, common: &Common) -> Result<Status> {
    if !(lambda > 0.0) {
        bail!("lambda must be positive, got {lambda}");
    }
    let tol = common.tol.unwrap_or(1e-10);
    let s: StefanPhaseParams = solve_phase_parameters(alpha, beta, lambda, tol)?;
    let body = match common.format.unwrap_or(Format::Json) {
        Format::Json => json(&s)?,
        Format::Csv => {
            let mut csv = Csv::new(&[
                "alpha",
                "beta",
                "lambda",
                "delta",
                "gamma",
                "phi_at_lambda",
                "residual_alpha",
                "residual_beta",
            ]);
            csv.reals(&[
                s.alpha,
                s.beta,
                s.lambda,
                s.delta,
                s.gamma,
                s.phi_at_lambda,
                s.residual_alpha,
                s.residual_beta,
            ]);
            csv.into_string()
        }
    };
    emit(common.output.as_deref(), &body)?;
    write_sidecar(common, "stefan", Params::new(s.delta, s.gamma).ok(), &[])?;
    Ok(Status::Guaranteed)
}
