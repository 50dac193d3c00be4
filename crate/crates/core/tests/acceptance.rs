//! Acceptance criteria, one line of output per criterion.
//!
//! Run with `cargo test -p moderf --test acceptance -- --nocapture` to see
//! the report.

use std::time::{Duration, Instant};

use moderf::analysis::{check_properties_with, erf_reference, PropertyTolerances};
use moderf::contraction::remark_closed_form;
use moderf::grid::{Grid, GridFunction};
use moderf::picard::truncation_bound;
use moderf::shooting::integrate_ivp;
use moderf::stefan::{solve_phi_other, StefanOptions};
use moderf::{
    apply_t, compare_solutions, contraction_constants, ode_residual, region_boundary, region_scan,
    shoot, solve_phase_parameters, solve_phi, Axis, Method, Params, ShootingOptions, SolverOptions,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn params(d: f64, g: f64) -> Params {
    Params::new(d, g).expect("valid params")
}

fn c1_classical_limit() -> Outcome {
    let sol = solve_phi(&params(0.0, 0.0), &SolverOptions::default()).map_err(|e| e.to_string())?;
    let worst = sol
        .phi
        .grid()
        .points()
        .iter()
        .zip(sol.phi.values())
        .filter(|(x, _)| **x <= 5.0)
        .map(|(x, v)| (v - erf_reference(*x).unwrap()).abs())
        .fold(0.0, f64::max);
    ensure(
        worst <= 1e-8,
        format!("sup |Φ00 − erf| on [0,5] = {worst:e}"),
    )?;
    Ok(format!("sup |Φ00 − erf| on [0,5] = {worst:.3e} ≤ 1e-8"))
}

fn c2_remark_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let d: f64 = rng.gen_range(1e-9..1.0);
        let m = contraction_constants(&params(d, 0.0)).unwrap().m;
        let closed = remark_closed_form(d).unwrap();
        worst = worst.max((m - closed).abs() / closed);
    }
    ensure(worst <= 1e-12, format!("max relative gap {worst:e}"))?;
    Ok(format!(
        "max relative gap over 1000 δ = {worst:.3e} ≤ 1e-12"
    ))
}

fn c3_region() -> Outcome {
    let d_star = region_boundary(0.0, 1e-12)
        .map_err(|e| e.to_string())?
        .ok_or("no boundary")?;
    ensure((d_star - 0.2278).abs() <= 1e-3, format!("δ* = {d_star}"))?;

    let scan = region_scan(Axis::new(-0.9, 1.0, 200), Axis::new(-0.9, 1.0, 200))
        .map_err(|e| e.to_string())?;
    let origin = scan
        .iter()
        .find(|r| r.delta == 0.0 && r.gamma == 0.0)
        .ok_or("scan lacks (0,0)")?;
    ensure(
        origin.m == 0.0 && origin.in_region,
        "origin must have M = 0",
    )?;

    let inside = contraction_constants(&params(0.2, 0.0)).unwrap();
    let outside = contraction_constants(&params(0.5, 0.0)).unwrap();
    ensure(
        inside.in_region && (inside.m - 0.8413).abs() < 1e-4,
        format!("M(0.2,0) = {}", inside.m),
    )?;
    ensure(
        !outside.in_region && (outside.m - 3.2146).abs() < 1e-3,
        format!("M(0.5,0) = {}", outside.m),
    )?;
    // the γ = 0 row of the scan switches exactly at δ*
    for r in scan.iter().filter(|r| r.gamma == 0.0 && r.delta >= 0.0) {
        ensure(
            r.in_region == (r.delta < d_star),
            format!("misclassified δ = {}", r.delta),
        )?;
    }
    Ok(format!(
        "δ*(0) = {d_star:.6}, {} records, M(0,0) = 0, M(0.2,0) = {:.4} in, M(0.5,0) = {:.4} out",
        scan.len(),
        inside.m,
        outside.m
    ))
}

const LATTICE: [(f64, f64); 4] = [(0.1, 0.1), (0.1, -0.1), (-0.2, 0.1), (0.2, 0.0)];

fn c4_cross_method() -> Outcome {
    let mut parts = Vec::new();
    for (d, g) in LATTICE {
        let p = params(d, g);
        let a = solve_phi(&p, &SolverOptions::default()).map_err(|e| e.to_string())?;
        let b = shoot(&p, &ShootingOptions::for_params(&p)).map_err(|e| e.to_string())?;
        let diff = compare_solutions(&a, &b).unwrap();
        ensure(diff <= 1e-6, format!("({d},{g}) differ by {diff:e}"))?;
        parts.push(format!("({d},{g}) {diff:.1e}"));
    }
    Ok(format!("picard vs shooting ≤ 1e-6: {}", parts.join(", ")))
}

fn c5_properties() -> Outcome {
    let tol = PropertyTolerances {
        shape: 1e-8,
        concavity: 1e-6,
    };
    let mut checked = 0;
    for (d, g) in LATTICE.into_iter().chain([(0.1, -0.5)]) {
        let p = params(d, g);
        let picard = solve_phi(&p, &SolverOptions::default()).map_err(|e| e.to_string())?;
        let shot = shoot(&p, &ShootingOptions::for_params(&p)).map_err(|e| e.to_string())?;
        for sol in [&picard, &shot] {
            let r = check_properties_with(sol, &p, tol).unwrap();
            ensure(r.bounds_ok, format!("({d},{g}) {}: bounds", sol.method))?;
            ensure(r.monotone_ok, format!("({d},{g}) {}: monotone", sol.method))?;
            ensure(
                r.concave_ok == (d >= 0.0).then_some(true),
                format!("({d},{g}) {}: concavity {:?}", sol.method, r.concave_ok),
            )?;
            if sol.method == Method::Picard {
                ensure(
                    r.fixed_point_residual <= 2e-10,
                    format!("({d},{g}) residual {:e}", r.fixed_point_residual),
                )?;
            }
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} solutions: bounds, monotone, concavity (δ ≥ 0), ‖T(Φ)−Φ‖ ≤ 2e-10"
    ))
}

fn c6_outside_region_shapes() -> Outcome {
    let mut cases: Vec<(f64, f64)> = [-0.9, -0.6, 0.0, 1.0, 10.0]
        .iter()
        .map(|&g| (1.5, g))
        .collect();
    cases.extend([-0.5, 0.0, 0.5, 1.5, 3.0].iter().map(|&d| (d, -0.6)));
    let mut heuristic = 0;
    for (d, g) in cases {
        let p = params(d, g);
        let sol =
            shoot(&p, &ShootingOptions::for_params(&p)).map_err(|e| format!("({d},{g}): {e}"))?;
        let v = sol.phi.values();
        ensure(
            v.iter().all(|y| (0.0..=1.0).contains(y)),
            format!("({d},{g}) leaves [0,1]"),
        )?;
        ensure(
            v.windows(2).all(|w| w[1] >= w[0]),
            format!("({d},{g}) not monotone"),
        )?;
        ensure(
            (sol.phi.last() - 1.0).abs() <= 1e-10,
            format!("({d},{g}) y(x_max) = {}", sol.phi.last()),
        )?;
        // exit code 2 territory: no guarantee claimed where M ≥ 1
        if sol.contraction >= 1.0 {
            ensure(
                !sol.converged_under_guarantee && sol.warning.is_some(),
                "guarantee claimed outside A",
            )?;
            heuristic += 1;
        }
    }
    Ok(format!(
        "10 shooting solves monotone in [0,1], y(x_max) = 1 ± 1e-10, {heuristic} without guarantee"
    ))
}

fn random_k(grid: &Grid, rng: &mut ChaCha8Rng) -> GridFunction {
    let knots: Vec<f64> = (0..25).map(|_| rng.gen_range(0.0..=1.0)).collect();
    let monotone = rng.gen_bool(0.5);
    let mut acc: f64 = 0.0;
    let values = (0..grid.len())
        .map(|i| {
            if i == 0 {
                return 0.0;
            }
            let v = knots[i * knots.len() / grid.len()];
            if monotone {
                acc = acc.max(v);
                acc
            } else {
                v
            }
        })
        .collect();
    GridFunction::new(grid.clone(), values).unwrap()
}

fn c7_contraction_observed() -> Outcome {
    let p = params(0.1, 0.1);
    let m = contraction_constants(&p).unwrap().m;
    ensure((m - 0.242).abs() < 1e-14, format!("M = {m}"))?;
    let grid = Grid::uniform(truncation_bound(&p, 1e-16), 2001).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst_ratio: f64 = 0.0;
    for _ in 0..50 {
        let h1 = random_k(&grid, &mut rng);
        let h2 = random_k(&grid, &mut rng);
        let gap = h1.sup_norm_diff(&h2).unwrap();
        let image_gap = apply_t(&h1, &p)
            .unwrap()
            .sup_norm_diff(&apply_t(&h2, &p).unwrap())
            .unwrap();
        ensure(
            image_gap <= m * gap * (1.0 + 1e-6),
            format!("ratio {} > M", image_gap / gap),
        )?;
        if gap > 0.0 {
            worst_ratio = worst_ratio.max(image_gap / gap);
        }
    }
    Ok(format!(
        "50 pairs: max ‖Th1−Th2‖/‖h1−h2‖ = {worst_ratio:.4} ≤ M = 0.242"
    ))
}

fn c8_stefan() -> Outcome {
    let tol = 1e-10;
    let s0 = solve_phase_parameters(0.0, 0.0, 1.0, tol).map_err(|e| e.to_string())?;
    ensure(
        s0.delta == 0.0 && s0.gamma == 0.0,
        "degenerate case must give (0,0)",
    )?;
    let erf1 = erf_reference(1.0).unwrap();
    ensure(
        (s0.phi_at_lambda - erf1).abs() <= 1e-8,
        format!("Φ(1) = {}", s0.phi_at_lambda),
    )?;

    let s = solve_phase_parameters(0.05, -0.05, 0.5, tol).map_err(|e| e.to_string())?;
    let opts = StefanOptions::default();
    let other =
        solve_phi_other(&params(s.delta, s.gamma), &opts.solver).map_err(|e| e.to_string())?;
    ensure(
        other.method != s.method,
        "re-evaluation must use the other solver",
    )?;
    let phi = other.phi.eval(0.5).unwrap();
    let (ra, rb) = ((s.gamma * phi - 0.05).abs(), (s.delta * phi + 0.05).abs());
    ensure(
        ra <= 1e-8 && rb <= 1e-8,
        format!("independent residuals {ra:e}, {rb:e}"),
    )?;
    ensure(
        s.gamma > 0.0 && s.delta < 0.0,
        format!("signs of (γ,δ) = ({}, {})", s.gamma, s.delta),
    )?;
    Ok(format!(
        "(0,0,1) → Φ(1) = erf(1); (0.05,−0.05,0.5) → δ = {:.8}, γ = {:.8}, residuals by {} {ra:.1e}, {rb:.1e}",
        s.delta, s.gamma, other.method
    ))
}

fn c9_orders() -> Outcome {
    let grid = Grid::uniform(6.0, 2001).unwrap();
    let gauss = grid
        .sample(|x| (-x * x).exp())
        .unwrap()
        .cumulative_integral()
        .last();
    let half_sqrt_pi = 0.886_226_925_452_758;
    ensure(
        (gauss - half_sqrt_pi).abs() <= 1e-10,
        format!("∫ exp(−x²) = {gauss}"),
    )?;

    let p = params(0.1, 0.1);
    let terminal = |steps: usize| {
        let opts = ShootingOptions {
            step_count: steps,
            output_points: 101,
            ..ShootingOptions::with_x_max(6.0)
        };
        integrate_ivp(1.18, &p, &opts).unwrap().terminal_y
    };
    let (a, b, c) = (terminal(400), terminal(800), terminal(1600));
    let rk4_ratio = (a - b) / (b - c);
    ensure(
        (12.0..=24.0).contains(&rk4_ratio),
        format!("RK4 halving ratio {rk4_ratio}"),
    )?;

    let mut res_ratio = f64::INFINITY;
    for (d, g) in [(0.0, 0.0), (0.1, 0.1)] {
        let p = params(d, g);
        let coarse = solve_phi(&p, &SolverOptions::default()).unwrap();
        let fine = solve_phi(
            &p,
            &SolverOptions {
                grid_points: 4001,
                ..SolverOptions::default()
            },
        )
        .unwrap();
        res_ratio = res_ratio.min(ode_residual(&coarse, &p) / ode_residual(&fine, &p));
    }
    ensure(res_ratio >= 3.5, format!("ODE residual ratio {res_ratio}"))?;
    Ok(format!(
        "Simpson error {:.1e}; RK4 halving ratio {rk4_ratio:.2}; residual ratio {res_ratio:.2}",
        (gauss - half_sqrt_pi).abs()
    ))
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 9] = [
        (
            "1 classical limit",
            c1_classical_limit,
            Duration::from_secs(1),
        ),
        (
            "2 remark identity",
            c2_remark_identity,
            Duration::from_secs(1),
        ),
        ("3 region boundary/scan", c3_region, Duration::from_secs(1)),
        (
            "4 cross-method agreement",
            c4_cross_method,
            Duration::from_secs(10),
        ),
        ("5 property suite", c5_properties, Duration::from_secs(30)),
        (
            "6 outside-region shapes",
            c6_outside_region_shapes,
            Duration::from_secs(30),
        ),
        (
            "7 contraction observed",
            c7_contraction_observed,
            Duration::from_secs(5),
        ),
        ("8 stefan consistency", c8_stefan, Duration::from_secs(10)),
        ("9 numerical orders", c9_orders, Duration::from_secs(30)),
    ];
    let mut failures = Vec::new();
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|msg| {
            if elapsed <= budget {
                Ok(msg)
            } else {
                Err(format!("{msg} (took {elapsed:?}, budget {budget:?})"))
            }
        });
        match outcome {
            Ok(msg) => println!("PASS [{name}] {msg} ({elapsed:.2?})"),
            Err(msg) => {
                println!("FAIL [{name}] {msg} ({elapsed:.2?})");
                failures.push(name);
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
