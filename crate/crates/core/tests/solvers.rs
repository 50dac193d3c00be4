use moderf::analysis::{check_properties_with, erf_reference, PropertyTolerances};
use moderf::shooting::integrate_ivp;
use moderf::stefan::{solve_phase_parameters_with, solve_phi_other, StefanOptions};
use moderf::{
    apply_t, compare_solutions, ode_residual, shoot, solve_phase_parameters, solve_phi, Error,
    Params, ShootingOptions, SolverOptions,
};

fn params(d: f64, g: f64) -> Params {
    Params::new(d, g).unwrap()
}

#[test]
fn classical_limit_matches_erf() {
    let p = params(0.0, 0.0);
    let sol = solve_phi(&p, &SolverOptions::default()).unwrap();
    for (x, v) in sol.phi.grid().points().iter().zip(sol.phi.values()) {
        assert!((v - erf_reference(*x).unwrap()).abs() <= 1e-8);
    }
    let shot = shoot(&p, &ShootingOptions::for_params(&p)).unwrap();
    assert!(compare_solutions(&sol, &shot).unwrap() <= 1e-8);
}

#[test]
fn fixed_point_residual_of_guaranteed_solutions() {
    for &(d, g) in &[(0.1, 0.1), (0.1, -0.1), (0.2, 0.0), (-0.1, -0.1)] {
        let p = params(d, g);
        let opts = SolverOptions::default();
        let sol = solve_phi(&p, &opts).unwrap();
        assert!(sol.converged_under_guarantee, "({d},{g})");
        let t = apply_t(&sol.phi, &p).unwrap();
        assert!(t.sup_norm_diff(&sol.phi).unwrap() <= 2.0 * opts.tol);
    }
}

#[test]
fn picard_and_shooting_agree_at_point_one() {
    let p = params(0.1, 0.1);
    let a = solve_phi(&p, &SolverOptions::default()).unwrap();
    let b = shoot(&p, &ShootingOptions::for_params(&p)).unwrap();
    assert!(compare_solutions(&a, &b).unwrap() <= 1e-6);
    // both approximate the same smooth solution
    let (ra, rb) = (ode_residual(&a, &p), ode_residual(&b, &p));
    assert!(ra <= 2.0 * rb && rb <= 2.0 * ra, "{ra} vs {rb}");
}

#[test]
fn grid_refinement_is_stable() {
    let p = params(0.1, 0.1);
    let a = solve_phi(&p, &SolverOptions::default()).unwrap();
    let b = solve_phi(
        &p,
        &SolverOptions {
            grid_points: 4001,
            ..SolverOptions::default()
        },
    )
    .unwrap();
    assert!(compare_solutions(&a, &b).unwrap() <= 1e-8);
}

#[test]
fn ode_residual_is_second_order() {
    for &(d, g) in &[(0.0, 0.0), (0.1, 0.1)] {
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
        let ratio = ode_residual(&coarse, &p) / ode_residual(&fine, &p);
        assert!(ratio >= 3.5, "({d},{g}) ratio {ratio}");
    }
    let p = params(0.0, 0.0);
    let sol = solve_phi(&p, &SolverOptions::default()).unwrap();
    assert!(ode_residual(&sol, &p) <= 1e-4);
}

#[test]
fn rk4_is_fourth_order_on_erf() {
    let p = params(0.0, 0.0);
    let x_max = 6.0;
    let exact = erf_reference(x_max).unwrap();
    let error = |steps: usize| {
        let opts = ShootingOptions {
            step_count: steps,
            output_points: 101,
            ..ShootingOptions::with_x_max(x_max)
        };
        let t = integrate_ivp(std::f64::consts::FRAC_2_SQRT_PI, &p, &opts).unwrap();
        (t.terminal_y - exact).abs()
    };
    let ratio = error(200) / error(400);
    assert!((4.0..=64.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn phi_family_at_delta_one_and_a_half() {
    // observed slopes, frozen as regression values
    let cases = [
        (-0.9, 0.879_916_696_626),
        (-0.6, 1.082_517_190_274),
        (0.0, 1.397_897_135_620),
        (1.0, 1.803_171_101_084),
        (10.0, 3.860_509_011_269),
    ];
    let mut previous: Option<Vec<f64>> = None;
    for (g, slope) in cases {
        let p = params(1.5, g);
        let sol = shoot(&p, &ShootingOptions::for_params(&p)).unwrap();
        assert!(
            (sol.derivative_at_zero - slope).abs() <= 1e-8,
            "γ={g}: {}",
            sol.derivative_at_zero
        );
        assert!(!sol.converged_under_guarantee);
        assert!(sol.warning.is_some());
        let v = sol.phi.values();
        assert!(v.iter().all(|y| (0.0..=1.0).contains(y)));
        assert!(v.windows(2).all(|w| w[1] >= w[0]));
        assert!((sol.phi.last() - 1.0).abs() <= 1e-10);
        let probes: Vec<f64> = [0.25, 0.5, 1.0, 2.0]
            .iter()
            .map(|&x| sol.phi.eval(x).unwrap())
            .collect();
        if let Some(prev) = previous {
            assert!(probes.iter().zip(&prev).all(|(a, b)| a > b), "γ={g}");
        }
        previous = Some(probes);
    }
}

#[test]
fn outside_region_picard_terminates_cleanly() {
    let p = params(1.5, -0.6);
    match solve_phi(&p, &SolverOptions::default()) {
        Ok(sol) => {
            assert!(!sol.converged_under_guarantee);
            sol.phi.check_in_k().unwrap();
            let shot = shoot(&p, &ShootingOptions::for_params(&p)).unwrap();
            assert!(compare_solutions(&sol, &shot).unwrap() <= 1e-6);
        }
        Err(Error::NoConvergence { last_iterate, .. }) => last_iterate.check_in_k().unwrap(),
        Err(e) => panic!("unexpected error {e}"),
    }
}

#[test]
fn concavity_at_nonnegative_delta() {
    let p = params(0.1, -0.5);
    let sol = solve_phi(&p, &SolverOptions::default()).unwrap();
    let r = check_properties_with(&sol, &p, PropertyTolerances::default()).unwrap();
    assert!(r.bounds_ok && r.monotone_ok);
    assert_eq!(r.concave_ok, Some(true));
}

#[test]
fn stefan_sign_and_magnitude_invariants() {
    let opts = StefanOptions::default();
    for &(alpha, beta, lambda) in &[
        (0.05, -0.05, 0.5),
        (-0.05, 0.08, 0.8),
        (0.1, 0.1, 0.6),
        (-0.1, -0.05, 1.2),
    ] {
        let s = solve_phase_parameters_with(alpha, beta, lambda, &opts).unwrap();
        assert_eq!(s.gamma.signum(), alpha.signum());
        assert_eq!(s.delta.signum(), beta.signum());
        assert!(s.delta.abs() >= beta.abs() && s.gamma.abs() >= alpha.abs());
        assert!(s.residual_alpha <= opts.tol && s.residual_beta <= opts.tol);
        if alpha == beta {
            assert!((s.delta - s.gamma).abs() <= opts.tol);
        }
        let other = solve_phi_other(&Params::new(s.delta, s.gamma).unwrap(), &opts.solver).unwrap();
        assert_ne!(other.method, s.method);
        let phi = other.phi.eval(lambda).unwrap();
        assert!((s.gamma * phi - alpha).abs() <= 10.0 * 1e-8);
        assert!((s.delta * phi - beta).abs() <= 10.0 * 1e-8);
    }
}

#[test]
fn stefan_reports_non_convergence() {
    let opts = StefanOptions {
        max_sweeps: 1,
        ..StefanOptions::default()
    };
    assert!(matches!(
        solve_phase_parameters_with(0.2, 0.2, 0.5, &opts),
        Err(Error::SweepNoConvergence { .. })
    ));
    assert!(solve_phase_parameters(0.0, 0.0, 1.0, 1e-10).is_ok());
}
