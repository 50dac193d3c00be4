//! Solves one parameter pair with both methods and prints a short table.
//!
//! cargo run -p moderf --example solve -- 0.1 0.1

use moderf::{compare_solutions, contraction_constants, shoot, solve_phi, Params};
use moderf::{ShootingOptions, SolverOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<f64>());
    let delta = args.next().transpose()?.unwrap_or(0.1);
    let gamma = args.next().transpose()?.unwrap_or(0.1);
    let p = Params::new(delta, gamma)?;
    let opts = SolverOptions::default();

    let c = contraction_constants(&p)?;
    println!(
        "delta = {delta}, gamma = {gamma}, M = {:.6} ({})",
        c.m,
        if c.in_region { "inside" } else { "outside" }
    );

    let shot = shoot(&p, &ShootingOptions::matching(&p, &opts))?;
    let picard = solve_phi(&p, &opts).ok();
    println!("{:>6} {:>20} {:>20}", "x", "shooting", "picard");
    for x in [0.25, 0.5, 1.0, 1.5, 2.0, 3.0] {
        let s = shot.phi.eval(x)?;
        match &picard {
            Some(sol) => println!("{x:>6.2} {s:>20.15} {:>20.15}", sol.phi.eval(x)?),
            None => println!("{x:>6.2} {s:>20.15} {:>20}", "-"),
        }
    }
    if let Some(sol) = &picard {
        println!(
            "sup |picard - shooting| = {:e}",
            compare_solutions(sol, &shot)?
        );
    }
    Ok(())
}
