// Prescribed surface temperature: unique front coefficient, exact wall
// value, and the classical limit without a density jump.

use stefan_thaw::equivalence::classical_erf_bound;
use stefan_thaw::solver::SolveOptions;
use stefan_thaw::{PhysicalParams, ReduceOptions, TemperatureSolution};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/wall_temperature.cfg");
    let phys = PhysicalParams::from_config_file(path.as_ref())?;
    let opts = SolveOptions::default();
    let sol = TemperatureSolution::solve(&phys, ReduceOptions::strict(), &opts)?;
    println!("omega = {}", sol.omega);
    println!(
        "U(0, 1) = {}, front at t = 1: {}",
        sol.eval(0.0, 1.0)?,
        sol.front(1.0)
    );

    // equal densities: the classical two-phase problem
    let mut classical = phys.clone();
    classical.rho_i = classical.rho_w;
    let sol = TemperatureSolution::solve(&classical, ReduceOptions::classical(), &opts)?;
    let check = classical_erf_bound(&sol)?;
    println!(
        "classical omega = {}, erf bound holds: {} (margin {})",
        sol.omega, check.holds, check.margin
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
