// Convective problem -> wall temperature -> prescribed-temperature problem
// -> heat transfer coefficient, and the inequality the result satisfies.

use stefan_thaw::equivalence::{
    omega_inequality_check, omega_inequality_limit, round_trip, temperature_params_for,
};
use stefan_thaw::solver::SolveOptions;
use stefan_thaw::{ConvectiveSolution, PhysicalParams, ReduceOptions, TemperatureSolution};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/water_ice.cfg");
    let phys = PhysicalParams::from_config_file(path.as_ref())?;
    let opts = SolveOptions::default();

    let r = round_trip(&phys, ReduceOptions::strict(), &opts)?;
    println!("h0 = {} -> B0 = {} -> h0 = {}", r.h0, r.b0, r.roundtrip_h0);
    println!(
        "xi = {}, omega = {}, profile gap {:e}",
        r.xi, r.omega, r.max_profile_gap
    );

    let conv = ConvectiveSolution::solve(&phys, ReduceOptions::strict(), &opts)?;
    let temp = TemperatureSolution::solve(
        &temperature_params_for(&conv)?,
        ReduceOptions::strict(),
        &opts,
    )?;
    let b = phys.b_ext.expect("config has b_ext");
    let c = omega_inequality_check(&temp, b)?;
    let l = omega_inequality_limit(&temp)?;
    println!("inequality: {} (margin {})", c.holds, c.margin);
    println!("limit form: {} (margin {})", l.holds, l.margin);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
