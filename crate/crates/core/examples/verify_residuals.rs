// Finite-difference check of a solution against the free-boundary system,
// and what happens when the front coefficient is slightly wrong.

use stefan_thaw::solver::SolveOptions;
use stefan_thaw::verification::{verify_convective, VerifyConfig};
use stefan_thaw::{ConvectiveSolution, Error, PhysicalParams, ReduceOptions};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/water_ice.cfg");
    let phys = PhysicalParams::from_config_file(path.as_ref())?;
    let sol = ConvectiveSolution::solve(&phys, ReduceOptions::strict(), &SolveOptions::default())?;
    let cfg = VerifyConfig::default();

    let report = verify_convective(&sol, &cfg)?;
    println!("{}", report.to_json());

    let off = ConvectiveSolution::from_xi(&sol.phys, &sol.dimless, 1.01 * sol.xi)?;
    match verify_convective(&off, &cfg) {
        Err(Error::VerificationFailed { component, report }) => {
            println!("perturbed: {component} gap {:e}", report.stefan_balance_gap)
        }
        other => return Err(format!("perturbed solution was not rejected: {other:?}").into()),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
