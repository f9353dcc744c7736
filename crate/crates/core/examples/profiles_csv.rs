// Temperature profiles at a few times, written as CSV.

use stefan_thaw::profiles::{profile_grid, write_profile_csv};
use stefan_thaw::solver::SolveOptions;
use stefan_thaw::{ConvectiveSolution, PhysicalParams, ReduceOptions};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/water_ice.cfg");
    let phys = PhysicalParams::from_config_file(path.as_ref())?;
    let sol = ConvectiveSolution::solve(&phys, ReduceOptions::strict(), &SolveOptions::default())?;
    let rows = profile_grid(sol.profile(), &[600.0, 3600.0], 12, Some(10.0))?;
    write_profile_csv(&rows, std::io::stdout().lock())?;
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
