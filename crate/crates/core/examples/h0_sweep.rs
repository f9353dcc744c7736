// The front coefficient grows with the heat transfer coefficient and
// approaches the prescribed-temperature value from below.

use stefan_thaw::equivalence::{omega_infinity, OmegaScope};
use stefan_thaw::solver::{critical_h0, geometric_grid, monotonicity_sweep, SolveOptions};
use stefan_thaw::{PhysicalParams, ReduceOptions};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/water_ice.cfg");
    let phys = PhysicalParams::from_config_file(path.as_ref())?;
    let opts = SolveOptions::default();
    let c = critical_h0(&phys)?;
    let grid = geometric_grid(1.01 * c, 1e4 * c, 12);
    let points = monotonicity_sweep(&phys, ReduceOptions::strict(), &grid, &opts, None)?;
    let limit = omega_infinity(&phys, ReduceOptions::strict(), &opts, OmegaScope::Proven)?;
    println!("h0,xi,omega_inf - xi");
    for p in &points {
        println!("{},{},{:e}", p.h0, p.xi, limit - p.xi);
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
