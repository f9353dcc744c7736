// Large-argument behaviour of both halves of the front equation.

use stefan_thaw::special_functions::ConvectiveLhs;
use stefan_thaw::verification::{asymptotic_suite, default_asymptotic_grid};
use stefan_thaw::{reduce, PhysicalParams, ReduceOptions};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/water_ice.cfg");
    let phys = PhysicalParams::from_config_file(path.as_ref())?;
    let d = reduce(&phys, ReduceOptions::strict())?;
    let report = asymptotic_suite(&ConvectiveLhs::from_params(&d)?, &default_asymptotic_grid());
    for c in &report.checks {
        let mark = if c.passed { "ok" } else { "FAIL" };
        println!(
            "{mark:4} {:36} {:e} (threshold {:e}) {}",
            c.name, c.observed, c.threshold, c.detail
        );
    }
    if !report.all_passed() {
        return Err("asymptotic checks failed".into());
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
