// Negative `M` and `N`: the front equation has two roots, and both give
// valid similarity solutions.

use stefan_thaw::solver::{solve_xi, Guarantee, SolveOptions};
use stefan_thaw::verification::{verify_convective, VerifyConfig};
use stefan_thaw::{reduce, ConvectiveSolution, PhysicalParams, ReduceOptions};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/water_ice.cfg");
    let mut phys = PhysicalParams::from_config_file(path.as_ref())?;
    // negative Clausius-Clapeyron slope flips the sign of both M and N
    phys.gamma_cc = -phys.gamma_cc;
    let d = reduce(&phys, ReduceOptions::strict())?;
    println!("M = {}, N = {}", d.m_par, d.n_par);

    let (roots, report) = solve_xi(&d, &SolveOptions::default())?;
    print!("{report}");
    assert_eq!(report.guarantee, Guarantee::AtLeastTwo);
    assert!(roots.len() >= 2);

    for &xi in &roots.roots {
        let sol = ConvectiveSolution::from_xi(&phys, &d, xi)?;
        let r = verify_convective(&sol, &VerifyConfig::default())?;
        println!(
            "xi = {xi}: stefan gap {:e}, orders u {:?} v {:?}",
            r.stefan_balance_gap, r.refinement_orders.u, r.refinement_orders.v
        );
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
