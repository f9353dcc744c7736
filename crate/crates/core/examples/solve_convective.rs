// Reduce a parameter file and solve the convective front equation.

use stefan_thaw::solver::{critical_h0, solve_xi, SolveOptions};
use stefan_thaw::{reduce, ConvectiveSolution, PhysicalParams, ReduceOptions};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/water_ice.cfg");
    let phys = PhysicalParams::from_config_file(path.as_ref())?;
    let d = reduce(&phys, ReduceOptions::strict())?;
    println!("M = {}, N = {}, p = {}", d.m_par, d.n_par, d.p_par);
    println!("critical h0 = {}", critical_h0(&phys)?);

    let (roots, report) = solve_xi(&d, &SolveOptions::default())?;
    print!("{report}");
    let xi = roots.principal().expect("at least one root");
    println!("xi = {xi} (residual {:e})", roots.residuals[0]);

    let sol = ConvectiveSolution::from_xi(&phys, &d, xi)?;
    for t in [3600.0, 86400.0] {
        println!(
            "t = {t} s: front at {} cm, surface at {} C",
            sol.front(t),
            sol.u(0.0, t)?
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
