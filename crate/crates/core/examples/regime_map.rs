// Classification of the four (M, N) sign quadrants on either side of the
// critical heat transfer coefficient.

use stefan_thaw::solver::{classify, critical_h0, SolveOptions};
use stefan_thaw::{reduce, PhysicalParams, ReduceOptions};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/water_ice.cfg");
    let base = PhysicalParams::from_config_file(path.as_ref())?;
    let critical = critical_h0(&base)?;
    // the sign of gamma_cc sets the sign of M; with it, c_w - c_i sets N
    let quadrants = [
        ("M>0 N>0", 5e-5, 1.0, 0.5),
        ("M>0 N<0", 5e-5, 0.5, 1.0),
        ("M<0 N>0", -5e-5, 0.5, 1.0),
        ("M<0 N<0", -5e-5, 1.0, 0.5),
    ];
    for (name, gamma, c_w, c_i) in quadrants {
        for factor in [0.5, 2.0] {
            let mut p = base.clone();
            p.gamma_cc = gamma;
            p.c_w = c_w;
            p.c_i = c_i;
            p.h0 = Some(factor * critical);
            let d = reduce(&p, ReduceOptions::strict())?;
            let r = classify(&d, &SolveOptions::default());
            println!("{name}, h0 = {factor} x critical: {}", r.summary());
        }
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
