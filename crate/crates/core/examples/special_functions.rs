// The error-function family and the auxiliary functions of the front
// equation, including arguments where naive evaluation overflows.

use stefan_thaw::special_functions::{erfc, erfcx, g1_eval, g2_eval, g_eval, g_scaled};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for x in [0.5, 5.0, 30.0] {
        println!("erfc({x}) = {:e}, erfcx({x}) = {}", erfc(x), erfcx(x));
    }
    for (p, y) in [(0.0, 1.0), (0.5, 2.0), (3.0, 1.5)] {
        println!("g({p}, {y}) = {}", g_eval(p, y)?.value);
    }
    // g(1, 60) ~ sqrt(pi) exp(900) is not a double, but its logarithm is
    let big = g_scaled(1.0, 60.0)?;
    println!("ln g(1, 60) = {}", big.ln());
    let g1 = g1_eval(1.0, 53.0, 0.5)?;
    println!("G1(1, 53) = {:e} (log space: {})", g1.value, g1.log_space);
    println!("G2(10) with gamma0 = 1: {}", g2_eval(10.0, 1.0)?.value);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
