// Traces of powers of an algebraic number and the trace-expanded phase
// system built from them.

use std::error::Error;

use expsum::algebra::{epsilon_table, expand_trace_phase, MinimalPolynomial};
use num_rational::BigRational;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    // x^3 - 2, written as ascending c_0, c_1, c_2
    let cube_root = MinimalPolynomial::parse("-2,0,0")?;
    let traces = cube_root.trace_powers(9);
    println!("Tr(2^(k/3)) for k = 0..=9:");
    for (k, t) in traces.iter().enumerate() {
        println!("  k={k:<2} {t}");
    }
    assert_eq!(traces[3].to_string(), "6");

    let gaussian = MinimalPolynomial::parse("1,0")?;
    let system = expand_trace_phase(&gaussian, 3)?;
    println!("\nphase system of Q(i), k = 3:");
    print!("{}", system.to_csv());

    // Tr(i^k)/2 follows a fixed sign pattern
    for kappa in 0..=12u32 {
        let half = gaussian.trace_power(kappa as usize) / BigRational::from_integer(2.into());
        assert_eq!(half.to_string(), epsilon_table(kappa, 0).to_string());
    }
    println!("\nsign pattern matches Tr(i^k)/2 for k <= 12");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
