// Vinogradov solution counts with algebraic indeterminates, and their
// growth in N.

use std::error::Error;

use expsum::algebra::MinimalPolynomial;
use expsum::vinogradov::{count_solutions, count_solutions_brute, count_solutions_formal, fit_growth};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let rational = MinimalPolynomial::parse("-1")?;
    let rec = count_solutions(&rational, 2, 2, 4)?;
    println!("alpha=1, s=2, k=2, N=4: J = {}", rec.j);

    for (name, text) in [("sqrt(-1)", "1,0"), ("sqrt(2)", "-2,0")] {
        let poly = MinimalPolynomial::parse(text)?;
        for n in [2, 3, 4] {
            let hash = count_solutions(&poly, 2, 2, n)?;
            let brute = count_solutions_brute(&poly, 2, 2, n)?;
            let formal = count_solutions_formal(&poly, 2, 2, n)?;
            println!(
                "{name:<9} s=2 k=2 N={n}: hash {:<6} brute {:<6} formal {}",
                hash.j, brute.j, formal.j
            );
            assert_eq!(hash.j, brute.j);
        }
    }

    let fit = fit_growth(&rational, 2, 2, &[4, 8, 16, 32])?;
    println!(
        "\nlog J against log N for d=1, s=2, k=2: slope {:.4} (envelope {})",
        fit.slope, fit.envelope_exponent
    );
    for r in &fit.records {
        println!("  N={:<3} J={}", r.n, r.j);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
