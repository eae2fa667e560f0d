// Square roots of -1 in Z_p, lifted digit by digit.

use std::error::Error;

use expsum::padic::{abs_p, chi_p, hensel_sqrt_minus_one, valuation};
use expsum::exact_arith::parse_rational;
use num_bigint::BigUint;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for (p, k) in [(5, 10), (13, 8), (17, 6)] {
        let root = hensel_sqrt_minus_one(p, k)?;
        let m = root.modulus();
        let check = (&root.xi * &root.xi + BigUint::from(1u32)) % &m;
        println!("p={p:<3} K={k:<3} xi={:<14} digits={:?}", root.xi, root.digits());
        assert_eq!(check, BigUint::from(0u32));
        // lower precision is a truncation of higher precision
        for j in 1..k {
            assert_eq!(hensel_sqrt_minus_one(p, j)?, root.truncate(j));
        }
    }

    let q = parse_rational("7/250")?;
    let r = parse_rational("7/125")?;
    println!("\nv_5(7/250) = {:?}", valuation(&q, 5));
    println!("|7/250|_5 = {}", abs_p(&q, 5));
    println!("chi_5(7/125) = {}", chi_p(&r, 5)?.value());

    match hensel_sqrt_minus_one(7, 3) {
        Err(e) => println!("p=7: {e}"),
        Ok(r) => return Err(format!("unexpected root {}", r.xi).into()),
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
