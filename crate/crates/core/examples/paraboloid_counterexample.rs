// The isotropic paraboloid family over Q_p: the sum of N pieces grows
// faster than the square-function bound allows.

use std::error::Error;

use expsum::counterexample::{growth_slopes, growth_table, CounterexampleFamily};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let fam = CounterexampleFamily::new(5, 2, 6.0)?;
    println!("p=5 K=2: xi = {}, on the paraboloid: {}", fam.xi().xi, fam.verify_paraboloid_membership());
    let exact = fam.sum_norm_pow_exact()?.ok_or("not an even exponent")?;
    println!("||sum f||_6^6 = {exact} (float {:.1})", fam.sum_norm_pow()?);

    let rows = growth_table(5, 3, &[2.0, 6.0])?;
    println!("\n  N    r   single      sum          ratio");
    for r in &rows {
        println!("{:>4}  {:>2}  {:>9.3}  {:>11.3}  {:>8.5}", r.n, r.r, r.single_norm, r.sum_norm, r.ratio);
    }
    let (sum_slope, ratio_slope) = growth_slopes(&rows, 6.0).ok_or("need two rows")?;
    println!("\nr=6 slopes: sum {sum_slope:.4} (1+5/6), ratio {ratio_slope:.4} (1/2-1/6)");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
