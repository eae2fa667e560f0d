// p-adic short mean values: Parseval at r = 2 and congruence counts at
// even exponents.

use std::error::Error;

use expsum::algebra::PhaseSystem;
use expsum::domains::LocalizationVector;
use expsum::meanvalue::{padic_short_mv, CoefficientVector, IndexDomain, Sampler};
use expsum::padic::ScaleSpec;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let parabola = PhaseSystem::parabola();
    let sigma = LocalizationVector::zeros(2);
    for (p, k) in [(3, 1), (3, 2), (5, 1), (5, 2)] {
        let scale = ScaleSpec::new(p, k)?;
        let n = scale.n_u64().ok_or("N too large")?;
        let omega = IndexDomain::box_domain(n, 1);
        let a = Sampler::RandomPhases { seed: 7 }.sample(&omega);
        let mv = padic_short_mv(&parabola, &omega, &a, 2.0, &scale, &sigma)?;
        println!("N={n:<3} r=2  mean value {:.12}  sum|a|^2 {:.12}", mv.value, a.lr_norm_pow(2.0));
    }

    println!();
    for (p, k) in [(3, 1), (3, 2)] {
        let scale = ScaleSpec::new(p, k)?;
        let n = scale.n_u64().ok_or("N too large")?;
        let omega = IndexDomain::box_domain(n, 1);
        let ones = CoefficientVector::ones(&omega);
        let mv = padic_short_mv(&parabola, &omega, &ones, 4.0, &scale, &sigma)?;
        println!("N={n:<3} r=4  a=1  mean value {:.6}  (2N^2-N = {})", mv.value, 2 * n * n - n);
    }

    // localizing one component leaves fewer, coarser cells
    let scale = ScaleSpec::new(3, 2)?;
    let omega = IndexDomain::box_domain(9, 1);
    let ones = CoefficientVector::ones(&omega);
    let local = padic_short_mv(&parabola, &omega, &ones, 4.0, &scale, &LocalizationVector::from_integers(&[0, 1]))?;
    println!("\nN=9 r=4 sigma=(0,1)  mean value {:.6}", local.value);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
