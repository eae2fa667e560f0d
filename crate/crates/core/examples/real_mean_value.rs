// Real sparse mean values by cell quadrature, next to the p-adic value.

use std::error::Error;

use expsum::algebra::PhaseSystem;
use expsum::domains::LocalizationVector;
use expsum::meanvalue::{padic_short_mv, real_sparse_mv, IndexDomain, QuadratureConfig, Sampler};
use expsum::padic::ScaleSpec;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let quad = QuadratureConfig::default();
    let cases = [
        ("parabola", PhaseSystem::parabola()),
        ("moment k=3", PhaseSystem::moment_curve(3)),
    ];
    for (name, system) in &cases {
        let sigma = LocalizationVector::zeros(system.len());
        for k in [1, 2] {
            let scale = ScaleSpec::new(3, k)?;
            let n = scale.n_u64().ok_or("N too large")?;
            let omega = IndexDomain::box_domain(n, 1);
            let a = Sampler::RandomPhases { seed: 1 }.sample(&omega);
            for r in [2.0, 4.0] {
                let real = real_sparse_mv(system, &omega, &a, r, &scale, &sigma, &quad)?;
                let padic = padic_short_mv(system, &omega, &a, r, &scale, &sigma)?;
                println!(
                    "{name:<10} N={n:<2} r={r}  real {:>12.6} (err {:.1e})  padic {:>12.6}",
                    real.value, real.quadrature_error_bound, padic.value
                );
            }
        }
    }

    let fixed = QuadratureConfig {
        order: Some(4),
        ..Default::default()
    };
    let scale = ScaleSpec::new(3, 2)?;
    let omega = IndexDomain::box_domain(9, 1);
    let a = Sampler::AllOnes.sample(&omega);
    let sigma = LocalizationVector::from_integers(&[0, 1]);
    let auto = real_sparse_mv(&PhaseSystem::parabola(), &omega, &a, 4.0, &scale, &sigma, &quad)?;
    let four = real_sparse_mv(&PhaseSystem::parabola(), &omega, &a, 4.0, &scale, &sigma, &fixed)?;
    println!("\nsigma=(0,1): auto order {:.9}, order 4 {:.9}", auto.value, four.value);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
