// Sampled lower bounds for restriction constants on both sides, and the
// parabola ratios against their envelope.

use std::error::Error;

use expsum::algebra::PhaseSystem;
use expsum::domains::LocalizationVector;
use expsum::meanvalue::{
    corollary_ratio_experiment, transference_bound_report, IndexDomain, QuadratureConfig, Sampler,
};
use expsum::padic::ScaleSpec;
use num_rational::BigRational;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let samplers = [
        Sampler::AllOnes,
        Sampler::SinglePoint,
        Sampler::RandomPhases { seed: 3 },
        Sampler::RandomSparse { seed: 3 },
    ];
    let quad = QuadratureConfig::default();
    let scale = ScaleSpec::new(3, 2)?;
    let omega = IndexDomain::box_domain(9, 1);
    let sigma = LocalizationVector::zeros(2);
    let rep = transference_bound_report(&PhaseSystem::parabola(), &omega, 4.0, &scale, &sigma, &samplers, &quad)?;
    for est in [&rep.padic, &rep.real] {
        println!("{:<5} side:", est.side.name());
        for row in &est.rows {
            println!("  {:<14} ratio {:.6}", row.sampler.name(), row.ratio);
        }
        println!("  estimate {:.6} from {}", est.estimate, est.best.name());
    }
    println!("epsilons {:?}  factor {}  factor*real {:.3}", rep.epsilons, rep.factor, rep.scaled_real);

    let half = BigRational::new(1.into(), 2.into());
    println!("\nparabola, sigma=(0,1/2), r=4:");
    for row in corollary_ratio_experiment(3, &[2, 4], &half, 4.0, &samplers[..1], &quad)? {
        println!(
            "  N={:<3} value {:>12.3}  ratio {:>10.4}  envelope {:>10.1}",
            row.n, row.row.value, row.row.ratio, row.envelope
        );
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
