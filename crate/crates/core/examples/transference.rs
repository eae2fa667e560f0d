// The real sparse mean value against the supremum of modulated p-adic
// mean values, coefficient vector by coefficient vector.

use std::error::Error;

use expsum::algebra::PhaseSystem;
use expsum::domains::LocalizationVector;
use expsum::meanvalue::{
    transfer_check, IndexDomain, ModulationGrid, QuadratureConfig, Sampler, DEFAULT_TRANSFER_TOL,
};
use expsum::padic::ScaleSpec;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let quad = QuadratureConfig::default();
    let cases = [
        (PhaseSystem::parabola(), ScaleSpec::new(3, 2)?, vec![0, 1]),
        (PhaseSystem::moment_curve(3), ScaleSpec::new(3, 1)?, vec![0, 0, 1]),
    ];
    for (system, scale, sigma) in &cases {
        let sigma = LocalizationVector::from_integers(sigma);
        let omega = IndexDomain::box_domain(scale.n_u64().ok_or("N too large")?, 1);
        for seed in 0..3 {
            let a = Sampler::RandomPhases { seed }.sample(&omega);
            let rep = transfer_check(
                system,
                &omega,
                &a,
                4.0,
                scale,
                &sigma,
                &ModulationGrid::QuadratureNodes,
                &quad,
                DEFAULT_TRANSFER_TOL,
            )?;
            println!(
                "components={} sigma={:<6} seed={seed}  real {:>10.4}  sup padic {:>10.4}  over {:>5} nodes  {}",
                system.len(),
                sigma.to_label(),
                rep.real_value,
                rep.padic_sup_over_grid,
                rep.grid_size,
                if rep.pass { "pass" } else { "FAIL" }
            );
        }
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
