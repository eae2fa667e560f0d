// Cells of a sparse subdomain of the torus cut out by a p-adic
// localization, exported as CSV.

use std::error::Error;

use expsum::algebra::PhaseSystem;
use expsum::domains::{build_domain, enumerate_cells, write_cell_csv, LocalizationVector};
use expsum::exact_arith::format_ratio;
use expsum::padic::ScaleSpec;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let parabola = PhaseSystem::parabola();
    let scale = ScaleSpec::new(3, 2)?;
    for sigma in [[0, 0], [0, 1], [1, 1], [0, 2]] {
        let sigma = LocalizationVector::from_integers(&sigma);
        let domain = build_domain(&scale, &sigma, &parabola.degrees())?;
        println!(
            "sigma={:<4} cells={:<5} measure={}",
            sigma.to_label(),
            domain.total_cells(),
            domain.measure()
        );
    }

    let sigma = LocalizationVector::parse("1,3/2")?;
    let domain = build_domain(&scale, &sigma, &parabola.degrees())?;
    let first = enumerate_cells(&domain, 1_000)?.next().ok_or("no cells")?;
    let centre: Vec<String> = first.center.iter().map(format_ratio).collect();
    println!("\nsigma=1,3/2 first cell centre ({})", centre.join(", "));

    let mut csv = Vec::new();
    let rows = write_cell_csv(&domain, 1_000, &mut csv)?;
    let text = String::from_utf8(csv)?;
    println!("{rows} rows; head:");
    for line in text.lines().take(4) {
        println!("  {line}");
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
