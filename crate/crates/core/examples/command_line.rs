// Driving the `expsum` front end in-process; each command writes a CSV
// with a config comment and a header.

use std::error::Error;

use expsum::cli::main_with_args;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let runs: [&[&str]; 4] = [
        &["expsum", "hensel", "--p", "5", "--K", "2"],
        &["expsum", "traces", "--minpoly", "-2,0,0", "--kappa-max", "4", "--out", "-"],
        &["expsum", "vinogradov", "--minpoly", "-1", "--d", "1", "--s", "2", "--k", "2", "--N", "4,5,6", "--out", "-"],
        &["expsum", "mv-padic", "--p", "3", "--K", "2", "--r", "4", "--out", "-"],
    ];
    for args in runs {
        println!("$ {}", args[1..].join(" "));
        let code = main_with_args(args.iter().copied());
        if code != 0 {
            return Err(format!("{} exited with {code}", args[1]).into());
        }
        println!();
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
