//! Acceptance criteria, one PASS/FAIL line each. Run with
//! `cargo test --test acceptance -- --nocapture` to see the lines.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::time::Instant;

use expsum::algebra::{epsilon_table, expand_trace_phase, MinimalPolynomial, PhaseSystem};
use expsum::cli::main_with_args;
use expsum::counterexample::{growth_slopes, growth_table, CounterexampleFamily};
use expsum::domains::{build_domain, LocalizationVector};
use expsum::meanvalue::{modulate_coefficients, padic_short_mv, IndexDomain, Sampler};
use expsum::padic::{hensel_sqrt_minus_one, ScaleSpec};
use expsum::vinogradov::{count_solutions, count_solutions_brute, fit_growth};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

/// Run the CLI writing to `out`; returns the exit code and the data rows.
fn cli(out: &Path, args: &[&str]) -> (i32, Vec<HashMap<String, String>>) {
    let mut full = vec!["expsum"];
    full.extend_from_slice(args);
    let out_s = out.to_str().unwrap();
    full.extend_from_slice(&["--out", out_s]);
    let code = main_with_args(full);
    let text = std::fs::read_to_string(out).unwrap_or_default();
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<String> = match lines.next() {
        Some(h) => h.split(',').map(str::to_string).collect(),
        None => return (code, Vec::new()),
    };
    let rows = lines
        .map(|l| header.iter().cloned().zip(l.split(',').map(str::to_string)).collect())
        .collect();
    (code, rows)
}

fn num(row: &HashMap<String, String>, key: &str) -> f64 {
    row[key].parse().unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn criterion_1(dir: &Path) -> Outcome {
    let mut worst = 0.0f64;
    let mut ok = true;
    for (p, k) in [("3", "1"), ("3", "2"), ("5", "1"), ("5", "2")] {
        for seed in ["1", "2", "3"] {
            let (code, rows) = cli(
                &dir.join("c1.csv"),
                &["mv-padic", "--p", p, "--K", k, "--r", "2", "--sampler", "random-phases", "--seed", seed],
            );
            ok &= code == 0 && rows.len() == 1;
            if let Some(row) = rows.first() {
                worst = worst.max(rel(num(row, "value"), num(row, "denominator")));
            }
        }
    }
    outcome(ok && worst <= 1e-9, format!("max relative gap to sum|a|^2 = {worst:.2e} (tol 1e-9)"))
}

fn criterion_2(dir: &Path) -> Outcome {
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    let phases: [&[&str]; 2] = [&["--phase", "parabola"], &["--phase", "moment", "--k", "3"]];
    for phase in phases {
        for k in ["1", "2"] {
            for r in ["2", "4"] {
                for sampler in [["--sampler", "all-ones"], ["--sampler", "random-phases"]] {
                    let mut args = vec!["--p", "3", "--K", k, "--r", r, "--seed", "5"];
                    args.extend_from_slice(phase);
                    args.extend_from_slice(&sampler);
                    let mut real_args = vec!["mv-real"];
                    real_args.extend_from_slice(&args);
                    let mut padic_args = vec!["mv-padic"];
                    padic_args.extend_from_slice(&args);
                    let (c1, real) = cli(&dir.join("c2r.csv"), &real_args);
                    let (c2, padic) = cli(&dir.join("c2p.csv"), &padic_args);
                    if c1 != 0 || c2 != 0 || real.is_empty() || padic.is_empty() {
                        failures.push(format!("{} N=3^{k} r={r}: exit {c1}/{c2}", phase[1]));
                        continue;
                    }
                    let (a, b) = (num(&real[0], "value"), num(&padic[0], "value"));
                    let gap = rel(a, b);
                    worst = worst.max(gap);
                    if gap > 1e-6 {
                        failures.push(format!("{} N=3^{k} r={r} {}: real {a:.6} padic {b:.6}", phase[1], sampler[1]));
                    }
                }
            }
        }
    }
    let mut detail = format!("max relative gap {worst:.2e} (tol 1e-6)");
    if !failures.is_empty() {
        detail.push_str(&format!("; {}", failures.join("; ")));
    }
    outcome(failures.is_empty(), detail)
}

fn criterion_3(dir: &Path) -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for (p, k, n, expect) in [("3", "2", 9u64, 153u64), ("5", "2", 25, 1225)] {
        let (code, rows) = cli(&dir.join("c3.csv"), &["mv-padic", "--p", p, "--K", k, "--r", "4"]);
        let value = rows.first().map(|r| num(r, "value")).unwrap_or(f64::NAN);
        let exact = (value - expect as f64).abs() < 1e-6;
        ok &= code == 0 && exact;
        parts.push(format!("N={n}: {value} vs {expect}"));
    }
    outcome(ok, parts.join(", "))
}

fn criterion_4(dir: &Path) -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    let cases: [(&str, &[&str]); 2] = [
        ("parabola", &["--phase", "parabola", "--p", "3", "--K", "2", "--sigma", "0,1"]),
        ("moment k=3", &["--phase", "moment", "--k", "3", "--p", "3", "--K", "1", "--sigma", "0,0,1"]),
    ];
    for (name, case) in cases {
        let mut args = vec!["transfer-check"];
        args.extend_from_slice(case);
        args.extend_from_slice(&["--r", "4", "--samples", "50", "--seed", "0", "--tol", "1e-6"]);
        let (code, rows) = cli(&dir.join("c4.csv"), &args);
        let passed = rows.iter().filter(|r| r["pass"] == "true").count();
        ok &= code == 0 && rows.len() == 50 && passed == 50;
        parts.push(format!("{name}: {passed}/{} pass (exit {code})", rows.len()));
    }
    outcome(ok, parts.join(", "))
}

type Display = Vec<((u32, u32), Vec<(Vec<u32>, i64)>)>;

fn gaussian_display() -> Display {
    vec![
        ((1, 0), vec![(vec![1, 0], 1)]),
        ((1, 1), vec![(vec![0, 1], -1)]),
        ((2, 0), vec![(vec![2, 0], 1), (vec![0, 2], -1)]),
        ((2, 1), vec![(vec![1, 1], -2)]),
        ((3, 0), vec![(vec![3, 0], 1), (vec![1, 2], -1)]),
        ((3, 1), vec![(vec![2, 1], -1), (vec![0, 3], 1)]),
    ]
}

fn cube_root_display() -> Display {
    vec![
        ((1, 0), vec![(vec![1, 0, 0], 1)]),
        ((1, 1), vec![(vec![0, 1, 0], 1)]),
        ((1, 2), vec![(vec![0, 0, 1], 1)]),
        ((2, 0), vec![(vec![2, 0, 0], 1), (vec![0, 1, 1], 4)]),
        ((2, 1), vec![(vec![0, 2, 0], 1), (vec![1, 0, 1], 2)]),
        ((2, 2), vec![(vec![0, 0, 2], 1), (vec![1, 1, 0], 1)]),
        (
            (3, 0),
            vec![(vec![0, 0, 3], 4), (vec![0, 3, 0], 2), (vec![1, 1, 1], 12), (vec![3, 0, 0], 1)],
        ),
        ((3, 1), vec![(vec![0, 1, 2], 2), (vec![1, 2, 0], 1), (vec![2, 0, 1], 1)]),
        ((3, 2), vec![(vec![0, 2, 1], 2), (vec![1, 0, 2], 2), (vec![2, 1, 0], 1)]),
    ]
}

/// Compare each displayed component with the generated raw component
/// divided by `d`, and check that every recorded scale equals `d`.
fn compare_display(name: &str, system: &PhaseSystem, d: usize, display: &Display) -> Vec<String> {
    let mut problems = Vec::new();
    let dq = BigRational::from_integer(BigInt::from(d));
    if system.len() != display.len() {
        problems.push(format!("{name}: {} components, display has {}", system.len(), display.len()));
    }
    for (label, terms) in display {
        let want: BTreeMap<Vec<u32>, BigRational> = terms
            .iter()
            .map(|(e, c)| (e.clone(), BigRational::from_integer(BigInt::from(*c))))
            .collect();
        let Some(c) = system.component(*label) else {
            problems.push(format!("{name} {label:?}: missing"));
            continue;
        };
        let got: BTreeMap<Vec<u32>, BigRational> = c
            .coefficient_map()
            .into_iter()
            .map(|(e, v)| (e, BigRational::from_integer(v) * &c.scale / &dq))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        if got != want {
            let show = |m: &BTreeMap<Vec<u32>, BigRational>| {
                m.iter().map(|(e, v)| format!("{e:?}:{v}")).collect::<Vec<_>>().join(" ")
            };
            problems.push(format!("{name} {label:?}: got {{{}}} display {{{}}}", show(&got), show(&want)));
        }
        if c.scale != dq {
            problems.push(format!("{name} {label:?}: scale {} != {d}", c.scale));
        }
    }
    problems
}

fn criterion_5() -> Outcome {
    let mut problems = Vec::new();
    let gaussian = MinimalPolynomial::parse("1,0").unwrap();
    let cube = MinimalPolynomial::parse("-2,0,0").unwrap();
    problems.extend(compare_display(
        "x^2+1",
        &expand_trace_phase(&gaussian, 3).unwrap(),
        2,
        &gaussian_display(),
    ));
    problems.extend(compare_display(
        "x^3-2",
        &expand_trace_phase(&cube, 3).unwrap(),
        3,
        &cube_root_display(),
    ));
    let two = BigRational::from_integer(BigInt::from(2));
    for kappa in 0..=20u32 {
        let half = gaussian.trace_power(kappa as usize) / &two;
        if half != BigRational::from_integer(BigInt::from(epsilon_table(kappa, 0))) {
            problems.push(format!("epsilon_table disagrees at kappa={kappa}"));
        }
    }
    let detail = if problems.is_empty() {
        "both displays and the sign table match".to_string()
    } else {
        format!("{} mismatches: {}", problems.len(), problems.join("; "))
    };
    outcome(problems.is_empty(), detail)
}

fn criterion_6() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (p, k) in [(5u64, 10u32), (13, 8), (17, 6)] {
        let root = hensel_sqrt_minus_one(p, k).unwrap();
        let square = (&root.xi * &root.xi + BigUint::one()) % root.modulus();
        let coherent = (1..k).all(|j| hensel_sqrt_minus_one(p, j).unwrap().xi == &root.xi % BigUint::from(p).pow(j));
        ok &= square.is_zero() && coherent;
        parts.push(format!("({p},{k}) xi={} coherent={coherent}", root.xi));
    }
    outcome(ok, parts.join(", "))
}

fn criterion_7() -> Outcome {
    let polys = ["0", "1,0", "-2,0", "-2,0,0"];
    let mut checked = 0;
    let mut problems = Vec::new();
    for text in polys {
        let poly = MinimalPolynomial::parse(text).unwrap();
        let d = poly.degree();
        if d > 2 {
            continue;
        }
        for s in 1..=2u32 {
            for k in 1..=3u32 {
                for n in 1..=6u64 {
                    let hash = count_solutions(&poly, s, k, n).unwrap().j;
                    let brute = count_solutions_brute(&poly, s, k, n).unwrap().j;
                    checked += 1;
                    if hash != brute {
                        problems.push(format!("P={text} s={s} k={k} N={n}: hash {hash} brute {brute}"));
                    }
                    if s == 1 && hash != BigUint::from(n).pow(d as u32) {
                        problems.push(format!("P={text} s=1 k={k} N={n}: J={hash} != N^d"));
                    }
                }
            }
        }
    }
    let fit = fit_growth(&MinimalPolynomial::parse("0").unwrap(), 2, 2, &[4, 8, 16, 32]).unwrap();
    let slope_ok = (1.9..=2.1).contains(&fit.slope);
    if !slope_ok {
        problems.push(format!("slope {} outside [1.9, 2.1]", fit.slope));
    }
    outcome(
        problems.is_empty(),
        format!(
            "{checked} grid points hash == brute, slope {:.4} (envelope {}){}",
            fit.slope,
            fit.envelope_exponent,
            if problems.is_empty() { String::new() } else { format!("; {}", problems.join("; ")) }
        ),
    )
}

fn criterion_8() -> Outcome {
    let rows = growth_table(5, 3, &[2.0, 6.0]).unwrap();
    let (sum_slope, ratio_slope) = growth_slopes(&rows, 6.0).unwrap();
    let sum_ok = (sum_slope - (1.0 + 5.0 / 6.0)).abs() <= 0.2;
    let ratio_ok = (ratio_slope - (0.5 - 1.0 / 6.0)).abs() <= 0.2;
    let mut exact_ok = true;
    for k in 1..=3 {
        let fam = CounterexampleFamily::new(5, k, 2.0).unwrap();
        let n = BigUint::from(5u32).pow(k);
        exact_ok &= fam.sum_norm_pow_exact().unwrap() == Some(n.pow(7));
        exact_ok &= (fam.decoupling_ratio().unwrap() - 1.0).abs() < 1e-12;
    }
    outcome(
        sum_ok && ratio_ok && exact_ok,
        format!("sum_norm slope {sum_slope:.4} (target 1.833 +/- 0.2), ratio slope {ratio_slope:.4} (target 0.333 +/- 0.2), r=2 ratio exactly 1: {exact_ok}"),
    )
}

fn criterion_9(dir: &Path) -> Outcome {
    let mut problems = Vec::new();
    // measure identity
    let parabola = PhaseSystem::parabola();
    for (p, k) in [(3u64, 2u32), (5, 2), (3, 3)] {
        let scale = ScaleSpec::new(p, k).unwrap();
        for sigma in [[0, 0], [0, 1], [1, 1], [1, 2], [0, 2]] {
            let sig = LocalizationVector::from_integers(&sigma);
            let measure = build_domain(&scale, &sig, &parabola.degrees()).unwrap().measure();
            let n = BigInt::from(scale.n().clone());
            let expect = BigRational::new(BigInt::one(), n.pow((sigma[0] + sigma[1]) as u32));
            if measure != expect {
                problems.push(format!("measure p={p} K={k} sigma={sigma:?}: {measure}"));
            }
        }
    }
    // modulation leaves |a_n| unchanged; scaling by c multiplies by |c|^r
    let scale = ScaleSpec::new(3, 2).unwrap();
    let omega = IndexDomain::box_domain(9, 1);
    let sig = LocalizationVector::zeros(2);
    for seed in 0..5 {
        let a = Sampler::RandomSparse { seed }.sample(&omega);
        let v = [BigRational::new(1.into(), 7.into()), BigRational::new((-3).into(), 11.into())];
        let b = modulate_coefficients(&a, &v, &parabola, &omega).unwrap();
        if a.values().iter().zip(b.values()).any(|(x, y)| (x.norm() - y.norm()).abs() > 1e-12) {
            problems.push(format!("modulation changed a modulus (seed {seed})"));
        }
        let c = num_complex::Complex64::new(0.6, -1.3);
        let base = padic_short_mv(&parabola, &omega, &a, 3.0, &scale, &sig).unwrap().value;
        let scaled = padic_short_mv(&parabola, &omega, &a.scaled(c), 3.0, &scale, &sig).unwrap().value;
        if rel(scaled, c.norm().powf(3.0) * base) > 1e-12 {
            problems.push(format!("scaling covariance off (seed {seed}): {scaled} vs {base}"));
        }
    }
    // byte-identical CSV across runs and thread counts
    let runs: [&[&str]; 3] = [
        &["mv-real", "--p", "3", "--K", "2", "--r", "4", "--sigma", "0,1", "--sampler", "random-phases", "--seed", "9"],
        &["restriction-estimate", "--p", "3", "--K", "2", "--r", "3", "--side", "both", "--seed", "4"],
        &["vinogradov", "--minpoly", "1,0", "--s", "2", "--k", "2", "--N", "3,4,5"],
    ];
    for args in runs {
        let mut outputs = Vec::new();
        for threads in ["1", "4", "1", "3"] {
            let path = dir.join(format!("c9-{threads}-{}.csv", outputs.len()));
            let mut full = vec!["--threads", threads];
            full.extend_from_slice(args);
            let (code, _) = cli(&path, &full);
            if code != 0 {
                problems.push(format!("{} exited {code}", args[0]));
            }
            outputs.push(std::fs::read(&path).unwrap_or_default());
        }
        if outputs.windows(2).any(|w| w[0] != w[1]) {
            problems.push(format!("{} output differs across runs or thread counts", args[0]));
        }
    }
    outcome(
        problems.is_empty(),
        if problems.is_empty() {
            "measure identity, modulation invariance, scaling covariance, byte-identical CSVs".to_string()
        } else {
            problems.join("; ")
        },
    )
}

#[test]
fn acceptance() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let criteria: Vec<Criterion> = vec![
        ("1 Parseval at r=2", Box::new(|| criterion_1(d))),
        ("2 real equals p-adic at sigma=0", Box::new(|| criterion_2(d))),
        ("3 even-exponent oracle", Box::new(|| criterion_3(d))),
        ("4 transference on 50 seeds", Box::new(|| criterion_4(d))),
        ("5 phase-system displays", Box::new(criterion_5)),
        ("6 Hensel lifting", Box::new(criterion_6)),
        ("7 Vinogradov counter", Box::new(criterion_7)),
        ("8 counterexample growth", Box::new(criterion_8)),
        ("9 property suite", Box::new(|| criterion_9(d))),
    ];
    let mut failed = Vec::new();
    for (name, run) in &criteria {
        let start = Instant::now();
        let o = run();
        println!(
            "{} criterion {name} [{:.2}s]: {}",
            if o.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            o.detail
        );
        if !o.pass {
            failed.push(*name);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
