use std::time::Instant;

use num_bigint::BigUint;

use super::args::*;
use super::{Outcome, Table};
use crate::algebra::{expand_trace_phase, MinimalPolynomial, PhaseSystem};
use crate::counterexample::{growth_slopes, growth_table, CounterexampleFamily};
use crate::domains::{build_domain, write_cell_csv, LocalizationVector};
use crate::error::{Error, Result};
use crate::exact_arith::{parse_rational, ExactRational};
use crate::meanvalue::{
    corollary_ratio_experiment, estimate_restriction_constant, transfer_check, transference_bound_report,
    CoefficientVector, IndexDomain, MeanValueReport, ModulationGrid, PadicKernel, QuadratureConfig, RealEvaluator,
    SampleRow, Sampler, Side,
};
use crate::padic::{hensel_sqrt_minus_one, ScaleSpec};
use crate::vinogradov::{count_solutions, count_solutions_brute, count_solutions_formal, fit_growth};

/// Largest `|Ω|` the mean-value commands accept.
const MAX_OMEGA_POINTS: u64 = 10_000_000;

const MV_HEADER: [&str; 11] = [
    "command",
    "p",
    "K",
    "sigma",
    "r",
    "sampler",
    "seed",
    "value",
    "denominator",
    "ratio",
    "error_bound",
];

pub(super) fn execute(command: &Command, out_given: bool) -> Result<Outcome> {
    let name = command.name();
    match command {
        Command::Traces(a) => traces(a),
        Command::PhaseSystem(a) => phase_system(a),
        Command::DomainCells(a) => domain_cells(a),
        Command::MvPadic(a) => mean_value(name, a, false),
        Command::MvReal(a) => mean_value(name, a, true),
        Command::TransferCheck(a) => transfer(name, a),
        Command::RestrictionEstimate(a) => restriction(name, a),
        Command::CorollaryRatio(a) => corollary(name, a),
        Command::Vinogradov(a) => vinogradov(a),
        Command::VinogradovFit(a) => vinogradov_fit(a),
        Command::Counterexample(a) => counterexample(a),
        Command::Hensel(a) => hensel(a, out_given),
    }
}

fn s<T: ToString>(x: T) -> String {
    x.to_string()
}

/// Shortest round-trip form, in exponent notation away from unit scale.
fn f(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e15).contains(&a) {
        format!("{x:e}")
    } else {
        x.to_string()
    }
}

fn kv(k: &str, v: impl ToString) -> (String, String) {
    (k.to_string(), v.to_string())
}

fn ok(table: Table, summary: String) -> Result<Outcome> {
    Ok(Outcome {
        table: Some(table),
        summary,
        verified: true,
    })
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>> {
    text.split(',')
        .enumerate()
        .map(|(i, t)| {
            t.trim()
                .parse()
                .map_err(|_| Error::invalid(format!("{what}: entry {} ({:?}) is malformed", i + 1, t.trim())))
        })
        .collect()
}

fn traces(a: &TracesArgs) -> Result<Outcome> {
    let poly = MinimalPolynomial::parse(&a.minpoly)?;
    let values = poly.trace_powers(a.kappa_max);
    let table = Table {
        config: vec![kv("minpoly", poly.to_text()), kv("kappa-max", a.kappa_max)],
        header: vec![s("kappa"), s("trace")],
        rows: values
            .iter()
            .enumerate()
            .map(|(k, t)| vec![s(k), s(t)])
            .collect(),
        ..Table::default()
    };
    let summary = format!(
        "traces of degree-{} minpoly for kappa=0..={}: {}",
        poly.degree(),
        a.kappa_max,
        values.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(",")
    );
    ok(table, summary)
}

fn phase_config(p: &PhaseArgs) -> Vec<(String, String)> {
    let mut c = vec![kv("phase", format!("{:?}", p.phase).to_lowercase())];
    if let Some(k) = p.k {
        c.push(kv("k", k));
    }
    if let Some(m) = &p.minpoly {
        c.push(kv("minpoly", format!("\"{m}\"")));
    }
    c
}

fn build_phase(p: &PhaseArgs) -> Result<PhaseSystem> {
    match p.phase {
        PhaseKind::Parabola => Ok(PhaseSystem::parabola()),
        PhaseKind::Paraboloid => Ok(PhaseSystem::paraboloid()),
        PhaseKind::Moment => {
            let k = p.k.ok_or_else(|| Error::invalid("--phase moment needs --k"))?;
            if k == 0 {
                return Err(Error::invalid("--k must be positive"));
            }
            Ok(PhaseSystem::moment_curve(k))
        }
        PhaseKind::Trace => {
            let k = p.k.ok_or_else(|| Error::invalid("--phase trace needs --k"))?;
            let m = p
                .minpoly
                .as_deref()
                .ok_or_else(|| Error::invalid("--phase trace needs --minpoly"))?;
            expand_trace_phase(&MinimalPolynomial::parse(m)?, k)
        }
    }
}

struct Setup {
    system: PhaseSystem,
    scale: ScaleSpec,
    sigma: LocalizationVector,
    omega: IndexDomain,
    config: Vec<(String, String)>,
}

fn setup(phase: &PhaseArgs, sc: &ScaleArgs, need_omega: bool) -> Result<Setup> {
    let system = build_phase(phase)?;
    let scale = ScaleSpec::new(sc.p, sc.big_k)?;
    let sigma = match &sc.sigma {
        Some(t) => LocalizationVector::parse(t)?,
        None => LocalizationVector::zeros(system.len()),
    };
    if sigma.len() != system.len() {
        return Err(Error::invalid(format!(
            "--sigma has {} entries for {} phase components",
            sigma.len(),
            system.len()
        )));
    }
    let omega = if need_omega {
        let n = scale
            .n_u64()
            .ok_or_else(|| Error::invalid("N = p^K does not fit in 64 bits"))?;
        let points = (n as u128).checked_pow(system.dim() as u32).unwrap_or(u128::MAX);
        if points > MAX_OMEGA_POINTS as u128 {
            return Err(Error::BudgetExceeded {
                what: "index domain points",
                count: points.to_string(),
                budget: MAX_OMEGA_POINTS,
            });
        }
        IndexDomain::box_domain(n, system.dim())
    } else {
        IndexDomain::box_domain(1, system.dim())
    };
    let mut config = phase_config(phase);
    config.extend([
        kv("p", sc.p),
        kv("K", sc.big_k),
        kv("sigma", sigma.to_label()),
        kv("budget", sc.budget),
    ]);
    Ok(Setup {
        system,
        scale,
        sigma,
        omega,
        config,
    })
}

fn quad_config(q: &QuadArgs) -> Result<QuadratureConfig> {
    if let Some(m) = q.order {
        if m < 2 || m % 2 != 0 {
            return Err(Error::invalid("--order must be an even number >= 2"));
        }
    }
    Ok(QuadratureConfig {
        order: q.order,
        depth: q.depth,
        max_nodes: q.max_nodes,
    })
}

fn push_quad(config: &mut Vec<(String, String)>, q: &QuadArgs) {
    config.push(kv("order", q.order.map_or(s("auto"), s)));
    config.push(kv("depth", q.depth.map_or(s("auto"), s)));
    config.push(kv("max-nodes", q.max_nodes));
}

fn parse_samplers(text: &str, seed: u64) -> Result<Vec<Sampler>> {
    text.split(',').map(|n| Sampler::parse(n, seed)).collect()
}

fn mv_row(command: &str, st: &Setup, k: u32, r: f64, sampler: &str, seed: Option<u64>, row: &SampleRow) -> Vec<String> {
    vec![
        s(command),
        s(st.scale.p()),
        s(k),
        st.sigma.to_label(),
        s(r),
        s(sampler),
        seed.map_or(String::new(), s),
        f(row.value),
        f(row.denominator),
        f(row.ratio),
        f(row.error_bound),
    ]
}

fn header(extra: &[&str]) -> Vec<String> {
    MV_HEADER.iter().chain(extra).map(s).collect()
}

fn phase_system(a: &PhaseSystemArgs) -> Result<Outcome> {
    let system = build_phase(&a.phase)?;
    let table = Table {
        config: phase_config(&a.phase),
        raw_body: Some(system.to_csv()),
        ..Table::default()
    };
    let terms: usize = system.components().iter().map(|c| c.terms.len()).sum();
    let summary = format!(
        "phase system: {} components in {} variables, {} terms, degrees {:?}",
        system.len(),
        system.dim(),
        terms,
        system.degrees()
    );
    ok(table, summary)
}

fn domain_cells(a: &DomainCellsArgs) -> Result<Outcome> {
    let st = setup(&a.phase, &a.scale, false)?;
    let domain = build_domain(&st.scale, &st.sigma, &st.system.degrees())?;
    let mut body = Vec::new();
    let rows = write_cell_csv(&domain, a.scale.budget, &mut body)?;
    let table = Table {
        config: st.config,
        raw_body: Some(String::from_utf8(body).expect("CSV is UTF-8")),
        ..Table::default()
    };
    ok(table, format!("{rows} cells, measure {}", domain.measure()))
}

fn load_coefficients(path: &std::path::Path, omega: &IndexDomain) -> Result<CoefficientVector> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))?;
    CoefficientVector::load_csv(omega, &text)
}

fn mean_value(command: &str, a: &MeanValueArgs, real: bool) -> Result<Outcome> {
    let mut st = setup(&a.phase, &a.scale, true)?;
    let quad = quad_config(&a.quad)?;
    let (coeffs, sampler_name, seed) = match &a.coeffs.coeffs {
        Some(path) => {
            st.config.push(kv("coeffs", path.display()));
            (load_coefficients(path, &st.omega)?, s("file"), None)
        }
        None => {
            let sampler = Sampler::parse(&a.coeffs.sampler, a.coeffs.seed)?;
            st.config.push(kv("sampler", sampler.name()));
            st.config.push(kv("seed", a.coeffs.seed));
            (sampler.sample(&st.omega), s(sampler.name()), sampler.seed())
        }
    };
    st.config.push(kv("r", a.r));
    if real {
        push_quad(&mut st.config, &a.quad);
    }
    let report: MeanValueReport = if real {
        RealEvaluator::new(&st.system, &st.omega, a.r, &st.scale, &st.sigma, &quad, a.scale.budget)?.evaluate(&coeffs)?
    } else {
        let kernel = PadicKernel::new(&st.system, &st.omega, a.r, &st.scale, &st.sigma, a.scale.budget)?;
        MeanValueReport {
            value: kernel.evaluate(&coeffs)?,
            r: a.r,
            method: crate::meanvalue::MeanValueMethod::PadicExact,
            quadrature_error_bound: 0.0,
            normalization: "",
        }
    };
    let denominator = coeffs.lr_norm_pow(a.r);
    let row = SampleRow {
        sampler: Sampler::AllOnes,
        value: report.value,
        denominator,
        ratio: report.value / denominator,
        error_bound: report.quadrature_error_bound,
    };
    let summary = format!(
        "{command}: value={} ratio={} error_bound={} ({})",
        f(row.value),
        f(row.ratio),
        f(row.error_bound),
        report.method.name()
    );
    let table = Table {
        rows: vec![mv_row(command, &st, a.scale.big_k, a.r, &sampler_name, seed, &row)],
        config: st.config,
        header: header(&[]),
        ..Table::default()
    };
    ok(table, summary)
}

fn transfer(command: &str, a: &TransferArgs) -> Result<Outcome> {
    if a.samples == 0 {
        return Err(Error::invalid("--samples must be positive"));
    }
    let mut st = setup(&a.phase, &a.scale, true)?;
    let quad = quad_config(&a.quad)?;
    st.config.extend([
        kv("r", a.r),
        kv("samples", a.samples),
        kv("seed", a.seed),
        kv("tol", a.tol),
    ]);
    push_quad(&mut st.config, &a.quad);
    let mut rows = Vec::new();
    let mut failures = 0;
    let mut worst = f64::NEG_INFINITY;
    for seed in a.seed..a.seed + a.samples {
        let sampler = Sampler::RandomPhases { seed };
        let coeffs = sampler.sample(&st.omega);
        let rep = transfer_check(
            &st.system,
            &st.omega,
            &coeffs,
            a.r,
            &st.scale,
            &st.sigma,
            &ModulationGrid::QuadratureNodes,
            &quad,
            a.tol,
        )?;
        if !rep.pass {
            failures += 1;
        }
        worst = worst.max(rep.real_value / rep.padic_sup_over_grid);
        let denominator = coeffs.lr_norm_pow(a.r);
        let row = SampleRow {
            sampler,
            value: rep.real_value,
            denominator,
            ratio: rep.real_value / denominator,
            error_bound: rep.quadrature_error_bound,
        };
        let mut fields = mv_row(command, &st, a.scale.big_k, a.r, sampler.name(), Some(seed), &row);
        fields.push(f(rep.padic_sup_over_grid));
        fields.push(s(rep.pass));
        rows.push(fields);
    }
    let summary = format!(
        "transfer-check: {}/{} samples pass, max real/padic_sup = {worst}",
        a.samples - failures,
        a.samples
    );
    let table = Table {
        config: st.config,
        header: header(&["padic_sup", "pass"]),
        rows,
        ..Table::default()
    };
    Ok(Outcome {
        table: Some(table),
        summary,
        verified: failures == 0,
    })
}

fn restriction(command: &str, a: &RestrictionArgs) -> Result<Outcome> {
    let mut st = setup(&a.phase, &a.scale, true)?;
    let quad = quad_config(&a.quad)?;
    let samplers = parse_samplers(&a.samplers, a.seed)?;
    st.config.extend([
        kv("r", a.r),
        kv("side", &a.side),
        kv("samplers", format!("\"{}\"", a.samplers)),
        kv("seed", a.seed),
    ]);
    push_quad(&mut st.config, &a.quad);
    let (estimates, notes) = if a.side.trim() == "both" {
        let rep = transference_bound_report(&st.system, &st.omega, a.r, &st.scale, &st.sigma, &samplers, &quad)?;
        let eps: Vec<String> = rep.epsilons.iter().map(|e| e.to_string()).collect();
        let notes = vec![
            format!("epsilons={}", eps.join(";")),
            format!("factor={}", rep.factor),
            format!("scaled_real={}", rep.scaled_real),
        ];
        (vec![rep.padic, rep.real], notes)
    } else {
        let side = Side::parse(&a.side)?;
        let est = estimate_restriction_constant(&st.system, &st.omega, a.r, &st.scale, &st.sigma, side, &samplers, &quad)?;
        (vec![est], Vec::new())
    };
    let mut rows = Vec::new();
    for est in &estimates {
        for row in &est.rows {
            let mut fields = mv_row(command, &st, a.scale.big_k, a.r, row.sampler.name(), row.sampler.seed(), row);
            fields.push(s(est.side.name()));
            rows.push(fields);
        }
    }
    let summary = estimates
        .iter()
        .map(|e| format!("{} estimate {} ({})", e.side.name(), e.estimate, e.best.name()))
        .collect::<Vec<_>>()
        .join("; ");
    let table = Table {
        config: st.config,
        header: header(&["side"]),
        rows,
        notes,
        ..Table::default()
    };
    ok(table, format!("restriction-estimate: {summary}"))
}

fn corollary(command: &str, a: &CorollaryArgs) -> Result<Outcome> {
    let ks: Vec<u32> = parse_list(&a.ks, "--K")?;
    let sigma: ExactRational = parse_rational(&a.sigma)?;
    let samplers = parse_samplers(&a.samplers, a.seed)?;
    let quad = quad_config(&a.quad)?;
    let rows = corollary_ratio_experiment(a.p, &ks, &sigma, a.r, &samplers, &quad)?;
    let mut config = vec![
        kv("p", a.p),
        kv("K", format!("\"{}\"", a.ks)),
        kv("sigma", &sigma),
        kv("r", a.r),
        kv("samplers", format!("\"{}\"", a.samplers)),
        kv("seed", a.seed),
    ];
    push_quad(&mut config, &a.quad);
    let label = LocalizationVector::new(vec![ExactRational::from_integer(0.into()), sigma]).to_label();
    let mut worst = f64::NEG_INFINITY;
    let csv_rows = rows
        .iter()
        .map(|c| {
            worst = worst.max(c.row.ratio / c.envelope);
            let r = &c.row;
            vec![
                s(command),
                s(a.p),
                s(c.k),
                label.clone(),
                s(a.r),
                s(r.sampler.name()),
                r.sampler.seed().map_or(String::new(), s),
                f(r.value),
                f(r.denominator),
                f(r.ratio),
                f(r.error_bound),
                f(c.envelope),
            ]
        })
        .collect();
    let table = Table {
        config,
        header: header(&["envelope"]),
        rows: csv_rows,
        ..Table::default()
    };
    ok(
        table,
        format!("corollary-ratio: {} rows, max ratio/envelope = {worst}", rows.len()),
    )
}

fn check_degree(poly: &MinimalPolynomial, d: Option<usize>) -> Result<()> {
    match d {
        Some(d) if d != poly.degree() => Err(Error::invalid(format!(
            "--d {d} does not match the degree {} of the minimal polynomial",
            poly.degree()
        ))),
        _ => Ok(()),
    }
}

const VINOGRADOV_HEADER: [&str; 8] = ["d", "s", "k", "N", "minpoly", "J", "method", "seconds"];

fn vinogradov_row(r: &crate::vinogradov::SolutionCountRecord, timing: bool) -> Vec<String> {
    vec![
        s(r.d),
        s(r.s),
        s(r.k),
        s(r.n),
        r.minpoly.to_text(),
        s(&r.j),
        s(r.method.name()),
        f(if timing { r.seconds } else { 0.0 }),
    ]
}

fn vinogradov(a: &VinogradovArgs) -> Result<Outcome> {
    let poly = MinimalPolynomial::parse(&a.minpoly)?;
    check_degree(&poly, a.d)?;
    let ns: Vec<u64> = parse_list(&a.ns, "--N")?;
    let mut rows = Vec::new();
    let mut js: Vec<BigUint> = Vec::new();
    for &n in &ns {
        let start = Instant::now();
        let mut rec = match a.method {
            CountMethodArg::Hash => count_solutions(&poly, a.s, a.k, n)?,
            CountMethodArg::Brute => count_solutions_brute(&poly, a.s, a.k, n)?,
            CountMethodArg::Formal => count_solutions_formal(&poly, a.s, a.k, n)?,
        };
        rec.seconds = start.elapsed().as_secs_f64();
        js.push(rec.j.clone());
        rows.push(vinogradov_row(&rec, a.timing));
    }
    let config = vec![
        kv("minpoly", format!("\"{}\"", poly.to_text())),
        kv("d", poly.degree()),
        kv("s", a.s),
        kv("k", a.k),
        kv("N", format!("\"{}\"", a.ns)),
        kv("method", format!("{:?}", a.method).to_lowercase()),
        kv("timing", a.timing),
    ];
    let table = Table {
        config,
        header: VINOGRADOV_HEADER.iter().map(s).collect(),
        rows,
        ..Table::default()
    };
    let summary = ns
        .iter()
        .zip(&js)
        .map(|(n, j)| format!("N={n} J={j}"))
        .collect::<Vec<_>>()
        .join(", ");
    ok(table, summary)
}

fn vinogradov_fit(a: &VinogradovFitArgs) -> Result<Outcome> {
    let poly = MinimalPolynomial::parse(&a.minpoly)?;
    check_degree(&poly, a.d)?;
    let ns: Vec<u64> = parse_list(&a.ns, "--N")?;
    let fit = fit_growth(&poly, a.s, a.k, &ns)?;
    let config = vec![
        kv("minpoly", format!("\"{}\"", poly.to_text())),
        kv("d", poly.degree()),
        kv("s", a.s),
        kv("k", a.k),
        kv("N", format!("\"{}\"", a.ns)),
        kv("timing", a.timing),
    ];
    let table = Table {
        config,
        header: VINOGRADOV_HEADER.iter().map(s).collect(),
        rows: fit.records.iter().map(|r| vinogradov_row(r, a.timing)).collect(),
        notes: vec![
            format!("slope={}", fit.slope),
            format!("intercept={}", fit.intercept),
            format!("envelope_exponent={}", fit.envelope_exponent),
        ],
        ..Table::default()
    };
    ok(
        table,
        format!(
            "vinogradov-fit: slope {} (envelope exponent {})",
            fit.slope, fit.envelope_exponent
        ),
    )
}

fn counterexample(a: &CounterexampleArgs) -> Result<Outcome> {
    let rs: Vec<f64> = parse_list(&a.r, "--r")?;
    let rows = growth_table(a.p, a.kmax, &rs)?;
    let mut members = true;
    for k in 1..=a.kmax {
        members &= CounterexampleFamily::new(a.p, k, rs[0])?.verify_paraboloid_membership();
    }
    let csv_rows = rows
        .iter()
        .map(|r| {
            vec![
                s(r.p),
                s(r.k),
                s(r.n),
                s(r.r),
                f(r.single_norm),
                f(r.sum_norm),
                f(r.ratio),
                f(r.log_ratio),
            ]
        })
        .collect();
    let mut notes = vec![format!("paraboloid_membership={members}")];
    let mut slopes = Vec::new();
    for &r in &rs {
        if let Some((sum, ratio)) = growth_slopes(&rows, r) {
            notes.push(format!("r={r} sum_norm_slope={sum} ratio_slope={ratio}"));
            slopes.push(format!("r={r}: ratio slope {ratio}"));
        }
    }
    let table = Table {
        config: vec![kv("p", a.p), kv("kmax", a.kmax), kv("r", format!("\"{}\"", a.r))],
        header: ["p", "k", "N", "r", "single_norm", "sum_norm", "ratio", "log_ratio"]
            .iter()
            .map(s)
            .collect(),
        rows: csv_rows,
        notes,
        raw_body: None,
    };
    let summary = format!(
        "counterexample: {} rows, membership {}{}{}",
        rows.len(),
        if members { "ok" } else { "FAILED" },
        if slopes.is_empty() { "" } else { ", " },
        slopes.join(", ")
    );
    Ok(Outcome {
        table: Some(table),
        summary,
        verified: members,
    })
}

fn hensel(a: &HenselArgs, out_given: bool) -> Result<Outcome> {
    let root = hensel_sqrt_minus_one(a.p, a.big_k)?;
    let table = out_given.then(|| Table {
        config: vec![kv("p", a.p), kv("K", a.big_k)],
        header: vec![s("p"), s("K"), s("modulus"), s("xi")],
        rows: vec![vec![s(a.p), s(a.big_k), s(root.modulus()), s(&root.xi)]],
        ..Table::default()
    });
    Ok(Outcome {
        table,
        summary: root.xi.to_string(),
        verified: true,
    })
}
