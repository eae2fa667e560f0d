use std::process::{Command, Output};

fn expsum(args: &[&str], dir: &std::path::Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_expsum"))
        .args(args)
        .current_dir(dir)
        .env_remove("EXPSUM_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn hensel_prints_root() {
    let dir = tempfile::tempdir().unwrap();
    let o = expsum(&["hensel", "--p", "5", "--K", "2"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "7");
    // no CSV unless asked for
    assert!(!dir.path().join("hensel.csv").exists());
}

#[test]
fn traces_of_cube_root_of_two() {
    let dir = tempfile::tempdir().unwrap();
    for flag in [vec!["--minpoly", "-2,0,0"], vec!["--minpoly=-2,0,0"]] {
        let mut args = vec!["traces"];
        args.extend(flag);
        args.extend(["--kappa-max", "4", "--out", "-"]);
        let o = expsum(&args, dir.path());
        assert_eq!(o.status.code(), Some(0));
        let out = stdout(&o);
        assert!(out.starts_with("# expsum traces"));
        let rows = data_rows(&out);
        let pairs: Vec<(String, String)> = rows.into_iter().map(|r| (r[0].clone(), r[1].clone())).collect();
        let want = [("0", "3"), ("1", "0"), ("2", "0"), ("3", "6"), ("4", "0")];
        assert_eq!(pairs.len(), 5);
        for ((k, t), (wk, wt)) in pairs.iter().zip(want) {
            assert_eq!((k.as_str(), t.as_str()), (wk, wt));
        }
    }
}

#[test]
fn vinogradov_rational_case() {
    let dir = tempfile::tempdir().unwrap();
    let o = expsum(
        &["vinogradov", "--minpoly", "-1", "--d", "1", "--s", "2", "--k", "2", "--N", "4"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("vinogradov.csv")).unwrap();
    let header = csv.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "d,s,k,N,minpoly,J,method,seconds");
    assert_eq!(data_rows(&csv)[0][5], "28");
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("outdir");
    std::fs::create_dir(&out).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_expsum"))
        .args(["mv-padic", "--p", "3", "--K", "1", "--r", "2"])
        .current_dir(dir.path())
        .env("EXPSUM_OUT_DIR", &out)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(out.join("mv-padic.csv").exists());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let code = |args: &[&str]| expsum(args, d).status.code();
    // p ≡ 3 mod 4 and composite p
    assert_eq!(code(&["hensel", "--p", "7", "--K", "2"]), Some(1));
    assert_eq!(code(&["hensel", "--p", "9", "--K", "2"]), Some(1));
    // σK not an integer
    assert_eq!(code(&["mv-padic", "--p", "3", "--K", "1", "--r", "4", "--sigma", "0,1/2"]), Some(1));
    // rational root
    assert_eq!(code(&["traces", "--minpoly", "-1,0", "--kappa-max", "3"]), Some(1));
    assert_eq!(code(&["traces", "--minpoly", "1/0", "--kappa-max", "3"]), Some(1));
    assert_eq!(code(&["vinogradov", "--minpoly", "1,0", "--d", "3", "--s", "1", "--k", "1", "--N", "2"]), Some(1));
    assert_eq!(code(&["mv-padic", "--p", "3", "--K", "1", "--r", "4", "--bogus", "1"]), Some(1));
    assert_eq!(code(&["no-such-command"]), Some(1));
    assert_eq!(code(&["--help"]), Some(0));
    // budgets
    assert_eq!(code(&["mv-padic", "--p", "3", "--K", "9", "--r", "4", "--phase", "paraboloid"]), Some(3));
    assert_eq!(code(&["domain-cells", "--p", "5", "--K", "3", "--budget", "100"]), Some(3));
    // a failing verification
    assert_eq!(
        code(&["transfer-check", "--p", "3", "--K", "1", "--r", "4", "--tol", "-0.5", "--samples", "1"]),
        Some(2)
    );
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# hensel settings\np=13\nK=3\n").unwrap();
    let cfg_s = cfg.to_str().unwrap();
    let o = expsum(&["hensel", "--config", cfg_s], dir.path());
    assert_eq!(stdout(&o).trim(), "239");
    let o = expsum(&["hensel", "--config", cfg_s, "--p", "5"], dir.path());
    assert_eq!(stdout(&o).trim(), "57");
    std::fs::write(&cfg, "p=13\nK=3\nunknown=1\n").unwrap();
    assert_eq!(expsum(&["hensel", "--config", cfg_s], dir.path()).status.code(), Some(1));
}

#[test]
fn csv_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let runs: [&[&str]; 4] = [
        &["mv-real", "--p", "3", "--K", "2", "--r", "3", "--sampler", "random-phases", "--seed", "11"],
        &["transfer-check", "--p", "3", "--K", "2", "--sigma", "0,1", "--r", "4", "--samples", "3"],
        &["counterexample", "--p", "5", "--kmax", "2", "--r", "4,6"],
        &["vinogradov", "--minpoly", "-2,0", "--s", "2", "--k", "2", "--N", "3,4"],
    ];
    for args in runs {
        let mut seen: Option<String> = None;
        for threads in ["1", "4", "2"] {
            let mut full = vec!["--threads", threads, "--out", "-"];
            full.extend_from_slice(args);
            let o = expsum(&full, dir.path());
            assert_eq!(o.status.code(), Some(0), "{args:?}");
            let out = stdout(&o);
            assert!(out.lines().next().unwrap().starts_with("# expsum "));
            match &seen {
                None => seen = Some(out),
                Some(prev) => assert_eq!(prev, &out, "{args:?} with {threads} threads"),
            }
        }
    }
}
