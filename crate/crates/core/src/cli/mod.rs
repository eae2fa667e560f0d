//! Command-line front end. Each subcommand writes one CSV (a `#` line with
//! the resolved configuration, a header, data rows) and prints a one-line
//! summary.
//!
//! Exit codes: 0 success, 1 invalid input, 2 a verification reported
//! failure, 3 a budget was exceeded.

mod args;
mod commands;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Parser;

pub use args::{Cli, Command};

use crate::error::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_VERIFICATION: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "EXPSUM_OUT_DIR";

const COMMANDS: [&str; 12] = [
    "traces",
    "phase-system",
    "domain-cells",
    "mv-padic",
    "mv-real",
    "transfer-check",
    "restriction-estimate",
    "corollary-ratio",
    "vinogradov",
    "vinogradov-fit",
    "counterexample",
    "hensel",
];

/// A finished CSV table.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    /// Resolved configuration, written as the first `#` line.
    pub config: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Extra `#` lines written after the data.
    pub notes: Vec<String>,
    /// Pre-rendered body used instead of `header`/`rows` when set.
    pub raw_body: Option<String>,
}

impl Table {
    pub fn render(&self, command: &str) -> String {
        let mut out = format!("# expsum {command}");
        for (k, v) in &self.config {
            out.push_str(&format!(" {k}={v}"));
        }
        out.push('\n');
        match &self.raw_body {
            Some(body) => out.push_str(body),
            None => {
                out.push_str(&self.header.join(","));
                out.push('\n');
                for row in &self.rows {
                    let fields: Vec<String> = row.iter().map(|f| csv_field(f)).collect();
                    out.push_str(&fields.join(","));
                    out.push('\n');
                }
            }
        }
        for note in &self.notes {
            out.push_str("# ");
            out.push_str(note);
            out.push('\n');
        }
        out
    }
}

fn csv_field(f: &str) -> String {
    if f.contains(',') || f.contains('"') {
        format!("\"{}\"", f.replace('"', "\"\""))
    } else {
        f.to_string()
    }
}

/// What a command produced.
#[derive(Debug)]
pub struct Outcome {
    pub table: Option<Table>,
    /// Printed to stdout (stderr when the CSV goes to stdout).
    pub summary: String,
    pub verified: bool,
}

/// Parse `args` (program name first), run, and return the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match expand_config(args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        _ => EXIT_INVALID,
    }
}

/// Run a parsed invocation: execute the command (inside a pool of
/// `--threads` workers if given), write the CSV, print the summary.
pub fn run(cli: &Cli) -> Result<i32> {
    let outcome = match cli.threads {
        Some(0) => return Err(Error::invalid("--threads must be positive")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::invalid(format!("cannot build thread pool: {e}")))?
            .install(|| commands::execute(&cli.command, cli.out.is_some()))?,
        None => commands::execute(&cli.command, cli.out.is_some())?,
    };
    let name = cli.command.name();
    let to_stdout = cli.out.as_deref() == Some(Path::new("-"));
    if let Some(table) = &outcome.table {
        let text = table.render(name);
        if to_stdout {
            std::io::stdout().write_all(text.as_bytes())?;
        } else {
            let path = output_path(cli.out.as_deref(), name);
            std::fs::write(&path, text)?;
        }
    }
    if to_stdout {
        eprintln!("{}", outcome.summary);
    } else {
        println!("{}", outcome.summary);
    }
    Ok(if outcome.verified { EXIT_OK } else { EXIT_VERIFICATION })
}

fn output_path(out: Option<&Path>, command: &str) -> PathBuf {
    match out {
        Some(p) => p.to_path_buf(),
        None => {
            let dir = std::env::var_os(OUT_DIR_ENV)
                .map(PathBuf::from)
                .unwrap_or_else(|| PathBuf::from("."));
            dir.join(format!("{command}.csv"))
        }
    }
}

/// Splice `key=value` lines of a `--config` file in as flags right after
/// the subcommand, so that flags given on the command line override them.
fn expand_config(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let mut path = None;
    let mut kept = Vec::with_capacity(args.len());
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy().into_owned();
        if s == "--config" {
            let v = it
                .next()
                .ok_or_else(|| Error::invalid("--config needs a file path"))?;
            path = Some(PathBuf::from(v));
        } else if let Some(v) = s.strip_prefix("--config=") {
            path = Some(PathBuf::from(v));
        } else {
            kept.push(a);
        }
    }
    let Some(path) = path else {
        return Ok(kept);
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Error::invalid(format!("cannot read config {}: {e}", path.display())))?;
    let extra = config_flags(&text)?;
    let pos = kept
        .iter()
        .position(|a| COMMANDS.contains(&a.to_string_lossy().as_ref()))
        .ok_or_else(|| Error::invalid("no command given"))?;
    let mut out: Vec<OsString> = kept[..=pos].to_vec();
    out.extend(extra.into_iter().map(OsString::from));
    out.extend(kept[pos + 1..].iter().cloned());
    Ok(out)
}

fn config_flags(text: &str) -> Result<Vec<String>> {
    let mut flags = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::invalid(format!("config line {}: expected key=value", i + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || key == "config" {
            return Err(Error::invalid(format!("config line {}: invalid key {key:?}", i + 1)));
        }
        if key == "timing" {
            match value {
                "true" | "" => flags.push("--timing".to_string()),
                "false" => {}
                _ => return Err(Error::invalid(format!("config line {}: timing is true or false", i + 1))),
            }
            continue;
        }
        flags.push(format!("--{key}"));
        flags.push(value.to_string());
    }
    Ok(flags)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn config_lines_become_flags() {
        let flags = config_flags("# c\np=5\nK = 2\ntiming=true\n").unwrap();
        assert_eq!(flags, vec!["--p", "5", "--K", "2", "--timing"]);
        assert!(config_flags("p 5").is_err());
        assert!(config_flags("config=x").is_err());
    }

    #[test]
    fn config_is_spliced_before_user_flags() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.txt");
        std::fs::write(&path, "p=13\nK=3\n").unwrap();
        let args = expand_config(os(&["expsum", "hensel", "--config", path.to_str().unwrap(), "--p", "5"])).unwrap();
        assert_eq!(args, os(&["expsum", "hensel", "--p", "13", "--K", "3", "--p", "5"]));
        let cli = Cli::try_parse_from(args).unwrap();
        match cli.command {
            Command::Hensel(h) => {
                assert_eq!(h.p, 5);
                assert_eq!(h.big_k, 3);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn table_rendering_quotes_commas() {
        let t = Table {
            config: vec![("p".into(), "5".into())],
            header: vec!["a".into(), "b".into()],
            rows: vec![vec!["1".into(), "-2,0,0".into()]],
            notes: vec!["slope=2".into()],
            raw_body: None,
        };
        assert_eq!(t.render("x"), "# expsum x p=5\na,b\n1,\"-2,0,0\"\n# slope=2\n");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::invalid("x")), EXIT_INVALID);
        assert_eq!(exit_code(&Error::budget("cells", 10, 1)), EXIT_BUDGET);
    }
}
