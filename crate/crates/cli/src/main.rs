use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use paraspec::config::{parse_config, FieldSpec, RunConfig};
use paraspec::par::Strategy;
use paraspec::pipeline::{run_analyze, run_count, run_resolve, run_stringy, run_verify, Report, RunOptions};
use serde_json::json;

#[derive(Parser)]
#[command(name = "paraspec", version, about = "Parabolic spectral curves: combinatorics, resolution, counting and stringy data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Analyze,
    Resolve,
    Count,
    Stringy,
    Verify,
}

#[derive(clap::Args)]
struct Common {
    /// JSON config (a sector file for `stringy`).
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Series precision for local equations.
    #[arg(long)]
    precision: Option<usize>,
    /// Size of the finite field; overrides the config.
    #[arg(long)]
    q: Option<u64>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run on the calling thread only.
    #[arg(long)]
    sequential: bool,
    /// Include wall-clock timing in the report.
    #[arg(long)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Partition data, Hitchin base degrees and dimension identities.
    Analyze(Common),
    /// Blow-up resolution of local equations.
    Resolve(Common),
    /// Sample a spectral curve over GF(q) and fit its zeta function.
    Count(Common),
    /// Stringy E-polynomial and point counts from a sector file.
    Stringy(Common),
    /// Run every cross-check and exit nonzero on failure.
    Verify(Common),
}

impl Command {
    fn split(self) -> (Kind, Common) {
        match self {
            Command::Analyze(c) => (Kind::Analyze, c),
            Command::Resolve(c) => (Kind::Resolve, c),
            Command::Count(c) => (Kind::Count, c),
            Command::Stringy(c) => (Kind::Stringy, c),
            Command::Verify(c) => (Kind::Verify, c),
        }
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), String> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn failure(code: i32, errors: Vec<String>, out: Option<&PathBuf>) -> ExitCode {
    let v = json!({"errors": errors, "exit_code": code});
    let text = serde_json::to_string_pretty(&v).expect("serializes") + "\n";
    for e in &errors {
        eprintln!("error: {e}");
    }
    if let Err(e) = emit(&text, out) {
        eprintln!("error: {e}");
    }
    ExitCode::from(code as u8)
}

fn apply_overrides(cfg: &mut RunConfig, c: &Common) {
    if let Some(s) = c.seed {
        cfg.seed = s;
    }
    if let Some(p) = c.precision {
        cfg.precision = Some(p);
    }
    if let Some(q) = c.q {
        cfg.field = FieldSpec::Finite(q);
    }
}

fn run(kind: Kind, c: &Common, text: &str, opts: RunOptions) -> Result<Report, (i32, Vec<String>)> {
    if kind == Kind::Stringy {
        return run_stringy(text, c.q, opts).map_err(|e| (e.exit_code(), vec![e.to_string()]));
    }
    let mut cfg = parse_config(text).map_err(|errs| (2, errs))?;
    apply_overrides(&mut cfg, c);
    if cfg.precision == Some(0) {
        return Err((2, vec!["--precision must be positive".into()]));
    }
    let result = match kind {
        Kind::Analyze => run_analyze(&cfg, opts),
        Kind::Resolve => run_resolve(&cfg, opts),
        Kind::Count => run_count(&cfg, opts),
        Kind::Verify => run_verify(&cfg, opts),
        Kind::Stringy => unreachable!(),
    };
    result.map_err(|e| (e.exit_code(), vec![e.to_string()]))
}

fn main() -> ExitCode {
    let (kind, common) = Cli::parse().command.split();
    let text = match fs::read_to_string(&common.config) {
        Ok(t) => t,
        Err(e) => return failure(2, vec![format!("cannot read {}: {e}", common.config.display())], None),
    };
    let opts = RunOptions {
        strategy: if common.sequential { Strategy::Sequential } else { Strategy::Parallel },
        timing: common.timing,
    };
    match run(kind, &common, &text, opts) {
        Ok(report) => {
            if let Err(e) = emit(&report.render(), common.out.as_ref()) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(report.exit_code as u8)
        }
        Err((code, errors)) => failure(code, errors, common.out.as_ref()),
    }
}
