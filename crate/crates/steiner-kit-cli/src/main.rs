//! Command-line front end: build simplex complexes, decompose chains,
//! certify complexes from files, and run the named check suites.
//!
//! Exit codes: 0 when everything checks out, 1 when a requested check
//! fails (the payload carries the witness), 2 on bad input. Output is
//! deterministic for fixed input; set `STEINER_KIT_LOG` for progress
//! lines on standard error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use steiner_kit::adc::{Adc, validate_adc};
use steiner_kit::algebra::Chain;
use steiner_kit::decomposition::{decompose_full, render, tree_to_json};
use steiner_kit::omega::Cell;
use steiner_kit::simplicial::standard;
use steiner_kit::verify::{
    DEFAULT_SEED, SuiteReport, run_all, suite_coherence, suite_complicial, suite_faces,
    suite_horns,
};

#[derive(Parser)]
#[command(name = "steiner-kit", version, about = "Chain-level pasting calculus tools")]
struct Cli {
    /// Write the JSON payload to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the chain complex of the standard n-simplex.
    Oriental {
        #[arg(allow_hyphen_values = true)]
        n: i64,
    },
    /// Decompose a coherent chain over a complex loaded from a file.
    Decompose {
        /// Path to a complex JSON file.
        adc: PathBuf,
        /// The chain as inline JSON, e.g. '{"0234":1,"0124":1}'.
        chain: String,
        /// Ambient cell dimension.
        dim: usize,
    },
    /// Validate a complex file and certify that its basis is unitary
    /// and loop-free.
    Check {
        /// Path to a complex JSON file.
        adc: PathBuf,
    },
    /// Run named check suites over the built-in complexes.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Largest simplex dimension the suites touch (at most 9).
        #[arg(long, default_value_t = 5)]
        max_n: usize,
        /// Seed for the cell sampler.
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Faces,
    Coherence,
    Horns,
    Complicial,
    All,
}

fn log(msg: &str) {
    let on = std::env::var_os("STEINER_KIT_LOG").is_some_and(|v| !v.is_empty() && v != "0");
    if on {
        eprintln!("[steiner-kit] {msg}");
    }
}

/// A failed check: exit 1, payload still emitted. Input errors become
/// plain strings and exit 2.
struct CheckFailed(Value);

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(Ok(payload)) => match emit(&cli, &payload) {
            Ok(()) => ExitCode::SUCCESS,
            Err(msg) => input_error(&msg),
        },
        Ok(Err(CheckFailed(payload))) => match emit(&cli, &payload) {
            Ok(()) => ExitCode::from(1),
            Err(msg) => input_error(&msg),
        },
        Err(msg) => input_error(&msg),
    }
}

fn input_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn emit(cli: &Cli, payload: &Value) -> Result<(), String> {
    let text = format!("{}\n", serde_json::to_string_pretty(payload).expect("payload is JSON"));
    match &cli.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(command: &Command) -> Result<Result<Value, CheckFailed>, String> {
    match command {
        Command::Oriental { n } => cmd_oriental(*n).map(Ok),
        Command::Decompose { adc, chain, dim } => cmd_decompose(adc, chain, *dim).map(Ok),
        Command::Check { adc } => cmd_check(adc),
        Command::Verify { suite, max_n, seed } => cmd_verify(*suite, *max_n, *seed),
    }
}

fn load_adc(path: &PathBuf) -> Result<Adc, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| format!("{} is not JSON: {e}", path.display()))?;
    let k = Adc::from_json(&value).map_err(|e| format!("invalid complex: {e}"))?;
    log(&format!("loaded complex with {} basis elements", k.basis().len()));
    Ok(k)
}

fn cmd_oriental(n: i64) -> Result<Value, String> {
    if !(0..=9).contains(&n) {
        return Err(format!("the simplex dimension must be between 0 and 9, got {n}"));
    }
    let s = standard(n as usize).map_err(|e| e.to_string())?;
    let k = s.chains_of().map_err(|e| e.to_string())?;
    log(&format!("built the {n}-simplex complex, {} basis elements", k.basis().len()));
    Ok(k.to_json())
}

fn cmd_decompose(adc: &PathBuf, chain_text: &str, dim: usize) -> Result<Value, String> {
    let k = load_adc(adc)?;
    let value: Value =
        serde_json::from_str(chain_text).map_err(|e| format!("chain is not JSON: {e}"))?;
    let chain =
        Chain::from_json(k.basis(), &value).map_err(|e| format!("invalid chain: {e}"))?;
    let cell = Cell::new(&k, chain, dim).map_err(|e| format!("not a cell: {e}"))?;
    let tree = decompose_full(&k, &cell).map_err(|e| format!("cannot decompose: {e}"))?;
    log("decomposition finished");
    Ok(serde_json::json!({
        "dim": dim,
        "input": cell.chain().to_json(),
        "rendered": render(k.basis(), &tree),
        "tree": tree_to_json(k.basis(), &tree),
    }))
}

fn cmd_check(adc: &PathBuf) -> Result<Result<Value, CheckFailed>, String> {
    let text = std::fs::read_to_string(adc)
        .map_err(|e| format!("cannot read {}: {e}", adc.display()))?;
    let raw = serde_json::from_str(&text)
        .map_err(|e| format!("{} is not a complex JSON file: {e}", adc.display()))?;
    let k = validate_adc(&raw).map_err(|e| format!("invalid complex: {e}"))?;
    let unitary = k.is_unitary();
    let loop_free = k.is_loop_free();
    let ok = unitary.ok() && loop_free.ok();
    let payload = serde_json::json!({
        "basis_size": k.basis().len(),
        "max_dim": k.max_dim(),
        "ok": ok,
        "unitary": serde_json::to_value(&unitary).expect("report serializes"),
        "loop_free": serde_json::to_value(&loop_free).expect("report serializes"),
    });
    log(&format!("checked {}: ok = {ok}", adc.display()));
    Ok(if ok { Ok(payload) } else { Err(CheckFailed(payload)) })
}

fn cmd_verify(suite: Suite, max_n: usize, seed: u64) -> Result<Result<Value, CheckFailed>, String> {
    if max_n > 9 {
        return Err(format!("--max-n is capped at 9, got {max_n}"));
    }
    let reports: Vec<SuiteReport> = match suite {
        Suite::Faces => vec![suite_faces(max_n)],
        Suite::Coherence => vec![suite_coherence(max_n, seed, 60)],
        Suite::Horns => vec![suite_horns(max_n)],
        Suite::Complicial => vec![suite_complicial(max_n)],
        Suite::All => run_all(max_n, seed),
    };
    for report in &reports {
        log(&format!("suite {}: ok = {}", report.suite, report.ok()));
    }
    let ok = reports.iter().all(|r| r.ok());
    let payload = serde_json::json!({
        "ok": ok,
        "max_n": max_n,
        "seed": seed,
        "suites": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
    });
    Ok(if ok { Ok(payload) } else { Err(CheckFailed(payload)) })
}
