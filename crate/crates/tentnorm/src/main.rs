use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use tentnorm::haar::OscKind;
use tentnorm::report::{run, ExperimentConfig};
use tentnorm::tol::{DEFAULT_MWIS_LIMIT, DEFAULT_ORACLE_DEPTH, TOL_EXACT};
use tentnorm::{Error, Exponent};

/// Norm calculus on dyadic coefficient sequences: two-exponent tree norms
/// with optimizer witnesses, duality extremizers, Haar analysis, chain
/// atoms, Orlicz gauges, and finite ball-family geometry.
///
/// Every command emits one JSON report; commands run either on `--input`
/// or, where that is omitted, on a seeded random corpus with the module
/// invariants checked across it.  Exit code 0 means clean, 1 means a
/// checked property failed (the report embeds the counterexample), 2 means
/// the input could not be used.
#[derive(Parser)]
#[command(name = "tentnorm", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Inner exponent (a number >= 1, or `inf`).
    #[arg(long, global = true, default_value = "2")]
    p: Exponent,

    /// Outer exponent (a number >= 1, or `inf`).
    #[arg(long, global = true, default_value = "inf")]
    q: Exponent,

    /// Tree depth for corpora; step-function depth where applicable.
    #[arg(long, global = true, default_value_t = 4)]
    depth: u32,

    /// Number of random trials for corpus runs.
    #[arg(long, global = true, default_value_t = 100)]
    trials: usize,

    /// Seed for the deterministic corpus generator.
    #[arg(long, global = true, env = "DYADIC_TENT_SEED", default_value_t = 0)]
    seed: u64,

    /// Input file (JSON); omit to run on a seeded corpus.
    #[arg(long, global = true)]
    input: Option<PathBuf>,

    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Additionally write a flat `key,value` CSV of the results section.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,

    /// Depth cap for the exhaustive antichain oracles.
    #[arg(long, global = true, default_value_t = DEFAULT_ORACLE_DEPTH)]
    oracle_limit: u32,

    /// Residual tolerance for identity checks in reports.
    #[arg(long, global = true, default_value_t = TOL_EXACT)]
    tolerance: f64,

    /// Oscillation kind for `jnp`: `l1`, `l2`, or `l2-haar`.
    #[arg(long, global = true, default_value = "l1", value_parser = parse_osc)]
    osc: OscKind,
}

#[derive(Subcommand)]
enum Command {
    /// Two-exponent tree norm of a sequence, with witness and oracle checks.
    Norm,
    /// Oscillation-based norm of a step function.
    Jnp,
    /// Pairing inequality and dual-extremizer sweep over the exponent grid.
    Duality,
    /// Haar transform, oscillation identities, and multiplier norms.
    Haar,
    /// Chain-atom synthesis and greedy decomposition.
    Atoms,
    /// Luxemburg gauges and exponential-integrability constants.
    Orlicz,
    /// Ball-family overlap, coloring, independent sets, and covering.
    Overlap,
    /// Weak-type bound for the maximal operator over ball families.
    Weaktype,
    /// Separated nets with sampled cone-cover verification.
    Net,
    /// Full invariant suite over seeded corpora.
    Selftest,
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Norm => "norm",
        Command::Jnp => "jnp",
        Command::Duality => "duality",
        Command::Haar => "haar",
        Command::Atoms => "atoms",
        Command::Orlicz => "orlicz",
        Command::Overlap => "overlap",
        Command::Weaktype => "weaktype",
        Command::Net => "net",
        Command::Selftest => "selftest",
    }
}

fn parse_osc(s: &str) -> std::result::Result<OscKind, String> {
    match s {
        "l1" => Ok(OscKind::L1),
        "l2" | "l2-direct" => Ok(OscKind::L2Direct),
        "l2-haar" => Ok(OscKind::L2Haar),
        other => Err(format!("unknown oscillation kind `{other}` (expected l1, l2, or l2-haar)")),
    }
}

fn execute(cli: &Cli) -> std::result::Result<ExitCode, Error> {
    let config = ExperimentConfig {
        seed: cli.seed,
        trials: cli.trials,
        depth: cli.depth,
        p: cli.p,
        q: cli.q,
        osc: cli.osc,
        oracle_limit: cli.oracle_limit,
        mwis_limit: DEFAULT_MWIS_LIMIT,
        tolerance: cli.tolerance,
        input: cli.input.as_ref().map(|p| p.to_string_lossy().into_owned()),
    };
    let report = run(command_name(&cli.command), &config)?;
    let text = report.to_json();
    match &cli.output {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    if let Some(path) = &cli.csv {
        std::fs::write(path, report.to_csv())?;
    }
    Ok(ExitCode::from(report.exit_code() as u8))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
