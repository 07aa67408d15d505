use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

mod commands;
mod report;

use commands::*;

#[derive(Parser, Debug)]
#[command(
    name = "loopalg",
    version,
    about = "Exact computations in multi-loop affine Lie algebras"
)]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for the library's parallel loops.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Structure data of a simple Lie algebra.
    RootSystem(RootSystemArgs),
    /// Bracket of two elements of the loop algebra.
    Bracket(BracketArgs),
    /// Witness certificates for non-constant elements of U(ĝ_k⁻).
    CheckCommutator(CheckCommutatorArgs),
    /// Truncated induced module with its blocks and checks.
    BuildModule(ModuleArgs),
    /// Dimension of the commutant of a truncated quotient.
    Commutant(CommutantArgs),
    /// Separates a candidate vector from shifted irreducible quotients.
    Distinguish(DistinguishArgs),
    /// Sugawara commutator identity on a grid.
    SugawaraVerify(SugawaraArgs),
    /// Recursion for E^k_λ and its stabilization.
    Ek(EkArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let seed = cli.seed;
    let result = match &cli.cmd {
        Command::RootSystem(a) => root_system(a),
        Command::Bracket(a) => bracket(a),
        Command::CheckCommutator(a) => check_commutator(a, seed),
        Command::BuildModule(a) => build_module(a),
        Command::Commutant(a) => commutant(a),
        Command::Distinguish(a) => distinguish(a),
        Command::SugawaraVerify(a) => sugawara_verify(a),
        Command::Ek(a) => ek(a),
    };
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let text = report.render();
    match &cli.out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, &text) {
                eprintln!("error: cannot write {}: {e}", p.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(if report.pass { 0 } else { 1 })
}
