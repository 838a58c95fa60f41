//! `fanpart`: certified bounds, fan-partition solving and the supporting
//! file plumbing.

mod certify;
mod gen;
mod manifest;
mod problem;
mod solve;
mod table;
mod transform;

use std::fmt;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "fanpart", version, about = "Equipartitions of measures by complex regular fans")]
struct Cli {
    /// Worker threads; defaults to one per core.
    #[arg(long, global = true, env = "FANPART_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the characteristic polynomial of an annihilation set and the
    /// dimension it certifies.
    Certify(certify::CertifyArgs),
    /// Regenerate the reference bound table and compare it with the golden copy.
    Table(table::TableArgs),
    /// Search for a configuration balancing the given point clouds.
    Solve(solve::SolveArgs),
    /// Re-check the partition claim of a solve result.
    Verify(solve::VerifyArgs),
    /// Generate seeded synthetic point clouds as CSV.
    Gen(gen::GenArgs),
    /// Fourier transform of a region-mass file.
    Transform(transform::TransformArgs),
}

/// Bad arguments or malformed input files (exit code 2).
#[derive(Debug)]
pub struct Usage(pub String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let outcome = match cli.command {
        Command::Certify(a) => certify::run(a),
        Command::Table(a) => table::run(a),
        Command::Solve(a) => solve::run_solve(a),
        Command::Verify(a) => solve::run_verify(a),
        Command::Gen(a) => gen::run(a),
        Command::Transform(a) => transform::run(a),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<fanpart::Error>() {
                Some(fanpart::Error::Uncertified(_)) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

/// Writes `text` to `path`, or to standard output.
pub fn emit(path: Option<&std::path::Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| anyhow::anyhow!("writing {}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
