use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::Args;
use fanpart::certify::PartitionClaim;
use fanpart::solver::{solve, verify_claim, SolveResult, VerificationReport};
use serde::{Deserialize, Serialize};

use crate::manifest::{digest_file, unwrap_json, wrap_json};
use crate::problem::{load_problem, ProblemFile};
use crate::usage;

#[derive(Args)]
pub struct SolveArgs {
    /// Problem description (JSON).
    #[arg(long)]
    problem: PathBuf,
    /// Result file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for the search (required, so every run can be repeated).
    #[arg(long)]
    seed: u64,
    /// Relative residual counted as converged.
    #[arg(long)]
    tol: Option<f64>,
    /// Maximum objective evaluations.
    #[arg(long)]
    budget: Option<usize>,
    /// Search even when existence is not certified in this dimension.
    #[arg(long)]
    force: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SolveOutput {
    pub problem: ProblemFile,
    pub certified_dimension: Option<u32>,
    pub forced: bool,
    pub result: SolveResult,
    pub verification: Option<VerificationReport>,
}

pub fn run_solve(args: SolveArgs) -> Result<ExitCode> {
    let mut loaded = load_problem(&args.problem, args.seed)?;
    if let Some(t) = args.tol {
        loaded.problem.tolerance = t;
    }
    if let Some(b) = args.budget {
        loaded.problem.budget.max_evaluations = b;
    }
    let prob = &loaded.problem;
    let certified_dimension = prob.certified_dimension()?;
    let forced = args.force && !prob.is_certified()?;
    let result = solve(prob, args.force)?;
    let verification = match prob.target.implied_claim() {
        Ok(claim) => Some(verify_claim(&result.config, prob, &claim, prob.tolerance)?),
        Err(fanpart::Error::NoClaim) => None,
        Err(e) => return Err(e.into()),
    };
    eprintln!(
        "{} after {} evaluations: residual {:.3e} (tolerance {:.1e})",
        if result.converged { "converged" } else { "not converged" },
        result.evaluations,
        result.residual,
        prob.tolerance
    );
    let out = SolveOutput {
        problem: loaded.file,
        certified_dimension,
        forced,
        result,
        verification,
    };
    let text = wrap_json("solve", "solve", &out, loaded.inputs, Some(args.seed))?;
    crate::emit(args.out.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Args)]
pub struct VerifyArgs {
    /// Problem description the result was computed for.
    #[arg(long)]
    problem: PathBuf,
    /// Result file written by `solve`.
    #[arg(long)]
    result: PathBuf,
    /// Tolerance for every claim check; defaults to the problem's.
    #[arg(long)]
    tol: Option<f64>,
    /// Claim to check instead of the one implied by the set:
    /// full, q8-mod-z4, coset-constant=G;G... or coset-sums=G;G... with G like 0,3.
    #[arg(long)]
    claim: Option<String>,
    /// Report file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_generators(s: &str) -> Result<Vec<Vec<usize>>> {
    s.split(';')
        .map(|g| {
            g.split(',')
                .map(|x| x.trim().parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| usage(format!("bad generator {g:?}: {e}")))
        })
        .collect()
}

fn parse_claim(s: &str) -> Result<PartitionClaim> {
    if s == "full" {
        return Ok(PartitionClaim::FullEquipartition);
    }
    if s == "q8-mod-z4" {
        return Ok(PartitionClaim::Q8ModuloZ4);
    }
    if let Some(g) = s.strip_prefix("coset-constant=") {
        return Ok(PartitionClaim::CosetConstant { generators: parse_generators(g)? });
    }
    if let Some(g) = s.strip_prefix("coset-sums=") {
        return Ok(PartitionClaim::CosetSums { generators: parse_generators(g)? });
    }
    Err(usage(format!("unknown claim {s:?}")))
}

pub fn run_verify(args: VerifyArgs) -> Result<ExitCode> {
    let loaded = load_problem(&args.problem, 0)?;
    let prob = &loaded.problem;
    let text = std::fs::read_to_string(&args.result)
        .map_err(|e| usage(format!("reading {}: {e}", args.result.display())))?;
    let result: SolveResult = match unwrap_json::<SolveOutput>(&text, "solve") {
        Ok(o) => o.result,
        Err(_) => unwrap_json(&text, "result").map_err(|e| usage(format!("malformed result file: {e}")))?,
    };
    let claim = match &args.claim {
        Some(c) => parse_claim(c)?,
        None => prob.target.implied_claim().map_err(|_| {
            usage("the set implies no partition claim; choose one with --claim")
        })?,
    };
    let tol = args.tol.unwrap_or(prob.tolerance);
    let report = verify_claim(&result.config, prob, &claim, tol).map_err(|e| usage(e.to_string()))?;
    for c in report.failures() {
        eprintln!("FAIL measure {} {}: residual {:.3e}", c.measure, c.label, c.residual);
    }
    eprintln!(
        "{}: {} checks, worst residual {:.3e}",
        if report.passed { "pass" } else { "fail" },
        report.checks.len(),
        report.worst()
    );
    let mut inputs = loaded.inputs;
    inputs.push(digest_file(&args.result)?);
    let out = wrap_json("verify", "verification", &report, inputs, None)?;
    crate::emit(args.out.as_deref(), &out)?;
    Ok(if report.passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
