use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::Args;
use fanpart::fourier::{q8_fourier_transform, transform_function, GroupFunction, GroupSpec, Q8Transform, Spectrum};
use fanpart::geometry::RegionMassTable;
use serde::{Deserialize, Serialize};

use crate::manifest::{digest_file, wrap_json};
use crate::solve::SolveOutput;
use crate::usage;

#[derive(Args)]
pub struct TransformArgs {
    /// A group function, a region-mass table, or a solve result.
    #[arg(long)]
    input: PathBuf,
    /// Output file; standard output when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum MassInput {
    Wrapped { solve: SolveOutput },
    Table(RegionMassTable),
    Single(GroupFunction),
}

#[derive(Serialize)]
#[serde(untagged)]
enum TransformOut {
    Abelian(Spectrum),
    Q8(Q8Transform),
}

pub fn run(args: TransformArgs) -> Result<ExitCode> {
    let text = std::fs::read_to_string(&args.input)
        .map_err(|e| usage(format!("reading {}: {e}", args.input.display())))?;
    let input: MassInput = serde_json::from_str(&text)
        .map_err(|_| usage("expected a group function, a region-mass table or a solve result"))?;
    let functions = match input {
        MassInput::Wrapped { solve } => solve.result.region_masses.functions,
        MassInput::Table(t) => t.functions,
        MassInput::Single(f) => vec![f],
    };
    let transforms = functions
        .iter()
        .map(|f| match f.group {
            GroupSpec::Q8 => q8_fourier_transform(&f.values).map(TransformOut::Q8),
            GroupSpec::Abelian(_) => transform_function(f).map(TransformOut::Abelian),
        })
        .collect::<fanpart::Result<Vec<_>>>()?;
    let out = wrap_json("transform", "transforms", &transforms, vec![digest_file(&args.input)?], None)?;
    crate::emit(args.out.as_deref(), &out)?;
    Ok(ExitCode::SUCCESS)
}
