use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, ValueEnum};
use fanpart::geometry::{Field, PointCloud};
use fanpart::sampling::{generate, Distribution, GenRequest};

use crate::manifest::RunManifest;
use crate::usage;

#[derive(Clone, Copy, ValueEnum)]
enum FieldArg {
    Complex,
    Quaternion,
}

#[derive(Args)]
pub struct GenArgs {
    /// uniform-ball, gaussian-mixture or moment-curve-clusters.
    #[arg(long)]
    dist: String,
    /// Dimension over the chosen field.
    #[arg(long)]
    d: usize,
    /// Points per measure.
    #[arg(long, default_value_t = 30)]
    n: usize,
    /// Number of measures; with more than one, files are numbered.
    #[arg(long, default_value_t = 1)]
    m: usize,
    /// Fan order for moment-curve clusters.
    #[arg(long)]
    q: Option<usize>,
    #[arg(long, value_enum, default_value = "complex")]
    field: FieldArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV; standard output when omitted (single measure only).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn numbered(path: &Path, i: usize) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let ext = path.extension().map(|e| format!(".{}", e.to_string_lossy())).unwrap_or_default();
    path.with_file_name(format!("{stem}-{i}{ext}"))
}

fn render(cloud: &PointCloud, seed: u64) -> Result<String> {
    let mut body = Vec::new();
    cloud.write_csv(&mut body)?;
    let manifest = RunManifest::new("gen", Vec::new(), Some(seed), &body);
    Ok(format!("# manifest {}\n{}", serde_json::to_string(&manifest)?, String::from_utf8(body)?))
}

pub fn run(args: GenArgs) -> Result<ExitCode> {
    let distribution: Distribution = args.dist.parse().map_err(|e: fanpart::Error| usage(e.to_string()))?;
    let req = GenRequest {
        distribution,
        field: match args.field {
            FieldArg::Complex => Field::Complex,
            FieldArg::Quaternion => Field::Quaternion,
        },
        d: args.d,
        n: args.n,
        m: args.m,
        q: args.q,
        seed: args.seed,
    };
    let clouds = generate(&req).map_err(|e| usage(e.to_string()))?;
    match (&args.out, clouds.len()) {
        (None, 1) => crate::emit(None, &render(&clouds[0], args.seed)?)?,
        (None, _) => return Err(usage("--m above 1 needs --out")),
        (Some(p), 1) => crate::emit(Some(p), &render(&clouds[0], args.seed)?)?,
        (Some(p), _) => {
            for (i, c) in clouds.iter().enumerate() {
                crate::emit(Some(&numbered(p, i + 1)), &render(c, args.seed)?)?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
