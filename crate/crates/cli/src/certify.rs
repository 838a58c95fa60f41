use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::Args;
use fanpart::certify::{certify, BoundReport, SetFamily};

use crate::manifest::wrap_json;
use crate::problem::{build_spec, read_json_arg};

#[derive(Args)]
pub struct CertifyArgs {
    /// Fan orders q_1,...,q_k.
    #[arg(long, value_delimiter = ',')]
    orders: Vec<usize>,
    /// Number of measures.
    #[arg(long, default_value_t = 1)]
    m: usize,
    /// equipartition, makeev:p=<prime>, custom, z9-pair or z9-pair-trailing.
    #[arg(long, default_value = "equipartition")]
    set: String,
    /// Entries for a custom set: inline JSON or @file.json.
    #[arg(long)]
    entries: Option<String>,
    /// Write the JSON report (with its run manifest) here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the JSON report instead of the summary.
    #[arg(long)]
    json: bool,
}

pub fn summary(r: &BoundReport) -> String {
    let s = &r.spec;
    let set = match &s.family {
        SetFamily::Makeev { p } => format!("makeev:p={p}"),
        SetFamily::Custom { name: Some(n) } => format!("custom ({n})"),
        f => f.kind().to_string(),
    };
    let mut out = String::new();
    let _ = writeln!(out, "group        {}", s.orders);
    let _ = writeln!(out, "set          {set}");
    let _ = writeln!(out, "measures     {}", s.measures);
    let _ = writeln!(out, "transforms   {}", s.entries.len());
    let _ = writeln!(out, "polynomial   {}", r.polynomial);
    match r.certified_dimension {
        Some(d) => {
            let _ = writeln!(out, "certified    d = {d}");
        }
        None => {
            let _ = writeln!(out, "certified    none (the polynomial vanishes)");
        }
    }
    out
}

pub fn run(args: CertifyArgs) -> Result<ExitCode> {
    let mut inputs = Vec::new();
    let entries = args
        .entries
        .as_deref()
        .map(|e| read_json_arg(e, &mut inputs))
        .transpose()?;
    let spec = build_spec(&args.set, &args.orders, args.m, entries)?;
    let report = certify(&spec)?;
    let wrapped = wrap_json("certify", "report", &report, inputs, None)?;
    if let Some(path) = &args.out {
        crate::emit(Some(path), &wrapped)?;
    }
    if args.json {
        crate::emit(None, &wrapped)?;
    } else {
        print!("{}", summary(&report));
    }
    Ok(if report.certified_dimension.is_some() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
