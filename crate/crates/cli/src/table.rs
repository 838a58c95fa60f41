use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Args;
use fanpart::certify::{reference_bounds, render_table};
use similar::TextDiff;

use crate::manifest::RunManifest;

const GOLDEN: &str = include_str!("../golden/table.txt");

#[derive(Args)]
pub struct TableArgs {
    /// Golden file to compare against (defaults to the copy built into the binary).
    #[arg(long)]
    golden: Option<PathBuf>,
    /// Keep only cases whose key or set family contains this string.
    #[arg(long)]
    filter: Option<String>,
    /// Overwrite the golden file instead of comparing.
    #[arg(long, requires = "golden")]
    update: bool,
    /// Also write the table, preceded by its run manifest, to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Header plus the row blocks whose key is in `keys`; `#` lines dropped.
fn select_blocks(text: &str, keys: &BTreeSet<String>) -> String {
    let mut out = String::new();
    let mut keep = false;
    for (i, line) in text.lines().filter(|l| !l.starts_with('#')).enumerate() {
        if i == 0 {
            keep = true;
        } else if !line.starts_with(' ') {
            keep = line.split_whitespace().next().is_some_and(|k| keys.contains(k));
        }
        if keep {
            out.push_str(line);
            out.push('\n');
        }
    }
    out
}

pub fn run(args: TableArgs) -> Result<ExitCode> {
    let rows = reference_bounds(args.filter.as_deref())?;
    let table = render_table(&rows);
    print!("{table}");
    if let Some(path) = &args.out {
        let manifest = RunManifest::new("table", Vec::new(), None, table.as_bytes());
        let header: String = serde_json::to_string_pretty(&manifest)?
            .lines()
            .map(|l| format!("# {l}\n"))
            .collect();
        crate::emit(Some(path), &format!("{header}{table}"))?;
    }
    if args.update {
        let path = args.golden.as_ref().expect("clap enforces --golden");
        std::fs::write(path, &table).with_context(|| format!("writing {}", path.display()))?;
        return Ok(ExitCode::SUCCESS);
    }
    let golden = match &args.golden {
        Some(p) => std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
        None => GOLDEN.to_string(),
    };
    let keys: BTreeSet<String> = rows.iter().map(|r| r.key.clone()).collect();
    let expected = select_blocks(&golden, &keys);
    if expected == table {
        eprintln!("table matches the golden copy ({} cases)", rows.len());
        Ok(ExitCode::SUCCESS)
    } else {
        let diff = TextDiff::from_lines(&expected, &table);
        eprint!("{}", diff.unified_diff().header("golden", "generated"));
        Ok(ExitCode::from(1))
    }
}
