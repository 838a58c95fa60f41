//! Annihilation sets and solve problems described on the command line or
//! in JSON files.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use fanpart::certify::{
    build_custom_set, build_equipartition_set, build_makeev_set, z9_pair_set, AnnihilationSpec, Entry,
    PartitionClaim, Reading, SetFamily,
};
use fanpart::geometry::{MeasureSet, PointCloud};
use fanpart::solver::{SolveProblem, Target};
use serde::{Deserialize, Serialize};

use crate::manifest::{digest_file, InputDigest};
use crate::usage;

/// Either inline JSON or `@path` to a JSON file.
pub fn read_json_arg(arg: &str, inputs: &mut Vec<InputDigest>) -> Result<serde_json::Value> {
    let text = match arg.strip_prefix('@') {
        Some(path) => {
            let p = Path::new(path);
            inputs.push(digest_file(p).map_err(|e| usage(format!("{e:#}")))?);
            std::fs::read_to_string(p).map_err(|e| usage(format!("reading {path}: {e}")))?
        }
        None => arg.to_string(),
    };
    serde_json::from_str(&text).map_err(|e| usage(format!("malformed entries JSON: {e}")))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum EntriesDoc {
    List(Vec<Entry>),
    Full {
        entries: Vec<Entry>,
        #[serde(default)]
        claim: Option<PartitionClaim>,
        #[serde(default)]
        name: Option<String>,
        #[serde(default)]
        orders: Option<Vec<usize>>,
    },
}

fn parse_makeev(set: &str) -> Option<Result<usize>> {
    let rest = set.strip_prefix("makeev")?;
    let p = rest
        .strip_prefix(":p=")
        .or_else(|| rest.strip_prefix(':'))
        .and_then(|s| s.parse::<usize>().ok())
        .ok_or_else(|| usage(format!("expected makeev:p=<prime>, got {set:?}")));
    Some(p)
}

/// Builds the set named by `set`; invalid names and malformed entries are
/// usage errors.
pub fn build_spec(set: &str, orders: &[usize], m: usize, entries: Option<serde_json::Value>) -> Result<AnnihilationSpec> {
    let need_orders = || {
        if orders.is_empty() {
            Err(usage(format!("--set {set} needs --orders")))
        } else {
            Ok(())
        }
    };
    let spec = match set {
        "equipartition" => {
            need_orders()?;
            build_equipartition_set(orders, m)
        }
        "z9-pair" | "z9-pair-trailing" => {
            if !orders.is_empty() && orders != [9, 9] {
                return Err(usage(format!("--set {set} is defined over orders 9,9")));
            }
            let reading = if set == "z9-pair-trailing" { Reading::Trailing } else { Reading::Leading };
            Ok(z9_pair_set(reading))
        }
        "custom" => {
            let value = entries.ok_or_else(|| usage("--set custom needs --entries"))?;
            let doc: EntriesDoc = serde_json::from_value(value)
                .map_err(|e| usage(format!("malformed entries: {e}")))?;
            let (entries, claim, name, file_orders) = match doc {
                EntriesDoc::List(e) => (e, None, None, None),
                EntriesDoc::Full { entries, claim, name, orders } => (entries, claim, name, orders),
            };
            let orders = match (orders.is_empty(), file_orders) {
                (true, Some(o)) => o,
                (true, None) => return Err(usage("--set custom needs --orders")),
                (false, _) => orders.to_vec(),
            };
            build_custom_set(&orders, entries, claim).map(|mut s| {
                s.family = SetFamily::Custom { name };
                s
            })
        }
        other => match parse_makeev(other) {
            Some(p) => {
                need_orders()?;
                build_makeev_set(orders, p?, m)
            }
            None => {
                return Err(usage(format!(
                    "unknown set {other:?} (expected equipartition, makeev:p=<prime>, custom, z9-pair or z9-pair-trailing)"
                )))
            }
        },
    };
    spec.map_err(|e| usage(e.to_string()))
}

/// `solve --problem` input: the set (by name or in full), cloud files
/// relative to the problem file, and optional search settings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub set: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orders: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entries: Option<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<AnnihilationSpec>,
    /// Balance quaternionic clouds by a cubical wedge partition instead.
    #[serde(default)]
    pub wedges: bool,
    pub clouds: Vec<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub smoothing: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stages: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_evaluations: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restarts: Option<usize>,
}

pub struct LoadedProblem {
    pub file: ProblemFile,
    pub problem: SolveProblem,
    pub inputs: Vec<InputDigest>,
}

pub fn load_problem(path: &Path, seed: u64) -> Result<LoadedProblem> {
    let mut inputs = vec![digest_file(path).map_err(|e| usage(format!("{e:#}")))?];
    let text = std::fs::read_to_string(path)?;
    let file: ProblemFile =
        serde_json::from_str(&text).map_err(|e| usage(format!("malformed problem file: {e}")))?;
    if file.clouds.is_empty() {
        return Err(usage("problem lists no clouds"));
    }
    let base = path.parent().unwrap_or(Path::new("."));
    let clouds = file
        .clouds
        .iter()
        .map(|c| {
            let p = base.join(c);
            inputs.push(digest_file(&p).map_err(|e| usage(format!("{e:#}")))?);
            PointCloud::load(&p).map_err(|e| usage(format!("{}: {e}", p.display())))
        })
        .collect::<Result<Vec<_>>>()?;
    let measures = MeasureSet::new(clouds).map_err(|e| usage(e.to_string()))?;
    let target = if file.wedges {
        Target::Wedges
    } else if let Some(spec) = &file.spec {
        Target::Fans { spec: spec.clone() }
    } else {
        let set = file.set.as_deref().context("problem needs `set`, `spec` or `wedges`")
            .map_err(|e| usage(e.to_string()))?;
        let orders = file.orders.clone().unwrap_or_default();
        let m = file.m.unwrap_or(measures.len());
        Target::Fans {
            spec: build_spec(set, &orders, m, file.entries.clone())?,
        }
    };
    let mut problem = SolveProblem::new(target, measures, seed);
    if let Some(t) = file.tolerance {
        problem.tolerance = t;
    }
    problem.smoothing = file.smoothing;
    if let Some(s) = file.stages {
        problem.stages = s;
    }
    if let Some(b) = file.max_evaluations {
        problem.budget.max_evaluations = b;
    }
    if let Some(r) = file.restarts {
        problem.budget.restarts = r;
    }
    problem.validate().map_err(|e| usage(e.to_string()))?;
    Ok(LoadedProblem { file, problem, inputs })
}
