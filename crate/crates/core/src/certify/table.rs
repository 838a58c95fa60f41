//! Reference bounds reproduced by the certifier, rendered as a stable text
//! table for regression against a checked-in copy.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sets::{build_equipartition_set, build_makeev_set, z9_pair_set, AnnihilationSpec, Reading};
use super::{certify_with_anchor, BoundReport};
use crate::error::Result;

/// A named specification together with the dimension it should certify.
#[derive(Debug, Clone)]
pub struct BoundCase {
    pub key: String,
    pub anchor: String,
    pub spec: AnnihilationSpec,
    pub expected: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub key: String,
    pub expected: Option<u32>,
    pub report: BoundReport,
}

impl TableRow {
    pub fn matches(&self) -> bool {
        self.report.certified_dimension == self.expected
    }
}

fn case(key: String, anchor: String, spec: AnnihilationSpec, expected: u32) -> BoundCase {
    BoundCase {
        key,
        anchor,
        spec,
        expected: Some(expected),
    }
}

pub fn reference_cases() -> Result<Vec<BoundCase>> {
    let mut cases = vec![case(
        "single-9-fan".into(),
        "one measure, regular 9-fan".into(),
        build_equipartition_set(&[9], 1)?,
        4,
    )];
    for p in [3usize, 5, 7, 11] {
        for m in 1..=3usize {
            cases.push(case(
                format!("prime-fan-p{p}-m{m}"),
                format!("{m} measure(s), regular {p}-fan"),
                build_equipartition_set(&[p], m)?,
                (m * (p - 1) / 2) as u32,
            ));
        }
    }
    cases.push(case(
        "pair-3-fans-m2".into(),
        "two measures, pair of regular 3-fans".into(),
        build_equipartition_set(&[3, 3], 2)?,
        4,
    ));
    cases.push(case(
        "pair-5-fans-m1".into(),
        "one measure, pair of regular 5-fans".into(),
        build_equipartition_set(&[5, 5], 1)?,
        6,
    ));
    for n in 0..=1u32 {
        let m = 3usize.pow(n + 1) - 1;
        cases.push(case(
            format!("pair-3-fans-lucas-n{n}"),
            format!("{m} measures, pair of regular 3-fans"),
            build_equipartition_set(&[3, 3], m)?,
            2 * m as u32,
        ));
    }
    cases.push(case(
        "makeev-15-p3".into(),
        "one measure, the five regular 3-fans of a regular 15-fan".into(),
        build_makeev_set(&[15], 3, 1)?,
        5,
    ));
    cases.push(case(
        "makeev-15-p5".into(),
        "one measure, the three regular 5-fans of a regular 15-fan".into(),
        build_makeev_set(&[15], 5, 1)?,
        6,
    ));
    cases.push(case(
        "makeev-6x6-p3-m2".into(),
        "two measures, the four pairs of regular 3-fans in a pair of 6-fans".into(),
        build_makeev_set(&[6, 6], 3, 2)?,
        16,
    ));
    cases.push(case(
        "z9-pair".into(),
        "one measure, a regular 9-fan and the 3-fans of a second 9-fan".into(),
        z9_pair_set(Reading::Leading),
        27,
    ));
    Ok(cases)
}

/// Certify every reference case whose key or family contains `filter`.
/// Reports are computed in parallel and returned in table order.
pub fn reference_bounds(filter: Option<&str>) -> Result<Vec<TableRow>> {
    let cases: Vec<BoundCase> = reference_cases()?
        .into_iter()
        .filter(|c| match filter {
            None => true,
            Some(f) => c.key.contains(f) || c.spec.family.kind().contains(f),
        })
        .collect();
    cases
        .into_par_iter()
        .map(|c| {
            Ok(TableRow {
                report: certify_with_anchor(&c.spec, c.anchor)?,
                key: c.key,
                expected: c.expected,
            })
        })
        .collect()
}

fn show_dim(d: Option<u32>) -> String {
    d.map_or_else(|| "-".to_string(), |d| d.to_string())
}

pub fn render_table(rows: &[TableRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<24} {:<10} {:<14} {:>3} {:>5} {:>4} {:>4}  status",
        "case", "group", "set", "m", "chars", "d", "want"
    );
    for r in rows {
        let s = &r.report.spec;
        let set = match &s.family {
            super::SetFamily::Makeev { p } => format!("makeev:p={p}"),
            f => f.kind().to_string(),
        };
        let _ = writeln!(
            out,
            "{:<24} {:<10} {:<14} {:>3} {:>5} {:>4} {:>4}  {}",
            r.key,
            s.orders.to_string(),
            set,
            s.measures,
            s.entries.len(),
            show_dim(r.report.certified_dimension),
            show_dim(r.expected),
            if r.matches() { "ok" } else { "MISMATCH" }
        );
        let _ = writeln!(out, "    {}", r.report.anchor);
        let _ = writeln!(out, "    f = {}", r.report.polynomial);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_reference_bound_is_reproduced() {
        let rows = reference_bounds(None).unwrap();
        assert_eq!(rows.len(), 1 + 12 + 4 + 4);
        for r in &rows {
            assert!(r.matches(), "{}: {:?} vs {:?}", r.key, r.report.certified_dimension, r.expected);
        }
    }

    #[test]
    fn filter_selects_subset() {
        let rows = reference_bounds(Some("makeev")).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r.key.starts_with("makeev")));
    }

    #[test]
    fn render_is_deterministic() {
        let a = render_table(&reference_bounds(None).unwrap());
        let b = render_table(&reference_bounds(None).unwrap());
        assert_eq!(a, b);
        assert!(!a.contains("MISMATCH"));
        assert!(a.contains("f = 6*b1^4"));
    }
}
