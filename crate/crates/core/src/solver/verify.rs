//! Recomputes hard region masses and checks the asserted partition claim.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{annihilated_fan_transforms, mass_scale, wedge_killed, Configuration, SolveProblem, SolveResult, Target};
use crate::certify::PartitionClaim;
use crate::error::{Error, Result};
use crate::fourier::{q8_fourier_transform, AbelianGroup, GroupSpec, Q8Element};
use crate::geometry::MeasureSet;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimCheck {
    /// 1-based measure index.
    pub measure: usize,
    pub label: String,
    /// Deviation from the claimed value, relative to the measure's mass.
    pub residual: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub claim: PartitionClaim,
    pub tolerance: f64,
    pub checks: Vec<ClaimCheck>,
    /// Largest relative modulus of an annihilated transform.
    pub transform_residual: f64,
    /// Largest relative deviation of a region mass from `total / |G|`.
    pub mass_deviation: f64,
    pub passed: bool,
}

impl VerificationReport {
    pub fn failures(&self) -> impl Iterator<Item = &ClaimCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn worst(&self) -> f64 {
        self.checks.iter().map(|c| c.residual).fold(0.0, f64::max)
    }
}

/// Checks the claim implied by the problem's target.
pub fn verify(result: &SolveResult, prob: &SolveProblem) -> Result<VerificationReport> {
    let claim = prob.target.implied_claim()?;
    verify_claim(&result.config, prob, &claim, prob.tolerance)
}

fn label(g: &[usize]) -> String {
    format!("({})", g.iter().map(usize::to_string).collect::<Vec<_>>().join(","))
}

fn cosets(group: &AbelianGroup, generators: &[Vec<usize>]) -> Result<Vec<Vec<usize>>> {
    let h = group.subgroup(generators)?;
    let mut seen = vec![false; group.order()];
    let mut out = Vec::new();
    for g in group.elements() {
        let i = group.index_of(&g)?;
        if seen[i] {
            continue;
        }
        let coset: Vec<usize> = h
            .iter()
            .map(|x| group.index_of(&group.add(&g, x)))
            .collect::<Result<_>>()?;
        coset.iter().for_each(|&j| seen[j] = true);
        out.push(coset);
    }
    Ok(out)
}

pub fn verify_claim(
    config: &Configuration,
    prob: &SolveProblem,
    claim: &PartitionClaim,
    tolerance: f64,
) -> Result<VerificationReport> {
    let table = config.region_masses(&prob.measures)?;
    let ms: &MeasureSet = &prob.measures;
    let mut checks = Vec::new();
    let mut push = |measure: usize, label: String, residual: f64| {
        checks.push(ClaimCheck {
            measure,
            label,
            residual,
            passed: residual <= tolerance,
        });
    };
    let group = table.group().clone();
    let order = group.order() as f64;
    let mut mass_deviation: f64 = 0.0;
    for (i, cloud) in ms.measures.iter().enumerate() {
        let total = cloud.total();
        let scale = mass_scale(cloud);
        let masses = table.masses(i);
        for m in masses {
            mass_deviation = mass_deviation.max((m - total / order).norm() / scale);
        }
        let n = i + 1;
        match (claim, &group) {
            (PartitionClaim::FullEquipartition, _) => {
                for (g, m) in masses.iter().enumerate() {
                    let name = match &group {
                        GroupSpec::Abelian(a) => label(&a.element(g)),
                        GroupSpec::Q8 => Q8Element::ALL[g].symbol().to_string(),
                    };
                    push(n, format!("region {name} = total/{}", group.order()), (m - total / order).norm() / scale);
                }
            }
            (PartitionClaim::CosetConstant { generators }, GroupSpec::Abelian(a)) => {
                for coset in cosets(a, generators)? {
                    let mean: Complex64 = coset.iter().map(|&j| masses[j]).sum::<Complex64>() / coset.len() as f64;
                    let dev = coset.iter().map(|&j| (masses[j] - mean).norm()).fold(0.0, f64::max);
                    push(n, format!("constant on coset of {}", label(&a.element(coset[0]))), dev / scale);
                }
            }
            (PartitionClaim::CosetSums { generators }, GroupSpec::Abelian(a)) => {
                let all = cosets(a, generators)?;
                let share = total / all.len() as f64;
                for coset in all {
                    let sum: Complex64 = coset.iter().map(|&j| masses[j]).sum();
                    push(
                        n,
                        format!("coset of {} carries its share", label(&a.element(coset[0]))),
                        (sum - share).norm() / scale,
                    );
                }
            }
            (PartitionClaim::Q8ModuloZ4, GroupSpec::Q8) => {
                let powers_of_i = [Q8Element::PlusOne, Q8Element::PlusI, Q8Element::MinusOne, Q8Element::MinusI];
                for (r, a) in powers_of_i.iter().enumerate() {
                    for (s, b) in powers_of_i.iter().enumerate() {
                        let w = b.mul(Q8Element::PlusJ);
                        let sum = masses[a.index()] + masses[w.index()];
                        push(n, format!("W(i^{r}) + W(i^{s} j) = total/4"), (sum - total / 4.0).norm() / scale);
                    }
                }
            }
            _ => {
                return Err(Error::InvalidConfig(format!(
                    "claim {claim:?} does not apply to this configuration"
                )))
            }
        }
    }
    let transform_residual = match (&prob.target, config) {
        (Target::Fans { spec }, Configuration::Fans(_)) => {
            let values: Vec<Vec<Complex64>> = table.functions.iter().map(|f| f.values.clone()).collect();
            annihilated_fan_transforms(spec, &values)?
                .iter()
                .zip(&ms.measures)
                .map(|(cs, c)| cs.iter().map(|z| z.norm()).fold(0.0, f64::max) / mass_scale(c))
                .fold(0.0, f64::max)
        }
        (Target::Wedges, Configuration::Wedges(_)) => table
            .functions
            .iter()
            .zip(&ms.measures)
            .map(|(f, c)| {
                let t = q8_fourier_transform(&f.values)?;
                let k = wedge_killed(&t);
                let m = k[0].norm().max(k[1].norm()).max(t.sigma_norm_sqr().sqrt());
                Ok(m / mass_scale(c))
            })
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max),
        _ => return Err(Error::InvalidConfig("configuration does not match the problem target".into())),
    };
    let passed = checks.iter().all(|c| c.passed);
    Ok(VerificationReport {
        claim: claim.clone(),
        tolerance,
        checks,
        transform_residual,
        mass_deviation,
        passed,
    })
}
