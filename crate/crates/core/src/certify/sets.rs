//! Annihilation sets: which transforms `c_{i,eps}` are forced to vanish.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::AbelianGroup;
use crate::poly::is_odd_prime;

/// One annihilated transform: character `eps` of measure `measure` (1-based).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Entry {
    pub measure: usize,
    pub eps: Vec<usize>,
}

/// How an annihilation set was built.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SetFamily {
    Equipartition,
    Makeev { p: usize },
    Custom {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
    },
}

impl SetFamily {
    pub fn kind(&self) -> &'static str {
        match self {
            SetFamily::Equipartition => "equipartition",
            SetFamily::Makeev { .. } => "makeev",
            SetFamily::Custom { .. } => "custom",
        }
    }
}

/// The partition property asserted once the transforms vanish.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PartitionClaim {
    /// Every region carries `1/|G|` of each measure.
    FullEquipartition,
    /// Masses are constant on every coset of the subgroup `H` generated by
    /// `generators`; equivalently each sub-fan tuple equipartitions.
    CosetConstant { generators: Vec<Vec<usize>> },
    /// Every coset `g + H` carries `|H|/|G|` of each measure.
    CosetSums { generators: Vec<Vec<usize>> },
    /// Cubical wedges: every union `W_{i^r} u W_{i^s j}` carries a quarter.
    Q8ModuloZ4,
}

/// Which end of `eps` counts as its "last" non-zero coordinate when one
/// representative is picked from each pair `{eps, -eps}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reading {
    /// The largest index `j` with `eps_j != 0` (default).
    #[default]
    Trailing,
    /// The smallest such index.
    Leading,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnihilationSpec {
    pub orders: AbelianGroup,
    /// Number of distinct measures `m`.
    pub measures: usize,
    pub family: SetFamily,
    pub entries: Vec<Entry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub claim: Option<PartitionClaim>,
}

impl AnnihilationSpec {
    pub fn validate(&self) -> Result<()> {
        if self.measures == 0 {
            return Err(Error::InvalidSpec("at least one measure is required".into()));
        }
        for e in &self.entries {
            self.orders.check(&e.eps)?;
            if AbelianGroup::is_identity(&e.eps) {
                return Err(Error::InvalidSpec(
                    "the trivial transform carries the total mass and cannot be annihilated".into(),
                ));
            }
            if e.measure == 0 || e.measure > self.measures {
                return Err(Error::InvalidSpec(format!(
                    "measure index {} outside 1..={}",
                    e.measure, self.measures
                )));
            }
        }
        Ok(())
    }

    /// The claim implied by the family, or the explicitly attached one.
    pub fn implied_claim(&self) -> Result<PartitionClaim> {
        if let Some(c) = &self.claim {
            return Ok(c.clone());
        }
        match self.family {
            SetFamily::Equipartition => Ok(PartitionClaim::FullEquipartition),
            SetFamily::Makeev { p } => Ok(PartitionClaim::CosetConstant {
                generators: makeev_subgroup(&self.orders, p),
            }),
            SetFamily::Custom { .. } => Err(Error::NoClaim),
        }
    }

    /// Characters annihilated for measure `i` (1-based).
    pub fn characters_of(&self, measure: usize) -> Vec<Vec<usize>> {
        self.entries
            .iter()
            .filter(|e| e.measure == measure)
            .map(|e| e.eps.clone())
            .collect()
    }
}

/// Generators `q_j/p * e_j` of `H = Z_p^k` inside `prod Z_{q_j}`.
pub fn makeev_subgroup(group: &AbelianGroup, p: usize) -> Vec<Vec<usize>> {
    let k = group.rank();
    (0..k)
        .map(|j| {
            let mut g = vec![0; k];
            g[j] = group.orders()[j] / p;
            g
        })
        .collect()
}

fn in_half(eps: &[usize], orders: &[usize], reading: Reading) -> bool {
    let pos = match reading {
        Reading::Trailing => eps.iter().rposition(|&x| x != 0),
        Reading::Leading => eps.iter().position(|&x| x != 0),
    };
    let Some(j) = pos else {
        return false;
    };
    let twice = 2 * eps[j];
    if twice != orders[j] {
        // for odd q this is eps_j <= ceil((q-1)/2)
        return twice < orders[j];
    }
    // eps_j = q_j/2 is its own negative; decide on the remaining coordinates
    let (rest, rest_orders) = match reading {
        Reading::Trailing => (&eps[..j], &orders[..j]),
        Reading::Leading => (&eps[j + 1..], &orders[j + 1..]),
    };
    AbelianGroup::is_identity(rest) || in_half(rest, rest_orders, reading)
}

/// One representative of every pair `{eps, -eps}` of non-zero characters:
/// those whose last non-zero coordinate is at most `ceil((q_j - 1)/2)`,
/// with ties at `q_j/2` broken on the preceding coordinates. Elements with
/// `eps = -eps` are included once.
pub fn half_dual(group: &AbelianGroup, reading: Reading) -> Vec<Vec<usize>> {
    group
        .elements()
        .filter(|e| in_half(e, group.orders(), reading))
        .collect()
}

fn replicate(chars: &[Vec<usize>], m: usize) -> Vec<Entry> {
    (1..=m)
        .flat_map(|measure| {
            chars.iter().map(move |eps| Entry {
                measure,
                eps: eps.clone(),
            })
        })
        .collect()
}

/// Transforms whose vanishing equipartitions `m` real measures into
/// `|G|` regions.
pub fn build_equipartition_set(orders: &[usize], m: usize) -> Result<AnnihilationSpec> {
    let group = AbelianGroup::new(orders.to_vec())?;
    let chars = half_dual(&group, Reading::Trailing);
    let spec = AnnihilationSpec {
        entries: replicate(&chars, m),
        orders: group,
        measures: m,
        family: SetFamily::Equipartition,
        claim: None,
    };
    spec.validate()?;
    Ok(spec)
}

/// The half dual with every character in `p Z_{q_1} + ... + p Z_{q_k}`
/// removed: masses become constant on cosets of `H = Z_p^k`.
pub fn build_makeev_set(orders: &[usize], p: usize, m: usize) -> Result<AnnihilationSpec> {
    if !is_odd_prime(p as u64) {
        return Err(Error::NotOddPrime(p as u64));
    }
    if let Some(q) = orders.iter().find(|&&q| q % p != 0) {
        return Err(Error::InvalidSpec(format!("{p} does not divide the order {q}")));
    }
    let group = AbelianGroup::new(orders.to_vec())?;
    let chars: Vec<Vec<usize>> = half_dual(&group, Reading::Trailing)
        .into_iter()
        .filter(|e| e.iter().any(|x| x % p != 0))
        .collect();
    let spec = AnnihilationSpec {
        entries: replicate(&chars, m),
        orders: group,
        measures: m,
        family: SetFamily::Makeev { p },
        claim: None,
    };
    spec.validate()?;
    Ok(spec)
}

/// Validated pass-through of explicit entries.
pub fn build_custom_set(
    orders: &[usize],
    entries: Vec<Entry>,
    claim: Option<PartitionClaim>,
) -> Result<AnnihilationSpec> {
    let group = AbelianGroup::new(orders.to_vec())?;
    let measures = entries.iter().map(|e| e.measure).max().unwrap_or(1);
    let spec = AnnihilationSpec {
        orders: group,
        measures,
        family: SetFamily::Custom { name: None },
        entries,
        claim,
    };
    spec.validate()?;
    Ok(spec)
}

/// Pair of regular 9-fans where the first fan and every regular 3-fan of
/// the second equipartition one measure: annihilate the half dual of
/// `Z9 x Z9` except the three characters trivial on `{0} x 3Z9`.
///
/// The two readings pick different representatives of the same conjugate
/// pairs, so they annihilate the same transforms of a real measure; their
/// polynomials differ by the unit `-1`.
pub fn z9_pair_set(reading: Reading) -> AnnihilationSpec {
    let group = AbelianGroup::new(vec![9, 9]).expect("valid orders");
    let kept: [[usize; 2]; 3] = match reading {
        Reading::Trailing => [[0, 3], [3, 3], [6, 3]],
        Reading::Leading => [[0, 3], [3, 3], [3, 6]],
    };
    let chars: Vec<Vec<usize>> = half_dual(&group, reading)
        .into_iter()
        .filter(|e| !kept.iter().any(|k| k[..] == e[..]))
        .collect();
    let name = match reading {
        Reading::Leading => "z9-pair",
        Reading::Trailing => "z9-pair-trailing",
    };
    AnnihilationSpec {
        entries: replicate(&chars, 1),
        orders: group,
        measures: 1,
        family: SetFamily::Custom {
            name: Some(name.into()),
        },
        claim: Some(PartitionClaim::CosetSums {
            generators: vec![vec![0, 3]],
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chars(spec: &AnnihilationSpec) -> Vec<Vec<usize>> {
        spec.characters_of(1)
    }

    #[test]
    fn equipartition_examples() {
        assert_eq!(
            chars(&build_equipartition_set(&[9], 1).unwrap()),
            vec![vec![1], vec![2], vec![3], vec![4]]
        );
        assert_eq!(chars(&build_equipartition_set(&[2], 1).unwrap()), vec![vec![1]]);
        assert_eq!(
            chars(&build_equipartition_set(&[3, 3], 1).unwrap()),
            vec![vec![0, 1], vec![1, 0], vec![1, 1], vec![2, 1]]
        );
        assert_eq!(
            chars(&build_equipartition_set(&[2, 2], 1).unwrap()),
            vec![vec![0, 1], vec![1, 0], vec![1, 1]]
        );
        let s = build_equipartition_set(&[5], 3).unwrap();
        assert_eq!(s.entries.len(), 6);
        assert_eq!(s.characters_of(3), vec![vec![1], vec![2]]);
    }

    #[test]
    fn even_orders_pick_one_of_each_pair() {
        assert_eq!(chars(&build_equipartition_set(&[4], 1).unwrap()), vec![vec![1], vec![2]]);
        let c = chars(&build_equipartition_set(&[6, 6], 1).unwrap());
        assert_eq!(c.len(), 19);
        // eps_2 = 3 ties on eps_1: (0,3), (1,3), (2,3), (3,3) survive
        let tied: Vec<_> = c.iter().filter(|e| e[1] == 3).cloned().collect();
        assert_eq!(tied, vec![vec![0, 3], vec![1, 3], vec![2, 3], vec![3, 3]]);
    }

    #[test]
    fn makeev_examples() {
        assert_eq!(chars(&build_makeev_set(&[6], 3, 1).unwrap()), vec![vec![1], vec![2]]);
        assert_eq!(
            chars(&build_makeev_set(&[15], 3, 1).unwrap()),
            vec![vec![1], vec![2], vec![4], vec![5], vec![7]]
        );
        assert_eq!(
            chars(&build_makeev_set(&[15], 5, 1).unwrap()),
            vec![vec![1], vec![2], vec![3], vec![4], vec![6], vec![7]]
        );
        let s = build_makeev_set(&[9, 9], 3, 1).unwrap();
        let full = half_dual(&s.orders, Reading::Trailing);
        let dropped: Vec<_> = full.iter().filter(|e| !chars(&s).contains(e)).cloned().collect();
        assert!(dropped.iter().all(|e| e.iter().all(|x| x % 3 == 0)));
        assert!(chars(&s).iter().all(|e| e.iter().any(|x| x % 3 != 0)));
        assert_eq!(chars(&build_makeev_set(&[6, 6], 3, 2).unwrap()).len(), 16);
        assert!(build_makeev_set(&[6, 5], 3, 1).is_err());
        assert!(matches!(build_makeev_set(&[8], 2, 1), Err(Error::NotOddPrime(2))));
    }

    #[test]
    fn custom_validation() {
        let ok = build_custom_set(&[3, 3], vec![Entry { measure: 1, eps: vec![1, 2] }], None).unwrap();
        assert_eq!(ok.measures, 1);
        assert!(matches!(
            build_custom_set(&[3, 3], vec![Entry { measure: 1, eps: vec![0, 0] }], None),
            Err(Error::InvalidSpec(_))
        ));
        assert!(build_custom_set(&[3, 3], vec![Entry { measure: 1, eps: vec![3, 0] }], None).is_err());
        assert!(build_custom_set(&[3, 3], vec![Entry { measure: 0, eps: vec![1, 0] }], None).is_err());
        assert!(matches!(ok.implied_claim(), Err(Error::NoClaim)));
    }

    #[test]
    fn z9_pair_sets() {
        for r in [Reading::Leading, Reading::Trailing] {
            let s = z9_pair_set(r);
            assert_eq!(s.entries.len(), 37);
            s.validate().unwrap();
        }
    }

    #[test]
    fn half_dual_splits_conjugate_pairs() {
        // every non-zero eps lies in exactly one of {H, -H}, or in H once if eps = -eps
        let mut checked = 0;
        for orders in [
            vec![3], vec![4], vec![5], vec![6], vec![9], vec![2, 2], vec![3, 3], vec![2, 4],
            vec![4, 6], vec![6, 6], vec![3, 5], vec![5, 5], vec![9, 9], vec![2, 3, 4], vec![3, 3, 3],
            vec![2, 2, 2], vec![10], vec![7, 7], vec![3, 33],
        ] {
            let g = AbelianGroup::new(orders).unwrap();
            for reading in [Reading::Trailing, Reading::Leading] {
                let h = half_dual(&g, reading);
                for e in g.elements().filter(|e| !AbelianGroup::is_identity(e)) {
                    let ne = g.neg(&e);
                    let (a, b) = (h.contains(&e), h.contains(&ne));
                    if ne == e {
                        assert!(a);
                    } else {
                        assert!(a ^ b, "{g}: {e:?}");
                    }
                }
                if g.orders().iter().all(|q| q % 2 == 1) {
                    assert_eq!(h.len(), (g.order() - 1) / 2);
                    checked += 1;
                }
            }
        }
        assert!(checked > 0);
    }

    #[test]
    fn odd_orders_match_ceiling_rule() {
        // for odd q the tie never happens and the rule is the plain
        // "last nonzero coordinate <= ceil((q_j - 1)/2)"
        for orders in [vec![3, 5], vec![5, 3, 3], vec![9, 7]] {
            let g = AbelianGroup::new(orders).unwrap();
            let literal: Vec<Vec<usize>> = g
                .elements()
                .filter(|e| {
                    e.iter()
                        .rposition(|&x| x != 0)
                        .is_some_and(|j| e[j] <= (g.orders()[j] - 1).div_ceil(2))
                })
                .collect();
            assert_eq!(half_dual(&g, Reading::Trailing), literal);
        }
    }
}
