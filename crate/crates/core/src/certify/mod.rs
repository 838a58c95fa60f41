//! Certified upper bounds: the product of the annihilated characters' linear
//! forms, tested against the ideal `(b_1^{d+1}, ..., b_k^{d+1})`.

mod sets;
mod table;

pub use sets::{
    build_custom_set, build_equipartition_set, build_makeev_set, half_dual, makeev_subgroup,
    z9_pair_set, AnnihilationSpec, Entry, PartitionClaim, Reading, SetFamily,
};
pub use table::{reference_bounds, reference_cases, render_table, BoundCase, TableRow};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::poly::{min_certified_dimension, TorsionPoly};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub spec: AnnihilationSpec,
    pub polynomial: TorsionPoly,
    /// Least `d` for which the polynomial escapes the ideal; any measures
    /// fitting the spec on `C^d` admit the asserted fan partition.
    pub certified_dimension: Option<u32>,
    pub anchor: String,
}

/// The characteristic polynomial `prod_{(i, eps)} (eps_1 b_1 + ... + eps_k b_k)`.
///
/// Characters repeated across measures are multiplied once and raised to
/// their multiplicity, so `m` copies of a set cost a single power.
pub fn characteristic_polynomial(spec: &AnnihilationSpec) -> Result<TorsionPoly> {
    spec.validate()?;
    let orders = spec.orders.orders();
    let mut multiplicity: BTreeMap<&[usize], u32> = BTreeMap::new();
    for e in &spec.entries {
        *multiplicity.entry(&e.eps).or_default() += 1;
    }
    let mut by_power: BTreeMap<u32, Vec<&[usize]>> = BTreeMap::new();
    for (eps, m) in multiplicity {
        by_power.entry(m).or_default().push(eps);
    }
    let mut f = TorsionPoly::one(orders)?;
    for (m, chars) in by_power {
        let mut g = TorsionPoly::one(orders)?;
        for eps in chars {
            g = g.try_mul(&TorsionPoly::linear_form(orders, eps)?)?;
        }
        f = f.try_mul(&g.pow(m))?;
        if f.is_zero() {
            break;
        }
    }
    Ok(f)
}

pub fn certify(spec: &AnnihilationSpec) -> Result<BoundReport> {
    certify_with_anchor(spec, describe(spec))
}

pub fn certify_with_anchor(spec: &AnnihilationSpec, anchor: String) -> Result<BoundReport> {
    let polynomial = characteristic_polynomial(spec)?;
    Ok(BoundReport {
        certified_dimension: min_certified_dimension(&polynomial),
        spec: spec.clone(),
        polynomial,
        anchor,
    })
}

fn describe(spec: &AnnihilationSpec) -> String {
    match &spec.family {
        SetFamily::Equipartition => format!(
            "{} measure(s) equipartitioned into {} regions",
            spec.measures,
            spec.orders.order()
        ),
        SetFamily::Makeev { p } => format!(
            "{} measure(s) equipartitioned by every regular {p}-fan tuple",
            spec.measures
        ),
        SetFamily::Custom { name } => format!(
            "custom set{}",
            name.as_ref().map(|n| format!(" {n}")).unwrap_or_default()
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::AbelianGroup;
    use crate::poly::{dickson, in_monomial_ideal, lucas_binomial};
    use num_bigint::BigInt;
    use num_traits::Zero;

    fn dim(spec: &AnnihilationSpec) -> Option<u32> {
        certify(spec).unwrap().certified_dimension
    }

    #[test]
    fn single_fan_bounds() {
        let r = certify(&build_equipartition_set(&[9], 1).unwrap()).unwrap();
        assert_eq!(r.polynomial, TorsionPoly::monomial(&[9], vec![4], 6).unwrap());
        assert_eq!(r.certified_dimension, Some(4));
        for (p, m) in [(3usize, 1usize), (5, 1), (7, 3)] {
            assert_eq!(
                dim(&build_equipartition_set(&[p], m).unwrap()),
                Some((m * (p - 1) / 2) as u32)
            );
        }
    }

    #[test]
    fn pair_of_three_fans() {
        assert_eq!(dim(&build_equipartition_set(&[3, 3], 2).unwrap()), Some(4));
    }

    #[test]
    fn z4_is_the_exceptional_cyclic_case() {
        let r = certify(&build_equipartition_set(&[4], 1).unwrap()).unwrap();
        assert_eq!(r.polynomial, TorsionPoly::monomial(&[4], vec![2], 2).unwrap());
        assert_eq!(r.certified_dimension, Some(2));
        // odd m vanishes for other composite cyclic orders
        assert_eq!(dim(&build_equipartition_set(&[6], 1).unwrap()), None);
        assert_eq!(dim(&build_equipartition_set(&[15], 1).unwrap()), None);
        assert_eq!(dim(&build_equipartition_set(&[4], 3).unwrap()), None);
    }

    #[test]
    fn grunbaum_and_singletons() {
        let r = certify(&build_equipartition_set(&[2, 2], 1).unwrap()).unwrap();
        let want = TorsionPoly::from_terms(
            &[2, 2],
            [(vec![2, 1], BigInt::from(1)), (vec![1, 2], BigInt::from(1))],
        )
        .unwrap();
        assert_eq!(r.polynomial, want);
        let s = build_custom_set(&[5, 7], vec![Entry { measure: 1, eps: vec![2, 3] }], None).unwrap();
        assert_eq!(
            certify(&s).unwrap().polynomial,
            TorsionPoly::linear_form(&[5, 7], &[2, 3]).unwrap()
        );
    }

    #[test]
    fn z9_pair_polynomials() {
        let o = [9, 9];
        let m = |e: [u32; 2], c: i64| TorsionPoly::monomial(&o, e.to_vec(), c).unwrap();
        let target = m([28, 9], 6).try_sub(&m([10, 27], 6)).unwrap();
        let lead = certify(&z9_pair_set(Reading::Leading)).unwrap();
        assert_eq!(lead.polynomial, target);
        assert_eq!(lead.certified_dimension, Some(27));
        let trail = certify(&z9_pair_set(Reading::Trailing)).unwrap();
        assert_eq!(trail.polynomial, target.neg());
        assert_eq!(trail.certified_dimension, Some(27));
    }

    #[test]
    fn multiplicities_can_differ_across_measures() {
        let entries = vec![
            Entry { measure: 1, eps: vec![1] },
            Entry { measure: 1, eps: vec![2] },
            Entry { measure: 2, eps: vec![1] },
        ];
        let s = build_custom_set(&[5], entries, None).unwrap();
        // b * 2b * b = 2 b^3
        assert_eq!(
            certify(&s).unwrap().polynomial,
            TorsionPoly::monomial(&[5], vec![3], 2).unwrap()
        );
    }

    #[test]
    fn dickson_power_consistency() {
        // for Z_p^k the certified d is the least d with
        // D(p,k)^{m(p-1)/2} outside the ideal, computed independently mod p
        for (p, k, m) in [(3usize, 2usize, 1usize), (3, 2, 2), (3, 2, 3), (5, 2, 1), (5, 2, 2), (3, 3, 1), (7, 2, 1)] {
            let d_power = dickson(p as u64, k).unwrap().pow((m * (p - 1) / 2) as u32);
            let want = (0..200u32).find(|&d| !in_monomial_ideal(&d_power, d));
            let spec = build_equipartition_set(&vec![p; k], m).unwrap();
            assert_eq!(dim(&spec), want, "p={p} k={k} m={m}");
        }
    }

    #[test]
    fn lucas_criterion_consistency() {
        for p in [3usize, 5, 7] {
            for m in 1..=8usize {
                let mp = (m * (p - 1) / 2) as u64;
                let mut digits = Vec::new();
                let mut x = mp;
                while x > 0 {
                    digits.push(x % p as u64);
                    x /= p as u64;
                }
                if digits.iter().any(|a| a % 2 == 1) {
                    continue;
                }
                let bound = (m * (p * p - 1) / 4) as u32;
                let binom = lucas_binomial(mp, mp / 2, p as u64).unwrap();
                assert_ne!(binom, 0);
                let d = dim(&build_equipartition_set(&[p, p], m).unwrap()).unwrap();
                assert!(d <= bound, "p={p} m={m}: {d} > {bound}");
            }
        }
    }

    fn is_unit_multiple(f: &TorsionPoly, g: &TorsionPoly, p: usize) -> bool {
        (1..p as i64).any(|c| g.scale(c) == *f)
    }

    #[test]
    fn makeev_polynomial_is_a_dickson_power_mod_p() {
        for (orders, p, m) in [
            (vec![6usize], 3usize, 1usize),
            (vec![15], 3, 1),
            (vec![15], 5, 1),
            (vec![6, 3], 3, 1),
            (vec![6, 6], 3, 1),
            (vec![6, 6], 3, 2),
            (vec![9, 3], 3, 1),
            (vec![10, 5], 5, 1),
        ] {
            let spec = build_makeev_set(&orders, p, m).unwrap();
            let r: usize = orders.iter().map(|q| q / p).product();
            let f = characteristic_polynomial(&spec).unwrap().reduce_mod(p).unwrap();
            let d = dickson(p as u64, orders.len())
                .unwrap()
                .pow((r * m * (p - 1) / 2) as u32);
            assert!(!f.is_zero());
            assert!(is_unit_multiple(&f, &d, p), "{orders:?} p={p} m={m}");
        }
    }

    #[test]
    fn makeev_bounds() {
        assert_eq!(dim(&build_makeev_set(&[15], 3, 1).unwrap()), Some(5));
        assert_eq!(dim(&build_makeev_set(&[15], 5, 1).unwrap()), Some(6));
        assert_eq!(dim(&build_makeev_set(&[6], 3, 1).unwrap()), Some(2));
        assert_eq!(dim(&build_makeev_set(&[6, 6], 3, 2).unwrap()), Some(16));
    }

    #[test]
    fn odd_half_dual_sizes_exhaustive() {
        let odd: Vec<usize> = (3..=99).step_by(2).collect();
        let mut groups: Vec<Vec<usize>> = odd.iter().map(|&q| vec![q]).collect();
        for &a in &odd {
            for &b in &odd {
                if a * b <= 100 {
                    groups.push(vec![a, b]);
                }
                for &c in &odd {
                    if a * b * c <= 100 {
                        groups.push(vec![a, b, c]);
                    }
                }
            }
        }
        for o in groups {
            let g = AbelianGroup::new(o).unwrap();
            let h = half_dual(&g, Reading::Trailing);
            assert_eq!(h.len(), (g.order() - 1) / 2, "{g}");
            for e in g.elements().filter(|e| !AbelianGroup::is_identity(e)) {
                assert!(h.contains(&e) ^ h.contains(&g.neg(&e)));
            }
        }
    }

    #[test]
    fn zero_polynomial_report() {
        let r = certify(&build_equipartition_set(&[9], 3).unwrap()).unwrap();
        assert!(r.polynomial.is_zero());
        assert_eq!(r.certified_dimension, None);
        assert!(r.polynomial.coefficient(&[0]).is_zero());
    }

    #[test]
    fn report_json_round_trip() {
        let r = certify(&build_makeev_set(&[6], 3, 1).unwrap()).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains(r#""family":{"kind":"makeev","p":3}"#));
        let back: BoundReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }
}
