//! Harmonic analysis on finite abelian groups `Z_{q_1} x ... x Z_{q_k}` and
//! on the quaternion group `Q8`.
//!
//! Group elements and characters of an abelian group are both indexed by
//! tuples `(g_1, ..., g_k)` with `0 <= g_j < q_j`, enumerated in
//! lexicographic order (last coordinate fastest). The pairing is
//!
//! ```text
//! chi_eps(g) = prod_j exp(2 pi i eps_j g_j / q_j)
//! ```
//!
//! and transforms follow `c_eps = |G|^-1 sum_g f(g) conj(chi_eps(g))`, so
//! that `f(g) = sum_eps c_eps chi_eps(g)`.

mod q8;

pub use q8::{q8_fourier_transform, Q8Element, Q8Transform};

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A finite abelian group given by its cyclic factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    orders: Vec<usize>,
    strides: Vec<usize>,
}

impl AbelianGroup {
    pub fn new(orders: Vec<usize>) -> Result<Self> {
        if orders.is_empty() {
            return Err(Error::InvalidGroup("at least one cyclic factor is required".into()));
        }
        if let Some(q) = orders.iter().find(|&&q| q < 2) {
            return Err(Error::InvalidGroup(format!("cyclic order {q} < 2")));
        }
        let mut strides = vec![1usize; orders.len()];
        for j in (0..orders.len() - 1).rev() {
            strides[j] = strides[j + 1]
                .checked_mul(orders[j + 1])
                .ok_or_else(|| Error::InvalidGroup("group order overflows".into()))?;
        }
        strides[0]
            .checked_mul(orders[0])
            .ok_or_else(|| Error::InvalidGroup("group order overflows".into()))?;
        Ok(Self { orders, strides })
    }

    pub fn cyclic(q: usize) -> Result<Self> {
        Self::new(vec![q])
    }

    pub fn orders(&self) -> &[usize] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    /// `|G| = prod q_j`.
    pub fn order(&self) -> usize {
        self.strides[0] * self.orders[0]
    }

    pub fn check(&self, g: &[usize]) -> Result<()> {
        if g.len() != self.rank() || g.iter().zip(&self.orders).any(|(&x, &q)| x >= q) {
            return Err(Error::IndexOutOfRange {
                index: g.to_vec(),
                orders: self.orders.clone(),
            });
        }
        Ok(())
    }

    /// Position of `g` in the lexicographic enumeration.
    pub fn index_of(&self, g: &[usize]) -> Result<usize> {
        self.check(g)?;
        Ok(g.iter().zip(&self.strides).map(|(x, s)| x * s).sum())
    }

    pub fn element(&self, index: usize) -> Vec<usize> {
        debug_assert!(index < self.order());
        self.orders
            .iter()
            .zip(&self.strides)
            .map(|(&q, &s)| (index / s) % q)
            .collect()
    }

    pub fn elements(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.order()).map(|i| self.element(i))
    }

    pub fn add(&self, a: &[usize], b: &[usize]) -> Vec<usize> {
        a.iter()
            .zip(b)
            .zip(&self.orders)
            .map(|((x, y), q)| (x + y) % q)
            .collect()
    }

    pub fn neg(&self, a: &[usize]) -> Vec<usize> {
        a.iter().zip(&self.orders).map(|(x, q)| (q - x % q) % q).collect()
    }

    pub fn is_identity(g: &[usize]) -> bool {
        g.iter().all(|&x| x == 0)
    }

    /// All elements of the subgroup generated by `gens`.
    pub fn subgroup(&self, gens: &[Vec<usize>]) -> Result<Vec<Vec<usize>>> {
        for g in gens {
            self.check(g)?;
        }
        let mut members = vec![vec![0; self.rank()]];
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut cursor = 0;
        while cursor < members.len() {
            let h = members[cursor].clone();
            for g in gens {
                let next = self.add(&h, g);
                let idx = self.index_of(&next)?;
                if !seen[idx] {
                    seen[idx] = true;
                    members.push(next);
                }
            }
            cursor += 1;
        }
        members.sort();
        Ok(members)
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.orders.iter().map(|q| format!("Z{q}")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

impl Serialize for AbelianGroup {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.orders.serialize(s)
    }
}

impl<'de> Deserialize<'de> for AbelianGroup {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let orders = Vec::<usize>::deserialize(d)?;
        AbelianGroup::new(orders).map_err(serde::de::Error::custom)
    }
}

/// Either a product of cyclic groups or the quaternion group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    Abelian(AbelianGroup),
    Q8,
}

impl GroupSpec {
    pub fn order(&self) -> usize {
        match self {
            GroupSpec::Abelian(g) => g.order(),
            GroupSpec::Q8 => 8,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum GroupSpecRepr {
    Orders(Vec<usize>),
    Name(String),
}

impl Serialize for GroupSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            GroupSpec::Abelian(g) => GroupSpecRepr::Orders(g.orders.clone()),
            GroupSpec::Q8 => GroupSpecRepr::Name("Q8".into()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroupSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match GroupSpecRepr::deserialize(d)? {
            GroupSpecRepr::Orders(o) => AbelianGroup::new(o)
                .map(GroupSpec::Abelian)
                .map_err(serde::de::Error::custom),
            GroupSpecRepr::Name(n) if n.eq_ignore_ascii_case("q8") => Ok(GroupSpec::Q8),
            GroupSpecRepr::Name(n) => Err(serde::de::Error::custom(format!("unknown group {n:?}"))),
        }
    }
}

/// A complex-valued function on a group, e.g. `g -> mu(R_g)`.
///
/// Serialized as `{"orders": [...], "values": [[re, im], ...]}` with values
/// in lexicographic element order (or the fixed `Q8` order, with
/// `"orders": "Q8"`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupFunction {
    #[serde(rename = "orders")]
    pub group: GroupSpec,
    #[serde(with = "crate::serde_util::complex_vec")]
    pub values: Vec<Complex64>,
}

impl GroupFunction {
    pub fn new(group: GroupSpec, values: Vec<Complex64>) -> Result<Self> {
        let expected = group.order();
        if values.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                found: values.len(),
            });
        }
        Ok(Self { group, values })
    }

    pub fn total(&self) -> Complex64 {
        self.values.iter().sum()
    }
}

/// The full set of abelian Fourier coefficients, indexed like the elements.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub orders: AbelianGroup,
    #[serde(with = "crate::serde_util::complex_vec")]
    pub coefficients: Vec<Complex64>,
}

impl Spectrum {
    pub fn coefficient(&self, eps: &[usize]) -> Result<Complex64> {
        Ok(self.coefficients[self.orders.index_of(eps)?])
    }
}

/// `exp(2 pi i * num / den)`, with the fraction reduced first.
fn root_of_unity(num: u128, den: u128) -> Complex64 {
    let r = (num % den) as f64 / den as f64;
    Complex64::from_polar(1.0, TAU * r)
}

/// `chi_eps(g) = prod_j zeta_{q_j}^{eps_j g_j}`.
pub fn character_value(group: &AbelianGroup, eps: &[usize], g: &[usize]) -> Result<Complex64> {
    group.check(eps)?;
    group.check(g)?;
    // exact phase as a fraction over lcm(q_j)
    let l = group.orders.iter().fold(1u128, |acc, &q| acc.lcm(&(q as u128)));
    let num = eps
        .iter()
        .zip(g)
        .zip(&group.orders)
        .map(|((&e, &x), &q)| ((e * x) % q) as u128 * (l / q as u128))
        .sum::<u128>();
    Ok(root_of_unity(num, l))
}

/// Applies a length-`q` DFT along every axis in turn. `sign = -1` gives the
/// analysis direction (`conj(chi)`), `sign = +1` the synthesis direction.
fn separable_dft(group: &AbelianGroup, data: &mut [Complex64], sign: f64) {
    let mut line = Vec::new();
    let mut out = Vec::new();
    for (axis, &q) in group.orders.iter().enumerate() {
        let stride = group.strides[axis];
        let twiddle: Vec<Complex64> = (0..q)
            .map(|t| Complex64::from_polar(1.0, sign * TAU * t as f64 / q as f64))
            .collect();
        let block = stride * q;
        for base in (0..data.len()).step_by(block) {
            for offset in 0..stride {
                let start = base + offset;
                line.clear();
                line.extend((0..q).map(|t| data[start + t * stride]));
                out.clear();
                out.extend((0..q).map(|e| {
                    (0..q)
                        .map(|t| line[t] * twiddle[(e * t) % q])
                        .sum::<Complex64>()
                }));
                for (t, v) in out.iter().enumerate() {
                    data[start + t * stride] = *v;
                }
            }
        }
    }
}

/// `c_eps = |G|^-1 sum_g f(g) conj(chi_eps(g))` for every character.
pub fn fourier_transform(group: &AbelianGroup, values: &[Complex64]) -> Result<Spectrum> {
    if values.len() != group.order() {
        return Err(Error::LengthMismatch {
            expected: group.order(),
            found: values.len(),
        });
    }
    let mut data = values.to_vec();
    separable_dft(group, &mut data, -1.0);
    let scale = 1.0 / group.order() as f64;
    data.iter_mut().for_each(|c| *c *= scale);
    Ok(Spectrum {
        orders: group.clone(),
        coefficients: data,
    })
}

/// `f(g) = sum_eps c_eps chi_eps(g)`.
pub fn fourier_inverse(group: &AbelianGroup, coefficients: &[Complex64]) -> Result<Vec<Complex64>> {
    if coefficients.len() != group.order() {
        return Err(Error::LengthMismatch {
            expected: group.order(),
            found: coefficients.len(),
        });
    }
    let mut data = coefficients.to_vec();
    separable_dft(group, &mut data, 1.0);
    Ok(data)
}

/// Transform of a [`GroupFunction`] over an abelian group.
pub fn transform_function(f: &GroupFunction) -> Result<Spectrum> {
    match &f.group {
        GroupSpec::Abelian(g) => fourier_transform(g, &f.values),
        GroupSpec::Q8 => Err(Error::InvalidGroup(
            "Q8 functions use the matrix-valued transform".into(),
        )),
    }
}
