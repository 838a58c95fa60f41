//! Exact polynomial arithmetic in the torsion ring
//! `Z[b_1, ..., b_k] / (q_1 b_1, ..., q_k b_k)`.
//!
//! Since `q_j` annihilates every monomial divisible by `b_j`, the
//! coefficient group of a monomial with support `S = {j : e_j > 0}` is
//! `Z / t_S` with `t_S = gcd{q_j : j in S}`. Canonical form stores each
//! such coefficient in `[0, t_S)`, leaves the constant term in `Z`, and drops
//! zero terms.

mod dickson;
mod q8_cohomology;

pub use dickson::{dickson, is_odd_prime, lucas_binomial};
pub use q8_cohomology::{q8_chern_check, Q8CohElement};

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exponent tuple `(e_1, ..., e_k)`.
pub type Exponents = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionPoly {
    orders: Vec<usize>,
    terms: BTreeMap<Exponents, BigInt>,
}

fn validate_orders(orders: &[usize]) -> Result<()> {
    if orders.is_empty() {
        return Err(Error::InvalidGroup("at least one variable is required".into()));
    }
    if let Some(q) = orders.iter().find(|&&q| q < 2) {
        return Err(Error::InvalidGroup(format!("torsion order {q} < 2")));
    }
    Ok(())
}

impl TorsionPoly {
    pub fn zero(orders: &[usize]) -> Result<Self> {
        validate_orders(orders)?;
        Ok(Self {
            orders: orders.to_vec(),
            terms: BTreeMap::new(),
        })
    }

    pub fn constant(orders: &[usize], c: impl Into<BigInt>) -> Result<Self> {
        Self::monomial(orders, vec![0; orders.len()], c)
    }

    pub fn one(orders: &[usize]) -> Result<Self> {
        Self::constant(orders, 1)
    }

    pub fn monomial(orders: &[usize], exponents: Exponents, c: impl Into<BigInt>) -> Result<Self> {
        Self::from_terms(orders, [(exponents, c.into())])
    }

    /// The variable `b_j` (zero-based `j`).
    pub fn variable(orders: &[usize], j: usize) -> Result<Self> {
        let mut e = vec![0; orders.len()];
        *e.get_mut(j).ok_or_else(|| Error::IndexOutOfRange {
            index: vec![j],
            orders: orders.to_vec(),
        })? = 1;
        Self::monomial(orders, e, 1)
    }

    /// `eps_1 b_1 + ... + eps_k b_k`.
    pub fn linear_form(orders: &[usize], eps: &[usize]) -> Result<Self> {
        validate_orders(orders)?;
        if eps.len() != orders.len() || eps.iter().zip(orders).any(|(e, q)| e >= q) {
            return Err(Error::IndexOutOfRange {
                index: eps.to_vec(),
                orders: orders.to_vec(),
            });
        }
        Self::from_terms(
            orders,
            eps.iter().enumerate().map(|(j, &e)| {
                let mut x = vec![0; orders.len()];
                x[j] = 1;
                (x, BigInt::from(e))
            }),
        )
    }

    /// Collects terms (summing duplicates) and brings them to canonical form.
    pub fn from_terms(
        orders: &[usize],
        terms: impl IntoIterator<Item = (Exponents, BigInt)>,
    ) -> Result<Self> {
        validate_orders(orders)?;
        let mut acc: BTreeMap<Exponents, BigInt> = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != orders.len() {
                return Err(Error::LengthMismatch {
                    expected: orders.len(),
                    found: e.len(),
                });
            }
            *acc.entry(e).or_default() += c;
        }
        let mut p = Self {
            orders: orders.to_vec(),
            terms: acc,
        };
        p.normalize();
        Ok(p)
    }

    pub fn orders(&self) -> &[usize] {
        &self.orders
    }

    pub fn nvars(&self) -> usize {
        self.orders.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exponents: &[u32]) -> BigInt {
        self.terms.get(exponents).cloned().unwrap_or_default()
    }

    /// `t_S` for the support of `exponents`, or `None` for the constant
    /// monomial (whose coefficient lives in `Z`).
    pub fn torsion_of(&self, exponents: &[u32]) -> Option<usize> {
        exponents
            .iter()
            .zip(&self.orders)
            .filter(|(&e, _)| e > 0)
            .map(|(_, &q)| q)
            .reduce(|a, b| a.gcd(&b))
    }

    /// Reduces every coefficient into its canonical range.
    pub fn normalize(&mut self) {
        let orders = self.orders.clone();
        self.terms.retain(|e, c| {
            let t = e
                .iter()
                .zip(&orders)
                .filter(|(&x, _)| x > 0)
                .map(|(_, &q)| q)
                .reduce(|a, b| a.gcd(&b));
            if let Some(t) = t {
                *c = c.mod_floor(&BigInt::from(t));
            }
            !c.is_zero()
        });
    }

    fn check_orders(&self, other: &Self) -> Result<()> {
        if self.orders != other.orders {
            return Err(Error::OrdersMismatch {
                left: self.orders.clone(),
                right: other.orders.clone(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_orders(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            *out.terms.entry(e.clone()).or_default() += c;
        }
        out.normalize();
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        out.terms.values_mut().for_each(|c| *c = -c.clone());
        out.normalize();
        out
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn scale(&self, k: impl Into<BigInt>) -> Self {
        let k = k.into();
        let mut out = self.clone();
        out.terms.values_mut().for_each(|c| *c *= &k);
        out.normalize();
        out
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_orders(other)?;
        let mut acc: BTreeMap<Exponents, BigInt> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                *acc.entry(e).or_default() += ca * cb;
            }
        }
        let mut out = Self {
            orders: self.orders.clone(),
            terms: acc,
        };
        out.normalize();
        Ok(out)
    }

    /// Square-and-multiply power; `p^0 = 1`.
    pub fn pow(&self, mut m: u32) -> Self {
        let mut result = Self::one(&self.orders).expect("orders already validated");
        let mut base = self.clone();
        while m > 0 {
            if m & 1 == 1 {
                result = result.try_mul(&base).expect("same orders");
            }
            m >>= 1;
            if m > 0 {
                base = base.try_mul(&base).expect("same orders");
            }
        }
        result
    }

    /// Maps coefficients to `Z/p` and returns the image over orders
    /// `(p, ..., p)`. Requires `p` to divide every `q_j`, which makes the
    /// map well defined on every coefficient group.
    pub fn reduce_mod(&self, p: usize) -> Result<Self> {
        if p < 2 || self.orders.iter().any(|q| q % p != 0) {
            return Err(Error::InvalidSpec(format!(
                "{p} does not divide every order of {:?}",
                self.orders
            )));
        }
        let pb = BigInt::from(p);
        Self::from_terms(
            &vec![p; self.nvars()],
            self.terms.iter().map(|(e, c)| (e.clone(), c.mod_floor(&pb))),
        )
    }

    /// Total degree of every monomial, if they all agree.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }
}

impl fmt::Display for TorsionPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(j, &x)| {
                    if x == 1 {
                        format!("b{}", j + 1)
                    } else {
                        format!("b{}^{}", j + 1, x)
                    }
                })
                .collect();
            match (vars.is_empty(), c.is_one()) {
                (true, _) => write!(f, "{c}")?,
                (false, true) => write!(f, "{}", vars.join("*"))?,
                (false, false) if c.is_negative() => write!(f, "({c})*{}", vars.join("*"))?,
                (false, false) => write!(f, "{c}*{}", vars.join("*"))?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    e: Exponents,
    c: String,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    orders: Vec<usize>,
    terms: Vec<TermRepr>,
}

impl Serialize for TorsionPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyRepr {
            orders: self.orders.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermRepr {
                    e: e.clone(),
                    c: c.to_string(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TorsionPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = PolyRepr::deserialize(d)?;
        let terms = repr
            .terms
            .into_iter()
            .map(|t| {
                t.c.parse::<BigInt>()
                    .map(|c| (t.e, c))
                    .map_err(serde::de::Error::custom)
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        TorsionPoly::from_terms(&repr.orders, terms).map_err(serde::de::Error::custom)
    }
}

/// `a * b` in canonical form.
pub fn poly_mul(a: &TorsionPoly, b: &TorsionPoly) -> Result<TorsionPoly> {
    a.try_mul(b)
}

/// `prod_{eps in list} (eps_1 b_1 + ... + eps_k b_k)^m`; the empty product
/// is `1`.
pub fn product_of_linear_forms(orders: &[usize], eps_list: &[Vec<usize>], m: u32) -> Result<TorsionPoly> {
    let mut g = TorsionPoly::one(orders)?;
    for eps in eps_list {
        g = g.try_mul(&TorsionPoly::linear_form(orders, eps)?)?;
        if g.is_zero() {
            break;
        }
    }
    Ok(g.pow(m))
}

/// True iff `f` lies in `(b_1^{d+1}, ..., b_k^{d+1})`. The ring has a
/// monomial basis, so membership is decided monomial by monomial.
pub fn in_monomial_ideal(f: &TorsionPoly, d: u32) -> bool {
    f.terms().all(|(e, _)| e.iter().any(|&x| x > d))
}

/// Least `d` with `f` outside `(b_1^{d+1}, ..., b_k^{d+1})`, i.e. the
/// minimum over surviving monomials of their largest exponent. `None` for
/// the zero polynomial.
pub fn min_certified_dimension(f: &TorsionPoly) -> Option<u32> {
    f.terms()
        .map(|(e, _)| e.iter().copied().max().unwrap_or(0))
        .min()
}
