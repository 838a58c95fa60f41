//! The integral cohomology ring of `BQ8` up to degree 12,
//! `Z[alpha, beta, gamma] / (2 alpha, 2 beta, 8 gamma, alpha^2, beta^2, alpha beta - 4 gamma)`
//! with `|alpha| = |beta| = 2` and `|gamma| = 4`.
//!
//! In degrees `1..=12` the additive basis is
//! `alpha, beta, gamma, alpha gamma, beta gamma, gamma^2, alpha gamma^2, beta gamma^2, gamma^3`;
//! `alpha`/`beta` multiples carry coefficients mod 2 and pure powers of
//! `gamma` carry coefficients mod 8.

use std::collections::BTreeMap;
use std::fmt;

/// Monomial `alpha^a beta^b gamma^c`, at most one of `a`, `b` equal to 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Q8Monomial {
    pub alpha: u8,
    pub beta: u8,
    pub gamma: u32,
}

impl Q8Monomial {
    pub const fn new(alpha: u8, beta: u8, gamma: u32) -> Self {
        Self { alpha, beta, gamma }
    }

    pub fn degree(self) -> u32 {
        2 * self.alpha as u32 + 2 * self.beta as u32 + 4 * self.gamma
    }

    fn modulus(self) -> Option<i64> {
        match (self.alpha, self.beta, self.gamma) {
            (0, 0, 0) => None,
            (0, 0, _) => Some(8),
            _ => Some(2),
        }
    }
}

pub const MAX_DEGREE: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Q8CohElement {
    terms: BTreeMap<Q8Monomial, i64>,
}

impl Q8CohElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::term(0, 0, 0, 1)
    }

    pub fn alpha() -> Self {
        Self::term(1, 0, 0, 1)
    }

    pub fn beta() -> Self {
        Self::term(0, 1, 0, 1)
    }

    pub fn gamma() -> Self {
        Self::term(0, 0, 1, 1)
    }

    /// `c * alpha^a beta^b gamma^c`, reduced by the relations.
    pub fn term(a: u32, b: u32, g: u32, c: i64) -> Self {
        let mut out = Self::zero();
        out.push(a, b, g, c);
        out
    }

    fn push(&mut self, a: u32, b: u32, g: u32, c: i64) {
        // alpha^2 = beta^2 = 0, alpha beta = 4 gamma
        let (mono, c) = match (a, b) {
            (a, _) if a >= 2 => return,
            (_, b) if b >= 2 => return,
            (1, 1) => (Q8Monomial::new(0, 0, g + 1), 4 * c),
            (a, b) => (Q8Monomial::new(a as u8, b as u8, g), c),
        };
        if mono.degree() > MAX_DEGREE {
            return;
        }
        let slot = self.terms.entry(mono).or_insert(0);
        *slot += c;
        if let Some(m) = mono.modulus() {
            *slot = slot.rem_euclid(m);
        }
        if *slot == 0 {
            self.terms.remove(&mono);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.push(m.alpha as u32, m.beta as u32, m.gamma, c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (x, &cx) in &self.terms {
            for (y, &cy) in &other.terms {
                out.push(
                    (x.alpha + y.alpha) as u32,
                    (x.beta + y.beta) as u32,
                    x.gamma + y.gamma,
                    cx * cy,
                );
            }
        }
        out
    }

    pub fn coefficient(&self, alpha: u8, beta: u8, gamma: u32) -> i64 {
        self.terms
            .get(&Q8Monomial::new(alpha, beta, gamma))
            .copied()
            .unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Q8Monomial, i64)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, *c))
    }
}

impl fmt::Display for Q8CohElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut s = if *c == 1 && *m != Q8Monomial::new(0, 0, 0) {
                    String::new()
                } else {
                    c.to_string()
                };
                if m.alpha == 1 {
                    s.push('a');
                }
                if m.beta == 1 {
                    s.push('b');
                }
                match m.gamma {
                    0 => {}
                    1 => s.push('g'),
                    n => s.push_str(&format!("g^{n}")),
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Top Chern class of `chi_(1,1) + chi_(0,1) + 2 sigma`:
/// `(alpha + beta) * beta * gamma^2`, with `c_1(chi_(1,1)) = alpha + beta`,
/// `c_1(chi_(0,1)) = beta` and `c_2(sigma) = gamma`.
pub fn q8_chern_check() -> Q8CohElement {
    let g = Q8CohElement::gamma();
    Q8CohElement::alpha()
        .add(&Q8CohElement::beta())
        .mul(&Q8CohElement::beta())
        .mul(&g.mul(&g))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relations() {
        let (a, b, g) = (Q8CohElement::alpha(), Q8CohElement::beta(), Q8CohElement::gamma());
        assert_eq!(a.mul(&b), Q8CohElement::term(0, 0, 1, 4));
        assert!(b.mul(&b).is_zero());
        assert!(a.mul(&a).is_zero());
        assert!(a.add(&a).is_zero());
        let eight_gamma = (0..8).fold(Q8CohElement::zero(), |acc, _| acc.add(&g));
        assert!(eight_gamma.is_zero());
    }

    #[test]
    fn chern_class_is_four_gamma_cubed() {
        let c6 = q8_chern_check();
        assert_eq!(c6, Q8CohElement::term(0, 0, 3, 4));
        assert_eq!(c6.coefficient(0, 0, 3), 4);
        assert_eq!(c6.to_string(), "4g^3");
    }

    #[test]
    fn reduction_is_idempotent_and_truncated() {
        let x = Q8CohElement::term(1, 1, 0, 3); // 12 gamma = 4 gamma
        assert_eq!(x, Q8CohElement::term(0, 0, 1, 4));
        assert_eq!(x.add(&Q8CohElement::zero()), x);
        let g = Q8CohElement::gamma();
        assert!(g.mul(&g).mul(&g).mul(&g).is_zero()); // degree 16 is past the skeleton
        assert!(Q8CohElement::alpha().mul(&g.mul(&g).mul(&g)).is_zero());
    }

    #[test]
    fn ring_is_commutative_on_basis() {
        let basis = [
            Q8CohElement::one(),
            Q8CohElement::alpha(),
            Q8CohElement::beta(),
            Q8CohElement::gamma(),
            Q8CohElement::term(1, 0, 1, 1),
            Q8CohElement::term(0, 1, 2, 1),
        ];
        for x in &basis {
            for y in &basis {
                assert_eq!(x.mul(y), y.mul(x));
                for z in &basis {
                    assert_eq!(x.mul(y).mul(z), x.mul(&y.mul(z)));
                }
            }
        }
    }
}
