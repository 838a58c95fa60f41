//! The quaternion group and its matrix-valued Fourier transform.
//!
//! Elements are ordered `(+1, -1, +i, -i, +j, -j, +k, -k)`. The four
//! one-dimensional characters factor through `Q8/{+-1} = Z2 x Z2`; the
//! character `(1,0)` has kernel `{+-1, +-i}` and `(0,1)` has kernel
//! `{+-1, +-j}`. Coefficients `c_eps` are stored at index `2*e1 + e2`. The
//! two-dimensional representation is the embedding of unit quaternions
//! into `SU(2)` given by [`Quaternion::to_su2`].

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quaternion::Quaternion;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Q8Element {
    PlusOne,
    MinusOne,
    PlusI,
    MinusI,
    PlusJ,
    MinusJ,
    PlusK,
    MinusK,
}

impl Q8Element {
    pub const ALL: [Q8Element; 8] = [
        Q8Element::PlusOne,
        Q8Element::MinusOne,
        Q8Element::PlusI,
        Q8Element::MinusI,
        Q8Element::PlusJ,
        Q8Element::MinusJ,
        Q8Element::PlusK,
        Q8Element::MinusK,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn quaternion(self) -> Quaternion {
        match self {
            Q8Element::PlusOne => Quaternion::ONE,
            Q8Element::MinusOne => -Quaternion::ONE,
            Q8Element::PlusI => Quaternion::I,
            Q8Element::MinusI => -Quaternion::I,
            Q8Element::PlusJ => Quaternion::J,
            Q8Element::MinusJ => -Quaternion::J,
            Q8Element::PlusK => Quaternion::K,
            Q8Element::MinusK => -Quaternion::K,
        }
    }

    /// Exact lookup of a unit basis quaternion.
    pub fn from_quaternion(q: Quaternion) -> Option<Self> {
        Self::ALL.into_iter().find(|g| g.quaternion() == q)
    }

    pub fn mul(self, other: Self) -> Self {
        Self::from_quaternion(self.quaternion() * other.quaternion())
            .expect("Q8 is closed under multiplication")
    }

    pub fn inverse(self) -> Self {
        Self::from_quaternion(self.quaternion().conj()).expect("Q8 is closed under inversion")
    }

    /// Value of the one-dimensional character `chi_(e1,e2)`.
    pub fn character(self, e1: u8, e2: u8) -> f64 {
        use Q8Element::*;
        // image in Q8/{+-1} = Z2 x Z2 as (a, b) with j -> (1,0), i -> (0,1)
        let (a, b) = match self {
            PlusOne | MinusOne => (0, 0),
            PlusI | MinusI => (0, 1),
            PlusJ | MinusJ => (1, 0),
            PlusK | MinusK => (1, 1),
        };
        if (e1 as u32 * a + e2 as u32 * b).is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }

    pub fn sigma(self) -> [[Complex64; 2]; 2] {
        self.quaternion().to_su2()
    }

    pub fn symbol(self) -> &'static str {
        ["+1", "-1", "+i", "-i", "+j", "-j", "+k", "-k"][self.index()]
    }
}

/// Transform of a function on `Q8`: four scalar coefficients and one 2x2
/// matrix coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Q8Transform {
    #[serde(with = "eps_serde")]
    pub c_eps: [Complex64; 4],
    #[serde(with = "sigma_serde")]
    pub c_sigma: [[Complex64; 2]; 2],
}

mod eps_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Complex64; 4], s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::serde_util::complex_vec::serialize(v, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<[Complex64; 4], D::Error> {
        let v = crate::serde_util::complex_vec::deserialize(d)?;
        v.try_into()
            .map_err(|_| serde::de::Error::custom("expected four coefficients"))
    }
}

mod sigma_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        m: &[[Complex64; 2]; 2],
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<Complex64>> = m.iter().map(|r| r.to_vec()).collect();
        crate::serde_util::complex_vec_vec::serialize(&rows, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<[[Complex64; 2]; 2], D::Error> {
        let rows = crate::serde_util::complex_vec_vec::deserialize(d)?;
        if rows.len() != 2 || rows.iter().any(|r| r.len() != 2) {
            return Err(serde::de::Error::custom("expected a 2x2 matrix"));
        }
        Ok([[rows[0][0], rows[0][1]], [rows[1][0], rows[1][1]]])
    }
}

impl Q8Transform {
    pub fn eps(&self, e1: u8, e2: u8) -> Complex64 {
        self.c_eps[(2 * e1 + e2) as usize]
    }

    /// `f(g) = sum_eps c_eps chi_eps(g) + 2 Tr(c_sigma sigma(g))`.
    pub fn reconstruct(&self) -> [Complex64; 8] {
        let mut out = [Complex64::new(0.0, 0.0); 8];
        for g in Q8Element::ALL {
            let mut v = Complex64::new(0.0, 0.0);
            for e1 in 0..2u8 {
                for e2 in 0..2u8 {
                    v += self.eps(e1, e2) * g.character(e1, e2);
                }
            }
            let s = g.sigma();
            let trace = (0..2)
                .map(|r| (0..2).map(|t| self.c_sigma[r][t] * s[t][r]).sum::<Complex64>())
                .sum::<Complex64>();
            out[g.index()] = v + 2.0 * trace;
        }
        out
    }

    /// Squared Frobenius norm of `c_sigma`.
    pub fn sigma_norm_sqr(&self) -> f64 {
        self.c_sigma.iter().flatten().map(|z| z.norm_sqr()).sum()
    }
}

/// `c_eps = (1/8) sum_g f(g) chi_eps(g)` (the characters are real) and
/// `c_sigma = (1/8) sum_g f(g) sigma(g)^-1`.
pub fn q8_fourier_transform(values: &[Complex64]) -> Result<Q8Transform> {
    if values.len() != 8 {
        return Err(Error::LengthMismatch {
            expected: 8,
            found: values.len(),
        });
    }
    let zero = Complex64::new(0.0, 0.0);
    let mut c_eps = [zero; 4];
    let mut c_sigma = [[zero; 2]; 2];
    for g in Q8Element::ALL {
        let v = values[g.index()];
        for e1 in 0..2u8 {
            for e2 in 0..2u8 {
                c_eps[(2 * e1 + e2) as usize] += v * g.character(e1, e2);
            }
        }
        let inv = g.inverse().sigma();
        for r in 0..2 {
            for t in 0..2 {
                c_sigma[r][t] += v * inv[r][t];
            }
        }
    }
    c_eps.iter_mut().for_each(|c| *c /= 8.0);
    c_sigma.iter_mut().flatten().for_each(|c| *c /= 8.0);
    Ok(Q8Transform { c_eps, c_sigma })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn group_table_sanity() {
        use Q8Element::*;
        assert_eq!(PlusI.mul(PlusJ), PlusK);
        assert_eq!(PlusJ.mul(PlusI), MinusK);
        assert_eq!(MinusI.inverse(), PlusI);
        for g in Q8Element::ALL {
            assert_eq!(g.mul(g.inverse()), PlusOne);
        }
    }

    #[test]
    fn characters_are_homomorphisms() {
        for e1 in 0..2 {
            for e2 in 0..2 {
                for g in Q8Element::ALL {
                    for h in Q8Element::ALL {
                        assert_eq!(
                            g.mul(h).character(e1, e2),
                            g.character(e1, e2) * h.character(e1, e2)
                        );
                    }
                }
            }
        }
        // kernels as documented
        let ker10: Vec<_> = Q8Element::ALL
            .into_iter()
            .filter(|g| g.character(1, 0) > 0.0)
            .map(Q8Element::symbol)
            .collect();
        assert_eq!(ker10, ["+1", "-1", "+i", "-i"]);
        let ker01: Vec<_> = Q8Element::ALL
            .into_iter()
            .filter(|g| g.character(0, 1) > 0.0)
            .map(Q8Element::symbol)
            .collect();
        assert_eq!(ker01, ["+1", "-1", "+j", "-j"]);
    }

    #[test]
    fn constant_function() {
        let t = q8_fourier_transform(&[c(8.0); 8]).unwrap();
        assert!((t.eps(0, 0) - c(8.0)).norm() < 1e-12);
        assert!(t.c_eps[1..].iter().all(|z| z.norm() < 1e-12));
        assert!(t.sigma_norm_sqr() < 1e-24);
    }

    #[test]
    fn delta_at_identity() {
        let mut f = [c(0.0); 8];
        f[0] = c(1.0);
        let t = q8_fourier_transform(&f).unwrap();
        for z in t.c_eps {
            assert!((z - c(0.125)).norm() < 1e-12);
        }
        assert!((t.c_sigma[0][0] - c(0.125)).norm() < 1e-12);
        assert!((t.c_sigma[1][1] - c(0.125)).norm() < 1e-12);
        assert!(t.c_sigma[0][1].norm() < 1e-12 && t.c_sigma[1][0].norm() < 1e-12);
    }

    #[test]
    fn z4_profile() {
        // +1 on {+-1, +-i}, -1 on {+-j, +-k}
        let f: Vec<Complex64> = Q8Element::ALL
            .iter()
            .map(|g| if g.index() < 4 { c(1.0) } else { c(-1.0) })
            .collect();
        let t = q8_fourier_transform(&f).unwrap();
        assert!((t.eps(1, 0) - c(1.0)).norm() < 1e-12);
        assert!(t.eps(0, 0).norm() < 1e-12);
        assert!(t.eps(0, 1).norm() < 1e-12);
        assert!(t.eps(1, 1).norm() < 1e-12);
        assert!(t.sigma_norm_sqr() < 1e-24);
    }

    #[test]
    fn reconstruction_and_plancherel() {
        let f: Vec<Complex64> = (0..8)
            .map(|i| Complex64::new((i as f64 * 1.7).sin(), (i as f64 * 0.3).cos()))
            .collect();
        let t = q8_fourier_transform(&f).unwrap();
        for (a, b) in t.reconstruct().iter().zip(&f) {
            assert!((a - b).norm() < 1e-12);
        }
        let lhs = f.iter().map(|z| z.norm_sqr()).sum::<f64>() / 8.0;
        let rhs = t.c_eps.iter().map(|z| z.norm_sqr()).sum::<f64>() + 2.0 * t.sigma_norm_sqr();
        assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn wrong_length() {
        assert!(q8_fourier_transform(&[c(1.0); 7]).is_err());
    }
}
