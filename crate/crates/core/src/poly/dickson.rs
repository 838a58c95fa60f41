use itertools::Itertools;
use num_bigint::BigInt;

use super::TorsionPoly;
use crate::error::{Error, Result};

pub fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p.is_multiple_of(2) {
        return false;
    }
    (3..)
        .step_by(2)
        .take_while(|d: &u64| d * d <= p)
        .all(|d| !p.is_multiple_of(d))
}

fn is_prime(p: u64) -> bool {
    p == 2 || is_odd_prime(p)
}

/// Sign of a permutation given in one-line notation.
fn permutation_sign(perm: &[usize]) -> i64 {
    let inversions = (0..perm.len())
        .flat_map(|i| (i + 1..perm.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| perm[i] > perm[j])
        .count();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The Dickson polynomial
///
/// ```text
/// D(p, k) = det [ b_j^{p^i} ]_{0 <= i < k, 1 <= j <= k}
///         = sum_{s in S_k} sgn(s) b_{s(1)} b_{s(2)}^p ... b_{s(k)}^{p^{k-1}}
/// ```
///
/// over orders `(p, ..., p)`, i.e. with coefficients mod `p`.
pub fn dickson(p: u64, k: usize) -> Result<TorsionPoly> {
    if !is_odd_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    if k == 0 {
        return Err(Error::InvalidSpec("Dickson polynomial needs k >= 1".into()));
    }
    let orders = vec![p as usize; k];
    let powers: Vec<u32> = (0..k)
        .map(|i| {
            p.checked_pow(i as u32)
                .and_then(|x| u32::try_from(x).ok())
                .ok_or_else(|| Error::InvalidSpec(format!("exponent p^{i} overflows")))
        })
        .collect::<Result<_>>()?;
    let terms = (0..k).permutations(k).map(|perm| {
        let mut e = vec![0u32; k];
        for (row, &var) in perm.iter().enumerate() {
            e[var] = powers[row];
        }
        (e, BigInt::from(permutation_sign(&perm)))
    });
    TorsionPoly::from_terms(&orders, terms)
}

fn pow_mod(mut base: u128, mut exp: u128, m: u128) -> u128 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// `C(n, r) mod p` for `n < p`, via Fermat inverses.
fn small_binomial(n: u64, r: u64, p: u64) -> u64 {
    if r > n {
        return 0;
    }
    let p = p as u128;
    let (mut num, mut den) = (1u128, 1u128);
    for i in 0..r as u128 {
        num = num * ((n as u128 - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    (num * pow_mod(den, p - 2, p) % p) as u64
}

/// `C(n, r) mod p` by Lucas's theorem: the product over base-`p` digits of
/// `C(n_i, r_i)`. Returns 0 when `r > n`. `p` must be prime.
pub fn lucas_binomial(mut n: u64, mut r: u64, p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::InvalidSpec(format!("{p} is not prime")));
    }
    if r > n {
        return Ok(0);
    }
    let mut acc = 1u64;
    while n > 0 || r > 0 {
        let (ni, ri) = (n % p, r % p);
        acc = ((acc as u128 * small_binomial(ni, ri, p) as u128) % p as u128) as u64;
        if acc == 0 {
            break;
        }
        n /= p;
        r /= p;
    }
    Ok(acc)
}
