//! Hyperderivatives in characteristic p and multi-index bookkeeping.
//!
//! The n-th hyperderivative of `Σ a_k θ^k` is `Σ C(k,n) a_k θ^{k-n}`, the
//! characteristic-p stand-in for `(1/n!) dⁿ/dθⁿ`; binomials are reduced
//! mod p by Lucas' theorem rather than computed as big integers.

use std::sync::Arc;

use crate::algebra::field::{FFElem, FiniteField};
use crate::algebra::poly::Poly;
use crate::error::{Error, Result};

/// `C(n, k) mod p` by Lucas: the product of digit binomials base p.
pub fn binom_mod_p(mut n: u64, mut k: u64, p: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut acc = 1u64;
    while n > 0 || k > 0 {
        let (nd, kd) = (n % p, k % p);
        acc = acc * binom_small(nd, kd) % p;
        if acc == 0 {
            return 0;
        }
        n /= p;
        k /= p;
    }
    acc
}

fn binom_small(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut acc = 1u128;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// j-th hyperderivative of a polynomial.
pub fn hyperderivative(field: &FiniteField, a: &Poly, j: usize) -> Poly {
    if j == 0 {
        return a.clone();
    }
    let p = field.characteristic();
    let coeffs = a
        .coeffs()
        .iter()
        .enumerate()
        .skip(j)
        .map(|(k, c)| {
            let b = binom_mod_p(k as u64, j as u64, p);
            field.mul(&field.from_u64(b), c)
        })
        .collect();
    Poly::from_coeffs(field, coeffs)
}

/// The values `a^{(0)}(z), …, a^{(n)}(z)`: the Taylor coefficients of `a`
/// about `θ = z`. Coefficients of `a` live in `sub`, the point `z` in
/// `target` further up the tower.
pub fn hyper_expand(
    sub: &Arc<FiniteField>,
    target: &Arc<FiniteField>,
    a: &Poly,
    z: &FFElem,
    n: usize,
) -> Result<Vec<FFElem>> {
    let mut out = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let d = hyperderivative(sub, a, j).embed(sub, target)?;
        out.push(d.eval(target, z));
    }
    Ok(out)
}

/// A d-tuple of base-q digits `(e_1, …, e_d)` with `0 ≤ e_i ≤ q-1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    digits: Vec<u64>,
    q: u64,
}

impl MultiIndex {
    pub fn new(digits: Vec<u64>, q: u64) -> Result<MultiIndex> {
        if digits.iter().any(|&e| e > q - 1) {
            return Err(Error::IndexOutOfRange(format!(
                "multi-index digit exceeds q-1 = {}",
                q - 1
            )));
        }
        Ok(MultiIndex { digits, q })
    }

    pub fn zero(d: usize, q: u64) -> MultiIndex {
        MultiIndex {
            digits: vec![0; d],
            q,
        }
    }

    pub fn all_max(d: usize, q: u64) -> MultiIndex {
        MultiIndex {
            digits: vec![q - 1; d],
            q,
        }
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// Componentwise `self ≤ other`.
    pub fn le(&self, other: &MultiIndex) -> bool {
        self.digits
            .iter()
            .zip(other.digits.iter())
            .all(|(a, b)| a <= b)
    }

    /// `Σ e_i q^{i-1}`: the exponent of the associated monomial character.
    pub fn character_exponent(&self) -> u64 {
        let mut acc = 0u64;
        for &e in self.digits.iter().rev() {
            acc = acc * self.q + e;
        }
        acc
    }

    /// Index within the counter enumeration of all d-tuples (first digit
    /// fastest); coincides with [`character_exponent`](Self::character_exponent).
    pub fn counter_index(&self) -> u64 {
        self.character_exponent()
    }

    /// All multi-indices of length `d` in counter order.
    pub fn enumerate_all(d: usize, q: u64) -> Vec<MultiIndex> {
        let total = (q as u128).pow(d as u32);
        (0..total)
            .map(|mut t| {
                let digits = (0..d)
                    .map(|_| {
                        let e = (t % q as u128) as u64;
                        t /= q as u128;
                        e
                    })
                    .collect();
                MultiIndex { digits, q }
            })
            .collect()
    }
}
