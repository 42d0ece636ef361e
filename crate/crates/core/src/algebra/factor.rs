//! Univariate factorization over finite fields: squarefree decomposition,
//! distinct-degree splitting, and equal-degree (Cantor-Zassenhaus) splitting
//! with a trace-map variant in characteristic 2.
//!
//! The only randomized step is the equal-degree split; it draws from a local
//! xorshift generator seeded deterministically (or by the caller), and the
//! seed is recorded in the output so certificates replay. Factor lists are
//! sorted canonically, so the output does not depend on the seed at all.

use std::sync::Arc;

use crate::algebra::field::{FFElem, FiniteField};
use crate::algebra::poly::{self, Poly};
use crate::error::{Error, Result};

/// A complete factorization `g = unit * Π factorᵢ^multᵢ`.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub unit: FFElem,
    pub factors: Vec<(Poly, usize)>,
    pub seed: u64,
}

impl Factorization {
    /// Re-multiply and check irreducibility of every factor.
    pub fn verify(&self, field: &FiniteField, input: &Poly) -> bool {
        let mut acc = Poly::constant(field, self.unit.clone());
        for (f, m) in &self.factors {
            if !f.is_monic(field) || !poly::is_irreducible(field, f) {
                return false;
            }
            acc = acc.mul(field, &f.pow(field, *m as u64));
        }
        acc == *input
    }
}

struct XorShift(u64);

impl XorShift {
    fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x.wrapping_mul(0x2545f4914f6cdd1d)
    }
}

/// Deterministic default seed derived from the input polynomial.
pub fn default_seed(field: &FiniteField, g: &Poly) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    let mut mix = |v: u64| {
        h ^= v;
        h = h.wrapping_mul(0x100000001b3);
    };
    mix(field.characteristic());
    mix(field.abs_deg() as u64);
    for c in g.coeffs() {
        mix(field.encode(c) as u64);
        mix((field.encode(c) >> 64) as u64);
    }
    h
}

/// Factor a nonzero polynomial into monic irreducibles with multiplicities.
pub fn factor_poly(field: &Arc<FiniteField>, g: &Poly, seed: Option<u64>) -> Result<Factorization> {
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let seed = seed.unwrap_or_else(|| default_seed(field, g));
    let unit = g.leading().unwrap().clone();
    let monic = g.make_monic(field);
    let mut rng = XorShift(seed | 1);
    let mut factors: Vec<(Poly, usize)> = Vec::new();
    if monic.degree() != Some(0) {
        for (sq_part, mult) in squarefree_parts(field, &monic) {
            for (ddeg_part, fdeg) in distinct_degree(field, &sq_part) {
                for irr in equal_degree(field, &ddeg_part, fdeg, &mut rng) {
                    factors.push((irr, mult));
                }
            }
        }
    }
    factors.sort_by_key(|(f, _)| {
        (
            f.degree().unwrap_or(0),
            f.coeffs().iter().map(|c| field.encode(c)).collect::<Vec<_>>(),
        )
    });
    // Merge any repeats produced by separate squarefree parts.
    let mut merged: Vec<(Poly, usize)> = Vec::new();
    for (f, m) in factors {
        match merged.last_mut() {
            Some((lf, lm)) if *lf == f => *lm += m,
            _ => merged.push((f, m)),
        }
    }
    Ok(Factorization {
        unit,
        factors: merged,
        seed,
    })
}

/// Squarefree decomposition of a monic polynomial in characteristic p;
/// returns pairs (squarefree part, multiplicity).
fn squarefree_parts(field: &Arc<FiniteField>, f: &Poly) -> Vec<(Poly, usize)> {
    let p = field.characteristic() as usize;
    let mut out = Vec::new();
    let deriv = f.derivative(field);
    if deriv.is_zero() {
        // f = h(x^p); descend on the p-th root.
        let root = pth_root(field, f);
        for (g, m) in squarefree_parts(field, &root) {
            out.push((g, m * p));
        }
        return out;
    }
    let mut c = f.gcd(field, &deriv);
    let mut w = f.div_exact(field, &c);
    let mut i = 1usize;
    while w.degree() != Some(0) {
        let y = w.gcd(field, &c);
        let fac = w.div_exact(field, &y);
        if fac.degree() != Some(0) {
            out.push((fac, i));
        }
        w = y;
        c = c.div_exact(field, &w);
        i += 1;
    }
    if c.degree() != Some(0) {
        let root = pth_root(field, &c);
        for (g, m) in squarefree_parts(field, &root) {
            out.push((g, m * p));
        }
    }
    out
}

/// p-th root of a polynomial of the form `h(x^p)` over `F_{p^k}`:
/// coefficient roots are `c ↦ c^{p^{k-1}}`.
fn pth_root(field: &FiniteField, f: &Poly) -> Poly {
    let p = field.characteristic() as usize;
    let k = field.abs_deg() as u32;
    let root_exp = (field.characteristic() as u128).pow(k - 1);
    let mut coeffs = Vec::new();
    for (i, c) in f.coeffs().iter().enumerate() {
        if i % p == 0 {
            coeffs.push(field.pow(c, root_exp));
        } else {
            assert!(c.is_zero(), "polynomial with zero derivative must live in x^p");
        }
    }
    Poly::from_coeffs(field, coeffs)
}

/// Split a monic squarefree polynomial into products of irreducibles of
/// equal degree; returns pairs (product, factor degree).
fn distinct_degree(field: &Arc<FiniteField>, f: &Poly) -> Vec<(Poly, usize)> {
    let q = field.order();
    let mut out = Vec::new();
    let mut rest = f.clone();
    let x = Poly::x(field);
    let mut h = x.rem(field, &rest);
    let mut k = 0usize;
    while rest.degree().is_some_and(|d| d >= 2 * (k + 1)) {
        k += 1;
        h = h.powmod(field, q, &rest);
        let g = h.sub(field, &x).gcd(field, &rest);
        if g.degree() != Some(0) {
            out.push((g.clone(), k));
            rest = rest.div_exact(field, &g);
            h = h.rem(field, &rest);
        }
    }
    if rest.degree().is_some_and(|d| d > 0) {
        let d = rest.degree().unwrap();
        out.push((rest, d));
    }
    out
}

/// Cantor-Zassenhaus equal-degree splitting: `f` is monic squarefree with
/// all irreducible factors of degree `k`.
fn equal_degree(
    field: &Arc<FiniteField>,
    f: &Poly,
    k: usize,
    rng: &mut XorShift,
) -> Vec<Poly> {
    let deg = f.degree().unwrap();
    if deg == k {
        return vec![f.clone()];
    }
    let q = field.order();
    let split = loop {
        let u = random_poly(field, deg, rng);
        if u.degree().is_none_or(|d| d == 0) {
            continue;
        }
        let v = if field.characteristic() == 2 {
            // Absolute trace map down to F_2: Σ u^{2^i}, i < s·k where q = 2^s.
            let bits = field.abs_deg() * k;
            let mut acc = u.rem(field, f);
            let mut pw = u.rem(field, f);
            for _ in 1..bits {
                pw = pw.mul(field, &pw).rem(field, f);
                acc = acc.add(field, &pw);
            }
            acc
        } else {
            let exp = (pow_u128(q, k as u32) - 1) / 2;
            let w = u.powmod(field, exp, f);
            w.sub(field, &Poly::one(field))
        };
        let g = v.gcd(field, f);
        if let Some(d) = g.degree() {
            if d > 0 && d < deg {
                break g;
            }
        }
    };
    let mut out = equal_degree(field, &split, k, rng);
    out.extend(equal_degree(field, &f.div_exact(field, &split), k, rng));
    out
}

fn pow_u128(base: u128, exp: u32) -> u128 {
    base.checked_pow(exp)
        .expect("field order power overflows u128; factor degree out of supported range")
}

fn random_poly(field: &Arc<FiniteField>, len: usize, rng: &mut XorShift) -> Poly {
    let coeffs = (0..len)
        .map(|_| field.decode(rng.next() as u128 % field.order()))
        .collect();
    Poly::from_coeffs(field, coeffs)
}
