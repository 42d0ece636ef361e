//! The constant-field tower `F_p ⊂ F_q ⊂ F_{q^d} ⊂ F_{q^{2d}}` attached to a
//! configuration `(q, 𝔭)`.
//!
//! `F_q` is cut out by the lexicographically-least monic irreducible over
//! `F_p` (when `q` is not prime), so runs reproduce across machines. The step
//! `F_q → F_{q^d}` is defined by `𝔭` itself: the generator of that step *is*
//! the root `ζ`, which makes `1, ζ, …, ζ^{d-1}` the working power basis. The
//! headroom field `F_{q^{2d}}` on top is again cut out by the least
//! irreducible (of degree 2).

use std::sync::Arc;

use crate::algebra::field::{FFElem, FiniteField};
use crate::algebra::poly::{self, Poly};
use crate::error::{Error, Result};

/// Constant fields, the distinguished root `ζ` of `𝔭`, and the arithmetic
/// data every higher module keys off: `q`, `d`, `𝔭`, and the constant-field
/// Frobenius `F: x ↦ x^q`.
#[derive(Debug)]
pub struct FieldTower {
    p: u64,
    e: u32,
    q: u64,
    fq: Arc<FiniteField>,
    fqd: Arc<FiniteField>,
    fq2d: Arc<FiniteField>,
    pbar: Poly,
    d: usize,
    zeta: FFElem,
}

impl FieldTower {
    /// Build the tower for base-field order `q` and monic irreducible `𝔭`.
    pub fn new(q: u64, pbar_text: &str) -> Result<Arc<FieldTower>> {
        let (p, e) = split_prime_power(q)?;
        let fp = FiniteField::prime(p)?;
        let fq = if e == 1 {
            fp
        } else {
            let m = poly::least_irreducible(&fp, e as usize);
            FiniteField::extension_unchecked(&fp, m.coeffs().to_vec(), "g")
        };
        let pbar = poly::parse_poly(&fq, pbar_text)?;
        Self::with_prime(q, &fq, pbar)
    }

    /// Variant taking an already-parsed `𝔭` over the supplied `F_q`.
    pub fn with_prime(q: u64, fq: &Arc<FiniteField>, pbar: Poly) -> Result<Arc<FieldTower>> {
        let (p, e) = split_prime_power(q)?;
        let d = match pbar.degree() {
            None | Some(0) => {
                return Err(Error::BadInput("prime must have degree >= 1".into()))
            }
            Some(d) => d,
        };
        if !pbar.is_monic(fq) {
            return Err(Error::NotMonic);
        }
        if !poly::is_irreducible(fq, &pbar) {
            return Err(Error::Reducible(poly::format_poly(fq, &pbar, "theta")));
        }
        let (fqd, zeta) = if d == 1 {
            // 𝔭 = θ - c: the root is c itself and no extension is needed.
            let c = fq.neg(&pbar.coeff(fq, 0));
            (Arc::clone(fq), c)
        } else {
            let ext = FiniteField::extension_unchecked(fq, pbar.coeffs().to_vec(), "z");
            let zeta = ext.generator()?;
            (ext, zeta)
        };
        let m2 = poly::least_irreducible(&fqd, 2);
        let fq2d = FiniteField::extension_unchecked(&fqd, m2.coeffs().to_vec(), "s");
        Ok(Arc::new(FieldTower {
            p,
            e,
            q,
            fq: Arc::clone(fq),
            fqd,
            fq2d,
            pbar,
            d,
            zeta,
        }))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// `|𝔭| = q^d`.
    pub fn p_abs(&self) -> u128 {
        (self.q as u128).pow(self.d as u32)
    }

    pub fn fq(&self) -> &Arc<FiniteField> {
        &self.fq
    }

    pub fn fqd(&self) -> &Arc<FiniteField> {
        &self.fqd
    }

    pub fn fq2d(&self) -> &Arc<FiniteField> {
        &self.fq2d
    }

    pub fn pbar(&self) -> &Poly {
        &self.pbar
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// The distinguished root `ζ = ζ_1` of `𝔭` in `F_{q^d}`.
    pub fn zeta(&self) -> &FFElem {
        &self.zeta
    }

    /// `ζ_k = ζ^{q^{k-1}}` for `k = 1, …, d`.
    pub fn zeta_k(&self, k: usize) -> Result<FFElem> {
        if k < 1 || k > self.d {
            return Err(Error::IndexOutOfRange(format!(
                "root index {k} outside 1..={}",
                self.d
            )));
        }
        let mut z = self.zeta.clone();
        for _ in 1..k {
            z = self.frob(&z);
        }
        Ok(z)
    }

    pub fn zetas(&self) -> Vec<FFElem> {
        (1..=self.d).map(|k| self.zeta_k(k).unwrap()).collect()
    }

    /// The constant-field Frobenius `F: x ↦ x^q` on `F_{q^d}`.
    pub fn frob(&self, x: &FFElem) -> FFElem {
        self.fqd.frobenius(x, self.q as u128)
    }

    /// Embed an `F_q` constant into `F_{q^d}`.
    pub fn embed_q_to_qd(&self, x: &FFElem) -> FFElem {
        self.fqd
            .embed_from(&self.fq, x)
            .expect("fq lies under fqd by construction")
    }

    /// Embed an `F_{q^d}` constant into the headroom field `F_{q^{2d}}`.
    pub fn embed_qd_to_2d(&self, x: &FFElem) -> FFElem {
        self.fq2d
            .embed_from(&self.fqd, x)
            .expect("fqd lies under fq2d by construction")
    }

    /// Lift an `F_q[θ]` polynomial to `F_{q^d}[θ]`.
    pub fn lift_poly(&self, a: &Poly) -> Poly {
        a.embed(&self.fq, &self.fqd).expect("tower embedding")
    }

    /// `𝔭` with coefficients in `F_{q^d}`.
    pub fn pbar_lifted(&self) -> Poly {
        self.lift_poly(&self.pbar)
    }
}

fn split_prime_power(q: u64) -> Result<(u64, u32)> {
    if q < 2 {
        return Err(Error::BadInput(format!("{q} is not a prime power")));
    }
    let mut p = 2;
    while p * p <= q {
        if q.is_multiple_of(p) {
            break;
        }
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let mut e = 0;
    let mut t = q;
    while t.is_multiple_of(p) {
        t /= p;
        e += 1;
    }
    if t != 1 {
        return Err(Error::BadInput(format!("{q} is not a prime power")));
    }
    Ok((p, e))
}
