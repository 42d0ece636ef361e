//! Finite fields built as explicit quotient towers.
//!
//! A [`FiniteField`] is either a prime field `F_p` or a quotient `B[w]/(m(w))`
//! of a polynomial ring over another [`FiniteField`] by a monic irreducible
//! `m`. Elements are stored flat as coefficient vectors over `F_p`; an element
//! of an extension of relative degree `r` over a base of absolute degree `k`
//! is read as `r` chunks of length `k`, the chunk `i` holding the coordinate
//! of `w^i`.
//!
//! All operations take the field descriptor as context, so elements stay
//! plain data. Values are immutable after construction and every operation is
//! a pure function.

use std::sync::Arc;

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Element of a finite field: flat coefficient vector over the prime field.
///
/// The owning [`FiniteField`] determines the length and interpretation; the
/// element itself carries no field reference.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FFElem(pub(crate) SmallVec<[u64; 2]>);

impl FFElem {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

/// A finite field in a quotient tower over `F_p`.
#[derive(Debug)]
pub struct FiniteField {
    p: u64,
    base: Option<Arc<FiniteField>>,
    /// Defining polynomial over `base`, ascending, monic; empty for a prime field.
    modulus: Vec<FFElem>,
    gen_name: String,
    abs_deg: usize,
    order: u128,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FiniteField {
    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Arc<FiniteField>> {
        if !is_prime(p) {
            return Err(Error::BadInput(format!("{p} is not prime")));
        }
        Ok(Arc::new(FiniteField {
            p,
            base: None,
            modulus: Vec::new(),
            gen_name: String::new(),
            abs_deg: 1,
            order: p as u128,
        }))
    }

    /// Extension `base[w]/(modulus)`. The modulus must be monic over `base`;
    /// irreducibility is the caller's burden (the tower constructor verifies
    /// it with an explicit test before calling this).
    pub(crate) fn extension_unchecked(
        base: &Arc<FiniteField>,
        modulus: Vec<FFElem>,
        gen_name: &str,
    ) -> Arc<FiniteField> {
        let rel = modulus.len() - 1;
        assert!(rel >= 1, "extension must have degree >= 1");
        assert!(
            base.eq_elem(modulus.last().unwrap(), &base.one()),
            "modulus must be monic"
        );
        let abs_deg = base.abs_deg * rel;
        let order = (0..abs_deg).fold(1u128, |acc, _| acc * base.p as u128);
        Arc::new(FiniteField {
            p: base.p,
            base: Some(Arc::clone(base)),
            modulus,
            gen_name: gen_name.to_string(),
            abs_deg,
            order,
        })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    /// Number of elements, `p^abs_deg`.
    pub fn order(&self) -> u128 {
        self.order
    }

    /// Degree over the prime field.
    pub fn abs_deg(&self) -> usize {
        self.abs_deg
    }

    /// Degree over the immediate base field (1 for the prime field itself).
    pub fn rel_deg(&self) -> usize {
        if self.modulus.is_empty() {
            1
        } else {
            self.modulus.len() - 1
        }
    }

    pub fn base(&self) -> Option<&Arc<FiniteField>> {
        self.base.as_ref()
    }

    /// Defining polynomial over the base, ascending. Empty for a prime field.
    pub fn modulus(&self) -> &[FFElem] {
        &self.modulus
    }

    pub fn gen_name(&self) -> &str {
        &self.gen_name
    }

    pub fn zero(&self) -> FFElem {
        FFElem(smallvec::smallvec![0; self.abs_deg])
    }

    pub fn one(&self) -> FFElem {
        self.from_u64(1)
    }

    /// The scalar `c mod p`, embedded from the prime subfield.
    pub fn from_u64(&self, c: u64) -> FFElem {
        let mut v = smallvec::smallvec![0; self.abs_deg];
        v[0] = c % self.p;
        FFElem(v)
    }

    /// Class of the extension variable `w`; errors on a prime field.
    pub fn generator(&self) -> Result<FFElem> {
        if self.base.is_none() {
            return Err(Error::BadInput(
                "prime field has no extension generator".into(),
            ));
        }
        let mut v: SmallVec<[u64; 2]> = smallvec::smallvec![0; self.abs_deg];
        v[self.base.as_ref().unwrap().abs_deg] = 1;
        Ok(FFElem(v))
    }

    pub fn is_zero(&self, a: &FFElem) -> bool {
        a.is_zero()
    }

    pub fn eq_elem(&self, a: &FFElem, b: &FFElem) -> bool {
        a.0 == b.0
    }

    pub fn add(&self, a: &FFElem, b: &FFElem) -> FFElem {
        debug_assert_eq!(a.0.len(), self.abs_deg);
        debug_assert_eq!(b.0.len(), self.abs_deg);
        FFElem(
            a.0.iter()
                .zip(b.0.iter())
                .map(|(&x, &y)| (x + y) % self.p)
                .collect(),
        )
    }

    pub fn neg(&self, a: &FFElem) -> FFElem {
        FFElem(a.0.iter().map(|&x| (self.p - x) % self.p).collect())
    }

    pub fn sub(&self, a: &FFElem, b: &FFElem) -> FFElem {
        FFElem(
            a.0.iter()
                .zip(b.0.iter())
                .map(|(&x, &y)| (x + self.p - y) % self.p)
                .collect(),
        )
    }

    pub fn mul(&self, a: &FFElem, b: &FFElem) -> FFElem {
        match &self.base {
            None => FFElem(smallvec::smallvec![a.0[0] * b.0[0] % self.p]),
            Some(base) => {
                let k = base.abs_deg;
                let r = self.rel_deg();
                // Schoolbook product of the chunk polynomials over the base.
                let mut acc: Vec<FFElem> = vec![base.zero(); 2 * r - 1];
                for i in 0..r {
                    let ai = self.chunk(a, i);
                    if ai.is_zero() {
                        continue;
                    }
                    for j in 0..r {
                        let bj = self.chunk(b, j);
                        if bj.is_zero() {
                            continue;
                        }
                        let prod = base.mul(&ai, &bj);
                        acc[i + j] = base.add(&acc[i + j], &prod);
                    }
                }
                // Reduce modulo the monic defining polynomial.
                for t in (r..acc.len()).rev() {
                    if acc[t].is_zero() {
                        continue;
                    }
                    let c = acc[t].clone();
                    acc[t] = base.zero();
                    for (s, m) in self.modulus.iter().take(r).enumerate() {
                        if m.is_zero() {
                            continue;
                        }
                        let sub = base.mul(&c, m);
                        acc[t - r + s] = base.sub(&acc[t - r + s], &sub);
                    }
                }
                let mut out: SmallVec<[u64; 2]> = smallvec::smallvec![0; self.abs_deg];
                for (i, chunk) in acc.iter().take(r).enumerate() {
                    out[i * k..(i + 1) * k].copy_from_slice(&chunk.0);
                }
                FFElem(out)
            }
        }
    }

    pub fn pow(&self, a: &FFElem, mut e: u128) -> FFElem {
        let mut result = self.one();
        let mut sq = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &sq);
            }
            e >>= 1;
            if e > 0 {
                sq = self.mul(&sq, &sq);
            }
        }
        result
    }

    pub fn inv(&self, a: &FFElem) -> Result<FFElem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.order - 2))
    }

    /// `x^q` for a supplied power `q` of the characteristic.
    pub fn frobenius(&self, a: &FFElem, q: u128) -> FFElem {
        self.pow(a, q)
    }

    /// Chunk `i` of `a` as an element of the base field.
    pub(crate) fn chunk(&self, a: &FFElem, i: usize) -> FFElem {
        let base = self.base.as_ref().expect("chunk on prime field");
        let k = base.abs_deg;
        FFElem(SmallVec::from_slice(&a.0[i * k..(i + 1) * k]))
    }

    /// Embed an element of the immediate base field.
    pub fn embed_base(&self, a: &FFElem) -> FFElem {
        let base = self.base.as_ref().expect("embed_base on prime field");
        debug_assert_eq!(a.0.len(), base.abs_deg);
        let mut out: SmallVec<[u64; 2]> = smallvec::smallvec![0; self.abs_deg];
        out[..base.abs_deg].copy_from_slice(&a.0);
        FFElem(out)
    }

    /// Embed an element from any field on the tower chain below this one.
    /// Walks the base chain; errors if `sub` is not on it.
    pub fn embed_from(&self, sub: &Arc<FiniteField>, a: &FFElem) -> Result<FFElem> {
        if std::ptr::eq(self, Arc::as_ptr(sub)) {
            return Ok(a.clone());
        }
        let base = self.base.as_ref().ok_or(Error::FieldMismatch)?;
        let below = base.embed_from(sub, a)?;
        Ok(self.embed_base(&below))
    }

    /// Inverse of [`embed_base`](Self::embed_base) when the element lies in
    /// the base field; `None` otherwise.
    pub fn project_base(&self, a: &FFElem) -> Option<FFElem> {
        let base = self.base.as_ref()?;
        if a.0[base.abs_deg..].iter().any(|&c| c != 0) {
            return None;
        }
        Some(FFElem(SmallVec::from_slice(&a.0[..base.abs_deg])))
    }

    /// All field elements in ascending counter order (the coordinate of
    /// the lowest basis vector cycles fastest). The order is the canonical
    /// enumeration used everywhere determinism matters.
    pub fn elements(self: &Arc<Self>) -> impl Iterator<Item = FFElem> {
        let field = Arc::clone(self);
        (0..field.order()).map(move |idx| field.decode(idx))
    }

    /// Element with counter index `idx` (base-`p` digits of `idx`).
    pub fn decode(&self, mut idx: u128) -> FFElem {
        let mut v: SmallVec<[u64; 2]> = smallvec::smallvec![0; self.abs_deg];
        for c in v.iter_mut() {
            *c = (idx % self.p as u128) as u64;
            idx /= self.p as u128;
        }
        FFElem(v)
    }

    pub fn encode(&self, a: &FFElem) -> u128 {
        let mut idx = 0u128;
        for &c in a.0.iter().rev() {
            idx = idx * self.p as u128 + c as u128;
        }
        idx
    }

    /// Render in the power basis of this field's generator; base-field
    /// coefficients are rendered recursively and parenthesised when compound.
    pub fn format(&self, a: &FFElem) -> String {
        match &self.base {
            None => format!("{}", a.0[0]),
            Some(base) => {
                let r = self.rel_deg();
                let mut terms = Vec::new();
                for i in (0..r).rev() {
                    let c = self.chunk(a, i);
                    if c.is_zero() {
                        continue;
                    }
                    let cs = base.format(&c);
                    let needs_parens = cs.contains('+') || cs.contains('-');
                    let coef = if needs_parens { format!("({cs})") } else { cs };
                    let term = match i {
                        0 => coef,
                        _ => {
                            let var = if i == 1 {
                                self.gen_name.clone()
                            } else {
                                format!("{}^{}", self.gen_name, i)
                            };
                            if base.eq_elem(&self.chunk(a, i), &base.one()) {
                                var
                            } else {
                                format!("{coef}*{var}")
                            }
                        }
                    };
                    terms.push(term);
                }
                if terms.is_empty() {
                    "0".to_string()
                } else {
                    terms.join("+")
                }
            }
        }
    }
}
