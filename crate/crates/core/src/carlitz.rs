//! The Carlitz module: twisted polynomials `𝔠_a`, evaluation on arbitrary
//! A-algebras, the cyclotomic polynomial generating the exact-order
//! `𝔭^{n+1}` torsion, residue enumeration, and the truncated Carlitz
//! exponential on the Laurent model.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::algebra::field::FiniteField;
use crate::algebra::poly::{self, Poly};
use crate::error::{Error, Result};
use crate::laurent::{LaurentApprox, LaurentCtx};

/// Twisted polynomial `Σ cᵢ τ^i` with coefficients in `A = F_q[θ]`;
/// evaluation applies `τ^i(X) = X^{q^i}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedPoly {
    coeffs: Vec<Poly>,
}

impl TwistedPoly {
    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn tau_degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }
}

/// Coefficients of `𝔠_a`, built by Horner composition over the base-θ
/// digits of `a`: `𝔠_{a_0 + θ b} = a_0 + 𝔠_θ ∘ 𝔠_b`.
pub fn carlitz_coeffs(fq: &Arc<FiniteField>, a: &Poly) -> TwistedPoly {
    let q = fq.order();
    if a.is_zero() {
        return TwistedPoly { coeffs: Vec::new() };
    }
    let digits = a.coeffs();
    let mut h: Vec<Poly> = vec![Poly::constant(fq, digits.last().unwrap().clone())];
    for digit in digits.iter().rev().skip(1) {
        // h := 𝔠_θ ∘ h + digit = τ·h + θ·h + digit
        let theta = Poly::x(fq);
        let mut next: Vec<Poly> = Vec::with_capacity(h.len() + 1);
        next.push(Poly::constant(fq, digit.clone()));
        next[0] = next[0].add(fq, &h[0].mul(fq, &theta));
        for hj in h.iter().skip(1) {
            next.push(hj.mul(fq, &theta));
        }
        next.push(Poly::zero());
        for (j, hj) in h.iter().enumerate() {
            let twisted = hj.pow_q(fq, q);
            next[j + 1] = next[j + 1].add(fq, &twisted);
        }
        h = next;
    }
    while h.last().is_some_and(Poly::is_zero) {
        h.pop();
    }
    TwistedPoly { coeffs: h }
}

/// An A-algebra: an additive group with an `A`-scalar action and q-power
/// Frobenius, exactly what evaluating twisted polynomials requires.
pub trait AAlgebra {
    type Elem: Clone;
    fn zero_elem(&self) -> Self::Elem;
    fn add_elem(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Action of `c ∈ A = F_q[θ]`.
    fn apoly_mul(&self, c: &Poly, x: &Self::Elem) -> Self::Elem;
    /// `x ↦ x^q` in the algebra.
    fn frobenius_q(&self, x: &Self::Elem) -> Self::Elem;
}

/// `𝔠_a(X)` for `X` in any A-algebra.
pub fn carlitz_eval<R: AAlgebra>(
    fq: &Arc<FiniteField>,
    a: &Poly,
    ring: &R,
    x: &R::Elem,
) -> R::Elem {
    let tw = carlitz_coeffs(fq, a);
    let mut acc = ring.zero_elem();
    let mut pw = x.clone();
    for (i, c) in tw.coeffs.iter().enumerate() {
        if i > 0 {
            pw = ring.frobenius_q(&pw);
        }
        if !c.is_zero() {
            acc = ring.add_elem(&acc, &ring.apoly_mul(c, &pw));
        }
    }
    acc
}

/// `A` acting on itself.
pub struct ARing<'a>(pub &'a Arc<FiniteField>);

impl AAlgebra for ARing<'_> {
    type Elem = Poly;
    fn zero_elem(&self) -> Poly {
        Poly::zero()
    }
    fn add_elem(&self, a: &Poly, b: &Poly) -> Poly {
        a.add(self.0, b)
    }
    fn apoly_mul(&self, c: &Poly, x: &Poly) -> Poly {
        c.mul(self.0, x)
    }
    fn frobenius_q(&self, x: &Poly) -> Poly {
        x.pow_q(self.0, self.0.order())
    }
}

/// Polynomials in `X` over `A`, ascending in `X`. Used for the symbolic
/// torsion polynomials `𝔠_a(X)` and the cyclotomic quotient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XPoly {
    pub coeffs: Vec<Poly>,
}

impl XPoly {
    pub fn zero() -> XPoly {
        XPoly { coeffs: Vec::new() }
    }

    pub fn normalize(mut self) -> XPoly {
        while self.coeffs.last().is_some_and(Poly::is_zero) {
            self.coeffs.pop();
        }
        self
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, fq: &Arc<FiniteField>, other: &XPoly) -> XPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|k| {
                let a = self.coeffs.get(k).cloned().unwrap_or_else(Poly::zero);
                let b = other.coeffs.get(k).cloned().unwrap_or_else(Poly::zero);
                a.add(fq, &b)
            })
            .collect();
        XPoly { coeffs }.normalize()
    }

    pub fn mul(&self, fq: &Arc<FiniteField>, other: &XPoly) -> XPoly {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return XPoly::zero();
        }
        let mut coeffs = vec![Poly::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].add(fq, &a.mul(fq, b));
            }
        }
        XPoly { coeffs }.normalize()
    }

    /// Division by a divisor monic in `X`; stays inside `A[X]`.
    pub fn divrem_monic(&self, fq: &Arc<FiniteField>, divisor: &XPoly) -> (XPoly, XPoly) {
        let dd = divisor.degree().expect("nonzero divisor");
        assert!(
            divisor.coeffs[dd].degree() == Some(0)
                && fq.eq_elem(&divisor.coeffs[dd].coeff(fq, 0), &fq.one()),
            "divisor must be monic in X"
        );
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (XPoly::zero(), self.clone().normalize());
        }
        let mut quot = vec![Poly::zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            if rem[k].is_zero() {
                continue;
            }
            let q = rem[k].clone();
            for (s, m) in divisor.coeffs.iter().enumerate() {
                if m.is_zero() {
                    continue;
                }
                let sub = q.mul(fq, m);
                rem[k - dd + s] = rem[k - dd + s].sub(fq, &sub);
            }
            quot[k - dd] = q;
        }
        (
            XPoly { coeffs: quot }.normalize(),
            XPoly { coeffs: rem }.normalize(),
        )
    }
}

/// `A[X]` as an A-algebra (`X` a transparent variable).
pub struct XRing<'a>(pub &'a Arc<FiniteField>);

impl AAlgebra for XRing<'_> {
    type Elem = XPoly;
    fn zero_elem(&self) -> XPoly {
        XPoly::zero()
    }
    fn add_elem(&self, a: &XPoly, b: &XPoly) -> XPoly {
        a.add(self.0, b)
    }
    fn apoly_mul(&self, c: &Poly, x: &XPoly) -> XPoly {
        XPoly {
            coeffs: x.coeffs.iter().map(|e| e.mul(self.0, c)).collect(),
        }
        .normalize()
    }
    fn frobenius_q(&self, x: &XPoly) -> XPoly {
        // (Σ cᵢ X^i)^q = Σ cᵢ^q X^{iq} in characteristic p
        let q = self.0.order() as usize;
        if x.coeffs.is_empty() {
            return XPoly::zero();
        }
        let mut coeffs = vec![Poly::zero(); (x.coeffs.len() - 1) * q + 1];
        for (i, c) in x.coeffs.iter().enumerate() {
            if !c.is_zero() {
                coeffs[i * q] = c.pow_q(self.0, self.0.order());
            }
        }
        XPoly { coeffs }.normalize()
    }
}

/// `𝔠_a(X)` as a sparse polynomial in `X`.
pub fn carlitz_xpoly(fq: &Arc<FiniteField>, a: &Poly) -> XPoly {
    let tw = carlitz_coeffs(fq, a);
    let q = fq.order() as usize;
    let deg = match tw.tau_degree() {
        None => return XPoly::zero(),
        Some(d) => d,
    };
    let mut coeffs = vec![Poly::zero(); q.pow(deg as u32) + 1];
    let mut qe = 1usize;
    for (i, c) in tw.coeffs.iter().enumerate() {
        coeffs[qe] = c.clone();
        if i < deg {
            qe *= q;
        }
    }
    XPoly { coeffs }.normalize()
}

/// The defining data of the level-n torsion: `Φ = 𝔠_{𝔭^{n+1}}(X) / 𝔠_{𝔭^n}(X)`
/// of degree `D = q^{dn}(q^d - 1)`, monic in `X` with coefficients in `A`.
#[derive(Debug)]
pub struct CyclotomicData {
    pub pbar: Poly,
    pub level: usize,
    pub phi: XPoly,
    pub degree: usize,
}

type MemoKey = (u64, usize, Vec<u128>, usize);

fn memo() -> &'static Mutex<HashMap<MemoKey, Arc<CyclotomicData>>> {
    static MEMO: OnceLock<Mutex<HashMap<MemoKey, Arc<CyclotomicData>>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Build (or fetch from the per-process memo table) the cyclotomic data for
/// `(𝔭, n)`. Rejects non-monic or reducible `𝔭`.
pub fn carlitz_cyclotomic(
    fq: &Arc<FiniteField>,
    pbar: &Poly,
    n: usize,
) -> Result<Arc<CyclotomicData>> {
    if !pbar.is_monic(fq) {
        return Err(Error::NotMonic);
    }
    if !poly::is_irreducible(fq, pbar) {
        return Err(Error::Reducible(poly::format_poly(fq, pbar, "theta")));
    }
    let key: MemoKey = (
        fq.characteristic(),
        fq.abs_deg(),
        pbar.coeffs().iter().map(|c| fq.encode(c)).collect(),
        n,
    );
    if let Some(hit) = memo().lock().unwrap().get(&key) {
        return Ok(Arc::clone(hit));
    }
    let d = pbar.degree().unwrap();
    let q = fq.order() as usize;
    let pn = pbar.pow(fq, n as u64);
    let pn1 = pn.mul(fq, pbar);
    let big = carlitz_xpoly(fq, &pn1);
    let small = carlitz_xpoly(fq, &pn);
    let (phi, rem) = big.divrem_monic(fq, &small);
    assert!(
        rem.coeffs.is_empty(),
        "torsion-module structure falsified: c_(p^(n+1)) not divisible by c_(p^n)"
    );
    let degree = q.pow((d * n) as u32) * (q.pow(d as u32) - 1);
    assert_eq!(phi.degree(), Some(degree), "cyclotomic degree mismatch");
    let data = Arc::new(CyclotomicData {
        pbar: pbar.clone(),
        level: n,
        phi,
        degree,
    });
    memo().lock().unwrap().insert(key, Arc::clone(&data));
    Ok(data)
}

/// Canonical representatives of `A/𝔭^{n+1}A` (degree `< d(n+1)`, counter
/// order), optionally restricted to the unit group.
pub fn residue_enum(
    fq: &Arc<FiniteField>,
    pbar: &Poly,
    n: usize,
    units_only: bool,
) -> Vec<Poly> {
    let d = pbar.degree().expect("prime has positive degree");
    poly::enumerate_polys(fq, d * (n + 1))
        .filter(|a| !units_only || !a.rem(fq, pbar).is_zero())
        .collect()
}

/// `D_j = Π_{i<j} (θ^{q^j} - θ^{q^i})`, the Carlitz factorials.
pub fn carlitz_d(fq: &Arc<FiniteField>, j: usize) -> Poly {
    let q = fq.order();
    let mut d = Poly::one(fq);
    for k in 1..=j {
        // D_k = D_{k-1}^q · (θ^{q^k} - θ)
        let mut qe = 1u64;
        for _ in 0..k {
            qe = qe
                .checked_mul(q as u64)
                .expect("q^k overflows; truncation level too deep");
        }
        let lead = Poly::monomial(fq, fq.one(), qe as usize);
        let factor = lead.sub(fq, &Poly::x(fq));
        d = d.pow_q(fq, q).mul(fq, &factor);
    }
    d
}

/// Truncated Carlitz exponential `Σ_{j=0}^{J} z^{q^j}/D_j` on the Laurent
/// model. When `force_j` is `None` the truncation level is chosen
/// automatically: term `j` has v-valuation at least `q^j(val(z) + (q-1)j)`,
/// and `J` is the least index past which that bound exceeds the target
/// floor and is increasing. Returns the value and the `J` used.
pub fn exp_c_truncated(
    ctx: &LaurentCtx,
    z: &LaurentApprox,
    target_floor: i64,
    force_j: Option<usize>,
) -> Result<(LaurentApprox, usize)> {
    let q = ctx.tower.q() as i64;
    let qm1 = ctx.qm1();
    let zv = z.val_lower_bound();
    let term_bound = |j: i64| -> i64 {
        let mut qj = 1i64;
        for _ in 0..j {
            qj = qj.saturating_mul(q);
        }
        qj.saturating_mul(zv + qm1 * j)
    };
    let auto_j = {
        let mut j = 0i64;
        while !(zv + qm1 * j > 0 && term_bound(j) > target_floor) {
            j += 1;
            if j > 64 {
                return Err(Error::PrecisionShortfall(
                    "exponential truncation level exceeds supported range".into(),
                ));
            }
        }
        // all terms beyond j-1 are below the floor
        (j - 1).max(0) as usize
    };
    let big_j = match force_j {
        Some(j) => {
            if j < auto_j {
                return Err(Error::PrecisionShortfall(format!(
                    "J = {j} insufficient for floor {target_floor}; need J >= {auto_j}"
                )));
            }
            j
        }
        None => auto_j,
    };
    let fq = ctx.tower.fq().clone();
    let mut acc = ctx.zero();
    let mut zq = z.clone();
    for j in 0..=big_j {
        if j > 0 {
            zq = ctx.frobenius_q(&zq);
        }
        let dj = ctx.from_apoly(&carlitz_d(&fq, j));
        let term = ctx.div(&zq, &dj)?;
        acc = ctx.add(&acc, &term);
    }
    Ok((acc, big_j))
}
