//! Exact arithmetic in the torsion field `K_n(ζ) = K(ζ)[X]/(Φ)`.
//!
//! Elements are coordinate vectors in the power basis `1, x_n, …, x_n^{D-1}`
//! over `K(ζ) = F_{q^d}(θ)`, stored with one cleared common denominator to
//! bound rational-function blowup; the canonical form re-normalizes the gcd
//! after every multiplication. The generator `x_n` is the residue class of
//! `X`: an abstract root of `Φ`, not a pinned analytic value — every
//! statement verified against it is Galois-stable, and the analytic layer
//! pins one embedding when cross-checking.

use std::sync::Arc;

use crate::algebra::field::FFElem;
use crate::algebra::poly::Poly;
use crate::algebra::ratfun::RatFun;
use crate::algebra::tower::FieldTower;
use crate::carlitz::{self, AAlgebra, CyclotomicData};
use crate::error::{Error, Result};
use crate::linalg;

/// Descriptor of `K_n(ζ)`; immutable and shareable.
#[derive(Debug)]
pub struct TorsionField {
    tower: Arc<FieldTower>,
    cyc: Arc<CyclotomicData>,
    level: usize,
    dim: usize,
    /// Φ with coefficients lifted into `F_{q^d}[θ]`, ascending in `X`.
    phi: Vec<Poly>,
}

/// Element of `K_n(ζ)`: `(Σ_k coeffs[k] · x_n^k) / den` with `coeffs[k]`
/// and `den` in `F_{q^d}[θ]`, `den` monic, and the joint content trivial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsionElem {
    coeffs: Vec<Poly>,
    den: Poly,
}

/// Pre-expanded Galois substitution: the powers of `σ_a(x_n) = 𝔠_a(x_n)`.
#[derive(Debug, Clone)]
pub struct SigmaMap {
    pub residue: Poly,
    powers: Vec<TorsionElem>,
}

/// Pre-expanded tower embedding: the powers of `𝔠_𝔭(x_{n+1})`.
#[derive(Debug, Clone)]
pub struct TowerEmbedding {
    powers: Vec<TorsionElem>,
}

impl TorsionField {
    pub fn new(tower: &Arc<FieldTower>, level: usize) -> Result<Arc<TorsionField>> {
        let cyc = carlitz::carlitz_cyclotomic(tower.fq(), tower.pbar(), level)?;
        let dim = cyc.degree;
        let phi = cyc
            .phi
            .coeffs
            .iter()
            .map(|c| tower.lift_poly(c))
            .collect();
        Ok(Arc::new(TorsionField {
            tower: Arc::clone(tower),
            cyc,
            level,
            dim,
            phi,
        }))
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    pub fn cyclotomic(&self) -> &Arc<CyclotomicData> {
        &self.cyc
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// `D = [K_n(ζ) : K(ζ)] = q^{dn}(q^d - 1)`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    fn fqd(&self) -> &Arc<crate::algebra::field::FiniteField> {
        self.tower.fqd()
    }

    fn normalize(&self, coeffs: &mut Vec<Poly>, den: &mut Poly) {
        let fqd = self.fqd();
        coeffs.resize(self.dim, Poly::zero());
        if coeffs.iter().all(Poly::is_zero) {
            *den = Poly::one(fqd);
            return;
        }
        let mut g = den.clone();
        for c in coeffs.iter() {
            if g.degree() == Some(0) {
                break;
            }
            if !c.is_zero() {
                g = g.gcd(fqd, c);
            }
        }
        if g.degree().is_some_and(|d| d > 0) {
            for c in coeffs.iter_mut() {
                if !c.is_zero() {
                    *c = c.div_exact(fqd, &g);
                }
            }
            *den = den.div_exact(fqd, &g);
        }
        let lc = den.leading().expect("nonzero denominator").clone();
        if !fqd.eq_elem(&lc, &fqd.one()) {
            let inv = fqd.inv(&lc).unwrap();
            for c in coeffs.iter_mut() {
                *c = c.scale(fqd, &inv);
            }
            *den = den.scale(fqd, &inv);
        }
    }

    fn make(&self, mut coeffs: Vec<Poly>, mut den: Poly) -> TorsionElem {
        assert!(!den.is_zero(), "zero denominator");
        self.normalize(&mut coeffs, &mut den);
        TorsionElem { coeffs, den }
    }

    pub fn zero(&self) -> TorsionElem {
        self.make(vec![Poly::zero(); self.dim], Poly::one(self.fqd()))
    }

    pub fn one(&self) -> TorsionElem {
        let mut coeffs = vec![Poly::zero(); self.dim];
        coeffs[0] = Poly::one(self.fqd());
        self.make(coeffs, Poly::one(self.fqd()))
    }

    /// The generator `x_n` (residue class of `X`).
    pub fn x_gen(&self) -> TorsionElem {
        if self.dim == 1 {
            // Φ = X + c is linear; x_n = -c lives in K(ζ) itself.
            let c = self.phi[0].neg(self.fqd());
            return self.make(vec![c], Poly::one(self.fqd()));
        }
        let mut coeffs = vec![Poly::zero(); self.dim];
        coeffs[1] = Poly::one(self.fqd());
        self.make(coeffs, Poly::one(self.fqd()))
    }

    pub fn from_ratfun(&self, r: &RatFun) -> TorsionElem {
        let mut coeffs = vec![Poly::zero(); self.dim];
        coeffs[0] = r.num().clone();
        self.make(coeffs, r.den().clone())
    }

    pub fn from_poly(&self, p: &Poly) -> TorsionElem {
        let mut coeffs = vec![Poly::zero(); self.dim];
        coeffs[0] = p.clone();
        self.make(coeffs, Poly::one(self.fqd()))
    }

    /// Scalar from the constant field `F_{q^d}`.
    pub fn from_const(&self, c: &FFElem) -> TorsionElem {
        self.from_poly(&Poly::constant(self.fqd(), c.clone()))
    }

    pub fn is_zero(&self, y: &TorsionElem) -> bool {
        y.coeffs.iter().all(Poly::is_zero)
    }

    pub fn add(&self, a: &TorsionElem, b: &TorsionElem) -> TorsionElem {
        let fqd = self.fqd();
        if a.den == b.den {
            let coeffs = a
                .coeffs
                .iter()
                .zip(b.coeffs.iter())
                .map(|(x, y)| x.add(fqd, y))
                .collect();
            return self.make(coeffs, a.den.clone());
        }
        let coeffs = a
            .coeffs
            .iter()
            .zip(b.coeffs.iter())
            .map(|(x, y)| {
                x.mul(fqd, &b.den).add(fqd, &y.mul(fqd, &a.den))
            })
            .collect();
        self.make(coeffs, a.den.mul(fqd, &b.den))
    }

    pub fn neg(&self, a: &TorsionElem) -> TorsionElem {
        let fqd = self.fqd();
        TorsionElem {
            coeffs: a.coeffs.iter().map(|c| c.neg(fqd)).collect(),
            den: a.den.clone(),
        }
    }

    pub fn sub(&self, a: &TorsionElem, b: &TorsionElem) -> TorsionElem {
        self.add(a, &self.neg(b))
    }

    /// Reduce an X-polynomial of any degree modulo the monic `Φ`.
    fn reduce_mod_phi(&self, mut acc: Vec<Poly>) -> Vec<Poly> {
        let fqd = self.fqd();
        let d = self.dim;
        for k in (d..acc.len()).rev() {
            if acc[k].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut acc[k], Poly::zero());
            for (s, m) in self.phi.iter().take(d).enumerate() {
                if m.is_zero() {
                    continue;
                }
                let sub = c.mul(fqd, m);
                acc[k - d + s] = acc[k - d + s].sub(fqd, &sub);
            }
        }
        acc.truncate(d);
        acc
    }

    pub fn mul(&self, a: &TorsionElem, b: &TorsionElem) -> TorsionElem {
        let fqd = self.fqd();
        let mut conv = vec![Poly::zero(); 2 * self.dim - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                conv[i + j] = conv[i + j].add(fqd, &x.mul(fqd, y));
            }
        }
        let coeffs = self.reduce_mod_phi(conv);
        self.make(coeffs, a.den.mul(fqd, &b.den))
    }

    /// Multiply by a polynomial scalar from `F_{q^d}[θ]`.
    pub fn scale_poly(&self, a: &TorsionElem, s: &Poly) -> TorsionElem {
        let fqd = self.fqd();
        let coeffs = a.coeffs.iter().map(|c| c.mul(fqd, s)).collect();
        self.make(coeffs, a.den.clone())
    }

    pub fn scale_ratfun(&self, a: &TorsionElem, s: &RatFun) -> TorsionElem {
        let fqd = self.fqd();
        let coeffs = a.coeffs.iter().map(|c| c.mul(fqd, s.num())).collect();
        self.make(coeffs, a.den.mul(fqd, s.den()))
    }

    pub fn pow(&self, a: &TorsionElem, mut e: u64) -> TorsionElem {
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

    /// Inverse via the extended Euclidean algorithm against `Φ` over `K(ζ)`.
    /// A non-invertible nonzero element would witness a reducible `Φ`.
    pub fn inv(&self, a: &TorsionElem) -> Result<TorsionElem> {
        let fqd = self.fqd();
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        // Work over the fraction field with Vec<RatFun> X-polynomials.
        let to_rx = |coeffs: &[Poly]| -> Vec<RatFun> {
            coeffs
                .iter()
                .map(|c| RatFun::from_poly(fqd, c.clone()))
                .collect()
        };
        let rx_norm = |mut v: Vec<RatFun>| -> Vec<RatFun> {
            while v.last().is_some_and(RatFun::is_zero) {
                v.pop();
            }
            v
        };
        let rx_deg = |v: &[RatFun]| -> Option<usize> { v.len().checked_sub(1) };
        let rx_sub = |x: &[RatFun], y: &[RatFun]| -> Vec<RatFun> {
            let n = x.len().max(y.len());
            let zero = RatFun::zero(fqd);
            rx_norm(
                (0..n)
                    .map(|k| {
                        let a = x.get(k).unwrap_or(&zero);
                        let b = y.get(k).unwrap_or(&zero);
                        a.sub(fqd, b)
                    })
                    .collect(),
            )
        };
        let rx_mul = |x: &[RatFun], y: &[RatFun]| -> Vec<RatFun> {
            if x.is_empty() || y.is_empty() {
                return Vec::new();
            }
            let mut out = vec![RatFun::zero(fqd); x.len() + y.len() - 1];
            for (i, a) in x.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (j, b) in y.iter().enumerate() {
                    if b.is_zero() {
                        continue;
                    }
                    out[i + j] = out[i + j].add(fqd, &a.mul(fqd, b));
                }
            }
            rx_norm(out)
        };
        let rx_divrem = |x: &[RatFun], y: &[RatFun]| -> (Vec<RatFun>, Vec<RatFun>) {
            let dy = rx_deg(y).expect("division by zero X-polynomial");
            let lc_inv = y.last().unwrap().inv(fqd).unwrap();
            let mut rem: Vec<RatFun> = x.to_vec();
            if rem.len() <= dy {
                return (Vec::new(), rx_norm(rem));
            }
            let mut quot = vec![RatFun::zero(fqd); rem.len() - dy];
            for k in (dy..rem.len()).rev() {
                if rem[k].is_zero() {
                    continue;
                }
                let qc = rem[k].mul(fqd, &lc_inv);
                for (s, m) in y.iter().enumerate() {
                    if m.is_zero() {
                        continue;
                    }
                    let sub = qc.mul(fqd, m);
                    rem[k - dy + s] = rem[k - dy + s].sub(fqd, &sub);
                }
                quot[k - dy] = qc;
            }
            (rx_norm(quot), rx_norm(rem))
        };

        let phi_rx: Vec<RatFun> = self
            .phi
            .iter()
            .map(|c| RatFun::from_poly(fqd, c.clone()))
            .collect();
        let mut r0 = rx_norm(to_rx(&a.coeffs));
        let mut r1 = phi_rx;
        // Bezout coefficient of the element through the iteration.
        let mut s0 = vec![RatFun::one(fqd)];
        let mut s1: Vec<RatFun> = Vec::new();
        while !r1.is_empty() {
            let (q, r) = rx_divrem(&r0, &r1);
            let ns = rx_sub(&s0, &rx_mul(&q, &s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = ns;
        }
        if rx_deg(&r0) != Some(0) {
            return Err(Error::ZeroDivisor);
        }
        let g_inv = r0[0].inv(fqd)?;
        // a = (Σ coeffs x^k)/den  ⟹  a^{-1} = den · s0/g mod Φ
        let den_r = RatFun::from_poly(fqd, a.den.clone());
        let coords: Vec<RatFun> = (0..self.dim)
            .map(|k| {
                s0.get(k)
                    .map(|c| c.mul(fqd, &g_inv).mul(fqd, &den_r))
                    .unwrap_or_else(|| RatFun::zero(fqd))
            })
            .collect();
        Ok(self.from_ratfun_coords(&coords))
    }

    pub fn div(&self, a: &TorsionElem, b: &TorsionElem) -> Result<TorsionElem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Assemble an element from per-coordinate fractions.
    pub fn from_ratfun_coords(&self, coords: &[RatFun]) -> TorsionElem {
        assert_eq!(coords.len(), self.dim);
        let fqd = self.fqd();
        let mut den = Poly::one(fqd);
        for c in coords {
            let g = den.gcd(fqd, c.den());
            den = den.mul(fqd, &c.den().div_exact(fqd, &g));
        }
        let coeffs = coords
            .iter()
            .map(|c| c.num().mul(fqd, &den.div_exact(fqd, c.den())))
            .collect();
        self.make(coeffs, den)
    }

    /// Coordinates with respect to the power basis `1, x_n, …, x_n^{D-1}`.
    pub fn coords(&self, y: &TorsionElem) -> Vec<RatFun> {
        let fqd = self.fqd();
        y.coeffs
            .iter()
            .map(|c| RatFun::new(fqd, c.clone(), y.den.clone()).unwrap())
            .collect()
    }

    pub fn coord(&self, y: &TorsionElem, k: usize) -> RatFun {
        RatFun::new(self.fqd(), y.coeffs[k].clone(), y.den.clone()).unwrap()
    }

    /// Numerator coordinates and the common denominator (cleared form).
    pub fn cleared_coords<'a>(&self, y: &'a TorsionElem) -> (&'a [Poly], &'a Poly) {
        (&y.coeffs, &y.den)
    }

    /// The constant-field Frobenius `F`: raises every `F_{q^d}` coefficient
    /// to the q-th power, fixing θ and `x_n`.
    pub fn frobenius_const(&self, y: &TorsionElem) -> TorsionElem {
        let fqd = self.fqd();
        let q = self.tower.q() as u128;
        TorsionElem {
            coeffs: y
                .coeffs
                .iter()
                .map(|c| c.map_frobenius(fqd, q))
                .collect(),
            den: y.den.map_frobenius(fqd, q),
        }
    }

    /// Substitute the generator: `y(x_n) ↦ Σ coeffs[k]·powers[k] / den`,
    /// where `powers[k]` are precomputed powers of the image of `x_n`.
    fn substitute_in(
        target: &TorsionField,
        y: &TorsionElem,
        powers: &[TorsionElem],
    ) -> TorsionElem {
        let fqd = target.fqd();
        let mut acc = target.zero();
        for (k, c) in y.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc = target.add(&acc, &target.scale_poly(&powers[k], c));
        }
        let inv_den = RatFun::new(fqd, Poly::one(fqd), y.den.clone()).unwrap();
        target.scale_ratfun(&acc, &inv_den)
    }

    /// Precompute the Galois substitution for a unit residue `a`.
    pub fn sigma_map(&self, a: &Poly) -> Result<SigmaMap> {
        let fq = self.tower.fq();
        if a.rem(fq, self.tower.pbar()).is_zero() {
            return Err(Error::NonUnitResidue);
        }
        let modulus = self.tower.pbar().pow(fq, (self.level + 1) as u64);
        let residue = a.rem(fq, &modulus);
        let image = carlitz::carlitz_eval(fq, &residue, self, &self.x_gen());
        let mut powers = Vec::with_capacity(self.dim);
        powers.push(self.one());
        for _ in 1..self.dim {
            powers.push(self.mul(powers.last().unwrap(), &image));
        }
        Ok(SigmaMap { residue, powers })
    }

    pub fn apply_sigma(&self, map: &SigmaMap, y: &TorsionElem) -> TorsionElem {
        Self::substitute_in(self, y, &map.powers)
    }

    /// `σ_a(y)` for a unit residue `a`. For repeated use build a
    /// [`SigmaMap`] once and call [`apply_sigma`](Self::apply_sigma).
    pub fn galois_sigma(&self, a: &Poly, y: &TorsionElem) -> Result<TorsionElem> {
        Ok(self.apply_sigma(&self.sigma_map(a)?, y))
    }

    /// Norm down to `K(ζ)`: the determinant of multiplication by `y` on the
    /// power basis, equal to the resultant of `Φ` and the representing
    /// polynomial since `Φ` is monic.
    pub fn norm_to_kzeta(&self, y: &TorsionElem) -> RatFun {
        let fqd = self.fqd();
        if self.is_zero(y) {
            return RatFun::zero(fqd);
        }
        let mut cols: Vec<Vec<Poly>> = Vec::with_capacity(self.dim);
        cols.push(y.coeffs.clone());
        for _ in 1..self.dim {
            let prev = cols.last().unwrap();
            let mut shifted = Vec::with_capacity(self.dim + 1);
            shifted.push(Poly::zero());
            shifted.extend(prev.iter().cloned());
            cols.push(self.reduce_mod_phi(shifted));
        }
        let mat: Vec<Vec<Poly>> = (0..self.dim)
            .map(|i| (0..self.dim).map(|j| cols[j][i].clone()).collect())
            .collect();
        let det = linalg::bareiss_det(fqd, &mat);
        let den_pow = y.den.pow(fqd, self.dim as u64);
        RatFun::new(fqd, det, den_pow).unwrap()
    }

    /// Precompute the ring embedding into the next tower level, sending
    /// `x_n ↦ 𝔠_𝔭(x_{n+1})`.
    pub fn embedding_into(&self, target: &TorsionField) -> Result<TowerEmbedding> {
        if self.tower.q() != target.tower.q()
            || self.tower.pbar() != target.tower.pbar()
            || target.level != self.level + 1
        {
            return Err(Error::FieldMismatch);
        }
        let image = carlitz::carlitz_eval(
            self.tower.fq(),
            self.tower.pbar(),
            target,
            &target.x_gen(),
        );
        let mut powers = Vec::with_capacity(self.dim);
        powers.push(target.one());
        for _ in 1..self.dim {
            powers.push(target.mul(powers.last().unwrap(), &image));
        }
        Ok(TowerEmbedding { powers })
    }

    /// Apply a precomputed embedding; `self` is the target field.
    pub fn apply_embedding(&self, emb: &TowerEmbedding, y: &TorsionElem) -> TorsionElem {
        Self::substitute_in(self, y, &emb.powers)
    }

    /// Ring embedding into the next tower level, sending
    /// `x_{n} ↦ 𝔠_𝔭(x_{n+1})`.
    pub fn tower_embed(&self, target: &TorsionField, y: &TorsionElem) -> Result<TorsionElem> {
        let emb = self.embedding_into(target)?;
        Ok(target.apply_embedding(&emb, y))
    }

    /// Degree of the minimal polynomial of `y` over `K(ζ)`, by locating the
    /// first linear dependence among the powers of `y`.
    pub fn min_poly_degree(&self, y: &TorsionElem) -> usize {
        let fqd = self.fqd();
        let mut rows: Vec<Vec<Poly>> = Vec::new();
        let mut pw = self.one();
        for k in 0..=self.dim {
            rows.push(pw.coeffs.clone());
            let rank = linalg::poly_matrix_rank(fqd, &rows);
            if rank < rows.len() {
                return k;
            }
            if k < self.dim {
                pw = self.mul(&pw, y);
            }
        }
        self.dim
    }
}

impl AAlgebra for TorsionField {
    type Elem = TorsionElem;
    fn zero_elem(&self) -> TorsionElem {
        self.zero()
    }
    fn add_elem(&self, a: &TorsionElem, b: &TorsionElem) -> TorsionElem {
        self.add(a, b)
    }
    fn apoly_mul(&self, c: &Poly, x: &TorsionElem) -> TorsionElem {
        self.scale_poly(x, &self.tower.lift_poly(c))
    }
    fn frobenius_q(&self, x: &TorsionElem) -> TorsionElem {
        self.pow(x, self.tower.q())
    }
}

impl crate::algebra::interp::LinearSpace<TorsionElem> for TorsionField {
    fn zero_val(&self) -> TorsionElem {
        self.zero()
    }
    fn add_val(&self, a: &TorsionElem, b: &TorsionElem) -> TorsionElem {
        self.add(a, b)
    }
    fn smul_val(&self, c: &FFElem, x: &TorsionElem) -> TorsionElem {
        self.scale_poly(x, &Poly::constant(self.fqd(), c.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::parse_poly;
    use crate::carlitz::residue_enum;

    fn c1_field(n: usize) -> Arc<TorsionField> {
        let t = FieldTower::new(2, "theta^2+theta+1").unwrap();
        TorsionField::new(&t, n).unwrap()
    }

    fn c2_field(n: usize) -> Arc<TorsionField> {
        let t = FieldTower::new(3, "theta").unwrap();
        TorsionField::new(&t, n).unwrap()
    }

    #[test]
    fn field_dimensions() {
        // (q=2, 𝔭=θ, n=0) → D = 1
        let t = FieldTower::new(2, "theta").unwrap();
        assert_eq!(TorsionField::new(&t, 0).unwrap().dim(), 1);
        // (q=3, 𝔭=θ, n=0) → D = 2
        assert_eq!(c2_field(0).dim(), 2);
        // (q=2, 𝔭=θ²+θ+1, n=1) → D = 12
        assert_eq!(c1_field(1).dim(), 12);
    }

    #[test]
    fn generator_satisfies_phi() {
        for field in [c1_field(0), c1_field(1), c2_field(0), c2_field(1)] {
            let x = field.x_gen();
            // Evaluate Φ at x_n by Horner.
            let mut acc = field.zero();
            for c in field.phi.iter().rev() {
                acc = field.mul(&acc, &x);
                acc = field.add(&acc, &field.from_poly(c));
            }
            assert!(field.is_zero(&acc), "level {}", field.level());
        }
    }

    #[test]
    fn torsion_exact_order() {
        // 𝔠_{𝔭^{n+1}}(x_n) = 0 and 𝔠_{𝔭^n}(x_n) ≠ 0
        for field in [c1_field(0), c1_field(1), c2_field(1)] {
            let fq = field.tower().fq().clone();
            let x = field.x_gen();
            let pbar = field.tower().pbar().clone();
            let pn1 = pbar.pow(&fq, (field.level() + 1) as u64);
            let killed = carlitz::carlitz_eval(&fq, &pn1, field.as_ref(), &x);
            assert!(field.is_zero(&killed));
            let pn = pbar.pow(&fq, field.level() as u64);
            let alive = carlitz::carlitz_eval(&fq, &pn, field.as_ref(), &x);
            assert!(!field.is_zero(&alive));
        }
    }

    #[test]
    fn inversion_roundtrip() {
        let field = c1_field(1);
        let x = field.x_gen();
        let fqd = field.tower().fqd().clone();
        let theta = RatFun::from_poly(&fqd, Poly::x(&fqd));
        // y = x² + θ·x + 1
        let y = field.add(
            &field.add(&field.mul(&x, &x), &field.scale_ratfun(&x, &theta)),
            &field.one(),
        );
        let inv = field.inv(&y).unwrap();
        assert_eq!(field.mul(&y, &inv), field.one());
        assert!(field.inv(&field.zero()).is_err());
    }

    #[test]
    fn sigma_is_group_action() {
        // σ: a ↦ σ_a is multiplicative and σ_1 = id on the full unit group.
        let field = c2_field(1);
        let fq = field.tower().fq().clone();
        let units = residue_enum(&fq, field.tower().pbar(), 1, true);
        let x = field.x_gen();
        let id = field.galois_sigma(&Poly::one(&fq), &x).unwrap();
        assert_eq!(id, x);
        for a in &units {
            for b in &units {
                let ab = a.mul(&fq, b);
                let lhs = field.galois_sigma(&ab, &x).unwrap();
                let rhs = field
                    .galois_sigma(a, &field.galois_sigma(b, &x).unwrap())
                    .unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn sigma_faithful_on_units() {
        let field = c2_field(1);
        let fq = field.tower().fq().clone();
        let units = residue_enum(&fq, field.tower().pbar(), 1, true);
        let x = field.x_gen();
        let mut images = Vec::new();
        for a in &units {
            let img = field.galois_sigma(a, &x).unwrap();
            assert!(!images.contains(&img), "σ must be injective on units");
            images.push(img);
        }
    }

    #[test]
    fn sigma_two_on_q3_level0() {
        // q=3, 𝔭=θ, n=0: σ_2(x_0) = 2x_0 and σ_2 ∘ σ_2 = id
        let field = c2_field(0);
        let fq = field.tower().fq().clone();
        let two = Poly::constant(&fq, fq.from_u64(2));
        let x = field.x_gen();
        let s2 = field.galois_sigma(&two, &x).unwrap();
        let expect = field.scale_poly(&x, &Poly::constant(field.tower().fqd(), fq.from_u64(2)));
        assert_eq!(s2, expect);
        let back = field.galois_sigma(&two, &s2).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn sigma_rejects_non_unit() {
        let field = c2_field(0);
        let fq = field.tower().fq().clone();
        let theta = Poly::x(&fq);
        assert!(matches!(
            field.galois_sigma(&theta, &field.x_gen()),
            Err(Error::NonUnitResidue)
        ));
    }

    #[test]
    fn sigma_orbit_on_phi_roots_level0() {
        // q=2, 𝔭=θ²+θ+1, n=0: {σ_1, σ_θ, σ_{θ+1}} acts simply transitively
        // on the 3 nonzero roots of Φ.
        let field = c1_field(0);
        let fq = field.tower().fq().clone();
        let x = field.x_gen();
        let units = residue_enum(&fq, field.tower().pbar(), 0, true);
        assert_eq!(units.len(), 3);
        let mut orbit = Vec::new();
        for a in &units {
            let img = field.galois_sigma(a, &x).unwrap();
            // each image is again a root of Φ
            let mut acc = field.zero();
            for c in field.phi.iter().rev() {
                acc = field.mul(&acc, &img);
                acc = field.add(&acc, &field.from_poly(c));
            }
            assert!(field.is_zero(&acc));
            assert!(!orbit.contains(&img));
            orbit.push(img);
        }
        assert_eq!(orbit.len(), 3);
    }

    #[test]
    fn frobenius_const_properties() {
        let field = c1_field(1);
        let x = field.x_gen();
        let fqd = field.tower().fqd().clone();
        // F fixes elements with F_q(θ) coordinates
        let theta = field.from_poly(&Poly::x(&fqd));
        assert_eq!(field.frobenius_const(&theta), theta);
        assert_eq!(field.frobenius_const(&x), x);
        // F^d = id on an element with a ζ coordinate
        let zeta_elem = field.from_const(field.tower().zeta());
        let y = field.add(&field.mul(&x, &zeta_elem), &field.one());
        let mut z = y.clone();
        for _ in 0..field.tower().d() {
            z = field.frobenius_const(&z);
        }
        assert_eq!(z, y);
        assert_ne!(field.frobenius_const(&y), y);
        // F commutes with every σ_a
        let fq = field.tower().fq().clone();
        for a in residue_enum(&fq, field.tower().pbar(), 1, true) {
            let map = field.sigma_map(&a).unwrap();
            let lhs = field.frobenius_const(&field.apply_sigma(&map, &y));
            let rhs = field.apply_sigma(&map, &field.frobenius_const(&y));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn norm_examples() {
        // N(1) = 1, N(θ) = θ^D, and for q=3, 𝔭=θ, n=0: N(x_0) = θ
        let field = c2_field(0);
        let fqd = field.tower().fqd().clone();
        assert_eq!(field.norm_to_kzeta(&field.one()), RatFun::one(&fqd));
        let theta = field.from_poly(&Poly::x(&fqd));
        let n_theta = field.norm_to_kzeta(&theta);
        assert_eq!(
            n_theta,
            RatFun::from_poly(&fqd, parse_poly(&fqd, "theta^2").unwrap())
        );
        let n_x = field.norm_to_kzeta(&field.x_gen());
        assert_eq!(n_x, RatFun::from_poly(&fqd, Poly::x(&fqd)));
    }

    #[test]
    fn norm_multiplicative() {
        let field = c1_field(0);
        let fqd = field.tower().fqd().clone();
        let x = field.x_gen();
        let theta = RatFun::from_poly(&fqd, Poly::x(&fqd));
        let y = field.add(&field.scale_ratfun(&x, &theta), &field.one());
        let z = field.sub(&field.mul(&x, &x), &x);
        let lhs = field.norm_to_kzeta(&field.mul(&y, &z));
        let rhs = field
            .norm_to_kzeta(&y)
            .mul(&fqd, &field.norm_to_kzeta(&z));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn tower_embedding_carries_torsion_correctly() {
        let f0 = c1_field(0);
        let f1 = c1_field(1);
        let fq = f0.tower().fq().clone();
        // embeds 1 ↦ 1 and θ ↦ θ
        assert_eq!(f0.tower_embed(&f1, &f0.one()).unwrap(), f1.one());
        let theta0 = f0.from_poly(&Poly::x(f0.tower().fqd()));
        let theta1 = f1.from_poly(&Poly::x(f1.tower().fqd()));
        assert_eq!(f0.tower_embed(&f1, &theta0).unwrap(), theta1);
        // the embedded generator is nonzero 𝔭-torsion
        let x0_img = f0.tower_embed(&f1, &f0.x_gen()).unwrap();
        assert!(!f1.is_zero(&x0_img));
        let killed = carlitz::carlitz_eval(&fq, f1.tower().pbar(), f1.as_ref(), &x0_img);
        assert!(f1.is_zero(&killed));
        // ring map on a product
        let x0 = f0.x_gen();
        let y = f0.add(&f0.mul(&x0, &x0), &theta0);
        let lhs = f0.tower_embed(&f1, &y).unwrap();
        let rhs = f1.add(&f1.mul(&x0_img, &x0_img), &theta1);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn embedded_generator_minimal_polynomial_degree() {
        // min poly of embedded x_{n-1} over K(ζ) has degree q^{d(n-1)}(q^d - 1)
        let f0 = c2_field(0);
        let f1 = c2_field(1);
        let x0_img = f0.tower_embed(&f1, &f0.x_gen()).unwrap();
        assert_eq!(f1.min_poly_degree(&x0_img), 2); // 3^0·(3-1)
        let x1 = f1.x_gen();
        assert_eq!(f1.min_poly_degree(&x1), 6);
        // 𝔠_𝔭(x_1) generates the level-0 subfield
        let fq = f1.tower().fq().clone();
        let cp = carlitz::carlitz_eval(&fq, f1.tower().pbar(), f1.as_ref(), &x1);
        assert_eq!(f1.min_poly_degree(&cp), 2);
    }

    #[test]
    fn galois_average_lands_in_base() {
        // An element fixed by all σ_a has coordinates supported on x^0.
        let field = c2_field(1);
        let fq = field.tower().fq().clone();
        let x = field.x_gen();
        let y = field.add(&field.mul(&x, &x), &field.scale_poly(&x, &Poly::x(field.tower().fqd())));
        let mut avg = field.zero();
        for a in residue_enum(&fq, field.tower().pbar(), 1, true) {
            avg = field.add(&avg, &field.galois_sigma(&a, &y).unwrap());
        }
        let coords = field.coords(&avg);
        for c in coords.iter().skip(1) {
            assert!(c.is_zero());
        }
    }
}
