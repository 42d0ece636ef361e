//! Truncated Laurent series at the infinite place.
//!
//! The uniformizer is `v` with `θ = -v^{-(q-1)}` and `λ_θ = v^{-1}`, so the
//! Carlitz θ-torsion relation `λ_θ^{q-1} = -θ` holds on the nose and no
//! auxiliary roots ever need adjoining. Coefficients live in `F_{q^{2d}}`.
//! The normalized valuation is `v_∞ = (v-adic)/(q-1)`, giving `v_∞(θ) = -1`.
//!
//! Every series carries an explicit precision floor: coefficients at
//! exponents `≥ floor` are unknown. Operations propagate floors
//! pessimistically and truncate eagerly at the context's working floor;
//! q-power Frobenius is exact in characteristic p and multiplies the floor
//! by q, which is what lets deep exponential towers retain precision.

use std::sync::Arc;

use crate::algebra::field::FFElem;
use crate::algebra::poly::Poly;
use crate::algebra::tower::FieldTower;
use crate::error::{Error, Result};

/// Shared context: the constant-field tower and the working precision floor
/// (in v-units).
#[derive(Debug, Clone)]
pub struct LaurentCtx {
    pub tower: Arc<FieldTower>,
    pub work_floor: i64,
}

/// `Σ_{i=low}^{floor-1} c_{i-low} v^i + O(v^floor)`; exponents in `[low +
/// coeffs.len(), floor)` are known to be zero. The leading stored
/// coefficient is nonzero, or the list is empty (known zero below `floor`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentApprox {
    low: i64,
    coeffs: Vec<FFElem>,
    floor: i64,
}

impl LaurentCtx {
    pub fn new(tower: &Arc<FieldTower>, work_floor: i64) -> LaurentCtx {
        LaurentCtx {
            tower: Arc::clone(tower),
            work_floor,
        }
    }

    fn cf(&self) -> &Arc<crate::algebra::field::FiniteField> {
        self.tower.fq2d()
    }

    pub fn qm1(&self) -> i64 {
        self.tower.q() as i64 - 1
    }

    pub fn make(&self, low: i64, coeffs: Vec<FFElem>, floor: i64) -> LaurentApprox {
        let floor = floor.min(self.work_floor);
        let mut s = LaurentApprox { low, coeffs, floor };
        self.normalize(&mut s);
        s
    }

    fn normalize(&self, s: &mut LaurentApprox) {
        // Drop unknown region, leading zeros, trailing zeros.
        if s.low >= s.floor {
            s.coeffs.clear();
        }
        let keep = usize::try_from((s.floor - s.low).max(0)).unwrap_or(0);
        s.coeffs.truncate(keep);
        let lead_zeros = s.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros > 0 {
            s.coeffs.drain(..lead_zeros);
            s.low += lead_zeros as i64;
        }
        while s.coeffs.last().is_some_and(FFElem::is_zero) {
            s.coeffs.pop();
        }
        if s.coeffs.is_empty() {
            s.low = s.floor;
        }
    }

    pub fn zero(&self) -> LaurentApprox {
        LaurentApprox {
            low: self.work_floor,
            coeffs: Vec::new(),
            floor: self.work_floor,
        }
    }

    pub fn one(&self) -> LaurentApprox {
        self.monomial(self.cf().one(), 0)
    }

    pub fn monomial(&self, c: FFElem, exp: i64) -> LaurentApprox {
        self.make(exp, vec![c], self.work_floor)
    }

    /// `θ = -v^{-(q-1)}`.
    pub fn theta(&self) -> LaurentApprox {
        let minus_one = self.cf().neg(&self.cf().one());
        self.monomial(minus_one, -self.qm1())
    }

    /// `λ_θ = v^{-1}`.
    pub fn lambda_theta(&self) -> LaurentApprox {
        self.monomial(self.cf().one(), -1)
    }

    /// Exact image of a polynomial in θ over `F_q`:
    /// `Σ c_k θ^k ↦ Σ (-1)^k c_k v^{-(q-1)k}`.
    pub fn from_apoly(&self, a: &Poly) -> LaurentApprox {
        self.from_poly_over(a, self.tower.fq())
    }

    /// Same for polynomials over `F_{q^d}` (or the coefficient field itself).
    pub fn from_poly_over(
        &self,
        a: &Poly,
        sub: &Arc<crate::algebra::field::FiniteField>,
    ) -> LaurentApprox {
        let cf = self.cf();
        if a.is_zero() {
            return self.zero();
        }
        let deg = a.degree().unwrap() as i64;
        let span = usize::try_from(self.qm1() * deg + 1).unwrap();
        let mut coeffs = vec![cf.zero(); span];
        let low = -self.qm1() * deg;
        for (k, c) in a.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut e = cf.embed_from(sub, c).expect("coefficient subfield");
            if k % 2 == 1 && cf.characteristic() != 2 {
                e = cf.neg(&e);
            }
            // exponent -(q-1)k relative to low
            let idx = usize::try_from(-self.qm1() * k as i64 - low).unwrap();
            coeffs[idx] = cf.add(&coeffs[idx], &e);
        }
        self.make(low, coeffs, self.work_floor)
    }

    pub fn from_const(&self, c: &FFElem, sub: &Arc<crate::algebra::field::FiniteField>) -> LaurentApprox {
        let e = self.cf().embed_from(sub, c).expect("constant subfield");
        self.monomial(e, 0)
    }

    pub fn add(&self, a: &LaurentApprox, b: &LaurentApprox) -> LaurentApprox {
        let cf = self.cf();
        let floor = a.floor.min(b.floor);
        let low = a.low.min(b.low).min(floor);
        let span = usize::try_from((floor - low).max(0)).unwrap();
        let mut coeffs = vec![cf.zero(); span];
        for (src_low, src) in [(a.low, &a.coeffs), (b.low, &b.coeffs)] {
            for (i, c) in src.iter().enumerate() {
                let e = src_low + i as i64;
                if e >= floor {
                    break;
                }
                let idx = usize::try_from(e - low).unwrap();
                coeffs[idx] = cf.add(&coeffs[idx], c);
            }
        }
        self.make(low, coeffs, floor)
    }

    pub fn neg(&self, a: &LaurentApprox) -> LaurentApprox {
        let cf = self.cf();
        LaurentApprox {
            low: a.low,
            coeffs: a.coeffs.iter().map(|c| cf.neg(c)).collect(),
            floor: a.floor,
        }
    }

    pub fn sub(&self, a: &LaurentApprox, b: &LaurentApprox) -> LaurentApprox {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &LaurentApprox, b: &LaurentApprox) -> LaurentApprox {
        let cf = self.cf();
        let floor = (a.floor + b.val_lower_bound())
            .min(b.floor + a.val_lower_bound())
            .min(self.work_floor);
        if a.coeffs.is_empty() || b.coeffs.is_empty() {
            return LaurentApprox {
                low: floor,
                coeffs: Vec::new(),
                floor,
            };
        }
        let low = a.low + b.low;
        let span = usize::try_from((floor - low).max(0)).unwrap();
        let mut coeffs = vec![cf.zero(); span];
        for (i, ca) in a.coeffs.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (j, cb) in b.coeffs.iter().enumerate() {
                let e = low + (i + j) as i64;
                if e >= floor {
                    break;
                }
                let idx = i + j;
                let prod = cf.mul(ca, cb);
                coeffs[idx] = cf.add(&coeffs[idx], &prod);
            }
        }
        self.make(low, coeffs, floor)
    }

    /// Multiplicative inverse of a series with known nonzero leading term.
    pub fn inv(&self, a: &LaurentApprox) -> Result<LaurentApprox> {
        let cf = self.cf();
        if a.coeffs.is_empty() {
            return Err(Error::DivisionByZero);
        }
        // 1/(c v^low (1 + ε)) known to floor - 2·low.
        let floor = (a.floor - 2 * a.low).min(self.work_floor);
        let out_low = -a.low;
        let span = usize::try_from((floor - out_low).max(0)).unwrap();
        let lead_inv = cf.inv(&a.coeffs[0])?;
        let mut out = vec![cf.zero(); span];
        if span == 0 {
            return Ok(LaurentApprox {
                low: floor,
                coeffs: Vec::new(),
                floor,
            });
        }
        out[0] = lead_inv.clone();
        for k in 1..span {
            // coefficient recurrence: Σ_{j≤k} a_j * out_{k-j} = 0 for k > 0
            let mut acc = cf.zero();
            for j in 1..=k.min(a.coeffs.len() - 1) {
                if a.coeffs[j].is_zero() || out[k - j].is_zero() {
                    continue;
                }
                let t = cf.mul(&a.coeffs[j], &out[k - j]);
                acc = cf.add(&acc, &t);
            }
            out[k] = cf.neg(&cf.mul(&lead_inv, &acc));
        }
        Ok(self.make(out_low, out, floor))
    }

    pub fn div(&self, a: &LaurentApprox, b: &LaurentApprox) -> Result<LaurentApprox> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// `a^q`: exact in characteristic p — coefficients to the q, exponents
    /// times q, floor times q.
    pub fn frobenius_q(&self, a: &LaurentApprox) -> LaurentApprox {
        let cf = self.cf();
        let q = self.tower.q() as i64;
        let floor = (a.floor.saturating_mul(q)).min(self.work_floor);
        if a.coeffs.is_empty() {
            return LaurentApprox {
                low: floor,
                coeffs: Vec::new(),
                floor,
            };
        }
        let low = a.low * q;
        let span = usize::try_from((floor - low).max(0)).unwrap();
        let mut coeffs = vec![cf.zero(); span];
        for (i, c) in a.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = low + (i as i64) * q;
            if e >= floor {
                break;
            }
            coeffs[usize::try_from(e - low).unwrap()] = cf.frobenius(c, self.tower.q() as u128);
        }
        self.make(low, coeffs, floor)
    }

    pub fn pow(&self, a: &LaurentApprox, e: u64) -> LaurentApprox {
        let mut result = self.one();
        let mut sq = a.clone();
        let mut e = e;
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

    /// Scale by `v^k`.
    pub fn shift(&self, a: &LaurentApprox, k: i64) -> LaurentApprox {
        LaurentApprox {
            low: a.low + k,
            coeffs: a.coeffs.clone(),
            floor: (a.floor + k).min(self.work_floor),
        }
    }

    /// Truncate the knowledge floor downwards (for reporting at a target
    /// precision).
    pub fn truncate(&self, a: &LaurentApprox, floor: i64) -> LaurentApprox {
        let mut s = a.clone();
        s.floor = s.floor.min(floor);
        self.normalize(&mut s);
        s
    }

    /// Render the first few terms for reports.
    pub fn describe(&self, a: &LaurentApprox, terms: usize) -> String {
        let cf = self.cf();
        if a.coeffs.is_empty() {
            return format!("O(v^{})", a.floor);
        }
        let mut parts = Vec::new();
        let mut shown = 0;
        for (i, c) in a.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = a.low + i as i64;
            let cs = cf.format(c);
            let coef = if cs.contains('+') || cs.contains('-') {
                format!("({cs})")
            } else {
                cs
            };
            parts.push(if e == 0 {
                coef
            } else {
                format!("{coef}*v^{e}")
            });
            shown += 1;
            if shown >= terms {
                parts.push("...".into());
                break;
            }
        }
        parts.push(format!("O(v^{})", a.floor));
        parts.join(" + ")
    }
}

impl LaurentApprox {
    /// Known zero down to the floor.
    pub fn known_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exact v-adic valuation when a nonzero coefficient is known.
    pub fn val(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.low)
        }
    }

    /// A proven lower bound for the valuation: the leading exponent, or the
    /// floor when the value is zero as far as is known.
    pub fn val_lower_bound(&self) -> i64 {
        if self.coeffs.is_empty() {
            self.floor
        } else {
            self.low
        }
    }

    pub fn floor(&self) -> i64 {
        self.floor
    }

    pub fn leading(&self) -> Option<&FFElem> {
        self.coeffs.first()
    }
}
