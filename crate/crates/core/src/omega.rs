//! The central objects of the construction: the interpolation polynomials
//! `𝔮_{(n)}`, the torsion coefficients `c_{(n),i} = 𝔠_{𝔮_{(n),i}}(x_n)`, the
//! exact elements `ω^{(j)}(ζ_k) = Σ_i c_{(j),i} ζ_k^i` of `K_n(ζ)`, the
//! upper-triangular Toeplitz representation matrices, digit-derivative
//! monomials, and the normal-basis generator `η_n`.

use std::sync::Arc;

use crate::algebra::field::{FFElem, FiniteField};
use crate::algebra::hyper;
use crate::algebra::interp::{self, PolySpace};
use crate::algebra::poly::Poly;
use crate::algebra::tower::FieldTower;
use crate::carlitz;
use crate::error::{Error, Result};
use crate::torsion::{TorsionElem, TorsionField};

/// The degree-`< d` polynomial in `T` with `A`-coefficients interpolating
/// `ζ_j ↦ 𝔭(θ)^{n+1}/(θ - ζ_j)^{n+1}`; coefficients stored padded to
/// exactly `d` slots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QPoly {
    pub level: usize,
    pub coeffs: Vec<Poly>,
}

/// `𝔮_{(n)}` by pure `A`-arithmetic: the remainder of
/// `((𝔭(θ) - 𝔭(T))/(θ - T))^{n+1}` modulo `𝔭(T)`. No root extraction is
/// involved; the root-interpolation definition survives as a test oracle in
/// [`q_poly_interpolated`].
pub fn q_poly(fq: &Arc<FiniteField>, pbar: &Poly, n: usize) -> QPoly {
    let d = pbar.degree().expect("prime has positive degree");
    // s(θ,T) = Σ_i (Σ_{j>i} a_j θ^{j-1-i}) T^i, the exact quotient.
    let s: Vec<Poly> = (0..d)
        .map(|i| {
            let coeffs = pbar.coeffs()[i + 1..].to_vec();
            Poly::from_coeffs(fq, coeffs)
        })
        .collect();
    let mut acc = s.clone();
    for _ in 1..=n {
        acc = bipoly_mul_mod(fq, &acc, &s, pbar);
    }
    acc.resize(d, Poly::zero());
    QPoly {
        level: n,
        coeffs: acc,
    }
}

/// Closed form for the base level: `𝔮_{(0),i} = Σ_{j>i} a_j θ^{j-i-1}`.
pub fn q_poly_closed_form_0(fq: &Arc<FiniteField>, pbar: &Poly) -> QPoly {
    q_poly(fq, pbar, 0)
}

/// Product of T-polynomials with `A` coefficients, reduced mod `𝔭(T)`
/// (whose coefficients are constants).
fn bipoly_mul_mod(fq: &Arc<FiniteField>, a: &[Poly], b: &[Poly], pbar: &Poly) -> Vec<Poly> {
    let d = pbar.degree().unwrap();
    let mut conv = vec![Poly::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            conv[i + j] = conv[i + j].add(fq, &x.mul(fq, y));
        }
    }
    for k in (d..conv.len()).rev() {
        if conv[k].is_zero() {
            continue;
        }
        let c = std::mem::replace(&mut conv[k], Poly::zero());
        for (s, m) in pbar.coeffs().iter().take(d).enumerate() {
            if m.is_zero() {
                continue;
            }
            let sub = c.scale(fq, m);
            conv[k - d + s] = conv[k - d + s].sub(fq, &sub);
        }
    }
    conv.truncate(d);
    conv
}

/// Test oracle: the interpolation definition of `𝔮_{(n)}` computed over
/// `F_{q^d}(θ)` — solve for the `T`-coefficients from the values
/// `(𝔭(θ)/(θ - ζ_j))^{n+1}` at every root. Returns coefficients in
/// `F_{q^d}[θ]`, padded to `d` slots.
pub fn q_poly_interpolated(tower: &FieldTower, n: usize) -> Vec<Poly> {
    let fqd = tower.fqd();
    let d = tower.d();
    let zetas = tower.zetas();
    let values: Vec<Poly> = (0..d)
        .map(|j| {
            let mut prod = Poly::one(fqd);
            for (k, z) in zetas.iter().enumerate() {
                if k == j {
                    continue;
                }
                let lin = Poly::from_coeffs(fqd, vec![fqd.neg(z), fqd.one()]);
                prod = prod.mul(fqd, &lin);
            }
            prod.pow(fqd, (n + 1) as u64)
        })
        .collect();
    let space = PolySpace(fqd);
    let mut coeffs = interp::root_coefficients(tower, &space, &values)
        .expect("value count matches root count");
    coeffs.resize(d, Poly::zero());
    coeffs
}

/// Upper-triangular Toeplitz matrix over `F_{q^d}`, stored by its first row
/// `φ(ζ), φ^{(1)}(ζ), …`; these matrices realize the hyperderivative
/// representation evaluated at a root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UTToeplitz {
    row: Vec<FFElem>,
}

impl UTToeplitz {
    pub fn new(row: Vec<FFElem>) -> UTToeplitz {
        UTToeplitz { row }
    }

    pub fn size(&self) -> usize {
        self.row.len()
    }

    pub fn row(&self) -> &[FFElem] {
        &self.row
    }

    pub fn identity(field: &FiniteField, size: usize) -> UTToeplitz {
        let mut row = vec![field.zero(); size];
        row[0] = field.one();
        UTToeplitz { row }
    }

    pub fn is_identity(&self, field: &FiniteField) -> bool {
        self.row
            .iter()
            .enumerate()
            .all(|(i, c)| {
                if i == 0 {
                    field.eq_elem(c, &field.one())
                } else {
                    c.is_zero()
                }
            })
    }

    /// Entry `(r, c)` (zero below the diagonal).
    pub fn entry(&self, field: &FiniteField, r: usize, c: usize) -> FFElem {
        if c < r {
            field.zero()
        } else {
            self.row[c - r].clone()
        }
    }

    /// Product: truncated convolution of first rows.
    pub fn mul(&self, field: &FiniteField, other: &UTToeplitz) -> UTToeplitz {
        assert_eq!(self.size(), other.size());
        let n = self.size();
        let mut row = vec![field.zero(); n];
        for i in 0..n {
            for j in 0..n - i {
                let p = field.mul(&self.row[i], &other.row[j]);
                row[i + j] = field.add(&row[i + j], &p);
            }
        }
        UTToeplitz { row }
    }

    /// Inverse; requires a nonzero diagonal (`φ(ζ) ≠ 0`).
    pub fn inv(&self, field: &FiniteField) -> Result<UTToeplitz> {
        let lead_inv = field.inv(&self.row[0]).map_err(|_| Error::DivisionByZero)?;
        let n = self.size();
        let mut row = vec![field.zero(); n];
        row[0] = lead_inv.clone();
        for k in 1..n {
            let mut acc = field.zero();
            for j in 1..=k {
                let t = field.mul(&self.row[j], &row[k - j]);
                acc = field.add(&acc, &t);
            }
            row[k] = field.neg(&field.mul(&lead_inv, &acc));
        }
        Ok(UTToeplitz { row })
    }
}

/// `ρ_{ζ_k}^{[size]}(a_t)`: first row is `hyper_expand(a, ζ_k, size-1)`.
pub fn rho_matrix(
    tower: &FieldTower,
    a: &Poly,
    root_index: usize,
    size: usize,
) -> Result<UTToeplitz> {
    let z = tower.zeta_k(root_index)?;
    let row = hyper::hyper_expand(tower.fq(), tower.fqd(), a, &z, size - 1)?;
    Ok(UTToeplitz::new(row))
}

/// The full table of `c_{(j),i}` and `ω^{(j)}(ζ_k)` for `0 ≤ j ≤ n`, all
/// realized inside the single field `K_n(ζ)`: level-j values are computed in
/// `K_j(ζ)` and carried up by the tower embedding, so cross-level identities
/// are literal equalities.
#[derive(Debug)]
pub struct OmegaTable {
    field: Arc<TorsionField>,
    /// `coeffs[j][i] = c_{(j),i}` embedded into level n.
    coeffs: Vec<Vec<TorsionElem>>,
    /// `omegas[j][k-1] = ω^{(j)}(ζ_k)` in level n.
    omegas: Vec<Vec<TorsionElem>>,
}

impl OmegaTable {
    pub fn new(field: &Arc<TorsionField>) -> Result<OmegaTable> {
        let tower = field.tower();
        let fq = tower.fq();
        let n = field.level();
        let fqd = tower.fqd();

        // c_{(j),i} at their native level j.
        let mut native: Vec<Vec<TorsionElem>> = Vec::with_capacity(n + 1);
        let mut levels: Vec<Arc<TorsionField>> = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let fj = if j == n {
                Arc::clone(field)
            } else {
                TorsionField::new(tower, j)?
            };
            let qp = q_poly(fq, tower.pbar(), j);
            let xj = fj.x_gen();
            let cj: Vec<TorsionElem> = qp
                .coeffs
                .iter()
                .map(|qc| carlitz::carlitz_eval(fq, qc, fj.as_ref(), &xj))
                .collect();
            native.push(cj);
            levels.push(fj);
        }
        // Carry everything up one level at a time.
        for m in 0..n {
            let emb = levels[m].embedding_into(&levels[m + 1])?;
            for row in native.iter_mut().take(m + 1) {
                for c in row.iter_mut() {
                    *c = levels[m + 1].apply_embedding(&emb, c);
                }
            }
        }
        let zetas = tower.zetas();
        let omegas: Vec<Vec<TorsionElem>> = native
            .iter()
            .map(|row| {
                zetas
                    .iter()
                    .map(|z| {
                        let mut acc = field.zero();
                        let mut zp = fqd.one();
                        for c in row.iter() {
                            acc = field.add(&acc, &field.scale_poly(c, &Poly::constant(fqd, zp.clone())));
                            zp = fqd.mul(&zp, z);
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        Ok(OmegaTable {
            field: Arc::clone(field),
            coeffs: native,
            omegas,
        })
    }

    pub fn field(&self) -> &Arc<TorsionField> {
        &self.field
    }

    pub fn level(&self) -> usize {
        self.field.level()
    }

    /// `c_{(j),i}` as an element of `K_n(ζ)`.
    pub fn coeff(&self, j: usize, i: usize) -> Result<&TorsionElem> {
        self.coeffs
            .get(j)
            .and_then(|row| row.get(i))
            .ok_or_else(|| Error::IndexOutOfRange(format!("c_({j}),{i}")))
    }

    /// `ω^{(j)}(ζ_k)`, `1 ≤ k ≤ d`, `0 ≤ j ≤ n`.
    pub fn omega(&self, j: usize, k: usize) -> Result<&TorsionElem> {
        if k < 1 {
            return Err(Error::IndexOutOfRange("root index starts at 1".into()));
        }
        self.omegas
            .get(j)
            .and_then(|row| row.get(k - 1))
            .ok_or_else(|| Error::IndexOutOfRange(format!("omega^({j})(zeta_{k})")))
    }

    /// `ω^{(j)}` at the root `ζ^{q^m}` for any `m` (indices wrap mod d).
    pub fn omega_at_power(&self, j: usize, base_index: usize, m: usize) -> Result<&TorsionElem> {
        let d = self.field.tower().d();
        let k = (base_index - 1 + m) % d + 1;
        self.omega(j, k)
    }
}

/// Exponent array `e_{j,i}` for a digit-derivative monomial: rows indexed by
/// the derivative order `0 ≤ j ≤ n`, columns by the root `1 ≤ i ≤ d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitExponents {
    pub rows: Vec<Vec<u64>>,
}

impl DigitExponents {
    /// Total j-weight `Σ j·e_{j,i}`, the unipotent depth of the monomial.
    pub fn weight(&self) -> u64 {
        self.rows
            .iter()
            .enumerate()
            .map(|(j, row)| row.iter().sum::<u64>() * j as u64)
            .sum()
    }

    /// Character exponent `l = Σ e_{j,i} q^{i-1} mod (q^d - 1)`.
    pub fn character_exponent(&self, q: u64, d: usize) -> u64 {
        let modulus = q.pow(d as u32) - 1;
        let mut acc = 0u64;
        for row in &self.rows {
            for (i, &e) in row.iter().enumerate() {
                let mut term = e % modulus;
                for _ in 0..i {
                    term = term * (q % modulus) % modulus;
                }
                acc = (acc + term) % modulus;
            }
        }
        acc
    }
}

/// The exponent arrays of the integral-basis theorem, in counter order
/// (row 0 least significant, within a row the first root fastest): all
/// `0 ≤ e_{j,i} ≤ q-1` with the base row `𝐞_0 ≠ 𝐪-𝟏`.
pub fn basis_exponents(q: u64, d: usize, n: usize) -> Vec<DigitExponents> {
    let slots = d * (n + 1);
    let total = (q as u128).pow(slots as u32);
    let mut out = Vec::new();
    for mut t in 0..total {
        let mut digits = Vec::with_capacity(slots);
        for _ in 0..slots {
            digits.push((t % q as u128) as u64);
            t /= q as u128;
        }
        let rows: Vec<Vec<u64>> = digits.chunks(d).map(|c| c.to_vec()).collect();
        if rows[0].iter().all(|&e| e == q - 1) {
            continue;
        }
        out.push(DigitExponents { rows });
    }
    out
}

/// The exact product `Π_{j,i} ω^{(j)}(ζ_i)^{e_{j,i}}` in `K_n(ζ)`.
pub fn digit_monomial(table: &OmegaTable, exps: &DigitExponents) -> Result<TorsionElem> {
    let field = table.field();
    let tower = field.tower();
    let (q, d, n) = (tower.q(), tower.d(), field.level());
    if exps.rows.len() != n + 1 || exps.rows.iter().any(|r| r.len() != d) {
        return Err(Error::DimensionMismatch {
            expected: (n + 1) * d,
            got: exps.rows.iter().map(Vec::len).sum(),
        });
    }
    if exps.rows.iter().flatten().any(|&e| e > q - 1) {
        return Err(Error::IndexOutOfRange(format!(
            "digit exponent exceeds q-1 = {}",
            q - 1
        )));
    }
    let mut acc = field.one();
    for (j, row) in exps.rows.iter().enumerate() {
        for (i, &e) in row.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let w = table.omega(j, i + 1)?;
            acc = field.mul(&acc, &field.pow(w, e));
        }
    }
    Ok(acc)
}

/// `η_n = Π_{k=1}^n (ω^{(k)})^{𝐪-𝟏}`, the normal-basis generator; `η_0 = 1`.
pub fn eta(table: &OmegaTable) -> TorsionElem {
    let field = table.field();
    let tower = field.tower();
    let (q, d, n) = (tower.q(), tower.d(), field.level());
    let mut rows = vec![vec![0u64; d]; n + 1];
    for row in rows.iter_mut().skip(1) {
        row.iter_mut().for_each(|e| *e = q - 1);
    }
    digit_monomial(table, &DigitExponents { rows }).expect("eta exponents are in range")
}
