//! Interpolation at the roots of `𝔭`: the Vandermonde solver behind the
//! expansion `φ(ζ_k) = Σ_l f_l ζ_k^l`, the congruence-periodicity route to
//! the same coefficients, and Lagrange interpolation of functions on the
//! unit group `(A/𝔭A)^×` in the monomial characters `a ↦ a(ζ)^l`.
//!
//! The solvers are generic over the value space: values may be constants,
//! torsion-field elements, or truncated series, anything that is a module
//! over `F_{q^d}`.

use crate::algebra::field::{FFElem, FiniteField};
use crate::algebra::poly::{self, Poly};
use crate::algebra::tower::FieldTower;
use crate::error::{Error, Result};

/// A module over the constant field `F_{q^d}`: just enough structure to
/// apply a constant matrix to a vector of values.
pub trait LinearSpace<T> {
    fn zero_val(&self) -> T;
    fn add_val(&self, a: &T, b: &T) -> T;
    /// Scalar action of `c ∈ F_{q^d}`.
    fn smul_val(&self, c: &FFElem, x: &T) -> T;
}

/// `F_{q^d}` acting on itself.
pub struct ConstSpace<'a>(pub &'a FiniteField);

impl LinearSpace<FFElem> for ConstSpace<'_> {
    fn zero_val(&self) -> FFElem {
        self.0.zero()
    }
    fn add_val(&self, a: &FFElem, b: &FFElem) -> FFElem {
        self.0.add(a, b)
    }
    fn smul_val(&self, c: &FFElem, x: &FFElem) -> FFElem {
        self.0.mul(c, x)
    }
}

/// `F_{q^d}[θ]` as an `F_{q^d}`-module.
pub struct PolySpace<'a>(pub &'a FiniteField);

impl LinearSpace<Poly> for PolySpace<'_> {
    fn zero_val(&self) -> Poly {
        Poly::zero()
    }
    fn add_val(&self, a: &Poly, b: &Poly) -> Poly {
        a.add(self.0, b)
    }
    fn smul_val(&self, c: &FFElem, x: &Poly) -> Poly {
        x.scale(self.0, c)
    }
}

/// Invert a square matrix over a finite field by Gauss-Jordan elimination.
pub fn ff_matrix_inverse(
    field: &FiniteField,
    mat: &[Vec<FFElem>],
) -> Option<Vec<Vec<FFElem>>> {
    let n = mat.len();
    let mut a: Vec<Vec<FFElem>> = mat.to_vec();
    let mut inv: Vec<Vec<FFElem>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { field.one() } else { field.zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let pinv = field.inv(&a[col][col]).ok()?;
        for j in 0..n {
            a[col][j] = field.mul(&a[col][j], &pinv);
            inv[col][j] = field.mul(&inv[col][j], &pinv);
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for j in 0..n {
                let s = field.mul(&factor, &a[col][j]);
                a[r][j] = field.sub(&a[r][j], &s);
                let s = field.mul(&factor, &inv[col][j]);
                inv[r][j] = field.sub(&inv[r][j], &s);
            }
        }
    }
    Some(inv)
}

fn apply_matrix<T, S: LinearSpace<T>>(space: &S, mat: &[Vec<FFElem>], values: &[T]) -> Vec<T> {
    mat.iter()
        .map(|row| {
            let mut acc = space.zero_val();
            for (c, v) in row.iter().zip(values.iter()) {
                if c.is_zero() {
                    continue;
                }
                acc = space.add_val(&acc, &space.smul_val(c, v));
            }
            acc
        })
        .collect()
}

/// Solve `Σ_l f_l ζ_k^l = values[k-1]` for the unique `f_0, …, f_{d-1}`,
/// by inverting the Vandermonde matrix in the roots `ζ_1, …, ζ_d`.
pub fn root_coefficients<T, S: LinearSpace<T>>(
    tower: &FieldTower,
    space: &S,
    values: &[T],
) -> Result<Vec<T>> {
    let d = tower.d();
    if values.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: values.len(),
        });
    }
    let fqd = tower.fqd();
    let vand: Vec<Vec<FFElem>> = tower
        .zetas()
        .iter()
        .map(|z| {
            let mut row = Vec::with_capacity(d);
            let mut pw = fqd.one();
            for _ in 0..d {
                row.push(pw.clone());
                pw = fqd.mul(&pw, z);
            }
            row
        })
        .collect();
    let inv = ff_matrix_inverse(fqd, &vand)
        .expect("Vandermonde at distinct roots is invertible");
    Ok(apply_matrix(space, &inv, values))
}

/// The congruence-periodicity route to the same coefficients, valid for
/// polynomial inputs: fold the coefficients of `φ` along `i mod (q^d - 1)`
/// (using `ζ^{q^d-1} = 1`) and read the base-field digits of each `ζ^j`.
///
/// For `𝔭 = θ` the root is `ζ = 0`, not a root of unity, and the route
/// degenerates to the constant term.
pub fn root_coefficients_periodic(tower: &FieldTower, phi: &Poly) -> Vec<FFElem> {
    let fqd = tower.fqd();
    let d = tower.d();
    if tower.zeta().is_zero() {
        return vec![phi.coeff(fqd, 0)];
    }
    let modulus = (tower.p_abs() - 1) as usize;
    let mut folded = vec![fqd.zero(); modulus];
    for (i, c) in phi.coeffs().iter().enumerate() {
        let j = i % modulus;
        folded[j] = fqd.add(&folded[j], c);
    }
    let mut out = vec![fqd.zero(); d];
    let mut zeta_pow = fqd.one();
    for s in folded.iter() {
        if d == 1 {
            out[0] = fqd.add(&out[0], &fqd.mul(&zeta_pow, s));
        } else {
            // Digits of ζ^j in the power basis 1, ζ, …, ζ^{d-1} are the
            // chunks of its representation over F_q.
            for (l, slot) in out.iter_mut().enumerate() {
                let digit = fqd.chunk(&zeta_pow, l);
                if digit.is_zero() {
                    continue;
                }
                let lifted = fqd.embed_base(&digit);
                *slot = fqd.add(slot, &fqd.mul(&lifted, s));
            }
        }
        zeta_pow = fqd.mul(&zeta_pow, tower.zeta());
    }
    out
}

/// Canonical unit residues of `A/𝔭A` in counter order.
pub fn unit_residues(tower: &FieldTower) -> Vec<Poly> {
    let fq = tower.fq();
    poly::enumerate_polys(fq, tower.d())
        .filter(|a| !a.rem(fq, tower.pbar()).is_zero())
        .collect()
}

/// Evaluate a residue at the root: `a(ζ) ∈ F_{q^d}`.
pub fn residue_at_zeta(tower: &FieldTower, a: &Poly) -> FFElem {
    tower.lift_poly(a).eval(tower.fqd(), tower.zeta())
}

/// Lagrange interpolation on the unit group: given the value of `f` at every
/// unit residue, produce the unique coefficients `c_l`, `l = 0, …, q^d - 2`,
/// with `f(a) = Σ_l c_l a(ζ)^l`. The exponent `l` encodes the multi-index
/// `𝐞` via `l = Σ e_i q^{i-1}`, running over `𝟎 ≤ 𝐞 < 𝐪-𝟏`.
pub fn lagrange_unit_interpolation<T: Clone, S: LinearSpace<T>>(
    tower: &FieldTower,
    space: &S,
    table: &[(Poly, T)],
) -> Result<Vec<T>> {
    let fq = tower.fq();
    let fqd = tower.fqd();
    let units = unit_residues(tower);
    let n = units.len();
    if table.len() != n {
        return Err(Error::BadInput(format!(
            "unit table must have exactly {n} entries, got {}",
            table.len()
        )));
    }
    // Reduce keys, reject duplicates, and order values canonically.
    let mut values: Vec<Option<T>> = vec![None; n];
    for (key, val) in table {
        let red = key.rem(fq, tower.pbar());
        let pos = units
            .iter()
            .position(|u| *u == red)
            .ok_or(Error::NonUnitResidue)?;
        if values[pos].is_some() {
            return Err(Error::BadInput(format!(
                "duplicate residue {}",
                poly::format_poly(fq, &red, "theta")
            )));
        }
        values[pos] = Some(val.clone());
    }
    let values: Vec<T> = values.into_iter().map(|v| v.unwrap()).collect();
    let mat: Vec<Vec<FFElem>> = units
        .iter()
        .map(|a| {
            let az = residue_at_zeta(tower, a);
            let mut row = Vec::with_capacity(n);
            let mut pw = fqd.one();
            for _ in 0..n {
                row.push(pw.clone());
                pw = fqd.mul(&pw, &az);
            }
            row
        })
        .collect();
    let inv = ff_matrix_inverse(fqd, &mat).expect("unit character matrix is invertible");
    Ok(apply_matrix(space, &inv, &values))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_coefficients_monomial() {
        // d=2, q=2, values (ζ, ζ²) from φ = t → coefficients (0, 1)
        let t = FieldTower::new(2, "theta^2+theta+1").unwrap();
        let space = ConstSpace(t.fqd());
        let vals = vec![t.zeta_k(1).unwrap(), t.zeta_k(2).unwrap()];
        let f = root_coefficients(&t, &space, &vals).unwrap();
        assert!(f[0].is_zero());
        assert!(t.fqd().eq_elem(&f[1], &t.fqd().one()));
    }

    #[test]
    fn root_coefficients_square() {
        // values (ζ², ζ⁴) = (ζ², ζ) from φ = t²; with ζ² = ζ+1 the solution is (1, 1)
        let t = FieldTower::new(2, "theta^2+theta+1").unwrap();
        let fqd = t.fqd();
        let space = ConstSpace(fqd);
        let z1 = t.zeta_k(1).unwrap();
        let z2 = t.zeta_k(2).unwrap();
        let vals = vec![fqd.mul(&z1, &z1), fqd.mul(&z2, &z2)];
        let f = root_coefficients(&t, &space, &vals).unwrap();
        assert!(fqd.eq_elem(&f[0], &fqd.one()));
        assert!(fqd.eq_elem(&f[1], &fqd.one()));
    }

    #[test]
    fn root_coefficients_constant() {
        let t = FieldTower::new(2, "theta^3+theta+1").unwrap();
        let fqd = t.fqd();
        let space = ConstSpace(fqd);
        let c = fqd.generator().unwrap();
        let vals = vec![c.clone(), c.clone(), c.clone()];
        let f = root_coefficients(&t, &space, &vals).unwrap();
        assert!(fqd.eq_elem(&f[0], &c));
        assert!(f[1].is_zero() && f[2].is_zero());
    }

    #[test]
    fn periodicity_route_agrees_with_vandermonde() {
        for (q, pt) in [
            (2u64, "theta^2+theta+1"),
            (3u64, "theta^2+1"),
            (2u64, "theta^3+theta+1"),
            (3u64, "theta+1"),
        ] {
            let t = FieldTower::new(q, pt).unwrap();
            let fqd = t.fqd();
            let space = ConstSpace(fqd);
            let max_len = 3 * (t.p_abs() as usize - 1) + 1;
            // A deterministic spread of polynomial inputs over F_{q^d}.
            let mut state = 0x9e3779b97f4a7c15u64;
            for _ in 0..40 {
                let mut coeffs = Vec::new();
                for _ in 0..max_len {
                    state ^= state << 13;
                    state ^= state >> 7;
                    state ^= state << 17;
                    coeffs.push(fqd.decode((state as u128) % fqd.order()));
                }
                let phi = Poly::from_coeffs(fqd, coeffs);
                let vals: Vec<FFElem> = t
                    .zetas()
                    .iter()
                    .map(|z| phi.eval(fqd, z))
                    .collect();
                let via_vand = root_coefficients(&t, &space, &vals).unwrap();
                let via_fold = root_coefficients_periodic(&t, &phi);
                assert_eq!(via_vand.len(), via_fold.len());
                for (a, b) in via_vand.iter().zip(via_fold.iter()) {
                    assert!(fqd.eq_elem(a, b));
                }
            }
        }
    }

    #[test]
    fn periodicity_route_zeta_zero() {
        let t = FieldTower::new(3, "theta").unwrap();
        let fqd = t.fqd();
        let phi = poly::parse_poly(fqd, "theta^4+2*theta^2+2").unwrap();
        let f = root_coefficients_periodic(&t, &phi);
        // φ(0) = 2, and the fold must not add the higher coefficients
        assert!(fqd.eq_elem(&f[0], &fqd.from_u64(2)));
    }

    #[test]
    fn lagrange_constant_function() {
        let t = FieldTower::new(2, "theta^2+theta+1").unwrap();
        let fqd = t.fqd();
        let space = ConstSpace(fqd);
        let table: Vec<(Poly, FFElem)> = unit_residues(&t)
            .into_iter()
            .map(|u| (u, fqd.one()))
            .collect();
        let c = lagrange_unit_interpolation(&t, &space, &table).unwrap();
        assert!(fqd.eq_elem(&c[0], &fqd.one()));
        assert!(c[1..].iter().all(FFElem::is_zero));
    }

    #[test]
    fn lagrange_identity_character() {
        // f(a) = a(ζ) is the monomial with multi-index (1,0), i.e. l = 1
        let t = FieldTower::new(2, "theta^2+theta+1").unwrap();
        let fqd = t.fqd();
        let space = ConstSpace(fqd);
        let table: Vec<(Poly, FFElem)> = unit_residues(&t)
            .into_iter()
            .map(|u| {
                let v = residue_at_zeta(&t, &u);
                (u, v)
            })
            .collect();
        let c = lagrange_unit_interpolation(&t, &space, &table).unwrap();
        assert!(c[0].is_zero());
        assert!(fqd.eq_elem(&c[1], &fqd.one()));
        assert!(c[2].is_zero());
    }

    #[test]
    fn lagrange_indicator_reproduces() {
        // brute-force solve, then verify by re-evaluation at all units
        let t = FieldTower::new(2, "theta^2+theta+1").unwrap();
        let fq = t.fq();
        let fqd = t.fqd();
        let space = ConstSpace(fqd);
        let one = Poly::one(fq);
        let table: Vec<(Poly, FFElem)> = unit_residues(&t)
            .into_iter()
            .map(|u| {
                let v = if u == one { fqd.one() } else { fqd.zero() };
                (u, v)
            })
            .collect();
        let c = lagrange_unit_interpolation(&t, &space, &table).unwrap();
        for u in unit_residues(&t) {
            let az = residue_at_zeta(&t, &u);
            let mut acc = fqd.zero();
            let mut pw = fqd.one();
            for cl in &c {
                acc = fqd.add(&acc, &fqd.mul(cl, &pw));
                pw = fqd.mul(&pw, &az);
            }
            let expect = if u == one { fqd.one() } else { fqd.zero() };
            assert!(fqd.eq_elem(&acc, &expect));
        }
    }

    #[test]
    fn lagrange_rejects_bad_tables() {
        let t = FieldTower::new(2, "theta^2+theta+1").unwrap();
        let fqd = t.fqd();
        let space = ConstSpace(fqd);
        let units = unit_residues(&t);
        // short table
        let short: Vec<(Poly, FFElem)> =
            units.iter().take(2).map(|u| (u.clone(), fqd.one())).collect();
        assert!(lagrange_unit_interpolation(&t, &space, &short).is_err());
        // duplicate entry
        let mut dup: Vec<(Poly, FFElem)> =
            units.iter().map(|u| (u.clone(), fqd.one())).collect();
        dup[1].0 = dup[0].0.clone();
        assert!(lagrange_unit_interpolation(&t, &space, &dup).is_err());
    }
}
