//! Power-basis coordinates, integrality, the digit-derivative integral
//! basis determinant test, the field normal basis rank test, and the
//! level-0 isotypic decomposition.
//!
//! The determinant is taken over `A[ζ] = F_{q^d}[θ]` with fraction-free
//! Bareiss elimination; a unit of `A[ζ]` is exactly a nonzero constant, and
//! that is tested literally. The inverse change-of-basis matrix is computed
//! over the fraction field and checked to be integral as well — the
//! two-sided witness that both bases generate the same `A[ζ]`-module.

use std::sync::Arc;

use crate::algebra::interp;
use crate::algebra::poly::Poly;
use crate::algebra::ratfun::RatFun;
use crate::carlitz;
use crate::error::{Error, Result};
use crate::linalg;
use crate::omega::{self, DigitExponents, OmegaTable};
use crate::torsion::{TorsionElem, TorsionField};

/// Coordinates of `y` with respect to `1, x_n, …, x_n^{D-1}`.
pub fn coords_power_basis(field: &TorsionField, y: &TorsionElem) -> Vec<RatFun> {
    field.coords(y)
}

/// Integrality over `A[ζ]`: every power-basis coordinate is a polynomial.
/// Returns the offending coordinate index as witness when false.
pub fn is_integral(field: &TorsionField, y: &TorsionElem) -> (bool, Option<usize>) {
    let coords = field.coords(y);
    for (k, c) in coords.iter().enumerate() {
        if !c.is_polynomial() {
            return (false, Some(k));
        }
    }
    (true, None)
}

/// Outcome of the digit-derivative basis determinant test.
#[derive(Debug, Clone)]
pub struct BasisReport {
    pub dim: usize,
    pub labels: Vec<DigitExponents>,
    /// Power-basis coordinates of the monomials, columns in label order.
    pub matrix: Vec<Vec<Poly>>,
    pub all_integral: bool,
    pub non_integral_witness: Option<(usize, usize)>,
    pub determinant: Poly,
    pub det_is_unit: bool,
    pub inverse_integral: bool,
    pub product_check_ok: bool,
}

impl BasisReport {
    pub fn passed(&self) -> bool {
        self.all_integral && self.det_is_unit && self.inverse_integral && self.product_check_ok
    }
}

/// Build the `D×D` coordinate matrix of all digit-derivative basis
/// monomials, assert entry integrality, compute the Bareiss determinant,
/// and verify that the inverse matrix is integral with `M·M⁻¹ = I`.
pub fn basis_determinant_test(field: &Arc<TorsionField>) -> Result<BasisReport> {
    let table = OmegaTable::new(field)?;
    basis_determinant_test_with(field, &table)
}

pub fn basis_determinant_test_with(
    field: &Arc<TorsionField>,
    table: &OmegaTable,
) -> Result<BasisReport> {
    let tower = field.tower();
    let fqd = tower.fqd().clone();
    let labels = omega::basis_exponents(tower.q(), tower.d(), field.level());
    let dim = field.dim();
    if labels.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: labels.len(),
        });
    }
    let mut matrix = vec![vec![Poly::zero(); dim]; dim];
    let mut all_integral = true;
    let mut witness = None;
    for (col, exps) in labels.iter().enumerate() {
        let y = omega::digit_monomial(table, exps)?;
        let (ok, bad) = is_integral(field, &y);
        if !ok && witness.is_none() {
            all_integral = false;
            witness = Some((col, bad.unwrap()));
        }
        let (coeffs, den) = field.cleared_coords(&y);
        // integral elements have denominator 1; record numerators either way
        debug_assert!(!ok || den.degree() == Some(0));
        for (row, c) in coeffs.iter().enumerate() {
            matrix[row][col] = c.clone();
        }
    }
    let determinant = linalg::bareiss_det(&fqd, &matrix);
    let det_is_unit = determinant.degree() == Some(0);
    let (inverse_integral, product_check_ok) = if det_is_unit {
        let rat: Vec<Vec<RatFun>> = matrix
            .iter()
            .map(|row| row.iter().map(|c| RatFun::from_poly(&fqd, c.clone())).collect())
            .collect();
        let inv = linalg::ratfun_matrix_inverse(&fqd, &rat)?;
        let integral = inv.iter().flatten().all(RatFun::is_polynomial);
        let mut product_ok = true;
        'outer: for (i, rat_row) in rat.iter().enumerate() {
            for j in 0..dim {
                let mut acc = RatFun::zero(&fqd);
                for (k, inv_row) in inv.iter().enumerate() {
                    acc = acc.add(&fqd, &rat_row[k].mul(&fqd, &inv_row[j]));
                }
                let expect = if i == j {
                    RatFun::one(&fqd)
                } else {
                    RatFun::zero(&fqd)
                };
                if acc != expect {
                    product_ok = false;
                    break 'outer;
                }
            }
        }
        (integral, product_ok)
    } else {
        (false, false)
    };
    Ok(BasisReport {
        dim,
        labels,
        matrix,
        all_integral,
        non_integral_witness: witness,
        determinant,
        det_is_unit,
        inverse_integral,
        product_check_ok,
    })
}

/// Outcome of the normal-basis rank test.
#[derive(Debug, Clone)]
pub struct NormalBasisReport {
    pub level: usize,
    pub subgroup_order: usize,
    pub rank: usize,
    pub dim: usize,
    pub full: bool,
}

/// The Galois orbit of `η_n` under `(1+𝔭A)/(1+𝔭^{n+1}A)` spans `K_n(ζ)`
/// over `K_0(ζ)`: flattened to a rank computation over `K(ζ)` by
/// multiplying each conjugate with the power basis of the level-0 subfield.
pub fn normal_basis_rank(field: &Arc<TorsionField>) -> Result<NormalBasisReport> {
    let table = OmegaTable::new(field)?;
    normal_basis_rank_with(field, &table)
}

pub fn normal_basis_rank_with(
    field: &Arc<TorsionField>,
    table: &OmegaTable,
) -> Result<NormalBasisReport> {
    let tower = field.tower();
    let fq = tower.fq().clone();
    let fqd = tower.fqd().clone();
    let n = field.level();
    let d = tower.d();
    let eta = omega::eta(table);
    // Representatives 1 + 𝔭·b of (1+𝔭A)/(1+𝔭^{n+1}A).
    let reps: Vec<Poly> = crate::algebra::poly::enumerate_polys(&fq, d * n)
        .map(|b| Poly::one(&fq).add(&fq, &tower.pbar().mul(&fq, &b)))
        .collect();
    let subgroup_order = reps.len();
    // x_0 inside level n and its powers: a K(ζ)-basis of K_0(ζ).
    let x0 = carlitz::carlitz_eval(
        &fq,
        &tower.pbar().pow(&fq, n as u64),
        field.as_ref(),
        &field.x_gen(),
    );
    let base_dim = tower.p_abs() as usize - 1;
    let mut x0_powers = Vec::with_capacity(base_dim);
    x0_powers.push(field.one());
    for _ in 1..base_dim {
        x0_powers.push(field.mul(x0_powers.last().unwrap(), &x0));
    }
    let mut rows: Vec<Vec<Poly>> = Vec::with_capacity(subgroup_order * base_dim);
    for a in &reps {
        let map = field.sigma_map(a)?;
        let conj = field.apply_sigma(&map, &eta);
        for pw in &x0_powers {
            let prod = field.mul(pw, &conj);
            let (coeffs, _den) = field.cleared_coords(&prod);
            rows.push(coeffs.to_vec());
        }
    }
    let rank = linalg::poly_matrix_rank(&fqd, &rows);
    Ok(NormalBasisReport {
        level: n,
        subgroup_order,
        rank,
        dim: field.dim(),
        full: rank == field.dim(),
    })
}

/// Decompose a level-0 element into character components: `y = Σ_k y_k`
/// with `σ_a(y_k) = a(ζ)^k y_k`. Components are obtained by Lagrange
/// interpolation of `a ↦ σ_a(y)` in the monomial characters; the exponent
/// `k` runs over `0, …, q^d - 2`. Rejected above level 0, where no
/// semisimple decomposition exists.
pub fn isotypic_decompose(
    field: &Arc<TorsionField>,
    y: &TorsionElem,
) -> Result<Vec<(u64, TorsionElem)>> {
    if field.level() != 0 {
        return Err(Error::NotLevelZero);
    }
    let tower = field.tower();
    let units = interp::unit_residues(tower);
    let mut tbl = Vec::with_capacity(units.len());
    for a in units {
        let img = field.galois_sigma(&a, y)?;
        tbl.push((a, img));
    }
    let comps = interp::lagrange_unit_interpolation(tower, field.as_ref(), &tbl)?;
    Ok(comps
        .into_iter()
        .enumerate()
        .map(|(k, c)| (k as u64, c))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::parse_poly;
    use crate::algebra::tower::FieldTower;
    use crate::omega::OmegaTable;

    fn setup(q: u64, p: &str, n: usize) -> (Arc<TorsionField>, OmegaTable) {
        let tower = FieldTower::new(q, p).unwrap();
        let field = TorsionField::new(&tower, n).unwrap();
        let table = OmegaTable::new(&field).unwrap();
        (field, table)
    }

    #[test]
    fn coords_and_integrality() {
        let (field, table) = setup(3, "theta", 0);
        let x = field.x_gen();
        let coords = coords_power_basis(&field, &x);
        assert!(coords[0].is_zero());
        assert_eq!(coords[1], RatFun::one(field.tower().fqd()));
        // ω(0) = x_0 → coordinates (0, 1)
        let w = table.omega(0, 1).unwrap();
        assert_eq!(coords_power_basis(&field, w), coords);
        assert!(is_integral(&field, &x).0);
        // 1/θ is not integral, witness at coordinate 0
        let fqd = field.tower().fqd().clone();
        let inv_theta = field.from_ratfun(
            &RatFun::new(&fqd, Poly::one(&fqd), Poly::x(&fqd)).unwrap(),
        );
        let (ok, wit) = is_integral(&field, &inv_theta);
        assert!(!ok);
        assert_eq!(wit, Some(0));
    }

    #[test]
    fn coords_are_linear() {
        let (field, table) = setup(2, "theta^2+theta+1", 0);
        let fqd = field.tower().fqd().clone();
        let y = table.omega(0, 1).unwrap();
        let z = table.omega(0, 2).unwrap();
        let sum = field.add(y, z);
        let cy = coords_power_basis(&field, y);
        let cz = coords_power_basis(&field, z);
        let cs = coords_power_basis(&field, &sum);
        for k in 0..field.dim() {
            assert_eq!(cs[k], cy[k].add(&fqd, &cz[k]));
        }
    }

    #[test]
    fn trivial_basis_level0_q2_linear() {
        // q=2, 𝔭=θ, n=0: the 1×1 matrix (1)
        let tower = FieldTower::new(2, "theta").unwrap();
        let field = TorsionField::new(&tower, 0).unwrap();
        let report = basis_determinant_test(&field).unwrap();
        assert_eq!(report.dim, 1);
        assert!(report.passed());
        assert_eq!(report.determinant, Poly::one(tower.fqd()));
    }

    #[test]
    fn basis_c1_level0() {
        // 3×3 matrix from {1, ω(ζ_1), ω(ζ_2)}: determinant a nonzero constant
        let tower = FieldTower::new(2, "theta^2+theta+1").unwrap();
        let field = TorsionField::new(&tower, 0).unwrap();
        let report = basis_determinant_test(&field).unwrap();
        assert_eq!(report.dim, 3);
        assert!(report.all_integral);
        assert!(report.det_is_unit, "det = {:?}", report.determinant);
        assert!(report.inverse_integral);
        assert!(report.product_check_ok);
    }

    #[test]
    fn basis_c2_level1() {
        // 6×6 over F_3(θ) with adjugate cross-check
        let tower = FieldTower::new(3, "theta").unwrap();
        let field = TorsionField::new(&tower, 1).unwrap();
        let report = basis_determinant_test(&field).unwrap();
        assert_eq!(report.dim, 6);
        assert!(report.passed());
    }

    #[test]
    fn normal_basis_trivial_level0() {
        let tower = FieldTower::new(2, "theta^2+theta+1").unwrap();
        let field = TorsionField::new(&tower, 0).unwrap();
        let report = normal_basis_rank(&field).unwrap();
        assert_eq!(report.subgroup_order, 1);
        assert!(report.full);
    }

    #[test]
    fn normal_basis_c2_level1() {
        // 3 conjugates of ω^{(1)}(0)², full rank 6 after flattening
        let tower = FieldTower::new(3, "theta").unwrap();
        let field = TorsionField::new(&tower, 1).unwrap();
        let report = normal_basis_rank(&field).unwrap();
        assert_eq!(report.subgroup_order, 3);
        assert_eq!(report.rank, 6);
        assert!(report.full);
    }

    #[test]
    fn isotypic_components_of_omega_products() {
        let (field, table) = setup(2, "theta^2+theta+1", 0);
        let w1 = table.omega(0, 1).unwrap();
        let w2 = table.omega(0, 2).unwrap();
        // ω(ζ_1) → single component at k = 1
        let comps = isotypic_decompose(&field, w1).unwrap();
        for (k, c) in &comps {
            if *k == 1 {
                assert_eq!(c, w1);
            } else {
                assert!(field.is_zero(c), "unexpected component at k={k}");
            }
        }
        // ω(ζ_1)ω(ζ_2) → single component at k = 1 + q = 3 ≡ 0 mod (q^d - 1)
        let prod = field.mul(w1, w2);
        let comps = isotypic_decompose(&field, &prod).unwrap();
        let k_expect = (1 + 2) % 3;
        for (k, c) in &comps {
            if *k == k_expect {
                assert_eq!(c, &prod);
            } else {
                assert!(field.is_zero(c));
            }
        }
        // y = 1 → component at k = 0
        let comps = isotypic_decompose(&field, &field.one()).unwrap();
        assert_eq!(comps[0].1, field.one());
        assert!(comps[1..].iter().all(|(_, c)| field.is_zero(c)));
    }

    #[test]
    fn isotypic_sum_and_eigenproperty() {
        let (field, table) = setup(2, "theta^2+theta+1", 0);
        let fqd = field.tower().fqd().clone();
        let tower = field.tower().clone();
        // a mixed element
        let y = field.add(
            &field.add(table.omega(0, 1).unwrap(), &field.one()),
            &field.scale_poly(table.omega(0, 2).unwrap(), &parse_poly(&fqd, "theta").unwrap()),
        );
        let comps = isotypic_decompose(&field, &y).unwrap();
        let mut total = field.zero();
        for (_, c) in &comps {
            total = field.add(&total, c);
        }
        assert_eq!(total, y);
        // components are genuine eigenvectors for every unit
        for a in interp::unit_residues(&tower) {
            let az = interp::residue_at_zeta(&tower, &a);
            let map = field.sigma_map(&a).unwrap();
            for (k, c) in &comps {
                let lhs = field.apply_sigma(&map, c);
                let scale = fqd.pow(&az, *k as u128);
                let rhs = field.scale_poly(c, &Poly::constant(&fqd, scale));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn isotypic_rejected_above_level_zero() {
        let (field, _) = setup(3, "theta", 1);
        let x = field.x_gen();
        assert!(matches!(
            isotypic_decompose(&field, &x),
            Err(Error::NotLevelZero)
        ));
    }
}
