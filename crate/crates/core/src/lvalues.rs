//! Matrix L-values: the exact finite-sum realization of the normalized
//! hyperderivative L-matrix, its Galois equivariance, its integrality
//! pattern, and the truncated twisted harmonic series on the Laurent model.
//!
//! The exact layer never references the period: the normalization
//! `𝔭^{n+1}/π̃` is absorbed by defining the matrix through the finite sum
//! `−Σ'_{a mod 𝔭^{n+1}} ρ_ζ(a_t)/𝔠_a(x_n)`; the period appears only in the
//! analytic cross-check.

use std::sync::Arc;

use crate::algebra::hyper;
use crate::algebra::poly::Poly;
use crate::carlitz::{self, residue_enum};
use crate::error::{Error, Result};
use crate::laurent::{LaurentApprox, LaurentCtx};
use crate::omega::rho_matrix;
use crate::torsion::{TorsionElem, TorsionField};

/// Upper-triangular Toeplitz `(n+1)×(n+1)` matrix over `K_n(ζ)`, stored by
/// its first row; entry `(r, c)` is `row[c - r]`.
#[derive(Debug, Clone)]
pub struct LMatrix {
    pub level: usize,
    pub root_index: usize,
    pub row: Vec<TorsionElem>,
}

/// The exact matrix L-value at `ζ_k`:
/// `−Σ ρ_{ζ_k}^{[n+1]}(a_t) / 𝔠_a(x_n)` over nonzero residues `a`.
pub fn l_matrix(field: &Arc<TorsionField>, root_index: usize) -> Result<LMatrix> {
    let tower = field.tower();
    let fq = tower.fq().clone();
    let fqd = tower.fqd().clone();
    let n = field.level();
    let z = tower.zeta_k(root_index)?;
    let x = field.x_gen();
    let mut row = vec![field.zero(); n + 1];
    for a in residue_enum(&fq, tower.pbar(), n, false) {
        if a.is_zero() {
            continue;
        }
        let expand = hyper::hyper_expand(&fq, tower.fqd(), &a, &z, n)?;
        let torsion = carlitz::carlitz_eval(&fq, &a, field.as_ref(), &x);
        let inv = field.inv(&torsion)?;
        for (j, coef) in expand.iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            let term = field.scale_poly(&inv, &Poly::constant(&fqd, coef.clone()));
            row[j] = field.add(&row[j], &term);
        }
    }
    for entry in row.iter_mut() {
        *entry = field.neg(entry);
    }
    Ok(LMatrix {
        level: n,
        root_index,
        row,
    })
}

/// Outcome of the equivariance check `σ_a * L = ρ_ζ(a_t)^{-1} L`.
#[derive(Debug, Clone)]
pub struct EquivarianceReport {
    pub units_checked: usize,
    pub passed: bool,
    pub first_failure: Option<String>,
}

pub fn l_equivariance_check(
    field: &Arc<TorsionField>,
    lmat: &LMatrix,
) -> Result<EquivarianceReport> {
    let tower = field.tower();
    let fq = tower.fq().clone();
    let fqd = tower.fqd().clone();
    let n = field.level();
    let mut units_checked = 0;
    for a in residue_enum(&fq, tower.pbar(), n, true) {
        let map = field.sigma_map(&a)?;
        let lhs: Vec<TorsionElem> = lmat
            .row
            .iter()
            .map(|e| field.apply_sigma(&map, e))
            .collect();
        let rho_inv = rho_matrix(tower, &a, lmat.root_index, n + 1)?.inv(&fqd)?;
        // first row of ρ(a)⁻¹·L: convolution of the two symbol rows
        let rhs: Vec<TorsionElem> = (0..=n)
            .map(|j| {
                let mut acc = field.zero();
                for l in 0..=j {
                    let c = &rho_inv.row()[l];
                    if c.is_zero() {
                        continue;
                    }
                    let term =
                        field.scale_poly(&lmat.row[j - l], &Poly::constant(&fqd, c.clone()));
                    acc = field.add(&acc, &term);
                }
                acc
            })
            .collect();
        if lhs != rhs {
            return Ok(EquivarianceReport {
                units_checked,
                passed: false,
                first_failure: Some(crate::algebra::poly::format_poly(&fq, &a, "theta")),
            });
        }
        units_checked += 1;
    }
    Ok(EquivarianceReport {
        units_checked,
        passed: true,
        first_failure: None,
    })
}

/// Integrality pattern: every diagonal except the top corner is integral,
/// and `𝔭` times the top corner is integral. Whether the top corner itself
/// happens to be integral is reported, not asserted.
#[derive(Debug, Clone)]
pub struct LIntegralityReport {
    /// Per-diagonal verdicts for `ℓ_0, …, ℓ_n` (one per Toeplitz diagonal).
    pub diagonal_integral: Vec<bool>,
    pub top_entry_integral: bool,
    pub p_times_top_integral: bool,
    pub passed: bool,
}

pub fn l_integrality_check(field: &Arc<TorsionField>, lmat: &LMatrix) -> LIntegralityReport {
    let tower = field.tower();
    let n = field.level();
    let diagonal_integral: Vec<bool> = lmat
        .row
        .iter()
        .map(|e| crate::basis::is_integral(field, e).0)
        .collect();
    let top_entry_integral = diagonal_integral[n];
    let scaled = field.scale_poly(&lmat.row[n], &tower.pbar_lifted());
    let p_times_top_integral = crate::basis::is_integral(field, &scaled).0;
    let passed = diagonal_integral[..n].iter().all(|&b| b) && p_times_top_integral;
    LIntegralityReport {
        diagonal_integral,
        top_entry_integral,
        p_times_top_integral,
        passed,
    }
}

/// Truncated twisted harmonic series `Σ_{a monic, deg ≤ N} a^{(j)}(ζ_k)/a`
/// on the Laurent model. The returned series advertises precision
/// `(q-1)(N+1)`: the omitted tail has `v_∞ ≥ N+1`. Also returns the
/// valuations of the per-degree blocks (they increase strictly).
pub fn l_truncated_series(
    ctx: &LaurentCtx,
    root_index: usize,
    j: usize,
    degree_bound: usize,
) -> Result<(LaurentApprox, Vec<i64>)> {
    let tower = &ctx.tower;
    let fq = tower.fq().clone();
    let z = tower.zeta_k(root_index)?;
    let tail_floor = ctx.qm1() * (degree_bound as i64 + 1);
    if tail_floor > ctx.work_floor {
        return Err(Error::PrecisionShortfall(format!(
            "degree bound {degree_bound} implies floor {tail_floor} beyond working precision {}",
            ctx.work_floor
        )));
    }
    let mut acc = ctx.zero();
    let mut block_vals = Vec::new();
    for m in 0..=degree_bound {
        let mut block = ctx.zero();
        for lower in crate::algebra::poly::enumerate_polys(&fq, m) {
            let a = lower.add(&fq, &Poly::monomial(&fq, fq.one(), m));
            let coef = hyper::hyper_expand(&fq, tower.fqd(), &a, &z, j)?
                .pop()
                .unwrap();
            if coef.is_zero() {
                continue;
            }
            let inv_a = ctx.inv(&ctx.from_apoly(&a))?;
            let term = ctx.mul(&ctx.from_const(&coef, tower.fqd()), &inv_a);
            block = ctx.add(&block, &term);
        }
        block_vals.push(block.val_lower_bound());
        acc = ctx.add(&acc, &block);
    }
    Ok((ctx.truncate(&acc, tail_floor), block_vals))
}
