//! Exact linear algebra over `F[θ]` and its fraction field.
//!
//! Determinants use fraction-free Bareiss elimination: every division is an
//! exact polynomial division, so intermediate entries stay polynomials and
//! never grow denominators. Rank uses the same elimination without the final
//! division bookkeeping; inverses over the fraction field use Gauss-Jordan
//! on [`RatFun`] entries.

use crate::algebra::field::FiniteField;
use crate::algebra::poly::Poly;
use crate::algebra::ratfun::RatFun;
use crate::error::{Error, Result};

/// Determinant of a square matrix of polynomials by Bareiss elimination.
pub fn bareiss_det(field: &FiniteField, mat: &[Vec<Poly>]) -> Poly {
    let n = mat.len();
    if n == 0 {
        return Poly::one(field);
    }
    assert!(mat.iter().all(|r| r.len() == n), "matrix must be square");
    let mut a: Vec<Vec<Poly>> = mat.to_vec();
    let mut sign_negative = false;
    let mut prev_pivot = Poly::one(field);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let swap = (k + 1..n).find(|&r| !a[r][k].is_zero());
            match swap {
                Some(r) => {
                    a.swap(k, r);
                    sign_negative = !sign_negative;
                }
                None => return Poly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t1 = a[i][j].mul(field, &a[k][k]);
                let t2 = a[i][k].mul(field, &a[k][j]);
                a[i][j] = t1.sub(field, &t2).div_exact(field, &prev_pivot);
            }
            a[i][k] = Poly::zero();
        }
        prev_pivot = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign_negative {
        det.neg(field)
    } else {
        det
    }
}

/// Rank of a (not necessarily square) matrix of polynomials, computed by
/// fraction-free elimination over the fraction field.
pub fn poly_matrix_rank(field: &FiniteField, mat: &[Vec<Poly>]) -> usize {
    let rows = mat.len();
    if rows == 0 {
        return 0;
    }
    let cols = mat[0].len();
    let mut a: Vec<Vec<Poly>> = mat.to_vec();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        let pivot = (row..rows).find(|&r| !a[r][col].is_zero());
        let Some(p) = pivot else { continue };
        a.swap(row, p);
        for r in row + 1..rows {
            if a[r][col].is_zero() {
                continue;
            }
            // Cross-multiplication keeps entries polynomial; scale is
            // irrelevant for rank.
            for c in col + 1..cols {
                let t1 = a[r][c].mul(field, &a[row][col]);
                let t2 = a[r][col].mul(field, &a[row][c]);
                a[r][c] = t1.sub(field, &t2);
            }
            a[r][col] = Poly::zero();
        }
        // Strip common content per row to keep degrees in check.
        for arow in a.iter_mut().take(rows).skip(row + 1) {
            strip_row_content(field, arow);
        }
        rank += 1;
        row += 1;
        if row == rows {
            break;
        }
    }
    rank
}

fn strip_row_content(field: &FiniteField, row: &mut [Poly]) {
    let mut g = Poly::zero();
    for entry in row.iter() {
        if entry.is_zero() {
            continue;
        }
        g = if g.is_zero() {
            entry.clone()
        } else {
            g.gcd(field, entry)
        };
        if g.degree() == Some(0) {
            return;
        }
    }
    if g.is_zero() || g.degree() == Some(0) {
        return;
    }
    for entry in row.iter_mut() {
        if !entry.is_zero() {
            *entry = entry.div_exact(field, &g);
        }
    }
}

/// Inverse of a square matrix over the fraction field; `Err` when singular.
pub fn ratfun_matrix_inverse(
    field: &FiniteField,
    mat: &[Vec<RatFun>],
) -> Result<Vec<Vec<RatFun>>> {
    let n = mat.len();
    assert!(mat.iter().all(|r| r.len() == n), "matrix must be square");
    let mut a: Vec<Vec<RatFun>> = mat.to_vec();
    let mut inv: Vec<Vec<RatFun>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        RatFun::one(field)
                    } else {
                        RatFun::zero(field)
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or(Error::DivisionByZero)?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let pinv = a[col][col].inv(field)?;
        for j in 0..n {
            a[col][j] = a[col][j].mul(field, &pinv);
            inv[col][j] = inv[col][j].mul(field, &pinv);
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for j in 0..n {
                let s = factor.mul(field, &a[col][j]);
                a[r][j] = a[r][j].sub(field, &s);
                let s = factor.mul(field, &inv[col][j]);
                inv[r][j] = inv[r][j].sub(field, &s);
            }
        }
    }
    Ok(inv)
}
