//! Independent analytic layer at the infinite place: the period, the
//! product and sum formulas for the hyperderivatives of the Anderson-Thakur
//! function, one pinned embedding of the torsion field, and cross-checks of
//! the symbolic layer against truncated Laurent series.
//!
//! The embedding sends `x_n ↦ exp_C(π̃/𝔭^{n+1})` and the constants into the
//! Laurent coefficient field; which Φ-root that analytic value is depends
//! on the coordinate choice `λ_θ = v^{-1}`, so reports record residuals
//! rather than asserting a canonical root.

use std::sync::Arc;

use crate::algebra::field::FFElem;
use crate::algebra::poly::Poly;
use crate::algebra::tower::FieldTower;
use crate::carlitz::{self, exp_c_truncated};
use crate::error::{Error, Result};
use crate::laurent::{LaurentApprox, LaurentCtx};
use crate::lvalues::{l_truncated_series, LMatrix};
use crate::omega::{q_poly, OmegaTable};
use crate::torsion::{TorsionElem, TorsionField};

/// Working context for a target precision: the working floor keeps a
/// generous margin (`2·target + 120` v-units) over the reporting floor so
/// intermediate cancellation cannot eat into reported digits.
pub fn analytic_context(tower: &Arc<FieldTower>, target_digits: i64) -> LaurentCtx {
    LaurentCtx::new(tower, 2 * target_digits + 120)
}

/// The period `π̃ = λ_θ·θ·Π_{j≥1}(1 - θ^{1-q^j})^{-1}`, from the residue of
/// the product expansion at `t = θ`. In the `v`-coordinate every factor is
/// `(1 - v^{(q-1)(q^j-1)})^{-1}` regardless of the parity of q.
pub fn pi_tilde(ctx: &LaurentCtx) -> LaurentApprox {
    let qm1 = ctx.qm1();
    let q = ctx.tower.q() as i64;
    let cf = ctx.tower.fq2d().clone();
    let mut acc = ctx.mul(&ctx.lambda_theta(), &ctx.theta());
    let mut qj = q;
    loop {
        let exp = qm1 * (qj - 1);
        if exp > ctx.work_floor + 2 * q {
            break;
        }
        let factor = ctx.sub(&ctx.one(), &ctx.monomial(cf.one(), exp));
        acc = ctx.mul(&acc, &ctx.inv(&factor).expect("unit leading term"));
        qj = qj.saturating_mul(q);
    }
    acc
}

fn jet_mul(ctx: &LaurentCtx, a: &[LaurentApprox], b: &[LaurentApprox]) -> Vec<LaurentApprox> {
    let n = a.len();
    let mut out = vec![ctx.zero(); n];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if i + j >= n {
                break;
            }
            let t = ctx.mul(x, y);
            out[i + j] = ctx.add(&out[i + j], &t);
        }
    }
    out
}

/// Taylor jet `[ω(z), ω^{(1)}(z), …, ω^{(order)}(z)]` about `t = z` from the
/// product expansion: each factor `(1 - (z+X)/θ^{q^j})^{-1}` contributes the
/// geometric jet `(1/a_j)·Σ_r (b_j/a_j)^r X^r` with `a_j = 1 - z/θ^{q^j}`
/// and `b_j = 1/θ^{q^j}`. Factors with `q^j` beyond the working floor are
/// identically 1 to precision; the cut index is chosen from exactly that
/// bound.
pub fn omega_product_jet(
    ctx: &LaurentCtx,
    z: &FFElem,
    order: usize,
) -> Result<Vec<LaurentApprox>> {
    let qm1 = ctx.qm1();
    let q = ctx.tower.q() as i64;
    let mut jet: Vec<LaurentApprox> = vec![ctx.zero(); order + 1];
    jet[0] = ctx.lambda_theta();
    let zc = ctx.from_const(z, ctx.tower.fqd());
    let mut qj: i64 = 1;
    loop {
        // v-valuation (q-1)·q^j of 1/θ^{q^j}; beyond the floor the factor
        // no longer moves any retained digit.
        if qm1 * qj > ctx.work_floor + 2 * q {
            break;
        }
        let theta_qj_inv = ctx.inv(&ctx.pow(&ctx.theta(), qj as u64))?;
        let a = ctx.sub(&ctx.one(), &ctx.mul(&zc, &theta_qj_inv));
        let a_inv = ctx.inv(&a)?;
        let u = ctx.mul(&theta_qj_inv, &a_inv);
        let mut factor_jet = Vec::with_capacity(order + 1);
        let mut cur = a_inv.clone();
        for _ in 0..=order {
            factor_jet.push(cur.clone());
            cur = ctx.mul(&cur, &u);
        }
        jet = jet_mul(ctx, &jet, &factor_jet);
        qj = qj.saturating_mul(q);
    }
    Ok(jet)
}

/// `ω^{(n)}(z)` from the partial-fraction sum: `Σ_m π̃^{q^m}/(D_m (θ^{q^m} -
/// z)^{n+1})`; the m-th term has normalized valuation `q^m(m + n + 1 -
/// q/(q-1))`, so the cut index is the first past the positivity point whose
/// bound clears the working floor.
pub fn omega_sum_route(ctx: &LaurentCtx, n: usize, z: &FFElem) -> Result<LaurentApprox> {
    let q = ctx.tower.q() as i64;
    let qm1 = ctx.qm1();
    let fq = ctx.tower.fq().clone();
    let fqd = ctx.tower.fqd().clone();
    let pi = pi_tilde(ctx);
    let mut acc = ctx.zero();
    let mut pi_qm = pi.clone();
    let mut qm: i64 = 1;
    let mut m = 0usize;
    loop {
        // v-units bound: (q-1)·q^m·(m + n + 1) - q^{m+1}
        let bound = qm1 * qm * (m as i64 + n as i64 + 1) - q * qm;
        if bound > ctx.work_floor && qm1 * (m as i64 + n as i64 + 1) > q {
            break;
        }
        if m > 0 {
            pi_qm = ctx.frobenius_q(&pi_qm);
        }
        let dm = ctx.from_apoly(&carlitz::carlitz_d(&fq, m));
        // θ^{q^m} - z over F_{q^d}
        let mut pole = Poly::monomial(&fqd, fqd.one(), qm as usize);
        pole = pole.sub(&fqd, &Poly::constant(&fqd, z.clone()));
        let pole_pow = ctx.pow(&ctx.from_poly_over(&pole, &fqd), (n + 1) as u64);
        let term = ctx.div(&pi_qm, &ctx.mul(&dm, &pole_pow))?;
        acc = ctx.add(&acc, &term);
        m += 1;
        qm = qm.saturating_mul(q);
        if m > 40 {
            return Err(Error::PrecisionShortfall(
                "sum formula did not converge within 40 terms".into(),
            ));
        }
    }
    Ok(acc)
}

/// Both analytic routes to `ω^{(n)}` at a root (or at `t = 0` when `𝔭 = θ`),
/// returned together for audit.
#[derive(Debug, Clone)]
pub struct OmegaAnalytic {
    pub sum_route: LaurentApprox,
    pub product_route: LaurentApprox,
    /// Valuation floor to which the two routes agree.
    pub agreement: i64,
}

pub fn omega_analytic(
    ctx: &LaurentCtx,
    n: usize,
    root_index: usize,
) -> Result<OmegaAnalytic> {
    let z = ctx.tower.zeta_k(root_index)?;
    let jet = omega_product_jet(ctx, &z, n)?;
    let product_route = jet[n].clone();
    let sum_route = omega_sum_route(ctx, n, &z)?;
    let diff = ctx.sub(&sum_route, &product_route);
    Ok(OmegaAnalytic {
        agreement: diff.val_lower_bound(),
        sum_route,
        product_route,
    })
}

/// Map an exact torsion element through the pinned embedding, given the
/// powers of `x̂_n`.
pub fn torsion_to_laurent(
    ctx: &LaurentCtx,
    field: &TorsionField,
    y: &TorsionElem,
    xhat_powers: &[LaurentApprox],
) -> Result<LaurentApprox> {
    let fqd = field.tower().fqd().clone();
    let (coeffs, den) = field.cleared_coords(y);
    let mut acc = ctx.zero();
    for (k, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let t = ctx.mul(&ctx.from_poly_over(c, &fqd), &xhat_powers[k]);
        acc = ctx.add(&acc, &t);
    }
    ctx.div(&acc, &ctx.from_poly_over(den, &fqd))
}

/// Residual record of one embedding comparison.
#[derive(Debug, Clone)]
pub struct EmbedReport {
    pub level: usize,
    pub target_floor: i64,
    pub exp_truncation_level: usize,
    /// Valuation bound of `Φ(x̂_n)`.
    pub phi_residual: i64,
    /// `(j, i, residual)` for `c_{(j),i}` symbolic vs `exp_C(π̃𝔮/𝔭^{j+1})`.
    pub coeff_residuals: Vec<(usize, usize, i64)>,
    /// `(j, k, residual)` for `Σ_i c_{(j),i} ζ_k^i` vs the product route.
    pub omega_residuals: Vec<(usize, usize, i64)>,
    /// `(j, k, agreement)` of the two analytic routes.
    pub route_agreements: Vec<(usize, usize, i64)>,
    pub min_residual: i64,
    pub passed: bool,
}

/// Compute `x̂_n = exp_C(π̃/𝔭^{n+1})`, verify `Φ(x̂_n) ≈ 0`, compare every
/// symbolic `c_{(j),i}` against its own exponential value, and every
/// `ω^{(j)}(ζ_k)` against the analytic routes.
pub fn embed_compare(
    ctx: &LaurentCtx,
    field: &Arc<TorsionField>,
    table: &OmegaTable,
    target_floor: i64,
) -> Result<EmbedReport> {
    let tower = field.tower().clone();
    let fq = tower.fq().clone();
    let n = field.level();
    let d = tower.d();
    let pi = pi_tilde(ctx);
    let pn1 = tower.pbar().pow(&fq, (n + 1) as u64);
    let arg = ctx.div(&pi, &ctx.from_apoly(&pn1))?;
    let (xhat, level_j) = exp_c_truncated(ctx, &arg, ctx.work_floor, None)?;
    let mut xhat_powers = Vec::with_capacity(field.dim());
    xhat_powers.push(ctx.one());
    for _ in 1..field.dim() {
        xhat_powers.push(ctx.mul(xhat_powers.last().unwrap(), &xhat));
    }

    // Φ(x̂) by Horner over the A-coefficients of the cyclotomic polynomial.
    let mut phi_val = ctx.zero();
    for c in field.cyclotomic().phi.coeffs.iter().rev() {
        phi_val = ctx.mul(&phi_val, &xhat);
        phi_val = ctx.add(&phi_val, &ctx.from_apoly(c));
    }
    let phi_residual = phi_val.val_lower_bound();
    let mut min_residual = phi_residual;

    let mut coeff_residuals = Vec::new();
    let mut omega_residuals = Vec::new();
    let mut route_agreements = Vec::new();
    for j in 0..=n {
        let qp = q_poly(&fq, tower.pbar(), j);
        let pj1 = tower.pbar().pow(&fq, (j + 1) as u64);
        for i in 0..d {
            let sym = torsion_to_laurent(ctx, field, table.coeff(j, i)?, &xhat_powers)?;
            let arg = ctx.div(
                &ctx.mul(&pi, &ctx.from_apoly(&qp.coeffs[i])),
                &ctx.from_apoly(&pj1),
            )?;
            let (ana, _) = exp_c_truncated(ctx, &arg, ctx.work_floor, None)?;
            let res = ctx.sub(&sym, &ana).val_lower_bound();
            min_residual = min_residual.min(res);
            coeff_residuals.push((j, i, res));
        }
        for k in 1..=d {
            let sym = torsion_to_laurent(ctx, field, table.omega(j, k)?, &xhat_powers)?;
            let routes = omega_analytic(ctx, j, k)?;
            let res = ctx.sub(&sym, &routes.product_route).val_lower_bound();
            min_residual = min_residual.min(res).min(routes.agreement);
            omega_residuals.push((j, k, res));
            route_agreements.push((j, k, routes.agreement));
        }
    }
    Ok(EmbedReport {
        level: n,
        target_floor,
        exp_truncation_level: level_j,
        phi_residual,
        coeff_residuals,
        omega_residuals,
        route_agreements,
        min_residual,
        passed: min_residual >= target_floor,
    })
}

/// Residual record of the special-value identity
/// `(-1/π̃)(t-θ)·L(1)·ω(t) = 1` at `t = ζ_k`, with the harmonic series
/// truncated at the given degree.
#[derive(Debug, Clone)]
pub struct PellarinReport {
    pub root_index: usize,
    pub degree_bound: usize,
    /// Truncation-implied floor: the precision advertised by the series.
    pub implied_floor: i64,
    pub residual_floor: i64,
    pub passed: bool,
}

pub fn pellarin_check(
    ctx: &LaurentCtx,
    root_index: usize,
    degree_bound: usize,
) -> Result<PellarinReport> {
    let tower = &ctx.tower;
    let z = tower.zeta_k(root_index)?;
    let (l_series, _) = l_truncated_series(ctx, root_index, 0, degree_bound)?;
    let jet = omega_product_jet(ctx, &z, 0)?;
    let omega_z = &jet[0];
    let pi = pi_tilde(ctx);
    let zeta_minus_theta = ctx.sub(&ctx.from_const(&z, tower.fqd()), &ctx.theta());
    let prod = ctx.mul(&ctx.mul(&zeta_minus_theta, &l_series), omega_z);
    let lhs = ctx.neg(&ctx.div(&prod, &pi)?);
    let residual = ctx.sub(&lhs, &ctx.one());
    let implied_floor = residual.floor();
    let residual_floor = residual.val_lower_bound();
    Ok(PellarinReport {
        root_index,
        degree_bound,
        implied_floor,
        residual_floor,
        passed: residual.known_zero(),
    })
}

/// Cross-check one diagonal of the exact matrix L-value against the
/// truncated twisted harmonic series: the embedded exact entry must agree
/// with `(𝔭^{n+1}/π̃)·L^{(j)}` to the truncation-implied precision.
#[derive(Debug, Clone)]
pub struct LCrossReport {
    pub entry: usize,
    pub degree_bound: usize,
    pub implied_floor: i64,
    pub residual_floor: i64,
    pub passed: bool,
}

pub fn l_crosscheck(
    ctx: &LaurentCtx,
    field: &Arc<TorsionField>,
    lmat: &LMatrix,
    j: usize,
    degree_bound: usize,
) -> Result<LCrossReport> {
    let tower = field.tower().clone();
    let fq = tower.fq().clone();
    let n = field.level();
    let pi = pi_tilde(ctx);
    let pn1 = tower.pbar().pow(&fq, (n + 1) as u64);
    let arg = ctx.div(&pi, &ctx.from_apoly(&pn1))?;
    let (xhat, _) = exp_c_truncated(ctx, &arg, ctx.work_floor, None)?;
    let mut xhat_powers = Vec::with_capacity(field.dim());
    xhat_powers.push(ctx.one());
    for _ in 1..field.dim() {
        xhat_powers.push(ctx.mul(xhat_powers.last().unwrap(), &xhat));
    }
    let exact = torsion_to_laurent(ctx, field, &lmat.row[j], &xhat_powers)?;
    let (l_series, _) = l_truncated_series(ctx, lmat.root_index, j, degree_bound)?;
    let scaled = ctx.div(&ctx.mul(&ctx.from_apoly(&pn1), &l_series), &pi)?;
    let residual = ctx.sub(&exact, &scaled);
    Ok(LCrossReport {
        entry: j,
        degree_bound,
        implied_floor: residual.floor(),
        residual_floor: residual.val_lower_bound(),
        passed: residual.known_zero(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx_for(q: u64, p: &str, digits: i64) -> LaurentCtx {
        let tower = FieldTower::new(q, p).unwrap();
        analytic_context(&tower, digits)
    }

    #[test]
    fn pi_tilde_valuation() {
        // v_∞(π̃) = -q/(q-1), i.e. v-valuation -q
        for (q, p) in [(2u64, "theta"), (3, "theta")] {
            let ctx = ctx_for(q, p, 40);
            let pi = pi_tilde(&ctx);
            assert_eq!(pi.val(), Some(-(q as i64)));
            // leading coefficient matches λ_θ·θ = -v^{-q}
            let cf = ctx.tower.fq2d().clone();
            let expect = cf.neg(&cf.one());
            assert!(cf.eq_elem(pi.leading().unwrap(), &expect));
        }
    }

    #[test]
    fn exp_of_pi_tilde_vanishes() {
        // π̃ generates the kernel of the exponential
        for (q, p) in [(2u64, "theta"), (3, "theta")] {
            let ctx = ctx_for(q, p, 40);
            let pi = pi_tilde(&ctx);
            let (e, _) = exp_c_truncated(&ctx, &pi, 40, None).unwrap();
            let trunc = ctx.truncate(&e, 40);
            assert!(trunc.known_zero(), "exp(pi) = {}", ctx.describe(&e, 5));
        }
    }

    #[test]
    fn omega_at_zero_is_lambda_theta() {
        let ctx = ctx_for(3, "theta", 40);
        let jet = omega_product_jet(&ctx, &ctx.tower.fqd().zero(), 0).unwrap();
        let diff = ctx.sub(&jet[0], &ctx.lambda_theta());
        assert!(diff.known_zero());
    }

    #[test]
    fn omega_routes_agree() {
        for (q, p) in [(2u64, "theta"), (3, "theta"), (2, "theta^2+theta+1")] {
            let ctx = ctx_for(q, p, 40);
            for n in 0..=2 {
                let routes = omega_analytic(&ctx, n, 1).unwrap();
                assert!(
                    routes.agreement >= 40,
                    "q={q} p={p} n={n}: agreement only to {}",
                    routes.agreement
                );
            }
        }
    }

    #[test]
    fn omega_difference_equation() {
        // ω^τ(ζ) = (ζ - θ)ω(ζ), checked as ω(ζ_d)^q - (ζ-θ)ω(ζ) ≈ 0
        for (q, p) in [(3u64, "theta"), (2, "theta^2+theta+1")] {
            let ctx = ctx_for(q, p, 40);
            let d = ctx.tower.d();
            let jet_last = omega_product_jet(&ctx, &ctx.tower.zeta_k(d).unwrap(), 0).unwrap();
            let twisted = ctx.frobenius_q(&jet_last[0]);
            let z1 = ctx.tower.zeta_k(1).unwrap();
            let jet_first = omega_product_jet(&ctx, &z1, 0).unwrap();
            let lin = ctx.sub(&ctx.from_const(&z1, ctx.tower.fqd()), &ctx.theta());
            let rhs = ctx.mul(&lin, &jet_first[0]);
            let diff = ctx.truncate(&ctx.sub(&twisted, &rhs), 40);
            assert!(diff.known_zero(), "q={q} p={p}");
        }
    }

    #[test]
    fn exp_of_pi_over_theta_is_omega_at_zero() {
        // exp_C(π̃/θ) = ω(0) = λ_θ
        for (q, _p) in [(2u64, ""), (3, "")] {
            let ctx = ctx_for(q, "theta", 40);
            let pi = pi_tilde(&ctx);
            let arg = ctx.div(&pi, &ctx.theta()).unwrap();
            let (e, _) = exp_c_truncated(&ctx, &arg, ctx.work_floor, None).unwrap();
            let diff = ctx.truncate(&ctx.sub(&e, &ctx.lambda_theta()), 40);
            assert!(diff.known_zero(), "q={q}: {}", ctx.describe(&e, 4));
        }
    }

    #[test]
    fn embed_compare_c2_level0() {
        let tower = FieldTower::new(3, "theta").unwrap();
        let ctx = analytic_context(&tower, 40);
        let field = TorsionField::new(&tower, 0).unwrap();
        let table = OmegaTable::new(&field).unwrap();
        let rep = embed_compare(&ctx, &field, &table, 40).unwrap();
        assert!(rep.passed, "{rep:?}");
        // x̂_0² + θ ≈ 0 is the Φ residual here
        assert!(rep.phi_residual >= 40);
    }

    #[test]
    fn embed_compare_trivial_linear_phi() {
        // q=2, 𝔭=θ: Φ = X + θ so x̂_0 ≈ θ (= λ_θ up to the coordinate choice)
        let tower = FieldTower::new(2, "theta").unwrap();
        let ctx = analytic_context(&tower, 40);
        let field = TorsionField::new(&tower, 0).unwrap();
        let table = OmegaTable::new(&field).unwrap();
        let rep = embed_compare(&ctx, &field, &table, 40).unwrap();
        assert!(rep.passed, "{rep:?}");
    }

    #[test]
    fn pellarin_residual_and_monotonicity() {
        for (q, p) in [(2u64, "theta"), (3, "theta")] {
            let ctx = ctx_for(q, p, 20);
            let rep = pellarin_check(&ctx, 1, 8).unwrap();
            assert!(rep.passed, "q={q}: {rep:?}");
            // residual floor improves monotonically with N
            let mut last = i64::MIN;
            for n in [2usize, 4, 6, 8] {
                let r = pellarin_check(&ctx, 1, n).unwrap();
                assert!(r.passed);
                assert!(r.implied_floor >= last);
                last = r.implied_floor;
            }
        }
    }

    #[test]
    fn l_crosscheck_small() {
        let tower = FieldTower::new(3, "theta").unwrap();
        let ctx = analytic_context(&tower, 20);
        let field = TorsionField::new(&tower, 0).unwrap();
        let lm = crate::lvalues::l_matrix(&field, 1).unwrap();
        let rep = l_crosscheck(&ctx, &field, &lm, 0, 8).unwrap();
        assert!(rep.passed, "{rep:?}");
        assert!(rep.implied_floor > 0);
    }

    #[test]
    fn precision_soundness_double_run() {
        // doubling the working precision changes no digit within the
        // original floor
        let tower = FieldTower::new(3, "theta").unwrap();
        let c1 = LaurentCtx::new(&tower, 80);
        let c2 = LaurentCtx::new(&tower, 160);
        let p1 = pi_tilde(&c1);
        let p2 = pi_tilde(&c2);
        let diff = c2.sub(&c2.truncate(&p2, 80), &p1);
        assert!(c2.truncate(&diff, p1.floor()).known_zero());
        let w1 = omega_sum_route(&c1, 1, &tower.fqd().zero()).unwrap();
        let w2 = omega_sum_route(&c2, 1, &tower.fqd().zero()).unwrap();
        let diff = c2.sub(&c2.truncate(&w2, w1.floor()), &w1);
        assert!(c2.truncate(&diff, w1.floor()).known_zero());
    }
}
