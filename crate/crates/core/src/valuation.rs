//! Valuations at the primes above `𝔭` and their ℚ-valued extensions to the
//! torsion tower, Newton polygons, minimal-polynomial verification, and the
//! norm factorization experiment.
//!
//! `(𝔭)` splits completely in `K(ζ)` into `(θ - ζ_i)`; those primes ramify
//! totally in `K_n(ζ)`, so the extension of `v_i` is computed through norms:
//! `v_i(y) = v_i(N(y))/D`. No ideal arithmetic is ever needed.

use std::sync::Arc;

use crate::algebra::factor::{self, Factorization};
use crate::algebra::field::{FFElem, FiniteField};
use crate::algebra::hyper::binom_mod_p;
use crate::algebra::poly::{self, Poly};
use crate::algebra::ratfun::RatFun;
use crate::algebra::tower::FieldTower;
use crate::error::{Error, Result};
use crate::omega::OmegaTable;
use crate::torsion::{TorsionElem, TorsionField};

/// Exact rational valuation, with `+∞` as the value of 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RationalVal {
    Finite { num: i64, den: i64 },
    Infinity,
}

impl RationalVal {
    pub fn new(num: i64, den: i64) -> RationalVal {
        assert!(den != 0, "zero denominator");
        let (mut num, mut den) = if den < 0 { (-num, -den) } else { (num, den) };
        let g = gcd_i64(num.unsigned_abs(), den.unsigned_abs());
        if g > 1 {
            num /= g as i64;
            den /= g as i64;
        }
        RationalVal::Finite { num, den }
    }

    pub fn integer(n: i64) -> RationalVal {
        RationalVal::Finite { num: n, den: 1 }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, RationalVal::Infinity)
    }

    pub fn add(&self, other: &RationalVal) -> RationalVal {
        match (self, other) {
            (RationalVal::Finite { num: a, den: b }, RationalVal::Finite { num: c, den: d }) => {
                RationalVal::new(a * d + c * b, b * d)
            }
            _ => RationalVal::Infinity,
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        match self {
            RationalVal::Finite { num, .. } => *num >= 0,
            RationalVal::Infinity => true,
        }
    }
}

impl PartialOrd for RationalVal {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RationalVal {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (self, other) {
            (RationalVal::Infinity, RationalVal::Infinity) => std::cmp::Ordering::Equal,
            (RationalVal::Infinity, _) => std::cmp::Ordering::Greater,
            (_, RationalVal::Infinity) => std::cmp::Ordering::Less,
            (RationalVal::Finite { num: a, den: b }, RationalVal::Finite { num: c, den: d }) => {
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
        }
    }
}

impl std::fmt::Display for RationalVal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RationalVal::Infinity => write!(f, "inf"),
            RationalVal::Finite { num, den } if *den == 1 => write!(f, "{num}"),
            RationalVal::Finite { num, den } => write!(f, "{num}/{den}"),
        }
    }
}

fn gcd_i64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}

/// Order of vanishing of a nonzero polynomial at `θ = z`.
pub fn order_at(fqd: &FiniteField, p: &Poly, z: &FFElem) -> usize {
    assert!(!p.is_zero());
    let mut ord = 0;
    let mut cur = p.clone();
    loop {
        if !cur.eval(fqd, z).is_zero() {
            return ord;
        }
        // synthetic division by (θ - z)
        let lin = Poly::from_coeffs(fqd, vec![fqd.neg(z), fqd.one()]);
        cur = cur.div_exact(fqd, &lin);
        ord += 1;
    }
}

/// `v_i` on `K(ζ)`: order of vanishing at `θ = ζ_i` of the numerator minus
/// that of the denominator.
pub fn val_kzeta(tower: &FieldTower, f: &RatFun, i: usize) -> Result<RationalVal> {
    let z = tower.zeta_k(i)?;
    if f.is_zero() {
        return Ok(RationalVal::Infinity);
    }
    let fqd = tower.fqd();
    let num_ord = order_at(fqd, f.num(), &z) as i64;
    let den_ord = order_at(fqd, f.den(), &z) as i64;
    Ok(RationalVal::integer(num_ord - den_ord))
}

/// The ℚ-valued extension of `v_i` to `K_n(ζ)` through the norm.
pub fn val_kn(field: &TorsionField, y: &TorsionElem, i: usize) -> Result<RationalVal> {
    if field.is_zero(y) {
        return Ok(RationalVal::Infinity);
    }
    let norm = field.norm_to_kzeta(y);
    match val_kzeta(field.tower(), &norm, i)? {
        RationalVal::Finite { num, den } => {
            Ok(RationalVal::new(num, den * field.dim() as i64))
        }
        RationalVal::Infinity => unreachable!("norm of a nonzero element is nonzero"),
    }
}

/// Newton polygon returned as root valuations: the slope list holds the
/// negatives of the lower-hull slopes, sorted weakly increasing, with
/// multiplicities summing to `deg - ord_0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub slopes: Vec<(RationalVal, usize)>,
}

impl NewtonPolygon {
    pub fn single_slope(&self) -> Option<&RationalVal> {
        if self.slopes.len() == 1 {
            Some(&self.slopes[0].0)
        } else {
            None
        }
    }
}

/// Build the polygon from per-coefficient valuations (`vals[k]` is the
/// valuation of the coefficient of `X^k`; use `Infinity` for absent terms).
pub fn newton_polygon(vals: &[RationalVal]) -> Result<NewtonPolygon> {
    let pts: Vec<(i64, i64, i64)> = vals
        .iter()
        .enumerate()
        .filter_map(|(i, v)| match v {
            RationalVal::Finite { num, den } => Some((i as i64, *num, *den)),
            RationalVal::Infinity => None,
        })
        .collect();
    if pts.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    // Lower convex hull by monotone chain; y-coordinates are rationals,
    // cross products are taken over i128 after clearing denominators.
    let cross = |o: &(i64, i64, i64), a: &(i64, i64, i64), b: &(i64, i64, i64)| -> i128 {
        // sign of (a - o) × (b - o) with y = num/den
        let (ox, on, od) = (o.0 as i128, o.1 as i128, o.2 as i128);
        let (ax, an, ad) = (a.0 as i128, a.1 as i128, a.2 as i128);
        let (bx, bn, bd) = (b.0 as i128, b.1 as i128, b.2 as i128);
        // (ax-ox)·(b_y - o_y) - (bx-ox)·(a_y - o_y), scaled by ad·bd·od > 0
        (ax - ox) * (bn * od - on * bd) * ad - (bx - ox) * (an * od - on * ad) * bd
    };
    let mut hull: Vec<(i64, i64, i64)> = Vec::new();
    for p in &pts {
        while hull.len() >= 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(*p);
    }
    let mut slopes = Vec::new();
    for w in hull.windows(2) {
        let (x0, n0, d0) = w[0];
        let (x1, n1, d1) = w[1];
        let run = x1 - x0;
        // negative of the segment slope: (y0 - y1)/run
        let num = n0 * d1 - n1 * d0;
        let den = d0 * d1 * run;
        slopes.push((RationalVal::new(num, den), run as usize));
    }
    slopes.sort_by_key(|a| a.0);
    // merge equal slopes
    let mut merged: Vec<(RationalVal, usize)> = Vec::new();
    for (s, m) in slopes {
        match merged.last_mut() {
            Some((ls, lm)) if *ls == s => *lm += m,
            _ => merged.push((s, m)),
        }
    }
    Ok(NewtonPolygon { slopes: merged })
}

/// `β(t) = Π_{h=0}^{d-1} (t - θ^{q^h})` as a polynomial in `t` over
/// `F_{q^d}[θ]`, ascending in `t`.
pub fn beta_tpoly(tower: &FieldTower) -> Vec<Poly> {
    let fqd = tower.fqd();
    let q = tower.q();
    let mut acc: Vec<Poly> = vec![Poly::one(fqd)];
    let mut qe: u64 = 1;
    for _ in 0..tower.d() {
        // multiply by (t - θ^{q^h})
        let theta_pow = Poly::monomial(fqd, fqd.one(), qe as usize);
        let mut next = vec![Poly::zero(); acc.len() + 1];
        for (k, c) in acc.iter().enumerate() {
            next[k + 1] = next[k + 1].add(fqd, c);
            next[k] = next[k].sub(fqd, &c.mul(fqd, &theta_pow));
        }
        acc = next;
        qe = qe.checked_mul(q).expect("q^h overflow");
    }
    acc
}

/// `β^{(l)}(z)`: the l-th hyperderivative of `β` in `t`, evaluated at a
/// constant `z ∈ F_{q^d}`; the result is a polynomial in θ.
pub fn beta_hyper_at(tower: &FieldTower, l: usize, z: &FFElem) -> Poly {
    let fqd = tower.fqd();
    let p = tower.p();
    let beta = beta_tpoly(tower);
    let mut acc = Poly::zero();
    let mut zpow = fqd.one(); // z^{k-l}
    for (k, c) in beta.iter().enumerate().skip(l) {
        let b = binom_mod_p(k as u64, l as u64, p);
        if b != 0 {
            let scalar = fqd.mul(&fqd.from_u64(b), &zpow);
            acc = acc.add(fqd, &c.scale(fqd, &scalar));
        }
        zpow = fqd.mul(&zpow, z);
    }
    acc
}

/// Everything `min_poly_check` reports for one `(n, i, j)`.
#[derive(Debug, Clone)]
pub struct MinPolyReport {
    pub level: usize,
    pub root_index: usize,
    pub frobenius_power: usize,
    pub identity_ok: bool,
    pub polygon: NewtonPolygon,
    pub polygon_single_slope_ok: bool,
    pub expected_slope: RationalVal,
    pub valuation: RationalVal,
    pub valuation_ok: bool,
    pub failures: Vec<String>,
}

impl MinPolyReport {
    pub fn passed(&self) -> bool {
        self.identity_ok && self.polygon_single_slope_ok && self.valuation_ok
    }
}

/// Verify, for `z = ζ_i^{q^j}`, that `ω^{(n)}(z)` is an exact root of
/// `X^{|𝔭|-1} - β(z)` (n = 0) or `X^{|𝔭|} - β(z)X - ξ_n(z)` (n ≥ 1), that
/// the Newton polygon of that polynomial over the previous level has the
/// single slope `q^j/(|𝔭|^n(|𝔭|-1))`, and that `val_kn` agrees.
pub fn min_poly_check(
    field: &Arc<TorsionField>,
    table: &OmegaTable,
    i: usize,
    j: usize,
) -> Result<MinPolyReport> {
    let tower = field.tower().clone();
    let fqd = tower.fqd().clone();
    let n = field.level();
    let d = tower.d();
    if i < 1 || i > d || j >= d {
        return Err(Error::IndexOutOfRange(format!("(i={i}, j={j})")));
    }
    let p_abs = tower.p_abs() as i64;
    let mut failures = Vec::new();

    let root_idx = (i - 1 + j) % d + 1;
    let z = tower.zeta_k(root_idx)?;
    let beta_z = {
        let beta = beta_tpoly(&tower);
        let mut acc = Poly::zero();
        let mut zp = fqd.one();
        for c in beta.iter() {
            acc = acc.add(&fqd, &c.scale(&fqd, &zp));
            zp = fqd.mul(&zp, &z);
        }
        acc
    };
    let w = table.omega(n, root_idx)?.clone();

    // Exact root identity in K_n(ζ).
    let identity_ok = if n == 0 {
        let lhs = field.pow(&w, (p_abs - 1) as u64);
        let rhs = field.from_poly(&beta_z);
        let ok = lhs == rhs;
        if !ok {
            failures.push("omega(z)^(|p|-1) != beta(z)".into());
        }
        ok
    } else {
        let lhs = field.pow(&w, p_abs as u64);
        let mut rhs = field.scale_poly(&w, &beta_z);
        for l in 1..=n {
            let bl = beta_hyper_at(&tower, l, &z);
            let term = field.scale_poly(table.omega(n - l, root_idx)?, &bl);
            rhs = field.add(&rhs, &term);
        }
        let ok = lhs == rhs;
        if !ok {
            failures.push("omega^(n)(z)^|p| != beta(z)·omega^(n)(z) + xi_n(z)".into());
        }
        ok
    };

    // Newton polygon over the previous level.
    let expected_slope = RationalVal::new(
        q_pow(tower.q(), j),
        pow_i64(p_abs, n as u32) * (p_abs - 1),
    );
    let beta_val = val_kzeta(
        &tower,
        &RatFun::from_poly(&fqd, beta_z.clone()),
        i,
    )?;
    let polygon = if n == 0 {
        let deg = (p_abs - 1) as usize;
        let mut vals = vec![RationalVal::Infinity; deg + 1];
        vals[0] = beta_val;
        vals[deg] = RationalVal::integer(0);
        newton_polygon(&vals)?
    } else {
        // ξ_n evaluated in the previous level, where its valuation lives.
        let prev_field = TorsionField::new(&tower, n - 1)?;
        let prev_table = OmegaTable::new(&prev_field)?;
        let mut xi_prev = prev_field.zero();
        for l in 1..=n {
            let bl = beta_hyper_at(&tower, l, &z);
            let term = prev_field.scale_poly(prev_table.omega(n - l, root_idx)?, &bl);
            xi_prev = prev_field.add(&xi_prev, &term);
        }
        let xi_val = val_kn(&prev_field, &xi_prev, i)?;
        let deg = p_abs as usize;
        let mut vals = vec![RationalVal::Infinity; deg + 1];
        vals[0] = xi_val;
        vals[1] = beta_val;
        vals[deg] = RationalVal::integer(0);
        newton_polygon(&vals)?
    };
    let polygon_single_slope_ok = polygon.single_slope() == Some(&expected_slope);
    if !polygon_single_slope_ok {
        failures.push(format!(
            "newton polygon {:?} does not have the single slope {expected_slope}",
            polygon.slopes
        ));
    }

    let valuation = val_kn(field, &w, i)?;
    let valuation_ok = valuation == expected_slope;
    if !valuation_ok {
        failures.push(format!(
            "val_kn gave {valuation}, expected {expected_slope}"
        ));
    }

    Ok(MinPolyReport {
        level: n,
        root_index: i,
        frobenius_power: j,
        identity_ok,
        polygon,
        polygon_single_slope_ok,
        expected_slope,
        valuation,
        valuation_ok,
        failures,
    })
}

fn q_pow(q: u64, j: usize) -> i64 {
    (q as i64).pow(j as u32)
}

fn pow_i64(b: i64, e: u32) -> i64 {
    b.pow(e)
}

/// Factorization report for `N(ω^{(j)}(ζ_i))` over `F_{q^d}[θ]`: which
/// factors are the primes `(θ - ζ_k)` above `𝔭`, and which are not. The
/// presence of extra primes is reported, never asserted.
#[derive(Debug, Clone)]
pub struct NormFactorReport {
    pub derivative_order: usize,
    pub root_index: usize,
    pub norm: RatFun,
    pub factorization: Factorization,
    /// `(factor, multiplicity, Some(k) when the factor is θ - ζ_k)`
    pub classified: Vec<(Poly, usize, Option<usize>)>,
    pub extra_prime_count: usize,
}

pub fn norm_factor_experiment(
    field: &TorsionField,
    table: &OmegaTable,
    j: usize,
    i: usize,
    seed: Option<u64>,
) -> Result<NormFactorReport> {
    let tower = field.tower();
    let fqd = tower.fqd().clone();
    let w = table.omega(j, i)?;
    let norm = field.norm_to_kzeta(w);
    let factorization = factor::factor_poly(&fqd, norm.num(), seed)?;
    let zetas = tower.zetas();
    let classified: Vec<(Poly, usize, Option<usize>)> = factorization
        .factors
        .iter()
        .map(|(f, m)| {
            let above = if f.degree() == Some(1) {
                let root = fqd.neg(&f.coeff(&fqd, 0));
                zetas.iter().position(|z| fqd.eq_elem(z, &root)).map(|k| k + 1)
            } else {
                None
            };
            (f.clone(), *m, above)
        })
        .collect();
    let extra_prime_count = classified.iter().filter(|(_, _, k)| k.is_none()).count();
    Ok(NormFactorReport {
        derivative_order: j,
        root_index: i,
        norm,
        factorization,
        classified,
        extra_prime_count,
    })
}

/// Render a polynomial factor for reports.
pub fn factor_display(fqd: &FiniteField, f: &Poly) -> String {
    poly::format_poly(fqd, f, "theta")
}
