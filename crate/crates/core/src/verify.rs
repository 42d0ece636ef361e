//! The full verification suite for one configuration `(q, 𝔭, n)`: every
//! module's headline identities run back to back, each reported as a named
//! check with a one-line detail. The CLI `verify` command is a thin wrapper
//! around [`run_verify`].

use std::sync::Arc;
use std::time::Instant;

use crate::algebra::field::FFElem;
use crate::algebra::hyper;
use crate::algebra::interp::{self, ConstSpace};
use crate::algebra::poly::{self, Poly};
use crate::algebra::tower::FieldTower;
use crate::analytic;
use crate::basis;
use crate::carlitz::{self, carlitz_eval, residue_enum};
use crate::error::Result;
use crate::laurent::LaurentCtx;
use crate::lvalues;
use crate::omega::{self, OmegaTable};
use crate::report::{ConfigEcho, Report};
use crate::torsion::{TorsionElem, TorsionField};
use crate::valuation::{self, RationalVal};

/// Configuration of a single run.
#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub q: u64,
    pub p_text: String,
    pub n: usize,
    /// Target v-digit floor for the analytic cross-checks; `None` skips the
    /// analytic section.
    pub digits: Option<i64>,
}

/// Deterministic seed from the configuration, echoed in reports.
pub fn config_seed(cfg: &VerifyConfig) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    let mut mix = |v: u64| {
        h ^= v;
        h = h.wrapping_mul(0x100000001b3);
    };
    mix(cfg.q);
    mix(cfg.n as u64);
    for b in cfg.p_text.bytes() {
        mix(b as u64);
    }
    h
}

struct Sampler(u64);

impl Sampler {
    fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x.wrapping_mul(0x2545f4914f6cdd1d)
    }

    fn poly(&mut self, field: &Arc<crate::algebra::field::FiniteField>, len: usize) -> Poly {
        let coeffs = (0..len)
            .map(|_| field.decode(self.next() as u128 % field.order()))
            .collect();
        Poly::from_coeffs(field, coeffs)
    }
}

/// Run the whole suite and collect a report. Construction errors (reducible
/// or non-monic `𝔭`, bad `q`) surface as `Err`, which the CLI maps to the
/// usage exit code.
pub fn run_verify(cfg: &VerifyConfig) -> Result<Report> {
    let seed = config_seed(cfg);
    let mut report = Report::new(
        "verify",
        ConfigEcho {
            q: cfg.q,
            p: cfg.p_text.clone(),
            n: cfg.n,
            digits: cfg.digits,
        },
        seed,
    );
    let tower = FieldTower::new(cfg.q, &cfg.p_text)?;
    let field = TorsionField::new(&tower, cfg.n)?;
    let table = OmegaTable::new(&field)?;
    let mut sampler = Sampler(seed | 1);

    let timed = |report: &mut Report, name: &str, f: &mut dyn FnMut() -> (bool, String)| {
        let t0 = Instant::now();
        let (passed, detail) = f();
        report.timings_ms.push((name.to_string(), t0.elapsed().as_millis()));
        report.push(name, passed, detail);
    };

    timed(&mut report, "carlitz_composition", &mut || {
        check_carlitz_composition(&tower)
    });
    timed(&mut report, "exact_torsion_order", &mut || {
        check_exact_torsion_order(&field)
    });
    timed(&mut report, "qpoly_two_routes", &mut || {
        check_qpoly_routes(&tower, cfg.n)
    });
    timed(&mut report, "root_coefficients_two_routes", &mut || {
        check_root_coefficients_routes(&tower, &mut sampler)
    });
    timed(&mut report, "torsion_coefficients", &mut || {
        check_torsion_coefficients(&field, &table)
    });
    timed(&mut report, "galois_action_triangular", &mut || {
        check_galois_action(&field, &table)
    });
    timed(&mut report, "omega_recursion", &mut || {
        check_recursion(&field, &table)
    });
    timed(&mut report, "rho_representation", &mut || {
        check_rho(&tower, cfg.n)
    });
    timed(&mut report, "twist_equivariance", &mut || {
        check_twist_equivariance(&field, &mut sampler)
    });
    timed(&mut report, "valuation_table", &mut || {
        check_valuation_table(&tower, cfg.n)
    });
    timed(&mut report, "min_poly_newton", &mut || {
        check_min_poly(&field, &table)
    });
    timed(&mut report, "integral_basis", &mut || {
        check_integral_basis(&field, &table)
    });
    timed(&mut report, "normal_basis", &mut || {
        check_normal_basis(&field, &table)
    });
    timed(&mut report, "l_matrix", &mut || {
        check_l_matrix(&field)
    });
    timed(&mut report, "generalized_eigenspace", &mut || {
        check_eigenspace(&field, &table)
    });
    if field.level() == 0 {
        timed(&mut report, "isotypic_decomposition", &mut || {
            check_isotypic(&field, &table)
        });
    }
    if let Some(digits) = cfg.digits {
        let ctx = analytic::analytic_context(&tower, digits);
        timed(&mut report, "analytic_embed_compare", &mut || {
            check_embed(&ctx, &field, &table, digits)
        });
        timed(&mut report, "analytic_pellarin", &mut || {
            check_pellarin(&ctx)
        });
        timed(&mut report, "analytic_l_crosscheck", &mut || {
            check_l_cross(&ctx, &field)
        });
    }
    Ok(report)
}

fn check_carlitz_composition(tower: &Arc<FieldTower>) -> (bool, String) {
    let fq = tower.fq().clone();
    let q = tower.q();
    let tw = carlitz::carlitz_coeffs(&fq, &poly::parse_poly(&fq, "theta^2").unwrap());
    let middle = Poly::monomial(&fq, fq.one(), q as usize).add(&fq, &Poly::x(&fq));
    let formula_ok = tw.coeffs().len() == 3
        && tw.coeffs()[0] == poly::parse_poly(&fq, "theta^2").unwrap()
        && tw.coeffs()[1] == middle
        && tw.coeffs()[2] == Poly::one(&fq);
    // composition and additivity on a deterministic sample
    let ring = carlitz::XRing(&fq);
    let x = carlitz::XPoly {
        coeffs: vec![Poly::zero(), Poly::one(&fq)],
    };
    let mut comp_ok = true;
    let polys: Vec<Poly> = ["theta", "theta+1", "theta^2+theta", "theta^3+1"]
        .iter()
        .map(|s| poly::parse_poly(&fq, s).unwrap())
        .collect();
    for a in &polys {
        for b in &polys {
            let lhs = carlitz::carlitz_xpoly(&fq, &a.mul(&fq, b));
            let inner = carlitz_eval(&fq, b, &ring, &x);
            let rhs = carlitz_eval(&fq, a, &ring, &inner);
            comp_ok &= lhs == rhs;
            let sum = carlitz::carlitz_xpoly(&fq, &a.add(&fq, b));
            let parts =
                carlitz::carlitz_xpoly(&fq, a).add(&fq, &carlitz::carlitz_xpoly(&fq, b));
            comp_ok &= sum == parts;
        }
    }
    (
        formula_ok && comp_ok,
        format!("c_theta^2 = tau^2+(theta^q+theta)tau+theta^2: {formula_ok}; composition: {comp_ok}"),
    )
}

fn check_exact_torsion_order(field: &Arc<TorsionField>) -> (bool, String) {
    let tower = field.tower();
    let fq = tower.fq().clone();
    let x = field.x_gen();
    let n = field.level();
    let killed = carlitz_eval(
        &fq,
        &tower.pbar().pow(&fq, (n + 1) as u64),
        field.as_ref(),
        &x,
    );
    let alive = carlitz_eval(&fq, &tower.pbar().pow(&fq, n as u64), field.as_ref(), &x);
    let ok = field.is_zero(&killed) && !field.is_zero(&alive);
    (ok, format!("dim {} generator has exact order", field.dim()))
}

fn check_qpoly_routes(tower: &Arc<FieldTower>, n: usize) -> (bool, String) {
    let mut ok = true;
    for level in 0..=n.max(2) {
        let qp = omega::q_poly(tower.fq(), tower.pbar(), level);
        let oracle = omega::q_poly_interpolated(tower, level);
        for (i, c) in qp.coeffs.iter().enumerate() {
            ok &= tower.lift_poly(c) == oracle[i];
        }
    }
    (ok, format!("congruence route = interpolation route, levels 0..={}", n.max(2)))
}

fn check_root_coefficients_routes(
    tower: &Arc<FieldTower>,
    sampler: &mut Sampler,
) -> (bool, String) {
    let fqd = tower.fqd().clone();
    let space = ConstSpace(&fqd);
    let len = 3 * (tower.p_abs() as usize - 1) + 1;
    let mut ok = true;
    for _ in 0..100 {
        let phi = sampler.poly(&fqd, len);
        let vals: Vec<FFElem> = tower.zetas().iter().map(|z| phi.eval(&fqd, z)).collect();
        let via_vand = interp::root_coefficients(tower.as_ref(), &space, &vals).unwrap();
        let via_fold = interp::root_coefficients_periodic(tower, &phi);
        ok &= via_vand.len() == via_fold.len()
            && via_vand
                .iter()
                .zip(via_fold.iter())
                .all(|(a, b)| fqd.eq_elem(a, b));
    }
    (ok, "Vandermonde route = periodicity route on 100 samples".into())
}

fn check_torsion_coefficients(field: &Arc<TorsionField>, table: &OmegaTable) -> (bool, String) {
    let tower = field.tower();
    let fq = tower.fq().clone();
    let n = field.level();
    let mut ok = true;
    for j in 0..=n {
        for i in 0..tower.d() {
            let c = table.coeff(j, i).unwrap();
            let killed = carlitz_eval(
                &fq,
                &tower.pbar().pow(&fq, (j + 1) as u64),
                field.as_ref(),
                c,
            );
            let alive = carlitz_eval(&fq, &tower.pbar().pow(&fq, j as u64), field.as_ref(), c);
            ok &= field.is_zero(&killed) && !field.is_zero(&alive);
        }
    }
    (
        ok,
        "c_(j),i in C[p^(j+1)] \\ C[p^j] for all j, i".into(),
    )
}

fn check_galois_action(field: &Arc<TorsionField>, table: &OmegaTable) -> (bool, String) {
    let tower = field.tower();
    let fq = tower.fq().clone();
    let fqd = tower.fqd().clone();
    let n = field.level();
    let units = residue_enum(&fq, tower.pbar(), n, true);
    let mut ok = true;
    for a in &units {
        let map = field.sigma_map(a).unwrap();
        for k in 1..=tower.d() {
            let z = tower.zeta_k(k).unwrap();
            let expand = hyper::hyper_expand(&fq, tower.fqd(), a, &z, n).unwrap();
            for j in 0..=n {
                let lhs = field.apply_sigma(&map, table.omega(j, k).unwrap());
                let mut rhs = field.zero();
                for (l, coef) in expand.iter().take(j + 1).enumerate() {
                    let term = field.scale_poly(
                        table.omega(j - l, k).unwrap(),
                        &Poly::constant(&fqd, coef.clone()),
                    );
                    rhs = field.add(&rhs, &term);
                }
                ok &= lhs == rhs;
            }
        }
    }
    (
        ok,
        format!("sigma_a action triangular for all {} units", units.len()),
    )
}

fn check_recursion(field: &Arc<TorsionField>, table: &OmegaTable) -> (bool, String) {
    let tower = field.tower();
    let fqd = tower.fqd().clone();
    let q = tower.q();
    let n = field.level();
    let d = tower.d();
    let mut ok = true;
    for j in 0..=n {
        for k in 1..=d {
            let lhs = field.pow(table.omega(j, k).unwrap(), q);
            let k_next = k % d + 1;
            let zq = tower.zeta_k(k_next).unwrap();
            let lin = Poly::from_coeffs(&fqd, vec![zq, fqd.neg(&fqd.one())]);
            let mut rhs = field.scale_poly(table.omega(j, k_next).unwrap(), &lin);
            if j > 0 {
                rhs = field.add(&rhs, table.omega(j - 1, k_next).unwrap());
            }
            ok &= lhs == rhs;
        }
    }
    let mut frob_detail = String::new();
    if n >= 1 {
        let w = table.omega(n, 1).unwrap();
        let neq = field.frobenius_const(w) != field.pow(w, q);
        ok &= neq;
        frob_detail = format!("; F(omega^(n)) != omega^(n)^q: {neq}");
    }
    (ok, format!("twist recursion at all roots{frob_detail}"))
}

fn check_rho(tower: &Arc<FieldTower>, n: usize) -> (bool, String) {
    let fq = tower.fq().clone();
    let fqd = tower.fqd().clone();
    let modulus = tower.pbar().pow(&fq, (n + 1) as u64);
    let units = residue_enum(&fq, tower.pbar(), n, true);
    let mut ok = true;
    for a in &units {
        let ra = omega::rho_matrix(tower, a, 1, n + 1).unwrap();
        if ra.is_identity(&fqd) {
            ok &= a == &Poly::one(&fq);
        }
        for b in &units {
            let rb = omega::rho_matrix(tower, b, 1, n + 1).unwrap();
            let ab = a.mul(&fq, b).rem(&fq, &modulus);
            ok &= ra.mul(&fqd, &rb) == omega::rho_matrix(tower, &ab, 1, n + 1).unwrap();
        }
    }
    (
        ok,
        format!("rho multiplicative and faithful on {} units", units.len()),
    )
}

fn check_twist_equivariance(field: &Arc<TorsionField>, sampler: &mut Sampler) -> (bool, String) {
    // Lemma-style statement: for a polynomial φ over K_n(ζ) and the Carlitz
    // action 𝔣 = 𝔠_a, the root-expansion coefficients of φ^𝔣 are 𝔣 applied
    // to those of φ.
    let tower = field.tower().clone();
    let fq = tower.fq().clone();
    let fqd = tower.fqd().clone();
    let d = tower.d();
    let mut ok = true;
    for a_text in ["theta+1", "theta^2+1"] {
        let a = poly::parse_poly(&fq, a_text).unwrap();
        // random polynomial φ of degree < 2d with torsion coefficients
        let x = field.x_gen();
        let phi: Vec<TorsionElem> = (0..2 * d)
            .map(|_| {
                let c = sampler.poly(&fqd, 3);
                field.scale_poly(&field.pow(&x, sampler.next() % field.dim() as u64), &c)
            })
            .collect();
        let eval_at = |coeffs: &[TorsionElem], z: &FFElem| -> TorsionElem {
            let mut acc = field.zero();
            let mut zp = fqd.one();
            for c in coeffs {
                acc = field.add(&acc, &field.scale_poly(c, &Poly::constant(&fqd, zp.clone())));
                zp = fqd.mul(&zp, z);
            }
            acc
        };
        let twisted: Vec<TorsionElem> = phi
            .iter()
            .map(|c| carlitz_eval(&fq, &a, field.as_ref(), c))
            .collect();
        let zetas = tower.zetas();
        let values: Vec<TorsionElem> = zetas.iter().map(|z| eval_at(&phi, z)).collect();
        let f_l = interp::root_coefficients(&tower, field.as_ref(), &values).unwrap();
        let twisted_values: Vec<TorsionElem> =
            zetas.iter().map(|z| eval_at(&twisted, z)).collect();
        let g_l = interp::root_coefficients(&tower, field.as_ref(), &twisted_values).unwrap();
        for (f, g) in f_l.iter().zip(g_l.iter()) {
            ok &= &carlitz_eval(&fq, &a, field.as_ref(), f) == g;
        }
    }
    (ok, "coefficients of twisted values = twist of coefficients".into())
}

fn check_valuation_table(tower: &Arc<FieldTower>, n: usize) -> (bool, String) {
    let q = tower.q() as i64;
    let p_abs = tower.p_abs() as i64;
    let d = tower.d();
    let mut ok = true;
    let mut count = 0;
    for level in 0..=n {
        let f = TorsionField::new(tower, level).unwrap();
        let t = OmegaTable::new(&f).unwrap();
        for i in 1..=d {
            for j in 0..d {
                let w = t.omega_at_power(level, i, j).unwrap();
                let got = valuation::val_kn(&f, w, i).unwrap();
                let expect =
                    RationalVal::new(q.pow(j as u32), p_abs.pow(level as u32) * (p_abs - 1));
                ok &= got == expect;
                count += 1;
            }
        }
    }
    (
        ok,
        format!("v_i(omega^(n)(zeta_i^(q^j))) = q^j/(|p|^n(|p|-1)) at {count} points"),
    )
}

fn check_min_poly(field: &Arc<TorsionField>, table: &OmegaTable) -> (bool, String) {
    let d = field.tower().d();
    let mut ok = true;
    let mut slopes = Vec::new();
    for i in 1..=d {
        for j in 0..d {
            let rep = valuation::min_poly_check(field, table, i, j).unwrap();
            ok &= rep.passed();
            if i == 1 {
                slopes.push(rep.expected_slope.to_string());
            }
        }
    }
    (ok, format!("single Newton slopes {}", slopes.join(", ")))
}

fn check_integral_basis(field: &Arc<TorsionField>, table: &OmegaTable) -> (bool, String) {
    let rep = basis::basis_determinant_test_with(field, table).unwrap();
    let det = poly::format_poly(field.tower().fqd(), &rep.determinant, "theta");
    (
        rep.passed(),
        format!(
            "{}x{} determinant = {det}; unit {}, inverse integral {}",
            rep.dim, rep.dim, rep.det_is_unit, rep.inverse_integral
        ),
    )
}

fn check_normal_basis(field: &Arc<TorsionField>, table: &OmegaTable) -> (bool, String) {
    let rep = basis::normal_basis_rank_with(field, table).unwrap();
    (
        rep.full,
        format!(
            "orbit of eta_n under {} conjugates spans: rank {}/{}",
            rep.subgroup_order, rep.rank, rep.dim
        ),
    )
}

fn check_l_matrix(field: &Arc<TorsionField>) -> (bool, String) {
    let lm = lvalues::l_matrix(field, 1).unwrap();
    let eq = lvalues::l_equivariance_check(field, &lm).unwrap();
    let int = lvalues::l_integrality_check(field, &lm);
    (
        eq.passed && int.passed,
        format!(
            "equivariance on {} units: {}; integrality pattern: {} (top integral: {})",
            eq.units_checked, eq.passed, int.passed, int.top_entry_integral
        ),
    )
}

fn check_eigenspace(field: &Arc<TorsionField>, table: &OmegaTable) -> (bool, String) {
    let tower = field.tower();
    let fq = tower.fq().clone();
    let fqd = tower.fqd().clone();
    let n = field.level();
    let units = residue_enum(&fq, tower.pbar(), n, true);
    let exps_list = omega::basis_exponents(tower.q(), tower.d(), n);
    let mut ok = true;
    let mut escalated = 0usize;
    for exps in &exps_list {
        let y = omega::digit_monomial(table, exps).unwrap();
        let l = exps.character_exponent(tower.q(), tower.d());
        let m = 1 + exps.weight();
        for a in &units {
            let map = field.sigma_map(a).unwrap();
            let az = interp::residue_at_zeta(tower, a);
            let azl = fqd.pow(&az, l as u128);
            let mut v = y.clone();
            for _ in 0..m {
                let s = field.apply_sigma(&map, &v);
                v = field.sub(&s, &field.scale_poly(&v, &Poly::constant(&fqd, azl.clone())));
            }
            if !field.is_zero(&v) {
                // escalate to the field degree before declaring failure
                let mut extra = 0;
                while !field.is_zero(&v) && (m as usize + extra) < field.dim() {
                    let s = field.apply_sigma(&map, &v);
                    v = field.sub(&s, &field.scale_poly(&v, &Poly::constant(&fqd, azl.clone())));
                    extra += 1;
                }
                escalated += 1;
                ok &= field.is_zero(&v);
            }
        }
    }
    let detail = if escalated == 0 {
        format!(
            "(sigma_a - a(zeta)^l)^m kills all {} monomials at m = 1 + weight",
            exps_list.len()
        )
    } else {
        format!("required escalation beyond the weight bound in {escalated} cases")
    };
    (ok && escalated == 0, detail)
}

fn check_isotypic(field: &Arc<TorsionField>, table: &OmegaTable) -> (bool, String) {
    let tower = field.tower().clone();
    let fqd = tower.fqd().clone();
    let w = table.omega(0, 1).unwrap();
    let y = field.add(w, &field.one());
    let comps = basis::isotypic_decompose(field, &y).unwrap();
    let mut total = field.zero();
    let mut ok = true;
    for (_, c) in &comps {
        total = field.add(&total, c);
    }
    ok &= total == y;
    for a in interp::unit_residues(&tower) {
        let az = interp::residue_at_zeta(&tower, &a);
        let map = field.sigma_map(&a).unwrap();
        for (k, c) in &comps {
            let lhs = field.apply_sigma(&map, c);
            let rhs = field.scale_poly(c, &Poly::constant(&fqd, fqd.pow(&az, *k as u128)));
            ok &= lhs == rhs;
        }
    }
    (ok, format!("{} character components, eigen and summing", comps.len()))
}

fn check_embed(
    ctx: &LaurentCtx,
    field: &Arc<TorsionField>,
    table: &OmegaTable,
    digits: i64,
) -> (bool, String) {
    match analytic::embed_compare(ctx, field, table, digits) {
        Ok(rep) => (
            rep.passed,
            format!(
                "min residual v^{} (target v^{}), exp truncation J = {}",
                rep.min_residual, rep.target_floor, rep.exp_truncation_level
            ),
        ),
        Err(e) => (false, format!("error: {e}")),
    }
}

fn check_pellarin(ctx: &LaurentCtx) -> (bool, String) {
    match analytic::pellarin_check(ctx, 1, 8) {
        Ok(rep) => (
            rep.passed,
            format!(
                "residual zero to v^{} at degree bound {}",
                rep.implied_floor, rep.degree_bound
            ),
        ),
        Err(e) => (false, format!("error: {e}")),
    }
}

fn check_l_cross(ctx: &LaurentCtx, field: &Arc<TorsionField>) -> (bool, String) {
    let lm = match lvalues::l_matrix(field, 1) {
        Ok(lm) => lm,
        Err(e) => return (false, format!("error: {e}")),
    };
    let mut ok = true;
    let mut floors = Vec::new();
    for j in 0..=field.level() {
        match analytic::l_crosscheck(ctx, field, &lm, j, 8) {
            Ok(rep) => {
                ok &= rep.passed;
                floors.push(rep.implied_floor.to_string());
            }
            Err(e) => return (false, format!("error: {e}")),
        }
    }
    (
        ok,
        format!("finite sum = truncated series to v^[{}]", floors.join(", ")),
    )
}
