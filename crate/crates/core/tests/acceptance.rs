//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! with its elapsed time and asserting the stated budget.
//!
//! Reference configurations:
//!   C1 = (q=2, p=θ²+θ+1), C2 = (q=3, p=θ), C3 = (q=2, p=θ),
//!   C4 = (q=4, p=θ²+θ+g) with g a generator of F_4.

use std::sync::Arc;
use std::time::{Duration, Instant};

use carlitz::algebra::field::FFElem;
use carlitz::algebra::hyper;
use carlitz::algebra::interp::{self, ConstSpace};
use carlitz::algebra::poly::{self, Poly};
use carlitz::algebra::tower::FieldTower;
use carlitz::analytic;
use carlitz::basis;
use carlitz::carlitz::{carlitz_coeffs, carlitz_eval, residue_enum};
use carlitz::lvalues;
use carlitz::omega::{self, OmegaTable};
use carlitz::torsion::TorsionField;
use carlitz::valuation::{self, RationalVal};

const C1: (u64, &str) = (2, "theta^2+theta+1");
const C2: (u64, &str) = (3, "theta");
const C3: (u64, &str) = (2, "theta");
const C4: (u64, &str) = (4, "theta^2+theta+g");

fn tower_of(cfg: (u64, &str)) -> Arc<FieldTower> {
    FieldTower::new(cfg.0, cfg.1).unwrap()
}

fn setup(cfg: (u64, &str), n: usize) -> (Arc<TorsionField>, OmegaTable) {
    let tower = tower_of(cfg);
    let field = TorsionField::new(&tower, n).unwrap();
    let table = OmegaTable::new(&field).unwrap();
    (field, table)
}

fn conclude(criterion: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    println!(
        "ACCEPTANCE {criterion}: PASS ({} ms, budget {} s)",
        elapsed.as_millis(),
        budget.as_secs()
    );
    assert!(
        elapsed <= budget,
        "{criterion} exceeded its budget: {elapsed:?} > {budget:?}"
    );
}

#[test]
fn criterion_01_carlitz_composition() {
    let started = Instant::now();
    for q in [2u64, 3, 4] {
        let tower = match q {
            2 => tower_of(C3),
            3 => tower_of(C2),
            _ => tower_of(C4),
        };
        let fq = tower.fq().clone();
        let tw = carlitz_coeffs(&fq, &poly::parse_poly(&fq, "theta^2").unwrap());
        assert_eq!(tw.coeffs().len(), 3, "q={q}");
        assert_eq!(tw.coeffs()[0], poly::parse_poly(&fq, "theta^2").unwrap());
        let middle = Poly::monomial(&fq, fq.one(), q as usize).add(&fq, &Poly::x(&fq));
        assert_eq!(tw.coeffs()[1], middle, "q={q}: tau coefficient");
        assert_eq!(tw.coeffs()[2], Poly::one(&fq), "q={q}: tau^2 coefficient");
    }
    conclude("01 carlitz_composition", started, Duration::from_secs(1));
}

#[test]
fn criterion_02_galois_action() {
    let started = Instant::now();
    let configs: [((u64, &str), &[usize]); 3] =
        [(C1, &[0, 1]), (C2, &[0, 1, 2]), (C3, &[0, 1])];
    for (cfg, levels) in configs {
        for &n in levels {
            let (field, table) = setup(cfg, n);
            let tower = field.tower().clone();
            let fq = tower.fq().clone();
            let fqd = tower.fqd().clone();
            for a in residue_enum(&fq, tower.pbar(), n, true) {
                let map = field.sigma_map(&a).unwrap();
                for k in 1..=tower.d() {
                    let z = tower.zeta_k(k).unwrap();
                    let expand = hyper::hyper_expand(&fq, tower.fqd(), &a, &z, n).unwrap();
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
                        assert_eq!(
                            lhs, rhs,
                            "galois action failed: q={} p={} n={n} j={j} k={k}",
                            cfg.0, cfg.1
                        );
                    }
                }
            }
        }
    }
    conclude("02 galois_action", started, Duration::from_secs(60));
}

#[test]
fn criterion_03_valuation_theorem() {
    let started = Instant::now();
    let configs: [((u64, &str), usize); 3] = [(C2, 2), (C3, 2), (C1, 1)];
    for (cfg, max_n) in configs {
        let tower = tower_of(cfg);
        let q = tower.q() as i64;
        let p_abs = tower.p_abs() as i64;
        let d = tower.d();
        for n in 0..=max_n {
            let field = TorsionField::new(&tower, n).unwrap();
            let table = OmegaTable::new(&field).unwrap();
            for i in 1..=d {
                for j in 0..d {
                    let w = table.omega_at_power(n, i, j).unwrap();
                    let got = valuation::val_kn(&field, w, i).unwrap();
                    let expect =
                        RationalVal::new(q.pow(j as u32), p_abs.pow(n as u32) * (p_abs - 1));
                    assert_eq!(
                        got, expect,
                        "valuation mismatch: q={} p={} n={n} i={i} j={j}",
                        cfg.0, cfg.1
                    );
                }
            }
        }
    }
    conclude("03 valuation_theorem", started, Duration::from_secs(300));
}

#[test]
fn criterion_04_integral_basis() {
    let started = Instant::now();
    let configs: [((u64, &str), &[usize]); 3] =
        [(C1, &[0, 1]), (C2, &[0, 1]), (C3, &[0, 1, 2])];
    for (cfg, levels) in configs {
        for &n in levels {
            let tower = tower_of(cfg);
            let field = TorsionField::new(&tower, n).unwrap();
            let report = basis::basis_determinant_test(&field).unwrap();
            assert!(
                report.all_integral,
                "non-integral monomial: q={} p={} n={n}",
                cfg.0, cfg.1
            );
            assert!(
                report.det_is_unit,
                "determinant not a unit: q={} p={} n={n}: {:?}",
                cfg.0, cfg.1, report.determinant
            );
            assert!(
                report.inverse_integral && report.product_check_ok,
                "inverse not integral: q={} p={} n={n}",
                cfg.0, cfg.1
            );
        }
    }
    conclude("04 integral_basis", started, Duration::from_secs(600));
}

#[test]
fn criterion_05_nonvanishing_torsion_coefficients() {
    let started = Instant::now();
    let configs: [((u64, &str), &[usize]); 3] =
        [(C1, &[0, 1]), (C2, &[0, 1]), (C3, &[0, 1, 2])];
    for (cfg, levels) in configs {
        for &n in levels {
            let (field, table) = setup(cfg, n);
            let tower = field.tower().clone();
            let fq = tower.fq().clone();
            for j in 0..=n {
                let keep = tower.pbar().pow(&fq, j as u64);
                for i in 0..tower.d() {
                    let c = table.coeff(j, i).unwrap();
                    let alive = carlitz_eval(&fq, &keep, field.as_ref(), c);
                    assert!(
                        !field.is_zero(&alive),
                        "c_({j}),{i} killed by p^{j}: q={} p={} n={n}",
                        cfg.0,
                        cfg.1
                    );
                }
            }
        }
    }
    conclude(
        "05 nonvanishing_torsion_coefficients",
        started,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_06_recursion_and_frobenius_remark() {
    let started = Instant::now();
    let configs: [((u64, &str), usize); 3] = [(C1, 1), (C2, 2), (C3, 2)];
    for (cfg, n) in configs {
        let (field, table) = setup(cfg, n);
        let tower = field.tower().clone();
        let fqd = tower.fqd().clone();
        let q = tower.q();
        let d = tower.d();
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
                assert_eq!(lhs, rhs, "recursion: q={} p={} j={j} k={k}", cfg.0, cfg.1);
            }
        }
    }
    // the remark, pinned at C2 n=1: F(omega^(1)(zeta)) != omega^(1)(zeta)^q
    let (field, table) = setup(C2, 1);
    let w = table.omega(1, 1).unwrap();
    assert_ne!(field.frobenius_const(w), field.pow(w, 3));
    conclude(
        "06 recursion_and_frobenius_remark",
        started,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_07_normal_basis() {
    let started = Instant::now();
    let configs: [((u64, &str), &[usize]); 3] = [(C1, &[1]), (C2, &[1, 2]), (C3, &[1, 2])];
    for (cfg, levels) in configs {
        for &n in levels {
            let tower = tower_of(cfg);
            let field = TorsionField::new(&tower, n).unwrap();
            let report = basis::normal_basis_rank(&field).unwrap();
            assert!(
                report.full,
                "normal basis rank {}/{}: q={} p={} n={n}",
                report.rank, report.dim, cfg.0, cfg.1
            );
        }
    }
    conclude("07 normal_basis", started, Duration::from_secs(600));
}

#[test]
fn criterion_08_l_matrix() {
    let started = Instant::now();
    let configs: [((u64, &str), &[usize]); 3] = [(C1, &[0]), (C2, &[0, 1]), (C3, &[0, 1])];
    for (cfg, levels) in configs {
        for &n in levels {
            let tower = tower_of(cfg);
            let field = TorsionField::new(&tower, n).unwrap();
            let lm = lvalues::l_matrix(&field, 1).unwrap();
            let eq = lvalues::l_equivariance_check(&field, &lm).unwrap();
            assert!(
                eq.passed,
                "equivariance failed at a = {:?}: q={} p={} n={n}",
                eq.first_failure, cfg.0, cfg.1
            );
            let int = lvalues::l_integrality_check(&field, &lm);
            assert!(
                int.passed,
                "integrality pattern failed: q={} p={} n={n}: {int:?}",
                cfg.0, cfg.1
            );
        }
    }
    conclude("08 l_matrix", started, Duration::from_secs(120));
}

#[test]
fn criterion_09_analytic_cross_check() {
    let started = Instant::now();
    let floor = 40;
    // embed_compare and route agreement at the 40-v-digit floor
    let embed_configs: [((u64, &str), usize); 3] = [(C2, 0), (C2, 1), (C1, 0)];
    for (cfg, n) in embed_configs {
        let tower = tower_of(cfg);
        let ctx = analytic::analytic_context(&tower, floor);
        let field = TorsionField::new(&tower, n).unwrap();
        let table = OmegaTable::new(&field).unwrap();
        let rep = analytic::embed_compare(&ctx, &field, &table, floor).unwrap();
        assert!(
            rep.passed,
            "embedding residuals above floor: q={} p={} n={n}: min residual v^{}",
            cfg.0, cfg.1, rep.min_residual
        );
        for (j, k, agree) in &rep.route_agreements {
            assert!(
                *agree >= floor,
                "route disagreement at (j={j}, k={k}): v^{agree}: q={} p={} n={n}",
                cfg.0,
                cfg.1
            );
        }
    }
    // Pellarin residual below the truncation-implied floor at N = 8
    for cfg in [C2, C3] {
        let tower = tower_of(cfg);
        let ctx = analytic::analytic_context(&tower, floor);
        let rep = analytic::pellarin_check(&ctx, 1, 8).unwrap();
        assert!(rep.passed, "pellarin residual visible: q={} {rep:?}", cfg.0);
    }
    conclude("09 analytic_cross_check", started, Duration::from_secs(300));
}

#[test]
fn criterion_10_oracle_equivalence() {
    let started = Instant::now();
    // q-polynomial: congruence route equals the interpolation definition
    for cfg in [C1, C2, C3, C4] {
        let tower = tower_of(cfg);
        for n in 0..=2 {
            let qp = omega::q_poly(tower.fq(), tower.pbar(), n);
            let oracle = omega::q_poly_interpolated(&tower, n);
            for (i, c) in qp.coeffs.iter().enumerate() {
                assert_eq!(
                    tower.lift_poly(c),
                    oracle[i],
                    "qpoly route mismatch: q={} p={} n={n} i={i}",
                    cfg.0,
                    cfg.1
                );
            }
        }
    }
    // root_coefficients: Vandermonde route equals the periodicity route on
    // 100 random polynomial inputs per config
    let mut state = 0x6a09e667f3bcc909u64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    for cfg in [C1, C2, C3, C4] {
        let tower = tower_of(cfg);
        let fqd = tower.fqd().clone();
        let space = ConstSpace(&fqd);
        let len = 3 * (tower.p_abs() as usize - 1) + 1;
        for _ in 0..100 {
            let coeffs: Vec<FFElem> = (0..len)
                .map(|_| fqd.decode(next() as u128 % fqd.order()))
                .collect();
            let phi = Poly::from_coeffs(&fqd, coeffs);
            let vals: Vec<FFElem> = tower.zetas().iter().map(|z| phi.eval(&fqd, z)).collect();
            let via_vand = interp::root_coefficients(&tower, &space, &vals).unwrap();
            let via_fold = interp::root_coefficients_periodic(&tower, &phi);
            assert_eq!(via_vand.len(), via_fold.len());
            for (a, b) in via_vand.iter().zip(via_fold.iter()) {
                assert!(
                    fqd.eq_elem(a, b),
                    "root_coefficients route mismatch: q={} p={}",
                    cfg.0,
                    cfg.1
                );
            }
        }
    }
    conclude("10 oracle_equivalence", started, Duration::from_secs(60));
}

#[test]
fn criterion_11_generalized_eigenspace() {
    let started = Instant::now();
    for cfg in [C1, C2] {
        let n = 1;
        let (field, table) = setup(cfg, n);
        let tower = field.tower().clone();
        let fq = tower.fq().clone();
        let fqd = tower.fqd().clone();
        let units = residue_enum(&fq, tower.pbar(), n, true);
        for exps in omega::basis_exponents(tower.q(), tower.d(), n) {
            let y = omega::digit_monomial(&table, &exps).unwrap();
            let l = exps.character_exponent(tower.q(), tower.d());
            let m = 1 + exps.weight();
            for a in &units {
                let map = field.sigma_map(a).unwrap();
                let az = interp::residue_at_zeta(&tower, a);
                let azl = fqd.pow(&az, l as u128);
                let mut v = y.clone();
                for _ in 0..m {
                    let s = field.apply_sigma(&map, &v);
                    v = field.sub(&s, &field.scale_poly(&v, &Poly::constant(&fqd, azl.clone())));
                }
                assert!(
                    field.is_zero(&v),
                    "monomial {:?} not killed at m={m}: q={} p={}",
                    exps.rows,
                    cfg.0,
                    cfg.1
                );
            }
        }
    }
    conclude(
        "11 generalized_eigenspace",
        started,
        Duration::from_secs(300),
    );
}
