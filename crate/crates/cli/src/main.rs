//! Command-line driver: construction, verification suites, certificates,
//! and reports for Carlitz prime-power torsion fields.
//!
//! Exit codes: 0 all checks pass, 1 a check failed, 2 usage or
//! configuration error.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use carlitz::algebra::tower::FieldTower;
use carlitz::analytic;
use carlitz::basis;
use carlitz::lvalues;
use carlitz::omega::OmegaTable;
use carlitz::report::{self, ConfigEcho, Report};
use carlitz::torsion::TorsionField;
use carlitz::valuation;
use carlitz::verify::{self, VerifyConfig};

#[derive(Parser)]
#[command(name = "carlitz")]
#[command(about = "Exact Carlitz prime-power torsion fields: omega values, integral bases, valuations, L-matrices, and an analytic oracle")]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ConfigArgs {
    /// Base field order q (a prime power)
    #[arg(long)]
    q: u64,
    /// Monic irreducible polynomial in theta over F_q, e.g. "theta^2+theta+1"
    /// or an ascending coefficient list "1,1,1" (use g for the F_q generator)
    #[arg(long)]
    p: String,
    /// Torsion level n >= 0 (the field is K(C[p^(n+1)])(zeta))
    #[arg(long, default_value_t = 0)]
    n: usize,
    /// Write the machine-readable JSON report to this path
    #[arg(long)]
    json: Option<PathBuf>,
    /// Echo the deterministic seed on stdout
    #[arg(long, default_value_t = false)]
    seed_echo: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full invariant suite for one configuration
    Verify {
        #[command(flatten)]
        config: ConfigArgs,
        /// Also run the analytic cross-checks at this v-digit floor
        #[arg(long)]
        digits: Option<i64>,
    },
    /// Dump the omega table (torsion coefficients and omega values)
    Omega {
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Integral-basis determinant certificate
    Basis {
        #[command(flatten)]
        config: ConfigArgs,
        /// Write the labeled matrix, determinant, and verdict to this path
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Valuation table of the omega values at the primes above p
    Valuations {
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Exact matrix L-value with equivariance and integrality checks
    Lmatrix {
        #[command(flatten)]
        config: ConfigArgs,
        /// Cross-check against the truncated harmonic series up to this degree
        #[arg(long)]
        analytic: Option<usize>,
    },
    /// Analytic oracle: embedding comparison and special-value residuals
    Oracle {
        #[command(flatten)]
        config: ConfigArgs,
        /// Target precision floor in v-digits
        #[arg(long, default_value_t = 40)]
        digits: i64,
    },
    /// Exploratory reports (no asserted ground truth)
    Experiment {
        #[command(subcommand)]
        kind: ExperimentKind,
    },
}

#[derive(Subcommand)]
enum ExperimentKind {
    /// Factor the norms N(omega^(j)(zeta_i)) and classify the primes
    NormFactor {
        #[command(flatten)]
        config: ConfigArgs,
        /// Derivative order (defaults to all 0..=n)
        #[arg(long)]
        j: Option<usize>,
        /// Root index (defaults to all 1..=d)
        #[arg(long)]
        i: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(passed) => {
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn build_field(config: &ConfigArgs) -> carlitz::Result<(Arc<FieldTower>, Arc<TorsionField>)> {
    let tower = FieldTower::new(config.q, &config.p)?;
    let field = TorsionField::new(&tower, config.n)?;
    Ok((tower, field))
}

fn echo_config(config: &ConfigArgs, digits: Option<i64>) -> ConfigEcho {
    ConfigEcho {
        q: config.q,
        p: config.p.clone(),
        n: config.n,
        digits,
    }
}

fn seed_of(config: &ConfigArgs) -> u64 {
    verify::config_seed(&VerifyConfig {
        q: config.q,
        p_text: config.p.clone(),
        n: config.n,
        digits: None,
    })
}

fn finish(config: &ConfigArgs, report: &Report) -> carlitz::Result<bool> {
    print!("{}", report.render_text());
    if config.seed_echo {
        println!("seed: {}", report.seed);
    }
    if let Some(path) = &config.json {
        std::fs::write(path, report.to_json())
            .map_err(|e| carlitz::Error::BadInput(format!("cannot write {path:?}: {e}")))?;
        println!("report written to {}", path.display());
    }
    Ok(report.all_passed())
}

fn run(cli: Cli) -> carlitz::Result<bool> {
    match cli.command {
        Command::Verify { config, digits } => {
            let cfg = VerifyConfig {
                q: config.q,
                p_text: config.p.clone(),
                n: config.n,
                digits,
            };
            let report = verify::run_verify(&cfg)?;
            finish(&config, &report)
        }
        Command::Omega { config } => {
            let (tower, field) = build_field(&config)?;
            let table = OmegaTable::new(&field)?;
            let mut report = Report::new("omega", echo_config(&config, None), seed_of(&config));
            let d = tower.d();
            let n = field.level();
            let mut coeffs = serde_json::Map::new();
            let mut omegas = serde_json::Map::new();
            for j in 0..=n {
                for i in 0..d {
                    coeffs.insert(
                        format!("c[{j}][{i}]"),
                        report::torsion_elem_json(&field, table.coeff(j, i)?),
                    );
                }
                for k in 1..=d {
                    omegas.insert(
                        format!("omega[{j}](zeta_{k})"),
                        report::torsion_elem_json(&field, table.omega(j, k)?),
                    );
                }
            }
            report.extra = Some(serde_json::json!({
                "degree": field.dim(),
                "power_basis": "1, x, ..., x^(D-1) with x the residue class of X mod Phi",
                "coefficients": coeffs,
                "omega_values": omegas,
            }));
            report.push(
                "omega_table_constructed",
                true,
                format!("{} coefficients, {} omega values", (n + 1) * d, (n + 1) * d),
            );
            for j in 0..=n {
                for k in 1..=d {
                    println!(
                        "omega^({j})(zeta_{k}) = {}",
                        report::torsion_elem_json(&field, table.omega(j, k)?)
                    );
                }
            }
            finish(&config, &report)
        }
        Command::Basis { config, certificate } => {
            let (tower, field) = build_field(&config)?;
            let rep = basis::basis_determinant_test(&field)?;
            let nb = basis::normal_basis_rank(&field)?;
            let mut report = Report::new("basis", echo_config(&config, None), seed_of(&config));
            let fqd = tower.fqd();
            report.push(
                "all_monomials_integral",
                rep.all_integral,
                match rep.non_integral_witness {
                    None => "every digit monomial has polynomial coordinates".into(),
                    Some((col, coord)) => {
                        format!("monomial {col} has a non-integral coordinate {coord}")
                    }
                },
            );
            report.push(
                "determinant_is_unit",
                rep.det_is_unit,
                format!(
                    "det = {}",
                    carlitz::algebra::poly::format_poly(fqd, &rep.determinant, "theta")
                ),
            );
            report.push(
                "inverse_integral",
                rep.inverse_integral,
                "change of basis is invertible over A[zeta]".into(),
            );
            report.push(
                "matrix_times_inverse_is_identity",
                rep.product_check_ok,
                "adjugate cross-check".into(),
            );
            report.push(
                "normal_basis_full_rank",
                nb.full,
                format!("rank {}/{} from {} conjugates", nb.rank, nb.dim, nb.subgroup_order),
            );
            if let Some(path) = &certificate {
                let labels: Vec<serde_json::Value> = rep
                    .labels
                    .iter()
                    .map(|e| serde_json::json!(e.rows))
                    .collect();
                let matrix: Vec<Vec<String>> = rep
                    .matrix
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|p| report::poly_coeff_string(fqd, p))
                            .collect()
                    })
                    .collect();
                let cert = serde_json::json!({
                    "command": "basis",
                    "version": report::LIBRARY_VERSION,
                    "config": { "q": config.q, "p": config.p, "n": config.n },
                    "dimension": rep.dim,
                    "column_labels_exponents": labels,
                    "matrix_power_basis_coordinates": matrix,
                    "determinant": report::poly_coeff_string(fqd, &rep.determinant),
                    "determinant_is_unit": rep.det_is_unit,
                    "inverse_integral": rep.inverse_integral,
                    "normal_basis_rank": { "rank": nb.rank, "full": nb.full },
                });
                std::fs::write(path, serde_json::to_string_pretty(&cert).unwrap())
                    .map_err(|e| carlitz::Error::BadInput(format!("cannot write {path:?}: {e}")))?;
                println!("certificate written to {}", path.display());
            }
            finish(&config, &report)
        }
        Command::Valuations { config } => {
            let (tower, _field) = build_field(&config)?;
            let mut report =
                Report::new("valuations", echo_config(&config, None), seed_of(&config));
            let d = tower.d();
            let p_abs = tower.p_abs() as i64;
            let q = tower.q() as i64;
            let mut grid = Vec::new();
            let mut all_ok = true;
            println!("v_i(omega^(level)(zeta_i^(q^j))) table:");
            for level in 0..=config.n {
                let f = TorsionField::new(&tower, level)?;
                let t = OmegaTable::new(&f)?;
                for i in 1..=d {
                    for j in 0..d {
                        let w = t.omega_at_power(level, i, j)?;
                        let got = valuation::val_kn(&f, w, i)?;
                        let expect = valuation::RationalVal::new(
                            q.pow(j as u32),
                            p_abs.pow(level as u32) * (p_abs - 1),
                        );
                        let ok = got == expect;
                        all_ok &= ok;
                        println!(
                            "  level {level}  i={i}  j={j}:  {got}  (expected {expect}){}",
                            if ok { "" } else { "  MISMATCH" }
                        );
                        grid.push(serde_json::json!({
                            "level": level,
                            "i": i,
                            "j": j,
                            "valuation": got.to_string(),
                            "expected": expect.to_string(),
                            "ok": ok,
                        }));
                    }
                }
            }
            report.extra = Some(serde_json::json!({ "table": grid }));
            report.push(
                "valuation_formula",
                all_ok,
                "v = q^j/(|p|^level (|p|-1)) at every point".into(),
            );
            finish(&config, &report)
        }
        Command::Lmatrix { config, analytic } => {
            let (tower, field) = build_field(&config)?;
            let lm = lvalues::l_matrix(&field, 1)?;
            let eq = lvalues::l_equivariance_check(&field, &lm)?;
            let int = lvalues::l_integrality_check(&field, &lm);
            let mut report =
                Report::new("lmatrix", echo_config(&config, None), seed_of(&config));
            println!("L-matrix first row (Toeplitz; entry (r,c) = row[c-r]):");
            for (j, e) in lm.row.iter().enumerate() {
                println!("  L[{j}] = {}", report::torsion_elem_json(&field, e));
            }
            report.extra = Some(serde_json::json!({
                "first_row": lm
                    .row
                    .iter()
                    .map(|e| report::torsion_elem_json(&field, e))
                    .collect::<Vec<_>>(),
                "top_entry_integral": int.top_entry_integral,
            }));
            report.push(
                "equivariance",
                eq.passed,
                format!("sigma_a * L = rho(a)^(-1) L on {} units", eq.units_checked),
            );
            report.push(
                "integrality_pattern",
                int.passed,
                format!(
                    "subdiagonals integral; p times top entry integral (top itself integral: {})",
                    int.top_entry_integral
                ),
            );
            if let Some(nmax) = analytic {
                let ctx = analytic::analytic_context(&tower, 20);
                let mut ok = true;
                let mut detail = Vec::new();
                for j in 0..=field.level() {
                    let cross = analytic::l_crosscheck(&ctx, &field, &lm, j, nmax)?;
                    ok &= cross.passed;
                    detail.push(format!("L[{j}] to v^{}", cross.implied_floor));
                }
                report.push("analytic_agreement", ok, detail.join(", "));
            }
            finish(&config, &report)
        }
        Command::Oracle { config, digits } => {
            let (tower, field) = build_field(&config)?;
            let table = OmegaTable::new(&field)?;
            let ctx = analytic::analytic_context(&tower, digits);
            let rep = analytic::embed_compare(&ctx, &field, &table, digits)?;
            let mut report =
                Report::new("oracle", echo_config(&config, Some(digits)), seed_of(&config));
            report.push(
                "phi_vanishes_at_embedded_generator",
                rep.phi_residual >= digits,
                format!("Phi(x_hat) = O(v^{})", rep.phi_residual),
            );
            report.push(
                "coefficients_match_exponential_values",
                rep.coeff_residuals.iter().all(|&(_, _, r)| r >= digits),
                format!("{} coefficients compared", rep.coeff_residuals.len()),
            );
            report.push(
                "omega_values_match_product_formula",
                rep.omega_residuals.iter().all(|&(_, _, r)| r >= digits),
                format!("{} omega values compared", rep.omega_residuals.len()),
            );
            report.push(
                "sum_and_product_routes_agree",
                rep.route_agreements.iter().all(|&(_, _, r)| r >= digits),
                format!("{} route pairs compared", rep.route_agreements.len()),
            );
            let pell = analytic::pellarin_check(&ctx, 1, 8)?;
            report.push(
                "pellarin_identity",
                pell.passed,
                format!("residual zero to v^{} at N = 8", pell.implied_floor),
            );
            report.extra = Some(serde_json::json!({
                "exp_truncation_level": rep.exp_truncation_level,
                "min_residual_v_exponent": rep.min_residual,
                "target_floor_v_exponent": digits,
                "phi_residual": rep.phi_residual,
                "coefficient_residuals": rep
                    .coeff_residuals
                    .iter()
                    .map(|(j, i, r)| serde_json::json!({"j": j, "i": i, "residual": r}))
                    .collect::<Vec<_>>(),
                "omega_residuals": rep
                    .omega_residuals
                    .iter()
                    .map(|(j, k, r)| serde_json::json!({"j": j, "k": k, "residual": r}))
                    .collect::<Vec<_>>(),
                "route_agreements": rep
                    .route_agreements
                    .iter()
                    .map(|(j, k, r)| serde_json::json!({"j": j, "k": k, "agreement": r}))
                    .collect::<Vec<_>>(),
                "pellarin_residual_floor": pell.implied_floor,
            }));
            finish(&config, &report)
        }
        Command::Experiment { kind } => match kind {
            ExperimentKind::NormFactor { config, j, i } => {
                let (tower, field) = build_field(&config)?;
                let table = OmegaTable::new(&field)?;
                let seed = seed_of(&config);
                let mut report =
                    Report::new("experiment-norm-factor", echo_config(&config, None), seed);
                let fqd = tower.fqd();
                let js: Vec<usize> = j.map(|v| vec![v]).unwrap_or((0..=config.n).collect());
                let is: Vec<usize> = i.map(|v| vec![v]).unwrap_or((1..=tower.d()).collect());
                let mut rows = Vec::new();
                let mut verified = true;
                for &jj in &js {
                    for &ii in &is {
                        let rep =
                            valuation::norm_factor_experiment(&field, &table, jj, ii, Some(seed))?;
                        verified &= rep.factorization.verify(fqd, rep.norm.num());
                        println!(
                            "N(omega^({jj})(zeta_{ii})) factors ({} beyond the primes above p):",
                            rep.extra_prime_count
                        );
                        for (f, m, above) in &rep.classified {
                            let tag = match above {
                                Some(k) => format!("= theta - zeta_{k}"),
                                None => "other prime".into(),
                            };
                            println!("  ({})^{m}  {tag}", valuation::factor_display(fqd, f));
                        }
                        rows.push(serde_json::json!({
                            "j": jj,
                            "i": ii,
                            "norm": report::ratfun_json(fqd, &rep.norm),
                            "factors": rep
                                .classified
                                .iter()
                                .map(|(f, m, above)| serde_json::json!({
                                    "factor": report::poly_coeff_string(fqd, f),
                                    "multiplicity": m,
                                    "above_p_at_root": above,
                                }))
                                .collect::<Vec<_>>(),
                            "extra_prime_count": rep.extra_prime_count,
                        }));
                    }
                }
                report.extra = Some(serde_json::json!({ "norm_factorizations": rows }));
                report.push(
                    "factorizations_verified",
                    verified,
                    "factors re-multiply to the norms and are irreducible".into(),
                );
                finish(&config, &report)
            }
        },
    }
}
