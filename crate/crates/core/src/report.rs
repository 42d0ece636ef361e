//! Machine-readable reports and certificates.
//!
//! Reports serialize to JSON with stable field names and deterministic
//! content: identical config and library version produce byte-identical
//! files. Timings are kept out of the canonical JSON for exactly that
//! reason; they appear in the human-readable output only.

use serde::Serialize;

use crate::algebra::field::FiniteField;
use crate::algebra::poly::Poly;
use crate::algebra::ratfun::RatFun;
use crate::torsion::{TorsionElem, TorsionField};

pub const LIBRARY_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    pub q: u64,
    pub p: String,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub digits: Option<i64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub version: String,
    pub config: ConfigEcho,
    /// Seed for every randomized subroutine, derived from the config hash.
    pub seed: u64,
    pub checks: Vec<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extra: Option<serde_json::Value>,
    /// Wall-clock timings; excluded from serialization so reports stay
    /// byte-identical across runs.
    #[serde(skip)]
    pub timings_ms: Vec<(String, u128)>,
}

impl Report {
    pub fn new(command: &str, config: ConfigEcho, seed: u64) -> Report {
        Report {
            command: command.to_string(),
            version: LIBRARY_VERSION.to_string(),
            config,
            seed,
            checks: Vec::new(),
            extra: None,
            timings_ms: Vec::new(),
        }
    }

    pub fn push(&mut self, name: &str, passed: bool, detail: String) {
        self.checks.push(CheckResult {
            name: name.to_string(),
            passed,
            detail,
        });
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    /// Human-readable table with one line per check, plus timings.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{} q={} p={} n={} (v{}, seed {})\n",
            self.command, self.config.q, self.config.p, self.config.n, self.version, self.seed
        ));
        for c in &self.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("  [{mark}] {:<38} {}\n", c.name, c.detail));
        }
        if !self.timings_ms.is_empty() {
            out.push_str("  timings:\n");
            for (name, ms) in &self.timings_ms {
                out.push_str(&format!("    {name:<40} {ms} ms\n"));
            }
        }
        let verdict = if self.all_passed() { "ALL PASS" } else { "FAILURES PRESENT" };
        out.push_str(&format!("  => {verdict}\n"));
        out
    }
}

/// Ascending coefficient list rendering, `c0,c1,...`, each coefficient in
/// the power basis of its field generator.
pub fn poly_coeff_string(field: &FiniteField, p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    p.coeffs()
        .iter()
        .map(|c| field.format(c))
        .collect::<Vec<_>>()
        .join(",")
}

/// A rational function as a `[numerator, denominator]` pair of coefficient
/// strings.
pub fn ratfun_json(field: &FiniteField, r: &RatFun) -> serde_json::Value {
    serde_json::json!([
        poly_coeff_string(field, r.num()),
        poly_coeff_string(field, r.den())
    ])
}

/// A torsion element as the array of its power-basis coordinates, each a
/// `[numerator, denominator]` pair of coefficient strings.
pub fn torsion_elem_json(field: &TorsionField, y: &TorsionElem) -> serde_json::Value {
    let fqd = field.tower().fqd();
    let coords = field.coords(y);
    serde_json::Value::Array(coords.iter().map(|r| ratfun_json(fqd, r)).collect())
}
