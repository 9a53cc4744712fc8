//! Report assembly and emission.
//!
//! The JSON document is stable apart from the `timings_ms` block:
//!
//! ```json
//! {
//!   "config": {"model": ..., "order": ..., "checks": [...],
//!              "output": ..., "export_tensors": ..., "jobs": ...},
//!   "version": "x.y.z",
//!   "results": [{"identity": ..., "model": ..., "requested_order": ...,
//!                "verified_order": ..., "passed": ...,
//!                "first_failure": null | {"component": ..., "exponents": [...],
//!                                          "lhs": "p/q", "rhs": "p/q"}}],
//!   "timings_ms": {"total": ...},
//!   "overall_pass": true|false
//! }
//! ```

use serde::Serialize;

use moufang::verifier::SymbolTower;
use moufang::{CheckName, CheckResult, LoopModel};

use crate::Cli;

#[derive(Debug, Serialize)]
pub struct ConfigEcho {
    pub model: String,
    pub order: u32,
    pub checks: Vec<String>,
    pub output: String,
    pub export_tensors: Option<String>,
    pub jobs: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct Timings {
    pub total_ms: f64,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub config: ConfigEcho,
    pub version: String,
    pub results: Vec<CheckResult>,
    pub timings_ms: Timings,
    pub overall_pass: bool,
}

/// Informational lines for the text report; never part of pass/fail and
/// never emitted in the pinned JSON schema.
pub fn advisory_notes(model: &LoopModel, order: u32, checks: &[CheckName]) -> Vec<String> {
    let mut notes = Vec::new();
    if checks.contains(&CheckName::SymmetricPart) {
        notes.push(
            "symmetric_part uses the index-corrected contraction (a^s_jk + a^s_kj) u^i_s"
                .to_string(),
        );
    }
    if checks.contains(&CheckName::Malcev) {
        if let Ok(tower) = SymbolTower::build(model, order, &[CheckName::Malcev]) {
            if let Ok(constants) = tower.algebra_constants() {
                if let Ok(holds) = constants.printed_sagle_holds() {
                    notes.push(format!(
                        "printed Sagle variant [J(x,y,x),x] = J(x,y,[x,z]) {} on these constants \
                         (the corrected form [J(x,y,z),x] = J(x,y,[x,z]) is what malcev asserts)",
                        if holds { "holds" } else { "fails" }
                    ));
                }
            }
        }
    }
    notes
}

impl Report {
    pub fn new(
        cli: &Cli,
        model: &LoopModel,
        checks: &[CheckName],
        results: Vec<CheckResult>,
        timings: Timings,
    ) -> Self {
        let overall_pass = results.iter().all(|r| r.passed);
        Self {
            config: ConfigEcho {
                model: model.name().to_string(),
                order: cli.order,
                checks: checks.iter().map(|c| c.id().to_string()).collect(),
                output: cli.output.clone(),
                export_tensors: cli.export_tensors.clone(),
                jobs: cli.jobs,
            },
            version: env!("CARGO_PKG_VERSION").to_string(),
            results,
            timings_ms: timings,
            overall_pass,
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }

    pub fn to_text(&self, skipped: &[CheckName], notes: &[String]) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "model {} at order {} ({} checks)\n",
            self.config.model,
            self.config.order,
            self.results.len()
        ));
        for result in &self.results {
            let status = if result.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "{status} {} (verified to order {})\n",
                result.identity_name, result.verified_order
            ));
            if let Some(witness) = &result.first_failure {
                out.push_str(&format!(
                    "     witness: component {}, indices {:?}, lhs = {}, rhs = {}\n",
                    witness.component, witness.exponents, witness.lhs, witness.rhs
                ));
            }
        }
        for check in skipped {
            out.push_str(&format!(
                "SKIP {} (requires order >= {})\n",
                check.id(),
                check.min_order()
            ));
        }
        for note in notes {
            out.push_str(&format!("note: {note}\n"));
        }
        out.push_str(&format!(
            "overall: {} ({:.1} ms)\n",
            if self.overall_pass { "PASS" } else { "FAIL" },
            self.timings_ms.total_ms
        ));
        out
    }
}

/// Writes the JSON tensor export for a model at the given order.
pub fn export_tensors(model: &LoopModel, order: u32, path: &str) -> Result<(), String> {
    let mut checks = vec![CheckName::Malcev];
    if order >= 4 {
        checks.push(CheckName::Akivis);
    }
    let tower = SymbolTower::build(model, order, &checks).map_err(|e| e.to_string())?;
    let export = tower.tensor_export();
    std::fs::write(path, export.to_json()).map_err(|e| e.to_string())
}
