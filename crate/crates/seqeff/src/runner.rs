//! Batch orchestration: validate a run specification, execute the selected
//! suites over every requested dimension, and render the reports. Shared by
//! the CLI binary and the integration tests so both exercise the same path.

use crate::family::ProductSpec;
use crate::matrix::Tolerance;
use crate::verify::suites::{run_suite, SUITE_IDS};
use crate::verify::{SampleConfig, Status, VerificationReport};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
#[error("invalid run spec: {0}")]
pub struct InvalidSpec(pub String);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Text,
}

/// Everything one batch run is parameterized by.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunSpec {
    pub dims: Vec<usize>,
    pub product: ProductSpec,
    /// Suite ids, or the single entry "all".
    pub suites: Vec<String>,
    pub samples: usize,
    pub seed: u64,
    pub tol: Tolerance,
    pub allow_vacuous: bool,
}

impl RunSpec {
    pub fn validate(&self) -> Result<(), InvalidSpec> {
        if self.dims.is_empty() {
            return Err(InvalidSpec("dims must be nonempty".into()));
        }
        if let Some(&d) = self.dims.iter().find(|&&d| d < 2) {
            return Err(InvalidSpec(format!("dims must be >= 2, got {d}")));
        }
        if self.samples == 0 {
            return Err(InvalidSpec("samples must be >= 1".into()));
        }
        self.product.validate().map_err(InvalidSpec)?;
        if let Some(required) = self.product.requires_dim() {
            if self.dims.iter().any(|&d| d != required) {
                return Err(InvalidSpec(format!(
                    "this product family requires dims = [{required}]"
                )));
            }
        }
        for id in self.resolved_suites() {
            if !SUITE_IDS.contains(&id.as_str()) {
                return Err(InvalidSpec(format!("unknown suite {id:?}")));
            }
        }
        Ok(())
    }

    pub fn resolved_suites(&self) -> Vec<String> {
        if self.suites.len() == 1 && self.suites[0] == "all" {
            SUITE_IDS.iter().map(|s| s.to_string()).collect()
        } else {
            self.suites.clone()
        }
    }
}

/// Run every selected suite at every dimension, in spec order.
pub fn run(spec: &RunSpec) -> Result<Vec<VerificationReport>, InvalidSpec> {
    spec.validate()?;
    let mut reports = Vec::new();
    for &dim in &spec.dims {
        let cfg = SampleConfig::new(dim, spec.samples, spec.seed, spec.tol, spec.product.clone());
        for id in spec.resolved_suites() {
            reports.push(run_suite(&id, &cfg).expect("validated suite id"));
        }
    }
    Ok(reports)
}

/// Overall verdict: vacuous counts as failure unless explicitly allowed.
pub fn all_passed(reports: &[VerificationReport], allow_vacuous: bool) -> bool {
    reports.iter().all(|r| match r.status {
        Status::Pass => true,
        Status::Vacuous => allow_vacuous,
        Status::Fail => false,
    })
}

pub fn render_json(reports: &[VerificationReport]) -> String {
    serde_json::to_string_pretty(reports).expect("reports serialize")
}

pub fn render_text(reports: &[VerificationReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let status = match r.status {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Vacuous => "vacuous",
        };
        out.push_str(&format!(
            "{:<20} dim={:<2} {:<8} checked={:<5} indeterminate={:<4} failures={:<3} witnesses={}\n",
            r.suite,
            r.config.dim,
            status,
            r.checked,
            r.indeterminate,
            r.failures.len(),
            r.witnesses.len()
        ));
        for f in &r.failures {
            out.push_str(&format!(
                "    FAIL sample={} clause={} residual={:.3e}\n",
                f.sample, f.clause, f.residual
            ));
        }
    }
    out
}

/// Stable table of the suite inventory: one row per suite id with the law
/// it verifies.
pub fn list_suites() -> String {
    let rows: &[(&str, &str)] = &[
        ("sea", "axioms SEA1-SEA5 of a sequential effect algebra"),
        ("scalar_homogeneity", "(tA)∘B = A∘(tB) = t(A∘B)"),
        ("thm_2_1", "E∘B = EBE for projections E"),
        ("thm_2_2", "AB = BA implies A∘B = B∘A = AB"),
        (
            "thm_2_3",
            "six equivalent characterizations of A∘B = B (unit-eigenspace face, powers A^n)",
        ),
        (
            "thm_2_4",
            "scalar operand ⇔ C∘(A∘B) = (C∘A)∘B ⇔ ⟨(A∘B)x,x⟩ factorizes",
        ),
        ("thm_2_5", "E∘B ≤ B ⇔ EB = BE ⇔ E∘B = B∘E for projections E"),
        (
            "thm_2_6",
            "invertible A: B ≤ C ⇔ A∘B ≤ A∘C; A∘B = A∘C ⇒ B = C",
        ),
        (
            "lemmas",
            "sharpness ⇔ a∘a = a ⇔ a∘a' = 0; sharp bounds; a∘b ≤ a; monotonicity",
        ),
        (
            "condition",
            "family conditions: |f_A| = √· and f_A(A)f_B(B) ≈ f_{AB}(AB) on commuting pairs",
        ),
        (
            "thm_4_1",
            "AB = BA ⇔ A◇B = B◇A ⇔ A◇(B◇C) = (A◇B)◇C for all C",
        ),
        ("thm_4_2", "A◇B a projection forces AB = BA"),
        (
            "thm_4_3",
            "scalar operand ⇔ A◇(C◇B) = (A◇C)◇B for all C ⇔ expectations factorize",
        ),
        (
            "thm_4_4",
            "A◇E ≤ E ⇔ E·f̄_A(A)·(I−E) = 0; with AE = EA for √-family and (co)rank-one E",
        ),
    ];
    debug_assert_eq!(rows.len(), SUITE_IDS.len());
    let mut out = String::from("suite                law verified\n");
    for (id, law) in rows {
        out.push_str(&format!("{id:<20} {law}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::FamilySpec;

    fn base_spec() -> RunSpec {
        RunSpec {
            dims: vec![2],
            product: ProductSpec::standard(),
            suites: vec!["thm_2_1".into()],
            samples: 5,
            seed: 42,
            tol: Tolerance::default(),
            allow_vacuous: false,
        }
    }

    #[test]
    fn validation_rejects_bad_specs() {
        let mut s = base_spec();
        s.dims = vec![];
        assert!(s.validate().is_err());

        let mut s = base_spec();
        s.dims = vec![1];
        assert!(s.validate().is_err());

        let mut s = base_spec();
        s.suites = vec!["bogus".into()];
        assert!(s.validate().is_err());

        let mut s = base_spec();
        s.product = ProductSpec::Named("mystery".into());
        assert!(s.validate().is_err());

        // the dim-2 family is only meaningful at dim 2
        let mut s = base_spec();
        s.product = ProductSpec::Family(FamilySpec::Dim2 { seed: 7, xi: vec![] });
        s.dims = vec![3];
        assert!(s.validate().is_err());
        s.dims = vec![2];
        assert!(s.validate().is_ok());
    }

    #[test]
    fn run_produces_one_report_per_dim_and_suite() {
        let mut s = base_spec();
        s.dims = vec![2, 3];
        s.suites = vec!["thm_2_1".into(), "thm_2_2".into()];
        let reports = run(&s).unwrap();
        assert_eq!(reports.len(), 4);
        assert!(all_passed(&reports, false));
    }

    #[test]
    fn suite_listing_is_complete() {
        let table = list_suites();
        assert!(table.contains("thm_2_3"));
        assert!(table.contains("sea"));
        assert!(table.lines().count() >= 13); // header + >= 12 rows
    }

    #[test]
    fn text_and_json_agree_on_verdicts() {
        let reports = run(&base_spec()).unwrap();
        let text = render_text(&reports);
        let json = render_json(&reports);
        assert!(text.contains("pass"));
        assert!(json.contains("\"status\": \"pass\""));
    }
}
