//! Randomized verification: sample configuration, reports, tri-state
//! comparisons with a hysteresis band, and the per-sample RNG derivation
//! that keeps reports byte-identical across runs and schedulings.

pub mod gen;
pub mod suites;

use crate::family::ProductSpec;
use crate::matrix::{ComplexMatrix, Tolerance};
use crate::effect::Effect;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SampleConfig {
    pub dim: usize,
    pub samples: usize,
    pub seed: u64,
    pub tol: Tolerance,
    pub product: ProductSpec,
}

impl SampleConfig {
    pub fn new(dim: usize, samples: usize, seed: u64, tol: Tolerance, product: ProductSpec) -> Self {
        assert!(dim >= 2, "dim must be >= 2");
        assert!(samples >= 1, "samples must be >= 1");
        SampleConfig {
            dim,
            samples,
            seed,
            tol,
            product,
        }
    }
}

use crate::util::splitmix64;

fn fnv1a(s: &str) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

/// One RNG stream per (seed, suite, sample index): reports do not depend
/// on evaluation order.
pub fn sample_rng(seed: u64, suite: &str, index: usize) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed ^ splitmix64(fnv1a(suite)));
    rng.set_stream(index as u64);
    rng
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Vacuous,
}

/// A recorded failure: which clause broke, on which serialized inputs,
/// with what residual.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Failure {
    pub sample: usize,
    pub clause: String,
    pub residual: f64,
    pub inputs: Vec<Effect>,
}

/// A found counterexample in a negative-direction search (a success: the
/// theorem predicts it exists).
pub type Witness = Failure;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub config: SampleConfig,
    pub checked: usize,
    pub indeterminate: usize,
    pub failures: Vec<Failure>,
    pub witnesses: Vec<Witness>,
    pub status: Status,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Incremental report builder used by every suite.
pub struct SuiteRun {
    suite: String,
    config: SampleConfig,
    checked: usize,
    indeterminate: usize,
    positives: usize,
    positives_required: Option<usize>,
    failures: Vec<Failure>,
    witnesses: Vec<Witness>,
}

impl SuiteRun {
    pub fn new(suite: impl Into<String>, config: &SampleConfig) -> Self {
        SuiteRun {
            suite: suite.into(),
            config: config.clone(),
            checked: 0,
            indeterminate: 0,
            positives: 0,
            positives_required: None,
            failures: Vec::new(),
            witnesses: Vec::new(),
        }
    }

    /// Demand at least this many positive-antecedent samples; falling short
    /// is recorded as a non-vacuity failure.
    pub fn require_positives(mut self, n: usize) -> Self {
        self.positives_required = Some(n);
        self
    }

    pub fn tol(&self) -> Tolerance {
        self.config.tol
    }

    pub fn mark_checked(&mut self) {
        self.checked += 1;
    }

    pub fn mark_indeterminate(&mut self) {
        self.indeterminate += 1;
    }

    pub fn mark_positive(&mut self) {
        self.positives += 1;
    }

    pub fn positives(&self) -> usize {
        self.positives
    }

    pub fn fail(&mut self, sample: usize, clause: &str, residual: f64, inputs: &[&Effect]) {
        self.failures.push(Failure {
            sample,
            clause: clause.to_string(),
            residual,
            inputs: inputs.iter().map(|e| (*e).clone()).collect(),
        });
    }

    pub fn witness(&mut self, sample: usize, clause: &str, residual: f64, inputs: &[&Effect]) {
        self.witnesses.push(Witness {
            sample,
            clause: clause.to_string(),
            residual,
            inputs: inputs.iter().map(|e| (*e).clone()).collect(),
        });
    }

    /// Require `tri` to be True; Indet counts the sample indeterminate.
    pub fn expect_true(
        &mut self,
        sample: usize,
        clause: &str,
        tri: Tri,
        residual: f64,
        inputs: &[&Effect],
    ) {
        match tri {
            Tri::True => {}
            Tri::Indet => self.mark_indeterminate(),
            Tri::False => self.fail(sample, clause, residual, inputs),
        }
    }

    /// Require all clause truth values to agree (any Indet skips the
    /// sample). Returns the agreed value when the sample was conclusive.
    pub fn expect_agreement(
        &mut self,
        sample: usize,
        clauses: &[(&str, Tri, f64)],
        inputs: &[&Effect],
    ) -> Option<bool> {
        if clauses.iter().any(|(_, t, _)| *t == Tri::Indet) {
            self.mark_indeterminate();
            return None;
        }
        let first = clauses[0].1;
        for (name, tri, residual) in clauses {
            if *tri != first {
                let detail = clauses
                    .iter()
                    .map(|(n, t, _)| format!("{n}={t:?}"))
                    .collect::<Vec<_>>()
                    .join(",");
                self.fail(sample, &format!("agreement[{detail}]:{name}"), *residual, inputs);
                return None;
            }
        }
        Some(first == Tri::True)
    }

    pub fn finish(mut self) -> VerificationReport {
        if let Some(required) = self.positives_required {
            if self.checked > 0 && self.positives < required {
                self.failures.push(Failure {
                    sample: usize::MAX,
                    clause: format!(
                        "non-vacuity: {} positive-antecedent samples, required {}",
                        self.positives, required
                    ),
                    residual: self.positives as f64,
                    inputs: Vec::new(),
                });
            }
        }
        let status = if self.checked == 0 {
            Status::Vacuous
        } else if self.failures.is_empty() {
            Status::Pass
        } else {
            Status::Fail
        };
        VerificationReport {
            suite: self.suite,
            config: self.config,
            checked: self.checked,
            indeterminate: self.indeterminate,
            failures: self.failures,
            witnesses: self.witnesses,
            status,
        }
    }
}

/// Tri-state comparison outcome. Samples that land inside the hysteresis
/// band around a decision boundary are excluded from clause-agreement
/// assertions instead of flapping.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tri {
    True,
    False,
    Indet,
}

impl Tri {
    pub fn and(self, other: Tri) -> Tri {
        match (self, other) {
            (Tri::False, _) | (_, Tri::False) => Tri::False,
            (Tri::Indet, _) | (_, Tri::Indet) => Tri::Indet,
            _ => Tri::True,
        }
    }
}

const EQ_BAND: f64 = 100.0;
const PSD_BAND: f64 = 10.0;

/// Equality of matrices: True within eq_tol, False beyond 100·eq_tol.
pub fn eq_tri(a: &ComplexMatrix, b: &ComplexMatrix, tol: &Tolerance) -> Tri {
    let scale = a.frobenius_norm().max(b.frobenius_norm()).max(1.0);
    residual_tri(a.distance(b), scale, tol)
}

/// Zero-test on a residual already in hand.
pub fn residual_tri(residual: f64, scale: f64, tol: &Tolerance) -> Tri {
    if residual <= tol.eq_tol * scale {
        Tri::True
    } else if residual >= EQ_BAND * tol.eq_tol * scale {
        Tri::False
    } else {
        Tri::Indet
    }
}

/// Löwner comparison A <= B. True when min eig(B - A) >= -psd_tol·s,
/// False below -10·psd_tol·s; the negative sliver between is the
/// hysteresis band. Boundary equalities (difference ~ 0) therefore read
/// True, which is what every equality-flavored clause needs.
pub fn leq_tri(a: &ComplexMatrix, b: &ComplexMatrix, tol: &Tolerance) -> Tri {
    let diff = b.sub(a).hermitize();
    let scale = a.frobenius_norm().max(b.frobenius_norm()).max(1.0);
    let (min, _) = match crate::spectral::eigen_range(&diff, tol) {
        Ok(r) => r,
        Err(_) => return Tri::Indet,
    };
    if min >= -tol.psd_tol * scale {
        Tri::True
    } else if min <= -PSD_BAND * tol.psd_tol * scale {
        Tri::False
    } else {
        Tri::Indet
    }
}

/// Do two Hermitian matrices commute.
pub fn commute_tri(a: &ComplexMatrix, b: &ComplexMatrix, tol: &Tolerance) -> Tri {
    let scale = (a.frobenius_norm() * b.frobenius_norm()).max(1.0);
    residual_tri(a.commutator_norm(b), scale, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::ProductSpec;

    fn cfg() -> SampleConfig {
        SampleConfig::new(2, 10, 42, Tolerance::default(), ProductSpec::standard())
    }

    #[test]
    fn rng_is_deterministic_per_sample() {
        use rand::RngCore;
        let mut a = sample_rng(7, "sea", 3);
        let mut b = sample_rng(7, "sea", 3);
        assert_eq!(a.next_u64(), b.next_u64());
        let mut c = sample_rng(7, "sea", 4);
        assert_ne!(a.next_u64(), c.next_u64());
        let mut d = sample_rng(7, "thm_2_1", 3);
        let mut e = sample_rng(7, "sea", 3);
        e.next_u64();
        assert_ne!(d.next_u64(), e.next_u64());
    }

    #[test]
    fn tri_logic() {
        let t = Tolerance::default();
        let i = ComplexMatrix::identity(2);
        assert_eq!(eq_tri(&i, &i, &t), Tri::True);
        assert_eq!(eq_tri(&i, &ComplexMatrix::zeros(2), &t), Tri::False);
        assert_eq!(leq_tri(&ComplexMatrix::zeros(2), &i, &t), Tri::True);
        assert_eq!(leq_tri(&i, &ComplexMatrix::zeros(2), &t), Tri::False);
        // boundary equality reads True
        assert_eq!(leq_tri(&i, &i, &t), Tri::True);
        assert_eq!(Tri::True.and(Tri::Indet), Tri::Indet);
        assert_eq!(Tri::False.and(Tri::Indet), Tri::False);
    }

    #[test]
    fn report_status_rules() {
        let c = cfg();
        let mut run = SuiteRun::new("demo", &c);
        run.mark_checked();
        let r = run.finish();
        assert_eq!(r.status, Status::Pass);

        let mut run = SuiteRun::new("demo", &c);
        run.mark_checked();
        run.fail(0, "clause", 1.0, &[]);
        assert_eq!(run.finish().status, Status::Fail);

        let run = SuiteRun::new("demo", &c);
        assert_eq!(run.finish().status, Status::Vacuous);
    }

    #[test]
    fn non_vacuity_guard_fires() {
        let c = cfg();
        let mut run = SuiteRun::new("demo", &c).require_positives(3);
        for _ in 0..5 {
            run.mark_checked();
        }
        run.mark_positive();
        let r = run.finish();
        assert_eq!(r.status, Status::Fail);
        assert!(r.failures[0].clause.contains("non-vacuity"));
    }
}
