//! Sequential products on E(H).
//!
//! The standard product A∘B = A^{1/2}·B·A^{1/2}, the general construction
//! A◇B = f_A(A)·B·f̄_A(A) from a family {f_A} of spectral functions, the
//! concrete families (square root; multiplicative Borel g(t) = t^{1/2+iλ};
//! the dimension-2 per-eigenbasis family), and the checker for the two
//! conditions that characterize which families yield sequential products:
//!
//!   (i)  |f_A(t)| = √t on sp(A);
//!   (ii) f_A(A)·f_B(B) ≈ f_{AB}(AB) whenever AB = BA,
//!
//! where ≈ is equality up to a unimodular constant.

use crate::effect::{make_effect, Effect, EffectError};
use crate::util::splitmix64;
use crate::matrix::{ComplexMatrix, MatrixError, Tolerance};
use crate::spectral::{phase_equal, sqrt_psd};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

#[derive(Debug, thiserror::Error)]
pub enum FamilyError {
    #[error("family requires dim 2, got {dim}")]
    NotDim2 { dim: usize },
    #[error("family undefined at this effect: {0}")]
    FamilyDomain(String),
    #[error("effects do not commute (‖AB - BA‖_F = {norm})")]
    NotCommuting { norm: f64 },
    #[error("dimension mismatch: {left} vs {right}")]
    ShapeMismatch { left: usize, right: usize },
    #[error(transparent)]
    Effect(#[from] EffectError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// A complex function on the spectrum of one particular effect.
pub type SpectralFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// The assignment A ↦ f_A. Evaluation must be deterministic: two calls on
/// the same effect see the same function values on sp(A).
#[derive(Clone)]
pub struct ProductFamily {
    label: String,
    assign: Arc<dyn Fn(&Effect) -> Result<SpectralFn, FamilyError> + Send + Sync>,
}

impl std::fmt::Debug for ProductFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ProductFamily({})", self.label)
    }
}

impl ProductFamily {
    pub fn new(
        label: impl Into<String>,
        assign: impl Fn(&Effect) -> Result<SpectralFn, FamilyError> + Send + Sync + 'static,
    ) -> Self {
        ProductFamily {
            label: label.into(),
            assign: Arc::new(assign),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, a: &Effect) -> Result<SpectralFn, FamilyError> {
        (self.assign)(a)
    }

    /// f_A(A) by functional calculus on the effect's spectral clusters.
    pub fn apply(&self, a: &Effect) -> Result<ComplexMatrix, FamilyError> {
        let f = self.eval(a)?;
        Ok(a.spectral().apply_total(|t| f(t)))
    }

    /// f̄_A(A), the adjoint of f_A(A).
    pub fn apply_conj(&self, a: &Effect) -> Result<ComplexMatrix, FamilyError> {
        let f = self.eval(a)?;
        Ok(a.spectral().apply_total(|t| f(t).conj()))
    }
}

/// A◇B = f_A(A)·B·f̄_A(A), re-hermitized and validated as an effect.
pub fn family_product(f: &ProductFamily, a: &Effect, b: &Effect) -> Result<Effect, FamilyError> {
    if a.dim() != b.dim() {
        return Err(FamilyError::ShapeMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let fa = f.apply(a)?;
    let fa_conj = f.apply_conj(a)?;
    let raw = fa.mul(b.matrix()).mul(&fa_conj).hermitize();
    Ok(make_effect(&raw, a.tol())?)
}

/// The standard (Lüders) product A∘B = A^{1/2}·B·A^{1/2}, computed through
/// the PSD square root rather than through any family, so the two routes
/// stay independent.
pub fn standard_product(a: &Effect, b: &Effect) -> Result<Effect, FamilyError> {
    if a.dim() != b.dim() {
        return Err(FamilyError::ShapeMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let root = sqrt_psd(a.matrix(), a.tol())?;
    let raw = root.mul(b.matrix()).mul(&root).hermitize();
    Ok(make_effect(&raw, a.tol())?)
}

/// A sequential product as a value: a named binary operation on effects.
#[derive(Clone)]
pub struct SeqProduct {
    label: String,
    apply: Arc<dyn Fn(&Effect, &Effect) -> Result<Effect, FamilyError> + Send + Sync>,
}

impl std::fmt::Debug for SeqProduct {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SeqProduct({})", self.label)
    }
}

impl SeqProduct {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn apply(&self, a: &Effect, b: &Effect) -> Result<Effect, FamilyError> {
        (self.apply)(a, b)
    }

    pub fn standard() -> Self {
        SeqProduct {
            label: "standard".into(),
            apply: Arc::new(|a, b| standard_product(a, b)),
        }
    }

    pub fn from_family(family: ProductFamily) -> Self {
        let label = family.label.clone();
        SeqProduct {
            label,
            apply: Arc::new(move |a, b| family_product(&family, a, b)),
        }
    }
}

/// f_A(t) = √t for every A; reduces ◇ to the standard product.
pub fn sqrt_family() -> ProductFamily {
    ProductFamily::new("sqrt", |_a| {
        Ok(Arc::new(|t: f64| Complex64::new(t.max(0.0).sqrt(), 0.0)) as SpectralFn)
    })
}

/// The multiplicative Borel family g(t) = t^{1/2 + iλ} (g(0) = 0), the same
/// g for every effect. λ = 0 is the square root; λ = 1 is the Liu–Wu
/// product.
pub fn borel_family(lambda: f64) -> ProductFamily {
    ProductFamily::new(format!("borel(λ={lambda})"), move |_a| {
        Ok(Arc::new(move |t: f64| borel_g(t, lambda)) as SpectralFn)
    })
}

/// t^{1/2 + iλ} = √t · e^{iλ·ln t} for t in (0, 1], and 0 at t = 0.
pub fn borel_g(t: f64, lambda: f64) -> Complex64 {
    if t <= 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    Complex64::from_polar(t.sqrt(), lambda * t.ln())
}

/// Deliberately broken family f_A(t) = t: violates condition (i), and with
/// it A◇I = A.
pub fn broken_identity_family() -> ProductFamily {
    ProductFamily::new("broken-identity", |_a| {
        Ok(Arc::new(|t: f64| Complex64::new(t, 0.0)) as SpectralFn)
    })
}

/// Deliberately broken family f_A(t) = √t·e^{i·tr(A)·t}: keeps |f_A| = √t,
/// so condition (i) passes, but the trace-driven phase varies across the
/// spectrum and cannot be absorbed into a single unimodular constant, so
/// condition (ii) fails on commuting pairs with distinct spectra.
pub fn tr_phase_family() -> ProductFamily {
    ProductFamily::new("tr-phase", |a| {
        let tr = a.matrix().trace().re;
        Ok(Arc::new(move |t: f64| {
            if t <= 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::from_polar(t.sqrt(), tr * t)
            }
        }) as SpectralFn)
    })
}

/// Canonical key for a decomposition of the 2-dimensional identity into two
/// rank-one orthogonal projections: the Bloch axis of the eigenbasis, unit
/// length, sign fixed so the first component exceeding eq_tol is positive.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionKey {
    pub axis: [f64; 3],
}

const KEY_GRID: f64 = 1e-6;

impl DecompositionKey {
    /// Quantized integer form used for table lookup and hashing.
    pub fn quantized(&self) -> [i64; 3] {
        [
            (self.axis[0] / KEY_GRID).round() as i64,
            (self.axis[1] / KEY_GRID).round() as i64,
            (self.axis[2] / KEY_GRID).round() as i64,
        ]
    }

    fn canonicalize(mut axis: [f64; 3], eq_tol: f64) -> DecompositionKey {
        let norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        for v in &mut axis {
            *v /= norm;
        }
        for v in axis {
            if v.abs() > eq_tol {
                if v < 0.0 {
                    for w in &mut axis {
                        *w = -*w;
                    }
                }
                break;
            }
        }
        DecompositionKey { axis }
    }
}

/// Bloch axis of a dim-2 effect's eigenbasis: write A = c₀I + c·σ and
/// return c/‖c‖ with canonical sign. `None` for scalar effects (the two
/// eigenvalues merge into one cluster, no preferred basis).
pub fn canonical_gamma(a: &Effect, tol: &Tolerance) -> Result<Option<DecompositionKey>, FamilyError> {
    if a.dim() != 2 {
        return Err(FamilyError::NotDim2 { dim: a.dim() });
    }
    if a.is_scalar() {
        return Ok(None);
    }
    let m = a.matrix();
    let cx = m[(0, 1)].re;
    let cy = -m[(0, 1)].im;
    let cz = (m[(0, 0)].re - m[(1, 1)].re) / 2.0;
    Ok(Some(DecompositionKey::canonicalize([cx, cy, cz], tol.eq_tol)))
}

/// Deterministic ξ for a key not present in the explicit table: hash
/// (seed, quantized axis) and map into [-3, 3].
fn xi_from_hash(seed: u64, key: &DecompositionKey) -> f64 {
    let q = key.quantized();
    let mut h = splitmix64(seed);
    for v in q {
        h = splitmix64(h ^ (v as u64));
    }
    (h as f64 / u64::MAX as f64) * 6.0 - 3.0
}

/// The dimension-2 family: for a non-scalar effect diagonalized by the
/// decomposition γ, f_A(t) = t^{1/2 + ξ(γ)i}; for scalar effects,
/// f_A(t) = √t. ξ comes from the explicit table when the quantized key
/// matches, otherwise deterministically from the seed.
pub fn dim2_family(seed: u64, xi_table: Vec<([f64; 3], f64)>) -> ProductFamily {
    let table: Vec<([i64; 3], f64)> = xi_table
        .iter()
        .map(|(axis, v)| {
            let key = DecompositionKey::canonicalize(*axis, Tolerance::default().eq_tol);
            (key.quantized(), *v)
        })
        .collect();
    ProductFamily::new(format!("dim2(seed={seed})"), move |a| {
        if a.dim() != 2 {
            return Err(FamilyError::NotDim2 { dim: a.dim() });
        }
        match canonical_gamma(a, a.tol())? {
            None => Ok(Arc::new(|t: f64| Complex64::new(t.max(0.0).sqrt(), 0.0)) as SpectralFn),
            Some(key) => {
                let q = key.quantized();
                let xi = table
                    .iter()
                    .find(|(k, _)| *k == q)
                    .map(|(_, v)| *v)
                    .unwrap_or_else(|| xi_from_hash(seed, &key));
                Ok(Arc::new(move |t: f64| borel_g(t, xi)) as SpectralFn)
            }
        }
    })
}

/// Per-eigenvalue outcome of the |f_A(t)| = √t check.
#[derive(Clone, Debug, Serialize)]
pub struct ConditionIReport {
    pub pass: bool,
    /// (eigenvalue, |f(λ)| - √λ residual) of the worst offender, if any.
    pub offending: Option<(f64, f64)>,
}

pub fn check_condition_i(
    f: &ProductFamily,
    a: &Effect,
    tol: &Tolerance,
) -> Result<ConditionIReport, FamilyError> {
    let func = f.eval(a)?;
    let mut worst: Option<(f64, f64)> = None;
    for &lambda in &a.eigenvalues() {
        let residual = (func(lambda).norm() - lambda.max(0.0).sqrt()).abs();
        if residual > tol.eq_tol && worst.map_or(true, |(_, r)| residual > r) {
            worst = Some((lambda, residual));
        }
    }
    Ok(ConditionIReport {
        pass: worst.is_none(),
        offending: worst,
    })
}

/// Outcome of the f_A(A)·f_B(B) ≈ f_{AB}(AB) check; carries the extracted
/// unimodular phase when it exists.
#[derive(Clone, Debug, Serialize)]
pub struct ConditionIiReport {
    pub pass: bool,
    #[serde(serialize_with = "serialize_opt_complex")]
    pub xi: Option<Complex64>,
    pub residual: f64,
}

fn serialize_opt_complex<S: serde::Serializer>(
    v: &Option<Complex64>,
    s: S,
) -> Result<S::Ok, S::Error> {
    match v {
        Some(z) => [z.re, z.im].serialize(s),
        None => s.serialize_none(),
    }
}

pub fn check_condition_ii(
    f: &ProductFamily,
    a: &Effect,
    b: &Effect,
    tol: &Tolerance,
) -> Result<ConditionIiReport, FamilyError> {
    if a.dim() != b.dim() {
        return Err(FamilyError::ShapeMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let comm = a.matrix().commutator_norm(b.matrix());
    let gate = tol.eq_tol
        * (a.matrix().frobenius_norm() * b.matrix().frobenius_norm()).max(1.0);
    if comm > gate {
        return Err(FamilyError::NotCommuting { norm: comm });
    }
    let product = make_effect(&a.matrix().mul(b.matrix()).hermitize(), tol)?;
    let lhs = f.apply(a)?.mul(&f.apply(b)?);
    let rhs = f.apply(&product)?;
    let xi = phase_equal(&lhs, &rhs, tol)?;
    let residual = match xi {
        Some(z) => lhs.distance(&rhs.scale(z)),
        None => lhs.distance(&rhs),
    };
    Ok(ConditionIiReport {
        pass: xi.is_some(),
        xi,
        residual,
    })
}

/// Family spec file format consumed by the CLI:
/// {"kind":"sqrt"} | {"kind":"borel","lambda":r} |
/// {"kind":"dim2","seed":n,"xi":[{"axis":[x,y,z],"value":r},...]}.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FamilySpec {
    Sqrt,
    Borel { lambda: f64 },
    Dim2 { seed: u64, xi: Vec<XiEntry> },
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct XiEntry {
    pub axis: [f64; 3],
    pub value: f64,
}

impl FamilySpec {
    pub fn build(&self) -> ProductFamily {
        match self {
            FamilySpec::Sqrt => sqrt_family(),
            FamilySpec::Borel { lambda } => borel_family(*lambda),
            FamilySpec::Dim2 { seed, xi } => dim2_family(
                *seed,
                xi.iter().map(|e| (e.axis, e.value)).collect(),
            ),
        }
    }

    /// dim2 families only make sense on a 2-dimensional space.
    pub fn requires_dim(&self) -> Option<usize> {
        match self {
            FamilySpec::Dim2 { .. } => Some(2),
            _ => None,
        }
    }
}

/// Which sequential product a run verifies: the standard product or a
/// family-constructed one. Serializes as the string "standard" or as the
/// family spec object.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum ProductSpec {
    Named(String),
    Family(FamilySpec),
}

impl ProductSpec {
    pub fn standard() -> Self {
        ProductSpec::Named("standard".to_string())
    }

    pub fn is_standard(&self) -> bool {
        matches!(self, ProductSpec::Named(s) if s == "standard")
    }

    pub fn validate(&self) -> Result<(), String> {
        match self {
            ProductSpec::Named(s) if s == "standard" => Ok(()),
            ProductSpec::Named(s) => Err(format!("unknown product {s:?}")),
            ProductSpec::Family(_) => Ok(()),
        }
    }

    /// The binary operation under test.
    pub fn seq_product(&self) -> SeqProduct {
        match self {
            ProductSpec::Named(_) => SeqProduct::standard(),
            ProductSpec::Family(spec) => SeqProduct::from_family(spec.build()),
        }
    }

    /// The family view used by the §3/§4 suites. The standard product is
    /// the square-root family's product, so those suites apply to it too.
    pub fn family(&self) -> ProductFamily {
        match self {
            ProductSpec::Named(_) => sqrt_family(),
            ProductSpec::Family(spec) => spec.build(),
        }
    }

    pub fn requires_dim(&self) -> Option<usize> {
        match self {
            ProductSpec::Named(_) => None,
            ProductSpec::Family(spec) => spec.requires_dim(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::effect::rank_one_projection;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn eff(m: ComplexMatrix) -> Effect {
        make_effect(&m, &tol()).unwrap()
    }

    fn p_plus() -> ComplexMatrix {
        ComplexMatrix::from_entries(
            2,
            vec![c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0)],
        )
        .unwrap()
    }

    #[test]
    fn standard_product_identity_left() {
        let t = tol();
        let b = eff(p_plus());
        let out = standard_product(&Effect::one(2, &t), &b).unwrap();
        assert!(out.matrix().distance(b.matrix()) < 1e-12);
    }

    #[test]
    fn standard_product_projection_conjugation() {
        let t = tol();
        let e = eff(ComplexMatrix::diag(&[1.0, 0.0]));
        let b = eff(p_plus());
        let out = standard_product(&e, &b).unwrap();
        let oracle = e.matrix().mul(b.matrix()).mul(e.matrix());
        assert!(out.matrix().distance(&oracle) < 1e-12);
    }

    #[test]
    fn standard_product_2x2_oracle() {
        // diag(0.25,1)^{1/2} · P₊ · diag(0.25,1)^{1/2} = [[0.125,0.25],[0.25,0.5]]
        let a = eff(ComplexMatrix::diag(&[0.25, 1.0]));
        let b = eff(p_plus());
        let out = standard_product(&a, &b).unwrap();
        let expected = ComplexMatrix::from_entries(
            2,
            vec![c(0.125, 0.0), c(0.25, 0.0), c(0.25, 0.0), c(0.5, 0.0)],
        )
        .unwrap();
        assert!(out.matrix().distance(&expected) < 1e-12);
    }

    #[test]
    fn sqrt_family_reduces_to_standard() {
        let f = sqrt_family();
        let a = eff(ComplexMatrix::from_entries(
            2,
            vec![c(0.6, 0.0), c(0.2, 0.1), c(0.2, -0.1), c(0.4, 0.0)],
        )
        .unwrap());
        let b = eff(p_plus());
        let via_family = family_product(&f, &a, &b).unwrap();
        let via_standard = standard_product(&a, &b).unwrap();
        assert!(via_family.matrix().distance(via_standard.matrix()) < 1e-11);
    }

    #[test]
    fn family_product_right_identity_recovers_a() {
        let t = tol();
        for f in [sqrt_family(), borel_family(1.0), borel_family(-2.5)] {
            let a = eff(ComplexMatrix::diag(&[0.25, 0.7, 1.0]));
            let out = family_product(&f, &a, &Effect::one(3, &t)).unwrap();
            assert!(out.matrix().distance(a.matrix()) < 1e-11, "{}", f.label());
        }
    }

    #[test]
    fn liu_wu_diagonal_scalar_oracle() {
        // diagonal A: (j,k) entry of A◇B is b_jk·√(a_j a_k)·(a_j/a_k)^{iλ}
        let lambda = 1.0;
        let f = borel_family(lambda);
        let a = eff(ComplexMatrix::diag(&[0.25, 1.0]));
        let b = eff(p_plus());
        let out = family_product(&f, &a, &b).unwrap();
        let avals = [0.25, 1.0];
        for j in 0..2 {
            for k in 0..2 {
                let g_j = borel_g(avals[j], lambda);
                let g_k = borel_g(avals[k], lambda).conj();
                let expected = b.matrix()[(j, k)] * g_j * g_k;
                assert!((out.matrix()[(j, k)] - expected).norm() < 1e-12);
            }
        }
        // off-diagonal (0,1): 0.25·e^{-iλ·ln 4}
        let expected_01 = Complex64::from_polar(0.25, -lambda * 4.0_f64.ln());
        assert!((out.matrix()[(0, 1)] - expected_01).norm() < 1e-12);
    }

    #[test]
    fn borel_g_multiplicative_and_modulus() {
        let lambda = -2.5;
        for &(t1, t2) in &[(0.3, 0.7), (0.05, 0.9), (1.0, 0.4), (0.6, 0.6)] {
            let lhs = borel_g(t1 * t2, lambda);
            let rhs = borel_g(t1, lambda) * borel_g(t2, lambda);
            assert!((lhs - rhs).norm() < 1e-13);
        }
        for &t in &[0.0, 0.1, 0.5, 0.99, 1.0] {
            assert!((borel_g(t, lambda).norm() - t.sqrt()).abs() < 1e-14);
        }
    }

    #[test]
    fn borel_lambda_zero_is_sqrt() {
        for &t in &[0.0, 0.04, 0.25, 1.0] {
            assert!((borel_g(t, 0.0) - c(t.sqrt(), 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn canonical_gamma_examples() {
        let t = tol();
        let scalar = eff(ComplexMatrix::scalar(2, 0.5));
        assert!(canonical_gamma(&scalar, &t).unwrap().is_none());

        let diag = eff(ComplexMatrix::diag(&[0.2, 0.8]));
        let key = canonical_gamma(&diag, &t).unwrap().unwrap();
        // z-eigenbasis, sign canonicalized: (0,0,-0.3) flips to (0,0,1)
        assert!((key.axis[0]).abs() < 1e-12);
        assert!((key.axis[1]).abs() < 1e-12);
        assert!((key.axis[2] - 1.0).abs() < 1e-12);

        let x_axis = eff(ComplexMatrix::from_entries(
            2,
            vec![c(0.5, 0.0), c(0.3, 0.0), c(0.3, 0.0), c(0.5, 0.0)],
        )
        .unwrap());
        let key = canonical_gamma(&x_axis, &t).unwrap().unwrap();
        assert!((key.axis[0] - 1.0).abs() < 1e-12);

        let wrong_dim = eff(ComplexMatrix::identity(3));
        assert!(matches!(
            canonical_gamma(&wrong_dim, &t),
            Err(FamilyError::NotDim2 { dim: 3 })
        ));
    }

    #[test]
    fn dim2_family_scalar_uses_sqrt() {
        let f = dim2_family(7, vec![([0.0, 0.0, 1.0], 2.0)]);
        let a = eff(ComplexMatrix::scalar(2, 0.25));
        let fa = f.apply(&a).unwrap();
        assert!(fa.distance(&ComplexMatrix::scalar(2, 0.5)) < 1e-13);
    }

    #[test]
    fn dim2_family_uses_table_xi() {
        // A = diag(0.25, 1) with ξ(z-axis) = 2: f_A(A) = diag(0.25^{1/2+2i}, 1)
        let f = dim2_family(7, vec![([0.0, 0.0, 1.0], 2.0)]);
        let a = eff(ComplexMatrix::diag(&[0.25, 1.0]));
        let fa = f.apply(&a).unwrap();
        let expected_00 = borel_g(0.25, 2.0);
        assert!((fa[(0, 0)] - expected_00).norm() < 1e-13);
        assert!((fa[(1, 1)] - c(1.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn dim2_family_hashed_xi_is_deterministic() {
        let f = dim2_family(42, vec![]);
        let a = eff(ComplexMatrix::from_entries(
            2,
            vec![c(0.6, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(0.3, 0.0)],
        )
        .unwrap());
        let first = f.apply(&a).unwrap();
        let second = f.apply(&a).unwrap();
        assert!(first.distance(&second) == 0.0);
    }

    #[test]
    fn condition_i_pass_and_fail() {
        let t = tol();
        let a = eff(ComplexMatrix::diag(&[0.25, 0.7]));
        assert!(check_condition_i(&sqrt_family(), &a, &t).unwrap().pass);
        assert!(check_condition_i(&borel_family(1.0), &a, &t).unwrap().pass);
        assert!(check_condition_i(&tr_phase_family(), &a, &t).unwrap().pass);

        let report = check_condition_i(&broken_identity_family(), &a, &t).unwrap();
        assert!(!report.pass);
        let (lambda, _) = report.offending.unwrap();
        assert!((lambda - 0.25).abs() < 1e-12 || (lambda - 0.7).abs() < 1e-12);
    }

    #[test]
    fn condition_ii_sqrt_phase_is_one() {
        let t = tol();
        let a = eff(ComplexMatrix::diag(&[0.3, 0.8]));
        let b = eff(ComplexMatrix::diag(&[0.5, 0.1]));
        let r = check_condition_ii(&sqrt_family(), &a, &b, &t).unwrap();
        assert!(r.pass);
        assert!((r.xi.unwrap() - c(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn condition_ii_borel_scalar_oracle() {
        // A = B = 0.5·I: f_A(A)f_B(B) = 0.25^{1/2+i}·I = ξ·f_{AB}(0.25 I), ξ = 1
        let t = tol();
        let a = eff(ComplexMatrix::scalar(2, 0.5));
        let r = check_condition_ii(&borel_family(1.0), &a, &a, &t).unwrap();
        assert!(r.pass);
        assert!((r.xi.unwrap() - c(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn condition_ii_rejects_noncommuting() {
        let t = tol();
        let a = eff(ComplexMatrix::diag(&[0.2, 0.9]));
        let b = eff(p_plus());
        assert!(matches!(
            check_condition_ii(&sqrt_family(), &a, &b, &t),
            Err(FamilyError::NotCommuting { .. })
        ));
    }

    #[test]
    fn dim2_condition_ii_case_1a_phase() {
        // shared eigenbasis, λ₁μ₁ = λ₂μ₂: extracted ξ = (λ₁μ₁)^{ξ(γ)i}
        let t = tol();
        let xi_gamma = 1.5;
        let f = dim2_family(0, vec![([0.0, 0.0, 1.0], xi_gamma)]);
        let a = eff(ComplexMatrix::diag(&[0.8, 0.4]));
        let b = eff(ComplexMatrix::diag(&[0.25, 0.5]));
        let r = check_condition_ii(&f, &a, &b, &t).unwrap();
        assert!(r.pass);
        let expected = Complex64::from_polar(1.0, xi_gamma * (0.8_f64 * 0.25).ln());
        assert!((r.xi.unwrap() - expected).norm() < 1e-9);
    }

    #[test]
    fn lemma_4_2_rank_one_action() {
        // A◇P_x = ‖f_A(A)x‖²·P_y with y = f_A(A)x/‖f_A(A)x‖
        let t = tol();
        let f = borel_family(1.0);
        let a = eff(ComplexMatrix::from_entries(
            2,
            vec![c(0.7, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(0.5, 0.0)],
        )
        .unwrap());
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let x = vec![c(s, 0.0), c(0.0, s)];
        let px = rank_one_projection(&x, &t).unwrap();

        let fa = f.apply(&a).unwrap();
        let fax = fa.apply_vec(&x);
        let norm = fax.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!(norm > 1e-6);
        let y: Vec<Complex64> = fax.iter().map(|z| z / norm).collect();
        let expected = ComplexMatrix::outer(&y).scale_re(norm * norm);

        let out = family_product(&f, &a, px.effect()).unwrap();
        assert!(out.matrix().distance(&expected) < 1e-11);
    }

    #[test]
    fn family_spec_json() {
        let spec: FamilySpec = serde_json::from_str(r#"{"kind":"borel","lambda":1.0}"#).unwrap();
        assert_eq!(spec, FamilySpec::Borel { lambda: 1.0 });
        let spec: FamilySpec = serde_json::from_str(
            r#"{"kind":"dim2","seed":7,"xi":[{"axis":[0.0,0.0,1.0],"value":2.0}]}"#,
        )
        .unwrap();
        assert_eq!(spec.requires_dim(), Some(2));
        let spec: FamilySpec = serde_json::from_str(r#"{"kind":"sqrt"}"#).unwrap();
        assert_eq!(spec, FamilySpec::Sqrt);
    }
}
