//! The standard effect algebra (E(H), 0, I, ⊕): validated effects, the
//! partial sum, orthosupplement, the induced order, sharpness, and the
//! spectral projection onto Ker(I - A).

use crate::matrix::{ComplexMatrix, MatrixError, Tolerance};
use crate::spectral::{eigh, is_psd, SpectralDecomposition};
use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum EffectError {
    #[error("matrix is not Hermitian (‖M - M†‖_F = {residual})")]
    NotHermitian { residual: f64 },
    #[error("spectrum leaves [0,1]: offending eigenvalue {eigenvalue}")]
    SpectrumOutOfRange { eigenvalue: f64 },
    #[error("dimension mismatch: {left} vs {right}")]
    ShapeMismatch { left: usize, right: usize },
    #[error("vector is not unit length (‖x‖ = {norm})")]
    NotUnitVector { norm: f64 },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// A quantum effect: Hermitian with spectrum in [0,1]. The spectral
/// decomposition is computed at validation time (the spectrum check needs
/// it anyway) and carried alongside the matrix, so functional calculus on
/// an effect never re-runs the eigensolver.
#[derive(Clone, Debug)]
pub struct Effect {
    matrix: ComplexMatrix,
    spectral: SpectralDecomposition,
    tol: Tolerance,
}

impl Effect {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn spectral(&self) -> &SpectralDecomposition {
        &self.spectral
    }

    pub fn tol(&self) -> &Tolerance {
        &self.tol
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn zero(dim: usize, tol: &Tolerance) -> Self {
        make_effect(&ComplexMatrix::zeros(dim), tol).expect("zero is an effect")
    }

    pub fn one(dim: usize, tol: &Tolerance) -> Self {
        make_effect(&ComplexMatrix::identity(dim), tol).expect("identity is an effect")
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.spectral.eigenvalues()
    }

    /// True iff the effect is scalar, A = λI (a single spectral cluster).
    pub fn is_scalar(&self) -> bool {
        self.spectral.clusters().len() == 1
    }
}

impl Serialize for Effect {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        // matrix literal plus the {"kind": "effect"} tag
        let mut st = serializer.serialize_struct("Effect", 4)?;
        st.serialize_field("kind", "effect")?;
        st.serialize_field("dim", &self.matrix.dim())?;
        let re: Vec<f64> = self.matrix.entries().iter().map(|z| z.re).collect();
        let im: Vec<f64> = self.matrix.entries().iter().map(|z| z.im).collect();
        st.serialize_field("re", &re)?;
        st.serialize_field("im", &im)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Effect {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Tagged {
            kind: String,
            dim: usize,
            re: Vec<f64>,
            im: Vec<f64>,
        }
        let t = Tagged::deserialize(deserializer)?;
        if t.kind != "effect" {
            return Err(serde::de::Error::custom(format!(
                "expected kind \"effect\", got {:?}",
                t.kind
            )));
        }
        let entries: Vec<Complex64> = t
            .re
            .iter()
            .zip(&t.im)
            .map(|(&r, &i)| Complex64::new(r, i))
            .collect();
        let m = ComplexMatrix::from_entries(t.dim, entries).map_err(serde::de::Error::custom)?;
        make_effect(&m, &Tolerance::default()).map_err(serde::de::Error::custom)
    }
}

/// Validate a matrix as an effect. Eigenvalues within psd_tol outside
/// [0,1] are clamped; anything further out fails loudly.
pub fn make_effect(m: &ComplexMatrix, tol: &Tolerance) -> Result<Effect, EffectError> {
    let residual = m.hermitian_residual();
    if residual > tol.eq_tol * m.frobenius_norm().max(1.0) {
        return Err(EffectError::NotHermitian { residual });
    }
    let mut spectral = eigh(m, tol)?;
    // Spectrum admission cannot be stricter than machine rounding allows,
    // however tight the configured psd_tol is.
    let slack = tol.psd_tol.max(32.0 * f64::EPSILON) * m.frobenius_norm().max(1.0);
    for &lambda in &spectral.eigenvalues() {
        if lambda < -slack || lambda > 1.0 + slack {
            return Err(EffectError::SpectrumOutOfRange { eigenvalue: lambda });
        }
    }
    spectral.clamp_eigenvalues(0.0, 1.0);
    // Rounding-sized deviations at the spectral endpoints are noise; snap
    // them so that functional calculus sees exact 0s and 1s (√· at 0 would
    // otherwise turn ε into √ε).
    spectral.snap_eigenvalues(0.0, slack);
    spectral.snap_eigenvalues(1.0, slack);
    Ok(Effect {
        matrix: m.clone(),
        spectral,
        tol: *tol,
    })
}

/// A ⊕ B = A + B when the sum stays inside E(H); `None` marks ⊥ failure.
/// Partiality is an ordinary outcome here, not an error.
pub fn oplus(a: &Effect, b: &Effect) -> Result<Option<Effect>, EffectError> {
    if a.dim() != b.dim() {
        return Err(EffectError::ShapeMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let sum = a.matrix.add(&b.matrix);
    match make_effect(&sum, &a.tol) {
        Ok(e) => Ok(Some(e)),
        Err(EffectError::SpectrumOutOfRange { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// The orthosupplement A' = I - A.
pub fn complement(a: &Effect) -> Effect {
    let m = ComplexMatrix::identity(a.dim()).sub(&a.matrix);
    make_effect(&m, &a.tol).expect("I - A is an effect whenever A is")
}

/// Löwner order: A <= B iff B - A is PSD.
pub fn leq(a: &Effect, b: &Effect, tol: &Tolerance) -> Result<bool, EffectError> {
    if a.dim() != b.dim() {
        return Err(EffectError::ShapeMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(is_psd(&b.matrix.sub(&a.matrix).hermitize(), tol)?)
}

/// Sharp iff every eigenvalue sits within cluster_gap of {0, 1}; in E(H)
/// the sharp elements are exactly the projections.
pub fn is_sharp(a: &Effect, tol: &Tolerance) -> bool {
    let spectral_sharp = a
        .eigenvalues()
        .iter()
        .all(|&l| l.abs() <= tol.cluster_gap || (l - 1.0).abs() <= tol.cluster_gap);
    if spectral_sharp {
        debug_assert!(
            a.matrix.mul(&a.matrix).distance(&a.matrix)
                <= 10.0 * tol.cluster_gap * a.matrix.frobenius_norm().max(1.0),
            "spectrally sharp effect fails the idempotency cross-check"
        );
    }
    spectral_sharp
}

/// A projection: a sharp effect with its rank.
#[derive(Clone, Debug)]
pub struct Projection {
    effect: Effect,
    rank: usize,
}

impl Projection {
    pub fn effect(&self) -> &Effect {
        &self.effect
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.effect.matrix()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.effect.dim()
    }

    pub fn from_effect(e: &Effect, tol: &Tolerance) -> Option<Projection> {
        if !is_sharp(e, tol) {
            return None;
        }
        let rank = e.matrix().trace().re.round();
        Some(Projection {
            effect: e.clone(),
            rank: rank as usize,
        })
    }
}

/// P_{Ker(I - A)}: the spectral projection of A at eigenvalue 1 (the zero
/// matrix when 1 is not in the spectrum), wrapped as a Projection.
pub fn ker_projection_complement(a: &Effect, tol: &Tolerance) -> Projection {
    let m = a.spectral.projection_near(1.0, tol.cluster_gap).hermitize();
    let e = make_effect(&m, tol).expect("spectral projection is an effect");
    Projection::from_effect(&e, tol).expect("spectral projection is sharp")
}

/// The rank-one projection x·x† onto the span of a unit vector.
pub fn rank_one_projection(x: &[Complex64], tol: &Tolerance) -> Result<Projection, EffectError> {
    let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > tol.eq_tol {
        return Err(EffectError::NotUnitVector { norm });
    }
    let e = make_effect(&ComplexMatrix::outer(x), tol)?;
    Ok(Projection::from_effect(&e, tol).expect("x·x† is sharp for unit x"))
}
