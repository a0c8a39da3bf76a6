//! Hermitian eigendecomposition (cyclic complex Jacobi), clustered spectral
//! decompositions, functional calculus, positivity tests and the
//! phase-equality relation A ≈ ξB.

use crate::matrix::{ComplexMatrix, MatrixError, RectMatrix, Tolerance};
use num_complex::Complex64;

const MAX_SWEEPS: usize = 100;
const JACOBI_STOP: f64 = 1e-13;

/// Eigenvalue clusters with their spectral projections.
///
/// Eigenvalues are strictly increasing across clusters; each projection is
/// Hermitian idempotent and the projections sum to the identity.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    dim: usize,
    clusters: Vec<(f64, ComplexMatrix)>,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn clusters(&self) -> &[(f64, ComplexMatrix)] {
        &self.clusters
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.clusters.iter().map(|(l, _)| *l).collect()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.clusters[0].0
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.clusters[self.clusters.len() - 1].0
    }

    /// Σ f(λ_k)·P_k. The function may refuse an eigenvalue, which surfaces
    /// as a domain error.
    pub fn apply_function(
        &self,
        mut f: impl FnMut(f64) -> Option<Complex64>,
    ) -> Result<ComplexMatrix, MatrixError> {
        let mut out = ComplexMatrix::zeros(self.dim);
        for (lambda, proj) in &self.clusters {
            let v = f(*lambda).ok_or(MatrixError::Domain {
                eigenvalue: *lambda,
            })?;
            out = out.add(&proj.scale(v));
        }
        Ok(out)
    }

    /// Total-function convenience wrapper around [`apply_function`].
    pub fn apply_total(&self, mut f: impl FnMut(f64) -> Complex64) -> ComplexMatrix {
        self.apply_function(|t| Some(f(t)))
            .expect("total function cannot fail")
    }

    /// Σ λ_k·P_k.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply_total(|t| Complex64::new(t, 0.0))
    }

    /// Sum of the projections whose eigenvalue lies within `gap` of `value`.
    pub fn projection_near(&self, value: f64, gap: f64) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim);
        for (lambda, proj) in &self.clusters {
            if (lambda - value).abs() <= gap {
                out = out.add(proj);
            }
        }
        out
    }

    /// Clamp cluster eigenvalues into [lo, hi]; used when validating
    /// effects whose spectrum leaks out by a rounding-sized amount.
    pub fn clamp_eigenvalues(&mut self, lo: f64, hi: f64) {
        for (lambda, _) in &mut self.clusters {
            *lambda = lambda.clamp(lo, hi);
        }
    }

    /// Snap cluster eigenvalues within `gap` of `value` to exactly `value`.
    /// Functions with unbounded derivative at a spectral endpoint (√· at 0)
    /// otherwise amplify rounding-sized eigenvalue noise to its square
    /// root.
    pub fn snap_eigenvalues(&mut self, value: f64, gap: f64) {
        for (lambda, _) in &mut self.clusters {
            if (*lambda - value).abs() <= gap {
                *lambda = value;
            }
        }
    }
}

/// Raw Jacobi output: ascending eigenvalues and the matching orthonormal
/// eigenvectors (columns of `vectors`).
struct RawEigen {
    values: Vec<f64>,
    vectors: ComplexMatrix,
}

/// Cyclic Jacobi for complex Hermitian matrices. The strictly upper
/// triangle is annihilated pivot by pivot with unitary plane rotations;
/// converges quadratically once the off-diagonal mass is small.
fn jacobi(m: &ComplexMatrix) -> Result<RawEigen, MatrixError> {
    let n = m.dim();
    let scale = m.frobenius_norm();
    let mut a = m.hermitize();
    let mut v = ComplexMatrix::identity(n);

    if n == 1 {
        return Ok(RawEigen {
            values: vec![a[(0, 0)].re],
            vectors: v,
        });
    }

    let off = |a: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off(&a) <= JACOBI_STOP * scale.max(1.0) {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r <= f64::EPSILON * scale.max(1.0) {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let phase = apq / r;
                let tau = (aqq - app) / (2.0 * r);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // U differs from I only in the (p,q) plane:
                //   U[p][p] = c,        U[p][q] = s·phase,
                //   U[q][p] = -s·conj(phase), U[q][q] = c.
                let upq = Complex64::new(s, 0.0) * phase;
                let uqp = -Complex64::new(s, 0.0) * phase.conj();

                // A <- U† A U, touching only rows/cols p and q.
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c + akq * uqp;
                    a[(k, q)] = akp * upq + akq * c;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * c + aqk * uqp.conj();
                    a[(q, k)] = apk * upq.conj() + aqk * c;
                }
                // keep the pivot exactly zero and the diagonal exactly real
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c + vkq * uqp;
                    v[(k, q)] = vkp * upq + vkq * c;
                }
            }
        }
    }
    if !converged && off(&a) > JACOBI_STOP * scale.max(1.0) {
        return Err(MatrixError::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    let values: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).unwrap());

    let mut sorted_vals = Vec::with_capacity(n);
    let mut sorted_vecs = ComplexMatrix::zeros(n);
    for (col, &idx) in order.iter().enumerate() {
        sorted_vals.push(values[idx]);
        for k in 0..n {
            sorted_vecs[(k, col)] = v[(k, idx)];
        }
    }
    Ok(RawEigen {
        values: sorted_vals,
        vectors: sorted_vecs,
    })
}

/// Eigendecomposition of a Hermitian matrix with eigenvalue clustering:
/// adjacent eigenvalues closer than `tol.cluster_gap` share one cluster,
/// whose eigenvalue is their mean and whose projection is the sum of the
/// constituent rank-one eigenprojections.
pub fn eigh(m: &ComplexMatrix, tol: &Tolerance) -> Result<SpectralDecomposition, MatrixError> {
    let residual = m.hermitian_residual();
    if residual > tol.eq_tol * m.frobenius_norm().max(1.0) {
        return Err(MatrixError::NotHermitian { residual });
    }
    let raw = jacobi(m)?;
    let n = m.dim();

    let mut clusters: Vec<(f64, ComplexMatrix)> = Vec::new();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && raw.values[end] - raw.values[end - 1] <= tol.cluster_gap {
            end += 1;
        }
        let lambda = raw.values[start..end].iter().sum::<f64>() / (end - start) as f64;
        let mut proj = ComplexMatrix::zeros(n);
        for col in start..end {
            let x: Vec<Complex64> = (0..n).map(|k| raw.vectors[(k, col)]).collect();
            proj = proj.add(&ComplexMatrix::outer(&x));
        }
        clusters.push((lambda, proj.hermitize()));
        start = end;
    }

    Ok(SpectralDecomposition {
        dim: n,
        clusters,
    })
}

/// Smallest and largest eigenvalue of a Hermitian matrix.
pub fn eigen_range(m: &ComplexMatrix, tol: &Tolerance) -> Result<(f64, f64), MatrixError> {
    let s = eigh(m, tol)?;
    Ok((s.min_eigenvalue(), s.max_eigenvalue()))
}

/// True iff the minimum eigenvalue is >= -psd_tol·max(1, ‖M‖_F).
pub fn is_psd(m: &ComplexMatrix, tol: &Tolerance) -> Result<bool, MatrixError> {
    let (min, _) = eigen_range(m, tol)?;
    Ok(min >= -tol.psd_tol * m.frobenius_norm().max(1.0))
}

/// The unique PSD square root.
pub fn sqrt_psd(m: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix, MatrixError> {
    let s = eigh(m, tol)?;
    let slack = tol.psd_tol * m.frobenius_norm().max(1.0);
    if s.min_eigenvalue() < -slack {
        return Err(MatrixError::NotPsd {
            min_eigenvalue: s.min_eigenvalue(),
        });
    }
    // Eigenvalues within the PSD slack of zero are kernel up to rounding;
    // taking their literal square root would amplify the noise to √noise.
    let root = s.apply_total(|t| {
        if t <= slack {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(t.sqrt(), 0.0)
        }
    });
    Ok(root.hermitize())
}

/// Moore-Penrose pseudo-inverse of the PSD square root: eigenvalues below
/// psd_tol·‖M‖_F are treated as kernel.
fn pinv_sqrt(m: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix, MatrixError> {
    let s = eigh(m, tol)?;
    let cutoff = tol.psd_tol * m.frobenius_norm().max(1.0);
    Ok(s.apply_total(|t| {
        if t > cutoff {
            Complex64::new(1.0 / t.sqrt(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

/// Largest singular value, computed as sqrt of the top eigenvalue of M†M.
pub fn operator_norm(m: &RectMatrix, tol: &Tolerance) -> Result<f64, MatrixError> {
    let gram = m.gram().hermitize();
    let (_, max) = eigen_range(&gram, tol)?;
    Ok(max.max(0.0).sqrt())
}

/// Block positivity via the contraction criterion: [[A11, A12], [A21, A22]]
/// is PSD iff the diagonal blocks are PSD, A21 = A12†, and A12 factors as
/// A11^{1/2}·D·A22^{1/2} with ‖D‖ <= 1.
pub fn block_psd_check(
    a11: &ComplexMatrix,
    a12: &RectMatrix,
    a21: &RectMatrix,
    a22: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<bool, MatrixError> {
    if a12.rows() != a11.dim() || a12.cols() != a22.dim() {
        return Err(MatrixError::ShapeMismatch {
            left: a12.rows(),
            right: a11.dim(),
        });
    }
    if a21.rows() != a22.dim() || a21.cols() != a11.dim() {
        return Err(MatrixError::ShapeMismatch {
            left: a21.rows(),
            right: a22.dim(),
        });
    }
    let scale = a11
        .frobenius_norm()
        .max(a22.frobenius_norm())
        .max(a12.frobenius_norm())
        .max(1.0);

    if !is_psd(&a11.hermitize(), tol)? || !is_psd(&a22.hermitize(), tol)? {
        return Ok(false);
    }
    if a21.distance(&a12.adjoint()) > tol.eq_tol * scale {
        return Ok(false);
    }

    let s11 = pinv_sqrt(&a11.hermitize(), tol)?;
    let s22 = pinv_sqrt(&a22.hermitize(), tol)?;
    let d = a12.lmul_square(&s11).rmul_square(&s22);
    if operator_norm(&d, tol)? > 1.0 + tol.psd_tol {
        return Ok(false);
    }
    // D must actually reproduce A12; a kernel mismatch shows up here.
    let r11 = sqrt_psd(&a11.hermitize(), tol)?;
    let r22 = sqrt_psd(&a22.hermitize(), tol)?;
    let rebuilt = d.lmul_square(&r11).rmul_square(&r22);
    Ok(rebuilt.distance(a12) <= (tol.eq_tol * scale).max(10.0 * tol.psd_tol * scale))
}

/// If A = ξ·B for a unimodular complex ξ, return ξ; `None` otherwise.
/// Both (near-)zero returns ξ = 1 by convention.
pub fn phase_equal(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<Option<Complex64>, MatrixError> {
    if a.dim() != b.dim() {
        return Err(MatrixError::ShapeMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let b_norm = b.frobenius_norm();
    if b_norm <= tol.eq_tol {
        if a.frobenius_norm() <= tol.eq_tol {
            return Ok(Some(Complex64::new(1.0, 0.0)));
        }
        return Ok(None);
    }
    let xi = a.frobenius_inner(b) / Complex64::new(b_norm * b_norm, 0.0);
    if (xi.norm() - 1.0).abs() > tol.eq_tol {
        return Ok(None);
    }
    if a.distance(&b.scale(xi)) > tol.eq_tol * b_norm.max(1.0) {
        return Ok(None);
    }
    Ok(Some(xi))
}
