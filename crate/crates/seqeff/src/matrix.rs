//! Dense complex matrices and the tolerance bundle used everywhere else.
//!
//! Matrices are small (dim <= ~16) row-major buffers of `Complex64`. No
//! attempt is made at cache blocking or sparsity; the verification suites
//! dominate runtime through eigendecompositions, not multiplies.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Numerical thresholds threaded through every operation.
///
/// `eq_tol` gates matrix equality (Frobenius, relative), `psd_tol` is the
/// slack allowed on negative eigenvalues, `cluster_gap` is the width within
/// which eigenvalues are merged into one spectral cluster.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub eq_tol: f64,
    pub psd_tol: f64,
    pub cluster_gap: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            eq_tol: 1e-9,
            psd_tol: 1e-10,
            cluster_gap: 1e-8,
        }
    }
}

impl Tolerance {
    pub fn new(eq_tol: f64, psd_tol: f64, cluster_gap: f64) -> Result<Self, MatrixError> {
        if !(eq_tol > 0.0 && psd_tol > 0.0 && cluster_gap > 0.0) {
            return Err(MatrixError::InvalidTolerance);
        }
        if cluster_gap <= eq_tol {
            return Err(MatrixError::InvalidTolerance);
        }
        Ok(Tolerance {
            eq_tol,
            psd_tol,
            cluster_gap,
        })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum MatrixError {
    #[error("matrix is not Hermitian (‖M - M†‖_F = {residual})")]
    NotHermitian { residual: f64 },
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("eigensolver failed to converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    ShapeMismatch { left: usize, right: usize },
    #[error("function undefined at eigenvalue {eigenvalue}")]
    Domain { eigenvalue: f64 },
    #[error("tolerances must be strictly positive with cluster_gap > eq_tol")]
    InvalidTolerance,
    #[error("invalid matrix literal: {0}")]
    BadLiteral(String),
}

/// Dense n x n complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  [")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, " {:.4}{:+.4}i", z.re, z.im)?;
            }
            writeln!(f, " ]")?;
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.dim + j]
    }
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "dim must be >= 1");
        ComplexMatrix {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_entries(dim: usize, entries: Vec<Complex64>) -> Result<Self, MatrixError> {
        if dim < 1 || entries.len() != dim * dim {
            return Err(MatrixError::BadLiteral(format!(
                "expected {} entries for dim {}, got {}",
                dim * dim,
                dim,
                entries.len()
            )));
        }
        Ok(ComplexMatrix { dim, entries })
    }

    /// Real diagonal matrix.
    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    pub fn scalar(dim: usize, value: f64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(value, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        ComplexMatrix {
            dim: self.dim,
            entries,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        ComplexMatrix {
            dim: self.dim,
            entries,
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        ComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|a| a * s).collect(),
        }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// ‖A - B‖_F.
    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// tr(B† A), the Frobenius inner product ⟨B, A⟩.
    pub fn frobenius_inner(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim, other.dim);
        other
            .entries
            .iter()
            .zip(&self.entries)
            .map(|(b, a)| b.conj() * a)
            .sum()
    }

    /// ‖AB - BA‖_F.
    pub fn commutator_norm(&self, other: &Self) -> f64 {
        self.mul(other).distance(&other.mul(self))
    }

    pub fn hermitian_residual(&self) -> f64 {
        self.distance(&self.adjoint())
    }

    pub fn is_hermitian(&self, tol: &Tolerance) -> bool {
        self.hermitian_residual() <= tol.eq_tol * self.frobenius_norm().max(1.0)
    }

    /// (M + M†)/2.
    pub fn hermitize(&self) -> Self {
        self.add(&self.adjoint()).scale_re(0.5)
    }

    /// Outer product x·x† of a (not necessarily unit) vector.
    pub fn outer(x: &[Complex64]) -> Self {
        let n = x.len();
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = x[i] * x[j].conj();
            }
        }
        m
    }

    /// M x for a vector x.
    pub fn apply_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.dim);
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self[(i, j)] * x[j]).sum())
            .collect()
    }

    /// ⟨M x, x⟩.
    pub fn quadratic_form(&self, x: &[Complex64]) -> Complex64 {
        self.apply_vec(x)
            .iter()
            .zip(x)
            .map(|(mx, xi)| mx * xi.conj())
            .sum()
    }

    /// Embed four blocks into the assembled matrix
    /// [[A11, A12], [A21, A22]] (dims n1 + n2).
    pub fn assemble_blocks(a11: &Self, a12: &RectMatrix, a21: &RectMatrix, a22: &Self) -> Self {
        let n1 = a11.dim;
        let n2 = a22.dim;
        assert_eq!(a12.rows, n1);
        assert_eq!(a12.cols, n2);
        assert_eq!(a21.rows, n2);
        assert_eq!(a21.cols, n1);
        let n = n1 + n2;
        let mut m = Self::zeros(n);
        for i in 0..n1 {
            for j in 0..n1 {
                m[(i, j)] = a11[(i, j)];
            }
            for j in 0..n2 {
                m[(i, n1 + j)] = a12.get(i, j);
            }
        }
        for i in 0..n2 {
            for j in 0..n1 {
                m[(n1 + i, j)] = a21.get(i, j);
            }
            for j in 0..n2 {
                m[(n1 + i, n1 + j)] = a22[(i, j)];
            }
        }
        m
    }
}

/// Rectangular complex matrix; only needed for the off-diagonal blocks of
/// the block-positivity test.
#[derive(Clone, Debug, PartialEq)]
pub struct RectMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl RectMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RectMatrix {
            rows,
            cols,
            entries: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<Complex64>) -> Self {
        assert_eq!(entries.len(), rows * cols);
        RectMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn adjoint(&self) -> Self {
        let mut out = RectMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Square-matrix product L (rows x rows) · self.
    pub fn lmul_square(&self, left: &ComplexMatrix) -> Self {
        assert_eq!(left.dim(), self.rows);
        let mut out = RectMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for k in 0..self.rows {
                let a = left[(i, k)];
                for j in 0..self.cols {
                    let v = out.get(i, j) + a * self.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// self · R for square R (cols x cols).
    pub fn rmul_square(&self, right: &ComplexMatrix) -> Self {
        assert_eq!(right.dim(), self.cols);
        let mut out = RectMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                for j in 0..self.cols {
                    let v = out.get(i, j) + a * right[(k, j)];
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// self† · self as a square matrix (cols x cols).
    pub fn gram(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.cols);
        for i in 0..self.cols {
            for j in 0..self.cols {
                let mut s = Complex64::new(0.0, 0.0);
                for k in 0..self.rows {
                    s += self.get(k, i).conj() * self.get(k, j);
                }
                out[(i, j)] = s;
            }
        }
        out
    }
}

/// JSON literal form: {"dim": n, "re": [...], "im": [...]}, row-major.
#[derive(Serialize, Deserialize)]
struct MatrixLiteral {
    dim: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl Serialize for ComplexMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let lit = MatrixLiteral {
            dim: self.dim,
            re: self.entries.iter().map(|z| z.re).collect(),
            im: self.entries.iter().map(|z| z.im).collect(),
        };
        lit.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let lit = MatrixLiteral::deserialize(deserializer)?;
        if lit.re.len() != lit.dim * lit.dim || lit.im.len() != lit.dim * lit.dim {
            return Err(serde::de::Error::custom(format!(
                "matrix literal: expected {} entries, got re={} im={}",
                lit.dim * lit.dim,
                lit.re.len(),
                lit.im.len()
            )));
        }
        if lit.dim < 1 {
            return Err(serde::de::Error::custom("matrix literal: dim must be >= 1"));
        }
        let entries = lit
            .re
            .iter()
            .zip(&lit.im)
            .map(|(&r, &i)| Complex64::new(r, i))
            .collect();
        Ok(ComplexMatrix {
            dim: lit.dim,
            entries,
        })
    }
}

/// (M + M†)/2 as a free function, mirroring the operation inventory.
pub fn hermitize(m: &ComplexMatrix) -> ComplexMatrix {
    m.hermitize()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hermitize_fixes_hermitian() {
        let m = ComplexMatrix::from_entries(
            2,
            vec![c(1.0, 0.0), c(0.5, 0.5), c(0.5, -0.5), c(2.0, 0.0)],
        )
        .unwrap();
        assert!(m.distance(&m.hermitize()) < 1e-15);
    }

    #[test]
    fn hermitize_nilpotent() {
        let m = ComplexMatrix::from_entries(
            2,
            vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        )
        .unwrap();
        let h = m.hermitize();
        let expected = ComplexMatrix::from_entries(
            2,
            vec![c(0.0, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(0.0, 0.0)],
        )
        .unwrap();
        assert!(h.distance(&expected) < 1e-15);
    }

    #[test]
    fn hermitize_symmetry_random() {
        // deterministic "random" entries
        let entries: Vec<Complex64> = (0..9)
            .map(|k| c((k as f64 * 0.37).sin(), (k as f64 * 0.73).cos()))
            .collect();
        let m = ComplexMatrix::from_entries(3, entries).unwrap();
        let h = m.hermitize();
        assert!(h.hermitian_residual() < 1e-15);
    }

    #[test]
    fn matrix_literal_roundtrip() {
        let m = ComplexMatrix::from_entries(
            2,
            vec![c(1.0, 0.0), c(0.25, -0.5), c(0.25, 0.5), c(0.5, 0.0)],
        )
        .unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert!(s.contains("\"dim\":2"));
        let back: ComplexMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn literal_rejects_bad_length() {
        let s = r#"{"dim": 2, "re": [1.0, 0.0], "im": [0.0, 0.0]}"#;
        assert!(serde_json::from_str::<ComplexMatrix>(s).is_err());
    }

    #[test]
    fn tolerance_validation() {
        assert!(Tolerance::new(1e-9, 1e-10, 1e-8).is_ok());
        assert!(Tolerance::new(0.0, 1e-10, 1e-8).is_err());
        assert!(Tolerance::new(1e-8, 1e-10, 1e-9).is_err());
    }

    #[test]
    fn block_assembly() {
        let a11 = ComplexMatrix::identity(2);
        let a22 = ComplexMatrix::identity(1);
        let a12 = RectMatrix::from_entries(2, 1, vec![c(1.0, 0.0), c(2.0, 0.0)]);
        let a21 = a12.adjoint();
        let m = ComplexMatrix::assemble_blocks(&a11, &a12, &a21, &a22);
        assert_eq!(m.dim(), 3);
        assert_eq!(m[(0, 2)], c(1.0, 0.0));
        assert_eq!(m[(2, 1)], c(2.0, 0.0));
        assert!(m.hermitian_residual() < 1e-15);
    }
}
