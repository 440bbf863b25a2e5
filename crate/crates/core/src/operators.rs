//! Complex-matrix and Hermitian-operator algebra.
//!
//! Square complex matrices with explicit dimension, Hermitian operators with
//! exactly enforced symmetry, the Hilbert-Schmidt inner product Tr(AB),
//! spectral decomposition with deterministic eigenvector phases, positivity
//! reports with relative tolerances, and orthonormal Hermitian bases.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::linalg;

/// Default relative tolerance used by positivity and rank decisions.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Relative asymmetry above which a matrix is rejected as non-Hermitian.
pub const HERMITICITY_REJECT: f64 = 1e-6;

/// A complex vector; eigenvectors and state representatives use this alias.
pub type CVector = Vec<Complex64>;

/// A square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Build from a closure over (row, col).
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Build from nested rows; every row must have the same length as the
    /// number of rows and every entry must be finite.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(CoreError::InvalidInput("matrix must be nonempty".into()));
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(CoreError::DimensionMismatch {
                    expected: dim,
                    got: row.len(),
                });
            }
            entries.extend_from_slice(row);
        }
        let m = Self { dim, entries };
        if !m.is_finite() {
            return Err(CoreError::InvalidInput(
                "matrix entries must be finite".into(),
            ));
        }
        Ok(m)
    }

    /// Rank-one outer product |x><y|.
    pub fn outer(x: &[Complex64], y: &[Complex64]) -> Self {
        assert_eq!(x.len(), y.len());
        Self::from_fn(x.len(), |i, j| x[i] * y[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|a| a * c).collect(),
        }
    }

    pub fn scale_re(&self, x: f64) -> Self {
        self.scale(Complex64::new(x, 0.0))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.get(i, k);
                if aik == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    let v = out.get(i, j) + aik * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    /// Entrywise index swap, no conjugation.
    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// ||A - A^dag||_F.
    pub fn hermitian_residual(&self) -> f64 {
        self.sub(&self.adjoint()).frobenius_norm()
    }

    /// ||A^dag A - I||_F.
    pub fn unitary_residual(&self) -> f64 {
        self.adjoint()
            .matmul(self)
            .sub(&Self::identity(self.dim))
            .frobenius_norm()
    }

    /// Matrix-vector product.
    pub fn apply_vec(&self, x: &[Complex64]) -> CVector {
        assert_eq!(x.len(), self.dim);
        let n = self.dim;
        (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j) * x[j]).sum())
            .collect()
    }
}

/// An n x n Hermitian operator; the (i, j) entry equals the conjugate
/// of the (j, i) entry exactly, enforced by symmetrization at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOp {
    mat: ComplexMatrix,
}

impl HermitianOp {
    /// Symmetrize (A + A^dag)/2 after rejecting matrices whose asymmetry
    /// exceeds `HERMITICITY_REJECT` relative to the norm.
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if !mat.is_finite() {
            return Err(CoreError::InvalidInput(
                "matrix entries must be finite".into(),
            ));
        }
        let norm = mat.frobenius_norm();
        let residual = mat.hermitian_residual();
        if residual > HERMITICITY_REJECT * norm.max(1.0) {
            return Err(CoreError::NotHermitian {
                asymmetry: residual / norm.max(1.0),
            });
        }
        Ok(Self::symmetrize(mat))
    }

    /// Symmetrize without the rejection threshold; for matrices that are
    /// Hermitian by construction up to rounding.
    pub(crate) fn symmetrize(mat: ComplexMatrix) -> Self {
        let n = mat.dim();
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            out.set(i, i, Complex64::new(mat.get(i, i).re, 0.0));
            for j in (i + 1)..n {
                let v = (mat.get(i, j) + mat.get(j, i).conj()).scale(0.5);
                out.set(i, j, v);
                out.set(j, i, v.conj());
            }
        }
        Self { mat: out }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            mat: ComplexMatrix::zeros(dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: ComplexMatrix::identity(dim),
        }
    }

    /// Real diagonal matrix.
    pub fn diagonal(values: &[f64]) -> Self {
        let mut mat = ComplexMatrix::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            mat.set(i, i, Complex64::new(v, 0.0));
        }
        Self { mat }
    }

    /// Rank-one projector-like operator |x><x| (not normalized).
    pub fn outer(x: &[Complex64]) -> Self {
        Self::symmetrize(ComplexMatrix::outer(x, x))
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.mat.get(i, j)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            mat: self.mat.add(&other.mat),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            mat: self.mat.sub(&other.mat),
        }
    }

    pub fn scale_re(&self, x: f64) -> Self {
        Self {
            mat: self.mat.scale_re(x),
        }
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.mat.frobenius_norm()
    }
}

/// Hilbert-Schmidt inner product Tr(AB) on Hermitian operators.
pub fn hs_inner(a: &HermitianOp, b: &HermitianOp) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(CoreError::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    let n = a.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            // Tr(AB) = sum_ij A[i][j] B[j][i]; real for Hermitian A, B.
            acc += (a.get(i, j) * b.get(j, i)).re;
        }
    }
    Ok(acc)
}

/// Eigenvalues (descending) with orthonormal, phase-fixed eigenvectors.
pub fn spectral_decompose(a: &HermitianOp) -> Result<Vec<(f64, CVector)>> {
    if !a.matrix().is_finite() {
        return Err(CoreError::InvalidInput(
            "matrix entries must be finite".into(),
        ));
    }
    let (vals, vecs) = linalg::hermitian_eigen(a.matrix());
    Ok(vals.into_iter().zip(vecs).collect())
}

/// Outcome of a positivity test with relative tolerance.
#[derive(Debug, Clone, Serialize)]
pub struct PsdReport {
    pub is_psd: bool,
    pub min_eigenvalue: f64,
    pub numeric_rank: usize,
}

/// Positive semi-definiteness and numeric rank at tolerance `tol`,
/// relative to max(1, ||A||). The rank counts eigenvalues of magnitude
/// above the threshold, so indefinite matrices report their full rank.
pub fn psd_report(a: &HermitianOp, tol: f64) -> Result<PsdReport> {
    if !tol.is_finite() || tol <= 0.0 {
        return Err(CoreError::InvalidInput("tol must be positive".into()));
    }
    let scale = a.frobenius_norm().max(1.0);
    let eig = spectral_decompose(a)?;
    let min_eigenvalue = eig.last().map(|(v, _)| *v).unwrap_or(0.0);
    let numeric_rank = eig.iter().filter(|(v, _)| v.abs() > tol * scale).count();
    Ok(PsdReport {
        is_psd: min_eigenvalue >= -tol * scale,
        min_eigenvalue,
        numeric_rank,
    })
}

/// Orthonormal basis of the real space of n x n Hermitian operators:
/// I/sqrt(n) first, then for each pair j < k the symmetric and antisymmetric
/// off-diagonal generators, then the traceless diagonal ones. For n = 2 this
/// is the normalized Pauli basis (I, sigma1, sigma2, sigma3)/sqrt(2).
pub fn hermitian_basis(n: usize) -> Result<Vec<HermitianOp>> {
    if n == 0 {
        return Err(CoreError::InvalidInput(
            "basis dimension must be at least 1".into(),
        ));
    }
    let mut basis = Vec::with_capacity(n * n);
    basis.push(HermitianOp::identity(n).scale_re(1.0 / (n as f64).sqrt()));
    let inv_sqrt2 = 1.0 / 2f64.sqrt();
    for j in 0..n {
        for k in (j + 1)..n {
            let mut sym = ComplexMatrix::zeros(n);
            sym.set(j, k, Complex64::new(inv_sqrt2, 0.0));
            sym.set(k, j, Complex64::new(inv_sqrt2, 0.0));
            basis.push(HermitianOp { mat: sym });
            let mut anti = ComplexMatrix::zeros(n);
            anti.set(j, k, Complex64::new(0.0, -inv_sqrt2));
            anti.set(k, j, Complex64::new(0.0, inv_sqrt2));
            basis.push(HermitianOp { mat: anti });
        }
    }
    for m in 1..n {
        // diag(1,...,1,-m,0,...,0)/sqrt(m(m+1)) with m leading ones
        let norm = (m as f64 * (m as f64 + 1.0)).sqrt();
        let mut vals = vec![0.0; n];
        for v in vals.iter_mut().take(m) {
            *v = 1.0 / norm;
        }
        vals[m] = -(m as f64) / norm;
        basis.push(HermitianOp::diagonal(&vals));
    }
    Ok(basis)
}

/// Transposition in the fixed basis: entrywise index swap, no conjugation.
/// Involutive; preserves Hermiticity, trace, and eigenvalues.
pub fn transpose_in_basis(a: &ComplexMatrix) -> ComplexMatrix {
    a.transpose()
}

/// Spectral function f(A) = sum f(lambda_i) |x_i><x_i|, applied only to
/// eigenvalues above `rel_cut` times the largest magnitude (the rest map
/// to zero). Used for pseudo-inverse square roots of psd operators.
pub fn hermitian_power(a: &HermitianOp, exponent: f64, rel_cut: f64) -> Result<HermitianOp> {
    let eig = spectral_decompose(a)?;
    let top = eig.iter().map(|(v, _)| v.abs()).fold(0.0f64, f64::max);
    let mut out = ComplexMatrix::zeros(a.dim());
    for (val, vec) in &eig {
        if *val > rel_cut * top && *val > 0.0 {
            out = out.add(&ComplexMatrix::outer(vec, vec).scale_re(val.powf(exponent)));
        }
    }
    Ok(HermitianOp::symmetrize(out))
}

/// JSON form of a complex matrix: row-major real and imaginary parts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let n = m.dim();
        let row = |i: usize, f: fn(Complex64) -> f64| (0..n).map(|j| f(m.get(i, j))).collect();
        Self {
            dim: n,
            re: (0..n).map(|i| row(i, |z| z.re)).collect(),
            im: (0..n).map(|i| row(i, |z| z.im)).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let n = self.dim;
        if n == 0 {
            return Err(CoreError::InvalidInput("dim must be at least 1".into()));
        }
        let check = |part: &Vec<Vec<f64>>, name: &str| -> Result<()> {
            if part.len() != n || part.iter().any(|r| r.len() != n) {
                return Err(CoreError::InvalidInput(format!(
                    "field '{name}' must be a {n} x {n} array"
                )));
            }
            Ok(())
        };
        check(&self.re, "re")?;
        check(&self.im, "im")?;
        let m = ComplexMatrix::from_fn(n, |i, j| Complex64::new(self.re[i][j], self.im[i][j]));
        if !m.is_finite() {
            return Err(CoreError::InvalidInput(
                "matrix entries must be finite".into(),
            ));
        }
        Ok(m)
    }
}

/// The Pauli matrices; handy for tests and qubit constructions.
pub mod pauli {
    use super::ComplexMatrix;
    use num_complex::Complex64;

    pub fn sigma1() -> ComplexMatrix {
        ComplexMatrix::from_fn(2, |i, j| {
            if i != j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn sigma2() -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(2);
        m.set(0, 1, Complex64::new(0.0, -1.0));
        m.set(1, 0, Complex64::new(0.0, 1.0));
        m
    }

    pub fn sigma3() -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(2);
        m.set(0, 0, Complex64::new(1.0, 0.0));
        m.set(1, 1, Complex64::new(-1.0, 0.0));
        m
    }
}
