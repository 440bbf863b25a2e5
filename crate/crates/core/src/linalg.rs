//! Dense linear-algebra kernels: a cyclic Jacobi eigensolver for complex
//! Hermitian matrices, singular values through the Hermitian block
//! embedding [[0, A], [A^dag, 0]], and small real-matrix utilities.
//!
//! Everything here is deterministic: no pivot ordering depends on memory
//! layout or hashing, and eigenvector phases are fixed explicitly.

use num_complex::Complex64;

use crate::operators::{CVector, ComplexMatrix};

/// Fix the phase of a complex vector so its first entry of largest modulus
/// becomes real non-negative.
pub fn fix_phase(v: &mut [Complex64]) {
    let mut best = 0usize;
    let mut best_norm = -1.0;
    for (i, z) in v.iter().enumerate() {
        let n = z.norm();
        if n > best_norm + 1e-15 {
            best_norm = n;
            best = i;
        }
    }
    if best_norm <= 0.0 {
        return;
    }
    let phase = v[best] / v[best].norm();
    let correction = phase.conj();
    for z in v.iter_mut() {
        *z *= correction;
    }
    v[best] = Complex64::new(v[best].re.abs(), 0.0);
}

/// Eigenvalues (descending) and orthonormal eigenvectors of a Hermitian
/// matrix, by cyclic Jacobi rotations. The caller guarantees Hermiticity;
/// only the upper triangle and real diagonal are consulted.
pub fn hermitian_eigen(a: &ComplexMatrix) -> (Vec<f64>, Vec<CVector>) {
    let n = a.dim();
    let mut m = a.clone();
    let mut q = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();

    if n > 1 && scale > 0.0 {
        let thresh = 1e-15 * scale;
        for _sweep in 0..100 {
            let mut off = 0.0;
            for p in 0..n {
                for r in (p + 1)..n {
                    off += m.get(p, r).norm_sqr();
                }
            }
            if off.sqrt() <= thresh {
                break;
            }
            for p in 0..n {
                for r in (p + 1)..n {
                    jacobi_rotate(&mut m, &mut q, p, r);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        m.get(j, j)
            .re
            .partial_cmp(&m.get(i, i).re)
            .unwrap()
            .then(i.cmp(&j))
    });

    let mut values = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n);
    for &col in &order {
        values.push(m.get(col, col).re);
        let mut v: CVector = (0..n).map(|row| q.get(row, col)).collect();
        fix_phase(&mut v);
        vectors.push(v);
    }
    (values, vectors)
}

/// One Jacobi rotation annihilating the (p, r) entry; updates the matrix
/// in place and accumulates the rotation into `q`.
fn jacobi_rotate(m: &mut ComplexMatrix, q: &mut ComplexMatrix, p: usize, r: usize) {
    let n = m.dim();
    let apr = m.get(p, r);
    let mag = apr.norm();
    if mag == 0.0 {
        return;
    }
    // Unimodular phase turning the 2x2 block real symmetric.
    let phase = apr / mag;
    let app = m.get(p, p).re;
    let arr = m.get(r, r).re;
    let tau = (arr - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // Column update A <- A R with R[p][p]=c, R[p][r]=s,
    // R[r][p]=-s conj(phase), R[r][r]=c conj(phase).
    let sp = Complex64::new(s, 0.0) * phase.conj();
    let cp = Complex64::new(c, 0.0) * phase.conj();
    for k in 0..n {
        if k == p || k == r {
            continue;
        }
        let akp = m.get(k, p);
        let akr = m.get(k, r);
        let new_p = akp.scale(c) - akr * sp;
        let new_r = akp.scale(s) + akr * cp;
        m.set(k, p, new_p);
        m.set(k, r, new_r);
        m.set(p, k, new_p.conj());
        m.set(r, k, new_r.conj());
    }
    m.set(p, p, Complex64::new(app - t * mag, 0.0));
    m.set(r, r, Complex64::new(arr + t * mag, 0.0));
    m.set(p, r, Complex64::new(0.0, 0.0));
    m.set(r, p, Complex64::new(0.0, 0.0));

    for k in 0..n {
        let qkp = q.get(k, p);
        let qkr = q.get(k, r);
        q.set(k, p, qkp.scale(c) - qkr * sp);
        q.set(k, r, qkp.scale(s) + qkr * cp);
    }
}

/// Singular values (descending) of the complex matrix whose rows are given,
/// via the Hermitian embedding [[0, A], [A^dag, 0]]. Returns min(rows, cols)
/// values, clamped to be non-negative. The embedding avoids squaring the
/// condition number, so ranks can be decided at thresholds near 1e-8.
pub fn singular_values_of_rows(rows: &[CVector]) -> Vec<f64> {
    let m = rows.len();
    if m == 0 {
        return Vec::new();
    }
    let cols = rows[0].len();
    assert!(rows.iter().all(|r| r.len() == cols));
    let dim = m + cols;
    let mut h = ComplexMatrix::zeros(dim);
    for (i, row) in rows.iter().enumerate() {
        for (j, z) in row.iter().enumerate() {
            h.set(i, m + j, *z);
            h.set(m + j, i, z.conj());
        }
    }
    let (vals, _) = hermitian_eigen(&h);
    vals.into_iter().take(m.min(cols)).map(|v| v.max(0.0)).collect()
}

/// Singular values of a square complex matrix.
pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    let n = a.dim();
    let rows: Vec<CVector> = (0..n).map(|i| (0..n).map(|j| a.get(i, j)).collect()).collect();
    singular_values_of_rows(&rows)
}

/// Determinant of a square complex matrix by LU with partial pivoting.
pub fn complex_det(a: &ComplexMatrix) -> Complex64 {
    let n = a.dim();
    let mut m = a.clone();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let mut pivot = col;
        for row in (col + 1)..n {
            if m.get(row, col).norm() > m.get(pivot, col).norm() {
                pivot = row;
            }
        }
        let pval = m.get(pivot, col);
        if pval.norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            for j in 0..n {
                let (x, y) = (m.get(col, j), m.get(pivot, j));
                m.set(col, j, y);
                m.set(pivot, j, x);
            }
            det = -det;
        }
        det *= m.get(col, col);
        for row in (col + 1)..n {
            let factor = m.get(row, col) / m.get(col, col);
            if factor.norm() == 0.0 {
                continue;
            }
            for j in col..n {
                let v = m.get(row, j) - factor * m.get(col, j);
                m.set(row, j, v);
            }
        }
    }
    det
}

/// Count of singular values exceeding `rel_tol` times the largest one.
pub fn rank_from_singular_values(svals: &[f64], rel_tol: f64) -> usize {
    let top = svals.first().copied().unwrap_or(0.0);
    if top <= 0.0 {
        return 0;
    }
    svals.iter().filter(|&&s| s > rel_tol * top).count()
}

/// A dense real matrix, row-major, not necessarily square.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Option<Self> {
        let r = rows.len();
        let c = rows.first()?.len();
        if rows.iter().any(|row| row.len() != c) {
            return None;
        }
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            data.extend_from_slice(row);
        }
        Some(Self { rows: r, cols: c, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j)).collect())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if aik == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.set(i, j, out.get(i, j) + aik * other.get(k, j));
                }
            }
        }
        out
    }

    pub fn apply_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * x[j]).sum())
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, x: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * x).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// ||A^T A - I||_F; small for orthogonal matrices.
    pub fn orthogonality_residual(&self) -> f64 {
        assert_eq!(self.rows, self.cols);
        self.transpose()
            .matmul(self)
            .sub(&Self::identity(self.cols))
            .frobenius_norm()
    }

    pub fn singular_values(&self) -> Vec<f64> {
        let rows: Vec<CVector> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| Complex64::new(self.get(i, j), 0.0)).collect())
            .collect();
        singular_values_of_rows(&rows)
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting; `None`
    /// when a pivot degenerates.
    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let mut pivot = col;
            for row in (col + 1)..n {
                if a.get(row, col).abs() > a.get(pivot, col).abs() {
                    pivot = row;
                }
            }
            let pval = a.get(pivot, col);
            if pval.abs() < 1e-250 {
                return None;
            }
            if pivot != col {
                for j in 0..n {
                    let (x, y) = (a.get(col, j), a.get(pivot, j));
                    a.set(col, j, y);
                    a.set(pivot, j, x);
                    let (x, y) = (inv.get(col, j), inv.get(pivot, j));
                    inv.set(col, j, y);
                    inv.set(pivot, j, x);
                }
            }
            let inv_p = 1.0 / a.get(col, col);
            for j in 0..n {
                a.set(col, j, a.get(col, j) * inv_p);
                inv.set(col, j, inv.get(col, j) * inv_p);
            }
            for row in 0..n {
                if row == col {
                    continue;
                }
                let factor = a.get(row, col);
                if factor == 0.0 {
                    continue;
                }
                for j in 0..n {
                    a.set(row, j, a.get(row, j) - factor * a.get(col, j));
                    inv.set(row, j, inv.get(row, j) - factor * inv.get(col, j));
                }
            }
        }
        Some(inv)
    }
}

/// Full singular value decomposition A = U diag(sigma) V^T of a real
/// matrix, with U, V orthogonal and sigma descending.
#[derive(Debug, Clone)]
pub struct RealSvd {
    pub u: RealMatrix,
    pub singular_values: Vec<f64>,
    pub v: RealMatrix,
}

pub fn real_svd(a: &RealMatrix) -> RealSvd {
    let (m, n) = (a.nrows(), a.ncols());
    let k = m.min(n);
    let dim = m + n;
    let mut h = ComplexMatrix::zeros(dim);
    for i in 0..m {
        for j in 0..n {
            h.set(i, m + j, Complex64::new(a.get(i, j), 0.0));
            h.set(m + j, i, Complex64::new(a.get(i, j), 0.0));
        }
    }
    let (vals, vecs) = hermitian_eigen(&h);
    let top = vals.first().copied().unwrap_or(0.0).max(0.0);
    let cutoff = 1e-13 * top;

    let sqrt2 = 2f64.sqrt();
    let mut sigma = Vec::with_capacity(k);
    let mut u_cols: Vec<Vec<f64>> = Vec::new();
    let mut v_cols: Vec<Vec<f64>> = Vec::new();
    for i in 0..k {
        let s = vals[i].max(0.0);
        sigma.push(s);
        if s > cutoff {
            let w = &vecs[i];
            u_cols.push((0..m).map(|r| w[r].re * sqrt2).collect());
            v_cols.push((0..n).map(|r| w[m + r].re * sqrt2).collect());
        }
    }
    complete_orthonormal(&mut u_cols, m);
    complete_orthonormal(&mut v_cols, n);

    let u = RealMatrix::from_fn(m, m, |i, j| u_cols[j][i]);
    let v = RealMatrix::from_fn(n, n, |i, j| v_cols[j][i]);
    RealSvd {
        u,
        singular_values: sigma,
        v,
    }
}

/// Extend a set of orthonormal columns to a full orthonormal basis of R^dim
/// by Gram-Schmidt against the coordinate axes.
fn complete_orthonormal(cols: &mut Vec<Vec<f64>>, dim: usize) {
    let mut axis = 0;
    while cols.len() < dim && axis < dim {
        let mut cand = vec![0.0; dim];
        cand[axis] = 1.0;
        axis += 1;
        for _pass in 0..2 {
            for c in cols.iter() {
                let dot: f64 = c.iter().zip(&cand).map(|(a, b)| a * b).sum();
                for (ci, xi) in c.iter().zip(cand.iter_mut()) {
                    *xi -= dot * ci;
                }
            }
        }
        let norm: f64 = cand.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-8 {
            for x in cand.iter_mut() {
                *x /= norm;
            }
            cols.push(cand);
        }
    }
    assert_eq!(cols.len(), dim, "orthonormal completion failed");
}
