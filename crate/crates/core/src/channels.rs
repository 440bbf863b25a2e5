//! Kraus channels, the Jamiolkowski/Choi correspondence in both directions,
//! trace invariants, normalization, trace-preserving/unital predicates, and
//! superoperator matrices over the orthonormal Hermitian basis.
//!
//! Conventions, used everywhere in this crate:
//! - a channel acts as `A(rho) = sum_i V_i^dag rho V_i` ("dagger-left");
//! - `vec` stacks columns: entry (row j, col k) lands at position k*n + j;
//! - the Choi matrix is `J(A) = sum_i |vec(V_i^dag)><vec(V_i^dag)|`, so for
//!   a general linear map `J[(k n + j), (k' n + j')] = Phi(E_kk')[j][j']`
//!   with `E_kk' = |e_k><e_k'|`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::linalg::RealMatrix;
use crate::operators::{
    hermitian_basis, hs_inner, spectral_decompose, CVector, ComplexMatrix, HermitianOp,
    MatrixJson,
};

/// A completely positive map in Kraus form, acting as
/// `rho -> sum_i V_i^dag rho V_i`.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    dim: usize,
    kraus_ops: Vec<ComplexMatrix>,
}

impl KrausChannel {
    pub fn new(dim: usize, kraus_ops: Vec<ComplexMatrix>) -> Result<Self> {
        if kraus_ops.is_empty() {
            return Err(CoreError::InvalidInput(
                "channel needs at least one Kraus operator".into(),
            ));
        }
        for op in &kraus_ops {
            if op.dim() != dim {
                return Err(CoreError::DimensionMismatch {
                    expected: dim,
                    got: op.dim(),
                });
            }
            if !op.is_finite() {
                return Err(CoreError::InvalidInput(
                    "Kraus operator entries must be finite".into(),
                ));
            }
        }
        if kraus_ops.iter().all(|op| op.frobenius_norm() == 0.0) {
            return Err(CoreError::InvalidInput(
                "all Kraus operators are zero".into(),
            ));
        }
        Ok(Self { dim, kraus_ops })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            kraus_ops: vec![ComplexMatrix::identity(dim)],
        }
    }

    /// The channel `rho -> U rho U^dag` (stored as the Kraus operator U^dag
    /// under the dagger-left convention).
    pub fn from_unitary_conjugation(u: &ComplexMatrix) -> Self {
        Self {
            dim: u.dim(),
            kraus_ops: vec![u.adjoint()],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kraus_ops(&self) -> &[ComplexMatrix] {
        &self.kraus_ops
    }

    /// Apply to a Hermitian operator; the output is symmetrized exactly.
    pub fn apply(&self, rho: &HermitianOp) -> Result<HermitianOp> {
        if rho.dim() != self.dim {
            return Err(CoreError::DimensionMismatch {
                expected: self.dim,
                got: rho.dim(),
            });
        }
        Ok(HermitianOp::symmetrize(self.apply_complex(rho.matrix())))
    }

    /// Apply to an arbitrary complex matrix.
    pub fn apply_complex(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim);
        for v in &self.kraus_ops {
            out = out.add(&v.adjoint().matmul(x).matmul(v));
        }
        out
    }

    /// Image of the rank-one operator |x><x|: sum_i |V_i^dag x><V_i^dag x|.
    pub fn apply_to_pure_vec(&self, x: &[Complex64]) -> HermitianOp {
        let mut out = ComplexMatrix::zeros(self.dim);
        for v in &self.kraus_ops {
            let w = v.adjoint().apply_vec(x);
            out = out.add(&ComplexMatrix::outer(&w, &w));
        }
        HermitianOp::symmetrize(out)
    }

    /// The Hilbert-Schmidt adjoint map Z -> sum_i V_i Z V_i^dag applied to
    /// a rank-one |v><v|.
    pub fn adjoint_apply_pure(&self, v: &[Complex64]) -> HermitianOp {
        let mut out = ComplexMatrix::zeros(self.dim);
        for k in &self.kraus_ops {
            let w = k.apply_vec(v);
            out = out.add(&ComplexMatrix::outer(&w, &w));
        }
        HermitianOp::symmetrize(out)
    }

    /// sum_i V_i V_i^dag = adjoint map applied to the identity; equals I
    /// exactly when the channel is trace preserving.
    pub fn adjoint_of_identity(&self) -> HermitianOp {
        let mut out = ComplexMatrix::zeros(self.dim);
        for v in &self.kraus_ops {
            out = out.add(&v.matmul(&v.adjoint()));
        }
        HermitianOp::symmetrize(out)
    }

    /// Tr(sum_i V_i^dag V_i) = sum of squared Frobenius norms.
    pub fn spectral_trace(&self) -> f64 {
        self.kraus_ops
            .iter()
            .map(|v| {
                let f = v.frobenius_norm();
                f * f
            })
            .sum()
    }
}

/// The Choi matrix of a map on gl(H): an n^2 x n^2 Hermitian operator.
#[derive(Debug, Clone)]
pub struct ChoiMatrix {
    dim: usize,
    matrix: HermitianOp,
}

impl ChoiMatrix {
    pub fn new(dim: usize, matrix: HermitianOp) -> Result<Self> {
        if matrix.dim() != dim * dim {
            return Err(CoreError::DimensionMismatch {
                expected: dim * dim,
                got: matrix.dim(),
            });
        }
        Ok(Self { dim, matrix })
    }

    /// Hilbert-space dimension n (the matrix itself is n^2 x n^2).
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &HermitianOp {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }
}

/// Column-stacking vec: entry (j, k) at position k*n + j.
pub fn vec_of(m: &ComplexMatrix) -> CVector {
    let n = m.dim();
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    for j in 0..n {
        for k in 0..n {
            out[k * n + j] = m.get(j, k);
        }
    }
    out
}

/// Inverse of `vec_of`.
pub fn unvec(n: usize, x: &[Complex64]) -> ComplexMatrix {
    assert_eq!(x.len(), n * n);
    ComplexMatrix::from_fn(n, |j, k| x[k * n + j])
}

/// Choi matrix of a Kraus channel: `sum_i |vec(V_i^dag)><vec(V_i^dag)|`.
/// Positive semi-definite by construction; its trace is the spectral trace.
pub fn choi_of(ch: &KrausChannel) -> ChoiMatrix {
    let n = ch.dim();
    let mut acc = ComplexMatrix::zeros(n * n);
    for v in ch.kraus_ops() {
        let w = vec_of(&v.adjoint());
        acc = acc.add(&ComplexMatrix::outer(&w, &w));
    }
    ChoiMatrix {
        dim: n,
        matrix: HermitianOp::symmetrize(acc),
    }
}

/// Choi matrix of an arbitrary linear map given by its action on complex
/// matrices: `J[(k n + j), (k' n + j')] = Phi(E_kk')[j][j']`.
pub fn choi_of_map(n: usize, mut apply: impl FnMut(&ComplexMatrix) -> ComplexMatrix) -> ChoiMatrix {
    let mut j_mat = ComplexMatrix::zeros(n * n);
    for k in 0..n {
        for kp in 0..n {
            let mut unit = ComplexMatrix::zeros(n);
            unit.set(k, kp, Complex64::new(1.0, 0.0));
            let image = apply(&unit);
            for j in 0..n {
                for jp in 0..n {
                    j_mat.set(k * n + j, kp * n + jp, image.get(j, jp));
                }
            }
        }
    }
    ChoiMatrix {
        dim: n,
        matrix: HermitianOp::symmetrize(j_mat),
    }
}

/// Reconstruct the superoperator of the (not necessarily CP) map encoded
/// by a Choi matrix, inverting the reshuffle `Phi(E_kk')[j][j'] =
/// J[(k n + j), (k' n + j')]`.
pub fn superop_of_choi(c: &ChoiMatrix) -> SuperOpMatrix {
    let n = c.dim();
    SuperOpMatrix::from_map(n, |h| {
        let mut out = ComplexMatrix::zeros(n);
        for k in 0..n {
            for kp in 0..n {
                let weight = h.get(k, kp);
                if weight == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    for jp in 0..n {
                        let v = out.get(j, jp)
                            + weight * c.matrix().get(k * n + j, kp * n + jp);
                        out.set(j, jp, v);
                    }
                }
            }
        }
        HermitianOp::symmetrize(out)
    })
}

/// Spectral Kraus decomposition of a psd Choi matrix. Eigenvalues below
/// `tol * Tr(C)` are dropped; a negative eigenvalue beyond `tol * scale`
/// reports `NotCompletelyPositive`.
pub fn kraus_from_choi(c: &ChoiMatrix, tol: f64) -> Result<KrausChannel> {
    let n = c.dim();
    let scale = c.matrix.frobenius_norm().max(1.0);
    let eig = spectral_decompose(c.matrix())?;
    let min_eigenvalue = eig.last().map(|(v, _)| *v).unwrap_or(0.0);
    if min_eigenvalue < -tol * scale {
        return Err(CoreError::NotCompletelyPositive {
            min_eigenvalue,
        });
    }
    let trace = c.trace();
    let mut ops = Vec::new();
    for (val, vec) in &eig {
        if *val > tol * trace {
            let w = unvec(n, vec).scale_re(val.sqrt());
            ops.push(w.adjoint());
        }
    }
    if ops.is_empty() {
        return Err(CoreError::InvalidInput(
            "Choi matrix is numerically zero".into(),
        ));
    }
    KrausChannel::new(n, ops)
}

/// The three trace functionals attached to a channel.
#[derive(Debug, Clone, Serialize)]
pub struct TraceInvariants {
    /// Trace of the channel as a linear operator on gl(H), over the
    /// matrix-unit basis.
    pub op_trace: f64,
    /// sum_i |Tr V_i|^2.
    pub kraus_trace_sum: f64,
    /// Tr(sum_i V_i^dag V_i).
    pub spectral_trace: f64,
}

/// Computes the operator trace and the Kraus-side invariants; the contract
/// `op_trace = kraus_trace_sum` holds for every channel.
pub fn trace_invariants(ch: &KrausChannel) -> TraceInvariants {
    let n = ch.dim();
    let mut op_trace = 0.0;
    for j in 0..n {
        for k in 0..n {
            let mut unit = ComplexMatrix::zeros(n);
            unit.set(j, k, Complex64::new(1.0, 0.0));
            let image = ch.apply_complex(&unit);
            // <E_jk, image>_HS = Tr(E_kj image) = image[j][k]
            op_trace += image.get(j, k).re;
        }
    }
    let kraus_trace_sum = ch
        .kraus_ops()
        .iter()
        .map(|v| v.trace().norm_sqr())
        .sum();
    TraceInvariants {
        op_trace,
        kraus_trace_sum,
        spectral_trace: ch.spectral_trace(),
    }
}

/// Scale the channel to spectral trace one.
pub fn normalize(ch: &KrausChannel) -> Result<KrausChannel> {
    let st = ch.spectral_trace();
    if !st.is_finite() || st <= 0.0 {
        return Err(CoreError::InvalidInput(
            "cannot normalize a zero channel".into(),
        ));
    }
    let factor = 1.0 / st.sqrt();
    KrausChannel::new(
        ch.dim(),
        ch.kraus_ops().iter().map(|v| v.scale_re(factor)).collect(),
    )
}

/// Trace-preserving and unital predicates with their residuals.
#[derive(Debug, Clone, Serialize)]
pub struct TpUnitalReport {
    pub trace_preserving: bool,
    pub unital: bool,
    /// ||sum_i V_i V_i^dag - I||_F.
    pub tp_residual: f64,
    /// ||sum_i V_i^dag V_i - I||_F.
    pub unital_residual: f64,
}

pub fn tp_unital_report(ch: &KrausChannel, tol: f64) -> TpUnitalReport {
    let n = ch.dim();
    let mut vv = ComplexMatrix::zeros(n);
    let mut vdagv = ComplexMatrix::zeros(n);
    for v in ch.kraus_ops() {
        vv = vv.add(&v.matmul(&v.adjoint()));
        vdagv = vdagv.add(&v.adjoint().matmul(v));
    }
    let id = ComplexMatrix::identity(n);
    let tp_residual = vv.sub(&id).frobenius_norm();
    let unital_residual = vdagv.sub(&id).frobenius_norm();
    TpUnitalReport {
        trace_preserving: tp_residual <= tol,
        unital: unital_residual <= tol,
        tp_residual,
        unital_residual,
    }
}

/// The matrix of a linear map on the real space u*(n), over the orthonormal
/// Hermitian basis from `hermitian_basis(n)`.
#[derive(Debug, Clone)]
pub struct SuperOpMatrix {
    dim: usize,
    matrix: RealMatrix,
}

impl SuperOpMatrix {
    /// Entry (a, b) = <basis_a, map(basis_b)>.
    pub fn from_map(n: usize, mut map: impl FnMut(&HermitianOp) -> HermitianOp) -> Self {
        let basis = hermitian_basis(n).expect("n >= 1");
        let d = n * n;
        let mut matrix = RealMatrix::zeros(d, d);
        for (b, basis_b) in basis.iter().enumerate() {
            let image = map(basis_b);
            for (a, basis_a) in basis.iter().enumerate() {
                matrix.set(a, b, hs_inner(basis_a, &image).expect("same dim"));
            }
        }
        Self { dim: n, matrix }
    }

    pub fn from_channel(ch: &KrausChannel) -> Self {
        Self::from_map(ch.dim(), |h| ch.apply(h).expect("same dim"))
    }

    /// Matrix of transposition in the fixed basis.
    pub fn transposition(n: usize) -> Self {
        Self::from_map(n, |h| {
            HermitianOp::symmetrize(h.matrix().transpose())
        })
    }

    pub fn identity_map(n: usize) -> Self {
        Self {
            dim: n,
            matrix: RealMatrix::identity(n * n),
        }
    }

    pub fn from_real_matrix(n: usize, matrix: RealMatrix) -> Result<Self> {
        if matrix.nrows() != n * n || matrix.ncols() != n * n {
            return Err(CoreError::DimensionMismatch {
                expected: n * n,
                got: matrix.nrows(),
            });
        }
        if !matrix.is_finite() {
            return Err(CoreError::InvalidInput(
                "superoperator entries must be finite".into(),
            ));
        }
        Ok(Self { dim: n, matrix })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.matrix
    }

    /// Composition self after other.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self {
            dim: self.dim,
            matrix: self.matrix.matmul(&other.matrix),
        }
    }

    /// Apply the represented map to a Hermitian operator.
    pub fn apply(&self, h: &HermitianOp) -> Result<HermitianOp> {
        if h.dim() != self.dim {
            return Err(CoreError::DimensionMismatch {
                expected: self.dim,
                got: h.dim(),
            });
        }
        let basis = hermitian_basis(self.dim)?;
        let coords: Vec<f64> = basis
            .iter()
            .map(|b| hs_inner(b, h).expect("same dim"))
            .collect();
        let image = self.matrix.apply_vec(&coords);
        let mut out = ComplexMatrix::zeros(self.dim);
        for (c, b) in image.iter().zip(&basis) {
            out = out.add(&b.matrix().scale_re(*c));
        }
        Ok(HermitianOp::symmetrize(out))
    }

    /// Complex-linear extension: split X into Hermitian and anti-Hermitian
    /// parts, apply to each, recombine.
    pub fn apply_complex(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let xdag = x.adjoint();
        let h1 = HermitianOp::symmetrize(x.add(&xdag).scale_re(0.5));
        let h2 = HermitianOp::symmetrize(
            x.sub(&xdag).scale(Complex64::new(0.0, -0.5)),
        );
        let y1 = self.apply(&h1).expect("same dim");
        let y2 = self.apply(&h2).expect("same dim");
        y1.matrix().add(&y2.matrix().scale(Complex64::new(0.0, 1.0)))
    }

    /// Choi matrix of the represented map.
    pub fn choi(&self) -> ChoiMatrix {
        choi_of_map(self.dim, |x| self.apply_complex(x))
    }

    /// Trace preservation: the row of the identity basis element must be
    /// the corresponding coordinate vector.
    pub fn trace_preserving_residual(&self) -> f64 {
        let d = self.dim * self.dim;
        let mut acc = 0.0;
        for b in 0..d {
            let want = if b == 0 { 1.0 } else { 0.0 };
            let diff = self.matrix.get(0, b) - want;
            acc += diff * diff;
        }
        acc.sqrt()
    }

    /// Frobenius distance between represented maps; the notion of channel
    /// equality used by this crate (Kraus lists are not canonical).
    pub fn distance(&self, other: &Self) -> f64 {
        self.matrix.sub(&other.matrix).frobenius_norm()
    }
}

/// JSON schema for a Kraus channel file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelJson {
    pub dim: usize,
    pub convention: String,
    pub kraus: Vec<MatrixJson>,
}

impl ChannelJson {
    pub fn from_channel(ch: &KrausChannel) -> Self {
        Self {
            dim: ch.dim(),
            convention: "dagger-left".into(),
            kraus: ch.kraus_ops().iter().map(MatrixJson::from_matrix).collect(),
        }
    }

    pub fn to_channel(&self) -> Result<KrausChannel> {
        if self.convention != "dagger-left" {
            return Err(CoreError::InvalidInput(format!(
                "unsupported convention '{}'; this tool stores channels as \
                 rho -> sum V_i^dag rho V_i (\"dagger-left\")",
                self.convention
            )));
        }
        let mut ops = Vec::with_capacity(self.kraus.len());
        for (i, m) in self.kraus.iter().enumerate() {
            let mat = m.to_matrix()?;
            if mat.dim() != self.dim {
                return Err(CoreError::InvalidInput(format!(
                    "Kraus operator {i} is {}x{}, expected {}x{}",
                    mat.dim(),
                    mat.dim(),
                    self.dim,
                    self.dim
                )));
            }
            ops.push(mat);
        }
        KrausChannel::new(self.dim, ops)
    }
}

/// JSON schema for a Choi matrix file; the stored matrix is n^2 x n^2.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChoiJson {
    #[serde(rename = "type")]
    pub kind: String,
    pub dim: usize,
    pub matrix: MatrixJson,
}

impl ChoiJson {
    pub fn from_choi(c: &ChoiMatrix) -> Self {
        Self {
            kind: "choi".into(),
            dim: c.dim(),
            matrix: MatrixJson::from_matrix(c.matrix().matrix()),
        }
    }

    pub fn to_choi(&self) -> Result<ChoiMatrix> {
        if self.kind != "choi" {
            return Err(CoreError::InvalidInput(format!(
                "expected type 'choi', got '{}'",
                self.kind
            )));
        }
        let expected = self.dim * self.dim;
        if self.matrix.dim != expected {
            return Err(CoreError::InvalidInput(format!(
                "Choi matrix for dim {} must be {expected} x {expected}, got {} x {}",
                self.dim, self.matrix.dim, self.matrix.dim
            )));
        }
        ChoiMatrix::new(self.dim, HermitianOp::new(self.matrix.to_matrix()?)?)
    }
}

/// JSON schema for a superoperator file: real (n^2) x (n^2) matrix over the
/// orthonormal Hermitian basis.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuperOpJson {
    #[serde(rename = "type")]
    pub kind: String,
    pub dim: usize,
    pub matrix: Vec<Vec<f64>>,
}

impl SuperOpJson {
    pub fn from_superop(s: &SuperOpMatrix) -> Self {
        Self {
            kind: "superop".into(),
            dim: s.dim(),
            matrix: s.matrix().to_rows(),
        }
    }

    pub fn to_superop(&self) -> Result<SuperOpMatrix> {
        if self.kind != "superop" {
            return Err(CoreError::InvalidInput(format!(
                "expected type 'superop', got '{}'",
                self.kind
            )));
        }
        let expected = self.dim * self.dim;
        let matrix = RealMatrix::from_rows(&self.matrix).ok_or_else(|| {
            CoreError::InvalidInput("superop matrix rows have unequal lengths".into())
        })?;
        if matrix.nrows() != expected || matrix.ncols() != expected {
            return Err(CoreError::InvalidInput(format!(
                "superoperator for dim {} must be {expected} x {expected}, got {} x {}",
                self.dim,
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        SuperOpMatrix::from_real_matrix(self.dim, matrix)
    }
}
