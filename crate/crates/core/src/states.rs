//! Density states and pure states: purity, general position, affine rank,
//! and random convex decompositions of a state into pure ensembles.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::linalg;
use crate::operators::{
    hs_inner, psd_report, spectral_decompose, CVector, ComplexMatrix, HermitianOp, MatrixJson,
    DEFAULT_TOL,
};
use crate::sampling;

/// Second-eigenvalue threshold (relative to the top one) below which an
/// operator counts as rank one.
pub const RANK_ONE_REL_TOL: f64 = 1e-8;

/// A positive semi-definite Hermitian operator with unit trace.
#[derive(Debug, Clone)]
pub struct DensityState {
    op: HermitianOp,
}

impl DensityState {
    /// Validate trace and positivity; the error names the failed invariant.
    pub fn new(op: HermitianOp) -> Result<Self> {
        if (op.trace() - 1.0).abs() > 1e-10 {
            return Err(CoreError::InvalidInput(format!(
                "density state invariant 'trace = 1' failed: trace = {}",
                op.trace()
            )));
        }
        let psd = psd_report(&op, DEFAULT_TOL)?;
        if !psd.is_psd {
            return Err(CoreError::InvalidInput(format!(
                "density state invariant 'positive semi-definite' failed: min eigenvalue = {:.3e}",
                psd.min_eigenvalue
            )));
        }
        Ok(Self { op })
    }

    pub fn maximally_mixed(n: usize) -> Self {
        Self {
            op: HermitianOp::identity(n).scale_re(1.0 / n as f64),
        }
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn op(&self) -> &HermitianOp {
        &self.op
    }

    /// Numeric rank at the default tolerance.
    pub fn numeric_rank(&self) -> usize {
        psd_report(&self.op, DEFAULT_TOL)
            .expect("valid state")
            .numeric_rank
    }
}

/// A rank-one density state |x><x| together with its unit representative.
#[derive(Debug, Clone)]
pub struct PureState {
    op: HermitianOp,
    vector: CVector,
}

impl PureState {
    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn op(&self) -> &HermitianOp {
        &self.op
    }

    pub fn vector(&self) -> &[Complex64] {
        &self.vector
    }

    pub fn to_density(&self) -> DensityState {
        DensityState {
            op: self.op.clone(),
        }
    }

    /// |<x1, x2>|^2; equals hs_inner of the projectors.
    pub fn fidelity(&self, other: &PureState) -> f64 {
        let overlap: Complex64 = self
            .vector
            .iter()
            .zip(&other.vector)
            .map(|(a, b)| a.conj() * b)
            .sum();
        overlap.norm_sqr()
    }
}

/// |x><x| / ||x||^2 for a nonzero vector; invariant under x -> c x.
pub fn pure_from_vector(x: &[Complex64]) -> Result<PureState> {
    let norm: f64 = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if !norm.is_finite() || norm <= 0.0 {
        return Err(CoreError::InvalidInput(
            "pure state requires a nonzero finite vector".into(),
        ));
    }
    let mut v: CVector = x.iter().map(|z| z / norm).collect();
    linalg::fix_phase(&mut v);
    Ok(PureState {
        op: HermitianOp::outer(&v),
        vector: v,
    })
}

/// Tr(rho^2), in [1/n, 1]; equals 1 exactly on pure states.
pub fn purity(rho: &DensityState) -> f64 {
    hs_inner(rho.op(), rho.op()).expect("same dimension")
}

/// Extract the unit representative of a rank-one psd operator, or report
/// which operator fails the rank-one test.
fn rank_one_vector(op: &HermitianOp, index: usize) -> Result<CVector> {
    let eig = spectral_decompose(op)?;
    let top = eig[0].0;
    let next = eig.get(1).map(|e| e.0.abs()).unwrap_or(0.0);
    if !top.is_finite() || top <= 0.0 || next > RANK_ONE_REL_TOL * top {
        return Err(CoreError::InvalidInput(format!(
            "operator {index} is not rank one (eigenvalues {top:.3e}, {next:.3e})"
        )));
    }
    Ok(eig[0].1.clone())
}

/// True iff every size-n subset of the representative vectors is linearly
/// independent. Inputs must be rank-one psd operators, at least n of them.
pub fn general_position(ops: &[HermitianOp]) -> Result<bool> {
    let n = match ops.first() {
        Some(op) => op.dim(),
        None => return Err(CoreError::InvalidInput("empty operator list".into())),
    };
    if ops.len() < n {
        return Err(CoreError::InvalidInput(format!(
            "general position needs at least {n} operators, got {}",
            ops.len()
        )));
    }
    let mut vectors = Vec::with_capacity(ops.len());
    for (i, op) in ops.iter().enumerate() {
        if op.dim() != n {
            return Err(CoreError::DimensionMismatch {
                expected: n,
                got: op.dim(),
            });
        }
        vectors.push(rank_one_vector(op, i)?);
    }
    Ok(vectors_in_general_position(&vectors))
}

/// The vector-level test behind `general_position`; vectors are normalized
/// first, so the determinant threshold is scale-free.
pub fn vectors_in_general_position(vectors: &[CVector]) -> bool {
    let n = vectors[0].len();
    let normalized: Vec<CVector> = vectors
        .iter()
        .map(|v| {
            let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            v.iter().map(|z| z / norm).collect()
        })
        .collect();
    let k = normalized.len();
    for subset in n_subsets(k, n) {
        let m = ComplexMatrix::from_fn(n, |i, j| normalized[subset[j]][i]);
        if linalg::complex_det(&m).norm() <= DEFAULT_TOL {
            return false;
        }
    }
    true
}

/// All size-r subsets of {0, .., k-1} in lexicographic order.
fn n_subsets(k: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut subset: Vec<usize> = (0..r).collect();
    loop {
        out.push(subset.clone());
        // advance to the next combination
        let mut i = r;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if subset[i] != i + k - r {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        subset[i] += 1;
        for j in (i + 1)..r {
            subset[j] = subset[j - 1] + 1;
        }
    }
}

/// Maximal number of affinely independent points: 1 + rank of the matrix
/// of differences p_i - p_0, at tolerance `tol` relative to the largest
/// singular value.
pub fn affine_rank(points: &[HermitianOp], tol: f64) -> Result<usize> {
    let first = points
        .first()
        .ok_or_else(|| CoreError::InvalidInput("empty point list".into()))?;
    let n = first.dim();
    for p in points {
        if p.dim() != n {
            return Err(CoreError::DimensionMismatch {
                expected: n,
                got: p.dim(),
            });
        }
    }
    if points.len() == 1 {
        return Ok(1);
    }
    let rows: Vec<CVector> = points[1..]
        .iter()
        .map(|p| p.sub(first).matrix().entries().to_vec())
        .collect();
    let svals = linalg::singular_values_of_rows(&rows);
    let top = svals.first().copied().unwrap_or(0.0);
    let rank = svals.iter().filter(|&&s| s > tol * top.max(1.0)).count();
    Ok(1 + rank)
}

/// Affine rank of points given as real coordinate vectors.
pub fn affine_rank_points(points: &[Vec<f64>], tol: f64) -> usize {
    if points.is_empty() {
        return 0;
    }
    if points.len() == 1 {
        return 1;
    }
    let first = &points[0];
    let rows: Vec<CVector> = points[1..]
        .iter()
        .map(|p| {
            p.iter()
                .zip(first)
                .map(|(a, b)| Complex64::new(a - b, 0.0))
                .collect()
        })
        .collect();
    let svals = linalg::singular_values_of_rows(&rows);
    let top = svals.first().copied().unwrap_or(0.0);
    1 + svals.iter().filter(|&&s| s > tol * top.max(1.0)).count()
}

/// One term of a convex decomposition into pure states.
pub type WeightedPure = (f64, PureState);

/// Decompose rho into k pure states by mixing its spectral ensemble with a
/// Haar-random k x k unitary: sqrt(mu_i) |z_i> -> sum_j U_ji sqrt(mu_j) |z_j>.
/// Reconstruction is exact up to rounding and the weights sum to one.
pub fn random_decomposition(rho: &DensityState, k: usize, seed: u64) -> Result<Vec<WeightedPure>> {
    let rank = rho.numeric_rank();
    if k < rank {
        return Err(CoreError::InvalidInput(format!(
            "k = {k} is below the numeric rank {rank}"
        )));
    }
    let eig = spectral_decompose(rho.op())?;
    let ensemble: Vec<(f64, CVector)> = eig
        .into_iter()
        .take(rank)
        .map(|(val, vec)| (val.max(0.0).sqrt(), vec))
        .collect();
    let n = rho.dim();
    let mut rng = sampling::seeded_rng(seed);
    let u = sampling::haar_unitary(&mut rng, k);
    let mut out = Vec::with_capacity(k);
    for i in 0..k {
        let mut w = vec![Complex64::new(0.0, 0.0); n];
        for (j, (scale, z)) in ensemble.iter().enumerate() {
            let coeff = u.get(j, i) * Complex64::new(*scale, 0.0);
            for (wx, zx) in w.iter_mut().zip(z) {
                *wx += coeff * zx;
            }
        }
        let weight: f64 = w.iter().map(|z| z.norm_sqr()).sum();
        if weight > 1e-15 {
            out.push((weight, pure_from_vector(&w)?));
        }
    }
    Ok(out)
}

/// JSON form of a density state: the matrix schema plus a type tag.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensityJson {
    #[serde(rename = "type")]
    pub kind: String,
    #[serde(flatten)]
    pub matrix: MatrixJson,
}

impl DensityJson {
    pub fn from_state(rho: &DensityState) -> Self {
        Self {
            kind: "density".into(),
            matrix: MatrixJson::from_matrix(rho.op().matrix()),
        }
    }

    pub fn to_state(&self) -> Result<DensityState> {
        if self.kind != "density" {
            return Err(CoreError::InvalidInput(format!(
                "expected type 'density', got '{}'",
                self.kind
            )));
        }
        DensityState::new(HermitianOp::new(self.matrix.to_matrix()?)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pure_from_vector_examples() {
        let p = pure_from_vector(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!((p.op().get(0, 0).re - 1.0).abs() < 1e-15);
        assert!(p.op().get(1, 1).norm() < 1e-15);

        let p = pure_from_vector(&[c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((p.op().get(i, j).re - 0.5).abs() < 1e-15);
                assert!(p.op().get(i, j).im.abs() < 1e-15);
            }
        }

        // phase and scale invariance
        let p = pure_from_vector(&[c(0.0, 2.0), c(0.0, 0.0)]).unwrap();
        assert!((p.op().get(0, 0).re - 1.0).abs() < 1e-15);

        assert!(pure_from_vector(&[c(0.0, 0.0)]).is_err());
    }

    #[test]
    fn purity_examples() {
        assert!((purity(&DensityState::maximally_mixed(2)) - 0.5).abs() < 1e-15);
        let p = pure_from_vector(&[c(0.3, 0.1), c(-0.2, 0.9)]).unwrap();
        assert!((purity(&p.to_density()) - 1.0).abs() < 1e-12);
        let rho = DensityState::new(HermitianOp::diagonal(&[0.75, 0.25])).unwrap();
        assert!((purity(&rho) - 0.625).abs() < 1e-15);
    }

    #[test]
    fn general_position_examples() {
        let p = |v: &[Complex64]| pure_from_vector(v).unwrap().op().clone();
        let e1 = p(&[c(1.0, 0.0), c(0.0, 0.0)]);
        let e2 = p(&[c(0.0, 0.0), c(1.0, 0.0)]);
        let diag = p(&[c(1.0, 0.0), c(1.0, 0.0)]);
        assert!(general_position(&[e1.clone(), e2.clone(), diag]).unwrap());
        let e1_scaled = p(&[c(2.0, 0.0), c(0.0, 0.0)]);
        assert!(!general_position(&[e1.clone(), e2.clone(), e1_scaled]).unwrap());

        let f1 = p(&[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let f2 = p(&[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let f3 = p(&[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let ones = p(&[c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]);
        assert!(general_position(&[f1, f2, f3, ones]).unwrap());

        // a rank-two operator is rejected, naming the offender
        let err = general_position(&[e1, HermitianOp::identity(2)]).unwrap_err();
        assert!(err.to_string().contains("operator 1"));
    }

    #[test]
    fn affine_rank_examples() {
        let a = HermitianOp::diagonal(&[1.0, 0.0]);
        let b = HermitianOp::diagonal(&[0.0, 1.0]);
        let mid = a.add(&b).scale_re(0.5);
        assert_eq!(affine_rank(&[a.clone(), b.clone(), mid], 1e-9).unwrap(), 2);

        let mut shifted = ComplexMatrix::identity(2).scale_re(0.5);
        shifted.set(0, 1, c(1.0, 0.0));
        shifted.set(1, 0, c(1.0, 0.0));
        let p3 = HermitianOp::new(shifted).unwrap();
        assert_eq!(affine_rank(&[a.clone(), b, p3], 1e-9).unwrap(), 3);

        assert_eq!(affine_rank(&[a], 1e-9).unwrap(), 1);
        assert!(affine_rank(&[], 1e-9).is_err());
    }

    #[test]
    fn random_decomposition_reconstructs() {
        let rho = DensityState::new(HermitianOp::diagonal(&[0.75, 0.25])).unwrap();
        for seed in 0..20u64 {
            let parts = random_decomposition(&rho, 2, seed).unwrap();
            let total: f64 = parts.iter().map(|(w, _)| w).sum();
            assert!((total - 1.0).abs() < 1e-12);
            let mut rec = ComplexMatrix::zeros(2);
            for (w, p) in &parts {
                rec = rec.add(&p.op().matrix().scale_re(*w));
            }
            let residual = rec.sub(rho.op().matrix()).frobenius_norm();
            assert!(residual <= 1e-9, "seed {seed}: residual {residual}");
        }
    }

    #[test]
    fn random_decomposition_pure_state() {
        let p = pure_from_vector(&[c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        let parts = random_decomposition(&p.to_density(), 1, 5).unwrap();
        assert_eq!(parts.len(), 1);
        assert!((parts[0].0 - 1.0).abs() < 1e-12);
        assert!(parts[0].1.fidelity(&p) > 1.0 - 1e-12);
    }

    #[test]
    fn random_decomposition_rejects_small_k() {
        let rho = DensityState::maximally_mixed(3);
        assert!(random_decomposition(&rho, 2, 0).is_err());
    }

    #[test]
    fn norm_lemma_oracle_over_seeds() {
        // weight scores never exceed the purity; spectral weights attain it
        let rho = DensityState::new(HermitianOp::diagonal(&[0.75, 0.25])).unwrap();
        let target = purity(&rho);
        for seed in 0..100u64 {
            let parts = random_decomposition(&rho, 2, seed).unwrap();
            let score: f64 = parts.iter().map(|(w, _)| w * w).sum();
            assert!(score <= target + 1e-10, "seed {seed}: score {score}");
        }
    }

    #[test]
    fn density_json_round_trip_and_validation() {
        let rho = DensityState::new(HermitianOp::diagonal(&[0.7, 0.3])).unwrap();
        let json = serde_json::to_string(&DensityJson::from_state(&rho)).unwrap();
        let back: DensityJson = serde_json::from_str(&json).unwrap();
        assert!((purity(&back.to_state().unwrap()) - purity(&rho)).abs() < 1e-12);

        // a non-density matrix is rejected with the failed invariant named
        let bad = DensityJson {
            kind: "density".into(),
            matrix: MatrixJson::from_matrix(&ComplexMatrix::identity(2)),
        };
        let err = bad.to_state().unwrap_err();
        assert!(err.to_string().contains("trace"));
    }
}
