//! Wigner maps: rho -> U rho U^dag and rho -> U rho^T U^dag for unitary U.
//!
//! The classifier decides which branch (if any) a trace-preserving map
//! belongs to by testing its Choi matrix for rank one, composing with
//! transposition for the antiunitary branch. Orthogonality of the
//! superoperator and preservation of transition probabilities are the two
//! sampled consequences used as cross-checks.

use num_complex::Complex64;
use serde::Serialize;

use crate::channels::{unvec, KrausChannel, SuperOpMatrix};
use crate::error::{CoreError, Result};
use crate::operators::{hs_inner, spectral_decompose, ComplexMatrix, HermitianOp};
use crate::sampling;
use crate::states::{pure_from_vector, purity, DensityState, RANK_ONE_REL_TOL};

/// Unitarity threshold for constructing and recovering Wigner maps.
pub const UNITARY_TOL: f64 = 1e-9;

const MODE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WignerBranch {
    Unitary,
    Antiunitary,
}

/// A Wigner map with its defining unitary.
#[derive(Debug, Clone)]
pub struct WignerMap {
    u: ComplexMatrix,
    branch: WignerBranch,
}

/// Build rho -> U rho U^dag (unitary branch) or rho -> U rho^T U^dag
/// (antiunitary branch); rejects non-unitary U with its residual.
pub fn wigner_channel(u: &ComplexMatrix, branch: WignerBranch) -> Result<WignerMap> {
    let residual = u.unitary_residual();
    if residual > UNITARY_TOL {
        return Err(CoreError::InvalidInput(format!(
            "matrix is not unitary: ||U^dag U - I|| = {residual:.3e}"
        )));
    }
    Ok(WignerMap {
        u: u.clone(),
        branch,
    })
}

impl WignerMap {
    pub fn dim(&self) -> usize {
        self.u.dim()
    }

    pub fn branch(&self) -> WignerBranch {
        self.branch
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.u
    }

    pub fn apply(&self, rho: &HermitianOp) -> Result<HermitianOp> {
        if rho.dim() != self.dim() {
            return Err(CoreError::DimensionMismatch {
                expected: self.dim(),
                got: rho.dim(),
            });
        }
        let inner = match self.branch {
            WignerBranch::Unitary => rho.matrix().clone(),
            WignerBranch::Antiunitary => rho.matrix().transpose(),
        };
        Ok(HermitianOp::symmetrize(
            self.u.matmul(&inner).matmul(&self.u.adjoint()),
        ))
    }

    pub fn superop(&self) -> SuperOpMatrix {
        SuperOpMatrix::from_map(self.dim(), |h| self.apply(h).expect("same dim"))
    }

    /// The unitary branch as a Kraus channel (operator U^dag under the
    /// dagger-left convention); the antiunitary branch is not CP.
    pub fn to_channel(&self) -> Option<KrausChannel> {
        match self.branch {
            WignerBranch::Unitary => Some(KrausChannel::from_unitary_conjugation(&self.u)),
            WignerBranch::Antiunitary => None,
        }
    }
}

/// ||S^T S - I||_F against `tol`.
pub fn is_orthogonal_superop(s: &SuperOpMatrix, tol: f64) -> (bool, f64) {
    let residual = s.matrix().orthogonality_residual();
    (residual <= tol, residual)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WignerClass {
    Unitary,
    Antiunitary,
    NotWigner,
}

/// Classification outcome; `recovered_u` is present on the Wigner branches
/// with its global phase fixed.
#[derive(Debug, Clone)]
pub struct WignerClassification {
    pub branch: WignerClass,
    pub recovered_u: Option<ComplexMatrix>,
    pub orthogonality_residual: f64,
    pub positivity_witness: Option<HermitianOp>,
}

/// Fix the global phase of a matrix: first entry of largest modulus becomes
/// real positive.
fn fix_matrix_phase(m: &ComplexMatrix) -> ComplexMatrix {
    let mut best = Complex64::new(0.0, 0.0);
    let mut best_norm = -1.0;
    for z in m.entries() {
        if z.norm() > best_norm + 1e-15 {
            best_norm = z.norm();
            best = *z;
        }
    }
    if best_norm <= 0.0 {
        return m.clone();
    }
    m.scale((best / best.norm()).conj())
}

/// Try to read a map as rho -> W rho W^dag with W unitary, through the
/// rank-one structure of its Choi matrix.
fn rank_one_unitary(s: &SuperOpMatrix) -> Result<Option<ComplexMatrix>> {
    let n = s.dim();
    let choi = s.choi();
    let eig = spectral_decompose(choi.matrix())?;
    let top = eig[0].0;
    let second = eig.get(1).map(|e| e.0.abs()).unwrap_or(0.0);
    let bottom = eig.last().map(|e| e.0).unwrap_or(0.0);
    if !top.is_finite()
        || top <= 0.0
        || second > RANK_ONE_REL_TOL * top
        || bottom < -RANK_ONE_REL_TOL * top
    {
        return Ok(None);
    }
    let w = unvec(n, &eig[0].1).scale_re(top.sqrt());
    if w.unitary_residual() > UNITARY_TOL {
        return Ok(None);
    }
    Ok(Some(fix_matrix_phase(&w)))
}

/// Classify a trace-preserving map as Unitary, Antiunitary, or NotWigner.
/// In the two Wigner branches the defining unitary is recovered up to
/// global phase.
pub fn classify_wigner(s: &SuperOpMatrix, tol: f64) -> Result<WignerClassification> {
    let tp_residual = s.trace_preserving_residual();
    if tp_residual > MODE_TOL {
        return Err(CoreError::Mode(format!(
            "classification requires a trace-preserving map (residual {tp_residual:.3e})"
        )));
    }
    let (_, orthogonality_residual) = is_orthogonal_superop(s, tol);

    if let Some(u) = rank_one_unitary(s)? {
        return Ok(WignerClassification {
            branch: WignerClass::Unitary,
            recovered_u: Some(u),
            orthogonality_residual,
            positivity_witness: None,
        });
    }
    let composed = s.compose(&SuperOpMatrix::transposition(s.dim()));
    if let Some(u) = rank_one_unitary(&composed)? {
        return Ok(WignerClassification {
            branch: WignerClass::Antiunitary,
            recovered_u: Some(u),
            orthogonality_residual,
            positivity_witness: None,
        });
    }

    // not Wigner: look for a sampled positivity violation as a witness
    let mut rng = sampling::seeded_rng(0);
    let n = s.dim();
    let mut positivity_witness = None;
    for _ in 0..50 {
        let x = sampling::random_unit_vector(&mut rng, n);
        let state = pure_from_vector(&x)?;
        let image = s.apply(state.op())?;
        let eig = spectral_decompose(&image)?;
        let min = eig.last().map(|e| e.0).unwrap_or(0.0);
        if min < -1e-9 * image.frobenius_norm().max(1.0) {
            positivity_witness = Some(state.op().clone());
            break;
        }
    }
    Ok(WignerClassification {
        branch: WignerClass::NotWigner,
        recovered_u: None,
        orthogonality_residual,
        positivity_witness,
    })
}

/// Convenience: classify a Kraus channel.
pub fn classify_wigner_channel(ch: &KrausChannel, tol: f64) -> Result<WignerClassification> {
    classify_wigner(&SuperOpMatrix::from_channel(ch), tol)
}

/// Phase-invariant recovery fidelity |<vec U1, vec U2>| / n between two
/// unitaries.
pub fn unitary_fidelity(u1: &ComplexMatrix, u2: &ComplexMatrix) -> f64 {
    let n = u1.dim();
    let overlap: Complex64 = u1
        .entries()
        .iter()
        .zip(u2.entries())
        .map(|(a, b)| a.conj() * b)
        .sum();
    overlap.norm() / n as f64
}

/// Sampled check of <map rho1, map rho2> = <rho1, rho2> over random pure
/// pairs; returns the verdict and the largest deviation seen.
pub fn preserves_transition_probs(
    s: &SuperOpMatrix,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<(bool, f64)> {
    let n = s.dim();
    let mut rng = sampling::seeded_rng(seed);
    let mut max_deviation = 0.0f64;
    for _ in 0..samples.max(1) {
        let rho1 = pure_from_vector(&sampling::random_unit_vector(&mut rng, n))?;
        let rho2 = pure_from_vector(&sampling::random_unit_vector(&mut rng, n))?;
        let before = hs_inner(rho1.op(), rho2.op())?;
        let after = hs_inner(&s.apply(rho1.op())?, &s.apply(rho2.op())?)?;
        max_deviation = max_deviation.max((after - before).abs());
    }
    Ok((max_deviation <= tol, max_deviation))
}

/// Outcome of the norm-lemma check on one density state.
#[derive(Debug, Clone, Serialize)]
pub struct NormLemmaReport {
    /// Largest sum of squared weights over the sampled decompositions.
    pub max_score: f64,
    /// Tr(rho^2), the claimed maximum.
    pub purity: f64,
    /// How far the spectral decomposition falls short of the purity.
    pub gap_at_spectral: f64,
}

/// Sample random k-term pure decompositions of rho and compare the weight
/// scores against the purity; the spectral decomposition attains it.
pub fn norm_lemma_check(rho: &DensityState, trials: usize, seed: u64) -> Result<NormLemmaReport> {
    if trials == 0 {
        return Err(CoreError::InvalidInput("trials must be at least 1".into()));
    }
    let k = rho.numeric_rank();
    let target = purity(rho);
    let mut max_score = f64::NEG_INFINITY;
    for trial in 0..trials {
        let parts = crate::states::random_decomposition(rho, k, seed.wrapping_add(trial as u64))?;
        let score: f64 = parts.iter().map(|(w, _)| w * w).sum();
        max_score = max_score.max(score);
    }
    let spectral_score: f64 = spectral_decompose(rho.op())?
        .iter()
        .take(k)
        .map(|(v, _)| v * v)
        .sum();
    Ok(NormLemmaReport {
        max_score,
        purity: target,
        gap_at_spectral: (target - spectral_score).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::pauli;

    #[test]
    fn wigner_channel_identity_branches() {
        let id = ComplexMatrix::identity(2);
        let unitary = wigner_channel(&id, WignerBranch::Unitary).unwrap();
        assert!(unitary
            .superop()
            .distance(&SuperOpMatrix::identity_map(2))
            < 1e-13);

        let anti = wigner_channel(&id, WignerBranch::Antiunitary).unwrap();
        assert!(anti.superop().distance(&SuperOpMatrix::transposition(2)) < 1e-13);

        let flip = wigner_channel(&pauli::sigma1(), WignerBranch::Unitary).unwrap();
        let out = flip.apply(&HermitianOp::diagonal(&[1.0, 0.0])).unwrap();
        assert!(out.sub(&HermitianOp::diagonal(&[0.0, 1.0])).frobenius_norm() < 1e-14);
    }

    #[test]
    fn wigner_channel_rejects_non_unitary() {
        let m = ComplexMatrix::identity(2).scale_re(2.0);
        let err = wigner_channel(&m, WignerBranch::Unitary).unwrap_err();
        assert!(err.to_string().contains("not unitary"));
    }

    #[test]
    fn orthogonality_of_wigner_superops() {
        let mut rng = sampling::seeded_rng(2);
        let u = sampling::haar_unitary(&mut rng, 3);
        let map = wigner_channel(&u, WignerBranch::Unitary).unwrap();
        let (ok, res) = is_orthogonal_superop(&map.superop(), 1e-10);
        assert!(ok, "residual {res}");

        let (ok, _) = is_orthogonal_superop(&SuperOpMatrix::transposition(2), 1e-10);
        assert!(ok);

        let dep = SuperOpMatrix::from_map(2, |h| {
            HermitianOp::identity(2).scale_re(h.trace() / 2.0)
        });
        let (ok, res) = is_orthogonal_superop(&dep, 1e-10);
        assert!(!ok && res > 0.5);
    }

    #[test]
    fn classify_unitary_branch() {
        let conj = wigner_channel(&pauli::sigma1(), WignerBranch::Unitary).unwrap();
        let c = classify_wigner(&conj.superop(), 1e-9).unwrap();
        assert_eq!(c.branch, WignerClass::Unitary);
        let u = c.recovered_u.unwrap();
        assert!(unitary_fidelity(&u, &pauli::sigma1()) >= 1.0 - 1e-9);
    }

    #[test]
    fn classify_antiunitary_branch() {
        let c = classify_wigner(&SuperOpMatrix::transposition(2), 1e-9).unwrap();
        assert_eq!(c.branch, WignerClass::Antiunitary);
        let u = c.recovered_u.unwrap();
        assert!(unitary_fidelity(&u, &ComplexMatrix::identity(2)) >= 1.0 - 1e-9);
    }

    #[test]
    fn classify_depolarizing_as_not_wigner() {
        let dep = SuperOpMatrix::from_map(2, |h| {
            HermitianOp::identity(2).scale_re(h.trace() / 2.0)
        });
        let c = classify_wigner(&dep, 1e-9).unwrap();
        assert_eq!(c.branch, WignerClass::NotWigner);
        assert!(c.recovered_u.is_none());
        assert!(c.orthogonality_residual > 0.5);
    }

    #[test]
    fn classify_requires_trace_preservation() {
        let half = SuperOpMatrix::from_map(2, |h| h.scale_re(0.5));
        assert!(matches!(
            classify_wigner(&half, 1e-9),
            Err(CoreError::Mode(_))
        ));
    }

    #[test]
    fn classification_round_trip_random_unitaries() {
        let mut rng = sampling::seeded_rng(5);
        for n in [2usize, 3] {
            for _ in 0..10 {
                let u = sampling::haar_unitary(&mut rng, n);
                for branch in [WignerBranch::Unitary, WignerBranch::Antiunitary] {
                    let map = wigner_channel(&u, branch).unwrap();
                    let c = classify_wigner(&map.superop(), 1e-9).unwrap();
                    let want = match branch {
                        WignerBranch::Unitary => WignerClass::Unitary,
                        WignerBranch::Antiunitary => WignerClass::Antiunitary,
                    };
                    assert_eq!(c.branch, want);
                    let rec = c.recovered_u.unwrap();
                    assert!(
                        unitary_fidelity(&rec, &u) >= 1.0 - 1e-9,
                        "fidelity {}",
                        unitary_fidelity(&rec, &u)
                    );
                    let (ok, res) = is_orthogonal_superop(&map.superop(), 1e-10);
                    assert!(ok, "orthogonality residual {res}");
                    let (ok, dev) =
                        preserves_transition_probs(&map.superop(), 100, 3, 1e-10).unwrap();
                    assert!(ok, "deviation {dev}");
                }
            }
        }
    }

    #[test]
    fn wigner_maps_preserve_rank() {
        let mut rng = sampling::seeded_rng(13);
        for _ in 0..5 {
            let u = sampling::haar_unitary(&mut rng, 3);
            let map = wigner_channel(&u, WignerBranch::Antiunitary).unwrap();
            for rank in 1..=3usize {
                let rho = sampling::random_density(&mut rng, 3, rank);
                let out = map.apply(rho.op()).unwrap();
                let out_state = DensityState::new(out).unwrap();
                assert_eq!(out_state.numeric_rank(), rank);
            }
        }
    }

    #[test]
    fn transition_probs_fail_for_depolarizing() {
        let dep = SuperOpMatrix::from_map(2, |h| {
            HermitianOp::identity(2).scale_re(h.trace() / 2.0)
        });
        let (ok, dev) = preserves_transition_probs(&dep, 100, 1, 1e-9).unwrap();
        assert!(!ok && dev > 0.1);
    }

    #[test]
    fn norm_lemma_check_examples() {
        let pure = pure_from_vector(&[Complex64::new(0.8, 0.0), Complex64::new(0.0, 0.6)])
            .unwrap()
            .to_density();
        let r = norm_lemma_check(&pure, 10, 0).unwrap();
        assert!((r.max_score - 1.0).abs() < 1e-10);
        assert!((r.purity - 1.0).abs() < 1e-10);
        assert!(r.gap_at_spectral <= 1e-12);

        let rho = DensityState::new(HermitianOp::diagonal(&[0.75, 0.25])).unwrap();
        let r = norm_lemma_check(&rho, 100, 1).unwrap();
        assert!(r.max_score <= 0.625 + 1e-10);
        assert!(r.gap_at_spectral <= 1e-12);

        let mixed = DensityState::maximally_mixed(3);
        let r = norm_lemma_check(&mixed, 100, 2).unwrap();
        assert!(r.max_score <= 1.0 / 3.0 + 1e-10);
    }
}
