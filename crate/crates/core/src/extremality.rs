//! Extremality certificates for completely positive maps.
//!
//! Four related certificates live here:
//! - `choi_extremality`: linear independence of {V_i^dag V_j} (unital
//!   mode), {V_i V_j^dag} (trace-preserving mode), or their direct sums
//!   (bistochastic), over the spectral Kraus set; plus the cone mode,
//!   where extremality is just Choi rank one.
//! - `find_pure_images`: seeded multistart search for pure states whose
//!   images are pure up to normalization.
//! - `invertible_extreme_report`: the equivalent conditions tying an
//!   invertible CP inverse, a single invertible Kraus operator, and
//!   rank-one images in general position.
//! - `fix_extreme_certificate`: enough affinely independent pure states in
//!   the image certify extremality among positive maps.

use num_complex::Complex64;
use serde::Serialize;

use crate::channels::{choi_of, kraus_from_choi, tp_unital_report, vec_of, KrausChannel, SuperOpMatrix};
use crate::error::{CoreError, Result};
use crate::linalg;
use crate::operators::{
    hermitian_power, hs_inner, psd_report, spectral_decompose, CVector, HermitianOp,
};
use crate::sampling;
use crate::states::{affine_rank, pure_from_vector, vectors_in_general_position, PureState};

/// Relative singular-value threshold deciding linear independence.
pub const SV_REL_TOL: f64 = 1e-8;

/// Residual below which a state counts as having a pure image.
pub const WITNESS_RESIDUAL: f64 = 1e-8;

/// Fidelity above which two witnesses are considered the same cluster.
pub const WITNESS_DEDUP_FIDELITY: f64 = 1.0 - 1e-6;

/// Tolerance used by mode preconditions (trace preserving / unital).
const MODE_TOL: f64 = 1e-8;

/// The convex set (or cone) in which extremality is asked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtremalityMode {
    Unital,
    TracePreserving,
    Bistochastic,
    Cone,
}

impl ExtremalityMode {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Unital => "unital",
            Self::TracePreserving => "trace_preserving",
            Self::Bistochastic => "bistochastic",
            Self::Cone => "cone",
        }
    }
}

/// Outcome of a Choi-criterion extremality test. For the three convex-body
/// modes, `gram_size = s^2` counts the operator family and `extreme` means
/// full rank. For the cone mode, `gram_size = 1` and `gram_rank` is the
/// numeric rank of the Choi matrix.
#[derive(Debug, Clone, Serialize)]
pub struct ExtremalityReport {
    pub mode: ExtremalityMode,
    pub extreme: bool,
    pub gram_rank: usize,
    pub gram_size: usize,
    pub min_singular_value: f64,
}

/// Decide extremality through the spectral Kraus set of the channel's Choi
/// matrix, so the answer does not depend on the presented Kraus list.
pub fn choi_extremality(
    ch: &KrausChannel,
    mode: ExtremalityMode,
    tol: f64,
) -> Result<ExtremalityReport> {
    let choi = choi_of(ch);
    let canonical = kraus_from_choi(&choi, tol)?;
    let report = tp_unital_report(&canonical, MODE_TOL);
    match mode {
        ExtremalityMode::Unital => {
            if !report.unital {
                return Err(CoreError::Mode(format!(
                    "channel is not unital (residual {:.3e})",
                    report.unital_residual
                )));
            }
        }
        ExtremalityMode::TracePreserving => {
            if !report.trace_preserving {
                return Err(CoreError::Mode(format!(
                    "channel is not trace preserving (residual {:.3e})",
                    report.tp_residual
                )));
            }
        }
        ExtremalityMode::Bistochastic => {
            if !report.trace_preserving || !report.unital {
                return Err(CoreError::Mode(format!(
                    "channel is not bistochastic (tp residual {:.3e}, unital residual {:.3e})",
                    report.tp_residual, report.unital_residual
                )));
            }
        }
        ExtremalityMode::Cone => {
            let psd = psd_report(choi.matrix(), tol)?;
            let eig = spectral_decompose(choi.matrix())?;
            let second = eig.get(1).map(|e| e.0.max(0.0)).unwrap_or(0.0);
            return Ok(ExtremalityReport {
                mode,
                extreme: psd.numeric_rank == 1,
                gram_rank: psd.numeric_rank,
                gram_size: 1,
                min_singular_value: second,
            });
        }
    }

    let ops = canonical.kraus_ops();
    let s = ops.len();
    let n = canonical.dim();
    let mut rows: Vec<CVector> = Vec::with_capacity(s * s);
    for vi in ops {
        for vj in ops {
            let row = match mode {
                ExtremalityMode::Unital => vec_of(&vi.adjoint().matmul(vj)),
                ExtremalityMode::TracePreserving => vec_of(&vi.matmul(&vj.adjoint())),
                ExtremalityMode::Bistochastic => {
                    let mut row = vec_of(&vi.adjoint().matmul(vj));
                    row.extend(vec_of(&vi.matmul(&vj.adjoint())));
                    row
                }
                ExtremalityMode::Cone => unreachable!(),
            };
            rows.push(row);
        }
    }
    let _ = n;
    let svals = linalg::singular_values_of_rows(&rows);
    let gram_size = s * s;
    let gram_rank = linalg::rank_from_singular_values(&svals, SV_REL_TOL);
    let min_singular_value = if svals.len() < gram_size {
        0.0
    } else {
        svals.last().copied().unwrap_or(0.0)
    };
    Ok(ExtremalityReport {
        mode,
        extreme: gram_rank == gram_size,
        gram_rank,
        gram_size,
        min_singular_value,
    })
}

/// A pure state whose image under the channel is pure after normalization.
#[derive(Debug, Clone)]
pub struct Witness {
    pub input: PureState,
    pub image: PureState,
    pub image_trace: f64,
    pub residual: f64,
}

/// Result of the multistart pure-image search.
#[derive(Debug, Clone)]
pub struct PureImageSearch {
    pub witnesses: Vec<Witness>,
    pub best_residual: f64,
    /// Starts abandoned because the channel annihilated the state.
    pub excluded_points: usize,
}

/// Residual 1 - purity of the normalized image of |x><x|, or 2.0 when the
/// channel annihilates the state.
fn image_residual(ch: &KrausChannel, x: &[Complex64], trace_scale: f64) -> f64 {
    let y = ch.apply_to_pure_vec(x);
    let t = y.trace();
    if t <= 1e-12 * trace_scale {
        return 2.0;
    }
    let purity = hs_inner(&y, &y).expect("same dim") / (t * t);
    1.0 - purity
}

/// Derivative-free pattern search of the residual over the unit sphere;
/// rescues maximizers with degenerate (flatter than quadratic) contact,
/// where the block-coordinate ascent converges sublinearly.
fn polish_candidate(ch: &KrausChannel, x: &mut CVector, trace_scale: f64) -> f64 {
    let n = x.len();
    let mut best = image_residual(ch, x, trace_scale);
    let mut step = 0.05f64;
    while step > 1e-9 {
        let mut improved = false;
        for j in 0..n {
            for delta in [
                Complex64::new(step, 0.0),
                Complex64::new(-step, 0.0),
                Complex64::new(0.0, step),
                Complex64::new(0.0, -step),
            ] {
                let mut cand = x.clone();
                cand[j] += delta;
                let norm: f64 = cand.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                for z in cand.iter_mut() {
                    *z /= norm;
                }
                let f = image_residual(ch, &cand, trace_scale);
                if f < best {
                    best = f;
                    *x = cand;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    best
}

/// Residual band in which the pattern-search polish is worth running: the
/// ascent got close to a pure image but may be crawling along a flat
/// maximum.
const POLISH_WINDOW: f64 = 1e-4;

/// Multistart maximization of image purity over pure input states.
///
/// Each restart runs a block-coordinate ascent: for a fixed candidate image
/// direction v the best input is the top generalized eigenvector of
/// (sum_i |V_i v><V_i v|, sum_i V_i V_i^dag), and for a fixed input the best
/// v is the top eigenvector of the image. Both half-steps are exact, so the
/// score is monotone. Near-converged runs are finished off by a pattern
/// search, which handles maxima with degenerate contact.
pub fn find_pure_images(ch: &KrausChannel, restarts: usize, seed: u64) -> Result<PureImageSearch> {
    if restarts == 0 {
        return Err(CoreError::InvalidInput("restarts must be at least 1".into()));
    }
    let n = ch.dim();
    let b = ch.adjoint_of_identity();
    // pseudo-inverse square root of B; kernel directions carry no image
    let w = hermitian_power(&b, -0.5, 1e-12)?;
    let trace_scale = ch.spectral_trace().max(1e-300);

    let mut rng = sampling::seeded_rng(seed);
    let mut candidates: Vec<Witness> = Vec::new();
    let mut best_residual = f64::INFINITY;
    let mut excluded_points = 0usize;
    let mut completed = 0usize;

    for _ in 0..restarts {
        let mut x = sampling::random_unit_vector(&mut rng, n);
        let mut excluded = false;
        for _iter in 0..1500 {
            let y = ch.apply_to_pure_vec(&x);
            let t = y.trace();
            if t <= 1e-12 * trace_scale {
                excluded = true;
                break;
            }
            // image direction: top eigenvector of the image
            let eig_y = spectral_decompose(&y)?;
            let v = &eig_y[0].1;
            // input step: top eigenvector of W (sum_i |V_i v><V_i v|) W
            let p = ch.adjoint_apply_pure(v);
            let m = HermitianOp::symmetrize(
                w.matrix().matmul(p.matrix()).matmul(w.matrix()),
            );
            let eig_m = spectral_decompose(&m)?;
            let u = &eig_m[0].1;
            let mut x_new = w.matrix().apply_vec(u);
            let norm: f64 = x_new.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm <= 1e-150 {
                excluded = true;
                break;
            }
            for z in x_new.iter_mut() {
                *z /= norm;
            }
            let overlap: Complex64 = x.iter().zip(&x_new).map(|(a, c)| a.conj() * c).sum();
            let moved = 1.0 - overlap.norm();
            x = x_new;
            if moved <= 1e-15 {
                break;
            }
        }
        if excluded {
            excluded_points += 1;
            continue;
        }
        let mut residual = image_residual(ch, &x, trace_scale);
        if residual > WITNESS_RESIDUAL && residual <= POLISH_WINDOW {
            residual = polish_candidate(ch, &mut x, trace_scale);
        }
        if residual > 1.5 {
            excluded_points += 1;
            continue;
        }
        completed += 1;
        let y = ch.apply_to_pure_vec(&x);
        let t = y.trace();
        let sigma = y.scale_re(1.0 / t);
        best_residual = best_residual.min(residual);
        if residual <= WITNESS_RESIDUAL {
            let input = pure_from_vector(&x)?;
            let top = spectral_decompose(&sigma)?.remove(0);
            let image = pure_from_vector(&top.1)?;
            candidates.push(Witness {
                input,
                image,
                image_trace: t,
                residual,
            });
        }
    }

    if completed == 0 {
        best_residual = 1.0;
    }

    // deduplicate by input fidelity, keeping the best residual per cluster
    candidates.sort_by(|a, b| {
        a.residual
            .partial_cmp(&b.residual)
            .unwrap()
            .then_with(|| cmp_vectors(a.input.vector(), b.input.vector()))
    });
    let mut witnesses: Vec<Witness> = Vec::new();
    for cand in candidates {
        if witnesses
            .iter()
            .all(|kept| kept.input.fidelity(&cand.input) < WITNESS_DEDUP_FIDELITY)
        {
            witnesses.push(cand);
        }
    }
    Ok(PureImageSearch {
        witnesses,
        best_residual,
        excluded_points,
    })
}

fn cmp_vectors(a: &[Complex64], b: &[Complex64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.re.partial_cmp(&y.re).unwrap() {
            std::cmp::Ordering::Equal => {}
            other => return other,
        }
        match x.im.partial_cmp(&y.im).unwrap() {
            std::cmp::Ordering::Equal => {}
            other => return other,
        }
    }
    std::cmp::Ordering::Equal
}

/// The equivalent invertible-extreme conditions, checked numerically.
#[derive(Debug, Clone)]
pub struct InvertibleExtremeReport {
    /// The superoperator is invertible and its inverse has a psd Choi.
    pub cond_a_inverse_cp: bool,
    /// The Choi matrix has rank one and the single Kraus operator is
    /// invertible.
    pub cond_b_single_invertible_kraus: bool,
    /// n+1 pure states in general position with rank-one images in general
    /// position were found.
    pub cond_de_rank_one_images: bool,
    /// Set when the witness search ran out of budget; absence of witnesses
    /// is evidence, not a disproof.
    pub de_not_found_within_budget: bool,
    /// The witness set demonstrating (d)/(e), when found.
    pub witnesses: Vec<Witness>,
    pub consistent: bool,
}

/// Check conditions (a), (b) and (d)/(e) of the invertible-extreme
/// equivalence on a channel.
pub fn invertible_extreme_report(
    ch: &KrausChannel,
    budget: usize,
    seed: u64,
    tol: f64,
) -> Result<InvertibleExtremeReport> {
    let n = ch.dim();

    // (a): invertible superoperator with CP inverse
    let superop = SuperOpMatrix::from_channel(ch);
    let svals = superop.matrix().singular_values();
    let invertible = linalg::rank_from_singular_values(&svals, SV_REL_TOL) == n * n;
    let cond_a_inverse_cp = if invertible {
        match superop.matrix().inverse() {
            Some(inv) => {
                let inv_map = SuperOpMatrix::from_real_matrix(n, inv)?;
                psd_report(inv_map.choi().matrix(), tol)?.is_psd
            }
            None => false,
        }
    } else {
        false
    };

    // (b): Choi rank one with invertible Kraus operator
    let choi = choi_of(ch);
    let canonical = kraus_from_choi(&choi, tol)?;
    let cond_b_single_invertible_kraus = if canonical.kraus_ops().len() == 1 {
        let v = &canonical.kraus_ops()[0];
        let sv = linalg::singular_values(v);
        linalg::rank_from_singular_values(&sv, SV_REL_TOL) == n
    } else {
        false
    };

    // (d)/(e): witness search
    let search = find_pure_images(ch, budget.max(1), seed)?;
    let selected = select_general_position_set(&search.witnesses, n);
    let cond_de_rank_one_images = selected.is_some();
    let witnesses = selected.unwrap_or_default();

    let consistent = (cond_a_inverse_cp == cond_b_single_invertible_kraus)
        && (!cond_de_rank_one_images || cond_a_inverse_cp);
    Ok(InvertibleExtremeReport {
        cond_a_inverse_cp,
        cond_b_single_invertible_kraus,
        cond_de_rank_one_images,
        de_not_found_within_budget: !cond_de_rank_one_images,
        witnesses,
        consistent,
    })
}

/// Search the witness list for n+1 members whose inputs are in general
/// position and whose images are in general position. Subset enumeration
/// is lexicographic with a fixed cap, so the outcome is deterministic.
fn select_general_position_set(witnesses: &[Witness], n: usize) -> Option<Vec<Witness>> {
    let want = n + 1;
    if witnesses.len() < want {
        return None;
    }
    let inputs: Vec<CVector> = witnesses.iter().map(|w| w.input.vector().to_vec()).collect();
    let images: Vec<CVector> = witnesses.iter().map(|w| w.image.vector().to_vec()).collect();

    const SUBSET_CAP: usize = 2000;
    let k = witnesses.len();
    let mut subset: Vec<usize> = (0..want).collect();
    let mut tried = 0usize;
    loop {
        tried += 1;
        if tried > SUBSET_CAP {
            return None;
        }
        let ins: Vec<CVector> = subset.iter().map(|&i| inputs[i].clone()).collect();
        let outs: Vec<CVector> = subset.iter().map(|&i| images[i].clone()).collect();
        if vectors_in_general_position(&ins) && vectors_in_general_position(&outs) {
            return Some(subset.iter().map(|&i| witnesses[i].clone()).collect());
        }
        // next lexicographic subset
        let mut i = want;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if subset[i] != i + k - want {
                break;
            }
            if i == 0 {
                return None;
            }
        }
        subset[i] += 1;
        for j in (i + 1)..want {
            subset[j] = subset[j - 1] + 1;
        }
    }
}

/// Certificate that a trace-preserving channel is fix-extreme: the affine
/// hyperplane of trace-one Hermitians has dimension n^2 - 1, so n^2
/// affinely independent pure images certify extremality.
#[derive(Debug, Clone, Serialize)]
pub struct FixExtremeReport {
    pub pure_image_count: usize,
    pub image_affine_rank: usize,
    pub certified: bool,
}

pub fn fix_extreme_certificate(
    ch: &KrausChannel,
    restarts: usize,
    seed: u64,
) -> Result<FixExtremeReport> {
    let report = tp_unital_report(ch, MODE_TOL);
    if !report.trace_preserving {
        return Err(CoreError::Mode(format!(
            "fix-extreme certificate requires a trace-preserving channel (residual {:.3e})",
            report.tp_residual
        )));
    }
    let n = ch.dim();
    let search = find_pure_images(ch, restarts, seed)?;
    let points: Vec<HermitianOp> = search
        .witnesses
        .iter()
        .map(|w| w.image.op().clone())
        .collect();
    let image_affine_rank = if points.is_empty() {
        0
    } else {
        affine_rank(&points, 1e-6)?
    };
    Ok(FixExtremeReport {
        pure_image_count: search.witnesses.len(),
        image_affine_rank,
        certified: image_affine_rank >= n * n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{pauli, ComplexMatrix};
    use crate::states::general_position;

    fn diag_channel(diags: &[&[f64]]) -> KrausChannel {
        let n = diags[0].len();
        let ops = diags
            .iter()
            .map(|d| HermitianOp::diagonal(d).into_matrix())
            .collect();
        KrausChannel::new(n, ops).unwrap()
    }

    #[test]
    fn unitary_channel_extreme_in_all_modes() {
        let mut rng = sampling::seeded_rng(8);
        let u = sampling::haar_unitary(&mut rng, 3);
        let ch = KrausChannel::from_unitary_conjugation(&u);
        for mode in [
            ExtremalityMode::Unital,
            ExtremalityMode::TracePreserving,
            ExtremalityMode::Bistochastic,
            ExtremalityMode::Cone,
        ] {
            let report = choi_extremality(&ch, mode, 1e-9).unwrap();
            assert!(report.extreme, "mode {mode:?}");
            assert_eq!(report.gram_rank, report.gram_size);
        }
    }

    #[test]
    fn depolarizing_not_extreme_unital() {
        let ops = vec![
            ComplexMatrix::identity(2).scale_re(0.5),
            pauli::sigma1().scale_re(0.5),
            pauli::sigma2().scale_re(0.5),
            pauli::sigma3().scale_re(0.5),
        ];
        let ch = KrausChannel::new(2, ops).unwrap();
        let report = choi_extremality(&ch, ExtremalityMode::Unital, 1e-9).unwrap();
        assert!(!report.extreme);
        assert_eq!(report.gram_size, 16);
        assert_eq!(report.gram_rank, 4);
    }

    #[test]
    fn mode_precondition_errors() {
        let proj = KrausChannel::new(2, vec![HermitianOp::diagonal(&[1.0, 0.0]).into_matrix()])
            .unwrap();
        let err = choi_extremality(&proj, ExtremalityMode::Unital, 1e-9).unwrap_err();
        assert!(matches!(err, CoreError::Mode(_)));
        assert!(err.to_string().contains("unital"));
    }

    #[test]
    fn find_pure_images_identity_channel() {
        let ch = KrausChannel::identity(2);
        let search = find_pure_images(&ch, 32, 0).unwrap();
        assert!(search.best_residual < 1e-12);
        // every restart is a witness; random points stay distinct
        assert!(search.witnesses.len() >= 30);
        assert_eq!(search.excluded_points, 0);
    }

    #[test]
    fn find_pure_images_depolarizing_finds_none() {
        let ops = vec![
            ComplexMatrix::identity(2).scale_re(0.5),
            pauli::sigma1().scale_re(0.5),
            pauli::sigma2().scale_re(0.5),
            pauli::sigma3().scale_re(0.5),
        ];
        let ch = KrausChannel::new(2, ops).unwrap();
        let search = find_pure_images(&ch, 32, 1).unwrap();
        assert!(search.witnesses.is_empty());
        assert!((search.best_residual - 0.5).abs() < 1e-9);
    }

    #[test]
    fn theorem5_invertible_single_kraus() {
        let v = HermitianOp::diagonal(&[1.0, 2.0]).into_matrix().scale_re(1.0 / 5f64.sqrt());
        let ch = KrausChannel::new(2, vec![v]).unwrap();
        let report = invertible_extreme_report(&ch, 64, 3, 1e-9).unwrap();
        assert!(report.cond_a_inverse_cp);
        assert!(report.cond_b_single_invertible_kraus);
        assert!(report.cond_de_rank_one_images);
        assert_eq!(report.witnesses.len(), 3);
        assert!(report.consistent);
        let inputs: Vec<HermitianOp> = report
            .witnesses
            .iter()
            .map(|w| w.input.op().clone())
            .collect();
        assert!(general_position(&inputs).unwrap());
    }

    #[test]
    fn theorem5_projector_kraus() {
        let ch = KrausChannel::new(2, vec![HermitianOp::diagonal(&[1.0, 0.0]).into_matrix()])
            .unwrap();
        let report = invertible_extreme_report(&ch, 64, 5, 1e-9).unwrap();
        assert!(!report.cond_a_inverse_cp);
        assert!(!report.cond_b_single_invertible_kraus);
        assert!(!report.cond_de_rank_one_images);
        assert!(report.de_not_found_within_budget);
        assert!(report.consistent);
        // e2 is annihilated, so some starts get excluded along the way
        let search = find_pure_images(&ch, 64, 5).unwrap();
        assert!(search.witnesses.len() <= 2);
    }

    #[test]
    fn theorem5_dephasing_channel() {
        let inv = 1.0 / 2f64.sqrt();
        let ch = KrausChannel::new(
            2,
            vec![
                ComplexMatrix::identity(2).scale_re(inv),
                pauli::sigma3().scale_re(inv),
            ],
        )
        .unwrap();
        let report = invertible_extreme_report(&ch, 64, 7, 1e-9).unwrap();
        assert!(!report.cond_b_single_invertible_kraus);
        assert!(!report.cond_de_rank_one_images);
        assert!(report.consistent);
        // the two axis states are pure images, but no third cluster exists
        let search = find_pure_images(&ch, 64, 7).unwrap();
        assert_eq!(search.witnesses.len(), 2);
    }

    #[test]
    fn remark_diagonal_channel_images_without_general_position() {
        // two non-proportional diagonal Kraus operators with equal first
        // two entries: a continuum of pure images in the e1-e2 plane plus
        // the third axis, yet never n+1 witnesses in general position
        let ch = diag_channel(&[&[0.6, 0.6, 0.8], &[0.8, 0.8, -0.6]]);
        let report = tp_unital_report(&ch, 1e-12);
        assert!(report.unital && report.trace_preserving);

        let not_extreme = choi_extremality(&ch, ExtremalityMode::Unital, 1e-9).unwrap();
        assert!(!not_extreme.extreme);

        let search = find_pure_images(&ch, 96, 11).unwrap();
        assert!(search.witnesses.len() >= 4, "found {}", search.witnesses.len());
        // witnesses in the plane fail general position in triples
        let plane: Vec<&Witness> = search
            .witnesses
            .iter()
            .filter(|w| w.input.vector()[2].norm() < 1e-6)
            .collect();
        assert!(plane.len() >= 3);
        let triple: Vec<HermitianOp> = plane[..3].iter().map(|w| w.input.op().clone()).collect();
        assert!(!general_position(&triple).unwrap());

        let t5 = invertible_extreme_report(&ch, 96, 11, 1e-9).unwrap();
        assert!(!t5.cond_de_rank_one_images);
        assert!(t5.consistent);
    }

    #[test]
    fn fix_extreme_identity_and_depolarizing() {
        let id = KrausChannel::identity(2);
        let report = fix_extreme_certificate(&id, 64, 0).unwrap();
        assert!(report.certified);
        assert!(report.image_affine_rank >= 4);

        let ops = vec![
            ComplexMatrix::identity(2).scale_re(0.5),
            pauli::sigma1().scale_re(0.5),
            pauli::sigma2().scale_re(0.5),
            pauli::sigma3().scale_re(0.5),
        ];
        let dep = KrausChannel::new(2, ops).unwrap();
        let report = fix_extreme_certificate(&dep, 64, 0).unwrap();
        assert_eq!(report.pure_image_count, 0);
        assert_eq!(report.image_affine_rank, 0);
        assert!(!report.certified);

        // non-TP channel is refused
        let proj = KrausChannel::new(2, vec![HermitianOp::diagonal(&[1.0, 0.0]).into_matrix()])
            .unwrap();
        assert!(matches!(
            fix_extreme_certificate(&proj, 8, 0),
            Err(CoreError::Mode(_))
        ));
    }

    #[test]
    fn theorem5_random_consistency_small() {
        let mut rng = sampling::seeded_rng(19);
        for n in [2usize, 3] {
            for _ in 0..5 {
                let ch = sampling::random_invertible_single_kraus(&mut rng, n);
                let r = invertible_extreme_report(&ch, 48, 21, 1e-9).unwrap();
                assert!(r.cond_a_inverse_cp && r.cond_b_single_invertible_kraus);
                assert!(r.cond_de_rank_one_images);
                assert!(r.consistent);

                let ch2 = sampling::random_kraus_channel(&mut rng, n, 2);
                let r2 = invertible_extreme_report(&ch2, 48, 23, 1e-9).unwrap();
                assert!(!r2.cond_b_single_invertible_kraus);
                assert!(!r2.cond_de_rank_one_images, "rank-2 channel produced witnesses");
                assert!(r2.consistent);
            }
        }
    }
}
