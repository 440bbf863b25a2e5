//! Constructors for the concrete low-dimensional examples: the
//! Pauli-diagonal qubit family in its three extreme parameterizations, the
//! bridge from qubit maps to affine ball maps on the Bloch sphere, and the
//! 3x3 Kraus triple with no pure states in its image.

use num_complex::Complex64;
use serde::Serialize;

use crate::ballmaps::AffineBallMap;
use crate::channels::{kraus_from_choi, KrausChannel, SuperOpMatrix};
use crate::error::{CoreError, Result};
use crate::linalg::RealMatrix;
use crate::operators::{psd_report, ComplexMatrix};

/// The trace-preserving qubit map x' = l1 x, y' = l2 y, z' = l3 z + t in
/// Bloch coordinates.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PauliDiagonalMap {
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
    pub t: f64,
}

/// The three extreme families:
/// case 1 (generic, two pure states in the image): requires 0 < u < v;
/// case 2 (single pure state at the north pole): v is ignored;
/// case 3 (a full circle of pure states, positive but not CP).
pub fn qubit_family(case: u8, u: f64, v: f64) -> Result<PauliDiagonalMap> {
    match case {
        1 => {
            if !(0.0 < u && u < v) {
                return Err(CoreError::InvalidInput(format!(
                    "case 1 requires 0 < u < v, got u = {u}, v = {v}"
                )));
            }
            Ok(PauliDiagonalMap {
                lambda1: u.cos(),
                lambda2: v.cos(),
                lambda3: u.cos() * v.cos(),
                t: u.sin() * v.sin(),
            })
        }
        2 => Ok(PauliDiagonalMap {
            lambda1: u.cos(),
            lambda2: u.cos(),
            lambda3: u.cos() * u.cos(),
            t: u.sin() * u.sin(),
        }),
        3 => {
            let radial = (1.0 - u.cos().powi(2) * v.cos().powi(2)).sqrt();
            Ok(PauliDiagonalMap {
                lambda1: radial,
                lambda2: radial,
                lambda3: u.sin() * radial,
                t: u.sin() * v.sin().powi(2),
            })
        }
        other => Err(CoreError::InvalidInput(format!(
            "case must be 1, 2, or 3, got {other}"
        ))),
    }
}

/// The Bloch-ball action: A = diag(l1, l2, l3), b = (0, 0, t); the image
/// of the unit sphere is the associated ellipsoid.
pub fn to_bloch_affine(m: &PauliDiagonalMap) -> AffineBallMap {
    let mut a = RealMatrix::zeros(3, 3);
    a.set(0, 0, m.lambda1);
    a.set(1, 1, m.lambda2);
    a.set(2, 2, m.lambda3);
    AffineBallMap::new(a, vec![0.0, 0.0, m.t]).expect("finite entries")
}

/// The map as a superoperator plus, when completely positive, its Kraus
/// channel; otherwise only the minimal Choi eigenvalue is reported.
#[derive(Debug, Clone)]
pub struct QubitMapReport {
    pub superop: SuperOpMatrix,
    pub choi_min_eigenvalue: f64,
    /// Present exactly when the Choi matrix is psd.
    pub channel: Option<KrausChannel>,
}

/// Superoperator in the Pauli basis: diag(1, l1, l2, l3) with the t-shift
/// entry in the identity column; Kraus form attached when the Choi matrix
/// is psd.
pub fn to_channel(m: &PauliDiagonalMap) -> QubitMapReport {
    let mut s = RealMatrix::zeros(4, 4);
    s.set(0, 0, 1.0);
    s.set(1, 1, m.lambda1);
    s.set(2, 2, m.lambda2);
    s.set(3, 3, m.lambda3);
    s.set(3, 0, m.t);
    let superop = SuperOpMatrix::from_real_matrix(2, s).expect("4 x 4");
    let choi = superop.choi();
    let psd = psd_report(choi.matrix(), 1e-9).expect("positive tolerance");
    let channel = if psd.is_psd {
        kraus_from_choi(&choi, 1e-9).ok()
    } else {
        None
    };
    QubitMapReport {
        superop,
        choi_min_eigenvalue: psd.min_eigenvalue,
        channel,
    }
}

/// The 3x3 Kraus triple; satisfies sum V_i V_i^dag = I for every alpha,
/// and for small alpha the products {V_i V_j^dag} span all of gl(3).
pub fn example33(alpha: f64) -> KrausChannel {
    let r3 = 3f64.sqrt().recip();
    let r2 = 2f64.sqrt().recip();
    let denom = (1.0 + alpha * alpha).sqrt();
    let c = |x: f64| Complex64::new(x, 0.0);

    let mut v1 = ComplexMatrix::zeros(3);
    v1.set(0, 0, c(r3));
    v1.set(1, 1, c(r2));
    v1.set(2, 2, c(1.0 / denom));

    let mut v2 = ComplexMatrix::zeros(3);
    v2.set(0, 1, c(r3));
    v2.set(1, 2, c(r2));
    v2.set(2, 0, c(alpha / denom));

    let mut v3 = ComplexMatrix::zeros(3);
    v3.set(0, 2, c(r3));

    KrausChannel::new(3, vec![v1, v2, v3]).expect("nonzero operators")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ballmaps::contact_points;
    use crate::channels::{choi_of, tp_unital_report};
    use crate::extremality::{choi_extremality, find_pure_images, ExtremalityMode};
    use crate::operators::HermitianOp;
    use crate::wigner::preserves_transition_probs;
    use std::f64::consts::PI;

    #[test]
    fn family_values_case1() {
        let m = qubit_family(1, PI / 6.0, PI / 3.0).unwrap();
        assert!((m.lambda1 - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((m.lambda2 - 0.5).abs() < 1e-15);
        assert!((m.lambda3 - 3f64.sqrt() / 4.0).abs() < 1e-15);
        assert!((m.t - 3f64.sqrt() / 4.0).abs() < 1e-15);

        assert!(qubit_family(1, 0.5, 0.3).is_err());
        assert!(qubit_family(1, 0.0, 0.3).is_err());
        assert!(qubit_family(4, 0.1, 0.2).is_err());
    }

    #[test]
    fn family_values_case2_and_fixed_point() {
        let m = qubit_family(2, PI / 4.0, 0.0).unwrap();
        let s = 2f64.sqrt() / 2.0;
        assert!((m.lambda1 - s).abs() < 1e-15);
        assert!((m.lambda2 - s).abs() < 1e-15);
        assert!((m.lambda3 - 0.5).abs() < 1e-15);
        assert!((m.t - 0.5).abs() < 1e-15);

        let ball = to_bloch_affine(&m);
        let image = ball.apply(&[0.0, 0.0, 1.0]);
        assert!((image[0]).abs() < 1e-15);
        assert!((image[1]).abs() < 1e-15);
        assert!((image[2] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn family_values_case3() {
        let m = qubit_family(3, PI / 4.0, PI / 4.0).unwrap();
        assert!((m.lambda1 - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((m.lambda2 - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((m.lambda3 - 6f64.sqrt() / 4.0).abs() < 1e-15);
        assert!((m.t - 2f64.sqrt() / 4.0).abs() < 1e-15);
    }

    #[test]
    fn bloch_contacts_for_the_three_cases() {
        let identity = PauliDiagonalMap {
            lambda1: 1.0,
            lambda2: 1.0,
            lambda3: 1.0,
            t: 0.0,
        };
        let ball = to_bloch_affine(&identity);
        assert!(ball.is_orthogonal(1e-12));

        let case2 = to_bloch_affine(&qubit_family(2, PI / 4.0, 0.0).unwrap());
        let report = contact_points(&case2, 1e-9, 128, 0).unwrap();
        assert_eq!(report.contact_points.len(), 1);
        let p = &report.contact_points[0];
        assert!((p[0]).abs() < 1e-6 && (p[1]).abs() < 1e-6 && (p[2] - 1.0).abs() < 1e-6);

        let case3 = to_bloch_affine(&qubit_family(3, PI / 4.0, PI / 4.0).unwrap());
        let report = contact_points(&case3, 1e-9, 128, 0).unwrap();
        assert_eq!(report.affine_rank, 3);
        assert!(report.contact_points.len() >= 3);
    }

    #[test]
    fn to_channel_cp_and_not_cp() {
        let case1 = to_channel(&qubit_family(1, PI / 6.0, PI / 3.0).unwrap());
        assert!(case1.channel.is_some(), "min eig {}", case1.choi_min_eigenvalue);
        let ch = case1.channel.unwrap();
        assert!(tp_unital_report(&ch, 1e-9).trace_preserving);
        let ext = choi_extremality(&ch, ExtremalityMode::TracePreserving, 1e-9).unwrap();
        assert!(ext.extreme);

        let case3 = to_channel(&qubit_family(3, PI / 4.0, PI / 4.0).unwrap());
        assert!(case3.channel.is_none());
        assert!(case3.choi_min_eigenvalue < -1e-6);

        let identity = to_channel(&PauliDiagonalMap {
            lambda1: 1.0,
            lambda2: 1.0,
            lambda3: 1.0,
            t: 0.0,
        });
        let ch = identity.channel.unwrap();
        let psd = psd_report(choi_of(&ch).matrix(), 1e-9).unwrap();
        assert_eq!(psd.numeric_rank, 1);
    }

    #[test]
    fn case3_positive_but_not_wigner() {
        let m = qubit_family(3, PI / 4.0, PI / 4.0).unwrap();
        let ball = to_bloch_affine(&m);
        let report = contact_points(&ball, 1e-9, 64, 0).unwrap();
        assert!(report.max_norm <= 1.0 + 1e-9);
        let su = to_channel(&m).superop;
        let (preserved, dev) = preserves_transition_probs(&su, 200, 0, 1e-9).unwrap();
        assert!(!preserved && dev > 1e-3);
    }

    #[test]
    fn family_sweep_cases_1_and_2_are_extreme_cp() {
        for ku in 1..=9usize {
            let u = ku as f64 * PI / 20.0;
            let report = to_channel(&qubit_family(2, u, 0.0).unwrap());
            let ch = report.channel.expect("case 2 is CP");
            let ext = choi_extremality(&ch, ExtremalityMode::TracePreserving, 1e-9).unwrap();
            assert!(ext.extreme, "case 2 u={u}");
            for kv in (ku + 1)..=9usize {
                let v = kv as f64 * PI / 20.0;
                let report = to_channel(&qubit_family(1, u, v).unwrap());
                let ch = report.channel.expect("case 1 is CP");
                let ext = choi_extremality(&ch, ExtremalityMode::TracePreserving, 1e-9).unwrap();
                assert!(ext.extreme, "case 1 u={u} v={v}");
            }
        }
    }

    /// Solve sin(u) sin^2(v) = cos^2(u) cos(v) for u at fixed v; on this
    /// curve the case-3 ellipsoid touches the unit sphere along a circle.
    fn case3_touching_u(v: f64) -> f64 {
        let h = |u: f64| u.sin() * v.sin().powi(2) - u.cos().powi(2) * v.cos();
        let (mut lo, mut hi) = (0.0f64, PI / 2.0);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if h(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn case3_touching_curve_positive_not_cp() {
        // the printed case-3 parameterization touches the sphere exactly
        // when sin(u) sin^2(v) = cos^2(u) cos(v); off the curve the
        // ellipsoid either sits strictly inside (and the map can be CP)
        // or leaves the ball
        for kv in 2..=9usize {
            let v = kv as f64 * PI / 20.0;
            let u = case3_touching_u(v);
            let m = qubit_family(3, u, v).unwrap();
            let ball = to_bloch_affine(&m);
            let report = contact_points(&ball, 1e-9, 16, 0).unwrap();
            assert!(report.max_norm <= 1.0 + 1e-9, "u={u} v={v}: {}", report.max_norm);
            assert_eq!(report.affine_rank, 3, "u={u} v={v}");
            let ch = to_channel(&m);
            assert!(ch.channel.is_none(), "u={u} v={v} unexpectedly CP");
            assert!(ch.choi_min_eigenvalue < -1e-6, "u={u} v={v}");
            let (preserved, _) = preserves_transition_probs(&ch.superop, 50, 0, 1e-9).unwrap();
            assert!(!preserved, "u={u} v={v}");
        }
        // an off-curve instance keeps the ellipsoid strictly inside and is
        // a perfectly ordinary CP map
        let inside = to_channel(&qubit_family(3, PI / 20.0, PI / 20.0).unwrap());
        assert!(inside.channel.is_some());
    }

    #[test]
    fn example33_identities() {
        for &alpha in &[0.0, 0.1, 0.2, 1.0, -0.3] {
            let ch = example33(alpha);
            let report = tp_unital_report(&ch, 1e-12);
            assert!(report.trace_preserving, "alpha={alpha}: residual {}", report.tp_residual);
            // which identity holds: sum V V^dag = I (trace preserving),
            // while sum V^dag V differs from I
            assert!(!report.unital);
        }
    }

    #[test]
    fn example33_extreme_and_pure_image_free() {
        for &alpha in &[0.0, 0.2] {
            let ch = example33(alpha);
            let ext = choi_extremality(&ch, ExtremalityMode::TracePreserving, 1e-9).unwrap();
            assert!(ext.extreme, "alpha={alpha}");
            assert_eq!(ext.gram_rank, 9);
            assert_eq!(ext.gram_size, 9);
        }
        let search = find_pure_images(&example33(0.2), 64, 0).unwrap();
        assert!(search.witnesses.is_empty());
        assert!(search.best_residual > 1e-3, "best {}", search.best_residual);
    }

    #[test]
    fn example33_sends_mixed_to_valid_state() {
        let ch = example33(0.3);
        let rho = HermitianOp::identity(3).scale_re(1.0 / 3.0);
        let out = ch.apply(&rho).unwrap();
        assert!((out.trace() - 1.0).abs() < 1e-12);
        assert!(psd_report(&out, 1e-9).unwrap().is_psd);
    }

    #[test]
    fn case2_single_witness_cluster_at_the_pole() {
        let report = to_channel(&qubit_family(2, PI / 4.0, 0.0).unwrap());
        let ch = report.channel.expect("case 2 is CP");
        let search = find_pure_images(&ch, 64, 3).unwrap();
        assert_eq!(search.witnesses.len(), 1, "residual {}", search.best_residual);
        // the fixed point: |0><0| maps to itself
        let w = &search.witnesses[0];
        assert!((w.input.op().get(0, 0).re - 1.0).abs() < 1e-6);
        assert!((w.image.op().get(0, 0).re - 1.0).abs() < 1e-6);
    }

    #[test]
    fn case3_ball_extremality_is_consistent() {
        let ball = to_bloch_affine(&qubit_family(3, PI / 4.0, PI / 4.0).unwrap());
        let r = crate::ballmaps::ball_extremality_report(&ball, 1e-9).unwrap();
        // the contact circle has affine rank 3 = n < n + 1
        assert!(!r.fix_extreme);
        assert!(r.consistent_with_orthogonality);
    }

    #[test]
    fn example33_alpha_zero_has_pure_images() {
        // at alpha = 0 the third column is annihilated by V2, and the basis
        // vector e3 maps to a pure state, so witnesses exist there
        let ch = example33(0.0);
        let e3 = [
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        ];
        let image = ch.apply_to_pure_vec(&e3);
        let purity = crate::operators::hs_inner(&image, &image).unwrap()
            / (image.trace() * image.trace());
        let _ = HermitianOp::identity(3);
        assert!(purity > 1.0 - 1e-12);
    }
}
