//! Seeded random constructions: Gaussian draws, Haar-random unitaries,
//! random unit vectors, and random Hermitian/Kraus test material.
//!
//! Randomness always flows through an explicitly seeded generator, so
//! every caller is reproducible from its seed.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channels::{tp_unital_report, ChoiMatrix, KrausChannel};
use crate::operators::{hermitian_power, CVector, ComplexMatrix, HermitianOp};
use crate::states::DensityState;

/// The deterministic generator used throughout the crate.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One standard normal draw (Box-Muller).
pub fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen::<f64>();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Standard complex Gaussian with unit variance per real component.
pub fn complex_gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(standard_normal(rng), standard_normal(rng))
}

/// Square matrix of independent complex Gaussians.
pub fn ginibre(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, |_, _| complex_gaussian(rng))
}

/// Uniform random unit vector in C^n.
pub fn random_unit_vector(rng: &mut ChaCha8Rng, n: usize) -> CVector {
    loop {
        let v: CVector = (0..n).map(|_| complex_gaussian(rng)).collect();
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Uniform random unit vector in R^n.
pub fn random_real_unit_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| standard_normal(rng)).collect();
        let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Haar-random unitary: modified Gram-Schmidt QR of a Ginibre matrix.
/// Normalizing against a positive real R diagonal makes the factorization
/// unique, so the Q factor carries the Haar measure.
pub fn haar_unitary(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let z = ginibre(rng, n);
    let mut cols: Vec<CVector> = (0..n)
        .map(|j| (0..n).map(|i| z.get(i, j)).collect())
        .collect();
    for j in 0..n {
        for k in 0..j {
            let proj: Complex64 = cols[k]
                .iter()
                .zip(cols[j].iter())
                .map(|(a, b)| a.conj() * b)
                .sum();
            let ck = cols[k].clone();
            for (x, y) in cols[j].iter_mut().zip(ck.iter()) {
                *x -= proj * y;
            }
        }
        let norm: f64 = cols[j].iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-12 {
            // astronomically unlikely; fall back to a basis column
            for (i, x) in cols[j].iter_mut().enumerate() {
                *x = if i == j {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                };
            }
        } else {
            for x in cols[j].iter_mut() {
                *x /= norm;
            }
        }
    }
    ComplexMatrix::from_fn(n, |i, j| cols[j][i])
}

/// Random Hermitian matrix with Gaussian entries.
pub fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> HermitianOp {
    let g = ginibre(rng, n);
    HermitianOp::symmetrize(g.add(&g.adjoint()).scale_re(0.5))
}

/// Random channel with `s` Ginibre Kraus operators, scaled to spectral
/// trace about one.
pub fn random_kraus_channel(rng: &mut ChaCha8Rng, n: usize, s: usize) -> KrausChannel {
    let scale = 1.0 / ((n * n * s) as f64).sqrt();
    let ops: Vec<ComplexMatrix> = (0..s).map(|_| ginibre(rng, n).scale_re(scale)).collect();
    KrausChannel::new(n, ops).expect("nonzero Ginibre draw")
}

/// Random trace-preserving channel: Ginibre operators G_i conjugated by
/// M^(-1/2) with M = sum G_i G_i^dag, so that sum V_i V_i^dag = I.
pub fn random_tp_channel(rng: &mut ChaCha8Rng, n: usize, s: usize) -> KrausChannel {
    loop {
        let gs: Vec<ComplexMatrix> = (0..s).map(|_| ginibre(rng, n)).collect();
        let mut m = ComplexMatrix::zeros(n);
        for g in &gs {
            m = m.add(&g.matmul(&g.adjoint()));
        }
        let m = HermitianOp::symmetrize(m);
        let Ok(inv_sqrt) = hermitian_power(&m, -0.5, 1e-10) else {
            continue;
        };
        let ops: Vec<ComplexMatrix> = gs
            .iter()
            .map(|g| inv_sqrt.matrix().matmul(g))
            .collect();
        let ch = KrausChannel::new(n, ops).expect("nonzero");
        if tp_unital_report(&ch, 1e-10).trace_preserving {
            return ch;
        }
    }
}

/// Random invertible single-Kraus channel; resamples until the operator is
/// comfortably far from singular.
pub fn random_invertible_single_kraus(rng: &mut ChaCha8Rng, n: usize) -> KrausChannel {
    loop {
        let g = ginibre(rng, n).scale_re(1.0 / (n as f64).sqrt());
        let svals = crate::linalg::singular_values(&g);
        if svals.last().copied().unwrap_or(0.0) > 0.1 * svals[0] {
            return KrausChannel::new(n, vec![g]).expect("nonzero");
        }
    }
}

/// Random psd Choi matrix of the given rank, normalized to unit trace.
pub fn random_psd_choi(rng: &mut ChaCha8Rng, n: usize, rank: usize) -> ChoiMatrix {
    let d = n * n;
    let mut acc = ComplexMatrix::zeros(d);
    for _ in 0..rank.max(1) {
        let v: Vec<Complex64> = (0..d).map(|_| complex_gaussian(rng)).collect();
        acc = acc.add(&ComplexMatrix::outer(&v, &v));
    }
    let trace = acc.trace().re;
    let herm = HermitianOp::symmetrize(acc.scale_re(1.0 / trace));
    ChoiMatrix::new(n, herm).expect("sizes agree")
}

/// Random density state of the requested rank.
pub fn random_density(rng: &mut ChaCha8Rng, n: usize, rank: usize) -> DensityState {
    let r = rank.clamp(1, n);
    let mut acc = ComplexMatrix::zeros(n);
    for _ in 0..r {
        let v: Vec<Complex64> = (0..n).map(|_| complex_gaussian(rng)).collect();
        acc = acc.add(&ComplexMatrix::outer(&v, &v));
    }
    let trace = acc.trace().re;
    DensityState::new(HermitianOp::symmetrize(acc.scale_re(1.0 / trace)))
        .expect("psd with unit trace")
}
