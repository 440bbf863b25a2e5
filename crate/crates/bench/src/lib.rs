//! Shared fixtures for the benchmark targets.

use extremap_core::ballmaps::AffineBallMap;
use extremap_core::channels::KrausChannel;
use extremap_core::linalg::RealMatrix;
use extremap_core::operators::HermitianOp;
use extremap_core::sampling;

pub fn hermitian_fixture(n: usize) -> HermitianOp {
    let mut rng = sampling::seeded_rng(7);
    sampling::random_hermitian(&mut rng, n)
}

pub fn channel_fixture(n: usize, s: usize) -> KrausChannel {
    let mut rng = sampling::seeded_rng(11);
    sampling::random_tp_channel(&mut rng, n, s)
}

pub fn ball_fixture(n: usize) -> AffineBallMap {
    let mut rng = sampling::seeded_rng(13);
    let a = RealMatrix::from_fn(n, n, |_, _| 0.3 * sampling::standard_normal(&mut rng));
    let b: Vec<f64> = (0..n).map(|_| 0.1 * sampling::standard_normal(&mut rng)).collect();
    AffineBallMap::new(a, b).expect("finite")
}
