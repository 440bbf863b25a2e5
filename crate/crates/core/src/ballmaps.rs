//! Affine maps of the closed Euclidean unit ball: the exact maximum of
//! ||A x + b|| on the sphere through the Lagrange/secular machinery,
//! contact-point sets with their affine rank, the orthogonality test tied
//! to fix-extremality, and the planar two-extreme-point example.
//!
//! After the reduction A = U diag(alpha) V^T, p = U^T b, the stationarity
//! system on the sphere reads (alpha_i^2 - lambda) y_i + p_i alpha_i = 0
//! with multiplier lambda >= alpha_1^2 at a maximum. Either the secular
//! function G(lambda) = sum (p_i alpha_i)^2 / (lambda - alpha_i^2)^2 has a
//! root above alpha_1^2 (isolated maximum), or all p_i vanish on the top
//! singular cluster and the maximizers form a sphere of dimension k-1
//! inside the cluster coordinates (the contact continuum).

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::linalg::{real_svd, RealMatrix};
use crate::sampling;
use crate::states::affine_rank_points;

/// Clustering radius merging nearby contact points into one cluster.
pub const CONTACT_CLUSTER_RADIUS: f64 = 1e-4;

/// An affine map x -> A x + b on R^n, analyzed against the unit ball.
#[derive(Debug, Clone)]
pub struct AffineBallMap {
    dim: usize,
    linear: RealMatrix,
    offset: Vec<f64>,
}

impl AffineBallMap {
    pub fn new(linear: RealMatrix, offset: Vec<f64>) -> Result<Self> {
        if linear.nrows() != linear.ncols() {
            return Err(CoreError::DimensionMismatch {
                expected: linear.nrows(),
                got: linear.ncols(),
            });
        }
        if offset.len() != linear.nrows() {
            return Err(CoreError::DimensionMismatch {
                expected: linear.nrows(),
                got: offset.len(),
            });
        }
        if !linear.is_finite() || offset.iter().any(|x| !x.is_finite()) {
            return Err(CoreError::InvalidInput("map entries must be finite".into()));
        }
        Ok(Self {
            dim: linear.nrows(),
            linear,
            offset,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn linear(&self) -> &RealMatrix {
        &self.linear
    }

    pub fn offset(&self) -> &[f64] {
        &self.offset
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut out = self.linear.apply_vec(x);
        for (o, b) in out.iter_mut().zip(&self.offset) {
            *o += b;
        }
        out
    }

    pub fn image_norm(&self, x: &[f64]) -> f64 {
        self.apply(x).iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// ||A^T A - I|| <= tol and ||b|| <= tol.
    pub fn is_orthogonal(&self, tol: f64) -> bool {
        let b_norm: f64 = self.offset.iter().map(|x| x * x).sum::<f64>().sqrt();
        self.linear.orthogonality_residual() <= tol && b_norm <= tol
    }
}

/// The resolved maximization of ||A x + b|| on the unit sphere.
#[derive(Debug, Clone)]
pub struct SphereMax {
    pub max_norm: f64,
    pub argmax: Vec<f64>,
    /// The Lagrange multiplier of the isolated solution, when one exists.
    pub lambda: Option<f64>,
    /// Singular values, descending.
    pub alphas: Vec<f64>,
    /// Rotated offset p = U^T b.
    pub p: Vec<f64>,
    /// Right-factor V of the SVD; sphere points are x = V y.
    pub v: RealMatrix,
    /// Indices of the top singular-value cluster.
    pub top_cluster: Vec<usize>,
    /// Radius of the free sphere inside the cluster coordinates (hard
    /// case); zero radius collapses the continuum to a point.
    pub hard_case_radius: Option<f64>,
    /// The y-coordinates fixed outside the cluster (hard case).
    pub y_fixed: Vec<f64>,
}

fn secular_g(lambda: f64, alphas: &[f64], p: &[f64]) -> f64 {
    alphas
        .iter()
        .zip(p)
        .map(|(&a, &pi)| {
            let w = pi * a;
            if w == 0.0 {
                0.0
            } else {
                let d = lambda - a * a;
                (w / d) * (w / d)
            }
        })
        .sum()
}

fn secular_g_prime(lambda: f64, alphas: &[f64], p: &[f64]) -> f64 {
    alphas
        .iter()
        .zip(p)
        .map(|(&a, &pi)| {
            let w = pi * a;
            if w == 0.0 {
                0.0
            } else {
                let d = lambda - a * a;
                -2.0 * w * w / (d * d * d)
            }
        })
        .sum()
}

/// Solve the full sphere maximization; `tol` controls the singular-value
/// clustering.
pub fn sphere_max(map: &AffineBallMap, tol: f64) -> SphereMax {
    let n = map.dim();
    let b_norm: f64 = map.offset.iter().map(|x| x * x).sum::<f64>().sqrt();

    // A = 0: the norm is constant ||b||
    if map.linear.frobenius_norm() == 0.0 {
        let mut argmax = vec![0.0; n];
        argmax[0] = 1.0;
        return SphereMax {
            max_norm: b_norm,
            argmax,
            lambda: None,
            alphas: vec![0.0; n],
            p: map.offset.clone(),
            v: RealMatrix::identity(n),
            top_cluster: (0..n).collect(),
            hard_case_radius: Some(1.0),
            y_fixed: vec![0.0; n],
        };
    }

    let svd = real_svd(&map.linear);
    let mut alphas = svd.singular_values.clone();
    alphas.resize(n, 0.0);
    let p = svd.u.transpose().apply_vec(&map.offset);
    let alpha1 = alphas[0];
    let cluster_tol = tol.max(1e-12) * alpha1.max(1.0);
    let top_cluster: Vec<usize> = (0..n).filter(|&i| alphas[i] >= alpha1 - cluster_tol).collect();

    let eval = |y: &[f64]| -> f64 {
        alphas
            .iter()
            .zip(&p)
            .zip(y)
            .map(|((&a, &pi), &yi)| {
                let t = a * yi + pi;
                t * t
            })
            .sum::<f64>()
            .sqrt()
    };

    // b = 0: top right-singular direction
    if b_norm == 0.0 {
        let mut y = vec![0.0; n];
        y[0] = 1.0;
        return SphereMax {
            max_norm: alpha1,
            argmax: svd.v.apply_vec(&y),
            lambda: Some(alpha1 * alpha1),
            alphas,
            p,
            v: svd.v,
            top_cluster: top_cluster.clone(),
            hard_case_radius: Some(1.0),
            y_fixed: vec![0.0; n],
        };
    }

    let top_p_sq: f64 = top_cluster.iter().map(|&i| (p[i] * alphas[i]).powi(2)).sum();
    let lam1 = alpha1 * alpha1;
    let scale2 = lam1.max(1.0);

    // fixed components outside the top cluster at lambda = alpha_1^2
    let hard_fixed: Vec<f64> = (0..n)
        .map(|i| {
            if top_cluster.contains(&i) {
                0.0
            } else {
                p[i] * alphas[i] / (lam1 - alphas[i] * alphas[i])
            }
        })
        .collect();
    let hard_norm_sq: f64 = hard_fixed.iter().map(|y| y * y).sum();

    let tiny = 1e-26 * scale2 * scale2;
    if top_p_sq <= tiny && hard_norm_sq <= 1.0 {
        // hard case: free sphere of radius r inside the cluster coordinates
        let r = (1.0 - hard_norm_sq).max(0.0).sqrt();
        let mut y = hard_fixed.clone();
        y[top_cluster[0]] = r;
        let argmax = svd.v.apply_vec(&y);
        return SphereMax {
            max_norm: eval(&y),
            argmax,
            lambda: Some(lam1),
            alphas,
            p,
            v: svd.v,
            top_cluster: top_cluster.clone(),
            hard_case_radius: Some(r),
            y_fixed: hard_fixed,
        };
    }

    // isolated case: bracket the root of G = 1 on (alpha_1^2, inf)
    let total: f64 = alphas.iter().zip(&p).map(|(&a, &pi)| (pi * a) * (pi * a)).sum();
    let mut delta = 1e-8 * scale2;
    while secular_g(lam1 + delta, &alphas, &p) <= 1.0 && delta > 1e-280 {
        delta *= 0.25;
    }
    let mut lo = lam1 + delta;
    let mut hi = lam1 + total.sqrt() * 1.000_000_1 + 1e-30;
    while secular_g(hi, &alphas, &p) >= 1.0 {
        hi = lam1 + (hi - lam1) * 2.0;
    }
    if lo > hi {
        lo = lam1;
    }
    let mut lambda = 0.5 * (lo + hi);
    for _ in 0..200 {
        let g = secular_g(lambda, &alphas, &p);
        if (g - 1.0).abs() <= 1e-14 {
            break;
        }
        if g > 1.0 {
            lo = lambda;
        } else {
            hi = lambda;
        }
        let gp = secular_g_prime(lambda, &alphas, &p);
        let newton = lambda - (g - 1.0) / gp;
        lambda = if gp < 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo <= 1e-17 * scale2 {
            break;
        }
    }
    let mut y: Vec<f64> = (0..n)
        .map(|i| p[i] * alphas[i] / (lambda - alphas[i] * alphas[i]))
        .collect();
    let norm: f64 = y.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        for v in y.iter_mut() {
            *v /= norm;
        }
    } else {
        y[0] = 1.0;
    }
    let argmax = svd.v.apply_vec(&y);
    SphereMax {
        max_norm: eval(&y),
        argmax,
        lambda: Some(lambda),
        alphas,
        p,
        v: svd.v,
        top_cluster,
        hard_case_radius: None,
        y_fixed: vec![0.0; n],
    }
}

/// max of ||A x + b|| over the unit sphere, with a maximizer.
pub fn max_norm_on_sphere(map: &AffineBallMap, tol: f64) -> (f64, Vec<f64>) {
    let sm = sphere_max(map, tol);
    (sm.max_norm, sm.argmax)
}

/// The contact set of a ball-positive affine map.
#[derive(Debug, Clone, Serialize)]
pub struct ContactReport {
    /// Cluster representatives of {x on the sphere : ||phi(x)|| = 1}.
    pub contact_points: Vec<Vec<f64>>,
    pub affine_rank: usize,
    pub is_orthogonal: bool,
    pub max_norm: f64,
}

fn normalize_in_place(x: &mut [f64]) -> f64 {
    let norm: f64 = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        for v in x.iter_mut() {
            *v /= norm;
        }
    }
    norm
}

/// Projected gradient ascent of ||A x + b||^2 on the sphere.
fn ascend(map: &AffineBallMap, start: &[f64]) -> Vec<f64> {
    let at = map.linear.transpose();
    let mut x = start.to_vec();
    normalize_in_place(&mut x);
    let f = |x: &[f64]| -> f64 {
        let y = map.apply(x);
        y.iter().map(|v| v * v).sum()
    };
    let mut fx = f(&x);
    for _ in 0..500 {
        let image = map.apply(&x);
        let grad = at.apply_vec(&image); // gradient / 2
        let dot: f64 = grad.iter().zip(&x).map(|(g, xi)| g * xi).sum();
        let tangent: Vec<f64> = grad.iter().zip(&x).map(|(g, xi)| g - dot * xi).collect();
        let tnorm: f64 = tangent.iter().map(|v| v * v).sum::<f64>().sqrt();
        if tnorm <= 1e-13 * dot.abs().max(1.0) {
            break;
        }
        let mut step = 1.0;
        let mut advanced = false;
        while step > 1e-16 {
            let mut cand: Vec<f64> = x
                .iter()
                .zip(&tangent)
                .map(|(xi, ti)| xi + step * ti)
                .collect();
            normalize_in_place(&mut cand);
            let fc = f(&cand);
            if fc > fx {
                x = cand;
                fx = fc;
                advanced = true;
                break;
            }
            step *= 0.5;
        }
        if !advanced {
            break;
        }
    }
    x
}

/// Snap a sphere point onto the exact contact variety of the hard case:
/// keep the fixed coordinates, renormalize the cluster block to radius r.
fn snap_to_variety(sm: &SphereMax, x: &[f64]) -> Option<Vec<f64>> {
    let r = sm.hard_case_radius?;
    let y = sm.v.transpose().apply_vec(x);
    let mut snapped = sm.y_fixed.clone();
    let mut cluster_norm_sq = 0.0;
    for &i in &sm.top_cluster {
        cluster_norm_sq += y[i] * y[i];
    }
    if r > 0.0 {
        if cluster_norm_sq <= 1e-24 {
            return None;
        }
        let scale = r / cluster_norm_sq.sqrt();
        for &i in &sm.top_cluster {
            snapped[i] = y[i] * scale;
        }
    }
    Some(sm.v.apply_vec(&snapped))
}

/// Evenly spread exact points of the hard-case contact variety.
fn variety_samples(sm: &SphereMax) -> Vec<Vec<f64>> {
    let Some(r) = sm.hard_case_radius else {
        return vec![sm.argmax.clone()];
    };
    let k = sm.top_cluster.len();
    let mut out = Vec::new();
    let mut push = |cluster_coords: &[f64]| {
        let mut y = sm.y_fixed.clone();
        for (slot, &c) in sm.top_cluster.iter().zip(cluster_coords) {
            y[*slot] = c;
        }
        out.push(sm.v.apply_vec(&y));
    };
    if r == 0.0 || k == 0 {
        push(&vec![0.0; k]);
    } else if k == 1 {
        push(&[r]);
        push(&[-r]);
    } else if k == 2 {
        for step in 0..8 {
            let theta = std::f64::consts::TAU * step as f64 / 8.0;
            push(&[r * theta.cos(), r * theta.sin()]);
        }
    } else {
        // spiral points over the (k-1)-sphere, k >= 3
        let count = 6 * k;
        let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
        for step in 0..count {
            let z = 1.0 - 2.0 * (step as f64 + 0.5) / count as f64;
            let radial = (1.0 - z * z).max(0.0).sqrt();
            let theta = golden * step as f64;
            let mut coords = vec![0.0; k];
            coords[0] = r * radial * theta.cos();
            coords[1] = r * radial * theta.sin();
            coords[2] = r * z;
            push(&coords);
        }
    }
    out
}

/// Find the contact set: exact variety points from the secular analysis
/// plus seeded multistart ascent for coverage, clustered at radius 1e-4.
pub fn contact_points(
    map: &AffineBallMap,
    tol: f64,
    samples: usize,
    seed: u64,
) -> Result<ContactReport> {
    let n = map.dim();
    let sm = sphere_max(map, tol);
    let max_norm = sm.max_norm;
    if max_norm > 1.0 + tol {
        return Err(CoreError::NotBallPositive { max_norm });
    }
    let is_orthogonal = map.is_orthogonal(tol.max(1e-10));
    if max_norm < 1.0 - tol {
        return Ok(ContactReport {
            contact_points: Vec::new(),
            affine_rank: 0,
            is_orthogonal,
            max_norm,
        });
    }

    let mut found: Vec<Vec<f64>> = variety_samples(&sm);
    let mut rng = sampling::seeded_rng(seed);
    for _ in 0..samples {
        let start = sampling::random_real_unit_vector(&mut rng, n);
        let top = ascend(map, &start);
        let candidate = match snap_to_variety(&sm, &top) {
            Some(snapped) => snapped,
            None => top,
        };
        if map.image_norm(&candidate) >= 1.0 - tol {
            found.push(candidate);
        }
    }
    found.retain(|x| map.image_norm(x) >= 1.0 - tol);

    // deterministic clustering: lexicographic order, greedy representatives
    found.sort_by(|a, b| {
        for (x, y) in a.iter().zip(b) {
            match x.partial_cmp(y).unwrap() {
                std::cmp::Ordering::Equal => {}
                other => return other,
            }
        }
        std::cmp::Ordering::Equal
    });
    let mut reps: Vec<Vec<f64>> = Vec::new();
    for cand in found {
        let close = reps.iter().any(|rep| {
            let d: f64 = rep
                .iter()
                .zip(&cand)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            d <= CONTACT_CLUSTER_RADIUS
        });
        if !close {
            reps.push(cand);
        }
    }
    let affine_rank = affine_rank_points(&reps, 1e-6);
    Ok(ContactReport {
        contact_points: reps,
        affine_rank,
        is_orthogonal,
        max_norm,
    })
}

/// Fix-extremality of a ball map. Fix-extreme ball maps must be
/// orthogonal, and the consistency flag records that the implication held.
#[derive(Debug, Clone, Serialize)]
pub struct BallExtremalityReport {
    pub fix_extreme: bool,
    pub consistent_with_orthogonality: bool,
}

pub fn ball_extremality_report(map: &AffineBallMap, tol: f64) -> Result<BallExtremalityReport> {
    let report = contact_points(map, tol, 256, 0)?;
    // fix-extreme needs n + 1 affinely independent contacts
    let fix_extreme = report.affine_rank > map.dim();
    Ok(BallExtremalityReport {
        fix_extreme,
        consistent_with_orthogonality: !fix_extreme || report.is_orthogonal,
    })
}

/// f on [-1, 1]: the concave profile whose subgraph is the planar convex
/// body with exactly two extreme points on the segment.
pub fn planar_f(x: f64) -> f64 {
    let lo = ((1.0 - x) / 2.0).max(0.0);
    let hi = ((1.0 + x) / 2.0).max(0.0);
    lo * lo * hi.sqrt() + 2.0 * lo.sqrt() * hi.powf(2.5) + (1.0 - x * x) / 4.0
}

/// g(x) = f(-x) / 2: the profile after the halving map T.
pub fn planar_g(x: f64) -> f64 {
    0.5 * planar_f(-x)
}

/// The planar map T_alpha (x, y) -> (-x, alpha y / 2).
pub fn planar_transform(alpha: f64, point: (f64, f64)) -> (f64, f64) {
    (-point.0, alpha * point.1 / 2.0)
}

/// Grid report for the planar example.
#[derive(Debug, Clone, Serialize)]
pub struct PlanarReport {
    pub f_concave: bool,
    pub f_ge_alpha_g_everywhere: bool,
    pub min_value: f64,
    pub argmin: f64,
}

/// Margin near the endpoints where fractional-power derivatives blow up;
/// concavity is not tested there.
pub const PLANAR_ENDPOINT_MARGIN: f64 = 1e-3;

/// Evaluate f and g on a uniform grid: concavity of f by second
/// differences away from the endpoints, and min(f - alpha g) with its
/// minimizer.
pub fn planar_example_check(alpha: f64, grid: usize) -> Result<PlanarReport> {
    if grid < 1000 {
        return Err(CoreError::InvalidInput("grid must be at least 1000".into()));
    }
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(CoreError::InvalidInput("alpha must be positive".into()));
    }
    let xs: Vec<f64> = (0..grid)
        .map(|i| -1.0 + 2.0 * i as f64 / (grid - 1) as f64)
        .collect();
    let fs: Vec<f64> = xs.iter().map(|&x| planar_f(x)).collect();

    let mut f_concave = true;
    for i in 1..grid - 1 {
        if xs[i].abs() > 1.0 - PLANAR_ENDPOINT_MARGIN {
            continue;
        }
        let second = fs[i + 1] - 2.0 * fs[i] + fs[i - 1];
        if second > 1e-9 {
            f_concave = false;
            break;
        }
    }

    let mut min_value = f64::INFINITY;
    let mut argmin = xs[0];
    for (&x, &fx) in xs.iter().zip(&fs) {
        let diff = fx - alpha * planar_g(x);
        if diff < min_value {
            min_value = diff;
            argmin = x;
        }
    }
    Ok(PlanarReport {
        f_concave,
        f_ge_alpha_g_everywhere: min_value >= -1e-12,
        min_value,
        argmin,
    })
}

/// JSON schema for an affine ball map file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BallMapJson {
    pub dim: usize,
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
}

impl BallMapJson {
    pub fn from_map(map: &AffineBallMap) -> Self {
        Self {
            dim: map.dim(),
            a: map.linear().to_rows(),
            b: map.offset().to_vec(),
        }
    }

    pub fn to_map(&self) -> Result<AffineBallMap> {
        let linear = RealMatrix::from_rows(&self.a)
            .ok_or_else(|| CoreError::InvalidInput("field 'a' rows have unequal lengths".into()))?;
        if linear.nrows() != self.dim {
            return Err(CoreError::DimensionMismatch {
                expected: self.dim,
                got: linear.nrows(),
            });
        }
        AffineBallMap::new(linear, self.b.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag_map(diag: &[f64], offset: &[f64]) -> AffineBallMap {
        let n = diag.len();
        let mut a = RealMatrix::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            a.set(i, i, d);
        }
        AffineBallMap::new(a, offset.to_vec()).unwrap()
    }

    /// Brute-force oracle: dense sampling plus pattern-search refinement,
    /// independent of the SVD/secular path.
    fn sampled_max(map: &AffineBallMap, samples: usize, seed: u64) -> f64 {
        let n = map.dim();
        let mut rng = sampling::seeded_rng(seed);
        let mut best = f64::NEG_INFINITY;
        let mut best_x = vec![0.0; n];
        for _ in 0..samples {
            let x = sampling::random_real_unit_vector(&mut rng, n);
            let v = map.image_norm(&x);
            if v > best {
                best = v;
                best_x = x;
            }
        }
        // pattern search polish
        let mut step = 0.1;
        while step > 1e-9 {
            let mut improved = false;
            for i in 0..n {
                for sign in [-1.0, 1.0] {
                    let mut cand = best_x.clone();
                    cand[i] += sign * step;
                    let norm: f64 = cand.iter().map(|v| v * v).sum::<f64>().sqrt();
                    for c in cand.iter_mut() {
                        *c /= norm;
                    }
                    let v = map.image_norm(&cand);
                    if v > best {
                        best = v;
                        best_x = cand;
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

    #[test]
    fn max_norm_closed_forms() {
        let half = diag_map(&[0.5, 0.5, 0.5], &[0.0, 0.0, 0.0]);
        let (max, arg) = max_norm_on_sphere(&half, 1e-9);
        assert!((max - 0.5).abs() < 1e-12);
        assert!((arg.iter().map(|v| v * v).sum::<f64>() - 1.0).abs() < 1e-12);

        // rotation: constant norm one
        let rot = AffineBallMap::new(
            RealMatrix::from_rows(&[
                vec![0.0, -1.0, 0.0],
                vec![1.0, 0.0, 0.0],
                vec![0.0, 0.0, 1.0],
            ])
            .unwrap(),
            vec![0.0; 3],
        )
        .unwrap();
        let (max, _) = max_norm_on_sphere(&rot, 1e-9);
        assert!((max - 1.0).abs() < 1e-12);

        // zero linear part
        let shift = diag_map(&[0.0, 0.0], &[0.3, 0.4]);
        let (max, _) = max_norm_on_sphere(&shift, 1e-9);
        assert!((max - 0.5).abs() < 1e-12);
    }

    #[test]
    fn max_norm_matches_oracle_small() {
        let map = diag_map(&[0.8, 0.5], &[0.1, 0.0]);
        let oracle = sampled_max(&map, 40_000, 3);
        let (max, arg) = max_norm_on_sphere(&map, 1e-9);
        assert!((max - oracle).abs() < 1e-6, "max {max} oracle {oracle}");
        assert!((map.image_norm(&arg) - max).abs() < 1e-12);
    }

    #[test]
    fn max_norm_matches_oracle_random() {
        // 100 random maps spread over n in {2, 3, 4}
        let mut rng = sampling::seeded_rng(7);
        for n in [2usize, 3, 4] {
            for trial in 0..34 {
                let a = RealMatrix::from_fn(n, n, |_, _| 0.4 * sampling::standard_normal(&mut rng));
                let b: Vec<f64> = (0..n).map(|_| 0.2 * sampling::standard_normal(&mut rng)).collect();
                let map = AffineBallMap::new(a, b).unwrap();
                let oracle = sampled_max(&map, 20_000, 100 + trial);
                let (max, _) = max_norm_on_sphere(&map, 1e-9);
                assert!(
                    (max - oracle).abs() < 1e-6,
                    "n={n} trial={trial}: max {max} oracle {oracle}"
                );
            }
        }
    }

    #[test]
    fn secular_stationarity_residual() {
        // isolated case: check (alpha_i^2 - lambda) y_i + p_i alpha_i = 0
        let mut rng = sampling::seeded_rng(40);
        for _ in 0..10 {
            let n = 3;
            let a = RealMatrix::from_fn(n, n, |_, _| 0.4 * sampling::standard_normal(&mut rng));
            let b: Vec<f64> = (0..n).map(|_| 0.3 * sampling::standard_normal(&mut rng)).collect();
            let map = AffineBallMap::new(a, b).unwrap();
            let sm = sphere_max(&map, 1e-9);
            if sm.hard_case_radius.is_some() {
                continue;
            }
            let lambda = sm.lambda.unwrap();
            let y = sm.v.transpose().apply_vec(&sm.argmax);
            for ((&alpha, &p_i), &y_i) in sm.alphas.iter().zip(&sm.p).zip(&y) {
                let res = (alpha * alpha - lambda) * y_i + p_i * alpha;
                assert!(res.abs() < 1e-8, "stationarity residual {res}");
            }
        }
    }

    #[test]
    fn contact_points_empty_for_contraction() {
        let map = diag_map(&[0.9, 0.9, 0.9], &[0.0, 0.0, 0.0]);
        let report = contact_points(&map, 1e-9, 64, 0).unwrap();
        assert!(report.contact_points.is_empty());
        assert_eq!(report.affine_rank, 0);
        assert!(!report.is_orthogonal);
    }

    #[test]
    fn contact_points_orthogonal_spans_sphere() {
        let mut rng = sampling::seeded_rng(11);
        let a = crate::linalg::real_svd(&RealMatrix::from_fn(3, 3, |_, _| {
            sampling::standard_normal(&mut rng)
        }))
        .u;
        let map = AffineBallMap::new(a, vec![0.0; 3]).unwrap();
        let report = contact_points(&map, 1e-9, 128, 1).unwrap();
        assert!(report.is_orthogonal);
        assert_eq!(report.affine_rank, 4);
        assert!((report.max_norm - 1.0).abs() < 1e-10);
    }

    #[test]
    fn contact_points_two_point_case() {
        // diagonal contraction with shift tuned so two symmetric points touch
        let map = diag_map(
            &[3f64.sqrt() / 2.0, 0.5, 3f64.sqrt() / 4.0],
            &[0.0, 0.0, 3f64.sqrt() / 4.0],
        );
        let report = contact_points(&map, 1e-9, 128, 2).unwrap();
        assert!((report.max_norm - 1.0).abs() < 1e-10, "max {}", report.max_norm);
        assert_eq!(report.contact_points.len(), 2, "{:?}", report.contact_points);
        assert_eq!(report.affine_rank, 2);
        assert!(!report.is_orthogonal);
        // symmetric pair (+-x, 0, z)
        let p0 = &report.contact_points[0];
        let p1 = &report.contact_points[1];
        assert!((p0[0] + p1[0]).abs() < 1e-9);
        assert!((p0[2] - p1[2]).abs() < 1e-9);
    }

    #[test]
    fn contact_points_not_ball_positive() {
        let map = diag_map(&[1.2, 0.5], &[0.0, 0.0]);
        match contact_points(&map, 1e-9, 16, 0) {
            Err(CoreError::NotBallPositive { max_norm }) => {
                assert!((max_norm - 1.2).abs() < 1e-12)
            }
            other => panic!("expected NotBallPositive, got {other:?}"),
        }
    }

    #[test]
    fn ball_extremality_consistency() {
        // orthogonal map: fix-extreme and consistent
        let map = AffineBallMap::new(RealMatrix::identity(3), vec![0.0; 3]).unwrap();
        let r = ball_extremality_report(&map, 1e-9).unwrap();
        assert!(r.fix_extreme && r.consistent_with_orthogonality);

        // contraction: no contacts
        let map = diag_map(&[0.9, 0.8, 0.7], &[0.0, 0.0, 0.0]);
        let r = ball_extremality_report(&map, 1e-9).unwrap();
        assert!(!r.fix_extreme && r.consistent_with_orthogonality);
    }

    #[test]
    fn planar_example_alpha_one_and_above() {
        let r = planar_example_check(1.0, 10_000).unwrap();
        assert!(r.f_concave);
        assert!(r.f_ge_alpha_g_everywhere, "min {}", r.min_value);

        let r = planar_example_check(1.01, 10_000).unwrap();
        assert!(!r.f_ge_alpha_g_everywhere);
        assert!(r.argmin > -1.0 && r.argmin < -0.9, "argmin {}", r.argmin);

        // f vanishes at both endpoints
        assert!(planar_f(1.0).abs() < 1e-15);
        assert!(planar_f(-1.0).abs() < 1e-15);

        // T is a bijection on the two extreme points
        assert_eq!(planar_transform(1.0, (-1.0, 0.0)), (1.0, 0.0));
        assert_eq!(planar_transform(1.0, (1.0, 0.0)), (-1.0, 0.0));
    }

    #[test]
    fn planar_g_is_half_reflected_f() {
        for i in 0..100 {
            let x = -1.0 + 2.0 * i as f64 / 99.0;
            assert!((planar_g(x) - 0.5 * planar_f(-x)).abs() < 1e-15);
        }
    }

    #[test]
    fn ball_map_json_round_trip() {
        let map = diag_map(&[0.5, 0.25], &[0.1, -0.2]);
        let json = serde_json::to_string(&BallMapJson::from_map(&map)).unwrap();
        let back: BallMapJson = serde_json::from_str(&json).unwrap();
        let map2 = back.to_map().unwrap();
        assert!(map2.linear().sub(map.linear()).frobenius_norm() < 1e-15);
    }
}
