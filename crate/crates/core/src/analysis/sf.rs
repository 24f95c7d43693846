//! Minkowski averages `(1/k)(Γ + … + Γ)` and their distance to the convex
//! hull of `Γ`.
//!
//! Averages are built one summand at a time, `A_k = ((k−1)A_{k−1} + Γ)/k`,
//! and every `A_k` with `k ≥ 2` is snapped to the grid `DEDUP_GRID⁻¹·ℤ³`
//! and deduplicated. The hull is represented by random convex
//! combinations of four points of `Γ` together with `Γ` itself. Since
//! `A_k ⊆ co(Γ)`, the distance reported is the directed one from the hull
//! samples to `A_k`.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use rayon::prelude::*;
use serde::Serialize;

use super::hausdorff::directed_hausdorff;
use super::AnalysisError;

/// Cells per unit length of the dedup grid.
pub const DEDUP_GRID: f64 = 200.0;
/// Largest point set accepted.
pub const MAX_POINTS: usize = 500;
/// Random convex combinations drawn for the hull.
pub const HULL_SAMPLES: usize = 20_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SfStep {
    pub k: usize,
    pub points: usize,
    pub hausdorff: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SfReport {
    pub input_points: usize,
    pub hull_samples: usize,
    pub seed: u64,
    /// `2/√|Γ|`.
    pub tolerance: f64,
    /// Largest snapping displacement, `√3/(2·DEDUP_GRID)`.
    pub snap_error: f64,
    pub steps: Vec<SfStep>,
    /// Each distance is at most its predecessor plus `tolerance`.
    pub nonincreasing: bool,
}

fn snap(p: [f64; 3]) -> [i64; 3] {
    p.map(|x| (x * DEDUP_GRID).round() as i64)
}

fn unsnap(c: &[i64; 3]) -> [f64; 3] {
    c.map(|x| x as f64 / DEDUP_GRID)
}

fn next_average(prev: &[[f64; 3]], base: &[[f64; 3]], k: usize) -> Vec<[f64; 3]> {
    let w = (k - 1) as f64 / k as f64;
    let v = 1.0 / k as f64;
    let cells: HashSet<[i64; 3]> = prev
        .par_chunks(256)
        .map(|chunk| {
            let mut s = HashSet::new();
            for a in chunk {
                for b in base {
                    s.insert(snap([0, 1, 2].map(|i| w * a[i] + v * b[i])));
                }
            }
            s
        })
        .reduce(HashSet::new, |mut x, y| {
            x.extend(y);
            x
        });
    let mut cells: Vec<[i64; 3]> = cells.into_iter().collect();
    cells.sort_unstable();
    cells.iter().map(unsnap).collect()
}

/// Points of `co(pts)`: `pts` itself plus `n` combinations of four random
/// points with Gamma-distributed weights, shape alternating 1 and 0.2 so
/// that both the interior and the faces are reached.
pub fn hull_samples(pts: &[[f64; 3]], n: usize, seed: u64) -> Vec<[f64; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shapes = [Gamma::new(1.0, 1.0).expect("valid shape"), Gamma::new(0.2, 1.0).expect("valid shape")];
    let mut out = pts.to_vec();
    for i in 0..n {
        let g = &shapes[i % 2];
        let mut w = [0.0; 4];
        let mut total = 0.0;
        for x in w.iter_mut() {
            *x = g.sample(&mut rng);
            total += *x;
        }
        // offsets from the first point keep repeated points exact
        let q: [[f64; 3]; 4] = std::array::from_fn(|_| pts[rng.random_range(0..pts.len())]);
        let mut p = q[0];
        for j in 1..4 {
            let f = if total > 0.0 { w[j] / total } else { 0.25 };
            for k in 0..3 {
                p[k] += f * (q[j][k] - q[0][k]);
            }
        }
        out.push(p);
    }
    out
}

pub fn sf_sequence(pts: &[[f64; 3]], k_max: usize, seed: u64) -> Result<SfReport, AnalysisError> {
    if k_max < 1 {
        return Err(AnalysisError::BadK(k_max));
    }
    if pts.is_empty() {
        return Err(AnalysisError::EmptyInput);
    }
    if pts.len() > MAX_POINTS {
        return Err(AnalysisError::TooManyPoints(pts.len(), MAX_POINTS));
    }
    let hull = hull_samples(pts, HULL_SAMPLES, seed);
    let mut steps = Vec::new();
    let mut cur = pts.to_vec();
    for k in 1..=k_max {
        if k > 1 {
            cur = next_average(&cur, pts, k);
        }
        steps.push(SfStep { k, points: cur.len(), hausdorff: directed_hausdorff(&hull, &cur)? });
    }
    let tolerance = 2.0 / (pts.len() as f64).sqrt();
    let nonincreasing = steps.windows(2).all(|w| w[1].hausdorff <= w[0].hausdorff + tolerance);
    Ok(SfReport {
        input_points: pts.len(),
        hull_samples: hull.len(),
        seed,
        tolerance,
        snap_error: 3f64.sqrt() / (2.0 * DEDUP_GRID),
        steps,
        nonincreasing,
    })
}
