//! Hausdorff distance between finite point sets.

use std::collections::HashMap;

use rayon::prelude::*;

use super::AnalysisError;

/// Target sets larger than this are searched through a uniform grid.
pub const BRUTE_FORCE_POINTS: usize = 10_000;

fn d2(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)
}

/// Hash grid over a point set. Every query returns the exact minimum of
/// `d2` over the set, so results match brute force bit for bit.
pub struct NearestGrid<'a> {
    pts: &'a [[f64; 3]],
    lo: [f64; 3],
    cell: f64,
    cells: HashMap<[i64; 3], Vec<u32>>,
    // bounding range of occupied cell keys
    kmin: [i64; 3],
    kmax: [i64; 3],
}

impl<'a> NearestGrid<'a> {
    pub fn new(pts: &'a [[f64; 3]]) -> Self {
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for p in pts {
            for k in 0..3 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        let extent = (0..3).map(|k| hi[k] - lo[k]).fold(0.0, f64::max);
        let per_axis = ((pts.len() as f64 / 2.0).cbrt().ceil()).max(1.0);
        let cell = if extent > 0.0 { extent / per_axis } else { 1.0 };
        let mut grid = NearestGrid { pts, lo, cell, cells: HashMap::new(), kmin: [i64::MAX; 3], kmax: [i64::MIN; 3] };
        for (i, p) in pts.iter().enumerate() {
            let key = grid.key(p);
            for ((lo, hi), &c) in grid.kmin.iter_mut().zip(grid.kmax.iter_mut()).zip(&key) {
                *lo = (*lo).min(c);
                *hi = (*hi).max(c);
            }
            grid.cells.entry(key).or_default().push(i as u32);
        }
        grid
    }

    fn key(&self, p: &[f64; 3]) -> [i64; 3] {
        [0, 1, 2].map(|k| ((p[k] - self.lo[k]) / self.cell).floor() as i64)
    }

    /// Squared distance from `q` to the nearest point of the set.
    pub fn nearest_sq(&self, q: &[f64; 3]) -> f64 {
        let c = self.key(q);
        let mut best = f64::INFINITY;
        let reach = (0..3).map(|k| (c[k] - self.kmin[k]).abs().max((self.kmax[k] - c[k]).abs())).max().unwrap_or(0);
        let mut r = 0i64;
        loop {
            // every cell at Chebyshev ring r
            for i in c[0] - r..=c[0] + r {
                for j in c[1] - r..=c[1] + r {
                    let on_face = (i - c[0]).abs() == r || (j - c[1]).abs() == r;
                    let ks: Vec<i64> = if on_face { (c[2] - r..=c[2] + r).collect() } else { vec![c[2] - r, c[2] + r] };
                    for k in ks {
                        if let Some(ids) = self.cells.get(&[i, j, k]) {
                            for &id in ids {
                                best = best.min(d2(q, &self.pts[id as usize]));
                            }
                        }
                    }
                }
            }
            // points beyond ring r are at least r cells away; one extra
            // ring absorbs rounding in the cell keys
            let safe = (r - 1).max(0) as f64 * self.cell;
            if (best.is_finite() && best < safe * safe) || r > reach + 1 {
                return best;
            }
            r += 1;
        }
    }
}

/// `sup_{a∈A} min_{b∈B} |a − b|`.
pub fn directed_hausdorff(a: &[[f64; 3]], b: &[[f64; 3]]) -> Result<f64, AnalysisError> {
    if a.is_empty() || b.is_empty() {
        return Err(AnalysisError::EmptyInput);
    }
    let worst = if b.len() <= BRUTE_FORCE_POINTS {
        a.par_iter().map(|p| b.iter().map(|q| d2(p, q)).fold(f64::INFINITY, f64::min)).reduce(|| 0.0, f64::max)
    } else {
        let grid = NearestGrid::new(b);
        a.par_iter().map(|p| grid.nearest_sq(p)).reduce(|| 0.0, f64::max)
    };
    Ok(worst.sqrt())
}

/// Larger of the two directed distances.
pub fn hausdorff(a: &[[f64; 3]], b: &[[f64; 3]]) -> Result<f64, AnalysisError> {
    Ok(directed_hausdorff(a, b)?.max(directed_hausdorff(b, a)?))
}
