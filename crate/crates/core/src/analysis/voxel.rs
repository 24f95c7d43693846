//! Occupancy grids for midpoint sets.

use std::fmt::Write as _;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use super::AnalysisError;
use crate::exact::Rat;

/// Occupancy bits of a `dims[0] × dims[1] × dims[2]` block of cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VoxelGrid {
    dims: [usize; 3],
    bits: Vec<u64>,
}

impl VoxelGrid {
    pub fn new(dims: [usize; 3]) -> Self {
        let n = dims[0] * dims[1] * dims[2];
        VoxelGrid { dims, bits: vec![0; n.div_ceil(64)] }
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    fn index(&self, c: [usize; 3]) -> usize {
        (c[0] * self.dims[1] + c[1]) * self.dims[2] + c[2]
    }

    pub fn set(&mut self, c: [usize; 3]) {
        let i = self.index(c);
        self.bits[i / 64] |= 1 << (i % 64);
    }

    pub fn get(&self, c: [usize; 3]) -> bool {
        let i = self.index(c);
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn union(mut self, other: &VoxelGrid) -> VoxelGrid {
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a |= b;
        }
        self
    }

    /// Every occupied cell together with its 26 neighbours.
    pub fn dilated(&self) -> VoxelGrid {
        let mut out = VoxelGrid::new(self.dims);
        let [nx, ny, nz] = self.dims;
        for i in 0..nx {
            for j in 0..ny {
                for k in 0..nz {
                    if !self.get([i, j, k]) {
                        continue;
                    }
                    for a in i.saturating_sub(1)..=(i + 1).min(nx - 1) {
                        for b in j.saturating_sub(1)..=(j + 1).min(ny - 1) {
                            for c in k.saturating_sub(1)..=(k + 1).min(nz - 1) {
                                out.set([a, b, c]);
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Run-length text: a header with the dimensions, then alternating
    /// run lengths of empty and occupied cells in `x`-major order,
    /// starting with an empty run.
    pub fn to_rle(&self) -> String {
        let mut s = format!("dims {} {} {}\nruns", self.dims[0], self.dims[1], self.dims[2]);
        let total = self.dims.iter().product::<usize>();
        let mut state = false;
        let mut run = 0usize;
        for i in 0..total {
            let b = self.bits[i / 64] >> (i % 64) & 1 == 1;
            if b != state {
                write!(s, " {run}").expect("write to string");
                state = b;
                run = 0;
            }
            run += 1;
        }
        writeln!(s, " {run}").expect("write to string");
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VoxelCover {
    pub h: f64,
    pub origin: [f64; 3],
    pub dims: [usize; 3],
    pub voxel_count: usize,
    /// Occupied volume; a lower estimate of the midpoint set's measure.
    pub volume: f64,
    pub dilated_count: usize,
    /// Volume after adding the 26-neighbourhood; an upper cover for the
    /// set sampled at spacing below `h`.
    pub dilated_volume: f64,
    #[serde(skip)]
    pub grid: VoxelGrid,
}

fn bbox(pts: &[[f64; 3]]) -> ([f64; 3], [f64; 3]) {
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for p in pts {
        for k in 0..3 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    (lo, hi)
}

/// Marks every cell of side `h` containing some `(a+b)/2`. The grid is
/// anchored at the lower corner of the midpoint bounding box, snapped down
/// to a multiple of `h`.
pub fn midpoint_voxel_cover(a: &[[f64; 3]], b: &[[f64; 3]], h: f64) -> Result<VoxelCover, AnalysisError> {
    if a.is_empty() || b.is_empty() {
        return Err(AnalysisError::EmptyInput);
    }
    if !h.is_finite() || h <= 0.0 {
        return Err(AnalysisError::BadResolution(h));
    }
    let (alo, ahi) = bbox(a);
    let (blo, bhi) = bbox(b);
    let lo: [f64; 3] = [0, 1, 2].map(|k| (0.5 * (alo[k] + blo[k]) / h).floor() * h);
    let hi: [f64; 3] = [0, 1, 2].map(|k| 0.5 * (ahi[k] + bhi[k]));
    let dims = [0, 1, 2].map(|k| (((hi[k] - lo[k]) / h).floor() as usize + 1).max(1));
    if dims.iter().product::<usize>() > 1 << 31 {
        return Err(AnalysisError::BadResolution(h));
    }
    let cell = |p: &[f64; 3], q: &[f64; 3]| {
        [0, 1, 2].map(|k| ((((p[k] + q[k]) * 0.5 - lo[k]) / h).floor().max(0.0) as usize).min(dims[k] - 1))
    };
    let grid = a
        .par_chunks(64)
        .fold(
            || VoxelGrid::new(dims),
            |mut g, chunk| {
                for p in chunk {
                    for q in b {
                        g.set(cell(p, q));
                    }
                }
                g
            },
        )
        .reduce(|| VoxelGrid::new(dims), |x, y| x.union(&y));
    let dilated = grid.dilated();
    let h3 = h * h * h;
    Ok(VoxelCover {
        h,
        origin: lo,
        dims,
        voxel_count: grid.count(),
        volume: grid.count() as f64 * h3,
        dilated_count: dilated.count(),
        dilated_volume: dilated.count() as f64 * h3,
        grid,
    })
}

/// Exact version on `[0,1]³` with `m` cells per axis: cell `i` on an axis
/// is `[i/m, (i+1)/m)`, with the value `1` placed in the last cell.
pub fn midpoint_voxel_cover_exact(a: &[[Rat; 3]], b: &[[Rat; 3]], m: usize) -> Result<VoxelGrid, AnalysisError> {
    if a.is_empty() || b.is_empty() {
        return Err(AnalysisError::EmptyInput);
    }
    if m == 0 {
        return Err(AnalysisError::BadResolution(0.0));
    }
    let mr = Rat::from_integer(m.into());
    let two = Rat::from_integer(2.into());
    let mut grid = VoxelGrid::new([m; 3]);
    for p in a {
        for q in b {
            let mut c = [0usize; 3];
            for k in 0..3 {
                let x = (&p[k] + &q[k]) / &two * &mr;
                if x.is_negative() || x > mr {
                    return Err(AnalysisError::OutsideUnitCube);
                }
                let f = x.numer().div_floor(x.denom()).to_usize().expect("bounded");
                c[k] = f.min(m - 1);
            }
            grid.set(c);
        }
    }
    Ok(grid)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepFit {
    pub points: Vec<(f64, f64)>,
    /// Fit `V = intercept + slope·h`.
    pub intercept: f64,
    pub slope: f64,
    pub r_squared: f64,
}

/// Least-squares line through `(h, V)`.
pub fn linear_fit(points: &[(f64, f64)]) -> SweepFit {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let r_squared = if sxx > 0.0 && syy > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 };
    SweepFit { points: points.to_vec(), intercept, slope, r_squared }
}
