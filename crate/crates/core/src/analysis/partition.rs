//! Greedy ε-partition of a path and the covering bound it yields for the
//! midpoint set.

use serde::Serialize;

use super::AnalysisError;
use crate::exact::{rat_from_f64, rat_int, rat_to_f64};

/// A polyline parametrized by arc length.
#[derive(Clone, Debug, PartialEq)]
pub struct Path {
    pts: Vec<[f64; 3]>,
    cum: Vec<f64>,
}

fn dist(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

impl Path {
    /// A closed curve is passed with its first point repeated at the end.
    pub fn new(pts: Vec<[f64; 3]>) -> Result<Self, AnalysisError> {
        if pts.len() < 2 || pts.iter().any(|p| p.iter().any(|c| !c.is_finite())) {
            return Err(AnalysisError::DegeneratePath);
        }
        let mut cum = Vec::with_capacity(pts.len());
        cum.push(0.0);
        for w in pts.windows(2) {
            cum.push(cum.last().unwrap() + dist(&w[0], &w[1]));
        }
        if *cum.last().unwrap() == 0.0 {
            return Err(AnalysisError::DegeneratePath);
        }
        Ok(Path { pts, cum })
    }

    pub fn closed(mut pts: Vec<[f64; 3]>) -> Result<Self, AnalysisError> {
        if let Some(&first) = pts.first() {
            pts.push(first);
        }
        Path::new(pts)
    }

    pub fn length(&self) -> f64 {
        *self.cum.last().unwrap()
    }

    pub fn vertices(&self) -> &[[f64; 3]] {
        &self.pts
    }

    /// Point at arc length `s` on segment `seg` (`cum[seg] ≤ s ≤ cum[seg+1]`).
    fn point_on(&self, seg: usize, s: f64) -> [f64; 3] {
        let (a, b) = (&self.pts[seg], &self.pts[seg + 1]);
        let len = self.cum[seg + 1] - self.cum[seg];
        let u = if len > 0.0 { ((s - self.cum[seg]) / len).clamp(0.0, 1.0) } else { 0.0 };
        [0, 1, 2].map(|k| a[k] + u * (b[k] - a[k]))
    }

    pub fn point_at(&self, s: f64) -> [f64; 3] {
        let s = s.clamp(0.0, self.length());
        let seg = match self.cum.partition_point(|&c| c <= s) {
            0 => 0,
            i => (i - 1).min(self.pts.len() - 2),
        };
        self.point_on(seg, s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Piece {
    pub start: f64,
    pub end: f64,
    pub diameter: f64,
    pub bbox_lo: [f64; 3],
    pub bbox_hi: [f64; 3],
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PieceDecomposition {
    pub epsilon: f64,
    pub breakpoints: Vec<f64>,
    pub pieces: Vec<Piece>,
    pub length: f64,
    /// Largest `|diam − ε|` over the pieces before the last.
    pub diameter_error: f64,
}

impl PieceDecomposition {
    /// The index `n` of the last piece; there are `n + 1` pieces.
    pub fn n(&self) -> usize {
        self.pieces.len() - 1
    }
}

struct Growing {
    pts: Vec<[f64; 3]>,
    diam: f64,
}

impl Growing {
    fn reach(&self, q: &[f64; 3]) -> f64 {
        self.pts.iter().fold(self.diam, |m, p| m.max(dist(p, q)))
    }

    fn push(&mut self, q: [f64; 3]) {
        self.diam = self.reach(&q);
        self.pts.push(q);
    }

    fn bbox(&self) -> ([f64; 3], [f64; 3]) {
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for p in &self.pts {
            for k in 0..3 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        (lo, hi)
    }
}

/// Bisection stops at this fraction of the path length.
pub const BISECTION_TOL: f64 = 1e-12;

/// `t_{i+1} = sup{u : diam(path[t_i, u]) < ε}`, repeated until the end.
/// The diameter of a sub-path is the largest distance among its interior
/// vertices and its two cut points; it is nondecreasing in `u`, so each
/// cut is located by bisection on the segment where it first reaches `ε`.
pub fn greedy_partition(path: &Path, epsilon: f64) -> Result<PieceDecomposition, AnalysisError> {
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(AnalysisError::NonPositiveEpsilon(epsilon));
    }
    let len = path.length();
    let tol = BISECTION_TOL * len.max(1.0);
    let mut breakpoints = vec![0.0];
    let mut pieces = Vec::new();
    let mut start = 0.0;
    let mut seg = 0;
    loop {
        let mut cur = Growing { pts: vec![path.point_at(start)], diam: 0.0 };
        let mut cut = None;
        // walk vertices after `start`
        let mut k = seg + 1;
        while k < path.pts.len() {
            let v = path.pts[k];
            if path.cum[k] > start && cur.reach(&v) >= epsilon {
                // crossing on the segment (k-1, k), after `start`
                let mut lo = start.max(path.cum[k - 1]);
                let mut hi = path.cum[k];
                while hi - lo > tol {
                    let mid = 0.5 * (lo + hi);
                    if cur.reach(&path.point_on(k - 1, mid)) < epsilon {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                // a cut must advance even when the segment is below tolerance
                cut = Some((k - 1, if lo > start { lo } else { hi }));
                break;
            }
            if path.cum[k] > start {
                cur.push(v);
            }
            k += 1;
        }
        match cut {
            Some((s, u)) => {
                cur.push(path.point_on(s, u));
                let (bbox_lo, bbox_hi) = cur.bbox();
                pieces.push(Piece { start, end: u, diameter: cur.diam, bbox_lo, bbox_hi });
                breakpoints.push(u);
                start = u;
                seg = s;
            }
            None => {
                let (bbox_lo, bbox_hi) = cur.bbox();
                pieces.push(Piece { start, end: len, diameter: cur.diam, bbox_lo, bbox_hi });
                if *breakpoints.last().unwrap() < len {
                    breakpoints.push(len);
                }
                break;
            }
        }
    }
    let diameter_error = pieces[..pieces.len() - 1].iter().map(|p| (p.diameter - epsilon).abs()).fold(0.0, f64::max);
    Ok(PieceDecomposition { epsilon, breakpoints, pieces, length: len, diameter_error })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasureBound {
    pub epsilon: f64,
    pub n_pieces: usize,
    pub length: f64,
    /// `64ε³(n+1)²`, rounded once from the exact value at the given `ε`.
    pub cube_bound: f64,
    /// `Σ_{i,j} vol(bbox_i + bbox_j) / 8`.
    pub refined: f64,
    /// `64ε(L² + 2εL + ε²)`.
    pub final_form: f64,
    /// `n + 1 ≤ L/ε + 1`.
    pub count_bound_holds: bool,
    pub refined_within_cube_bound: bool,
    pub cube_bound_within_final: bool,
    /// Cubes of side `2ε` already contain each `L_i + L_j`; `cube_bound`
    /// uses side `4ε`.
    pub slack_note: String,
}

/// All three covering estimates for a decomposition.
pub fn measure_bound(dec: &PieceDecomposition) -> MeasureBound {
    let eps = dec.epsilon;
    let n1 = dec.pieces.len();
    let e = rat_from_f64(eps).expect("finite epsilon");
    let exact = rat_int(64) * &e * &e * &e * rat_int((n1 * n1) as i64);
    let cube_bound = rat_to_f64(&exact);
    let mut refined = 0.0;
    for a in &dec.pieces {
        for b in &dec.pieces {
            let mut v = 1.0;
            for k in 0..3 {
                v *= (a.bbox_hi[k] - a.bbox_lo[k]) + (b.bbox_hi[k] - b.bbox_lo[k]);
            }
            refined += v;
        }
    }
    refined /= 8.0;
    let l = dec.length;
    let final_form = 64.0 * eps * (l * l + 2.0 * eps * l + eps * eps);
    let slack = 1e-9 * cube_bound.max(1.0);
    MeasureBound {
        epsilon: eps,
        n_pieces: n1,
        length: l,
        cube_bound,
        refined,
        final_form,
        count_bound_holds: (n1 as f64) <= l / eps + 1.0 + 1e-9,
        refined_within_cube_bound: refined <= cube_bound / 8.0 + slack,
        cube_bound_within_final: cube_bound <= final_form + slack,
        slack_note: "each L_i + L_j fits in a cube of side 2ε; the estimate uses side 4ε, a factor 8 of slack"
            .to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_segment_steps_by_epsilon() {
        let p = Path::new(vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0]]).unwrap();
        let d = greedy_partition(&p, 0.3).unwrap();
        let want = [0.0, 0.3, 0.6, 0.9, 1.0];
        assert_eq!(d.breakpoints.len(), want.len());
        for (a, b) in d.breakpoints.iter().zip(want) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
        assert_eq!(d.n(), 3);
        let m = measure_bound(&d);
        assert!((m.cube_bound - 27.648).abs() < 1e-12);
    }

    #[test]
    fn large_epsilon_gives_one_piece() {
        let p = Path::new(vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 1.0, 0.0]]).unwrap();
        let diam = 2f64.sqrt();
        let d = greedy_partition(&p, diam + 1e-9).unwrap();
        assert_eq!(d.n(), 0);
        let m = measure_bound(&d);
        assert_eq!(m.cube_bound, rat_to_f64(&(rat_int(64) * rat_from_f64(diam + 1e-9).unwrap().pow(3))));
    }

    #[test]
    fn rejects_bad_inputs() {
        let p = Path::new(vec![[0.0; 3], [1.0, 0.0, 0.0]]).unwrap();
        assert!(greedy_partition(&p, 0.0).is_err());
        assert!(greedy_partition(&p, -1.0).is_err());
        assert!(Path::new(vec![[0.0; 3]]).is_err());
        assert!(Path::new(vec![[0.0; 3], [0.0; 3]]).is_err());
    }
}
