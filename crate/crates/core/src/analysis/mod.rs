//! Minkowski-side checks: witness coverage of the midpoint set, voxel
//! estimates, Hausdorff distances, Minkowski averages, and the covering
//! bound for midpoint sets of rectifiable curves.

mod coverage;
mod curves;
mod hausdorff;
mod partition;
mod sf;
mod voxel;

use serde::Serialize;
use thiserror::Error;

pub use coverage::{coverage_certificate, voxel_center, CoverageReport};
pub use curves::{parse_points, CurveSpec, SampledCurve};
pub use hausdorff::{directed_hausdorff, hausdorff, NearestGrid, BRUTE_FORCE_POINTS};
pub use partition::{greedy_partition, measure_bound, MeasureBound, Path, Piece, PieceDecomposition, BISECTION_TOL};
pub use sf::{hull_samples, sf_sequence, SfReport, SfStep, DEDUP_GRID, HULL_SAMPLES, MAX_POINTS};
pub use voxel::{linear_fit, midpoint_voxel_cover, midpoint_voxel_cover_exact, SweepFit, VoxelCover, VoxelGrid};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("epsilon must be positive and finite, got {0}")]
    NonPositiveEpsilon(f64),
    #[error("path needs two distinct finite points")]
    DegeneratePath,
    #[error("point set is empty")]
    EmptyInput,
    #[error("resolution {0} is unusable")]
    BadResolution(f64),
    #[error("k must be at least 1, got {0}")]
    BadK(usize),
    #[error("{0} points exceed the limit of {1}")]
    TooManyPoints(usize, usize),
    #[error("a midpoint lies outside the unit cube")]
    OutsideUnitCube,
    #[error("unknown curve {0:?}; expected circle, square, helix, l-polyline or file:<path>")]
    UnknownCurve(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Parse(String),
}

/// A finite point set with a note on where it came from.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointSet3 {
    pub points: Vec<[f64; 3]>,
    pub provenance: String,
}

impl PointSet3 {
    pub fn new(points: Vec<[f64; 3]>, provenance: impl Into<String>) -> Result<Self, AnalysisError> {
        if points.is_empty() {
            return Err(AnalysisError::EmptyInput);
        }
        Ok(PointSet3 { points, provenance: provenance.into() })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}
