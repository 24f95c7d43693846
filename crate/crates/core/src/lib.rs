//! Exact finite-depth construction of a simple closed curve `Γ ⊆ [0,1]³`
//! whose midpoint set `½(Γ+Γ)` is the whole cube, and the covering estimate
//! showing that no rectifiable curve can do the same.
//!
//! Layers, bottom-up:
//!
//! * [`exact`], [`predicates`], [`geom`]: rational arithmetic and exact
//!   open-segment / closed-box predicates.
//! * [`param`]: the nested-segment scaffold on `[0, 1]`.
//! * [`cantor`]: ternary digits and midpoint splitting into `C³`.
//! * [`pattern`]: traversal patterns for the 8 corner cubes, their search,
//!   symmetry closure and tree validation.
//! * [`curve`]: evaluation of the curve, polylines, witnesses, length.
//! * [`analysis`]: greedy ε-partitions, covering bounds, voxel covers,
//!   Hausdorff distances, Minkowski averages.

pub mod analysis;
pub mod cantor;
pub mod curve;
pub mod exact;
pub mod geom;
pub mod param;
pub mod pattern;
pub mod predicates;

pub use exact::{Base15, Rat, Triadic};
pub use geom::{Box3, Corner, Link, Point3, Segment3};
pub use param::{Address, Classified, ParamInterval, ParamValue};
