//! Traversal patterns for the 8 corner cubes of a node.
//!
//! A node is a cube `K̃_s` with an entry and an exit point. Its pattern
//! orders the 8 corner children into slots `0..8`, picks an entry and an
//! exit vertex in each child, and joins the exit of slot `j` to the entry of
//! slot `j+1` by an open link. A valid pattern has:
//!
//! * slot 0 entering at the node's entry and slot 7 leaving at its exit;
//! * distinct entry and exit vertices in every child;
//! * every link missing all 8 closed children;
//! * the 7 links pairwise disjoint.
//!
//! Patterns are stored in a node's integer frame `[0, 9]³`, where child `h`
//! occupies `[6h, 6h+3]` on each axis and its vertex `v` sits at `6h + 3v`.

mod search;
mod symmetry;
mod table;
mod tree;
mod validate;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{Box3, Corner, Link, Point3};

pub use search::{find_pattern, find_pattern_local, SearchOptions};
pub use symmetry::CubeSymmetry;
pub use table::{
    closing_link, pattern_closure, root_entry, root_exit, ClassRecord, ClauseTally, Digest, PatternFile, PatternRecord,
    PatternTable, RootRecord, FORMAT,
};
pub use tree::{NodeGeom, Tree};
pub use validate::{validate_tree, validate_tree_exhaustive, Clause, ValidationReport, Violation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PatternError {
    #[error("entry and exit coincide")]
    SameEntryExit,
    #[error("{0} point is not a vertex of any child cube")]
    NotAChildVertex(&'static str),
    #[error("entry and exit lie on the same child cube")]
    SameChild,
    #[error("a point is off every lattice the search can use")]
    OffLattice,
    #[error("no pattern exists in the searched family")]
    NotFound,
    #[error("no stored pattern for entry {0:?} and exit {1:?}")]
    MissingClass(Corner, Corner),
    #[error("malformed pattern file: {0}")]
    Format(String),
}

/// Orbit of an ordered pair of distinct cube vertices under the 48 cube
/// symmetries, determined by how many axes the two vertices differ on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairClass {
    Edge,
    FaceDiagonal,
    SpaceDiagonal,
}

impl PairClass {
    pub const ALL: [PairClass; 3] = [PairClass::Edge, PairClass::FaceDiagonal, PairClass::SpaceDiagonal];

    pub fn of(entry: Corner, exit: Corner) -> Option<PairClass> {
        match entry.hamming(exit) {
            1 => Some(PairClass::Edge),
            2 => Some(PairClass::FaceDiagonal),
            3 => Some(PairClass::SpaceDiagonal),
            _ => None,
        }
    }

    /// Representative `(entry, exit)`: the origin and a vertex along
    /// `x`, `x,y` or `x,y,z`.
    pub fn canonical(self) -> (Corner, Corner) {
        let exit = match self {
            PairClass::Edge => [1, 0, 0],
            PairClass::FaceDiagonal => [1, 1, 0],
            PairClass::SpaceDiagonal => [1, 1, 1],
        };
        (Corner::ALL[0], Corner::from_bits(exit).expect("binary"))
    }

    pub fn name(self) -> &'static str {
        match self {
            PairClass::Edge => "edge",
            PairClass::FaceDiagonal => "face_diagonal",
            PairClass::SpaceDiagonal => "space_diagonal",
        }
    }
}

impl fmt::Display for PairClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Side of a node's integer frame.
pub const FRAME: i64 = 9;

/// Vertex `v` of child `h`, in a frame scaled by `scale`.
pub fn child_vertex(h: Corner, v: Corner, scale: i64) -> [i64; 3] {
    let (hb, vb) = (h.bits(), v.bits());
    [0, 1, 2].map(|k| scale * (6 * hb[k] as i64 + 3 * vb[k] as i64))
}

/// Closed box of child `h` as `(lo, hi)`, in a frame scaled by `scale`.
pub fn child_box(h: Corner, scale: i64) -> ([i64; 3], [i64; 3]) {
    let hb = h.bits();
    let lo = [0, 1, 2].map(|k| scale * 6 * hb[k] as i64);
    (lo, lo.map(|x| x + 3 * scale))
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Pattern {
    /// Child corner visited in each slot.
    pub order: [Corner; 8],
    /// Entry vertex selector of each slot's child.
    pub entry: [Corner; 8],
    /// Exit vertex selector of each slot's child.
    pub exit: [Corner; 8],
    /// Interior vertex of link `j` in the `[0, 9]³` frame; `None` for a
    /// straight segment.
    pub waypoints: [Option<[i64; 3]>; 7],
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pattern[")?;
        for i in 0..8 {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{:?}:{:?}->{:?}", self.order[i], self.entry[i], self.exit[i])?;
        }
        if self.uses_chains() {
            write!(f, " via {:?}", self.waypoints)?;
        }
        write!(f, "]")
    }
}

impl Pattern {
    pub fn uses_chains(&self) -> bool {
        self.waypoints.iter().any(Option::is_some)
    }

    /// The 7 links as integer chains in a frame scaled by `scale`.
    pub fn local_links(&self, scale: i64) -> Vec<Vec<[i64; 3]>> {
        (0..7)
            .map(|j| {
                let a = child_vertex(self.order[j], self.exit[j], scale);
                let b = child_vertex(self.order[j + 1], self.entry[j + 1], scale);
                match self.waypoints[j] {
                    Some(w) => vec![a, w.map(|x| x * scale), b],
                    None => vec![a, b],
                }
            })
            .collect()
    }

    /// The 7 links placed in `cube`, exactly.
    pub fn links_in(&self, cube: &Box3) -> Vec<Link> {
        self.local_links(1)
            .into_iter()
            .map(|pts| {
                let pts: Vec<Point3> = pts.into_iter().map(|p| cube.local_point(p)).collect();
                Link::new(pts).expect("link endpoints lie in distinct children")
            })
            .collect()
    }

    /// Image under a cube symmetry.
    pub fn transformed(&self, g: &CubeSymmetry) -> Pattern {
        Pattern {
            order: self.order.map(|c| g.apply_corner(c)),
            entry: self.entry.map(|c| g.apply_corner(c)),
            exit: self.exit.map(|c| g.apply_corner(c)),
            waypoints: self.waypoints.map(|w| w.map(|p| g.apply_point(p, FRAME))),
        }
    }

    /// Structural sanity needed before links can be formed: the order is a
    /// permutation and every waypoint is a frame point distinct from its
    /// link's endpoints.
    pub fn well_formed(&self) -> Result<(), PatternError> {
        let mut seen = [false; 8];
        for h in self.order {
            seen[h.index() as usize] = true;
        }
        if !seen.iter().all(|&b| b) {
            return Err(PatternError::Format(format!("order {:?} is not a permutation", self.order)));
        }
        for (j, w) in self.waypoints.iter().enumerate() {
            let Some(w) = w else { continue };
            let a = child_vertex(self.order[j], self.exit[j], 1);
            let b = child_vertex(self.order[j + 1], self.entry[j + 1], 1);
            if w.iter().any(|&c| !(0..=FRAME).contains(&c)) || *w == a || *w == b {
                return Err(PatternError::Format(format!("waypoint {w:?} of link {j} is unusable")));
            }
        }
        Ok(())
    }

    /// Pair class of each slot's child.
    pub fn child_classes(&self) -> [Option<PairClass>; 8] {
        [0, 1, 2, 3, 4, 5, 6, 7].map(|i| PairClass::of(self.entry[i], self.exit[i]))
    }
}
