//! Exact 3D geometry on triadic lattices.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{Rat, Triadic};
use crate::predicates::{self, Vec3};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("segment endpoints coincide at {0}")]
    DegenerateSegment(Point3),
    #[error("a chain needs at least two vertices")]
    ShortChain,
    #[error("consecutive chain vertices coincide at {0}")]
    RepeatedChainVertex(Point3),
}

/// Point with triadic coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Point3(pub [Triadic; 3]);

impl Point3 {
    pub fn new(x: Triadic, y: Triadic, z: Triadic) -> Self {
        Point3([x, y, z])
    }

    pub fn origin() -> Self {
        Point3([Triadic::zero(), Triadic::zero(), Triadic::zero()])
    }

    /// `(x, y, z) / 3^exp` from integers.
    pub fn from_ints(coords: [i64; 3], exp: u32) -> Self {
        Point3(coords.map(|c| Triadic::new(c, exp)))
    }

    pub fn coord(&self, axis: usize) -> &Triadic {
        &self.0[axis]
    }

    pub fn add(&self, other: &Point3) -> Point3 {
        Point3([0, 1, 2].map(|k| &self.0[k] + &other.0[k]))
    }

    pub fn sub(&self, other: &Point3) -> Point3 {
        Point3([0, 1, 2].map(|k| &self.0[k] - &other.0[k]))
    }

    /// Largest reduced denominator exponent among the coordinates.
    pub fn max_exp(&self) -> u32 {
        self.0.iter().map(Triadic::exp).max().unwrap_or(0)
    }

    /// Integer coordinates at denominator `3^exp`.
    pub fn scaled(&self, exp: u32) -> Vec3<BigInt> {
        [0, 1, 2].map(|k| self.0[k].scaled_numer(exp))
    }

    pub fn dist_sq(&self, other: &Point3) -> Triadic {
        let d = self.sub(other);
        d.0.iter().fold(Triadic::zero(), |acc, c| &acc + &(c * c))
    }

    pub fn to_rational(&self) -> [Rat; 3] {
        [0, 1, 2].map(|k| self.0[k].to_rational())
    }

    pub fn to_f64(&self) -> [f64; 3] {
        [0, 1, 2].map(|k| self.0[k].to_f64())
    }
}

impl fmt::Debug for Point3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
    }
}

impl fmt::Display for Point3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A corner selector `h ∈ {0,1}³`, indexed `4·h0 + 2·h1 + h2` so that index
/// order is lexicographic order on triples.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Corner(u8);

impl Corner {
    pub const ALL: [Corner; 8] =
        [Corner(0), Corner(1), Corner(2), Corner(3), Corner(4), Corner(5), Corner(6), Corner(7)];

    pub fn from_index(i: u8) -> Option<Corner> {
        (i < 8).then_some(Corner(i))
    }

    pub fn from_bits(h: [u8; 3]) -> Option<Corner> {
        if h.iter().any(|&b| b > 1) {
            return None;
        }
        Some(Corner(h[0] * 4 + h[1] * 2 + h[2]))
    }

    pub fn index(self) -> u8 {
        self.0
    }

    pub fn bits(self) -> [u8; 3] {
        [(self.0 >> 2) & 1, (self.0 >> 1) & 1, self.0 & 1]
    }

    /// Number of axes on which two corners differ.
    pub fn hamming(self, other: Corner) -> u32 {
        (self.0 ^ other.0).count_ones()
    }
}

impl fmt::Debug for Corner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.bits();
        write!(f, "({a},{b},{c})")
    }
}

impl Serialize for Corner {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.bits().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Corner {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let bits = <[u8; 3]>::deserialize(d)?;
        Corner::from_bits(bits)
            .ok_or_else(|| serde::de::Error::custom(format!("corner bits must be 0/1, got {bits:?}")))
    }
}

/// Closed axis-aligned cube `corner + [0, 3^-depth]³`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Box3 {
    corner: Point3,
    depth: u32,
}

impl Box3 {
    pub fn unit() -> Self {
        Box3 { corner: Point3::origin(), depth: 0 }
    }

    /// Panics if the corner is not on the `3^-depth` lattice.
    pub fn new(corner: Point3, depth: u32) -> Self {
        assert!(corner.max_exp() <= depth, "cube corner {corner} is off the 3^-{depth} lattice");
        Box3 { corner, depth }
    }

    pub fn corner(&self) -> &Point3 {
        &self.corner
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn side(&self) -> Triadic {
        Triadic::unit(self.depth)
    }

    pub fn far_corner(&self) -> Point3 {
        let s = self.side();
        Point3(self.corner.0.clone().map(|c| &c + &s))
    }

    pub fn vertex(&self, v: Corner) -> Point3 {
        let s = self.side();
        let b = v.bits();
        Point3([0, 1, 2].map(|k| if b[k] == 1 { &self.corner.0[k] + &s } else { self.corner.0[k].clone() }))
    }

    /// The corner cube selected by `h` among the 27 thirds of this cube.
    pub fn child(&self, h: Corner) -> Box3 {
        let two_thirds = Triadic::new(2, self.depth + 1);
        let b = h.bits();
        let corner =
            Point3(
                [0, 1, 2].map(|k| if b[k] == 1 { &self.corner.0[k] + &two_thirds } else { self.corner.0[k].clone() }),
            );
        Box3 { corner, depth: self.depth + 1 }
    }

    /// The 8 corner cubes, indexed by [`Corner::index`].
    pub fn subdivide(&self) -> [Box3; 8] {
        Corner::ALL.map(|h| self.child(h))
    }

    /// The vertex of this cube equal to `p`, if any.
    pub fn vertex_of(&self, p: &Point3) -> Option<Corner> {
        Corner::ALL.into_iter().find(|&v| self.vertex(v) == *p)
    }

    /// Point at local lattice coordinates `local / 9` of this cube (so the
    /// local frame is `[0, 9]³`, matching the 3^-(depth+2) grid).
    pub fn local_point(&self, local: [i64; 3]) -> Point3 {
        let step = self.depth + 2;
        Point3([0, 1, 2].map(|k| &self.corner.0[k] + &Triadic::new(local[k], step)))
    }

    /// Inverse of [`Box3::local_point`] at refinement `3^-refine` of the
    /// local frame; `None` if `p` is off that lattice.
    pub fn to_local(&self, p: &Point3, refine: u32) -> Option<[i128; 3]> {
        let exp = self.depth + 2 + refine;
        if p.max_exp() > exp {
            return None;
        }
        let d = p.sub(&self.corner);
        let mut out = [0i128; 3];
        for (o, c) in out.iter_mut().zip(&d.0) {
            *o = i128::try_from(c.scaled_numer(exp)).ok()?;
        }
        Some(out)
    }

    pub fn contains_point(&self, p: &Point3) -> bool {
        let e = self.depth.max(p.max_exp());
        predicates::point_in_box(&p.scaled(e), &self.corner.scaled(e), &self.far_corner().scaled(e))
    }

    pub fn contains_box(&self, other: &Box3) -> bool {
        let e = self.depth.max(other.depth);
        predicates::box_contains_box(
            &self.corner.scaled(e),
            &self.far_corner().scaled(e),
            &other.corner.scaled(e),
            &other.far_corner().scaled(e),
        )
    }

    pub fn disjoint(&self, other: &Box3) -> bool {
        let e = self.depth.max(other.depth);
        predicates::boxes_disjoint(
            &self.corner.scaled(e),
            &self.far_corner().scaled(e),
            &other.corner.scaled(e),
            &other.far_corner().scaled(e),
        )
    }

    /// Euclidean diameter squared, `3·9^-depth`.
    pub fn diameter_sq(&self) -> Triadic {
        Triadic::new(3, 2 * self.depth)
    }
}

impl fmt::Debug for Box3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Box3[{} + 3^-{}]", self.corner, self.depth)
    }
}

/// Open segment `(a, b)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Segment3 {
    a: Point3,
    b: Point3,
}

impl Segment3 {
    pub fn new(a: Point3, b: Point3) -> Result<Self, GeomError> {
        if a == b {
            return Err(GeomError::DegenerateSegment(a));
        }
        Ok(Segment3 { a, b })
    }

    pub fn a(&self) -> &Point3 {
        &self.a
    }

    pub fn b(&self) -> &Point3 {
        &self.b
    }

    pub fn length_sq(&self) -> Triadic {
        self.a.dist_sq(&self.b)
    }
}

/// Open polygonal chain: endpoints excluded, interior vertices included. A
/// two-vertex link is a plain open segment.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Link {
    points: Vec<Point3>,
}

impl Link {
    pub fn new(points: Vec<Point3>) -> Result<Self, GeomError> {
        if points.len() < 2 {
            return Err(GeomError::ShortChain);
        }
        if let Some(w) = points.windows(2).find(|w| w[0] == w[1]) {
            return Err(GeomError::RepeatedChainVertex(w[0].clone()));
        }
        Ok(Link { points })
    }

    pub fn points(&self) -> &[Point3] {
        &self.points
    }

    pub fn start(&self) -> &Point3 {
        &self.points[0]
    }

    pub fn end(&self) -> &Point3 {
        &self.points[self.points.len() - 1]
    }

    pub fn is_straight(&self) -> bool {
        self.points.len() == 2
    }

    fn max_exp(&self) -> u32 {
        self.points.iter().map(Point3::max_exp).max().unwrap_or(0)
    }

    fn scaled(&self, exp: u32) -> Vec<Vec3<BigInt>> {
        self.points.iter().map(|p| p.scaled(exp)).collect()
    }
}

impl From<Segment3> for Link {
    fn from(s: Segment3) -> Self {
        Link { points: vec![s.a, s.b] }
    }
}

/// Open segment misses closed box.
pub fn segment_box_disjoint(seg: &Segment3, cube: &Box3) -> bool {
    let e = seg.a.max_exp().max(seg.b.max_exp()).max(cube.depth);
    predicates::segment_box_disjoint(
        &seg.a.scaled(e),
        &seg.b.scaled(e),
        &cube.corner.scaled(e),
        &cube.far_corner().scaled(e),
    )
}

/// Open segments share no point.
pub fn segments_disjoint(s1: &Segment3, s2: &Segment3) -> bool {
    let e = [&s1.a, &s1.b, &s2.a, &s2.b].iter().map(|p| p.max_exp()).max().unwrap_or(0);
    predicates::open_segments_disjoint(&s1.a.scaled(e), &s1.b.scaled(e), &s2.a.scaled(e), &s2.b.scaled(e))
}

pub fn link_box_disjoint(link: &Link, cube: &Box3) -> bool {
    let e = link.max_exp().max(cube.depth);
    predicates::chain_box_disjoint(&link.scaled(e), &cube.corner.scaled(e), &cube.far_corner().scaled(e))
}

pub fn links_disjoint(l1: &Link, l2: &Link) -> bool {
    let e = l1.max_exp().max(l2.max_exp());
    predicates::chains_disjoint(&l1.scaled(e), &l2.scaled(e))
}

/// Every vertex of the link lies in the closed cube (so the whole chain
/// does, by convexity).
pub fn link_in_box(link: &Link, cube: &Box3) -> bool {
    link.points.iter().all(|p| cube.contains_point(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64, z: i64, exp: u32) -> Point3 {
        Point3::from_ints([x, y, z], exp)
    }

    #[test]
    fn subdivide_unit_cube() {
        let kids = Box3::unit().subdivide();
        assert_eq!(kids[0].corner(), &Point3::origin());
        assert_eq!(kids[0].far_corner(), p(1, 1, 1, 1));
        let h100 = Corner::from_bits([1, 0, 0]).unwrap();
        let c = &kids[h100.index() as usize];
        assert_eq!(c.corner(), &p(2, 0, 0, 1));
        assert_eq!(c.far_corner(), p(3, 1, 1, 1));
    }

    #[test]
    fn corner_children_are_pairwise_disjoint_with_third_gaps() {
        let parent = Box3::new(p(2, 0, 6, 2), 2);
        let kids = parent.subdivide();
        for i in 0..8 {
            assert!(parent.contains_box(&kids[i]));
            for j in (i + 1)..8 {
                assert!(kids[i].disjoint(&kids[j]));
                // l∞ gap is at least one child side
                let gap = (0..3)
                    .map(|k| {
                        let lo = kids[i].corner().coord(k).max(kids[j].corner().coord(k)).clone();
                        let hi = kids[i].far_corner().coord(k).clone().min(kids[j].far_corner().coord(k).clone());
                        &lo - &hi
                    })
                    .max()
                    .unwrap();
                assert!(gap >= Triadic::unit(3));
            }
        }
    }

    #[test]
    fn segment_box_examples() {
        let cube = Box3::unit().child(Corner::from_index(0).unwrap());
        let s = Segment3::new(p(1, 0, 0, 1), p(2, 0, 0, 1)).unwrap();
        assert!(segment_box_disjoint(&s, &cube));
        let diag = Segment3::new(Point3::origin(), p(1, 1, 1, 0)).unwrap();
        assert!(!segment_box_disjoint(&diag, &cube));
        let far = Box3::unit().child(Corner::from_bits([1, 0, 0]).unwrap());
        assert!(segment_box_disjoint(&s, &far));
    }

    #[test]
    fn degenerate_segment_rejected() {
        assert!(Segment3::new(p(1, 0, 0, 1), p(3, 0, 0, 2)).is_err());
    }

    #[test]
    fn local_frame_roundtrip() {
        let cube = Box3::new(p(2, 0, 0, 1), 1);
        let q = cube.local_point([9, 3, 0]);
        // (2/3, 0, 0) + (9, 3, 0)/27
        assert_eq!(q, p(9, 1, 0, 2));
        assert_eq!(cube.to_local(&q, 0), Some([9, 3, 0]));
    }
}
