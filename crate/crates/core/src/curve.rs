//! The curve itself: evaluation, finite polylines, midpoint witnesses,
//! length growth and a sampled modulus of continuity.
//!
//! The circle is the fractal interval `t ∈ [0, 1]` followed by a return
//! arc, normalized to `u ∈ (0, 1)`, that runs straight from the root exit
//! `(2/3,0,0)` back to the root entry `(1/3,0,0)`. On a gap `I_s(j)` the
//! curve runs along link `j` of node `s`; at a limit point it is the
//! intersection of the nested cubes, approximated by the entry vertex of
//! the depth-`N` cube.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::cantor::{cantor3_split, CantorError, CornerWord};
use crate::exact::{rat, rat_int, rat_pow_inv, rat_to_f64, Base15, Rat};
use crate::geom::{Link, Point3};
use crate::param::{self, classify_param, Address, Classified, Pad, ParamError};
use crate::pattern::{root_entry, root_exit, PatternError, PatternTable, Tree};
use crate::predicates::{open_segments_disjoint, point_on_open_segment, Vec3};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error(transparent)]
    Cantor(#[from] CantorError),
    #[error("return position {0} is not strictly between 0 and 1")]
    ReturnOutOfRange(Rat),
    #[error("modulus check needs depth at least 1 and at least one sample per segment")]
    BadSampling,
}

/// A position on the circle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CirclePos {
    /// Fractal parameter `t ∈ [0, 1]`.
    Fractal(Rat),
    /// Normalized position `u ∈ (0, 1)` along the return arc.
    Return(Rat),
}

impl CirclePos {
    /// Angle on `[0, 2π)`: the fractal part covers `[0, 1]`, the return arc
    /// `(1, 2π)`. Reporting only.
    pub fn angle(&self) -> f64 {
        match self {
            CirclePos::Fractal(t) => rat_to_f64(t),
            CirclePos::Return(u) => 1.0 + rat_to_f64(u) * (2.0 * PI - 1.0),
        }
    }
}

/// Circle metric `min(|x−y|, 2π−|x−y|)` on angles.
pub fn rho_s(a: &CirclePos, b: &CirclePos) -> f64 {
    let d = (a.angle() - b.angle()).abs();
    d.min(2.0 * PI - d)
}

/// A curve value with a bound on its distance to the true value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvePoint {
    pub point: [Rat; 3],
    /// Squared Euclidean error bound.
    pub error_sq: Rat,
}

fn exact(p: &Point3) -> CurvePoint {
    CurvePoint { point: p.to_rational(), error_sq: Rat::zero() }
}

fn lerp(a: &[Rat; 3], b: &[Rat; 3], u: &Rat) -> [Rat; 3] {
    [0, 1, 2].map(|k| &a[k] + u * (&b[k] - &a[k]))
}

/// Position `u ∈ [0,1]` along a link. A two-leg chain spends the first
/// third of its parameter on the first leg.
pub fn link_point(link: &Link, u: &Rat) -> [Rat; 3] {
    let pts: Vec<[Rat; 3]> = link.points().iter().map(Point3::to_rational).collect();
    if pts.len() == 2 {
        return lerp(&pts[0], &pts[1], u);
    }
    let third = rat(1, 3);
    if *u <= third {
        lerp(&pts[0], &pts[1], &(u * rat_int(3)))
    } else {
        lerp(&pts[1], &pts[2], &((u - third) * rat(3, 2)))
    }
}

pub fn dist_sq(a: &[Rat; 3], b: &[Rat; 3]) -> Rat {
    (0..3).fold(Rat::zero(), |acc, k| {
        let d = &a[k] - &b[k];
        acc + &d * &d
    })
}

/// Curve value at depth `depth`. Gap and return positions are exact;
/// a limit position is the entry vertex of its depth-`depth` cube, exact
/// when the parameter is that cube's own entry or exit parameter.
pub fn eval(table: &PatternTable, pos: &CirclePos, depth: usize) -> Result<CurvePoint, CurveError> {
    match pos {
        CirclePos::Return(u) => {
            if !u.is_positive() || *u >= Rat::one() {
                return Err(CurveError::ReturnOutOfRange(u.clone()));
            }
            Ok(CurvePoint {
                point: lerp(&root_exit().to_rational(), &root_entry().to_rational(), u),
                error_sq: Rat::zero(),
            })
        }
        CirclePos::Fractal(t) => {
            let tree = table.tree();
            match classify_param(t, depth)? {
                Classified::Gap { node, gap, local } => {
                    let n = tree.node(&node)?;
                    let link = &tree.links(&n)?[gap as usize];
                    Ok(CurvePoint { point: link_point(link, &local), error_sq: Rat::zero() })
                }
                Classified::LimitPrefix(s) => {
                    let n = tree.node(&s)?;
                    let (lo, hi) = param::endpoints(&s);
                    if *t == lo.to_rational() {
                        Ok(exact(&n.entry))
                    } else if *t == hi.to_rational() {
                        Ok(exact(&n.exit))
                    } else {
                        Ok(CurvePoint { point: n.entry.to_rational(), error_sq: n.cube.diameter_sq().to_rational() })
                    }
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyVertex {
    /// Fractal parameter of the vertex, on the radix-15 lattice.
    pub t: Base15,
    pub point: Point3,
}

/// Ordered exact vertices; when `closed`, an edge joins the last vertex
/// back to the first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyCurve {
    pub vertices: Vec<PolyVertex>,
    pub closed: bool,
}

impl PolyCurve {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = &Point3> {
        self.vertices.iter().map(|v| &v.point)
    }

    pub fn points_f64(&self) -> Vec<[f64; 3]> {
        self.points().map(Point3::to_f64).collect()
    }

    /// Edges as index pairs, including the closing edge.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.vertices.len();
        let mut e: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        if self.closed && n > 1 {
            e.push((n - 1, 0));
        }
        e
    }

    /// Sum of edge lengths; each squared length is exact before the root.
    pub fn length(&self) -> f64 {
        self.edges().iter().map(|&(a, b)| self.vertices[a].point.dist_sq(&self.vertices[b].point).to_f64().sqrt()).sum()
    }

    /// `t_numerator,t_denom_exp15,x,y,z` rows after a header.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t_numerator,t_denom_exp15,x,y,z\n");
        for v in &self.vertices {
            let [x, y, z] = v.point.to_f64();
            writeln!(s, "{},{},{x:?},{y:?},{z:?}", v.t.numer(), v.t.exp()).expect("write to string");
        }
        s
    }

    /// `v` records and a single `l` record; a closed curve repeats index 1.
    pub fn to_obj(&self) -> String {
        let mut s = String::new();
        for v in &self.vertices {
            let [x, y, z] = v.point.to_f64();
            writeln!(s, "v {x:?} {y:?} {z:?}").expect("write to string");
        }
        s.push('l');
        for i in 1..=self.vertices.len() {
            write!(s, " {i}").expect("write to string");
        }
        if self.closed && !self.vertices.is_empty() {
            s.push_str(" 1");
        }
        s.push('\n');
        s
    }
}

/// Chords `ĩn_s → õut_s` of the depth-`n` cubes in parameter order, with
/// link waypoints between them. The return segment is the closing edge.
pub fn build_polyline(table: &PatternTable, n: usize) -> Result<PolyCurve, CurveError> {
    let tree = table.tree();
    let mut vertices = Vec::with_capacity(2 * 8usize.pow(n as u32));
    emit(&tree, &tree.root(), n, &mut vertices)?;
    Ok(PolyCurve { vertices, closed: true })
}

fn emit(
    tree: &Tree<'_>,
    node: &crate::pattern::NodeGeom,
    left: usize,
    out: &mut Vec<PolyVertex>,
) -> Result<(), CurveError> {
    let (lo, hi) = param::endpoints(&node.address);
    if left == 0 {
        out.push(PolyVertex { t: lo.value().clone(), point: node.entry.clone() });
        out.push(PolyVertex { t: hi.value().clone(), point: node.exit.clone() });
        return Ok(());
    }
    let pattern = tree.pattern(node)?;
    let links = pattern.links_in(&node.cube);
    for (i, child) in tree.children(node)?.iter().enumerate() {
        emit(tree, child, left - 1, out)?;
        if i < 7 && !links[i].is_straight() {
            let gap = param::gap_interval(&node.address, i as u8)?;
            // the waypoint sits a third of the way through the gap
            let t = &gap.lo.value().clone() + &gap.length().mul_int(5).shr(1);
            out.push(PolyVertex { t, point: links[i].points()[1].clone() });
        }
    }
    Ok(())
}

/// Exact check that a closed polyline is simple: non-adjacent edges are
/// disjoint as closed segments, adjacent edges meet only at their shared
/// vertex. Quadratic; meant for small depths.
pub fn polyline_is_simple(poly: &PolyCurve) -> bool {
    let exp = poly.points().map(Point3::max_exp).max().unwrap_or(0);
    let pts: Vec<Vec3<BigInt>> = poly.points().map(|p| p.scaled(exp)).collect();
    let edges = poly.edges();
    let n = edges.len();
    let on_closed =
        |p: &Vec3<BigInt>, a: &Vec3<BigInt>, b: &Vec3<BigInt>| p == a || p == b || point_on_open_segment(p, a, b);
    for i in 0..n {
        let (a, b) = (&pts[edges[i].0], &pts[edges[i].1]);
        for j in i + 1..n {
            let (c, d) = (&pts[edges[j].0], &pts[edges[j].1]);
            if !open_segments_disjoint(a, b, c, d) {
                return false;
            }
            let adjacent = edges[i].1 == edges[j].0 || edges[j].1 == edges[i].0;
            if adjacent {
                // the shared vertex is fine; the far ends must stay off the other edge
                let (far_i, far_j) = if edges[i].1 == edges[j].0 { (a, d) } else { (b, c) };
                if on_closed(far_j, a, b) || on_closed(far_i, c, d) {
                    return false;
                }
            } else if on_closed(c, a, b) || on_closed(d, a, b) || on_closed(a, c, d) || on_closed(b, c, d) {
                return false;
            }
        }
    }
    true
}

/// Two parameter positions whose curve points average to `y` within
/// `2√3·3^-N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub words: (CornerWord, CornerWord),
    pub addresses: (Address, Address),
    pub positions: (CirclePos, CirclePos),
    pub points: (Point3, Point3),
    pub midpoint: [Rat; 3],
    pub deviation_sq: Rat,
}

/// Splits `y` into two Cantor corner words, follows each word down the
/// tree by matching corners to slots, and takes the entry parameters of
/// the depth-`depth` nodes reached.
pub fn witness_pair(table: &PatternTable, y: &[Rat; 3], depth: usize) -> Result<Witness, CurveError> {
    let (p, q) = cantor3_split(y, depth)?;
    let tree = table.tree();
    let follow = |w: &CornerWord| -> Result<(Address, Point3), CurveError> {
        let mut node = tree.root();
        for &c in w.corners() {
            let pat = tree.pattern(&node)?;
            let slot = pat.order.iter().position(|&h| h == c).expect("order is a permutation");
            node = tree.child(&node, slot as u8)?;
        }
        Ok((node.address, node.entry))
    };
    let (xa, pa) = follow(&p)?;
    let (xb, pb) = follow(&q)?;
    let two = rat_int(2);
    let (ra, rb) = (pa.to_rational(), pb.to_rational());
    let midpoint = [0, 1, 2].map(|k| (&ra[k] + &rb[k]) / &two);
    let deviation_sq = dist_sq(&midpoint, y);
    let pos = |x: &Address| CirclePos::Fractal(param::address_to_param(x, Pad::Zero).to_rational());
    Ok(Witness {
        positions: (pos(&xa), pos(&xb)),
        words: (p, q),
        addresses: (xa, xb),
        points: (pa, pb),
        midpoint,
        deviation_sq,
    })
}

/// `12·9^-N`, the square of `2√3·3^-N`.
pub fn witness_bound_sq(depth: usize) -> Rat {
    rat_int(12) * rat_pow_inv(9, depth as u32)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LengthStats {
    pub depth: usize,
    pub vertices: usize,
    /// Closed polygon length, return segment included.
    pub polyline_length: f64,
    pub lower_bound: String,
    pub lower_bound_f64: f64,
}

/// `Σ_{k<n} 7·8^k·3^-(k+1)`: level-`k` links join sibling cubes at
/// distance at least `3^-(k+1)`.
pub fn lower_bound(n: usize) -> Rat {
    (0..n as u32).fold(Rat::zero(), |acc, k| {
        acc + Rat::new(BigInt::from(7) * BigInt::from(8).pow(k), BigInt::from(3).pow(k + 1))
    })
}

pub fn length_stats(table: &PatternTable, n: usize) -> Result<LengthStats, CurveError> {
    let poly = build_polyline(table, n)?;
    let lb = lower_bound(n);
    Ok(LengthStats {
        depth: n,
        vertices: poly.len(),
        polyline_length: poly.length(),
        lower_bound_f64: rat_to_f64(&lb),
        lower_bound: lb.to_string(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModulusReport {
    pub depth: usize,
    pub samples_per_segment: usize,
    pub samples: usize,
    /// Largest distance between curve values at adjacent samples.
    pub max_adjacent: f64,
    /// Largest step the sampling takes along a single link.
    pub link_chunk: f64,
    /// `√3·3^-⌊n/2⌋ + link_chunk`.
    pub bound: f64,
    pub within_bound: bool,
    /// Distance between the last return sample and the curve at `t = 0`.
    pub wrap_distance: f64,
    /// Largest circle-metric step between adjacent samples.
    pub max_angle_step: f64,
}

/// Samples `t = k·15^-n/m` on the fractal interval and `m·3^n` evenly
/// spaced points on the return arc, evaluates at depth `n`, and compares
/// adjacent values.
pub fn modulus_check(table: &PatternTable, n: usize, m: usize) -> Result<ModulusReport, CurveError> {
    if n == 0 || m == 0 {
        return Err(CurveError::BadSampling);
    }
    let steps = BigInt::from(m) * BigInt::from(15).pow(n as u32);
    let count = steps.to_usize().ok_or(CurveError::BadSampling)?;
    let mut positions: Vec<CirclePos> =
        (0..=count).map(|k| CirclePos::Fractal(Rat::new(BigInt::from(k), steps.clone()))).collect();
    let ret = m * 3usize.pow(n as u32);
    positions.extend((1..ret).map(|k| CirclePos::Return(rat(k as i64, ret as i64))));

    use rayon::prelude::*;
    let values: Vec<[Rat; 3]> =
        positions.par_iter().map(|p| eval(table, p, n).map(|c| c.point)).collect::<Result<_, _>>()?;

    let mut max_adjacent = 0f64;
    let mut max_angle_step = 0f64;
    for i in 1..values.len() {
        max_adjacent = max_adjacent.max(rat_to_f64(&dist_sq(&values[i - 1], &values[i])).sqrt());
        max_angle_step = max_angle_step.max(rho_s(&positions[i - 1], &positions[i]));
    }
    let wrap_distance = rat_to_f64(&dist_sq(values.last().expect("samples"), &values[0])).sqrt();
    max_adjacent = max_adjacent.max(wrap_distance);
    max_angle_step = max_angle_step.max(rho_s(positions.last().expect("samples"), &positions[0]));

    // a step of 15^-n/m covers the fraction 15^(k+1-n)/m of a level-k gap
    let tree = table.tree();
    let mut link_chunk = 0f64;
    let mut level = vec![tree.root()];
    for k in 0..n {
        let mut longest = 0f64;
        let mut next = Vec::new();
        for node in &level {
            for l in tree.links(node)? {
                let len: f64 = l.points().windows(2).map(|w| w[0].dist_sq(&w[1]).to_f64().sqrt()).sum();
                longest = longest.max(len);
            }
            if k + 1 < n {
                next.extend(tree.children(node)?);
            }
        }
        let frac = (15f64.powi((k + 1) as i32 - n as i32) / m as f64).min(1.0);
        link_chunk = link_chunk.max(longest * frac);
        level = next;
    }
    let bound = 3f64.sqrt() * 3f64.powi(-((n / 2) as i32)) + link_chunk;
    Ok(ModulusReport {
        depth: n,
        samples_per_segment: m,
        samples: positions.len(),
        max_adjacent,
        link_chunk,
        bound,
        within_bound: max_adjacent <= bound,
        wrap_distance,
        max_angle_step,
    })
}
