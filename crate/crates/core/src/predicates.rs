//! Exact incidence predicates on integer lattices.
//!
//! Every predicate takes integer coordinates and decides by sign tests on
//! exact products; callers scale rational geometry to a common denominator
//! first (see [`crate::geom`]). Segments are open: their endpoints are not
//! part of them. Boxes are closed.

use num_traits::Signed;

/// Integer type usable as a lattice coordinate (`i64`, `i128`, `BigInt`).
pub trait LatticeInt: Clone + Ord + Signed {}
impl<T: Clone + Ord + Signed> LatticeInt for T {}

pub type Vec3<T> = [T; 3];

fn sub<T: LatticeInt>(a: &Vec3<T>, b: &Vec3<T>) -> Vec3<T> {
    [a[0].clone() - b[0].clone(), a[1].clone() - b[1].clone(), a[2].clone() - b[2].clone()]
}

fn cross<T: LatticeInt>(u: &Vec3<T>, v: &Vec3<T>) -> Vec3<T> {
    [
        u[1].clone() * v[2].clone() - u[2].clone() * v[1].clone(),
        u[2].clone() * v[0].clone() - u[0].clone() * v[2].clone(),
        u[0].clone() * v[1].clone() - u[1].clone() * v[0].clone(),
    ]
}

fn dot<T: LatticeInt>(u: &Vec3<T>, v: &Vec3<T>) -> T {
    u[0].clone() * v[0].clone() + u[1].clone() * v[1].clone() + u[2].clone() * v[2].clone()
}

fn is_zero_vec<T: LatticeInt>(u: &Vec3<T>) -> bool {
    u.iter().all(|x| x.is_zero())
}

/// Fraction `num/den` with `den > 0`.
#[derive(Clone)]
struct Frac<T> {
    num: T,
    den: T,
}

impl<T: LatticeInt> Frac<T> {
    fn new(num: T, den: T) -> Self {
        if den.is_negative() {
            Frac { num: -num, den: -den }
        } else {
            Frac { num, den }
        }
    }

    fn int(n: T) -> Self {
        Frac { num: n, den: T::one() }
    }

    fn lt(&self, other: &Self) -> bool {
        self.num.clone() * other.den.clone() < other.num.clone() * self.den.clone()
    }

    fn eq(&self, other: &Self) -> bool {
        self.num.clone() * other.den.clone() == other.num.clone() * self.den.clone()
    }
}

pub fn point_in_box<T: LatticeInt>(p: &Vec3<T>, lo: &Vec3<T>, hi: &Vec3<T>) -> bool {
    (0..3).all(|k| lo[k] <= p[k] && p[k] <= hi[k])
}

pub fn boxes_disjoint<T: LatticeInt>(lo1: &Vec3<T>, hi1: &Vec3<T>, lo2: &Vec3<T>, hi2: &Vec3<T>) -> bool {
    (0..3).any(|k| hi1[k] < lo2[k] || hi2[k] < lo1[k])
}

pub fn box_contains_box<T: LatticeInt>(outer_lo: &Vec3<T>, outer_hi: &Vec3<T>, lo: &Vec3<T>, hi: &Vec3<T>) -> bool {
    (0..3).all(|k| outer_lo[k] <= lo[k] && hi[k] <= outer_hi[k])
}

/// True iff the open segment `(a, b)` misses the closed box `[lo, hi]`.
///
/// Slab clipping: the closed segment meets the box on a parameter interval
/// `[t0, t1] ⊆ [0, 1]`; the open segment misses the box iff that interval is
/// empty or collapses onto an excluded endpoint.
pub fn segment_box_disjoint<T: LatticeInt>(a: &Vec3<T>, b: &Vec3<T>, lo: &Vec3<T>, hi: &Vec3<T>) -> bool {
    let mut t0 = Frac::int(T::zero());
    let mut t1 = Frac::int(T::one());
    for k in 0..3 {
        let d = b[k].clone() - a[k].clone();
        if d.is_zero() {
            if a[k] < lo[k] || a[k] > hi[k] {
                return true;
            }
            continue;
        }
        let mut enter = Frac::new(lo[k].clone() - a[k].clone(), d.clone());
        let mut leave = Frac::new(hi[k].clone() - a[k].clone(), d);
        if leave.lt(&enter) {
            std::mem::swap(&mut enter, &mut leave);
        }
        if t0.lt(&enter) {
            t0 = enter;
        }
        if leave.lt(&t1) {
            t1 = leave;
        }
        if t1.lt(&t0) {
            return true;
        }
    }
    if t0.eq(&t1) {
        return t0.num.is_zero() || t0.eq(&Frac::int(T::one()));
    }
    false
}

/// True iff `p` lies strictly between `a` and `b` on the segment.
pub fn point_on_open_segment<T: LatticeInt>(p: &Vec3<T>, a: &Vec3<T>, b: &Vec3<T>) -> bool {
    let u = sub(b, a);
    let w = sub(p, a);
    if !is_zero_vec(&cross(&u, &w)) {
        return false;
    }
    let s = dot(&w, &u);
    s.is_positive() && s < dot(&u, &u)
}

/// True iff the open segments `(a, b)` and `(c, d)` share no point.
pub fn open_segments_disjoint<T: LatticeInt>(a: &Vec3<T>, b: &Vec3<T>, c: &Vec3<T>, d: &Vec3<T>) -> bool {
    let u = sub(b, a);
    let v = sub(d, c);
    let w = sub(c, a);
    let n = cross(&u, &v);
    if !is_zero_vec(&n) {
        if !dot(&n, &w).is_zero() {
            // skew lines
            return true;
        }
        // Coplanar, crossing lines: a + s·u = c + t·v with
        // s = ((w×v)·n)/(n·n), t = ((w×u)·n)/(n·n).
        let nn = dot(&n, &n);
        let s = dot(&cross(&w, &v), &n);
        let t = dot(&cross(&w, &u), &n);
        let inside = |x: &T| x.is_positive() && *x < nn;
        return !(inside(&s) && inside(&t));
    }
    if !is_zero_vec(&cross(&u, &w)) {
        // parallel, distinct lines
        return true;
    }
    // Collinear: project c and d onto u, scaled by u·u.
    let uu = dot(&u, &u);
    let sc = dot(&w, &u);
    let sd = dot(&sub(d, a), &u);
    let (lo, hi) = if sc <= sd { (sc, sd) } else { (sd, sc) };
    let start = if lo.is_positive() { lo } else { T::zero() };
    let end = if hi < uu { hi } else { uu };
    start >= end
}

/// An open polygonal chain: the union of its open legs and its interior
/// vertices. The first and last vertices are excluded.
pub fn chain_box_disjoint<T: LatticeInt>(chain: &[Vec3<T>], lo: &Vec3<T>, hi: &Vec3<T>) -> bool {
    let interior = &chain[1..chain.len() - 1];
    interior.iter().all(|p| !point_in_box(p, lo, hi))
        && chain.windows(2).all(|w| segment_box_disjoint(&w[0], &w[1], lo, hi))
}

/// True iff two open chains (see [`chain_box_disjoint`]) share no point.
pub fn chains_disjoint<T: LatticeInt>(p: &[Vec3<T>], q: &[Vec3<T>]) -> bool {
    let legs_ok = p.windows(2).all(|s| q.windows(2).all(|r| open_segments_disjoint(&s[0], &s[1], &r[0], &r[1])));
    if !legs_ok {
        return false;
    }
    let p_inner = &p[1..p.len() - 1];
    let q_inner = &q[1..q.len() - 1];
    let vertex_hits = |pts: &[Vec3<T>], other: &[Vec3<T>], other_inner: &[Vec3<T>]| {
        pts.iter().any(|v| other_inner.contains(v) || other.windows(2).any(|r| point_on_open_segment(v, &r[0], &r[1])))
    };
    !vertex_hits(p_inner, q, q_inner) && !vertex_hits(q_inner, p, p_inner)
}
