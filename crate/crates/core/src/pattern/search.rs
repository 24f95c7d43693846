//! Deterministic backtracking search for a pattern.
//!
//! Middle slots run over the 720 orders of the 6 remaining children in
//! lexicographic order. Within an order, a depth-first search picks each
//! slot's exit vertex and the next slot's entry vertex in corner index
//! order, and accepts a link only if it misses every child and every link
//! placed so far. Straight links are tried first over all orders; two-leg
//! chains through one waypoint of the `[0, 9]³` grid are a second pass.

use serde::{Deserialize, Serialize};

use super::{child_box, child_vertex, Pattern, PatternError, FRAME};
use crate::geom::{Box3, Corner, Link, Point3};
use crate::predicates::{chain_box_disjoint, chains_disjoint, point_in_box};

type P = [i64; 3];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOptions {
    /// Straight connecting segments.
    pub straight: bool,
    /// Two-leg chains, tried after straight links fail everywhere.
    pub chains: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { straight: true, chains: true }
    }
}

/// Searches in an integer frame `[0, 9·scale]³`. `extra_avoid` are open
/// chains the links must also miss.
pub fn find_pattern_local(
    entry: P,
    exit: P,
    scale: i64,
    extra_avoid: &[Vec<P>],
    opts: SearchOptions,
) -> Result<Pattern, PatternError> {
    if entry == exit {
        return Err(PatternError::SameEntryExit);
    }
    let (h0, e0) = owner(entry, scale).ok_or(PatternError::NotAChildVertex("entry"))?;
    let (h7, x7) = owner(exit, scale).ok_or(PatternError::NotAChildVertex("exit"))?;
    if h0 == h7 {
        return Err(PatternError::SameChild);
    }
    let mut passes = Vec::new();
    if opts.straight {
        passes.push(false);
    }
    if opts.chains {
        passes.push(true);
    }
    let boxes = Corner::ALL.map(|h| child_box(h, scale));
    for chains in passes {
        let mut mids: Vec<Corner> = Corner::ALL.into_iter().filter(|&h| h != h0 && h != h7).collect();
        loop {
            let mut order = [h0; 8];
            order[1..7].copy_from_slice(&mids);
            order[7] = h7;
            let mut s = Search {
                order,
                boxes: &boxes,
                extra: extra_avoid,
                scale,
                chains,
                last_exit: x7,
                entry: [e0; 8],
                exit: [e0; 8],
                waypoints: [None; 7],
                links: Vec::with_capacity(7),
            };
            s.entry[0] = e0;
            if s.dfs(0) {
                return Ok(Pattern { order, entry: s.entry, exit: s.exit, waypoints: s.waypoints });
            }
            if !next_permutation(&mut mids) {
                break;
            }
        }
    }
    Err(PatternError::NotFound)
}

/// Exact front end: `entry`, `exit` and the chains to avoid are placed in
/// `cube`, refined to the coarsest lattice that holds all of them.
pub fn find_pattern(
    entry: &Point3,
    exit: &Point3,
    cube: &Box3,
    extra_avoid: &[Link],
    opts: SearchOptions,
) -> Result<Pattern, PatternError> {
    if entry == exit {
        return Err(PatternError::SameEntryExit);
    }
    for refine in 0..=8u32 {
        let local = |p: &Point3| -> Option<P> {
            let q = cube.to_local(p, refine)?;
            Some([i64::try_from(q[0]).ok()?, i64::try_from(q[1]).ok()?, i64::try_from(q[2]).ok()?])
        };
        let (Some(e), Some(x)) = (local(entry), local(exit)) else { continue };
        let extra: Option<Vec<Vec<P>>> = extra_avoid.iter().map(|l| l.points().iter().map(local).collect()).collect();
        let Some(extra) = extra else { continue };
        return find_pattern_local(e, x, 3i64.pow(refine), &extra, opts);
    }
    Err(PatternError::OffLattice)
}

fn owner(p: P, scale: i64) -> Option<(Corner, Corner)> {
    Corner::ALL
        .into_iter()
        .flat_map(|h| Corner::ALL.into_iter().map(move |v| (h, v)))
        .find(|&(h, v)| child_vertex(h, v, scale) == p)
}

struct Search<'a> {
    order: [Corner; 8],
    boxes: &'a [(P, P); 8],
    extra: &'a [Vec<P>],
    scale: i64,
    chains: bool,
    last_exit: Corner,
    entry: [Corner; 8],
    exit: [Corner; 8],
    waypoints: [Option<P>; 7],
    links: Vec<Vec<P>>,
}

impl Search<'_> {
    /// Slot `i` has its entry fixed; choose its exit and the next link.
    fn dfs(&mut self, i: usize) -> bool {
        if i == 7 {
            if self.entry[7] == self.last_exit {
                return false;
            }
            self.exit[7] = self.last_exit;
            return true;
        }
        for ex in Corner::ALL {
            if ex == self.entry[i] {
                continue;
            }
            for en in Corner::ALL {
                if i + 1 == 7 && en == self.last_exit {
                    continue;
                }
                let a = child_vertex(self.order[i], ex, self.scale);
                let b = child_vertex(self.order[i + 1], en, self.scale);
                for w in self.candidates(a, b) {
                    let link = match w {
                        Some(w) => vec![a, w.map(|x| x * self.scale), b],
                        None => vec![a, b],
                    };
                    if !self.admissible(&link) {
                        continue;
                    }
                    self.exit[i] = ex;
                    self.entry[i + 1] = en;
                    self.waypoints[i] = w;
                    self.links.push(link);
                    if self.dfs(i + 1) {
                        return true;
                    }
                    self.links.pop();
                    self.waypoints[i] = None;
                }
            }
        }
        false
    }

    fn candidates(&self, a: P, b: P) -> Vec<Option<P>> {
        if !self.chains {
            return vec![None];
        }
        let mut out = vec![None];
        for x in 0..=FRAME {
            for y in 0..=FRAME {
                for z in 0..=FRAME {
                    let w = [x, y, z];
                    let ws = w.map(|c| c * self.scale);
                    if ws == a || ws == b || self.boxes.iter().any(|(lo, hi)| point_in_box(&ws, lo, hi)) {
                        continue;
                    }
                    out.push(Some(w));
                }
            }
        }
        out
    }

    fn admissible(&self, link: &[P]) -> bool {
        self.boxes.iter().all(|(lo, hi)| chain_box_disjoint(link, lo, hi))
            && self.links.iter().all(|l| chains_disjoint(link, l))
            && self.extra.iter().all(|l| chains_disjoint(link, l))
    }
}

/// Advances to the next lexicographic permutation; false after the last.
fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[i - 1] < v[j]).expect("a larger element exists");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutations_in_lexicographic_order() {
        let mut v = vec![1, 2, 3];
        let mut seen = vec![v.clone()];
        while next_permutation(&mut v) {
            seen.push(v.clone());
        }
        assert_eq!(
            seen,
            vec![vec![1, 2, 3], vec![1, 3, 2], vec![2, 1, 3], vec![2, 3, 1], vec![3, 1, 2], vec![3, 2, 1]]
        );
        let mut six: Vec<u8> = (0..6).collect();
        let mut n = 1;
        while next_permutation(&mut six) {
            n += 1;
        }
        assert_eq!(n, 720);
    }

    #[test]
    fn precondition_errors() {
        let opts = SearchOptions::default();
        assert_eq!(find_pattern_local([0, 0, 0], [0, 0, 0], 1, &[], opts), Err(PatternError::SameEntryExit));
        assert_eq!(find_pattern_local([4, 4, 4], [9, 0, 0], 1, &[], opts), Err(PatternError::NotAChildVertex("entry")));
        assert_eq!(find_pattern_local([0, 0, 0], [3, 3, 3], 1, &[], opts), Err(PatternError::SameChild));
    }
}
