//! The 48 isometries of a cube, acting on corner selectors and on a node's
//! integer frame `[0, extent]³`.

use crate::geom::Corner;

/// Output axis `k` reads input axis `perm[k]`, then reflects it if
/// `flip[k]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CubeSymmetry {
    pub perm: [u8; 3],
    pub flip: [bool; 3],
}

const PERMS: [[u8; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

impl CubeSymmetry {
    pub fn identity() -> Self {
        CubeSymmetry { perm: [0, 1, 2], flip: [false; 3] }
    }

    /// All 48 symmetries; permutations in lexicographic order, reflections
    /// by bit pattern within each.
    pub fn all() -> Vec<CubeSymmetry> {
        let mut out = Vec::with_capacity(48);
        for perm in PERMS {
            for f in 0u8..8 {
                out.push(CubeSymmetry { perm, flip: [f & 4 != 0, f & 2 != 0, f & 1 != 0] });
            }
        }
        out
    }

    pub fn apply_corner(&self, c: Corner) -> Corner {
        let b = c.bits();
        let out = [0, 1, 2].map(|k| b[self.perm[k] as usize] ^ self.flip[k] as u8);
        Corner::from_bits(out).expect("bits stay binary")
    }

    /// Acts on integer coordinates of the frame `[0, extent]³`.
    pub fn apply_point(&self, p: [i64; 3], extent: i64) -> [i64; 3] {
        [0, 1, 2].map(|k| {
            let x = p[self.perm[k] as usize];
            if self.flip[k] {
                extent - x
            } else {
                x
            }
        })
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &CubeSymmetry) -> CubeSymmetry {
        let perm = [0, 1, 2].map(|k| other.perm[self.perm[k] as usize]);
        let flip = [0, 1, 2].map(|k| self.flip[k] ^ other.flip[self.perm[k] as usize]);
        CubeSymmetry { perm, flip }
    }

    /// First symmetry in [`CubeSymmetry::all`] order sending the pair
    /// `from` to the pair `to`.
    pub fn mapping(from: (Corner, Corner), to: (Corner, Corner)) -> Option<CubeSymmetry> {
        CubeSymmetry::all().into_iter().find(|g| g.apply_corner(from.0) == to.0 && g.apply_corner(from.1) == to.1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn forty_eight_distinct_bijections() {
        let all = CubeSymmetry::all();
        assert_eq!(all.len(), 48);
        let images: HashSet<Vec<Corner>> =
            all.iter().map(|g| Corner::ALL.iter().map(|&c| g.apply_corner(c)).collect()).collect();
        assert_eq!(images.len(), 48);
        for img in &images {
            let set: HashSet<_> = img.iter().collect();
            assert_eq!(set.len(), 8);
        }
    }

    #[test]
    fn point_action_matches_corner_action() {
        for g in CubeSymmetry::all() {
            for c in Corner::ALL {
                let p = c.bits().map(|b| 9 * b as i64);
                let q = g.apply_corner(c).bits().map(|b| 9 * b as i64);
                assert_eq!(g.apply_point(p, 9), q);
            }
        }
    }

    #[test]
    fn composition_is_closed_and_consistent() {
        let all = CubeSymmetry::all();
        let set: HashSet<_> = all.iter().copied().collect();
        for a in &all {
            for b in &all {
                let ab = a.compose(b);
                assert!(set.contains(&ab));
                for p in [[1, 2, 7], [0, 9, 4]] {
                    assert_eq!(ab.apply_point(p, 9), a.apply_point(b.apply_point(p, 9), 9));
                }
            }
        }
    }

    #[test]
    fn pairs_fall_into_three_orbits() {
        // ordered pairs of distinct vertices, grouped by Hamming distance
        for a in Corner::ALL {
            for b in Corner::ALL {
                if a == b {
                    continue;
                }
                let d = a.hamming(b);
                let canon = (Corner::ALL[0], Corner::ALL[[0, 4, 6, 7][d as usize] as usize]);
                assert!(CubeSymmetry::mapping(canon, (a, b)).is_some());
            }
        }
    }
}
