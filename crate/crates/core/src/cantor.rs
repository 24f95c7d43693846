//! Ternary digits and the midpoint decomposition `½(C+C) = [0,1]`.
//!
//! A ternary digit `d ∈ {0,1,2}` is split as `b + c` with `b, c ∈ {0,1}`;
//! doubling gives two Cantor digits in `{0,2}` whose average is `d`. Doing
//! this per axis splits any point of `[0,1]³` into the midpoint of two
//! points of `C³`, up to truncation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{Rat, Triadic};
use crate::geom::{Corner, Point3};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CantorError {
    #[error("coordinate {0} lies outside [0, 1]")]
    OutOfRange(Rat),
    #[error("digit {0} is not a ternary digit")]
    BadTernary(u8),
    #[error("digit {0} is not a Cantor digit (0 or 2)")]
    BadCantor(u8),
}

/// `Σ d_k · 3^-(k+1)` with `d_k ∈ {0,1,2}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TernaryDigits(Vec<u8>);

impl TernaryDigits {
    pub fn new(digits: Vec<u8>) -> Result<Self, CantorError> {
        match digits.iter().find(|&&d| d > 2) {
            Some(&d) => Err(CantorError::BadTernary(d)),
            None => Ok(TernaryDigits(digits)),
        }
    }

    pub fn digits(&self) -> &[u8] {
        &self.0
    }

    pub fn value(&self) -> Triadic {
        digits_value(&self.0)
    }
}

/// Ternary digits restricted to `{0,2}`: a left endpoint of the depth-`n`
/// Cantor approximation.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CantorDigits(Vec<u8>);

impl CantorDigits {
    pub fn new(digits: Vec<u8>) -> Result<Self, CantorError> {
        match digits.iter().find(|&&d| d != 0 && d != 2) {
            Some(&d) => Err(CantorError::BadCantor(d)),
            None => Ok(CantorDigits(digits)),
        }
    }

    pub fn digits(&self) -> &[u8] {
        &self.0
    }

    pub fn value(&self) -> Triadic {
        digits_value(&self.0)
    }
}

/// Per level, the corner cube chosen on each axis.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CornerWord(Vec<Corner>);

impl CornerWord {
    pub fn new(corners: Vec<Corner>) -> Self {
        CornerWord(corners)
    }

    pub fn corners(&self) -> &[Corner] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn digits_value(d: &[u8]) -> Triadic {
    let mut num = BigInt::zero();
    for &x in d {
        num = num * 3 + x;
    }
    Triadic::new(num, d.len() as u32)
}

/// Greedy base-3 expansion to `n` digits. Digits are clamped at 2, so `1`
/// expands to all 2s.
pub fn ternary_expand(y: &Rat, n: usize) -> Result<TernaryDigits, CantorError> {
    if y.is_negative() || *y > Rat::from_integer(1.into()) {
        return Err(CantorError::OutOfRange(y.clone()));
    }
    let q = y.denom();
    let mut r = y.numer().clone();
    let mut digits = Vec::with_capacity(n);
    for _ in 0..n {
        r *= 3;
        let d = r.div_floor(q).to_u8().expect("digit below 4").min(2);
        r -= q * d;
        digits.push(d);
    }
    Ok(TernaryDigits(digits))
}

/// Splits each digit as `d = b + c` (ties `1 = 1 + 0`) and returns
/// `(2b, 2c)`.
pub fn midpoint_split(d: &TernaryDigits) -> (CantorDigits, CantorDigits) {
    let (a, b) =
        d.0.iter()
            .map(|&x| match x {
                0 => (0, 0),
                1 => (2, 0),
                _ => (2, 2),
            })
            .unzip();
    (CantorDigits(a), CantorDigits(b))
}

/// Two corner words whose `C³` points average to `y` within `3^-n` per
/// coordinate.
pub fn cantor3_split(y: &[Rat; 3], n: usize) -> Result<(CornerWord, CornerWord), CantorError> {
    let mut halves: [(CantorDigits, CantorDigits); 3] = Default::default();
    for axis in 0..3 {
        halves[axis] = midpoint_split(&ternary_expand(&y[axis], n)?);
    }
    let word = |pick: fn(&(CantorDigits, CantorDigits)) -> &CantorDigits| {
        CornerWord(
            (0..n)
                .map(|k| {
                    let bits = [0, 1, 2].map(|axis| pick(&halves[axis]).0[k] / 2);
                    Corner::from_bits(bits).expect("Cantor digits halve to bits")
                })
                .collect(),
        )
    };
    Ok((word(|h| &h.0), word(|h| &h.1)))
}

/// Per axis `Σ_k 2·h_k·3^-(k+1)`.
pub fn corner_word_value(w: &CornerWord) -> Point3 {
    let axis = |a: usize| -> Triadic {
        let d: Vec<u8> = w.0.iter().map(|c| 2 * c.bits()[a]).collect();
        digits_value(&d)
    };
    Point3([axis(0), axis(1), axis(2)])
}

/// The `2^n` left endpoints of the depth-`n` Cantor approximation, in
/// increasing order.
pub fn cantor_left_endpoints(n: usize) -> Vec<Triadic> {
    (0u64..(1 << n))
        .map(|k| {
            let d: Vec<u8> = (0..n).rev().map(|b| 2 * ((k >> b) & 1) as u8).collect();
            digits_value(&d)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};
    use std::collections::BTreeSet;

    fn td(d: &[u8]) -> TernaryDigits {
        TernaryDigits::new(d.to_vec()).unwrap()
    }

    fn cw(bits: &[[u8; 3]]) -> CornerWord {
        CornerWord(bits.iter().map(|&b| Corner::from_bits(b).unwrap()).collect())
    }

    /// Long division in base 3 written independently of the greedy loop.
    fn oracle_digits(p: i64, q: i64, n: usize) -> Vec<u8> {
        let mut out = Vec::new();
        let mut r = p;
        for _ in 0..n {
            let mut d = 0;
            while d < 2 && (d + 1) * q <= 3 * r {
                d += 1;
            }
            out.push(d as u8);
            r = 3 * r - d * q;
        }
        out
    }

    #[test]
    fn expand_examples() {
        assert_eq!(ternary_expand(&rat_int(0), 5).unwrap(), td(&[0; 5]));
        assert_eq!(ternary_expand(&rat(1, 3), 3).unwrap(), td(&[1, 0, 0]));
        assert_eq!(ternary_expand(&rat_int(1), 3).unwrap(), td(&[2, 2, 2]));
        assert!(ternary_expand(&rat(4, 3), 3).is_err());
        assert!(ternary_expand(&rat(-1, 3), 3).is_err());
    }

    #[test]
    fn expand_matches_long_division() {
        for q in 1..40i64 {
            for p in 0..q {
                let got = ternary_expand(&rat(p, q), 8).unwrap();
                assert_eq!(got.digits(), oracle_digits(p, q, 8).as_slice(), "{p}/{q}");
            }
        }
    }

    #[test]
    fn split_examples() {
        let split = |d: &[u8]| {
            let (a, b) = midpoint_split(&td(d));
            (a.0, b.0)
        };
        assert_eq!(split(&[0, 0]), (vec![0, 0], vec![0, 0]));
        assert_eq!(split(&[2, 2]), (vec![2, 2], vec![2, 2]));
        assert_eq!(split(&[1, 1, 1]), (vec![2, 2, 2], vec![0, 0, 0]));
        let d = td(&[1, 1, 1]);
        let (a, b) = midpoint_split(&d);
        assert_eq!((a.value().to_rational() + b.value().to_rational()) / rat_int(2), d.value().to_rational());
    }

    #[test]
    fn split3_examples() {
        let zero = [rat_int(0), rat_int(0), rat_int(0)];
        assert_eq!(cantor3_split(&zero, 3).unwrap(), (cw(&[[0, 0, 0]; 3]), cw(&[[0, 0, 0]; 3])));
        let one = [rat_int(1), rat_int(1), rat_int(1)];
        assert_eq!(cantor3_split(&one, 3).unwrap(), (cw(&[[1, 1, 1]; 3]), cw(&[[1, 1, 1]; 3])));
        let half = [rat(1, 2), rat(1, 2), rat(1, 2)];
        let (p, q) = cantor3_split(&half, 2).unwrap();
        assert_eq!((p.clone(), q.clone()), (cw(&[[1, 1, 1]; 2]), cw(&[[0, 0, 0]; 2])));
        let mid = (corner_word_value(&p).to_rational()[0].clone() + corner_word_value(&q).to_rational()[0].clone())
            / rat_int(2);
        assert_eq!(mid, rat(4, 9));
        assert!(rat(1, 2) - mid < rat(1, 9));
    }

    #[test]
    fn word_value_examples() {
        assert_eq!(corner_word_value(&cw(&[[0, 0, 0]; 3])), Point3::origin());
        assert_eq!(corner_word_value(&cw(&[[1, 0, 0]])), Point3::from_ints([2, 0, 0], 1));
        assert_eq!(corner_word_value(&cw(&[[1, 1, 1]; 2])), Point3::from_ints([8, 8, 8], 2));
    }

    #[test]
    fn left_endpoints_depth_two() {
        let f: Vec<Rat> = cantor_left_endpoints(2).iter().map(Triadic::to_rational).collect();
        assert_eq!(f, vec![rat_int(0), rat(2, 9), rat(2, 3), rat(8, 9)]);
        // every single-level word value is one of these
        let all: BTreeSet<Triadic> = cantor_left_endpoints(2).into_iter().collect();
        for c0 in Corner::ALL {
            for c1 in Corner::ALL {
                let v = corner_word_value(&CornerWord(vec![c0, c1]));
                assert!(v.0.iter().all(|x| all.contains(x)));
            }
        }
    }

    #[test]
    fn rejects_bad_digits() {
        assert_eq!(TernaryDigits::new(vec![3]), Err(CantorError::BadTernary(3)));
        assert_eq!(CantorDigits::new(vec![1]), Err(CantorError::BadCantor(1)));
    }
}
