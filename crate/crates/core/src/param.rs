//! The one-dimensional parameter scaffold on `[0, 1]`.
//!
//! Each closed segment `K_s` is cut into 15 equal pieces: 8 closed child
//! segments `K_{s,i}` interleaved with 7 open gaps `I_s(j)`. Limit points of
//! nested segments are addressed by infinite digit words; only finite
//! prefixes are represented here.

use std::fmt;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{Base15, Rat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParamError {
    #[error("address digit {0} is outside 0..=7")]
    Digit(u8),
    #[error("child index {0} is outside 0..=7")]
    ChildIndex(u8),
    #[error("gap index {0} is outside 0..=6")]
    GapIndex(u8),
    #[error("parameter {0} lies outside [0, 1]")]
    OutOfRange(Rat),
}

/// Finite word over `{0, …, 7}` naming a node of the recursion tree.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct Address(Vec<u8>);

impl Address {
    pub fn new(digits: Vec<u8>) -> Result<Self, ParamError> {
        if let Some(&d) = digits.iter().find(|&&d| d > 7) {
            return Err(ParamError::Digit(d));
        }
        Ok(Address(digits))
    }

    pub fn root() -> Self {
        Address(Vec::new())
    }

    /// `d` repeated `n` times.
    pub fn repeat(d: u8, n: usize) -> Result<Self, ParamError> {
        Address::new(vec![d; n])
    }

    pub fn digits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, i: u8) -> Result<Self, ParamError> {
        if i > 7 {
            return Err(ParamError::ChildIndex(i));
        }
        let mut d = self.0.clone();
        d.push(i);
        Ok(Address(d))
    }

    pub fn prefix(&self, n: usize) -> Address {
        Address(self.0[..n.min(self.0.len())].to_vec())
    }

    /// This address followed by `pad` until it has length `n`.
    pub fn padded(&self, pad: Pad, n: usize) -> Address {
        let mut d = self.0.clone();
        d.resize(n.max(d.len()), pad.digit());
        Address(d)
    }

    /// Every address of length `n`, in parameter order.
    pub fn all_of_length(n: usize) -> impl Iterator<Item = Address> {
        let count = 8usize.pow(n as u32);
        (0..count).map(move |mut k| {
            let mut d = vec![0u8; n];
            for slot in d.iter_mut().rev() {
                *slot = (k % 8) as u8;
                k /= 8;
            }
            Address(d)
        })
    }
}

impl TryFrom<Vec<u8>> for Address {
    type Error = ParamError;
    fn try_from(v: Vec<u8>) -> Result<Self, ParamError> {
        Address::new(v)
    }
}

impl From<Address> for Vec<u8> {
    fn from(a: Address) -> Vec<u8> {
        a.0
    }
}

impl fmt::Debug for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (k, d) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ">")
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Exact parameter value `num / 15^n` in `[0, 1]`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ParamValue(Base15);

impl ParamValue {
    pub fn zero() -> Self {
        ParamValue(Base15::zero())
    }

    pub fn one() -> Self {
        ParamValue(Base15::one())
    }

    pub fn value(&self) -> &Base15 {
        &self.0
    }

    pub fn to_rational(&self) -> Rat {
        self.0.to_rational()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    /// Builds a parameter from a radix-15 value; `None` outside `[0, 1]`.
    pub fn from_base15(v: Base15) -> Option<Self> {
        (v >= Base15::zero() && v <= Base15::one()).then_some(ParamValue(v))
    }
}

impl fmt::Debug for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntervalKind {
    ClosedK,
    OpenGap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamInterval {
    pub lo: ParamValue,
    pub hi: ParamValue,
    pub kind: IntervalKind,
}

impl ParamInterval {
    pub fn length(&self) -> Base15 {
        &self.hi.0 - &self.lo.0
    }

    /// Membership respecting open/closed ends.
    pub fn contains(&self, t: &Base15) -> bool {
        match self.kind {
            IntervalKind::ClosedK => self.lo.0 <= *t && *t <= self.hi.0,
            IntervalKind::OpenGap => self.lo.0 < *t && *t < self.hi.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pad {
    Zero,
    Seven,
}

impl Pad {
    fn digit(self) -> u8 {
        match self {
            Pad::Zero => 0,
            Pad::Seven => 7,
        }
    }
}

/// `(in_s, out_s)` by the scaffold recursion: each child starts `2i/15` of
/// the way into its parent and spans `1/15` of it.
pub fn endpoints(s: &Address) -> (ParamValue, ParamValue) {
    let mut lo = Base15::zero();
    let mut hi = Base15::one();
    for &i in s.digits() {
        let fifteenth = (&hi - &lo).shr(1);
        let child_lo = &lo + &fifteenth.mul_int(2 * i as i64);
        hi = &child_lo + &fifteenth;
        lo = child_lo;
    }
    (ParamValue(lo), ParamValue(hi))
}

/// `K_s` as a closed interval.
pub fn segment(s: &Address) -> ParamInterval {
    let (lo, hi) = endpoints(s);
    ParamInterval { lo, hi, kind: IntervalKind::ClosedK }
}

pub fn child_segment(s: &Address, i: u8) -> Result<ParamInterval, ParamError> {
    Ok(segment(&s.child(i)?))
}

/// The open gap `I_s(j) = (out_{s,j}, in_{s,j+1})`.
pub fn gap_interval(s: &Address, j: u8) -> Result<ParamInterval, ParamError> {
    if j > 6 {
        return Err(ParamError::GapIndex(j));
    }
    let (_, lo) = endpoints(&s.child(j)?);
    let (hi, _) = endpoints(&s.child(j + 1)?);
    Ok(ParamInterval { lo, hi, kind: IntervalKind::OpenGap })
}

/// `in_x` for `Pad::Zero`, `out_x` for `Pad::Seven`: the parameters of the
/// limit points `x·000…` and `x·777…`.
pub fn address_to_param(x: &Address, pad: Pad) -> ParamValue {
    let (lo, hi) = endpoints(x);
    match pad {
        Pad::Zero => lo,
        Pad::Seven => hi,
    }
}

/// Where a parameter falls in the scaffold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classified {
    /// Inside the open gap `I_node(gap)`, at affine position `local ∈ (0,1)`.
    Gap { node: Address, gap: u8, local: Rat },
    /// Inside `K_s` for this depth-`n` address.
    LimitPrefix(Address),
}

/// Descends the scaffold to depth `max_depth`. A point shared by a closed
/// segment and the closure of a gap belongs to the segment.
pub fn classify_param(t: &Rat, max_depth: usize) -> Result<Classified, ParamError> {
    if t.is_negative() || *t > Rat::from_integer(1.into()) {
        return Err(ParamError::OutOfRange(t.clone()));
    }
    let mut digits = Vec::with_capacity(max_depth);
    let mut lo = Rat::zero();
    let mut width = Rat::from_integer(1.into());
    for _ in 0..max_depth {
        // position within K_s in units of |K_s|/15, in [0, 15]
        let x = (t - &lo) * Rat::from_integer(15.into()) / &width;
        let q = x.floor().to_integer().to_u8().expect("position within [0, 15]");
        let on_grid = x.is_integer();
        let child = if q.is_even() {
            Some(q.min(14) / 2)
        } else if on_grid {
            // odd integer position: right endpoint of child (q-1)/2
            Some((q - 1) / 2)
        } else {
            None
        };
        let fifteenth = &width / Rat::from_integer(15.into());
        match child {
            Some(i) => {
                lo += &fifteenth * Rat::from_integer((2 * i).into());
                width = fifteenth;
                digits.push(i);
            }
            None => {
                let gap = (q - 1) / 2;
                let local = x - Rat::from_integer(q.into());
                return Ok(Classified::Gap { node: Address(digits), gap, local });
            }
        }
    }
    Ok(Classified::LimitPrefix(Address(digits)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};
    use proptest::prelude::*;

    fn addr(d: &[u8]) -> Address {
        Address::new(d.to_vec()).unwrap()
    }

    /// Independent evaluator: the recursion written over general rationals,
    /// straight from `in + (2i/15)(out - in)` and `in + (1/15)(out - in)`.
    fn oracle_endpoints(s: &[u8]) -> (Rat, Rat) {
        let (mut a, mut b) = (rat_int(0), rat_int(1));
        for &i in s {
            let na = &a + rat(2 * i as i64, 15) * (&b - &a);
            let nb = &na + rat(1, 15) * (&b - &a);
            a = na;
            b = nb;
        }
        (a, b)
    }

    #[test]
    fn child_segment_examples() {
        let k = child_segment(&Address::root(), 0).unwrap();
        assert_eq!((k.lo.to_rational(), k.hi.to_rational()), (rat_int(0), rat(1, 15)));
        let k = child_segment(&Address::root(), 7).unwrap();
        assert_eq!((k.lo.to_rational(), k.hi.to_rational()), (rat(14, 15), rat_int(1)));
        let k = child_segment(&addr(&[1]), 0).unwrap();
        let (a, b) = oracle_endpoints(&[1, 0]);
        assert_eq!(a, rat(2, 15));
        assert_eq!(b, rat(2, 15) + rat(1, 225));
        assert_eq!((k.lo.to_rational(), k.hi.to_rational()), (a, b));
    }

    #[test]
    fn gap_interval_examples() {
        let g = gap_interval(&Address::root(), 0).unwrap();
        assert_eq!((g.lo.to_rational(), g.hi.to_rational()), (rat(1, 15), rat(2, 15)));
        let g = gap_interval(&Address::root(), 6).unwrap();
        assert_eq!((g.lo.to_rational(), g.hi.to_rational()), (rat(13, 15), rat(14, 15)));
        assert_eq!(gap_interval(&Address::root(), 7), Err(ParamError::GapIndex(7)));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            classify_param(&rat(1, 2), 4).unwrap(),
            Classified::Gap { node: Address::root(), gap: 3, local: rat(1, 2) }
        );
        assert_eq!(classify_param(&rat_int(0), 4).unwrap(), Classified::LimitPrefix(addr(&[0, 0, 0, 0])));
        assert_eq!(classify_param(&rat(1, 15), 4).unwrap(), Classified::LimitPrefix(addr(&[0, 7, 7, 7])));
        assert_eq!(classify_param(&rat_int(1), 3).unwrap(), Classified::LimitPrefix(addr(&[7, 7, 7])));
        assert!(classify_param(&rat(16, 15), 2).is_err());
        assert!(classify_param(&rat(-1, 15), 2).is_err());
    }

    #[test]
    fn address_to_param_examples() {
        assert_eq!(address_to_param(&Address::root(), Pad::Zero), ParamValue::zero());
        assert_eq!(address_to_param(&Address::root(), Pad::Seven), ParamValue::one());
        assert_eq!(address_to_param(&addr(&[7]), Pad::Seven), ParamValue::one());
    }

    #[test]
    fn bad_digits_rejected() {
        assert_eq!(Address::new(vec![1, 8]), Err(ParamError::Digit(8)));
        assert!(serde_json::from_str::<Address>("[0,9]").is_err());
    }

    #[test]
    fn endpoints_match_oracle_exhaustively() {
        for n in 0..=3 {
            for s in Address::all_of_length(n) {
                let (lo, hi) = endpoints(&s);
                assert_eq!((lo.to_rational(), hi.to_rational()), oracle_endpoints(s.digits()));
            }
        }
    }

    /// Partition, measure, nesting and boundary order for every node up to
    /// depth 4.
    #[test]
    fn scaffold_partitions_each_segment() {
        for n in 0..=3 {
            for s in Address::all_of_length(n) {
                let k = segment(&s);
                assert_eq!(k.length(), Base15::unit(n as u32));
                let mut pieces = Vec::new();
                for i in 0..8u8 {
                    pieces.push(child_segment(&s, i).unwrap());
                    if i < 7 {
                        pieces.push(gap_interval(&s, i).unwrap());
                    }
                }
                // 15 pieces of equal length, abutting, alternating closed/open
                assert_eq!(pieces.first().unwrap().lo, k.lo);
                assert_eq!(pieces.last().unwrap().hi, k.hi);
                let mut bounds = vec![k.lo.clone()];
                for (idx, p) in pieces.iter().enumerate() {
                    assert_eq!(p.length(), Base15::unit(n as u32 + 1));
                    let expect = if idx % 2 == 0 { IntervalKind::ClosedK } else { IntervalKind::OpenGap };
                    assert_eq!(p.kind, expect);
                    assert!(k.lo <= p.lo && p.hi <= k.hi);
                    if idx > 0 {
                        assert_eq!(pieces[idx - 1].hi, p.lo);
                    }
                    if p.kind == IntervalKind::ClosedK {
                        bounds.push(p.lo.clone());
                        bounds.push(p.hi.clone());
                    }
                }
                bounds.remove(0);
                assert_eq!(bounds.len(), 16);
                assert!(bounds.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn classify_roundtrips_entry_params() {
        for n in 0..=4 {
            for x in Address::all_of_length(n) {
                let t = address_to_param(&x, Pad::Zero).to_rational();
                assert_eq!(classify_param(&t, 4).unwrap(), Classified::LimitPrefix(x.padded(Pad::Zero, 4)));
            }
        }
    }

    proptest! {
        #[test]
        fn classify_agrees_with_intervals(num in 0u64..=3375, extra in 0u64..7) {
            // random rationals on a finer grid than the scaffold's
            let t = rat(num as i64 * 7 + extra as i64, 3375 * 7);
            prop_assume!(t <= rat_int(1));
            match classify_param(&t, 3).unwrap() {
                Classified::Gap { node, gap, local } => {
                    let g = gap_interval(&node, gap).unwrap();
                    let len = g.length().to_rational();
                    prop_assert!(local > rat_int(0) && local < rat_int(1));
                    prop_assert_eq!(g.lo.to_rational() + local * len, t);
                }
                Classified::LimitPrefix(s) => {
                    let k = segment(&s);
                    prop_assert!(k.lo.to_rational() <= t && t <= k.hi.to_rational());
                }
            }
        }
    }
}
