//! Coalitions over an ordered voter set and the shift order on them.
//!
//! Voters are numbered `1..=n` by increasing strength: voter `n` is the
//! strongest. A [`Coalition`] stores its members as a bit mask where bit
//! `i - 1` stands for voter `i`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Largest supported voter count.
pub const MAX_VOTERS: usize = 16;

pub(crate) fn check_voters(n: usize) -> Result<()> {
    if (1..=MAX_VOTERS).contains(&n) {
        Ok(())
    } else {
        Err(Error::VoterCount(n))
    }
}

/// A set of voters drawn from `{1, ..., n}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Coalition {
    n: u8,
    mask: u32,
}

impl Coalition {
    /// Builds a coalition from voter indices in any order.
    pub fn new(n: usize, members: &[usize]) -> Result<Self> {
        check_voters(n)?;
        let mut mask = 0u32;
        for &v in members {
            if v == 0 || v > n {
                return Err(Error::VoterIndex { voter: v, n });
            }
            mask |= 1 << (v - 1);
        }
        Ok(Coalition { n: n as u8, mask })
    }

    pub fn from_mask(n: usize, mask: u32) -> Result<Self> {
        check_voters(n)?;
        if mask >> n != 0 {
            return Err(Error::VoterIndex {
                voter: 32 - mask.leading_zeros() as usize,
                n,
            });
        }
        Ok(Coalition { n: n as u8, mask })
    }

    /// Caller guarantees `n` is in range and `mask` fits.
    pub(crate) fn from_mask_unchecked(n: usize, mask: u32) -> Self {
        debug_assert!(n <= MAX_VOTERS && mask >> n == 0);
        Coalition { n: n as u8, mask }
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::from_mask(n, 0)
    }

    /// The grand coalition `N`.
    pub fn grand(n: usize) -> Result<Self> {
        check_voters(n)?;
        Ok(Coalition {
            n: n as u8,
            mask: full_mask(n),
        })
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn is_grand(&self) -> bool {
        self.mask == full_mask(self.n())
    }

    pub fn contains(&self, voter: usize) -> bool {
        voter >= 1 && voter <= self.n() && self.mask & (1 << (voter - 1)) != 0
    }

    /// Members listed strongest first (the canonical display order).
    pub fn members_desc(&self) -> Vec<usize> {
        members_desc(self.mask)
    }

    /// Sum of member indices; the rank of the coalition in `M(n)`.
    pub fn rank(&self) -> usize {
        mask_rank(self.mask)
    }

    pub fn complement(&self) -> Coalition {
        Coalition {
            n: self.n,
            mask: full_mask(self.n()) & !self.mask,
        }
    }

    /// Shift-order comparison `self <= other`, ignoring voter counts.
    pub fn shift_le(&self, other: &Coalition) -> bool {
        mask_shift_le(self.mask, other.mask)
    }

    /// Adds `k` to every member index and lifts the coalition into `n + k` voters.
    pub fn shifted_up(&self, k: usize) -> Result<Coalition> {
        let n = self.n() + k;
        check_voters(n)?;
        Ok(Coalition {
            n: n as u8,
            mask: self.mask << k,
        })
    }

    /// Coalitions covering `self` in `M(n)`.
    pub fn upper_covers(&self) -> Vec<Coalition> {
        upper_cover_masks(self.n(), self.mask)
            .map(|m| Coalition::from_mask_unchecked(self.n(), m))
            .collect()
    }

    /// Coalitions covered by `self` in `M(n)`.
    pub fn lower_covers(&self) -> Vec<Coalition> {
        lower_cover_masks(self.mask)
            .map(|m| Coalition::from_mask_unchecked(self.n(), m))
            .collect()
    }

    /// Parses the digit-string (`n <= 9`) or braced-list form.
    pub fn parse(s: &str, n: usize) -> Result<Self> {
        check_voters(n)?;
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty coalition text (write {} for the empty coalition)".into()));
        }
        let members: Vec<usize> = if let Some(inner) = s.strip_prefix('{') {
            let inner = inner
                .strip_suffix('}')
                .ok_or_else(|| Error::Parse(format!("unterminated braced coalition {s:?}")))?;
            if inner.trim().is_empty() {
                Vec::new()
            } else {
                inner
                    .split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<usize>()
                            .map_err(|_| Error::Parse(format!("bad voter index {:?} in {s:?}", t.trim())))
                    })
                    .collect::<Result<_>>()?
            }
        } else {
            if n > 9 {
                return Err(Error::Parse(format!(
                    "digit shorthand {s:?} is ambiguous for n = {n}; use {{a,b,...}}"
                )));
            }
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as usize)
                        .ok_or_else(|| Error::Parse(format!("unexpected character {c:?} in coalition {s:?}")))
                })
                .collect::<Result<_>>()?
        };
        if members.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::Parse(format!("coalition {s:?} must list voters in strictly decreasing order")));
        }
        Coalition::new(n, &members)
    }
}

impl PartialOrd for Coalition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical total order: voter count, then rank, then the strongest-first
/// member lists lexicographically.
impl Ord for Coalition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.rank().cmp(&other.rank()))
            .then_with(|| self.members_desc().cmp(&other.members_desc()))
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let members = self.members_desc();
        if members.is_empty() {
            return f.write_str("{}");
        }
        if self.n() <= 9 {
            for m in members {
                write!(f, "{m}")?;
            }
            Ok(())
        } else {
            f.write_str("{")?;
            for (i, m) in members.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{m}")?;
            }
            f.write_str("}")
        }
    }
}

impl fmt::Debug for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}/{}", self.n)
    }
}

/// Shift-order test `a <= b` with an explicit voter-count check.
pub fn shift_leq(a: &Coalition, b: &Coalition) -> Result<bool> {
    if a.n != b.n {
        return Err(Error::MismatchedVoters(a.n(), b.n()));
    }
    Ok(a.shift_le(b))
}

pub(crate) fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

pub(crate) fn mask_rank(mask: u32) -> usize {
    let mut m = mask;
    let mut r = 0;
    while m != 0 {
        let i = m.trailing_zeros() as usize;
        r += i + 1;
        m &= m - 1;
    }
    r
}

pub(crate) fn members_desc(mask: u32) -> Vec<usize> {
    (1..=32usize).rev().filter(|&v| mask & (1 << (v - 1)) != 0).collect()
}

/// Pairs the strongest-first member lists: `a <= b` iff `|a| <= |b|` and the
/// `i`-th member of `b` is at least the `i`-th member of `a`.
pub(crate) fn mask_shift_le(a: u32, b: u32) -> bool {
    if a.count_ones() > b.count_ones() {
        return false;
    }
    let (mut a, mut b) = (a, b);
    while a != 0 {
        let top_a = 31 - a.leading_zeros();
        let top_b = 31 - b.leading_zeros();
        if top_b < top_a {
            return false;
        }
        a &= !(1 << top_a);
        b &= !(1 << top_b);
    }
    true
}

/// Upper covers in `M(n)`: move one member up by one place, or add voter 1.
pub(crate) fn upper_cover_masks(n: usize, mask: u32) -> impl Iterator<Item = u32> {
    let add_one = (mask & 1 == 0).then_some(mask | 1);
    let moves = (1..n).filter_map(move |i| {
        let bit = 1u32 << (i - 1);
        let next = bit << 1;
        (mask & bit != 0 && mask & next == 0).then_some((mask & !bit) | next)
    });
    add_one.into_iter().chain(moves)
}

/// Lower covers in `M(n)`: move one member down by one place, or drop voter 1.
pub(crate) fn lower_cover_masks(mask: u32) -> impl Iterator<Item = u32> {
    let drop_one = (mask & 1 != 0).then_some(mask & !1);
    let moves = (2..=32usize).filter_map(move |i| {
        let bit = 1u32 << (i - 1);
        let prev = bit >> 1;
        (mask & bit != 0 && mask & prev == 0).then_some((mask & !bit) | prev)
    });
    drop_one.into_iter().chain(moves)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: usize, s: &str) -> Coalition {
        Coalition::parse(s, n).unwrap()
    }

    #[test]
    fn shift_order_examples() {
        assert!(shift_leq(&c(4, "321"), &c(4, "421")).unwrap());
        assert!(!shift_leq(&c(4, "321"), &c(4, "43")).unwrap());
        assert!(!shift_leq(&c(4, "43"), &c(4, "321")).unwrap());
        let empty = Coalition::empty(4).unwrap();
        for m in 0..16 {
            assert!(empty.shift_le(&Coalition::from_mask(4, m).unwrap()));
        }
    }

    #[test]
    fn mismatched_voter_counts_are_rejected() {
        assert_eq!(
            shift_leq(&c(3, "3"), &c(4, "3")),
            Err(Error::MismatchedVoters(3, 4))
        );
    }

    #[test]
    fn rank_and_complement() {
        assert_eq!(c(5, "542").rank(), 11);
        assert_eq!(Coalition::empty(4).unwrap().rank(), 0);
        assert_eq!(Coalition::grand(6).unwrap().rank(), 21);
        assert_eq!(c(6, "65").complement(), c(6, "4321"));
        assert_eq!(Coalition::empty(3).unwrap().complement(), c(3, "321"));
    }

    #[test]
    fn text_forms() {
        assert_eq!(c(9, "8741").to_string(), "8741");
        assert_eq!(Coalition::empty(5).unwrap().to_string(), "{}");
        let big = Coalition::new(12, &[10, 7, 4, 1]).unwrap();
        assert_eq!(big.to_string(), "{10,7,4,1}");
        assert_eq!(Coalition::parse("{10,7,4,1}", 12).unwrap(), big);
        assert_eq!(c(4, "{4,2}"), c(4, "42"));
        assert!(Coalition::parse("1074", 12).is_err());
        assert!(Coalition::parse("24", 4).is_err());
        assert!(Coalition::parse("5", 4).is_err());
        assert!(Coalition::parse("33", 4).is_err());
        assert!(Coalition::parse("{1,", 4).is_err());
        assert!(Coalition::parse("3a", 4).is_err());
    }

    #[test]
    fn covers_change_rank_by_one() {
        for n in 1..=6 {
            for m in 0..(1u32 << n) {
                let r = mask_rank(m);
                for up in upper_cover_masks(n, m) {
                    assert_eq!(mask_rank(up), r + 1);
                    assert!(mask_shift_le(m, up));
                    assert!(lower_cover_masks(up).any(|d| d == m));
                }
            }
        }
    }

    #[test]
    fn canonical_order_is_rank_then_lexicographic() {
        let mut v = vec![c(4, "43"), c(4, "321"), c(4, "421"), c(4, "4")];
        v.sort();
        let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        assert_eq!(s, ["4", "321", "421", "43"]);
    }
}
