//! Linear simple games, represented as filters of `M(n)`.
//!
//! A [`LinearGame`] is fixed by its shift-minimal winning coalitions (the
//! generators of the filter). The full winning set is swept once at
//! construction and kept as a bit set indexed by coalition mask.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::coalition::{check_voters, full_mask, lower_cover_masks, upper_cover_masks, Coalition};
use crate::error::{Error, Result};
use crate::mposet::rank_order;

#[derive(Clone)]
pub struct LinearGame {
    n: u8,
    generators: Vec<Coalition>,
    winning: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub proper: bool,
    pub strong: bool,
    pub self_dual: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Desirability {
    More,
    Equal,
    Less,
}

/// Shift-maximal losing coalitions of a game.
///
/// For `<1>` the only losing coalition is the empty one, and adding it to the
/// winning set would give the excluded all-win game; that case is reported as
/// [`LosingFrontier::Bottom`] instead of a list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LosingFrontier {
    Bottom,
    Maximal(Vec<Coalition>),
}

impl LosingFrontier {
    pub fn coalitions(&self) -> &[Coalition] {
        match self {
            LosingFrontier::Bottom => &[],
            LosingFrontier::Maximal(v) => v,
        }
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, LosingFrontier::Bottom)
    }
}

/// Desirability classes of a game, strongest class first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Hierarchy {
    pub n: usize,
    /// Nontrivial classes, each listed strongest voter first.
    pub classes: Vec<Vec<usize>>,
    /// Trailing class of dummy voters (possibly empty).
    pub dummies: Vec<usize>,
}

impl Hierarchy {
    /// Builds the hierarchy whose classes are consecutive runs of the given
    /// sizes starting from voter `n`; the remaining voters are dummies.
    pub fn from_composition(n: usize, composition: &[usize]) -> Result<Hierarchy> {
        let used: usize = composition.iter().sum();
        if used > n || composition.iter().any(|&c| c == 0) {
            return Err(Error::OutOfRange(format!("composition {composition:?} does not fit {n} voters")));
        }
        let mut top = n;
        let mut classes = Vec::with_capacity(composition.len());
        for &size in composition {
            classes.push((top + 1 - size..=top).rev().collect());
            top -= size;
        }
        Ok(Hierarchy {
            n,
            classes,
            dummies: (1..=top).rev().collect(),
        })
    }

    pub fn power_composition(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    pub fn extended_composition(&self) -> Vec<usize> {
        let mut c = self.power_composition();
        c.push(self.dummies.len());
        c
    }

    /// Number `k` of nontrivial classes.
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }
}

impl fmt::Display for Hierarchy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.power_composition().iter().map(|c| c.to_string()).collect();
        write!(f, "({}) with {} dumm{}", parts.join(","), self.dummies.len(), if self.dummies.len() == 1 { "y" } else { "ies" })
    }
}

/// JSON form `{n, generators: [[ints]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameJson {
    pub n: usize,
    pub generators: Vec<Vec<usize>>,
}

fn bitset_len(n: usize) -> usize {
    ((1usize << n) + 63) / 64
}

fn get_bit(bits: &[u64], m: u32) -> bool {
    bits[(m >> 6) as usize] >> (m & 63) & 1 == 1
}

fn set_bit(bits: &mut [u64], m: u32) {
    bits[(m >> 6) as usize] |= 1 << (m & 63);
}

fn clear_bit(bits: &mut [u64], m: u32) {
    bits[(m >> 6) as usize] &= !(1 << (m & 63));
}

impl LinearGame {
    /// Builds the game generated by `generators`, dropping any coalition that
    /// lies above another one in the shift order.
    pub fn new(n: usize, generators: &[Coalition]) -> Result<LinearGame> {
        check_voters(n)?;
        if generators.is_empty() {
            return Err(Error::NoGenerators);
        }
        for g in generators {
            if g.n() != n {
                return Err(Error::MismatchedVoters(n, g.n()));
            }
            if g.is_empty() {
                return Err(Error::EmptyGenerator);
            }
        }
        let mut gens: Vec<Coalition> = generators
            .iter()
            .filter(|g| !generators.iter().any(|h| h != *g && h.shift_le(g)))
            .copied()
            .collect();
        gens.sort_by(display_order);
        gens.dedup();

        let mut winning = vec![0u64; bitset_len(n)];
        let gen_masks: Vec<u32> = gens.iter().map(Coalition::mask).collect();
        for &m in rank_order(n) {
            if gen_masks.contains(&m) || lower_cover_masks(m).any(|d| get_bit(&winning, d)) {
                set_bit(&mut winning, m);
            }
        }
        Ok(LinearGame {
            n: n as u8,
            generators: gens,
            winning,
        })
    }

    /// Rebuilds a game from a winning set that is known to be a nontrivial filter.
    pub(crate) fn from_winning_bits(n: usize, winning: Vec<u64>) -> LinearGame {
        debug_assert!(get_bit(&winning, full_mask(n)) && !get_bit(&winning, 0));
        let mut generators: Vec<Coalition> = (0..(1u32 << n))
            .filter(|&m| get_bit(&winning, m) && !lower_cover_masks(m).any(|d| get_bit(&winning, d)))
            .map(|m| Coalition::from_mask_unchecked(n, m))
            .collect();
        generators.sort_by(display_order);
        LinearGame {
            n: n as u8,
            generators,
            winning,
        }
    }

    /// Builds a game from an arbitrary winning predicate, checking that it
    /// defines a nontrivial filter of `M(n)`.
    pub fn from_winning_fn(n: usize, mut wins: impl FnMut(Coalition) -> bool) -> Result<LinearGame> {
        check_voters(n)?;
        let mut bits = vec![0u64; bitset_len(n)];
        for m in 0..(1u32 << n) {
            if wins(Coalition::from_mask_unchecked(n, m)) {
                set_bit(&mut bits, m);
            }
        }
        if get_bit(&bits, 0) {
            return Err(Error::EmptyGenerator);
        }
        if !get_bit(&bits, full_mask(n)) {
            return Err(Error::NoGenerators);
        }
        for m in 0..(1u32 << n) {
            if get_bit(&bits, m) && upper_cover_masks(n, m).any(|u| !get_bit(&bits, u)) {
                return Err(Error::Parse(format!(
                    "winning set is not an up-set of the shift order at {}",
                    Coalition::from_mask_unchecked(n, m)
                )));
            }
        }
        Ok(Self::from_winning_bits(n, bits))
    }

    /// Parses `<c1;c2;...>` for the given voter count.
    pub fn parse(s: &str, n: usize) -> Result<LinearGame> {
        let parts = split_game_text(s)?;
        let gens = parts
            .iter()
            .map(|p| Coalition::parse(p, n))
            .collect::<Result<Vec<_>>>()?;
        LinearGame::new(n, &gens)
    }

    /// Parses a game in digit shorthand and takes `n` to be its largest voter.
    pub fn parse_infer(s: &str) -> Result<LinearGame> {
        let parts = split_game_text(s)?;
        let mut n = 0;
        for p in &parts {
            let p = p.trim();
            if let Some(inner) = p.strip_prefix('{') {
                for t in inner.trim_end_matches('}').split(',') {
                    if let Ok(v) = t.trim().parse::<usize>() {
                        n = n.max(v);
                    }
                }
            } else {
                for c in p.chars() {
                    if let Some(d) = c.to_digit(10) {
                        n = n.max(d as usize);
                    }
                }
            }
        }
        if n == 0 {
            return Err(Error::Parse(format!("cannot infer the voter count from {s:?}")));
        }
        LinearGame::parse(s, n)
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    /// Shift-minimal winning coalitions in canonical order.
    pub fn generators(&self) -> &[Coalition] {
        &self.generators
    }

    pub fn is_winning(&self, a: &Coalition) -> bool {
        a.n() == self.n() && get_bit(&self.winning, a.mask())
    }

    pub(crate) fn wins_mask(&self, m: u32) -> bool {
        get_bit(&self.winning, m)
    }

    pub fn winning_count(&self) -> usize {
        self.winning.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Number of losing coalitions.
    pub fn rank(&self) -> usize {
        (1usize << self.n) - self.winning_count()
    }

    pub fn winning_coalitions(&self) -> Vec<Coalition> {
        self.coalitions_where(true)
    }

    pub fn losing_coalitions(&self) -> Vec<Coalition> {
        self.coalitions_where(false)
    }

    fn coalitions_where(&self, winning: bool) -> Vec<Coalition> {
        let n = self.n();
        let mut v: Vec<Coalition> = (0..(1u32 << n))
            .filter(|&m| self.wins_mask(m) == winning)
            .map(|m| Coalition::from_mask_unchecked(n, m))
            .collect();
        v.sort();
        v
    }

    /// `W_self ⊆ W_other`, i.e. `self` is at least as high as `other` in `J_n`.
    pub fn is_above_or_equal(&self, other: &LinearGame) -> bool {
        self.n == other.n && self.winning.iter().zip(&other.winning).all(|(a, b)| a & !b == 0)
    }

    /// The dual game: `A` wins in the dual iff `N \ A` loses here.
    pub fn dual(&self) -> LinearGame {
        let n = self.n();
        let full = full_mask(n);
        let mut bits = vec![0u64; bitset_len(n)];
        for m in 0..(1u32 << n) {
            if !self.wins_mask(full & !m) {
                set_bit(&mut bits, m);
            }
        }
        LinearGame::from_winning_bits(n, bits)
    }

    pub fn classify(&self) -> Classification {
        let full = full_mask(self.n());
        let mut proper = true;
        let mut strong = true;
        for m in 0..(1u32 << self.n) {
            let c = full & !m;
            if m > c {
                continue;
            }
            match (self.wins_mask(m), self.wins_mask(c)) {
                (true, true) => proper = false,
                (false, false) => strong = false,
                _ => {}
            }
        }
        Classification {
            proper,
            strong,
            self_dual: proper && strong,
        }
    }

    /// Weak desirability `i ≽ j`: every `S ∪ {j}` that wins has `S ∪ {i}` winning.
    fn at_least_as_desirable(&self, i: usize, j: usize) -> bool {
        let (bi, bj) = (1u32 << (i - 1), 1u32 << (j - 1));
        let rest = full_mask(self.n()) & !bi & !bj;
        // enumerate the subsets of `rest`
        let mut s = rest;
        loop {
            if self.wins_mask(s | bj) && !self.wins_mask(s | bi) {
                return false;
            }
            if s == 0 {
                return true;
            }
            s = (s - 1) & rest;
        }
    }

    pub fn desirability(&self, i: usize, j: usize) -> Result<Desirability> {
        let n = self.n();
        for v in [i, j] {
            if v == 0 || v > n {
                return Err(Error::VoterIndex { voter: v, n });
            }
        }
        if i == j {
            return Err(Error::OutOfRange(format!("desirability needs two distinct voters, got {i} twice")));
        }
        Ok(match (self.at_least_as_desirable(i, j), self.at_least_as_desirable(j, i)) {
            (true, true) => Desirability::Equal,
            (true, false) => Desirability::More,
            (false, true) => Desirability::Less,
            (false, false) => unreachable!("linear games have a total desirability relation"),
        })
    }

    /// Winning coalitions from which no single voter can leave.
    pub fn minimal_winning(&self) -> Vec<Coalition> {
        let n = self.n();
        let mut v: Vec<Coalition> = (0..(1u32 << n))
            .filter(|&m| {
                self.wins_mask(m) && {
                    let mut rest = m;
                    let mut minimal = true;
                    while rest != 0 {
                        let low = rest & rest.wrapping_neg();
                        if self.wins_mask(m & !low) {
                            minimal = false;
                            break;
                        }
                        rest &= rest - 1;
                    }
                    minimal
                }
            })
            .map(|m| Coalition::from_mask_unchecked(n, m))
            .collect();
        v.sort();
        v
    }

    pub fn shift_maximal_losing(&self) -> LosingFrontier {
        let n = self.n();
        let mut v: Vec<Coalition> = (0..(1u32 << n))
            .filter(|&m| !self.wins_mask(m) && upper_cover_masks(n, m).all(|u| self.wins_mask(u)))
            .map(|m| Coalition::from_mask_unchecked(n, m))
            .collect();
        v.sort();
        if v.len() == 1 && v[0].is_empty() {
            LosingFrontier::Bottom
        } else {
            LosingFrontier::Maximal(v)
        }
    }

    /// Shift-maximal losing coalitions, including the empty coalition for `<1>`.
    pub(crate) fn maximal_losing_raw(&self) -> Vec<Coalition> {
        match self.shift_maximal_losing() {
            LosingFrontier::Bottom => vec![Coalition::from_mask_unchecked(self.n(), 0)],
            LosingFrontier::Maximal(v) => v,
        }
    }

    /// Voters that belong to no minimal winning coalition, strongest first.
    pub fn dummies(&self) -> Vec<usize> {
        let used = self.minimal_winning().iter().fold(0u32, |acc, c| acc | c.mask());
        (1..=self.n()).rev().filter(|&v| used & (1 << (v - 1)) == 0).collect()
    }

    pub fn hierarchy(&self) -> Hierarchy {
        let n = self.n();
        let mut runs: Vec<Vec<usize>> = vec![vec![n]];
        for v in (1..n).rev() {
            let prev = *runs.last().unwrap().last().unwrap();
            if self.at_least_as_desirable(v, prev) {
                runs.last_mut().unwrap().push(v);
            } else {
                runs.push(vec![v]);
            }
        }
        let dummies = self.dummies();
        if !dummies.is_empty() {
            let last = runs.pop().unwrap();
            debug_assert_eq!(last, dummies, "dummies form the weakest class");
        }
        Hierarchy {
            n,
            classes: runs,
            dummies,
        }
    }

    /// The same game on `m >= n` voters with `m - n` dummies added at the bottom.
    pub fn induce(&self, m: usize) -> Result<LinearGame> {
        if m < self.n() {
            return Err(Error::InduceTarget { from: self.n(), target: m });
        }
        check_voters(m)?;
        let k = m - self.n();
        let gens = self
            .generators
            .iter()
            .map(|g| g.shifted_up(k))
            .collect::<Result<Vec<_>>>()?;
        LinearGame::new(m, &gens)
    }

    /// The game covering `self` in `J_n` obtained by making generator `a` lose.
    pub fn without_generator(&self, a: &Coalition) -> Result<LinearGame> {
        if !self.generators.contains(a) {
            return Err(Error::NotGenerator(*a));
        }
        if a.is_grand() {
            return Err(Error::TrivialNeighbor);
        }
        let mut bits = self.winning.clone();
        clear_bit(&mut bits, a.mask());
        Ok(LinearGame::from_winning_bits(self.n(), bits))
    }

    /// The game covered by `self` in `J_n` obtained by making `b` win.
    pub fn with_coalition(&self, b: &Coalition) -> Result<LinearGame> {
        if b.is_empty() {
            return Err(Error::TrivialNeighbor);
        }
        if !self.shift_maximal_losing().coalitions().contains(b) {
            return Err(Error::NotMaximalLosing(*b));
        }
        let mut bits = self.winning.clone();
        set_bit(&mut bits, b.mask());
        Ok(LinearGame::from_winning_bits(self.n(), bits))
    }

    /// Games covering `self` in `J_n`, one per generator (none for `<N>`).
    pub fn covers_in_j(&self) -> Vec<LinearGame> {
        self.generators
            .iter()
            .filter_map(|g| self.without_generator(g).ok())
            .collect()
    }

    /// Games covered by `self` in `J_n`, one per shift-maximal losing coalition.
    pub fn covered_in_j(&self) -> Vec<LinearGame> {
        self.shift_maximal_losing()
            .coalitions()
            .iter()
            .filter_map(|b| self.with_coalition(b).ok())
            .collect()
    }

    pub fn is_bottom(&self) -> bool {
        self.rank() == 1
    }

    pub fn is_top(&self) -> bool {
        self.winning_count() == 1
    }

    pub fn to_json(&self) -> GameJson {
        GameJson {
            n: self.n(),
            generators: self.generators.iter().map(Coalition::members_desc).collect(),
        }
    }

    pub fn from_json(j: &GameJson) -> Result<LinearGame> {
        let gens = j
            .generators
            .iter()
            .map(|g| Coalition::new(j.n, g))
            .collect::<Result<Vec<_>>>()?;
        LinearGame::new(j.n, &gens)
    }

    /// Canonical sort key: rank, then printed form.
    pub fn canonical_cmp(&self, other: &LinearGame) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.rank().cmp(&other.rank()))
            .then_with(|| self.to_string().cmp(&other.to_string()))
    }
}

/// Generators are listed in decreasing lexicographic order of their member
/// lists, e.g. `<65;632;543;4321>`.
fn display_order(a: &Coalition, b: &Coalition) -> Ordering {
    b.members_desc().cmp(&a.members_desc())
}

fn split_game_text(s: &str) -> Result<Vec<String>> {
    let t = s.trim();
    let inner = t
        .strip_prefix('<')
        .and_then(|r| r.strip_suffix('>'))
        .or_else(|| t.strip_prefix('⟨').and_then(|r| r.strip_suffix('⟩')))
        .ok_or_else(|| Error::Parse(format!("game {s:?} must look like <c1;c2;...>")))?;
    if inner.trim().is_empty() {
        return Err(Error::NoGenerators);
    }
    // commas separate generators only when no braced coalitions are present
    let seps: &[char] = if inner.contains('{') { &[';'] } else { &[';', ','] };
    Ok(inner.split(seps).map(|p| p.trim().to_string()).collect())
}

impl PartialEq for LinearGame {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.generators == other.generators
    }
}

impl Eq for LinearGame {}

impl PartialOrd for LinearGame {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LinearGame {
    fn cmp(&self, other: &Self) -> Ordering {
        self.canonical_cmp(other)
    }
}

impl Hash for LinearGame {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.winning.hash(state);
    }
}

impl fmt::Display for LinearGame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str(">")
    }
}

impl fmt::Debug for LinearGame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}/{}", self.n)
    }
}
