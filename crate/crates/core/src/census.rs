//! Counting results: one-generator proper games, symmetric games, and the
//! census of linear games on up to six voters against the bundled table.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::binomial;
use rayon::prelude::*;

use crate::coalition::{check_voters, Coalition};
use crate::error::{Error, Result};
use crate::game::LinearGame;
use crate::poset::{build_poset, PosetKind};
use crate::weighted::{find_trade_failure, is_weighted, Weightedness};

const APPENDIX_N6: &str = include_str!("../data/appendix_a_n6.txt");

/// `2^n - C(n, floor(n/2))`.
pub fn one_generator_proper_count(n: usize) -> Result<u64> {
    check_voters(n)?;
    Ok((1u64 << n) - binomial(n as u64, (n / 2) as u64))
}

/// Coalitions `A` holding at least `k` of the `2k - 1` strongest voters for
/// some `k`, in display order.
pub fn one_generator_proper_list(n: usize) -> Result<Vec<Coalition>> {
    check_voters(n)?;
    if n > 12 {
        return Err(Error::OutOfRange(format!("listing supports up to 12 voters, got {n}")));
    }
    let mut out = Vec::new();
    for mask in 1..1u32 << n {
        let c = Coalition::from_mask(n, mask)?;
        let top = c.members_desc();
        let hit = (1..=n.div_ceil(2)).any(|k| top.iter().filter(|&&i| i + 2 * k - 1 > n).count() >= k);
        if hit {
            out.push(c);
        }
    }
    sort_display(&mut out);
    Ok(out)
}

/// Same set as [`one_generator_proper_list`], found by testing each
/// one-generator game for properness.
pub fn one_generator_proper_brute(n: usize) -> Result<Vec<Coalition>> {
    check_voters(n)?;
    let mut out = Vec::new();
    for mask in 1..1u32 << n {
        let c = Coalition::from_mask(n, mask)?;
        if LinearGame::new(n, &[c])?.classify().proper {
            out.push(c);
        }
    }
    sort_display(&mut out);
    Ok(out)
}

fn sort_display(v: &mut [Coalition]) {
    v.sort_by(|a, b| b.members_desc().cmp(&a.members_desc()));
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymmetricCounts {
    pub total: u64,
    pub proper: u64,
}

/// Closed forms for the number of symmetric games (dummies allowed).
pub fn symmetric_game_counts(n: usize) -> SymmetricCounts {
    let n = n as u64;
    let proper = if n % 2 == 0 { (n * n + 2 * n) / 4 } else { (n * n + 2 * n + 1) / 4 };
    SymmetricCounts {
        total: binomial(n + 1, 2),
        proper,
    }
}

/// Every game in which the `m` strongest voters are interchangeable and need
/// `t` of themselves to win, the rest being dummies.
pub fn symmetric_games(n: usize) -> Result<Vec<LinearGame>> {
    check_voters(n)?;
    let mut out = Vec::new();
    for m in 1..=n {
        for t in 1..=m {
            let members: Vec<usize> = (n - m + 1..=n - m + t).collect();
            out.push(LinearGame::new(n, &[Coalition::new(n, &members)?])?);
        }
    }
    Ok(out)
}

pub fn symmetric_game_counts_enumerated(n: usize) -> Result<SymmetricCounts> {
    let games = symmetric_games(n)?;
    Ok(SymmetricCounts {
        total: games.len() as u64,
        proper: games.iter().filter(|g| g.classify().proper).count() as u64,
    })
}

/// All linear games on `n` voters with their weightedness.
#[derive(Debug, Clone)]
pub struct Census {
    pub n: usize,
    pub games: Vec<LinearGame>,
    pub weighted: Vec<bool>,
}

impl Census {
    pub fn build(n: usize) -> Result<Census> {
        let p = build_poset(n, PosetKind::J)?;
        let games = p.nodes().to_vec();
        let weighted = games.par_iter().map(|g| is_weighted(g).is_weighted()).collect();
        Ok(Census { n, games, weighted })
    }

    pub fn len(&self) -> usize {
        self.games.len()
    }

    pub fn is_empty(&self) -> bool {
        self.games.is_empty()
    }

    pub fn unweighted(&self) -> impl Iterator<Item = &LinearGame> {
        self.games.iter().zip(&self.weighted).filter(|(_, &w)| !w).map(|(g, _)| g)
    }

    /// Games of the upper half (`rank >= 2^(n-1)`).
    pub fn upper_half(&self) -> impl Iterator<Item = &LinearGame> {
        let half = 1usize << (self.n - 1);
        self.games.iter().filter(move |g| g.rank() >= half)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountsReport {
    pub j5_total: usize,
    pub j5_unweighted: usize,
    pub j6_total: usize,
    pub j6_unweighted: usize,
    pub j6_rank32: usize,
    pub j6_rank32_self_dual: usize,
    pub j6_upper_improper: usize,
    /// Highest-rank improper game of the upper half of `J_6`.
    pub top_improper: Option<(LinearGame, usize)>,
    pub pi4_nodes: usize,
}

const EXPECTED_COUNTS: [(&str, usize); 8] = [
    ("J5 games", 117),
    ("J5 unweighted", 0),
    ("J6 games", 1171),
    ("J6 unweighted", 60),
    ("J6 rank 32", 41),
    ("J6 rank 32 self-dual", 21),
    ("J6+ improper", 40),
    ("Pi4 games", 14),
];

impl CountsReport {
    pub fn compute(j5: &Census, j6: &Census) -> Result<CountsReport> {
        if j5.n != 5 || j6.n != 6 {
            return Err(Error::OutOfRange("counts need the 5- and 6-voter censuses".into()));
        }
        let rank32: Vec<&LinearGame> = j6.games.iter().filter(|g| g.rank() == 32).collect();
        let improper: Vec<&LinearGame> = j6.upper_half().filter(|g| !g.classify().proper).collect();
        let top_improper = improper
            .iter()
            .max_by(|a, b| a.rank().cmp(&b.rank()).then_with(|| b.canonical_cmp(a)))
            .map(|g| ((*g).clone(), g.rank()));
        Ok(CountsReport {
            j5_total: j5.len(),
            j5_unweighted: j5.unweighted().count(),
            j6_total: j6.len(),
            j6_unweighted: j6.unweighted().count(),
            j6_rank32: rank32.len(),
            j6_rank32_self_dual: rank32.iter().filter(|g| g.classify().self_dual).count(),
            j6_upper_improper: improper.len(),
            top_improper,
            pi4_nodes: build_poset(4, PosetKind::Pi)?.len(),
        })
    }

    fn values(&self) -> [usize; 8] {
        [
            self.j5_total,
            self.j5_unweighted,
            self.j6_total,
            self.j6_unweighted,
            self.j6_rank32,
            self.j6_rank32_self_dual,
            self.j6_upper_improper,
            self.pi4_nodes,
        ]
    }

    /// One line per count, `name: value`, in a fixed order.
    pub fn lines(&self) -> Vec<String> {
        let mut out: Vec<String> = EXPECTED_COUNTS
            .iter()
            .zip(self.values())
            .map(|((name, _), v)| format!("{name}: {v}"))
            .collect();
        if let Some((g, r)) = &self.top_improper {
            out.push(format!("highest improper in J6+: {g} at rank {r}"));
        }
        out
    }

    /// Differences from the known values; empty when all agree.
    pub fn mismatches(&self) -> Vec<String> {
        let mut out: Vec<String> = EXPECTED_COUNTS
            .iter()
            .zip(self.values())
            .filter(|((_, want), got)| want != got)
            .map(|((name, want), got)| format!("{name}: expected {want}, got {got}"))
            .collect();
        let want = LinearGame::parse("<65;4321>", 6).expect("valid game");
        match &self.top_improper {
            Some((g, 37)) if *g == want => {}
            other => out.push(format!(
                "highest improper in J6+: expected {want} at rank 37, got {}",
                other.as_ref().map_or("none".to_string(), |(g, r)| format!("{g} at rank {r}"))
            )),
        }
        out
    }
}

/// One row of the bundled table: a rank-32 unweighted game, a higher-rank
/// unweighted game and the latter's rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AppendixRow {
    pub rank32: LinearGame,
    pub higher: LinearGame,
    pub rank: usize,
}

fn parse_generator_list(s: &str, n: usize) -> Result<LinearGame> {
    let gens = s
        .split(',')
        .map(|t| Coalition::parse(t.trim(), n))
        .collect::<Result<Vec<_>>>()?;
    LinearGame::new(n, &gens)
}

pub fn parse_appendix(text: &str, n: usize) -> Result<Vec<AppendixRow>> {
    let mut rows = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('|').collect();
        if cols.len() != 3 {
            return Err(Error::Parse(format!("line {}: expected 3 columns", no + 1)));
        }
        let rank = cols[2]
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("line {}: bad rank {:?}", no + 1, cols[2].trim())))?;
        rows.push(AppendixRow {
            rank32: parse_generator_list(cols[0], n)?,
            higher: parse_generator_list(cols[1], n)?,
            rank,
        });
    }
    Ok(rows)
}

/// The bundled table of unweighted 6-voter games.
pub fn appendix_table() -> Result<Vec<AppendixRow>> {
    parse_appendix(APPENDIX_N6, 6)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AppendixReport {
    pub rows: usize,
    pub unweighted_total: usize,
    /// Ranks of the higher-rank unweighted games, as computed.
    pub higher_ranks: BTreeMap<usize, usize>,
    pub all_improper: bool,
    pub discrepancies: Vec<String>,
}

impl AppendixReport {
    pub fn is_match(&self) -> bool {
        self.discrepancies.is_empty()
    }
}

/// What a discrepant game actually is: rank plus a realization or a trade.
fn describe(g: &LinearGame) -> String {
    match is_weighted(g) {
        Weightedness::Weighted(r) => format!("rank {}, weighted by {r}", g.rank()),
        Weightedness::Unweighted => match find_trade_failure(g, 3) {
            Some(c) => format!("rank {}, unweighted, trade {c}", g.rank()),
            None => format!("rank {}, unweighted", g.rank()),
        },
    }
}

fn diff(label: &str, want: &BTreeSet<&LinearGame>, got: &BTreeSet<&LinearGame>, out: &mut Vec<String>) {
    for g in want.difference(got) {
        out.push(format!("{label}: {g} listed but not found ({})", describe(g)));
    }
    for g in got.difference(want) {
        out.push(format!("{label}: {g} found but not listed ({})", describe(g)));
    }
}

/// Recomputes the unweighted games of `J_6` and compares them with the table.
pub fn verify_appendix(census: &Census) -> Result<AppendixReport> {
    if census.n != 6 {
        return Err(Error::OutOfRange(format!("the table covers 6 voters, not {}", census.n)));
    }
    let rows = appendix_table()?;
    let unweighted: Vec<&LinearGame> = census.unweighted().collect();
    let mut out = Vec::new();

    let listed32: BTreeSet<&LinearGame> = rows.iter().map(|r| &r.rank32).collect();
    let listed_hi: BTreeSet<&LinearGame> = rows.iter().map(|r| &r.higher).collect();
    let found32: BTreeSet<&LinearGame> = unweighted.iter().copied().filter(|g| g.rank() == 32).collect();
    let found_hi: BTreeSet<&LinearGame> = unweighted.iter().copied().filter(|g| g.rank() > 32).collect();
    let found_lo: BTreeSet<&LinearGame> = unweighted.iter().copied().filter(|g| g.rank() < 32).collect();
    diff("rank 32", &listed32, &found32, &mut out);
    diff("above rank 32", &listed_hi, &found_hi, &mut out);

    for r in &rows {
        if r.higher.rank() != r.rank {
            out.push(format!("{}: listed rank {}, computed {}", r.higher, r.rank, r.higher.rank()));
        }
    }
    let duals: Vec<LinearGame> = rows.iter().map(|r| r.higher.dual()).collect();
    let duals: BTreeSet<&LinearGame> = duals.iter().collect();
    diff("below rank 32 (duals)", &duals, &found_lo, &mut out);

    let mut all_improper = true;
    for g in &unweighted {
        if g.classify().proper {
            all_improper = false;
            out.push(format!("{g}: unweighted but proper"));
        }
    }
    let mut higher_ranks = BTreeMap::new();
    for g in &found_hi {
        *higher_ranks.entry(g.rank()).or_insert(0) += 1;
    }
    Ok(AppendixReport {
        rows: rows.len(),
        unweighted_total: unweighted.len(),
        higher_ranks,
        all_improper,
        discrepancies: out,
    })
}
