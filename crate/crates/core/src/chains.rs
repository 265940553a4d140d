//! Saturated chains of games: consistency, enumeration and the probes on
//! chains and weighted subposets.

use std::collections::HashSet;

use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::game::LinearGame;
use crate::geometry::vertical_chain;
use crate::lp::{self, int, Constraint, LinearSystem, Rational, Relation};
use crate::poset::{build_poset, GamePoset, PosetKind};
use crate::weighted::{add_ordering, coalition_difference, normalized_space};

/// One strict comparison `w_lower < w_upper` forced by a chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Comparison {
    pub lower: Coalition,
    pub upper: Coalition,
}

impl Comparison {
    /// The same comparison with the voters common to both sides removed.
    pub fn reduced(&self) -> Comparison {
        let common = self.lower.mask() & self.upper.mask();
        let n = self.lower.n();
        Comparison {
            lower: Coalition::from_mask(n, self.lower.mask() & !common).expect("same voter count"),
            upper: Coalition::from_mask(n, self.upper.mask() & !common).expect("same voter count"),
        }
    }
}

impl std::fmt::Display for Comparison {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} < {}", self.lower, self.upper)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainReport {
    pub chain: Vec<LinearGame>,
    pub saturated: bool,
    pub maximal: bool,
    pub self_dual: bool,
    /// Coalitions in the order the chain makes them lose.
    pub generator_order: Vec<Coalition>,
    /// Generators of the highest game, each above the whole order.
    pub top_generators: Vec<Coalition>,
    pub consistent: bool,
    /// Weights `w_1, ..., w_n` realizing the order, when consistent.
    pub witness: Option<Vec<Rational>>,
    /// A minimal set of the chain's comparisons that no weights satisfy.
    pub conflicts: Vec<Comparison>,
    /// Two comparisons that reduce to opposite orders of the same pair,
    /// found by the embedded-copy test before any LP is solved.
    pub prefilter_conflict: Option<(Comparison, Comparison)>,
}

impl ChainReport {
    /// The comparisons the chain imposes, consecutive ones only.
    pub fn comparisons(&self) -> Vec<Comparison> {
        chain_comparisons(&self.generator_order, &self.top_generators)
    }

    /// Whether `w` (voter 1 first) satisfies every comparison of the chain.
    pub fn accepts_weights(&self, w: &[Rational]) -> bool {
        let sys = consistency_system(w.len(), &self.comparisons());
        let mut point = vec![int(0)];
        point.extend_from_slice(w);
        sys.satisfied_by(&point)
    }
}

fn chain_comparisons(order: &[Coalition], tops: &[Coalition]) -> Vec<Comparison> {
    let mut out: Vec<Comparison> = order
        .windows(2)
        .map(|p| Comparison {
            lower: p[0],
            upper: p[1],
        })
        .collect();
    if let Some(last) = order.last() {
        out.extend(tops.iter().map(|t| Comparison {
            lower: *last,
            upper: *t,
        }));
    }
    out
}

/// Ordered, normalized weights with every comparison strict. Variable 0 is
/// an unused quota slot so the layout matches the other `(q, w)` systems.
fn consistency_system(n: usize, comparisons: &[Comparison]) -> LinearSystem {
    let mut s = normalized_space(n);
    add_ordering(&mut s, n);
    for c in comparisons {
        s.push(Constraint {
            coeffs: coalition_difference(n, &c.lower, &c.upper),
            rel: Relation::Lt,
            rhs: int(0),
        });
    }
    s
}

/// Checks that `chain` climbs `J_n` one cover at a time and returns the
/// coalition removed at each step.
fn removed_coalitions(chain: &[LinearGame]) -> Result<Vec<Coalition>> {
    let first = chain.first().ok_or_else(|| Error::NotSaturated("empty chain".into()))?;
    let n = first.n();
    let mut removed = Vec::with_capacity(chain.len().saturating_sub(1));
    for (i, pair) in chain.windows(2).enumerate() {
        let (lo, hi) = (&pair[0], &pair[1]);
        if hi.n() != n {
            return Err(Error::MismatchedVoters(n, hi.n()));
        }
        if hi.rank() != lo.rank() + 1 || !hi.is_above_or_equal(lo) {
            return Err(Error::NotSaturated(format!("{hi} does not cover {lo} (step {})", i + 1)));
        }
        let a = lo
            .generators()
            .iter()
            .find(|g| !hi.is_winning(g))
            .copied()
            .expect("a cover removes one generator");
        removed.push(a);
    }
    Ok(removed)
}

/// Deletion filter: a minimal subset of `comparisons` that is still
/// infeasible together with the ordering and normalization.
fn conflicting_subset(n: usize, comparisons: &[Comparison]) -> Result<Vec<Comparison>> {
    let mut keep: Vec<Comparison> = comparisons.to_vec();
    let mut i = 0;
    while i < keep.len() {
        let mut trial = keep.clone();
        trial.remove(i);
        if lp::strictly_feasible(&consistency_system(n, &trial))?.is_none() {
            keep = trial;
        } else {
            i += 1;
        }
    }
    Ok(keep)
}

pub fn chain_consistency(chain: &[LinearGame]) -> Result<ChainReport> {
    let removed = removed_coalitions(chain)?;
    let n = chain[0].n();
    let top = chain.last().unwrap();
    let top_generators: Vec<Coalition> = if top.is_top() { Vec::new() } else { top.generators().to_vec() };
    let comparisons = chain_comparisons(&removed, &top_generators);

    let transitive: Vec<Comparison> = {
        let mut all = Vec::new();
        let mut order = removed.clone();
        order.extend(top_generators.iter().take(1));
        for (i, a) in order.iter().enumerate() {
            for b in &order[i + 1..] {
                all.push(Comparison { lower: *a, upper: *b });
            }
        }
        if let Some(last) = removed.last() {
            all.extend(top_generators.iter().skip(1).map(|t| Comparison { lower: *last, upper: *t }));
        }
        all
    };
    let prefilter_conflict = prefilter_pairs(&transitive);

    let witness = lp::strictly_feasible(&consistency_system(n, &comparisons))?.map(|p| p[1..].to_vec());
    let conflicts = if witness.is_none() {
        conflicting_subset(n, &comparisons)?
    } else {
        Vec::new()
    };
    if prefilter_conflict.is_some() {
        debug_assert!(witness.is_none(), "the embedded-copy condition is necessary");
    }

    let members: HashSet<&LinearGame> = chain.iter().collect();
    let self_dual = chain.iter().all(|g| members.contains(&g.dual()));
    Ok(ChainReport {
        chain: chain.to_vec(),
        saturated: true,
        maximal: chain[0].is_bottom() && top.is_top(),
        self_dual,
        generator_order: removed,
        top_generators,
        consistent: witness.is_some(),
        witness,
        conflicts,
        prefilter_conflict,
    })
}

fn prefilter_pairs(all: &[Comparison]) -> Option<(Comparison, Comparison)> {
    let reduced: Vec<Comparison> = all.iter().map(Comparison::reduced).collect();
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            if reduced[i].lower == reduced[j].upper && reduced[i].upper == reduced[j].lower {
                return Some((all[i], all[j]));
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainEnumeration {
    /// Each chain as node indices of the poset, lowest first.
    pub chains: Vec<Vec<usize>>,
    /// Set when `limit` stopped the search early.
    pub truncated: bool,
}

/// Maximal saturated chains of `p` (minimal node to maximal node), in
/// depth-first order over canonically ordered nodes.
pub fn enumerate_maximal_chains(p: &GamePoset, limit: usize) -> ChainEnumeration {
    let mut out = ChainEnumeration {
        chains: Vec::new(),
        truncated: false,
    };
    for start in p.minimal_nodes() {
        let mut path = vec![start];
        if !walk(p, &mut path, limit, &mut out) {
            break;
        }
    }
    out
}

fn walk(p: &GamePoset, path: &mut Vec<usize>, limit: usize, out: &mut ChainEnumeration) -> bool {
    let here = *path.last().unwrap();
    let ups = p.upper_covers(here);
    if ups.is_empty() {
        if out.chains.len() == limit {
            out.truncated = true;
            return false;
        }
        out.chains.push(path.clone());
        return true;
    }
    for &u in ups {
        path.push(u);
        let go_on = walk(p, path, limit, out);
        path.pop();
        if !go_on {
            return false;
        }
    }
    true
}

/// Maximal chains of `p` that are closed under duality. The lower half is
/// searched up to the middle rank, which must hold a self-dual game; the
/// upper half is the reversed duals of the lower half.
pub fn enumerate_self_dual_chains(p: &GamePoset, limit: usize) -> ChainEnumeration {
    let mut out = ChainEnumeration {
        chains: Vec::new(),
        truncated: false,
    };
    let middle = 1usize << (p.n() - 1);
    for start in p.minimal_nodes() {
        let mut path = vec![start];
        if !walk_half(p, middle, &mut path, limit, &mut out) {
            break;
        }
    }
    out
}

fn walk_half(p: &GamePoset, middle: usize, path: &mut Vec<usize>, limit: usize, out: &mut ChainEnumeration) -> bool {
    let here = *path.last().unwrap();
    if p.rank_of(here) == middle {
        if p.dual_of(here) != Some(here) {
            return true;
        }
        if out.chains.len() == limit {
            out.truncated = true;
            return false;
        }
        let mut chain = path.clone();
        for &i in path[..path.len() - 1].iter().rev() {
            match p.dual_of(i) {
                Some(d) => chain.push(d),
                None => return true,
            }
        }
        out.chains.push(chain);
        return true;
    }
    for &u in p.upper_covers(here) {
        path.push(u);
        let go_on = walk_half(p, middle, path, limit, out);
        path.pop();
        if !go_on {
            return false;
        }
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InducedProbe {
    /// Every `J`-comparable pair of weighted games is joined by a saturated
    /// chain of weighted games.
    Holds { pairs_checked: usize },
    Counterexample { lower: LinearGame, upper: LinearGame },
}

/// Searches `W_n` for weighted `u < v` (in `J_n`) with no all-weighted
/// saturated chain between them.
pub fn probe_induced_conjecture(n: usize) -> Result<InducedProbe> {
    let w = build_poset(n, PosetKind::W)?;
    let len = w.len();
    let words = len.div_ceil(64);
    // reach[i]: nodes reachable upward from i along W-edges (including i)
    let mut reach = vec![vec![0u64; words]; len];
    let mut order: Vec<usize> = (0..len).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(w.rank_of(i)));
    for &i in &order {
        let mut bits = vec![0u64; words];
        bits[i / 64] |= 1 << (i % 64);
        for &u in w.upper_covers(i) {
            for (b, r) in bits.iter_mut().zip(&reach[u]) {
                *b |= r;
            }
        }
        reach[i] = bits;
    }
    let mut pairs = 0;
    for i in 0..len {
        for j in 0..len {
            let (u, v) = (&w.nodes()[i], &w.nodes()[j]);
            if i != j && v.is_above_or_equal(u) {
                pairs += 1;
                if reach[i][j / 64] >> (j % 64) & 1 == 0 {
                    return Ok(InducedProbe::Counterexample {
                        lower: u.clone(),
                        upper: v.clone(),
                    });
                }
            }
        }
    }
    Ok(InducedProbe::Holds { pairs_checked: pairs })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerticalProbe {
    /// Self-dual maximal chains of `W_n` examined.
    pub chains_examined: usize,
    /// Those among them that are consistent.
    pub candidates: usize,
    pub witnesses_found: usize,
    /// Candidate chains for which no generic weight vector was found.
    pub without_witness: Vec<Vec<LinearGame>>,
    pub truncated: bool,
}

/// For self-dual maximal chains of `W_n` that are consistent, looks for a
/// generic weight vector whose vertical line traverses exactly that chain.
pub fn probe_vertical_chains(n: usize, limit: usize) -> Result<VerticalProbe> {
    let w = build_poset(n, PosetKind::W)?;
    let chains = enumerate_self_dual_chains(&w, limit);
    let mut probe = VerticalProbe {
        chains_examined: chains.chains.len(),
        candidates: 0,
        witnesses_found: 0,
        without_witness: Vec::new(),
        truncated: chains.truncated,
    };
    for ids in &chains.chains {
        let chain: Vec<LinearGame> = ids.iter().map(|&i| w.nodes()[i].clone()).collect();
        let report = chain_consistency(&chain)?;
        if !(report.consistent && report.self_dual && report.maximal) {
            continue;
        }
        probe.candidates += 1;
        // a strict order on every coalition, with w_1 > 0 so the empty
        // coalition stays below {1}
        let mut sys = consistency_system(n, &report.comparisons());
        sys.constrain(&[(1, int(1))], Relation::Gt, int(0));
        let found = match lp::strictly_feasible(&sys)? {
            Some(p) => {
                let weights = &p[1..];
                vertical_chain(weights)
                    .map(|steps| steps.iter().map(|s| &s.game).eq(chain.iter()))
                    .unwrap_or(false)
            }
            None => false,
        };
        if found {
            probe.witnesses_found += 1;
        } else {
            probe.without_witness.push(chain);
        }
    }
    Ok(probe)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::rat;

    fn g(s: &str, n: usize) -> LinearGame {
        LinearGame::parse(s, n).unwrap()
    }

    fn c(s: &str, n: usize) -> Coalition {
        Coalition::parse(s, n).unwrap()
    }

    #[test]
    fn inconsistent_five_voter_chain() {
        let chain: Vec<LinearGame> = ["<54;531>", "<54;532>", "<541;532>", "<532>", "<542;5321>", "<543;5321>"]
            .iter()
            .map(|s| g(s, 5))
            .collect();
        let r = chain_consistency(&chain).unwrap();
        assert!(!r.consistent);
        assert!(!r.maximal);
        let order: Vec<String> = r.generator_order.iter().map(|c| c.to_string()).collect();
        assert_eq!(order, ["531", "54", "541", "532", "542"]);
        let reduced: Vec<String> = r.conflicts.iter().map(|c| c.reduced().to_string()).collect();
        assert!(reduced.contains(&"31 < 4".to_string()), "{reduced:?}");
        assert!(reduced.contains(&"4 < 31".to_string()), "{reduced:?}");
        assert!(r.prefilter_conflict.is_some());
    }

    #[test]
    fn unsaturated_chain_is_rejected() {
        let chain = [g("<1>", 3), g("<21>", 3)];
        assert!(matches!(chain_consistency(&chain), Err(Error::NotSaturated(_))));
        assert!(matches!(chain_consistency(&[]), Err(Error::NotSaturated(_))));
    }

    #[test]
    fn pi4_chains() {
        let p = build_poset(4, PosetKind::Pi).unwrap();
        let e = enumerate_maximal_chains(&p, 1000);
        assert_eq!(e.chains.len(), 14);
        assert!(!e.truncated);
        for ids in &e.chains {
            let chain: Vec<LinearGame> = ids.iter().map(|&i| p.nodes()[i].clone()).collect();
            assert!(chain_consistency(&chain).unwrap().consistent);
        }
        let e = enumerate_maximal_chains(&p, 5);
        assert_eq!(e.chains.len(), 5);
        assert!(e.truncated);
    }

    #[test]
    fn w3_chains_have_length_seven() {
        let p = build_poset(3, PosetKind::W).unwrap();
        let e = enumerate_maximal_chains(&p, 1000);
        assert!(!e.chains.is_empty());
        assert!(e.chains.iter().all(|c| c.len() == 7));
    }

    #[test]
    fn single_node_poset_has_one_chain() {
        let p = build_poset(1, PosetKind::J).unwrap();
        assert_eq!(enumerate_maximal_chains(&p, 10).chains, vec![vec![0]]);
        assert_eq!(enumerate_self_dual_chains(&p, 10).chains, vec![vec![0]]);
    }

    #[test]
    fn self_dual_chains_are_the_self_dual_maximal_ones() {
        for kind in [PosetKind::J, PosetKind::W] {
            let p = build_poset(4, kind).unwrap();
            let all = enumerate_maximal_chains(&p, 100_000);
            let mut want: Vec<Vec<usize>> = all
                .chains
                .into_iter()
                .filter(|c| c.iter().zip(c.iter().rev()).all(|(&a, &b)| p.dual_of(a) == Some(b)))
                .collect();
            let mut got = enumerate_self_dual_chains(&p, 100_000).chains;
            want.sort();
            got.sort();
            assert!(!got.is_empty());
            assert_eq!(got, want);
        }
    }

    #[test]
    fn vertical_chain_is_consistent_with_its_weights() {
        let w = [rat(3, 20), rat(6, 20), rat(11, 20)];
        let chain: Vec<LinearGame> = vertical_chain(&w).unwrap().into_iter().map(|s| s.game).collect();
        let r = chain_consistency(&chain).unwrap();
        assert!(r.consistent && r.maximal && r.self_dual);
        assert!(r.accepts_weights(&w));
        assert_eq!(r.generator_order[0], c("1", 3));
    }

    #[test]
    fn probes_small() {
        assert!(matches!(probe_induced_conjecture(4).unwrap(), InducedProbe::Holds { .. }));
        let p = probe_vertical_chains(3, 1000).unwrap();
        assert!(p.candidates > 0);
        assert_eq!(p.witnesses_found, p.candidates);
    }
}
