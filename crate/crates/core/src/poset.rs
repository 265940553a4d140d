//! Game posets `J_n`, `J_n⁺`, `Π_n`, `W_n`, `W_n⁺` and their exports.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use log::{debug, warn};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::coalition::check_voters;
use crate::error::{Error, Result};
use crate::game::LinearGame;
use crate::mposet::CoalitionPoset;
use crate::weighted::is_weighted;

/// Largest `n` built without `force`.
pub const DEFAULT_MAX_N: usize = 6;
/// Largest `n` built at all.
pub const FORCED_MAX_N: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PosetKind {
    /// All linear games.
    J,
    /// Linear games of rank at least `2^(n-1)`.
    JPlus,
    /// Proper linear games.
    Pi,
    /// Weighted games.
    W,
    /// Proper weighted games.
    WPlus,
}

impl PosetKind {
    pub const ALL: [PosetKind; 5] = [PosetKind::J, PosetKind::JPlus, PosetKind::Pi, PosetKind::W, PosetKind::WPlus];

    pub fn name(self) -> &'static str {
        match self {
            PosetKind::J => "J",
            PosetKind::JPlus => "Jplus",
            PosetKind::Pi => "Pi",
            PosetKind::W => "W",
            PosetKind::WPlus => "Wplus",
        }
    }

    fn needs_weights(self) -> bool {
        matches!(self, PosetKind::W | PosetKind::WPlus)
    }

    /// Membership test; `weighted` is only consulted for the weighted kinds.
    pub fn admits(self, v: &LinearGame, weighted: impl FnOnce() -> bool) -> bool {
        let half = 1usize << (v.n() - 1);
        match self {
            PosetKind::J => true,
            PosetKind::JPlus => v.rank() >= half,
            PosetKind::Pi => v.classify().proper,
            PosetKind::W => weighted(),
            PosetKind::WPlus => v.classify().proper && weighted(),
        }
    }
}

impl fmt::Display for PosetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PosetKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "j" => Ok(PosetKind::J),
            "jplus" | "j+" => Ok(PosetKind::JPlus),
            "pi" => Ok(PosetKind::Pi),
            "w" => Ok(PosetKind::W),
            "wplus" | "w+" => Ok(PosetKind::WPlus),
            _ => Err(Error::Parse(format!("unknown poset kind {s:?} (expected J, Jplus, Pi, W or Wplus)"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct GamePoset {
    n: usize,
    kind: PosetKind,
    nodes: Vec<LinearGame>,
    index: HashMap<LinearGame, usize>,
    /// `(lower, upper)`: `upper` covers `lower`.
    edges: Vec<(usize, usize)>,
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
}

/// Every game of `J_n`, with its `J`-cover edges as `(lower, upper)` pairs of
/// indices, in canonical order.
pub fn enumerate_linear_games(n: usize) -> Result<(Vec<LinearGame>, Vec<(usize, usize)>)> {
    check_voters(n)?;
    let top = LinearGame::new(n, &[crate::coalition::Coalition::grand(n)?])?;
    let mut found: HashMap<LinearGame, usize> = HashMap::new();
    let mut games = vec![top.clone()];
    found.insert(top, 0);
    let mut raw_edges = Vec::new();
    let mut layer = vec![0usize];
    // walk down one rank at a time; each layer is expanded in parallel
    while !layer.is_empty() {
        let children: Vec<(usize, Vec<LinearGame>)> =
            layer.par_iter().map(|&i| (i, games[i].covered_in_j())).collect();
        let mut next = Vec::new();
        for (upper, below) in children {
            for g in below {
                let lower = match found.get(&g) {
                    Some(&j) => j,
                    None => {
                        let j = games.len();
                        found.insert(g.clone(), j);
                        games.push(g);
                        next.push(j);
                        j
                    }
                };
                raw_edges.push((lower, upper));
            }
        }
        layer = next;
    }
    // renumber in canonical order
    let mut order: Vec<usize> = (0..games.len()).collect();
    order.sort_by(|&a, &b| games[a].canonical_cmp(&games[b]));
    let mut new_id = vec![0; games.len()];
    for (k, &old) in order.iter().enumerate() {
        new_id[old] = k;
    }
    let mut sorted: Vec<Option<LinearGame>> = games.into_iter().map(Some).collect();
    let nodes: Vec<LinearGame> = order.iter().map(|&old| sorted[old].take().unwrap()).collect();
    let mut edges: Vec<(usize, usize)> = raw_edges.into_iter().map(|(a, b)| (new_id[a], new_id[b])).collect();
    edges.sort();
    Ok((nodes, edges))
}

pub fn build_poset(n: usize, kind: PosetKind) -> Result<GamePoset> {
    build_poset_with(n, kind, false)
}

/// As [`build_poset`]; `force` lifts the cap from 6 to 7 voters.
pub fn build_poset_with(n: usize, kind: PosetKind, force: bool) -> Result<GamePoset> {
    let cap = if force { FORCED_MAX_N } else { DEFAULT_MAX_N };
    if n == 0 || n > cap {
        return Err(Error::OutOfRange(format!(
            "global poset builds support 1..={cap} voters{}",
            if force { "" } else { " (use force for 7)" }
        )));
    }
    if n == FORCED_MAX_N {
        warn!("building a poset on {n} voters; this enumerates tens of thousands of games");
    }
    let (all, all_edges) = enumerate_linear_games(n)?;
    let weighted: Vec<bool> = if kind.needs_weights() {
        all.par_iter().map(|g| is_weighted(g).is_weighted()).collect()
    } else {
        vec![true; all.len()]
    };
    let keep: Vec<bool> = all
        .iter()
        .zip(&weighted)
        .map(|(g, &w)| kind.admits(g, || w))
        .collect();
    let mut new_id = vec![usize::MAX; all.len()];
    let mut nodes = Vec::new();
    for (i, g) in all.into_iter().enumerate() {
        if keep[i] {
            new_id[i] = nodes.len();
            nodes.push(g);
        }
    }
    let edges: Vec<(usize, usize)> = all_edges
        .into_iter()
        .filter(|&(a, b)| keep[a] && keep[b])
        .map(|(a, b)| (new_id[a], new_id[b]))
        .collect();
    debug!("{kind}_{n}: {} nodes, {} edges", nodes.len(), edges.len());
    Ok(GamePoset::from_parts(n, kind, nodes, edges))
}

impl GamePoset {
    fn from_parts(n: usize, kind: PosetKind, nodes: Vec<LinearGame>, edges: Vec<(usize, usize)>) -> GamePoset {
        let index = nodes.iter().cloned().enumerate().map(|(i, g)| (g, i)).collect();
        let mut up = vec![Vec::new(); nodes.len()];
        let mut down = vec![Vec::new(); nodes.len()];
        for &(lo, hi) in &edges {
            up[lo].push(hi);
            down[hi].push(lo);
        }
        GamePoset {
            n,
            kind,
            nodes,
            index,
            edges,
            up,
            down,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> PosetKind {
        self.kind
    }

    pub fn nodes(&self) -> &[LinearGame] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn index_of(&self, v: &LinearGame) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn rank_of(&self, i: usize) -> usize {
        self.nodes[i].rank()
    }

    /// Index of the dual game, when it is a node.
    pub fn dual_of(&self, i: usize) -> Option<usize> {
        self.index_of(&self.nodes[i].dual())
    }

    /// Indices of the nodes covering node `i`.
    pub fn upper_covers(&self, i: usize) -> &[usize] {
        &self.up[i]
    }

    /// Indices of the nodes covered by node `i`.
    pub fn lower_covers(&self, i: usize) -> &[usize] {
        &self.down[i]
    }

    pub fn covers_of(&self, v: &LinearGame) -> Result<Vec<&LinearGame>> {
        let i = self.index_of(v).ok_or(Error::NotANode)?;
        Ok(self.up[i].iter().map(|&j| &self.nodes[j]).collect())
    }

    pub fn covered_by(&self, v: &LinearGame) -> Result<Vec<&LinearGame>> {
        let i = self.index_of(v).ok_or(Error::NotANode)?;
        Ok(self.down[i].iter().map(|&j| &self.nodes[j]).collect())
    }

    pub fn rank_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for g in &self.nodes {
            *h.entry(g.rank()).or_insert(0) += 1;
        }
        h
    }

    /// Nodes with no lower cover.
    pub fn minimal_nodes(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.down[i].is_empty()).collect()
    }

    /// Nodes with no upper cover.
    pub fn maximal_nodes(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.up[i].is_empty()).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "kind": self.kind.name(),
            "nodes": self.nodes.iter().map(LinearGame::to_json).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|&(a, b)| [a, b]).collect::<Vec<_>>(),
            "ranks": self.nodes.iter().map(LinearGame::rank).collect::<Vec<_>>(),
        })
    }

    /// Hasse diagram with one row per rank, lowest rank at the bottom.
    pub fn to_dot(&self) -> String {
        let mut out = format!("digraph {}_{} {{\n  rankdir=BT;\n  node [shape=plaintext];\n", self.kind.name(), self.n);
        for (i, g) in self.nodes.iter().enumerate() {
            out.push_str(&format!("  g{i} [label=\"{g}\"];\n"));
        }
        let mut by_rank: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, g) in self.nodes.iter().enumerate() {
            by_rank.entry(g.rank()).or_default().push(i);
        }
        for ids in by_rank.values() {
            let names: Vec<String> = ids.iter().map(|i| format!("g{i};")).collect();
            out.push_str(&format!("  {{ rank=same; {} }}\n", names.join(" ")));
        }
        for &(lo, hi) in &self.edges {
            out.push_str(&format!("  g{lo} -> g{hi};\n"));
        }
        out.push_str("}\n");
        out
    }

    /// Node rows then edge rows in a single table.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("record,id,game,rank,lower,upper\n");
        for (i, g) in self.nodes.iter().enumerate() {
            out.push_str(&format!("node,{i},\"{g}\",{},,\n", g.rank()));
        }
        for &(lo, hi) in &self.edges {
            out.push_str(&format!("edge,,,,{lo},{hi}\n"));
        }
        out
    }
}

/// Neighbours of `v` in the given kind of poset without building it:
/// `(covers, covered)`.
pub fn local_neighbors(v: &LinearGame, kind: PosetKind) -> Result<(Vec<LinearGame>, Vec<LinearGame>)> {
    let admits = |g: &LinearGame| kind.admits(g, || is_weighted(g).is_weighted());
    if !admits(v) {
        return Err(Error::NotANode);
    }
    let up = v.covers_in_j().into_iter().filter(|g| admits(g)).collect();
    let down = v.covered_in_j().into_iter().filter(|g| admits(g)).collect();
    Ok((up, down))
}

pub fn m_poset_to_dot(p: &CoalitionPoset) -> String {
    let mut out = format!("digraph M_{} {{\n  rankdir=BT;\n  node [shape=plaintext];\n", p.n());
    for (i, c) in p.elements().iter().enumerate() {
        out.push_str(&format!("  c{i} [label=\"{c}\"];\n"));
    }
    let id: HashMap<_, _> = p.elements().iter().enumerate().map(|(i, c)| (*c, i)).collect();
    let mut by_rank: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, c) in p.elements().iter().enumerate() {
        by_rank.entry(c.rank()).or_default().push(i);
    }
    for ids in by_rank.values() {
        let names: Vec<String> = ids.iter().map(|i| format!("c{i};")).collect();
        out.push_str(&format!("  {{ rank=same; {} }}\n", names.join(" ")));
    }
    for (a, b) in p.covers() {
        out.push_str(&format!("  c{} -> c{};\n", id[a], id[b]));
    }
    out.push_str("}\n");
    out
}

pub fn m_poset_to_json(p: &CoalitionPoset) -> Value {
    let id: HashMap<_, _> = p.elements().iter().enumerate().map(|(i, c)| (*c, i)).collect();
    json!({
        "n": p.n(),
        "kind": "M",
        "nodes": p.elements().iter().map(|c| c.members_desc()).collect::<Vec<_>>(),
        "edges": p.covers().iter().map(|(a, b)| [id[a], id[b]]).collect::<Vec<_>>(),
        "ranks": p.elements().iter().map(|c| c.rank()).collect::<Vec<_>>(),
    })
}

pub fn m_poset_to_csv(p: &CoalitionPoset) -> String {
    let id: HashMap<_, _> = p.elements().iter().enumerate().map(|(i, c)| (*c, i)).collect();
    let mut out = String::from("record,id,coalition,rank,lower,upper\n");
    for (i, c) in p.elements().iter().enumerate() {
        out.push_str(&format!("node,{i},\"{c}\",{},,\n", c.rank()));
    }
    for (a, b) in p.covers() {
        out.push_str(&format!("edge,,,,{},{}\n", id[a], id[b]));
    }
    out
}
