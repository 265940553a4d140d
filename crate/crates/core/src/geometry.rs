//! The realization polytope `P_v` of a weighted game: generating half-spaces,
//! facets, footprint hierarchy, vertical chains and dual reflection.
//!
//! Every generating constraint is written as `expr >= 0` or `expr > 0` over
//! the variables `(q, w_1, ..., w_n)`:
//!
//! * top `A`: `w_A - q >= 0`
//! * bottom `B`: `q - w_B > 0`
//! * vertical `i`: `w_{i+1} - w_i >= 0`
//! * dummy face: `w_1 >= 0`

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::game::{Hierarchy, LinearGame};
use crate::lp::{self, int, rational, Constraint, LinearSystem, Rational, Relation};
use crate::weighted::{
    check_normalized, coalition_minus_quota, footprint_weighted_cover, footprint_weighted_covered, is_weighted,
    normalized_space, verify_realization, NeighborVerdict, Realization, Weightedness, Q,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HalfSpace {
    Top(Coalition),
    Bottom(Coalition),
    /// The face `w_{i+1} = w_i`, for `1 <= i < n`.
    Vertical(usize),
    /// The face `w_1 = 0`.
    DummyFace,
}

impl HalfSpace {
    pub fn is_vertical(&self) -> bool {
        matches!(self, HalfSpace::Vertical(_) | HalfSpace::DummyFace)
    }

    /// Coefficients of `expr` and whether the constraint is strict.
    fn expr(&self, n: usize) -> (Vec<Rational>, bool) {
        match self {
            HalfSpace::Top(a) => (coalition_minus_quota(n, a), false),
            HalfSpace::Bottom(b) => (coalition_minus_quota(n, b).into_iter().map(|c| -c).collect(), true),
            HalfSpace::Vertical(i) => {
                let mut c = vec![Rational::zero(); n + 1];
                c[i + 1] = int(1);
                c[*i] = int(-1);
                (c, false)
            }
            HalfSpace::DummyFace => {
                let mut c = vec![Rational::zero(); n + 1];
                c[1] = int(1);
                (c, false)
            }
        }
    }

    fn constraint(&self, n: usize, rel: Relation) -> Constraint {
        Constraint {
            coeffs: self.expr(n).0,
            rel,
            rhs: int(0),
        }
    }

    fn natural(&self, n: usize) -> Constraint {
        let (coeffs, strict) = self.expr(n);
        Constraint {
            coeffs,
            rel: if strict { Relation::Gt } else { Relation::Ge },
            rhs: int(0),
        }
    }

    /// Value of `expr` at a point; zero means the point is on the hyperplane.
    pub fn slack(&self, p: &Point) -> Rational {
        let (coeffs, _) = self.expr(p.w.len());
        coeffs.iter().zip(p.coords()).map(|(c, x)| c * x).sum()
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            HalfSpace::Top(_) => "top",
            HalfSpace::Bottom(_) => "bottom",
            HalfSpace::Vertical(_) | HalfSpace::DummyFace => "vertical",
        }
    }
}

impl fmt::Display for HalfSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HalfSpace::Top(a) => write!(f, "top {a}: q <= w({a})"),
            HalfSpace::Bottom(b) => write!(f, "bottom {b}: q > w({b})"),
            HalfSpace::Vertical(i) => write!(f, "vertical w{} = w{}", i + 1, i),
            HalfSpace::DummyFace => write!(f, "vertical w1 = 0"),
        }
    }
}

/// A point `(q : w)` of `[0,1] x Δ_n`; unlike a [`Realization`] it may sit on
/// a bottom facet or at `q = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Point {
    pub q: Rational,
    /// `w[0]` is the weight of voter 1.
    pub w: Vec<Rational>,
}

impl Point {
    fn from_lp(p: &[Rational]) -> Point {
        Point {
            q: p[Q].clone(),
            w: p[1..].to_vec(),
        }
    }

    fn coords(&self) -> Vec<Rational> {
        let mut v = Vec::with_capacity(self.w.len() + 1);
        v.push(self.q.clone());
        v.extend(self.w.iter().cloned());
        v
    }

    pub fn from_realization(r: &Realization) -> Point {
        Point {
            q: r.q.clone(),
            w: r.w.clone(),
        }
    }

    pub fn midpoint(&self, other: &Point) -> Point {
        let half = Rational::new(1.into(), 2.into());
        Point {
            q: (&self.q + &other.q) * &half,
            w: self.w.iter().zip(&other.w).map(|(a, b)| (a + b) * &half).collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "q": rational::to_json(&self.q),
            "w": self.w.iter().rev().map(rational::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn approx(&self) -> String {
        let ws: Vec<String> = self.w.iter().rev().map(rational::approx).collect();
        format!("({}: {})", rational::approx(&self.q), ws.join(","))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ws: Vec<String> = self.w.iter().rev().map(|x| x.to_string()).collect();
        write!(f, "({}: {})", self.q, ws.join(","))
    }
}

fn require_weighted(v: &LinearGame) -> Result<Realization> {
    match is_weighted(v) {
        Weightedness::Weighted(r) => Ok(r),
        Weightedness::Unweighted => Err(Error::Unweighted),
    }
}

fn generating_set(v: &LinearGame) -> Vec<HalfSpace> {
    let n = v.n();
    let mut hs: Vec<HalfSpace> = v.generators().iter().map(|g| HalfSpace::Top(*g)).collect();
    hs.extend(v.maximal_losing_raw().into_iter().map(HalfSpace::Bottom));
    hs.extend((1..n).map(HalfSpace::Vertical));
    hs.push(HalfSpace::DummyFace);
    hs
}

/// Generating half-spaces of `P_v`: a top per generator, a bottom per
/// shift-maximal losing coalition, the `n - 1` ordering faces and `w_1 >= 0`.
/// The ambient conditions `Σ w = 1` and `0 <= q <= 1` are implicit.
pub fn polytope_constraints(v: &LinearGame) -> Result<Vec<HalfSpace>> {
    require_weighted(v)?;
    Ok(generating_set(v))
}

/// `Σ w = 1` and `0 <= q <= 1`.
fn ambient(n: usize) -> LinearSystem {
    let mut s = normalized_space(n);
    s.constrain(&[(Q, int(1))], Relation::Le, int(1));
    s.constrain(&[(Q, int(1))], Relation::Ge, int(0));
    s
}

/// The system of `P_v` itself (natural relations).
pub fn polytope_system(v: &LinearGame) -> LinearSystem {
    let n = v.n();
    let mut s = ambient(n);
    for h in generating_set(v) {
        s.push(h.natural(n));
    }
    s
}

/// A relative-interior point of the face cut out by `face`, with every other
/// generating constraint strict; `None` if the face is not a facet.
fn facet_witness(n: usize, all: &[HalfSpace], face: &HalfSpace) -> Result<Option<Point>> {
    let mut s = ambient(n);
    for h in all {
        let rel = if h == face { Relation::Eq } else { Relation::Gt };
        s.push(h.constraint(n, rel));
    }
    Ok(lp::strictly_feasible(&s)?.map(|p| Point::from_lp(&p)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facet {
    pub halfspace: HalfSpace,
    pub witness: Point,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolytopeReport {
    pub game: LinearGame,
    pub facets: Vec<Facet>,
    /// Weighted games covering `v` in `W_n`.
    pub weighted_covers: Vec<LinearGame>,
    /// Weighted games covered by `v` in `W_n`.
    pub weighted_covered: Vec<LinearGame>,
    /// Degree in `W_n`, counting the special faces `q = 1` of `<N>` and
    /// `q = 0` of `<1>`.
    pub degree_d: usize,
    pub classes_k: usize,
}

impl PolytopeReport {
    pub fn n(&self) -> usize {
        self.game.n()
    }

    pub fn top_facets(&self) -> Vec<Coalition> {
        self.facets
            .iter()
            .filter_map(|f| match f.halfspace {
                HalfSpace::Top(a) => Some(a),
                _ => None,
            })
            .collect()
    }

    pub fn bottom_facets(&self) -> Vec<Coalition> {
        self.facets
            .iter()
            .filter_map(|f| match f.halfspace {
                HalfSpace::Bottom(b) => Some(b),
                _ => None,
            })
            .collect()
    }

    pub fn vertical_facets(&self) -> Vec<HalfSpace> {
        self.facets.iter().map(|f| f.halfspace).filter(HalfSpace::is_vertical).collect()
    }

    pub fn facet_count(&self) -> usize {
        self.facets.len()
    }

    /// `(top, bottom, vertical)`.
    pub fn counts(&self) -> (usize, usize, usize) {
        (self.top_facets().len(), self.bottom_facets().len(), self.vertical_facets().len())
    }

    pub fn satisfies_facet_law(&self) -> bool {
        self.facet_count() + self.classes_k == self.n() + self.degree_d
    }

    /// Number of facet hyperplanes through `p`.
    pub fn facets_through(&self, p: &Point) -> usize {
        self.facets.iter().filter(|f| f.halfspace.slack(p).is_zero()).count()
    }

    pub fn summary(&self) -> String {
        let (t, b, v) = self.counts();
        format!("{} facets: top {t}, bottom {b}, vertical {v}", self.facet_count())
    }

    pub fn to_json(&self) -> Value {
        let facets: Vec<Value> = self
            .facets
            .iter()
            .map(|f| {
                let mut o = json!({ "kind": f.halfspace.kind_name(), "witness": f.witness.to_json() });
                match f.halfspace {
                    HalfSpace::Top(c) | HalfSpace::Bottom(c) => o["coalition"] = json!(c.members_desc()),
                    HalfSpace::Vertical(i) => o["index"] = json!(i),
                    HalfSpace::DummyFace => o["index"] = json!(0),
                }
                o
            })
            .collect();
        let (t, b, v) = self.counts();
        json!({
            "game": self.game.to_json(),
            "facets": facets,
            "counts": {
                "top": t, "bottom": b, "vertical": v, "total": self.facet_count(),
                "n": self.n(), "k": self.classes_k, "d": self.degree_d,
            },
        })
    }
}

/// The games adjacent to `v` in `W_n`, decided by the footprint method:
/// `(covers, covered)`.
pub fn weighted_neighbors(v: &LinearGame) -> Result<(Vec<NeighborVerdict>, Vec<NeighborVerdict>)> {
    require_weighted(v)?;
    let mut up = Vec::new();
    for a in v.generators() {
        match footprint_weighted_cover(v, a) {
            Ok(x) => up.push(x),
            Err(Error::TrivialNeighbor) => {}
            Err(e) => return Err(e),
        }
    }
    let mut down = Vec::new();
    for b in v.shift_maximal_losing().coalitions() {
        down.push(footprint_weighted_covered(v, b)?);
    }
    Ok((up, down))
}

pub fn classify_facets(v: &LinearGame) -> Result<PolytopeReport> {
    require_weighted(v)?;
    let n = v.n();
    let all = generating_set(v);
    let mut facets = Vec::new();
    for h in &all {
        if let Some(witness) = facet_witness(n, &all, h)? {
            debug_assert!(all
                .iter()
                .all(|o| if o == h { o.slack(&witness).is_zero() } else { o.slack(&witness).is_positive() }));
            facets.push(Facet { halfspace: *h, witness });
        }
    }
    let (up, down) = weighted_neighbors(v)?;
    let weighted_covers: Vec<LinearGame> =
        up.into_iter().filter(|x| x.verdict.is_weighted()).map(|x| x.game).collect();
    let weighted_covered: Vec<LinearGame> =
        down.into_iter().filter(|x| x.verdict.is_weighted()).map(|x| x.game).collect();
    let special = usize::from(v.is_top()) + usize::from(v.is_bottom());
    Ok(PolytopeReport {
        game: v.clone(),
        facets,
        degree_d: weighted_covers.len() + weighted_covered.len() + special,
        weighted_covers,
        weighted_covered,
        classes_k: v.hierarchy().class_count(),
    })
}

/// Smallest face `σ` of `Δ_n` meeting the footprint of `v`, as the
/// composition of its equal-weight blocks (strongest first).
pub fn footprint_hierarchy(v: &LinearGame) -> Result<Hierarchy> {
    require_weighted(v)?;
    let n = v.n();
    let base = crate::weighted::weightedness_system(v);
    // a face is a set of vertices p_j, encoded as the bit j-1
    let mut faces: Vec<u32> = (1..(1u32 << n)).collect();
    faces.sort_by_key(|f| (f.count_ones(), *f));
    for face in faces {
        let cuts: Vec<usize> = (1..=n).filter(|j| face >> (j - 1) & 1 == 1).collect();
        let mut s = base.clone();
        // blocks of voters: (n - cuts[t] + 1 ..= n - cuts[t-1]), then zeros
        let mut prev = 0;
        let mut blocks = Vec::new();
        for &j in &cuts {
            let block: Vec<usize> = (n - j + 1..=n - prev).rev().collect();
            for pair in block.windows(2) {
                s.constrain(&[(pair[0], int(1)), (pair[1], int(-1))], Relation::Eq, int(0));
            }
            blocks.push(block);
            prev = j;
        }
        for pair in blocks.windows(2) {
            let (weakest_above, strongest_below) = (*pair[0].last().unwrap(), pair[1][0]);
            s.constrain(&[(weakest_above, int(1)), (strongest_below, int(-1))], Relation::Gt, int(0));
        }
        let lowest = *blocks.last().unwrap().last().unwrap();
        s.constrain(&[(lowest, int(1))], Relation::Gt, int(0));
        for i in 1..=n - prev {
            s.constrain(&[(i, int(1))], Relation::Eq, int(0));
        }
        if lp::strictly_feasible(&s)?.is_some() {
            let sizes: Vec<usize> = blocks.iter().map(Vec::len).collect();
            return Hierarchy::from_composition(n, &sizes);
        }
    }
    unreachable!("a weighted game meets the interior of Δ_n")
}

/// One game of a vertical chain and its quota interval `(lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainStep {
    pub game: LinearGame,
    pub lo: Rational,
    pub hi: Rational,
}

/// Games met along the vertical line above a generic weight vector, from
/// `<1>` up to `<N>`.
pub fn vertical_chain(w: &[Rational]) -> Result<Vec<ChainStep>> {
    check_normalized(w)?;
    let n = w.len();
    crate::coalition::check_voters(n)?;
    let mut sums: Vec<(Rational, u32)> = Vec::with_capacity(1 << n);
    sums.push((Rational::zero(), 0));
    for m in 1..(1u32 << n) {
        let low = m.trailing_zeros() as usize;
        let s = &sums[(m & (m - 1)) as usize].0 + &w[low];
        sums.push((s, m));
    }
    sums.sort();
    for pair in sums.windows(2) {
        if pair[0].0 == pair[1].0 {
            return Err(Error::NotGeneric(
                Coalition::from_mask(n, pair[0].1)?,
                Coalition::from_mask(n, pair[1].1)?,
            ));
        }
    }
    let mut position = vec![0usize; 1 << n];
    for (i, (_, m)) in sums.iter().enumerate() {
        position[*m as usize] = i;
    }
    (1..(1usize << n))
        .map(|j| {
            let game = LinearGame::from_winning_fn(n, |c| position[c.mask() as usize] >= j)?;
            Ok(ChainStep {
                game,
                lo: sums[j - 1].0.clone(),
                hi: sums[j].0.clone(),
            })
        })
        .collect()
}

/// The `j` symmetric games above the corner `p_j`, each with its quota
/// interval `((t-1)/j, t/j]`.
pub fn symmetric_games_above_corner(n: usize, j: usize) -> Result<Vec<ChainStep>> {
    crate::coalition::check_voters(n)?;
    if j == 0 || j > n {
        return Err(Error::OutOfRange(format!("corner p_{j} does not exist for {n} voters")));
    }
    let jj = j as i64;
    (1..=j)
        .map(|t| {
            let members: Vec<usize> = (n - j + 1..=n - j + t).rev().collect();
            let game = LinearGame::new(n, &[Coalition::new(n, &members)?])?;
            Ok(ChainStep {
                game,
                lo: Rational::new((t as i64 - 1).into(), jj.into()),
                hi: Rational::new((t as i64).into(), jj.into()),
            })
        })
        .collect()
}

/// The corner `p_j`: the strongest `j` voters share the weight equally.
pub fn corner(n: usize, j: usize) -> Vec<Rational> {
    (1..=n)
        .map(|i| if i > n - j { Rational::new(1.into(), (j as i64).into()) } else { Rational::zero() })
        .collect()
}

fn strict_interior(v: &LinearGame) -> LinearSystem {
    let n = v.n();
    let mut s = ambient(n);
    for h in generating_set(v) {
        s.push(h.constraint(n, Relation::Gt));
    }
    s
}

/// Checks on sample interior points of `P_v` that `(1 - q : w)` is interior
/// to `P_{v*}`; for self-dual games also checks that the top facets are the
/// complements of the bottom facets.
pub fn dual_reflection_check(v: &LinearGame, sample_count: usize) -> Result<bool> {
    let report = classify_facets(v)?;
    let dual = v.dual();
    let inner = strict_interior(v);
    let (center, margin) = lp::max_margin(&inner)?.expect("weighted games have a nonempty polytope");
    assert!(margin.is_positive(), "P_v has an interior");
    let center = Point::from_lp(&center);

    let mut samples = vec![center.clone()];
    let mut depth = 1;
    while samples.len() < sample_count.max(1) {
        for f in &report.facets {
            let mut p = f.witness.clone();
            for _ in 0..depth {
                p = center.midpoint(&p);
            }
            samples.push(p);
            if samples.len() >= sample_count {
                break;
            }
        }
        depth += 1;
    }

    let target = strict_interior(&dual);
    for p in &samples {
        if !inner.satisfied_by(&p.coords()) {
            return Ok(false);
        }
        let mut r = p.clone();
        r.q = Rational::one() - &r.q;
        if !target.satisfied_by(&r.coords()) {
            return Ok(false);
        }
    }

    if v.classify().self_dual {
        let mut tops: Vec<Coalition> = report.top_facets().iter().map(Coalition::complement).collect();
        let mut bottoms = report.bottom_facets();
        tops.sort();
        bottoms.sort();
        if tops != bottoms {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Realization of `v` on the line above `w` at the top of the chain step.
pub fn realization_at(step: &ChainStep, w: &[Rational]) -> Realization {
    let r = Realization {
        q: step.hi.clone(),
        w: w.to_vec(),
    };
    debug_assert!(verify_realization(&step.game, &r));
    r
}
