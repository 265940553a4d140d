//! Weightedness: realizations, the weightedness LP, trade certificates and
//! the footprint method for neighbouring games.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::game::LinearGame;
use crate::lp::{self, int, parse_rational, rational, LinearSystem, Rational, Relation};

/// A point `(q : w)` of the normalized configuration space.
///
/// `w[0]` is the weight of voter 1 (the weakest).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Realization {
    pub q: Rational,
    pub w: Vec<Rational>,
}

impl Realization {
    /// Checks `0 < q <= 1`, `w_n >= ... >= w_1 >= 0` and `Σ w = 1`.
    pub fn new(q: Rational, w: Vec<Rational>) -> Result<Realization> {
        check_normalized(&w)?;
        if !q.is_positive() || q > Rational::one() {
            return Err(Error::NotNormalized(format!("quota {q} is not in (0, 1]")));
        }
        Ok(Realization { q, w })
    }

    /// Scales an arbitrary quota and weights (strongest voter first) so the
    /// weights sum to one.
    pub fn from_unnormalized(quota: Rational, weights_desc: &[Rational]) -> Result<Realization> {
        let total: Rational = weights_desc.iter().sum();
        if !total.is_positive() {
            return Err(Error::NotNormalized("weights must have a positive sum".into()));
        }
        let w: Vec<Rational> = weights_desc.iter().rev().map(|x| x / &total).collect();
        Realization::new(quota / total, w)
    }

    pub fn n(&self) -> usize {
        self.w.len()
    }

    pub fn weight(&self, c: &Coalition) -> Rational {
        c.members_desc().iter().map(|&i| &self.w[i - 1]).sum()
    }

    /// Parses `(q: w_n, ..., w_1)`; unnormalized input is rescaled.
    pub fn parse(s: &str) -> Result<Realization> {
        let t = s.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("realization {s:?} must look like (q: w_n,...,w_1)")))?;
        let (q, ws) = inner
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("realization {s:?} is missing ':'")))?;
        let q = parse_rational(q)?;
        let ws = ws.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?;
        Realization::from_unnormalized(q, &ws)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "q": rational::to_json(&self.q),
            "w": self.w.iter().rev().map(rational::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Realization> {
        let bad = || Error::Parse(format!("expected {{q, w}}, got {v}"));
        let q = rational::from_json(v.get("q").ok_or_else(bad)?)?;
        let w = v
            .get("w")
            .and_then(Value::as_array)
            .ok_or_else(bad)?
            .iter()
            .rev()
            .map(rational::from_json)
            .collect::<Result<Vec<_>>>()?;
        Realization::new(q, w)
    }

    /// Decimal rendering, for display only.
    pub fn approx(&self) -> String {
        let ws: Vec<String> = self.w.iter().rev().map(rational::approx).collect();
        format!("({}: {})", rational::approx(&self.q), ws.join(","))
    }
}

impl fmt::Display for Realization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ws: Vec<String> = self.w.iter().rev().map(|x| x.to_string()).collect();
        write!(f, "({}: {})", self.q, ws.join(","))
    }
}

pub(crate) fn check_normalized(w: &[Rational]) -> Result<()> {
    if w.is_empty() {
        return Err(Error::NotNormalized("no weights".into()));
    }
    if w[0].is_negative() {
        return Err(Error::NotNormalized(format!("w_1 = {} is negative", w[0])));
    }
    for i in 1..w.len() {
        if w[i] < w[i - 1] {
            return Err(Error::NotNormalized(format!(
                "w_{} = {} is below w_{} = {}",
                i + 1,
                w[i],
                i,
                w[i - 1]
            )));
        }
    }
    let total: Rational = w.iter().sum();
    if !total.is_one() {
        return Err(Error::NotNormalized(format!("weights sum to {total}")));
    }
    Ok(())
}

/// Exhaustive check that `(q : w)` produces exactly the winning set of `v`.
pub fn verify_realization(v: &LinearGame, r: &Realization) -> bool {
    let n = v.n();
    if r.w.len() != n {
        return false;
    }
    // sums[m] built from sums[m without its lowest voter]
    let mut sums: Vec<Rational> = Vec::with_capacity(1 << n);
    sums.push(Rational::zero());
    for m in 1..(1u32 << n) {
        let low = m.trailing_zeros() as usize;
        let s = &sums[(m & (m - 1)) as usize] + &r.w[low];
        if (s >= r.q) != v.wins_mask(m) {
            return false;
        }
        sums.push(s);
    }
    v.wins_mask(0) == !r.q.is_positive()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Weightedness {
    Weighted(Realization),
    Unweighted,
}

impl Weightedness {
    pub fn is_weighted(&self) -> bool {
        matches!(self, Weightedness::Weighted(_))
    }

    pub fn realization(&self) -> Option<&Realization> {
        match self {
            Weightedness::Weighted(r) => Some(r),
            Weightedness::Unweighted => None,
        }
    }
}

/// Variable layout shared by every `(q, w)` system: `q` is variable 0 and
/// `w_i` is variable `i`.
pub(crate) const Q: usize = 0;

/// `(q, w_1, ..., w_n)` with `w_n >= ... >= w_1 >= 0` and `Σ w = 1`.
pub(crate) fn normalized_space(n: usize) -> LinearSystem {
    let mut s = LinearSystem::new();
    s.add_var("q", false);
    for i in 1..=n {
        s.add_var(format!("w{i}"), false);
    }
    let all: Vec<(usize, Rational)> = (1..=n).map(|i| (i, int(1))).collect();
    s.constrain(&all, Relation::Eq, int(1));
    s
}

/// Coefficients of `w_C - q`.
pub(crate) fn coalition_minus_quota(n: usize, c: &Coalition) -> Vec<Rational> {
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[Q] = -int(1);
    for i in c.members_desc() {
        coeffs[i] = int(1);
    }
    coeffs
}

/// Coefficients of `w_A - w_B`.
pub(crate) fn coalition_difference(n: usize, a: &Coalition, b: &Coalition) -> Vec<Rational> {
    let mut coeffs = vec![Rational::zero(); n + 1];
    for i in a.members_desc() {
        coeffs[i] += int(1);
    }
    for i in b.members_desc() {
        coeffs[i] -= int(1);
    }
    coeffs
}

/// Adds the ordering constraints `w_{i+1} >= w_i` and `w_1 >= 0`.
pub(crate) fn add_ordering(s: &mut LinearSystem, n: usize) {
    for i in 1..n {
        s.constrain(&[(i + 1, int(1)), (i, int(-1))], Relation::Ge, int(0));
    }
    s.constrain(&[(1, int(1))], Relation::Ge, int(0));
}

/// The system whose strictly feasible points are the realizations of `v`:
/// `w_g >= q` on generators, `w_B < q` on shift-maximal losing coalitions,
/// ordered normalized weights and `q > 0`.
pub fn weightedness_system(v: &LinearGame) -> LinearSystem {
    let n = v.n();
    let mut s = normalized_space(n);
    add_ordering(&mut s, n);
    for g in v.generators() {
        s.push(lp::Constraint {
            coeffs: coalition_minus_quota(n, g),
            rel: Relation::Ge,
            rhs: int(0),
        });
    }
    for b in v.maximal_losing_raw() {
        s.push(lp::Constraint {
            coeffs: coalition_minus_quota(n, &b),
            rel: Relation::Lt,
            rhs: int(0),
        });
    }
    s.constrain(&[(Q, int(1))], Relation::Gt, int(0));
    s
}

pub(crate) fn point_to_realization(point: &[Rational]) -> Realization {
    Realization {
        q: point[Q].clone(),
        w: point[1..].to_vec(),
    }
}

pub fn is_weighted(v: &LinearGame) -> Weightedness {
    let sys = weightedness_system(v);
    match lp::strictly_feasible(&sys).expect("weightedness system is well formed") {
        Some(p) => {
            let r = point_to_realization(&p);
            assert!(verify_realization(v, &r), "LP realization {r} does not realize {v}");
            Weightedness::Weighted(r)
        }
        None => Weightedness::Unweighted,
    }
}

/// Winning coalitions `x` that can be traded into losing coalitions `y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TradeCertificate {
    pub x: Vec<Coalition>,
    pub y: Vec<Coalition>,
}

impl fmt::Display for TradeCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |cs: &[Coalition]| cs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ");
        write!(f, "X = {{{}}}, Y = {{{}}}", show(&self.x), show(&self.y))
    }
}

impl TradeCertificate {
    pub fn to_json(&self) -> Value {
        let list = |cs: &[Coalition]| cs.iter().map(Coalition::members_desc).collect::<Vec<_>>();
        json!({ "x": list(&self.x), "y": list(&self.y) })
    }
}

fn voter_counts(n: usize, cs: &[Coalition]) -> Vec<usize> {
    let mut counts = vec![0; n + 1];
    for c in cs {
        for i in c.members_desc() {
            counts[i] += 1;
        }
    }
    counts
}

pub fn check_certificate(v: &LinearGame, c: &TradeCertificate) -> bool {
    let n = v.n();
    !c.x.is_empty()
        && c.x.len() == c.y.len()
        && c.x.iter().chain(&c.y).all(|a| a.n() == n)
        && voter_counts(n, &c.x) == voter_counts(n, &c.y)
        && c.x.iter().all(|a| v.is_winning(a))
        && c.y.iter().all(|a| !v.is_winning(a))
}

/// Searches for a trade with `|X| = |Y| <= bound`, smallest `|X|` first.
///
/// `X` ranges over multisets of minimal winning coalitions in rank order;
/// for each, voter instances are dealt to `|X|` slots and a slot is
/// abandoned as soon as it wins.
pub fn find_trade_failure(v: &LinearGame, bound: usize) -> Option<TradeCertificate> {
    let n = v.n();
    let mw = v.minimal_winning();
    for j in 2..=bound.max(2) {
        let mut idx = vec![0usize; j];
        loop {
            let x: Vec<Coalition> = idx.iter().map(|&i| mw[i]).collect();
            let counts = voter_counts(n, &x);
            let mut slots = vec![0u32; j];
            if deal(v, &counts, n, &mut slots) {
                let mut y: Vec<Coalition> = slots.iter().map(|&m| Coalition::from_mask_unchecked(n, m)).collect();
                y.sort();
                let cert = TradeCertificate { x, y };
                debug_assert!(check_certificate(v, &cert));
                return Some(cert);
            }
            // next multiset (nondecreasing index tuple)
            let mut k = j;
            while k > 0 && idx[k - 1] == mw.len() - 1 {
                k -= 1;
            }
            if k == 0 {
                break;
            }
            idx[k - 1] += 1;
            let base = idx[k - 1];
            for t in &mut idx[k..] {
                *t = base;
            }
        }
    }
    None
}

/// Deals `counts[voter]` copies of each voter (strongest first) into distinct
/// slots so that every slot stays losing.
fn deal(v: &LinearGame, counts: &[usize], voter: usize, slots: &mut [u32]) -> bool {
    if voter == 0 {
        return true;
    }
    let need = counts[voter];
    let bit = 1u32 << (voter - 1);
    choose(v, counts, voter, bit, need, 0, slots)
}

fn choose(v: &LinearGame, counts: &[usize], voter: usize, bit: u32, need: usize, from: usize, slots: &mut [u32]) -> bool {
    if need == 0 {
        return deal(v, counts, voter - 1, slots);
    }
    let mut tried: Vec<u32> = Vec::new();
    for s in from..slots.len() {
        if slots.len() - s < need {
            break;
        }
        let before = slots[s];
        // slots with equal contents are interchangeable
        if tried.contains(&before) {
            continue;
        }
        tried.push(before);
        let after = before | bit;
        if v.wins_mask(after) {
            continue;
        }
        slots[s] = after;
        if choose(v, counts, voter, bit, need - 1, s + 1, slots) {
            return true;
        }
        slots[s] = before;
    }
    false
}

/// Verdict of the footprint method on a neighbouring game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborVerdict {
    pub game: LinearGame,
    pub verdict: Weightedness,
}

fn require_weighted(v: &LinearGame) -> Result<()> {
    if is_weighted(v).is_weighted() {
        Ok(())
    } else {
        Err(Error::Unweighted)
    }
}

/// Decides whether the cover of `v` losing the generator `a` is weighted,
/// by looking for weights in the footprint of `v` that put `a` strictly
/// below every generator of the cover.
pub fn footprint_weighted_cover(v: &LinearGame, a: &Coalition) -> Result<NeighborVerdict> {
    let u = v.without_generator(a)?;
    require_weighted(v)?;
    let n = v.n();
    let mut sys = weightedness_system(v);
    for b in u.generators() {
        sys.push(lp::Constraint {
            coeffs: coalition_difference(n, a, b),
            rel: Relation::Lt,
            rhs: int(0),
        });
    }
    let verdict = match lp::strictly_feasible(&sys)? {
        None => Weightedness::Unweighted,
        Some(p) => {
            let mut r = point_to_realization(&p);
            r.q = u.generators().iter().map(|b| r.weight(b)).min().expect("covers have generators");
            assert!(verify_realization(&u, &r), "footprint realization {r} does not realize {u}");
            Weightedness::Weighted(r)
        }
    };
    Ok(NeighborVerdict { game: u, verdict })
}

/// Decides whether the game below `u` that also lets `b` win is weighted,
/// by looking for weights in the footprint of `u` that put `b` strictly
/// above every shift-maximal losing coalition of that game.
pub fn footprint_weighted_covered(u: &LinearGame, b: &Coalition) -> Result<NeighborVerdict> {
    let v = u.with_coalition(b)?;
    require_weighted(u)?;
    let n = u.n();
    let mut sys = weightedness_system(u);
    for c in v.maximal_losing_raw() {
        sys.push(lp::Constraint {
            coeffs: coalition_difference(n, b, &c),
            rel: Relation::Gt,
            rhs: int(0),
        });
    }
    let verdict = match lp::strictly_feasible(&sys)? {
        None => Weightedness::Unweighted,
        Some(p) => {
            let mut r = point_to_realization(&p);
            r.q = r.weight(b);
            assert!(verify_realization(&v, &r), "footprint realization {r} does not realize {v}");
            Weightedness::Weighted(r)
        }
    };
    Ok(NeighborVerdict { game: v, verdict })
}
