//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints one PASS/FAIL line; exits non-zero if any fails.

use std::collections::{HashMap, HashSet};
use std::process::ExitCode;
use std::time::Instant;

use wvote::lp::{int, rat, Rational};
use wvote::*;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn game(s: &str, n: usize) -> LinearGame {
    LinearGame::parse(s, n).unwrap()
}

fn all_games(n: usize) -> Vec<LinearGame> {
    build_poset(n, PosetKind::J).unwrap().nodes().to_vec()
}

fn appendix(j6: &Census) -> Check {
    let r = verify_appendix(j6).map_err(|e| e.to_string())?;
    ensure(r.is_match(), || r.discrepancies.join("; "))?;
    ensure(r.rows == 20 && r.unweighted_total == 60 && r.all_improper, || {
        format!("rows {}, unweighted {}, all improper {}", r.rows, r.unweighted_total, r.all_improper)
    })?;
    let ranks: Vec<(usize, usize)> = r.higher_ranks.iter().map(|(k, v)| (*k, *v)).collect();
    ensure(ranks == [(33, 11), (34, 5), (35, 2), (36, 1), (37, 1)], || format!("rank histogram {ranks:?}"))?;
    Ok(format!("60 unweighted, 20+20 listed, ranks {ranks:?}"))
}

fn counts(j5: &Census, j6: &Census) -> Check {
    let r = CountsReport::compute(j5, j6).map_err(|e| e.to_string())?;
    let bad = r.mismatches();
    ensure(bad.is_empty(), || bad.join("; "))?;
    Ok(r.lines().join(", "))
}

fn enumeration_formula() -> Check {
    for n in 1..=10 {
        let formula = one_generator_proper_count(n).map_err(|e| e.to_string())?;
        let brute = one_generator_proper_brute(n).map_err(|e| e.to_string())?;
        let listed = one_generator_proper_list(n).map_err(|e| e.to_string())?;
        ensure(brute.len() as u64 == formula, || format!("n={n}: brute {} vs formula {formula}", brute.len()))?;
        ensure(listed == brute, || format!("n={n}: characterization disagrees with brute force"))?;
    }
    Ok("n = 1..10".into())
}

fn facet_law() -> Check {
    let mut checked = 0;
    let mut non_simplex = HashSet::new();
    let mut small_non_simplex = Vec::new();
    for n in 1..=5 {
        for v in all_games(n) {
            let r = classify_facets(&v).map_err(|e| format!("{v}: {e}"))?;
            ensure(r.satisfies_facet_law(), || {
                format!("{v}: {} facets, n {n}, k {}, d {}", r.facet_count(), r.classes_k, r.degree_d)
            })?;
            if r.facet_count() > n + 1 {
                if n == 5 {
                    non_simplex.insert(v);
                } else {
                    small_non_simplex.push(v.to_string());
                }
            }
            checked += 1;
        }
    }
    let listed = [
        "<541;5321>",
        "<541;4321>",
        "<541;532;4321>",
        "<531;4321>",
        "<54;531;4321>",
        "<521;4321>",
        "<54;521;4321>",
        "<53;521;4321>",
    ];
    let mut want = HashSet::new();
    for s in listed {
        let g = game(s, 5);
        ensure(g.classify().proper, || format!("{g} should be proper"))?;
        want.insert(g.dual());
        want.insert(g);
    }
    ensure(non_simplex == want, || {
        let show = |a: &HashSet<LinearGame>, b: &HashSet<LinearGame>| {
            let mut v: Vec<&LinearGame> = a.difference(b).collect();
            v.sort();
            v.iter()
                .map(|g| {
                    let facets = classify_facets(g).map(|r| r.facet_count()).unwrap_or(0);
                    let tag = if g.classify().self_dual { ", self-dual" } else { "" };
                    format!("{g} ({facets} facets{tag})")
                })
                .collect::<Vec<_>>()
                .join(", ")
        };
        format!(
            "{} non-simplex games; computed but not listed: [{}]; listed but not computed: [{}]",
            non_simplex.len(),
            show(&non_simplex, &want),
            show(&want, &non_simplex)
        )
    })?;
    let v = game("<521;4321>", 5);
    let r = classify_facets(&v).map_err(|e| e.to_string())?;
    ensure(r.counts() == (2, 2, 3), || format!("{v}: counts {:?}", r.counts()))?;
    let vertex = Point::from_realization(&Realization::parse("(3/5: 2/5,1/5,1/5,1/5,0)").map_err(|e| e.to_string())?);
    let through = r.facets_through(&vertex);
    ensure(through == 6, || format!("vertex lies on {through} facets"))?;
    Ok(format!(
        "{checked} games, {} non-simplex at n=5, non-simplex below n=5: {small_non_simplex:?}",
        non_simplex.len()
    ))
}

fn certificates(j6: &Census) -> Check {
    let v = game("<987;8741>", 9);
    ensure(is_weighted(&v).is_weighted(), || format!("{v} rejected"))?;
    let ints: Vec<Rational> = [9, 9, 9, 3, 3, 3, 1, 1, 1].iter().map(|&x| int(x)).collect();
    let r = Realization::from_unnormalized(int(22), &ints).map_err(|e| e.to_string())?;
    ensure(verify_realization(&v, &r), || format!("{r} does not realize {v}"))?;
    let u = game("<8741>", 9);
    ensure(!is_weighted(&u).is_weighted(), || format!("{u} accepted"))?;
    let cert = find_trade_failure(&u, 2).ok_or_else(|| format!("no certificate for {u}"))?;
    ensure(cert.x.len() == 2 && check_certificate(&u, &cert), || format!("bad certificate {cert}"))?;
    let index: HashMap<&LinearGame, usize> = j6.games.iter().enumerate().map(|(i, g)| (g, i)).collect();
    for (i, g) in j6.games.iter().enumerate() {
        let d = index[&g.dual()];
        ensure(j6.weighted[i] == j6.weighted[d], || format!("{g} and its dual differ in weightedness"))?;
    }
    Ok(format!("{u}: {cert}; duality agrees on {} games", j6.len()))
}

/// Deterministic weight vectors with pairwise distinct coalition sums.
fn generic_weights(n: usize, count: usize) -> Vec<Vec<Rational>> {
    let mut out = Vec::new();
    let mut state: u64 = 0x9e37_79b9 + n as u64;
    while out.len() < count {
        let mut raw: Vec<i64> = (0..n)
            .map(|_| {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                1 + (state % 997) as i64
            })
            .collect();
        raw.sort_unstable();
        let mut sums: Vec<i64> = (0..1u32 << n)
            .map(|m| (0..n).filter(|i| m >> i & 1 == 1).map(|i| raw[i]).sum())
            .collect();
        sums.sort_unstable();
        if sums.windows(2).any(|p| p[0] == p[1]) {
            continue;
        }
        let total: i64 = raw.iter().sum();
        out.push(raw.iter().map(|&x| rat(x, total)).collect());
    }
    out
}

fn vertical_chains() -> Check {
    let mut done = 0;
    for n in [4, 5] {
        for w in generic_weights(n, 50) {
            let chain: Vec<LinearGame> = vertical_chain(&w)
                .map_err(|e| format!("{w:?}: {e}"))?
                .into_iter()
                .map(|s| s.game)
                .collect();
            let len = chain.len();
            ensure(len == (1 << n) - 1, || format!("length {len}"))?;
            for (i, g) in chain.iter().enumerate() {
                ensure(g.rank() == i + 1, || format!("{g} at position {i}"))?;
                ensure(is_weighted(g).is_weighted(), || format!("{g} unweighted"))?;
                ensure(chain[len - 1 - i] == g.dual(), || format!("{g} not paired with its dual"))?;
            }
            for p in chain.windows(2) {
                ensure(p[0].covers_in_j().contains(&p[1]), || format!("{} does not cover {}", p[1], p[0]))?;
            }
            let r = chain_consistency(&chain).map_err(|e| e.to_string())?;
            ensure(r.saturated && r.maximal && r.self_dual && r.consistent, || format!("report for {w:?}: {r:?}"))?;
            ensure(r.accepts_weights(&w), || format!("chain order rejects its own weights {w:?}"))?;
            done += 1;
        }
    }
    Ok(format!("{done} weight vectors"))
}

fn chain_examples() -> Check {
    let chain: Vec<LinearGame> = ["<54;531>", "<54;532>", "<541;532>", "<532>", "<542;5321>", "<543;5321>"]
        .iter()
        .map(|s| game(s, 5))
        .collect();
    let r = chain_consistency(&chain).map_err(|e| e.to_string())?;
    ensure(!r.consistent, || "six-game chain reported consistent".into())?;
    let reduced: Vec<String> = r.conflicts.iter().map(|c| c.reduced().to_string()).collect();
    ensure(reduced.iter().any(|s| s == "31 < 4") && reduced.iter().any(|s| s == "4 < 31"), || {
        format!("conflicts reduce to {reduced:?}")
    })?;
    let pi4 = build_poset(4, PosetKind::Pi).map_err(|e| e.to_string())?;
    let e = enumerate_maximal_chains(&pi4, 10_000);
    ensure(e.chains.len() == 14 && !e.truncated, || format!("{} chains in Pi4", e.chains.len()))?;
    for ids in &e.chains {
        let c: Vec<LinearGame> = ids.iter().map(|&i| pi4.nodes()[i].clone()).collect();
        let r = chain_consistency(&c).map_err(|e| e.to_string())?;
        ensure(r.consistent, || format!("Pi4 chain ending {} inconsistent", c.last().unwrap()))?;
    }
    Ok(format!("conflicts {reduced:?}; Pi4: 14 consistent chains"))
}

fn hierarchies() -> Check {
    let mut checked = 0;
    for n in 1..=5 {
        for v in all_games(n) {
            let fp = footprint_hierarchy(&v).map_err(|e| format!("{v}: {e}"))?;
            ensure(fp == v.hierarchy(), || format!("{v}: footprint {fp:?} vs {:?}", v.hierarchy()))?;
            checked += 1;
        }
    }
    let intervals = |j: usize| -> Result<Vec<(Rational, Rational)>, String> {
        Ok(symmetric_games_above_corner(3, j)
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|s| (s.lo, s.hi))
            .collect())
    };
    let thirds = vec![(int(0), rat(1, 3)), (rat(1, 3), rat(2, 3)), (rat(2, 3), int(1))];
    let halves = vec![(int(0), rat(1, 2)), (rat(1, 2), int(1))];
    ensure(intervals(3)? == thirds, || "corner p_3 intervals".into())?;
    ensure(intervals(2)? == halves, || "corner p_2 intervals".into())?;
    Ok(format!("{checked} games; corner intervals match"))
}

fn properties() -> Check {
    for n in 1..=5 {
        let p = build_poset(n, PosetKind::J).map_err(|e| e.to_string())?;
        for (i, v) in p.nodes().iter().enumerate() {
            ensure(v.dual().dual() == *v, || format!("{v}: dual is not an involution"))?;
            ensure(v.rank() + v.dual().rank() == 1 << n, || format!("{v}: rank sum"))?;
            let want = if v.is_top() { 0 } else { v.generators().len() };
            ensure(p.upper_covers(i).len() == want, || format!("{v}: cover count"))?;
            let r = match is_weighted(v) {
                Weightedness::Weighted(r) => r,
                Weightedness::Unweighted => return Err(format!("{v} unweighted")),
            };
            for c in [2, 7] {
                let w: Vec<Rational> = r.w.iter().rev().map(|x| x * int(c)).collect();
                let s = Realization::from_unnormalized(&r.q * int(c), &w).map_err(|e| e.to_string())?;
                ensure(s == r && verify_realization(v, &s), || format!("{v}: scaling by {c}"))?;
            }
        }
    }
    for n in 1..=8 {
        let mut poly = vec![1u64];
        for i in 1..=n {
            let mut next = vec![0u64; poly.len() + i];
            for (k, a) in poly.iter().enumerate() {
                next[k] += a;
                next[k + i] += a;
            }
            poly = next;
        }
        let got = build_m_poset(n).map_err(|e| e.to_string())?.rank_generating_function();
        ensure(got == poly, || format!("n={n}: {got:?} vs {poly:?}"))?;
    }
    Ok("duality, rank sum, cover count, scaling for n <= 5; M(n) rank function for n <= 8".into())
}

fn probes() -> Check {
    let mut notes = Vec::new();
    for n in 1..=6 {
        match probe_induced_conjecture(n).map_err(|e| e.to_string())? {
            InducedProbe::Holds { .. } => {}
            InducedProbe::Counterexample { lower, upper } => {
                notes.push(format!("induced n={n}: counterexample {lower} < {upper}"));
            }
        }
    }
    notes.push("induced holds n<=6".into());
    for (n, limit) in [(3, 1000), (4, 1000), (5, 200), (6, 20)] {
        let p = probe_vertical_chains(n, limit).map_err(|e| e.to_string())?;
        notes.push(format!(
            "vertical n={n}: {} self-dual chains, {} consistent, witness found for {}",
            p.chains_examined, p.candidates, p.witnesses_found
        ));
    }
    Ok(notes.join("; "))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let j5 = Census::build(5).expect("J5 census");
    let j6 = Census::build(6).expect("J6 census");
    eprintln!("censuses built in {:.1?}", start.elapsed());

    let criteria: Vec<(&str, Box<dyn Fn() -> Check + '_>)> = vec![
        ("1 appendix table", Box::new(|| appendix(&j6))),
        ("2 counts", Box::new(|| counts(&j5, &j6))),
        ("3 enumeration formula", Box::new(enumeration_formula)),
        ("4 facet law", Box::new(facet_law)),
        ("5 weightedness certificates", Box::new(|| certificates(&j6))),
        ("6 vertical chains", Box::new(vertical_chains)),
        ("7 chain consistency", Box::new(chain_examples)),
        ("8 hierarchy equivalence", Box::new(hierarchies)),
        ("9 property suites", Box::new(properties)),
        ("probe conjecture probes", Box::new(probes)),
    ];
    let mut failed = 0;
    for (name, run) in &criteria {
        let t = Instant::now();
        let outcome = run();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name} ({secs:.1}s): {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name} ({secs:.1}s): {why}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
