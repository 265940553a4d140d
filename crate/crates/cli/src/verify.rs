//! `verify-paper`: recomputes published counts and examples.

use std::collections::HashSet;

use clap::ValueEnum;

use wvote::lp::{int, rat};
use wvote::*;

use crate::{Failure, Out};

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    AppendixA,
    Counts,
    FacetLaw,
    EnumerationFormula,
    SymmetricGames,
    ChainExamples,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::AppendixA => "appendix-a",
            Suite::Counts => "counts",
            Suite::FacetLaw => "facet-law",
            Suite::EnumerationFormula => "enumeration-formula",
            Suite::SymmetricGames => "symmetric-games",
            Suite::ChainExamples => "chain-examples",
        }
    }
}

/// Lines describing what was checked, and the mismatches found.
struct Outcome {
    info: Vec<String>,
    problems: Vec<String>,
}

impl Outcome {
    fn new() -> Outcome {
        Outcome {
            info: Vec::new(),
            problems: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.problems.push(what());
        }
    }
}

struct Censuses {
    j5: Option<Census>,
    j6: Option<Census>,
}

impl Censuses {
    fn j6(&mut self) -> Result<&Census> {
        if self.j6.is_none() {
            self.j6 = Some(Census::build(6)?);
        }
        Ok(self.j6.as_ref().unwrap())
    }

    fn both(&mut self) -> Result<(&Census, &Census)> {
        if self.j5.is_none() {
            self.j5 = Some(Census::build(5)?);
        }
        self.j6()?;
        Ok((self.j5.as_ref().unwrap(), self.j6.as_ref().unwrap()))
    }
}

pub fn run(suites: &[Suite], out: Out) -> Result<(), Failure> {
    let all = Suite::value_variants();
    let chosen: Vec<Suite> = if suites.is_empty() {
        all.to_vec()
    } else {
        all.iter().copied().filter(|s| suites.contains(s)).collect()
    };
    let mut cache = Censuses { j5: None, j6: None };
    let mut failed = 0;
    for s in chosen {
        log::info!("running suite {}", s.name());
        let o = match s {
            Suite::AppendixA => appendix(cache.j6()?)?,
            Suite::Counts => {
                let (j5, j6) = cache.both()?;
                counts(j5, j6)?
            }
            Suite::FacetLaw => facet_law()?,
            Suite::EnumerationFormula => enumeration()?,
            Suite::SymmetricGames => symmetric()?,
            Suite::ChainExamples => chains()?,
        };
        let verdict = if o.problems.is_empty() { "PASS" } else { "FAIL" };
        writeln!(out, "{verdict} {}", s.name())?;
        for line in &o.info {
            writeln!(out, "  {line}")?;
        }
        for line in &o.problems {
            writeln!(out, "  mismatch: {line}")?;
        }
        if !o.problems.is_empty() {
            failed += 1;
        }
    }
    if failed > 0 {
        writeln!(out, "{failed} suite(s) failed")?;
        Err(Failure::Mismatch)
    } else {
        Ok(())
    }
}

fn appendix(j6: &Census) -> Result<Outcome> {
    let r = verify_appendix(j6)?;
    let mut o = Outcome::new();
    o.info.push(format!("{} table rows, {} unweighted games recomputed", r.rows, r.unweighted_total));
    o.info.push(format!("ranks above 32: {:?}", r.higher_ranks));
    o.info.push(format!("all unweighted games improper: {}", r.all_improper));
    o.problems.extend(r.discrepancies);
    Ok(o)
}

fn counts(j5: &Census, j6: &Census) -> Result<Outcome> {
    let r = CountsReport::compute(j5, j6)?;
    let mut o = Outcome::new();
    o.info = r.lines();
    o.problems = r.mismatches();
    Ok(o)
}

const NON_SIMPLEX_N5: [&str; 8] = [
    "<541;5321>",
    "<541;4321>",
    "<541;532;4321>",
    "<531;4321>",
    "<54;531;4321>",
    "<521;4321>",
    "<54;521;4321>",
    "<53;521;4321>",
];

fn facet_law() -> Result<Outcome> {
    let mut o = Outcome::new();
    let mut checked = 0;
    let mut non_simplex = HashSet::new();
    for n in 1..=5 {
        for v in build_poset(n, PosetKind::J)?.nodes() {
            let r = classify_facets(v)?;
            o.check(r.satisfies_facet_law(), || format!("{v}: {} facets, k {}, d {}", r.facet_count(), r.classes_k, r.degree_d));
            if n == 5 && r.facet_count() > 6 {
                non_simplex.insert(v.clone());
            }
            checked += 1;
        }
    }
    o.info.push(format!("facet law checked on {checked} games with n <= 5"));
    let mut listed = HashSet::new();
    for s in NON_SIMPLEX_N5 {
        let g = LinearGame::parse(s, 5)?;
        listed.insert(g.dual());
        listed.insert(g);
    }
    let mut extra: Vec<&LinearGame> = non_simplex.difference(&listed).collect();
    let mut missing: Vec<&LinearGame> = listed.difference(&non_simplex).collect();
    extra.sort();
    missing.sort();
    o.info.push(format!("{} non-simplex games at n = 5", non_simplex.len()));
    for g in extra {
        o.problems.push(format!("{g} is not a simplex but is not listed"));
    }
    for g in missing {
        o.problems.push(format!("{g} is listed but is a simplex"));
    }
    let v = LinearGame::parse("<521;4321>", 5)?;
    let r = classify_facets(&v)?;
    o.info.push(format!("{v}: {}", r.summary()));
    o.check(r.counts() == (2, 2, 3), || format!("{v}: {}", r.summary()));
    let vertex = Point::from_realization(&Realization::parse("(3/5: 2/5,1/5,1/5,1/5,0)")?);
    let through = r.facets_through(&vertex);
    o.info.push(format!("facets through {vertex}: {through}"));
    o.check(through == 6, || format!("{through} facets through {vertex}, expected 6"));
    Ok(o)
}

fn enumeration() -> Result<Outcome> {
    let mut o = Outcome::new();
    for n in 1..=10 {
        let formula = one_generator_proper_count(n)?;
        let brute = one_generator_proper_brute(n)?;
        let listed = one_generator_proper_list(n)?;
        o.check(brute.len() as u64 == formula, || format!("n = {n}: {} proper, formula {formula}", brute.len()));
        o.check(listed == brute, || format!("n = {n}: characterization lists a different set"));
    }
    o.info.push("one-generator proper games for n = 1..10 match 2^n - C(n, n/2)".into());
    Ok(o)
}

fn symmetric() -> Result<Outcome> {
    let mut o = Outcome::new();
    for n in 1..=6 {
        let f = symmetric_game_counts(n);
        let e = symmetric_game_counts_enumerated(n)?;
        o.check(f == e, || format!("n = {n}: formula {f:?}, enumeration {e:?}"));
        for g in symmetric_games(n)? {
            o.check(is_weighted(&g).is_weighted(), || format!("{g} unweighted"));
        }
    }
    o.info.push("symmetric game counts for n = 1..6 match, all weighted".into());
    let intervals = |j| -> Result<Vec<_>> {
        Ok(symmetric_games_above_corner(3, j)?.into_iter().map(|s| (s.lo, s.hi)).collect())
    };
    o.check(
        intervals(3)? == vec![(int(0), rat(1, 3)), (rat(1, 3), rat(2, 3)), (rat(2, 3), int(1))],
        || "corner p3 intervals".into(),
    );
    o.check(intervals(2)? == vec![(int(0), rat(1, 2)), (rat(1, 2), int(1))], || "corner p2 intervals".into());
    o.info.push("corner quota intervals at n = 3 match".into());
    Ok(o)
}

fn chains() -> Result<Outcome> {
    let mut o = Outcome::new();
    let chain = ["<54;531>", "<54;532>", "<541;532>", "<532>", "<542;5321>", "<543;5321>"]
        .iter()
        .map(|s| LinearGame::parse(s, 5))
        .collect::<Result<Vec<_>>>()?;
    let r = chain_consistency(&chain)?;
    let reduced: Vec<String> = r.conflicts.iter().map(|c| c.reduced().to_string()).collect();
    o.info.push(format!("six-game chain: {}, conflicts reduce to {reduced:?}", if r.consistent { "consistent" } else { "inconsistent" }));
    o.check(!r.consistent, || "six-game chain reported consistent".into());
    o.check(reduced.iter().any(|s| s == "31 < 4") && reduced.iter().any(|s| s == "4 < 31"), || {
        format!("conflicts {reduced:?} do not show 31 < 4 and 4 < 31")
    });
    let pi4 = build_poset(4, PosetKind::Pi)?;
    let e = enumerate_maximal_chains(&pi4, 10_000);
    let mut consistent = 0;
    for ids in &e.chains {
        let c: Vec<LinearGame> = ids.iter().map(|&i| pi4.nodes()[i].clone()).collect();
        if chain_consistency(&c)?.consistent {
            consistent += 1;
        }
    }
    o.info.push(format!("Pi4: {} maximal chains, {consistent} consistent", e.chains.len()));
    o.check(e.chains.len() == 14 && consistent == 14, || format!("Pi4 has {} chains, {consistent} consistent", e.chains.len()));
    Ok(o)
}
