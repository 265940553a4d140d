//! Invariants of games, realizations and posets, checked on random and on
//! exhaustive inputs.

use std::collections::HashSet;

use proptest::prelude::*;
use wvote::lp::{int, Rational};
use wvote::*;

/// A linear game on `n` voters generated by up to four random coalitions.
fn any_game(max_n: usize) -> impl Strategy<Value = LinearGame> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(1u32..(1 << n), 1..4).prop_map(move |masks| {
            let seeds: Vec<Coalition> = masks.iter().map(|&m| Coalition::from_mask(n, m).unwrap()).collect();
            LinearGame::from_winning_fn(n, |c| seeds.iter().any(|s| s.shift_le(&c))).unwrap()
        })
    })
}

/// A weighted game from random integer weights and quota, with the weights
/// that produced it (strongest voter last).
fn any_weighted(max_n: usize) -> impl Strategy<Value = (LinearGame, Vec<i64>, i64)> {
    (1..=max_n).prop_flat_map(|n| {
        (proptest::collection::vec(0i64..12, n), 1i64..40).prop_filter_map("quota above total", move |(mut w, q)| {
            w.sort_unstable();
            let total: i64 = w.iter().sum();
            if q > total {
                return None;
            }
            let weight = |c: &Coalition| c.members_desc().iter().map(|&i| w[i - 1]).sum::<i64>();
            let g = LinearGame::from_winning_fn(n, |c| weight(&c) >= q).ok()?;
            Some((g, w, q))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn duality_is_an_involution(v in any_game(8)) {
        prop_assert_eq!(v.dual().dual(), v);
    }

    #[test]
    fn ranks_of_dual_games_sum_to_two_to_the_n(v in any_game(8)) {
        prop_assert_eq!(v.rank() + v.dual().rank(), 1 << v.n());
    }

    #[test]
    fn covers_correspond_to_generators(v in any_game(7)) {
        let covers = v.covers_in_j();
        let want = if v.is_top() { 0 } else { v.generators().len() };
        prop_assert_eq!(covers.len(), want);
        for u in &covers {
            prop_assert_eq!(u.rank(), v.rank() + 1);
            prop_assert!(u.is_above_or_equal(&v));
        }
        for u in v.covered_in_j() {
            prop_assert_eq!(u.rank() + 1, v.rank());
            prop_assert!(v.is_above_or_equal(&u));
        }
    }

    #[test]
    fn realizations_are_scale_invariant((v, w, q) in any_weighted(7), c in 1i64..50) {
        let desc: Vec<Rational> = w.iter().rev().map(|&x| int(x)).collect();
        let scaled: Vec<Rational> = w.iter().rev().map(|&x| int(x * c)).collect();
        if w.iter().all(|&x| x == 0) {
            return Ok(());
        }
        let r = Realization::from_unnormalized(int(q), &desc).unwrap();
        let s = Realization::from_unnormalized(int(q * c), &scaled).unwrap();
        prop_assert_eq!(&r, &s);
        prop_assert!(verify_realization(&v, &r));
    }

    #[test]
    fn games_from_weights_are_recognized((v, _w, _q) in any_weighted(7)) {
        let found = is_weighted(&v);
        let r = found.realization().expect("weighted game rejected");
        prop_assert!(verify_realization(&v, r));
        prop_assert!(find_trade_failure(&v, 3).is_none());
        prop_assert!(is_weighted(&v.dual()).is_weighted());
    }

    #[test]
    fn facet_law_and_hierarchy_on_sampled_weighted_games((v, _w, _q) in any_weighted(6)) {
        let r = classify_facets(&v).unwrap();
        prop_assert!(r.satisfies_facet_law(), "{}: {}", v, r.summary());
        prop_assert_eq!(footprint_hierarchy(&v).unwrap(), v.hierarchy());
        for f in &r.facets {
            prop_assert_eq!(r.facets_through(&f.witness), 1);
        }
    }

    #[test]
    fn vertical_chains_from_random_weights(raw in proptest::collection::vec(1i64..200, 1..=5)) {
        let mut raw = raw;
        raw.sort_unstable();
        let total: i64 = raw.iter().sum();
        let w: Vec<Rational> = raw.iter().map(|&x| wvote::lp::rat(x, total)).collect();
        match vertical_chain(&w) {
            Ok(steps) => {
                let n = w.len();
                prop_assert_eq!(steps.len(), (1 << n) - 1);
                for (i, s) in steps.iter().enumerate() {
                    prop_assert_eq!(s.game.rank(), i + 1);
                    prop_assert!(s.lo < s.hi);
                }
                let chain: Vec<LinearGame> = steps.into_iter().map(|s| s.game).collect();
                let r = chain_consistency(&chain).unwrap();
                prop_assert!(r.consistent && r.maximal && r.self_dual);
            }
            Err(Error::NotGeneric(_, _)) => {}
            Err(e) => prop_assert!(false, "{}", e),
        }
    }
}

#[test]
fn rank_generating_function_of_m_n() {
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
        assert_eq!(build_m_poset(n).unwrap().rank_generating_function(), poly, "n = {n}");
    }
}

#[test]
fn weightedness_is_preserved_by_duality_and_table_games() {
    for n in 1..=5 {
        for v in build_poset(n, PosetKind::J).unwrap().nodes() {
            assert_eq!(is_weighted(v).is_weighted(), is_weighted(&v.dual()).is_weighted(), "{v}");
        }
    }
    for row in census::appendix_table().unwrap() {
        for v in [&row.rank32, &row.higher] {
            assert_eq!(is_weighted(v).is_weighted(), is_weighted(&v.dual()).is_weighted(), "{v}");
        }
    }
}

#[test]
fn footprint_verdicts_agree_with_direct_lp() {
    for n in 1..=5 {
        for v in build_poset(n, PosetKind::J).unwrap().nodes() {
            if !v.is_top() {
                for a in v.generators() {
                    let f = footprint_weighted_cover(v, a).unwrap();
                    assert_eq!(f.game, v.without_generator(a).unwrap());
                    assert_eq!(f.verdict.is_weighted(), is_weighted(&f.game).is_weighted(), "{v} minus {a}");
                }
            }
            if let LosingFrontier::Maximal(bs) = v.shift_maximal_losing() {
                for b in bs {
                    let f = footprint_weighted_covered(v, &b).unwrap();
                    assert_eq!(f.game, v.with_coalition(&b).unwrap());
                    assert_eq!(f.verdict.is_weighted(), is_weighted(&f.game).is_weighted(), "{v} plus {b}");
                }
            }
        }
    }
}

#[test]
fn induced_games_preserve_order_and_double_rank() {
    let j4 = build_poset(4, PosetKind::J).unwrap();
    let lifted: Vec<LinearGame> = j4.nodes().iter().map(|v| v.induce(5).unwrap()).collect();
    for (v, u) in j4.nodes().iter().zip(&lifted) {
        assert_eq!(u.rank(), 2 * v.rank(), "{v}");
        assert_eq!(u.dummies().len(), v.dummies().len() + 1, "{v}");
    }
    for (i, a) in j4.nodes().iter().enumerate() {
        for (j, b) in j4.nodes().iter().enumerate() {
            assert_eq!(a.is_above_or_equal(b), lifted[i].is_above_or_equal(&lifted[j]), "{a} vs {b}");
        }
    }
}

#[test]
fn dual_is_a_rank_reversing_anti_automorphism() {
    for n in 1..=5 {
        let p = build_poset(n, PosetKind::J).unwrap();
        let edges: HashSet<(usize, usize)> = p.edges().iter().copied().collect();
        for &(lo, hi) in p.edges() {
            let (dlo, dhi) = (p.dual_of(lo).unwrap(), p.dual_of(hi).unwrap());
            assert!(edges.contains(&(dhi, dlo)));
        }
        for i in 0..p.len() {
            assert_eq!(p.rank_of(i) + p.rank_of(p.dual_of(i).unwrap()), 1 << n);
        }
    }
}

#[test]
fn top_half_inclusions() {
    for n in 1..=6 {
        let w = build_poset(n, PosetKind::WPlus).unwrap();
        let pi = build_poset(n, PosetKind::Pi).unwrap();
        let j = build_poset(n, PosetKind::JPlus).unwrap();
        assert!(w.nodes().iter().all(|v| pi.index_of(v).is_some()));
        assert!(pi.nodes().iter().all(|v| j.index_of(v).is_some()));
        if n == 6 {
            assert_eq!(w.len(), pi.len());
            assert_eq!(j.len() - pi.len(), 40);
        }
    }
}

#[test]
fn improper_weighted_games_pick_one_of_each_complement_pair() {
    for v in build_poset(6, PosetKind::J).unwrap().nodes() {
        if v.classify().proper || !is_weighted(v).is_weighted() {
            continue;
        }
        for m in 0..1u32 << 6 {
            let a = Coalition::from_mask(6, m).unwrap();
            assert!(v.is_winning(&a) || v.is_winning(&a.complement()), "{v}: {a}");
        }
    }
}

#[test]
fn footprint_verdicts_around_unweighted_six_voter_games() {
    let census = Census::build(6).unwrap();
    let weighted: HashSet<&LinearGame> = census
        .games
        .iter()
        .zip(&census.weighted)
        .filter(|(_, &w)| w)
        .map(|(g, _)| g)
        .collect();
    let mut unweighted_seen = 0;
    for u in census.unweighted() {
        for v in u.covered_in_j().iter().filter(|v| weighted.contains(v)) {
            let a = v.generators().iter().find(|a| !u.is_winning(a)).unwrap();
            let f = footprint_weighted_cover(v, a).unwrap();
            assert_eq!(&f.game, u);
            assert!(!f.verdict.is_weighted(), "{v} minus {a}");
            unweighted_seen += 1;
        }
        for v in u.covers_in_j().iter().filter(|v| weighted.contains(v)) {
            let b = u.generators().iter().find(|b| !v.is_winning(b)).unwrap();
            let f = footprint_weighted_covered(v, b).unwrap();
            assert_eq!(&f.game, u);
            assert!(!f.verdict.is_weighted(), "{v} plus {b}");
            unweighted_seen += 1;
        }
    }
    assert!(unweighted_seen > 0);
}
