use std::process::{Command, Output};

use wvote::LinearGame;

fn wvote(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wvote")).args(args).output().expect("binary runs")
}

/// Runs twice, checks both runs print the same bytes, and returns stdout.
fn stable(args: &[&str]) -> String {
    let a = wvote(args);
    let b = wvote(args);
    assert!(a.status.success(), "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout, "{args:?} output differs between runs");
    String::from_utf8(a.stdout).unwrap()
}

/// Every `<d...>` substring of the text.
fn games_in(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut rest = text;
    while let Some(i) = rest.find('<') {
        if !rest[i + 1..].starts_with(|c: char| c.is_ascii_digit()) {
            rest = &rest[i + 1..];
            continue;
        }
        let Some(j) = rest[i..].find('>') else { break };
        out.push(&rest[i..i + j + 1]);
        rest = &rest[i + j + 1..];
    }
    out
}

#[test]
fn classify_with_trade() {
    let s = stable(&["classify", "<8741>", "-n", "9", "--certify"]);
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines[0], "linear, proper, unweighted");
    assert!(lines.contains(&"rank: 290"));
    assert!(lines.contains(&"trade: X = {8741, 9752}, Y = {75421, 987}"));
}

#[test]
fn classify_json() {
    let s = stable(&["classify", "<41;321>", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&s).unwrap();
    assert_eq!(v["rank"], 8);
    assert_eq!(v["self_dual"], true);
    assert_eq!(v["weighted"], true);
}

#[test]
fn facets_of_a_seven_facet_game() {
    let s = stable(&["facets", "<521;4321>"]);
    assert!(s.starts_with("7 facets: top 2, bottom 2, vertical 3\n"));
    assert!(s.contains("n - k + d = 7 holds"));
}

#[test]
fn realize_both_directions() {
    let s = stable(&["realize", "<987,8741>"]);
    assert_eq!(s.trim(), "(22/39: 3/13,3/13,3/13,1/13,1/13,1/13,1/39,1/39,1/39)");
    let s = stable(&["realize", "--weights", "(3/5: 2/5,1/5,1/5,1/5,0)"]);
    assert_eq!(s.trim(), "<52;432>");
}

#[test]
fn inconsistent_chain_reports_conflicts() {
    let s = stable(&["chain", "<54;531> < <54;532> < <541;532> < <532> < <542;5321> < <543;5321>"]);
    assert!(s.starts_with("inconsistent\n"));
    assert!(s.contains("(reduces to 31 < 4)"));
    assert!(s.contains("(reduces to 4 < 31)"));
}

#[test]
fn vertical_chain_of_weights() {
    let s = stable(&["chain", "--weights", "11,6,3"]);
    let ranks: Vec<&str> = s.lines().map(|l| l.split_whitespace().next().unwrap()).collect();
    assert_eq!(ranks, ["1", "2", "3", "4", "5", "6", "7"]);
}

#[test]
fn poset_exports() {
    let dot = stable(&["poset", "-n", "4", "--kind", "Pi"]);
    assert_eq!(dot.matches("[label=").count(), 14);
    let json = stable(&["poset", "-n", "6", "--kind", "W", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["nodes"].as_array().unwrap().len(), 1111);
    let csv = stable(&["poset", "-n", "2", "--format", "csv"]);
    assert_eq!(csv.lines().next(), Some("record,id,game,rank,lower,upper"));
    assert_eq!(csv.lines().filter(|l| l.starts_with("node,")).count(), 3);
}

#[test]
fn enumerate_and_hierarchy() {
    let s = stable(&["enumerate", "-n", "3"]);
    assert_eq!(s.lines().last(), Some("8 games"));
    let s = stable(&["hierarchy", "<543;64>", "-n", "6"]);
    assert!(s.contains("power composition: [1, 2, 1]"));
}

#[test]
fn printed_games_parse_back() {
    let outputs = [
        stable(&["enumerate", "-n", "5"]),
        stable(&["poset", "-n", "5", "--kind", "W"]),
        stable(&["facets", "<521;4321>"]),
        stable(&["chain", "--weights", "17,9,5,2"]),
    ];
    let mut seen = 0;
    for text in &outputs {
        for g in games_in(text) {
            let v = LinearGame::parse_infer(g).unwrap_or_else(|e| panic!("{g}: {e}"));
            let again = LinearGame::parse(&v.to_string(), v.n()).unwrap();
            assert_eq!(again, v, "{g}");
            seen += 1;
        }
    }
    assert!(seen > 117);
}

#[test]
fn bad_input_exits_2() {
    for args in [
        &["classify", "<9x>"][..],
        &["poset", "-n", "9"],
        &["bogus"],
        &["chain", "<21>", "<321>"],
    ] {
        let o = wvote(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn verification_exit_codes() {
    let ok = wvote(&["verify-paper", "--suite", "enumeration-formula", "--suite", "symmetric-games"]);
    assert_eq!(ok.status.code(), Some(0));
    let bad = wvote(&["verify-paper", "--suite", "appendix-a"]);
    assert_eq!(bad.status.code(), Some(1));
    let s = String::from_utf8(bad.stdout).unwrap();
    assert!(s.contains("FAIL appendix-a"));
}
