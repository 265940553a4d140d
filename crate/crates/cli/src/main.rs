use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::LevelFilter;
use serde_json::{json, Value};

use wvote::lp::rational::approx;
use wvote::lp::{int, Rational};
use wvote::poset::{m_poset_to_csv, m_poset_to_dot, m_poset_to_json};
use wvote::*;

mod verify;

#[derive(Parser)]
#[command(name = "wvote", version, about = "Linear and weighted simple games with exact arithmetic")]
struct Cli {
    /// More log output on stderr (-v info, -vv debug, -vvv trace).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    /// Add decimal renderings next to exact fractions.
    #[arg(long, global = true)]
    approx: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GameArg {
    /// Game as <c1;c2;...>, e.g. "<521;4321>"; coalitions are digit strings
    /// (strongest voter first) or braced lists such as {10,3,1}.
    game: String,
    /// Number of voters; inferred from the largest voter mentioned if omitted.
    #[arg(short, long)]
    n: Option<usize>,
}

impl GameArg {
    fn parse(&self) -> Result<LinearGame> {
        match self.n {
            Some(n) => LinearGame::parse(&self.game, n),
            None => LinearGame::parse_infer(&self.game),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Proper/strong/self-dual/weighted classification.
    Classify {
        #[command(flatten)]
        game: GameArg,
        /// Attach a realization or a trade certificate.
        #[arg(long)]
        certify: bool,
        /// Largest trade size searched by --certify.
        #[arg(long, default_value_t = 4)]
        bound: usize,
        #[arg(long)]
        json: bool,
    },
    /// A normalized realization of a game, or the game of a realization.
    Realize {
        /// Game to realize.
        game: Option<String>,
        #[arg(short, long)]
        n: Option<usize>,
        /// Realization "(q: w_n,...,w_1)" to turn into a game instead.
        #[arg(long, conflicts_with = "game")]
        weights: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Facets of the realization polytope with witness points.
    Facets {
        #[command(flatten)]
        game: GameArg,
        #[arg(long)]
        json: bool,
    },
    /// Desirability classes and power composition.
    Hierarchy {
        #[command(flatten)]
        game: GameArg,
        #[arg(long)]
        json: bool,
    },
    /// Consistency of a saturated chain, or the vertical chain of weights.
    Chain {
        /// Games from lowest to highest, as separate arguments or joined by " < ".
        games: Vec<String>,
        #[arg(short, long)]
        n: Option<usize>,
        /// Weights "w_n,...,w_1" (normalized or not) whose vertical line to follow.
        #[arg(long, conflicts_with = "games")]
        weights: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Export a poset as DOT, JSON or CSV.
    Poset {
        #[arg(short, long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Kind::J)]
        kind: Kind,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
        /// Allow the larger builds (7 voters for game posets, up to 16 for M).
        #[arg(long)]
        force: bool,
        /// Write to a file instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// List the nodes of a game poset with their classification.
    Enumerate {
        #[arg(short, long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Kind::J)]
        kind: Kind,
        #[arg(long)]
        force: bool,
        #[arg(long)]
        json: bool,
    },
    /// Recompute the published numbers; exit 1 on any mismatch.
    VerifyPaper {
        /// Suites to run (default: all).
        #[arg(long, value_enum)]
        suite: Vec<verify::Suite>,
    },
    /// Search for a trade showing a game is not weighted.
    TradeSearch {
        #[command(flatten)]
        game: GameArg,
        /// Largest |X| tried.
        #[arg(long, default_value_t = 3)]
        bound: usize,
        #[arg(long)]
        json: bool,
    },
    /// Experimental searches around the open questions on game posets.
    ConjectureProbe {
        #[arg(long, value_enum)]
        conjecture: Conjecture,
        #[arg(short, long)]
        n: usize,
        /// Cap on the number of chains examined (vertical probe).
        #[arg(long, default_value_t = 200)]
        limit: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    #[value(name = "M")]
    M,
    #[value(name = "J")]
    J,
    #[value(name = "Jplus")]
    JPlus,
    #[value(name = "Pi")]
    Pi,
    #[value(name = "W")]
    W,
    #[value(name = "Wplus")]
    WPlus,
}

impl Kind {
    fn games(self) -> Option<PosetKind> {
        match self {
            Kind::M => None,
            Kind::J => Some(PosetKind::J),
            Kind::JPlus => Some(PosetKind::JPlus),
            Kind::Pi => Some(PosetKind::Pi),
            Kind::W => Some(PosetKind::W),
            Kind::WPlus => Some(PosetKind::WPlus),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Conjecture {
    /// Weighted games form an induced subposet of all linear games.
    Induced,
    /// Consistent self-dual maximal chains come from vertical lines.
    Vertical,
}

/// Failure of a command: bad input (exit 2) or a negative verification (exit 1).
enum Failure {
    Usage(String),
    Mismatch,
    Closed,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        if e.kind() == io::ErrorKind::BrokenPipe {
            return Failure::Closed;
        }
        Failure::Usage(e.to_string())
    }
}

type Out<'a> = &'a mut dyn Write;

struct Ctx {
    approx: bool,
}

impl Ctx {
    fn num(&self, r: &Rational) -> String {
        if self.approx {
            format!("{r} (~{})", approx(r))
        } else {
            r.to_string()
        }
    }

    fn realization(&self, r: &Realization) -> String {
        if self.approx {
            format!("{r} ~ {}", r.approx())
        } else {
            r.to_string()
        }
    }

    fn point(&self, p: &Point) -> String {
        if self.approx {
            format!("{p} ~ {}", p.approx())
        } else {
            p.to_string()
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => LevelFilter::Warn,
        1 => LevelFilter::Info,
        2 => LevelFilter::Debug,
        _ => LevelFilter::Trace,
    };
    env_logger::Builder::new().filter_level(level).init();
    let ctx = Ctx { approx: cli.approx };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(&ctx, cli.command, &mut out) {
        Ok(()) | Err(Failure::Closed) => ExitCode::SUCCESS,
        Err(Failure::Mismatch) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            let _ = out.flush();
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn print_json(out: Out, v: &Value) -> Result<(), Failure> {
    writeln!(out, "{}", serde_json::to_string_pretty(v).expect("json values serialize"))?;
    Ok(())
}

fn run(ctx: &Ctx, cmd: Command, out: Out) -> Result<(), Failure> {
    match cmd {
        Command::Classify {
            game,
            certify,
            bound,
            json,
        } => classify(ctx, &game.parse()?, certify, bound, json, out),
        Command::Realize { game, n, weights, json } => realize(ctx, game, n, weights, json, out),
        Command::Facets { game, json } => facets(ctx, &game.parse()?, json, out),
        Command::Hierarchy { game, json } => hierarchy(&game.parse()?, json, out),
        Command::Chain { games, n, weights, json } => chain(ctx, games, n, weights, json, out),
        Command::Poset {
            n,
            kind,
            format,
            force,
            output,
        } => poset(n, kind, format, force, output, out),
        Command::Enumerate { n, kind, force, json } => enumerate(n, kind, force, json, out),
        Command::VerifyPaper { suite } => verify::run(&suite, out),
        Command::TradeSearch { game, bound, json } => trade_search(&game.parse()?, bound, json, out),
        Command::ConjectureProbe { conjecture, n, limit } => probe(conjecture, n, limit, out),
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn classify(ctx: &Ctx, v: &LinearGame, certify: bool, bound: usize, json: bool, out: Out) -> Result<(), Failure> {
    let c = v.classify();
    let w = is_weighted(v);
    let cert = if certify && !w.is_weighted() {
        find_trade_failure(v, bound)
    } else {
        None
    };
    if json {
        let mut j = json!({
            "game": v.to_string(),
            "n": v.n(),
            "linear": true,
            "proper": c.proper,
            "strong": c.strong,
            "self_dual": c.self_dual,
            "weighted": w.is_weighted(),
            "rank": v.rank(),
        });
        if certify {
            j["realization"] = w.realization().map_or(Value::Null, |r| r.to_json());
            j["certificate"] = cert.as_ref().map_or(Value::Null, |c| c.to_json());
        }
        return print_json(out, &j);
    }
    writeln!(
        out,
        "linear, {}, {}",
        if c.proper { "proper" } else { "improper" },
        if w.is_weighted() { "weighted" } else { "unweighted" }
    )?;
    writeln!(out, "game: {v} on {} voters", v.n())?;
    writeln!(out, "strong: {}", yes_no(c.strong))?;
    writeln!(out, "self-dual: {}", yes_no(c.self_dual))?;
    writeln!(out, "rank: {}", v.rank())?;
    if certify {
        match (&w, &cert) {
            (Weightedness::Weighted(r), _) => writeln!(out, "realization: {}", ctx.realization(r))?,
            (_, Some(t)) => writeln!(out, "trade: {t}")?,
            (_, None) => writeln!(out, "trade: none with |X| <= {bound} (the weightedness LP is infeasible)")?,
        }
    }
    Ok(())
}

fn realize(
    ctx: &Ctx,
    game: Option<String>,
    n: Option<usize>,
    weights: Option<String>,
    json: bool,
    out: Out,
) -> Result<(), Failure> {
    if let Some(text) = weights {
        let r = Realization::parse(&text)?;
        let v = LinearGame::from_winning_fn(r.n(), |c| r.weight(&c) >= r.q)?;
        if json {
            return print_json(out, &json!({ "realization": r.to_json(), "game": v.to_json() }));
        }
        writeln!(out, "{v}")?;
        return Ok(());
    }
    let text = game.ok_or_else(|| Failure::Usage("give a game or --weights".into()))?;
    let v = GameArg { game: text, n }.parse()?;
    let w = is_weighted(&v);
    if json {
        return print_json(
            out,
            &json!({
                "game": v.to_string(),
                "weighted": w.is_weighted(),
                "realization": w.realization().map_or(Value::Null, |r| r.to_json()),
            }),
        );
    }
    match w {
        Weightedness::Weighted(r) => writeln!(out, "{}", ctx.realization(&r))?,
        Weightedness::Unweighted => writeln!(out, "unweighted")?,
    }
    Ok(())
}

fn facets(ctx: &Ctx, v: &LinearGame, json: bool, out: Out) -> Result<(), Failure> {
    let r = classify_facets(v)?;
    if json {
        return print_json(out, &r.to_json());
    }
    writeln!(out, "{}", r.summary())?;
    for f in &r.facets {
        writeln!(out, "  {} at {}", f.halfspace, ctx.point(&f.witness))?;
    }
    let law = if r.satisfies_facet_law() { "holds" } else { "fails" };
    writeln!(out, "n {}, k {}, d {}: n - k + d = {} {law}", r.n(), r.classes_k, r.degree_d, r.n() + r.degree_d - r.classes_k)?;
    let list = |gs: &[LinearGame]| gs.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(" ");
    writeln!(out, "weighted covers: {}", list(&r.weighted_covers))?;
    writeln!(out, "weighted covered: {}", list(&r.weighted_covered))?;
    Ok(())
}

fn hierarchy_text(h: &Hierarchy) -> String {
    let mut parts: Vec<String> = h
        .classes
        .iter()
        .map(|c| c.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("~"))
        .collect();
    if !h.dummies.is_empty() {
        let d = h.dummies.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",");
        parts.push(format!("dummies {d}"));
    }
    parts.join(" > ")
}

fn hierarchy(v: &LinearGame, json: bool, out: Out) -> Result<(), Failure> {
    let h = v.hierarchy();
    let fp = if is_weighted(v).is_weighted() {
        Some(footprint_hierarchy(v)?)
    } else {
        None
    };
    if json {
        return print_json(
            out,
            &json!({
                "game": v.to_string(),
                "classes": h.classes,
                "dummies": h.dummies,
                "power_composition": h.power_composition(),
                "extended_composition": h.extended_composition(),
                "footprint_agrees": fp.as_ref().map(|f| *f == h),
            }),
        );
    }
    writeln!(out, "{}", hierarchy_text(&h))?;
    writeln!(out, "power composition: {:?}", h.power_composition())?;
    writeln!(out, "extended composition: {:?}", h.extended_composition())?;
    match fp {
        Some(f) if f == h => writeln!(out, "footprint: agrees")?,
        Some(f) => writeln!(out, "footprint: {}", hierarchy_text(&f))?,
        None => writeln!(out, "footprint: unweighted game, no polytope")?,
    }
    Ok(())
}

fn parse_weights(text: &str) -> Result<Vec<Rational>, Failure> {
    let desc: Vec<Rational> = text
        .split(',')
        .map(|t| wvote::lp::parse_rational(t.trim()))
        .collect::<Result<_>>()?;
    if desc.is_empty() {
        return Err(Failure::Usage("no weights given".into()));
    }
    let total: Rational = desc.iter().sum();
    if total <= int(0) {
        return Err(Failure::Usage("weights must have a positive sum".into()));
    }
    Ok(desc.iter().rev().map(|x| x / &total).collect())
}

fn chain(
    ctx: &Ctx,
    games: Vec<String>,
    n: Option<usize>,
    weights: Option<String>,
    json: bool,
    out: Out,
) -> Result<(), Failure> {
    if let Some(text) = weights {
        let w = parse_weights(&text)?;
        let steps = vertical_chain(&w)?;
        if json {
            let rows: Vec<Value> = steps
                .iter()
                .map(|s| {
                    json!({
                        "game": s.game.to_string(),
                        "rank": s.game.rank(),
                        "lo": wvote::lp::rational::to_json(&s.lo),
                        "hi": wvote::lp::rational::to_json(&s.hi),
                    })
                })
                .collect();
            return print_json(out, &json!({ "chain": rows }));
        }
        for s in &steps {
            writeln!(out, "{:>4}  {}  q in ({}, {}]", s.game.rank(), s.game, ctx.num(&s.lo), ctx.num(&s.hi))?;
        }
        return Ok(());
    }
    let texts: Vec<String> = games
        .iter()
        .flat_map(|g| g.split(" < ").map(str::to_string).collect::<Vec<_>>())
        .collect();
    if texts.is_empty() {
        return Err(Failure::Usage("give the chain's games or --weights".into()));
    }
    let n = match n {
        Some(n) => n,
        None => texts
            .iter()
            .map(|t| LinearGame::parse_infer(t).map(|g| g.n()))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .max()
            .unwrap_or(1),
    };
    let chain = texts
        .iter()
        .map(|t| LinearGame::parse(t, n))
        .collect::<Result<Vec<_>>>()?;
    let r = chain_consistency(&chain)?;
    let cmp = |c: &Comparison| json!({ "lower": c.lower.to_string(), "upper": c.upper.to_string(), "reduced": c.reduced().to_string() });
    if json {
        return print_json(
            out,
            &json!({
                "chain": r.chain.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
                "consistent": r.consistent,
                "maximal": r.maximal,
                "self_dual": r.self_dual,
                "order": r.generator_order.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "top_generators": r.top_generators.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "witness": r.witness.as_ref().map(|w| w.iter().rev().map(wvote::lp::rational::to_json).collect::<Vec<_>>()),
                "conflicts": r.conflicts.iter().map(cmp).collect::<Vec<_>>(),
            }),
        );
    }
    writeln!(out, "{}", if r.consistent { "consistent" } else { "inconsistent" })?;
    writeln!(out, "maximal: {}, self-dual: {}", yes_no(r.maximal), yes_no(r.self_dual))?;
    let mut order: Vec<String> = r.generator_order.iter().map(|c| c.to_string()).collect();
    if !r.top_generators.is_empty() {
        let tops: Vec<String> = r.top_generators.iter().map(|c| c.to_string()).collect();
        order.push(format!("{{{}}}", tops.join(", ")));
    }
    writeln!(out, "order: {}", order.join(" < "))?;
    if let Some(w) = &r.witness {
        let shown: Vec<String> = w.iter().rev().map(|x| ctx.num(x)).collect();
        writeln!(out, "weights: {}", shown.join(", "))?;
    }
    for c in &r.conflicts {
        writeln!(out, "conflict: {c}  (reduces to {})", c.reduced())?;
    }
    if let Some((a, b)) = &r.prefilter_conflict {
        writeln!(out, "embedded copies disagree: {a} vs {b} ({} vs {})", a.reduced(), b.reduced())?;
    }
    Ok(())
}

fn poset(n: usize, kind: Kind, format: Format, force: bool, output: Option<PathBuf>, out: Out) -> Result<(), Failure> {
    let text = match kind.games() {
        None => {
            let cap = if force { MAX_VOTERS } else { 12 };
            if n > cap {
                return Err(Failure::Usage(format!("M({n}) exceeds {cap} voters; pass --force")));
            }
            let p = build_m_poset(n)?;
            match format {
                Format::Dot => m_poset_to_dot(&p),
                Format::Json => serde_json::to_string_pretty(&m_poset_to_json(&p)).expect("json") + "\n",
                Format::Csv => m_poset_to_csv(&p),
            }
        }
        Some(k) => {
            let p = build_poset_with(n, k, force)?;
            match format {
                Format::Dot => p.to_dot(),
                Format::Json => serde_json::to_string_pretty(&p.to_json()).expect("json") + "\n",
                Format::Csv => p.to_csv(),
            }
        }
    };
    match output {
        Some(path) => fs::write(path, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn enumerate(n: usize, kind: Kind, force: bool, json: bool, out: Out) -> Result<(), Failure> {
    let k = kind
        .games()
        .ok_or_else(|| Failure::Usage("enumerate lists games; use `poset --kind M` for coalitions".into()))?;
    let p = build_poset_with(n, k, force)?;
    let weighted: Vec<bool> = if matches!(k, PosetKind::W | PosetKind::WPlus) {
        vec![true; p.len()]
    } else {
        p.nodes().iter().map(|g| is_weighted(g).is_weighted()).collect()
    };
    if json {
        let rows: Vec<Value> = p
            .nodes()
            .iter()
            .zip(&weighted)
            .map(|(g, w)| {
                let c = g.classify();
                json!({ "game": g.to_string(), "rank": g.rank(), "proper": c.proper, "strong": c.strong,
                        "self_dual": c.self_dual, "weighted": w })
            })
            .collect();
        return print_json(out, &json!({ "n": n, "kind": k.name(), "games": rows }));
    }
    writeln!(out, "rank  game  proper strong self-dual weighted")?;
    for (g, w) in p.nodes().iter().zip(&weighted) {
        let c = g.classify();
        writeln!(
            out,
            "{}  {g}  {} {} {} {}",
            g.rank(),
            yes_no(c.proper),
            yes_no(c.strong),
            yes_no(c.self_dual),
            yes_no(*w)
        )?;
    }
    writeln!(out, "{} games", p.len())?;
    Ok(())
}

fn trade_search(v: &LinearGame, bound: usize, json: bool, out: Out) -> Result<(), Failure> {
    let found = find_trade_failure(v, bound);
    if let Some(c) = &found {
        assert!(check_certificate(v, c), "certificate failed its own check");
    }
    if json {
        return print_json(
            out,
            &json!({ "game": v.to_string(), "bound": bound, "certificate": found.as_ref().map(|c| c.to_json()) }),
        );
    }
    match found {
        Some(c) => writeln!(out, "not trade robust: {c}")?,
        None => writeln!(out, "no trade with |X| <= {bound}")?,
    }
    Ok(())
}

fn probe(which: Conjecture, n: usize, limit: usize, out: Out) -> Result<(), Failure> {
    match which {
        Conjecture::Induced => match probe_induced_conjecture(n)? {
            InducedProbe::Holds { pairs_checked } => {
                writeln!(out, "holds: every comparable pair of weighted games is joined by weighted covers ({pairs_checked} pairs)")?
            }
            InducedProbe::Counterexample { lower, upper } => {
                writeln!(out, "counterexample: {lower} < {upper} with no all-weighted saturated chain")?;
                writeln!(out, "lower realization: {}", is_weighted(&lower).realization().map_or("-".into(), |r| r.to_string()))?;
                writeln!(out, "upper realization: {}", is_weighted(&upper).realization().map_or("-".into(), |r| r.to_string()))?;
            }
        },
        Conjecture::Vertical => {
            let p = probe_vertical_chains(n, limit)?;
            writeln!(
                out,
                "{} self-dual maximal chains examined{}; {} consistent; witness found for {}",
                p.chains_examined,
                if p.truncated { " (limit reached)" } else { "" },
                p.candidates,
                p.witnesses_found
            )?;
            for c in &p.without_witness {
                let names: Vec<String> = c.iter().map(|g| g.to_string()).collect();
                writeln!(out, "none found: {}", names.join(" < "))?;
            }
        }
    }
    Ok(())
}
