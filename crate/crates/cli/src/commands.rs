use std::path::Path;
use std::time::Instant;

use num_bigint::BigInt;
use serde_json::{json, Value};
use shapql::game::{CooperativeGame, Player};
use shapql::kb::{Assertion, Atom, BooleanQuery, Term};
use shapql::lab::encodings::{edge_values, games_isomorphic};
use shapql::lab::graph::{BipartiteGraph, DiGraph};
use shapql::lab::interface::{
    bipartite_encoding, count_independent_sets_via_shapley, first_unsplittable, verify_coalition_bijection,
    PathFixture,
};
use shapql::lab::st::{count_st_subgraphs_brute, count_st_subgraphs_via_shapley};
use shapql::pqe::{pqe_exact, qstar_identity, validate_regime, ProbabilisticABox, Regime};
use shapql::reasoner::{is_consistent, Consistency, ReasonerOptions};
use shapql::shapley::{
    dllite_atomic_shapley, sample_additive, sample_multiplicative, shapley_all, shapley_permutation_all,
    shapley_via_supports_all, ShapleyResult,
};
use shapql::supports::minimal_supports;
use shapql::text::{parse_kb, parse_query, KbDocument};
use shapql::Rational;

use crate::error::CliError;
use crate::output::{ratio, OutputRecord, PlayerValue, Stats};
use crate::{Cli, Command, FixtureArgs, LabCommand, MethodArg, PqeArgs, RegimeArg, ShapleyArgs, SupportsArgs};

pub fn run(cli: &Cli) -> Result<Vec<OutputRecord>, CliError> {
    let start = Instant::now();
    let opts = match cli.chase_depth {
        Some(d) => ReasonerOptions::with_depth(d),
        None => ReasonerOptions::default(),
    };
    let mut records = match &cli.command {
        Command::Shapley(a) => vec![shapley(a, &opts)?],
        Command::Supports(a) => vec![supports(a, &opts)?],
        Command::Pqe(a) => vec![pqe(a, &opts)?],
        Command::Consistency(a) => vec![consistency(&a.kb, &opts)?],
        Command::Lab(l) => vec![lab(l, &opts)?],
    };
    if cli.timing {
        let ms = start.elapsed().as_secs_f64() * 1e3;
        for r in &mut records {
            r.timing_ms = Some(ms);
        }
    }
    Ok(records)
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_kb(path: &Path) -> Result<KbDocument, CliError> {
    let doc = parse_kb(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    doc.partitioned().validate().map_err(|e| CliError::Input(e.to_string()))?;
    Ok(doc)
}

fn load_query(path: &Path) -> Result<BooleanQuery, CliError> {
    parse_query(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn parse_ratio(s: &str, what: &str) -> Result<Rational, CliError> {
    s.parse::<Rational>().map_err(|_| CliError::Input(format!("{what} must be a fraction p/q, got `{s}`")))
}

/// A player written as a single assertion or axiom.
fn parse_player(s: &str) -> Result<Player, CliError> {
    let s = s.trim().trim_end_matches('.');
    if let Ok(doc) = parse_kb(&format!("abox endo {{ {s}. }}")) {
        if let Some(a) = doc.abox_endo.iter().next() {
            return Ok(Player::Assertion(a.clone()));
        }
    }
    parse_kb(&format!("tbox endo {{ {s}. }}"))
        .ok()
        .and_then(|doc| doc.tbox_endo.into_iter().next())
        .map(Player::Axiom)
        .ok_or_else(|| CliError::Input(format!("cannot parse player `{s}`")))
}

fn selected(g: &CooperativeGame, player: &Option<String>) -> Result<Vec<usize>, CliError> {
    match player {
        None => Ok((0..g.n()).collect()),
        Some(s) => {
            let p = parse_player(s)?;
            g.index_of(&p)
                .map(|i| vec![i])
                .ok_or_else(|| CliError::Input(format!("`{p}` is not an endogenous player")))
        }
    }
}

fn exact_values(res: &ShapleyResult<Rational>, idx: &[usize], decimal: bool) -> Vec<PlayerValue> {
    idx.iter()
        .map(|&i| PlayerValue::exact(res.players[i].to_string(), &res.values[i], decimal))
        .collect()
}

/// The goal `A(c)` of a single-atom query, for the closed form.
fn atomic_goal(q: &BooleanQuery) -> Result<Assertion, CliError> {
    if let BooleanQuery::Ucq(ds) = q {
        if let [d] = ds.as_slice() {
            let atoms: Vec<&Atom> = d.atoms().collect();
            if let [Atom::Concept(c, Term::Const(i))] = atoms.as_slice() {
                return Ok(Assertion::concept(c.as_str(), i.as_str()));
            }
        }
    }
    Err(CliError::Input("the closed form needs a query `q :- A(c).`".into()))
}

fn shapley(a: &ShapleyArgs, opts: &ReasonerOptions) -> Result<OutputRecord, CliError> {
    let doc = load_kb(&a.kb)?;
    let q = load_query(&a.query)?;
    let pk = doc.partitioned();
    let g = CooperativeGame::from_kb(&pk, &q, opts)?;
    let idx = selected(&g, &a.player)?;
    let mut rec = OutputRecord::new("shapley");
    match a.method {
        MethodArg::Exact | MethodArg::Permutation | MethodArg::Supports | MethodArg::ClosedForm => {
            let res = match a.method {
                MethodArg::Exact => shapley_all::<Rational>(&g)?,
                MethodArg::Permutation => shapley_permutation_all::<Rational>(&g)?,
                MethodArg::Supports => shapley_via_supports_all::<Rational>(&minimal_supports(&g, None)?),
                _ => dllite_atomic_shapley::<Rational>(&pk, &atomic_goal(&q)?, opts)?,
            };
            rec.method = Some(res.method.as_str().to_string());
            rec.values = exact_values(&res, &idx, a.decimal);
        }
        MethodArg::Sample => {
            let eps = parse_ratio(&a.eps, "--eps")?;
            let delta = parse_ratio(&a.delta, "--delta")?;
            let ss = if a.multiplicative { Some(minimal_supports(&g, None)?) } else { None };
            for &i in &idx {
                let est = match &ss {
                    Some(ss) => sample_multiplicative::<Rational>(&g, i, &eps, &delta, ss, a.seed)?,
                    None => sample_additive::<Rational>(&g, i, &eps, &delta, a.seed)?,
                };
                let mut v = PlayerValue::exact(g.players()[i].to_string(), &est.value, a.decimal);
                v.samples = Some(est.samples);
                rec.values.push(v);
            }
            rec.method = Some(if a.multiplicative { "sample-multiplicative" } else { "sample" }.into());
            rec.seed = Some(a.seed);
            rec.set("epsilon", ratio(&eps)).set("delta", ratio(&delta));
        }
    }
    rec.stats = Some(Stats::from(g.stats()));
    Ok(rec)
}

fn supports(a: &SupportsArgs, opts: &ReasonerOptions) -> Result<OutputRecord, CliError> {
    let doc = load_kb(&a.kb)?;
    let q = load_query(&a.query)?;
    let g = CooperativeGame::from_kb(&doc.partitioned(), &q, opts)?;
    let ss = minimal_supports(&g, a.cap)?;
    let list: Vec<Value> = ss
        .supports
        .iter()
        .map(|&s| Value::from(ss.members(s).iter().map(|p| p.to_string()).collect::<Vec<_>>()))
        .collect();
    let mut rec = OutputRecord::new("supports");
    rec.set("count", ss.len()).set("max_size", ss.size_bound()).set("supports", list);
    rec.stats = Some(Stats::from(g.stats()));
    Ok(rec)
}

fn pqe(a: &PqeArgs, opts: &ReasonerOptions) -> Result<OutputRecord, CliError> {
    let doc = load_kb(&a.kb)?;
    let q = load_query(&a.query)?;
    let d = ProbabilisticABox::from_document(&doc)?;
    let regime = match a.regime {
        RegimeArg::Half => Regime::Half,
        RegimeArg::HalfOne => Regime::HalfOne,
        RegimeArg::SingleProper => Regime::SingleProper,
        RegimeArg::Any => Regime::Any,
    };
    if !validate_regime(&d, regime) {
        let image: Vec<String> = d.image().iter().map(ratio).collect();
        return Err(CliError::Input(format!(
            "probabilities {{{}}} violate the {:?} regime",
            image.join(", "),
            a.regime
        )));
    }
    let tbox = doc.partitioned().tbox();
    let p = pqe_exact::<Rational>(&d, &tbox, &q, opts)?;
    let mut rec = OutputRecord::new("pqe");
    rec.set("probability", ratio(&p));
    if a.decimal {
        rec.set("approx_decimal", shapql::Scalar::approx(&p));
    }
    if a.qstar {
        let id = qstar_identity::<Rational>(&d, &tbox, &q, opts)?;
        rec.set(
            "qstar",
            json!({
                "probability": ratio(&id.lhs),
                "p_bot": ratio(&id.p_bot),
                "p_query": ratio(&id.pr_q),
                "additive_form": ratio(&id.plus_form),
                "holds": id.plus_holds(),
            }),
        );
    }
    Ok(rec)
}

fn consistency(kb: &Path, opts: &ReasonerOptions) -> Result<OutputRecord, CliError> {
    let pk = load_kb(kb)?.partitioned();
    let verdict = match is_consistent(&pk.abox(), &pk.tbox(), opts) {
        Consistency::Consistent => true,
        Consistency::Inconsistent => false,
        Consistency::Unknown => return Err(CliError::Unknown("consistency undecided; raise the chase depth".into())),
    };
    let mut rec = OutputRecord::new("consistency");
    rec.set("consistent", verdict);
    Ok(rec)
}

/// Small counts as JSON numbers, larger ones as strings.
fn count(n: &BigInt) -> Value {
    u64::try_from(n).map(Value::from).unwrap_or_else(|_| Value::from(n.to_string()))
}

fn fixture_inputs(a: &FixtureArgs, opts: &ReasonerOptions) -> Result<(PathFixture, BipartiteGraph, usize), CliError> {
    let f = PathFixture::parse(&read(&a.fixture)?)?;
    let g = BipartiteGraph::parse(&read(&a.graph)?)?;
    let chi = match a.interface {
        Some(c) => c,
        None => first_unsplittable(&f, opts)?
            .ok_or_else(|| CliError::Input("every interface of the fixture is splittable".into()))?,
    };
    Ok((f, g, chi))
}

fn lab(cmd: &LabCommand, opts: &ReasonerOptions) -> Result<OutputRecord, CliError> {
    match cmd {
        LabCommand::StCount { graph } => {
            let g = DiGraph::parse(&read(graph)?)?;
            let via = count_st_subgraphs_via_shapley(&g, opts)?;
            let brute = count_st_subgraphs_brute(&g)?;
            let mut rec = OutputRecord::new("lab st-count");
            rec.set("via_shapley", count(&via.total))
                .set("brute", brute)
                .set("match", via.total == BigInt::from(brute))
                .set("by_size", via.by_size.iter().map(count).collect::<Vec<_>>());
            Ok(rec)
        }
        LabCommand::IsCount(a) => {
            let (f, g, chi) = fixture_inputs(a, opts)?;
            let via = count_independent_sets_via_shapley(&f, chi, &g, opts)?;
            let (brute, by_size) = g.count_independent_sets()?;
            let mut rec = OutputRecord::new("lab is-count");
            rec.set("interface", chi)
                .set("via_shapley", count(&via.total))
                .set("brute", brute)
                .set("match", via.total == BigInt::from(brute))
                .set("by_size", via.by_size.iter().map(count).collect::<Vec<_>>())
                .set("brute_by_size", by_size);
            Ok(rec)
        }
        LabCommand::VerifyBijection(a) => {
            let (f, g, chi) = fixture_inputs(a, opts)?;
            let enc = bipartite_encoding(&f, chi, &g)?;
            let holds = verify_coalition_bijection(&f, &enc, &g, opts)?;
            let mut rec = OutputRecord::new("lab verify-bijection");
            rec.set("interface", chi)
                .set("coalitions", 1u64 << g.vertex_count())
                .set("holds", holds);
            Ok(rec)
        }
        LabCommand::GameIso { graph } => {
            let g = DiGraph::parse(&read(graph)?)?;
            let vals = edge_values(&g, opts)?;
            let edges: Vec<String> = g.edges().map(|(v, w)| format!("{v} {w}")).collect();
            let per: serde_json::Map<String, Value> = vals
                .iter()
                .map(|v| (v.encoding.to_string(), Value::from(v.values.iter().map(ratio).collect::<Vec<_>>())))
                .collect();
            let mut rec = OutputRecord::new("lab game-iso");
            rec.set("edges", edges).set("values", per).set("isomorphic", games_isomorphic(&vals));
            Ok(rec)
        }
    }
}
