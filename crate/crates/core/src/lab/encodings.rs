//! Five encodings of s-t reachability as KB games, all isomorphic to the edge game.

use crate::game::{CooperativeGame, OracleError, Player};
use crate::shapley::shapley_subset_all;
use crate::Rational;
use crate::kb::{ABox, Assertion, Atom, Axiom, BooleanQuery, Concept, PartitionedKB, Role, Term};
use crate::reasoner::ReasonerOptions;

use super::graph::DiGraph;
use super::LabError;

/// A partitioned KB and query whose players correspond one-to-one to graph edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphEncoding {
    pub name: &'static str,
    pub kb: PartitionedKB,
    pub query: BooleanQuery,
    /// `edge_players[i]` is the player standing for edge `i` of the graph.
    pub edge_players: Vec<Player>,
}

impl GraphEncoding {
    pub fn game(&self, opts: &ReasonerOptions) -> Result<CooperativeGame, OracleError> {
        CooperativeGame::from_kb(&self.kb, &self.query, opts)
    }
}

/// Role used for edges in the ABox encodings.
pub const EDGE: &str = "edge";

fn concept_of(v: &str) -> Concept {
    Concept::name(&format!("A_{v}"))
}

fn role(v: &str, w: &str) -> Assertion {
    Assertion::role(EDGE, v, w)
}

/// Edges become endogenous `edge(v, w)` facts; the query is `reach(edge, s, t)`.
pub fn reachability_game(g: &DiGraph) -> GraphEncoding {
    let edge_players: Vec<Player> = g.edges().map(|(v, w)| Player::Assertion(role(v, w))).collect();
    GraphEncoding {
        name: "reachability",
        kb: PartitionedKB {
            abox_endo: g.edges().map(|(v, w)| role(v, w)).collect(),
            ..Default::default()
        },
        query: BooleanQuery::Reach {
            role: EDGE.into(),
            source: g.s.as_str().into(),
            target: g.t.as_str().into(),
        },
        edge_players,
    }
}

/// Edges become endogenous axioms `A_v ⊑ A_w`; the goal is the axiom `A_s ⊑ A_t`.
pub fn tbox_game_from_graph(g: &DiGraph) -> GraphEncoding {
    let axiom = |v: &str, w: &str| Axiom::sub(concept_of(v), concept_of(w));
    GraphEncoding {
        name: "tbox",
        kb: PartitionedKB {
            tbox_endo: g.edges().map(|(v, w)| axiom(v, w)).collect(),
            ..Default::default()
        },
        query: BooleanQuery::AxiomGoal(axiom(&g.s, &g.t)),
        edge_players: g.edges().map(|(v, w)| Player::Axiom(axiom(v, w))).collect(),
    }
}

/// As [`tbox_game_from_graph`] with `A_t` renamed `A`, the exogenous fact `A_s(c)` and
/// the query `A(c)`.
pub fn kb1_game_from_graph(g: &DiGraph) -> GraphEncoding {
    let name = |v: &str| if v == g.t { Concept::name("A") } else { concept_of(v) };
    let axiom = |v: &str, w: &str| Axiom::sub(name(v), name(w));
    let Concept::Name(src) = name(&g.s) else { unreachable!() };
    GraphEncoding {
        name: "kb1",
        kb: PartitionedKB {
            tbox_endo: g.edges().map(|(v, w)| axiom(v, w)).collect(),
            abox_exo: [Assertion::Concept {
                concept: src,
                individual: "c".into(),
            }]
            .into_iter()
            .collect(),
            ..Default::default()
        },
        query: BooleanQuery::cq([Atom::concept("A", Term::constant("c"))]),
        edge_players: g.edges().map(|(v, w)| Player::Axiom(axiom(v, w))).collect(),
    }
}

fn ind(v: &str) -> String {
    format!("c_{v}")
}

/// Edges become endogenous `r(c_v, c_w)`; exogenous `B(c_s)`, `D(c_t)` and the TBox
/// `B ⊓ D ⊑ A`, `∃r.D ⊑ D`; the query is `A(c_s)`.
pub fn kb2_game_from_graph(g: &DiGraph) -> GraphEncoding {
    let fact = |v: &str, w: &str| Assertion::role("r", &ind(v), &ind(w));
    GraphEncoding {
        name: "kb2",
        kb: PartitionedKB {
            abox_endo: g.edges().map(|(v, w)| fact(v, w)).collect(),
            abox_exo: [Assertion::concept("B", &ind(&g.s)), Assertion::concept("D", &ind(&g.t))]
                .into_iter()
                .collect(),
            tbox_exo: [
                Axiom::sub(Concept::and(Concept::name("B"), Concept::name("D")), Concept::name("A")),
                Axiom::sub(Concept::exists(Role::new("r"), Concept::name("D")), Concept::name("D")),
            ]
            .into_iter()
            .collect(),
            ..Default::default()
        },
        query: BooleanQuery::cq([Atom::concept("A", Term::constant(&ind(&g.s)))]),
        edge_players: g.edges().map(|(v, w)| Player::Assertion(fact(v, w))).collect(),
    }
}

/// The EL variant: exogenous `A(a_s)`, `B(a_t)`, TBox `∃r.B ⊑ B`, `A ⊓ B ⊑ C`, query
/// `C(a_s)`; `a_s` reaches `a_t` iff `B` propagates back to it.
pub fn el_game_from_graph(g: &DiGraph) -> GraphEncoding {
    let name = |v: &str| format!("a_{v}");
    let fact = |v: &str, w: &str| Assertion::role("r", &name(v), &name(w));
    GraphEncoding {
        name: "el",
        kb: PartitionedKB {
            abox_endo: g.edges().map(|(v, w)| fact(v, w)).collect(),
            abox_exo: [Assertion::concept("A", &name(&g.s)), Assertion::concept("B", &name(&g.t))]
                .into_iter()
                .collect(),
            tbox_exo: [
                Axiom::sub(Concept::exists(Role::new("r"), Concept::name("B")), Concept::name("B")),
                Axiom::sub(Concept::and(Concept::name("A"), Concept::name("B")), Concept::name("C")),
            ]
            .into_iter()
            .collect(),
            ..Default::default()
        },
        query: BooleanQuery::cq([Atom::concept("C", Term::constant(&name(&g.s)))]),
        edge_players: g.edges().map(|(v, w)| Player::Assertion(fact(v, w))).collect(),
    }
}

pub fn all_encodings(g: &DiGraph) -> Vec<GraphEncoding> {
    vec![
        reachability_game(g),
        tbox_game_from_graph(g),
        kb1_game_from_graph(g),
        kb2_game_from_graph(g),
        el_game_from_graph(g),
    ]
}

/// ABox of the reachability encoding restricted to the edges in `mask`.
pub fn edge_abox(g: &DiGraph, mask: u64) -> ABox {
    g.edges()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, (v, w))| role(v, w))
        .collect()
}

/// Per-edge exact values of one encoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeValues {
    pub encoding: &'static str,
    pub values: Vec<Rational>,
}

/// Exact per-edge Shapley vectors of all five encodings, in edge order.
pub fn edge_values(g: &DiGraph, opts: &ReasonerOptions) -> Result<Vec<EdgeValues>, LabError> {
    all_encodings(g)
        .into_iter()
        .map(|enc| {
            let game = enc.game(opts)?;
            let res = shapley_subset_all::<Rational>(&game)?;
            let values = enc
                .edge_players
                .iter()
                .map(|p| res.value_of(p).cloned().expect("every edge is a player"))
                .collect();
            Ok(EdgeValues { encoding: enc.name, values })
        })
        .collect()
}

/// Whether every encoding assigns each edge the same value.
pub fn games_isomorphic(values: &[EdgeValues]) -> bool {
    values.windows(2).all(|w| w[0].values == w[1].values)
}
