//! Random instance generators shared by the integration tests.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use shapql::kb::{ABox, Assertion, Atom, Axiom, BooleanQuery, Concept, Cq, Dialect, Individual, PartitionedKB, Role, Term};
use shapql::lab::graph::{BipartiteGraph, DiGraph};
use shapql::lab::interface::PathFixture;
use shapql::Rational;

pub const CONCEPTS: [&str; 4] = ["A", "B", "C", "D"];
pub const ROLES: [&str; 2] = ["r", "s"];
pub const INDIVIDUALS: [&str; 4] = ["a", "b", "c", "d"];

pub fn r(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn pick<'a>(rng: &mut ChaCha8Rng, xs: &[&'a str]) -> &'a str {
    xs.choose(rng).unwrap()
}

fn concept(rng: &mut ChaCha8Rng) -> Concept {
    Concept::name(pick(rng, &CONCEPTS))
}

fn role(rng: &mut ChaCha8Rng) -> Role {
    let r = Role::new(pick(rng, &ROLES));
    if rng.gen_bool(0.3) {
        r.inv()
    } else {
        r
    }
}

pub fn assertion(rng: &mut ChaCha8Rng) -> Assertion {
    if rng.gen_bool(0.5) {
        Assertion::concept(pick(rng, &CONCEPTS), pick(rng, &INDIVIDUALS))
    } else {
        Assertion::role(pick(rng, &ROLES), pick(rng, &INDIVIDUALS), pick(rng, &INDIVIDUALS))
    }
}

pub fn distinct_assertions(rng: &mut ChaCha8Rng, n: usize) -> ABox {
    let mut abox = ABox::new();
    while abox.len() < n {
        abox.insert(assertion(rng));
    }
    abox
}

/// A small ELHI⊥ axiom.
pub fn elhi_axiom(rng: &mut ChaCha8Rng) -> Axiom {
    match rng.gen_range(0..7) {
        0 => Axiom::sub(concept(rng), concept(rng)),
        1 => Axiom::sub(Concept::and(concept(rng), concept(rng)), concept(rng)),
        2 => Axiom::sub(Concept::exists(role(rng), concept(rng)), concept(rng)),
        3 => Axiom::sub(Concept::exists(role(rng), Concept::Top), concept(rng)),
        4 => Axiom::sub(concept(rng), Concept::exists(role(rng), concept(rng))),
        5 => Axiom::role_sub(role(rng), role(rng)),
        _ => Axiom::sub(Concept::and(concept(rng), concept(rng)), Concept::Bot),
    }
}

/// A small DL-Lite axiom: basic concepts on the left, basic or negated basic on the right.
pub fn dllite_axiom(rng: &mut ChaCha8Rng) -> Axiom {
    let basic = |rng: &mut ChaCha8Rng| {
        if rng.gen_bool(0.5) {
            concept(rng)
        } else {
            Concept::exists(role(rng), Concept::Top)
        }
    };
    match rng.gen_range(0..5) {
        0 | 1 => Axiom::sub(basic(rng), concept(rng)),
        2 => Axiom::sub(basic(rng), basic(rng)),
        3 => Axiom::role_sub(role(rng), role(rng)),
        _ => Axiom::sub(basic(rng), Concept::not(basic(rng))),
    }
}

/// A connected CQ of 1..=`max_atoms` atoms, grown from one term; sometimes rooted at a
/// constant.
pub fn connected_cq(rng: &mut ChaCha8Rng, max_atoms: usize) -> Cq {
    let root = if rng.gen_bool(0.3) {
        Term::constant(pick(rng, &INDIVIDUALS))
    } else {
        Term::var("x0")
    };
    let mut terms = vec![root];
    let mut atoms = Vec::new();
    for _ in 0..rng.gen_range(1..=max_atoms) {
        let t = terms.choose(rng).unwrap().clone();
        if rng.gen_bool(0.4) {
            atoms.push(Atom::concept(pick(rng, &CONCEPTS), t));
        } else {
            let fresh = Term::var(&format!("x{}", terms.len()));
            let (s, o) = if rng.gen_bool(0.5) { (t, fresh.clone()) } else { (fresh.clone(), t) };
            atoms.push(Atom::role(Role::new(pick(rng, &ROLES)), s, o));
            terms.push(fresh);
        }
    }
    Cq::new(atoms)
}

/// Random ELHI⊥ KB with every assertion endogenous.
pub fn elhi_instance(rng: &mut ChaCha8Rng, max_facts: usize, max_axioms: usize) -> (PartitionedKB, BooleanQuery) {
    let n = rng.gen_range(1..=max_facts);
    let pk = PartitionedKB {
        dialect: Dialect::ElhiBot,
        abox_endo: distinct_assertions(rng, n),
        tbox_exo: (0..rng.gen_range(0..=max_axioms)).map(|_| elhi_axiom(rng)).collect(),
        ..Default::default()
    };
    (pk, BooleanQuery::Ucq(vec![connected_cq(rng, 3)]))
}

/// Random DL-Lite KB with up to `max_endo` endogenous facts, a few exogenous ones, and
/// the goal `A(a)`.
pub fn dllite_instance(rng: &mut ChaCha8Rng, max_endo: usize) -> (PartitionedKB, Assertion) {
    let n = rng.gen_range(1..=max_endo);
    let endo = distinct_assertions(rng, n);
    let exo: ABox = (0..rng.gen_range(0..=2))
        .map(|_| assertion(rng))
        .filter(|a| !endo.contains(a))
        .collect();
    let pk = PartitionedKB {
        dialect: Dialect::DlLite,
        abox_endo: endo,
        abox_exo: exo,
        tbox_exo: (0..rng.gen_range(0..=4)).map(|_| dllite_axiom(rng)).collect(),
        ..Default::default()
    };
    (pk, Assertion::concept("A", "a"))
}

/// Random digraph on `s`, `t` and up to three inner vertices, with at most `max_edges`
/// edges and no self-loops.
pub fn digraph(rng: &mut ChaCha8Rng, max_edges: usize) -> DiGraph {
    let inner = rng.gen_range(0..=3);
    let names: Vec<String> = ["s", "t"].iter().map(|s| s.to_string()).chain((1..=inner).map(|i| format!("v{i}"))).collect();
    let mut pairs: Vec<(&str, &str)> = Vec::new();
    for v in &names {
        for w in &names {
            if v != w {
                pairs.push((v, w));
            }
        }
    }
    pairs.shuffle(rng);
    let m = rng.gen_range(0..=max_edges.min(pairs.len()));
    let mut g = DiGraph::with_edges("s", "t", pairs.into_iter().take(m));
    for v in &names {
        g.add_vertex(v);
    }
    g
}

pub fn bipartite(rng: &mut ChaCha8Rng, max_side: usize) -> BipartiteGraph {
    let (a, b) = (rng.gen_range(1..=max_side), rng.gen_range(1..=max_side));
    let edges: Vec<(usize, usize)> = (0..a)
        .flat_map(|x| (0..b).map(move |y| (x, y)))
        .filter(|_| rng.gen_bool(0.5))
        .collect();
    BipartiteGraph::numbered(a, b, edges)
}

/// A random tree ABox with one role name per edge (random orientation) and the odd
/// concept leaf, the tree-shaped CQ that matches exactly it, and a path of at least
/// `min_len` assertions between two of its individuals.
pub fn tree_fixture(rng: &mut ChaCha8Rng, min_len: usize) -> PathFixture {
    loop {
        let n = rng.gen_range(min_len + 1..=9);
        let parent: Vec<usize> = (1..n).map(|i| rng.gen_range(0..i)).collect();
        let name = |i: usize| format!("n{i}");
        let var = |i: usize| Term::var(&format!("y{i}"));
        let mut abox = ABox::new();
        let mut atoms = Vec::new();
        for i in 1..n {
            let p = parent[i - 1];
            let rn = format!("r{i}");
            let (s, o) = if rng.gen_bool(0.5) { (p, i) } else { (i, p) };
            abox.insert(Assertion::role(&rn, &name(s), &name(o)));
            atoms.push(Atom::role(Role::new(rn.as_str()), var(s), var(o)));
            if rng.gen_bool(0.3) {
                let cn = format!("C{i}");
                abox.insert(Assertion::concept(&cn, &name(i)));
                atoms.push(Atom::concept(&cn, var(i)));
            }
        }
        // Tree path between two random nodes, through their lowest common ancestor.
        let up = |mut v: usize| {
            let mut chain = vec![v];
            while v > 0 {
                v = parent[v - 1];
                chain.push(v);
            }
            chain
        };
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let (cu, cv) = (up(u), up(v));
        let Some(lca) = cu.iter().copied().find(|x| cv.contains(x)) else { continue };
        let mut path: Vec<usize> = cu.iter().copied().take_while(|&x| x != lca).collect();
        path.push(lca);
        path.extend(cv.iter().copied().take_while(|&x| x != lca).collect::<Vec<_>>().into_iter().rev());
        if path.len() < min_len + 1 {
            continue;
        }
        let path: Vec<Individual> = path.into_iter().map(|i| Individual::new(name(i))).collect();
        return PathFixture::new(abox, Vec::new(), BooleanQuery::Ucq(vec![Cq::new(atoms)]), path)
            .expect("tree paths are unique");
    }
}
