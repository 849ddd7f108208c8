//! Entailment oracle: TBox normalization, a depth-bounded restricted chase, CQ matching
//! over the resulting canonical structure, and a finite countermodel search.
//!
//! A verdict is `Unknown` only when the chase was truncated and the goal was not found in
//! the truncated structure. Callers must treat `Unknown` as an error, never as `No`.

mod countermodel;
pub(crate) mod engine;
mod matcher;
mod normalize;

use std::collections::BTreeSet;

use crate::kb::{ABox, Assertion, Axiom, BooleanQuery, ConceptName, Individual, Role, RoleName};

pub use countermodel::{find_countermodel, FiniteModel};
pub use normalize::{normalize_tbox, Basic, NormalRule, NormalizedTBox};

use engine::{static_input, Engine, EngineInput, TOP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Consistency {
    Consistent,
    Inconsistent,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReasonerOptions {
    /// Maximum null depth; `None` picks query atoms + concept names (raised to the
    /// completeness depth for DL-Lite-shaped TBoxes).
    pub depth_limit: Option<usize>,
    /// Hard cap on structure size; hitting it makes the structure incomplete.
    pub node_cap: usize,
}

impl Default for ReasonerOptions {
    fn default() -> Self {
        Self {
            depth_limit: None,
            node_cap: 100_000,
        }
    }
}

impl ReasonerOptions {
    pub fn with_depth(depth: usize) -> Self {
        Self {
            depth_limit: Some(depth),
            ..Self::default()
        }
    }
}

/// How an element of a canonical structure is named.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ElementId {
    Individual(Individual),
    /// Anonymous element introduced by the chase (or the root of an empty domain).
    Null(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    pub id: ElementId,
    pub depth: usize,
    pub parent: Option<usize>,
    pub labels: BTreeSet<ConceptName>,
}

/// Result of [`chase`]: named individuals of the ABox followed by generated nulls.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalStructure {
    pub elements: Vec<Element>,
    pub edges: BTreeSet<(RoleName, usize, usize)>,
    pub depth_limit: usize,
    pub saturated: bool,
    pub inconsistent: bool,
}

impl CanonicalStructure {
    pub fn element(&self, ind: &Individual) -> Option<&Element> {
        self.elements
            .iter()
            .find(|e| e.id == ElementId::Individual(ind.clone()))
    }

    pub fn labels(&self, ind: &str) -> BTreeSet<ConceptName> {
        self.element(&Individual::new(ind))
            .map(|e| e.labels.clone())
            .unwrap_or_default()
    }

    pub fn null_count(&self) -> usize {
        self.elements
            .iter()
            .filter(|e| matches!(e.id, ElementId::Null(_)))
            .count()
    }

    /// The structure as an ABox; nulls become `_n<k>`, normalization names are dropped.
    pub fn to_abox(&self) -> ABox {
        let name = |i: usize| match &self.elements[i].id {
            ElementId::Individual(ind) => ind.clone(),
            ElementId::Null(k) => Individual::new(format!("_n{k}")),
        };
        let mut out = ABox::new();
        for (i, e) in self.elements.iter().enumerate() {
            for c in &e.labels {
                if !NormalizedTBox::is_fresh(c) {
                    out.insert(Assertion::Concept {
                        concept: c.clone(),
                        individual: name(i),
                    });
                }
            }
        }
        for (r, x, y) in &self.edges {
            out.insert(Assertion::Role {
                role: Role::new(r.clone()),
                subject: name(*x),
                object: name(*y),
            });
        }
        out
    }
}

/// Chases `abox` with the normalized TBox, never expanding nulls at depth `depth_limit`.
pub fn chase(abox: &ABox, tbox: &NormalizedTBox, depth_limit: usize) -> CanonicalStructure {
    let owners = vec![None; tbox.sources.iter().max().map_or(0, |m| m + 1)];
    let input = EngineInput {
        facts: abox.iter().map(|a| (a, None)).collect(),
        axioms: Vec::new(),
        query: None,
        depth_limit: Some(depth_limit),
        node_cap: ReasonerOptions::default().node_cap,
    };
    let eng = Engine::from_normalized(tbox, &owners, input);
    let s = eng.run(0);
    let mut elements = Vec::new();
    let mut slot = vec![usize::MAX; s.len()];
    for e in 0..s.len() {
        if !s.present[e] {
            continue;
        }
        slot[e] = elements.len();
        let id = if e < s.n_named {
            ElementId::Individual(eng.sig.individuals[e].clone())
        } else {
            ElementId::Null(e - s.n_named)
        };
        elements.push(Element {
            id,
            depth: s.depth[e] as usize,
            parent: (s.parent[e] != u32::MAX).then(|| slot[s.parent[e] as usize]),
            labels: s
                .labels_of(e as u32)
                .filter(|&c| c != TOP)
                .map(|c| eng.concept_name(c).clone())
                .collect(),
        });
    }
    let edges = s
        .edge_list()
        .map(|&(x, r, y)| (eng.sig.roles[r as usize].clone(), slot[x as usize], slot[y as usize]))
        .collect();
    CanonicalStructure {
        elements,
        edges,
        depth_limit,
        saturated: s.saturated,
        inconsistent: s.inconsistent,
    }
}

pub fn is_consistent(abox: &ABox, tbox: &[Axiom], opts: &ReasonerOptions) -> Consistency {
    Engine::compile(static_input(abox, tbox, None, opts.depth_limit, opts.node_cap)).consistency(0)
}

/// Decides `(abox, tbox) ⊨ q`; an inconsistent KB entails every query.
pub fn entails(abox: &ABox, tbox: &[Axiom], q: &BooleanQuery, opts: &ReasonerOptions) -> Verdict {
    Engine::compile(static_input(abox, tbox, Some(q), opts.depth_limit, opts.node_cap)).entails(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kb::{Atom, Concept, Cq, Term};

    fn abox(items: &[Assertion]) -> ABox {
        items.iter().cloned().collect()
    }

    fn sub(a: &str, b: &str) -> Axiom {
        Axiom::sub(Concept::name(a), Concept::name(b))
    }

    #[test]
    fn propagation_only() {
        let s = chase(&abox(&[Assertion::concept("A", "a")]), &normalize_tbox(&[sub("A", "B")]), 0);
        assert_eq!(s.labels("a"), ["A", "B"].iter().map(|&n| ConceptName::new(n)).collect());
        assert!(s.saturated);
    }

    #[test]
    fn backward_reachability() {
        let t = normalize_tbox(&[
            Axiom::sub(Concept::exists("r", Concept::name("B")), Concept::name("B")),
            Axiom::sub(Concept::and(Concept::name("A"), Concept::name("B")), Concept::name("C")),
        ]);
        let a = abox(&[
            Assertion::concept("A", "a_s"),
            Assertion::concept("B", "a_t"),
            Assertion::role("r", "a_s", "a_t"),
        ]);
        let s = chase(&a, &t, 3);
        assert!(s.labels("a_s").is_superset(&["A", "B", "C"].iter().map(|&n| ConceptName::new(n)).collect()));
        assert!(s.saturated);
    }

    #[test]
    fn depth_cutoff() {
        let t = normalize_tbox(&[Axiom::sub(Concept::name("A"), Concept::exists("r", Concept::name("A")))]);
        let s = chase(&abox(&[Assertion::concept("A", "a")]), &t, 2);
        assert_eq!(s.null_count(), 2);
        assert!(!s.saturated);
    }

    #[test]
    fn restricted_chase_reuses_successors() {
        let t = normalize_tbox(&[Axiom::sub(Concept::name("A"), Concept::exists("r", Concept::name("B")))]);
        let a = abox(&[
            Assertion::concept("A", "a"),
            Assertion::role("r", "a", "b"),
            Assertion::concept("B", "b"),
        ]);
        assert_eq!(chase(&a, &t, 5).null_count(), 0);
    }

    #[test]
    fn consistency() {
        let opts = ReasonerOptions::default();
        let a = abox(&[Assertion::concept("A", "a")]);
        assert_eq!(
            is_consistent(&a, &[Axiom::sub(Concept::name("A"), Concept::Bot)], &opts),
            Consistency::Inconsistent
        );
        let cyclic = [Axiom::sub(Concept::name("A"), Concept::exists("r", Concept::name("A")))];
        assert_eq!(
            is_consistent(&a, &cyclic, &ReasonerOptions::with_depth(1)),
            Consistency::Consistent
        );
    }

    #[test]
    fn entailment_basics() {
        let opts = ReasonerOptions::default();
        let q = BooleanQuery::Reach {
            role: "r".into(),
            source: "a".into(),
            target: "b".into(),
        };
        assert_eq!(entails(&abox(&[Assertion::role("r", "a", "b")]), &[], &q, &opts), Verdict::Yes);
        let q = BooleanQuery::cq([Atom::role("r", Term::var("x"), Term::var("y"))]);
        let t = [Axiom::sub(Concept::name("A"), Concept::exists("r", Concept::name("B")))];
        assert_eq!(entails(&abox(&[Assertion::concept("A", "a")]), &t, &q, &opts), Verdict::Yes);
        assert_eq!(entails(&abox(&[Assertion::concept("B", "a")]), &t, &q, &opts), Verdict::No);
    }

    #[test]
    fn unknown_when_truncated() {
        let t = [Axiom::sub(Concept::name("A"), Concept::exists("r", Concept::name("A")))];
        let q = BooleanQuery::cq([Atom::concept("B", Term::var("x"))]);
        let v = entails(&abox(&[Assertion::concept("A", "a")]), &t, &q, &ReasonerOptions::with_depth(2));
        assert_eq!(v, Verdict::Unknown);
    }

    #[test]
    fn inverse_roles_and_role_inclusions() {
        let opts = ReasonerOptions::default();
        let t = [
            Axiom::role_sub("hasSauce", "hasIngr"),
            Axiom::sub(Concept::exists(Role::new("hasIngr").inv(), Concept::name("Dish")), Concept::name("Ingr")),
        ];
        let a = abox(&[Assertion::concept("Dish", "d"), Assertion::role("hasSauce", "d", "s")]);
        let q = BooleanQuery::cq([Atom::concept("Ingr", Term::constant("s"))]);
        assert_eq!(entails(&a, &t, &q, &opts), Verdict::Yes);
    }

    #[test]
    fn absent_constants_do_not_match() {
        let q = BooleanQuery::cq([Atom::concept("A", Term::constant("zz"))]);
        let t = [Axiom::sub(Concept::Top, Concept::name("A"))];
        let a = abox(&[Assertion::concept("B", "a")]);
        assert_eq!(entails(&a, &t, &q, &ReasonerOptions::default()), Verdict::No);
        let q = BooleanQuery::cq([Atom::concept("A", Term::var("x"))]);
        assert_eq!(entails(&ABox::new(), &t, &q, &ReasonerOptions::default()), Verdict::Yes);
    }

    #[test]
    fn axiom_goals() {
        let opts = ReasonerOptions::default();
        let t = [sub("A", "B"), sub("B", "C")];
        let goal = |ax| BooleanQuery::AxiomGoal(ax);
        assert_eq!(entails(&ABox::new(), &t, &goal(sub("A", "C")), &opts), Verdict::Yes);
        assert_eq!(entails(&ABox::new(), &t, &goal(sub("C", "A")), &opts), Verdict::No);
        let t = [Axiom::role_sub("r", Role::new("s").inv())];
        assert_eq!(
            entails(&ABox::new(), &t, &goal(Axiom::role_sub(Role::new("r").inv(), "s")), &opts),
            Verdict::Yes
        );
        let t = [Axiom::sub(Concept::name("A"), Concept::exists("r", Concept::name("B")))];
        let ax = Axiom::sub(
            Concept::and(Concept::name("A"), Concept::name("D")),
            Concept::exists("r", Concept::Top),
        );
        assert_eq!(entails(&ABox::new(), &t, &goal(ax), &opts), Verdict::Yes);
    }

    #[test]
    fn dllite_negation_and_role_clash() {
        let opts = ReasonerOptions::default();
        let t = [
            Axiom::sub(Concept::name("A"), Concept::not(Concept::name("B"))),
            Axiom::RoleIncl {
                lhs: Role::new("r"),
                rhs: Role::new("s"),
                negated: true,
            },
        ];
        let clash = abox(&[Assertion::concept("A", "a"), Assertion::concept("B", "a")]);
        assert_eq!(is_consistent(&clash, &t, &opts), Consistency::Inconsistent);
        let roles = abox(&[Assertion::role("r", "a", "b"), Assertion::role("s", "a", "b")]);
        assert_eq!(is_consistent(&roles, &t, &opts), Consistency::Inconsistent);
        let fine = abox(&[Assertion::role("r", "a", "b"), Assertion::role("s", "b", "a")]);
        assert_eq!(is_consistent(&fine, &t, &opts), Consistency::Consistent);
    }

    #[test]
    fn countermodels() {
        let a = abox(&[Assertion::concept("A", "a")]);
        let q = [Cq::new([Atom::concept("B", Term::constant("a"))])];
        let m = find_countermodel(&a, &[], &q, 1).unwrap();
        assert!(!m.facts.contains(&Assertion::concept("B", "a")));
        assert!(find_countermodel(&a, &[sub("A", "B")], &q, 2).is_none());
        let t = [Axiom::sub(Concept::name("A"), Concept::exists("r", Concept::name("A")))];
        let q = [Cq::new([Atom::concept("B", Term::var("x"))])];
        let m = find_countermodel(&a, &t, &q, 2).unwrap();
        assert!(m.facts.iter().any(|f| matches!(f, Assertion::Role { .. })));
    }
}
