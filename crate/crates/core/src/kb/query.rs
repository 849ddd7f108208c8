use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{Axiom, ConceptName, Individual, Role, RoleName};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    Const(Individual),
}

impl Term {
    pub fn var(v: &str) -> Self {
        Term::Var(v.to_string())
    }

    pub fn constant(c: &str) -> Self {
        Term::Const(c.into())
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "?{v}"),
            Term::Const(c) => write!(f, "{c}"),
        }
    }
}

/// Query atom; role atoms are stored forward.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Concept(ConceptName, Term),
    Role(RoleName, Term, Term),
}

impl Atom {
    pub fn concept(c: &str, t: Term) -> Self {
        Atom::Concept(c.into(), t)
    }

    pub fn role(r: impl Into<Role>, t1: Term, t2: Term) -> Self {
        let r = r.into();
        if r.inverted {
            Atom::Role(r.name, t2, t1)
        } else {
            Atom::Role(r.name, t1, t2)
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        let (a, b) = match self {
            Atom::Concept(_, t) => (t, None),
            Atom::Role(_, t1, t2) => (t1, Some(t2)),
        };
        std::iter::once(a).chain(b)
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Concept(c, t) => write!(f, "{c}({t})"),
            Atom::Role(r, t1, t2) => write!(f, "{r}({t1},{t2})"),
        }
    }
}

/// Boolean conjunctive query: all variables are existentially quantified.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cq {
    atoms: BTreeSet<Atom>,
}

impl Cq {
    pub fn new(atoms: impl IntoIterator<Item = Atom>) -> Self {
        Self {
            atoms: atoms.into_iter().collect(),
        }
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.atoms.iter()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn constants(&self) -> BTreeSet<Individual> {
        self.atoms
            .iter()
            .flat_map(|a| a.terms())
            .filter_map(|t| match t {
                Term::Const(c) => Some(c.clone()),
                Term::Var(_) => None,
            })
            .collect()
    }

    pub fn variables(&self) -> BTreeSet<String> {
        self.atoms
            .iter()
            .flat_map(|a| a.terms())
            .filter_map(|t| match t {
                Term::Var(v) => Some(v.clone()),
                Term::Const(_) => None,
            })
            .collect()
    }

    /// Maximal sub-queries connected through shared terms, ordered by their smallest atom.
    pub fn components(&self) -> Vec<Cq> {
        let atoms: Vec<&Atom> = self.atoms.iter().collect();
        let mut owner: BTreeMap<&Term, usize> = BTreeMap::new();
        let mut parent: Vec<usize> = (0..atoms.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (i, a) in atoms.iter().enumerate() {
            for t in a.terms() {
                match owner.get(t) {
                    Some(&j) => {
                        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                        parent[ri.max(rj)] = ri.min(rj);
                    }
                    None => {
                        owner.insert(t, i);
                    }
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<Atom>> = BTreeMap::new();
        for (i, a) in atoms.iter().enumerate() {
            groups.entry(find(&mut parent, i)).or_default().push((*a).clone());
        }
        groups.into_values().map(Cq::new).collect()
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub fn conjoin<'a>(parts: impl IntoIterator<Item = &'a Cq>) -> Cq {
        Cq::new(parts.into_iter().flat_map(|c| c.atoms.iter().cloned()))
    }

    pub fn concept_names(&self) -> BTreeSet<ConceptName> {
        self.atoms
            .iter()
            .filter_map(|a| match a {
                Atom::Concept(c, _) => Some(c.clone()),
                Atom::Role(..) => None,
            })
            .collect()
    }
}

impl fmt::Debug for Cq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Cq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("q :- ")?;
        for (i, a) in self.atoms.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(".")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BooleanQuery {
    /// Union of Boolean CQs.
    Ucq(Vec<Cq>),
    /// Directed reachability along one role between two named individuals.
    Reach {
        role: RoleName,
        source: Individual,
        target: Individual,
    },
    /// Entailment of a TBox axiom.
    AxiomGoal(Axiom),
}

impl BooleanQuery {
    pub fn cq(atoms: impl IntoIterator<Item = Atom>) -> Self {
        BooleanQuery::Ucq(vec![Cq::new(atoms)])
    }

    /// Number of atoms in the largest disjunct; 1 for the other query kinds.
    pub fn size(&self) -> usize {
        match self {
            BooleanQuery::Ucq(ds) => ds.iter().map(Cq::len).max().unwrap_or(0),
            _ => 1,
        }
    }
}

impl fmt::Display for BooleanQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BooleanQuery::Ucq(ds) => {
                for (i, d) in ds.iter().enumerate() {
                    if i > 0 {
                        f.write_str("\n")?;
                    }
                    write!(f, "{d}")?;
                }
                Ok(())
            }
            BooleanQuery::Reach {
                role,
                source,
                target,
            } => write!(f, "reach({role}, {source}, {target})."),
            BooleanQuery::AxiomGoal(ax) => write!(f, "axiom {ax}."),
        }
    }
}
