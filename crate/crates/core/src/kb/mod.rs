//! Knowledge-base syntax: concepts, roles, axioms, assertions and partitioned KBs.

mod hom;
mod names;
mod query;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub use hom::{apply_homomorphism, find_c_homomorphism, Mapping};
pub use names::{ConceptName, Individual, RoleName};
pub use query::{Atom, BooleanQuery, Cq, Term};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KbError {
    #[error("{dialect} does not allow axiom `{axiom}`: {reason}")]
    Dialect {
        dialect: Dialect,
        axiom: String,
        reason: &'static str,
    },
    #[error("assertion `{0}` is both endogenous and exogenous")]
    Overlap(String),
    #[error("axiom `{0}` is both endogenous and exogenous")]
    AxiomOverlap(String),
    #[error("no mapping for individual `{0}`")]
    MissingMapping(Individual),
}

/// A role name, possibly inverted. Double inversion collapses.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Role {
    pub name: RoleName,
    pub inverted: bool,
}

impl Role {
    pub fn new(name: impl Into<RoleName>) -> Self {
        Self {
            name: name.into(),
            inverted: false,
        }
    }

    pub fn inv(&self) -> Self {
        Self {
            name: self.name.clone(),
            inverted: !self.inverted,
        }
    }
}

impl From<&str> for Role {
    fn from(s: &str) -> Self {
        Role::new(s)
    }
}

impl fmt::Debug for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverted {
            write!(f, "inv({})", self.name)
        } else {
            write!(f, "{}", self.name)
        }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Concept {
    Top,
    Bot,
    Name(ConceptName),
    And(Box<Concept>, Box<Concept>),
    Exists(Role, Box<Concept>),
    Not(Box<Concept>),
}

impl Concept {
    pub fn name(s: &str) -> Self {
        Concept::Name(ConceptName::new(s))
    }

    pub fn and(a: Concept, b: Concept) -> Self {
        Concept::And(Box::new(a), Box::new(b))
    }

    pub fn exists(r: impl Into<Role>, c: Concept) -> Self {
        Concept::Exists(r.into(), Box::new(c))
    }

    pub fn not(c: Concept) -> Self {
        Concept::Not(Box::new(c))
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Concept::Top | Concept::Name(_))
    }

    fn contains(&self, pred: &impl Fn(&Concept) -> bool) -> bool {
        if pred(self) {
            return true;
        }
        match self {
            Concept::And(a, b) => a.contains(pred) || b.contains(pred),
            Concept::Exists(_, c) | Concept::Not(c) => c.contains(pred),
            _ => false,
        }
    }

    pub fn concept_names(&self, out: &mut BTreeSet<ConceptName>) {
        match self {
            Concept::Name(n) => {
                out.insert(n.clone());
            }
            Concept::And(a, b) => {
                a.concept_names(out);
                b.concept_names(out);
            }
            Concept::Exists(_, c) | Concept::Not(c) => c.concept_names(out),
            Concept::Top | Concept::Bot => {}
        }
    }

    pub fn role_names(&self, out: &mut BTreeSet<RoleName>) {
        match self {
            Concept::And(a, b) => {
                a.role_names(out);
                b.role_names(out);
            }
            Concept::Exists(r, c) => {
                out.insert(r.name.clone());
                c.role_names(out);
            }
            Concept::Not(c) => c.role_names(out),
            _ => {}
        }
    }

    /// Basic DL-Lite concept: `A` or `exists R.top`.
    fn is_basic(&self) -> bool {
        match self {
            Concept::Name(_) => true,
            Concept::Exists(_, c) => **c == Concept::Top,
            _ => false,
        }
    }

    pub fn map_names(&self, f: &impl Fn(&Concept) -> Option<Concept>) -> Concept {
        if let Some(c) = f(self) {
            return c;
        }
        match self {
            Concept::And(a, b) => Concept::and(a.map_names(f), b.map_names(f)),
            Concept::Exists(r, c) => Concept::Exists(r.clone(), Box::new(c.map_names(f))),
            Concept::Not(c) => Concept::not(c.map_names(f)),
            other => other.clone(),
        }
    }
}

impl fmt::Debug for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // `and` binds loosest and associates left; anything else nested gets parentheses.
        fn operand(c: &Concept, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match c {
                Concept::And(..) => write!(f, "({c})"),
                _ => write!(f, "{c}"),
            }
        }
        match self {
            Concept::Top => f.write_str("top"),
            Concept::Bot => f.write_str("bot"),
            Concept::Name(n) => write!(f, "{n}"),
            Concept::And(a, b) => {
                write!(f, "{a} and ")?;
                operand(b, f)
            }
            Concept::Exists(r, c) => {
                write!(f, "exists {r}.")?;
                operand(c, f)
            }
            Concept::Not(c) => {
                f.write_str("not ")?;
                operand(c, f)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum Dialect {
    #[default]
    ElhiBot,
    DlLite,
}

impl fmt::Display for Dialect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dialect::ElhiBot => "elhi-bot",
            Dialect::DlLite => "dl-lite",
        })
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    ConceptIncl {
        lhs: Concept,
        rhs: Concept,
    },
    RoleIncl {
        lhs: Role,
        rhs: Role,
        negated: bool,
    },
}

impl Axiom {
    pub fn sub(lhs: Concept, rhs: Concept) -> Self {
        Axiom::ConceptIncl { lhs, rhs }
    }

    pub fn role_sub(lhs: impl Into<Role>, rhs: impl Into<Role>) -> Self {
        Axiom::RoleIncl {
            lhs: lhs.into(),
            rhs: rhs.into(),
            negated: false,
        }
    }

    pub fn check(&self, dialect: Dialect) -> Result<(), KbError> {
        let fail = |reason| {
            Err(KbError::Dialect {
                dialect,
                axiom: self.to_string(),
                reason,
            })
        };
        let is_not = |c: &Concept| matches!(c, Concept::Not(_));
        let is_bot = |c: &Concept| matches!(c, Concept::Bot);
        match (self, dialect) {
            (Axiom::ConceptIncl { lhs, rhs }, Dialect::ElhiBot) => {
                if lhs.contains(&is_not) || rhs.contains(&is_not) {
                    return fail("negation is DL-Lite only");
                }
                if lhs.contains(&is_bot) {
                    return fail("bot may only occur on the right-hand side");
                }
                Ok(())
            }
            (Axiom::ConceptIncl { lhs, rhs }, Dialect::DlLite) => {
                if !lhs.is_basic() {
                    return fail("left-hand side must be A or exists R.top");
                }
                let rhs_ok = match rhs {
                    Concept::Bot => true,
                    Concept::Not(b) => b.is_basic(),
                    b => b.is_basic(),
                };
                if !rhs_ok {
                    return fail("right-hand side must be B, not B or bot");
                }
                Ok(())
            }
            (Axiom::RoleIncl { negated: true, .. }, Dialect::ElhiBot) => {
                fail("negated role inclusions are DL-Lite only")
            }
            (Axiom::RoleIncl { .. }, _) => Ok(()),
        }
    }

    pub fn concept_names(&self, out: &mut BTreeSet<ConceptName>) {
        if let Axiom::ConceptIncl { lhs, rhs } = self {
            lhs.concept_names(out);
            rhs.concept_names(out);
        }
    }

    pub fn role_names(&self, out: &mut BTreeSet<RoleName>) {
        match self {
            Axiom::ConceptIncl { lhs, rhs } => {
                lhs.role_names(out);
                rhs.role_names(out);
            }
            Axiom::RoleIncl { lhs, rhs, .. } => {
                out.insert(lhs.name.clone());
                out.insert(rhs.name.clone());
            }
        }
    }
}

impl fmt::Debug for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axiom::ConceptIncl { lhs, rhs } => write!(f, "{lhs} sub {rhs}"),
            Axiom::RoleIncl { lhs, rhs, negated } => {
                // An uppercase role on the left would read as a concept name.
                let starts_upper = lhs.name.as_str().starts_with(|c: char| c.is_ascii_uppercase());
                if starts_upper && !lhs.inverted {
                    f.write_str("role ")?;
                }
                write!(f, "{lhs} sub {}{rhs}", if *negated { "not " } else { "" })
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Assertion {
    Concept {
        concept: ConceptName,
        individual: Individual,
    },
    Role {
        role: Role,
        subject: Individual,
        object: Individual,
    },
}

impl Assertion {
    pub fn concept(concept: &str, individual: &str) -> Self {
        Assertion::Concept {
            concept: concept.into(),
            individual: individual.into(),
        }
    }

    /// Forward role assertion `r(a,b)`.
    pub fn role(role: &str, subject: &str, object: &str) -> Self {
        Assertion::Role {
            role: Role::new(role),
            subject: subject.into(),
            object: object.into(),
        }
    }

    /// The concept name of a concept assertion.
    pub fn concept_name(&self) -> Option<&ConceptName> {
        match self {
            Assertion::Concept { concept, .. } => Some(concept),
            Assertion::Role { .. } => None,
        }
    }

    pub fn individuals(&self) -> impl Iterator<Item = &Individual> {
        let (a, b) = match self {
            Assertion::Concept { individual, .. } => (individual, None),
            Assertion::Role {
                subject, object, ..
            } => (subject, Some(object)),
        };
        std::iter::once(a).chain(b)
    }
}

impl fmt::Debug for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Assertion::Concept {
                concept,
                individual,
            } => write!(f, "{concept}({individual})"),
            Assertion::Role {
                role,
                subject,
                object,
            } => write!(f, "{role}({subject},{object})"),
        }
    }
}

/// Rewrites `inv(r)(a,b)` to `r(b,a)`.
pub fn normalize_assertion(a: Assertion) -> Assertion {
    match a {
        Assertion::Role {
            role,
            subject,
            object,
        } if role.inverted => Assertion::Role {
            role: Role::new(role.name),
            subject: object,
            object: subject,
        },
        other => other,
    }
}

/// A finite set of normalized assertions.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ABox {
    assertions: BTreeSet<Assertion>,
}

impl ABox {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, a: Assertion) -> bool {
        self.assertions.insert(normalize_assertion(a))
    }

    pub fn remove(&mut self, a: &Assertion) -> bool {
        self.assertions.remove(&normalize_assertion(a.clone()))
    }

    pub fn contains(&self, a: &Assertion) -> bool {
        self.assertions.contains(&normalize_assertion(a.clone()))
    }

    pub fn len(&self) -> usize {
        self.assertions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assertions.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Assertion> {
        self.assertions.iter()
    }

    pub fn individuals(&self) -> BTreeSet<Individual> {
        self.iter().flat_map(|a| a.individuals().cloned()).collect()
    }

    pub fn union(&self, other: &ABox) -> ABox {
        self.iter().chain(other.iter()).cloned().collect()
    }

    /// Splits the assertions into maximal sets connected through shared individuals,
    /// ordered by each component's smallest individual.
    pub fn connected_components(&self) -> Vec<ABox> {
        let inds: Vec<Individual> = self.individuals().into_iter().collect();
        let index: BTreeMap<&Individual, usize> =
            inds.iter().enumerate().map(|(i, a)| (a, i)).collect();
        let mut parent: Vec<usize> = (0..inds.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for a in self.iter() {
            let mut it = a.individuals();
            let first = index[it.next().unwrap()];
            for other in it {
                let (ra, rb) = (find(&mut parent, first), find(&mut parent, index[other]));
                // Keep the smaller index as root so roots are the smallest individuals.
                let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
                parent[hi] = lo;
            }
        }
        let mut comps: BTreeMap<usize, ABox> = BTreeMap::new();
        for a in self.iter() {
            let root = find(&mut parent, index[a.individuals().next().unwrap()]);
            comps.entry(root).or_default().insert(a.clone());
        }
        comps.into_values().collect()
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }
}

impl fmt::Debug for ABox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<Assertion> for ABox {
    fn from_iter<I: IntoIterator<Item = Assertion>>(iter: I) -> Self {
        let mut abox = ABox::new();
        for a in iter {
            abox.insert(a);
        }
        abox
    }
}

impl Extend<Assertion> for ABox {
    fn extend<I: IntoIterator<Item = Assertion>>(&mut self, iter: I) {
        for a in iter {
            self.insert(a);
        }
    }
}

impl<'a> IntoIterator for &'a ABox {
    type Item = &'a Assertion;
    type IntoIter = std::collections::btree_set::Iter<'a, Assertion>;
    fn into_iter(self) -> Self::IntoIter {
        self.assertions.iter()
    }
}

/// A KB whose ABox and TBox are each split into endogenous (players) and exogenous parts.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PartitionedKB {
    pub dialect: Dialect,
    pub abox_endo: ABox,
    pub abox_exo: ABox,
    pub tbox_endo: BTreeSet<Axiom>,
    pub tbox_exo: BTreeSet<Axiom>,
}

impl PartitionedKB {
    pub fn new(
        dialect: Dialect,
        abox_endo: ABox,
        abox_exo: ABox,
        tbox_endo: BTreeSet<Axiom>,
        tbox_exo: BTreeSet<Axiom>,
    ) -> Result<Self, KbError> {
        let kb = Self {
            dialect,
            abox_endo,
            abox_exo,
            tbox_endo,
            tbox_exo,
        };
        kb.validate()?;
        Ok(kb)
    }

    pub fn validate(&self) -> Result<(), KbError> {
        if let Some(a) = self.abox_endo.iter().find(|a| self.abox_exo.contains(a)) {
            return Err(KbError::Overlap(a.to_string()));
        }
        if let Some(ax) = self.tbox_endo.intersection(&self.tbox_exo).next() {
            return Err(KbError::AxiomOverlap(ax.to_string()));
        }
        for ax in self.tbox_endo.iter().chain(&self.tbox_exo) {
            ax.check(self.dialect)?;
        }
        Ok(())
    }

    pub fn abox(&self) -> ABox {
        self.abox_endo.union(&self.abox_exo)
    }

    pub fn tbox(&self) -> Vec<Axiom> {
        self.tbox_endo.iter().chain(&self.tbox_exo).cloned().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_inverse_assertions() {
        let fwd = Assertion::role("r", "a", "b");
        assert_eq!(normalize_assertion(fwd.clone()), fwd);
        let inv = Assertion::Role {
            role: Role::new("r").inv(),
            subject: "a".into(),
            object: "b".into(),
        };
        assert_eq!(normalize_assertion(inv), Assertion::role("r", "b", "a"));
        let twice = Assertion::Role {
            role: Role::new("r").inv().inv(),
            subject: "a".into(),
            object: "b".into(),
        };
        assert_eq!(normalize_assertion(twice), fwd);
    }

    #[test]
    fn components() {
        let chain: ABox = [Assertion::role("r", "a", "b"), Assertion::role("r", "b", "c")]
            .into_iter()
            .collect();
        assert_eq!(chain.connected_components(), vec![chain.clone()]);
        let split: ABox = [Assertion::concept("B", "b"), Assertion::concept("A", "a")]
            .into_iter()
            .collect();
        let comps = split.connected_components();
        assert_eq!(comps.len(), 2);
        assert!(comps[0].contains(&Assertion::concept("A", "a")));
        assert!(ABox::new().connected_components().is_empty());
    }

    #[test]
    fn dialect_checks() {
        let neg = Axiom::sub(Concept::name("A"), Concept::not(Concept::name("B")));
        assert!(neg.check(Dialect::DlLite).is_ok());
        assert!(neg.check(Dialect::ElhiBot).is_err());
        let bot_lhs = Axiom::sub(Concept::Bot, Concept::name("B"));
        assert!(bot_lhs.check(Dialect::ElhiBot).is_err());
        let qualified = Axiom::sub(Concept::exists("r", Concept::name("A")), Concept::name("B"));
        assert!(qualified.check(Dialect::ElhiBot).is_ok());
        assert!(qualified.check(Dialect::DlLite).is_err());
        let role_neg = Axiom::RoleIncl {
            lhs: Role::new("r"),
            rhs: Role::new("s"),
            negated: true,
        };
        assert!(role_neg.check(Dialect::ElhiBot).is_err());
        assert!(role_neg.check(Dialect::DlLite).is_ok());
    }

    #[test]
    fn overlapping_partition_rejected() {
        let a: ABox = [Assertion::concept("A", "a")].into_iter().collect();
        let err = PartitionedKB::new(Dialect::ElhiBot, a.clone(), a, Default::default(), Default::default());
        assert!(matches!(err, Err(KbError::Overlap(_))));
    }

    #[test]
    fn display_parenthesizes() {
        let c = Concept::exists(
            Role::new("r").inv(),
            Concept::and(Concept::name("A"), Concept::and(Concept::name("B"), Concept::Top)),
        );
        assert_eq!(c.to_string(), "exists inv(r).(A and (B and top))");
    }
}
