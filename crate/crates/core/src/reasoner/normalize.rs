use std::collections::BTreeMap;
use std::fmt;

use crate::kb::{Axiom, Concept, ConceptName, Role};

/// `⊤` or a concept name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Basic {
    Top,
    Name(ConceptName),
}

impl fmt::Debug for Basic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basic::Top => f.write_str("top"),
            Basic::Name(n) => write!(f, "{n}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NormalRule {
    /// `A ⊓ B ⊑ C`
    Conj(Basic, Basic, Basic),
    /// `A ⊑ B`
    Sub(Basic, Basic),
    /// `∃R.A ⊑ B`
    ExistsLhs(Role, Basic, Basic),
    /// `A ⊑ ∃R.B`
    ExistsRhs(Basic, Role, Basic),
    /// `A ⊑ ⊥`
    Bot(Basic),
    /// `R ⊑ S`
    RoleSub(Role, Role),
    /// `R ⊑ ¬S`
    RoleDisjoint(Role, Role),
}

/// Rules in normal form. `sources[i]` is the index of the input axiom rule `i` came from;
/// fresh names are prefixed by that index so per-axiom rule sets can be toggled independently.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NormalizedTBox {
    pub rules: Vec<NormalRule>,
    pub sources: Vec<usize>,
    pub fresh: BTreeMap<ConceptName, Concept>,
}

impl NormalizedTBox {
    pub fn is_fresh(name: &ConceptName) -> bool {
        name.as_str().starts_with('_')
    }

    pub fn has_bottom(&self) -> bool {
        self.rules
            .iter()
            .any(|r| matches!(r, NormalRule::Bot(_) | NormalRule::RoleDisjoint(..)))
    }

    /// Existential fillers are all `⊤` and conjunctions only feed `⊥`: null types are then
    /// fixed by their incoming role.
    pub fn is_dllite_shaped(&self) -> bool {
        let bot_feeders: Vec<&Basic> = self
            .rules
            .iter()
            .filter_map(|r| match r {
                NormalRule::Bot(a) => Some(a),
                _ => None,
            })
            .collect();
        self.rules.iter().all(|r| match r {
            NormalRule::ExistsRhs(_, _, b) => *b == Basic::Top,
            NormalRule::ExistsLhs(_, a, _) => *a == Basic::Top,
            NormalRule::Conj(_, _, c) => bot_feeders.contains(&c),
            _ => true,
        })
    }
}

struct Normalizer<'a> {
    out: &'a mut NormalizedTBox,
    source: usize,
    counter: usize,
}

impl Normalizer<'_> {
    fn fresh(&mut self, stands_for: &Concept) -> Basic {
        let name = ConceptName::new(format!("_{}_{}", self.source, self.counter));
        self.counter += 1;
        self.out.fresh.insert(name.clone(), stands_for.clone());
        Basic::Name(name)
    }

    fn push(&mut self, r: NormalRule) {
        self.out.rules.push(r);
        self.out.sources.push(self.source);
    }

    fn atomic(c: &Concept) -> Option<Basic> {
        match c {
            Concept::Top => Some(Basic::Top),
            Concept::Name(n) => Some(Basic::Name(n.clone())),
            _ => None,
        }
    }

    /// A basic concept implied by `c` (so `c ⊑ result`).
    fn lhs_name(&mut self, c: &Concept) -> Basic {
        if let Some(b) = Self::atomic(c) {
            return b;
        }
        let x = self.fresh(c);
        self.lhs_into(c, x.clone());
        x
    }

    /// Emits rules for `c ⊑ target`.
    fn lhs_into(&mut self, c: &Concept, target: Basic) {
        match c {
            Concept::Top | Concept::Name(_) => {
                let a = Self::atomic(c).unwrap();
                if a != target && target != Basic::Top {
                    self.push(NormalRule::Sub(a, target));
                }
            }
            Concept::And(l, r) => {
                let a = self.lhs_name(l);
                let b = self.lhs_name(r);
                self.push(NormalRule::Conj(a, b, target));
            }
            Concept::Exists(role, filler) => {
                let a = self.lhs_name(filler);
                self.push(NormalRule::ExistsLhs(role.clone(), a, target));
            }
            // Rejected by the dialect check; nothing sound to emit.
            Concept::Bot | Concept::Not(_) => {}
        }
    }

    /// Emits rules for `x ⊑ d`.
    fn rhs(&mut self, x: Basic, d: &Concept) {
        match d {
            Concept::Top => {}
            Concept::Bot => self.push(NormalRule::Bot(x)),
            Concept::Name(n) => {
                if x != Basic::Name(n.clone()) {
                    self.push(NormalRule::Sub(x, Basic::Name(n.clone())));
                }
            }
            Concept::And(l, r) => {
                self.rhs(x.clone(), l);
                self.rhs(x, r);
            }
            Concept::Exists(role, filler) => match Self::atomic(filler) {
                Some(b) => self.push(NormalRule::ExistsRhs(x, role.clone(), b)),
                None => {
                    let y = self.fresh(filler);
                    self.push(NormalRule::ExistsRhs(x, role.clone(), y.clone()));
                    self.rhs(y, filler);
                }
            },
            Concept::Not(b) => {
                let b = self.lhs_name(b);
                let z = self.fresh(&Concept::Bot);
                self.push(NormalRule::Conj(x, b, z.clone()));
                self.push(NormalRule::Bot(z));
            }
        }
    }
}

/// Structural transformation into the normal forms of [`NormalRule`].
pub fn normalize_tbox(tbox: &[Axiom]) -> NormalizedTBox {
    let mut out = NormalizedTBox::default();
    for (source, ax) in tbox.iter().enumerate() {
        let mut n = Normalizer {
            out: &mut out,
            source,
            counter: 0,
        };
        match ax {
            Axiom::RoleIncl { lhs, rhs, negated } => {
                n.push(if *negated {
                    NormalRule::RoleDisjoint(lhs.clone(), rhs.clone())
                } else {
                    NormalRule::RoleSub(lhs.clone(), rhs.clone())
                });
            }
            Axiom::ConceptIncl { lhs, rhs } => match rhs {
                Concept::Name(b) if !lhs.is_atomic() => n.lhs_into(lhs, Basic::Name(b.clone())),
                _ => {
                    let x = n.lhs_name(lhs);
                    n.rhs(x, rhs);
                }
            },
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn name(s: &str) -> Basic {
        Basic::Name(s.into())
    }

    #[test]
    fn conjunction_kept_flat() {
        let t = normalize_tbox(&[Axiom::sub(
            Concept::and(Concept::name("FishBased"), Concept::name("MeatBased")),
            Concept::name("LandSea"),
        )]);
        assert_eq!(
            t.rules,
            vec![NormalRule::Conj(name("FishBased"), name("MeatBased"), name("LandSea"))]
        );
        assert!(t.fresh.is_empty());
    }

    #[test]
    fn existential_rhs_flattened() {
        let t = normalize_tbox(&[Axiom::sub(
            Concept::name("A"),
            Concept::exists("r", Concept::and(Concept::name("B"), Concept::name("C"))),
        )]);
        assert_eq!(t.fresh.len(), 1);
        let x = Basic::Name(t.fresh.keys().next().unwrap().clone());
        assert_eq!(
            t.rules,
            vec![
                NormalRule::ExistsRhs(name("A"), Role::new("r"), x.clone()),
                NormalRule::Sub(x.clone(), name("B")),
                NormalRule::Sub(x, name("C")),
            ]
        );
    }

    #[test]
    fn empty_and_negation() {
        assert!(normalize_tbox(&[]).rules.is_empty());
        let t = normalize_tbox(&[Axiom::sub(Concept::name("A"), Concept::not(Concept::name("B")))]);
        assert!(t.has_bottom());
        assert!(t.is_dllite_shaped());
        assert_eq!(t.sources, vec![0, 0]);
    }

    #[test]
    fn fresh_names_are_per_axiom() {
        let ax = Axiom::sub(
            Concept::exists("r", Concept::and(Concept::name("A"), Concept::name("B"))),
            Concept::name("C"),
        );
        let t = normalize_tbox(&[ax.clone(), ax]);
        assert_eq!(t.fresh.len(), 2);
        assert!(t.fresh.keys().all(NormalizedTBox::is_fresh));
        assert!(!t.is_dllite_shaped());
    }
}
