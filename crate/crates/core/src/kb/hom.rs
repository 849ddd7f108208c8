use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{ABox, Assertion, Individual, KbError, Role};

pub type Mapping = BTreeMap<Individual, Individual>;

/// Searches for `h` with `h(c) = c` on `fixed` and `h(source) ⊆ target`.
///
/// Individuals are assigned in sorted order; each candidate is checked against
/// every assertion whose individuals are all assigned.
pub fn find_c_homomorphism(
    source: &ABox,
    target: &ABox,
    fixed: &BTreeSet<Individual>,
) -> Option<Mapping> {
    let vars: Vec<Individual> = source.individuals().into_iter().collect();
    let pos: HashMap<&Individual, usize> = vars.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let candidates: Vec<Individual> = target.individuals().into_iter().collect();

    // Assertions become checkable once their last individual (in order) is bound.
    let mut checks: Vec<Vec<&Assertion>> = vec![Vec::new(); vars.len()];
    for a in source {
        let last = a.individuals().map(|i| pos[i]).max().unwrap();
        checks[last].push(a);
    }

    fn image(a: &Assertion, assign: &[Option<Individual>], pos: &HashMap<&Individual, usize>) -> Assertion {
        let h = |i: &Individual| assign[pos[i]].clone().unwrap();
        match a {
            Assertion::Concept {
                concept,
                individual,
            } => Assertion::Concept {
                concept: concept.clone(),
                individual: h(individual),
            },
            Assertion::Role {
                role,
                subject,
                object,
            } => Assertion::Role {
                role: Role::new(role.name.clone()),
                subject: h(subject),
                object: h(object),
            },
        }
    }

    fn go(
        k: usize,
        vars: &[Individual],
        fixed: &BTreeSet<Individual>,
        candidates: &[Individual],
        checks: &[Vec<&Assertion>],
        target: &ABox,
        assign: &mut Vec<Option<Individual>>,
        pos: &HashMap<&Individual, usize>,
    ) -> bool {
        if k == vars.len() {
            return true;
        }
        let options: Vec<Individual> = if fixed.contains(&vars[k]) {
            vec![vars[k].clone()]
        } else {
            candidates.to_vec()
        };
        for c in options {
            assign[k] = Some(c);
            if checks[k].iter().all(|a| target.contains(&image(a, assign, pos)))
                && go(k + 1, vars, fixed, candidates, checks, target, assign, pos)
            {
                return true;
            }
        }
        assign[k] = None;
        false
    }

    let mut assign = vec![None; vars.len()];
    if go(0, &vars, fixed, &candidates, &checks, target, &mut assign, &pos) {
        Some(vars.into_iter().zip(assign.into_iter().map(Option::unwrap)).collect())
    } else {
        None
    }
}

pub fn apply_homomorphism(abox: &ABox, h: &Mapping) -> Result<ABox, KbError> {
    let m = |i: &Individual| {
        h.get(i)
            .cloned()
            .ok_or_else(|| KbError::MissingMapping(i.clone()))
    };
    abox.iter()
        .map(|a| {
            Ok(match a {
                Assertion::Concept {
                    concept,
                    individual,
                } => Assertion::Concept {
                    concept: concept.clone(),
                    individual: m(individual)?,
                },
                Assertion::Role {
                    role,
                    subject,
                    object,
                } => Assertion::Role {
                    role: role.clone(),
                    subject: m(subject)?,
                    object: m(object)?,
                },
            })
        })
        .collect()
}
