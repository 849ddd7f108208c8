//! Finite countermodel search: a sound refutation check independent of the chase.

use crate::kb::{ABox, Assertion, Axiom, BooleanQuery, Cq, Individual, Role};

use super::engine::{static_input, Engine, IFact, IRule, Structure, TOP};
use super::matcher::matches;

/// A finite model of the KB, restricted to the input signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteModel {
    pub domain: Vec<Individual>,
    pub facts: ABox,
}

/// Least closure under all non-existential rules; `false` on a clash.
fn close(s: &mut Structure, rules: &[IRule]) -> bool {
    loop {
        let mut changed = false;
        let domain: Vec<u32> = s.domain().collect();
        for &rule in rules {
            match rule {
                IRule::Sub(a, b) => {
                    for &e in &domain {
                        if s.has(e, a) {
                            changed |= s.set_label(e, b);
                        }
                    }
                }
                IRule::Conj(a, b, c) => {
                    for &e in &domain {
                        if s.has(e, a) && s.has(e, b) {
                            changed |= s.set_label(e, c);
                        }
                    }
                }
                IRule::ExLhs(r, a, b) => {
                    for &e in &domain {
                        if !s.has(e, b) && s.role_succs(r, e).any(|f| s.has(f, a)) {
                            changed |= s.set_label(e, b);
                        }
                    }
                }
                IRule::Bot(a) => {
                    if domain.iter().any(|&e| s.has(e, a)) {
                        return false;
                    }
                }
                IRule::RoleSub(r, t) => {
                    let pairs: Vec<(u32, u32)> = domain
                        .iter()
                        .flat_map(|&u| s.role_succs(r, u).map(move |v| (u, v)).collect::<Vec<_>>())
                        .collect();
                    for (u, v) in pairs {
                        changed |= s.insert_pair(t, u, v);
                    }
                }
                IRule::RoleDisj(r, t) => {
                    for &u in &domain {
                        if s.role_succs(r, u).any(|v| s.has_pair(t, u, v)) {
                            return false;
                        }
                    }
                }
                IRule::ExRhs(..) => {}
            }
        }
        if !changed {
            return true;
        }
    }
}

fn search(s: Structure, rules: &[IRule], eng: &Engine) -> Option<Structure> {
    let mut s = s;
    if !close(&mut s, rules) {
        return None;
    }
    if let super::engine::Goal::Ucq(ds) = &eng.goal {
        // Queries are monotone: once true, no extension can falsify them.
        if ds.iter().any(|q| matches(&s, q)) {
            return None;
        }
    }
    let domain: Vec<u32> = s.domain().collect();
    for &e in &domain {
        for &rule in rules {
            let IRule::ExRhs(a, r, b) = rule else { continue };
            if !s.has(e, a) || s.role_succs(r, e).any(|f| s.has(f, b)) {
                continue;
            }
            for &f in &domain {
                let mut next = s.clone();
                next.insert_pair(r, e, f);
                next.set_label(f, b);
                if let Some(m) = search(next, rules, eng) {
                    return Some(m);
                }
            }
            return None;
        }
    }
    Some(s)
}

/// Looks for a model of `(abox, tbox)` falsifying `q` whose domain is the individuals of
/// `abox` plus up to `max_domain - |individuals|` anonymous elements. A returned model
/// certifies non-entailment; `None` certifies nothing.
pub fn find_countermodel(abox: &ABox, tbox: &[Axiom], q: &[Cq], max_domain: usize) -> Option<FiniteModel> {
    let query = BooleanQuery::Ucq(q.to_vec());
    let eng = Engine::compile(static_input(abox, tbox, Some(&query), None, usize::MAX));
    let rules: Vec<IRule> = eng.rules().collect();
    let n_named = eng.sig.individuals.len();
    let mut present = vec![false; n_named];
    for f in eng.active_facts(0) {
        match f {
            IFact::Concept(_, i) | IFact::Present(i) => present[i as usize] = true,
            IFact::Role(_, i, j) => {
                present[i as usize] = true;
                present[j as usize] = true;
            }
        }
    }
    let named = present.iter().filter(|&&p| p).count();
    let min_extra = usize::from(named == 0);
    let max_extra = max_domain.saturating_sub(named);
    for extra in min_extra..=max_extra.max(min_extra) {
        if named + extra > max_domain.max(1) {
            break;
        }
        let mut s = Structure::fixed_domain(present.clone(), eng.sig.concepts.len(), extra);
        for f in eng.active_facts(0) {
            match f {
                IFact::Concept(c, i) => {
                    s.set_label(i, c);
                }
                IFact::Role(r, i, j) => {
                    s.insert_edge(i, r, j);
                }
                IFact::Present(_) => {}
            }
        }
        if let Some(m) = search(s, &rules, &eng) {
            return Some(to_model(&m, &eng));
        }
    }
    None
}

fn to_model(s: &Structure, eng: &Engine) -> FiniteModel {
    let name = |e: u32| -> Individual {
        if (e as usize) < s.n_named {
            eng.sig.individuals[e as usize].clone()
        } else {
            Individual::new(format!("_u{}", e as usize - s.n_named))
        }
    };
    let domain: Vec<Individual> = s.domain().map(name).collect();
    let mut facts = ABox::new();
    for e in s.domain() {
        for c in s.labels_of(e) {
            if c != TOP && !eng.fresh.contains(&c) {
                facts.insert(Assertion::Concept {
                    concept: eng.concept_name(c).clone(),
                    individual: name(e),
                });
            }
        }
    }
    for &(x, r, y) in s.edge_list() {
        facts.insert(Assertion::Role {
            role: Role::new(eng.sig.roles[r as usize].clone()),
            subject: name(x),
            object: name(y),
        });
    }
    FiniteModel { domain, facts }
}
