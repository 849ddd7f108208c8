use num_bigint::BigInt;
use num_traits::Zero;

use super::{factorials, Method, ShapleyError, ShapleyResult};
use crate::game::Player;
use crate::kb::{ABox, Assertion, Atom, BooleanQuery, Dialect, PartitionedKB, Term};
use crate::reasoner::{entails, is_consistent, Consistency, ReasonerOptions, Verdict};
use crate::Scalar;

/// Closed-form values for an atomic goal `A(c)` over a DL-Lite KB whose TBox is entirely
/// exogenous.
///
/// Without conjunction on left-hand sides, `A(c)` is entailed iff one of the facts
/// `α_1..α_m` with `({α_i}, T) ⊨ A(c)` is present. If one of them is exogenous every value
/// is 0; otherwise each endogenous `α_i` gets the probability of arriving first among the
/// `α`s, `Σ_{k=0}^{n-m} C(n-m,k)·k!(n-k-1)!/n! = 1/m`, and everything else gets 0.
///
/// Instances whose full KB is inconsistent are refused: an inconsistent pair of facts
/// would entail the goal without any single witness.
pub fn dllite_atomic_shapley<S: Scalar>(
    pk: &PartitionedKB,
    goal: &Assertion,
    opts: &ReasonerOptions,
) -> Result<ShapleyResult<S>, ShapleyError> {
    if pk.dialect != Dialect::DlLite {
        return Err(ShapleyError::NotApplicable(format!("dialect is {}", pk.dialect)));
    }
    if !pk.tbox_endo.is_empty() {
        return Err(ShapleyError::NotApplicable("TBox has endogenous axioms".into()));
    }
    let Assertion::Concept { concept, individual } = goal else {
        return Err(ShapleyError::NotApplicable(format!("goal {goal} is not a concept assertion")));
    };
    pk.validate().map_err(|e| ShapleyError::NotApplicable(e.to_string()))?;
    let tbox = pk.tbox();
    match is_consistent(&pk.abox(), &tbox, opts) {
        Consistency::Consistent => {}
        Consistency::Inconsistent => {
            return Err(ShapleyError::NotApplicable("the KB is inconsistent".into()))
        }
        Consistency::Unknown => {
            return Err(ShapleyError::NotApplicable("consistency undecided".into()))
        }
    }
    let q = BooleanQuery::cq([Atom::Concept(concept.clone(), Term::Const(individual.clone()))]);
    let witness = |a: &Assertion| -> Result<bool, ShapleyError> {
        match entails(&ABox::from_iter([a.clone()]), &tbox, &q, opts) {
            Verdict::Yes => Ok(true),
            Verdict::No => Ok(false),
            Verdict::Unknown => Err(ShapleyError::NotApplicable(format!("entailment from {a} undecided"))),
        }
    };
    let players: Vec<Player> = pk.abox_endo.iter().cloned().map(Player::Assertion).collect();
    let n = players.len();
    let mut exo_witness = false;
    for a in pk.abox_exo.iter() {
        if witness(a)? {
            exo_witness = true;
            break;
        }
    }
    // A goal entailed by the TBox alone behaves like an exogenous witness.
    exo_witness |= entails(&ABox::new(), &tbox, &q, opts) == Verdict::Yes;
    let mut is_witness = Vec::with_capacity(n);
    for a in pk.abox_endo.iter() {
        is_witness.push(!exo_witness && witness(a)?);
    }
    let m = is_witness.iter().filter(|&&w| w).count();
    let value = if m == 0 {
        S::zero()
    } else {
        let fact = factorials(n);
        let num: BigInt = (0..=n - m)
            .map(|k| &fact[n - m] / (&fact[k] * &fact[n - m - k]) * &fact[k] * &fact[n - k - 1])
            .sum();
        S::from_ratio(&num, &fact[n])
    };
    let values = is_witness
        .iter()
        .map(|&w| if w { value.clone() } else { S::from_ratio(&BigInt::zero(), &BigInt::from(1)) })
        .collect();
    Ok(ShapleyResult {
        players,
        values,
        method: Method::ClosedForm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kb::{Axiom, Concept};
    use crate::Rational;

    fn kb(endo: &[Assertion], exo: &[Assertion], tbox: Vec<Axiom>) -> PartitionedKB {
        PartitionedKB {
            dialect: Dialect::DlLite,
            abox_endo: endo.iter().cloned().collect(),
            abox_exo: exo.iter().cloned().collect(),
            tbox_exo: tbox.into_iter().collect(),
            ..Default::default()
        }
    }

    #[test]
    fn symmetric_witnesses() {
        let t = vec![
            Axiom::sub(Concept::name("B"), Concept::name("A")),
            Axiom::sub(Concept::exists("r", Concept::Top), Concept::name("A")),
        ];
        let pk = kb(
            &[
                Assertion::concept("B", "c"),
                Assertion::role("r", "c", "d"),
                Assertion::concept("B", "d"),
                Assertion::concept("C", "c"),
                Assertion::role("s", "c", "d"),
            ],
            &[],
            t,
        );
        let goal = Assertion::concept("A", "c");
        let res = dllite_atomic_shapley::<Rational>(&pk, &goal, &ReasonerOptions::default()).unwrap();
        let half = Rational::new(1.into(), 2.into());
        let nonzero: Vec<_> = res.values.iter().filter(|v| !v.is_zero()).collect();
        assert_eq!(nonzero, vec![&half, &half]);
    }

    #[test]
    fn exo_witness_zeroes_everything() {
        let pk = kb(&[Assertion::concept("A", "c")], &[Assertion::concept("B", "c")], vec![
            Axiom::sub(Concept::name("B"), Concept::name("A")),
        ]);
        let res = dllite_atomic_shapley::<f64>(&pk, &Assertion::concept("A", "c"), &ReasonerOptions::default()).unwrap();
        assert_eq!(res.values, vec![0.0]);
    }

    #[test]
    fn refuses_inconsistent_and_elhi() {
        let t = vec![Axiom::sub(Concept::name("A"), Concept::not(Concept::name("B")))];
        let pk = kb(&[Assertion::concept("A", "c"), Assertion::concept("B", "c")], &[], t);
        assert!(dllite_atomic_shapley::<f64>(&pk, &Assertion::concept("A", "c"), &ReasonerOptions::default()).is_err());
        let mut pk = kb(&[Assertion::concept("A", "c")], &[], vec![]);
        let one = dllite_atomic_shapley::<f64>(&pk, &Assertion::concept("A", "c"), &ReasonerOptions::default()).unwrap();
        assert_eq!(one.values, vec![1.0]);
        pk.dialect = Dialect::ElhiBot;
        assert!(dllite_atomic_shapley::<f64>(&pk, &Assertion::concept("A", "c"), &ReasonerOptions::default()).is_err());
    }
}
