//! Probabilistic query evaluation over tuple-independent ABoxes, by world enumeration.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed};
use rayon::prelude::*;

use crate::kb::{ABox, Assertion, Atom, Axiom, BooleanQuery, Concept, ConceptName, Cq, Term};
use crate::reasoner::engine::{Engine, EngineInput};
use crate::reasoner::{entails, ReasonerOptions, Verdict};
use crate::text::KbDocument;
use crate::{Rational, Scalar};

/// Default bound on the number of uncertain facts (`2^n` worlds).
pub const PQE_LIMIT: usize = 20;

/// Concept name standing in for `⊥` after the Q* transformation.
pub const ABOT: &str = "ABot";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PqeError {
    #[error("probability {prob} of {fact} is outside (0,1]")]
    Probability { fact: String, prob: Rational },
    #[error("{n} uncertain facts exceed the limit of {limit}")]
    Limit { n: usize, limit: usize },
    #[error("entailment undecided in some world; raise the chase depth")]
    Unknown,
    #[error("{ABOT} already occurs in the input")]
    NameClash,
    #[error("unsupported input: {0}")]
    Unsupported(String),
}

/// Facts with independent probabilities in `(0,1]`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProbabilisticABox {
    facts: BTreeMap<Assertion, Rational>,
}

impl ProbabilisticABox {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, fact: Assertion, prob: Rational) -> Result<(), PqeError> {
        if !prob.is_positive() || prob > Rational::one() {
            return Err(PqeError::Probability {
                fact: fact.to_string(),
                prob,
            });
        }
        self.facts.insert(crate::kb::normalize_assertion(fact), prob);
        Ok(())
    }

    /// Every assertion of the document; unannotated facts are certain.
    pub fn from_document(doc: &KbDocument) -> Result<Self, PqeError> {
        let mut d = Self::new();
        for a in doc.abox_endo.iter().chain(doc.abox_exo.iter()) {
            let p = doc.probabilities.get(a).cloned().unwrap_or_else(Rational::one);
            d.insert(a.clone(), p)?;
        }
        Ok(d)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Assertion, &Rational)> {
        self.facts.iter()
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    pub fn certain(&self) -> ABox {
        self.iter().filter(|(_, p)| p.is_one()).map(|(a, _)| a.clone()).collect()
    }

    pub fn uncertain(&self) -> Vec<(&Assertion, &Rational)> {
        self.iter().filter(|(_, p)| !p.is_one()).collect()
    }

    /// The distinct probabilities in use.
    pub fn image(&self) -> BTreeSet<Rational> {
        self.facts.values().cloned().collect()
    }

    pub fn filter(&self, keep: impl Fn(&Assertion) -> bool) -> Self {
        Self {
            facts: self.facts.iter().filter(|(a, _)| keep(a)).map(|(a, p)| (a.clone(), p.clone())).collect(),
        }
    }
}

/// Restrictions on the probability image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// Every probability is 1/2.
    Half,
    /// Probabilities in {1/2, 1}.
    HalfOne,
    /// Probabilities in {p, 1} for a single `p`.
    SingleProper,
    Any,
}

/// Whether the probability image of `d` is a subset of what `regime` allows.
pub fn validate_regime(d: &ProbabilisticABox, regime: Regime) -> bool {
    let half = Rational::new(1.into(), 2.into());
    let img = d.image();
    match regime {
        Regime::Half => img.iter().all(|p| *p == half),
        Regime::HalfOne => img.iter().all(|p| *p == half || p.is_one()),
        Regime::SingleProper => img.iter().filter(|p| !p.is_one()).count() <= 1,
        Regime::Any => true,
    }
}

/// `Σ_W Π π-weights · [certain ∪ W ⊨ (tbox, q)]` over subsets `W` of the uncertain facts.
///
/// Worlds are visited in Gray-code order within fixed-size blocks, so every world weight
/// is one multiplication away from its predecessor and the block sums are reduced in a
/// fixed order regardless of thread count.
pub fn pqe_exact<S: Scalar>(
    d: &ProbabilisticABox,
    tbox: &[Axiom],
    q: &BooleanQuery,
    opts: &ReasonerOptions,
) -> Result<S, PqeError> {
    pqe_with_limit(d, tbox, q, opts, PQE_LIMIT)
}

pub fn pqe_with_limit<S: Scalar>(
    d: &ProbabilisticABox,
    tbox: &[Axiom],
    q: &BooleanQuery,
    opts: &ReasonerOptions,
    limit: usize,
) -> Result<S, PqeError> {
    let uncertain = d.uncertain();
    let n = uncertain.len();
    if n > limit.min(63) {
        return Err(PqeError::Limit { n, limit });
    }
    let certain = d.certain();
    let engine = Engine::compile(EngineInput {
        facts: uncertain
            .iter()
            .enumerate()
            .map(|(i, (a, _))| (*a, Some(i as u32)))
            .chain(certain.iter().map(|a| (a, None)))
            .collect(),
        axioms: tbox.iter().map(|a| (a, None)).collect(),
        query: Some(q),
        depth_limit: opts.depth_limit,
        node_cap: opts.node_cap,
    });
    let p: Vec<S> = uncertain.iter().map(|(_, p)| S::from_rational(p)).collect();
    let np: Vec<S> = p.iter().map(|x| S::one() - x.clone()).collect();
    // Ratio applied when fact i flips in (out: its inverse).
    let flip_in: Vec<S> = p.iter().zip(&np).map(|(a, b)| a.clone() / b.clone()).collect();
    let flip_out: Vec<S> = p.iter().zip(&np).map(|(a, b)| b.clone() / a.clone()).collect();

    let block_bits = n.min(10);
    let blocks = 1u64 << (n - block_bits);
    let sums: Vec<S> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let hi = b << block_bits;
            let mut world = hi;
            let mut w = (0..n).fold(S::one(), |acc, i| {
                acc * if world >> i & 1 == 1 { p[i].clone() } else { np[i].clone() }
            });
            let mut sum = S::zero();
            for j in 0..1u64 << block_bits {
                if j > 0 {
                    let i = j.trailing_zeros() as usize;
                    world ^= 1 << i;
                    w = w * if world >> i & 1 == 1 { flip_in[i].clone() } else { flip_out[i].clone() };
                }
                match engine.entails(world) {
                    Verdict::Yes => sum = sum + w.clone(),
                    Verdict::No => {}
                    Verdict::Unknown => return Err(PqeError::Unknown),
                }
            }
            Ok(sum)
        })
        .collect::<Result<_, _>>()?;
    Ok(sums.into_iter().fold(S::zero(), |a, b| a + b))
}

/// `1 - Π(1-π)` over the given facts: the probability that at least one is present.
pub fn any_present<S: Scalar>(probs: impl IntoIterator<Item = Rational>) -> S {
    let none: Rational = probs.into_iter().fold(Rational::one(), |acc, p| acc * (Rational::one() - p));
    S::from_rational(&(Rational::one() - none))
}

fn abot() -> ConceptName {
    ConceptName::new(ABOT)
}

fn mentions_abot(c: &Concept) -> bool {
    let mut names = BTreeSet::new();
    c.concept_names(&mut names);
    names.contains(&abot())
}

/// Replaces `⊥` by the fresh concept `ABot` and adds the disjunct `∃x.ABot(x)` to `q`.
///
/// DL-Lite negative inclusions `B1 ⊑ ¬B2` become `B1 ⊓ B2 ⊑ ABot`; negated role
/// inclusions have no such counterpart and are rejected.
pub fn qstar_transform(tbox: &[Axiom], q: &BooleanQuery) -> Result<(Vec<Axiom>, BooleanQuery), PqeError> {
    let BooleanQuery::Ucq(ds) = q else {
        return Err(PqeError::Unsupported("the Q* transformation needs a UCQ".into()));
    };
    if ds.iter().any(|d| d.concept_names().contains(&abot())) {
        return Err(PqeError::NameClash);
    }
    let bot = |c: &Concept| matches!(c, Concept::Bot).then(|| Concept::Name(abot()));
    let mut out = Vec::with_capacity(tbox.len());
    for ax in tbox {
        match ax {
            Axiom::RoleIncl { negated: true, .. } => {
                return Err(PqeError::Unsupported(format!("negated role inclusion {ax}")));
            }
            Axiom::RoleIncl { .. } => out.push(ax.clone()),
            Axiom::ConceptIncl { lhs, rhs } => {
                if mentions_abot(lhs) || mentions_abot(rhs) {
                    return Err(PqeError::NameClash);
                }
                let lhs = lhs.map_names(&bot);
                match rhs {
                    Concept::Not(b) => out.push(Axiom::sub(Concept::and(lhs, (**b).clone()), Concept::Name(abot()))),
                    rhs => out.push(Axiom::sub(lhs, rhs.map_names(&bot))),
                }
            }
        }
    }
    let mut ds = ds.clone();
    ds.push(Cq::new([Atom::Concept(abot(), Term::var("x"))]));
    Ok((out, BooleanQuery::Ucq(ds)))
}

fn verdict(v: Verdict) -> Result<bool, PqeError> {
    match v {
        Verdict::Yes => Ok(true),
        Verdict::No => Ok(false),
        Verdict::Unknown => Err(PqeError::Unknown),
    }
}

/// Both sides of `(A, T) ⊨ q  ⟺  (A, T*) ⊨ q*`, for an ABox not mentioning `ABot`.
pub fn qstar_sides(
    abox: &ABox,
    tbox: &[Axiom],
    q: &BooleanQuery,
    opts: &ReasonerOptions,
) -> Result<(bool, bool), PqeError> {
    if abox.iter().any(|a| a.concept_name() == Some(&abot())) {
        return Err(PqeError::NameClash);
    }
    let (t2, q2) = qstar_transform(tbox, q)?;
    Ok((verdict(entails(abox, tbox, q, opts))?, verdict(entails(abox, &t2, &q2, opts))?))
}

pub fn verify_qstar_equivalence(
    abox: &ABox,
    tbox: &[Axiom],
    q: &BooleanQuery,
    opts: &ReasonerOptions,
) -> Result<bool, PqeError> {
    let (l, r) = qstar_sides(abox, tbox, q, opts)?;
    Ok(l == r)
}

/// The quantities of the probability identity for `Q* = (T*, q*)` over a database whose
/// `ABot` facts are independent of the rest.
#[derive(Debug, Clone, PartialEq)]
pub struct QStarIdentity<S> {
    /// `Pr(D ⊨ Q*)` by world enumeration.
    pub lhs: S,
    /// `Pr(∃x.ABot(x))`.
    pub p_bot: S,
    /// `Pr(D' ⊨ (T, q))`, with `D'` the facts of `D` other than `ABot` facts.
    pub pr_q: S,
    /// `p_bot - (1 - p_bot)·pr_q`.
    pub minus_form: S,
    /// `p_bot + (1 - p_bot)·pr_q`.
    pub plus_form: S,
}

impl<S: Scalar> QStarIdentity<S> {
    pub fn plus_holds(&self) -> bool {
        self.lhs == self.plus_form
    }

    pub fn minus_holds(&self) -> bool {
        self.lhs == self.minus_form
    }
}

pub fn qstar_identity<S: Scalar>(
    d: &ProbabilisticABox,
    tbox: &[Axiom],
    q: &BooleanQuery,
    opts: &ReasonerOptions,
) -> Result<QStarIdentity<S>, PqeError> {
    let is_bot = |a: &Assertion| a.concept_name() == Some(&abot());
    let (t2, q2) = qstar_transform(tbox, q)?;
    let lhs = pqe_exact::<S>(d, &t2, &q2, opts)?;
    let p_bot = any_present::<S>(d.iter().filter(|(a, _)| is_bot(a)).map(|(_, p)| p.clone()));
    let pr_q = pqe_exact::<S>(&d.filter(|a| !is_bot(a)), tbox, q, opts)?;
    let rest = (S::one() - p_bot.clone()) * pr_q.clone();
    Ok(QStarIdentity {
        minus_form: p_bot.clone() - rest.clone(),
        plus_form: p_bot.clone() + rest,
        lhs,
        p_bot,
        pr_q,
    })
}
