//! Shapley values of knowledge-base elements for ontology-mediated query entailment.
//!
//! Knowledge bases use Horn description logics (ELHI with bottom, DL-Lite). Players are
//! endogenous ABox assertions and TBox axioms; a coalition scores 1 when it entails the
//! query together with the exogenous context. The crate provides an entailment oracle
//! (bounded chase), minimal-support enumeration, exact and sampled Shapley values,
//! brute-force probabilistic query evaluation, and executable versions of the standard
//! hardness reductions, each checked against an independent brute-force count.

pub mod game;
pub mod kb;
pub mod lab;
pub mod linalg;
pub mod pqe;
pub mod reasoner;
pub mod scalar;
pub mod shapley;
pub mod supports;
pub mod text;

pub use scalar::Scalar;

/// Exact arbitrary-precision rational.
pub type Rational = num_rational::BigRational;

/// Exact Shapley values for every player.
pub type ExactShapley = shapley::ShapleyResult<Rational>;
/// Double-precision Shapley values for every player.
pub type FloatShapley = shapley::ShapleyResult<f64>;
