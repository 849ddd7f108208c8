//! Shapley values of cooperative games.
//!
//! `Sh(p) = Σ_{B ⊆ P∖{p}} |B|!(n-|B|-1)!/n! · (w(B∪{p}) - w(B))`. Exact methods accumulate
//! integer coalition counts and divide by `n!` once, so every scalar type sees the same
//! rational before conversion.

mod dllite;
mod exact;
mod sampling;

use num_bigint::BigInt;
use num_traits::One;

use crate::game::{OracleError, Player};
use crate::supports::SupportError;

pub use dllite::dllite_atomic_shapley;
pub use exact::{
    shapley_all, shapley_exact_permutation, shapley_exact_subset, shapley_permutation_all,
    shapley_subset_all, shapley_subset_with_limit, shapley_via_supports, shapley_via_supports_all, PERMUTATION_LIMIT,
    SUBSET_LIMIT,
};
pub use sampling::{hoeffding_samples, multiplicative_epsilon, sample_additive, sample_multiplicative, Estimate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Weighted sum over all coalitions.
    Subset,
    /// Average over all arrival orders.
    Permutation,
    /// Inclusion–exclusion over the minimal supports.
    Supports,
    /// DL-Lite atomic-goal closed form.
    ClosedForm,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Subset => "subset",
            Method::Permutation => "permutation",
            Method::Supports => "supports",
            Method::ClosedForm => "closed-form",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShapleyResult<S> {
    pub players: Vec<Player>,
    pub values: Vec<S>,
    pub method: Method,
}

impl<S> ShapleyResult<S> {
    pub fn n(&self) -> usize {
        self.players.len()
    }

    pub fn value_of(&self, p: &Player) -> Option<&S> {
        self.players.iter().position(|q| q == p).map(|i| &self.values[i])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ShapleyError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Supports(#[from] SupportError),
    #[error("{method} method supports at most {limit} players, game has {n}")]
    Limit { method: &'static str, n: usize, limit: usize },
    #[error("player index {0} out of range")]
    NoSuchPlayer(usize),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("closed form not applicable: {0}")]
    NotApplicable(String),
}

pub(crate) fn factorials(n: usize) -> Vec<BigInt> {
    let mut f = vec![BigInt::one()];
    for i in 1..=n {
        let next = &f[i - 1] * BigInt::from(i);
        f.push(next);
    }
    f
}

/// `Σ_k counts[k]·k!(n-k-1)!`, the numerator over `n!` of a Shapley value whose pivotal
/// coalitions (by size) are `counts`.
pub(crate) fn weighted_numerator<C: Into<BigInt> + Copy>(counts: &[C], fact: &[BigInt]) -> BigInt {
    let n = counts.len();
    counts
        .iter()
        .enumerate()
        .map(|(k, &c)| c.into() * &fact[k] * &fact[n - k - 1])
        .sum()
}
