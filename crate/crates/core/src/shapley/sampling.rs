use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::ShapleyError;
use crate::game::{Coalition, CooperativeGame};
use crate::supports::SupportSet;
use crate::{Rational, Scalar};

/// A Monte Carlo estimate of one player's value.
#[derive(Debug, Clone, PartialEq)]
pub struct Estimate<S> {
    pub value: S,
    pub samples: u64,
    /// Sampled orders in which the player was pivotal.
    pub hits: u64,
    /// Additive error the sample count was sized for.
    pub epsilon: Rational,
}

fn in_unit_interval(x: &Rational, name: &str) -> Result<(), ShapleyError> {
    if x.is_positive() && x < &Rational::one() {
        Ok(())
    } else {
        Err(ShapleyError::Parameter(format!("{name} must lie in (0,1), got {x}")))
    }
}

/// Two-sided Hoeffding sample count `⌈ln(2/δ) / (2ε²)⌉`.
pub fn hoeffding_samples(eps: &Rational, delta: &Rational) -> Result<u64, ShapleyError> {
    in_unit_interval(eps, "epsilon")?;
    in_unit_interval(delta, "delta")?;
    let e = eps.to_f64().unwrap_or(f64::NAN);
    let d = delta.to_f64().unwrap_or(f64::NAN);
    let n = ((2.0 / d).ln() / (2.0 * e * e)).ceil();
    if !n.is_finite() || n > u64::MAX as f64 {
        return Err(ShapleyError::Parameter(format!("sample count overflows for epsilon {eps}")));
    }
    Ok(n as u64)
}

/// Additive error `ε·m^(-k)` that yields a multiplicative `ε` guarantee, since a relevant
/// player with supports of size at most `k` among `m` players has value at least `m^(-k)`.
pub fn multiplicative_epsilon(eps: &Rational, m: usize, k: usize) -> Rational {
    eps / Rational::from_integer(BigInt::from(m).pow(k as u32))
}

/// Mean marginal contribution of `p` over `N` seeded uniform arrival orders. Sample `i`
/// draws its order from stream `i` of a ChaCha generator keyed by `seed`, so the estimate
/// does not depend on how samples are spread across threads.
pub fn sample_additive<S: Scalar>(
    g: &CooperativeGame,
    p: usize,
    eps: &Rational,
    delta: &Rational,
    seed: u64,
) -> Result<Estimate<S>, ShapleyError> {
    let n = g.n();
    if p >= n {
        return Err(ShapleyError::NoSuchPlayer(p));
    }
    let samples = hoeffding_samples(eps, delta)?;
    let hits: i64 = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            let before = Coalition::from_indices(order.iter().take_while(|&&q| q != p).copied());
            Ok(g.score(before.with(p))? as i64 - g.score(before)? as i64)
        })
        .sum::<Result<i64, ShapleyError>>()?;
    Ok(Estimate {
        value: S::from_ratio(&BigInt::from(hits), &BigInt::from(samples)),
        samples,
        hits: hits.max(0) as u64,
        epsilon: eps.clone(),
    })
}

/// Multiplicative-error estimate: exact 0 for players outside every minimal support,
/// otherwise [`sample_additive`] at `ε·m^(-k)` with `k` the largest support size.
pub fn sample_multiplicative<S: Scalar>(
    g: &CooperativeGame,
    p: usize,
    eps: &Rational,
    delta: &Rational,
    supports: &SupportSet,
    seed: u64,
) -> Result<Estimate<S>, ShapleyError> {
    if p >= g.n() {
        return Err(ShapleyError::NoSuchPlayer(p));
    }
    in_unit_interval(eps, "epsilon")?;
    in_unit_interval(delta, "delta")?;
    if !supports.is_relevant(p) {
        return Ok(Estimate {
            value: S::zero(),
            samples: 0,
            hits: 0,
            epsilon: Rational::zero(),
        });
    }
    let eff = multiplicative_epsilon(eps, g.n(), supports.size_bound());
    let mut est = sample_additive(g, p, &eff, delta, seed)?;
    est.epsilon = eff;
    Ok(est)
}
