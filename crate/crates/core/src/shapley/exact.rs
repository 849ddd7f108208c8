use std::collections::HashMap;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::{factorials, weighted_numerator, Method, ShapleyError, ShapleyResult};
use crate::game::{Coalition, CooperativeGame};
use crate::supports::{minimal_supports, SupportSet};
use crate::Scalar;

/// Largest game the `2^n` coalition sweep accepts by default.
pub const SUBSET_LIMIT: usize = 20;
/// Largest game the `n!` ordering sweep accepts.
pub const PERMUTATION_LIMIT: usize = 8;

fn check(n: usize, limit: usize, method: &'static str) -> Result<(), ShapleyError> {
    if n > limit {
        return Err(ShapleyError::Limit { method, n, limit });
    }
    Ok(())
}

fn finish<S: Scalar>(g: &CooperativeGame, nums: Vec<BigInt>, den: &BigInt, method: Method) -> ShapleyResult<S> {
    ShapleyResult {
        players: g.players().to_vec(),
        values: nums.iter().map(|x| S::from_ratio(x, den)).collect(),
        method,
    }
}

/// All values from one sweep over the cached value table.
pub fn shapley_subset_all<S: Scalar>(g: &CooperativeGame) -> Result<ShapleyResult<S>, ShapleyError> {
    shapley_subset_with_limit(g, SUBSET_LIMIT)
}

/// [`shapley_subset_all`] with a caller-chosen player limit (at most 30).
pub fn shapley_subset_with_limit<S: Scalar>(g: &CooperativeGame, limit: usize) -> Result<ShapleyResult<S>, ShapleyError> {
    let n = g.n();
    check(n, limit.min(30), "subset")?;
    let fact = factorials(n);
    if n == 0 || g.exo_satisfied() {
        return Ok(finish(g, vec![BigInt::zero(); n], &BigInt::one(), Method::Subset));
    }
    let table = g.value_table()?;
    let v = |m: u64| table[(m >> 6) as usize] >> (m & 63) & 1 == 1;
    // counts[p][k]: signed marginals of p over coalitions B of size k without p.
    let counts = (1..1u64 << n)
        .into_par_iter()
        .fold(
            || vec![vec![0i64; n]; n],
            |mut acc, m| {
                let k = m.count_ones() as usize - 1;
                let with = v(m);
                for p in Coalition(m).indices() {
                    acc[p][k] += with as i64 - v(m & !(1 << p)) as i64;
                }
                acc
            },
        )
        .reduce(
            || vec![vec![0i64; n]; n],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    for (s, t) in x.iter_mut().zip(y) {
                        *s += t;
                    }
                }
                a
            },
        );
    let nums = counts.iter().map(|c| weighted_numerator(c, &fact)).collect();
    Ok(finish(g, nums, &fact[n], Method::Subset))
}

pub fn shapley_exact_subset<S: Scalar>(g: &CooperativeGame, p: usize) -> Result<S, ShapleyError> {
    if p >= g.n() {
        return Err(ShapleyError::NoSuchPlayer(p));
    }
    Ok(shapley_subset_all::<S>(g)?.values.swap_remove(p))
}

/// Average marginal contribution over all `n!` arrival orders.
pub fn shapley_permutation_all<S: Scalar>(g: &CooperativeGame) -> Result<ShapleyResult<S>, ShapleyError> {
    let n = g.n();
    check(n, PERMUTATION_LIMIT, "permutation")?;
    let mut pivotal = vec![0i64; n];
    for order in (0..n).permutations(n) {
        let mut prefix = Coalition::EMPTY;
        let mut before = g.score(prefix)?;
        for p in order {
            prefix = prefix.with(p);
            let after = g.score(prefix)?;
            pivotal[p] += after as i64 - before as i64;
            before = after;
        }
    }
    let nums = pivotal.into_iter().map(BigInt::from).collect();
    Ok(finish(g, nums, &factorials(n)[n], Method::Permutation))
}

pub fn shapley_exact_permutation<S: Scalar>(g: &CooperativeGame, p: usize) -> Result<S, ShapleyError> {
    if p >= g.n() {
        return Err(ShapleyError::NoSuchPlayer(p));
    }
    Ok(shapley_permutation_all::<S>(g)?.values.swap_remove(p))
}

/// Signed inclusion–exclusion coefficients over unions of nonempty support families:
/// `coef[U] = Σ_{F : ∪F = U} (-1)^{|F|+1}`; zero entries are dropped.
fn union_coefficients(supports: &[Coalition]) -> Vec<(u64, i64)> {
    let mut coef: HashMap<u64, i64> = HashMap::new();
    for s in supports {
        let snapshot: Vec<(u64, i64)> = coef.iter().map(|(&u, &c)| (u, c)).collect();
        for (u, c) in snapshot {
            *coef.entry(u | s.0).or_default() -= c;
        }
        *coef.entry(s.0).or_default() += 1;
        coef.retain(|_, c| *c != 0);
    }
    let mut out: Vec<(u64, i64)> = coef.into_iter().collect();
    out.sort_unstable();
    out
}

fn binomial(n: i64, k: i64, fact: &[BigInt]) -> BigInt {
    if k < 0 || k > n {
        return BigInt::zero();
    }
    &fact[n as usize] / (&fact[k as usize] * &fact[(n - k) as usize])
}

/// Values from the minimal supports alone, for monotone games with `w(∅) = 0`.
///
/// The number of size-`k` coalitions `B ∌ p` with `B ∪ {p}` winning and `B` losing is
/// `Σ_U coef[U]·C(n-1-u, k-u)` over unions `U ∋ p`, `u = |U∖{p}|`; unions avoiding `p`
/// contribute equally to both sides and cancel.
pub fn shapley_via_supports_all<S: Scalar>(ss: &SupportSet) -> ShapleyResult<S> {
    let n = ss.players.len();
    let fact = factorials(n);
    let coef = union_coefficients(&ss.supports);
    let values = (0..n)
        .map(|p| {
            let counts: Vec<BigInt> = (0..n as i64)
                .map(|k| {
                    coef.iter()
                        .filter(|(u, _)| u >> p & 1 == 1)
                        .map(|&(u, c)| {
                            let u = u.count_ones() as i64 - 1;
                            BigInt::from(c) * binomial(n as i64 - 1 - u, k - u, &fact)
                        })
                        .sum()
                })
                .collect();
            let num: BigInt = counts
                .iter()
                .enumerate()
                .map(|(k, c)| c * &fact[k] * &fact[n - k - 1])
                .sum();
            S::from_ratio(&num, &fact[n])
        })
        .collect();
    ShapleyResult {
        players: ss.players.clone(),
        values,
        method: Method::Supports,
    }
}

pub fn shapley_via_supports<S: Scalar>(ss: &SupportSet, p: usize) -> Result<S, ShapleyError> {
    if p >= ss.players.len() {
        return Err(ShapleyError::NoSuchPlayer(p));
    }
    Ok(shapley_via_supports_all::<S>(ss).values.swap_remove(p))
}

/// Exact values by the coalition sweep when the game is small enough, otherwise via the
/// minimal supports (practical whenever supports are small).
pub fn shapley_all<S: Scalar>(g: &CooperativeGame) -> Result<ShapleyResult<S>, ShapleyError> {
    if g.n() <= SUBSET_LIMIT {
        shapley_subset_all(g)
    } else {
        Ok(shapley_via_supports_all(&minimal_supports(g, None)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn single_player() {
        let g = CooperativeGame::from_supports(1, vec![1]).unwrap();
        assert_eq!(shapley_exact_subset::<Rational>(&g, 0).unwrap(), r(1, 1));
        assert_eq!(shapley_exact_permutation::<Rational>(&g, 0).unwrap(), r(1, 1));
    }

    #[test]
    fn two_of_a_path() {
        let g = CooperativeGame::from_supports(2, vec![0b11]).unwrap();
        let res = shapley_subset_all::<Rational>(&g).unwrap();
        assert_eq!(res.values, vec![r(1, 2), r(1, 2)]);
    }

    #[test]
    fn methods_agree_on_a_small_game() {
        let g = CooperativeGame::from_supports(4, vec![0b0011, 0b1101]).unwrap();
        let a = shapley_subset_all::<Rational>(&g).unwrap().values;
        let b = shapley_permutation_all::<Rational>(&g).unwrap().values;
        let c = shapley_via_supports_all::<Rational>(&minimal_supports(&g, None).unwrap()).values;
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(a.iter().sum::<Rational>(), r(1, 1));
        let f = shapley_subset_all::<f64>(&g).unwrap().values;
        assert!((f[0] - 14.0 / 24.0).abs() < 1e-12);
    }

    #[test]
    fn union_coefficients_cancel() {
        // Two supports whose union is a third: {a}, {b}, {a,b} is not an antichain but the
        // formula must still cancel cleanly.
        let c = union_coefficients(&[Coalition(1), Coalition(2)]);
        assert_eq!(c, vec![(1, 1), (2, 1), (3, -1)]);
    }

    #[test]
    fn limits() {
        let g = CooperativeGame::from_supports(9, vec![1]).unwrap();
        assert!(matches!(
            shapley_permutation_all::<f64>(&g),
            Err(ShapleyError::Limit { limit: 8, .. })
        ));
        let g = CooperativeGame::from_supports(30, vec![1, 6]).unwrap();
        let res = shapley_all::<Rational>(&g).unwrap();
        assert_eq!(res.method, Method::Supports);
        assert_eq!(res.values[0], r(2, 3));
        assert_eq!(res.values[1], r(1, 6));
    }
}
