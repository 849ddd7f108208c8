//! Counting s-t connecting edge subsets through Shapley values of the reachability game.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::encodings::reachability_game;
use super::graph::DiGraph;
use super::LabError;
use crate::linalg::{as_nonneg_integer, solve_linear_exact, LinearSystem};
use crate::reasoner::ReasonerOptions;
use crate::shapley::{shapley_subset_with_limit, ShapleyError};
use crate::Rational;

/// Default bound on `|E|` for the Shapley pipeline (`G_m` has `2m + 1` edges).
pub const ST_LIMIT: usize = 12;

/// `G_i`: fresh vertices `s_1..s_i`, the chain `s_1 → … → s_i → s` and the edge
/// `μ = (s_1, t)`, with source `s_1` and target `t`. Returns `G_i` and `μ`.
pub fn build_gi(g: &DiGraph, i: usize) -> Result<(DiGraph, (String, String)), LabError> {
    if i == 0 {
        return Err(LabError::Parameter("G_i needs i ≥ 1".into()));
    }
    let mut chain: Vec<String> = Vec::with_capacity(i + 1);
    let mut h = g.clone();
    for k in 1..=i {
        let v = h.fresh_vertex(&format!("{}~{k}", g.s));
        h.add_vertex(&v);
        chain.push(v);
    }
    chain.push(g.s.clone());
    for w in chain.windows(2) {
        h.add_edge(&w[0], &w[1]);
    }
    let mu = (chain[0].clone(), g.t.clone());
    h.add_edge(&mu.0, &mu.1);
    h.s = chain[0].clone();
    Ok((h, mu))
}

/// Number of edge subsets connecting `s` to `t`, by exhaustive enumeration.
pub fn count_st_subgraphs_brute(g: &DiGraph) -> Result<u64, LabError> {
    let m = g.edge_count();
    if m > 20 {
        return Err(LabError::TooLarge { what: "edges", n: m, limit: 20 });
    }
    Ok((0..1u64 << m).into_par_iter().filter(|&mask| g.connects(mask)).count() as u64)
}

/// Intermediate quantities of [`count_st_subgraphs_via_shapley`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StCount {
    pub total: BigInt,
    /// `cs_j`: connecting subsets with `j` edges, `j = 0..=m`.
    pub by_size: Vec<BigInt>,
    /// `Sh(E_i, μ)` for `i = 1..=m`.
    pub shapley: Vec<Rational>,
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * k)
}

/// Recovers the number of s-t connecting subgraphs from `Sh(E_i, μ)` in each `G_i`.
///
/// `μ` is not pivotal exactly when the players before it contain the chain `C_i` and a
/// connecting subset `S ⊆ E`, which for a fixed `S` of size `j` has probability
/// `(i+j)!(m-j)!/(m+i+1)!`. The rows `Σ_j (i+j)!(m-j)!/(m+i+1)! · cs_j = 1 - Sh_i`,
/// `i = 1..m`, determine `cs_1..cs_m` (`cs_0 = 0` since `s ≠ t`).
pub fn count_st_subgraphs_via_shapley(g: &DiGraph, opts: &ReasonerOptions) -> Result<StCount, LabError> {
    count_st_with_limit(g, opts, ST_LIMIT)
}

pub fn count_st_with_limit(g: &DiGraph, opts: &ReasonerOptions, limit: usize) -> Result<StCount, LabError> {
    if g.s == g.t {
        return Err(LabError::Parameter("source and target coincide".into()));
    }
    let m = g.edge_count();
    if m > limit {
        return Err(LabError::TooLarge { what: "edges", n: m, limit });
    }
    if m == 0 {
        return Ok(StCount {
            total: BigInt::zero(),
            by_size: vec![BigInt::zero()],
            shapley: Vec::new(),
        });
    }
    let shapley: Vec<Rational> = (1..=m)
        .map(|i| {
            let (gi, mu) = build_gi(g, i)?;
            let enc = reachability_game(&gi);
            let game = enc.game(opts).map_err(ShapleyError::from)?;
            let idx = gi.edge_index(&mu.0, &mu.1).expect("μ is an edge of G_i");
            let p = game.index_of(&enc.edge_players[idx]).expect("edge player");
            Ok(shapley_subset_with_limit::<Rational>(&game, 2 * limit + 1)?.values.swap_remove(p))
        })
        .collect::<Result<_, LabError>>()?;
    let matrix = (1..=m)
        .map(|i| {
            (1..=m)
                .map(|j| Rational::new(factorial(i + j) * factorial(m - j), factorial(m + i + 1)))
                .collect()
        })
        .collect();
    let rhs = shapley.iter().map(|sh| Rational::one() - sh).collect();
    let x = solve_linear_exact(&LinearSystem::new(matrix, rhs))?;
    let mut by_size = vec![BigInt::zero()];
    for (j, v) in x.iter().enumerate() {
        by_size.push(as_nonneg_integer(v).ok_or_else(|| LabError::NonInteger {
            what: format!("cs_{}", j + 1),
            value: v.clone(),
        })?);
    }
    Ok(StCount {
        total: by_size.iter().sum(),
        by_size,
        shapley,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> DiGraph {
        DiGraph::with_edges("s", "t", [("s", "a"), ("a", "t"), ("s", "t")])
    }

    #[test]
    fn gi_shape() {
        let g = triangle();
        let (g2, mu) = build_gi(&g, 2).unwrap();
        assert_eq!(g2.edge_count(), 6);
        assert_eq!(mu.1, "t");
        assert_eq!(g2.s, mu.0);
        let empty = DiGraph::new("s", "t");
        let (g1, _) = build_gi(&empty, 1).unwrap();
        assert_eq!(g1.edge_count(), 2);
        assert!(build_gi(&g, 0).is_err());
        // Fresh names avoid collisions with existing vertices.
        let clash = DiGraph::with_edges("s", "t", [("s~1", "t")]);
        let (h, mu) = build_gi(&clash, 1).unwrap();
        assert_ne!(mu.0, "s~1");
        assert_eq!(h.edge_count(), 3);
    }

    #[test]
    fn known_counts() {
        let opts = ReasonerOptions::default();
        for (g, want) in [
            (triangle(), 5),
            (DiGraph::with_edges("s", "t", [("s", "t")]), 1),
            (DiGraph::with_edges("s", "t", [("s", "a"), ("b", "t")]), 0),
        ] {
            assert_eq!(count_st_subgraphs_brute(&g).unwrap(), want);
            assert_eq!(count_st_subgraphs_via_shapley(&g, &opts).unwrap().total, BigInt::from(want));
        }
        assert!(count_st_subgraphs_via_shapley(&DiGraph::new("s", "s"), &opts).is_err());
        assert_eq!(count_st_subgraphs_via_shapley(&DiGraph::new("s", "t"), &opts).unwrap().total, BigInt::zero());
    }
}
