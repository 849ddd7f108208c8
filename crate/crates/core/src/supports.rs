//! Minimal supports: the subset-minimal winning coalitions of a monotone game.

use rayon::prelude::*;

use crate::game::{Coalition, CooperativeGame, OracleError, Player};
use crate::kb::{ABox, BooleanQuery, PartitionedKB};
use crate::reasoner::ReasonerOptions;

/// An antichain of minimal supports, canonically ordered by size, then by player indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportSet {
    pub players: Vec<Player>,
    pub supports: Vec<Coalition>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SupportError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("support enumeration stopped at size {cap} with an open frontier ({} supports found)", partial.supports.len())]
    Incomplete { cap: usize, partial: SupportSet },
}

impl SupportSet {
    pub fn len(&self) -> usize {
        self.supports.len()
    }

    pub fn is_empty(&self) -> bool {
        self.supports.is_empty()
    }

    /// Whether `c` contains some support, i.e. wins.
    pub fn covers(&self, c: Coalition) -> bool {
        self.supports.iter().any(|s| s.is_subset(c))
    }

    pub fn is_relevant(&self, player: usize) -> bool {
        self.supports.iter().any(|s| s.contains(player))
    }

    /// Largest support size; 0 for `{}` and `{∅}`.
    pub fn size_bound(&self) -> usize {
        self.supports.iter().map(|s| s.len()).max().unwrap_or(0)
    }

    pub fn members(&self, s: Coalition) -> Vec<&Player> {
        s.indices().map(|i| &self.players[i]).collect()
    }

    /// The assertion players of each support, as ABoxes.
    pub fn aboxes(&self) -> Vec<ABox> {
        self.supports
            .iter()
            .map(|s| {
                s.indices()
                    .filter_map(|i| match &self.players[i] {
                        Player::Assertion(a) => Some(a.clone()),
                        _ => None,
                    })
                    .collect()
            })
            .collect()
    }
}

/// Next mask with the same popcount (Gosper's hack); `None` past the `n`-bit range.
fn next_same_size(m: u64, n: usize) -> Option<u64> {
    let c = m & m.wrapping_neg();
    let r = m.checked_add(c)?;
    let next = (((r ^ m) >> 2) / c) | r;
    (n == 64 || next >> n == 0).then_some(next)
}

fn layer(n: usize, k: usize) -> impl Iterator<Item = u64> {
    let first = if k == 0 { Some(0) } else { Some(Coalition::full(k).0) };
    std::iter::successors(first, move |&m| if m == 0 { None } else { next_same_size(m, n) })
}

/// Minimal hitting sets of `family` (Berge's algorithm), or `None` past `limit` sets.
fn minimal_transversals(family: &[Coalition], limit: usize) -> Option<Vec<u64>> {
    let mut ts: Vec<u64> = vec![0];
    for s in family {
        let mut next: Vec<u64> = Vec::new();
        for &t in &ts {
            if t & s.0 != 0 {
                next.push(t);
            } else {
                next.extend(s.indices().map(|i| t | 1 << i));
            }
        }
        next.sort_unstable();
        next.dedup();
        let mut minimal: Vec<u64> = Vec::new();
        next.sort_by_key(|t| t.count_ones());
        for t in next {
            if !minimal.iter().any(|&m| m & !t == 0) {
                minimal.push(t);
            }
        }
        if minimal.len() > limit {
            return None;
        }
        ts = minimal;
    }
    Some(ts)
}

/// Whether `found` already contains every minimal support: the maximal coalitions that
/// cover no found support are the complements of its minimal transversals, and by
/// monotonicity there is no further support iff all of them lose.
fn certified_complete(g: &CooperativeGame, found: &[Coalition]) -> Result<bool, OracleError> {
    let full = Coalition::full(g.n()).0;
    let Some(ts) = minimal_transversals(found, 4096) else {
        return Ok(false);
    };
    let wins: Vec<bool> = ts
        .par_iter()
        .map(|&t| g.value(Coalition(full & !t)))
        .collect::<Result<_, _>>()?;
    Ok(!wins.into_iter().any(|w| w))
}

/// Enumerates minimal supports by increasing size, pruning supersets of supports found
/// so far, and stopping as soon as the remaining coalitions provably hold no further
/// support. `cap` bounds the support size (default: the number of players).
pub fn minimal_supports(g: &CooperativeGame, cap: Option<usize>) -> Result<SupportSet, SupportError> {
    let n = g.n();
    let cap = cap.unwrap_or(n).min(n);
    let mut found: Vec<Coalition> = Vec::new();
    let done = |found: Vec<Coalition>| SupportSet {
        players: g.players().to_vec(),
        supports: found,
    };
    if g.value(Coalition::EMPTY)? {
        return Ok(done(vec![Coalition::EMPTY]));
    }
    if !g.value(Coalition::full(n))? {
        return Ok(done(found));
    }
    for k in 1..=n {
        let candidates: Vec<u64> = layer(n, k)
            .filter(|&m| !found.iter().any(|s| s.0 & !m == 0))
            .collect();
        if candidates.is_empty() {
            // Every larger coalition is pruned too.
            return Ok(done(found));
        }
        if k > cap {
            if certified_complete(g, &found)? {
                return Ok(done(found));
            }
            return Err(SupportError::Incomplete {
                cap,
                partial: done(found),
            });
        }
        let wins: Vec<bool> = candidates
            .par_iter()
            .map(|&m| g.value(Coalition(m)))
            .collect::<Result<_, _>>()?;
        let before = found.len();
        found.extend(
            candidates
                .iter()
                .zip(wins)
                .filter(|(_, w)| *w)
                .map(|(&m, _)| Coalition(m)),
        );
        if found.len() > before && k < n && certified_complete(g, &found)? {
            return Ok(done(found));
        }
    }
    Ok(done(found))
}

/// Minimal supports of `q` over the endogenous elements of `pk`.
pub fn minimal_supports_kb(
    pk: &PartitionedKB,
    q: &BooleanQuery,
    opts: &ReasonerOptions,
    cap: Option<usize>,
) -> Result<SupportSet, SupportError> {
    minimal_supports(&CooperativeGame::from_kb(pk, q, opts)?, cap)
}

/// Whether `player` occurs in some minimal support of `g`.
pub fn is_relevant(g: &CooperativeGame, player: &Player) -> Result<bool, SupportError> {
    let Some(i) = g.index_of(player) else {
        return Ok(false);
    };
    Ok(minimal_supports(g, None)?.is_relevant(i))
}

pub fn support_size_bound(ss: &SupportSet) -> usize {
    ss.size_bound()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gosper_layers() {
        assert_eq!(layer(4, 2).count(), 6);
        assert_eq!(layer(4, 0).collect::<Vec<_>>(), vec![0]);
        assert_eq!(layer(3, 3).collect::<Vec<_>>(), vec![0b111]);
        assert_eq!(layer(64, 63).count(), 64);
    }

    #[test]
    fn transversals() {
        let t = minimal_transversals(&[Coalition(0b001), Coalition(0b110)], 10).unwrap();
        assert_eq!(t, vec![0b011, 0b101]);
        assert_eq!(minimal_transversals(&[], 10).unwrap(), vec![0]);
    }

    #[test]
    fn large_game_with_small_supports() {
        let g = CooperativeGame::from_supports(40, vec![1, 0b110]).unwrap();
        let ss = minimal_supports(&g, None).unwrap();
        assert_eq!(ss.supports, vec![Coalition(1), Coalition(0b110)]);
        assert_eq!(minimal_supports(&g, Some(2)).unwrap().len(), 2);
    }

    #[test]
    fn recovers_generating_antichain() {
        let gen = vec![0b0011, 0b1101];
        let g = CooperativeGame::from_supports(4, gen.clone()).unwrap();
        let ss = minimal_supports(&g, None).unwrap();
        assert_eq!(ss.supports, gen.into_iter().map(Coalition).collect::<Vec<_>>());
        assert_eq!(ss.size_bound(), 3);
        assert!(ss.is_relevant(3));
    }

    #[test]
    fn trivial_cases() {
        let g = CooperativeGame::from_supports(3, vec![0]).unwrap();
        let ss = minimal_supports(&g, None).unwrap();
        assert_eq!(ss.supports, vec![Coalition::EMPTY]);
        assert_eq!(ss.size_bound(), 0);
        assert!(!ss.is_relevant(0));
        let g = CooperativeGame::from_supports(3, vec![]).unwrap();
        assert!(minimal_supports(&g, None).unwrap().is_empty());
    }

    #[test]
    fn cap_reports_incomplete() {
        let g = CooperativeGame::from_supports(4, vec![0b0001, 0b1110]).unwrap();
        match minimal_supports(&g, Some(2)) {
            Err(SupportError::Incomplete { cap: 2, partial }) => {
                assert_eq!(partial.supports, vec![Coalition(1)]);
            }
            other => panic!("{other:?}"),
        }
        // A cap that still closes the frontier is fine.
        let g = CooperativeGame::from_supports(3, vec![0b011, 0b101, 0b110]).unwrap();
        assert_eq!(minimal_supports(&g, Some(2)).unwrap().len(), 3);
    }
}
