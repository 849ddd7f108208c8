//! Cooperative games over KB elements: players plus a memoized 0/1 entailment oracle.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::OnceLock;

use dashmap::DashMap;
use rayon::prelude::*;

use crate::kb::{Assertion, Axiom, BooleanQuery, PartitionedKB};
use crate::reasoner::engine::{Engine, EngineInput};
use crate::reasoner::{ReasonerOptions, Verdict};

/// Coalitions are bitmasks, so games have at most this many players.
pub const MAX_PLAYERS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Player {
    Assertion(Assertion),
    Axiom(Axiom),
    /// Synthetic player of a game not built from a KB.
    Label(String),
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Player::Assertion(a) => write!(f, "{a}"),
            Player::Axiom(a) => write!(f, "{a}"),
            Player::Label(s) => f.write_str(s),
        }
    }
}

/// A set of player indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Coalition(pub u64);

impl Coalition {
    pub const EMPTY: Coalition = Coalition(0);

    pub fn full(n: usize) -> Self {
        Coalition(if n >= 64 { u64::MAX } else { (1u64 << n) - 1 })
    }

    pub fn from_indices(idx: impl IntoIterator<Item = usize>) -> Self {
        Coalition(idx.into_iter().fold(0, |m, i| m | 1 << i))
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> Self {
        Coalition(self.0 | 1 << i)
    }

    pub fn without(self, i: usize) -> Self {
        Coalition(self.0 & !(1 << i))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: Coalition) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            (m != 0).then(|| {
                let i = m.trailing_zeros() as usize;
                m &= m - 1;
                i
            })
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("entailment undecided for coalition {coalition:#x}; raise the chase depth")]
    Unknown { coalition: u64 },
    #[error("{n} players exceed the limit of {limit}")]
    TooManyPlayers { n: usize, limit: usize },
}

pub type Oracle = Box<dyn Fn(Coalition) -> Result<bool, OracleError> + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct OracleStats {
    /// Distinct coalitions handed to the oracle.
    pub oracle_calls: u64,
    /// Lookups answered from the memo table.
    pub memo_hits: u64,
}

/// Players and a deterministic, monotone 0/1 oracle `v`. The wealth of a coalition `B` is
/// `v(B) - v(∅)`, so a game whose exogenous context already entails the goal is null.
pub struct CooperativeGame {
    players: Vec<Player>,
    oracle: Oracle,
    exo_satisfied: bool,
    memo: DashMap<u64, bool>,
    table: OnceLock<Vec<u64>>,
    calls: AtomicU64,
    hits: AtomicU64,
}

impl fmt::Debug for CooperativeGame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CooperativeGame")
            .field("players", &self.players)
            .field("exo_satisfied", &self.exo_satisfied)
            .finish_non_exhaustive()
    }
}

impl CooperativeGame {
    pub fn new(
        players: Vec<Player>,
        oracle: impl Fn(Coalition) -> Result<bool, OracleError> + Send + Sync + 'static,
    ) -> Result<Self, OracleError> {
        if players.len() > MAX_PLAYERS {
            return Err(OracleError::TooManyPlayers {
                n: players.len(),
                limit: MAX_PLAYERS,
            });
        }
        let mut g = Self {
            players,
            oracle: Box::new(oracle),
            exo_satisfied: false,
            memo: DashMap::new(),
            table: OnceLock::new(),
            calls: AtomicU64::new(0),
            hits: AtomicU64::new(0),
        };
        g.exo_satisfied = g.value(Coalition::EMPTY)?;
        Ok(g)
    }

    /// A game on `n` labelled players `p0..` whose winning coalitions are the supersets of
    /// some mask in `supports`.
    pub fn from_supports(n: usize, supports: Vec<u64>) -> Result<Self, OracleError> {
        let players = (0..n).map(|i| Player::Label(format!("p{i}"))).collect();
        Self::new(players, move |c| Ok(supports.iter().any(|&s| s & !c.0 == 0)))
    }

    /// The game of `q` over `pk`: endogenous assertions (in set order), then endogenous
    /// axioms. An undecided entailment surfaces as [`OracleError::Unknown`].
    pub fn from_kb(pk: &PartitionedKB, q: &BooleanQuery, opts: &ReasonerOptions) -> Result<Self, OracleError> {
        let n = pk.abox_endo.len() + pk.tbox_endo.len();
        if n > MAX_PLAYERS {
            return Err(OracleError::TooManyPlayers { n, limit: MAX_PLAYERS });
        }
        let n_facts = pk.abox_endo.len() as u32;
        let input = EngineInput {
            facts: pk
                .abox_endo
                .iter()
                .enumerate()
                .map(|(i, a)| (a, Some(i as u32)))
                .chain(pk.abox_exo.iter().map(|a| (a, None)))
                .collect(),
            axioms: pk
                .tbox_endo
                .iter()
                .enumerate()
                .map(|(i, a)| (a, Some(n_facts + i as u32)))
                .chain(pk.tbox_exo.iter().map(|a| (a, None)))
                .collect(),
            query: Some(q),
            depth_limit: opts.depth_limit,
            node_cap: opts.node_cap,
        };
        let engine = Engine::compile(input);
        let players = pk
            .abox_endo
            .iter()
            .cloned()
            .map(Player::Assertion)
            .chain(pk.tbox_endo.iter().cloned().map(Player::Axiom))
            .collect();
        Self::new(players, move |c| match engine.entails(c.0) {
            Verdict::Yes => Ok(true),
            Verdict::No => Ok(false),
            Verdict::Unknown => Err(OracleError::Unknown { coalition: c.0 }),
        })
    }

    pub fn players(&self) -> &[Player] {
        &self.players
    }

    pub fn n(&self) -> usize {
        self.players.len()
    }

    pub fn index_of(&self, p: &Player) -> Option<usize> {
        self.players.iter().position(|q| q == p)
    }

    /// Whether the exogenous context alone satisfies the goal (`v(∅) = 1`).
    pub fn exo_satisfied(&self) -> bool {
        self.exo_satisfied
    }

    /// Raw oracle value `v(c)`, memoized.
    pub fn value(&self, c: Coalition) -> Result<bool, OracleError> {
        if let Some(t) = self.table.get() {
            self.hits.fetch_add(1, Ordering::Relaxed);
            return Ok(t[(c.0 >> 6) as usize] >> (c.0 & 63) & 1 == 1);
        }
        if let Some(v) = self.memo.get(&c.0) {
            self.hits.fetch_add(1, Ordering::Relaxed);
            return Ok(*v);
        }
        let v = (self.oracle)(c)?;
        if self.memo.insert(c.0, v).is_none() {
            self.calls.fetch_add(1, Ordering::Relaxed);
        } else {
            self.hits.fetch_add(1, Ordering::Relaxed);
        }
        Ok(v)
    }

    /// Wealth `w(c) = v(c) - v(∅)`, which is 0 or 1 for monotone games.
    pub fn score(&self, c: Coalition) -> Result<bool, OracleError> {
        Ok(!self.exo_satisfied && self.value(c)?)
    }

    /// `w(c ∪ {p}) - w(c)` for `p ∉ c`.
    pub fn marginal(&self, c: Coalition, p: usize) -> Result<bool, OracleError> {
        Ok(self.score(c.with(p))? && !self.score(c)?)
    }

    /// Bitset of `v` over all `2^n` coalitions, computed once (in parallel) and cached.
    pub fn value_table(&self) -> Result<&[u64], OracleError> {
        if let Some(t) = self.table.get() {
            return Ok(t);
        }
        let n = self.n();
        let total = 1u64 << n;
        let words = total.div_ceil(64) as usize;
        let table: Vec<u64> = (0..words)
            .into_par_iter()
            .map(|w| {
                let mut bits = 0u64;
                for b in 0..64u64.min(total) {
                    let c = Coalition((w as u64) << 6 | b);
                    let v = match self.memo.get(&c.0) {
                        Some(v) => *v,
                        None => {
                            self.calls.fetch_add(1, Ordering::Relaxed);
                            (self.oracle)(c)?
                        }
                    };
                    bits |= (v as u64) << b;
                }
                Ok(bits)
            })
            .collect::<Result<_, OracleError>>()?;
        self.memo.clear();
        Ok(self.table.get_or_init(|| table))
    }

    pub fn stats(&self) -> OracleStats {
        OracleStats {
            oracle_calls: self.calls.load(Ordering::Relaxed),
            memo_hits: self.hits.load(Ordering::Relaxed),
        }
    }
}
