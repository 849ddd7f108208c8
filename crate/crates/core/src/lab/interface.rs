//! Path fixtures inside minimal supports, interface classification, splittability, and the
//! bipartite-graph encoding used to count independent sets through Shapley values.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::graph::{BipartiteGraph, Side};
use super::LabError;
use crate::game::{Coalition, CooperativeGame};
use crate::kb::{
    apply_homomorphism, normalize_assertion, ABox, Assertion, Axiom, BooleanQuery, Cq, Dialect, Individual,
    Mapping, PartitionedKB, Role,
};
use crate::linalg::{as_nonneg_integer, solve_linear_exact, LinearSystem};
use crate::reasoner::{entails, ReasonerOptions, Verdict};
use crate::shapley::shapley_via_supports;
use crate::supports::minimal_supports;
use crate::Rational;

/// A minimal support `A°` of the OMQ `(tbox, query)` with a designated path
/// `a_0 - a_1 - … - a_k` of role assertions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathFixture {
    pub dialect: Dialect,
    pub abox: ABox,
    pub tbox: Vec<Axiom>,
    pub query: BooleanQuery,
    pub path: Vec<Individual>,
    /// `roles[i - 1]` is `R_i`, oriented from `a_{i-1}` to `a_i`.
    roles: Vec<Role>,
}

fn role_fact(r: &Role, s: &Individual, o: &Individual) -> Assertion {
    normalize_assertion(Assertion::Role {
        role: r.clone(),
        subject: s.clone(),
        object: o.clone(),
    })
}

fn touches(a: &Assertion, i: &Individual) -> bool {
    a.individuals().any(|j| j == i)
}

impl PathFixture {
    /// Validates the path: distinct individuals avoiding the query constants, consecutive
    /// ones linked by exactly one role assertion, and no second route from `a_0` to `a_k`
    /// (every path assertion is a bridge of `A°`).
    pub fn new(
        abox: ABox,
        tbox: Vec<Axiom>,
        query: BooleanQuery,
        path: Vec<Individual>,
    ) -> Result<Self, LabError> {
        let bad = |m: String| Err(LabError::Fixture(m));
        let BooleanQuery::Ucq(ds) = &query else {
            return bad("the query must be a UCQ".into());
        };
        if path.len() < 2 {
            return bad("a path needs at least one assertion".into());
        }
        if path.iter().collect::<BTreeSet<_>>().len() != path.len() {
            return bad("path individuals must be pairwise distinct".into());
        }
        let constants: BTreeSet<Individual> = ds.iter().flat_map(Cq::constants).collect();
        if let Some(c) = path.iter().find(|a| constants.contains(*a)) {
            return bad(format!("path individual {c} is a query constant"));
        }
        let mut roles = Vec::new();
        for w in path.windows(2) {
            let links: Vec<Role> = abox
                .iter()
                .filter_map(|a| match a {
                    Assertion::Role { role, subject, object } if subject == &w[0] && object == &w[1] => {
                        Some(role.clone())
                    }
                    Assertion::Role { role, subject, object } if subject == &w[1] && object == &w[0] => {
                        Some(role.inv())
                    }
                    _ => None,
                })
                .collect();
            if links.len() != 1 {
                return bad(format!("{} assertions link {} and {}", links.len(), w[0], w[1]));
            }
            roles.push(links.into_iter().next().unwrap());
        }
        let f = Self {
            dialect: Dialect::ElhiBot,
            abox,
            tbox,
            query,
            path,
            roles,
        };
        for i in 1..=f.k() {
            let mut rest = f.abox.clone();
            rest.remove(&f.edge(i));
            let (u, v) = (&f.path[i - 1], &f.path[i]);
            if rest.connected_components().iter().any(|c| c.iter().any(|a| touches(a, u)) && c.iter().any(|a| touches(a, v))) {
                return bad(format!("the path is not the only route between {} and {}", f.path[0], f.path[f.k()]));
            }
        }
        Ok(f)
    }

    /// Reads a fixture: a `path a0 a1 ... ak.` line, `q :- ...` query lines, and `.kbq`
    /// blocks for the ABox (endo and exo blocks are merged) and TBox.
    pub fn parse(src: &str) -> Result<Self, LabError> {
        let mut path = None;
        let (mut query, mut kb) = (String::new(), String::new());
        // Both buffers keep one line per source line so parse errors point at the file.
        for (ln, line) in src.lines().enumerate() {
            let code = line.split('#').next().unwrap_or("").trim();
            if let Some(rest) = code.strip_prefix("path ") {
                let names = rest.trim_end_matches('.').split_whitespace().map(Individual::new).collect();
                if path.replace(names).is_some() {
                    return Err(LabError::Format { line: ln + 1, msg: "duplicate `path` line".into() });
                }
            } else if code.starts_with("q ") || code.starts_with("q:") {
                query.push_str(line);
            } else {
                kb.push_str(line);
            }
            query.push('\n');
            kb.push('\n');
        }
        let path = path.ok_or(LabError::Format { line: 0, msg: "missing `path` line".into() })?;
        let doc = crate::text::parse_kb(&kb)?;
        let abox = doc.abox_endo.union(&doc.abox_exo);
        let tbox = doc.tbox_endo.union(&doc.tbox_exo).cloned().collect();
        let mut f = Self::new(abox, tbox, crate::text::parse_query(&query)?, path)?;
        f.dialect = doc.dialect;
        Ok(f)
    }

    /// Number of path assertions.
    pub fn k(&self) -> usize {
        self.path.len() - 1
    }

    pub fn role(&self, i: usize) -> &Role {
        &self.roles[i - 1]
    }

    /// `R_i(a_{i-1}, a_i)`, for `1 ≤ i ≤ k`.
    pub fn edge(&self, i: usize) -> Assertion {
        role_fact(self.role(i), &self.path[i - 1], &self.path[i])
    }

    pub fn partitioned(&self, endo: ABox, exo: ABox) -> PartitionedKB {
        PartitionedKB {
            dialect: self.dialect,
            abox_endo: endo,
            abox_exo: exo,
            tbox_endo: BTreeSet::new(),
            tbox_exo: self.tbox.iter().cloned().collect(),
        }
    }

    /// Whether `A°` entails the query and no proper subset does.
    pub fn is_minimal_support(&self, opts: &ReasonerOptions) -> Result<bool, LabError> {
        let yes = |a: &ABox| match entails(a, &self.tbox, &self.query, opts) {
            Verdict::Yes => Ok(true),
            Verdict::No => Ok(false),
            Verdict::Unknown => Err(LabError::Oracle(crate::game::OracleError::Unknown { coalition: 0 })),
        };
        if !yes(&self.abox)? {
            return Ok(false);
        }
        for a in self.abox.iter() {
            let mut rest = self.abox.clone();
            rest.remove(a);
            if yes(&rest)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Assertions below, left of and right of a path individual.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub below: ABox,
    pub left: ABox,
    pub right: ABox,
}

/// Splits `A°` around `a_χ` (`0 < χ < k`): with `R_χ` and `R_{χ+1}` removed, the
/// components of `a_χ`, `a_{χ-1}` and `a_{χ+1}`; `R_χ` counts as left and `R_{χ+1}` as
/// right.
pub fn classify_interface(f: &PathFixture, chi: usize) -> Result<Classification, LabError> {
    if chi == 0 || chi >= f.k() {
        return Err(LabError::Parameter(format!("a_{chi} is not an internal path individual")));
    }
    let (e_left, e_right) = (f.edge(chi), f.edge(chi + 1));
    let mut rest = f.abox.clone();
    rest.remove(&e_left);
    rest.remove(&e_right);
    let comps = rest.connected_components();
    let comp = |i: &Individual| {
        comps
            .iter()
            .find(|c| c.iter().any(|a| touches(a, i)))
            .cloned()
            .unwrap_or_default()
    };
    let below = comp(&f.path[chi]);
    let mut left = comp(&f.path[chi - 1]);
    let mut right = comp(&f.path[chi + 1]);
    left.insert(e_left);
    right.insert(e_right);
    Ok(Classification { below, left, right })
}

fn check_interface(f: &PathFixture, chi: usize) -> Result<(), LabError> {
    if chi == 0 || chi + 1 >= f.k() {
        return Err(LabError::Parameter(format!(
            "interface (a_{chi}, a_{}) touches a path endpoint",
            chi + 1
        )));
    }
    Ok(())
}

/// Whether the interface `(a_χ, a_{χ+1})` is splittable: for some disjunct and two sets
/// of its connected components jointly covering it, there are minimal supports inside
/// `A°` for the two conjunctions, the first containing everything left of `a_χ` and
/// nothing right of `a_{χ+1}`, the second (connected) the other way around.
pub fn is_splittable(f: &PathFixture, chi: usize, opts: &ReasonerOptions) -> Result<bool, LabError> {
    check_interface(f, chi)?;
    let left = classify_interface(f, chi)?.left;
    let right = classify_interface(f, chi + 1)?.right;
    let BooleanQuery::Ucq(ds) = &f.query else { unreachable!("checked by PathFixture::new") };
    for d in ds {
        let comps = d.components();
        let full = (1u64 << comps.len()) - 1;
        let mut left_ok = vec![false; full as usize + 1];
        let mut right_ok = vec![false; full as usize + 1];
        for j in 1..=full {
            let part = Cq::conjoin(comps.iter().enumerate().filter(|(i, _)| j >> i & 1 == 1).map(|(_, c)| c));
            let pk = f.partitioned(f.abox.clone(), ABox::new());
            let game = CooperativeGame::from_kb(&pk, &BooleanQuery::Ucq(vec![part]), opts)?;
            for s in minimal_supports(&game, None)?.aboxes() {
                let has_all = |side: &ABox| side.iter().all(|a| s.contains(a));
                let has_none = |side: &ABox| !side.iter().any(|a| s.contains(a));
                left_ok[j as usize] |= has_all(&left) && has_none(&right);
                right_ok[j as usize] |= has_all(&right) && has_none(&left) && s.is_connected();
            }
        }
        for jl in 1..=full {
            for jr in 1..=full {
                if jl | jr == full && left_ok[jl as usize] && right_ok[jr as usize] {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}

/// Indices `χ` of the splittable interfaces `(a_χ, a_{χ+1})`.
pub fn splittable_interfaces(f: &PathFixture, opts: &ReasonerOptions) -> Result<Vec<usize>, LabError> {
    let mut out = Vec::new();
    for chi in 1..f.k().saturating_sub(1) {
        if is_splittable(f, chi, opts)? {
            out.push(chi);
        }
    }
    Ok(out)
}

/// The smallest-index unsplittable interface, if any.
pub fn first_unsplittable(f: &PathFixture, opts: &ReasonerOptions) -> Result<Option<usize>, LabError> {
    for chi in 1..f.k().saturating_sub(1) {
        if !is_splittable(f, chi, opts)? {
            return Ok(Some(chi));
        }
    }
    Ok(None)
}

/// The partitioned ABox encoding a bipartite graph at an interface, with the maps back.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteEncoding {
    pub kb: PartitionedKB,
    /// Sends every fresh individual back to the individual it copies.
    pub rho: Mapping,
    /// The vertex each endogenous assertion stands for.
    pub eta: BTreeMap<Assertion, Side>,
}

impl BipartiteEncoding {
    pub fn collapse(&self) -> Result<ABox, LabError> {
        Ok(apply_homomorphism(&self.kb.abox(), &self.rho)?)
    }
}

fn rename(a: &Assertion, map: &BTreeMap<Individual, Individual>) -> Assertion {
    let h = |i: &Individual| map.get(i).cloned().unwrap_or_else(|| i.clone());
    match a {
        Assertion::Concept { concept, individual } => Assertion::Concept {
            concept: concept.clone(),
            individual: h(individual),
        },
        Assertion::Role { role, subject, object } => Assertion::Role {
            role: role.clone(),
            subject: h(subject),
            object: h(object),
        },
    }
}

/// Replaces `a_χ` by copies `b_x` (`x ∈ X`) and `a_{χ+1}` by copies `c_y` (`y ∈ Y`), each
/// with its own copy of the assertions below it, and links them by
/// `R_χ(a_{χ-1}, b_x)`, `R_{χ+1}(b_x, c_y)` for `(x, y) ∈ E` and `R_{χ+2}(c_y, a_{χ+2})`.
/// The first and last families are endogenous; everything else is exogenous. A copy of
/// individual `i` for vertex `v` is named `i~v`.
pub fn bipartite_encoding(f: &PathFixture, chi: usize, g: &BipartiteGraph) -> Result<BipartiteEncoding, LabError> {
    check_interface(f, chi)?;
    let below_b = classify_interface(f, chi)?.below;
    let below_c = classify_interface(f, chi + 1)?.below;
    let (a_prev, a_b, a_c, a_next) = (&f.path[chi - 1], &f.path[chi], &f.path[chi + 1], &f.path[chi + 2]);
    let taken = f.abox.individuals();
    let mut fresh: BTreeSet<Individual> = BTreeSet::new();
    let mut rho = Mapping::new();
    let mut copy = |orig: &BTreeSet<Individual>, v: &str| -> Result<BTreeMap<Individual, Individual>, LabError> {
        let mut m = BTreeMap::new();
        for i in orig {
            let name = Individual::new(format!("{i}~{v}"));
            if taken.contains(&name) || !fresh.insert(name.clone()) {
                return Err(LabError::Fixture(format!("copy name {name} is not fresh")));
            }
            rho.insert(name.clone(), i.clone());
            m.insert(i.clone(), name);
        }
        Ok(m)
    };
    let inds = |root: &Individual, below: &ABox| {
        let mut s = below.individuals();
        s.insert(root.clone());
        s
    };
    let (inds_b, inds_c) = (inds(a_b, &below_b), inds(a_c, &below_c));

    let removed: BTreeSet<Assertion> = [f.edge(chi), f.edge(chi + 1), f.edge(chi + 2)]
        .into_iter()
        .chain(below_b.iter().cloned())
        .chain(below_c.iter().cloned())
        .collect();
    let mut exo: ABox = f.abox.iter().filter(|a| !removed.contains(a)).cloned().collect();
    let mut endo = ABox::new();
    let mut eta = BTreeMap::new();
    let mut b = Vec::new();
    for (ix, x) in g.x.iter().enumerate() {
        let m = copy(&inds_b, x)?;
        exo.extend(below_b.iter().map(|a| rename(a, &m)));
        let bx = m[a_b].clone();
        let fact = role_fact(f.role(chi), a_prev, &bx);
        eta.insert(fact.clone(), Side::X(ix));
        endo.insert(fact);
        b.push(bx);
    }
    let mut c = Vec::new();
    for (iy, y) in g.y.iter().enumerate() {
        let m = copy(&inds_c, y)?;
        exo.extend(below_c.iter().map(|a| rename(a, &m)));
        let cy = m[a_c].clone();
        let fact = role_fact(f.role(chi + 2), &cy, a_next);
        eta.insert(fact.clone(), Side::Y(iy));
        endo.insert(fact);
        c.push(cy);
    }
    for &(x, y) in &g.edges {
        exo.insert(role_fact(f.role(chi + 1), &b[x], &c[y]));
    }
    for i in f.abox.individuals() {
        rho.entry(i.clone()).or_insert(i);
    }
    Ok(BipartiteEncoding {
        kb: f.partitioned(endo, exo),
        rho,
        eta,
    })
}

/// Checks, for every coalition `X` of endogenous assertions, that `X ∪ exo ⊨ Q` iff
/// `η(X)` is not independent in `g`.
pub fn verify_coalition_bijection(
    f: &PathFixture,
    enc: &BipartiteEncoding,
    g: &BipartiteGraph,
    opts: &ReasonerOptions,
) -> Result<bool, LabError> {
    let n = enc.eta.len();
    if n > 12 {
        return Err(LabError::TooLarge { what: "vertices", n, limit: 12 });
    }
    let game = CooperativeGame::from_kb(&enc.kb, &f.query, opts)?;
    let nx = g.x.len();
    let bit: Vec<usize> = game
        .players()
        .iter()
        .map(|p| match p {
            crate::game::Player::Assertion(a) => match enc.eta[a] {
                Side::X(i) => i,
                Side::Y(j) => nx + j,
            },
            _ => unreachable!("encodings have no axiom players"),
        })
        .collect();
    (0..1u64 << n).into_par_iter().try_fold(
        || true,
        |ok, m| {
            let vm = Coalition(m).indices().fold(0u64, |acc, p| acc | 1 << bit[p]);
            Ok::<_, LabError>(ok && game.value(Coalition(m))? == !g.is_independent(vm))
        },
    )
    .try_reduce(|| true, |a, b| Ok(a && b))
}

/// Intermediate quantities of [`count_independent_sets_via_shapley`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsCount {
    pub total: BigInt,
    /// `IS(G, j)` for `j = 0..=|V|`.
    pub by_size: Vec<BigInt>,
    /// Value of `μ`'s endogenous assertion in the encodings of `G_0..G_{|V|+1}`.
    pub shapley: Vec<Rational>,
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * k)
}

fn fresh_name(used: &BTreeSet<String>, base: &str) -> String {
    let mut s = base.to_string();
    while used.contains(&s) {
        s.push('_');
    }
    s
}

/// `G_0` adds a vertex `μ` to `X` adjacent to all of `Y`; `G_i` (`i ≥ 1`) adds `μ` and
/// `i` fresh `Y` vertices adjacent to `μ` only.
pub fn graph_variant(g: &BipartiteGraph, i: usize) -> BipartiteGraph {
    let used: BTreeSet<String> = g.x.iter().chain(&g.y).cloned().collect();
    let mu = fresh_name(&used, "mu");
    let mut x = g.x.clone();
    x.push(mu);
    let mut y = g.y.clone();
    let mut edges = g.edges.clone();
    let m = g.x.len();
    if i == 0 {
        edges.extend((0..g.y.len()).map(|j| (m, j)));
    } else {
        for k in 1..=i {
            let mut used: BTreeSet<String> = x.iter().chain(&y).cloned().collect();
            let name = fresh_name(&used, &format!("nu{k}"));
            used.insert(name.clone());
            edges.insert((m, y.len()));
            y.push(name);
        }
    }
    BipartiteGraph::new(x, y, edges).expect("fresh names keep parts disjoint")
}

/// Value of `μ` (the last `X` vertex) in the game encoding `g` at interface `χ`, computed
/// from the minimal supports of the encoded game.
fn mu_value(f: &PathFixture, chi: usize, g: &BipartiteGraph, opts: &ReasonerOptions) -> Result<Rational, LabError> {
    let enc = bipartite_encoding(f, chi, g)?;
    let game = CooperativeGame::from_kb(&enc.kb, &f.query, opts)?;
    let mu = Side::X(g.x.len() - 1);
    let fact = enc.eta.iter().find(|(_, &v)| v == mu).map(|(a, _)| a.clone()).expect("μ is encoded");
    let p = game.index_of(&crate::game::Player::Assertion(fact)).expect("μ is a player");
    let ss = minimal_supports(&game, None)?;
    Ok(shapley_via_supports::<Rational>(&ss, p)?)
}

/// Counts the independent sets of `g` from Shapley values of `μ` in the encodings of
/// the variants `G_0..G_{|V|+1}`.
///
/// With `n = |V|`: `P_0^1 = (n+1)!/(|Y|+1)`, `P_0^2 = (1 - Sh_0)(n+1)! - P_0^1`,
/// `m_i = C(n+i+1, i)·i!`, and for `i = 1..=n+1` the rows
/// `Σ_{j=0}^{n} j!(n+i-j)!·IS(G, j) = (n+i+1)!(1 - Sh_i) - m_i·P_0^2`.
pub fn count_independent_sets_via_shapley(
    f: &PathFixture,
    chi: usize,
    g: &BipartiteGraph,
    opts: &ReasonerOptions,
) -> Result<IsCount, LabError> {
    let n = g.vertex_count();
    if n > 8 {
        return Err(LabError::TooLarge { what: "vertices", n, limit: 8 });
    }
    check_interface(f, chi)?;
    let shapley: Vec<Rational> = (0..=n + 1)
        .into_par_iter()
        .map(|i| mu_value(f, chi, &graph_variant(g, i), opts))
        .collect::<Result<_, _>>()?;
    let fr = |k: usize| Rational::from_integer(factorial(k));
    let one = Rational::one();
    let p01 = fr(n + 1) / Rational::from_integer(BigInt::from(g.y.len() + 1));
    let p02 = (&one - &shapley[0]) * fr(n + 1) - &p01;
    let matrix = (1..=n + 1)
        .map(|i| (0..=n).map(|j| fr(j) * fr(n + i - j)).collect())
        .collect();
    let rhs = (1..=n + 1)
        .map(|i| {
            let m_i = fr(n + i + 1) / fr(n + 1);
            fr(n + i + 1) * (&one - &shapley[i]) - m_i * &p02
        })
        .collect();
    let x = solve_linear_exact(&LinearSystem::new(matrix, rhs))?;
    let by_size = x
        .iter()
        .enumerate()
        .map(|(j, v)| {
            as_nonneg_integer(v).ok_or_else(|| LabError::NonInteger {
                what: format!("IS(G,{j})"),
                value: v.clone(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(IsCount {
        total: by_size.iter().fold(BigInt::zero(), |a, b| a + b),
        by_size,
        shapley,
    })
}

/// The three-edge path `r1(a0,a1), r2(a1,a2), r3(a2,a3)` with the matching path CQ and
/// an empty TBox; its only interface is `(a1, a2)`.
pub fn restricted_fixture() -> PathFixture {
    use crate::kb::{Atom, Term};
    let abox: ABox = [
        Assertion::role("r1", "a0", "a1"),
        Assertion::role("r2", "a1", "a2"),
        Assertion::role("r3", "a2", "a3"),
    ]
    .into_iter()
    .collect();
    let q = BooleanQuery::cq([
        Atom::role("r1", Term::var("x0"), Term::var("x1")),
        Atom::role("r2", Term::var("x1"), Term::var("x2")),
        Atom::role("r3", Term::var("x2"), Term::var("x3")),
    ]);
    let path = ["a0", "a1", "a2", "a3"].into_iter().map(Individual::new).collect();
    PathFixture::new(abox, Vec::new(), q, path).expect("valid fixture")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kb::{Atom, Term};

    fn path_cq(atoms: &[(&str, &str, &str)]) -> Cq {
        Cq::new(atoms.iter().map(|(r, a, b)| Atom::role(*r, Term::var(a), Term::var(b))))
    }

    fn inds(names: &[&str]) -> Vec<Individual> {
        names.iter().map(Individual::new).collect()
    }

    fn brute_is(g: &BipartiteGraph) -> u64 {
        (0..1u64 << g.vertex_count()).filter(|&m| g.is_independent(m)).count() as u64
    }

    #[test]
    fn restricted_fixture_is_unsplittable() {
        let f = restricted_fixture();
        let opts = ReasonerOptions::default();
        assert!(f.is_minimal_support(&opts).unwrap());
        let c = classify_interface(&f, 1).unwrap();
        assert!(c.below.is_empty());
        assert_eq!(c.left.iter().cloned().collect::<Vec<_>>(), vec![Assertion::role("r1", "a0", "a1")]);
        assert_eq!(c.right.len(), 2);
        assert_eq!(first_unsplittable(&f, &opts).unwrap(), Some(1));
    }

    #[test]
    fn overlapping_components_split() {
        let abox: ABox = [
            Assertion::role("r1", "a0", "a1"),
            Assertion::role("r2", "a1", "a2"),
            Assertion::role("r3", "a2", "a3"),
        ]
        .into_iter()
        .collect();
        let q = BooleanQuery::Ucq(vec![Cq::conjoin(&[
            path_cq(&[("r1", "x0", "x1"), ("r2", "x1", "x2")]),
            path_cq(&[("r2", "y1", "y2"), ("r3", "y2", "y3")]),
        ])]);
        let f = PathFixture::new(abox, vec![], q, inds(&["a0", "a1", "a2", "a3"])).unwrap();
        let opts = ReasonerOptions::default();
        assert!(f.is_minimal_support(&opts).unwrap());
        assert!(is_splittable(&f, 1, &opts).unwrap());
        assert_eq!(first_unsplittable(&f, &opts).unwrap(), None);
    }

    #[test]
    fn rejects_bad_paths() {
        let tri: ABox = [
            Assertion::role("r", "a", "b"),
            Assertion::role("r", "b", "c"),
            Assertion::role("r", "c", "a"),
        ]
        .into_iter()
        .collect();
        let q = BooleanQuery::Ucq(vec![path_cq(&[("r", "x", "y")])]);
        assert!(PathFixture::new(tri.clone(), vec![], q.clone(), inds(&["a", "b", "c"])).is_err());
        assert!(PathFixture::new(tri.clone(), vec![], q.clone(), inds(&["a", "b", "a"])).is_err());
        assert!(PathFixture::new(tri, vec![], q, inds(&["a"])).is_err());
        let f = restricted_fixture();
        assert!(classify_interface(&f, 0).is_err());
        assert!(bipartite_encoding(&f, 2, &BipartiteGraph::numbered(1, 1, [(0, 0)])).is_err());
    }

    #[test]
    fn below_sets_are_copied() {
        // a1 carries a side branch a1 -s-> d with A(d); the query needs it.
        let abox: ABox = [
            Assertion::role("r1", "a0", "a1"),
            Assertion::role("r2", "a2", "a1"),
            Assertion::role("r3", "a2", "a3"),
            Assertion::role("s", "a1", "d"),
            Assertion::concept("A", "d"),
        ]
        .into_iter()
        .collect();
        let mut q = path_cq(&[("r1", "x0", "x1"), ("r3", "x2", "x3"), ("s", "x1", "z")]);
        q = Cq::conjoin(&[q, Cq::new([Atom::role("r2", Term::var("x2"), Term::var("x1")), Atom::concept("A", Term::var("z"))])]);
        let f = PathFixture::new(abox, vec![], BooleanQuery::Ucq(vec![q]), inds(&["a0", "a1", "a2", "a3"])).unwrap();
        let opts = ReasonerOptions::default();
        assert!(f.is_minimal_support(&opts).unwrap());
        assert_eq!(classify_interface(&f, 1).unwrap().below.len(), 2);
        let g = BipartiteGraph::numbered(2, 2, [(0, 0), (1, 1), (1, 0)]);
        let enc = bipartite_encoding(&f, 1, &g).unwrap();
        assert_eq!(enc.kb.abox_endo.len(), 4);
        assert_eq!(enc.kb.abox_exo.len(), 3 + 2 * 2);
        assert_eq!(enc.collapse().unwrap(), f.abox);
        assert!(verify_coalition_bijection(&f, &enc, &g, &opts).unwrap());
        let c = count_independent_sets_via_shapley(&f, 1, &g, &opts).unwrap();
        assert_eq!(c.total, BigInt::from(brute_is(&g)));
    }

    #[test]
    fn bijection_and_counts_on_small_graphs() {
        let f = restricted_fixture();
        let opts = ReasonerOptions::default();
        for g in BipartiteGraph::all_up_to(3) {
            let enc = bipartite_encoding(&f, 1, &g).unwrap();
            assert!(verify_coalition_bijection(&f, &enc, &g, &opts).unwrap(), "{g}");
            if !g.edges.is_empty() {
                assert_eq!(enc.collapse().unwrap(), f.abox);
            }
            let c = count_independent_sets_via_shapley(&f, 1, &g, &opts).unwrap();
            assert_eq!(c.total, BigInt::from(brute_is(&g)), "{g}");
            let (total, by_size) = g.count_independent_sets().unwrap();
            assert_eq!(c.total, BigInt::from(total));
            assert_eq!(c.by_size, by_size.into_iter().map(BigInt::from).collect::<Vec<_>>());
        }
    }

    #[test]
    fn parses_the_corpus_fixture() {
        let f = PathFixture::parse(include_str!("../../corpus/restricted.fixture")).unwrap();
        assert_eq!(f, restricted_fixture());
        assert!(PathFixture::parse("abox exo { r(a,b). }\nq :- r(?x,?y).").is_err());
    }

    #[test]
    fn variants() {
        let g = BipartiteGraph::numbered(1, 1, [(0, 0)]);
        let g0 = graph_variant(&g, 0);
        assert_eq!((g0.x.len(), g0.y.len(), g0.edges.len()), (2, 1, 2));
        let g2 = graph_variant(&g, 2);
        assert_eq!((g2.x.len(), g2.y.len(), g2.edges.len()), (2, 3, 3));
    }
}
