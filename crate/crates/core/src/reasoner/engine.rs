//! Interned chase engine. One engine is compiled per (KB, query) and then evaluated on
//! many coalitions: every fact and rule carries an optional owner bit, and only rules and
//! facts whose owner is in the coalition mask take part.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::kb::{
    ABox, Assertion, Atom, Axiom, BooleanQuery, Concept, ConceptName, Cq, Individual, Role,
    RoleName, Term,
};

use super::normalize::{normalize_tbox, Basic, NormalRule, NormalizedTBox};
use super::{Consistency, Verdict};

pub(crate) const TOP: u32 = 0;
const NONE: u32 = u32::MAX;

/// Role name index with an inversion bit in the lowest position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) struct IRole(u32);

impl IRole {
    fn new(name: u32, inv: bool) -> Self {
        IRole(name * 2 + inv as u32)
    }
    pub(crate) fn name(self) -> u32 {
        self.0 / 2
    }
    pub(crate) fn inv(self) -> bool {
        self.0 % 2 == 1
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) enum IRule {
    Conj(u32, u32, u32),
    Sub(u32, u32),
    ExLhs(IRole, u32, u32),
    ExRhs(u32, IRole, u32),
    Bot(u32),
    RoleSub(IRole, IRole),
    RoleDisj(IRole, IRole),
}

#[derive(Debug, Clone, Copy)]
pub(crate) enum IFact {
    Concept(u32, u32),
    Role(u32, u32, u32),
    /// Puts an individual in the domain without any label (realizes `⊤`).
    Present(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum ITerm {
    Var(u32),
    Const(u32),
}

#[derive(Debug, Clone, Copy)]
pub(crate) enum IAtom {
    Concept(u32, ITerm),
    Role(u32, ITerm, ITerm),
}

#[derive(Debug, Clone)]
pub(crate) struct ICq {
    pub atoms: Vec<IAtom>,
    pub nvars: usize,
}

#[derive(Debug, Clone)]
pub(crate) enum Goal {
    Ucq(Vec<ICq>),
    Reach { role: u32, source: u32, target: u32 },
    Inconsistent,
    True,
    False,
}

#[derive(Debug, Default, Clone)]
pub(crate) struct Signature {
    pub concepts: Vec<ConceptName>,
    concept_ix: HashMap<ConceptName, u32>,
    pub roles: Vec<RoleName>,
    role_ix: HashMap<RoleName, u32>,
    pub individuals: Vec<Individual>,
    ind_ix: HashMap<Individual, u32>,
}

impl Signature {
    fn new() -> Self {
        let mut s = Signature::default();
        s.concepts.push(ConceptName::new("top"));
        s
    }

    fn concept(&mut self, c: &ConceptName) -> u32 {
        if let Some(&i) = self.concept_ix.get(c) {
            return i;
        }
        let i = self.concepts.len() as u32;
        self.concepts.push(c.clone());
        self.concept_ix.insert(c.clone(), i);
        i
    }

    fn basic(&mut self, b: &Basic) -> u32 {
        match b {
            Basic::Top => TOP,
            Basic::Name(n) => self.concept(n),
        }
    }

    fn role_name(&mut self, r: &RoleName) -> u32 {
        if let Some(&i) = self.role_ix.get(r) {
            return i;
        }
        let i = self.roles.len() as u32;
        self.roles.push(r.clone());
        self.role_ix.insert(r.clone(), i);
        i
    }

    fn role(&mut self, r: &Role) -> IRole {
        IRole::new(self.role_name(&r.name), r.inverted)
    }

    fn individual(&mut self, i: &Individual) -> u32 {
        if let Some(&k) = self.ind_ix.get(i) {
            return k;
        }
        let k = self.individuals.len() as u32;
        self.individuals.push(i.clone());
        self.ind_ix.insert(i.clone(), k);
        k
    }

    pub(crate) fn concept_index(&self, c: &ConceptName) -> Option<u32> {
        self.concept_ix.get(c).copied()
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Structure {
    pub n_named: usize,
    pub present: Vec<bool>,
    pub depth: Vec<u32>,
    pub parent: Vec<u32>,
    w: usize,
    labels: Vec<u64>,
    pub out: Vec<Vec<(u32, u32)>>,
    pub inn: Vec<Vec<(u32, u32)>>,
    edges: HashSet<(u32, u32, u32)>,
    pub inconsistent: bool,
    pub saturated: bool,
    pub capped: bool,
}

impl Structure {
    fn new(n_named: usize, n_concepts: usize) -> Self {
        let w = n_concepts.div_ceil(64).max(1);
        Structure {
            n_named,
            present: vec![false; n_named],
            depth: vec![0; n_named],
            parent: vec![NONE; n_named],
            w,
            labels: vec![0; n_named * w],
            out: vec![Vec::new(); n_named],
            inn: vec![Vec::new(); n_named],
            edges: HashSet::new(),
            inconsistent: false,
            saturated: true,
            capped: false,
        }
    }

    pub fn len(&self) -> usize {
        self.present.len()
    }

    #[inline]
    pub fn has(&self, e: u32, c: u32) -> bool {
        self.labels[e as usize * self.w + (c as usize >> 6)] >> (c & 63) & 1 == 1
    }

    #[inline]
    fn set(&mut self, e: u32, c: u32) -> bool {
        let slot = &mut self.labels[e as usize * self.w + (c as usize >> 6)];
        let bit = 1u64 << (c & 63);
        let fresh = *slot & bit == 0;
        *slot |= bit;
        fresh
    }

    pub fn has_edge(&self, x: u32, name: u32, y: u32) -> bool {
        self.edges.contains(&(x, name, y))
    }

    pub fn edge_list(&self) -> impl Iterator<Item = &(u32, u32, u32)> {
        self.edges.iter()
    }

    fn push_element(&mut self, depth: u32, parent: u32) -> u32 {
        let e = self.present.len() as u32;
        self.present.push(true);
        self.depth.push(depth);
        self.parent.push(parent);
        self.labels.extend(std::iter::repeat_n(0, self.w));
        self.out.push(Vec::new());
        self.inn.push(Vec::new());
        e
    }

    /// Elements `u` with `R(u, e)`.
    fn role_preds(&self, r: IRole, e: u32) -> impl Iterator<Item = u32> + '_ {
        let list = if r.inv() { &self.out[e as usize] } else { &self.inn[e as usize] };
        list.iter().filter(move |(n, _)| *n == r.name()).map(|&(_, u)| u)
    }

    /// Elements `f` with `R(e, f)`.
    pub fn role_succs(&self, r: IRole, e: u32) -> impl Iterator<Item = u32> + '_ {
        let list = if r.inv() { &self.inn[e as usize] } else { &self.out[e as usize] };
        list.iter().filter(move |(n, _)| *n == r.name()).map(|&(_, f)| f)
    }

    pub fn labels_of(&self, e: u32) -> impl Iterator<Item = u32> + '_ {
        let base = e as usize * self.w;
        (0..self.w * 64)
            .map(|c| c as u32)
            .filter(move |&c| self.labels[base + (c as usize >> 6)] >> (c & 63) & 1 == 1)
    }
}

enum Event {
    Label(u32, u32),
    Edge(u32, u32, u32),
}

struct Run<'a> {
    eng: &'a Engine,
    mask: u64,
    s: Structure,
    queue: VecDeque<Event>,
    dirty: Vec<u32>,
    is_dirty: Vec<bool>,
}

impl Run<'_> {
    #[inline]
    fn active(&self, owner: u32) -> bool {
        owner == NONE || self.mask >> owner & 1 == 1
    }

    fn mark(&mut self, e: u32) {
        if self.is_dirty.len() <= e as usize {
            self.is_dirty.resize(e as usize + 1, false);
        }
        if !self.is_dirty[e as usize] {
            self.is_dirty[e as usize] = true;
            self.dirty.push(e);
        }
    }

    fn add_label(&mut self, e: u32, c: u32) {
        if self.s.set(e, c) {
            self.queue.push_back(Event::Label(e, c));
            self.mark(e);
        }
    }

    fn make_present(&mut self, e: u32) {
        if !self.s.present[e as usize] {
            self.s.present[e as usize] = true;
            self.add_label(e, TOP);
        }
    }

    fn add_edge(&mut self, x: u32, name: u32, y: u32) {
        if self.s.edges.insert((x, name, y)) {
            self.s.out[x as usize].push((name, y));
            self.s.inn[y as usize].push((name, x));
            self.queue.push_back(Event::Edge(x, name, y));
        }
    }

    fn add_pair(&mut self, r: IRole, u: u32, v: u32) {
        if r.inv() {
            self.add_edge(v, r.name(), u)
        } else {
            self.add_edge(u, r.name(), v)
        }
    }

    fn has_pair(&self, r: IRole, u: u32, v: u32) -> bool {
        if r.inv() {
            self.s.has_edge(v, r.name(), u)
        } else {
            self.s.has_edge(u, r.name(), v)
        }
    }

    fn propagate(&mut self) {
        let eng = self.eng;
        while let Some(ev) = self.queue.pop_front() {
            match ev {
                Event::Label(e, c) => {
                    for &rid in &eng.by_concept[c as usize] {
                        let (rule, owner) = eng.rules[rid as usize];
                        if !self.active(owner) {
                            continue;
                        }
                        match rule {
                            IRule::Sub(_, b) => self.add_label(e, b),
                            IRule::Conj(a, b, d) => {
                                if self.s.has(e, a) && self.s.has(e, b) {
                                    self.add_label(e, d);
                                }
                            }
                            IRule::ExLhs(r, _, b) => {
                                let preds: Vec<u32> = self.s.role_preds(r, e).collect();
                                for u in preds {
                                    self.add_label(u, b);
                                }
                            }
                            IRule::Bot(_) => {
                                self.s.inconsistent = true;
                                return;
                            }
                            _ => {}
                        }
                    }
                }
                Event::Edge(x, name, y) => {
                    for (r, u, v) in [(IRole::new(name, false), x, y), (IRole::new(name, true), y, x)] {
                        for &rid in &eng.by_role[r.0 as usize] {
                            let (rule, owner) = eng.rules[rid as usize];
                            if !self.active(owner) {
                                continue;
                            }
                            match rule {
                                IRule::RoleSub(_, s) => self.add_pair(s, u, v),
                                IRule::ExLhs(_, a, b) => {
                                    if self.s.has(v, a) {
                                        self.add_label(u, b);
                                    }
                                }
                                IRule::RoleDisj(p, q) => {
                                    let other = if p == r { q } else { p };
                                    if self.has_pair(other, u, v) {
                                        self.s.inconsistent = true;
                                        return;
                                    }
                                }
                                _ => {}
                            }
                        }
                    }
                }
            }
        }
    }

    /// One restricted-chase pass over elements touched since the last pass.
    fn existential_pass(&mut self) -> bool {
        let eng = self.eng;
        let mut batch = std::mem::take(&mut self.dirty);
        batch.sort_unstable();
        for &e in &batch {
            self.is_dirty[e as usize] = false;
        }
        let mut created = false;
        for e in batch {
            for &rid in &eng.ex_rhs {
                let (rule, owner) = eng.rules[rid as usize];
                let IRule::ExRhs(a, r, b) = rule else { unreachable!() };
                if !self.active(owner) || !self.s.has(e, a) {
                    continue;
                }
                if self.s.role_succs(r, e).any(|f| self.s.has(f, b)) {
                    continue;
                }
                if self.s.depth[e as usize] as usize >= eng.depth_limit {
                    self.s.saturated = false;
                    continue;
                }
                if self.s.len() >= eng.node_cap {
                    self.s.saturated = false;
                    self.s.capped = true;
                    return false;
                }
                let f = self.s.push_element(self.s.depth[e as usize] + 1, e);
                self.add_label(f, TOP);
                self.add_label(f, b);
                self.add_pair(r, e, f);
                created = true;
            }
        }
        created
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Engine {
    pub sig: Signature,
    rules: Vec<(IRule, u32)>,
    facts: Vec<(IFact, u32)>,
    by_concept: Vec<Vec<u32>>,
    by_role: Vec<Vec<u32>>,
    ex_rhs: Vec<u32>,
    pub goal: Goal,
    pub depth_limit: usize,
    /// Depth from which a truncated structure is still complete for the goal.
    complete_depth: Option<usize>,
    node_cap: usize,
    pub fresh: HashSet<u32>,
}

/// Owner `None` = always present; `Some(i)` = present iff bit `i` of the mask is set.
pub(crate) struct EngineInput<'a> {
    pub facts: Vec<(&'a Assertion, Option<u32>)>,
    pub axioms: Vec<(&'a Axiom, Option<u32>)>,
    pub query: Option<&'a BooleanQuery>,
    pub depth_limit: Option<usize>,
    pub node_cap: usize,
}

impl Engine {
    pub fn compile(input: EngineInput<'_>) -> Engine {
        let axioms: Vec<Axiom> = input.axioms.iter().map(|(a, _)| (*a).clone()).collect();
        let ntbox = normalize_tbox(&axioms);
        let owners: Vec<Option<u32>> = input.axioms.iter().map(|(_, o)| *o).collect();
        Self::from_normalized(&ntbox, &owners, input)
    }

    pub fn from_normalized(
        ntbox: &NormalizedTBox,
        axiom_owners: &[Option<u32>],
        input: EngineInput<'_>,
    ) -> Engine {
        let mut sig = Signature::new();
        let own = |o: Option<u32>| o.unwrap_or(NONE);
        let mut rules = Vec::new();
        for (rule, &src) in ntbox.rules.iter().zip(&ntbox.sources) {
            let owner = own(axiom_owners.get(src).copied().flatten());
            let r = match rule {
                NormalRule::Conj(a, b, c) => IRule::Conj(sig.basic(a), sig.basic(b), sig.basic(c)),
                NormalRule::Sub(a, b) => IRule::Sub(sig.basic(a), sig.basic(b)),
                NormalRule::ExistsLhs(r, a, b) => IRule::ExLhs(sig.role(r), sig.basic(a), sig.basic(b)),
                NormalRule::ExistsRhs(a, r, b) => IRule::ExRhs(sig.basic(a), sig.role(r), sig.basic(b)),
                NormalRule::Bot(a) => IRule::Bot(sig.basic(a)),
                NormalRule::RoleSub(r, s) => IRule::RoleSub(sig.role(r), sig.role(s)),
                NormalRule::RoleDisjoint(r, s) => IRule::RoleDisj(sig.role(r), sig.role(s)),
            };
            rules.push((r, owner));
        }
        let fresh: HashSet<u32> = ntbox
            .fresh
            .keys()
            .filter_map(|n| sig.concept_index(n))
            .collect();

        let mut facts = Vec::new();
        for (a, o) in &input.facts {
            facts.push((intern_fact(&mut sig, a), own(*o)));
        }

        let mut goal_size = 1;
        let mut all_const = true;
        let goal = match input.query {
            None => Goal::False,
            Some(BooleanQuery::Ucq(ds)) => {
                goal_size = ds.iter().map(Cq::len).max().unwrap_or(0);
                all_const = ds.iter().all(|d| d.variables().is_empty());
                Goal::Ucq(ds.iter().map(|d| intern_cq(&mut sig, d)).collect())
            }
            Some(BooleanQuery::Reach {
                role,
                source,
                target,
            }) => Goal::Reach {
                role: sig.role_name(role),
                source: sig.individual(source),
                target: sig.individual(target),
            },
            Some(BooleanQuery::AxiomGoal(ax)) => {
                let (extra, goal, size) = compile_axiom_goal(&mut sig, ax);
                goal_size = size;
                all_const = false;
                facts.extend(extra.into_iter().map(|f| (f, NONE)));
                goal
            }
        };

        let n_concepts = sig.concepts.len();
        let n_roles = sig.roles.len();
        let mut by_concept = vec![Vec::new(); n_concepts];
        let mut by_role = vec![Vec::new(); n_roles * 2];
        let mut ex_rhs = Vec::new();
        for (i, (r, _)) in rules.iter().enumerate() {
            let i = i as u32;
            match *r {
                IRule::Sub(a, _) | IRule::ExLhs(_, a, _) | IRule::Bot(a) => by_concept[a as usize].push(i),
                IRule::Conj(a, b, _) => {
                    by_concept[a as usize].push(i);
                    if b != a {
                        by_concept[b as usize].push(i);
                    }
                }
                IRule::ExRhs(..) => ex_rhs.push(i),
                _ => {}
            }
            match *r {
                IRule::RoleSub(p, _) | IRule::ExLhs(p, _, _) => by_role[p.0 as usize].push(i),
                IRule::RoleDisj(p, q) => {
                    by_role[p.0 as usize].push(i);
                    if q != p {
                        by_role[q.0 as usize].push(i);
                    }
                }
                _ => {}
            }
        }

        let concept_names = ntbox
            .rules
            .iter()
            .flat_map(basics)
            .filter(|b| matches!(b, Basic::Name(_)))
            .collect::<HashSet<_>>()
            .len();
        let complete_depth = if ntbox.is_dllite_shaped() {
            Some(if all_const { 1 } else { 2 * n_roles + goal_size })
        } else if ex_rhs.is_empty() {
            Some(0)
        } else {
            None
        };
        let mut depth_limit = input.depth_limit.unwrap_or(goal_size + concept_names);
        if input.depth_limit.is_none() {
            if let Some(d) = complete_depth {
                depth_limit = depth_limit.max(d);
            }
        }

        Engine {
            sig,
            rules,
            facts,
            by_concept,
            by_role,
            ex_rhs,
            goal,
            depth_limit,
            complete_depth,
            node_cap: input.node_cap,
            fresh,
        }
    }

    fn has_active_bottom(&self, mask: u64) -> bool {
        self.rules.iter().any(|&(r, o)| {
            matches!(r, IRule::Bot(_) | IRule::RoleDisj(..)) && (o == NONE || mask >> o & 1 == 1)
        })
    }

    pub fn run(&self, mask: u64) -> Structure {
        let n_named = self.sig.individuals.len();
        let mut run = Run {
            eng: self,
            mask,
            s: Structure::new(n_named, self.sig.concepts.len()),
            queue: VecDeque::new(),
            dirty: Vec::new(),
            is_dirty: vec![false; n_named],
        };
        for &(f, o) in &self.facts {
            if !run.active(o) {
                continue;
            }
            match f {
                IFact::Concept(c, i) => {
                    run.make_present(i);
                    run.add_label(i, c);
                }
                IFact::Role(n, i, j) => {
                    run.make_present(i);
                    run.make_present(j);
                    run.add_edge(i, n, j);
                }
                IFact::Present(i) => run.make_present(i),
            }
        }
        if !run.s.present.iter().any(|&p| p) {
            // Interpretation domains are non-empty.
            let root = run.s.push_element(0, NONE);
            run.add_label(root, TOP);
        }
        loop {
            run.propagate();
            if run.s.inconsistent || !run.existential_pass() {
                break;
            }
        }
        run.s
    }

    fn complete(&self, s: &Structure) -> bool {
        s.saturated || (!s.capped && self.complete_depth.is_some_and(|d| self.depth_limit >= d))
    }

    pub fn consistency(&self, mask: u64) -> Consistency {
        if !self.has_active_bottom(mask) {
            return Consistency::Consistent;
        }
        let s = self.run(mask);
        if s.inconsistent {
            Consistency::Inconsistent
        } else if self.complete(&s) {
            Consistency::Consistent
        } else {
            Consistency::Unknown
        }
    }

    pub fn entails(&self, mask: u64) -> Verdict {
        if let (Goal::Reach { role, source, target }, true) = (&self.goal, self.rules.is_empty()) {
            return if self.reach_facts(mask, *role, *source, *target) {
                Verdict::Yes
            } else {
                Verdict::No
            };
        }
        if matches!(self.goal, Goal::Inconsistent) && !self.has_active_bottom(mask) {
            return Verdict::No;
        }
        let s = self.run(mask);
        if s.inconsistent || self.goal_holds(&s) {
            Verdict::Yes
        } else if self.complete(&s) {
            Verdict::No
        } else {
            Verdict::Unknown
        }
    }

    fn goal_holds(&self, s: &Structure) -> bool {
        match &self.goal {
            Goal::True => true,
            Goal::False | Goal::Inconsistent => false,
            Goal::Ucq(ds) => ds.iter().any(|q| super::matcher::matches(s, q)),
            Goal::Reach {
                role,
                source,
                target,
            } => {
                let (src, tgt) = (*source as usize, *target as usize);
                if !s.present[src] || !s.present[tgt] {
                    return false;
                }
                let mut seen = vec![false; s.n_named];
                let mut stack = vec![*source];
                seen[src] = true;
                while let Some(u) = stack.pop() {
                    if u == *target {
                        return true;
                    }
                    for &(n, v) in &s.out[u as usize] {
                        if n == *role && (v as usize) < s.n_named && !seen[v as usize] {
                            seen[v as usize] = true;
                            stack.push(v);
                        }
                    }
                }
                false
            }
        }
    }

    /// Reachability straight over the active role facts (no TBox).
    fn reach_facts(&self, mask: u64, role: u32, source: u32, target: u32) -> bool {
        let n = self.sig.individuals.len();
        let mut present = vec![false; n];
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
        for &(f, o) in &self.facts {
            if o != NONE && mask >> o & 1 == 0 {
                continue;
            }
            match f {
                IFact::Role(r, i, j) => {
                    present[i as usize] = true;
                    present[j as usize] = true;
                    if r == role {
                        adj[i as usize].push(j);
                    }
                }
                IFact::Concept(_, i) | IFact::Present(i) => present[i as usize] = true,
            }
        }
        if !present[source as usize] || !present[target as usize] {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![source];
        seen[source as usize] = true;
        while let Some(u) = stack.pop() {
            if u == target {
                return true;
            }
            for &v in &adj[u as usize] {
                if !seen[v as usize] {
                    seen[v as usize] = true;
                    stack.push(v);
                }
            }
        }
        false
    }

    pub fn concept_name(&self, c: u32) -> &ConceptName {
        &self.sig.concepts[c as usize]
    }

    pub fn rules(&self) -> impl Iterator<Item = IRule> + '_ {
        self.rules.iter().map(|&(r, _)| r)
    }

    pub fn active_facts(&self, mask: u64) -> impl Iterator<Item = IFact> + '_ {
        self.facts
            .iter()
            .filter(move |&&(_, o)| o == NONE || mask >> o & 1 == 1)
            .map(|&(f, _)| f)
    }
}

fn basics(r: &NormalRule) -> Vec<Basic> {
    match r {
        NormalRule::Conj(a, b, c) => vec![a.clone(), b.clone(), c.clone()],
        NormalRule::Sub(a, b) | NormalRule::ExistsLhs(_, a, b) | NormalRule::ExistsRhs(a, _, b) => {
            vec![a.clone(), b.clone()]
        }
        NormalRule::Bot(a) => vec![a.clone()],
        _ => vec![],
    }
}

fn intern_fact(sig: &mut Signature, a: &Assertion) -> IFact {
    match crate::kb::normalize_assertion(a.clone()) {
        Assertion::Concept {
            concept,
            individual,
        } => IFact::Concept(sig.concept(&concept), sig.individual(&individual)),
        Assertion::Role {
            role,
            subject,
            object,
        } => IFact::Role(sig.role_name(&role.name), sig.individual(&subject), sig.individual(&object)),
    }
}

pub(crate) fn intern_cq(sig: &mut Signature, q: &Cq) -> ICq {
    let mut vars: HashMap<String, u32> = HashMap::new();
    let mut term = |sig: &mut Signature, t: &Term| match t {
        Term::Var(v) => {
            let n = vars.len() as u32;
            ITerm::Var(*vars.entry(v.clone()).or_insert(n))
        }
        Term::Const(c) => ITerm::Const(sig.individual(c)),
    };
    let atoms = q
        .atoms()
        .map(|a| match a {
            Atom::Concept(c, t) => {
                let c = sig.concept(c);
                IAtom::Concept(c, term(sig, t))
            }
            Atom::Role(r, t1, t2) => {
                let r = sig.role_name(r);
                let t1 = term(sig, t1);
                IAtom::Role(r, t1, term(sig, t2))
            }
        })
        .collect();
    ICq {
        atoms,
        nvars: vars.len(),
    }
}

fn contains_bot(c: &Concept) -> bool {
    match c {
        Concept::Bot => true,
        Concept::And(a, b) => contains_bot(a) || contains_bot(b),
        Concept::Exists(_, c) => contains_bot(c),
        _ => false,
    }
}

/// Writes `C` as facts rooted at `ind` (the tree-shaped ABox realizing `C`).
fn realize(sig: &mut Signature, c: &Concept, ind: u32, out: &mut Vec<IFact>, counter: &mut usize) {
    match c {
        Concept::Top | Concept::Bot | Concept::Not(_) => out.push(IFact::Present(ind)),
        Concept::Name(n) => out.push(IFact::Concept(sig.concept(n), ind)),
        Concept::And(a, b) => {
            realize(sig, a, ind, out, counter);
            realize(sig, b, ind, out, counter);
        }
        Concept::Exists(r, d) => {
            *counter += 1;
            let child = sig.individual(&Individual::new(format!("c*{counter}")));
            let name = sig.role_name(&r.name);
            out.push(if r.inverted {
                IFact::Role(name, child, ind)
            } else {
                IFact::Role(name, ind, child)
            });
            realize(sig, d, child, out, counter);
        }
    }
}

/// Query atoms expressing `D(root)`.
fn concept_query(c: &Concept, root: Term, atoms: &mut Vec<Atom>, counter: &mut usize) {
    match c {
        Concept::Top | Concept::Bot | Concept::Not(_) => {}
        Concept::Name(n) => atoms.push(Atom::Concept(n.clone(), root)),
        Concept::And(a, b) => {
            concept_query(a, root.clone(), atoms, counter);
            concept_query(b, root, atoms, counter);
        }
        Concept::Exists(r, d) => {
            *counter += 1;
            let v = Term::Var(format!("v{counter}"));
            atoms.push(Atom::role(r.clone(), root, v.clone()));
            concept_query(d, v, atoms, counter);
        }
    }
}

/// `T ⊨ C ⊑ D` iff the KB extended with `C(c*)` entails `D(c*)` (for a fresh `c*`).
fn compile_axiom_goal(sig: &mut Signature, ax: &Axiom) -> (Vec<IFact>, Goal, usize) {
    let mut facts = Vec::new();
    let mut counter = 0;
    match ax {
        Axiom::ConceptIncl { lhs, rhs } => {
            let root = sig.individual(&Individual::new("c*"));
            realize(sig, lhs, root, &mut facts, &mut counter);
            facts.push(IFact::Present(root));
            if let Concept::Not(b) = rhs {
                realize(sig, b, root, &mut facts, &mut counter);
                return (facts, Goal::Inconsistent, 1);
            }
            if contains_bot(rhs) {
                return (facts, Goal::Inconsistent, 1);
            }
            let mut atoms = Vec::new();
            let mut qc = 0;
            concept_query(rhs, Term::Const(Individual::new("c*")), &mut atoms, &mut qc);
            if atoms.is_empty() {
                return (facts, Goal::True, 1);
            }
            let size = atoms.len();
            let cq = intern_cq(sig, &Cq::new(atoms));
            (facts, Goal::Ucq(vec![cq]), size)
        }
        Axiom::RoleIncl { lhs, rhs, negated } => {
            let (c1, c2) = (Individual::new("c*1"), Individual::new("c*2"));
            let pair = |sig: &mut Signature, r: &Role| {
                let (a, b) = (sig.individual(&c1), sig.individual(&c2));
                let n = sig.role_name(&r.name);
                if r.inverted {
                    IFact::Role(n, b, a)
                } else {
                    IFact::Role(n, a, b)
                }
            };
            facts.push(pair(sig, lhs));
            if *negated {
                facts.push(pair(sig, rhs));
                return (facts, Goal::Inconsistent, 1);
            }
            let atom = Atom::role(rhs.clone(), Term::Const(c1.clone()), Term::Const(c2.clone()));
            let cq = intern_cq(sig, &Cq::new([atom]));
            (facts, Goal::Ucq(vec![cq]), 1)
        }
    }
}

/// Snapshot of the facts of an ABox for engines evaluated without players.
pub(crate) fn static_input<'a>(
    abox: &'a ABox,
    tbox: &'a [Axiom],
    query: Option<&'a BooleanQuery>,
    depth_limit: Option<usize>,
    node_cap: usize,
) -> EngineInput<'a> {
    EngineInput {
        facts: abox.iter().map(|a| (a, None)).collect(),
        axioms: tbox.iter().map(|a| (a, None)).collect(),
        query,
        depth_limit,
        node_cap,
    }
}

impl Structure {
    /// A structure over a fixed domain: the named slots plus `extra` anonymous elements,
    /// with `present` marking the named slots that belong to the domain.
    pub(crate) fn fixed_domain(present: Vec<bool>, n_concepts: usize, extra: usize) -> Self {
        let n_named = present.len();
        let mut s = Structure::new(n_named, n_concepts);
        for (i, p) in present.into_iter().enumerate() {
            if p {
                s.present[i] = true;
                s.set(i as u32, TOP);
            }
        }
        for _ in 0..extra {
            let e = s.push_element(0, NONE);
            s.set(e, TOP);
        }
        s
    }

    pub(crate) fn set_label(&mut self, e: u32, c: u32) -> bool {
        self.set(e, c)
    }

    pub(crate) fn insert_edge(&mut self, x: u32, name: u32, y: u32) -> bool {
        if self.edges.insert((x, name, y)) {
            self.out[x as usize].push((name, y));
            self.inn[y as usize].push((name, x));
            true
        } else {
            false
        }
    }

    pub(crate) fn insert_pair(&mut self, r: IRole, u: u32, v: u32) -> bool {
        if r.inv() {
            self.insert_edge(v, r.name(), u)
        } else {
            self.insert_edge(u, r.name(), v)
        }
    }

    pub(crate) fn has_pair(&self, r: IRole, u: u32, v: u32) -> bool {
        if r.inv() {
            self.has_edge(v, r.name(), u)
        } else {
            self.has_edge(u, r.name(), v)
        }
    }

    pub(crate) fn domain(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.len() as u32).filter(|&e| self.present[e as usize])
    }
}
