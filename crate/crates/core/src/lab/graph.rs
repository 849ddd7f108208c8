//! Directed graphs with a designated source and target, and bipartite graphs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::LabError;

/// A directed graph with designated `s` and `t`. Edges are kept sorted, and edge `i`
/// always means the `i`-th edge in that order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiGraph {
    vertices: BTreeSet<String>,
    edges: BTreeSet<(String, String)>,
    pub s: String,
    pub t: String,
}

impl DiGraph {
    pub fn new(s: &str, t: &str) -> Self {
        Self {
            vertices: [s.to_string(), t.to_string()].into_iter().collect(),
            edges: BTreeSet::new(),
            s: s.to_string(),
            t: t.to_string(),
        }
    }

    pub fn with_edges<'a>(s: &str, t: &str, edges: impl IntoIterator<Item = (&'a str, &'a str)>) -> Self {
        let mut g = Self::new(s, t);
        for (v, w) in edges {
            g.add_edge(v, w);
        }
        g
    }

    pub fn add_vertex(&mut self, v: &str) {
        self.vertices.insert(v.to_string());
    }

    /// Adds `(v, w)`; returns false if it was already present.
    pub fn add_edge(&mut self, v: &str, w: &str) -> bool {
        self.add_vertex(v);
        self.add_vertex(w);
        self.edges.insert((v.to_string(), w.to_string()))
    }

    pub fn vertices(&self) -> impl Iterator<Item = &str> {
        self.vertices.iter().map(String::as_str)
    }

    pub fn has_vertex(&self, v: &str) -> bool {
        self.vertices.contains(v)
    }

    pub fn edges(&self) -> impl Iterator<Item = (&str, &str)> {
        self.edges.iter().map(|(v, w)| (v.as_str(), w.as_str()))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_index(&self, v: &str, w: &str) -> Option<usize> {
        self.edges().position(|e| e == (v, w))
    }

    /// Whether the edges selected by `mask` connect `s` to `t`.
    pub fn connects(&self, mask: u64) -> bool {
        let mut adj: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for (i, (v, w)) in self.edges().enumerate() {
            if mask >> i & 1 == 1 {
                adj.entry(v).or_default().push(w);
            }
        }
        let mut seen: BTreeSet<&str> = [self.s.as_str()].into_iter().collect();
        let mut stack = vec![self.s.as_str()];
        while let Some(u) = stack.pop() {
            if u == self.t {
                return true;
            }
            for &w in adj.get(u).into_iter().flatten() {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        false
    }

    /// A vertex name starting with `base` that is not yet used.
    pub fn fresh_vertex(&self, base: &str) -> String {
        let mut name = base.to_string();
        while self.vertices.contains(&name) {
            name.push('~');
        }
        name
    }

    /// Parses `s <name>` / `t <name>` header lines and `v w` edge lines; `#` starts a
    /// comment.
    pub fn parse(src: &str) -> Result<Self, LabError> {
        let mut s = None;
        let mut t = None;
        let mut edges = Vec::new();
        for (ln, line) in src.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let bad = || LabError::Format {
                line: ln + 1,
                msg: format!("expected `s <v>`, `t <v>` or `<v> <w>`, found `{line}`"),
            };
            if parts.len() != 2 {
                return Err(bad());
            }
            match parts[0] {
                // Once both headers are seen, `s`/`t` lines are edges of vertices so named.
                "s" if s.is_none() => s = Some(parts[1].to_string()),
                "t" if t.is_none() => t = Some(parts[1].to_string()),
                _ => edges.push((parts[0].to_string(), parts[1].to_string())),
            }
        }
        let missing = |w: &str| LabError::Format {
            line: 0,
            msg: format!("missing `{w} <vertex>` line"),
        };
        let mut g = DiGraph::new(&s.ok_or_else(|| missing("s"))?, &t.ok_or_else(|| missing("t"))?);
        for (v, w) in &edges {
            g.add_edge(v, w);
        }
        Ok(g)
    }
}

impl fmt::Display for DiGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "s {}", self.s)?;
        writeln!(f, "t {}", self.t)?;
        for (v, w) in self.edges() {
            writeln!(f, "{v} {w}")?;
        }
        Ok(())
    }
}

/// A vertex of a bipartite graph: an index into `X` or into `Y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    X(usize),
    Y(usize),
}

/// `G = (X, Y, E)` with `E ⊆ X × Y`, edges stored as index pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    pub x: Vec<String>,
    pub y: Vec<String>,
    pub edges: BTreeSet<(usize, usize)>,
}

impl BipartiteGraph {
    pub fn new(x: Vec<String>, y: Vec<String>, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, LabError> {
        let names: BTreeSet<&String> = x.iter().chain(&y).collect();
        if names.len() != x.len() + y.len() {
            return Err(LabError::Format {
                line: 0,
                msg: "vertex names of X and Y must be distinct".into(),
            });
        }
        let edges: BTreeSet<(usize, usize)> = edges.into_iter().collect();
        if let Some(&(a, b)) = edges.iter().find(|&&(a, b)| a >= x.len() || b >= y.len()) {
            return Err(LabError::Format {
                line: 0,
                msg: format!("edge ({a},{b}) out of range"),
            });
        }
        Ok(Self { x, y, edges })
    }

    /// `X = {x1..xa}`, `Y = {y1..yb}` with the given index edges.
    pub fn numbered(a: usize, b: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let x = (1..=a).map(|i| format!("x{i}")).collect();
        let y = (1..=b).map(|i| format!("y{i}")).collect();
        Self::new(x, y, edges).expect("numbered names are distinct")
    }

    /// Every bipartite graph on numbered vertices with `|X| + |Y| ≤ max_vertices`.
    pub fn all_up_to(max_vertices: usize) -> Vec<Self> {
        let mut out = Vec::new();
        for a in 0..=max_vertices {
            for b in 0..=max_vertices - a {
                let pairs: Vec<(usize, usize)> = (0..a).flat_map(|i| (0..b).map(move |j| (i, j))).collect();
                for mask in 0..1u64 << pairs.len() {
                    let e = pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &p)| p);
                    out.push(Self::numbered(a, b, e));
                }
            }
        }
        out
    }

    pub fn vertex_count(&self) -> usize {
        self.x.len() + self.y.len()
    }

    pub fn name(&self, v: Side) -> &str {
        match v {
            Side::X(i) => &self.x[i],
            Side::Y(j) => &self.y[j],
        }
    }

    /// Vertices in the order `X` then `Y`; bit `i` of a vertex mask refers to entry `i`.
    pub fn vertices(&self) -> Vec<Side> {
        (0..self.x.len()).map(Side::X).chain((0..self.y.len()).map(Side::Y)).collect()
    }

    pub fn is_independent(&self, mask: u64) -> bool {
        let nx = self.x.len();
        !self.edges.iter().any(|&(a, b)| mask >> a & 1 == 1 && mask >> (nx + b) & 1 == 1)
    }

    /// Number of independent sets, and their count by size (`IS(G, j)`, `j = 0..=|V|`).
    pub fn count_independent_sets(&self) -> Result<(u64, Vec<u64>), LabError> {
        let n = self.vertex_count();
        if n > 24 {
            return Err(LabError::TooLarge { what: "vertices", n, limit: 24 });
        }
        let mut by_size = vec![0u64; n + 1];
        for mask in 0..1u64 << n {
            if self.is_independent(mask) {
                by_size[mask.count_ones() as usize] += 1;
            }
        }
        Ok((by_size.iter().sum(), by_size))
    }

    /// Parses `X: <names>` and `Y: <names>` lines followed by `x y` edge lines.
    pub fn parse(src: &str) -> Result<Self, LabError> {
        let mut x: Option<Vec<String>> = None;
        let mut y: Option<Vec<String>> = None;
        let mut edges = Vec::new();
        for (ln, line) in src.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| LabError::Format { line: ln + 1, msg };
            if let Some(rest) = line.strip_prefix("X:") {
                if x.replace(rest.split_whitespace().map(String::from).collect()).is_some() {
                    return Err(err("duplicate `X:` line".into()));
                }
            } else if let Some(rest) = line.strip_prefix("Y:") {
                if y.replace(rest.split_whitespace().map(String::from).collect()).is_some() {
                    return Err(err("duplicate `Y:` line".into()));
                }
            } else {
                let (Some(xs), Some(ys)) = (&x, &y) else {
                    return Err(err("edges must follow the `X:` and `Y:` lines".into()));
                };
                let parts: Vec<&str> = line.split_whitespace().collect();
                if parts.len() != 2 {
                    return Err(err(format!("expected `<x> <y>`, found `{line}`")));
                }
                let a = xs.iter().position(|v| v == parts[0]).ok_or_else(|| err(format!("`{}` is not in X", parts[0])))?;
                let b = ys.iter().position(|v| v == parts[1]).ok_or_else(|| err(format!("`{}` is not in Y", parts[1])))?;
                edges.push((a, b));
            }
        }
        Self::new(x.unwrap_or_default(), y.unwrap_or_default(), edges)
    }
}

impl fmt::Display for BipartiteGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "X: {}", self.x.join(" "))?;
        writeln!(f, "Y: {}", self.y.join(" "))?;
        for &(a, b) in &self.edges {
            writeln!(f, "{} {}", self.x[a], self.y[b])?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digraph_roundtrip_and_reachability() {
        let g = DiGraph::parse("s s\nt t\n# triangle\ns a\na t\ns t\n").unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(DiGraph::parse(&g.to_string()).unwrap(), g);
        let st = g.edge_index("s", "t").unwrap();
        assert!(g.connects(1 << st));
        assert!(!g.connects(0));
        assert!(DiGraph::parse("s a\na b\n").is_err());
        assert!(DiGraph::parse("s a\nt b\na b c\n").is_err());
    }

    #[test]
    fn bipartite_parse_and_count() {
        let g = BipartiteGraph::parse("X: x1\nY: y1\nx1 y1\n").unwrap();
        assert_eq!(g.count_independent_sets().unwrap(), (3, vec![1, 2, 0]));
        assert_eq!(BipartiteGraph::parse(&g.to_string()).unwrap(), g);
        let k22 = BipartiteGraph::numbered(2, 2, [(0, 0), (0, 1), (1, 0), (1, 1)]);
        assert_eq!(k22.count_independent_sets().unwrap().0, 7);
        assert_eq!(BipartiteGraph::numbered(2, 1, []).count_independent_sets().unwrap().0, 8);
        assert!(BipartiteGraph::parse("X: a\nY: a\n").is_err());
        assert!(BipartiteGraph::parse("X: a\nY: b\na c\n").is_err());
    }

    #[test]
    fn all_small_bipartite_graphs() {
        assert_eq!(BipartiteGraph::all_up_to(5).len(), 213);
        assert_eq!(BipartiteGraph::all_up_to(0).len(), 1);
    }
}
