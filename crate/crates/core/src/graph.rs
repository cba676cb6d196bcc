//! Simple undirected graphs with explicit small-integer vertex ids, plus the
//! line-oriented edge-list text format used by the CLI and test fixtures.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Undirected simple graph. Vertex ids are arbitrary `u32`s preserved
/// verbatim by every operation; no loops, no parallel edges.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Graph {
    adj: BTreeMap<u32, BTreeSet<u32>>,
}

impl Graph {
    pub fn new() -> Self {
        Graph { adj: BTreeMap::new() }
    }

    /// Graph with vertex set {0, .., n-1} and no edges.
    pub fn with_vertices(n: u32) -> Self {
        let mut g = Graph::new();
        for v in 0..n {
            g.add_vertex(v);
        }
        g
    }

    pub fn from_edges(n: u32, edges: &[(u32, u32)]) -> Self {
        let mut g = Graph::with_vertices(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn add_vertex(&mut self, v: u32) {
        self.adj.entry(v).or_default();
    }

    /// Inserts {u, v}, creating missing endpoints. Returns false if the edge
    /// was already present. Loops are a programming error.
    pub fn add_edge(&mut self, u: u32, v: u32) -> bool {
        assert!(u != v, "loop edge {{{u},{u}}}");
        self.add_vertex(u);
        self.add_vertex(v);
        let fresh = self.adj.get_mut(&u).unwrap().insert(v);
        self.adj.get_mut(&v).unwrap().insert(u);
        fresh
    }

    pub fn remove_edge(&mut self, u: u32, v: u32) -> bool {
        let had = self.adj.get_mut(&u).map_or(false, |s| s.remove(&v));
        if had {
            self.adj.get_mut(&v).unwrap().remove(&u);
        }
        had
    }

    /// Removes v and all incident edges. No-op if v is absent.
    pub fn remove_vertex(&mut self, v: u32) {
        if let Some(nbrs) = self.adj.remove(&v) {
            for u in nbrs {
                self.adj.get_mut(&u).unwrap().remove(&v);
            }
        }
    }

    pub fn contains_vertex(&self, v: u32) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.adj.get(&u).map_or(false, |s| s.contains(&v))
    }

    pub fn vertices(&self) -> impl Iterator<Item = u32> + '_ {
        self.adj.keys().copied()
    }

    pub fn vertex_set(&self) -> BTreeSet<u32> {
        self.adj.keys().copied().collect()
    }

    /// Edges as (u, v) with u < v, lexicographically sorted.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(self.num_edges());
        for (&u, nbrs) in &self.adj {
            for &v in nbrs.range(u + 1..) {
                out.push((u, v));
            }
        }
        out
    }

    pub fn neighbors(&self, v: u32) -> impl Iterator<Item = u32> + '_ {
        self.adj.get(&v).into_iter().flat_map(|s| s.iter().copied())
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adj.get(&v).map_or(0, |s| s.len())
    }

    pub fn num_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.values().map(|s| s.len()).sum::<usize>() / 2
    }

    pub fn max_vertex_id(&self) -> Option<u32> {
        self.adj.keys().next_back().copied()
    }

    /// Smallest id not currently in use.
    pub fn fresh_id(&self) -> u32 {
        self.max_vertex_id().map_or(0, |m| m + 1)
    }

    pub fn induced(&self, keep: &BTreeSet<u32>) -> Graph {
        let mut g = Graph::new();
        for &v in keep {
            if self.contains_vertex(v) {
                g.add_vertex(v);
            }
        }
        for (u, v) in self.edges() {
            if keep.contains(&u) && keep.contains(&v) {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn is_connected(&self) -> bool {
        let mut verts = self.vertices();
        let start = match verts.next() {
            Some(v) => v,
            None => return true,
        };
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for u in self.neighbors(v) {
                if seen.insert(u) {
                    stack.push(u);
                }
            }
        }
        seen.len() == self.num_vertices()
    }

    pub fn connected_components(&self) -> Vec<BTreeSet<u32>> {
        let mut seen: BTreeSet<u32> = BTreeSet::new();
        let mut comps = Vec::new();
        for start in self.vertices() {
            if seen.contains(&start) {
                continue;
            }
            let mut comp = BTreeSet::from([start]);
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for u in self.neighbors(v) {
                    if comp.insert(u) {
                        stack.push(u);
                    }
                }
            }
            seen.extend(comp.iter().copied());
            comps.push(comp);
        }
        comps
    }

    /// Union of vertex and edge sets, ids kept as-is.
    pub fn union(&self, other: &Graph) -> Graph {
        let mut g = self.clone();
        for v in other.vertices() {
            g.add_vertex(v);
        }
        for (u, v) in other.edges() {
            g.add_edge(u, v);
        }
        g
    }
}

/// Permutation of the vertex set of some graph, first-to-last.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Ordering {
    pub sequence: Vec<u32>,
}

impl Ordering {
    pub fn new(sequence: Vec<u32>) -> Self {
        Ordering { sequence }
    }

    /// Checks the permutation invariant against g's vertex set.
    pub fn matches(&self, g: &Graph) -> bool {
        let as_set: BTreeSet<u32> = self.sequence.iter().copied().collect();
        as_set.len() == self.sequence.len() && as_set == g.vertex_set()
    }
}

/// Ordered bags; validity = interval property + edge coverage.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PathDecomposition {
    pub bags: Vec<BTreeSet<u32>>,
}

impl PathDecomposition {
    /// Max bag size minus one; -1 convention is avoided by returning None
    /// for decompositions with no bags.
    pub fn width(&self) -> Option<usize> {
        self.bags.iter().map(|b| b.len()).max().map(|m| m.saturating_sub(1))
    }

    /// Every vertex of g in a contiguous nonempty run of bags, every edge of
    /// g inside some bag, and no bag vertices outside g.
    pub fn validate(&self, g: &Graph) -> Result<(), String> {
        let mut first: BTreeMap<u32, usize> = BTreeMap::new();
        let mut last: BTreeMap<u32, usize> = BTreeMap::new();
        for (i, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if !g.contains_vertex(v) {
                    return Err(format!("bag {i} contains foreign vertex {v}"));
                }
                first.entry(v).or_insert(i);
                last.insert(v, i);
            }
        }
        for v in g.vertices() {
            let (Some(&a), Some(&b)) = (first.get(&v), last.get(&v)) else {
                return Err(format!("vertex {v} appears in no bag"));
            };
            for i in a..=b {
                if !self.bags[i].contains(&v) {
                    return Err(format!("vertex {v} missing from bag {i} inside its interval [{a},{b}]"));
                }
            }
        }
        for (u, v) in g.edges() {
            if !self.bags.iter().any(|b| b.contains(&u) && b.contains(&v)) {
                return Err(format!("edge {{{u},{v}}} not covered by any bag"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.msg)
    }
}

impl std::error::Error for ParseError {}

fn parse_err(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError { line, msg: msg.into() }
}

/// Parses the edge-list format: optional `#` comment lines, one `p <n>`
/// header declaring vertex set {0, .., n-1}, then `e <u> <v>` lines.
/// Duplicate edges collapse; loops are rejected.
pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let mut g: Option<Graph> = None;
    let mut n = 0u32;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tok = line.split_whitespace();
        match tok.next() {
            Some("p") => {
                if g.is_some() {
                    return Err(parse_err(lineno, "duplicate p line"));
                }
                let count = tok
                    .next()
                    .ok_or_else(|| parse_err(lineno, "p line missing vertex count"))?;
                n = count
                    .parse::<u32>()
                    .map_err(|_| parse_err(lineno, format!("bad vertex count '{count}'")))?;
                if tok.next().is_some() {
                    return Err(parse_err(lineno, "trailing tokens after p line"));
                }
                g = Some(Graph::with_vertices(n));
            }
            Some("e") => {
                let g = g
                    .as_mut()
                    .ok_or_else(|| parse_err(lineno, "e line before p line"))?;
                let end = |name: &str, tok: Option<&str>| -> Result<u32, ParseError> {
                    let t = tok.ok_or_else(|| parse_err(lineno, format!("e line missing {name}")))?;
                    let v = t
                        .parse::<u32>()
                        .map_err(|_| parse_err(lineno, format!("bad vertex id '{t}'")))?;
                    if v >= n {
                        return Err(parse_err(lineno, format!("vertex id {v} out of range (n = {n})")));
                    }
                    Ok(v)
                };
                let u = end("first endpoint", tok.next())?;
                let v = end("second endpoint", tok.next())?;
                if tok.next().is_some() {
                    return Err(parse_err(lineno, "trailing tokens after e line"));
                }
                if u == v {
                    return Err(parse_err(lineno, format!("loop edge {{{u},{u}}}")));
                }
                g.add_edge(u, v);
            }
            Some(other) => {
                return Err(parse_err(lineno, format!("unknown directive '{other}'")));
            }
            None => unreachable!(),
        }
    }
    g.ok_or_else(|| parse_err(1, "missing p line"))
}

/// Canonical edge-list text: `p` header, then edges lexicographic with the
/// smaller endpoint first. Ids are written verbatim; a graph whose vertex
/// set is exactly {0, .., n-1} round-trips bit-exactly (the format cannot
/// express gaps in the id space).
pub fn serialize_graph(g: &Graph) -> String {
    let n = g.max_vertex_id().map_or(0, |m| m + 1);
    let mut out = format!("p {n}\n");
    for (u, v) in g.edges() {
        out.push_str(&format!("e {u} {v}\n"));
    }
    out
}

/// Replaces e = {u, v} by a length-2 path through a fresh vertex (max id + 1).
pub fn subdivide_edge(g: &Graph, e: (u32, u32)) -> Result<Graph, String> {
    let (u, v) = e;
    if !g.has_edge(u, v) {
        return Err(format!("edge {{{u},{v}}} not in graph"));
    }
    let mut out = g.clone();
    let w = out.fresh_id();
    out.remove_edge(u, v);
    out.add_edge(u, w);
    out.add_edge(w, v);
    Ok(out)
}

/// { v : deg(v) > d }.
pub fn high_degree_vertices(g: &Graph, d: usize) -> BTreeSet<u32> {
    g.vertices().filter(|&v| g.degree(v) > d).collect()
}
