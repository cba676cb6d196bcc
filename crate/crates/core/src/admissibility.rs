//! d-backconnectivity and d-admissibility of vertex orderings. For d = ∞ a
//! position's backconnectivity is a vertex-capacitated max-flow; for finite d
//! it is an exact bounded-length disjoint-path packing found by backtracking.
//! The exact minimizer runs subset dynamic programming over prefix sets.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::graph::{Graph, Ordering};
use crate::{Budget, BudgetExceeded};

/// Path-length bound: paths of at most d edges, or unbounded.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Depth {
    Finite(u32),
    Infinite,
}

impl fmt::Display for Depth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Depth::Finite(d) => write!(f, "{d}"),
            Depth::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for Depth {
    type Err = String;

    fn from_str(s: &str) -> Result<Depth, String> {
        if s == "inf" || s == "infinity" || s == "∞" {
            return Ok(Depth::Infinite);
        }
        match s.parse::<u32>() {
            Ok(0) | Err(_) => Err(format!("depth must be a positive integer or 'inf', got '{s}'")),
            Ok(d) => Ok(Depth::Finite(d)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AdmError {
    Domain(String),
    Budget(BudgetExceeded),
}

impl fmt::Display for AdmError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdmError::Domain(m) => write!(f, "{m}"),
            AdmError::Budget(b) => write!(f, "{b}"),
        }
    }
}

impl std::error::Error for AdmError {}

/// A d-admissibility value with the ordering that witnesses it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibilityReport {
    pub value: u32,
    pub ordering: Ordering,
    pub per_vertex: BTreeMap<u32, u32>,
}

/// Vertices the exact solver accepts by default; the hard cap bounds the
/// 2^n subset table no matter how far the budget is raised.
pub const DEFAULT_EXACT_VERTICES: u64 = 16;
const HARD_EXACT_VERTICES: u64 = 24;
/// Candidate-path and search-node allowances for the finite-d packing.
const DEFAULT_FINITE_PATHS: u64 = 5_000;
const DEFAULT_FINITE_NODES: u64 = 500_000;

fn check_depth(d: Depth) -> Result<(), AdmError> {
    if d == Depth::Finite(0) {
        return Err(AdmError::Domain("depth 0 admits no paths; use d ≥ 1".into()));
    }
    Ok(())
}

/// Largest family of paths from `v` to the prefix, each of length ≤ d,
/// pairwise meeting only in v. Internal vertices come from the suffix: a
/// path touching the prefix early can be cut there, so nothing is lost.
pub fn backconnectivity(
    g: &Graph,
    order: &Ordering,
    k: usize,
    d: Depth,
    budget: &Budget,
) -> Result<u32, AdmError> {
    check_depth(d)?;
    if !order.matches(g) {
        return Err(AdmError::Domain("ordering is not a permutation of the vertex set".into()));
    }
    let n = order.sequence.len();
    if k < 1 || k > n {
        return Err(AdmError::Domain(format!("position {k} out of range 1..={n}")));
    }
    let v = order.sequence[k - 1];
    let prefix: BTreeSet<u32> = order.sequence[..k - 1].iter().copied().collect();
    let suffix: BTreeSet<u32> = order.sequence[k..].iter().copied().collect();
    backconnectivity_sets(g, v, &prefix, &suffix, d, budget)
}

fn backconnectivity_sets(
    g: &Graph,
    v: u32,
    prefix: &BTreeSet<u32>,
    suffix: &BTreeSet<u32>,
    d: Depth,
    budget: &Budget,
) -> Result<u32, AdmError> {
    if prefix.is_empty() {
        return Ok(0);
    }
    match d {
        Depth::Infinite => Ok(flow_backconnectivity(g, v, prefix, suffix)),
        Depth::Finite(1) => Ok(g.neighbors(v).filter(|u| prefix.contains(u)).count() as u32),
        Depth::Finite(d) => packed_backconnectivity(g, v, prefix, suffix, d, budget),
    }
}

/// Menger via unit vertex capacities: suffix vertices split in/out, prefix
/// vertices drain straight to the sink, v is the uncapacitated source.
fn flow_backconnectivity(g: &Graph, v: u32, prefix: &BTreeSet<u32>, suffix: &BTreeSet<u32>) -> u32 {
    let mut net = FlowNet::new();
    let source = net.node();
    let sink = net.node();
    let mut node_in: BTreeMap<u32, usize> = BTreeMap::new();
    let mut node_out: BTreeMap<u32, usize> = BTreeMap::new();
    for &p in prefix {
        let np = net.node();
        node_in.insert(p, np);
        net.arc(np, sink, 1);
    }
    for &s in suffix {
        let (i, o) = (net.node(), net.node());
        node_in.insert(s, i);
        node_out.insert(s, o);
        net.arc(i, o, 1);
    }
    for u in g.neighbors(v) {
        if let Some(&i) = node_in.get(&u) {
            net.arc(source, i, 1);
        }
    }
    for &s in suffix {
        for u in g.neighbors(s) {
            if u != v && (prefix.contains(&u) || (suffix.contains(&u) && s < u)) {
                // suffix-suffix arcs both ways, suffix-prefix one way
                net.arc(node_out[&s], node_in[&u], 1);
                if let Some(&uo) = node_out.get(&u) {
                    net.arc(uo, node_in[&s], 1);
                }
            }
        }
    }
    net.max_flow(source, sink)
}

/// Unit-capacity max flow by BFS augmentation; a handful of nodes at most.
struct FlowNet {
    nodes: usize,
    // arcs as (to, cap); arc i pairs with its reverse i^1
    to: Vec<usize>,
    cap: Vec<i32>,
    adj: Vec<Vec<usize>>,
}

impl FlowNet {
    fn new() -> FlowNet {
        FlowNet { nodes: 0, to: Vec::new(), cap: Vec::new(), adj: Vec::new() }
    }

    fn node(&mut self) -> usize {
        self.nodes += 1;
        self.adj.push(Vec::new());
        self.nodes - 1
    }

    fn arc(&mut self, a: usize, b: usize, c: i32) {
        self.adj[a].push(self.to.len());
        self.to.push(b);
        self.cap.push(c);
        self.adj[b].push(self.to.len());
        self.to.push(a);
        self.cap.push(0);
    }

    fn max_flow(&mut self, s: usize, t: usize) -> u32 {
        let mut total = 0;
        loop {
            let mut came: Vec<Option<usize>> = vec![None; self.nodes];
            let mut queue = std::collections::VecDeque::from([s]);
            'bfs: while let Some(x) = queue.pop_front() {
                for &a in &self.adj[x] {
                    let y = self.to[a];
                    if self.cap[a] > 0 && came[y].is_none() && y != s {
                        came[y] = Some(a);
                        if y == t {
                            break 'bfs;
                        }
                        queue.push_back(y);
                    }
                }
            }
            let Some(mut arc) = came[t] else { return total };
            loop {
                self.cap[arc] -= 1;
                self.cap[arc ^ 1] += 1;
                let from = self.to[arc ^ 1];
                if from == s {
                    break;
                }
                arc = came[from].unwrap();
            }
            total += 1;
        }
    }
}

/// Exact packing for finite d ≥ 2: enumerate every simple path of ≤ d edges
/// from v through suffix vertices to a prefix endpoint, then pick the
/// largest disjoint family. Paths through one first neighbor exclude each
/// other, so the search branches over v's neighbors.
fn packed_backconnectivity(
    g: &Graph,
    v: u32,
    prefix: &BTreeSet<u32>,
    suffix: &BTreeSet<u32>,
    d: u32,
    budget: &Budget,
) -> Result<u32, AdmError> {
    let path_limit = budget.limit(DEFAULT_FINITE_PATHS);
    let mut paths: Vec<Vec<u32>> = Vec::new(); // v excluded, endpoint included
    let mut stack: Vec<u32> = Vec::new();
    collect_paths(g, v, v, prefix, suffix, d, &mut stack, &mut paths, path_limit).map_err(
        |needed| {
            AdmError::Budget(BudgetExceeded {
                what: format!("bounded-length path enumeration at vertex {v}"),
                limit: path_limit,
                needed,
            })
        },
    )?;
    // group by first hop; within a group paths collide at that vertex
    paths.sort();
    let mut groups: Vec<Vec<&[u32]>> = Vec::new();
    for p in &paths {
        match groups.last_mut() {
            Some(gr) if gr[0][0] == p[0] => gr.push(p),
            _ => groups.push(vec![p]),
        }
    }
    let node_limit = budget.limit(DEFAULT_FINITE_NODES);
    let mut search = PackSearch {
        best: 0,
        used: BTreeSet::new(),
        nodes: 0,
        node_limit,
        cap: prefix.len().min(g.degree(v)) as u32,
    };
    search.run(&groups, 0, 0);
    if search.nodes > search.node_limit {
        return Err(AdmError::Budget(BudgetExceeded {
            what: format!("disjoint-path packing at vertex {v}"),
            limit: node_limit,
            needed: search.nodes,
        }));
    }
    Ok(search.best)
}

fn collect_paths(
    g: &Graph,
    v: u32,
    at: u32,
    prefix: &BTreeSet<u32>,
    suffix: &BTreeSet<u32>,
    d: u32,
    stack: &mut Vec<u32>,
    out: &mut Vec<Vec<u32>>,
    limit: u64,
) -> Result<(), u64> {
    for u in g.neighbors(at) {
        if prefix.contains(&u) {
            if out.len() as u64 >= limit {
                return Err(out.len() as u64 + 1);
            }
            let mut p = stack.clone();
            p.push(u);
            out.push(p);
        } else if stack.len() + 1 < d as usize && u != v && suffix.contains(&u) && !stack.contains(&u)
        {
            stack.push(u);
            collect_paths(g, v, u, prefix, suffix, d, stack, out, limit)?;
            stack.pop();
        }
    }
    Ok(())
}

struct PackSearch {
    best: u32,
    used: BTreeSet<u32>,
    nodes: u64,
    node_limit: u64,
    cap: u32,
}

impl PackSearch {
    fn run(&mut self, groups: &[Vec<&[u32]>], gi: usize, chosen: u32) {
        self.nodes += 1;
        if self.nodes > self.node_limit || self.best == self.cap {
            return;
        }
        self.best = self.best.max(chosen);
        if gi == groups.len() || chosen + (groups.len() - gi) as u32 <= self.best {
            return;
        }
        for p in &groups[gi] {
            if p.iter().all(|x| !self.used.contains(x)) {
                for &x in *p {
                    self.used.insert(x);
                }
                self.run(groups, gi + 1, chosen + 1);
                for &x in *p {
                    self.used.remove(&x);
                }
            }
        }
        self.run(groups, gi + 1, chosen);
    }
}

/// Per-position backconnectivities of one ordering and their maximum.
pub fn ordering_admissibility(
    g: &Graph,
    order: &Ordering,
    d: Depth,
    budget: &Budget,
) -> Result<AdmissibilityReport, AdmError> {
    check_depth(d)?;
    if !order.matches(g) {
        return Err(AdmError::Domain("ordering is not a permutation of the vertex set".into()));
    }
    let seq = &order.sequence;
    let mut per_vertex = BTreeMap::new();
    let mut prefix: BTreeSet<u32> = BTreeSet::new();
    for (i, &v) in seq.iter().enumerate() {
        let suffix: BTreeSet<u32> = seq[i + 1..].iter().copied().collect();
        let c = backconnectivity_sets(g, v, &prefix, &suffix, d, budget)?;
        debug_assert!(c as usize <= g.degree(v));
        per_vertex.insert(v, c);
        prefix.insert(v);
    }
    let value = per_vertex.values().copied().max().unwrap_or(0);
    Ok(AdmissibilityReport { value, ordering: order.clone(), per_vertex })
}

/// True minimum d-admissibility with a witnessing ordering. Subset dynamic
/// programming: a position's backconnectivity depends only on the prefix as
/// a set, so dp[S] = best over v ∈ S of max(dp[S−v], bc(v, S−v)).
pub fn admissibility_exact(g: &Graph, d: Depth, budget: &Budget) -> Result<AdmissibilityReport, AdmError> {
    check_depth(d)?;
    let n = g.num_vertices();
    let limit = budget.limit(DEFAULT_EXACT_VERTICES).min(HARD_EXACT_VERTICES);
    if n as u64 > limit {
        return Err(AdmError::Budget(BudgetExceeded {
            what: "exact admissibility vertex count".into(),
            limit,
            needed: n as u64,
        }));
    }
    let verts: Vec<u32> = g.vertices().collect();
    let full: usize = (1usize << n) - 1;
    let set_of = |s: usize| -> BTreeSet<u32> {
        verts.iter().enumerate().filter(|(i, _)| s >> i & 1 == 1).map(|(_, &v)| v).collect()
    };
    let mut dp = vec![u8::MAX; full + 1];
    let mut last = vec![u8::MAX; full + 1];
    dp[0] = 0;
    for s in 1..=full {
        let members = set_of(s);
        let suffix: BTreeSet<u32> = verts.iter().copied().filter(|v| !members.contains(v)).collect();
        for (i, &v) in verts.iter().enumerate() {
            if s >> i & 1 == 0 {
                continue;
            }
            let mut prefix = members.clone();
            prefix.remove(&v);
            let c = backconnectivity_sets(g, v, &prefix, &suffix, d, budget)? as u8;
            let val = dp[s ^ (1 << i)].max(c);
            if val < dp[s] {
                dp[s] = val;
                last[s] = i as u8;
            }
        }
    }
    let mut rev = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let i = last[s] as usize;
        rev.push(verts[i]);
        s ^= 1 << i;
    }
    rev.reverse();
    let order = Ordering::new(rev);
    let report = ordering_admissibility(g, &order, d, budget)?;
    debug_assert_eq!(report.value, if n == 0 { 0 } else { dp[full] as u32 });
    Ok(report)
}

/// Upper bound: build the ordering back to front, always placing the vertex
/// of least backconnectivity into the rest. For d = 1 this is the classical
/// degeneracy peel. Ties go to the smallest id.
pub fn admissibility_greedy(g: &Graph, d: Depth, budget: &Budget) -> Result<AdmissibilityReport, AdmError> {
    check_depth(d)?;
    let mut remaining = g.vertex_set();
    let mut placed: BTreeSet<u32> = BTreeSet::new();
    let mut rev = Vec::with_capacity(remaining.len());
    let mut per_vertex = BTreeMap::new();
    while !remaining.is_empty() {
        let mut pick: Option<(u32, u32)> = None;
        for &v in &remaining {
            let mut prefix = remaining.clone();
            prefix.remove(&v);
            let c = backconnectivity_sets(g, v, &prefix, &placed, d, budget)?;
            if pick.map_or(true, |(bc, _)| c < bc) {
                pick = Some((c, v));
            }
        }
        let (c, v) = pick.unwrap();
        per_vertex.insert(v, c);
        remaining.remove(&v);
        placed.insert(v);
        rev.push(v);
    }
    rev.reverse();
    let value = per_vertex.values().copied().max().unwrap_or(0);
    Ok(AdmissibilityReport { value, ordering: Ordering::new(rev), per_vertex })
}
