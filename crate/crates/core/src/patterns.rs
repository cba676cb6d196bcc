//! Exact containment testers: topological minors (a subdivision of H as a
//! subgraph of G) and weak/strong immersions (edge-disjoint connecting
//! paths). Backtracking over branch injections with degree pruning, then
//! exhaustive path packing, shortest candidates first. A returned None is a
//! proof of non-containment; blowups surface as budget errors instead.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::graph::Graph;
use crate::{Budget, BudgetExceeded};

/// Branch injection plus one internally disjoint path per pattern edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopMinorModel {
    pub branch: BTreeMap<u32, u32>,
    /// keyed by the pattern edge (u, v) with u < v; the path runs from
    /// branch(u) to branch(v), both endpoints included
    pub paths: BTreeMap<(u32, u32), Vec<u32>>,
}

/// Branch injection plus pairwise edge-disjoint paths; `strong` additionally
/// keeps every path's interior clear of all branch vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImmersionModel {
    pub branch: BTreeMap<u32, u32>,
    pub paths: BTreeMap<(u32, u32), Vec<u32>>,
    pub strong: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Model {
    TopMinor(TopMinorModel),
    Immersion(ImmersionModel),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PatternError {
    Domain(String),
    Budget(BudgetExceeded),
}

impl fmt::Display for PatternError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternError::Domain(m) => write!(f, "{m}"),
            PatternError::Budget(b) => write!(f, "{b}"),
        }
    }
}

impl std::error::Error for PatternError {}

pub const DEFAULT_HOST_VERTICES: u64 = 30;
pub const DEFAULT_PATTERN_EDGES: u64 = 12;
const DEFAULT_SEARCH_NODES: u64 = 2_000_000;

fn size_checks(h: &Graph, g: &Graph, budget: &Budget) -> Result<(), PatternError> {
    let host_limit = budget.limit(DEFAULT_HOST_VERTICES);
    if g.num_vertices() as u64 > host_limit {
        return Err(PatternError::Budget(BudgetExceeded {
            what: "host vertex count".into(),
            limit: host_limit,
            needed: g.num_vertices() as u64,
        }));
    }
    let edge_limit = budget.limit(DEFAULT_PATTERN_EDGES);
    if h.num_edges() as u64 > edge_limit {
        return Err(PatternError::Budget(BudgetExceeded {
            what: "pattern edge count".into(),
            limit: edge_limit,
            needed: h.num_edges() as u64,
        }));
    }
    Ok(())
}

pub fn find_topological_minor(
    h: &Graph,
    g: &Graph,
    budget: &Budget,
) -> Result<Option<TopMinorModel>, PatternError> {
    size_checks(h, g, budget)?;
    let mut s = Search::new(h, g, budget, Mode::TopMinor);
    let found = s.inject(0).map_err(PatternError::Budget)?;
    Ok(found.then(|| TopMinorModel { branch: s.branch_map(), paths: s.path_map() }))
}

pub fn find_immersion(
    h: &Graph,
    g: &Graph,
    strong: bool,
    budget: &Budget,
) -> Result<Option<ImmersionModel>, PatternError> {
    size_checks(h, g, budget)?;
    let mode = if strong { Mode::StrongImmersion } else { Mode::Immersion };
    let mut s = Search::new(h, g, budget, mode);
    let found = s.inject(0).map_err(PatternError::Budget)?;
    Ok(found.then(|| ImmersionModel { branch: s.branch_map(), paths: s.path_map(), strong }))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    TopMinor,
    Immersion,
    StrongImmersion,
}

struct Search<'a> {
    h: &'a Graph,
    g: &'a Graph,
    mode: Mode,
    hverts: Vec<u32>,
    cands: Vec<Vec<u32>>,
    hedges: Vec<(u32, u32)>,
    comp: BTreeMap<u32, u32>,
    assigned: BTreeMap<u32, u32>,
    taken: BTreeSet<u32>,
    // vertices unavailable as path interiors: branch images + used interiors
    blocked: BTreeSet<u32>,
    used_edges: BTreeSet<(u32, u32)>,
    chosen: Vec<Vec<u32>>,
    nodes: u64,
    node_limit: u64,
}

impl<'a> Search<'a> {
    fn new(h: &'a Graph, g: &'a Graph, budget: &Budget, mode: Mode) -> Search<'a> {
        // pattern vertices by decreasing degree; host candidates likewise,
        // degree-filtered (any model needs deg_G(image) ≥ deg_H(vertex))
        let mut hverts: Vec<u32> = h.vertices().collect();
        hverts.sort_by_key(|&v| (std::cmp::Reverse(h.degree(v)), v));
        let mut gverts: Vec<u32> = g.vertices().collect();
        gverts.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
        let cands = hverts
            .iter()
            .map(|&hv| {
                gverts.iter().copied().filter(|&gv| g.degree(gv) >= h.degree(hv)).collect()
            })
            .collect();
        let mut comp = BTreeMap::new();
        for (i, c) in g.connected_components().iter().enumerate() {
            for &v in c {
                comp.insert(v, i as u32);
            }
        }
        Search {
            h,
            g,
            mode,
            hverts,
            cands,
            hedges: h.edges(),
            comp,
            assigned: BTreeMap::new(),
            taken: BTreeSet::new(),
            blocked: BTreeSet::new(),
            used_edges: BTreeSet::new(),
            chosen: Vec::new(),
            nodes: 0,
            node_limit: budget.limit(DEFAULT_SEARCH_NODES),
        }
    }

    fn branch_map(&self) -> BTreeMap<u32, u32> {
        self.assigned.clone()
    }

    fn path_map(&self) -> BTreeMap<(u32, u32), Vec<u32>> {
        self.hedges.iter().copied().zip(self.chosen.iter().cloned()).collect()
    }

    fn tick(&mut self) -> Result<(), BudgetExceeded> {
        self.nodes += 1;
        if self.nodes > self.node_limit {
            return Err(BudgetExceeded {
                what: "containment search nodes".into(),
                limit: self.node_limit,
                needed: self.nodes,
            });
        }
        Ok(())
    }

    fn inject(&mut self, i: usize) -> Result<bool, BudgetExceeded> {
        if i == self.hverts.len() {
            return self.pack(0);
        }
        let hv = self.hverts[i];
        for ci in 0..self.cands[i].len() {
            let cand = self.cands[i][ci];
            if self.taken.contains(&cand) {
                continue;
            }
            self.tick()?;
            let feasible = self.h.neighbors(hv).all(|hu| match self.assigned.get(&hu) {
                Some(&img) => self.comp[&img] == self.comp[&cand],
                None => true,
            });
            if !feasible {
                continue;
            }
            self.assigned.insert(hv, cand);
            self.taken.insert(cand);
            self.blocked.insert(cand);
            if self.inject(i + 1)? {
                return Ok(true);
            }
            self.blocked.remove(&cand);
            self.taken.remove(&cand);
            self.assigned.remove(&hv);
        }
        Ok(false)
    }

    /// Route pattern edges in order; iterative deepening gives shortest
    /// candidate paths first and stays exhaustive on failure.
    fn pack(&mut self, ei: usize) -> Result<bool, BudgetExceeded> {
        if ei == self.hedges.len() {
            return Ok(true);
        }
        let (hu, hv) = self.hedges[ei];
        let a = self.assigned[&hu];
        let b = self.assigned[&hv];
        let dist = self.dist_to(b, a);
        let Some(&d0) = dist.get(&a) else { return Ok(false) };
        let longest = self.g.num_vertices() as u32;
        for bound in d0..=longest {
            let mut interior = Vec::new();
            if self.route(ei, a, b, bound, &dist, &mut interior)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// BFS distances to b for prune bounds, honoring the blocks that hold
    /// right now; distances only grow as the packing claims more, so the
    /// table stays a valid lower bound mid-route.
    fn dist_to(&self, b: u32, a: u32) -> BTreeMap<u32, u32> {
        let mut dist = BTreeMap::from([(b, 0)]);
        let mut queue = std::collections::VecDeque::from([b]);
        while let Some(x) = queue.pop_front() {
            let dx = dist[&x];
            for y in self.g.neighbors(x) {
                if dist.contains_key(&y) || self.edge_used(x, y) {
                    continue;
                }
                let enterable = y == a
                    || match self.mode {
                        Mode::TopMinor => !self.blocked.contains(&y),
                        Mode::Immersion => true,
                        Mode::StrongImmersion => !self.taken.contains(&y),
                    };
                if enterable {
                    dist.insert(y, dx + 1);
                    if y != a {
                        queue.push_back(y);
                    }
                }
            }
        }
        dist
    }

    fn edge_used(&self, x: u32, y: u32) -> bool {
        matches!(self.mode, Mode::Immersion | Mode::StrongImmersion)
            && self.used_edges.contains(&(x.min(y), x.max(y)))
    }

    fn interior_ok(&self, u: u32, interior: &[u32]) -> bool {
        match self.mode {
            Mode::TopMinor => !self.blocked.contains(&u),
            Mode::Immersion => !interior.contains(&u),
            Mode::StrongImmersion => !self.taken.contains(&u) && !interior.contains(&u),
        }
    }

    fn route(
        &mut self,
        ei: usize,
        cur: u32,
        b: u32,
        remaining: u32,
        dist: &BTreeMap<u32, u32>,
        interior: &mut Vec<u32>,
    ) -> Result<bool, BudgetExceeded> {
        self.tick()?;
        let neighbors: Vec<u32> = self.g.neighbors(cur).collect();
        for u in neighbors {
            if self.edge_used(cur, u) {
                continue;
            }
            if u == b {
                if remaining == 1 {
                    // interiors are already claimed by the descent; only the
                    // closing edge needs marking here
                    let fin = (cur.min(b), cur.max(b));
                    if self.mode != Mode::TopMinor {
                        self.used_edges.insert(fin);
                    }
                    let a = self.assigned[&self.hedges[ei].0];
                    let mut full = vec![a];
                    full.extend(interior.iter().copied());
                    full.push(b);
                    self.chosen.push(full);
                    if self.pack(ei + 1)? {
                        return Ok(true);
                    }
                    self.chosen.pop();
                    if self.mode != Mode::TopMinor {
                        self.used_edges.remove(&fin);
                    }
                }
                continue;
            }
            if remaining >= 2
                && u != self.assigned[&self.hedges[ei].0]
                && self.interior_ok(u, interior)
                && dist.get(&u).is_some_and(|&d| d <= remaining - 1)
            {
                interior.push(u);
                let claimed_edge = (cur.min(u), cur.max(u));
                if self.mode != Mode::TopMinor {
                    self.used_edges.insert(claimed_edge);
                } else {
                    self.blocked.insert(u);
                }
                let hit = self.route(ei, u, b, remaining - 1, dist, interior)?;
                if self.mode != Mode::TopMinor {
                    self.used_edges.remove(&claimed_edge);
                } else {
                    self.blocked.remove(&u);
                }
                interior.pop();
                if hit {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

}

fn interior_of(p: &[u32]) -> &[u32] {
    if p.len() >= 2 {
        &p[1..p.len() - 1]
    } else {
        &[]
    }
}

/// Checks every model invariant against h and g; failures come back as a
/// list of human-readable reasons.
pub fn verify_model(h: &Graph, g: &Graph, model: &Model) -> Result<(), Vec<String>> {
    let (branch, paths, strong, edge_disjoint) = match model {
        Model::TopMinor(m) => (&m.branch, &m.paths, false, false),
        Model::Immersion(m) => (&m.branch, &m.paths, m.strong, true),
    };
    let mut reasons = Vec::new();
    let hset = h.vertex_set();
    let domain: BTreeSet<u32> = branch.keys().copied().collect();
    if domain != hset {
        reasons.push("branch map must be defined on exactly the pattern vertices".into());
    }
    let images: BTreeSet<u32> = branch.values().copied().collect();
    if images.len() != branch.len() {
        reasons.push("branch map must be injective".into());
    }
    if let Some(v) = images.iter().find(|v| !g.contains_vertex(**v)) {
        reasons.push(format!("branch image {v} is not a host vertex"));
    }
    let hedges: BTreeSet<(u32, u32)> = h.edges().into_iter().collect();
    let pedges: BTreeSet<(u32, u32)> = paths.keys().copied().collect();
    if hedges != pedges {
        reasons.push("paths must cover exactly the pattern edges".into());
    }
    for (&(u, v), p) in paths {
        let label = format!("path for ({u},{v})");
        if p.len() < 2 {
            reasons.push(format!("{label} is too short to join two branch vertices"));
            continue;
        }
        match (branch.get(&u), branch.get(&v)) {
            (Some(&bu), Some(&bv)) => {
                if p[0] != bu || *p.last().unwrap() != bv {
                    reasons.push(format!("{label} does not run between the branch images"));
                }
            }
            _ => reasons.push(format!("{label} has no branch images to join")),
        }
        if p.iter().collect::<BTreeSet<_>>().len() != p.len() {
            reasons.push(format!("{label} repeats a vertex"));
        }
        for w in p.windows(2) {
            if !g.has_edge(w[0], w[1]) {
                reasons.push(format!("{label} uses the non-edge ({}, {})", w[0], w[1]));
            }
        }
        if strong {
            for x in &p[1..p.len() - 1] {
                if images.contains(x) {
                    reasons.push(format!("strongness: {label} passes through branch vertex {x}"));
                }
            }
        }
    }
    let keys: Vec<&(u32, u32)> = paths.keys().collect();
    for (i, &ka) in keys.iter().enumerate() {
        for &kb in &keys[i + 1..] {
            let pa = &paths[ka];
            let pb = &paths[kb];
            if edge_disjoint {
                let ea: BTreeSet<(u32, u32)> =
                    pa.windows(2).map(|w| (w[0].min(w[1]), w[0].max(w[1]))).collect();
                if let Some(shared) =
                    pb.windows(2).map(|w| (w[0].min(w[1]), w[0].max(w[1]))).find(|e| ea.contains(e))
                {
                    reasons.push(format!(
                        "edge disjointness: paths for {ka:?} and {kb:?} share the edge {shared:?}"
                    ));
                }
            } else {
                let ia: BTreeSet<u32> = interior_of(pa).iter().copied().collect();
                if let Some(shared) = interior_of(pb).iter().find(|x| ia.contains(x)) {
                    reasons.push(format!(
                        "internal disjointness: paths for {ka:?} and {kb:?} share vertex {shared}"
                    ));
                }
            }
        }
    }
    if !edge_disjoint {
        for (k, p) in paths {
            for x in interior_of(p) {
                if images.contains(x) {
                    reasons.push(format!(
                        "internal disjointness: path for {k:?} passes through branch vertex {x}"
                    ));
                }
            }
        }
    }
    if reasons.is_empty() {
        Ok(())
    } else {
        Err(reasons)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{clique, cycle, double_wheel, graph_classes, grid, m_graph, random_graph};
    use crate::graph::subdivide_edge;

    fn tm(h: &Graph, g: &Graph) -> Option<TopMinorModel> {
        find_topological_minor(h, g, &Budget::default()).unwrap()
    }

    fn assert_valid_tm(h: &Graph, g: &Graph, m: &TopMinorModel) {
        if let Err(reasons) = verify_model(h, g, &Model::TopMinor(m.clone())) {
            panic!("finder produced an invalid model: {reasons:?}");
        }
    }

    fn assert_valid_imm(h: &Graph, g: &Graph, m: &ImmersionModel) {
        if let Err(reasons) = verify_model(h, g, &Model::Immersion(m.clone())) {
            panic!("finder produced an invalid model: {reasons:?}");
        }
    }

    #[test]
    fn identity_and_full_subdivision() {
        let k4 = clique(4).unwrap();
        let m = tm(&k4, &k4).expect("a graph contains itself");
        assert_valid_tm(&k4, &k4, &m);
        assert!(m.paths.values().all(|p| p.len() == 2));

        let mut sub = k4.clone();
        for e in k4.edges() {
            sub = subdivide_edge(&sub, e).unwrap();
        }
        assert_eq!(sub.num_vertices(), 10);
        let m = tm(&k4, &sub).expect("subdivision is the definition");
        assert_valid_tm(&k4, &sub, &m);
        assert!(m.paths.values().all(|p| p.len() == 3));
        // branch vertices must be the four original degree-3 vertices
        assert!(m.branch.values().all(|&v| sub.degree(v) == 3));
    }

    #[test]
    fn absences_are_proven() {
        let k5 = clique(5).unwrap();
        let k33 = Graph::from_edges(6, &[(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)]);
        assert!(tm(&k5, &k33).is_none());
        assert!(tm(&clique(4).unwrap(), &cycle(4).unwrap()).is_none());
        // octahedron: every vertex has degree 4, yet one spare vertex cannot
        // reroute two missing adjacencies disjointly
        let octa = Graph::from_edges(
            6,
            &[(0, 2), (0, 3), (0, 4), (0, 5), (1, 2), (1, 3), (1, 4), (1, 5), (2, 4), (2, 5), (3, 4), (3, 5)],
        );
        assert!(tm(&k5, &octa).is_none());
        // the octahedron is planar, so K_{3,3} cannot hide in it either
        assert!(tm(&k33, &octa).is_none());
        assert!(tm(&k33, &clique(6).unwrap()).is_some());
    }

    #[test]
    fn cofacial_high_vertices_block_the_double_wheel() {
        // two degree-5 fan apexes over an 8-cycle, facing each other across
        // one quadrilateral: planar, and no double_wheel(5) inside
        let mut host = cycle(8).unwrap();
        for v in [8, 9] {
            host.add_vertex(v);
        }
        for c in 0..=4 {
            host.add_edge(8, c);
        }
        for c in 4..=7 {
            host.add_edge(9, c);
        }
        host.add_edge(9, 0);
        let dw5 = double_wheel(5).unwrap();
        let found = find_topological_minor(&dw5, &host, &Budget::raised(15)).unwrap();
        assert!(found.is_none());
    }

    #[test]
    fn hub_edge_hosts_carry_a_complete_pattern() {
        // joining the two hubs wrecks planarity; these models certify it
        // without the exhaustive embedding sweep
        let k5 = clique(5).unwrap();
        for n in [5, 6] {
            let mut host = double_wheel(n).unwrap();
            host.add_edge(n, n + 1);
            let m = tm(&k5, &host).expect("hub-joined double wheel holds a K_5 subdivision");
            assert_valid_tm(&k5, &host, &m);
        }
    }

    #[test]
    fn transitive_spot_checks() {
        let k4 = clique(4).unwrap();
        let mut once = k4.clone();
        for e in k4.edges() {
            once = subdivide_edge(&once, e).unwrap();
        }
        let mut twice = once.clone();
        for e in once.edges() {
            twice = subdivide_edge(&twice, e).unwrap();
        }
        assert!(tm(&k4, &once).is_some());
        assert!(find_topological_minor(&once, &twice, &Budget::default()).unwrap().is_some());
        assert!(tm(&k4, &twice).is_some());
    }

    #[test]
    fn immersion_basics() {
        let k3 = clique(3).unwrap();
        let m = find_immersion(&k3, &k3, true, &Budget::default()).unwrap().unwrap();
        assert_valid_imm(&k3, &k3, &m);
        assert!(find_immersion(&clique(4).unwrap(), &cycle(4).unwrap(), false, &Budget::default())
            .unwrap()
            .is_none());
        // strong implies weak on a nontrivial instance
        let host = m_graph(3).unwrap();
        let strong = find_immersion(&k3, &host, true, &Budget::default()).unwrap().unwrap();
        assert_valid_imm(&k3, &host, &strong);
        assert!(find_immersion(&k3, &host, false, &Budget::default()).unwrap().is_some());
    }

    #[test]
    fn small_patterns_strongly_immerse_into_plumbing_trees() {
        for t in [2u32, 3] {
            let host = m_graph(t).unwrap();
            let mut tried = 1; // the empty pattern is immersed by definition
            for n in 1..=t {
                for h in graph_classes(n).unwrap() {
                    let m = find_immersion(&h, &host, true, &Budget::default())
                        .unwrap()
                        .unwrap_or_else(|| panic!("{:?} should immerse in t={t}", h.edges()));
                    assert_valid_imm(&h, &host, &m);
                    tried += 1;
                }
            }
            assert_eq!(tried, if t == 2 { 4 } else { 8 });
        }
    }

    /// Minor oracle by brute force: assign each host vertex to a branch set
    /// or to none, then demand nonempty connected sets and a host edge
    /// behind every pattern edge. Parts are bitmasks over host indices so
    /// the leaf checks stay cheap on 8-vertex hosts.
    fn is_minor(h: &Graph, g: &Graph) -> bool {
        let hv: Vec<u32> = h.vertices().collect();
        let gv: Vec<u32> = g.vertices().collect();
        let k = hv.len();
        if k == 0 {
            return true;
        }
        if k > gv.len() || h.num_edges() > g.num_edges() {
            return false;
        }
        let adj: Vec<u64> = gv
            .iter()
            .map(|&v| {
                gv.iter()
                    .enumerate()
                    .filter(|(_, &u)| g.has_edge(v, u))
                    .fold(0u64, |m, (j, _)| m | 1 << j)
            })
            .collect();
        let hedges: Vec<(usize, usize)> = h
            .edges()
            .iter()
            .map(|&(u, v)| {
                (
                    hv.iter().position(|&x| x == u).unwrap(),
                    hv.iter().position(|&x| x == v).unwrap(),
                )
            })
            .collect();
        fn connected(adj: &[u64], part: u64) -> bool {
            let start = part.trailing_zeros() as usize;
            let mut seen = 1u64 << start;
            let mut frontier = seen;
            while frontier != 0 {
                let mut grow = 0;
                let mut f = frontier;
                while f != 0 {
                    let i = f.trailing_zeros() as usize;
                    f &= f - 1;
                    grow |= adj[i] & part;
                }
                frontier = grow & !seen;
                seen |= grow;
            }
            seen & part == part
        }
        fn rec(
            adj: &[u64],
            hedges: &[(usize, usize)],
            n: usize,
            i: usize,
            parts: &mut Vec<u64>,
        ) -> bool {
            let k = parts.len();
            if i == n {
                if parts.iter().any(|&p| p == 0) {
                    return false;
                }
                if !parts.iter().all(|&p| connected(adj, p)) {
                    return false;
                }
                return hedges.iter().all(|&(pu, pv)| {
                    let mut a = parts[pu];
                    while a != 0 {
                        let x = a.trailing_zeros() as usize;
                        a &= a - 1;
                        if adj[x] & parts[pv] != 0 {
                            return true;
                        }
                    }
                    false
                });
            }
            let unfilled = parts.iter().filter(|&&p| p == 0).count();
            if unfilled > n - i {
                return false;
            }
            for p in 0..k {
                parts[p] |= 1 << i;
                if rec(adj, hedges, n, i + 1, parts) {
                    return true;
                }
                parts[p] &= !(1u64 << i);
            }
            rec(adj, hedges, n, i + 1, parts)
        }
        rec(&adj, &hedges, gv.len(), 0, &mut vec![0u64; k])
    }

    #[test]
    fn subcubic_containment_equals_minor_containment() {
        let patterns: Vec<Graph> = (1..=4)
            .flat_map(|n| graph_classes(n).unwrap())
            .filter(|h| h.vertices().all(|v| h.degree(v) <= 3))
            .collect();
        assert_eq!(patterns.len(), 18);
        for n in 1..=5 {
            for g in graph_classes(n).unwrap() {
                for h in &patterns {
                    let by_search = tm(h, &g).is_some();
                    assert_eq!(by_search, is_minor(h, &g), "{:?} in {:?}", h.edges(), g.edges());
                }
            }
        }
        // a couple of taller hosts against the same oracle
        for seed in 0..6 {
            let g = random_graph(8, 0.35, 70 + seed);
            for h in patterns.iter().filter(|h| h.num_vertices() == 4) {
                assert_eq!(tm(h, &g).is_some(), is_minor(h, &g));
            }
        }
    }

    #[test]
    fn containment_implies_immersion() {
        let b = Budget::default();
        for seed in 0..60 {
            let h = random_graph(4, 0.55, seed);
            let g = random_graph(8, 0.4, 1000 + seed);
            if let Some(m) = find_topological_minor(&h, &g, &b).unwrap() {
                assert_valid_tm(&h, &g, &m);
                let s = find_immersion(&h, &g, true, &b).unwrap().expect("tm implies strong");
                assert_valid_imm(&h, &g, &s);
                let w = find_immersion(&h, &g, false, &b).unwrap().expect("strong implies weak");
                assert_valid_imm(&h, &g, &w);
            }
        }
    }

    #[test]
    fn verifier_names_the_violation() {
        // two paths routed through one extra apex
        let mut host = clique(4).unwrap();
        host.add_vertex(4);
        for c in 0..=2 {
            host.add_edge(4, c);
        }
        let k4 = clique(4).unwrap();
        let mut m = tm(&k4, &host).unwrap();
        m.paths.insert((0, 1), vec![0, 4, 1]);
        m.paths.insert((0, 2), vec![0, 4, 2]);
        let reasons = verify_model(&k4, &host, &Model::TopMinor(m)).unwrap_err();
        assert!(reasons.iter().any(|r| r.contains("internal disjointness")));

        // strong immersion path through a branch vertex
        let p3 = Graph::from_edges(3, &[(0, 1), (1, 2)]);
        let m = ImmersionModel {
            branch: BTreeMap::from([(0, 0), (1, 1), (2, 2)]),
            paths: BTreeMap::from([((0, 1), vec![0, 3, 1]), ((1, 2), vec![1, 0, 2])]),
            strong: true,
        };
        let reasons = verify_model(&p3, &clique(4).unwrap(), &Model::Immersion(m)).unwrap_err();
        assert!(reasons.iter().any(|r| r.contains("strongness")));
        assert!(!reasons.iter().any(|r| r.contains("edge disjointness")));

        // an honest model passes with path direction as recorded
        let good = ImmersionModel {
            branch: BTreeMap::from([(0, 0), (1, 1), (2, 2)]),
            paths: BTreeMap::from([((0, 1), vec![0, 3, 1]), ((1, 2), vec![1, 2])]),
            strong: true,
        };
        assert!(verify_model(&p3, &clique(4).unwrap(), &Model::Immersion(good)).is_ok());
    }

    #[test]
    fn budgets_trip_and_raise() {
        let big = grid(4, 8).unwrap();
        assert_eq!(big.num_vertices(), 32);
        let c4 = cycle(4).unwrap();
        assert!(matches!(
            find_topological_minor(&c4, &big, &Budget::default()),
            Err(PatternError::Budget(_))
        ));
        let m = find_topological_minor(&c4, &big, &Budget::raised(32)).unwrap().unwrap();
        assert_valid_tm(&c4, &big, &m);

        let k6 = clique(6).unwrap();
        assert!(matches!(
            find_topological_minor(&k6, &k6, &Budget::default()),
            Err(PatternError::Budget(_))
        ));
        let m = find_topological_minor(&k6, &k6, &Budget::raised(15)).unwrap().unwrap();
        assert!(m.paths.values().all(|p| p.len() == 2));
    }

    #[test]
    fn empty_and_edgeless_patterns() {
        let empty = Graph::new();
        let k3 = clique(3).unwrap();
        let m = tm(&empty, &k3).unwrap();
        assert!(m.branch.is_empty() && m.paths.is_empty());
        let dots = Graph::with_vertices(3);
        assert!(tm(&dots, &k3).is_some());
        assert!(tm(&Graph::with_vertices(4), &k3).is_none());
        let im = find_immersion(&dots, &k3, true, &Budget::default()).unwrap();
        assert!(im.is_some());
    }
}
