//! Finite metric spaces and the radius-growing sparsification loop: repeatedly
//! delete one point of a too-close pair while growing the covering radius by
//! the step function, until the survivors are pairwise f(t')-separated.

use crate::graph::Graph;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Symmetric nonnegative distances on a finite point set, triangle
/// inequality checked at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteMetric {
    points: BTreeSet<u32>,
    dist: BTreeMap<(u32, u32), f64>,
}

impl FiniteMetric {
    /// Builds from distances given once per unordered pair {x, y}, x != y.
    pub fn new(points: BTreeSet<u32>, pair_dist: &[(u32, u32, f64)]) -> Result<Self, String> {
        let mut dist = BTreeMap::new();
        for &(x, y, d) in pair_dist {
            if x == y {
                return Err(format!("distance given for identical points {x},{x}"));
            }
            if !points.contains(&x) || !points.contains(&y) {
                return Err(format!("distance references unknown point in ({x},{y})"));
            }
            if !(d >= 0.0) {
                return Err(format!("negative or NaN distance {d} for ({x},{y})"));
            }
            let key = (x.min(y), x.max(y));
            if let Some(&prev) = dist.get(&key) {
                if prev != d {
                    return Err(format!("conflicting distances for ({x},{y}): {prev} vs {d}"));
                }
            }
            dist.insert(key, d);
        }
        let m = FiniteMetric { points, dist };
        let pts: Vec<u32> = m.points.iter().copied().collect();
        for (i, &x) in pts.iter().enumerate() {
            for &y in &pts[i + 1..] {
                if !m.dist.contains_key(&(x, y)) {
                    return Err(format!("missing distance for ({x},{y})"));
                }
            }
        }
        for &x in &pts {
            for &y in &pts {
                for &z in &pts {
                    if x != y && y != z && x != z && m.d(x, z) > m.d(x, y) + m.d(y, z) {
                        return Err(format!(
                            "triangle inequality fails: d({x},{z}) > d({x},{y}) + d({y},{z})"
                        ));
                    }
                }
            }
        }
        Ok(m)
    }

    /// Hop-count shortest-path metric of a connected graph.
    pub fn from_graph(g: &Graph) -> Result<Self, String> {
        if !g.is_connected() {
            return Err("graph is disconnected; hop metric would be infinite".into());
        }
        let verts: Vec<u32> = g.vertices().collect();
        let mut pair_dist = Vec::new();
        for &s in &verts {
            let mut depth: BTreeMap<u32, usize> = BTreeMap::from([(s, 0)]);
            let mut frontier = vec![s];
            let mut level = 0usize;
            while !frontier.is_empty() {
                level += 1;
                let mut next = Vec::new();
                for &v in &frontier {
                    for u in g.neighbors(v) {
                        if let std::collections::btree_map::Entry::Vacant(e) = depth.entry(u) {
                            e.insert(level);
                            next.push(u);
                        }
                    }
                }
                frontier = next;
            }
            for (&v, &d) in &depth {
                if v > s {
                    pair_dist.push((s, v, d as f64));
                }
            }
        }
        FiniteMetric::new(verts.into_iter().collect(), &pair_dist)
    }

    pub fn points(&self) -> &BTreeSet<u32> {
        &self.points
    }

    /// Distance; panics on unknown points (construction guarantees totality).
    pub fn d(&self, x: u32, y: u32) -> f64 {
        if x == y {
            return 0.0;
        }
        self.dist[&(x.min(y), x.max(y))]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractError {
    pub clause: String,
}

impl fmt::Display for ContractError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "precondition violated: {}", self.clause)
    }
}

impl std::error::Error for ContractError {}

fn violated(clause: impl Into<String>) -> ContractError {
    ContractError { clause: clause.into() }
}

/// Sparsifies Z while keeping U covered. Starting from radius t, as long as
/// two surviving points lie at distance < f(t_i), one of them is deleted and
/// the radius grows to t_{i+1} = t_i + f(t_i). Points of zpp are protected
/// (they are pairwise >= t_{n-1} apart by precondition, so a violating pair
/// always has a deletable member). Deterministic: pairs are scanned in
/// lexicographic order and, when both members are deletable, the smaller
/// identifier is deleted.
///
/// Returns (zp, tp) with zpp ⊆ zp ⊆ z, tp ≤ t_{n-1}, every u ∈ U within
/// distance < tp of zp, and zp pairwise ≥ f(tp) apart.
pub fn metric_sparsify(
    m: &FiniteMetric,
    z: &BTreeSet<u32>,
    u: &BTreeSet<u32>,
    zpp: &BTreeSet<u32>,
    t: f64,
    n: usize,
    f: &dyn Fn(f64) -> f64,
) -> Result<(BTreeSet<u32>, f64), ContractError> {
    for &p in z.union(u) {
        if !m.points().contains(&p) {
            return Err(violated(format!("point {p} not in the metric space")));
        }
    }
    if !zpp.is_subset(z) {
        return Err(violated("Z'' ⊆ Z"));
    }
    if z.len() > n {
        return Err(violated(format!("|Z| ≤ n (|Z| = {}, n = {n})", z.len())));
    }
    for &p in u {
        if !z.iter().any(|&q| m.d(p, q) < t) {
            return Err(violated(format!("every u ∈ U within distance < t of Z (u = {p})")));
        }
    }
    if z.is_empty() {
        return Ok((BTreeSet::new(), t));
    }

    // radii t_0 < t_1 < ... < t_{n-1}; deletions shrink Z so at most
    // |Z| - 1 ≤ n - 1 steps happen and the final radius stays ≤ t_{n-1}
    let mut radii = Vec::with_capacity(n);
    let mut ti = t;
    for i in 0..n {
        let step = f(ti);
        if !(step > 0.0) {
            return Err(violated(format!("f positive (f({ti}) = {step})")));
        }
        if i + 1 < n {
            if f(ti + step) < step {
                return Err(violated("f nondecreasing"));
            }
            radii.push(ti);
            ti += step;
        } else {
            radii.push(ti);
        }
    }
    let t_last = radii[n - 1];
    {
        let zpp_vec: Vec<u32> = zpp.iter().copied().collect();
        for (i, &a) in zpp_vec.iter().enumerate() {
            for &b in &zpp_vec[i + 1..] {
                if m.d(a, b) < t_last {
                    return Err(violated(format!(
                        "Z'' pairwise ≥ t_(n-1) (d({a},{b}) = {} < {t_last})",
                        m.d(a, b)
                    )));
                }
            }
        }
    }

    let mut alive: BTreeSet<u32> = z.clone();
    let mut i = 0usize;
    loop {
        let sep = f(radii[i]);
        let mut victim: Option<u32> = None;
        'scan: for &a in &alive {
            for &b in alive.range(a + 1..) {
                if m.d(a, b) < sep {
                    victim = Some(match (zpp.contains(&a), zpp.contains(&b)) {
                        (false, false) => a,
                        (false, true) => a,
                        (true, false) => b,
                        (true, true) => unreachable!("Z'' pair below t_(n-1) separation"),
                    });
                    break 'scan;
                }
            }
        }
        match victim {
            None => return Ok((alive, radii[i])),
            Some(v) => {
                alive.remove(&v);
                i += 1;
                debug_assert!(i < n, "more deletions than |Z| - 1");
            }
        }
    }
}
