//! Clique-sum composition and the low-admissibility ordering it buys.
//! Pieces glue pairwise by identifying equal-size cliques (optionally
//! dropping seam edges afterwards); `converse_ordering` walks the same tree
//! and emits a vertex ordering whose ∞-admissibility stays within a + D
//! whenever every piece has at most a vertices of degree above D.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::graph::{high_degree_vertices, parse_graph, serialize_graph, Graph, Ordering};
use crate::ContractError;

/// One gluing step: `overlap` maps a clique of the child piece onto a clique
/// of the graph composed so far (composed vertex ids); `deleted` lists seam
/// edges (composed ids) removed after the identification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeEdge {
    pub parent: usize,
    pub child: usize,
    pub overlap: BTreeMap<u32, u32>,
    pub deleted: BTreeSet<(u32, u32)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueSumTree {
    pub pieces: Vec<Graph>,
    pub tree_edges: Vec<TreeEdge>,
}

fn contract(msg: impl Into<String>) -> ContractError {
    ContractError { clause: msg.into() }
}

fn is_clique(g: &Graph, verts: &BTreeSet<u32>) -> bool {
    verts.iter().all(|&v| g.contains_vertex(v))
        && verts
            .iter()
            .all(|&v| verts.iter().all(|&u| u == v || g.has_edge(u, v)))
}

/// Identifies a clique of g2 (the overlap's domain) with a clique of g1 (its
/// image) and returns the union minus `deleted`. Vertices of g2 outside the
/// overlap get fresh ids above g1, in ascending order of their g2 ids.
pub fn clique_sum(
    g1: &Graph,
    g2: &Graph,
    overlap: &BTreeMap<u32, u32>,
    deleted: &BTreeSet<(u32, u32)>,
) -> Result<Graph, ContractError> {
    Ok(clique_sum_with_map(g1, g2, overlap, deleted)?.0)
}

fn clique_sum_with_map(
    g1: &Graph,
    g2: &Graph,
    overlap: &BTreeMap<u32, u32>,
    deleted: &BTreeSet<(u32, u32)>,
) -> Result<(Graph, BTreeMap<u32, u32>), ContractError> {
    let domain: BTreeSet<u32> = overlap.keys().copied().collect();
    let image: BTreeSet<u32> = overlap.values().copied().collect();
    if image.len() != overlap.len() {
        return Err(contract("overlap map must be injective"));
    }
    if !is_clique(g2, &domain) {
        return Err(contract("overlap domain must induce a clique in the incoming piece"));
    }
    if !is_clique(g1, &image) {
        return Err(contract("overlap image must induce a clique in the composed graph"));
    }
    for &(u, v) in deleted {
        if u == v || !image.contains(&u) || !image.contains(&v) {
            return Err(contract(format!(
                "deleted edge ({u}, {v}) is not an edge of the identified clique"
            )));
        }
    }
    let mut out = g1.clone();
    let mut translate = overlap.clone();
    let mut next = g1.fresh_id();
    for v in g2.vertices() {
        if !translate.contains_key(&v) {
            translate.insert(v, next);
            out.add_vertex(next);
            next += 1;
        }
    }
    for (u, v) in g2.edges() {
        out.add_edge(translate[&u], translate[&v]);
    }
    for &(u, v) in deleted {
        out.remove_edge(u, v);
    }
    Ok((out, translate))
}

struct Composition {
    graph: Graph,
    /// per piece, its local-id → composed-id map, in attach order
    placed: Vec<(usize, BTreeMap<u32, u32>)>,
}

fn compose_steps(t: &CliqueSumTree, keep_seams: bool) -> Result<Composition, ContractError> {
    if t.pieces.is_empty() {
        return Err(contract("a clique-sum tree needs at least one piece"));
    }
    if t.tree_edges.len() + 1 != t.pieces.len() {
        return Err(contract(format!(
            "{} pieces need exactly {} tree edges, got {}",
            t.pieces.len(),
            t.pieces.len() - 1,
            t.tree_edges.len()
        )));
    }
    let mut child_of: BTreeMap<usize, &TreeEdge> = BTreeMap::new();
    for e in &t.tree_edges {
        if e.parent >= t.pieces.len() || e.child >= t.pieces.len() {
            return Err(contract(format!(
                "tree edge ({}, {}) names a missing piece",
                e.parent, e.child
            )));
        }
        if e.parent == e.child || child_of.insert(e.child, e).is_some() {
            return Err(contract(format!(
                "tree edge ({}, {}) re-attaches an already attached piece",
                e.parent, e.child
            )));
        }
    }
    let root = (0..t.pieces.len())
        .find(|i| !child_of.contains_key(i))
        .ok_or_else(|| contract("tree edges leave no root piece"))?;
    let identity: BTreeMap<u32, u32> = t.pieces[root].vertices().map(|v| (v, v)).collect();
    let mut comp =
        Composition { graph: t.pieces[root].clone(), placed: vec![(root, identity)] };
    let mut done: BTreeSet<usize> = BTreeSet::from([root]);
    while done.len() < t.pieces.len() {
        // lowest-index piece whose parent is already in place
        let next = (0..t.pieces.len()).find(|i| {
            !done.contains(i) && done.contains(&child_of[i].parent)
        });
        let Some(i) = next else {
            return Err(contract("tree edges do not connect every piece to the root"));
        };
        let link = child_of[&i];
        let no_seam_cuts = BTreeSet::new();
        let deleted = if keep_seams { &no_seam_cuts } else { &link.deleted };
        let (graph, map) = clique_sum_with_map(&comp.graph, &t.pieces[i], &link.overlap, deleted)
            .map_err(|e| {
                contract(format!("tree edge ({}, {}): {}", link.parent, link.child, e.clause))
            })?;
        comp.graph = graph;
        comp.placed.push((i, map));
        done.insert(i);
    }
    Ok(comp)
}

/// Folds the pieces along the tree: root first, then always the
/// lowest-index attachable piece, so the result never depends on how the
/// tree edges are listed.
pub fn compose(t: &CliqueSumTree) -> Result<Graph, ContractError> {
    Ok(compose_steps(t, false)?.graph)
}

/// Builds an ordering of compose(t) whose ∞-admissibility is at most a + D,
/// provided every piece has at most `a` vertices of degree above `d`. Each
/// piece is ordered overlap clique first, then its high-degree vertices,
/// then the rest (ids ascending within each block); children append after
/// their parents with the overlap prefix skipped. Seam edges stay in place
/// while ordering; the sequence serves the seam-deleted graph as well since
/// dropping edges never raises an ordering's admissibility.
pub fn converse_ordering(
    t: &CliqueSumTree,
    d: u32,
    a: u32,
) -> Result<Ordering, ContractError> {
    compose_steps(t, false)?;
    for (i, piece) in t.pieces.iter().enumerate() {
        let high = high_degree_vertices(piece, d as usize);
        if high.len() as u32 > a {
            return Err(contract(format!(
                "piece {i} has {} vertices of degree above {d}, but the profile allows {a}",
                high.len()
            )));
        }
    }
    let comp = compose_steps(t, true)?;
    let mut seq = Vec::new();
    for (pi, translate) in &comp.placed {
        let piece = &t.pieces[*pi];
        let x: BTreeSet<u32> = if seq.is_empty() {
            BTreeSet::new()
        } else {
            t.tree_edges.iter().find(|e| e.child == *pi).unwrap().overlap.keys().copied().collect()
        };
        let high = high_degree_vertices(piece, d as usize);
        let mut block = |want_high: bool| {
            seq.extend(
                piece
                    .vertices()
                    .filter(|&v| !x.contains(&v) && high.contains(&v) == want_high)
                    .map(|v| translate[&v]),
            )
        };
        block(true);
        block(false);
    }
    Ok(Ordering::new(seq))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TreeDoc {
    pieces: Vec<String>,
    #[serde(default)]
    tree_edges: Vec<LinkDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LinkDoc {
    parent: usize,
    child: usize,
    overlap: Vec<[u32; 2]>,
    #[serde(default)]
    deleted: Vec<[u32; 2]>,
}

/// JSON document: pieces as embedded edge-list strings, tree edges with
/// explicit `[child vertex, composed vertex]` overlap pairs and optional
/// `[u, v]` seam deletions.
pub fn parse_tree(json: &str) -> Result<CliqueSumTree, ContractError> {
    let doc: TreeDoc = serde_json::from_str(json)
        .map_err(|e| contract(format!("malformed clique-sum document: {e}")))?;
    let mut pieces = Vec::new();
    for (i, text) in doc.pieces.iter().enumerate() {
        pieces
            .push(parse_graph(text).map_err(|e| contract(format!("piece {i}: {e}")))?);
    }
    let mut tree_edges = Vec::new();
    for l in doc.tree_edges {
        let mut overlap = BTreeMap::new();
        for [from, to] in l.overlap {
            if overlap.insert(from, to).is_some() {
                return Err(contract(format!("overlap maps vertex {from} twice")));
            }
        }
        let deleted = l.deleted.iter().map(|&[u, v]| (u.min(v), u.max(v))).collect();
        tree_edges.push(TreeEdge { parent: l.parent, child: l.child, overlap, deleted });
    }
    Ok(CliqueSumTree { pieces, tree_edges })
}

pub fn serialize_tree(t: &CliqueSumTree) -> String {
    let doc = TreeDoc {
        pieces: t.pieces.iter().map(serialize_graph).collect(),
        tree_edges: t
            .tree_edges
            .iter()
            .map(|e| LinkDoc {
                parent: e.parent,
                child: e.child,
                overlap: e.overlap.iter().map(|(&a, &b)| [a, b]).collect(),
                deleted: e.deleted.iter().map(|&(u, v)| [u, v]).collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("document serialization cannot fail")
}
