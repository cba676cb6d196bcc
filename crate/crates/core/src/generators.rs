//! Constructors for the graph families the rest of the crate leans on:
//! double wheels, the two-level stars M_t, hexagonal brick walls (plain and
//! with perimeter apexes), and the usual cliques/cycles/paths/grids. The
//! planar families also hand out their drawing as a rotation system, which
//! makes planarity an O(E) face count instead of an enumeration.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::embedding::{trace_faces, Embedding, FaceWalk};
use crate::graph::Graph;

/// Cycle 0..n-1 plus two nonadjacent hubs (ids n and n+1) joined to every
/// cycle vertex; |V| = n+2, |E| = 3n.
pub fn double_wheel(n: u32) -> Result<Graph, String> {
    if n < 3 {
        return Err(format!("double wheel needs a cycle of length at least 3, got {n}"));
    }
    let mut g = Graph::with_vertices(n + 2);
    for i in 0..n {
        g.add_edge(i, (i + 1) % n);
        g.add_edge(i, n);
        g.add_edge(i, n + 1);
    }
    Ok(g)
}

/// The standard drawing: hub n inside the cycle, hub n+1 outside, so every
/// face is a triangle.
pub fn double_wheel_embedding(n: u32) -> Result<Embedding, String> {
    let g = double_wheel(n)?;
    let mut rotation: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    rotation.insert(n, (0..n).collect());
    // seen from outside, the cycle winds the other way
    rotation.insert(n + 1, std::iter::once(0).chain((1..n).rev()).collect());
    for i in 0..n {
        rotation.insert(i, vec![n + 1, (i + 1) % n, n, (i + n - 1) % n]);
    }
    Embedding::all_positive(g, rotation)
}

/// M_t: center w (id 0), outer vertices w_1..w_t (ids 1..t), and midpoints
/// z_ij (ids t+1..t+t*t, grouped by i) with edges w-z_ij and w_i-z_ij.
/// deg(w) = t*t, deg(w_i) = t, deg(z_ij) = 2.
pub fn m_graph(t: u32) -> Result<Graph, String> {
    if t < 1 {
        return Err(format!("m_graph needs t >= 1, got {t}"));
    }
    let mut g = Graph::with_vertices(1 + t + t * t);
    for i in 1..=t {
        for j in 1..=t {
            let z = t + (i - 1) * t + j;
            g.add_edge(0, z);
            g.add_edge(i, z);
        }
    }
    Ok(g)
}

/// Star drawing of M_t: rays from w in id order, each w_i outside the arc of
/// its own group of midpoints.
pub fn m_graph_embedding(t: u32) -> Result<Embedding, String> {
    let g = m_graph(t)?;
    let z = |i: u32, j: u32| t + (i - 1) * t + j;
    let mut rotation: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    rotation.insert(0, (1..=t).flat_map(|i| (1..=t).map(move |j| z(i, j))).collect());
    for i in 1..=t {
        rotation.insert(i, (1..=t).rev().map(|j| z(i, j)).collect());
        for j in 1..=t {
            rotation.insert(z(i, j), vec![0, i]);
        }
    }
    Embedding::all_positive(g, rotation)
}

/// Hexagonal brick wall with rows x cols bricks: on the (rows+1) x (2cols+2)
/// grid, keep the vertical rung (i,j)-(i+1,j) iff i+j is even, then drop the
/// two degree-1 corners that creates. Ids are row-major over the surviving
/// cells, so |V| = (rows+1)(2cols+2) - 2; maximum degree 3.
pub fn wall(rows: u32, cols: u32) -> Result<Graph, String> {
    Ok(wall_embedding(rows, cols)?.0.graph().clone())
}

/// The wall with its grid drawing and the perimeter face (ties on face
/// length go to trace order, which only matters for the one-brick wall).
pub fn wall_embedding(rows: u32, cols: u32) -> Result<(Embedding, FaceWalk), String> {
    if rows < 1 || cols < 1 {
        return Err(format!("wall needs positive brick counts, got {rows}x{cols}"));
    }
    let (h, w) = (rows as i64 + 1, 2 * cols as i64 + 2);
    let rung = |i: i64, j: i64| (i + j) % 2 == 0;
    let gone_a = (0i64, w - 1);
    let gone_b = if rows % 2 == 0 { (h - 1, 0) } else { (h - 1, w - 1) };
    let kept = |i: i64, j: i64| {
        (0..h).contains(&i) && (0..w).contains(&j) && (i, j) != gone_a && (i, j) != gone_b
    };
    let mut id: BTreeMap<(i64, i64), u32> = BTreeMap::new();
    for i in 0..h {
        for j in 0..w {
            if kept(i, j) {
                let next = id.len() as u32;
                id.insert((i, j), next);
            }
        }
    }
    let mut g = Graph::new();
    let mut rotation: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for (&(i, j), &v) in &id {
        g.add_vertex(v);
        let mut rot = Vec::new();
        // east, north, west, south; the rung above (i,j) is the one at i-1
        if kept(i, j + 1) {
            rot.push(id[&(i, j + 1)]);
        }
        if i > 0 && rung(i - 1, j) && kept(i - 1, j) {
            rot.push(id[&(i - 1, j)]);
        }
        if kept(i, j - 1) {
            rot.push(id[&(i, j - 1)]);
        }
        if rung(i, j) && kept(i + 1, j) {
            rot.push(id[&(i + 1, j)]);
        }
        for &u in &rot {
            g.add_edge(v, u);
        }
        rotation.insert(v, rot);
    }
    let e = Embedding::all_positive(g, rotation)?;
    let faces = trace_faces(&e)?;
    let outer = faces
        .iter()
        .enumerate()
        .max_by_key(|&(i, f)| (f.len(), std::cmp::Reverse(i)))
        .map(|(_, f)| f.clone())
        .expect("a wall has at least two faces");
    Ok((e, outer))
}

/// wall(t*t, t*t) with every perimeter edge subdivided once and t apex
/// vertices added inside the perimeter face, apex i joined to the i-th block
/// of t consecutive subdivision vertices. Apexes take the t largest ids.
pub fn admissibility_wall(t: u32) -> Result<Graph, String> {
    Ok(admissibility_wall_embedding(t)?.0.graph().clone())
}

/// The apexed wall with its drawing and the face every apex lies on.
pub fn admissibility_wall_embedding(t: u32) -> Result<(Embedding, FaceWalk), String> {
    if t < 2 {
        return Err(format!("admissibility wall needs t >= 2, got {t}"));
    }
    let (we, outer) = wall_embedding(t * t, t * t)?;
    assert!(outer.is_simple_cycle(), "wall perimeter is a simple cycle");
    let ring = outer.corners();
    let n = ring.len();
    if (t * t) as usize > n {
        return Err(format!("perimeter supplies {n} subdivision points, need {}", t * t));
    }
    let base = we.graph().num_vertices() as u32;
    let mut g = we.graph().clone();
    let mut rotation: BTreeMap<u32, Vec<u32>> =
        g.vertices().map(|v| (v, we.rotation(v).to_vec())).collect();
    let swap = |rot: &mut Vec<u32>, from: u32, to: u32| {
        let k = rot.iter().position(|&x| x == from).unwrap();
        rot[k] = to;
    };
    // split every perimeter edge following the walk; midpoint k sits between
    // ring[k] and ring[k+1] and gets id base+k
    for k in 0..n {
        let (u, v) = (ring[k], ring[(k + 1) % n]);
        let s = base + k as u32;
        g.remove_edge(u, v);
        g.add_edge(u, s);
        g.add_edge(s, v);
        swap(rotation.get_mut(&u).unwrap(), v, s);
        swap(rotation.get_mut(&v).unwrap(), u, s);
        rotation.insert(s, vec![u, v]);
    }
    // listing each apex fan against the walk direction keeps it on the
    // perimeter side under successor face tracing
    for i in 0..t {
        let a = base + n as u32 + i;
        for j in 0..t {
            let s = base + i * t + j;
            g.add_edge(a, s);
            rotation.get_mut(&s).unwrap().insert(1, a);
        }
        rotation.insert(a, (0..t).rev().map(|j| base + i * t + j).collect());
    }
    let e = Embedding::all_positive(g, rotation)?;
    let apexes: Vec<u32> = (base + n as u32..base + n as u32 + t).collect();
    let faces = trace_faces(&e)?;
    let dom = faces
        .iter()
        .find(|f| {
            let vs = f.vertex_set();
            apexes.iter().all(|a| vs.contains(a))
        })
        .ok_or("no single face sees every apex")?
        .clone();
    Ok((e, dom))
}

pub fn clique(n: u32) -> Result<Graph, String> {
    if n < 1 {
        return Err(format!("clique needs at least 1 vertex, got {n}"));
    }
    let mut g = Graph::with_vertices(n);
    for u in 0..n {
        for v in u + 1..n {
            g.add_edge(u, v);
        }
    }
    Ok(g)
}

pub fn cycle(n: u32) -> Result<Graph, String> {
    if n < 3 {
        return Err(format!("a simple cycle needs at least 3 vertices, got {n}"));
    }
    let mut g = Graph::with_vertices(n);
    for i in 0..n {
        g.add_edge(i, (i + 1) % n);
    }
    Ok(g)
}

pub fn path(n: u32) -> Result<Graph, String> {
    if n < 1 {
        return Err(format!("path needs at least 1 vertex, got {n}"));
    }
    let mut g = Graph::with_vertices(n);
    for i in 1..n {
        g.add_edge(i - 1, i);
    }
    Ok(g)
}

/// rows x cols vertex grid, ids row-major.
pub fn grid(rows: u32, cols: u32) -> Result<Graph, String> {
    if rows < 1 || cols < 1 {
        return Err(format!("grid needs positive dimensions, got {rows}x{cols}"));
    }
    let mut g = Graph::with_vertices(rows * cols);
    let id = |i: u32, j: u32| i * cols + j;
    for i in 0..rows {
        for j in 0..cols {
            if j + 1 < cols {
                g.add_edge(id(i, j), id(i, j + 1));
            }
            if i + 1 < rows {
                g.add_edge(id(i, j), id(i + 1, j));
            }
        }
    }
    Ok(g)
}

/// Colex index of the pair {u, v}: pairs with larger max endpoint come
/// later, so the bits of a graph on fewer vertices keep their positions.
fn pair_bit(u: u32, v: u32) -> u32 {
    let (a, b) = (u.min(v), u.max(v));
    b * (b - 1) / 2 + a
}

fn mask_to_graph(n: u32, mask: u32) -> Graph {
    let mut g = Graph::with_vertices(n);
    for u in 0..n {
        for v in u + 1..n {
            if mask >> pair_bit(u, v) & 1 == 1 {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// Smallest edge mask reachable by relabeling vertices.
fn canonical_mask(n: u32, mask: u32, perms: &[Vec<u32>]) -> u32 {
    let mut best = u32::MAX;
    for perm in perms {
        let mut m = 0u32;
        for u in 0..n {
            for v in u + 1..n {
                if mask >> pair_bit(u, v) & 1 == 1 {
                    m |= 1 << pair_bit(perm[u as usize], perm[v as usize]);
                }
            }
        }
        best = best.min(m);
    }
    best
}

fn permutations(n: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for k in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=k as usize).map(move |slot| {
                    let mut q = p.clone();
                    q.insert(slot, k);
                    q
                })
            })
            .collect();
    }
    out
}

/// One representative per isomorphism class of graphs on exactly n labeled
/// vertices, canonical-mask order. Grown a vertex at a time: every n-vertex
/// graph is some (n-1)-vertex graph plus one vertex with some neighborhood,
/// so extending every smaller class misses nothing. n ≤ 7 (1044 classes).
pub fn graph_classes(n: u32) -> Result<Vec<Graph>, String> {
    if n < 1 || n > 7 {
        return Err(format!("graph classes are enumerated for 1 ≤ n ≤ 7, got {n}"));
    }
    let mut masks: Vec<u32> = vec![0]; // the 1-vertex graph
    for m in 2..=n {
        let perms = permutations(m);
        let shift = (m - 1) * (m - 2) / 2; // new-vertex bits sit above the old pairs
        let mut grown: Vec<u32> = masks
            .iter()
            .flat_map(|&base| (0u32..1 << (m - 1)).map(move |nbhd| base | nbhd << shift))
            .map(|mask| canonical_mask(m, mask, &perms))
            .collect();
        grown.sort_unstable();
        grown.dedup();
        masks = grown;
    }
    Ok(masks.into_iter().map(|m| mask_to_graph(n, m)).collect())
}

pub fn connected_graph_classes(n: u32) -> Result<Vec<Graph>, String> {
    Ok(graph_classes(n)?.into_iter().filter(|g| g.is_connected()).collect())
}

/// Seeded Erdős–Rényi G(n, p); the only randomness source in the library.
pub fn random_graph(n: u32, p: f64, seed: u64) -> Graph {
    assert!((0.0..=1.0).contains(&p), "edge probability {p} outside [0, 1]");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::with_vertices(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                g.add_edge(u, v);
            }
        }
    }
    g
}
