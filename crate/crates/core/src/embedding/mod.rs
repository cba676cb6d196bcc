//! Combinatorial embeddings: rotation systems with edge signatures, face
//! tracing, Euler genus, disk graphs and radial distance.
//!
//! A rotation system always describes a cellular embedding in some surface.
//! Faces are traced in the blade model: a state is a directed edge plus a
//! local orientation sign; crossing an edge with signature -1 flips the
//! sign, and the sign decides whether the walk turns to the successor or the
//! predecessor in the rotation at the head vertex. Blade orbits come in
//! mirror pairs tracing the same face in opposite directions; trace_faces
//! returns one walk per pair.

mod enumerate;
mod nicify;

pub use enumerate::{
    embeds_in, mf, mf_with_witness, min_genus, EmbedError, EnumLimits, MfWitness,
    DEFAULT_EDGE_LIMIT,
};
pub use nicify::{nicify, NiceEmbedding};

use crate::graph::{Graph, ParseError};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Σ(c, h, b) in canonical form: orientable surfaces have c = 0 (euler_genus
/// = 2h), non-orientable ones have h = 0 (euler_genus = c ≥ 1).
#[derive(Clone, Copy, PartialEq, Eq, Debug, PartialOrd, Ord)]
pub struct Surface {
    pub orientable: bool,
    pub euler_genus: u32,
    pub boundary_components: u32,
}

impl Surface {
    pub fn sphere() -> Surface {
        Surface { orientable: true, euler_genus: 0, boundary_components: 0 }
    }

    pub fn torus() -> Surface {
        Surface { orientable: true, euler_genus: 2, boundary_components: 0 }
    }

    pub fn projective() -> Surface {
        Surface { orientable: false, euler_genus: 1, boundary_components: 0 }
    }

    pub fn klein() -> Surface {
        Surface { orientable: false, euler_genus: 2, boundary_components: 0 }
    }

    /// Orientable surface with h handles (euler genus 2h).
    pub fn with_handles(h: u32) -> Surface {
        Surface { orientable: true, euler_genus: 2 * h, boundary_components: 0 }
    }

    /// Non-orientable surface with c ≥ 1 crosscaps (euler genus c).
    pub fn with_crosscaps(c: u32) -> Surface {
        Surface { orientable: false, euler_genus: c, boundary_components: 0 }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.orientable && self.euler_genus % 2 != 0 {
            return Err(format!("orientable surface with odd euler genus {}", self.euler_genus));
        }
        if !self.orientable && self.euler_genus == 0 {
            return Err("non-orientable surface needs at least one crosscap".into());
        }
        Ok(())
    }

    /// (crosscaps, handles, boundary components) of the canonical form.
    pub fn params(&self) -> (u32, u32, u32) {
        if self.orientable {
            (0, self.euler_genus / 2, self.boundary_components)
        } else {
            (self.euler_genus, 0, self.boundary_components)
        }
    }

    /// The same surface with its boundary capped off (Σ̂).
    pub fn cap(&self) -> Surface {
        Surface { boundary_components: 0, ..*self }
    }

    /// Names accepted on the command line: `sphere`, `torus`, `projective`,
    /// `klein`, `o<h>` (h handles), `n<c>` (c crosscaps).
    pub fn parse(name: &str) -> Result<Surface, String> {
        let s = match name {
            "sphere" => Surface::sphere(),
            "torus" => Surface::torus(),
            "projective" => Surface::projective(),
            "klein" => Surface::klein(),
            _ => {
                let (kind, num) = name.split_at(1.min(name.len()));
                let n: u32 = num
                    .parse()
                    .map_err(|_| format!("unknown surface '{name}'"))?;
                match kind {
                    "o" => Surface::with_handles(n),
                    "n" => Surface::with_crosscaps(n),
                    _ => return Err(format!("unknown surface '{name}'")),
                }
            }
        };
        s.validate()?;
        Ok(s)
    }
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.orientable, self.euler_genus, self.boundary_components) {
            (true, 0, 0) => write!(f, "sphere"),
            (true, 2, 0) => write!(f, "torus"),
            (false, 1, 0) => write!(f, "projective"),
            (false, 2, 0) => write!(f, "klein"),
            (true, eg, 0) => write!(f, "o{}", eg / 2),
            (false, eg, 0) => write!(f, "n{eg}"),
            (true, eg, b) => write!(f, "o{}b{b}", eg / 2),
            (false, eg, b) => write!(f, "n{eg}b{b}"),
        }
    }
}

/// Rotation system with edge signatures. Rotations are cyclic neighbor
/// lists, normalized to start at the smallest neighbor; signatures are ±1
/// per edge keyed (min, max).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Embedding {
    graph: Graph,
    rotation: BTreeMap<u32, Vec<u32>>,
    signature: BTreeMap<(u32, u32), i8>,
}

fn ekey(u: u32, v: u32) -> (u32, u32) {
    (u.min(v), u.max(v))
}

impl Embedding {
    pub fn new(
        graph: Graph,
        rotation: BTreeMap<u32, Vec<u32>>,
        signature: BTreeMap<(u32, u32), i8>,
    ) -> Result<Embedding, String> {
        for v in graph.vertices() {
            let rot = rotation
                .get(&v)
                .ok_or_else(|| format!("missing rotation for vertex {v}"))?;
            let mut listed: Vec<u32> = rot.clone();
            listed.sort_unstable();
            listed.dedup();
            let nbrs: Vec<u32> = graph.neighbors(v).collect();
            if listed.len() != rot.len() || listed != nbrs {
                return Err(format!("rotation at {v} is not a permutation of its neighbors"));
            }
        }
        if rotation.len() != graph.num_vertices() {
            return Err("rotation lists a vertex not in the graph".into());
        }
        for (u, v) in graph.edges() {
            match signature.get(&(u, v)) {
                Some(1) | Some(-1) => {}
                Some(s) => return Err(format!("signature of ({u},{v}) must be ±1, got {s}")),
                None => return Err(format!("missing signature for edge ({u},{v})")),
            }
        }
        if signature.len() != graph.num_edges() {
            return Err("signature lists an edge not in the graph".into());
        }
        let mut e = Embedding { graph, rotation, signature };
        e.normalize();
        Ok(e)
    }

    /// All-+1 signatures (orientable-representable rotation system).
    pub fn all_positive(graph: Graph, rotation: BTreeMap<u32, Vec<u32>>) -> Result<Embedding, String> {
        let signature = graph.edges().into_iter().map(|e| (e, 1i8)).collect();
        Embedding::new(graph, rotation, signature)
    }

    fn normalize(&mut self) {
        for rot in self.rotation.values_mut() {
            if let Some(pos) = rot.iter().enumerate().min_by_key(|(_, &n)| n).map(|(i, _)| i) {
                rot.rotate_left(pos);
            }
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn rotation(&self, v: u32) -> &[u32] {
        &self.rotation[&v]
    }

    pub fn sig(&self, u: u32, v: u32) -> i8 {
        self.signature[&ekey(u, v)]
    }

    /// Subdivides {u, v} at a fresh vertex, preserving all faces (the new
    /// length-2 path inherits the edge's signature on its first half).
    pub fn subdivide(&self, u: u32, v: u32) -> Result<(Embedding, u32), String> {
        if !self.graph.has_edge(u, v) {
            return Err(format!("edge {{{u},{v}}} not in graph"));
        }
        let w = self.graph.fresh_id();
        let mut graph = self.graph.clone();
        graph.remove_edge(u, v);
        graph.add_edge(u, w);
        graph.add_edge(w, v);
        let mut rotation = self.rotation.clone();
        for x in rotation.get_mut(&u).unwrap().iter_mut() {
            if *x == v {
                *x = w;
            }
        }
        for x in rotation.get_mut(&v).unwrap().iter_mut() {
            if *x == u {
                *x = w;
            }
        }
        rotation.insert(w, vec![u, v]);
        let mut signature = self.signature.clone();
        let sign = signature.remove(&ekey(u, v)).unwrap();
        signature.insert(ekey(u, w), sign);
        signature.insert(ekey(w, v), 1);
        Ok((Embedding::new(graph, rotation, signature)?, w))
    }

    /// Adds an edge between two corners of one face, splitting it in two.
    /// Corners are positions into `face` (a traced walk of this embedding):
    /// corner i sits at the head of step i. The chord's signature is the
    /// product of the two corner states, which keeps both new walks
    /// consistent. Endpoints must be distinct (subdivide first otherwise).
    pub fn add_chord(&self, face: &[Step], i: usize, j: usize) -> Result<Embedding, String> {
        self.add_chord_steps(face[i], face[j], 1)
    }

    /// Chord between two traversal corners given directly as steps. The
    /// corners may lie on one face (twist +1 splits it, twist -1 keeps it
    /// whole and adds a crosscap) or on two faces (twist +1 merges them
    /// across a new handle).
    pub(crate) fn add_chord_steps(&self, ci: Step, cj: Step, twist: i8) -> Result<Embedding, String> {
        let (x, y) = (ci.head, cj.head);
        if x == y {
            return Err(format!("chord endpoints coincide at vertex {x}"));
        }
        if self.graph.has_edge(x, y) {
            return Err(format!("edge {{{x},{y}}} already present"));
        }
        let mut graph = self.graph.clone();
        graph.add_edge(x, y);
        let mut rotation = self.rotation.clone();
        let insert = |rot: &mut Vec<u32>, arrived_from: u32, sigma: i8, new_nbr: u32| {
            let p = rot.iter().position(|&n| n == arrived_from).unwrap();
            if sigma > 0 {
                rot.insert(p + 1, new_nbr);
            } else {
                rot.insert(p, new_nbr);
            }
        };
        insert(rotation.get_mut(&x).unwrap(), ci.tail, ci.sigma, y);
        insert(rotation.get_mut(&y).unwrap(), cj.tail, cj.sigma, x);
        let mut signature = self.signature.clone();
        signature.insert(ekey(x, y), twist * ci.sigma * cj.sigma);
        Embedding::new(graph, rotation, signature)
    }
}

/// One traversal step of a face walk: the directed edge tail→head and the
/// local orientation state at head (after applying the edge's signature).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Step {
    pub tail: u32,
    pub head: u32,
    pub sigma: i8,
}

/// Closed face walk as the cyclic sequence of its directed sides.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FaceWalk {
    pub sides: Vec<(u32, u32)>,
}

impl FaceWalk {
    pub fn len(&self) -> usize {
        self.sides.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sides.is_empty()
    }

    /// Vertices on the walk, in traversal order with repetitions.
    pub fn corners(&self) -> Vec<u32> {
        self.sides.iter().map(|&(_, head)| head).collect()
    }

    pub fn vertex_set(&self) -> BTreeSet<u32> {
        self.corners().into_iter().collect()
    }

    /// Every face walk visiting each of its vertices once (and length ≥ 3,
    /// or the whole graph is a single edge or vertex).
    pub fn is_simple_cycle(&self) -> bool {
        self.sides.len() >= 3 && self.vertex_set().len() == self.sides.len()
    }

    fn canonicalize(&mut self) {
        if self.sides.is_empty() {
            return;
        }
        let n = self.sides.len();
        let best = (0..n)
            .min_by(|&a, &b| {
                (0..n)
                    .map(|k| self.sides[(a + k) % n])
                    .cmp((0..n).map(|k| self.sides[(b + k) % n]))
            })
            .unwrap();
        self.sides.rotate_left(best);
    }
}

fn steps_to_walk(steps: &[Step]) -> FaceWalk {
    let mut w = FaceWalk { sides: steps.iter().map(|s| (s.tail, s.head)).collect() };
    w.canonicalize();
    w
}

/// Face walks of the embedding as blade-orbit step sequences, one per face,
/// deterministic order. Requires a connected graph.
pub fn trace_face_steps(e: &Embedding) -> Result<Vec<Vec<Step>>, String> {
    let g = e.graph();
    if !g.is_connected() {
        return Err("embedding of a disconnected graph has no well-defined face set".into());
    }
    if g.num_edges() == 0 {
        // isolated vertex in the sphere: one face, empty walk
        return Ok(vec![vec![]]);
    }
    let darts: Vec<(u32, u32)> = {
        let mut d = Vec::with_capacity(2 * g.num_edges());
        for (u, v) in g.edges() {
            d.push((u, v));
            d.push((v, u));
        }
        d.sort_unstable();
        d
    };
    let dart_id: BTreeMap<(u32, u32), usize> = darts.iter().copied().enumerate().map(|(i, d)| (d, i)).collect();
    // blade = dart index * 2 + (sigma < 0)
    let blade = |d: usize, sigma: i8| d * 2 + usize::from(sigma < 0);
    let mut visited = vec![false; darts.len() * 2];
    let mut faces = Vec::new();
    for start_sigma in [1i8, -1] {
        for d0 in 0..darts.len() {
            if visited[blade(d0, start_sigma)] {
                continue;
            }
            let mut steps: Vec<Step> = Vec::new();
            let (mut tail, mut head) = darts[d0];
            let mut sigma = start_sigma;
            loop {
                let s_arrive = sigma * e.sig(tail, head);
                let d = dart_id[&(tail, head)];
                if visited[blade(d, sigma)] {
                    break;
                }
                visited[blade(d, sigma)] = true;
                // mirror blade: same side traversed the other way
                let rd = dart_id[&(head, tail)];
                visited[blade(rd, -s_arrive)] = true;
                steps.push(Step { tail, head, sigma: s_arrive });
                let rot = e.rotation(head);
                let p = rot.iter().position(|&n| n == tail).unwrap();
                let next = if s_arrive > 0 {
                    rot[(p + 1) % rot.len()]
                } else {
                    rot[(p + rot.len() - 1) % rot.len()]
                };
                tail = head;
                head = next;
                sigma = s_arrive;
            }
            if !steps.is_empty() {
                faces.push(steps);
            }
        }
    }
    Ok(faces)
}

pub fn trace_faces(e: &Embedding) -> Result<Vec<FaceWalk>, String> {
    Ok(trace_face_steps(e)?.iter().map(|s| steps_to_walk(s)).collect())
}

/// (euler genus, orientable) of the cellular embedding: eg = 2 - V + E - F;
/// orientable iff vertex sign flips can clear every signature, decided by
/// normalizing along a spanning tree and checking co-tree edges.
pub fn euler_genus(e: &Embedding) -> Result<(u32, bool), String> {
    let f = trace_face_steps(e)?.len();
    let g = e.graph();
    let eg = 2i64 - g.num_vertices() as i64 + g.num_edges() as i64 - f as i64;
    debug_assert!(eg >= 0, "euler genus cannot be negative");
    Ok((eg as u32, is_orientable(e)))
}

fn is_orientable(e: &Embedding) -> bool {
    let g = e.graph();
    let start = match g.vertices().next() {
        Some(v) => v,
        None => return true,
    };
    // flip(v) ∈ {±1}; tree edges forced to +1, co-tree edges decide
    let mut flip: BTreeMap<u32, i8> = BTreeMap::from([(start, 1)]);
    let mut queue = std::collections::VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for u in g.neighbors(v) {
            if !flip.contains_key(&u) {
                flip.insert(u, flip[&v] * e.sig(u, v));
                queue.push_back(u);
            }
        }
    }
    g.edges()
        .into_iter()
        .all(|(u, v)| flip[&u] * e.sig(u, v) * flip[&v] == 1)
}

/// Plane graph in a disk: euler-genus-0 embedding with a designated outer
/// face and a cyclic list of boundary vertices lying on it.
#[derive(Clone, Debug)]
pub struct DiskGraph {
    pub graph: Graph,
    pub embedding: Embedding,
    pub outer_face: FaceWalk,
    pub boundary_vertices: Vec<u32>,
}

impl DiskGraph {
    pub fn new(
        embedding: Embedding,
        outer_face: FaceWalk,
        boundary_vertices: Vec<u32>,
    ) -> Result<DiskGraph, String> {
        let (eg, orientable) = euler_genus(&embedding)?;
        if eg != 0 || !orientable {
            return Err(format!("disk graph needs a plane embedding, got eg {eg}"));
        }
        let faces = trace_faces(&embedding)?;
        if !faces.contains(&outer_face) {
            return Err("designated outer face is not a face of the embedding".into());
        }
        let distinct: BTreeSet<u32> = boundary_vertices.iter().copied().collect();
        if distinct.len() != boundary_vertices.len() {
            return Err("boundary vertices must be distinct".into());
        }
        if !cyclic_subsequence(&outer_face.corners(), &boundary_vertices)
            && !cyclic_subsequence(&outer_face.corners(), &reversed(&boundary_vertices))
        {
            return Err("boundary vertices do not occur on the outer face in the listed cyclic order".into());
        }
        Ok(DiskGraph { graph: embedding.graph().clone(), embedding, outer_face, boundary_vertices })
    }
}

fn reversed(v: &[u32]) -> Vec<u32> {
    let mut r = v.to_vec();
    r.reverse();
    r
}

/// Does `sub` occur as a subsequence of some rotation of `seq`?
pub(crate) fn cyclic_subsequence(seq: &[u32], sub: &[u32]) -> bool {
    if sub.is_empty() {
        return true;
    }
    if seq.is_empty() {
        return false;
    }
    let n = seq.len();
    for start in 0..n {
        let mut k = 0;
        for off in 0..n {
            if seq[(start + off) % n] == sub[k] {
                k += 1;
                if k == sub.len() {
                    return true;
                }
            }
        }
    }
    false
}

/// Fewest graph vertices on a curve joining u and w that avoids edges and
/// crosses faces: breadth-first distance in the vertex–face incidence graph
/// (all faces usable, including the outer one) halved, plus one. u = w gives 1.
pub fn radial_distance(d: &DiskGraph, u: u32, w: u32) -> u32 {
    assert!(d.graph.contains_vertex(u) && d.graph.contains_vertex(w), "radial_distance endpoints must be vertices");
    if u == w {
        return 1;
    }
    let faces = trace_faces(&d.embedding).expect("validated at construction");
    let incidences: Vec<BTreeSet<u32>> = faces.iter().map(|f| f.vertex_set()).collect();
    // nodes: vertex v as (0, v), face i as (1, i)
    let mut dist: BTreeMap<(u8, u32), u32> = BTreeMap::from([((0, u), 0)]);
    let mut queue = std::collections::VecDeque::from([(0u8, u)]);
    while let Some(node) = queue.pop_front() {
        let base = dist[&node];
        if node == (0, w) {
            return base / 2 + 1;
        }
        match node {
            (0, v) => {
                for (i, inc) in incidences.iter().enumerate() {
                    if inc.contains(&v) && !dist.contains_key(&(1, i as u32)) {
                        dist.insert((1, i as u32), base + 1);
                        queue.push_back((1, i as u32));
                    }
                }
            }
            (_, i) => {
                for &v in &incidences[i as usize] {
                    if !dist.contains_key(&(0, v)) {
                        dist.insert((0, v), base + 1);
                        queue.push_back((0, v));
                    }
                }
            }
        }
    }
    unreachable!("disk graphs are connected, every vertex pair is radially linked")
}

/// Parses the embedding text format: `r <v>: <n1> <n2> …` rotation lines
/// (neighbors in cyclic order) and `s <u> <v> <+|->` signature lines, one
/// per edge.
pub fn parse_embedding(text: &str) -> Result<Embedding, ParseError> {
    let perr = |line: usize, msg: String| ParseError { line, msg };
    let mut rotation: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    let mut signature: BTreeMap<(u32, u32), i8> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("r ") {
            let (vtok, nbrs) = rest
                .split_once(':')
                .ok_or_else(|| perr(lineno, "rotation line missing ':'".into()))?;
            let v: u32 = vtok
                .trim()
                .parse()
                .map_err(|_| perr(lineno, format!("bad vertex id '{}'", vtok.trim())))?;
            let mut order = Vec::new();
            for tok in nbrs.split_whitespace() {
                order.push(
                    tok.parse::<u32>()
                        .map_err(|_| perr(lineno, format!("bad neighbor id '{tok}'")))?,
                );
            }
            if rotation.insert(v, order).is_some() {
                return Err(perr(lineno, format!("duplicate rotation line for vertex {v}")));
            }
        } else if let Some(rest) = line.strip_prefix("s ") {
            let toks: Vec<&str> = rest.split_whitespace().collect();
            if toks.len() != 3 {
                return Err(perr(lineno, "signature line needs '<u> <v> <+|->'".into()));
            }
            let u: u32 = toks[0].parse().map_err(|_| perr(lineno, format!("bad vertex id '{}'", toks[0])))?;
            let v: u32 = toks[1].parse().map_err(|_| perr(lineno, format!("bad vertex id '{}'", toks[1])))?;
            let sign = match toks[2] {
                "+" => 1i8,
                "-" => -1i8,
                other => return Err(perr(lineno, format!("bad sign '{other}'"))),
            };
            if u == v {
                return Err(perr(lineno, format!("loop edge {{{u},{u}}}")));
            }
            if signature.insert(ekey(u, v), sign).is_some() {
                return Err(perr(lineno, format!("duplicate signature line for ({u},{v})")));
            }
        } else {
            return Err(perr(lineno, format!("unknown directive '{line}'")));
        }
    }
    let mut graph = Graph::new();
    for &v in rotation.keys() {
        graph.add_vertex(v);
    }
    for &(u, v) in signature.keys() {
        if !rotation.contains_key(&u) || !rotation.contains_key(&v) {
            return Err(perr(0, format!("edge ({u},{v}) references a vertex with no rotation line")));
        }
        graph.add_edge(u, v);
    }
    Embedding::new(graph, rotation, signature).map_err(|msg| perr(0, msg))
}

pub fn serialize_embedding(e: &Embedding) -> String {
    let mut out = String::new();
    for v in e.graph().vertices() {
        let rot = e.rotation(v);
        let nbrs: Vec<String> = rot.iter().map(|n| n.to_string()).collect();
        if nbrs.is_empty() {
            out.push_str(&format!("r {v}:\n"));
        } else {
            out.push_str(&format!("r {v}: {}\n", nbrs.join(" ")));
        }
    }
    for (u, v) in e.graph().edges() {
        out.push_str(&format!("s {u} {v} {}\n", if e.sig(u, v) > 0 { "+" } else { "-" }));
    }
    out
}
