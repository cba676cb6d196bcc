//! Exhaustive embedding enumeration: minimum genus, embeddability, and the
//! dominating-face-set number mf.
//!
//! The space of cellular embeddings of a connected graph is the product of
//! the cyclic neighbor orders (rotations) and, for non-orientable surfaces,
//! the edge signatures. Rotations are enumerated as permutations with the
//! smallest neighbor anchored first; signatures only vary on co-tree edges
//! (tree edges normalize to + by vertex flips). The global reflection maps
//! each embedding to its mirror with the same genus and face structure, so
//! only shards whose anchor permutation is lexicographically no larger than
//! its reverse are scanned. Work is sharded by the rotation of the vertex of
//! maximum degree and merged by minimum, which makes parallel and serial
//! runs agree exactly.

use super::{ekey, trace_face_steps, Embedding, FaceWalk, Step, Surface};
use crate::graph::Graph;
use crate::{Budget, BudgetExceeded};
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicU32, AtomicU64, Ordering as AtomicOrd};

/// Default hard limit on |E| for embedding enumeration.
pub const DEFAULT_EDGE_LIMIT: u64 = 14;
/// The dart bitmask is a u64 and blades take two bits per dart.
const HARD_EDGE_CAP: u64 = 32;
const MAX_HIGH_DEGREE: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EmbedError {
    Domain(String),
    Budget(BudgetExceeded),
}

impl fmt::Display for EmbedError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EmbedError::Domain(msg) => write!(f, "{msg}"),
            EmbedError::Budget(b) => write!(f, "{b}"),
        }
    }
}

impl std::error::Error for EmbedError {}

/// Effective enumeration limits for one call.
#[derive(Clone, Copy, Debug)]
pub struct EnumLimits {
    pub max_edges: u64,
}

impl EnumLimits {
    pub fn from_budget(budget: &Budget) -> EnumLimits {
        EnumLimits { max_edges: budget.limit(DEFAULT_EDGE_LIMIT).min(HARD_EDGE_CAP) }
    }
}

/// Immutable per-graph tables shared by all enumeration workers.
struct Tables {
    n: usize,
    m: usize,
    vid: Vec<u32>,
    adj: Vec<Vec<usize>>,
    /// dart_of[u][v] = dart id of u→v (usize::MAX if not an edge)
    dart_of: Vec<Vec<usize>>,
    dart_tail: Vec<usize>,
    dart_head: Vec<usize>,
    /// per-edge endpoints, edge e = darts 2e (lo→hi) and 2e+1
    edges: Vec<(usize, usize)>,
    /// bit per vertex of degree ≥ 4, indexing the cover DP
    high_bit: Vec<u32>,
    high_count: usize,
    /// vertices with ≥ 3 neighbors (the only ones with rotation choices)
    perm_verts: Vec<usize>,
    /// shard vertex: maximum degree, smallest index on ties
    shard_vertex: Option<usize>,
    /// co-tree edges (signature choices live here)
    cotree: Vec<usize>,
}

fn build_tables(g: &Graph) -> Tables {
    let vid: Vec<u32> = g.vertices().collect();
    let idx: BTreeMap<u32, usize> = vid.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let n = vid.len();
    let mut adj = vec![Vec::new(); n];
    for (u, v) in g.edges() {
        adj[idx[&u]].push(idx[&v]);
        adj[idx[&v]].push(idx[&u]);
    }
    for a in &mut adj {
        a.sort_unstable();
    }
    let mut dart_of = vec![vec![usize::MAX; n]; n];
    let mut dart_tail = Vec::new();
    let mut dart_head = Vec::new();
    let mut edges = Vec::new();
    for (u, v) in g.edges() {
        let (ui, vi) = (idx[&u], idx[&v]);
        dart_of[ui][vi] = dart_tail.len();
        dart_tail.push(ui);
        dart_head.push(vi);
        dart_of[vi][ui] = dart_tail.len();
        dart_tail.push(vi);
        dart_head.push(ui);
        edges.push((ui, vi));
    }
    let mut high_bit = vec![0u32; n];
    let mut high_count = 0;
    for i in 0..n {
        if adj[i].len() >= 4 {
            high_bit[i] = 1 << high_count;
            high_count += 1;
        }
    }
    let perm_verts: Vec<usize> = (0..n).filter(|&i| adj[i].len() >= 3).collect();
    let shard_vertex = perm_verts
        .iter()
        .copied()
        .max_by_key(|&i| (adj[i].len(), std::cmp::Reverse(i)));
    // BFS spanning tree; the remaining edges are the co-tree
    let mut in_tree = vec![false; edges.len()];
    if n > 0 {
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    let e = dart_of[u][v] / 2;
                    in_tree[e] = true;
                    queue.push_back(v);
                }
            }
        }
    }
    let cotree: Vec<usize> = (0..edges.len()).filter(|&e| !in_tree[e]).collect();
    Tables {
        n,
        m: edges.len(),
        vid,
        adj,
        dart_of,
        dart_tail,
        dart_head,
        edges,
        high_bit,
        high_count,
        perm_verts,
        shard_vertex,
        cotree,
    }
}

fn next_permutation(a: &mut [usize]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        a.reverse();
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

fn factorial(k: usize) -> u64 {
    (1..=k as u64).product()
}

fn unrank_permutation(sorted: &[usize], mut k: u64) -> Vec<usize> {
    let mut pool = sorted.to_vec();
    let mut out = Vec::with_capacity(pool.len());
    for i in (0..pool.len()).rev() {
        let f = factorial(i);
        let idx = (k / f) as usize;
        k %= f;
        out.push(pool.remove(idx));
    }
    out
}

/// Mutable enumeration state: current rotations, inverse position tables,
/// and per-edge signatures.
struct Worker<'t> {
    t: &'t Tables,
    rot: Vec<Vec<usize>>,
    pos: Vec<Vec<usize>>,
    sig: Vec<i8>,
}

impl<'t> Worker<'t> {
    fn new(t: &'t Tables) -> Worker<'t> {
        let rot: Vec<Vec<usize>> = t.adj.clone();
        let mut pos = vec![vec![usize::MAX; t.n]; t.n];
        for v in 0..t.n {
            for (i, &u) in rot[v].iter().enumerate() {
                pos[v][u] = i;
            }
        }
        Worker { t, rot, pos, sig: vec![1; t.m] }
    }

    fn rebuild_pos(&mut self, v: usize) {
        for (i, &u) in self.rot[v].iter().enumerate() {
            self.pos[v][u] = i;
        }
    }

    fn set_rotation_tail(&mut self, v: usize, tail: &[usize]) {
        self.rot[v][1..].copy_from_slice(tail);
        self.rebuild_pos(v);
    }

    /// Odometer step over every permuting vertex except `skip`; resets back
    /// to sorted order on wrap. Returns false when the space is exhausted.
    fn advance(&mut self, skip: Option<usize>) -> bool {
        for &v in self.t.perm_verts.iter().rev() {
            if Some(v) == skip {
                continue;
            }
            let stepped = next_permutation(&mut self.rot[v][1..]);
            self.rebuild_pos(v);
            if stepped {
                return true;
            }
        }
        false
    }

    #[inline]
    fn next_dart(&self, d: usize) -> usize {
        let (t, h) = (self.t.dart_tail[d], self.t.dart_head[d]);
        let rot = &self.rot[h];
        let p = self.pos[h][t] + 1;
        let w = rot[if p == rot.len() { 0 } else { p }];
        self.t.dart_of[h][w]
    }

    /// Face count of the all-positive embedding; optionally records, per
    /// face, the bitmask of incident high-degree vertices.
    fn faces_allpos(&self, masks: Option<&mut Vec<u32>>) -> usize {
        let m2 = 2 * self.t.m;
        if m2 == 0 {
            if let Some(ms) = masks {
                ms.push(0);
            }
            return 1;
        }
        let mut visited: u64 = 0;
        let mut count = 0;
        match masks {
            None => {
                for d0 in 0..m2 {
                    if visited >> d0 & 1 == 1 {
                        continue;
                    }
                    count += 1;
                    let mut d = d0;
                    loop {
                        visited |= 1 << d;
                        d = self.next_dart(d);
                        if d == d0 {
                            break;
                        }
                    }
                }
            }
            Some(ms) => {
                for d0 in 0..m2 {
                    if visited >> d0 & 1 == 1 {
                        continue;
                    }
                    count += 1;
                    let mut mask = 0u32;
                    let mut d = d0;
                    loop {
                        visited |= 1 << d;
                        mask |= self.t.high_bit[self.t.dart_head[d]];
                        d = self.next_dart(d);
                        if d == d0 {
                            break;
                        }
                    }
                    ms.push(mask);
                }
            }
        }
        count
    }

    #[inline]
    fn next_blade(&self, d: usize, sigma: i8) -> (usize, i8) {
        let s = sigma * self.sig[d / 2];
        let (t, h) = (self.t.dart_tail[d], self.t.dart_head[d]);
        let rot = &self.rot[h];
        let p = self.pos[h][t];
        let w = if s > 0 {
            let q = p + 1;
            rot[if q == rot.len() { 0 } else { q }]
        } else {
            rot[if p == 0 { rot.len() - 1 } else { p - 1 }]
        };
        (self.t.dart_of[h][w], s)
    }

    /// Face count of the signed embedding: blade orbits come in mirror
    /// pairs, so the orbit count is halved. Face masks are pushed once per
    /// orbit (each face twice); harmless for covering.
    fn faces_signed(&self, mut masks: Option<&mut Vec<u32>>) -> usize {
        let m2 = 2 * self.t.m;
        if m2 == 0 {
            if let Some(ms) = masks.as_deref_mut() {
                ms.push(0);
            }
            return 1;
        }
        let mut visited: u128 = 0;
        let mut orbits = 0usize;
        for b0 in 0..2 * m2 {
            if visited >> b0 & 1 == 1 {
                continue;
            }
            orbits += 1;
            let mut mask = 0u32;
            let (mut d, mut sigma) = (b0 / 2, if b0 % 2 == 0 { 1i8 } else { -1 });
            loop {
                let b = d * 2 + usize::from(sigma < 0);
                if visited >> b & 1 == 1 {
                    break;
                }
                visited |= 1 << b;
                mask |= self.t.high_bit[self.t.dart_head[d]];
                let (nd, ns) = self.next_blade(d, sigma);
                d = nd;
                sigma = ns;
            }
            if let Some(ms) = masks.as_deref_mut() {
                ms.push(mask);
            }
        }
        debug_assert!(orbits % 2 == 0);
        orbits / 2
    }

    fn euler_genus(&self, faces: usize) -> i64 {
        2 - self.t.n as i64 + self.t.m as i64 - faces as i64
    }

    fn snapshot(&self) -> (Vec<Vec<usize>>, Vec<i8>) {
        (self.rot.clone(), self.sig.clone())
    }
}

/// Shard ids: the lexicographic ranks of the anchor-vertex tail
/// permutations that are no larger than their own reverse (mirror shards
/// carry the reflected embeddings).
fn shard_ids(t: &Tables) -> Vec<u64> {
    match t.shard_vertex {
        None => vec![0],
        Some(v) => {
            let d = t.adj[v].len();
            let total = factorial(d - 1);
            let sorted = &t.adj[v][1..];
            let mut ids = Vec::new();
            let mut perm = sorted.to_vec();
            for k in 0..total {
                let mut rev = perm.clone();
                rev.reverse();
                if perm.as_slice() <= rev.as_slice() {
                    ids.push(k);
                }
                next_permutation(&mut perm);
            }
            ids
        }
    }
}

fn apply_shard(w: &mut Worker, shard: u64) {
    if let Some(v) = w.t.shard_vertex {
        let tail = unrank_permutation(&w.t.adj[v][1..].to_vec(), shard);
        w.set_rotation_tail(v, &tail);
    }
}

fn check_input(g: &Graph, limits: &EnumLimits, what: &str) -> Result<(), EmbedError> {
    if !g.is_connected() {
        return Err(EmbedError::Domain(format!("{what} requires a connected graph")));
    }
    let m = g.num_edges() as u64;
    if m > limits.max_edges {
        return Err(EmbedError::Budget(BudgetExceeded {
            what: format!("{what} enumeration"),
            limit: limits.max_edges,
            needed: m,
        }));
    }
    Ok(())
}

/// Minimum euler genus over cellular embeddings: all-positive rotation
/// systems when `orientable`, otherwise signed systems whose signature does
/// not reduce to all-positive. `None` means no such embedding exists (only
/// forests lack non-orientable embeddings).
pub fn min_genus(g: &Graph, orientable: bool, budget: &Budget) -> Result<Option<u32>, EmbedError> {
    let limits = EnumLimits::from_budget(budget);
    check_input(g, &limits, "genus")?;
    let t = build_tables(g);
    if !orientable && t.cotree.is_empty() {
        return Ok(None);
    }
    let lower: u32 = if orientable { 0 } else { 1 };
    let global = AtomicU32::new(u32::MAX);
    let best = shard_ids(&t)
        .into_par_iter()
        .map(|shard| {
            let mut w = Worker::new(&t);
            apply_shard(&mut w, shard);
            let mut local = u32::MAX;
            let sign_masks: u64 = if orientable { 1 } else { 1u64 << t.cotree.len() };
            loop {
                let from_mask = if orientable { 0 } else { 1 };
                for mask in from_mask..sign_masks {
                    if !orientable {
                        for (bit, &e) in t.cotree.iter().enumerate() {
                            w.sig[e] = if mask >> bit & 1 == 1 { -1 } else { 1 };
                        }
                    }
                    let faces = if orientable { w.faces_allpos(None) } else { w.faces_signed(None) };
                    let eg = w.euler_genus(faces) as u32;
                    if eg < local {
                        local = eg;
                        global.fetch_min(local, AtomicOrd::Relaxed);
                        if local == lower {
                            return local;
                        }
                    }
                }
                if global.load(AtomicOrd::Relaxed) == lower {
                    return local;
                }
                if !w.advance(t.shard_vertex) {
                    return local;
                }
            }
        })
        .min()
        .unwrap_or(u32::MAX);
    debug_assert!(best != u32::MAX);
    Ok(Some(best))
}

/// Can g be drawn (not necessarily cellularly) in the boundaryless surface s?
/// Orientable s: some orientable embedding has eg ≤ s. Non-orientable s:
/// some non-orientable embedding has eg ≤ s, or some orientable one has
/// eg ≤ s − 1 (a crosscap is spent turning it non-orientable).
pub fn embeds_in(g: &Graph, s: &Surface, budget: &Budget) -> Result<bool, EmbedError> {
    s.validate().map_err(EmbedError::Domain)?;
    if s.boundary_components != 0 {
        return Err(EmbedError::Domain("embeds_in expects a boundaryless surface (cap it first)".into()));
    }
    if s.orientable {
        Ok(min_genus(g, true, budget)?.map_or(false, |eg| eg <= s.euler_genus))
    } else {
        if min_genus(g, true, budget)?.map_or(false, |eg| eg + 1 <= s.euler_genus) {
            return Ok(true);
        }
        Ok(min_genus(g, false, budget)?.map_or(false, |eg| eg <= s.euler_genus))
    }
}

/// Dominating face set witness: an embedding achieving mf and the
/// lexicographically first minimum face set dominating the (≥4)-vertices.
#[derive(Clone, Debug)]
pub struct MfWitness {
    pub value: u32,
    pub embedding: Embedding,
    pub dominating: Vec<FaceWalk>,
    pub dominating_indices: Vec<usize>,
}

struct Found {
    cover: u32,
    shard: u64,
    inner: u64,
    rot: Vec<Vec<usize>>,
    sig: Vec<i8>,
}

fn better(a: &Found, b: &Found) -> bool {
    (a.cover, a.shard, a.inner) < (b.cover, b.shard, b.inner)
}

/// Exact minimum cover of `target` by the given face masks; u8::MAX if the
/// masks cannot cover it (impossible here: every vertex lies on a face).
fn min_cover(masks: &[u32], target: u32, dp: &mut Vec<u8>) -> u8 {
    if target == 0 {
        return 0;
    }
    dp.clear();
    dp.resize((target as usize) + 1, u8::MAX);
    dp[0] = 0;
    // dp[u] over subsets u of target: fewest masks covering u
    for u in 1..=target {
        if u & target != u {
            continue;
        }
        let mut best = u8::MAX;
        for &fm in masks {
            let fm = fm & target;
            if fm & u != 0 {
                let rest = dp[(u & !fm) as usize];
                if rest != u8::MAX {
                    best = best.min(rest + 1);
                }
            }
        }
        dp[u as usize] = best;
    }
    dp[target as usize]
}

/// Bitmask of the high vertices (a sorted slice) a face walk touches.
pub(crate) fn face_mask(f: &[Step], high: &[u32]) -> u32 {
    let mut mask = 0u32;
    for st in f {
        if let Ok(bit) = high.binary_search(&st.head) {
            mask |= 1 << bit;
        }
    }
    mask
}

/// Lexicographically first minimum cover of `target`, as indices into
/// `face_masks`, reconstructed greedily from the exact residual sizes.
pub(crate) fn lex_first_cover(face_masks: &[u32], target: u32) -> Vec<usize> {
    let mut dp: Vec<u8> = Vec::new();
    let need = min_cover(face_masks, target, &mut dp);
    assert_ne!(need, u8::MAX, "every vertex lies on some face");
    let mut chosen = Vec::new();
    let mut uncovered = target;
    while uncovered != 0 {
        let left = dp[uncovered as usize];
        let pick = (0..face_masks.len())
            .find(|&f| {
                let fm = face_masks[f] & uncovered;
                fm != 0 && dp[(uncovered & !fm) as usize] == left - 1
            })
            .expect("cover exists");
        chosen.push(pick);
        uncovered &= !face_masks[pick];
    }
    chosen
}

/// mf(h, s): the minimum over embeddings of h in s of the size of a face
/// set dominating the degree-≥4 vertices; None when h does not embed in s.
/// Embeddings in s = cellular embeddings in compatible sub-surfaces: for
/// orientable s all orientable systems of eg ≤ eg(s); for non-orientable s
/// the non-orientable systems of eg ≤ eg(s) plus orientable ones of eg ≤
/// eg(s) − 1 (extra handles or crosscaps land inside a face and preserve
/// every vertex–face incidence).
pub fn mf(h: &Graph, s: &Surface, budget: &Budget) -> Result<Option<u32>, EmbedError> {
    Ok(mf_with_witness(h, s, budget)?.map(|w| w.value))
}

pub fn mf_with_witness(h: &Graph, s: &Surface, budget: &Budget) -> Result<Option<MfWitness>, EmbedError> {
    s.validate().map_err(EmbedError::Domain)?;
    if s.boundary_components != 0 {
        return Err(EmbedError::Domain("mf expects a boundaryless surface (cap it first)".into()));
    }
    let limits = EnumLimits::from_budget(budget);
    check_input(h, &limits, "mf")?;
    let t = build_tables(h);
    if t.high_count > MAX_HIGH_DEGREE {
        return Err(EmbedError::Domain(format!(
            "too many high-degree vertices for the covering table ({} > {MAX_HIGH_DEGREE})",
            t.high_count
        )));
    }
    let target: u32 = if t.high_count == 32 { u32::MAX } else { (1u32 << t.high_count) - 1 };
    let lower: u32 = u32::from(t.high_count > 0);
    let eg_s = s.euler_genus;
    let orientable_s = s.orientable;
    // (cover << 32 | shard) for cheap cross-shard pruning
    let global = AtomicU64::new(u64::MAX);
    let pack = |cover: u32, shard: u64| ((cover as u64) << 32) | shard;

    let best: Option<Found> = shard_ids(&t)
        .into_par_iter()
        .map(|shard| {
            if global.load(AtomicOrd::Relaxed) <= pack(lower, shard) {
                return None;
            }
            let mut w = Worker::new(&t);
            apply_shard(&mut w, shard);
            let mut masks: Vec<u32> = Vec::new();
            let mut dp: Vec<u8> = Vec::new();
            let mut local: Option<Found> = None;
            let mut inner: u64 = 0;
            let sign_masks: u64 = if orientable_s { 1 } else { 1u64 << t.cotree.len() };
            loop {
                for smask in 0..sign_masks {
                    let qualifies;
                    masks.clear();
                    if orientable_s {
                        let faces = w.faces_allpos(Some(&mut masks));
                        qualifies = w.euler_genus(faces) as u32 <= eg_s;
                    } else {
                        for (bit, &e) in t.cotree.iter().enumerate() {
                            w.sig[e] = if smask >> bit & 1 == 1 { -1 } else { 1 };
                        }
                        let faces = w.faces_signed(Some(&mut masks));
                        let eg = w.euler_genus(faces) as u32;
                        // signature mask 0 is the one orientable class
                        qualifies = if smask == 0 { eg + 1 <= eg_s } else { eg <= eg_s };
                    }
                    if qualifies {
                        let cover = min_cover(&masks, target, &mut dp) as u32;
                        if local.as_ref().map_or(true, |l| cover < l.cover) {
                            let (rot, sig) = w.snapshot();
                            local = Some(Found { cover, shard, inner, rot, sig });
                            global.fetch_min(pack(cover, shard), AtomicOrd::Relaxed);
                            if cover == lower {
                                return local;
                            }
                        }
                    }
                    inner += 1;
                }
                if !w.advance(t.shard_vertex) {
                    return local;
                }
            }
        })
        .reduce(
            || None,
            |a, b| match (a, b) {
                (Some(x), Some(y)) => Some(if better(&x, &y) { x } else { y }),
                (x, None) => x,
                (None, y) => y,
            },
        );

    let Some(found) = best else {
        return Ok(None);
    };
    // rebuild the winning embedding on original vertex ids
    let mut rotation: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for v in 0..t.n {
        rotation.insert(t.vid[v], found.rot[v].iter().map(|&u| t.vid[u]).collect());
    }
    let mut signature: BTreeMap<(u32, u32), i8> = BTreeMap::new();
    for (e, &(u, v)) in t.edges.iter().enumerate() {
        signature.insert(ekey(t.vid[u], t.vid[v]), found.sig[e]);
    }
    let embedding = Embedding::new(h.clone(), rotation, signature)
        .expect("enumerated rotation system is well-formed");
    let steps = trace_face_steps(&embedding).expect("connected by precondition");
    let high: Vec<u32> = h.vertices().filter(|&v| h.degree(v) >= 4).collect();
    let face_masks: Vec<u32> = steps.iter().map(|f| face_mask(f, &high)).collect();
    let chosen = lex_first_cover(&face_masks, target);
    debug_assert_eq!(chosen.len() as u32, found.cover);
    let walks = super::trace_faces(&embedding).expect("connected");
    Ok(Some(MfWitness {
        value: found.cover,
        dominating: chosen.iter().map(|&i| walks[i].clone()).collect(),
        dominating_indices: chosen,
        embedding,
    }))
}
