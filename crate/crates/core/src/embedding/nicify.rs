//! Embedding repair. nicify rebuilds a minimum-cover witness, through
//! genus-raising chords and corner cuts, into an embedding of a subdivision
//! of the input that is closed 2-cell (every face walk a simple cycle),
//! triangle-free, and carries a minimum dominating face set meeting every
//! high-degree vertex exactly once.
//!
//! Every surgery is a composite of two primitives, subdividing an edge and
//! chording two traversal corners, and each composite preserves the three
//! loop invariants re-checked after it runs: the surface, the set of
//! high-degree vertices (chords only ever attach to fresh midpoints or to a
//! leaf), and the minimum size of a face set dominating that set. The last
//! holds because every cut keeps all vertices of the face it operates on
//! together on one of the successor faces.

use super::enumerate::{face_mask, lex_first_cover, mf_with_witness, EmbedError};
use super::{ekey, euler_genus, steps_to_walk, trace_face_steps, Embedding, FaceWalk, Step, Surface};
use crate::graph::Graph;
use crate::Budget;
use std::collections::BTreeSet;

/// A nice embedding: the rebuilt graph is a subdivision-with-attachments of
/// the nicify input, every face is a simple cycle, and `dominating` is a
/// minimum face set covering the high-degree vertices once each.
#[derive(Clone, Debug)]
pub struct NiceEmbedding {
    pub mf_value: u32,
    pub embedding: Embedding,
    pub dominating: Vec<FaceWalk>,
    pub dominating_indices: Vec<usize>,
}

pub fn nicify(h: &Graph, s: &Surface, budget: &Budget) -> Result<NiceEmbedding, EmbedError> {
    s.validate().map_err(EmbedError::Domain)?;
    if s.boundary_components != 0 {
        return Err(EmbedError::Domain("nicify expects a boundaryless surface (cap it first)".into()));
    }
    if h.num_edges() == 0 {
        return Err(EmbedError::Domain("nicify needs a graph with at least one edge".into()));
    }
    let Some(witness) = mf_with_witness(h, s, budget)? else {
        return Err(EmbedError::Domain(format!("graph does not embed in {s}")));
    };
    let high: Vec<u32> = h.vertices().filter(|&v| h.degree(v) >= 4).collect();
    let target: u32 = (1u32 << high.len()) - 1;
    let nic = Nicifier { high, target, b: witness.value, eg: s.euler_genus, orientable: s.orientable };

    let mut e = witness.embedding;
    if e.graph().num_edges() == 1 {
        // a single edge has no room for the leaf cut below; give it a midpoint
        let (u, v) = e.graph().edges()[0];
        e = e.subdivide(u, v).expect("edge present").0;
    }
    let e = nic.cellularize(e);
    let (e, faces) = nic.repair_faces(e);
    let (e, faces, cover) = nic.isolate_incidences(e, faces);
    let (e, faces, mut cover) = nic.subdivide_all(e, &faces, &cover);
    cover.sort_unstable();

    assert!(faces.iter().all(|f| is_simple(f)), "every face walk must be a simple cycle");
    let g = e.graph();
    for (u, v) in g.edges() {
        let nu: BTreeSet<u32> = g.neighbors(u).collect();
        assert!(
            g.neighbors(v).all(|w| !nu.contains(&w)),
            "subdividing every edge leaves no triangle"
        );
    }
    for &v in &nic.high {
        let inc = cover.iter().filter(|&&fi| faces[fi].iter().any(|st| st.head == v)).count();
        assert_eq!(inc, 1, "high-degree vertex must meet the dominating set exactly once");
    }
    Ok(NiceEmbedding {
        mf_value: nic.b,
        dominating: cover.iter().map(|&fi| steps_to_walk(&faces[fi])).collect(),
        dominating_indices: cover,
        embedding: e,
    })
}

struct Nicifier {
    /// High-degree vertices of the input, sorted; surgeries never change them.
    high: Vec<u32>,
    target: u32,
    /// mf of the input in the target surface; every composite preserves it.
    b: u32,
    eg: u32,
    orientable: bool,
}

impl Nicifier {
    fn cover_size(&self, faces: &[Vec<Step>]) -> usize {
        let masks: Vec<u32> = faces.iter().map(|f| face_mask(f, &self.high)).collect();
        lex_first_cover(&masks, self.target).len()
    }

    /// Traces the faces, checking the invariants every surgery must keep:
    /// the surface, the high-degree set, and the minimum cover size.
    fn faces_checked(&self, e: &Embedding) -> Vec<Vec<Step>> {
        let (eg, orientable) = euler_genus(e).expect("stays connected");
        assert_eq!((eg, orientable), (self.eg, self.orientable), "surgery must not change the surface");
        let g = e.graph();
        let now_high: Vec<u32> = g.vertices().filter(|&v| g.degree(v) >= 4).collect();
        assert_eq!(now_high, self.high, "surgery must not change the high-degree set");
        let faces = trace_face_steps(e).expect("stays connected");
        assert_eq!(self.cover_size(&faces), self.b as usize, "surgery must preserve the minimum face cover");
        faces
    }

    /// Raises the witness embedding to the exact target surface: one twisted
    /// chord per missing crosscap, one face merge (splitting a triangle off
    /// first if only one face is left) per missing handle. Every composite
    /// keeps all vertices of the faces it touches on a common face, so the
    /// minimum cover survives.
    fn cellularize(&self, mut e: Embedding) -> Embedding {
        let mut rounds = 0;
        loop {
            let (eg, orientable) = euler_genus(&e).expect("stays connected");
            if (eg, orientable) == (self.eg, self.orientable) {
                return e;
            }
            rounds += 1;
            assert!(rounds <= 10_000, "surface adjustment failed to converge");
            let faces = trace_face_steps(&e).expect("stays connected");
            let nf = faces.len();
            if !self.orientable {
                assert!(eg < self.eg, "the witness never overshoots the surface");
                let f = &faces[0];
                let (i, j) = distinct_edge_corners(f);
                e = flank_chord(&e, f[i], f[j], -1).0;
                let (eg2, or2) = euler_genus(&e).expect("stays connected");
                let nf2 = trace_face_steps(&e).expect("stays connected").len();
                assert_eq!(
                    (eg2, or2, nf2),
                    (eg + 1, false, nf),
                    "a twisted chord adds one crosscap and keeps the face count"
                );
            } else {
                assert!(orientable && eg + 2 <= self.eg, "orientable witnesses sit below the target");
                if nf >= 2 {
                    let ca = faces[0][0];
                    let ea = ekey(ca.tail, ca.head);
                    let cb = *faces[1]
                        .iter()
                        .find(|st| ekey(st.tail, st.head) != ea)
                        .expect("faces of length >= 3 cross two distinct edges");
                    e = flank_chord(&e, ca, cb, 1).0;
                } else {
                    // split a corner triangle off the single face, then
                    // bridge the two sides back together across a handle
                    let f = &faces[0];
                    let (i, j) = distinct_edge_corners(f);
                    let (e2, x, _) = flank_chord(&e, f[i], f[j], 1);
                    let faces2 = trace_face_steps(&e2).expect("stays connected");
                    assert_eq!(faces2.len(), 2, "an untwisted chord splits its face");
                    let _ = x;
                    let ca = faces2[0][0];
                    let ea = ekey(ca.tail, ca.head);
                    let cb = *faces2[1]
                        .iter()
                        .find(|st| ekey(st.tail, st.head) != ea)
                        .expect("faces of length >= 3 cross two distinct edges");
                    e = flank_chord(&e2, ca, cb, 1).0;
                }
                let (eg2, or2) = euler_genus(&e).expect("stays connected");
                let nf2 = trace_face_steps(&e).expect("stays connected").len();
                assert_eq!(
                    (eg2, or2, nf2),
                    (eg + 2, true, nf.max(2) - 1),
                    "a cross-face chord adds one handle"
                );
            }
            let after = trace_face_steps(&e).expect("stays connected");
            assert_eq!(self.cover_size(&after), self.b as usize, "surface adjustment must preserve the cover");
        }
    }

    /// Cuts non-simple faces until every walk is a simple cycle. The cuts
    /// strictly shrink (doubled edge-face pairs, excess vertex incidences)
    /// lexicographically, so the loop terminates.
    fn repair_faces(&self, mut e: Embedding) -> (Embedding, Vec<Vec<Step>>) {
        let mut faces = self.faces_checked(&e);
        let mut rounds = 0;
        while let Some(fi) = faces.iter().position(|f| !is_simple(f)) {
            rounds += 1;
            assert!(rounds <= 10_000, "face repair failed to converge");
            let before = potential(&faces);
            let f = &faces[fi];
            e = match doubled_positions(f) {
                Some((i1, i2)) => {
                    let g = e.graph();
                    if g.degree(f[i1].tail) == 1 || g.degree(f[i1].head) == 1 {
                        cut_leaf_bounce(&e, f, i1, i2)
                    } else {
                        cut_doubled_edge(&e, f, i1)
                    }
                }
                None => {
                    let k = first_repeated_corner(f)
                        .expect("a non-simple face without doubled edges repeats a vertex");
                    cut_corner(&e, f, k)
                }
            };
            faces = self.faces_checked(&e);
            debug_assert!(potential(&faces) < before, "each cut must shrink the repair potential");
        }
        (e, faces)
    }

    /// While some high vertex lies on two faces of the (identity-tracked)
    /// cover, cuts its corner out of the later one; the shrunken face keeps
    /// everything else it dominated, so the cover stays minimum and the total
    /// number of multiple incidences drops by one per round.
    fn isolate_incidences(
        &self,
        mut e: Embedding,
        mut faces: Vec<Vec<Step>>,
    ) -> (Embedding, Vec<Vec<Step>>, Vec<usize>) {
        let masks: Vec<u32> = faces.iter().map(|f| face_mask(f, &self.high)).collect();
        let mut cover = lex_first_cover(&masks, self.target);
        cover.sort_unstable();
        let mut rounds = 0;
        loop {
            let mut hit: Option<(u32, usize)> = None;
            'scan: for &v in &self.high {
                let mut seen = false;
                for (pos, &fi) in cover.iter().enumerate() {
                    if faces[fi].iter().any(|st| st.head == v) {
                        if seen {
                            hit = Some((v, pos));
                            break 'scan;
                        }
                        seen = true;
                    }
                }
            }
            let Some((v, pos)) = hit else {
                return (e, faces, cover);
            };
            rounds += 1;
            assert!(rounds <= 10_000, "incidence isolation failed to converge");
            let fi = cover[pos];
            let k = faces[fi].iter().position(|st| st.head == v).expect("face is incident");
            let ca = faces[fi][k];
            let cb = faces[fi][(k + 1) % faces[fi].len()];
            let (ea, eb) = (ekey(ca.tail, ca.head), ekey(cb.tail, cb.head));
            assert_ne!(ea, eb, "simple faces have no doubled edges");
            // traversal probes relocating the untouched cover faces afterwards
            let others: Vec<(usize, Step)> = cover
                .iter()
                .enumerate()
                .filter(|&(p, _)| p != pos)
                .map(|(p, &cfi)| {
                    let st = faces[cfi]
                        .iter()
                        .find(|st| {
                            let ek = ekey(st.tail, st.head);
                            ek != ea && ek != eb
                        })
                        .expect("a simple cycle has an edge clear of two given ones");
                    (p, *st)
                })
                .collect();
            let (e2, x, y) = flank_chord(&e, ca, cb, 1);
            e = e2;
            faces = self.faces_checked(&e);
            let chord = ekey(x, y);
            let on_chord: Vec<usize> = faces
                .iter()
                .enumerate()
                .filter(|(_, fw)| fw.iter().any(|st| ekey(st.tail, st.head) == chord))
                .map(|(i, _)| i)
                .collect();
            assert_eq!(on_chord.len(), 2, "an untwisted chord borders two faces");
            let first_has_v = faces[on_chord[0]].iter().any(|st| st.head == v);
            let (small, big) = if first_has_v { (on_chord[0], on_chord[1]) } else { (on_chord[1], on_chord[0]) };
            assert!(faces[small].len() == 3 && faces[small].iter().any(|st| st.head == v));
            assert!(faces[big].iter().all(|st| st.head != v), "the corner cut removes exactly v");
            let mut next = vec![usize::MAX; cover.len()];
            next[pos] = big;
            for &(p, probe) in &others {
                next[p] = face_of(&e, &faces, probe);
            }
            next.sort_unstable();
            next.dedup();
            assert_eq!(next.len(), cover.len(), "relocated cover faces stay distinct");
            for &hv in &self.high {
                assert!(
                    next.iter().any(|&cf| faces[cf].iter().any(|st| st.head == hv)),
                    "cover must stay dominating"
                );
            }
            cover = next;
        }
    }

    /// Subdivides every edge once (the result is bipartite, hence
    /// triangle-free), tracking the cover through the splits by one
    /// traversal probe per face.
    fn subdivide_all(
        &self,
        mut e: Embedding,
        faces: &[Vec<Step>],
        cover: &[usize],
    ) -> (Embedding, Vec<Vec<Step>>, Vec<usize>) {
        let mut probes: Vec<Step> = cover.iter().map(|&fi| faces[fi][0]).collect();
        for (u, v) in e.graph().edges() {
            let lam = e.sig(u, v);
            let (e2, w) = e.subdivide(u, v).expect("snapshot edge present");
            for p in probes.iter_mut() {
                *p = probe_after_subdivide(*p, u, v, w, lam);
            }
            e = e2;
        }
        let faces2 = self.faces_checked(&e);
        let cover2: Vec<usize> = probes.iter().map(|&p| face_of(&e, &faces2, p)).collect();
        (e, faces2, cover2)
    }
}

fn is_simple(f: &[Step]) -> bool {
    f.len() >= 3 && f.iter().map(|st| st.head).collect::<BTreeSet<_>>().len() == f.len()
}

/// (doubled edge-face pairs, excess vertex incidences over all faces).
fn potential(faces: &[Vec<Step>]) -> (usize, usize) {
    let mut doubled = 0;
    let mut excess = 0;
    for f in faces {
        let mut edges: Vec<(u32, u32)> = f.iter().map(|st| ekey(st.tail, st.head)).collect();
        edges.sort_unstable();
        doubled += edges.windows(2).filter(|w| w[0] == w[1]).count();
        let distinct: BTreeSet<u32> = f.iter().map(|st| st.head).collect();
        excess += f.len() - distinct.len();
    }
    (doubled, excess)
}

/// First walk position whose edge is traversed twice by this face, with the
/// second position.
fn doubled_positions(f: &[Step]) -> Option<(usize, usize)> {
    for i in 0..f.len() {
        for j in i + 1..f.len() {
            if ekey(f[i].tail, f[i].head) == ekey(f[j].tail, f[j].head) {
                return Some((i, j));
            }
        }
    }
    None
}

fn first_repeated_corner(f: &[Step]) -> Option<usize> {
    (0..f.len()).find(|&k| f.iter().filter(|st| st.head == f[k].head).count() >= 2)
}

/// Two corners of `f` whose arriving edges are distinct. Any walk of length
/// ≥ 3 has them: a walk riding a single edge is a degree-1 bounce of length 2.
fn distinct_edge_corners(f: &[Step]) -> (usize, usize) {
    let e0 = ekey(f[0].tail, f[0].head);
    let j = f
        .iter()
        .position(|st| ekey(st.tail, st.head) != e0)
        .expect("faces of length >= 3 cross two distinct edges");
    (0, j)
}

/// Subdivides the arriving edges of two corners and joins the fresh
/// midpoints with a chord. Returns the embedding and the midpoint ids.
fn flank_chord(e: &Embedding, ca: Step, cb: Step, twist: i8) -> (Embedding, u32, u32) {
    assert_ne!(ekey(ca.tail, ca.head), ekey(cb.tail, cb.head), "flank corners must arrive on distinct edges");
    let (e1, x) = e.subdivide(ca.tail, ca.head).expect("corner rides an edge");
    let (e2, y) = e1.subdivide(cb.tail, cb.head).expect("corner rides an edge");
    let ci = Step { tail: ca.tail, head: x, sigma: ca.sigma };
    let cj = Step { tail: cb.tail, head: y, sigma: cb.sigma };
    let e3 = e2.add_chord_steps(ci, cj, twist).expect("fresh midpoints are never adjacent");
    (e3, x, y)
}

/// Splits the quad [y, u, v, x] off around one traversal of the doubled edge
/// {u, v} at `i1`, chording the subdivided flanks of that traversal. The big
/// face keeps every vertex of the original walk: u and v still flank the
/// other traversal there. The flanks ride three distinct edges, because a
/// flank on {u, v} itself would be a second traversal adjacent to the first,
/// which degree-≥ 2 endpoints forbid.
fn cut_doubled_edge(e: &Embedding, f: &[Step], i1: usize) -> Embedding {
    let n = f.len();
    let side = f[i1];
    let beta = f[(i1 + 1) % n];
    let alpha = f[(i1 + n - 1) % n];
    let ek = |s: Step| ekey(s.tail, s.head);
    assert!(
        ek(beta) != ek(side) && ek(alpha) != ek(side) && ek(alpha) != ek(beta),
        "flanks of one traversal of a doubled edge ride three distinct edges"
    );
    flank_chord(e, beta, alpha, 1).0
}

/// A degree-1 bounce (w→u),(u→w) has the same edge on both flanks, so no
/// quad can be cut; instead the leaf is tied forward: subdividing the walk's
/// next edge at y and chording u–y closes the triangle [u, w, y] and frees
/// the doubled edge.
fn cut_leaf_bounce(e: &Embedding, f: &[Step], i1: usize, i2: usize) -> Embedding {
    let n = f.len();
    let (p, q) = (f[i1].tail, f[i1].head);
    let u = if e.graph().degree(p) == 1 { p } else { q };
    assert_eq!(e.graph().degree(u), 1, "bounce cut needs a leaf endpoint");
    let k = if f[i1].head == u { i1 } else { i2 };
    let arrive = f[k];
    let back = f[(k + 1) % n];
    assert_eq!((back.tail, back.head), (arrive.head, arrive.tail), "a leaf arrival bounces straight back");
    let onward = f[(k + 2) % n];
    assert_ne!(onward.head, u);
    let (e2, y) = e.subdivide(onward.tail, onward.head).expect("edge present");
    let cy = Step { tail: onward.tail, head: y, sigma: onward.sigma };
    e2.add_chord_steps(arrive, cy, 1).expect("a leaf is never adjacent to a fresh midpoint")
}

/// Cuts the triangle [x, v, y] off at corner `k` of a simple-edged face; the
/// repeated vertex keeps its other occurrences on the big face.
fn cut_corner(e: &Embedding, f: &[Step], k: usize) -> Embedding {
    let leave = f[(k + 1) % f.len()];
    flank_chord(e, f[k], leave, 1).0
}

/// Image of a traversal when {u, v} is subdivided at w: the half leaving the
/// probe's tail. The old signature rides the half at the subdivide call's
/// first endpoint, which shifts the carried state on the other half.
fn probe_after_subdivide(p: Step, u: u32, v: u32, w: u32, sig_uv: i8) -> Step {
    if ekey(p.tail, p.head) != ekey(u, v) {
        return p;
    }
    if p.tail == u {
        Step { tail: u, head: w, sigma: p.sigma }
    } else {
        Step { tail: v, head: w, sigma: p.sigma * sig_uv }
    }
}

/// Index of the face containing the traversal `p`, recorded either as `p`
/// itself or as its mirror blade.
fn face_of(e: &Embedding, faces: &[Vec<Step>], p: Step) -> usize {
    let mirror = Step { tail: p.head, head: p.tail, sigma: -p.sigma * e.sig(p.tail, p.head) };
    faces
        .iter()
        .position(|f| f.iter().any(|&st| st == p || st == mirror))
        .expect("every traversal lies on exactly one face")
}
