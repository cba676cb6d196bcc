//! Splicing disk-embedded pieces into faces. The composed rotation system
//! is built corner by corner: at each seam vertex the child's edge fan is
//! inserted into the angular sector the target face occupied there.

use std::collections::{BTreeMap, BTreeSet};

use crate::embedding::{euler_genus, trace_face_steps, Embedding, Step};

/// Rewrites an orientable embedding with every signature +1 by flipping
/// vertices along a spanning forest (flipped vertices reverse their
/// rotation). Fails on non-orientable input.
pub(crate) fn positivized(e: &Embedding) -> Result<Embedding, String> {
    let g = e.graph();
    let mut flip: BTreeMap<u32, i8> = BTreeMap::new();
    let mut queue = std::collections::VecDeque::new();
    for root in g.vertices() {
        if flip.contains_key(&root) {
            continue;
        }
        flip.insert(root, 1);
        queue.push_back(root);
        while let Some(v) = queue.pop_front() {
            for u in g.neighbors(v) {
                if !flip.contains_key(&u) {
                    flip.insert(u, flip[&v] * e.sig(u, v));
                    queue.push_back(u);
                }
            }
        }
    }
    for (u, v) in g.edges() {
        if flip[&u] * e.sig(u, v) * flip[&v] != 1 {
            return Err("embedding is not orientable".into());
        }
    }
    let rotation = g
        .vertices()
        .map(|v| {
            let mut rot = e.rotation(v).to_vec();
            if flip[&v] < 0 {
                rot.reverse();
            }
            (v, rot)
        })
        .collect();
    Embedding::all_positive(g.clone(), rotation)
}

/// The mirror drawing: every rotation reversed. Faces survive with their
/// walks reversed. Only meaningful on all-+1 embeddings.
pub(crate) fn mirrored(e: &Embedding) -> Embedding {
    debug_assert!(e.graph().edges().into_iter().all(|(u, v)| e.sig(u, v) == 1));
    let rotation = e
        .graph()
        .vertices()
        .map(|v| {
            let mut rot = e.rotation(v).to_vec();
            rot.reverse();
            (v, rot)
        })
        .collect();
    Embedding::all_positive(e.graph().clone(), rotation).expect("mirror of a valid embedding")
}

/// Some rotation of `seq` equals `target` → Some(true); some rotation of
/// `seq` reversed → Some(false); otherwise None. Forward wins ties.
pub(crate) fn rotations_match(seq: &[u32], target: &[u32]) -> Option<bool> {
    if seq.len() != target.len() {
        return None;
    }
    if seq.is_empty() {
        return Some(true);
    }
    let n = seq.len();
    for forward in [true, false] {
        let view: Vec<u32> = if forward {
            seq.to_vec()
        } else {
            seq.iter().rev().copied().collect()
        };
        for r in 0..n {
            if (0..n).all(|i| view[(r + i) % n] == target[i]) {
                return Some(forward);
            }
        }
    }
    None
}

/// Cyclic equality of two side sequences. Every dart lies on exactly one
/// traced face, so this identifies face orbits unambiguously.
pub(crate) fn same_orbit(a: &[(u32, u32)], b: &[(u32, u32)]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    let n = a.len();
    (0..n).any(|r| (0..n).all(|i| a[(r + i) % n] == b[i]))
}

pub(crate) fn step_sides(steps: &[Step]) -> Vec<(u32, u32)> {
    steps.iter().map(|s| (s.tail, s.head)).collect()
}

pub(crate) fn step_corners(steps: &[Step]) -> Vec<u32> {
    steps.iter().map(|s| s.head).collect()
}

pub(crate) fn reversed_sides(sides: &[(u32, u32)]) -> Vec<(u32, u32)> {
    sides.iter().rev().map(|&(t, h)| (h, t)).collect()
}

fn outer_steps(child: &Embedding, outer: &[u32]) -> Result<Vec<Step>, String> {
    for f in trace_face_steps(child)? {
        if rotations_match(&step_corners(&f), outer) == Some(true) {
            return Ok(f);
        }
    }
    Err("designated outer walk is not a face of the piece".into())
}

/// Walk index of each boundary vertex; every one must appear exactly once
/// or the seam is geometrically ambiguous.
fn boundary_positions(steps: &[Step], boundary: &[u32]) -> Result<Vec<usize>, String> {
    let corners = step_corners(steps);
    let mut pos = Vec::with_capacity(boundary.len());
    for &b in boundary {
        let hits: Vec<usize> =
            corners.iter().enumerate().filter(|&(_, &c)| c == b).map(|(i, _)| i).collect();
        match hits.len() {
            1 => pos.push(hits[0]),
            0 => return Err(format!("boundary vertex {b} does not lie on the piece's outer walk")),
            k => {
                return Err(format!(
                    "boundary vertex {b} touches the piece's outer walk {k} times, so the seam is ambiguous"
                ))
            }
        }
    }
    Ok(pos)
}

/// True when walking the face visits the boundary in listed order, false
/// when in reversed order.
fn seam_direction(pos: &[usize]) -> Result<bool, String> {
    let r = pos.len();
    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by_key(|&i| pos[i]);
    let visit: Vec<u32> = order.iter().map(|&i| i as u32).collect();
    let idx: Vec<u32> = (0..r as u32).collect();
    match rotations_match(&visit, &idx) {
        Some(forward) => Ok(forward),
        None => Err("boundary vertices are not in cyclic order on the piece's outer walk".into()),
    }
}

#[derive(Debug)]
pub(crate) struct Pasted {
    pub embedding: Embedding,
    /// child-local vertex → its id in the composition
    #[cfg_attr(not(test), allow(dead_code))]
    pub map: BTreeMap<u32, u32>,
}

/// Splices `child` into the face of `base` traced as `face`, identifying
/// `boundary[i]` with `seq[i]`. Both embeddings must be plane with all
/// signatures +1; `face_forward` says whether the face walk visits `seq`
/// in index order. Child edges parallel to base edges collapse onto them.
pub(crate) fn paste(
    base: &Embedding,
    face: &[Step],
    face_forward: bool,
    seq: &[u32],
    child: &Embedding,
    child_outer: &[u32],
    boundary: &[u32],
) -> Result<Pasted, String> {
    debug_assert_eq!(face.len(), seq.len());
    debug_assert_eq!(boundary.len(), seq.len());

    // Orient the child so its outer walk runs against the face walk: two
    // disks glue into a sphere only along oppositely directed seams.
    let steps0 = outer_steps(child, child_outer)?;
    let dir0 = seam_direction(&boundary_positions(&steps0, boundary)?)?;
    let (child, steps) = if dir0 == face_forward {
        let m = mirrored(child);
        let rev: Vec<u32> = child_outer.iter().rev().copied().collect();
        let s = outer_steps(&m, &rev)?;
        (m, s)
    } else {
        (child.clone(), steps0)
    };
    let pos = boundary_positions(&steps, boundary)?;
    debug_assert_eq!(seam_direction(&pos), Ok(!face_forward));

    let bg = base.graph();
    let mut map: BTreeMap<u32, u32> = boundary.iter().copied().zip(seq.iter().copied()).collect();
    let mut next = bg.fresh_id();
    for v in child.graph().vertices() {
        map.entry(v).or_insert_with(|| {
            let id = next;
            next += 1;
            id
        });
    }

    // Child edges whose image already exists keep the base curve; they are
    // left out of the spliced rotations entirely.
    let key = |u: u32, v: u32| (u.min(v), u.max(v));
    let skip: BTreeSet<(u32, u32)> = child
        .graph()
        .edges()
        .into_iter()
        .filter(|&(u, v)| bg.has_edge(map[&u], map[&v]))
        .map(|(u, v)| key(u, v))
        .collect();

    let mut graph = bg.clone();
    for v in child.graph().vertices() {
        graph.add_vertex(map[&v]);
    }
    for (u, v) in child.graph().edges() {
        graph.add_edge(map[&u], map[&v]);
    }

    let mut rotation: BTreeMap<u32, Vec<u32>> =
        bg.vertices().map(|v| (v, base.rotation(v).to_vec())).collect();
    let seam: BTreeSet<u32> = boundary.iter().copied().collect();
    for v in child.graph().vertices().filter(|v| !seam.contains(v)) {
        rotation.insert(map[&v], child.rotation(v).iter().map(|n| map[n]).collect());
    }
    for (i, &b) in boundary.iter().enumerate() {
        // corner of the target face at seq[i]: arrived from a, leaves to bb
        let j = face.iter().position(|s| s.head == seq[i]).expect("simple cycle corner");
        let a = face[j].tail;
        let bb = face[(j + 1) % face.len()].head;
        // child's outer corner at b: the fan from its departure neighbor
        // around to its arrival neighbor is everything drawn inside
        let p = pos[i];
        let arrive = steps[p].tail;
        let depart = steps[(p + 1) % steps.len()].head;
        let rot_c = child.rotation(b);
        let start = rot_c.iter().position(|&x| x == depart).expect("departure neighbor");
        let fan: Vec<u32> = (0..rot_c.len())
            .map(|o| rot_c[(start + o) % rot_c.len()])
            .filter(|&x| !skip.contains(&key(b, x)))
            .map(|x| map[&x])
            .collect();
        if rot_c.len() > 1 {
            debug_assert_eq!(rot_c[(start + rot_c.len() - 1) % rot_c.len()], arrive);
        }
        let rot = rotation.get_mut(&seq[i]).expect("seam vertex rotation");
        let a_pos = rot.iter().position(|&x| x == a).expect("arrival neighbor");
        debug_assert_eq!(rot[(a_pos + 1) % rot.len()], bb, "face corner must be consecutive");
        rot.splice(a_pos + 1..a_pos + 1, fan);
    }

    let embedding = Embedding::all_positive(graph, rotation)?;
    debug_assert_eq!(euler_genus(&embedding), Ok((0, true)));
    Ok(Pasted { embedding, map })
}
