//! JSON interchange for certificates. One document per file: a `format`
//! version, a `kind` naming which check to run, and the sections that kind
//! needs. Unknown fields anywhere are rejected, as are sections a kind does
//! not take; a rejected document names the offending field. Graphs are
//! explicit vertex/edge lists (unlike the edge-list text format they can
//! have gaps in the id space, which vortices sharing ids with their base
//! routinely need); embeddings use the rotation-line text format.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::admissibility::Depth;
use crate::cliquesum::{parse_tree, serialize_tree};
use crate::embedding::{
    parse_embedding, serialize_embedding, trace_face_steps, DiskGraph, FaceWalk, Surface,
};
use crate::graph::{Graph, PathDecomposition};
use crate::ContractError;

use super::paste::{rotations_match, step_corners, step_sides};
use super::{
    BasicParams, BasicWitness, CertParams, Outgrowth, Pasting, PatchTree, PieceCase, PieceWitness,
    StructureCertificate, Vortex, VortexSeat,
};

const FORMAT_VERSION: u32 = 1;

/// A parsed certificate document, ready for [`super::check_document`].
#[derive(Clone, Debug)]
pub enum CertDocument {
    Vortex { width: u32, vortex: Vortex },
    StandardVortex { width: u32, vortex: Vortex },
    Outgrowth { vortices: u32, width: u32, outgrowth: Outgrowth },
    Basic(BasicWitness),
    Patch { params: BasicParams, patch: PatchTree },
    Expansion { graph: Graph, params: BasicParams, outgrowth: Outgrowth, patches: Vec<Pasting> },
    Structure(StructureCertificate),
}

fn contract(msg: impl Into<String>) -> ContractError {
    ContractError { clause: msg.into() }
}

#[derive(Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct GraphDoc {
    vertices: Vec<u32>,
    #[serde(default)]
    edges: Vec<(u32, u32)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VortexDoc {
    graph: GraphDoc,
    boundary: Vec<u32>,
    bags: Vec<Vec<u32>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SeatDoc {
    vortex: VortexDoc,
    face: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutgrowthDoc {
    base: String,
    #[serde(default)]
    vortices: Vec<SeatDoc>,
    #[serde(default)]
    strict: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsDoc {
    boundary: u32,
    depth: String,
    degree: u32,
    reach: u32,
    apexes: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BasicDoc {
    embedding: String,
    outer_face: Vec<u32>,
    boundary: Vec<u32>,
    #[serde(default)]
    anchors: Vec<u32>,
    #[serde(default)]
    apexes: Vec<u32>,
    params: ParamsDoc,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PastingDoc {
    face: Vec<u32>,
    child: PatchDoc,
    #[serde(default)]
    strict: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PatchDoc {
    root: BasicDoc,
    #[serde(default)]
    pastings: Vec<PastingDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertParamsDoc {
    boundary: u32,
    degree: u32,
    reach: u32,
    vortices: u32,
    width: u32,
    apexes: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PieceDoc {
    #[serde(default)]
    apexes: Vec<u32>,
    case: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    surface: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    outgrowth: Option<OutgrowthDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    patches: Option<Vec<PastingDoc>>,
}

#[derive(Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct Doc {
    format: u32,
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    width: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    vortices: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    vortex: Option<VortexDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    outgrowth: Option<OutgrowthDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    basic: Option<BasicDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    params: Option<ParamsDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    patch: Option<PatchDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    graph: Option<GraphDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    patches: Option<Vec<PastingDoc>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    host: Option<GraphDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pattern: Option<GraphDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tree: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    profile: Option<CertParamsDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pieces: Option<Vec<PieceDoc>>,
}

impl Doc {
    fn leftover(&self) -> Option<&'static str> {
        if self.width.is_some() {
            return Some("width");
        }
        if self.vortices.is_some() {
            return Some("vortices");
        }
        if self.vortex.is_some() {
            return Some("vortex");
        }
        if self.outgrowth.is_some() {
            return Some("outgrowth");
        }
        if self.basic.is_some() {
            return Some("basic");
        }
        if self.params.is_some() {
            return Some("params");
        }
        if self.patch.is_some() {
            return Some("patch");
        }
        if self.graph.is_some() {
            return Some("graph");
        }
        if self.patches.is_some() {
            return Some("patches");
        }
        if self.host.is_some() {
            return Some("host");
        }
        if self.pattern.is_some() {
            return Some("pattern");
        }
        if self.tree.is_some() {
            return Some("tree");
        }
        if self.profile.is_some() {
            return Some("profile");
        }
        if self.pieces.is_some() {
            return Some("pieces");
        }
        None
    }
}

fn need<T>(x: Option<T>, what: &str, kind: &str) -> Result<T, ContractError> {
    x.ok_or_else(|| contract(format!("the {kind} document needs a '{what}' section")))
}

fn graph_from_doc(d: &GraphDoc) -> Result<Graph, ContractError> {
    let mut g = Graph::new();
    for &v in &d.vertices {
        g.add_vertex(v);
    }
    for &(u, v) in &d.edges {
        if u == v {
            return Err(contract(format!("loop edge {{{u}, {u}}}")));
        }
        if !g.contains_vertex(u) || !g.contains_vertex(v) {
            return Err(contract(format!("edge {{{u}, {v}}} uses an undeclared vertex")));
        }
        g.add_edge(u, v);
    }
    Ok(g)
}

fn graph_to_doc(g: &Graph) -> GraphDoc {
    GraphDoc { vertices: g.vertices().collect(), edges: g.edges() }
}

fn vortex_from_doc(d: VortexDoc) -> Result<Vortex, ContractError> {
    let graph = graph_from_doc(&d.graph).map_err(|e| contract(format!("vortex graph: {}", e.clause)))?;
    let decomposition =
        PathDecomposition { bags: d.bags.iter().map(|b| b.iter().copied().collect()).collect() };
    Ok(Vortex { graph, boundary: d.boundary, decomposition })
}

fn vortex_to_doc(v: &Vortex) -> VortexDoc {
    VortexDoc {
        graph: graph_to_doc(&v.graph),
        boundary: v.boundary.clone(),
        bags: v.decomposition.bags.iter().map(|b| b.iter().copied().collect()).collect(),
    }
}

fn outgrowth_from_doc(d: OutgrowthDoc) -> Result<Outgrowth, ContractError> {
    let base =
        parse_embedding(&d.base).map_err(|e| contract(format!("outgrowth base: {e}")))?;
    let seats = d
        .vortices
        .into_iter()
        .map(|s| Ok(VortexSeat { vortex: vortex_from_doc(s.vortex)?, face: s.face }))
        .collect::<Result<Vec<_>, ContractError>>()?;
    Ok(Outgrowth { base, seats, strict: d.strict })
}

fn outgrowth_to_doc(o: &Outgrowth) -> OutgrowthDoc {
    OutgrowthDoc {
        base: serialize_embedding(&o.base),
        vortices: o
            .seats
            .iter()
            .map(|s| SeatDoc { vortex: vortex_to_doc(&s.vortex), face: s.face.clone() })
            .collect(),
        strict: o.strict,
    }
}

fn params_from_doc(d: ParamsDoc) -> Result<BasicParams, ContractError> {
    let depth: Depth = d.depth.parse().map_err(|e| contract(format!("depth: {e}")))?;
    Ok(BasicParams {
        boundary: d.boundary,
        depth,
        degree: d.degree,
        reach: d.reach,
        apexes: d.apexes,
    })
}

fn params_to_doc(p: &BasicParams) -> ParamsDoc {
    ParamsDoc {
        boundary: p.boundary,
        depth: p.depth.to_string(),
        degree: p.degree,
        reach: p.reach,
        apexes: p.apexes,
    }
}

fn basic_from_doc(d: BasicDoc) -> Result<BasicWitness, ContractError> {
    let emb =
        parse_embedding(&d.embedding).map_err(|e| contract(format!("disk embedding: {e}")))?;
    let faces =
        trace_face_steps(&emb).map_err(|e| contract(format!("disk embedding: {e}")))?;
    let outer = faces
        .iter()
        .find(|f| rotations_match(&step_corners(f), &d.outer_face).is_some())
        .ok_or_else(|| contract("no face of the disk matches the designated outer walk"))?;
    let walk = FaceWalk { sides: step_sides(outer) };
    let disk =
        DiskGraph::new(emb, walk, d.boundary).map_err(|e| contract(format!("disk: {e}")))?;
    Ok(BasicWitness {
        disk,
        anchors: d.anchors.into_iter().collect(),
        apexes: d.apexes.into_iter().collect(),
        params: params_from_doc(d.params)?,
    })
}

fn basic_to_doc(w: &BasicWitness) -> BasicDoc {
    BasicDoc {
        embedding: serialize_embedding(&w.disk.embedding),
        outer_face: w.disk.outer_face.corners(),
        boundary: w.disk.boundary_vertices.clone(),
        anchors: w.anchors.iter().copied().collect(),
        apexes: w.apexes.iter().copied().collect(),
        params: params_to_doc(&w.params),
    }
}

fn patch_from_doc(d: PatchDoc) -> Result<PatchTree, ContractError> {
    Ok(PatchTree {
        root: basic_from_doc(d.root)?,
        pastings: d.pastings.into_iter().map(pasting_from_doc).collect::<Result<_, _>>()?,
    })
}

fn patch_to_doc(t: &PatchTree) -> PatchDoc {
    PatchDoc {
        root: basic_to_doc(&t.root),
        pastings: t.pastings.iter().map(pasting_to_doc).collect(),
    }
}

fn pasting_from_doc(d: PastingDoc) -> Result<Pasting, ContractError> {
    Ok(Pasting { face: d.face, child: patch_from_doc(d.child)?, strict: d.strict })
}

fn pasting_to_doc(p: &Pasting) -> PastingDoc {
    PastingDoc { face: p.face.clone(), child: patch_to_doc(&p.child), strict: p.strict }
}

/// Inverts the surface display names, including the `b<k>` boundary suffix
/// (`o1b2` is the torus with two holes).
fn surface_from_name(name: &str) -> Result<Surface, ContractError> {
    if let Some((head, tail)) = name.rsplit_once('b') {
        if let Ok(b) = tail.parse::<u32>() {
            let s = Surface::parse(head).map_err(contract)?;
            return Ok(Surface { boundary_components: b, ..s });
        }
    }
    Surface::parse(name).map_err(contract)
}

fn cert_params_from_doc(d: CertParamsDoc) -> CertParams {
    CertParams {
        boundary: d.boundary,
        degree: d.degree,
        reach: d.reach,
        vortices: d.vortices,
        width: d.width,
        apexes: d.apexes,
    }
}

fn cert_params_to_doc(p: &CertParams) -> CertParamsDoc {
    CertParamsDoc {
        boundary: p.boundary,
        degree: p.degree,
        reach: p.reach,
        vortices: p.vortices,
        width: p.width,
        apexes: p.apexes,
    }
}

fn piece_from_doc(d: PieceDoc, i: usize) -> Result<PieceWitness, ContractError> {
    let at = |msg: String| contract(format!("piece {i}: {msg}"));
    let case = match d.case.as_str() {
        "bounded-degree" => {
            if d.surface.is_some() || d.outgrowth.is_some() || d.patches.is_some() {
                return Err(at("a bounded-degree case takes no surface, outgrowth, or patches".into()));
            }
            PieceCase::BoundedDegree
        }
        "nonembeddable-surface" => {
            if d.patches.is_some() {
                return Err(at("a nonembeddable-surface case takes no patches".into()));
            }
            let surface = surface_from_name(&d.surface.ok_or_else(|| at("missing surface".into()))?)
                .map_err(|e| at(e.clause))?;
            let outgrowth =
                outgrowth_from_doc(d.outgrowth.ok_or_else(|| at("missing outgrowth".into()))?)
                    .map_err(|e| at(e.clause))?;
            PieceCase::NonembeddableSurface { surface, outgrowth }
        }
        "few-vortex-faces" => {
            let surface = surface_from_name(&d.surface.ok_or_else(|| at("missing surface".into()))?)
                .map_err(|e| at(e.clause))?;
            let outgrowth =
                outgrowth_from_doc(d.outgrowth.ok_or_else(|| at("missing outgrowth".into()))?)
                    .map_err(|e| at(e.clause))?;
            let patches = d
                .patches
                .unwrap_or_default()
                .into_iter()
                .map(pasting_from_doc)
                .collect::<Result<_, _>>()
                .map_err(|e: ContractError| at(e.clause))?;
            PieceCase::FewVortexFaces { surface, outgrowth, patches }
        }
        other => return Err(at(format!("unknown case '{other}'"))),
    };
    Ok(PieceWitness { apexes: d.apexes.into_iter().collect(), case })
}

fn piece_to_doc(w: &PieceWitness) -> PieceDoc {
    let apexes = w.apexes.iter().copied().collect();
    match &w.case {
        PieceCase::BoundedDegree => PieceDoc {
            apexes,
            case: "bounded-degree".into(),
            surface: None,
            outgrowth: None,
            patches: None,
        },
        PieceCase::NonembeddableSurface { surface, outgrowth } => PieceDoc {
            apexes,
            case: "nonembeddable-surface".into(),
            surface: Some(surface.to_string()),
            outgrowth: Some(outgrowth_to_doc(outgrowth)),
            patches: None,
        },
        PieceCase::FewVortexFaces { surface, outgrowth, patches } => PieceDoc {
            apexes,
            case: "few-vortex-faces".into(),
            surface: Some(surface.to_string()),
            outgrowth: Some(outgrowth_to_doc(outgrowth)),
            patches: Some(patches.iter().map(pasting_to_doc).collect()),
        },
    }
}

/// Parses a certificate document. The error names the missing, surplus, or
/// malformed part.
pub fn parse_certificate(text: &str) -> Result<CertDocument, ContractError> {
    let mut doc: Doc = serde_json::from_str(text)
        .map_err(|e| contract(format!("malformed certificate document: {e}")))?;
    if doc.format != FORMAT_VERSION {
        return Err(contract(format!(
            "unsupported format {} (this checker reads format {FORMAT_VERSION})",
            doc.format
        )));
    }
    let kind = std::mem::take(&mut doc.kind);
    let out = match kind.as_str() {
        "vortex" => CertDocument::Vortex {
            width: need(doc.width.take(), "width", &kind)?,
            vortex: vortex_from_doc(need(doc.vortex.take(), "vortex", &kind)?)?,
        },
        "standard-vortex" => CertDocument::StandardVortex {
            width: need(doc.width.take(), "width", &kind)?,
            vortex: vortex_from_doc(need(doc.vortex.take(), "vortex", &kind)?)?,
        },
        "outgrowth" => CertDocument::Outgrowth {
            vortices: need(doc.vortices.take(), "vortices", &kind)?,
            width: need(doc.width.take(), "width", &kind)?,
            outgrowth: outgrowth_from_doc(need(doc.outgrowth.take(), "outgrowth", &kind)?)?,
        },
        "basic" => CertDocument::Basic(basic_from_doc(need(doc.basic.take(), "basic", &kind)?)?),
        "patch" => CertDocument::Patch {
            params: params_from_doc(need(doc.params.take(), "params", &kind)?)?,
            patch: patch_from_doc(need(doc.patch.take(), "patch", &kind)?)?,
        },
        "expansion" => CertDocument::Expansion {
            graph: graph_from_doc(&need(doc.graph.take(), "graph", &kind)?)?,
            params: params_from_doc(need(doc.params.take(), "params", &kind)?)?,
            outgrowth: outgrowth_from_doc(need(doc.outgrowth.take(), "outgrowth", &kind)?)?,
            patches: doc
                .patches
                .take()
                .unwrap_or_default()
                .into_iter()
                .map(pasting_from_doc)
                .collect::<Result<_, _>>()?,
        },
        "structure" => {
            let tree_value = need(doc.tree.take(), "tree", &kind)?;
            let tree_text = serde_json::to_string(&tree_value)
                .expect("a parsed JSON value serializes back");
            let tree = parse_tree(&tree_text)
                .map_err(|e| contract(format!("tree: {}", e.clause)))?;
            let pieces = need(doc.pieces.take(), "pieces", &kind)?
                .into_iter()
                .enumerate()
                .map(|(i, p)| piece_from_doc(p, i))
                .collect::<Result<_, _>>()?;
            CertDocument::Structure(StructureCertificate {
                host: graph_from_doc(&need(doc.host.take(), "host", &kind)?)?,
                pattern: graph_from_doc(&need(doc.pattern.take(), "pattern", &kind)?)?,
                tree,
                params: cert_params_from_doc(need(doc.profile.take(), "profile", &kind)?),
                pieces,
            })
        }
        other => return Err(contract(format!("unknown document kind '{other}'"))),
    };
    if let Some(extra) = doc.leftover() {
        return Err(contract(format!("the {kind} document does not take a '{extra}' section")));
    }
    Ok(out)
}

/// Writes a document back out, pretty-printed.
pub fn serialize_certificate(doc: &CertDocument) -> String {
    let mut out = Doc { format: FORMAT_VERSION, ..Doc::default() };
    match doc {
        CertDocument::Vortex { width, vortex } => {
            out.kind = "vortex".into();
            out.width = Some(*width);
            out.vortex = Some(vortex_to_doc(vortex));
        }
        CertDocument::StandardVortex { width, vortex } => {
            out.kind = "standard-vortex".into();
            out.width = Some(*width);
            out.vortex = Some(vortex_to_doc(vortex));
        }
        CertDocument::Outgrowth { vortices, width, outgrowth } => {
            out.kind = "outgrowth".into();
            out.vortices = Some(*vortices);
            out.width = Some(*width);
            out.outgrowth = Some(outgrowth_to_doc(outgrowth));
        }
        CertDocument::Basic(w) => {
            out.kind = "basic".into();
            out.basic = Some(basic_to_doc(w));
        }
        CertDocument::Patch { params, patch } => {
            out.kind = "patch".into();
            out.params = Some(params_to_doc(params));
            out.patch = Some(patch_to_doc(patch));
        }
        CertDocument::Expansion { graph, params, outgrowth, patches } => {
            out.kind = "expansion".into();
            out.graph = Some(graph_to_doc(graph));
            out.params = Some(params_to_doc(params));
            out.outgrowth = Some(outgrowth_to_doc(outgrowth));
            out.patches = Some(patches.iter().map(pasting_to_doc).collect());
        }
        CertDocument::Structure(c) => {
            out.kind = "structure".into();
            out.host = Some(graph_to_doc(&c.host));
            out.pattern = Some(graph_to_doc(&c.pattern));
            out.tree = Some(
                serde_json::from_str(&serialize_tree(&c.tree))
                    .expect("the clique-sum serializer emits JSON"),
            );
            out.profile = Some(cert_params_to_doc(&c.params));
            out.pieces = Some(c.pieces.iter().map(piece_to_doc).collect());
        }
    }
    serde_json::to_string_pretty(&out).expect("certificate documents serialize")
}
