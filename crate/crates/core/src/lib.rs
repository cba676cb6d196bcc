//! Desk-scale structural graph algorithms: surfaces and rotation-system
//! embeddings, ordering admissibility, clique-sum machinery, topological
//! minor / immersion search, and structure-certificate checking.

pub mod admissibility;
pub mod certcheck;
pub mod cliquesum;
pub mod embedding;
pub mod generators;
pub mod graph;
pub mod metric;
pub mod patterns;

pub use admissibility::{
    admissibility_exact, admissibility_greedy, backconnectivity, ordering_admissibility,
    AdmError, AdmissibilityReport, Depth, DEFAULT_EXACT_VERTICES,
};
pub use certcheck::{
    check_basic, check_certificate, check_document, check_expansion, check_outgrowth,
    check_patch, check_standard_vortex, check_vortex, outgrowth_graph, parse_certificate,
    serialize_certificate, BasicParams, BasicWitness, CertDocument, CertParams, Outgrowth,
    Pasting, PatchTree, PieceCase, PieceWitness, StructureCertificate, Verdict, Vortex,
    VortexSeat,
};
pub use cliquesum::{
    clique_sum, compose, converse_ordering, parse_tree, serialize_tree, CliqueSumTree, TreeEdge,
};
pub use embedding::{
    embeds_in, euler_genus, mf, mf_with_witness, min_genus, nicify, parse_embedding,
    radial_distance, serialize_embedding, trace_faces, DiskGraph, EmbedError, Embedding, FaceWalk,
    MfWitness, NiceEmbedding, Surface, DEFAULT_EDGE_LIMIT,
};
pub use graph::{
    high_degree_vertices, parse_graph, serialize_graph, subdivide_edge, Graph, Ordering,
    ParseError, PathDecomposition,
};
pub use metric::{metric_sparsify, ContractError, FiniteMetric};
pub use patterns::{
    find_immersion, find_topological_minor, verify_model, ImmersionModel, Model, PatternError,
    TopMinorModel, DEFAULT_HOST_VERTICES, DEFAULT_PATTERN_EDGES,
};

/// Search budget shared by the exhaustive operations (genus enumeration,
/// exact admissibility, pattern search). Each operation has a built-in
/// default limit; a raised budget lifts every limit to at least that value.
/// Exceeding a budget is reported as an explicit error, never silently
/// truncated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Budget {
    pub raise: Option<u64>,
}

impl Budget {
    pub fn raised(n: u64) -> Self {
        Budget { raise: Some(n) }
    }

    /// Effective limit: the operation default, or the raised value if larger.
    pub fn limit(&self, default_limit: u64) -> u64 {
        default_limit.max(self.raise.unwrap_or(0))
    }
}

/// A search refused to run past its budget; the operation's answer is unknown.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BudgetExceeded {
    pub what: String,
    pub limit: u64,
    pub needed: u64,
}

impl std::fmt::Display for BudgetExceeded {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "budget exceeded: {} needs {} but the limit is {} (raise --budget / STRUKT_BUDGET)",
            self.what, self.needed, self.limit
        )
    }
}

impl std::error::Error for BudgetExceeded {}
