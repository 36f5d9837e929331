//! Report documents: one envelope per command, rendered either as
//! human-readable text (with timing) or as machine JSON.
//!
//! The machine format is byte-deterministic for a given input — struct field
//! order fixes the key order and no volatile data (timing, paths) is
//! included — so downstream tooling can diff or cache it.

use std::fmt::Write as _;
use std::time::Duration;

use ksparse::{EdgeSet, MapDecomposition, MultiGraph, Sparsity, Vertex, VertexSet};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Machine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Tight,
    Sparse,
    NotSparse,
}

impl From<Sparsity> for Classification {
    fn from(s: Sparsity) -> Self {
        match s {
            Sparsity::Tight => Classification::Tight,
            Sparsity::Sparse => Classification::Sparse,
            Sparsity::NotSparse => Classification::NotSparse,
        }
    }
}

impl Classification {
    fn text(self) -> &'static str {
        match self {
            Classification::Tight => "tight",
            Classification::Sparse => "sparse",
            Classification::NotSparse => "not-sparse",
        }
    }
}

/// The explicit knobs a command ran with; absent ones are omitted.
#[derive(Debug, Default, Serialize)]
pub struct Parameters {
    pub k: usize,
    pub l: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Serialize)]
pub struct GraphSummary {
    pub vertices: usize,
    pub edges: usize,
}

#[derive(Debug, Serialize)]
pub struct Envelope<T: Serialize> {
    pub command: &'static str,
    pub graph: GraphSummary,
    pub parameters: Parameters,
    #[serde(flatten)]
    pub body: T,
}

/// Body text rendering; the envelope takes care of the shared header lines.
pub trait TextBody {
    fn write_text(&self, g: &MultiGraph, out: &mut String);
}

impl<T: Serialize + TextBody> Envelope<T> {
    pub fn emit(&self, g: &MultiGraph, format: Format, elapsed: Duration) {
        match format {
            Format::Machine => {
                println!(
                    "{}",
                    serde_json::to_string_pretty(self).expect("reports always serialize")
                );
            }
            Format::Text => {
                let mut out = String::new();
                writeln!(out, "command: {}", self.command).unwrap();
                writeln!(
                    out,
                    "graph: {} vertices, {} edges",
                    self.graph.vertices, self.graph.edges
                )
                .unwrap();
                let p = &self.parameters;
                write!(out, "parameters: k={} l={}", p.k, p.l).unwrap();
                if let Some(v) = p.p {
                    write!(out, " p={v}").unwrap();
                }
                if let Some(v) = p.method {
                    write!(out, " method={v}").unwrap();
                }
                if let Some(v) = p.budget {
                    write!(out, " budget={v}").unwrap();
                }
                if let Some(v) = p.sample {
                    write!(out, " sample={v}").unwrap();
                }
                if let Some(v) = p.seed {
                    write!(out, " seed={v}").unwrap();
                }
                out.push('\n');
                self.body.write_text(g, &mut out);
                writeln!(out, "elapsed: {:.3} ms", elapsed.as_secs_f64() * 1e3).unwrap();
                print!("{out}");
            }
        }
    }
}

fn join_ids(items: &[usize]) -> String {
    items
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn endpoints(g: &MultiGraph, e: usize) -> String {
    let edge = g.edge(e);
    format!("{}-{}", edge.u, edge.v)
}

// ---- check ----------------------------------------------------------------

#[derive(Debug, Serialize)]
pub struct CheckBody {
    pub classification: Classification,
    pub pebbles: Vec<usize>,
    /// Tail vertex per edge id; `null` for edges the game rejected.
    pub orientation: Vec<Option<Vertex>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Vertex>>,
}

impl TextBody for CheckBody {
    fn write_text(&self, g: &MultiGraph, out: &mut String) {
        writeln!(out, "classification: {}", self.classification.text()).unwrap();
        writeln!(out, "pebbles: {}", join_ids(&self.pebbles)).unwrap();
        for (e, tail) in self.orientation.iter().enumerate() {
            match tail {
                Some(t) => writeln!(out, "edge {e} ({}): tail {t}", endpoints(g, e)).unwrap(),
                None => writeln!(out, "edge {e} ({}): rejected", endpoints(g, e)).unwrap(),
            }
        }
        if let Some(w) = &self.witness {
            writeln!(out, "witness: {}", join_ids(w)).unwrap();
        }
    }
}

// ---- decompose-maps --------------------------------------------------------

#[derive(Debug, Serialize)]
pub struct AssignmentEntry {
    pub edge: usize,
    pub map: usize,
    pub tail: Vertex,
}

pub fn assignment_entries(d: &MapDecomposition) -> Vec<AssignmentEntry> {
    d.assignment
        .iter()
        .enumerate()
        .map(|(edge, &(map, tail))| AssignmentEntry { edge, map, tail })
        .collect()
}

#[derive(Debug, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum MapsOutcome {
    Decomposed { assignment: Vec<AssignmentEntry> },
    NotTight(NotTightBody),
}

#[derive(Debug, Serialize)]
#[serde(tag = "reason", rename_all = "kebab-case")]
pub enum NotTightBody {
    CountMismatch { edges: usize, required: i64 },
    SparsityViolation { witness: Vec<Vertex> },
}

#[derive(Debug, Serialize)]
pub struct MethodResult {
    pub method: &'static str,
    #[serde(flatten)]
    pub outcome: MapsOutcome,
}

#[derive(Debug, Serialize)]
pub struct MapsBody {
    pub results: Vec<MethodResult>,
}

fn write_not_tight(body: &NotTightBody, out: &mut String) {
    match body {
        NotTightBody::CountMismatch { edges, required } => {
            writeln!(
                out,
                "reason: count-mismatch ({edges} edges, need {required})"
            )
            .unwrap();
        }
        NotTightBody::SparsityViolation { witness } => {
            writeln!(out, "witness: {}", join_ids(witness)).unwrap();
        }
    }
}

impl TextBody for MapsBody {
    fn write_text(&self, g: &MultiGraph, out: &mut String) {
        for result in &self.results {
            match &result.outcome {
                MapsOutcome::Decomposed { assignment } => {
                    writeln!(out, "method {}: decomposed", result.method).unwrap();
                    for entry in assignment {
                        writeln!(
                            out,
                            "edge {} ({}): map {} tail {}",
                            entry.edge,
                            endpoints(g, entry.edge),
                            entry.map,
                            entry.tail
                        )
                        .unwrap();
                    }
                }
                MapsOutcome::NotTight(body) => {
                    writeln!(out, "method {}: not-tight", result.method).unwrap();
                    write_not_tight(body, out);
                }
            }
        }
    }
}

// ---- decompose-trees-maps ---------------------------------------------------

#[derive(Debug, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum TreesMapsBody {
    Decomposed {
        tree_parts: Vec<Vec<usize>>,
        map_parts: Vec<Vec<usize>>,
    },
    NotTight(NotTightBody),
}

impl TextBody for TreesMapsBody {
    fn write_text(&self, _g: &MultiGraph, out: &mut String) {
        match self {
            TreesMapsBody::Decomposed {
                tree_parts,
                map_parts,
            } => {
                writeln!(out, "outcome: decomposed").unwrap();
                for (i, part) in tree_parts.iter().enumerate() {
                    writeln!(out, "tree {i}: edges {}", join_ids(part)).unwrap();
                }
                for (i, part) in map_parts.iter().enumerate() {
                    writeln!(out, "map {i}: edges {}", join_ids(part)).unwrap();
                }
            }
            TreesMapsBody::NotTight(body) => {
                writeln!(out, "outcome: not-tight").unwrap();
                write_not_tight(body, out);
            }
        }
    }
}

// ---- augment ----------------------------------------------------------------

#[derive(Debug, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CertificateBody {
    Map { assignment: Vec<AssignmentEntry> },
    Tight { classification: Classification },
}

#[derive(Debug, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum AugmentBody {
    Augmented {
        /// Added slots as (u, v) pairs, in insertion order.
        added: Vec<(Vertex, Vertex)>,
        /// Edge ids the added slots received in the augmented graph.
        added_edge_ids: Vec<usize>,
        certificate: CertificateBody,
    },
    NotSparse {
        witness: Vec<Vertex>,
    },
}

impl TextBody for AugmentBody {
    fn write_text(&self, g: &MultiGraph, out: &mut String) {
        match self {
            AugmentBody::Augmented {
                added,
                added_edge_ids,
                certificate,
            } => {
                writeln!(out, "outcome: augmented").unwrap();
                let slots = added
                    .iter()
                    .map(|(u, v)| format!("({u},{v})"))
                    .collect::<Vec<_>>();
                writeln!(out, "added: {}", slots.join(" ")).unwrap();
                writeln!(out, "added edge ids: {}", join_ids(added_edge_ids)).unwrap();
                // Edge ids here refer to the augmented graph, which the
                // handler passes as the rendering graph.
                match certificate {
                    CertificateBody::Map { assignment } => {
                        writeln!(out, "certificate: map decomposition").unwrap();
                        for entry in assignment {
                            writeln!(
                                out,
                                "edge {} ({}): map {} tail {}",
                                entry.edge,
                                endpoints(g, entry.edge),
                                entry.map,
                                entry.tail
                            )
                            .unwrap();
                        }
                    }
                    CertificateBody::Tight { classification } => {
                        writeln!(out, "certificate: {}", classification.text()).unwrap();
                    }
                }
            }
            AugmentBody::NotSparse { witness } => {
                writeln!(out, "outcome: not-sparse").unwrap();
                writeln!(out, "witness: {}", join_ids(witness)).unwrap();
            }
        }
    }
}

// ---- verify-any ---------------------------------------------------------------

#[derive(Debug, Serialize)]
pub struct CounterexampleBody {
    pub slots: Vec<(Vertex, Vertex)>,
    pub witness: Vec<Vertex>,
}

#[derive(Debug, Serialize)]
pub struct VerifyAnyBody {
    pub mode: &'static str,
    pub predicted: bool,
    pub verdict: bool,
    pub checked: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<CounterexampleBody>,
}

impl TextBody for VerifyAnyBody {
    fn write_text(&self, _g: &MultiGraph, out: &mut String) {
        writeln!(out, "mode: {}", self.mode).unwrap();
        writeln!(out, "predicted: {}", self.predicted).unwrap();
        writeln!(out, "verdict: {}", self.verdict).unwrap();
        writeln!(out, "checked: {}", self.checked).unwrap();
        match &self.counterexample {
            Some(cx) => {
                let slots = cx
                    .slots
                    .iter()
                    .map(|(u, v)| format!("({u},{v})"))
                    .collect::<Vec<_>>();
                writeln!(out, "counterexample: {}", slots.join(" ")).unwrap();
                writeln!(out, "counterexample witness: {}", join_ids(&cx.witness)).unwrap();
            }
            None => writeln!(out, "counterexample: none").unwrap(),
        }
    }
}

// Conversions shared by handlers.

pub fn sorted_vertices(set: &VertexSet) -> Vec<Vertex> {
    set.iter().copied().collect()
}

pub fn sorted_edges(set: &EdgeSet) -> Vec<usize> {
    set.iter().copied().collect()
}
