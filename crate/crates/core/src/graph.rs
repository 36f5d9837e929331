//! Undirected multigraphs with stable positional edge identity.
//!
//! Vertices are `0..n`. Edges are stored in insertion order and an edge id is
//! simply its index in that order; ids never change, which lets orientations,
//! decompositions and witnesses refer to edges positionally. Loops and
//! parallel edges are allowed throughout.

use std::collections::BTreeSet;
use thiserror::Error;

/// A vertex index in `0..n`.
pub type Vertex = usize;
/// A positional edge id (index into the insertion-ordered edge list).
pub type EdgeId = usize;

/// Sorted vertex-id set; deterministic iteration order.
pub type VertexSet = BTreeSet<Vertex>;
/// Sorted edge-id set; deterministic iteration order.
pub type EdgeSet = BTreeSet<EdgeId>;

/// An undirected edge `{u, v}`; `u == v` is a loop.
///
/// Endpoints are stored with `u <= v`; the *orientation* of an edge is never
/// part of the graph itself but of the structures layered on top.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub u: Vertex,
    pub v: Vertex,
}

impl Edge {
    /// True when both endpoints coincide.
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    /// The endpoint different from `w`, or `w` itself for a loop.
    pub fn other(&self, w: Vertex) -> Vertex {
        debug_assert!(w == self.u || w == self.v);
        if w == self.u {
            self.v
        } else {
            self.u
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {vertices} vertices")]
    InvalidVertex { vertex: Vertex, vertices: usize },
}

/// An undirected multigraph on a fixed vertex set `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiGraph {
    vertices: usize,
    edges: Vec<Edge>,
}

impl MultiGraph {
    /// An edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        MultiGraph {
            vertices: n,
            edges: Vec::new(),
        }
    }

    /// Builds a graph from an edge list; edge ids follow list order.
    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (Vertex, Vertex)>,
    ) -> Result<Self, GraphError> {
        let mut g = MultiGraph::new(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// The complete graph `K_n` (no loops, single edges), pairs in
    /// lexicographic order.
    pub fn complete(n: usize) -> Self {
        let mut g = MultiGraph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).expect("endpoints in range");
            }
        }
        g
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Appends an edge (or loop) and returns its id, the next free index.
    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<EdgeId, GraphError> {
        for w in [u, v] {
            if w >= self.vertices {
                return Err(GraphError::InvalidVertex {
                    vertex: w,
                    vertices: self.vertices,
                });
            }
        }
        self.edges.push(Edge {
            u: u.min(v),
            v: u.max(v),
        });
        Ok(self.edges.len() - 1)
    }

    pub fn edge(&self, e: EdgeId) -> Edge {
        self.edges[e]
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, Edge)> + '_ {
        self.edges.iter().copied().enumerate()
    }

    /// Number of non-loop edges between the distinct vertices `u` and `v`.
    pub fn pair_multiplicity(&self, u: Vertex, v: Vertex) -> usize {
        debug_assert_ne!(u, v);
        let (a, b) = (u.min(v), u.max(v));
        self.edges.iter().filter(|e| e.u == a && e.v == b).count()
    }

    /// Number of loops at `v`.
    pub fn loop_count(&self, v: Vertex) -> usize {
        self.edges.iter().filter(|e| e.u == v && e.v == v).count()
    }

    /// Ids of the edges with both endpoints (for a loop: its vertex) in `verts`.
    pub fn spanned_edges(&self, verts: &VertexSet) -> EdgeSet {
        self.edges()
            .filter(|(_, e)| verts.contains(&e.u) && verts.contains(&e.v))
            .map(|(id, _)| id)
            .collect()
    }

    /// All endpoints touched by the given edges (a loop contributes its vertex).
    pub fn vertex_span(&self, edges: &EdgeSet) -> VertexSet {
        let mut verts = VertexSet::new();
        for &e in edges {
            let edge = self.edge(e);
            verts.insert(edge.u);
            verts.insert(edge.v);
        }
        verts
    }

    /// The subgraph keeping all `n` vertices but only the given edges,
    /// re-indexed in ascending id order.
    pub fn restriction(&self, edges: &EdgeSet) -> MultiGraph {
        MultiGraph {
            vertices: self.vertices,
            edges: edges.iter().map(|&e| self.edge(e)).collect(),
        }
    }

    /// The multiset of edge slots missing from this graph relative to the
    /// ambient complete multigraph with `k` loops per vertex and pair
    /// multiplicity `2k`.
    ///
    /// Slots come out in a fixed order — for each vertex `u` ascending, first
    /// the remaining loop slots at `u`, then the remaining slots for pairs
    /// `(u, v)` with `v > u` ascending — with copies of the same slot
    /// adjacent. Augmentation scans and exhaustive addition enumerate in
    /// exactly this order, so results are reproducible.
    pub fn ambient_complement(&self, k: usize) -> Vec<(Vertex, Vertex)> {
        let mut slots = Vec::new();
        for u in 0..self.vertices {
            let loops = self.loop_count(u);
            for _ in loops..k {
                slots.push((u, u));
            }
            for v in u + 1..self.vertices {
                let mult = self.pair_multiplicity(u, v);
                for _ in mult..2 * k {
                    slots.push((u, v));
                }
            }
        }
        slots
    }
}
