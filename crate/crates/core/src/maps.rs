//! Decomposition of (k, 0)-tight multigraphs into k edge-disjoint spanning
//! maps (a map: every vertex has out-degree exactly one under some
//! orientation).
//!
//! Two independent routes produce the same kind of certificate and are kept
//! side by side as cross-checks:
//!
//! * **matching** — build the incidence bipartite graph with one left vertex
//!   per edge and k right copies per vertex, find a maximum matching, and
//!   read map index and tail off each edge's matched copy;
//! * **orientation** — run the (k, 0)-pebble game and deal each vertex's k
//!   out-edges to maps 0..k−1.
//!
//! A failed matching yields a Hall violator whose edges pin down a vertex set
//! spanning more than k times its size.

use std::collections::VecDeque;

use crate::graph::{EdgeId, MultiGraph, Vertex, VertexSet};
use crate::pebble::{self, Sparsity};

use thiserror::Error;

/// Why a graph admits no k-map decomposition.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum NotTight {
    #[error("graph has {edges} edges but a k-map needs exactly {required}")]
    CountMismatch { edges: usize, required: usize },
    #[error("vertex set spans more than k times its size")]
    SparsityViolation { vertices: VertexSet },
}

/// The bipartite incidence structure `B_k(G)`: left vertices are the edges of
/// `G`, right vertices are `k` copies of each vertex of `G` (copy `c` of
/// vertex `v` has id `v·k + c`). An edge-vertex is adjacent to every copy of
/// each of its endpoints, so ordinary edges have degree `2k` and loops `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceBipartite {
    k: usize,
    right_count: usize,
    /// Sorted adjacency (right-vertex ids) per left vertex.
    adjacency: Vec<Vec<usize>>,
}

impl IncidenceBipartite {
    pub fn new(g: &MultiGraph, k: usize) -> Self {
        assert!(k >= 1, "incidence structure needs k >= 1");
        let adjacency = g
            .edges()
            .map(|(_, edge)| {
                let mut row: Vec<usize> = (0..k).map(|c| edge.u * k + c).collect();
                if !edge.is_loop() {
                    row.extend((0..k).map(|c| edge.v * k + c));
                }
                row
            })
            .collect();
        IncidenceBipartite {
            k,
            right_count: g.vertex_count() * k,
            adjacency,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn left_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn right_count(&self) -> usize {
        self.right_count
    }

    /// Right-vertex ids adjacent to edge-vertex `e`.
    pub fn neighbors(&self, e: EdgeId) -> &[usize] {
        &self.adjacency[e]
    }

    /// Decodes a right-vertex id into `(vertex, copy)`.
    pub fn copy_of(&self, right: usize) -> (Vertex, usize) {
        (right / self.k, right % self.k)
    }
}

/// A maximum matching of an [`IncidenceBipartite`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteMatching {
    /// Matched right vertex per left vertex.
    pub left_to_right: Vec<Option<usize>>,
    /// Matched left vertex per right vertex.
    pub right_to_left: Vec<Option<usize>>,
}

impl BipartiteMatching {
    pub fn size(&self) -> usize {
        self.left_to_right.iter().flatten().count()
    }
}

/// Hopcroft–Karp maximum matching. Left vertices and adjacency lists are
/// always scanned in ascending order, so the result is deterministic.
pub fn maximum_bipartite_matching(b: &IncidenceBipartite) -> BipartiteMatching {
    const UNREACHED: usize = usize::MAX;
    let lefts = b.left_count();
    let mut match_left: Vec<Option<usize>> = vec![None; lefts];
    let mut match_right: Vec<Option<usize>> = vec![None; b.right_count()];
    let mut dist = vec![UNREACHED; lefts];

    loop {
        // Layer the left vertices by alternating BFS from the free ones.
        let mut queue: VecDeque<usize> = VecDeque::new();
        for u in 0..lefts {
            if match_left[u].is_none() {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = UNREACHED;
            }
        }
        let mut layered_free_right = false;
        while let Some(u) = queue.pop_front() {
            for &r in b.neighbors(u) {
                match match_right[r] {
                    None => layered_free_right = true,
                    Some(u2) => {
                        if dist[u2] == UNREACHED {
                            dist[u2] = dist[u] + 1;
                            queue.push_back(u2);
                        }
                    }
                }
            }
        }
        if !layered_free_right {
            break;
        }

        // Augment along disjoint shortest paths.
        fn try_augment(
            b: &IncidenceBipartite,
            u: usize,
            match_left: &mut [Option<usize>],
            match_right: &mut [Option<usize>],
            dist: &mut [usize],
        ) -> bool {
            for &r in b.neighbors(u) {
                let extendable = match match_right[r] {
                    None => true,
                    Some(u2) => {
                        dist[u2] == dist[u] + 1 && try_augment(b, u2, match_left, match_right, dist)
                    }
                };
                if extendable {
                    match_left[u] = Some(r);
                    match_right[r] = Some(u);
                    return true;
                }
            }
            dist[u] = UNREACHED; // dead end for this phase
            false
        }
        let mut progressed = false;
        for u in 0..lefts {
            if match_left[u].is_none() {
                progressed |= try_augment(b, u, &mut match_left, &mut match_right, &mut dist);
            }
        }
        if !progressed {
            break;
        }
    }
    BipartiteMatching {
        left_to_right: match_left,
        right_to_left: match_right,
    }
}

/// Assignment of every edge to one of `k` maps together with its tail within
/// that map: `assignment[e] = (map index, tail vertex)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapDecomposition {
    pub assignment: Vec<(usize, Vertex)>,
}

impl MapDecomposition {
    /// Edge ids of one map, ascending.
    pub fn map_edges(&self, map: usize) -> Vec<EdgeId> {
        self.assignment
            .iter()
            .enumerate()
            .filter(|(_, &(m, _))| m == map)
            .map(|(e, _)| e)
            .collect()
    }
}

/// Decomposes via maximum matching in `B_k(G)`: a perfect matching matches
/// edge `e` to copy `c` of vertex `v`, putting `e` in map `c` with tail `v`.
///
/// An imperfect matching yields the set of left vertices reachable by
/// alternating paths from the smallest unmatched edge-vertex; the vertices
/// their edges span form the violating set returned.
pub fn decompose_via_matching(g: &MultiGraph, k: usize) -> Result<MapDecomposition, NotTight> {
    assert!(k >= 1, "map decomposition needs k >= 1");
    let required = k * g.vertex_count();
    if g.edge_count() != required {
        return Err(NotTight::CountMismatch {
            edges: g.edge_count(),
            required,
        });
    }
    let b = IncidenceBipartite::new(g, k);
    let matching = maximum_bipartite_matching(&b);
    if matching.size() == g.edge_count() {
        let assignment = matching
            .left_to_right
            .iter()
            .map(|r| {
                let (v, c) = b.copy_of(r.expect("perfect matching"));
                (c, v)
            })
            .collect();
        return Ok(MapDecomposition { assignment });
    }
    Err(NotTight::SparsityViolation {
        vertices: hall_violator_span(g, &b, &matching),
    })
}

/// Vertex span of the Hall violator grown from the smallest unmatched
/// edge-vertex by alternating search (non-matching edges left→right, matching
/// edges right→left).
fn hall_violator_span(
    g: &MultiGraph,
    b: &IncidenceBipartite,
    matching: &BipartiteMatching,
) -> VertexSet {
    let start = matching
        .left_to_right
        .iter()
        .position(|r| r.is_none())
        .expect("an imperfect matching leaves some edge unmatched");
    let mut left_seen = vec![false; b.left_count()];
    let mut right_seen = vec![false; b.right_count()];
    left_seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for &r in b.neighbors(u) {
            if right_seen[r] {
                continue;
            }
            right_seen[r] = true;
            if let Some(u2) = matching.right_to_left[r] {
                if !left_seen[u2] {
                    left_seen[u2] = true;
                    queue.push_back(u2);
                }
            }
        }
    }
    let violator = left_seen
        .iter()
        .enumerate()
        .filter_map(|(e, &s)| s.then_some(e))
        .collect();
    g.vertex_span(&violator)
}

/// Decomposes via the (k, 0)-pebble game: on a tight graph every vertex ends
/// with out-degree exactly k, and its out-edges are dealt to maps 0..k−1 in
/// ascending edge-id order.
pub fn decompose_via_orientation(g: &MultiGraph, k: usize) -> Result<MapDecomposition, NotTight> {
    assert!(k >= 1, "map decomposition needs k >= 1");
    let required = k * g.vertex_count();
    if g.edge_count() != required {
        return Err(NotTight::CountMismatch {
            edges: g.edge_count(),
            required,
        });
    }
    let outcome = pebble::run(g, k, 0).expect("(k, 0) is always a valid parameter pair");
    match outcome.classification {
        Sparsity::NotSparse => Err(NotTight::SparsityViolation {
            vertices: outcome
                .witness
                .expect("a non-sparse run always carries a witness"),
        }),
        Sparsity::Sparse => unreachable!("m = k·n and all edges accepted means tight"),
        Sparsity::Tight => {
            let mut assignment = vec![(0usize, 0usize); g.edge_count()];
            let mut dealt = vec![0usize; g.vertex_count()];
            for (e, tail) in outcome.orientation.iter().enumerate() {
                let tail = tail.expect("every edge of a tight graph is accepted");
                assignment[e] = (dealt[tail], tail);
                dealt[tail] += 1;
            }
            debug_assert!(dealt.iter().all(|&d| d == k));
            Ok(MapDecomposition { assignment })
        }
    }
}

/// Checks a claimed decomposition: every edge assigned once to a map below
/// `k` with a tail at one of its endpoints, and in every map every vertex has
/// out-degree exactly one.
pub fn verify_decomposition(g: &MultiGraph, k: usize, d: &MapDecomposition) -> bool {
    if d.assignment.len() != g.edge_count() {
        return false;
    }
    let mut out_degree = vec![vec![0usize; k]; g.vertex_count()];
    for (e, &(map, tail)) in d.assignment.iter().enumerate() {
        let edge = g.edge(e);
        if map >= k || (tail != edge.u && tail != edge.v) {
            return false;
        }
        out_degree[tail][map] += 1;
    }
    out_degree
        .iter()
        .all(|per_vertex| per_vertex.iter().all(|&d| d == 1))
}
