//! The (k, ℓ)-pebble game: an incremental recognizer for (k, ℓ)-sparse
//! multigraphs that also produces orientation certificates and counting
//! witnesses.
//!
//! A multigraph is (k, ℓ)-sparse when every vertex subset `V'` that spans at
//! least one edge spans at most `k·|V'| − ℓ` edges, and (k, ℓ)-tight when in
//! addition `m = k·n − ℓ`. The game plays on `k` pebbles per vertex:
//!
//! * inserting an edge `uv` requires `ℓ + 1` pebbles on `{u, v}` (for a loop,
//!   `ℓ + 1` pebbles on the one vertex, so loops only ever enter when
//!   `ℓ ≤ k − 1`);
//! * missing pebbles are pulled in along directed paths of already-accepted
//!   edges, reversing the path to move a pebble to the search root;
//! * an accepted edge is oriented away from an endpoint holding a pebble and
//!   consumes one pebble there.
//!
//! Throughout, `pebbles(v) + out_degree(v) = k` for every vertex (a loop
//! counts once toward the out-degree of its vertex). Rejection of an edge is
//! witnessed by the set of vertices reachable from its endpoints along the
//! current orientation; that set over-spans the sparsity bound in the input
//! graph.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::graph::{EdgeId, MultiGraph, Vertex, VertexSet};

/// Classification produced by a full pebble-game run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sparsity {
    /// Sparse with exactly `k·n − ℓ` edges.
    Tight,
    /// Sparse with fewer than `k·n − ℓ` edges.
    Sparse,
    /// Some edge was rejected; a counting witness exists.
    NotSparse,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PebbleError {
    #[error("pebble game requires k >= 1 and 0 <= l <= 2k - 1, got k={k}, l={ell}")]
    InvalidParameters { k: usize, ell: usize },
    #[error("edge ({u}, {v}) is insertable, so no violation witness exists")]
    InsertionPossible { u: Vertex, v: Vertex },
}

/// Mutable game position: pebble counts plus the orientation of the accepted
/// edges.
///
/// The orientation is stored as per-vertex out-edge lists (sorted by head
/// vertex, then edge id) so that pebble searches explore neighbors in
/// ascending vertex order, which pins down every run deterministically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PebbleState {
    k: usize,
    ell: usize,
    pebbles: Vec<usize>,
    /// `out[v]` holds `(head, edge id)` for each accepted edge oriented out
    /// of `v`; loops appear as `(v, id)` in their own list.
    out: Vec<Vec<(Vertex, EdgeId)>>,
    /// Tail vertex of every accepted edge.
    tails: BTreeMap<EdgeId, Vertex>,
    rejected: BTreeSet<EdgeId>,
}

impl PebbleState {
    /// A fresh position for a game on `n` vertices: `k` pebbles everywhere,
    /// nothing accepted.
    pub fn new(k: usize, ell: usize, n: usize) -> Result<Self, PebbleError> {
        if k == 0 || ell > 2 * k - 1 {
            return Err(PebbleError::InvalidParameters { k, ell });
        }
        Ok(PebbleState {
            k,
            ell,
            pebbles: vec![k; n],
            out: vec![Vec::new(); n],
            tails: BTreeMap::new(),
            rejected: BTreeSet::new(),
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    /// Current pebble count per vertex.
    pub fn pebbles(&self) -> &[usize] {
        &self.pebbles
    }

    /// Tail of an accepted edge, or `None` when `e` was rejected or not yet
    /// offered.
    pub fn tail_of(&self, e: EdgeId) -> Option<Vertex> {
        self.tails.get(&e).copied()
    }

    pub fn accepted(&self) -> impl Iterator<Item = (EdgeId, Vertex)> + '_ {
        self.tails.iter().map(|(&e, &t)| (e, t))
    }

    pub fn rejected(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.rejected.iter().copied()
    }

    /// Offers edge `e` of `g` for insertion. Returns whether it was accepted;
    /// rejection is a normal outcome, not an error.
    ///
    /// Each edge id must be offered at most once.
    pub fn try_insert(&mut self, g: &MultiGraph, e: EdgeId) -> bool {
        assert!(
            !self.tails.contains_key(&e) && !self.rejected.contains(&e),
            "edge {e} offered twice"
        );
        let edge = g.edge(e);
        if !self.gather(edge.u, edge.v) {
            self.rejected.insert(e);
            return false;
        }
        let tail = self.donor(edge.u, edge.v);
        self.pebbles[tail] -= 1;
        self.insert_out(tail, edge.other(tail), e);
        self.tails.insert(e, tail);
        debug_assert!(self.invariant_holds());
        true
    }

    /// Whether a (possibly hypothetical) edge `uv` could be inserted now.
    /// The observable state is untouched: the pebble search runs on a clone.
    pub fn can_insert(&self, u: Vertex, v: Vertex) -> bool {
        if self.on_pair(u, v) > self.ell {
            return true;
        }
        self.clone().gather(u, v)
    }

    /// Counting witness for a failing insertion: the set of vertices
    /// reachable from `{u, v}` along the current orientation. When the edge
    /// `uv` lies in the graph under play, that set `V'` spans more than
    /// `k·|V'| − ℓ` of its edges.
    pub fn violation_witness(&self, u: Vertex, v: Vertex) -> Result<VertexSet, PebbleError> {
        if self.can_insert(u, v) {
            return Err(PebbleError::InsertionPossible { u, v });
        }
        Ok(self.reachable_from(&[u, v]))
    }

    /// Vertices reachable from the seeds along accepted-edge orientation
    /// (seeds included).
    pub fn reachable_from(&self, seeds: &[Vertex]) -> VertexSet {
        let mut seen = vec![false; self.pebbles.len()];
        let mut stack: Vec<Vertex> = Vec::new();
        for &s in seeds {
            if !seen[s] {
                seen[s] = true;
                stack.push(s);
            }
        }
        while let Some(x) = stack.pop() {
            for &(y, _) in &self.out[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.iter()
            .enumerate()
            .filter_map(|(v, &s)| s.then_some(v))
            .collect()
    }

    /// Pebbles currently sitting on the endpoint set `{u, v}` (one vertex for
    /// a loop).
    fn on_pair(&self, u: Vertex, v: Vertex) -> usize {
        if u == v {
            self.pebbles[u]
        } else {
            self.pebbles[u] + self.pebbles[v]
        }
    }

    /// Pulls pebbles toward `{u, v}` until `ℓ + 1` sit there or no further
    /// pebble is reachable. Mutates the orientation via path reversals.
    fn gather(&mut self, u: Vertex, v: Vertex) -> bool {
        while self.on_pair(u, v) < self.ell + 1 {
            if !self.pull_pebble_to(u, u, v) && !self.pull_pebble_to(v, u, v) {
                return false;
            }
        }
        true
    }

    /// Depth-first search from `root` (neighbors in ascending vertex order)
    /// for a pebble on some vertex outside `{u, v}`; on success the path is
    /// reversed, moving that pebble to `root`.
    fn pull_pebble_to(&mut self, root: Vertex, u: Vertex, v: Vertex) -> bool {
        let n = self.pebbles.len();
        let mut parent: Vec<Option<(Vertex, EdgeId)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[root] = true;
        // Stack of (vertex, next out-slot to explore) emulating recursive DFS.
        let mut stack: Vec<(Vertex, usize)> = vec![(root, 0)];
        let mut found: Option<Vertex> = None;
        'search: while let Some(&(x, idx)) = stack.last() {
            if idx >= self.out[x].len() {
                stack.pop();
                continue;
            }
            stack.last_mut().unwrap().1 += 1;
            let (y, e) = self.out[x][idx];
            if seen[y] {
                continue;
            }
            seen[y] = true;
            parent[y] = Some((x, e));
            if y != u && y != v && self.pebbles[y] > 0 {
                found = Some(y);
                break 'search;
            }
            stack.push((y, 0));
        }
        let Some(target) = found else { return false };
        // Reverse the root → target path; each edge's new tail is its old head.
        let mut w = target;
        while w != root {
            let (p, e) = parent[w].expect("path back to root");
            self.remove_out(p, w, e);
            self.insert_out(w, p, e);
            self.tails.insert(e, w);
            w = p;
        }
        self.pebbles[target] -= 1;
        self.pebbles[root] += 1;
        debug_assert!(self.invariant_holds());
        true
    }

    /// Endpoint that donates the pebble for an accepted edge: the
    /// smaller-indexed endpoint holding one, falling back to the other.
    fn donor(&self, u: Vertex, v: Vertex) -> Vertex {
        let (a, b) = (u.min(v), u.max(v));
        if self.pebbles[a] > 0 {
            a
        } else {
            debug_assert!(
                self.pebbles[b] > 0,
                "gather must leave a pebble on {{u, v}}"
            );
            b
        }
    }

    fn insert_out(&mut self, tail: Vertex, head: Vertex, e: EdgeId) {
        let list = &mut self.out[tail];
        let pos = list.partition_point(|&entry| entry < (head, e));
        list.insert(pos, (head, e));
    }

    fn remove_out(&mut self, tail: Vertex, head: Vertex, e: EdgeId) {
        let list = &mut self.out[tail];
        let pos = list
            .iter()
            .position(|&entry| entry == (head, e))
            .expect("edge present in out-list");
        list.remove(pos);
    }

    fn invariant_holds(&self) -> bool {
        (0..self.pebbles.len()).all(|v| self.pebbles[v] + self.out[v].len() == self.k)
    }
}

/// Result of playing the game over every edge of a graph in id order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PebbleGameOutcome {
    pub classification: Sparsity,
    /// `orientation[e]` is the tail of edge `e` when accepted.
    pub orientation: Vec<Option<Vertex>>,
    /// Pebbles left on each vertex; for a tight graph they total exactly `ℓ`.
    pub pebble_counts: Vec<usize>,
    /// Violating vertex set, present exactly when the result is `NotSparse`;
    /// it satisfies `|spanned_edges(V')| > k·|V'| − ℓ`.
    pub witness: Option<VertexSet>,
}

/// Plays the (k, ℓ)-pebble game over all edges of `g` in edge-id order.
///
/// Every edge is offered even after a rejection, so the accepted set is a
/// maximal sparse subgraph and its orientation is returned in full. Which
/// edges end up accepted depends on the offer order, but the classification
/// does not.
pub fn run(g: &MultiGraph, k: usize, ell: usize) -> Result<PebbleGameOutcome, PebbleError> {
    let mut state = PebbleState::new(k, ell, g.vertex_count())?;
    let mut witness = None;
    for (e, edge) in g.edges() {
        if !state.try_insert(g, e) && witness.is_none() {
            witness = Some(state.reachable_from(&[edge.u, edge.v]));
        }
    }
    let n = g.vertex_count();
    let m = g.edge_count();
    let classification = if witness.is_some() {
        Sparsity::NotSparse
    } else if m as i64 == (k * n) as i64 - ell as i64 {
        Sparsity::Tight
    } else {
        Sparsity::Sparse
    };
    let orientation = (0..m).map(|e| state.tail_of(e)).collect();
    Ok(PebbleGameOutcome {
        classification,
        orientation,
        pebble_counts: state.pebbles().to_vec(),
        witness,
    })
}
