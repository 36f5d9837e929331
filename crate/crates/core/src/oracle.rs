//! Brute-force reference implementations.
//!
//! Everything here trades time for obviousness: direct enumeration with no
//! shared machinery beyond the graph type itself. The test suites treat these
//! as ground truth for the pebble game, the map decompositions and the
//! matroid-union partitioner, so they deliberately avoid reusing any of that
//! code. Hard budgets keep accidental blow-ups from hanging a test run.

use itertools::Itertools;
use thiserror::Error;

use crate::graph::{EdgeId, EdgeSet, MultiGraph, Vertex, VertexSet};
use crate::matroid::{IndependenceOracle, MemoOracle};
use crate::pebble::Sparsity;

/// Enumeration guards for the brute-force routines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    /// `sparse_bruteforce` enumerates `2^n` vertex subsets.
    pub max_vertices: usize,
    /// `kmap_bruteforce` searches up to `2^m` orientations.
    pub max_edges: usize,
    /// `union_partition_bruteforce` tries `(parts + 1)^|E'|` assignments.
    pub max_union_elements: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_vertices: 12,
            max_edges: 16,
            max_union_elements: 10,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BudgetError {
    #[error("{what} of size {size} exceeds the brute-force budget of {limit}")]
    Exceeded {
        what: &'static str,
        size: usize,
        limit: usize,
    },
}

/// Classification plus the first violating subset found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteForceClassification {
    pub classification: Sparsity,
    /// Present exactly for `NotSparse`: the first subset, in
    /// increasing-size-then-lexicographic order, spanning more than
    /// `k·|V'| − ℓ` edges.
    pub witness: Option<VertexSet>,
}

/// Checks (k, ℓ)-sparsity by enumerating every vertex subset.
///
/// The sparsity inequality is enforced for every subset spanning at least one
/// edge; subsets spanning none cannot violate anything.
pub fn sparse_bruteforce(
    g: &MultiGraph,
    k: usize,
    ell: usize,
    budget: &OracleBudget,
) -> Result<BruteForceClassification, BudgetError> {
    let n = g.vertex_count();
    if n > budget.max_vertices {
        return Err(BudgetError::Exceeded {
            what: "vertex set",
            size: n,
            limit: budget.max_vertices,
        });
    }
    let bound = |size: usize| (k * size) as i64 - ell as i64;
    for size in 1..=n {
        for combo in (0..n).combinations(size) {
            let verts: VertexSet = combo.into_iter().collect();
            let spanned = g.spanned_edges(&verts).len();
            if spanned >= 1 && spanned as i64 > bound(size) {
                return Ok(BruteForceClassification {
                    classification: Sparsity::NotSparse,
                    witness: Some(verts),
                });
            }
        }
    }
    let classification = if g.edge_count() as i64 == bound(n) {
        Sparsity::Tight
    } else {
        Sparsity::Sparse
    };
    Ok(BruteForceClassification {
        classification,
        witness: None,
    })
}

/// Decides by exhaustive orientation search whether `g` decomposes into `k`
/// edge-disjoint spanning maps, i.e. admits an orientation with out-degree
/// exactly `k` at every vertex. Returns the tail assignment when one exists.
///
/// Graphs with `m ≠ k·n` are refused without a search: they can never carry
/// such an orientation.
pub fn kmap_bruteforce(
    g: &MultiGraph,
    k: usize,
    budget: &OracleBudget,
) -> Result<Option<Vec<Vertex>>, BudgetError> {
    let n = g.vertex_count();
    let m = g.edge_count();
    if m != k * n {
        return Ok(None);
    }
    if m > budget.max_edges {
        return Err(BudgetError::Exceeded {
            what: "edge set",
            size: m,
            limit: budget.max_edges,
        });
    }
    let mut out_degree = vec![0usize; n];
    let mut tails: Vec<Vertex> = Vec::with_capacity(m);

    fn search(
        g: &MultiGraph,
        k: usize,
        e: EdgeId,
        out_degree: &mut [usize],
        tails: &mut Vec<Vertex>,
    ) -> bool {
        if e == g.edge_count() {
            return out_degree.iter().all(|&d| d == k);
        }
        let edge = g.edge(e);
        let candidates = if edge.is_loop() {
            vec![edge.u]
        } else {
            vec![edge.u, edge.v]
        };
        for tail in candidates {
            if out_degree[tail] < k {
                out_degree[tail] += 1;
                tails.push(tail);
                if search(g, k, e + 1, out_degree, tails) {
                    return true;
                }
                tails.pop();
                out_degree[tail] -= 1;
            }
        }
        false
    }

    if search(g, k, 0, &mut out_degree, &mut tails) {
        Ok(Some(tails))
    } else {
        Ok(None)
    }
}

/// Exact maximum number of elements of `elements` coverable by disjoint sets
/// that are independent in the respective oracles, found by trying every
/// assignment of each element to one of the parts or to none.
pub fn union_partition_bruteforce(
    elements: &EdgeSet,
    oracles: &[&dyn IndependenceOracle],
    budget: &OracleBudget,
) -> Result<usize, BudgetError> {
    if elements.len() > budget.max_union_elements {
        return Err(BudgetError::Exceeded {
            what: "ground set",
            size: elements.len(),
            limit: budget.max_union_elements,
        });
    }
    let memoized: Vec<MemoOracle> = oracles.iter().map(|o| MemoOracle::new(*o)).collect();
    let order: Vec<EdgeId> = elements.iter().copied().collect();
    let mut parts: Vec<EdgeSet> = vec![EdgeSet::new(); oracles.len()];
    let mut best = 0usize;

    fn assign(
        order: &[EdgeId],
        idx: usize,
        covered: usize,
        parts: &mut Vec<EdgeSet>,
        oracles: &[MemoOracle],
        best: &mut usize,
    ) {
        if covered + (order.len() - idx) <= *best {
            return; // cannot beat the incumbent
        }
        if idx == order.len() {
            *best = covered.max(*best);
            return;
        }
        let e = order[idx];
        for i in 0..parts.len() {
            parts[i].insert(e);
            if oracles[i].is_independent(&parts[i]) {
                assign(order, idx + 1, covered + 1, parts, oracles, best);
            }
            parts[i].remove(&e);
        }
        assign(order, idx + 1, covered, parts, oracles, best);
    }

    assign(&order, 0, 0, &mut parts, &memoized, &mut best);
    Ok(best)
}
