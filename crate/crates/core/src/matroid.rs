//! Count matroids over a multigraph's edge set and a matroid-union
//! partitioner.
//!
//! Three independence notions are provided over a fixed graph:
//!
//! * **graphic** — the edge set is a forest;
//! * **bicycle** — every connected component of the edge set carries at most
//!   one cycle (bases are spanning maps: out-degree-one orientable);
//! * **k-fold bicycle union** — the edge set is (k, 0)-sparse, plus its rank
//!   truncation at `k·n − ℓ`.
//!
//! The union partitioner covers as much of a ground set as possible by
//! disjoint parts, one per supplied oracle, using breadth-first augmenting
//! paths in the element-exchange digraph. On a (k, ℓ)-tight graph with
//! `ℓ ≤ k`, running it with ℓ graphic parts and k−ℓ bicycle parts yields the
//! trees-and-maps decomposition.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use thiserror::Error;

use crate::graph::{EdgeId, EdgeSet, MultiGraph, Vertex, VertexSet};
use crate::pebble::{self, Sparsity};

/// An independence predicate over edge subsets of a fixed graph.
///
/// Implementations must be monotone (subsets of independent sets are
/// independent) and accept the empty set; the union partitioner reports an
/// [`MatroidError::OracleViolation`] when it catches an oracle breaking this.
pub trait IndependenceOracle {
    fn is_independent(&self, edges: &EdgeSet) -> bool;
}

/// True when `edges` forms a forest in `g` (no loops, no cycles).
pub fn graphic_independent(g: &MultiGraph, edges: &EdgeSet) -> bool {
    let mut dsu = DisjointSets::new(g.vertex_count());
    for &e in edges {
        let edge = g.edge(e);
        if edge.is_loop() || !dsu.union(edge.u, edge.v) {
            return false;
        }
    }
    true
}

/// True when every connected component of `edges` carries at most as many
/// edges as vertices, i.e. at most one cycle (a loop counts as a cycle).
pub fn bicycle_independent(g: &MultiGraph, edges: &EdgeSet) -> bool {
    let mut dsu = DisjointSets::new(g.vertex_count());
    for &e in edges {
        let edge = g.edge(e);
        dsu.union(edge.u, edge.v);
    }
    let mut edge_load: BTreeMap<Vertex, usize> = BTreeMap::new();
    for &e in edges {
        let root = dsu.find(g.edge(e).u);
        *edge_load.entry(root).or_default() += 1;
    }
    edge_load
        .into_iter()
        .all(|(root, load)| load <= dsu.component_size(root))
}

/// True when `edges` is (k, 0)-sparse in `g`, i.e. independent in the k-fold
/// union of the bicycle matroid.
pub fn union_bicycle_independent(g: &MultiGraph, k: usize, edges: &EdgeSet) -> bool {
    let restricted = g.restriction(edges);
    pebble::run(&restricted, k, 0)
        .map(|outcome| outcome.classification != Sparsity::NotSparse)
        .expect("(k, 0) is always a valid pebble-game parameter pair")
}

/// Independence in the truncation of the k-fold bicycle union at rank
/// `k·n − ℓ`: (k, 0)-sparse and not too large.
pub fn truncation_independent(g: &MultiGraph, k: usize, ell: usize, edges: &EdgeSet) -> bool {
    edges.len() as i64 <= (k * g.vertex_count()) as i64 - ell as i64
        && union_bicycle_independent(g, k, edges)
}

/// [`graphic_independent`] as an oracle value.
pub struct GraphicOracle<'g> {
    graph: &'g MultiGraph,
}

impl<'g> GraphicOracle<'g> {
    pub fn new(graph: &'g MultiGraph) -> Self {
        GraphicOracle { graph }
    }
}

impl IndependenceOracle for GraphicOracle<'_> {
    fn is_independent(&self, edges: &EdgeSet) -> bool {
        graphic_independent(self.graph, edges)
    }
}

/// [`bicycle_independent`] as an oracle value.
pub struct BicycleOracle<'g> {
    graph: &'g MultiGraph,
}

impl<'g> BicycleOracle<'g> {
    pub fn new(graph: &'g MultiGraph) -> Self {
        BicycleOracle { graph }
    }
}

impl IndependenceOracle for BicycleOracle<'_> {
    fn is_independent(&self, edges: &EdgeSet) -> bool {
        bicycle_independent(self.graph, edges)
    }
}

/// [`union_bicycle_independent`] as an oracle value.
pub struct UnionBicycleOracle<'g> {
    graph: &'g MultiGraph,
    k: usize,
}

impl<'g> UnionBicycleOracle<'g> {
    pub fn new(graph: &'g MultiGraph, k: usize) -> Self {
        UnionBicycleOracle { graph, k }
    }
}

impl IndependenceOracle for UnionBicycleOracle<'_> {
    fn is_independent(&self, edges: &EdgeSet) -> bool {
        union_bicycle_independent(self.graph, self.k, edges)
    }
}

/// [`truncation_independent`] as an oracle value.
pub struct TruncationOracle<'g> {
    graph: &'g MultiGraph,
    k: usize,
    ell: usize,
}

impl<'g> TruncationOracle<'g> {
    pub fn new(graph: &'g MultiGraph, k: usize, ell: usize) -> Self {
        TruncationOracle { graph, k, ell }
    }
}

impl IndependenceOracle for TruncationOracle<'_> {
    fn is_independent(&self, edges: &EdgeSet) -> bool {
        truncation_independent(self.graph, self.k, self.ell, edges)
    }
}

/// Per-subset memoization wrapper; one cache per oracle per run. Subsets are
/// keyed by their sorted id list.
pub struct MemoOracle<'a> {
    inner: &'a dyn IndependenceOracle,
    cache: RefCell<HashMap<Vec<EdgeId>, bool>>,
}

impl<'a> MemoOracle<'a> {
    pub fn new(inner: &'a dyn IndependenceOracle) -> Self {
        MemoOracle {
            inner,
            cache: RefCell::new(HashMap::new()),
        }
    }
}

impl IndependenceOracle for MemoOracle<'_> {
    fn is_independent(&self, edges: &EdgeSet) -> bool {
        let key: Vec<EdgeId> = edges.iter().copied().collect();
        if let Some(&hit) = self.cache.borrow().get(&key) {
            return hit;
        }
        let answer = self.inner.is_independent(edges);
        self.cache.borrow_mut().insert(key, answer);
        answer
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatroidError {
    #[error("oracle {part} returned inconsistent answers (not a matroid)")]
    OracleViolation { part: usize },
}

/// Result of the union partitioner: one part per oracle plus the elements no
/// augmenting path could cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnionPartition {
    pub parts: Vec<EdgeSet>,
    pub uncovered: EdgeSet,
}

impl UnionPartition {
    pub fn covered_count(&self) -> usize {
        self.parts.iter().map(|p| p.len()).sum()
    }
}

/// Partitions as much of `ground` as possible into disjoint parts, part `i`
/// independent under `oracles[i]`, via shortest augmenting paths.
///
/// Elements are taken up in ascending id order; each one is covered through a
/// breadth-first search in the exchange digraph (an arc `a → b` means `a` can
/// replace `b` in `b`'s part) ending at an element directly insertable into
/// some part. Ties break by part index, then element id, so the outcome is
/// deterministic. Oracle answers are memoized per subset for the whole run.
pub fn matroid_union_partition(
    ground: &EdgeSet,
    oracles: &[&dyn IndependenceOracle],
) -> Result<UnionPartition, MatroidError> {
    let memoized: Vec<MemoOracle> = oracles.iter().map(|o| MemoOracle::new(*o)).collect();
    for (part, oracle) in memoized.iter().enumerate() {
        if !oracle.is_independent(&EdgeSet::new()) {
            return Err(MatroidError::OracleViolation { part });
        }
    }
    let mut parts: Vec<EdgeSet> = vec![EdgeSet::new(); oracles.len()];
    let mut uncovered = EdgeSet::new();
    for &x in ground {
        if !augment(x, &mut parts, &memoized)? {
            uncovered.insert(x);
        }
    }
    Ok(UnionPartition { parts, uncovered })
}

/// One augmentation round: tries to cover `x`, moving already-covered
/// elements between parts along a shortest exchange path.
fn augment(x: EdgeId, parts: &mut [EdgeSet], oracles: &[MemoOracle]) -> Result<bool, MatroidError> {
    let part_of = |e: EdgeId, parts: &[EdgeSet]| parts.iter().position(|p| p.contains(&e));

    // Part accepting `e` directly, if any (the BFS goal test).
    let insertable_into = |e: EdgeId, parts: &[EdgeSet]| -> Option<usize> {
        (0..parts.len()).find(|&j| {
            if parts[j].contains(&e) {
                return false;
            }
            let mut grown = parts[j].clone();
            grown.insert(e);
            oracles[j].is_independent(&grown)
        })
    };

    // Breadth-first search from x; predecessor chain records the exchange path.
    let mut pred: BTreeMap<EdgeId, EdgeId> = BTreeMap::new();
    let mut queue: VecDeque<EdgeId> = VecDeque::new();
    let mut seen: BTreeSet<EdgeId> = BTreeSet::new();
    seen.insert(x);
    queue.push_back(x);
    let mut goal: Option<(EdgeId, usize)> = insertable_into(x, parts).map(|j| (x, j));
    'bfs: while goal.is_none() {
        let Some(a) = queue.pop_front() else {
            break;
        };
        let home = part_of(a, parts);
        for i in 0..parts.len() {
            if Some(i) == home {
                continue;
            }
            for &b in &parts[i] {
                if seen.contains(&b) {
                    continue;
                }
                // Arc a → b: a can take b's slot in part i.
                let mut swapped = parts[i].clone();
                swapped.remove(&b);
                swapped.insert(a);
                if !oracles[i].is_independent(&swapped) {
                    continue;
                }
                seen.insert(b);
                pred.insert(b, a);
                if let Some(j) = insertable_into(b, parts) {
                    goal = Some((b, j));
                    break 'bfs;
                }
                queue.push_back(b);
            }
        }
    }
    let Some((terminal, target)) = goal else {
        return Ok(false);
    };

    // Materialize the path terminal → … → x and snapshot the home parts
    // before mutating anything.
    let mut path = vec![terminal];
    while let Some(&prev) = pred.get(path.last().unwrap()) {
        path.push(prev);
    }
    debug_assert_eq!(*path.last().unwrap(), x);
    let homes: Vec<Option<usize>> = path.iter().map(|&e| part_of(e, parts)).collect();

    // Apply the path end-first: the terminal enters its new part, then each
    // element hands its old slot to its predecessor.
    let mut touched = vec![target];
    parts[target].insert(terminal);
    for w in 0..path.len() - 1 {
        let home = homes[w].expect("path interior elements are covered");
        parts[home].remove(&path[w]);
        parts[home].insert(path[w + 1]);
        touched.push(home);
    }

    // A shortest exchange path keeps every part independent; if one is not,
    // an oracle answered non-monotonically somewhere.
    for part in touched {
        if !oracles[part].is_independent(&parts[part]) {
            return Err(MatroidError::OracleViolation { part });
        }
    }
    Ok(true)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreesMapsError {
    #[error("trees-and-maps decomposition requires 1 <= k and 0 <= l <= k, got k={k}, l={ell}")]
    InvalidParameters { k: usize, ell: usize },
    #[error("graph has {edges} edges but a (k,l)-tight graph needs {required}")]
    CountMismatch { edges: usize, required: i64 },
    #[error("graph is not (k,l)-tight")]
    NotTight { witness: VertexSet },
}

/// Decomposition of a (k, ℓ)-tight graph into ℓ edge-disjoint spanning trees
/// and k − ℓ edge-disjoint spanning maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreesAndMapsPartition {
    pub tree_parts: Vec<EdgeSet>,
    pub map_parts: Vec<EdgeSet>,
}

impl TreesAndMapsPartition {
    /// All parts, trees first.
    pub fn parts(&self) -> impl Iterator<Item = &EdgeSet> {
        self.tree_parts.iter().chain(self.map_parts.iter())
    }
}

/// Splits a (k, ℓ)-tight graph (`0 ≤ ℓ ≤ k`) into ℓ spanning trees and k − ℓ
/// spanning maps via matroid union over ℓ graphic and k − ℓ bicycle oracles.
///
/// Tightness is checked first by the pebble game; the union step then always
/// covers every edge, and counting forces each tree part to size n − 1 (an
/// acyclic set of that size spans) and each map part to size n.
pub fn decompose_trees_and_maps(
    g: &MultiGraph,
    k: usize,
    ell: usize,
) -> Result<TreesAndMapsPartition, TreesMapsError> {
    if k == 0 || ell > k {
        return Err(TreesMapsError::InvalidParameters { k, ell });
    }
    let n = g.vertex_count();
    let m = g.edge_count();
    let required = (k * n) as i64 - ell as i64;
    if m as i64 != required {
        return Err(TreesMapsError::CountMismatch { edges: m, required });
    }
    let outcome = pebble::run(g, k, ell).expect("0 <= l <= k <= 2k - 1");
    if outcome.classification != Sparsity::Tight {
        let witness = outcome
            .witness
            .expect("a non-sparse run always carries a witness");
        return Err(TreesMapsError::NotTight { witness });
    }

    let graphic = GraphicOracle::new(g);
    let bicycle = BicycleOracle::new(g);
    let mut oracles: Vec<&dyn IndependenceOracle> = Vec::with_capacity(k);
    for _ in 0..ell {
        oracles.push(&graphic);
    }
    for _ in ell..k {
        oracles.push(&bicycle);
    }
    let ground: EdgeSet = (0..m).collect();
    let union = matroid_union_partition(&ground, &oracles)
        .expect("graphic and bicycle oracles are genuine matroids");
    assert!(
        union.uncovered.is_empty(),
        "matroid union failed to cover a (k,l)-tight graph"
    );
    let partition = TreesAndMapsPartition {
        tree_parts: union.parts[..ell].to_vec(),
        map_parts: union.parts[ell..].to_vec(),
    };
    debug_assert!(verify_trees_and_maps(g, &partition));
    Ok(partition)
}

/// Checks a trees-and-maps partition against `g`: the parts must partition
/// the edge set, every tree part must be a spanning tree and every map part a
/// spanning map.
pub fn verify_trees_and_maps(g: &MultiGraph, partition: &TreesAndMapsPartition) -> bool {
    let n = g.vertex_count();
    let mut seen = EdgeSet::new();
    for part in partition.parts() {
        for &e in part {
            if e >= g.edge_count() || !seen.insert(e) {
                return false;
            }
        }
    }
    if seen.len() != g.edge_count() {
        return false;
    }
    let tree_size = if n == 0 { 0 } else { n - 1 };
    partition
        .tree_parts
        .iter()
        .all(|t| t.len() == tree_size && graphic_independent(g, t))
        && partition
            .map_parts
            .iter()
            .all(|p| p.len() == n && bicycle_independent(g, p))
}

/// Union-find over vertices with component sizes.
struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, v: usize) -> usize {
        if self.parent[v] != v {
            let root = self.find(self.parent[v]);
            self.parent[v] = root;
        }
        self.parent[v]
    }

    /// Merges the components of `a` and `b`; false when already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (big, small) = if self.size[ra] >= self.size[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[small] = big;
        self.size[big] += self.size[small];
        true
    }

    fn component_size(&mut self, v: usize) -> usize {
        let root = self.find(v);
        self.size[root]
    }
}
