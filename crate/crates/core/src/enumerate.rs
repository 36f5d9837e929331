//! Enumeration and sampling of multigraph corpora.
//!
//! Graphs on `n` labelled vertices with bounded pair multiplicities and loop
//! counts are multisets over a fixed slot list, so the module revolves around
//! capped-multiset counting (exact, for budget checks before any work is
//! done) and enumeration (lexicographic, so "first counterexample" is
//! well-defined and reproducible).

use std::ops::ControlFlow;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{MultiGraph, Vertex};
use crate::pebble::{self, PebbleState};

/// Number of multisets with `total` elements drawn from slots with the given
/// capacities. Plain DP over slots; u128 keeps clear of overflow for every
/// corpus size worth enumerating.
pub fn multiset_count(caps: &[usize], total: usize) -> u128 {
    let mut ways = vec![0u128; total + 1];
    ways[0] = 1;
    for &cap in caps {
        let mut next = vec![0u128; total + 1];
        for (t, &w) in ways.iter().enumerate() {
            if w == 0 {
                continue;
            }
            for take in 0..=cap.min(total - t) {
                next[t + take] += w;
            }
        }
        ways = next;
    }
    ways[total]
}

/// Calls `f` with every multiset of `total` elements over the capped slots,
/// encoded as a count per slot, stopping early if `f` breaks. The count of
/// the earliest slot decreases across the enumeration, which makes the
/// *expanded* sequences (slot indices with repetition, ascending) come out in
/// ascending lexicographic order.
pub fn try_for_each_multiset<B, F: FnMut(&[usize]) -> ControlFlow<B>>(
    caps: &[usize],
    total: usize,
    mut f: F,
) -> ControlFlow<B> {
    // Suffix capacities let us prune branches that cannot absorb the rest.
    let mut suffix = vec![0usize; caps.len() + 1];
    for i in (0..caps.len()).rev() {
        suffix[i] = suffix[i + 1].saturating_add(caps[i]);
    }
    if total > suffix[0] {
        return ControlFlow::Continue(());
    }
    let mut counts = vec![0usize; caps.len()];
    fn descend<B, F: FnMut(&[usize]) -> ControlFlow<B>>(
        caps: &[usize],
        suffix: &[usize],
        counts: &mut [usize],
        slot: usize,
        remaining: usize,
        f: &mut F,
    ) -> ControlFlow<B> {
        if remaining == 0 {
            for c in counts[slot..].iter_mut() {
                *c = 0;
            }
            return f(counts);
        }
        if slot == caps.len() {
            return ControlFlow::Continue(());
        }
        let most = caps[slot].min(remaining);
        let least = remaining.saturating_sub(suffix[slot + 1]);
        for take in (least..=most).rev() {
            counts[slot] = take;
            descend(caps, suffix, counts, slot + 1, remaining - take, f)?;
        }
        counts[slot] = 0;
        ControlFlow::Continue(())
    }
    descend(caps, &suffix, &mut counts, 0, total, &mut f)
}

/// [`try_for_each_multiset`] without early exit.
pub fn for_each_multiset<F: FnMut(&[usize])>(caps: &[usize], total: usize, mut f: F) {
    let flow: ControlFlow<()> = try_for_each_multiset(caps, total, |counts| {
        f(counts);
        ControlFlow::Continue(())
    });
    debug_assert!(flow.is_continue());
}

/// All edge slots on `n` vertices: for each vertex `u` ascending, the loop
/// slot at `u` (if `loop_cap > 0`), then the pair slots `(u, v)` for `v > u`
/// ascending. Returns the slot endpoints and their capacities in parallel.
pub fn slot_list(
    n: usize,
    pair_cap: usize,
    loop_cap: usize,
) -> (Vec<(Vertex, Vertex)>, Vec<usize>) {
    let mut slots = Vec::new();
    let mut caps = Vec::new();
    for u in 0..n {
        if loop_cap > 0 {
            slots.push((u, u));
            caps.push(loop_cap);
        }
        for v in u + 1..n {
            slots.push((u, v));
            caps.push(pair_cap);
        }
    }
    (slots, caps)
}

/// Calls `f` with every multigraph on `n` labelled vertices with exactly `m`
/// edges, pair multiplicities at most `pair_cap` and loop counts at most
/// `loop_cap`. Edge ids follow the slot order, repeats adjacent.
pub fn for_each_graph_with_caps<F: FnMut(&MultiGraph)>(
    n: usize,
    pair_cap: usize,
    loop_cap: usize,
    m: usize,
    mut f: F,
) {
    let (slots, caps) = slot_list(n, pair_cap, loop_cap);
    for_each_multiset(&caps, m, |counts| {
        let edges = slots
            .iter()
            .zip(counts)
            .flat_map(|(&(u, v), &c)| std::iter::repeat_n((u, v), c));
        let g = MultiGraph::from_edges(n, edges).expect("slot endpoints are in range");
        f(&g);
    });
}

/// Number of graphs [`for_each_graph_with_caps`] would visit.
pub fn graph_count_with_caps(n: usize, pair_cap: usize, loop_cap: usize, m: usize) -> u128 {
    let (_, caps) = slot_list(n, pair_cap, loop_cap);
    multiset_count(&caps, m)
}

/// Deduplicates the ambient complement of `g` at level `k` into distinct
/// slots with remaining capacities, preserving first-appearance order (which
/// is ascending in `(u, v)` by construction).
pub fn complement_slots(g: &MultiGraph, k: usize) -> (Vec<(Vertex, Vertex)>, Vec<usize>) {
    let mut slots: Vec<(Vertex, Vertex)> = Vec::new();
    let mut caps: Vec<usize> = Vec::new();
    for (u, v) in g.ambient_complement(k) {
        match slots.last() {
            Some(&last) if last == (u, v) => *caps.last_mut().unwrap() += 1,
            _ => {
                slots.push((u, v));
                caps.push(1);
            }
        }
    }
    (slots, caps)
}

/// Uniform-ish random multigraph: `m` independent draws of a slot from the
/// full slot list with the given caps, redrawing saturated slots.
pub fn random_multigraph<R: Rng>(
    rng: &mut R,
    n: usize,
    pair_cap: usize,
    loop_cap: usize,
    m: usize,
) -> MultiGraph {
    let (slots, caps) = slot_list(n, pair_cap, loop_cap);
    let capacity: usize = caps.iter().sum();
    assert!(m <= capacity, "requested more edges than the caps allow");
    let mut counts = vec![0usize; slots.len()];
    let mut g = MultiGraph::new(n);
    for _ in 0..m {
        loop {
            let i = rng.gen_range(0..slots.len());
            if counts[i] < caps[i] {
                counts[i] += 1;
                let (u, v) = slots[i];
                g.add_edge(u, v).expect("slot endpoints are in range");
                break;
            }
        }
    }
    g
}

/// Random (k, l)-sparse multigraph with exactly `m` edges, built by probing a
/// shuffled ambient slot list (each slot repeated to full multiplicity)
/// against the pebble game and keeping what fits. Returns `None` when the
/// shuffle is exhausted before `m` edges stick, which cannot happen for
/// `m <= k·n − l` on `n >= 2` vertices but keeps callers honest.
pub fn random_sparse_graph<R: Rng>(
    rng: &mut R,
    n: usize,
    k: usize,
    ell: usize,
    m: usize,
) -> Option<MultiGraph> {
    let empty = MultiGraph::new(n);
    let mut pool = empty.ambient_complement(k);
    pool.shuffle(rng);
    let mut state = PebbleState::new(k, ell, n).expect("caller passes a valid pair");
    let mut g = MultiGraph::new(n);
    for (u, v) in pool {
        if g.edge_count() == m {
            break;
        }
        if state.can_insert(u, v) {
            let e = g.add_edge(u, v).expect("slot endpoints are in range");
            let accepted = state.try_insert(&g, e);
            debug_assert!(accepted, "can_insert and try_insert must agree");
        }
    }
    (g.edge_count() == m).then_some(g)
}

/// Random (k, l)-tight multigraph, i.e. sparse with exactly `k·n − l` edges.
pub fn random_tight_graph<R: Rng>(
    rng: &mut R,
    n: usize,
    k: usize,
    ell: usize,
) -> Option<MultiGraph> {
    let m = (k * n).checked_sub(ell)?;
    let g = random_sparse_graph(rng, n, k, ell, m)?;
    debug_assert_eq!(
        pebble::run(&g, k, ell).unwrap().classification,
        pebble::Sparsity::Tight
    );
    Some(g)
}
