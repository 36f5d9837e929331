//! Acceptance suite: one test per release criterion, each emitting a single
//! `[PASS]`/`[FAIL]` line so the final gate is readable at a glance.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see every line.

use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use ksparse::augment::{
    augment_some, augment_some_then_any, predict_any, verify_any_exhaustive, AugmentError,
};
use ksparse::enumerate::{
    complement_slots, for_each_graph_with_caps, for_each_multiset, random_multigraph,
    random_sparse_graph, random_tight_graph,
};
use ksparse::maps::{decompose_via_matching, decompose_via_orientation, verify_decomposition};
use ksparse::matroid::{
    bicycle_independent, decompose_trees_and_maps, graphic_independent, matroid_union_partition,
    truncation_independent, union_bicycle_independent, verify_trees_and_maps, BicycleOracle,
    GraphicOracle, IndependenceOracle,
};
use ksparse::oracle::{
    kmap_bruteforce, sparse_bruteforce, union_partition_bruteforce, OracleBudget,
};
use ksparse::pebble::{self, Sparsity};
use ksparse::{AugmentCertificate, EdgeSet, MultiGraph, VertexSet};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Runs one criterion body and prints exactly one verdict line for it.
fn criterion<F: FnOnce()>(number: usize, description: &str, body: F) {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(()) => println!("[PASS] criterion {number}: {description}"),
        Err(payload) => {
            println!("[FAIL] criterion {number}: {description}");
            resume_unwind(payload);
        }
    }
}

/// A sparsity witness must do its own arithmetic: span at least one edge and
/// more than `k·|W| − l` of them.
fn assert_witness_valid(g: &MultiGraph, k: usize, ell: usize, witness: &VertexSet) {
    let spanned = g.spanned_edges(witness).len();
    assert!(spanned >= 1, "witness spans no edges");
    assert!(
        spanned as i64 > (k * witness.len()) as i64 - ell as i64,
        "witness {witness:?} spans {spanned} edges, within the (k={k}, l={ell}) bound"
    );
}

fn augmented(g: &MultiGraph, additions: &[(usize, usize)]) -> MultiGraph {
    let mut out = g.clone();
    for &(u, v) in additions {
        out.add_edge(u, v).expect("additions stay in range");
    }
    out
}

#[test]
fn criterion_1_complete_graph_baseline() {
    criterion(
        1,
        "K_4 at (2,2): tight, immune to any 2 additions, under 1s",
        || {
            let start = Instant::now();

            // End to end through the binary first.
            let dir = tempfile::tempdir().expect("temp dir");
            let path = dir.path().join("k4.graph");
            std::fs::write(&path, "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n").expect("write");
            let out = Command::new(env!("CARGO_BIN_EXE_ksparse"))
                .args(["check", path.to_str().unwrap(), "-k", "2", "-l", "2"])
                .output()
                .expect("spawn ksparse");
            assert!(out.status.success(), "check on K_4 must exit 0");
            let text = String::from_utf8(out.stdout).unwrap();
            assert!(text.contains("classification: tight"), "{text}");

            // The 26 ambient-complement slots of K_4 admit 55 distinct 2-multisets;
            // every one of them must extend K_4 to a 2-map.
            let g = MultiGraph::complete(4);
            let report = verify_any_exhaustive(&g, 2, 2, 1_000_000).unwrap();
            assert!(report.verdict, "some 2-addition broke down: {report:?}");
            assert_eq!(report.checked, 55);
            assert!(report.counterexample.is_none());

            let (slots, caps) = complement_slots(&g, 2);
            assert_eq!(caps.iter().sum::<usize>(), 26);
            let mut seen = 0u64;
            for_each_multiset(&caps, 2, |counts| {
                let additions: Vec<(usize, usize)> = slots
                    .iter()
                    .zip(counts)
                    .flat_map(|(&s, &c)| std::iter::repeat_n(s, c))
                    .collect();
                let aug = augmented(&g, &additions);
                let d = decompose_via_matching(&aug, 2)
                    .unwrap_or_else(|e| panic!("additions {additions:?} not a 2-map: {e}"));
                assert!(verify_decomposition(&aug, 2, &d));
                seen += 1;
            });
            assert_eq!(seen, 55);

            let elapsed = start.elapsed();
            assert!(
                elapsed < Duration::from_secs(1),
                "baseline took {elapsed:?}, expected under 1s"
            );
        },
    );
}

#[test]
fn criterion_2_map_decomposition_four_way_equivalence() {
    criterion(
        2,
        "matching, orientation, exhaustive search and pebble game agree on k-maps",
        || {
            let start = Instant::now();
            let budget = OracleBudget::default();
            let mut graphs = 0u64;
            for k in 1..=2usize {
                for n in 1..=4usize {
                    for_each_graph_with_caps(n, 2 * k, k, k * n, |g| {
                        graphs += 1;
                        let matching = decompose_via_matching(g, k);
                        let orientation = decompose_via_orientation(g, k);
                        let brute = kmap_bruteforce(g, k, &budget).unwrap();
                        let tight = pebble::run(g, k, 0).unwrap().classification == Sparsity::Tight;
                        assert_eq!(
                            matching.is_ok(),
                            orientation.is_ok(),
                            "matching and orientation disagree on {g:?} at k={k}"
                        );
                        assert_eq!(
                            matching.is_ok(),
                            brute.is_some(),
                            "matching and exhaustive search disagree on {g:?} at k={k}"
                        );
                        assert_eq!(
                            matching.is_ok(),
                            tight,
                            "matching and pebble game disagree on {g:?} at k={k}"
                        );
                        if let Ok(d) = &matching {
                            assert!(verify_decomposition(g, k, d));
                        }
                        if let Ok(d) = &orientation {
                            assert!(verify_decomposition(g, k, d));
                        }
                    });
                }
            }
            assert!(graphs > 15_000, "corpus unexpectedly small: {graphs}");
            let elapsed = start.elapsed();
            assert!(
                elapsed < Duration::from_secs(60),
                "equivalence sweep took {elapsed:?}, expected under 60s"
            );
        },
    );
}

#[test]
fn criterion_3_pebble_game_matches_brute_force() {
    criterion(
        3,
        "pebble game agrees with subset enumeration on every small multigraph",
        || {
            let budget = OracleBudget::default();
            let compare = |g: &MultiGraph| {
                for k in 1..=2usize {
                    for ell in 0..=(2 * k - 1) {
                        let game = pebble::run(g, k, ell).unwrap();
                        let brute = sparse_bruteforce(g, k, ell, &budget).unwrap();
                        assert_eq!(
                            game.classification, brute.classification,
                            "disagreement on {g:?} at k={k}, l={ell}"
                        );
                        if game.classification == Sparsity::NotSparse {
                            assert_witness_valid(g, k, ell, game.witness.as_ref().unwrap());
                            assert_witness_valid(g, k, ell, brute.witness.as_ref().unwrap());
                        }
                    }
                }
            };

            let mut graphs = 0u64;
            for n in 1..=5usize {
                for m in 0..=8usize {
                    for_each_graph_with_caps(n, m, m, m, |g| {
                        graphs += 1;
                        compare(g);
                    });
                }
            }
            assert!(graphs > 500_000, "corpus unexpectedly small: {graphs}");

            let mut rng = ChaCha8Rng::seed_from_u64(3);
            for round in 0..1_000 {
                let m = 5 + round % 10;
                let g = random_multigraph(&mut rng, 7, 4, 2, m);
                compare(&g);
            }
        },
    );
}

#[test]
fn criterion_4_any_addition_prediction_matches_exhaustion() {
    criterion(
        4,
        "counting plus sparsity predicts the exhaustive any-addition verdict",
        || {
            let mut graphs = 0u64;
            let mut false_verdicts = 0u64;
            for k in 1..=2usize {
                for ell in 0..=(2 * k - 1) {
                    // Loops are capped at k - l: a vertex carrying more can
                    // violate sparsity while leaving no ambient slot inside
                    // its own span, and the equivalence genuinely fails there.
                    let loop_cap = k.saturating_sub(ell);
                    for n in 1..=4usize {
                        let Some(m) = (k * n).checked_sub(ell) else {
                            continue;
                        };
                        for_each_graph_with_caps(n, 2 * k, loop_cap, m, |g| {
                            graphs += 1;
                            let predicted = predict_any(g, k, ell).unwrap();
                            let report = verify_any_exhaustive(g, k, ell, 10_000_000).unwrap();
                            assert_eq!(
                                predicted, report.verdict,
                                "prediction and exhaustion disagree on {g:?} at k={k}, l={ell}"
                            );
                            if report.verdict {
                                assert!(report.counterexample.is_none());
                            } else {
                                false_verdicts += 1;
                                let cx = report.counterexample.as_ref().unwrap();
                                assert_eq!(cx.slots.len(), ell);
                                let aug = augmented(g, &cx.slots);
                                let outcome = pebble::run(&aug, k, 0).unwrap();
                                assert_eq!(
                                    outcome.classification,
                                    Sparsity::NotSparse,
                                    "counterexample of {g:?} still tight after additions"
                                );
                                assert_witness_valid(&aug, k, 0, &cx.witness);
                            }
                        });
                    }
                }
            }
            assert!(graphs > 20_000, "corpus unexpectedly small: {graphs}");
            assert!(false_verdicts > 0, "no negative verdicts exercised");
        },
    );
}

#[test]
fn criterion_5_some_addition_completes_sparse_graphs() {
    criterion(
        5,
        "every (k,0)-sparse graph gains l edges to a verified k-map; others get witnesses",
        || {
            let mut completions = 0u64;
            let mut rejections = 0u64;
            for k in 1..=2usize {
                for ell in 0..=(2 * k - 1) {
                    for n in 1..=4usize {
                        let Some(m) = (k * n).checked_sub(ell) else {
                            continue;
                        };
                        for_each_graph_with_caps(n, 2 * k, k, m, |g| {
                            match augment_some(g, k, ell) {
                                Ok(res) => {
                                    completions += 1;
                                    assert_eq!(res.added.len(), ell);
                                    assert_ne!(
                                        pebble::run(g, k, 0).unwrap().classification,
                                        Sparsity::NotSparse,
                                        "augmentation accepted a non-sparse graph {g:?}"
                                    );
                                    let AugmentCertificate::KMap(d) = &res.certificate else {
                                        panic!("completion must certify with a decomposition");
                                    };
                                    assert!(verify_decomposition(&res.graph, k, d));
                                }
                                Err(AugmentError::NotSparse { witness }) => {
                                    rejections += 1;
                                    assert_witness_valid(g, k, 0, &witness);
                                }
                                Err(other) => panic!("unexpected failure on {g:?}: {other}"),
                            }
                        });
                    }
                }
            }
            assert!(completions > 1_000, "too few completions: {completions}");
            assert!(rejections > 1_000, "too few rejections: {rejections}");
        },
    );
}

#[test]
fn criterion_6_mixed_addition_reaches_tightness() {
    criterion(
        6,
        "deficit-p sparse graphs extend to (k,l)-tight ones that survive any l more",
        || {
            let mut total = 0u64;
            let mut rng = ChaCha8Rng::seed_from_u64(6);
            for k in 1..=2usize {
                for ell in 0..=(2 * k - 1) {
                    for p in 0..=(2 * k - 1 - ell) {
                        for round in 0..40usize {
                            let n = 4 + round % 5;
                            let m = k * n - ell - p;
                            let g = random_sparse_graph(&mut rng, n, k, ell, m)
                                .expect("room below the rank");
                            let res = augment_some_then_any(&g, k, ell, p)
                                .unwrap_or_else(|e| panic!("augmentation failed: {e}"));
                            assert_eq!(res.added.len(), p);
                            assert_eq!(
                                pebble::run(&res.graph, k, ell).unwrap().classification,
                                Sparsity::Tight,
                                "result not (k={k}, l={ell})-tight"
                            );
                            assert_eq!(predict_any(&res.graph, k, ell), Ok(true));
                            total += 1;
                        }
                    }
                }
            }
            assert!(total >= 500, "only {total} augmentations exercised");
        },
    );
}

#[test]
fn criterion_7_trees_and_maps_partitions() {
    criterion(
        7,
        "tight graphs split into l spanning trees and k-l spanning maps",
        || {
            // K_4 at (2,2): two spanning trees.
            let k4 = MultiGraph::complete(4);
            let part = decompose_trees_and_maps(&k4, 2, 2).unwrap();
            assert_eq!(part.tree_parts.len(), 2);
            assert_eq!(part.map_parts.len(), 0);
            assert!(verify_trees_and_maps(&k4, &part));
            for tree in &part.tree_parts {
                assert_eq!(tree.len(), 3);
                assert!(graphic_independent(&k4, tree));
                assert_eq!(k4.vertex_span(tree).len(), 4);
            }

            // K_4 plus a doubled edge at (2,1): one spanning tree, one spanning map.
            let mut k4d = MultiGraph::complete(4);
            k4d.add_edge(0, 1).unwrap();
            let part = decompose_trees_and_maps(&k4d, 2, 1).unwrap();
            assert_eq!(part.tree_parts.len(), 1);
            assert_eq!(part.map_parts.len(), 1);
            assert!(verify_trees_and_maps(&k4d, &part));
            let tree = &part.tree_parts[0];
            assert_eq!(tree.len(), 3);
            assert!(graphic_independent(&k4d, tree));
            assert_eq!(k4d.vertex_span(tree).len(), 4);
            let map = &part.map_parts[0];
            assert_eq!(map.len(), 4);
            assert!(bicycle_independent(&k4d, map));
            assert_eq!(k4d.vertex_span(map).len(), 4);

            // Random tight graphs across the l <= k range.
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            let mut verified = 0u64;
            for k in 1..=3usize {
                for ell in 0..=k {
                    for round in 0..24usize {
                        let n = 4 + round % 5;
                        let g = random_tight_graph(&mut rng, n, k, ell).unwrap();
                        let part = decompose_trees_and_maps(&g, k, ell)
                            .unwrap_or_else(|e| panic!("no partition for {g:?}: {e}"));
                        assert_eq!(part.tree_parts.len(), ell);
                        assert_eq!(part.map_parts.len(), k - ell);
                        assert!(verify_trees_and_maps(&g, &part));
                        verified += 1;
                    }
                }
            }
            assert!(verified >= 200, "only {verified} partitions verified");

            // Union coverage agrees with exhaustive assignment on small ground sets.
            let budget = OracleBudget::default();
            for round in 0..30u64 {
                let mut rng = ChaCha8Rng::seed_from_u64(700 + round);
                let g = random_multigraph(&mut rng, 5, 3, 1, 9 + (round as usize % 2));
                let ground: EdgeSet = (0..g.edge_count()).collect();
                let graphic = GraphicOracle::new(&g);
                let bicycle = BicycleOracle::new(&g);
                let suites: Vec<Vec<&dyn IndependenceOracle>> = vec![
                    vec![&graphic],
                    vec![&graphic, &graphic],
                    vec![&bicycle, &bicycle],
                    vec![&graphic, &bicycle],
                ];
                for oracles in &suites {
                    let part = matroid_union_partition(&ground, oracles).unwrap();
                    let best = union_partition_bruteforce(&ground, oracles, &budget).unwrap();
                    assert_eq!(
                        part.covered_count(),
                        best,
                        "union coverage suboptimal on {g:?}"
                    );
                }
            }
        },
    );
}

#[test]
fn criterion_8_truncation_oracle_is_a_matroid() {
    criterion(
        8,
        "size-capped (k,0)-sparsity is downward closed, exchangeable, with the right bases",
        || {
            // Complete ground graphs: 3 vertices with loops and doubled pairs
            // (9 edges), and plain K_4 (6 edges).
            let looped = MultiGraph::from_edges(
                3,
                [
                    (0, 0),
                    (1, 1),
                    (2, 2),
                    (0, 1),
                    (0, 1),
                    (0, 2),
                    (0, 2),
                    (1, 2),
                    (1, 2),
                ],
            )
            .unwrap();
            let k4 = MultiGraph::complete(4);

            for g in [&looped, &k4] {
                let n = g.vertex_count();
                let m = g.edge_count();
                let masks = 1usize << m;
                let sets: Vec<EdgeSet> = (0..masks)
                    .map(|mask| (0..m).filter(|e| mask >> e & 1 == 1).collect())
                    .collect();
                let sizes: Vec<usize> = (0..masks).map(|mask| mask.count_ones() as usize).collect();

                for k in 1..=2usize {
                    let sparse: Vec<bool> = sets
                        .iter()
                        .map(|s| union_bicycle_independent(g, k, s))
                        .collect();
                    for ell in 0..=(2 * k - 1) {
                        let cap = k * n - ell;
                        let indep: Vec<bool> = (0..masks)
                            .map(|mask| truncation_independent(g, k, ell, &sets[mask]))
                            .collect();

                        // Downward closed: dropping any element preserves independence.
                        for mask in 0..masks {
                            if !indep[mask] {
                                continue;
                            }
                            for e in 0..m {
                                if mask >> e & 1 == 1 {
                                    assert!(
                                        indep[mask & !(1 << e)],
                                        "independence lost by removing edge {e} at k={k}, l={ell}"
                                    );
                                }
                            }
                        }

                        // Exchange: a smaller independent set can always borrow.
                        for s in 0..masks {
                            if !indep[s] {
                                continue;
                            }
                            for t in 0..masks {
                                if !indep[t] || sizes[t] <= sizes[s] {
                                    continue;
                                }
                                let mut extra = t & !s;
                                let mut found = false;
                                while extra != 0 {
                                    let bit = extra & extra.wrapping_neg();
                                    if indep[s | bit] {
                                        found = true;
                                        break;
                                    }
                                    extra &= extra - 1;
                                }
                                assert!(
                                    found,
                                    "exchange fails between {s:#b} and {t:#b} at k={k}, l={ell}"
                                );
                            }
                        }

                        // Sets hitting the size cap are independent exactly when
                        // (k,0)-sparse, and nothing independent extends past them.
                        for mask in 0..masks {
                            if sizes[mask] == cap {
                                assert_eq!(indep[mask], sparse[mask]);
                            }
                            assert!(!(indep[mask] && sizes[mask] > cap));
                        }

                        // Every maximal independent set reaches the common rank.
                        let rank = (0..masks)
                            .filter(|&mask| indep[mask])
                            .map(|mask| sizes[mask])
                            .max()
                            .unwrap();
                        for mask in 0..masks {
                            if !indep[mask] {
                                continue;
                            }
                            let extendable =
                                (0..m).any(|e| mask >> e & 1 == 0 && indep[mask | (1 << e)]);
                            if !extendable {
                                assert_eq!(
                                    sizes[mask], rank,
                                    "maximal set {mask:#b} stops short of rank {rank}"
                                );
                            }
                        }
                    }
                }
            }
        },
    );
}
