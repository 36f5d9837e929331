//! Command-line front end for the sparsity toolkit.
//!
//! Every certificate is re-verified against the library verifiers before it
//! is printed, and every witness is re-checked against the counting bound it
//! claims to violate. Exit codes are a stable contract: 0 for positive
//! results, 1 for negative results carrying a witness or counterexample,
//! 2 for usage and I/O errors, 3 for refused budgets.

mod io;
mod report;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use ksparse::maps::NotTight;
use ksparse::matroid::TreesMapsError;
use ksparse::{augment, maps, matroid, pebble, AugmentError, MultiGraph, Sparsity, VertexSet};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::io::ReadError;
use crate::report::{
    assignment_entries, sorted_edges, sorted_vertices, AugmentBody, CertificateBody, CheckBody,
    Classification, CounterexampleBody, Envelope, Format, GraphSummary, MapsBody, MapsOutcome,
    MethodResult, NotTightBody, Parameters, TreesMapsBody, VerifyAnyBody,
};

#[derive(Parser)]
#[command(
    name = "ksparse",
    version,
    about = "Recognition, decomposition and augmentation of (k,l)-sparse multigraphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format: human-readable text or deterministic JSON
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the graph at (k, l) as tight, sparse or not-sparse
    Check {
        /// Graph file ('-' for stdin): header "n m", then m lines "u v"
        file: String,
        #[arg(short)]
        k: usize,
        #[arg(short = 'l')]
        ell: usize,
    },
    /// Split a (k,0)-tight graph into k edge-disjoint spanning maps
    DecomposeMaps {
        file: String,
        #[arg(short)]
        k: usize,
        /// Decomposition algorithm; "both" cross-checks the two
        #[arg(long, value_enum, default_value = "both")]
        method: MethodArg,
    },
    /// Split a (k,l)-tight graph into l spanning trees and k-l spanning maps
    DecomposeTreesMaps {
        file: String,
        #[arg(short)]
        k: usize,
        #[arg(short = 'l')]
        ell: usize,
    },
    /// Add l edges completing the graph to a k-map (or, with --some-any,
    /// p edges reaching (k,l)-tightness)
    Augment {
        file: String,
        #[arg(short)]
        k: usize,
        #[arg(short = 'l')]
        ell: usize,
        /// Stop at a (k,l)-tight graph that tolerates any further l additions
        #[arg(long, requires = "p")]
        some_any: bool,
        /// Number of edges to add in --some-any mode
        #[arg(short, requires = "some_any")]
        p: Option<usize>,
    },
    /// Check that adding any l ambient edges yields a k-map
    VerifyAny {
        file: String,
        #[arg(short)]
        k: usize,
        #[arg(short = 'l')]
        ell: usize,
        /// Refuse (exit 3) if more than this many additions would be checked
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        /// Spot-check this many random additions instead of exhausting
        #[arg(long)]
        sample: Option<u64>,
        /// Seed for --sample
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Matching,
    Orientation,
    Both,
}

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Read(#[from] ReadError),
    #[error("{0}")]
    Usage(String),
    #[error("{required} cases exceed the budget of {budget}; raise --budget or pass --sample")]
    Budget { required: u128, budget: u64 },
}

impl CliError {
    fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Read(_) | CliError::Usage(_) => ExitCode::from(2),
            CliError::Budget { .. } => ExitCode::from(3),
        }
    }
}

fn usage<E: std::fmt::Display>(err: E) -> CliError {
    CliError::Usage(err.to_string())
}

fn main() -> ExitCode {
    // Die quietly when a downstream pipe closes (`ksparse ... | head`)
    // instead of panicking on the failed write.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let started = Instant::now();
    let format = cli.format;
    match cli.command {
        Command::Check { file, k, ell } => cmd_check(&file, k, ell, format, started),
        Command::DecomposeMaps { file, k, method } => {
            cmd_decompose_maps(&file, k, method, format, started)
        }
        Command::DecomposeTreesMaps { file, k, ell } => {
            cmd_decompose_trees_maps(&file, k, ell, format, started)
        }
        Command::Augment {
            file,
            k,
            ell,
            some_any,
            p,
        } => cmd_augment(&file, k, ell, some_any.then(|| p.unwrap()), format, started),
        Command::VerifyAny {
            file,
            k,
            ell,
            budget,
            sample,
            seed,
        } => cmd_verify_any(&file, k, ell, budget, sample, seed, format, started),
    }
}

fn envelope<T: Serialize>(
    command: &'static str,
    g: &MultiGraph,
    parameters: Parameters,
    body: T,
) -> Envelope<T> {
    Envelope {
        command,
        graph: GraphSummary {
            vertices: g.vertex_count(),
            edges: g.edge_count(),
        },
        parameters,
        body,
    }
}

/// Every witness printed must violate the bound it claims to violate.
fn assert_witness(g: &MultiGraph, k: usize, ell: usize, witness: &VertexSet) {
    let spanned = g.spanned_edges(witness).len();
    assert!(
        spanned >= 1 && spanned as i64 > (k * witness.len()) as i64 - ell as i64,
        "internal error: witness fails its own counting bound"
    );
}

fn cmd_check(
    file: &str,
    k: usize,
    ell: usize,
    format: Format,
    started: Instant,
) -> Result<ExitCode, CliError> {
    let g = io::read_graph(file)?;
    let outcome = pebble::run(&g, k, ell).map_err(usage)?;
    if let Some(w) = &outcome.witness {
        assert_witness(&g, k, ell, w);
    }
    let negative = outcome.classification == Sparsity::NotSparse;
    let body = CheckBody {
        classification: outcome.classification.into(),
        pebbles: outcome.pebble_counts,
        orientation: outcome.orientation,
        witness: outcome.witness.as_ref().map(sorted_vertices),
    };
    let params = Parameters {
        k,
        l: ell,
        ..Default::default()
    };
    envelope("check", &g, params, body).emit(&g, format, started.elapsed());
    Ok(if negative {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn not_tight_body(g: &MultiGraph, k: usize, err: NotTight) -> NotTightBody {
    match err {
        NotTight::CountMismatch { edges, required } => NotTightBody::CountMismatch {
            edges,
            required: required as i64,
        },
        NotTight::SparsityViolation { vertices } => {
            assert_witness(g, k, 0, &vertices);
            NotTightBody::SparsityViolation {
                witness: sorted_vertices(&vertices),
            }
        }
    }
}

fn cmd_decompose_maps(
    file: &str,
    k: usize,
    method: MethodArg,
    format: Format,
    started: Instant,
) -> Result<ExitCode, CliError> {
    let g = io::read_graph(file)?;
    if k == 0 {
        return Err(CliError::Usage("k must be at least 1".to_owned()));
    }
    type Decompose = fn(&MultiGraph, usize) -> Result<maps::MapDecomposition, NotTight>;
    let routes: Vec<(&'static str, Decompose)> = match method {
        MethodArg::Matching => vec![("matching", maps::decompose_via_matching)],
        MethodArg::Orientation => vec![("orientation", maps::decompose_via_orientation)],
        MethodArg::Both => vec![
            ("matching", maps::decompose_via_matching),
            ("orientation", maps::decompose_via_orientation),
        ],
    };
    let mut results = Vec::new();
    let mut successes = Vec::new();
    for (name, decompose) in routes {
        let outcome = match decompose(&g, k) {
            Ok(d) => {
                assert!(
                    maps::verify_decomposition(&g, k, &d),
                    "internal error: emitted decomposition does not verify"
                );
                successes.push(true);
                MapsOutcome::Decomposed {
                    assignment: assignment_entries(&d),
                }
            }
            Err(err) => {
                successes.push(false);
                MapsOutcome::NotTight(not_tight_body(&g, k, err))
            }
        };
        results.push(MethodResult {
            method: name,
            outcome,
        });
    }
    assert!(
        successes.windows(2).all(|w| w[0] == w[1]),
        "internal error: decomposition routes disagree"
    );
    let all_ok = successes.iter().all(|&s| s);
    let params = Parameters {
        k,
        l: 0,
        method: Some(match method {
            MethodArg::Matching => "matching",
            MethodArg::Orientation => "orientation",
            MethodArg::Both => "both",
        }),
        ..Default::default()
    };
    envelope("decompose-maps", &g, params, MapsBody { results }).emit(
        &g,
        format,
        started.elapsed(),
    );
    Ok(if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_decompose_trees_maps(
    file: &str,
    k: usize,
    ell: usize,
    format: Format,
    started: Instant,
) -> Result<ExitCode, CliError> {
    let g = io::read_graph(file)?;
    let (body, code) = match matroid::decompose_trees_and_maps(&g, k, ell) {
        Ok(partition) => {
            assert!(
                matroid::verify_trees_and_maps(&g, &partition),
                "internal error: emitted partition does not verify"
            );
            let body = TreesMapsBody::Decomposed {
                tree_parts: partition.tree_parts.iter().map(sorted_edges).collect(),
                map_parts: partition.map_parts.iter().map(sorted_edges).collect(),
            };
            (body, ExitCode::SUCCESS)
        }
        Err(err @ TreesMapsError::InvalidParameters { .. }) => {
            return Err(usage(err));
        }
        Err(TreesMapsError::CountMismatch { edges, required }) => (
            TreesMapsBody::NotTight(NotTightBody::CountMismatch { edges, required }),
            ExitCode::from(1),
        ),
        Err(TreesMapsError::NotTight { witness }) => {
            assert_witness(&g, k, ell, &witness);
            (
                TreesMapsBody::NotTight(NotTightBody::SparsityViolation {
                    witness: sorted_vertices(&witness),
                }),
                ExitCode::from(1),
            )
        }
    };
    let params = Parameters {
        k,
        l: ell,
        ..Default::default()
    };
    envelope("decompose-trees-maps", &g, params, body).emit(&g, format, started.elapsed());
    Ok(code)
}

fn cmd_augment(
    file: &str,
    k: usize,
    ell: usize,
    some_any_p: Option<usize>,
    format: Format,
    started: Instant,
) -> Result<ExitCode, CliError> {
    let g = io::read_graph(file)?;
    let result = match some_any_p {
        Some(p) => augment::augment_some_then_any(&g, k, ell, p),
        None => augment::augment_some(&g, k, ell),
    };
    let params = Parameters {
        k,
        l: ell,
        p: some_any_p,
        ..Default::default()
    };
    match result {
        Ok(res) => {
            let certificate = match &res.certificate {
                augment::AugmentCertificate::KMap(d) => {
                    assert!(
                        maps::verify_decomposition(&res.graph, k, d),
                        "internal error: emitted decomposition does not verify"
                    );
                    CertificateBody::Map {
                        assignment: assignment_entries(d),
                    }
                }
                augment::AugmentCertificate::Tight => {
                    let check = pebble::run(&res.graph, k, ell).expect("parameters were accepted");
                    assert_eq!(
                        check.classification,
                        Sparsity::Tight,
                        "internal error: claimed tightness does not re-verify"
                    );
                    CertificateBody::Tight {
                        classification: Classification::Tight,
                    }
                }
            };
            let body = AugmentBody::Augmented {
                added: res.added.clone(),
                added_edge_ids: (g.edge_count()..res.graph.edge_count()).collect(),
                certificate,
            };
            // The augmented graph renders the certificate's edge endpoints;
            // the envelope still summarizes the input graph.
            envelope("augment", &g, params, body).emit(&res.graph, format, started.elapsed());
            Ok(ExitCode::SUCCESS)
        }
        Err(AugmentError::NotSparse { witness }) => {
            let ell_checked = if some_any_p.is_some() { ell } else { 0 };
            assert_witness(&g, k, ell_checked, &witness);
            let body = AugmentBody::NotSparse {
                witness: sorted_vertices(&witness),
            };
            envelope("augment", &g, params, body).emit(&g, format, started.elapsed());
            Ok(ExitCode::from(1))
        }
        Err(other) => Err(usage(other)),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify_any(
    file: &str,
    k: usize,
    ell: usize,
    budget: u64,
    sample: Option<u64>,
    seed: u64,
    format: Format,
    started: Instant,
) -> Result<ExitCode, CliError> {
    let g = io::read_graph(file)?;
    let predicted = augment::predict_any(&g, k, ell).map_err(usage)?;
    let (body, params) = match sample {
        None => {
            let report = match augment::verify_any_exhaustive(&g, k, ell, budget) {
                Ok(report) => report,
                Err(AugmentError::BudgetExceeded { required, budget }) => {
                    return Err(CliError::Budget { required, budget });
                }
                Err(other) => return Err(usage(other)),
            };
            assert_eq!(
                report.verdict, predicted,
                "internal error: exhaustive check contradicts the tightness prediction"
            );
            let counterexample = report.counterexample.as_ref().map(|cx| {
                let mut augmented = g.clone();
                for &(u, v) in &cx.slots {
                    augmented
                        .add_edge(u, v)
                        .expect("slots come from the ambient");
                }
                assert_witness(&augmented, k, 0, &cx.witness);
                CounterexampleBody {
                    slots: cx.slots.clone(),
                    witness: sorted_vertices(&cx.witness),
                }
            });
            let body = VerifyAnyBody {
                mode: "exhaustive",
                predicted,
                verdict: report.verdict,
                checked: report.checked,
                counterexample,
            };
            let params = Parameters {
                k,
                l: ell,
                budget: Some(budget),
                ..Default::default()
            };
            (body, params)
        }
        Some(n) => {
            let body = sampled_verify(&g, k, ell, n, seed, predicted);
            let params = Parameters {
                k,
                l: ell,
                sample: Some(n),
                seed: Some(seed),
                ..Default::default()
            };
            (body, params)
        }
    };
    let negative = !body.verdict;
    envelope("verify-any", &g, params, body).emit(&g, format, started.elapsed());
    Ok(if negative {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

/// Spot-checks `n` random `l`-multisets of ambient slots. The verdict is
/// still the predicted one (counting plus the pebble game already decides it
/// exactly); the samples serve as evidence, and any sampled failure under a
/// positive prediction would be a bug worth crashing over.
fn sampled_verify(
    g: &MultiGraph,
    k: usize,
    ell: usize,
    n: u64,
    seed: u64,
    predicted: bool,
) -> VerifyAnyBody {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool = g.ambient_complement(k);
    assert!(
        pool.len() >= ell,
        "the ambient complement always has room for l more edges"
    );
    let mut checked = 0u64;
    let mut counterexample = None;
    for _ in 0..n {
        let picks = rand::seq::index::sample(&mut rng, pool.len(), ell);
        let mut slots: Vec<(usize, usize)> = picks.iter().map(|i| pool[i]).collect();
        slots.sort_unstable();
        let mut augmented = g.clone();
        for &(u, v) in &slots {
            augmented
                .add_edge(u, v)
                .expect("slots come from the ambient");
        }
        checked += 1;
        match maps::decompose_via_matching(&augmented, k) {
            Ok(d) => {
                assert!(maps::verify_decomposition(&augmented, k, &d));
            }
            Err(NotTight::SparsityViolation { vertices }) => {
                assert!(
                    !predicted,
                    "internal error: sampled counterexample despite predicted tightness"
                );
                assert_witness(&augmented, k, 0, &vertices);
                counterexample = Some(CounterexampleBody {
                    slots,
                    witness: sorted_vertices(&vertices),
                });
                break;
            }
            Err(NotTight::CountMismatch { .. }) => {
                unreachable!("k·n − l edges plus l additions always count k·n")
            }
        }
    }
    VerifyAnyBody {
        mode: "sample",
        predicted,
        verdict: predicted,
        checked,
        counterexample,
    }
}
