//! Graph file parsing.
//!
//! The format is a plain edge list: a header line `n m`, then `m` lines
//! `u v` with 0-indexed endpoints (`u == v` is a loop). Lines starting with
//! `#` and blank lines are ignored. The path `-` reads standard input.

use std::fs;
use std::io::Read;

use ksparse::MultiGraph;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReadError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
}

/// Reads and parses a graph from `path`, or from stdin when `path` is `-`.
pub fn read_graph(path: &str) -> Result<MultiGraph, ReadError> {
    let text = if path == "-" {
        let mut buffer = String::new();
        std::io::stdin()
            .read_to_string(&mut buffer)
            .map_err(|source| ReadError::Io {
                path: path.to_owned(),
                source,
            })?;
        buffer
    } else {
        fs::read_to_string(path).map_err(|source| ReadError::Io {
            path: path.to_owned(),
            source,
        })?
    };
    parse_graph(&text).map_err(|(line, message)| ReadError::Parse {
        path: path.to_owned(),
        line,
        message,
    })
}

/// Parses the edge-list format; errors carry 1-based line numbers.
pub fn parse_graph(text: &str) -> Result<MultiGraph, (usize, String)> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut last_line = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() != 2 {
            return Err((
                line,
                format!("expected two integers, found {} fields", fields.len()),
            ));
        }
        let parse = |field: &str| {
            field
                .parse::<usize>()
                .map_err(|_| (line, format!("invalid integer '{field}'")))
        };
        let a = parse(fields[0])?;
        let b = parse(fields[1])?;
        match header {
            None => header = Some((a, b)),
            Some((n, m)) => {
                if edges.len() == m {
                    return Err((line, format!("more than the declared {m} edges")));
                }
                if a >= n || b >= n {
                    return Err((
                        line,
                        format!("endpoint out of range (graph has {n} vertices)"),
                    ));
                }
                edges.push((a, b));
            }
        }
    }
    let (n, m) = header.ok_or((1, "missing header line 'n m'".to_owned()))?;
    if edges.len() != m {
        return Err((
            last_line.max(1),
            format!("header declares {m} edges, file has {}", edges.len()),
        ));
    }
    Ok(MultiGraph::from_edges(n, edges).expect("endpoints were range-checked"))
}
