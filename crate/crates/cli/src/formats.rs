//! File formats.
//!
//! Graphs: UTF-8 text, first line `n m`, then `m` lines `i j` with 1-based
//! directed edges. Matrices: CSV with `n` rows of `n` comma-separated
//! decimal entries; δ travels out of band (a CLI flag). Errors carry
//! 1-based line numbers and, for invariant violations, the offending cell.

use std::fmt;
use std::fs;
use std::path::Path;

use densepf_core::matrix::{DirectedGraph, MatrixError, SymmetricWeightMatrix, WeightMatrix};

#[derive(Debug)]
pub enum FileError {
    Io(std::io::Error),
    /// Malformed content; `line` is 1-based.
    Parse { line: usize, msg: String },
    /// Well-formed content violating a domain invariant.
    Invariant { line: usize, msg: String },
}

impl fmt::Display for FileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FileError::Io(e) => write!(f, "{e}"),
            FileError::Parse { line, msg } => write!(f, "line {line}: {msg}"),
            FileError::Invariant { line, msg } => write!(f, "line {line}: {msg}"),
        }
    }
}

impl std::error::Error for FileError {}

impl From<std::io::Error> for FileError {
    fn from(e: std::io::Error) -> Self {
        FileError::Io(e)
    }
}

pub fn read_graph(path: &Path) -> Result<DirectedGraph, FileError> {
    let text = fs::read_to_string(path)?;
    parse_graph(&text)
}

pub fn parse_graph(text: &str) -> Result<DirectedGraph, FileError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(FileError::Parse {
        line: 1,
        msg: "empty file, expected 'n m' header".into(),
    })?;
    let mut parts = header.split_whitespace();
    let n: usize = parts
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or(FileError::Parse {
            line: 1,
            msg: "expected vertex count".into(),
        })?;
    let m: usize = parts
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or(FileError::Parse {
            line: 1,
            msg: "expected edge count".into(),
        })?;
    if n == 0 {
        return Err(FileError::Invariant {
            line: 1,
            msg: "graph needs at least one vertex".into(),
        });
    }
    let mut edges = Vec::with_capacity(m);
    let mut seen = std::collections::BTreeSet::new();
    let mut count = 0usize;
    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if count == m {
            return Err(FileError::Parse {
                line: line_no,
                msg: format!("more than the declared {m} edges"),
            });
        }
        let mut it = line.split_whitespace();
        let parse_endpoint = |tok: Option<&str>| -> Result<usize, FileError> {
            tok.and_then(|t| t.parse::<usize>().ok())
                .ok_or(FileError::Parse {
                    line: line_no,
                    msg: "expected 'i j' with 1-based vertex labels".into(),
                })
        };
        let i = parse_endpoint(it.next())?;
        let j = parse_endpoint(it.next())?;
        if i == 0 || j == 0 || i > n || j > n {
            return Err(FileError::Invariant {
                line: line_no,
                msg: format!("edge {i} -> {j} outside 1..={n}"),
            });
        }
        if i == j {
            return Err(FileError::Invariant {
                line: line_no,
                msg: format!("loop edge {i} -> {j}"),
            });
        }
        if !seen.insert((i, j)) {
            return Err(FileError::Invariant {
                line: line_no,
                msg: format!("duplicate edge {i} -> {j}"),
            });
        }
        edges.push((i - 1, j - 1));
        count += 1;
    }
    if count != m {
        return Err(FileError::Parse {
            line: text.lines().count(),
            msg: format!("declared {m} edges, found {count}"),
        });
    }
    DirectedGraph::new(n, edges).map_err(|e| FileError::Invariant {
        line: 1,
        msg: e.to_string(),
    })
}

pub fn write_graph(path: &Path, graph: &DirectedGraph) -> Result<(), FileError> {
    let mut out = format!("{} {}\n", graph.n(), graph.edge_count());
    for &(u, v) in graph.edges() {
        out.push_str(&format!("{} {}\n", u + 1, v + 1));
    }
    fs::write(path, out)?;
    Ok(())
}

fn parse_entries(text: &str) -> Result<(usize, Vec<f64>), FileError> {
    let rows: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .collect();
    let n = rows.len();
    if n == 0 {
        return Err(FileError::Parse {
            line: 1,
            msg: "empty matrix".into(),
        });
    }
    let mut entries = Vec::with_capacity(n * n);
    for (idx, line) in rows {
        let line_no = idx + 1;
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells.len() != n {
            return Err(FileError::Parse {
                line: line_no,
                msg: format!("expected {n} comma-separated entries, got {}", cells.len()),
            });
        }
        for cell in cells {
            let v: f64 = cell.parse().map_err(|_| FileError::Parse {
                line: line_no,
                msg: format!("'{cell}' is not a number"),
            })?;
            entries.push(v);
        }
    }
    Ok((n, entries))
}

fn invariant_error(n: usize, e: MatrixError) -> FileError {
    // name the offending cell in 1-based file coordinates
    let _ = n;
    match e {
        MatrixError::EntryOutOfBounds { row, col, value } => FileError::Invariant {
            line: row + 1,
            msg: format!(
                "entry at row {}, column {} is {value}, outside [delta, 1]",
                row + 1,
                col + 1
            ),
        },
        MatrixError::NotFinite { row, col } => FileError::Invariant {
            line: row + 1,
            msg: format!("entry at row {}, column {} is not finite", row + 1, col + 1),
        },
        MatrixError::NotSymmetric { row, col } => FileError::Invariant {
            line: row + 1,
            msg: format!(
                "entries ({}, {}) and ({}, {}) differ; spanning-tree input must be symmetric",
                row + 1,
                col + 1,
                col + 1,
                row + 1
            ),
        },
        other => FileError::Invariant {
            line: 1,
            msg: other.to_string(),
        },
    }
}

pub fn read_matrix(path: &Path, delta: f64) -> Result<WeightMatrix, FileError> {
    let text = fs::read_to_string(path)?;
    parse_matrix(&text, delta)
}

pub fn parse_matrix(text: &str, delta: f64) -> Result<WeightMatrix, FileError> {
    let (n, entries) = parse_entries(text)?;
    WeightMatrix::new(n, entries, delta).map_err(|e| invariant_error(n, e))
}

/// Same CSV shape; the diagonal is ignored (spanning trees have no loops)
/// and symmetry is required.
pub fn read_symmetric_matrix(
    path: &Path,
    delta: f64,
) -> Result<SymmetricWeightMatrix, FileError> {
    let text = fs::read_to_string(path)?;
    parse_symmetric_matrix(&text, delta)
}

pub fn parse_symmetric_matrix(
    text: &str,
    delta: f64,
) -> Result<SymmetricWeightMatrix, FileError> {
    let (n, entries) = parse_entries(text)?;
    SymmetricWeightMatrix::new(n, entries, delta).map_err(|e| invariant_error(n, e))
}

pub fn write_matrix(path: &Path, n: usize, entries: &[f64]) -> Result<(), FileError> {
    let mut out = String::new();
    for row in 0..n {
        let cells: Vec<String> = entries[row * n..(row + 1) * n]
            .iter()
            .map(|v| format!("{v}"))
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}
