//! Plain-text hypergraph format.
//!
//! The first non-comment line is `n k`; every further non-empty line lists the
//! `k` vertices of one edge, 1-based. Lines starting with `#` are comments.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::error::Error;
use crate::hypergraph::Hypergraph;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: malformed header {text:?}, expected \"n k\"")]
    MalformedHeader { line: usize, text: String },
    #[error("missing header line")]
    MissingHeader,
    #[error("line {line}: invalid vertex token {token:?}")]
    BadToken { line: usize, token: String },
    #[error("line {line}: edge has {len} vertices, expected {k}")]
    Arity { line: usize, len: usize, k: usize },
    #[error("line {line}: vertex {vertex} is outside 1..={n}")]
    VertexOutOfRange { line: usize, vertex: usize, n: usize },
    #[error("line {line}: edge repeats a vertex")]
    RepeatedVertex { line: usize },
    #[error("line {line}: duplicate edge")]
    DuplicateEdge { line: usize },
    #[error("invalid hypergraph: {0}")]
    Invalid(#[from] Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub fn parse_hypergraph(text: &str) -> Result<Hypergraph, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or(ParseError::MissingHeader)?;
    let malformed = || ParseError::MalformedHeader { line: hline, text: header.to_string() };
    let fields: Vec<usize> = header
        .split_whitespace()
        .map(|f| f.parse().map_err(|_| malformed()))
        .collect::<Result<_, _>>()?;
    let [n, k] = fields[..] else {
        return Err(malformed());
    };
    if k < 2 {
        return Err(malformed());
    }
    let mut seen = std::collections::HashSet::new();
    let mut edges = Vec::new();
    for (line, l) in lines {
        let mut edge = Vec::with_capacity(k);
        for tok in l.split_whitespace() {
            let v: usize = tok
                .parse()
                .map_err(|_| ParseError::BadToken { line, token: tok.to_string() })?;
            if v == 0 || v > n {
                return Err(ParseError::VertexOutOfRange { line, vertex: v, n });
            }
            edge.push(v - 1);
        }
        if edge.len() != k {
            return Err(ParseError::Arity { line, len: edge.len(), k });
        }
        edge.sort_unstable();
        if edge.windows(2).any(|w| w[0] == w[1]) {
            return Err(ParseError::RepeatedVertex { line });
        }
        if !seen.insert(edge.clone()) {
            return Err(ParseError::DuplicateEdge { line });
        }
        edges.push(edge);
    }
    Ok(Hypergraph::new(n, k, edges)?)
}

pub fn format_hypergraph(h: &Hypergraph) -> String {
    let mut out = format!("{} {}\n", h.n(), h.k());
    for e in h.edges() {
        let line: Vec<String> = e.iter().map(|v| (v + 1).to_string()).collect();
        writeln!(out, "{}", line.join(" ")).expect("writing to a String");
    }
    out
}

pub fn read_hypergraph(path: impl AsRef<Path>) -> Result<Hypergraph, ParseError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)
        .map_err(|source| ParseError::Io { path: path.display().to_string(), source })?;
    parse_hypergraph(&text)
}

pub fn write_hypergraph(h: &Hypergraph, path: impl AsRef<Path>) -> Result<(), ParseError> {
    let path = path.as_ref();
    fs::write(path, format_hypergraph(h))
        .map_err(|source| ParseError::Io { path: path.display().to_string(), source })
}
