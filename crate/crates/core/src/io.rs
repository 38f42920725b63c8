//! Hypergraph file formats.
//!
//! Text: a header line `n r m`, then `m` lines of `r` space-separated vertex
//! ids. JSON: `{"n": .., "r": .., "edges": [[..], ..]}`. Both readers reject
//! anything that violates the hypergraph invariants, including repeated edges.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::{Hypergraph, HypergraphError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("header announces {announced} edges, found {found}")]
    EdgeCount { announced: usize, found: usize },
    #[error("edge {0:?} is listed more than once")]
    DuplicateEdge(Vec<usize>),
    #[error(transparent)]
    Invalid(#[from] HypergraphError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonHypergraph {
    n: usize,
    r: usize,
    edges: Vec<Vec<usize>>,
}

fn build(n: usize, r: usize, edges: Vec<Vec<usize>>) -> Result<Hypergraph, FormatError> {
    let listed = edges.len();
    let h = Hypergraph::new(n, r, edges.iter().map(|e| e.iter().copied()))?;
    if h.edge_count() != listed {
        let mut sorted: Vec<Vec<usize>> = edges
            .into_iter()
            .map(|mut e| {
                e.sort_unstable();
                e
            })
            .collect();
        sorted.sort();
        let dup = sorted.windows(2).find(|w| w[0] == w[1]).map(|w| w[0].clone()).unwrap_or_default();
        return Err(FormatError::DuplicateEdge(dup));
    }
    Ok(h)
}

fn parse_numbers(line: &str, lineno: usize) -> Result<Vec<usize>, FormatError> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>().map_err(|_| FormatError::Syntax {
                line: lineno,
                message: format!("expected a nonnegative integer, got {tok:?}"),
            })
        })
        .collect()
}

pub fn parse_text(input: &str) -> Result<Hypergraph, FormatError> {
    let mut lines = input.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (hline, header) = lines.next().ok_or(FormatError::Syntax { line: 1, message: "empty input".into() })?;
    let head = parse_numbers(header, hline + 1)?;
    let [n, r, m] = head[..] else {
        return Err(FormatError::Syntax { line: hline + 1, message: "header must be `n r m`".into() });
    };
    let mut edges = Vec::with_capacity(m);
    for (i, line) in lines {
        edges.push(parse_numbers(line, i + 1)?);
    }
    if edges.len() != m {
        return Err(FormatError::EdgeCount { announced: m, found: edges.len() });
    }
    build(n, r, edges)
}

pub fn parse_json(input: &str) -> Result<Hypergraph, FormatError> {
    let raw: JsonHypergraph = serde_json::from_str(input)?;
    build(raw.n, raw.r, raw.edges)
}

/// Parses either format, choosing JSON when the input starts with `{`.
pub fn parse_any(input: &str) -> Result<Hypergraph, FormatError> {
    if input.trim_start().starts_with('{') {
        parse_json(input)
    } else {
        parse_text(input)
    }
}

pub fn to_text(h: &Hypergraph) -> String {
    let mut out = format!("{} {} {}\n", h.n(), h.r(), h.edge_count());
    for e in h.edges() {
        let ids: Vec<String> = e.vertices().map(|v| v.to_string()).collect();
        out.push_str(&ids.join(" "));
        out.push('\n');
    }
    out
}

pub fn to_json(h: &Hypergraph) -> String {
    serde_json::to_string(&JsonHypergraph { n: h.n(), r: h.r(), edges: h.edge_lists() }).expect("plain data serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_roundtrip() {
        let h = Hypergraph::clique_plus_pendant(6, 3).unwrap();
        let text = to_text(&h);
        assert!(text.starts_with("6 3 11\n"));
        assert_eq!(parse_text(&text).unwrap(), h);
        assert_eq!(parse_any(&text).unwrap(), h);
    }

    #[test]
    fn json_roundtrip() {
        let h = Hypergraph::complete(4, 3).unwrap();
        let js = to_json(&h);
        assert_eq!(js, r#"{"n":4,"r":3,"edges":[[0,1,2],[0,1,3],[0,2,3],[1,2,3]]}"#);
        assert_eq!(parse_any(&js).unwrap(), h);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(parse_text("5 3 2\n0 1 2\n"), Err(FormatError::EdgeCount { announced: 2, found: 1 })));
        assert!(matches!(parse_text("5 3 1\n0 1 5\n"), Err(FormatError::Invalid(_))));
        assert!(matches!(parse_text("5 3 1\n0 1\n"), Err(FormatError::Invalid(_))));
        assert!(matches!(parse_text("5 3\n"), Err(FormatError::Syntax { line: 1, .. })));
        assert!(matches!(parse_text("5 3 1\n0 x 2\n"), Err(FormatError::Syntax { line: 2, .. })));
        assert!(matches!(parse_text("5 3 2\n0 1 2\n2 1 0\n"), Err(FormatError::DuplicateEdge(e)) if e == vec![0, 1, 2]));
        assert!(matches!(parse_json(r#"{"n":5,"r":3,"edges":[[0,1,2],[0,2,1]]}"#), Err(FormatError::DuplicateEdge(_))));
        assert!(matches!(parse_json(r#"{"n":3,"r":4,"edges":[]}"#), Err(FormatError::Invalid(_))));
        assert!(matches!(parse_json(r#"{"n":5,"r":3}"#), Err(FormatError::Json(_))));
    }
}
