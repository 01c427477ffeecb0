//! The graph file format: `#` comments, one `vertices` line fixing the
//! canonical generator order, and `edge u v` lines. Parse errors carry
//! 1-based line/column positions.

use crate::error::{Error, Result};
use crate::graph::PresentationGraph;

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Column (1-based) of a token inside its line.
fn col_of(line: &str, token_index: usize) -> usize {
    let mut seen = 0usize;
    let mut pos = 0usize;
    let bytes = line.as_bytes();
    while pos < bytes.len() {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if pos >= bytes.len() {
            break;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if seen == token_index {
            return start + 1;
        }
        seen += 1;
    }
    1
}

/// Parses the text of a graph file.
pub fn parse_graph(text: &str) -> Result<PresentationGraph> {
    let mut names: Option<Vec<String>> = None;
    let mut vertices_line = 0usize;
    let mut edges: Vec<(u8, u8)> = Vec::new();

    for (ln, raw) in text.lines().enumerate() {
        let lineno = ln + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens[0] {
            "vertices" => {
                if names.is_some() {
                    return Err(err(lineno, 1, "a second `vertices` line is not allowed"));
                }
                if tokens.len() < 2 {
                    return Err(err(lineno, 1, "`vertices` needs at least one name"));
                }
                let mut list = Vec::with_capacity(tokens.len() - 1);
                for (k, tok) in tokens[1..].iter().enumerate() {
                    if !tok.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_') {
                        return Err(err(
                            lineno,
                            col_of(raw, k + 1),
                            format!("invalid vertex name {tok:?}"),
                        ));
                    }
                    if list.iter().any(|n| n == tok) {
                        return Err(err(
                            lineno,
                            col_of(raw, k + 1),
                            format!("duplicate vertex {tok:?}"),
                        ));
                    }
                    list.push(tok.to_string());
                }
                names = Some(list);
                vertices_line = lineno;
            }
            "edge" => {
                let Some(names) = &names else {
                    return Err(err(lineno, 1, "`edge` before the `vertices` line"));
                };
                if tokens.len() != 3 {
                    return Err(err(lineno, 1, "`edge` takes exactly two vertex names"));
                }
                let mut pair = [0u8; 2];
                for k in 0..2 {
                    let tok = tokens[k + 1];
                    match names.iter().position(|n| n == tok) {
                        Some(i) => pair[k] = i as u8,
                        None => {
                            return Err(err(
                                lineno,
                                col_of(raw, k + 1),
                                format!("unknown vertex {tok:?} in edge"),
                            ))
                        }
                    }
                }
                let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
                if u == v {
                    return Err(err(
                        lineno,
                        col_of(raw, 1),
                        format!("self-loop on {:?}", tokens[1]),
                    ));
                }
                if edges.contains(&(u, v)) {
                    return Err(err(
                        lineno,
                        col_of(raw, 1),
                        format!("duplicate edge {} {}", tokens[1], tokens[2]),
                    ));
                }
                edges.push((u, v));
            }
            other => {
                return Err(err(lineno, 1, format!("unknown directive {other:?}")));
            }
        }
    }

    let Some(names) = names else {
        return Err(err(1, 1, "missing `vertices` line"));
    };
    let _ = vertices_line;
    PresentationGraph::new(names, &edges).map_err(|e| match e {
        Error::Input(msg) => err(vertices_line.max(1), 1, msg),
        other => other,
    })
}

/// Canonical serialization: one `vertices` line, then `edge` lines sorted by
/// index pair. `parse_graph(serialize_graph(g)) == g`.
pub fn serialize_graph(graph: &PresentationGraph) -> String {
    graph.to_string()
}
