//! The `EMB/1` text format.
//!
//! ```text
//! EMB 1 <V> <E>
//! rot <vertex-id> <dart-id>...          (V lines, counterclockwise)
//! edge <edge-id> <dart-a> <dart-b> [cost] (E lines)
//! ```
//!
//! Blank lines are ignored; any other directive is an error.

use std::fmt::Write as _;

use super::{build_embedding, EdgeInput, EmbedError, EmbeddedGraph, EmbeddingInput};

fn parse_err(line: usize, msg: impl Into<String>) -> EmbedError {
    EmbedError::Parse {
        line,
        msg: msg.into(),
    }
}

fn num<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T, EmbedError> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("bad {what} `{tok}`")))
}

pub fn parse_emb(text: &str) -> Result<EmbeddedGraph, EmbedError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() != 4 || h[0] != "EMB" || h[1] != "1" {
        return Err(parse_err(hline, "expected header `EMB 1 <V> <E>`"));
    }
    let vertex_count: usize = num(h[2], hline, "vertex count")?;
    let edge_count: usize = num(h[3], hline, "edge count")?;

    let mut rotations: Vec<Option<Vec<usize>>> = vec![None; vertex_count];
    let mut edges = Vec::with_capacity(edge_count);
    for (ln, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "rot" => {
                if !edges.is_empty() {
                    return Err(parse_err(ln, "`rot` after `edge` lines"));
                }
                let v: usize = num(toks.get(1).copied().unwrap_or(""), ln, "vertex id")?;
                if v >= vertex_count {
                    return Err(parse_err(ln, format!("vertex {v} out of range")));
                }
                if rotations[v].is_some() {
                    return Err(parse_err(ln, format!("second rotation for vertex {v}")));
                }
                let darts = toks[2..]
                    .iter()
                    .map(|t| num(t, ln, "dart id"))
                    .collect::<Result<Vec<usize>, _>>()?;
                rotations[v] = Some(darts);
            }
            "edge" => {
                if toks.len() != 4 && toks.len() != 5 {
                    return Err(parse_err(
                        ln,
                        "expected `edge <id> <dart-a> <dart-b> [cost]`",
                    ));
                }
                let cost = match toks.get(4) {
                    Some(t) => Some(t.parse().map_err(|e| parse_err(ln, format!("{e}")))?),
                    None => None,
                };
                edges.push(EdgeInput {
                    id: num(toks[1], ln, "edge id")?,
                    darts: (num(toks[2], ln, "dart id")?, num(toks[3], ln, "dart id")?),
                    cost,
                });
            }
            other => return Err(parse_err(ln, format!("unknown directive `{other}`"))),
        }
    }
    if edges.len() != edge_count {
        return Err(parse_err(
            hline,
            format!("header declares {edge_count} edges, found {}", edges.len()),
        ));
    }
    let rotations = rotations
        .into_iter()
        .enumerate()
        .map(|(v, r)| r.ok_or_else(|| parse_err(hline, format!("no rotation for vertex {v}"))))
        .collect::<Result<Vec<_>, _>>()?;
    build_embedding(&EmbeddingInput {
        vertex_count,
        rotations,
        edges,
    })
}

/// Canonical rendering: rotations start at the smallest dart, edges are
/// listed by id with darts `2e 2e+1`.
pub fn write_emb(g: &EmbeddedGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "EMB 1 {} {}", g.vertex_count(), g.edge_count());
    for v in 0..g.vertex_count() {
        out.push_str("rot ");
        out.push_str(&v.to_string());
        for d in g.rotation(v) {
            let _ = write!(out, " {d}");
        }
        out.push('\n');
    }
    for e in g.edge_ids() {
        let _ = write!(out, "edge {e} {} {}", 2 * e, 2 * e + 1);
        if let Some(c) = g.cost(e) {
            let _ = write!(out, " {c}");
        }
        out.push('\n');
    }
    out
}
