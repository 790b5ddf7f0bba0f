//! DIMACS `.col` and whitespace edge-list reading and writing.
//!
//! Palette annotations: `l <vertex> <colors>` in DIMACS, `@ <label> <colors>`
//! in edge lists, where `<colors>` is a run of digits 1-3, optionally split
//! over several tokens (`12`, `1 2`). In an edge list a line holding a single
//! label declares an isolated vertex; `#` starts a comment.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::color::{Color, Palette};
use crate::graph::{Graph, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    DimacsCol,
    EdgeList,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("line {line}: self-loop on {label}")]
    SelfLoop { line: usize, label: String },
    #[error("missing `p edge` header")]
    MissingHeader,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphDocument {
    pub format: Format,
    pub graph: Graph,
    /// `labels[i]` names `VertexId(i)`.
    pub labels: Vec<String>,
    /// Annotated palettes; unannotated vertices are absent.
    pub palettes: BTreeMap<VertexId, Palette>,
    /// Duplicate edges that were dropped, as human-readable notes.
    pub warnings: Vec<String>,
}

impl GraphDocument {
    /// Palette of every vertex, full where not annotated.
    pub fn palette_vec(&self) -> Vec<Palette> {
        (0..self.graph.id_bound())
            .map(|i| self.palettes.get(&VertexId(i as u32)).copied().unwrap_or(Palette::FULL))
            .collect()
    }
}

fn malformed<T>(line: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError::Malformed { line, msg: msg.into() })
}

fn parse_colors(line: usize, toks: &[&str]) -> Result<Palette, ParseError> {
    let mut p = Palette::EMPTY;
    for t in toks {
        for ch in t.chars() {
            match ch.to_digit(10).and_then(|d| Color::new(d as u8)) {
                Some(c) => p = p.with(c),
                None => return malformed(line, format!("bad color `{ch}`")),
            }
        }
    }
    if p.is_empty() {
        return malformed(line, "empty palette");
    }
    Ok(p)
}

struct Builder {
    graph: Graph,
    warnings: Vec<String>,
}

impl Builder {
    fn edge(&mut self, line: usize, u: VertexId, v: VertexId, labels: (&str, &str)) -> Result<(), ParseError> {
        if u == v {
            return Err(ParseError::SelfLoop {
                line,
                label: labels.0.to_string(),
            });
        }
        if !self.graph.add_edge(u, v).expect("endpoints exist") {
            self.warnings.push(format!("line {line}: duplicate edge {} {} ignored", labels.0, labels.1));
        }
        Ok(())
    }
}

pub fn parse(text: &str, format: Format) -> Result<GraphDocument, ParseError> {
    match format {
        Format::DimacsCol => parse_dimacs(text),
        Format::EdgeList => parse_edge_list(text),
    }
}

fn parse_dimacs(text: &str) -> Result<GraphDocument, ParseError> {
    let mut b: Option<Builder> = None;
    let mut palettes = BTreeMap::new();
    let mut n = 0usize;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        let Some(&head) = toks.first() else { continue };
        let vertex = |tok: &str| -> Result<VertexId, ParseError> {
            match tok.parse::<usize>() {
                Ok(k) if (1..=n).contains(&k) => Ok(VertexId(k as u32 - 1)),
                _ => malformed(line, format!("vertex `{tok}` out of range 1..={n}")),
            }
        };
        match head {
            "c" => {}
            "p" => {
                if b.is_some() {
                    return malformed(line, "second `p` line");
                }
                if toks.len() != 4 || !matches!(toks[1], "edge" | "col") {
                    return malformed(line, "expected `p edge <n> <m>`");
                }
                n = match toks[2].parse() {
                    Ok(k) => k,
                    Err(_) => return malformed(line, "bad vertex count"),
                };
                if toks[3].parse::<usize>().is_err() {
                    return malformed(line, "bad edge count");
                }
                b = Some(Builder {
                    graph: Graph::with_vertices(n),
                    warnings: Vec::new(),
                });
            }
            "e" => {
                let Some(bb) = b.as_mut() else { return Err(ParseError::MissingHeader) };
                if toks.len() != 3 {
                    return malformed(line, "expected `e <u> <v>`");
                }
                let (u, v) = (vertex(toks[1])?, vertex(toks[2])?);
                bb.edge(line, u, v, (toks[1], toks[2]))?;
            }
            "l" => {
                if b.is_none() {
                    return Err(ParseError::MissingHeader);
                }
                if toks.len() < 3 {
                    return malformed(line, "expected `l <v> <colors>`");
                }
                palettes.insert(vertex(toks[1])?, parse_colors(line, &toks[2..])?);
            }
            other => return malformed(line, format!("unknown line type `{other}`")),
        }
    }
    let b = b.ok_or(ParseError::MissingHeader)?;
    Ok(GraphDocument {
        format: Format::DimacsCol,
        labels: (1..=n).map(|k| k.to_string()).collect(),
        graph: b.graph,
        palettes,
        warnings: b.warnings,
    })
}

fn parse_edge_list(text: &str) -> Result<GraphDocument, ParseError> {
    let mut b = Builder {
        graph: Graph::new(),
        warnings: Vec::new(),
    };
    let mut ids: BTreeMap<String, VertexId> = BTreeMap::new();
    let mut labels = Vec::new();
    let mut palettes = BTreeMap::new();
    let mut id = |label: &str, g: &mut Graph| -> VertexId {
        *ids.entry(label.to_string()).or_insert_with(|| {
            labels.push(label.to_string());
            g.add_vertex()
        })
    };
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = body.split_whitespace().collect();
        match toks[..] {
            [] => {}
            ["@", label, ref colors @ ..] if !colors.is_empty() => {
                let v = id(label, &mut b.graph);
                palettes.insert(v, parse_colors(line, colors)?);
            }
            ["@", ..] => return malformed(line, "expected `@ <label> <colors>`"),
            [label] => {
                id(label, &mut b.graph);
            }
            [x, y] => {
                let (u, v) = (id(x, &mut b.graph), id(y, &mut b.graph));
                b.edge(line, u, v, (x, y))?;
            }
            _ => return malformed(line, "expected `<u> <v>`"),
        }
    }
    Ok(GraphDocument {
        format: Format::EdgeList,
        graph: b.graph,
        labels,
        palettes,
        warnings: b.warnings,
    })
}

/// Writes `g` (vertex ids must be `0..n`) with 1-based DIMACS numbering, or
/// as an edge list labelled by id.
pub fn print(g: &Graph, palettes: &BTreeMap<VertexId, Palette>, format: Format) -> String {
    let mut out = String::new();
    let digits = |p: Palette| -> String { p.iter().map(|c| char::from(b'0' + c.get())).collect() };
    match format {
        Format::DimacsCol => {
            let _ = writeln!(out, "p edge {} {}", g.id_bound(), g.edge_count());
            for (u, v) in g.edges() {
                let _ = writeln!(out, "e {} {}", u.0 + 1, v.0 + 1);
            }
            for (v, p) in palettes {
                let _ = writeln!(out, "l {} {}", v.0 + 1, digits(*p));
            }
        }
        Format::EdgeList => {
            for v in g.vertices() {
                if g.degree(v) == 0 {
                    let _ = writeln!(out, "{}", v.0);
                }
            }
            for (u, v) in g.edges() {
                let _ = writeln!(out, "{} {}", u.0, v.0);
            }
            for (v, p) in palettes {
                let _ = writeln!(out, "@ {} {}", v.0, digits(*p));
            }
        }
    }
    out
}

/// The edge set as sorted pairs of labels.
pub fn labelled_edges(doc: &GraphDocument) -> Vec<(String, String)> {
    let mut e: Vec<(String, String)> = doc
        .graph
        .edges()
        .map(|(u, v)| {
            let (a, b) = (doc.labels[u.index()].clone(), doc.labels[v.index()].clone());
            if a <= b {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect();
    e.sort();
    e
}
