//! The report every command builds, printed as text or as JSON (see
//! `schema/report.schema.json`).

use std::fmt::Write as _;
use std::io::Write as _;

use hered3_core::io::{Format, GraphDocument};
use hered3_core::{PatternWitness, SolveStats};
use serde::Serialize;

#[derive(Serialize, Debug)]
pub struct Report {
    pub command: &'static str,
    pub input: InputInfo,
    pub decision: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<WitnessEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class_witness: Option<PatternInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<PatternInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fuzz: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    pub stats: Stats,
}

#[derive(Serialize, Debug)]
pub struct InputInfo {
    pub source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    pub vertices: usize,
    pub edges: usize,
}

#[derive(Serialize, Debug)]
pub struct WitnessEntry {
    pub vertex: String,
    pub color: u8,
}

#[derive(Serialize, Debug)]
pub struct PatternInfo {
    pub kind: String,
    pub vertices: Vec<String>,
}

#[derive(Serialize, Debug, Default)]
pub struct Stats {
    pub branches: u64,
    pub reductions: u64,
    pub millis: u64,
}

impl Stats {
    pub fn of(s: &SolveStats) -> Stats {
        Stats {
            branches: s.branches_total,
            reductions: s.reductions.total(),
            millis: s.millis,
        }
    }
}

impl InputInfo {
    pub fn of(doc: &GraphDocument, source: &str) -> InputInfo {
        InputInfo {
            source: source.to_string(),
            format: Some(doc.format),
            vertices: doc.graph.vertex_count(),
            edges: doc.graph.edge_count(),
        }
    }
}

impl PatternInfo {
    pub fn of(w: &PatternWitness, labels: &[String]) -> PatternInfo {
        PatternInfo {
            kind: format!("{:?}", w.kind),
            vertices: w.vertices.iter().map(|v| labels[v.index()].clone()).collect(),
        }
    }
}

impl Report {
    pub fn new(command: &'static str, input: InputInfo, decision: &'static str) -> Report {
        Report {
            command,
            input,
            decision,
            witness: None,
            class_witness: None,
            obstruction: None,
            count: None,
            fuzz: None,
            warnings: Vec::new(),
            stats: Stats::default(),
        }
    }

    pub fn print(&self, json: bool) {
        for w in &self.warnings {
            eprintln!("hered3: warning: {w}");
        }
        let text = if json {
            serde_json::to_string_pretty(self).expect("report serializes") + "\n"
        } else {
            self.text()
        };
        // A closed pipe is not an error worth reporting.
        let _ = std::io::stdout().lock().write_all(text.as_bytes());
    }

    fn text(&self) -> String {
        let mut out = String::new();
        if self.input.format.is_some() {
            let i = &self.input;
            let _ = writeln!(out, "c {} {}: {} vertices, {} edges", self.command, i.source, i.vertices, i.edges);
        } else {
            let _ = writeln!(out, "c {} {}", self.command, self.input.source);
        }
        let _ = writeln!(out, "s {}", self.decision.to_uppercase());
        for (tag, p) in [("class witness", &self.class_witness), ("obstruction", &self.obstruction)] {
            if let Some(p) = p {
                let _ = writeln!(out, "c {tag}: induced {} on {}", p.kind, p.vertices.join(" "));
            }
        }
        if let Some(n) = self.count {
            let _ = writeln!(out, "count {n}");
        }
        for e in self.witness.iter().flatten() {
            let _ = writeln!(out, "v {} {}", e.vertex, e.color);
        }
        let s = &self.stats;
        let _ = writeln!(out, "c branches {} reductions {} millis {}", s.branches, s.reductions, s.millis);
        out
    }
}
