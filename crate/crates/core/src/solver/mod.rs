//! End-to-end 3-colorability for (2P4, C5)-free graphs.
//!
//! Preflight rejects graphs with a non-bipartite vertex neighborhood or an
//! induced complement of C7. Each component is then handled on its own: if
//! it has an induced C7 the staged branch-and-reduce pipeline runs with that
//! C7 as the precolored core, otherwise the C7-free route applies.

mod layers;
mod pipeline;

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::color::{Color, Palette};
use crate::exact::{exact_list_color, ExactOutcome};
use crate::graph::{Graph, VertexId};
use crate::pattern::{self, PatternWitness};
use crate::reduction::{Instance, ReductionStats, Verdict};

pub use pipeline::StageTelemetry;

#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Produce a coloring for colorable inputs.
    pub witness: bool,
    /// Skip the (2P4, C5)-freeness check.
    pub assume_class: bool,
    /// Keep enumerating core colorings after the first success.
    pub exhaustive: bool,
    /// Largest C7-free component the exact colorer handles in witness mode.
    pub exact_ceiling: usize,
    /// Check 2P4-freeness before and after every neighborhood collapse.
    pub probe_collapses: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            witness: false,
            assume_class: false,
            exhaustive: false,
            exact_ceiling: 64,
            probe_collapses: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    Colorable,
    NotColorable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    DecisionOnly,
    Witness,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveStats {
    /// Proper colorings of the precolored cores that were generated.
    pub n0_colorings_enumerated: u64,
    /// Core colorings actually processed.
    pub n0_branches_explored: u64,
    /// Instances popped from the branch stacks, roots included.
    pub branches_total: u64,
    pub reductions: ReductionStats,
    pub stages: StageTelemetry,
    pub collapse_checks: u64,
    pub collapse_violations: u64,
    pub millis: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveReport {
    pub decision: Decision,
    pub mode: Mode,
    /// `witness[i]` colors `VertexId(i)`.
    pub witness: Option<Vec<Color>>,
    /// Preflight obstruction (K4, odd wheel, complement of C7), if that is
    /// how the graph was rejected.
    pub obstruction: Option<PatternWitness>,
    pub stats: SolveStats,
}

/// Where a stage found the instance in a shape its invariants rule out.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageDiagnostic {
    pub stage: String,
    pub detail: String,
}

impl std::fmt::Display for StageDiagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.stage, self.detail)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("graph is outside the supported class: induced {:?} on {:?}", .0.kind, .0.vertices)]
    ClassViolation(PatternWitness),
    #[error("stage invariant violated at {0}")]
    Stage(StageDiagnostic),
    #[error("witness failed verification: {0}")]
    Witness(String),
}

pub(crate) fn stage_err<T>(stage: &str, detail: impl Into<String>) -> Result<T, SolveError> {
    Err(SolveError::Stage(StageDiagnostic {
        stage: stage.to_string(),
        detail: detail.into(),
    }))
}

/// Decides 3-colorability of `g`.
pub fn solve(g: &Graph, opts: &SolveOptions) -> Result<SolveReport, SolveError> {
    let start = Instant::now();
    let mut stats = SolveStats::default();
    let finish = |mut report: SolveReport| {
        report.stats.millis = start.elapsed().as_millis() as u64;
        Ok(report)
    };
    let mode = if opts.witness { Mode::Witness } else { Mode::DecisionOnly };
    let rejected = |obstruction, stats| SolveReport {
        decision: Decision::NotColorable,
        mode,
        witness: None,
        obstruction,
        stats,
    };

    if !opts.assume_class {
        if let Some(w) = pattern::check_class(g) {
            return Err(SolveError::ClassViolation(w));
        }
    }
    if let Some(w) = pattern::find_k4_or_odd_neighborhood(g) {
        return finish(rejected(Some(w), stats));
    }
    if let Some(w) = pattern::find_co_c7(g) {
        return finish(rejected(Some(w), stats));
    }

    let mut coloring: Option<BTreeMap<VertexId, Color>> = opts.witness.then(BTreeMap::new);
    for comp in g.connected_components() {
        let sub = g.induced_subgraph(&comp).expect("component of g");
        let outcome = match pattern::induced_cycle_of_length(&sub, 7) {
            Some(c7) => pipeline::c7_component(&sub, c7, opts, &mut stats)?,
            None => c7_free_component(&sub, opts, &mut stats)?,
        };
        match outcome {
            ComponentOutcome::NotColorable => return finish(rejected(None, stats)),
            ComponentOutcome::Colorable(Some(part)) => {
                if let Some(all) = coloring.as_mut() {
                    all.extend(part);
                }
            }
            ComponentOutcome::Colorable(None) => coloring = None,
        }
    }

    let witness = match coloring {
        Some(col) => Some(verified_witness(g, &col)?),
        None => None,
    };
    let mode = if witness.is_some() { Mode::Witness } else { Mode::DecisionOnly };
    finish(SolveReport {
        decision: Decision::Colorable,
        mode,
        witness,
        obstruction: None,
        stats,
    })
}

/// Checks that `col` properly colors every vertex of `g`; returns it as a
/// vector indexed by vertex id.
fn verified_witness(g: &Graph, col: &BTreeMap<VertexId, Color>) -> Result<Vec<Color>, SolveError> {
    let mut out = vec![Color::ALL[0]; g.id_bound()];
    for v in g.vertices() {
        out[v.index()] = *col
            .get(&v)
            .ok_or_else(|| SolveError::Witness(format!("vertex {v} uncolored")))?;
    }
    if let Some((u, v)) = g.edges().find(|&(u, v)| out[u.index()] == out[v.index()]) {
        return Err(SolveError::Witness(format!("edge {u}-{v} monochromatic")));
    }
    Ok(out)
}

pub(crate) enum ComponentOutcome {
    /// Colorable, with a coloring when one was requested and available.
    Colorable(Option<BTreeMap<VertexId, Color>>),
    NotColorable,
}

/// All proper 3-colorings of the cycle `core` (in order), lexicographic.
pub(crate) fn cycle_colorings(len: usize) -> Vec<Vec<Color>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn rec(len: usize, cur: &mut Vec<Color>, out: &mut Vec<Vec<Color>>) {
        if cur.len() == len {
            if cur[len - 1] != cur[0] {
                out.push(cur.clone());
            }
            return;
        }
        for c in Color::ALL {
            if cur.last() != Some(&c) {
                cur.push(c);
                rec(len, cur, out);
                cur.pop();
            }
        }
    }
    rec(len, &mut cur, &mut out);
    out
}

/// Root instance for one core coloring: palettes full, core restricted.
pub(crate) fn precolored(sub: &Graph, core: &[VertexId], colors: &[Color]) -> Instance {
    let mut inst = Instance::new(sub.clone());
    inst.set_n0(core.to_vec());
    for (&v, &c) in core.iter().zip(colors) {
        inst.restrict(v, Palette::single(c));
    }
    inst
}

/// Components without an induced C7.
fn c7_free_component(sub: &Graph, opts: &SolveOptions, stats: &mut SolveStats) -> Result<ComponentOutcome, SolveError> {
    let Some(c9) = pattern::induced_cycle_of_length(sub, 9) else {
        // K4-free, odd-hole-free and odd-antihole-free: perfect, hence 3-colorable.
        if !opts.witness || sub.vertex_count() > opts.exact_ceiling {
            return Ok(ComponentOutcome::Colorable(None));
        }
        return match exact_list_color(sub, &sub.vertex_set(), |_| Palette::FULL, None) {
            ExactOutcome::Colorable(col) => Ok(ComponentOutcome::Colorable(Some(col))),
            _ => stage_err("perfect", "K4-free perfect component did not 3-color"),
        };
    };
    let mut found = None;
    for colors in cycle_colorings(9) {
        stats.n0_colorings_enumerated += 1;
        if found.is_some() && !opts.exhaustive {
            continue;
        }
        stats.n0_branches_explored += 1;
        stats.branches_total += 1;
        let mut inst = precolored(sub, &c9, &colors);
        let verdict = inst.basic_fixpoint();
        stats.reductions.add(inst.stats());
        match verdict {
            Verdict::Rejected(_) => {}
            Verdict::Solved => {
                if found.is_none() {
                    let col = inst
                        .extend_solution(&BTreeMap::new())
                        .map_err(|e| SolveError::Witness(e.to_string()))?;
                    found = Some(col);
                }
            }
            Verdict::Continue => {
                return stage_err("c9-core", "basic rules did not fully resolve a C9 core coloring");
            }
        }
    }
    Ok(match found {
        Some(col) => ComponentOutcome::Colorable(opts.witness.then_some(col)),
        None => ComponentOutcome::NotColorable,
    })
}
