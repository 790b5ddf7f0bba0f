//! Differential fuzzing of the solver against the brute-force oracle.
//!
//! Each case generates a graph, round-trips it through both text formats,
//! filters by the class check, then compares the solver with the oracle and
//! runs the invariant probes. Cases run in parallel; results are merged in
//! input order, so a report depends only on the specs (and on the time
//! budget, which can cut a run short).

use std::time::{Duration, Instant};

use hered3_core::io::{self, Format};
use hered3_core::twosat::encode_two_palette_subgraph;
use hered3_core::{pattern, solve, Decision, Graph, Palette, SolveError, SolveOptions, StageTelemetry, VertexId};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::generate::{generate_counted, mix, relabel, GeneratorSpec};
use crate::oracle::{is_proper, oracle_3colorable, oracle_list3color};
use crate::probe::{self, SoundnessReport};

/// Graphs up to this size get the reduction-step probes.
pub const PROBE_LIMIT: usize = 12;
/// Graphs up to this size get the 2-SAT encoding probe.
pub const TWO_SAT_LIMIT: usize = 8;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Budget {
    pub max_cases: Option<usize>,
    pub time_limit: Option<Duration>,
}

impl Budget {
    pub fn cases(n: usize) -> Budget {
        Budget {
            max_cases: Some(n),
            time_limit: None,
        }
    }

    pub fn time(d: Duration) -> Budget {
        Budget {
            max_cases: None,
            time_limit: Some(d),
        }
    }
}

#[derive(Clone, Debug)]
pub struct FuzzOptions {
    /// Reduction, collapse and 2-SAT probes.
    pub probes: bool,
    /// Re-solve a randomly relabelled copy with both solver and oracle.
    pub relabel: bool,
    pub solve: SolveOptions,
}

impl Default for FuzzOptions {
    fn default() -> Self {
        FuzzOptions {
            probes: true,
            relabel: true,
            solve: SolveOptions {
                witness: true,
                probe_collapses: true,
                ..SolveOptions::default()
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mismatch {
    pub spec: GeneratorSpec,
    /// Edge list.
    pub graph: String,
    pub solver: Decision,
    pub oracle: Decision,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    Generator,
    RoundTrip,
    ClassWitness,
    Stage,
    Witness,
    Relabel,
    Collapse,
    TwoSat,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub spec: GeneratorSpec,
    pub graph: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FuzzReport {
    pub cases: u64,
    /// Cases that passed the class check and were solved.
    pub class_members: u64,
    pub colorable: u64,
    /// Candidate draws and acceptances inside the gadget generators.
    pub generator_checks: u64,
    pub generator_passes: u64,
    pub mismatches: Vec<Mismatch>,
    pub violations: Vec<Violation>,
    pub telemetry: StageTelemetry,
    /// Core colorings processed by the solver, summed.
    pub core_branches: u64,
    /// Collapses performed inside the solver with the 2P4 probe on.
    pub solver_collapse_checks: u64,
    pub soundness: SoundnessReport,
    pub two_sat_checks: u64,
    /// Specs not run because the time budget ran out.
    pub skipped: u64,
    pub millis: u64,
}

impl FuzzReport {
    pub fn class_pass_rate(&self) -> f64 {
        ratio(self.class_members, self.cases)
    }

    pub fn generator_pass_rate(&self) -> f64 {
        if self.generator_checks == 0 {
            1.0
        } else {
            ratio(self.generator_passes, self.generator_checks)
        }
    }

    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty() && self.violations.is_empty() && self.soundness.failures.is_empty()
    }

    pub fn count(&self, kind: ViolationKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }

    pub fn merge(&mut self, o: FuzzReport) {
        self.cases += o.cases;
        self.class_members += o.class_members;
        self.colorable += o.colorable;
        self.generator_checks += o.generator_checks;
        self.generator_passes += o.generator_passes;
        self.mismatches.extend(o.mismatches);
        self.violations.extend(o.violations);
        self.telemetry.add(&o.telemetry);
        self.core_branches += o.core_branches;
        self.solver_collapse_checks += o.solver_collapse_checks;
        self.soundness.merge(o.soundness);
        self.two_sat_checks += o.two_sat_checks;
        self.skipped += o.skipped;
    }
}

fn ratio(a: u64, b: u64) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

pub fn differential_fuzz(specs: &[GeneratorSpec], budget: Budget) -> FuzzReport {
    differential_fuzz_with(specs, budget, &FuzzOptions::default())
}

pub fn differential_fuzz_with(specs: &[GeneratorSpec], budget: Budget, opts: &FuzzOptions) -> FuzzReport {
    let start = Instant::now();
    let take = budget.max_cases.map_or(specs.len(), |m| m.min(specs.len()));
    let parts: Vec<FuzzReport> = specs[..take]
        .par_iter()
        .map(|spec| {
            if budget.time_limit.is_some_and(|t| start.elapsed() >= t) {
                FuzzReport {
                    skipped: 1,
                    ..FuzzReport::default()
                }
            } else {
                run_case(spec, opts)
            }
        })
        .collect();
    let mut report = FuzzReport::default();
    for p in parts {
        report.merge(p);
    }
    report.millis = start.elapsed().as_millis() as u64;
    report
}

fn edge_list(g: &Graph) -> String {
    io::print(g, &Default::default(), Format::EdgeList)
}

fn decision(colorable: bool) -> Decision {
    if colorable {
        Decision::Colorable
    } else {
        Decision::NotColorable
    }
}

/// One spec through every check.
pub fn run_case(spec: &GeneratorSpec, opts: &FuzzOptions) -> FuzzReport {
    let mut r = FuzzReport {
        cases: 1,
        ..FuzzReport::default()
    };
    let violation = |r: &mut FuzzReport, kind, g: &Graph, detail: String| {
        r.violations.push(Violation {
            kind,
            spec: spec.clone(),
            graph: edge_list(g),
            detail,
        })
    };
    let gen = match generate_counted(spec) {
        Ok(g) => g,
        Err(e) => {
            violation(&mut r, ViolationKind::Generator, &Graph::new(), e.to_string());
            return r;
        }
    };
    r.generator_checks = gen.checks as u64;
    r.generator_passes = gen.passes as u64;
    let g = gen.graph;
    if let Err(detail) = round_trip(&g) {
        violation(&mut r, ViolationKind::RoundTrip, &g, detail);
    }
    if let Some(w) = pattern::check_class(&g) {
        if !w.verify(&g) {
            violation(&mut r, ViolationKind::ClassWitness, &g, format!("{:?} on {:?} does not verify", w.kind, w.vertices));
        }
        return r;
    }
    r.class_members = 1;
    let mut rng = ChaCha8Rng::seed_from_u64(mix(spec.seed, 0x5eed));

    let truth = oracle_3colorable(&g);
    r.colorable = truth as u64;
    let got = match solve(&g, &opts.solve) {
        Ok(rep) => rep,
        Err(e) => {
            let kind = match e {
                SolveError::Witness(_) => ViolationKind::Witness,
                _ => ViolationKind::Stage,
            };
            violation(&mut r, kind, &g, e.to_string());
            return r;
        }
    };
    r.telemetry = got.stats.stages.clone();
    r.core_branches = got.stats.n0_branches_explored;
    r.solver_collapse_checks = got.stats.collapse_checks;
    if got.stats.collapse_violations > 0 {
        violation(&mut r, ViolationKind::Collapse, &g, format!("{} solver collapses created a 2P4", got.stats.collapse_violations));
    }
    if (got.decision == Decision::Colorable) != truth {
        r.mismatches.push(Mismatch {
            spec: spec.clone(),
            graph: edge_list(&g),
            solver: got.decision,
            oracle: decision(truth),
        });
    }
    if let Some(w) = &got.witness {
        let col = g.vertices().map(|v| (v, w[v.index()])).collect();
        if !is_proper(&g, |_| Palette::FULL, &col) {
            violation(&mut r, ViolationKind::Witness, &g, "returned coloring is not proper".into());
        }
    } else if got.decision == Decision::Colorable && opts.solve.witness {
        violation(&mut r, ViolationKind::Witness, &g, "no coloring returned in witness mode".into());
    }

    if opts.relabel {
        let mut perm: Vec<u32> = (0..g.id_bound() as u32).collect();
        perm.shuffle(&mut rng);
        let h = relabel(&g, &perm);
        let oracle_again = oracle_3colorable(&h);
        let solver_again = solve(&h, &opts.solve).map(|rep| rep.decision);
        if oracle_again != truth || solver_again.as_ref().ok() != Some(&got.decision) {
            violation(
                &mut r,
                ViolationKind::Relabel,
                &g,
                format!("under {perm:?}: oracle {oracle_again}, solver {solver_again:?}"),
            );
        }
    }

    if opts.probes {
        let small = g.vertex_count() <= PROBE_LIMIT;
        probe::probe_collapses(&g, &mut r.soundness, small);
        if small {
            probe::probe_basic(&mut rng, &g, &mut r.soundness);
        }
        if g.vertex_count() <= TWO_SAT_LIMIT {
            r.two_sat_checks += 1;
            if let Err(detail) = two_sat_probe(&mut rng, &g) {
                violation(&mut r, ViolationKind::TwoSat, &g, detail);
            }
        }
    }
    r
}

/// `parse(print(g))` gives back `g` in both formats.
pub fn round_trip(g: &Graph) -> Result<(), String> {
    let none = Default::default();
    let d = io::parse(&io::print(g, &none, Format::DimacsCol), Format::DimacsCol).map_err(|e| e.to_string())?;
    if d.graph != *g {
        return Err("DIMACS round trip changed the graph".into());
    }
    let e = io::parse(&io::print(g, &none, Format::EdgeList), Format::EdgeList).map_err(|e| e.to_string())?;
    let mut want: Vec<(String, String)> = g
        .edges()
        .map(|(u, v)| {
            let (a, b) = (u.0.to_string(), v.0.to_string());
            if a <= b {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect();
    want.sort();
    if e.graph.vertex_count() != g.vertex_count() || io::labelled_edges(&e) != want {
        return Err("edge-list round trip changed the graph".into());
    }
    Ok(())
}

/// Random two-color palettes on `g`: the 2-SAT encoding must agree with
/// brute force.
fn two_sat_probe(rng: &mut impl Rng, g: &Graph) -> Result<(), String> {
    let pal: Vec<Palette> = (0..g.id_bound())
        .map(|_| Palette::FULL.without(hered3_core::Color::ALL[rng.gen_range(0..3)]))
        .collect();
    let p = |v: VertexId| pal[v.index()];
    let (f, vars) = encode_two_palette_subgraph(g, &g.vertex_set(), p).map_err(|e| e.to_string())?;
    let want = oracle_list3color(g, p).is_some();
    match f.solve() {
        Some(a) if want => {
            if is_proper(g, p, &vars.decode(&a)) {
                Ok(())
            } else {
                Err("decoded 2-SAT model is not a proper coloring".into())
            }
        }
        None if !want => Ok(()),
        got => Err(format!("2-SAT says {}, brute force says {want}", got.is_some())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{batch, GeneratorKind, Named};

    #[test]
    fn empty_batch_is_empty() {
        let r = differential_fuzz(&[], Budget::cases(10));
        assert_eq!(r.cases, 0);
        assert!(r.is_clean());
    }

    #[test]
    fn k4_cases_are_not_colorable() {
        let specs = batch(&GeneratorKind::Named(Named::K4), 1, 3);
        let r = differential_fuzz(&specs, Budget::default());
        assert_eq!((r.cases, r.class_members, r.colorable), (3, 3, 0));
        assert!(r.is_clean(), "{r:?}");
    }

    #[test]
    fn small_random_batch_is_clean() {
        let specs = batch(&GeneratorKind::ErdosRenyi { n: 9, p: 0.3 }, 4, 60);
        let r = differential_fuzz(&specs, Budget::cases(40));
        assert_eq!(r.cases, 40);
        assert!(r.is_clean(), "{:?} {:?}", r.mismatches, r.violations);
    }
}
