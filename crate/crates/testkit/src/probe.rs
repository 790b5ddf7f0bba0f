//! Single-step soundness probes: brute-force colorability before and after
//! one reduction step must agree, and a coloring of the reduced instance must
//! replay to a proper coloring of the original.

use std::collections::BTreeMap;

use hered3_core::io::{self, Format};
use hered3_core::reduction::{cut_reduction, neighborhood_collapse, CutOutcome, StepOutcome};
use hered3_core::{pattern, Color, Graph, Instance, Palette, VertexId, VertexSet};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::generate::{erdos_renyi, random_cograph};
use crate::oracle::{is_proper, oracle_list3color};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    Basic,
    Cut,
    Collapse,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepFailure {
    pub kind: StepKind,
    /// Edge list with `@` palette lines.
    pub instance: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SoundnessReport {
    pub steps: BTreeMap<StepKind, u64>,
    pub failures: Vec<StepFailure>,
    /// Collapses applied to 2P4-free graphs, and how many left a 2P4.
    pub collapse_checks: u64,
    pub collapse_violations: u64,
}

impl SoundnessReport {
    pub fn total_steps(&self) -> u64 {
        self.steps.values().sum()
    }

    pub fn merge(&mut self, o: SoundnessReport) {
        for (k, n) in o.steps {
            *self.steps.entry(k).or_default() += n;
        }
        self.failures.extend(o.failures);
        self.collapse_checks += o.collapse_checks;
        self.collapse_violations += o.collapse_violations;
    }

    fn record(&mut self, kind: StepKind, before: &Instance, result: Result<(), String>) {
        *self.steps.entry(kind).or_default() += 1;
        if let Err(detail) = result {
            self.failures.push(StepFailure {
                kind,
                instance: describe(before),
                detail,
            });
        }
    }
}

fn describe(inst: &Instance) -> String {
    let pal: BTreeMap<VertexId, Palette> = inst
        .graph()
        .vertices()
        .map(|v| (v, inst.palette(v)))
        .filter(|(_, p)| *p != Palette::FULL)
        .collect();
    io::print(inst.graph(), &pal, Format::EdgeList)
}

/// Compares `before` with `after`, where `rejected` says the step declared
/// the instance infeasible.
pub fn check_step(before: &Instance, after: &Instance, rejected: bool) -> Result<(), String> {
    let truth = oracle_list3color(before.graph(), before.palette_fn()).is_some();
    if rejected {
        return if truth { Err("rejected a colorable instance".into()) } else { Ok(()) };
    }
    match oracle_list3color(after.graph(), after.palette_fn()) {
        None if truth => Err("reduced instance lost colorability".into()),
        None => Ok(()),
        Some(live) => {
            let full = after.extend_solution(&live).map_err(|e| format!("replay failed: {e}"))?;
            if !is_proper(before.graph(), before.palette_fn(), &full) {
                return Err("replayed coloring is not proper".into());
            }
            Ok(())
        }
    }
}

fn random_palette(rng: &mut impl Rng) -> Palette {
    if rng.gen_bool(0.5) {
        Palette::FULL
    } else {
        Palette::from_bits(rng.gen_range(1..8))
    }
}

fn two_palette(rng: &mut impl Rng) -> Palette {
    Palette::FULL.without(*Color::ALL.choose(rng).unwrap())
}

/// One basic step on `g` under random palettes.
pub fn probe_basic(rng: &mut impl Rng, g: &Graph, report: &mut SoundnessReport) {
    let palettes: Vec<Palette> = (0..g.id_bound()).map(|_| random_palette(rng)).collect();
    let before = Instance::with_palettes(g.clone(), palettes);
    let mut after = before.clone();
    let rejected = match after.basic_step() {
        StepOutcome::Fixpoint => return,
        StepOutcome::Rejected(_) => true,
        StepOutcome::Applied(_) => false,
    };
    report.record(StepKind::Basic, &before, check_step(&before, &after, rejected));
}

/// Collapses every vertex of `g` whose neighborhood allows it, one at a time
/// on fresh copies, with full palettes. Checks soundness when `g` is small
/// and 2P4-preservation when `g` is 2P4-free.
pub fn probe_collapses(g: &Graph, report: &mut SoundnessReport, soundness: bool) {
    let free = pattern::find_induced_2p4(g).is_none();
    for v in g.vertices() {
        let before = Instance::new(g.clone());
        let mut after = before.clone();
        if neighborhood_collapse(&mut after, v).is_err() {
            continue;
        }
        if free {
            report.collapse_checks += 1;
            if let Some(w) = pattern::find_induced_2p4(after.graph()) {
                report.collapse_violations += 1;
                report.failures.push(StepFailure {
                    kind: StepKind::Collapse,
                    instance: describe(&before),
                    detail: format!("collapse of {v} created a 2P4 on {:?}", w.vertices),
                });
            }
        }
        if soundness {
            report.record(StepKind::Collapse, &before, check_step(&before, &after, false));
        }
    }
}

/// A random graph with a vertex whose neighborhood is connected and
/// bipartite, side palettes made uniform, then collapsed.
pub fn probe_collapse_random(rng: &mut impl Rng, report: &mut SoundnessReport) {
    for _ in 0..20 {
        let n = rng.gen_range(4..=12);
        let p = rng.gen_range(0.2..0.6);
        let g = erdos_renyi(rng, n, p);
        let candidates: Vec<VertexId> = g
            .vertices()
            .filter(|&v| {
                let nb: VertexSet = g.neighbor_set(v).clone();
                nb.len() >= 2 && g.is_connected_within(&nb) && g.bipartition_within(&nb).is_some()
            })
            .collect();
        let Some(&v) = candidates.choose(rng) else { continue };
        let nb: VertexSet = g.neighbor_set(v).clone();
        let (xs, ys) = g.bipartition_within(&nb).unwrap();
        let (px, py) = (random_palette(rng), random_palette(rng));
        let palettes: Vec<Palette> = (0..n as u32)
            .map(VertexId)
            .map(|u| {
                if xs.contains(&u) {
                    px
                } else if ys.contains(&u) {
                    py
                } else {
                    random_palette(rng)
                }
            })
            .collect();
        let before = Instance::with_palettes(g.clone(), palettes);
        let mut after = before.clone();
        let result = match neighborhood_collapse(&mut after, v) {
            Ok(_) => check_step(&before, &after, false),
            Err(e) => Err(format!("collapse refused a valid neighborhood: {e}")),
        };
        report.record(StepKind::Collapse, &before, result);
        return;
    }
}

/// A cut reduction on a random instance built to meet its preconditions:
/// an independent cut `X` of twins over a cograph region `C`, with further
/// vertices hanging off `X` only.
pub fn probe_cut(rng: &mut impl Rng, report: &mut SoundnessReport) {
    let k = rng.gen_range(2..=5);
    let base = loop {
        let h = random_cograph(rng, k + 1);
        if h.degree(VertexId(k as u32)) > 0 {
            break h;
        }
    };
    let s = rng.gen_range(1..=3);
    let w = rng.gen_range(0..=4);
    let n = k + s + w;
    let mut g = Graph::with_vertices(n);
    let id = |i: usize| VertexId(i as u32);
    for (a, b) in base.edges() {
        let (a, b) = (a.index(), b.index());
        if a < k && b < k {
            g.add_edge(id(a), id(b)).unwrap();
        } else {
            let c = a.min(b);
            for x in k..k + s {
                g.add_edge(id(c), id(x)).unwrap();
            }
        }
    }
    for o in k + s..n {
        for x in k..k + s {
            if rng.gen_bool(0.6) {
                g.add_edge(id(o), id(x)).unwrap();
            }
        }
        for p in k + s..o {
            if rng.gen_bool(0.4) {
                g.add_edge(id(o), id(p)).unwrap();
            }
        }
    }
    let px = two_palette(rng);
    let palettes: Vec<Palette> = (0..n).map(|i| if (k..k + s).contains(&i) { px } else { random_palette(rng) }).collect();
    let x: VertexSet = (k..k + s).map(id).collect();
    let c: VertexSet = (0..k).map(id).collect();
    let before = Instance::with_palettes(g, palettes);
    let mut after = before.clone();
    let result = match cut_reduction(&mut after, &x, &c) {
        Ok(CutOutcome::Rejected) => check_step(&before, &after, true),
        Ok(_) => check_step(&before, &after, false),
        Err(e) => Err(format!("cut refused a valid configuration: {e}")),
    };
    report.record(StepKind::Cut, &before, result);
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn a_few_of_each() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut r = SoundnessReport::default();
        for _ in 0..30 {
            let g = erdos_renyi(&mut rng, 8, 0.35);
            probe_basic(&mut rng, &g, &mut r);
            probe_cut(&mut rng, &mut r);
            probe_collapse_random(&mut rng, &mut r);
        }
        assert!(r.failures.is_empty(), "{:?}", r.failures);
        assert!(r.steps.len() == 3);
    }
}
