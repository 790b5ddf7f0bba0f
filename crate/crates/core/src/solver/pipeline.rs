//! Branch-and-reduce search below one precolored C7.
//!
//! Each instance runs the basic rules, then the first stage that applies:
//! single-anchor branching, opposite-pair branching, relevant-edge
//! reduction, equivalence cuts, the per-component N2(x) analysis, and
//! finally the 2-SAT assembly.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::layers::Layers;
use super::{cycle_colorings, precolored, stage_err, ComponentOutcome, SolveError, SolveOptions, SolveStats};
use crate::cograph;
use crate::color::{Color, Palette};
use crate::graph::{Graph, VertexId, VertexSet};
use crate::pattern;
use crate::reduction::{cut_reduction, neighborhood_collapse, CutOutcome, Instance, ReductionStats, Verdict};
use crate::twosat::{encode_rx_constraints, encode_two_palette_subgraph};

/// How often each stage fired.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageTelemetry {
    pub ri_branchings: u64,
    pub s_pair_branchings: u64,
    pub s_pair_children: u64,
    pub relevant_edge_reductions: u64,
    pub equivalence_cuts: u64,
    pub n2x_disconnected: u64,
    pub n2x_connected: u64,
    pub n2x_single_vertex: u64,
    pub n2x_single_cut: u64,
    pub n2x_common_neighbor: u64,
    pub n2x_pendant: u64,
    pub n2x_collapse: u64,
    pub n2x_forced: u64,
    pub n2x_final: u64,
    pub assemblies: u64,
}

impl StageTelemetry {
    pub fn add(&mut self, o: &StageTelemetry) {
        self.ri_branchings += o.ri_branchings;
        self.s_pair_branchings += o.s_pair_branchings;
        self.s_pair_children += o.s_pair_children;
        self.relevant_edge_reductions += o.relevant_edge_reductions;
        self.equivalence_cuts += o.equivalence_cuts;
        self.n2x_disconnected += o.n2x_disconnected;
        self.n2x_connected += o.n2x_connected;
        self.n2x_single_vertex += o.n2x_single_vertex;
        self.n2x_single_cut += o.n2x_single_cut;
        self.n2x_common_neighbor += o.n2x_common_neighbor;
        self.n2x_pendant += o.n2x_pendant;
        self.n2x_collapse += o.n2x_collapse;
        self.n2x_forced += o.n2x_forced;
        self.n2x_final += o.n2x_final;
        self.assemblies += o.assemblies;
    }

    /// Firings of any N2(x) case.
    pub fn n2x_total(&self) -> u64 {
        self.n2x_disconnected
            + self.n2x_connected
            + self.n2x_single_vertex
            + self.n2x_single_cut
            + self.n2x_common_neighbor
            + self.n2x_pendant
            + self.n2x_collapse
            + self.n2x_forced
            + self.n2x_final
    }
}

/// Branchings already spent on this root-to-leaf path, one bit per core
/// position. A stage that needs to branch twice at the same position means
/// its invariant failed.
#[derive(Clone, Copy, Debug, Default)]
struct PathState {
    ri_done: u8,
    s_done: u8,
}

enum Step {
    Rejected,
    Solved(BTreeMap<VertexId, Color>),
    Branch(Vec<(Instance, PathState)>),
}

enum Act {
    Nothing,
    Changed,
    Rejected,
}

/// Common shape of the relevant vertices once both branching stages are
/// done: all see core positions `{i, i+2}` and have palette `pal`, which
/// misses `t`.
struct Frame {
    t: Color,
    pal: Palette,
}

/// A relevant top component in its final star shape.
struct Final {
    region: VertexSet,
    x1: VertexSet,
    x2: VertexSet,
    x0: VertexSet,
}

pub(crate) fn c7_component(
    sub: &Graph,
    c7: Vec<VertexId>,
    opts: &SolveOptions,
    stats: &mut SolveStats,
) -> Result<ComponentOutcome, SolveError> {
    let mut found = None;
    for colors in cycle_colorings(7) {
        stats.n0_colorings_enumerated += 1;
        if found.is_some() && !opts.exhaustive {
            continue;
        }
        stats.n0_branches_explored += 1;
        let root = precolored(sub, &c7, &colors);
        if let Some(col) = solve_branch(root, opts, stats)? {
            found.get_or_insert(col);
        }
    }
    Ok(match found {
        Some(col) => ComponentOutcome::Colorable(opts.witness.then_some(col)),
        None => ComponentOutcome::NotColorable,
    })
}

/// Depth-first search over the instances spawned from one root.
fn solve_branch(
    root: Instance,
    opts: &SolveOptions,
    stats: &mut SolveStats,
) -> Result<Option<BTreeMap<VertexId, Color>>, SolveError> {
    let mut stack = vec![(root, PathState::default())];
    while let Some((mut inst, state)) = stack.pop() {
        stats.branches_total += 1;
        let step = process(&mut inst, state, opts, stats);
        stats.reductions.add(inst.stats());
        match step? {
            Step::Rejected => {}
            Step::Solved(col) => return Ok(Some(col)),
            Step::Branch(children) => stack.extend(children.into_iter().rev()),
        }
    }
    Ok(None)
}

fn child(inst: &Instance, restrictions: &[(VertexId, Palette)], state: PathState) -> (Instance, PathState) {
    let mut c = inst.clone();
    *c.stats_mut() = ReductionStats::default();
    for &(v, p) in restrictions {
        c.restrict(v, p);
    }
    (c, state)
}

fn process(inst: &mut Instance, mut state: PathState, opts: &SolveOptions, stats: &mut SolveStats) -> Result<Step, SolveError> {
    loop {
        match inst.basic_fixpoint() {
            Verdict::Rejected(_) => return Ok(Step::Rejected),
            Verdict::Solved => return finish(inst, &BTreeMap::new()).map(Step::Solved),
            Verdict::Continue => {}
        }
        let layers = Layers::compute(inst)?;
        if let Some(children) = ri_stage(inst, &layers, &mut state, stats)? {
            return Ok(Step::Branch(children));
        }
        if let Some(children) = s_pair_stage(inst, &layers, &mut state, stats)? {
            return Ok(Step::Branch(children));
        }
        let frame = frame(inst, &layers)?;
        match relevant_edges(inst, &layers, &frame, stats)? {
            Act::Changed => continue,
            Act::Rejected => return Ok(Step::Rejected),
            Act::Nothing => {}
        }
        match equivalence_cuts(inst, &layers, &frame, stats)? {
            Act::Changed => continue,
            Act::Rejected => return Ok(Step::Rejected),
            Act::Nothing => {}
        }
        let mut finals = Vec::new();
        let mut acted = Act::Nothing;
        for t in 0..layers.tops.len() {
            if !layers.tops[t].relevant {
                continue;
            }
            match n2x(inst, &layers, &frame, t, opts, stats)? {
                Ok(f) => finals.push(f),
                Err(act) => {
                    acted = act;
                    break;
                }
            }
        }
        match acted {
            Act::Changed => continue,
            Act::Rejected => return Ok(Step::Rejected),
            Act::Nothing => {}
        }
        stats.stages.n2x_final += finals.len() as u64;
        stats.stages.assemblies += 1;
        return assemble(inst, &finals);
    }
}

fn finish(inst: &Instance, live: &BTreeMap<VertexId, Color>) -> Result<BTreeMap<VertexId, Color>, SolveError> {
    inst.extend_solution(live).map_err(|e| SolveError::Witness(e.to_string()))
}

fn core_color(inst: &Instance, pos: usize) -> Result<Color, SolveError> {
    let v = inst.n0()[pos];
    match inst.palette(v).as_single() {
        Some(c) => Ok(c),
        None => stage_err("core", format!("core vertex {v:?} is not colored")),
    }
}

/// Vertex with the largest N2 neighborhood, smallest id on ties.
fn widest(inst: &Instance, layers: &Layers, among: impl IntoIterator<Item = VertexId>) -> Option<VertexId> {
    among
        .into_iter()
        .max_by_key(|&x| (layers.n2_of(inst, x).len(), std::cmp::Reverse(x)))
}

/// Eliminates relevant vertices with a single core neighbor by coloring the
/// one whose N2 neighborhood contains all the others.
fn ri_stage(
    inst: &Instance,
    layers: &Layers,
    state: &mut PathState,
    stats: &mut SolveStats,
) -> Result<Option<Vec<(Instance, PathState)>>, SolveError> {
    for i in 0..inst.n0().len() {
        let ri: Vec<VertexId> = layers
            .relevant
            .iter()
            .copied()
            .filter(|x| layers.n0_of[x][..] == [i])
            .collect();
        if ri.is_empty() {
            continue;
        }
        if state.ri_done & (1 << i) != 0 {
            return stage_err("ri", format!("position {i} still has single-anchor relevant vertices {ri:?}"));
        }
        let z = widest(inst, layers, ri.iter().copied()).unwrap();
        let top = layers.n2_of(inst, z);
        if let Some(x) = ri.iter().find(|&&x| !layers.n2_of(inst, x).is_subset(&top)) {
            return stage_err("ri", format!("N2 of {x:?} is not inside N2 of {z:?}"));
        }
        state.ri_done |= 1 << i;
        stats.stages.ri_branchings += 1;
        let children = inst
            .palette(z)
            .iter()
            .map(|c| child(inst, &[(z, Palette::single(c))], *state))
            .collect();
        return Ok(Some(children));
    }
    Ok(None)
}

/// Empties one of two opposite anchor sets S_i, S_{i+3} by branching on
/// which vertex, in order of decreasing N2 size, first takes the color the
/// two sets share.
fn s_pair_stage(
    inst: &Instance,
    layers: &Layers,
    state: &mut PathState,
    stats: &mut SolveStats,
) -> Result<Option<Vec<(Instance, PathState)>>, SolveError> {
    let k = inst.n0().len();
    let anchored = |i: usize| -> Vec<VertexId> {
        layers
            .relevant
            .iter()
            .copied()
            .filter(|x| layers.n0_of[x].contains(&i))
            .collect()
    };
    for i in 0..k {
        let j = (i + 3) % k;
        let (si, sj) = (anchored(i), anchored(j));
        if si.is_empty() || sj.is_empty() {
            continue;
        }
        if state.s_done & (1 << i) != 0 {
            return stage_err("s-pair", format!("positions {i} and {j} both keep relevant vertices"));
        }
        let (ci, cj) = (core_color(inst, i)?, core_color(inst, j)?);
        let shared = if ci != cj {
            Palette::FULL.without(ci).without(cj).as_single().unwrap()
        } else {
            Palette::FULL.without(ci).max().unwrap()
        };
        let mut z: Vec<VertexId> = si.into_iter().chain(sj).collect();
        z.sort_by_key(|&x| (std::cmp::Reverse(layers.n2_of(inst, x).len()), x));
        let mut other = Vec::with_capacity(z.len());
        for &x in &z {
            let p = inst.palette(x);
            if p.len() != 2 || !p.contains(shared) {
                return stage_err("s-pair", format!("{x:?} has palette {p:?}, expected two colors including {shared:?}"));
            }
            other.push((x, p.without(shared)));
        }

        state.s_done |= 1 << i;
        let mut children = vec![child(inst, &other, *state)];
        for m in 0..z.len() {
            let mut base: Vec<(VertexId, Palette)> = other[..m].to_vec();
            base.push((z[m], Palette::single(shared)));
            let Some(t) = layers.partial_top(inst, z[m]) else {
                children.push(child(inst, &base, *state));
                continue;
            };
            let pair = layers.dominating_pair(inst, t)?;
            for cols in pair_colorings(inst, &pair) {
                let mut r = base.clone();
                r.extend(pair.iter().zip(cols).map(|(&v, c)| (v, Palette::single(c))));
                children.push(child(inst, &r, *state));
            }
        }
        stats.stages.s_pair_branchings += 1;
        stats.stages.s_pair_children += children.len() as u64;
        return Ok(Some(children));
    }
    Ok(None)
}

/// Proper colorings of one or two vertices from their palettes.
fn pair_colorings(inst: &Instance, pair: &[VertexId]) -> Vec<Vec<Color>> {
    match pair {
        [a] => inst.palette(*a).iter().map(|c| vec![c]).collect(),
        [a, b] => {
            let adjacent = inst.graph().has_edge(*a, *b);
            let mut out = Vec::new();
            for ca in inst.palette(*a).iter() {
                for cb in inst.palette(*b).iter() {
                    if !(adjacent && ca == cb) {
                        out.push(vec![ca, cb]);
                    }
                }
            }
            out
        }
        _ => unreachable!("dominating sets have one or two vertices"),
    }
}

fn frame(inst: &Instance, layers: &Layers) -> Result<Frame, SolveError> {
    let k = inst.n0().len();
    let mut anchors = None;
    let mut pal = None;
    for &x in &layers.relevant {
        let at = &layers.n0_of[&x];
        let p = inst.palette(x);
        if at.len() != 2 || *anchors.get_or_insert(at.clone()) != *at || *pal.get_or_insert(p) != p {
            return stage_err("relevant-pair", format!("{x:?} sees core positions {at:?} with palette {p:?}"));
        }
    }
    let (Some(at), Some(pal)) = (anchors, pal) else {
        return stage_err("relevance", "no relevant vertex");
    };
    let lower = if (at[0] + 2) % k == at[1] { at[0] } else { at[1] };
    let t = core_color(inst, lower)?;
    if pal.len() != 2 || pal != Palette::FULL.without(t) {
        return stage_err("relevant-pair", format!("relevant palette {pal:?} next to core color {t:?}"));
    }
    Ok(Frame { t, pal })
}

/// Palettes of `region` once the colors in `clamp` are fixed on its outside
/// neighbors. Every outside neighbor must be clamped.
fn region_palettes(
    inst: &Instance,
    region: &VertexSet,
    clamp: &BTreeMap<VertexId, Color>,
) -> Result<BTreeMap<VertexId, Palette>, SolveError> {
    let g = inst.graph();
    let mut out = BTreeMap::new();
    for &w in region {
        let mut p = inst.palette(w);
        for u in g.neighbors(w).filter(|u| !region.contains(u)) {
            match clamp.get(&u) {
                Some(&c) => p = p.without(c),
                None => return stage_err("region", format!("{w:?} has an unclamped outside neighbor {u:?}")),
            }
        }
        out.insert(w, p);
    }
    Ok(out)
}

/// A coloring of the P4-free `region` compatible with `clamp`, if any.
fn region_coloring(
    inst: &Instance,
    region: &VertexSet,
    clamp: &BTreeMap<VertexId, Color>,
) -> Result<Option<BTreeMap<VertexId, Color>>, SolveError> {
    let pals = region_palettes(inst, region, clamp)?;
    let tree = match cograph::recognize_within(inst.graph(), region) {
        Ok(t) => t,
        Err(p4) => return stage_err("region", format!("region contains the P4 {:?}", p4.vertices)),
    };
    Ok(cograph::list3color(&tree, |v| pals[&v]))
}

/// Complete bipartite components of the relevant vertices: their joint N2
/// neighborhood is resolved against the two possible colorings.
fn relevant_edges(inst: &mut Instance, layers: &Layers, frame: &Frame, stats: &mut SolveStats) -> Result<Act, SolveError> {
    let g = inst.graph();
    for comp in g.components_within(&layers.relevant) {
        if comp.len() < 2 {
            continue;
        }
        let Some((xs, ys)) = g.bipartition_within(&comp) else {
            stats.stages.relevant_edge_reductions += 1;
            return Ok(Act::Rejected);
        };
        if xs.iter().any(|&x| ys.iter().any(|&y| !g.has_edge(x, y))) {
            return stage_err("relevant-edges", format!("relevant component {comp:?} is not complete bipartite"));
        }
        let side_n2 = |side: &VertexSet| -> Result<VertexSet, SolveError> {
            let first = layers.n2_of(inst, *side.first().unwrap());
            if side.iter().any(|&x| layers.n2_of(inst, x) != first) {
                return stage_err("relevant-edges", "a side has non-uniform N2 neighborhoods");
            }
            Ok(first)
        };
        let (xp, yp) = (side_n2(&xs)?, side_n2(&ys)?);
        if !xp.is_disjoint(&yp) || xp.iter().any(|&a| yp.iter().any(|&b| !g.has_edge(a, b))) {
            return stage_err("relevant-edges", "N2 sides overlap or are not complete to each other");
        }
        let region: VertexSet = xp.union(&yp).copied().collect();
        let (a, b) = (frame.pal.min().unwrap(), frame.pal.max().unwrap());
        let mut ok = Vec::new();
        for (cx, cy) in [(a, b), (b, a)] {
            let clamp: BTreeMap<VertexId, Color> = xs.iter().map(|&v| (v, cx)).chain(ys.iter().map(|&v| (v, cy))).collect();
            ok.push(region_coloring(inst, &region, &clamp)?.is_some().then_some((cx, cy)));
        }
        stats.stages.relevant_edge_reductions += 1;
        match (ok[0], ok[1]) {
            (None, None) => return Ok(Act::Rejected),
            (Some(_), Some(_)) => inst.remove_region(&region),
            (Some((cx, cy)), None) | (None, Some((cx, cy))) => {
                for &v in &xs {
                    inst.restrict(v, Palette::single(cx));
                }
                for &v in &ys {
                    inst.restrict(v, Palette::single(cy));
                }
            }
        }
        return Ok(Act::Changed);
    }
    Ok(Act::Nothing)
}

/// Relevant vertices adjacent to several top components: cut the relevant
/// ones off through their equivalence class.
fn equivalence_cuts(inst: &mut Instance, layers: &Layers, frame: &Frame, stats: &mut SolveStats) -> Result<Act, SolveError> {
    if !inst.graph().is_independent(&layers.relevant) {
        return stage_err("equivalence", "relevant vertices are not independent");
    }
    let mut classes: BTreeMap<Vec<usize>, VertexSet> = BTreeMap::new();
    for &x in &layers.relevant {
        classes.entry(layers.tops_of(inst, x)).or_default().insert(x);
    }
    let mut owner: BTreeMap<usize, &Vec<usize>> = BTreeMap::new();
    for key in classes.keys() {
        for t in key {
            if let Some(prev) = owner.insert(*t, key) {
                return stage_err("equivalence", format!("top component {t} is shared by classes {prev:?} and {key:?}"));
            }
        }
    }
    for (key, members) in &classes {
        if key.len() < 2 {
            continue;
        }
        let region: VertexSet = key
            .iter()
            .filter(|&&t| layers.tops[t].relevant)
            .flat_map(|&t| layers.tops[t].vertices.iter().copied())
            .collect();
        stats.stages.equivalence_cuts += 1;
        if region.len() == 1 {
            let y = *region.first().unwrap();
            force_free_color(inst, y, frame.t, "equivalence")?;
            return Ok(Act::Changed);
        }
        return cut(inst, members, &region, "equivalence");
    }
    Ok(Act::Nothing)
}

/// Colors `y` with `t` when none of its neighbors can use `t`.
fn force_free_color(inst: &mut Instance, y: VertexId, t: Color, stage: &str) -> Result<(), SolveError> {
    if !inst.palette(y).contains(t) || inst.graph().neighbors(y).any(|u| inst.palette(u).contains(t)) {
        return stage_err(stage, format!("{y:?} cannot take color {t:?} for free"));
    }
    inst.restrict(y, Palette::single(t));
    Ok(())
}

fn cut(inst: &mut Instance, x: &VertexSet, region: &VertexSet, stage: &str) -> Result<Act, SolveError> {
    match cut_reduction(inst, x, region) {
        Ok(CutOutcome::Rejected) => Ok(Act::Rejected),
        Ok(_) => Ok(Act::Changed),
        Err(e) => stage_err(stage, e.to_string()),
    }
}

/// One step of the N2(x) analysis for relevant top component `t`, or its
/// final shape when no step applies.
fn n2x(
    inst: &mut Instance,
    layers: &Layers,
    frame: &Frame,
    t: usize,
    opts: &SolveOptions,
    stats: &mut SolveStats,
) -> Result<Result<Final, Act>, SolveError> {
    let g = inst.graph();
    let comp = &layers.tops[t].vertices;
    let rx: VertexSet = layers
        .relevant
        .iter()
        .copied()
        .filter(|&x| layers.tops_of(inst, x) == [t])
        .collect();
    let Some(x) = widest(inst, layers, rx.iter().copied()) else {
        return stage_err("n2x", format!("relevant top component {t} has no relevant neighbor"));
    };
    let nx = layers.n2_of(inst, x);
    let st = &mut stats.stages;

    if g.components_within(&nx).len() > 1 {
        if let Some(y) = rx.iter().find(|&&y| layers.n2_of(inst, y) != nx) {
            return stage_err("n2x-disconnected", format!("{y:?} does not share the N2 neighborhood of {x:?}"));
        }
        st.n2x_disconnected += 1;
        return cut(inst, &rx, comp, "n2x-disconnected").map(Err);
    }

    if nx.len() >= 3 {
        st.n2x_connected += 1;
        let Some((ys, zs)) = g.bipartition_within(&nx) else {
            return Ok(Err(Act::Rejected));
        };
        if ys.iter().any(|&y| zs.iter().any(|&z| !g.has_edge(y, z))) {
            return stage_err("n2x-connected", "N2(x) is not complete bipartite");
        }
        let mut doomed = Vec::new();
        for side in [&ys, &zs] {
            let keep = *side.first().unwrap();
            for &y in side.iter().skip(1) {
                if g.neighbor_set(y) != g.neighbor_set(keep) || inst.palette(y) != inst.palette(keep) {
                    return stage_err("n2x-connected", format!("{y:?} and {keep:?} are not twins"));
                }
                doomed.push(y);
            }
        }
        for y in doomed {
            inst.delete_dominated(y);
        }
        return Ok(Err(Act::Changed));
    }

    if nx.len() == 1 {
        let y = *nx.first().unwrap();
        if comp.len() == 1 {
            st.n2x_single_vertex += 1;
            force_free_color(inst, y, frame.t, "n2x-single")?;
            return Ok(Err(Act::Changed));
        }
        if let Some(z) = rx.iter().find(|&&z| layers.n2_of(inst, z) != nx) {
            return stage_err("n2x-single", format!("{z:?} sees more than the single vertex {y:?}"));
        }
        st.n2x_single_cut += 1;
        return cut(inst, &rx, comp, "n2x-single").map(Err);
    }

    // N2(x) is a single edge uv with deg(u) >= deg(v).
    let (p, q) = (nx.first().copied().unwrap(), nx.last().copied().unwrap());
    let u = if (g.degree(q), std::cmp::Reverse(q)) > (g.degree(p), std::cmp::Reverse(p)) { q } else { p };
    let v = if u == p { q } else { p };
    let block: VertexSet = rx.union(comp).copied().collect();
    if let Some(y) = block.iter().find(|&&y| y != u && !g.has_edge(u, y)) {
        return stage_err("n2x-edge", format!("{u:?} misses {y:?}"));
    }
    if let Some(y) = g.neighbors(u).find(|y| !block.contains(y)) {
        return stage_err("n2x-edge", format!("{u:?} has a neighbor {y:?} outside its block"));
    }

    let rest: VertexSet = comp.iter().copied().filter(|&w| w != u).collect();
    if let Some(y) = rest.iter().copied().find(|&y| y != v && g.has_edge(y, v)) {
        let dominated = g.neighbors(y).all(|w| g.has_edge(x, w)) && inst.palette(x).is_subset(inst.palette(y));
        if !dominated {
            return stage_err("n2x-common", format!("common neighbor {y:?} of the N2(x) edge is not dominated by {x:?}"));
        }
        st.n2x_common_neighbor += 1;
        inst.delete_dominated(y);
        return Ok(Err(Act::Changed));
    }

    if let Some(d) = g.components_within(&rest).into_iter().find(|d| d.len() >= 2) {
        if g.set_neighborhood(&d).iter().any(|&w| w != u) {
            return stage_err("n2x-pendant", "a nontrivial part of C - u touches more than u");
        }
        let mut keep = Palette::EMPTY;
        for c in inst.palette(u).iter() {
            if region_coloring(inst, &d, &BTreeMap::from([(u, c)]))?.is_some() {
                keep = keep.with(c);
            }
        }
        st.n2x_pendant += 1;
        inst.remove_region(&d);
        inst.restrict(u, keep);
        return Ok(Err(Act::Changed));
    }

    let attach = |w: VertexId| -> Vec<VertexId> { g.neighbors(w).filter(|y| rx.contains(y)).collect() };
    if let Some(w) = rest.iter().copied().find(|&w| attach(w).len() >= 2) {
        st.n2x_collapse += 1;
        let before = opts.probe_collapses && pattern::find_induced_2p4(inst.graph()).is_none();
        if let Err(e) = neighborhood_collapse(inst, w) {
            return stage_err("n2x-collapse", e.to_string());
        }
        if before {
            stats.collapse_checks += 1;
            if pattern::find_induced_2p4(inst.graph()).is_some() {
                stats.collapse_violations += 1;
            }
        }
        return Ok(Err(Act::Changed));
    }

    if inst.palette(u) != Palette::FULL {
        return stage_err("n2x-star", format!("center {u:?} of a relevant star has palette {:?}", inst.palette(u)));
    }
    for &w in &rest {
        let a = attach(w);
        if a.len() != 1 || inst.palette(w).len() != 2 || g.degree(w) != 2 {
            return stage_err("n2x-star", format!("leaf {w:?} has anchors {a:?} and palette {:?}", inst.palette(w)));
        }
    }
    if rest.iter().any(|&w| inst.palette(w) == frame.pal) {
        st.n2x_forced += 1;
        inst.restrict(u, Palette::single(frame.t));
        return Ok(Err(Act::Changed));
    }

    let (lo, hi) = (frame.pal.min().unwrap(), frame.pal.max().unwrap());
    let near = |c: Color| -> VertexSet {
        rest.iter()
            .filter(|&&w| inst.palette(w) == Palette::from_colors([c, frame.t]))
            .flat_map(|&w| attach(w))
            .collect()
    };
    let (x1, x2) = (near(lo), near(hi));
    if !x1.is_disjoint(&x2) {
        return stage_err("n2x-final", format!("{:?} is attached to leaves of both kinds", x1.intersection(&x2).next()));
    }
    let x0: VertexSet = rx.iter().copied().filter(|y| !x1.contains(y) && !x2.contains(y)).collect();
    Ok(Ok(Final {
        region: comp.clone(),
        x1,
        x2,
        x0,
    }))
}

/// Joint 2-SAT over every two-color vertex plus the constraints each final
/// star imposes on its relevant neighbors.
fn assemble(inst: &Instance, finals: &[Final]) -> Result<Step, SolveError> {
    let inside: VertexSet = finals.iter().flat_map(|f| f.region.iter().copied()).collect();
    let open: VertexSet = inst.uncolored().filter(|v| !inside.contains(v)).collect();
    if let Some(v) = open.iter().find(|&&v| inst.palette(v).len() != 2) {
        return stage_err("assembly", format!("{v:?} outside the final stars has palette {:?}", inst.palette(*v)));
    }
    let (mut f, vars) = match encode_two_palette_subgraph(inst.graph(), &open, inst.palette_fn()) {
        Ok(x) => x,
        Err(e) => return stage_err("assembly", e.to_string()),
    };
    for fin in finals {
        let clauses = encode_rx_constraints(&fin.x1, &fin.x2, &fin.x0, &vars);
        if let Err(e) = clauses.and_then(|c| f.extend_clauses(c)) {
            return stage_err("assembly", e.to_string());
        }
    }
    let Some(model) = f.solve() else {
        return Ok(Step::Rejected);
    };
    let mut live = vars.decode(&model);
    for fin in finals {
        match region_coloring(inst, &fin.region, &live)? {
            Some(col) => live.extend(col),
            None => return stage_err("assembly", "a final star does not extend its neighbors' colors"),
        }
    }
    finish(inst, &live).map(Step::Solved)
}
