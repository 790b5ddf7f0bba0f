//! List-3-coloring instances, the basic reduction rules, the two structural
//! transformations (cut reduction, neighborhood collapse) and the replay log
//! that turns a coloring of a reduced instance back into one of the input.

mod collapse;
mod cut;
mod fixpoint;
mod replay;

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::color::{Color, Palette};
use crate::graph::{Graph, VertexId, VertexSet};
use crate::pattern;

pub use collapse::neighborhood_collapse;
pub use cut::{cut_reduction, CutOutcome};
pub use fixpoint::{Rule, StepOutcome};
pub use replay::{replay, ReplayError};

/// One entry of the replay log. Replaying the log backwards over a coloring
/// of the reduced instance yields a coloring of the original one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReplayRecord {
    /// A vertex outside N0 was colored and deleted.
    Colored { vertex: VertexId, color: Color },
    /// A vertex was deleted; any color of `palette` unused by `neighbors`
    /// works.
    Deleted {
        vertex: VertexId,
        palette: Palette,
        neighbors: Vec<VertexId>,
    },
    /// A whole component was solved and removed.
    SolvedComponent { coloring: BTreeMap<VertexId, Color> },
    /// A P4-free region was removed; it is re-colored against the final
    /// colors of the vertices it touched.
    Region {
        vertices: Vec<(VertexId, Palette)>,
        edges: Vec<(VertexId, VertexId)>,
    },
    /// A stand-in vertex was created; its color is discarded on replay.
    Introduced { vertex: VertexId },
    /// `x_new` and `y_new` replaced the two sides of a neighborhood.
    Collapse {
        x_new: VertexId,
        y_new: VertexId,
        x_members: Vec<VertexId>,
        y_members: Vec<VertexId>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RejectReason {
    EmptyPalette(VertexId),
    TwoSatComponent,
    CographComponent,
    CutInfeasible,
    /// Raised by the staged pipeline (odd cycle among relevant vertices,
    /// K4 inside a neighborhood, infeasible region).
    Stage,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Continue,
    Rejected(RejectReason),
    /// No uncolored vertex remains.
    Solved,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionStats {
    pub singleton: u64,
    pub degree: u64,
    pub diamond: u64,
    pub domination: u64,
    pub two_sat_components: u64,
    pub cograph_components: u64,
    pub cut_reductions: u64,
    pub collapses: u64,
    pub regions_removed: u64,
}

impl ReductionStats {
    pub fn total(&self) -> u64 {
        self.singleton
            + self.degree
            + self.diamond
            + self.domination
            + self.two_sat_components
            + self.cograph_components
            + self.cut_reductions
            + self.collapses
            + self.regions_removed
    }

    pub fn add(&mut self, o: &ReductionStats) {
        self.singleton += o.singleton;
        self.degree += o.degree;
        self.diamond += o.diamond;
        self.domination += o.domination;
        self.two_sat_components += o.two_sat_components;
        self.cograph_components += o.cograph_components;
        self.cut_reductions += o.cut_reductions;
        self.collapses += o.collapses;
        self.regions_removed += o.regions_removed;
    }
}

/// Misuse of a transformation whose preconditions the caller must ensure.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ContractViolation {
    #[error("cut reduction: {0}")]
    Cut(&'static str),
    #[error("neighborhood collapse: {0}")]
    Collapse(&'static str),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(VertexId),
}

/// A list-3-coloring instance with an optional precolored core `N0`.
///
/// Colored N0 vertices stay in the graph with a singleton palette; every
/// other vertex is deleted as soon as it is colored.
#[derive(Clone, Debug)]
pub struct Instance {
    graph: Graph,
    palettes: Vec<Palette>,
    n0: Vec<VertexId>,
    n0_set: VertexSet,
    n0_has_p4: bool,
    fixed: BTreeMap<VertexId, Color>,
    log: Vec<ReplayRecord>,
    pending: VecDeque<VertexId>,
    queued: Vec<bool>,
    generation: u64,
    stats: ReductionStats,
}

impl Instance {
    /// Every vertex gets the full palette.
    pub fn new(graph: Graph) -> Instance {
        let palettes = vec![Palette::FULL; graph.id_bound()];
        Instance::with_palettes(graph, palettes)
    }

    /// `palettes[i]` belongs to `VertexId(i)`; missing entries are full.
    pub fn with_palettes(graph: Graph, mut palettes: Vec<Palette>) -> Instance {
        palettes.resize(graph.id_bound(), Palette::FULL);
        let bound = graph.id_bound();
        let mut inst = Instance {
            graph,
            palettes,
            n0: Vec::new(),
            n0_set: VertexSet::new(),
            n0_has_p4: false,
            fixed: BTreeMap::new(),
            log: Vec::new(),
            pending: VecDeque::new(),
            queued: vec![false; bound],
            generation: 0,
            stats: ReductionStats::default(),
        };
        inst.touch_all();
        inst
    }

    /// Marks `core` as N0. Its vertices are never deleted by the basic rules.
    pub fn set_n0(&mut self, core: Vec<VertexId>) {
        self.n0_set = core.iter().copied().collect();
        self.n0_has_p4 = pattern::find_induced_p4(&self.graph, &self.n0_set).is_some();
        self.n0 = core;
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn palette(&self, v: VertexId) -> Palette {
        self.palettes.get(v.index()).copied().unwrap_or(Palette::EMPTY)
    }

    /// Palette lookup usable as a closure argument.
    pub fn palette_fn(&self) -> impl Fn(VertexId) -> Palette + '_ {
        move |v| self.palette(v)
    }

    pub fn n0(&self) -> &[VertexId] {
        &self.n0
    }

    pub fn n0_set(&self) -> &VertexSet {
        &self.n0_set
    }

    pub fn is_n0(&self, v: VertexId) -> bool {
        self.n0_set.contains(&v)
    }

    pub fn fixed(&self) -> &BTreeMap<VertexId, Color> {
        &self.fixed
    }

    pub fn is_fixed(&self, v: VertexId) -> bool {
        self.fixed.contains_key(&v)
    }

    pub fn log(&self) -> &[ReplayRecord] {
        &self.log
    }

    pub fn stats(&self) -> &ReductionStats {
        &self.stats
    }

    pub fn stats_mut(&mut self) -> &mut ReductionStats {
        &mut self.stats
    }

    /// Live vertices that still need a color.
    pub fn uncolored(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.graph.vertices().filter(|v| !self.fixed.contains_key(v))
    }

    pub fn is_fully_colored(&self) -> bool {
        self.uncolored().next().is_none()
    }

    /// `(live vertices, total palette size, uncolored N0 vertices)`; every
    /// basic rule strictly decreases it lexicographically.
    pub fn measure(&self) -> (usize, usize, usize) {
        let total = self.graph.vertices().map(|v| self.palette(v).len()).sum();
        let open = self.n0.iter().filter(|v| !self.fixed.contains_key(v)).count();
        (self.graph.vertex_count(), total, open)
    }

    fn touch(&mut self, v: VertexId) {
        let i = v.index();
        if i >= self.queued.len() {
            self.queued.resize(i + 1, false);
        }
        if !self.queued[i] {
            self.queued[i] = true;
            self.pending.push_back(v);
        }
    }

    fn touch_all(&mut self) {
        let vs: Vec<VertexId> = self.graph.vertices().collect();
        for v in vs {
            self.touch(v);
        }
    }

    fn bump(&mut self) {
        self.generation += 1;
    }

    /// Replaces `P(v)` by `P(v) ∩ keep`. Returns whether it shrank.
    pub fn restrict(&mut self, v: VertexId, keep: Palette) -> bool {
        let old = self.palette(v);
        let new = old.intersect(keep);
        if new == old {
            return false;
        }
        self.palettes[v.index()] = new;
        self.touch(v);
        self.bump();
        true
    }

    /// Colors `v` with `c` and removes `c` from its neighbors. Non-N0
    /// vertices are deleted afterwards.
    fn assign(&mut self, v: VertexId, c: Color) {
        debug_assert!(self.palette(v).contains(c));
        let nbrs: Vec<VertexId> = self.graph.neighbors(v).collect();
        for &u in &nbrs {
            if self.palette(u).contains(c) {
                self.palettes[u.index()] = self.palette(u).without(c);
            }
            self.touch(u);
        }
        if self.is_n0(v) {
            self.fixed.insert(v, c);
            self.palettes[v.index()] = Palette::single(c);
        } else {
            self.log.push(ReplayRecord::Colored { vertex: v, color: c });
            self.graph.remove_vertex(v);
        }
        self.bump();
    }

    /// Deletes `v`, remembering enough to re-color it greedily.
    fn delete(&mut self, v: VertexId) {
        let neighbors: Vec<VertexId> = self.graph.neighbors(v).collect();
        self.log.push(ReplayRecord::Deleted {
            vertex: v,
            palette: self.palette(v),
            neighbors: neighbors.clone(),
        });
        self.graph.remove_vertex(v);
        for u in neighbors {
            self.touch(u);
        }
        self.bump();
    }

    /// Removes a solved set of vertices. N0 members become fixed instead.
    fn remove_solved(&mut self, coloring: BTreeMap<VertexId, Color>) {
        let mut removed = BTreeMap::new();
        for (v, c) in coloring {
            if self.is_n0(v) {
                if !self.fixed.contains_key(&v) {
                    self.fixed.insert(v, c);
                    self.palettes[v.index()] = Palette::single(c);
                }
            } else {
                removed.insert(v, c);
            }
        }
        for (&v, &c) in &removed {
            let nbrs: Vec<VertexId> = self.graph.neighbors(v).collect();
            for u in nbrs {
                if !removed.contains_key(&u) {
                    self.palettes[u.index()] = self.palette(u).without(c);
                    self.touch(u);
                }
            }
        }
        for &v in removed.keys() {
            self.graph.remove_vertex(v);
        }
        self.log.push(ReplayRecord::SolvedComponent { coloring: removed });
        self.bump();
    }

    /// Deletes `region` and logs it for re-coloring against its surroundings.
    /// Callers guarantee the region is P4-free and that every coloring of the
    /// remaining instance extends into it.
    pub fn remove_region(&mut self, region: &VertexSet) {
        let vertices: Vec<(VertexId, Palette)> = region.iter().map(|&v| (v, self.palette(v))).collect();
        let mut edges = Vec::new();
        let mut outside = VertexSet::new();
        for &v in region {
            for u in self.graph.neighbors(v) {
                if !region.contains(&u) {
                    edges.push((v, u));
                    outside.insert(u);
                } else if v < u {
                    edges.push((v, u));
                }
            }
        }
        for &v in region {
            self.graph.remove_vertex(v);
        }
        for u in outside {
            self.touch(u);
        }
        self.log.push(ReplayRecord::Region { vertices, edges });
        self.stats.regions_removed += 1;
        self.bump();
    }

    /// Deletes `v`, which some other live vertex dominates.
    pub(crate) fn delete_dominated(&mut self, v: VertexId) {
        self.delete(v);
        self.stats.domination += 1;
    }

    /// Adds a fresh vertex with the given palette and neighbors.
    fn introduce(&mut self, palette: Palette, neighbors: &VertexSet) -> VertexId {
        let v = self.graph.add_vertex();
        if self.palettes.len() <= v.index() {
            self.palettes.resize(v.index() + 1, Palette::EMPTY);
        }
        self.palettes[v.index()] = palette;
        for &u in neighbors {
            self.graph.add_edge(v, u).expect("neighbor is live");
            self.touch(u);
        }
        self.touch(v);
        self.log.push(ReplayRecord::Introduced { vertex: v });
        self.bump();
        v
    }

    /// Whether the live instance (with its palettes) has any N0 coloring
    /// conflict: two adjacent fixed vertices with the same color.
    pub fn fixed_conflict(&self) -> bool {
        self.fixed
            .iter()
            .any(|(&v, &c)| self.graph.neighbors(v).any(|u| self.fixed.get(&u) == Some(&c)))
    }

    /// Builds a full coloring of the original vertices from a coloring of
    /// every uncolored live vertex.
    pub fn extend_solution(&self, live: &BTreeMap<VertexId, Color>) -> Result<BTreeMap<VertexId, Color>, ReplayError> {
        let mut coloring = live.clone();
        for (&v, &c) in &self.fixed {
            coloring.insert(v, c);
        }
        replay(&self.log, coloring)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pal(cs: &[u8]) -> Palette {
        cs.iter().map(|&c| Color::new(c).unwrap()).collect()
    }

    #[test]
    fn coloring_propagates_and_deletes() {
        let g = Graph::from_edges(2, &[(0, 1)]);
        let mut inst = Instance::with_palettes(g, vec![pal(&[1]), Palette::FULL]);
        inst.assign(VertexId(0), Color::new(1).unwrap());
        assert!(!inst.graph().contains(VertexId(0)));
        assert_eq!(inst.palette(VertexId(1)), pal(&[2, 3]));
    }

    #[test]
    fn n0_vertices_stay_after_coloring() {
        let g = Graph::from_edges(2, &[(0, 1)]);
        let mut inst = Instance::new(g);
        inst.set_n0(vec![VertexId(0)]);
        inst.assign(VertexId(0), Color::new(2).unwrap());
        assert!(inst.graph().contains(VertexId(0)));
        assert!(inst.is_fixed(VertexId(0)));
        assert_eq!(inst.palette(VertexId(1)), pal(&[1, 3]));
    }
}
