//! The seven basic rules, applied until none fires.

use serde::{Deserialize, Serialize};

use super::{Instance, RejectReason, Verdict};
use crate::cograph;
use crate::graph::{VertexId, VertexSet};
use crate::twosat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    Singleton,
    Degree,
    Diamond,
    Domination,
    TwoSatComponent,
    CographComponent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepOutcome {
    Applied(Rule),
    Rejected(RejectReason),
    Fixpoint,
}

impl Instance {
    /// Applies basic rules until none is applicable.
    pub fn basic_fixpoint(&mut self) -> Verdict {
        let mut prev: Option<(usize, usize, usize)> = None;
        loop {
            if cfg!(debug_assertions) {
                let m = self.measure();
                if let Some(p) = prev {
                    debug_assert!(m < p, "basic rules must shrink the instance: {p:?} -> {m:?}");
                }
                prev = Some(m);
            }
            if let Some(r) = self.drain_pending() {
                return Verdict::Rejected(r);
            }
            if self.diamond_scan(false) {
                continue;
            }
            if self.domination_scan(false) {
                continue;
            }
            match self.component_scan(false) {
                Err(r) => return Verdict::Rejected(r),
                Ok(Some(_)) => continue,
                Ok(None) => {}
            }
            break;
        }
        if self.is_fully_colored() {
            Verdict::Solved
        } else {
            Verdict::Continue
        }
    }

    /// Applies exactly one basic rule, scanning in priority order.
    pub fn basic_step(&mut self) -> StepOutcome {
        let order: Vec<VertexId> = self.graph.vertices().collect();
        if let Some(&v) = order
            .iter()
            .find(|&&v| !self.is_fixed(v) && self.palette(v).len() == 1)
        {
            let c = self.palette(v).as_single().unwrap();
            self.assign(v, c);
            self.stats.singleton += 1;
            return StepOutcome::Applied(Rule::Singleton);
        }
        if let Some(&v) = order.iter().find(|&&v| self.palette(v).is_empty()) {
            return StepOutcome::Rejected(RejectReason::EmptyPalette(v));
        }
        if let Some(&v) = order
            .iter()
            .find(|&&v| !self.is_n0(v) && self.palette(v).len() > self.graph.degree(v))
        {
            self.delete(v);
            self.stats.degree += 1;
            return StepOutcome::Applied(Rule::Degree);
        }
        if self.diamond_scan(true) {
            return StepOutcome::Applied(Rule::Diamond);
        }
        if self.domination_scan(true) {
            return StepOutcome::Applied(Rule::Domination);
        }
        match self.component_scan(true) {
            Err(r) => StepOutcome::Rejected(r),
            Ok(Some(rule)) => StepOutcome::Applied(rule),
            Ok(None) => StepOutcome::Fixpoint,
        }
    }

    /// Singleton, empty-palette and degree rules, driven by the worklist.
    fn drain_pending(&mut self) -> Option<RejectReason> {
        while let Some(v) = self.pending.pop_front() {
            self.queued[v.index()] = false;
            if !self.graph.contains(v) {
                continue;
            }
            let p = self.palette(v);
            if p.is_empty() {
                return Some(RejectReason::EmptyPalette(v));
            }
            if self.is_fixed(v) {
                continue;
            }
            if let Some(c) = p.as_single() {
                self.assign(v, c);
                self.stats.singleton += 1;
            } else if !self.is_n0(v) && p.len() > self.graph.degree(v) {
                self.delete(v);
                self.stats.degree += 1;
            }
        }
        None
    }

    /// Diamond consistency over every edge `ab` and every nonadjacent pair
    /// in `N(a) ∩ N(b)`.
    fn diamond_scan(&mut self, single: bool) -> bool {
        let edges: Vec<(VertexId, VertexId)> = self.graph.edges().collect();
        let mut changed = false;
        for (a, b) in edges {
            let t: Vec<VertexId> = self.graph.common_neighbors(a, b).into_iter().collect();
            for i in 0..t.len() {
                for j in i + 1..t.len() {
                    let (y, z) = (t[i], t[j]);
                    let (py, pz) = (self.palette(y), self.palette(z));
                    if py == pz || self.graph.has_edge(y, z) {
                        continue;
                    }
                    let p = py.intersect(pz);
                    self.restrict(y, p);
                    self.restrict(z, p);
                    self.stats.diamond += 1;
                    changed = true;
                    if single {
                        return true;
                    }
                }
            }
        }
        changed
    }

    /// Neighborhood domination. Candidates for the dominating vertex are the
    /// neighbors of `y`'s lowest-degree neighbor.
    fn domination_scan(&mut self, single: bool) -> bool {
        let ys: Vec<VertexId> = self.graph.vertices().filter(|&v| !self.is_n0(v)).collect();
        let mut changed = false;
        for y in ys {
            if !self.graph.contains(y) || self.graph.degree(y) == 0 {
                continue;
            }
            let py = self.palette(y);
            let dy = self.graph.degree(y);
            let w = self
                .graph
                .neighbors(y)
                .min_by_key(|&w| (self.graph.degree(w), w))
                .unwrap();
            let g = &self.graph;
            let dominated = g.neighbors(w).any(|z| {
                z != y
                    && g.degree(z) >= dy
                    && !g.has_edge(y, z)
                    && self.palette(z).is_subset(py)
                    && g.neighbors(y).all(|u| g.has_edge(u, z))
            });
            if dominated {
                self.delete(y);
                self.stats.domination += 1;
                changed = true;
                if single {
                    return true;
                }
            }
        }
        changed
    }

    /// Solves components that are two-colorable-per-vertex (2-SAT) or P4-free
    /// (cotree DP). Returns the last rule applied, if any.
    fn component_scan(&mut self, single: bool) -> Result<Option<super::fixpoint::Rule>, RejectReason> {
        let mut applied = None;
        for comp in self.graph.connected_components() {
            let open: VertexSet = comp.iter().copied().filter(|&v| !self.is_fixed(v)).collect();
            if open.is_empty() {
                continue;
            }
            if open.iter().all(|&v| self.palette(v).len() <= 2) {
                let (f, vars) = twosat::encode_two_palette_subgraph(&self.graph, &open, |v| self.palette(v))
                    .expect("singletons are colored before components are scanned");
                let model = f.solve().ok_or(RejectReason::TwoSatComponent)?;
                self.remove_solved(vars.decode(&model));
                self.stats.two_sat_components += 1;
                applied = Some(Rule::TwoSatComponent);
            } else {
                if self.n0_has_p4 && comp.iter().any(|v| self.n0_set.contains(v)) {
                    continue;
                }
                let Ok(tree) = cograph::recognize_within(&self.graph, &comp) else {
                    continue;
                };
                let coloring = cograph::list3color(&tree, |v| self.palette(v)).ok_or(RejectReason::CographComponent)?;
                self.remove_solved(coloring);
                self.stats.cograph_components += 1;
                applied = Some(Rule::CographComponent);
            }
            if single {
                break;
            }
        }
        Ok(applied)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::color::{Color, Palette};
    use crate::graph::Graph;

    fn pal(cs: &[u8]) -> Palette {
        cs.iter().map(|&c| Color::new(c).unwrap()).collect()
    }

    #[test]
    fn isolated_vertex_is_deleted_by_degree_rule() {
        let mut inst = Instance::new(Graph::with_vertices(1));
        assert_eq!(inst.basic_step(), StepOutcome::Applied(Rule::Degree));
        assert_eq!(inst.basic_fixpoint(), Verdict::Solved);
    }

    #[test]
    fn two_color_triangle_rejected() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]);
        let mut inst = Instance::with_palettes(g, vec![pal(&[1, 2]); 3]);
        assert_eq!(inst.basic_fixpoint(), Verdict::Rejected(RejectReason::TwoSatComponent));
    }

    #[test]
    fn diamond_rule_intersects() {
        // y=0 and y'=1 share the adjacent pair a=2, b=3.
        let g = Graph::from_edges(4, &[(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let mut inst = Instance::with_palettes(g, vec![pal(&[1, 2]), pal(&[2, 3]), Palette::FULL, Palette::FULL]);
        inst.set_n0(vec![VertexId(2), VertexId(3)]);
        // Nothing else can fire first: degrees are 2, 2, 3, 3 and 2,3 are in N0.
        assert_eq!(inst.basic_step(), StepOutcome::Applied(Rule::Diamond));
        assert_eq!(inst.palette(VertexId(0)), pal(&[2]));
        assert_eq!(inst.palette(VertexId(1)), pal(&[2]));
        assert_eq!(inst.basic_step(), StepOutcome::Applied(Rule::Singleton));
    }

    #[test]
    fn domination_deletes() {
        // 0 and 1 both see exactly {2, 3}; 2-3 nonadjacent.
        let g = Graph::from_edges(4, &[(0, 2), (0, 3), (1, 2), (1, 3)]);
        let mut inst = Instance::with_palettes(g, vec![pal(&[1, 2]), pal(&[1, 2]), Palette::FULL, Palette::FULL]);
        inst.set_n0(vec![VertexId(2), VertexId(3)]);
        assert_eq!(inst.basic_step(), StepOutcome::Applied(Rule::Domination));
        assert!(!inst.graph().contains(VertexId(0)));
    }

    #[test]
    fn k4_component_survives_as_open() {
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let mut inst = Instance::new(g);
        assert_eq!(inst.basic_fixpoint(), Verdict::Rejected(RejectReason::CographComponent));
    }
}
