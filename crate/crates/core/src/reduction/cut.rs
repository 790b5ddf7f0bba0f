//! Cut reduction through an independent, uniformly two-colored vertex cut.

use std::collections::BTreeMap;

use super::{ContractViolation, Instance};
use crate::cograph::{self, Cotree};
use crate::color::{Color, Palette};
use crate::graph::{VertexId, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CutOutcome {
    /// Every coloring of the cut extends; the region was removed.
    Deleted,
    /// Only the two uniform colorings extend; the region became one vertex.
    Placeholder(VertexId),
    /// Exactly one uniform coloring extends; the cut was restricted to it.
    Forced(Color),
    /// No coloring of the cut extends. The instance is unchanged.
    Rejected,
}

/// Reduces region `c` behind cut `x`. The caller runs the basic rules
/// afterwards.
pub fn cut_reduction(inst: &mut Instance, x: &VertexSet, c: &VertexSet) -> Result<CutOutcome, ContractViolation> {
    let g = inst.graph();
    for &v in x.iter().chain(c) {
        if !g.contains(v) {
            return Err(ContractViolation::UnknownVertex(v));
        }
    }
    if c.len() < 2 {
        return Err(ContractViolation::Cut("region needs at least two vertices"));
    }
    if x.is_empty() || !x.is_disjoint(c) {
        return Err(ContractViolation::Cut("cut must be nonempty and disjoint from the region"));
    }
    if !g.is_independent(x) {
        return Err(ContractViolation::Cut("cut is not independent"));
    }
    let px = inst.palette(*x.first().unwrap());
    if px.len() != 2 || x.iter().any(|&v| inst.palette(v) != px) {
        return Err(ContractViolation::Cut("cut palettes must be equal and of size two"));
    }
    let seen = |v: VertexId| -> VertexSet { g.neighbors(v).filter(|u| c.contains(u)).collect() };
    let first = seen(*x.first().unwrap());
    if x.iter().any(|&v| seen(v) != first) {
        return Err(ContractViolation::Cut("cut vertices see different parts of the region"));
    }
    if g.set_neighborhood(c).iter().any(|u| !x.contains(u)) {
        return Err(ContractViolation::Cut("region has neighbors outside the cut"));
    }
    let both: VertexSet = x.union(c).copied().collect();
    let tree = cograph::recognize_within(g, &both).map_err(|_| ContractViolation::Cut("region plus cut contains a P4"))?;

    let (p, q) = (px.min().unwrap(), px.max().unwrap());
    let uniform = |col: Color| -> BTreeMap<VertexId, Color> { x.iter().map(|&v| (v, col)).collect() };
    let mixed_ok = x.len() >= 2 && {
        let mut mixed = uniform(q);
        mixed.insert(*x.first().unwrap(), p);
        extends(inst, &tree, &mixed)
    };
    let (p_ok, q_ok) = if mixed_ok {
        (true, true)
    } else {
        (extends(inst, &tree, &uniform(p)), extends(inst, &tree, &uniform(q)))
    };

    inst.stats.cut_reductions += 1;
    if mixed_ok {
        inst.remove_region(c);
        return Ok(CutOutcome::Deleted);
    }
    match (p_ok, q_ok) {
        (true, true) => {
            inst.remove_region(c);
            let v = inst.introduce(px, x);
            Ok(CutOutcome::Placeholder(v))
        }
        (true, false) | (false, true) => {
            let k = if p_ok { p } else { q };
            inst.remove_region(c);
            for &v in x {
                inst.restrict(v, Palette::single(k));
            }
            Ok(CutOutcome::Forced(k))
        }
        (false, false) => Ok(CutOutcome::Rejected),
    }
}

/// Whether clamping the given vertices leaves the cotree's graph colorable.
pub(crate) fn extends(inst: &Instance, tree: &Cotree, clamp: &BTreeMap<VertexId, Color>) -> bool {
    cograph::list3color(tree, |v| match clamp.get(&v) {
        Some(&c) => Palette::single(c).intersect(inst.palette(v)),
        None => inst.palette(v),
    })
    .is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::reduction::ReplayRecord;

    fn pal(cs: &[u8]) -> Palette {
        cs.iter().map(|&c| Color::new(c).unwrap()).collect()
    }

    #[test]
    fn forced_threes_are_deleted() {
        // X = {0, 1}, C = {2, 3} independent, complete to X.
        let g = Graph::from_edges(4, &[(0, 2), (0, 3), (1, 2), (1, 3)]);
        let mut inst = Instance::with_palettes(g, vec![pal(&[1, 2]), pal(&[1, 2]), pal(&[3]), pal(&[3])]);
        let x = VertexSet::from([VertexId(0), VertexId(1)]);
        let c = VertexSet::from([VertexId(2), VertexId(3)]);
        assert_eq!(cut_reduction(&mut inst, &x, &c), Ok(CutOutcome::Deleted));
        assert!(matches!(inst.log().last(), Some(ReplayRecord::Region { .. })));
        assert_eq!(inst.graph().vertex_count(), 2);
    }

    #[test]
    fn edge_region_outcome_matches_brute_force() {
        // C = edge 2-3 with palettes {1,3},{2,3}; X = {0,1} complete to C.
        let g = Graph::from_edges(4, &[(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let mut inst = Instance::with_palettes(g, vec![pal(&[1, 2]), pal(&[1, 2]), pal(&[1, 3]), pal(&[2, 3])]);
        let x = VertexSet::from([VertexId(0), VertexId(1)]);
        let c = VertexSet::from([VertexId(2), VertexId(3)]);
        // Mixed: both C vertices forced to 3 -> infeasible. All-1: (3, 2) works.
        // All-2: (1, 3) works. So a placeholder replaces C.
        let out = cut_reduction(&mut inst, &x, &c).unwrap();
        assert!(matches!(out, CutOutcome::Placeholder(_)));
    }

    #[test]
    fn nothing_feasible_rejects() {
        let g = Graph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]);
        let mut inst = Instance::with_palettes(g, vec![pal(&[1, 2]), pal(&[1, 2]), pal(&[1, 2])]);
        let x = VertexSet::from([VertexId(0)]);
        let c = VertexSet::from([VertexId(1), VertexId(2)]);
        assert_eq!(cut_reduction(&mut inst, &x, &c), Ok(CutOutcome::Rejected));
    }

    #[test]
    fn precondition_violations() {
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]);
        let mut inst = Instance::with_palettes(g, vec![pal(&[1, 2]); 4]);
        let x = VertexSet::from([VertexId(0), VertexId(1)]);
        let c = VertexSet::from([VertexId(2), VertexId(3)]);
        assert!(cut_reduction(&mut inst, &x, &c).is_err());
    }
}
