//! Neighborhood collapse.

use super::{ContractViolation, Instance, ReplayRecord};
use crate::graph::{VertexId, VertexSet};

/// Replaces the two sides `X`, `Y` of the connected bipartite neighborhood of
/// `v` by single vertices `x`, `y`. Returns `(x, y)`.
pub fn neighborhood_collapse(inst: &mut Instance, v: VertexId) -> Result<(VertexId, VertexId), ContractViolation> {
    let g = inst.graph();
    if !g.contains(v) {
        return Err(ContractViolation::UnknownVertex(v));
    }
    let nb: VertexSet = g.neighbor_set(v).clone();
    if nb.iter().any(|u| inst.is_n0(*u)) {
        return Err(ContractViolation::Collapse("neighborhood meets N0"));
    }
    if nb.len() < 2 || !g.is_connected_within(&nb) {
        return Err(ContractViolation::Collapse("neighborhood is not connected with two sides"));
    }
    let (xs, ys) = g
        .bipartition_within(&nb)
        .ok_or(ContractViolation::Collapse("neighborhood is not bipartite"))?;
    let px = inst.palette(*xs.first().unwrap());
    let py = inst.palette(*ys.first().unwrap());
    if xs.iter().any(|&u| inst.palette(u) != px) || ys.iter().any(|&u| inst.palette(u) != py) {
        return Err(ContractViolation::Collapse("palettes are not uniform on a side"));
    }
    let outside = |side: &VertexSet| -> VertexSet {
        g.set_neighborhood(side)
            .into_iter()
            .filter(|u| !xs.contains(u) && !ys.contains(u))
            .collect()
    };
    let (ext_x, ext_y) = (outside(&xs), outside(&ys));

    let x_new = inst.graph.add_vertex();
    let y_new = inst.graph.add_vertex();
    let bound = inst.graph.id_bound();
    inst.palettes.resize(bound, crate::color::Palette::EMPTY);
    inst.palettes[x_new.index()] = px;
    inst.palettes[y_new.index()] = py;
    inst.graph.add_edge(x_new, y_new).expect("fresh vertices");
    for &u in &ext_x {
        inst.graph.add_edge(x_new, u).expect("live neighbor");
    }
    for &u in &ext_y {
        inst.graph.add_edge(y_new, u).expect("live neighbor");
    }
    for &u in xs.iter().chain(&ys) {
        inst.graph.remove_vertex(u);
    }
    for u in ext_x.union(&ext_y).copied().collect::<Vec<_>>() {
        inst.touch(u);
    }
    inst.touch(x_new);
    inst.touch(y_new);
    inst.log.push(ReplayRecord::Collapse {
        x_new,
        y_new,
        x_members: xs.into_iter().collect(),
        y_members: ys.into_iter().collect(),
    });
    inst.stats.collapses += 1;
    inst.bump();
    Ok((x_new, y_new))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::color::Palette;
    use crate::graph::Graph;

    #[test]
    fn star_neighborhood_collapses() {
        // v = 0; N(v) = {1, 2, 3, 4} where 1 is the star center; 5 hangs off 2.
        let g = Graph::from_edges(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4), (2, 5)]);
        let mut inst = Instance::new(g);
        let (x, y) = neighborhood_collapse(&mut inst, VertexId(0)).unwrap();
        let g = inst.graph();
        assert_eq!(g.vertex_count(), 4);
        assert!(g.has_edge(x, y) && g.has_edge(x, VertexId(0)) && g.has_edge(y, VertexId(0)));
        // 1 is alone on its side; leaves merged into the other one, which inherits 5.
        assert!(g.has_edge(VertexId(5), x) || g.has_edge(VertexId(5), y));
        assert_eq!(inst.palette(x), Palette::FULL);
    }

    #[test]
    fn single_edge_neighborhood_is_a_renaming() {
        let g = Graph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]);
        let mut inst = Instance::new(g);
        neighborhood_collapse(&mut inst, VertexId(0)).unwrap();
        assert_eq!(inst.graph().vertex_count(), 3);
        assert_eq!(inst.graph().edge_count(), 3);
    }

    #[test]
    fn disconnected_neighborhood_rejected() {
        let g = Graph::from_edges(3, &[(0, 1), (0, 2)]);
        let mut inst = Instance::new(g);
        assert!(neighborhood_collapse(&mut inst, VertexId(0)).is_err());
    }
}
