//! Simple undirected graphs with stable vertex identities.
//!
//! Vertex ids are handed out in increasing order and never recycled, so a
//! deleted vertex keeps its id forever. Every structure that refers to
//! vertices (palettes, replay logs, witnesses) can therefore key on the raw id
//! even after the graph has been reduced.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Stable vertex token. Never reused within one graph lineage.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub type VertexSet = BTreeSet<VertexId>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("self-loop on vertex {0}")]
    SelfLoop(VertexId),
}

/// Mutable simple graph. Slot `i` holds the sorted neighbor set of
/// `VertexId(i)`, or `None` once that vertex has been removed.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Option<BTreeSet<VertexId>>>,
    live: usize,
    edges: usize,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("vertices", &self.vertices().collect::<Vec<_>>())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    pub fn new() -> Graph {
        Graph::default()
    }

    /// Graph on vertices `0..n` with no edges.
    pub fn with_vertices(n: usize) -> Graph {
        Graph {
            adj: vec![Some(BTreeSet::new()); n],
            live: n,
            edges: 0,
        }
    }

    /// Graph on `0..n` with the given edges. Panics on bad input; meant for
    /// fixtures and generators.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Graph {
        let mut g = Graph::with_vertices(n);
        for &(u, v) in edges {
            g.add_edge(VertexId(u), VertexId(v)).expect("valid fixture edge");
        }
        g
    }

    pub fn add_vertex(&mut self) -> VertexId {
        let id = VertexId(self.adj.len() as u32);
        self.adj.push(Some(BTreeSet::new()));
        self.live += 1;
        id
    }

    /// One past the largest id ever issued.
    pub fn id_bound(&self) -> usize {
        self.adj.len()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        matches!(self.adj.get(v.index()), Some(Some(_)))
    }

    fn nbrs(&self, v: VertexId) -> Result<&BTreeSet<VertexId>, GraphError> {
        self.adj
            .get(v.index())
            .and_then(Option::as_ref)
            .ok_or(GraphError::UnknownVertex(v))
    }

    /// Returns whether the edge was new.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<bool, GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        self.nbrs(u)?;
        self.nbrs(v)?;
        let fresh = self.adj[u.index()].as_mut().unwrap().insert(v);
        if fresh {
            self.adj[v.index()].as_mut().unwrap().insert(u);
            self.edges += 1;
        }
        Ok(fresh)
    }

    pub fn remove_edge(&mut self, u: VertexId, v: VertexId) -> bool {
        if !self.contains(u) || !self.contains(v) {
            return false;
        }
        let removed = self.adj[u.index()].as_mut().unwrap().remove(&v);
        if removed {
            self.adj[v.index()].as_mut().unwrap().remove(&u);
            self.edges -= 1;
        }
        removed
    }

    /// Removes `v` and its incident edges, returning its former neighbors.
    pub fn remove_vertex(&mut self, v: VertexId) -> Option<BTreeSet<VertexId>> {
        let nbrs = self.adj.get_mut(v.index())?.take()?;
        for u in &nbrs {
            self.adj[u.index()].as_mut().unwrap().remove(&v);
        }
        self.edges -= nbrs.len();
        self.live -= 1;
        Some(nbrs)
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        match (self.nbrs(u), self.nbrs(v)) {
            (Ok(a), Ok(b)) => {
                if a.len() <= b.len() {
                    a.contains(&v)
                } else {
                    b.contains(&u)
                }
            }
            _ => false,
        }
    }

    /// Neighbors in ascending id order. Empty for unknown vertices.
    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.nbrs(v).ok().into_iter().flatten().copied()
    }

    pub fn neighbor_set(&self, v: VertexId) -> &BTreeSet<VertexId> {
        static EMPTY: BTreeSet<VertexId> = BTreeSet::new();
        self.nbrs(v).unwrap_or(&EMPTY)
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.nbrs(v).map_or(0, BTreeSet::len)
    }

    /// Live vertices in ascending id order.
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.adj
            .iter()
            .enumerate()
            .filter(|(_, a)| a.is_some())
            .map(|(i, _)| VertexId(i as u32))
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.vertices().collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.live
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn is_empty(&self) -> bool {
        self.live == 0
    }

    /// Edges as `(u, v)` with `u < v`, lexicographically ordered.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.vertices()
            .flat_map(move |u| self.neighbors(u).filter(move |&v| u < v).map(move |v| (u, v)))
    }

    /// Subgraph induced by `s`, keeping vertex ids.
    pub fn induced_subgraph(&self, s: &VertexSet) -> Result<Graph, GraphError> {
        let bound = s.last().map_or(0, |v| v.index() + 1);
        let mut adj: Vec<Option<BTreeSet<VertexId>>> = vec![None; bound];
        let mut edges = 0;
        for &v in s {
            let nb: BTreeSet<VertexId> = self.nbrs(v)?.iter().copied().filter(|u| s.contains(u)).collect();
            edges += nb.len();
            adj[v.index()] = Some(nb);
        }
        Ok(Graph {
            adj,
            live: s.len(),
            edges: edges / 2,
        })
    }

    /// Connected components ordered by their smallest vertex.
    pub fn connected_components(&self) -> Vec<VertexSet> {
        self.components_within(&self.vertex_set())
    }

    /// Components of the subgraph induced by `within`.
    pub fn components_within(&self, within: &VertexSet) -> Vec<VertexSet> {
        let mut seen = VertexSet::new();
        let mut out = Vec::new();
        for &start in within {
            if !seen.insert(start) {
                continue;
            }
            let mut comp = VertexSet::from([start]);
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for u in self.neighbors(v) {
                    if within.contains(&u) && seen.insert(u) {
                        comp.insert(u);
                        queue.push_back(u);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// Two-coloring into independent sides, or `None` if an odd cycle exists.
    /// For each component, the side holding its smallest vertex goes first;
    /// component sides are merged in that orientation.
    pub fn bipartition(&self) -> Option<(VertexSet, VertexSet)> {
        self.bipartition_within(&self.vertex_set())
    }

    pub fn bipartition_within(&self, within: &VertexSet) -> Option<(VertexSet, VertexSet)> {
        let mut left = VertexSet::new();
        let mut right = VertexSet::new();
        for comp in self.components_within(within) {
            let root = *comp.first().unwrap();
            let mut side = std::collections::BTreeMap::from([(root, false)]);
            let mut queue = VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                let sv = side[&v];
                for u in self.neighbors(v).filter(|u| within.contains(u)) {
                    match side.get(&u) {
                        Some(&su) if su == sv => return None,
                        Some(_) => {}
                        None => {
                            side.insert(u, !sv);
                            queue.push_back(u);
                        }
                    }
                }
            }
            for (v, s) in side {
                if s {
                    right.insert(v);
                } else {
                    left.insert(v);
                }
            }
        }
        Some((left, right))
    }

    pub fn common_neighbors(&self, u: VertexId, v: VertexId) -> VertexSet {
        let (a, b) = (self.neighbor_set(u), self.neighbor_set(v));
        let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
        small.iter().copied().filter(|w| large.contains(w)).collect()
    }

    pub fn is_independent(&self, s: &VertexSet) -> bool {
        s.iter().all(|&v| self.neighbors(v).all(|u| !s.contains(&u)))
    }

    pub fn is_connected_within(&self, s: &VertexSet) -> bool {
        self.components_within(s).len() <= 1
    }

    /// Open neighborhood of a set, excluding the set itself.
    pub fn set_neighborhood(&self, s: &VertexSet) -> VertexSet {
        s.iter()
            .flat_map(|&v| self.neighbors(v))
            .filter(|u| !s.contains(u))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(xs: &[u32]) -> VertexSet {
        xs.iter().map(|&x| VertexId(x)).collect()
    }

    fn cycle(n: u32) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n as usize, &edges)
    }

    #[test]
    fn induced_path_in_c7() {
        let g = cycle(7);
        let h = g.induced_subgraph(&ids(&[0, 1, 2, 3])).unwrap();
        assert_eq!(h.vertex_count(), 4);
        assert_eq!(
            h.edges().collect::<Vec<_>>(),
            vec![(VertexId(0), VertexId(1)), (VertexId(1), VertexId(2)), (VertexId(2), VertexId(3))]
        );
        assert!(g.induced_subgraph(&VertexSet::new()).unwrap().is_empty());
        assert_eq!(
            g.induced_subgraph(&ids(&[9])).unwrap_err(),
            GraphError::UnknownVertex(VertexId(9))
        );
    }

    #[test]
    fn k4_restriction_is_triangle() {
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let h = g.induced_subgraph(&ids(&[0, 1, 2])).unwrap();
        assert_eq!(h.edge_count(), 3);
        assert_eq!(g.common_neighbors(VertexId(0), VertexId(1)), ids(&[2, 3]));
    }

    #[test]
    fn components_of_two_paths() {
        let g = Graph::from_edges(8, &[(0, 1), (1, 2), (2, 3), (4, 5), (5, 6), (6, 7)]);
        let comps = g.connected_components();
        assert_eq!(comps, vec![ids(&[0, 1, 2, 3]), ids(&[4, 5, 6, 7])]);
        assert!(g.common_neighbors(VertexId(1), VertexId(5)).is_empty());
        assert_eq!(cycle(9).connected_components().len(), 1);
        assert!(Graph::new().connected_components().is_empty());
    }

    #[test]
    fn bipartition_cases() {
        let (l, r) = cycle(6).bipartition().unwrap();
        assert_eq!(l, ids(&[0, 2, 4]));
        assert_eq!(r, ids(&[1, 3, 5]));
        assert!(cycle(5).bipartition().is_none());
        let e = Graph::from_edges(2, &[(0, 1)]);
        assert_eq!(e.bipartition().unwrap(), (ids(&[0]), ids(&[1])));
    }

    #[test]
    fn removal_keeps_ids() {
        let mut g = cycle(5);
        let nb = g.remove_vertex(VertexId(2)).unwrap();
        assert_eq!(nb, ids(&[1, 3]));
        assert!(!g.contains(VertexId(2)));
        assert_eq!(g.edge_count(), 3);
        let fresh = g.add_vertex();
        assert_eq!(fresh, VertexId(5));
        assert_eq!(g.add_edge(fresh, fresh), Err(GraphError::SelfLoop(fresh)));
    }

    #[test]
    fn p4_common_neighbors() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!(g.common_neighbors(VertexId(0), VertexId(2)), ids(&[1]));
    }
}
