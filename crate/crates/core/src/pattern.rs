//! Induced-pattern detection for the finitely many shapes the solver cares
//! about. Every detector returns an explicit vertex witness whose induced
//! subgraph can be checked against a hard-coded template with
//! [`PatternWitness::verify`].

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cograph;
use crate::graph::{Graph, VertexId, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PatternKind {
    P4,
    TwoP4,
    C5,
    C7,
    C9,
    K4,
    /// Complement of C7.
    CoC7,
    /// A hub (first vertex) whose neighborhood holds the induced odd cycle
    /// listed after it. Triangles are reported as [`PatternKind::K4`].
    OddWheel,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternWitness {
    pub kind: PatternKind,
    pub vertices: Vec<VertexId>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PatternError {
    #[error("induced cycle length must be 5, 7 or 9, got {0}")]
    InvalidCycleLength(usize),
}

fn cycle_adj(n: usize, i: usize, j: usize) -> bool {
    let d = (i + n - j) % n;
    d == 1 || d == n - 1
}

impl PatternWitness {
    /// Whether `(i, j)` (positions in `vertices`) must be an edge.
    fn template_edge(&self, i: usize, j: usize) -> bool {
        let n = self.vertices.len();
        match self.kind {
            PatternKind::P4 => i.abs_diff(j) == 1,
            PatternKind::TwoP4 => i / 4 == j / 4 && i.abs_diff(j) == 1,
            PatternKind::C5 | PatternKind::C7 | PatternKind::C9 => cycle_adj(n, i, j),
            PatternKind::K4 => true,
            PatternKind::CoC7 => !cycle_adj(7, i, j),
            PatternKind::OddWheel => i == 0 || j == 0 || cycle_adj(n - 1, i - 1, j - 1),
        }
    }

    fn expected_len(&self) -> Option<usize> {
        Some(match self.kind {
            PatternKind::P4 | PatternKind::K4 => 4,
            PatternKind::TwoP4 => 8,
            PatternKind::C5 => 5,
            PatternKind::C7 | PatternKind::CoC7 => 7,
            PatternKind::C9 => 9,
            PatternKind::OddWheel => return None,
        })
    }

    /// Re-checks that the listed vertices induce exactly the claimed pattern.
    pub fn verify(&self, g: &Graph) -> bool {
        let n = self.vertices.len();
        match self.expected_len() {
            Some(len) if len != n => return false,
            None if n < 6 || n % 2 != 0 => return false,
            _ => {}
        }
        let distinct: VertexSet = self.vertices.iter().copied().collect();
        if distinct.len() != n || !self.vertices.iter().all(|&v| g.contains(v)) {
            return false;
        }
        (0..n).all(|i| {
            (i + 1..n).all(|j| g.has_edge(self.vertices[i], self.vertices[j]) == self.template_edge(i, j))
        })
    }
}

/// Visits induced P4s `a-b-c-d` inside `within` with `a < d`, in
/// lexicographic order of `(a, b, c, d)`.
pub fn for_each_induced_p4<F>(g: &Graph, within: &VertexSet, mut f: F) -> Option<[VertexId; 4]>
where
    F: FnMut([VertexId; 4]) -> ControlFlow<()>,
{
    for &a in within {
        for b in g.neighbors(a).filter(|v| within.contains(v)) {
            for c in g.neighbors(b).filter(|v| within.contains(v)) {
                if c == a || g.has_edge(a, c) {
                    continue;
                }
                for d in g.neighbors(c).filter(|v| within.contains(v)) {
                    if d <= a || d == b || g.has_edge(b, d) || g.has_edge(a, d) {
                        continue;
                    }
                    if f([a, b, c, d]).is_break() {
                        return Some([a, b, c, d]);
                    }
                }
            }
        }
    }
    None
}

/// Lexicographically least induced P4 inside `within` (oriented so the first
/// endpoint is the smaller one).
pub fn find_induced_p4(g: &Graph, within: &VertexSet) -> Option<PatternWitness> {
    for_each_induced_p4(g, within, |_| ControlFlow::Break(())).map(|p| PatternWitness {
        kind: PatternKind::P4,
        vertices: p.to_vec(),
    })
}

/// Two induced P4s with no edge between them.
pub fn find_induced_2p4(g: &Graph) -> Option<PatternWitness> {
    let all = g.vertex_set();
    let mut found = None;
    for_each_induced_p4(g, &all, |p| {
        let mut rest = all.clone();
        for v in p {
            rest.remove(&v);
            for u in g.neighbors(v) {
                rest.remove(&u);
            }
        }
        if rest.len() < 4 {
            return ControlFlow::Continue(());
        }
        match cograph::recognize_within(g, &rest) {
            Ok(_) => ControlFlow::Continue(()),
            Err(q) => {
                let mut vertices = p.to_vec();
                vertices.extend(q.vertices);
                found = Some(PatternWitness {
                    kind: PatternKind::TwoP4,
                    vertices,
                });
                ControlFlow::Break(())
            }
        }
    });
    found
}

/// Induced cycle of length 5, 7 or 9. The witness lists the cycle in order,
/// starting at its smallest vertex, with the second vertex smaller than the
/// last.
pub fn find_induced_cycle(g: &Graph, length: usize) -> Result<Option<PatternWitness>, PatternError> {
    let kind = match length {
        5 => PatternKind::C5,
        7 => PatternKind::C7,
        9 => PatternKind::C9,
        other => return Err(PatternError::InvalidCycleLength(other)),
    };
    Ok(induced_cycle_of_length(g, length).map(|vertices| PatternWitness { kind, vertices }))
}

/// Induced cycle of any fixed length `k >= 4`, as an ordered vertex list.
pub fn induced_cycle_of_length(g: &Graph, k: usize) -> Option<Vec<VertexId>> {
    assert!(k >= 4, "induced cycles have at least four vertices");
    let mut path = Vec::with_capacity(k);
    for s in g.vertices() {
        if g.degree(s) < 2 {
            continue;
        }
        path.clear();
        path.push(s);
        if extend_cycle(g, k, &mut path) {
            return Some(path);
        }
    }
    None
}

fn extend_cycle(g: &Graph, k: usize, path: &mut Vec<VertexId>) -> bool {
    let start = path[0];
    let last = *path.last().unwrap();
    let len = path.len();
    let candidates: Vec<VertexId> = g.neighbors(last).filter(|&w| w > start).collect();
    for w in candidates {
        if path.contains(&w) {
            continue;
        }
        if len == k - 1 {
            // Closing vertex: adjacent to the start, to nothing else earlier.
            if w < path[1] || !g.has_edge(w, start) {
                continue;
            }
            if path[1..len - 1].iter().any(|&p| g.has_edge(p, w)) {
                continue;
            }
            path.push(w);
            return true;
        }
        if path[..len - 1].iter().any(|&p| g.has_edge(p, w)) {
            continue;
        }
        path.push(w);
        if extend_cycle(g, k, path) {
            return true;
        }
        path.pop();
    }
    false
}

/// First vertex (by id) whose neighborhood is not bipartite, reported with a
/// shortest odd cycle of that neighborhood. Catches every K4.
pub fn find_k4_or_odd_neighborhood(g: &Graph) -> Option<PatternWitness> {
    for v in g.vertices() {
        let nb: VertexSet = g.neighbor_set(v).clone();
        if g.bipartition_within(&nb).is_some() {
            continue;
        }
        let cycle = shortest_odd_cycle_within(g, &nb).expect("non-bipartite set has an odd cycle");
        let kind = if cycle.len() == 3 {
            PatternKind::K4
        } else {
            PatternKind::OddWheel
        };
        let mut vertices = vec![v];
        vertices.extend(cycle);
        return Some(PatternWitness { kind, vertices });
    }
    None
}

/// Shortest odd cycle of `g[within]`, which is necessarily induced.
pub fn shortest_odd_cycle_within(g: &Graph, within: &VertexSet) -> Option<Vec<VertexId>> {
    use std::collections::{BTreeMap, VecDeque};
    let mut best: Option<Vec<VertexId>> = None;
    for &root in within {
        let mut depth = BTreeMap::from([(root, 0usize)]);
        let mut parent: BTreeMap<VertexId, VertexId> = BTreeMap::new();
        let mut queue = VecDeque::from([root]);
        let mut hit = None;
        'bfs: while let Some(a) = queue.pop_front() {
            for b in g.neighbors(a).filter(|b| within.contains(b)) {
                match depth.get(&b) {
                    None => {
                        depth.insert(b, depth[&a] + 1);
                        parent.insert(b, a);
                        queue.push_back(b);
                    }
                    Some(&db) if db == depth[&a] => {
                        hit = Some((a, b));
                        break 'bfs;
                    }
                    _ => {}
                }
            }
        }
        let Some((a, b)) = hit else { continue };
        let up = |mut x: VertexId| {
            let mut chain = vec![x];
            while let Some(&p) = parent.get(&x) {
                chain.push(p);
                x = p;
            }
            chain
        };
        let (pa, pb) = (up(a), up(b));
        // Both chains end at the root; strip the shared tail above the meeting point.
        let mut i = pa.len();
        let mut j = pb.len();
        while i > 1 && j > 1 && pa[i - 2] == pb[j - 2] {
            i -= 1;
            j -= 1;
        }
        let mut cycle: Vec<VertexId> = pa[..i].to_vec();
        cycle.extend(pb[..j - 1].iter().rev());
        if best.as_ref().is_none_or(|c| cycle.len() < c.len()) {
            best = Some(cycle);
        }
    }
    best
}

/// Seven vertices inducing the complement of C7. Listed so that positions
/// `i` and `j` are adjacent iff they are not cyclically consecutive.
pub fn find_co_c7(g: &Graph) -> Option<PatternWitness> {
    if g.vertex_count() < 7 {
        return None;
    }
    for w0 in g.vertices() {
        if g.degree(w0) < 4 {
            continue;
        }
        let nb = g.neighbor_set(w0).clone();
        let mut found = None;
        for_each_induced_p4(g, &nb, |p| {
            for [w4, w2, w5, w3] in [p, [p[3], p[2], p[1], p[0]]] {
                let w1 = g.neighbors(w3).find(|&x| {
                    x != w0
                        && g.has_edge(x, w4)
                        && g.has_edge(x, w5)
                        && !g.has_edge(x, w0)
                        && !g.has_edge(x, w2)
                        && x != w2
                });
                let Some(w1) = w1 else { continue };
                let w6 = g.neighbors(w2).find(|&y| {
                    y != w0
                        && y != w1
                        && g.has_edge(y, w1)
                        && g.has_edge(y, w3)
                        && g.has_edge(y, w4)
                        && !g.has_edge(y, w0)
                        && !g.has_edge(y, w5)
                });
                if let Some(w6) = w6 {
                    found = Some(vec![w0, w1, w2, w3, w4, w5, w6]);
                    return ControlFlow::Break(());
                }
                // w1 may not be unique; retry with every admissible w1.
                let w1s: Vec<VertexId> = g
                    .neighbors(w3)
                    .filter(|&x| {
                        x != w0
                            && x != w2
                            && g.has_edge(x, w4)
                            && g.has_edge(x, w5)
                            && !g.has_edge(x, w0)
                            && !g.has_edge(x, w2)
                    })
                    .collect();
                for w1 in w1s {
                    let w6 = g.neighbors(w1).find(|&y| {
                        y != w0
                            && g.has_edge(y, w2)
                            && g.has_edge(y, w3)
                            && g.has_edge(y, w4)
                            && !g.has_edge(y, w0)
                            && !g.has_edge(y, w5)
                    });
                    if let Some(w6) = w6 {
                        found = Some(vec![w0, w1, w2, w3, w4, w5, w6]);
                        return ControlFlow::Break(());
                    }
                }
            }
            ControlFlow::Continue(())
        });
        if let Some(vertices) = found {
            return Some(PatternWitness {
                kind: PatternKind::CoC7,
                vertices,
            });
        }
    }
    None
}

/// `None` iff `g` is (2P4, C5)-free; otherwise a C5 or 2P4 witness.
pub fn check_class(g: &Graph) -> Option<PatternWitness> {
    induced_cycle_of_length(g, 5)
        .map(|vertices| PatternWitness {
            kind: PatternKind::C5,
            vertices,
        })
        .or_else(|| find_induced_2p4(g))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: u32) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n as usize, &edges)
    }

    fn complete(n: u32) -> Graph {
        let mut edges = vec![];
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j));
            }
        }
        Graph::from_edges(n as usize, &edges)
    }

    fn co_c7() -> Graph {
        let mut edges = vec![];
        for i in 0..7u32 {
            for j in i + 1..7 {
                if !cycle_adj(7, i as usize, j as usize) {
                    edges.push((i, j));
                }
            }
        }
        Graph::from_edges(7, &edges)
    }

    #[test]
    fn p4_detection() {
        let g = cycle(7);
        let w = find_induced_p4(&g, &g.vertex_set()).unwrap();
        assert!(w.verify(&g));
        assert_eq!(w.vertices, vec![VertexId(0), VertexId(1), VertexId(2), VertexId(3)]);
        let k4 = complete(4);
        assert!(find_induced_p4(&k4, &k4.vertex_set()).is_none());
        let c4 = cycle(4);
        assert!(find_induced_p4(&c4, &c4.vertex_set()).is_none());
    }

    #[test]
    fn two_p4_detection() {
        let c10 = cycle(10);
        let w = find_induced_2p4(&c10).unwrap();
        assert!(w.verify(&c10));
        assert!(find_induced_2p4(&cycle(9)).is_none());
        let two = Graph::from_edges(8, &[(0, 1), (1, 2), (2, 3), (4, 5), (5, 6), (6, 7)]);
        let w = find_induced_2p4(&two).unwrap();
        assert!(w.verify(&two));
        assert_eq!(w.vertices.iter().copied().collect::<VertexSet>(), two.vertex_set());
    }

    #[test]
    fn cycle_detection() {
        let c7 = cycle(7);
        let w = find_induced_cycle(&c7, 7).unwrap().unwrap();
        assert!(w.verify(&c7));
        assert_eq!(w.vertices.len(), 7);
        assert!(find_induced_cycle(&cycle(6), 5).unwrap().is_none());
        assert_eq!(find_induced_cycle(&c7, 6), Err(PatternError::InvalidCycleLength(6)));
    }

    #[test]
    fn odd_neighborhoods() {
        let k4 = complete(4);
        let w = find_k4_or_odd_neighborhood(&k4).unwrap();
        assert_eq!(w.kind, PatternKind::K4);
        assert!(w.verify(&k4));
        assert!(find_k4_or_odd_neighborhood(&cycle(7)).is_none());
        // W5: hub 5 over the 5-cycle 0..4.
        let mut w5 = cycle(5);
        let hub = w5.add_vertex();
        for i in 0..5 {
            w5.add_edge(hub, VertexId(i)).unwrap();
        }
        let w = find_k4_or_odd_neighborhood(&w5).unwrap();
        assert_eq!(w.kind, PatternKind::OddWheel);
        assert_eq!(w.vertices[0], hub);
        assert!(w.verify(&w5));
    }

    #[test]
    fn co_c7_detection() {
        let g = co_c7();
        let w = find_co_c7(&g).unwrap();
        assert!(w.verify(&g));
        assert!(find_co_c7(&cycle(7)).is_none());
        assert!(find_co_c7(&complete(5)).is_none());
    }

    #[test]
    fn class_membership() {
        let c10 = cycle(10);
        assert_eq!(check_class(&c10).unwrap().kind, PatternKind::TwoP4);
        assert!(check_class(&cycle(9)).is_none());
        assert_eq!(check_class(&cycle(5)).unwrap().kind, PatternKind::C5);
    }

    #[test]
    fn witness_rejects_wrong_shape() {
        let g = cycle(7);
        let bad = PatternWitness {
            kind: PatternKind::P4,
            vertices: vec![VertexId(0), VertexId(1), VertexId(2), VertexId(4)],
        };
        assert!(!bad.verify(&g));
    }
}
