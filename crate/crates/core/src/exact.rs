//! Small exact list-colorer (most-constrained-first backtracking).
//!
//! Used where the polynomial pipeline has no witness route of its own, and
//! as a fallback when re-coloring recorded regions.

use std::collections::BTreeMap;

use crate::color::{Color, Palette};
use crate::graph::{Graph, VertexId, VertexSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactOutcome {
    Colorable(BTreeMap<VertexId, Color>),
    NotColorable,
    /// The search visited more nodes than allowed.
    LimitReached,
}

/// Colors `g[within]` from the given palettes. `node_limit` bounds the number
/// of search nodes.
pub fn exact_list_color<P: Fn(VertexId) -> Palette>(
    g: &Graph,
    within: &VertexSet,
    palettes: P,
    node_limit: Option<u64>,
) -> ExactOutcome {
    let order: Vec<VertexId> = within.iter().copied().collect();
    let index: BTreeMap<VertexId, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let nbrs: Vec<Vec<usize>> = order
        .iter()
        .map(|&v| g.neighbors(v).filter_map(|u| index.get(&u).copied()).collect())
        .collect();
    let mut search = Search {
        nbrs: &nbrs,
        avail: order.iter().map(|&v| palettes(v)).collect(),
        color: vec![None; order.len()],
        nodes: 0,
        limit: node_limit.unwrap_or(u64::MAX),
    };
    match search.run() {
        Some(true) => ExactOutcome::Colorable(
            order
                .iter()
                .zip(&search.color)
                .map(|(&v, c)| (v, c.expect("complete assignment")))
                .collect(),
        ),
        Some(false) => ExactOutcome::NotColorable,
        None => ExactOutcome::LimitReached,
    }
}

struct Search<'a> {
    nbrs: &'a [Vec<usize>],
    avail: Vec<Palette>,
    color: Vec<Option<Color>>,
    nodes: u64,
    limit: u64,
}

impl Search<'_> {
    /// `Some(found)`, or `None` when the node limit is hit.
    fn run(&mut self) -> Option<bool> {
        self.nodes += 1;
        if self.nodes > self.limit {
            return None;
        }
        let pick = (0..self.color.len())
            .filter(|&i| self.color[i].is_none())
            .min_by_key(|&i| (self.avail[i].len(), usize::MAX - self.nbrs[i].len(), i));
        let Some(v) = pick else { return Some(true) };
        for c in self.avail[v].iter() {
            let mut touched = Vec::new();
            let mut dead = false;
            for &u in &self.nbrs[v] {
                if self.color[u].is_none() && self.avail[u].contains(c) {
                    self.avail[u] = self.avail[u].without(c);
                    touched.push(u);
                    dead |= self.avail[u].is_empty();
                }
            }
            self.color[v] = Some(c);
            if !dead {
                match self.run() {
                    Some(true) => return Some(true),
                    None => return None,
                    Some(false) => {}
                }
            }
            self.color[v] = None;
            for u in touched {
                self.avail[u] = self.avail[u].with(c);
            }
        }
        Some(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(exact_list_color(&k4, &k4.vertex_set(), |_| Palette::FULL, None), ExactOutcome::NotColorable);
        let c5 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        match exact_list_color(&c5, &c5.vertex_set(), |_| Palette::FULL, None) {
            ExactOutcome::Colorable(col) => {
                for (u, v) in c5.edges() {
                    assert_ne!(col[&u], col[&v]);
                }
            }
            other => panic!("{other:?}"),
        }
        let two = Palette::from_bits(0b011);
        assert_eq!(exact_list_color(&c5, &c5.vertex_set(), |_| two, None), ExactOutcome::NotColorable);
        assert_eq!(exact_list_color(&k4, &k4.vertex_set(), |_| Palette::FULL, Some(2)), ExactOutcome::LimitReached);
    }
}
