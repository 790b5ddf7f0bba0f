//! Distance layers around the precolored C7 and the top components of N2.

use std::collections::BTreeMap;

use super::{stage_err, SolveError};
use crate::cograph::{self, Cotree, CotreeNode};
use crate::graph::{VertexId, VertexSet};
use crate::reduction::Instance;

pub(crate) struct Top {
    pub vertices: VertexSet,
    pub relevant: bool,
    pub tree: Cotree,
}

pub(crate) struct Layers {
    /// Cycle positions of the N1 vertices' core neighbors, ascending.
    pub n0_of: BTreeMap<VertexId, Vec<usize>>,
    pub tops: Vec<Top>,
    pub top_of: BTreeMap<VertexId, usize>,
    /// Relevant N1 vertices.
    pub relevant: VertexSet,
}

impl Layers {
    /// Layers of a reduced instance, checking the shape guaranteed after the
    /// basic rules have run with a colored core.
    pub fn compute(inst: &Instance) -> Result<Layers, SolveError> {
        let g = inst.graph();
        let core = inst.n0();
        let k = core.len();
        let pos: BTreeMap<VertexId, usize> = core.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut n0_of = BTreeMap::new();
        let mut n2 = VertexSet::new();
        for v in g.vertices().filter(|v| !pos.contains_key(v)) {
            let mut at: Vec<usize> = g.neighbors(v).filter_map(|u| pos.get(&u).copied()).collect();
            at.sort_unstable();
            if at.is_empty() {
                n2.insert(v);
                continue;
            }
            let ok = match at[..] {
                [_] => true,
                [i, j] => (j - i == 2) || (i + k - j == 2),
                _ => false,
            };
            if !ok {
                return stage_err("n1-shape", format!("{v:?} sees core positions {at:?}"));
            }
            n0_of.insert(v, at);
        }

        let reach = g.components_within(&g.vertex_set());
        if reach.len() > 1 {
            return stage_err("connectivity", format!("{} components remain", reach.len()));
        }

        let mut tops = Vec::new();
        let mut top_of = BTreeMap::new();
        for comp in g.components_within(&n2) {
            let tree = match cograph::recognize_within(g, &comp) {
                Ok(t) => t,
                Err(p4) => return stage_err("top-component", format!("induced P4 {:?} inside N2", p4.vertices)),
            };
            let relevant = comp.iter().any(|&v| inst.palette(v).len() == 3);
            for &v in &comp {
                top_of.insert(v, tops.len());
            }
            tops.push(Top {
                vertices: comp,
                relevant,
                tree,
            });
        }
        if !tops.iter().any(|t| t.relevant) {
            return stage_err("relevance", "no relevant top component left after the basic rules");
        }

        let mut relevant = VertexSet::new();
        for &x in n0_of.keys() {
            let adjacent: Vec<usize> = {
                let mut a: Vec<usize> = g.neighbors(x).filter_map(|u| top_of.get(&u).copied()).collect();
                a.sort_unstable();
                a.dedup();
                a
            };
            for &t in &adjacent {
                let seen = g.neighbors(x).filter(|u| tops[t].vertices.contains(u)).count();
                if seen < tops[t].vertices.len() && (adjacent.len() > 1 || n0_of[&x].len() != 2) {
                    return stage_err(
                        "partial-neighbor",
                        format!("{x:?} is a partial neighbor of a top component but touches {} of them and {} core vertices", adjacent.len(), n0_of[&x].len()),
                    );
                }
            }
            if adjacent.iter().any(|&t| tops[t].relevant) {
                relevant.insert(x);
            }
        }
        Ok(Layers {
            n0_of,
            tops,
            top_of,
            relevant,
        })
    }

    pub fn n2_of(&self, inst: &Instance, x: VertexId) -> VertexSet {
        inst.graph().neighbors(x).filter(|u| self.top_of.contains_key(u)).collect()
    }

    /// Indices of the top components adjacent to `x`.
    pub fn tops_of(&self, inst: &Instance, x: VertexId) -> Vec<usize> {
        let mut a: Vec<usize> = inst.graph().neighbors(x).filter_map(|u| self.top_of.get(&u).copied()).collect();
        a.sort_unstable();
        a.dedup();
        a
    }

    /// Top component of which `x` is a partial neighbor, if any.
    pub fn partial_top(&self, inst: &Instance, x: VertexId) -> Option<usize> {
        self.tops_of(inst, x).into_iter().find(|&t| {
            let seen = inst.graph().neighbors(x).filter(|u| self.tops[t].vertices.contains(u)).count();
            seen < self.tops[t].vertices.len()
        })
    }

    /// A dominating set of at most two vertices of a top component, read off
    /// its cotree and verified.
    pub fn dominating_pair(&self, inst: &Instance, t: usize) -> Result<Vec<VertexId>, SolveError> {
        let top = &self.tops[t];
        let tree = &top.tree;
        let root = tree.root().expect("top components are nonempty");
        let min_leaf = |i: usize| -> VertexId {
            let mut stack = vec![i];
            let mut best: Option<VertexId> = None;
            while let Some(n) = stack.pop() {
                match tree.node(n) {
                    CotreeNode::Leaf(v) => best = Some(best.map_or(*v, |b| b.min(*v))),
                    CotreeNode::Union(ch) | CotreeNode::Join(ch) => stack.extend(ch),
                }
            }
            best.unwrap()
        };
        let pair = match tree.node(root) {
            CotreeNode::Leaf(v) => vec![*v],
            CotreeNode::Join(ch) => vec![min_leaf(ch[0]), min_leaf(ch[1])],
            CotreeNode::Union(_) => return stage_err("dominating-pair", "top component is disconnected"),
        };
        let g = inst.graph();
        let dominated = top
            .vertices
            .iter()
            .all(|v| pair.contains(v) || pair.iter().any(|&d| g.has_edge(d, *v)));
        if !dominated {
            return stage_err("dominating-pair", format!("{pair:?} does not dominate its component"));
        }
        Ok(pair)
    }
}
