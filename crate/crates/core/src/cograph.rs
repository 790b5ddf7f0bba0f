//! P4-free graphs: cotree recognition and exact list-3-coloring.

use std::collections::BTreeMap;

use crate::color::{Color, Palette};
use crate::graph::{Graph, VertexId, VertexSet};
use crate::pattern::{self, PatternWitness};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CotreeNode {
    Leaf(VertexId),
    Union(Vec<usize>),
    Join(Vec<usize>),
}

/// Cotree stored as an arena. Children are ordered by their smallest leaf.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cotree {
    nodes: Vec<CotreeNode>,
    root: Option<usize>,
}

/// Bitset over the eight subsets of `{1,2,3}`: bit `s` is set iff the color
/// set with mask `s` is achievable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct ColorSetFamily(pub u8);

impl ColorSetFamily {
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, set: Palette) -> bool {
        self.0 & (1 << set.bits()) != 0
    }

    pub fn sets(self) -> impl Iterator<Item = Palette> {
        (0u8..8).filter(move |s| self.0 & (1 << s) != 0).map(Palette::from_bits)
    }

    fn combine(self, other: ColorSetFamily, disjoint: bool) -> ColorSetFamily {
        let mut out = 0u8;
        for a in self.sets() {
            for b in other.sets() {
                if !disjoint || a.intersect(b).is_empty() {
                    out |= 1 << a.union(b).bits();
                }
            }
        }
        ColorSetFamily(out)
    }
}

impl Cotree {
    pub fn root(&self) -> Option<usize> {
        self.root
    }

    pub fn node(&self, i: usize) -> &CotreeNode {
        &self.nodes[i]
    }

    pub fn nodes(&self) -> &[CotreeNode] {
        &self.nodes
    }

    pub fn leaves(&self) -> Vec<VertexId> {
        let mut out: Vec<VertexId> = self
            .nodes
            .iter()
            .filter_map(|n| match n {
                CotreeNode::Leaf(v) => Some(*v),
                _ => None,
            })
            .collect();
        out.sort();
        out
    }

    /// Adjacency as read off the tree: the lowest common ancestor is a Join.
    pub fn adjacent(&self, u: VertexId, v: VertexId) -> bool {
        if u == v {
            return false;
        }
        let Some(root) = self.root else { return false };
        let path = |x: VertexId| {
            let mut p = Vec::new();
            self.path_to(root, x, &mut p);
            p
        };
        let (pu, pv) = (path(u), path(v));
        let mut lca = None;
        for (a, b) in pu.iter().zip(&pv) {
            if a != b {
                break;
            }
            lca = Some(*a);
        }
        matches!(lca.map(|i| &self.nodes[i]), Some(CotreeNode::Join(_)))
    }

    fn path_to(&self, i: usize, x: VertexId, out: &mut Vec<usize>) -> bool {
        out.push(i);
        let hit = match &self.nodes[i] {
            CotreeNode::Leaf(v) => *v == x,
            CotreeNode::Union(ch) | CotreeNode::Join(ch) => ch.iter().any(|&c| self.path_to(c, x, out)),
        };
        if !hit {
            out.pop();
        }
        hit
    }

    /// Largest clique: Union takes the max over children, Join the sum.
    pub fn clique_number(&self) -> usize {
        fn rec(t: &Cotree, i: usize) -> usize {
            match &t.nodes[i] {
                CotreeNode::Leaf(_) => 1,
                CotreeNode::Union(ch) => ch.iter().map(|&c| rec(t, c)).max().unwrap_or(0),
                CotreeNode::Join(ch) => ch.iter().map(|&c| rec(t, c)).sum(),
            }
        }
        self.root.map_or(0, |r| rec(self, r))
    }

    /// Per-node families, indexed like `nodes`.
    fn families<P: Fn(VertexId) -> Palette>(&self, palettes: &P) -> Vec<ColorSetFamily> {
        let mut fam = vec![ColorSetFamily::default(); self.nodes.len()];
        // Children always have larger indices than their parent.
        for i in (0..self.nodes.len()).rev() {
            fam[i] = match &self.nodes[i] {
                CotreeNode::Leaf(v) => ColorSetFamily(
                    palettes(*v)
                        .iter()
                        .fold(0, |acc, c| acc | 1 << Palette::single(c).bits()),
                ),
                CotreeNode::Union(ch) => fold(ch.iter().map(|&c| fam[c]), false),
                CotreeNode::Join(ch) => fold(ch.iter().map(|&c| fam[c]), true),
            };
        }
        fam
    }

    fn assign<P: Fn(VertexId) -> Palette>(
        &self,
        i: usize,
        target: Palette,
        fam: &[ColorSetFamily],
        palettes: &P,
        out: &mut BTreeMap<VertexId, Color>,
    ) {
        match &self.nodes[i] {
            CotreeNode::Leaf(v) => {
                let c = target.as_single().expect("leaf target is a singleton");
                debug_assert!(palettes(*v).contains(c));
                out.insert(*v, c);
            }
            CotreeNode::Union(ch) | CotreeNode::Join(ch) => {
                let disjoint = matches!(self.nodes[i], CotreeNode::Join(_));
                let mut prefix = Vec::with_capacity(ch.len());
                let mut acc = fam[ch[0]];
                prefix.push(acc);
                for &c in &ch[1..] {
                    acc = acc.combine(fam[c], disjoint);
                    prefix.push(acc);
                }
                // Peel children off right to left.
                let mut want = target;
                for k in (1..ch.len()).rev() {
                    let (s_child, s_rest) = fam[ch[k]]
                        .sets()
                        .flat_map(|a| prefix[k - 1].sets().map(move |b| (a, b)))
                        .find(|&(a, b)| (!disjoint || a.intersect(b).is_empty()) && a.union(b) == want)
                        .expect("prefix family certifies target");
                    self.assign(ch[k], s_child, fam, palettes, out);
                    want = s_rest;
                }
                self.assign(ch[0], want, fam, palettes, out);
            }
        }
    }

    /// Properness check read off the tree: under every Join, children use
    /// pairwise disjoint color sets.
    fn coloring_is_proper(&self, coloring: &BTreeMap<VertexId, Color>) -> bool {
        fn used(t: &Cotree, i: usize, col: &BTreeMap<VertexId, Color>, ok: &mut bool) -> Palette {
            match &t.nodes[i] {
                CotreeNode::Leaf(v) => col.get(v).map_or(Palette::EMPTY, |&c| Palette::single(c)),
                CotreeNode::Union(ch) => ch.iter().fold(Palette::EMPTY, |a, &c| a.union(used(t, c, col, ok))),
                CotreeNode::Join(ch) => {
                    let mut acc = Palette::EMPTY;
                    for &c in ch {
                        let s = used(t, c, col, ok);
                        if !acc.intersect(s).is_empty() {
                            *ok = false;
                        }
                        acc = acc.union(s);
                    }
                    acc
                }
            }
        }
        let mut ok = true;
        if let Some(r) = self.root {
            used(self, r, coloring, &mut ok);
        }
        ok
    }
}

fn fold<I: Iterator<Item = ColorSetFamily>>(mut it: I, disjoint: bool) -> ColorSetFamily {
    let first = it.next().unwrap_or_default();
    it.fold(first, |acc, f| acc.combine(f, disjoint))
}

/// Cotree of `g`, or an induced P4.
pub fn recognize(g: &Graph) -> Result<Cotree, PatternWitness> {
    recognize_within(g, &g.vertex_set())
}

/// Cotree of `g[within]`, or an induced P4 inside `within`.
pub fn recognize_within(g: &Graph, within: &VertexSet) -> Result<Cotree, PatternWitness> {
    let mut t = Cotree {
        nodes: Vec::new(),
        root: None,
    };
    if !within.is_empty() {
        let r = build(g, within, &mut t.nodes)?;
        t.root = Some(r);
    }
    Ok(t)
}

fn build(g: &Graph, s: &VertexSet, nodes: &mut Vec<CotreeNode>) -> Result<usize, PatternWitness> {
    let id = nodes.len();
    if s.len() == 1 {
        nodes.push(CotreeNode::Leaf(*s.first().unwrap()));
        return Ok(id);
    }
    nodes.push(CotreeNode::Leaf(VertexId(u32::MAX)));
    let comps = g.components_within(s);
    let (parts, is_join) = if comps.len() > 1 {
        (comps, false)
    } else {
        let co = co_components(g, s);
        if co.len() == 1 {
            nodes.truncate(id);
            return Err(pattern::find_induced_p4(g, s)
                .expect("connected, co-connected graph on two or more vertices has an induced P4"));
        }
        (co, true)
    };
    let mut children = Vec::with_capacity(parts.len());
    for p in &parts {
        children.push(build(g, p, nodes)?);
    }
    nodes[id] = if is_join {
        CotreeNode::Join(children)
    } else {
        CotreeNode::Union(children)
    };
    Ok(id)
}

/// Connected components of the complement of `g[s]`, ordered by smallest vertex.
fn co_components(g: &Graph, s: &VertexSet) -> Vec<VertexSet> {
    let mut unvisited = s.clone();
    let mut out = Vec::new();
    while let Some(start) = unvisited.pop_first() {
        let mut comp = VertexSet::from([start]);
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            let next: Vec<VertexId> = unvisited.iter().copied().filter(|&y| !g.has_edge(x, y)).collect();
            for y in next {
                unvisited.remove(&y);
                comp.insert(y);
                stack.push(y);
            }
        }
        out.push(comp);
    }
    out
}

/// Exact family of achievable color sets at the root.
pub fn feasible_color_sets<P: Fn(VertexId) -> Palette>(t: &Cotree, palettes: P) -> ColorSetFamily {
    match t.root {
        None => ColorSetFamily(1),
        Some(r) => t.families(&palettes)[r],
    }
}

/// A proper coloring of the cotree's graph from the given palettes, if any.
pub fn list3color<P: Fn(VertexId) -> Palette>(t: &Cotree, palettes: P) -> Option<BTreeMap<VertexId, Color>> {
    let Some(root) = t.root else {
        return Some(BTreeMap::new());
    };
    let fam = t.families(&palettes);
    let target = fam[root].sets().next()?;
    let mut out = BTreeMap::new();
    t.assign(root, target, &fam, &palettes, &mut out);
    let ok = out.len() == t.leaves().len()
        && out.iter().all(|(v, c)| palettes(*v).contains(*c))
        && t.coloring_is_proper(&out);
    assert!(ok, "cotree coloring failed verification");
    Some(out)
}

/// Recognize and color `g[within]` in one go.
pub fn list3color_within<P: Fn(VertexId) -> Palette>(
    g: &Graph,
    within: &VertexSet,
    palettes: P,
) -> Result<Option<BTreeMap<VertexId, Color>>, PatternWitness> {
    let t = recognize_within(g, within)?;
    Ok(list3color(&t, palettes))
}
