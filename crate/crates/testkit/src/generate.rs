//! Seeded instance generators.
//!
//! Every case draws from `ChaCha8Rng::seed_from_u64(mix(seed, index))`, so a
//! single case can be reproduced without replaying the batch.

use hered3_core::pattern;
use hered3_core::{Graph, VertexId};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Fixed catalog graphs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Named {
    Petersen,
    K4,
    CoC7,
    C5,
    C7,
    C9,
}

/// Small fixed shapes around an induced C7 that drive the C7 pipeline into
/// a particular stage, rotated and reflected at random and then decorated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Directed {
    /// Branches on the neighborhood of a widest top vertex.
    RiBranch,
    /// Branches on a pair of relevant vertices with a shared top component.
    SPair,
    /// Cuts a relevant vertex whose top component is reached through one
    /// vertex only.
    SingleCut,
}

impl Directed {
    pub const ALL: [Directed; 3] = [Directed::RiBranch, Directed::SPair, Directed::SingleCut];

    /// Extra (non-core) vertices and edges of the template; core vertices
    /// are `0..7`, extra ones start at 7.
    fn template(self) -> (usize, &'static [(u32, u32)]) {
        match self {
            Directed::RiBranch => (
                6,
                &[(0, 7), (3, 9), (5, 7), (5, 8), (8, 10), (8, 11), (8, 12), (9, 10), (9, 11), (9, 12), (11, 12)],
            ),
            Directed::SPair => (
                5,
                &[(0, 8), (1, 7), (3, 7), (3, 9), (5, 8), (5, 9), (7, 10), (8, 11), (9, 10), (9, 11), (10, 11)],
            ),
            Directed::SingleCut => (5, &[(4, 7), (6, 7), (0, 8), (2, 8), (9, 10), (9, 11), (10, 11), (7, 9), (7, 10), (8, 11)]),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    ErdosRenyi { n: usize, p: f64 },
    /// An induced C7 plus `extra` vertices, added one at a time. Each new
    /// vertex sees no core vertex, one, or two at distance two on the cycle,
    /// and each earlier extra vertex with probability `p`; a draw that
    /// leaves the class is redrawn. With `directed`, growth starts from that
    /// template.
    C7Gadget { extra: usize, p: f64, directed: Option<Directed> },
    /// Same for an induced C9.
    C9Gadget { extra: usize, p: f64 },
    /// A C7 whose first vertex is joined to a triangle-free cograph blob, for
    /// `n` vertices in total. In the class by construction.
    CographComposite { n: usize },
    Named(Named),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub seed: u64,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenerateError {
    #[error("invalid generator parameters: {0}")]
    Invalid(String),
}

/// A generated graph and how the class filter fared while growing it.
#[derive(Clone, Debug)]
pub struct Generated {
    pub graph: Graph,
    /// Candidate vertices checked against the class.
    pub checks: u32,
    /// Candidates that kept the graph in the class.
    pub passes: u32,
}

impl Generated {
    /// Fraction of candidates accepted; 1 when nothing was filtered.
    pub fn pass_rate(&self) -> f64 {
        if self.checks == 0 {
            1.0
        } else {
            self.passes as f64 / self.checks as f64
        }
    }
}

/// Draws per added vertex before falling back to an isolated vertex.
pub const TRIES_PER_VERTEX: u32 = 40;

/// SplitMix64 finalizer of `seed` combined with `index`.
pub fn mix(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(0x6A09_E667_F3BC_C909);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-case generator stream.
pub fn case_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix(seed, index))
}

/// `count` specs of one kind with split seeds.
pub fn batch(kind: &GeneratorKind, seed: u64, count: usize) -> Vec<GeneratorSpec> {
    (0..count as u64)
        .map(|i| GeneratorSpec {
            kind: kind.clone(),
            seed: mix(seed, i),
        })
        .collect()
}

pub fn generate(spec: &GeneratorSpec) -> Result<Graph, GenerateError> {
    generate_counted(spec).map(|g| g.graph)
}

pub fn generate_counted(spec: &GeneratorSpec) -> Result<Generated, GenerateError> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let once = |graph| Ok(Generated { graph, checks: 0, passes: 0 });
    match spec.kind {
        GeneratorKind::ErdosRenyi { n, p } => {
            check_p(p)?;
            once(erdos_renyi(&mut rng, n, p))
        }
        GeneratorKind::C7Gadget { extra, p, directed } => {
            check_p(p)?;
            let start = match directed {
                None => cycle(7),
                Some(d) => {
                    let (base, _) = d.template();
                    if extra < base {
                        return Err(GenerateError::Invalid(format!("{d:?} needs at least {base} extra vertices")));
                    }
                    directed_template(&mut rng, d)
                }
            };
            let add = 7 + extra - start.vertex_count();
            Ok(grow(&mut rng, start, 7, add, p))
        }
        GeneratorKind::C9Gadget { extra, p } => {
            check_p(p)?;
            Ok(grow(&mut rng, cycle(9), 9, extra, p))
        }
        GeneratorKind::CographComposite { n } => {
            if n < 8 {
                return Err(GenerateError::Invalid(format!("cograph composite needs n >= 8, got {n}")));
            }
            once(cograph_composite(&mut rng, n))
        }
        GeneratorKind::Named(name) => once(named(name)),
    }
}

fn check_p(p: f64) -> Result<(), GenerateError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(GenerateError::Invalid(format!("edge probability {p} outside [0, 1]")))
    }
}

pub fn erdos_renyi(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let mut g = Graph::with_vertices(n);
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            if rng.gen_bool(p) {
                g.add_edge(VertexId(u), VertexId(v)).unwrap();
            }
        }
    }
    g
}

pub fn cycle(n: usize) -> Graph {
    let edges: Vec<(u32, u32)> = (0..n as u32).map(|i| (i, (i + 1) % n as u32)).collect();
    Graph::from_edges(n, &edges)
}

fn add(g: &mut Graph, u: usize, v: usize) {
    g.add_edge(VertexId(u as u32), VertexId(v as u32)).unwrap();
}

/// Core neighbors for an extra vertex: none, one, or a pair at distance two.
/// A C9 with a pendant always holds a 2P4, so C9 cores get no single anchors.
fn random_anchor(rng: &mut impl Rng, k: usize) -> Vec<usize> {
    let i = rng.gen_range(0..k);
    match rng.gen_range(0..10) {
        0..=1 => vec![],
        2..=4 if k < 9 => vec![i],
        _ => vec![i, (i + 2) % k],
    }
}

/// Core positions seen by `v`.
fn anchor_of(g: &Graph, k: usize, v: usize) -> Vec<usize> {
    g.neighbors(VertexId(v as u32)).map(|u| u.index()).filter(|&u| u < k).collect()
}

/// Extra vertices may only be joined when one anchor contains the other;
/// other joins nearly always close a C5 through the core.
fn compatible(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|i| b.contains(i)) || b.iter().all(|i| a.contains(i))
}

/// Adds `extra` vertices to `g` (whose vertices `0..k` are the core), each
/// redrawn until the graph stays in the class.
fn grow(rng: &mut impl Rng, mut g: Graph, k: usize, extra: usize, p: f64) -> Generated {
    let (mut checks, mut passes) = (0, 0);
    for _ in 0..extra {
        let x = g.id_bound();
        let mut placed = false;
        for _ in 0..TRIES_PER_VERTEX {
            let mut h = g.clone();
            h.add_vertex();
            let anchor = random_anchor(rng, k);
            for &a in &anchor {
                add(&mut h, x, a);
            }
            for y in k..x {
                if compatible(&anchor, &anchor_of(&g, k, y)) && rng.gen_bool(p) {
                    add(&mut h, x, y);
                }
            }
            checks += 1;
            if pattern::check_class(&h).is_none() {
                passes += 1;
                g = h;
                placed = true;
                break;
            }
        }
        if !placed {
            g.add_vertex();
        }
    }
    Generated { graph: g, checks, passes }
}

/// The template of `d` with the core rotated and possibly reflected.
fn directed_template(rng: &mut impl Rng, d: Directed) -> Graph {
    let (base, edges) = d.template();
    let r = rng.gen_range(0..7u32);
    let s = if rng.gen_bool(0.5) { 1 } else { 6 };
    let map = |v: u32| if v < 7 { (s * v + r) % 7 } else { v };
    let mut g = cycle(7);
    for _ in 0..base {
        g.add_vertex();
    }
    for &(u, v) in edges {
        g.add_edge(VertexId(map(u)), VertexId(map(v))).unwrap();
    }
    g
}

/// A random cograph on `n` vertices: vertices are split into random parts,
/// each built recursively, and the parts are joined or left apart.
pub fn random_cograph(rng: &mut impl Rng, n: usize) -> Graph {
    fn build(rng: &mut dyn rand::RngCore, g: &mut Graph, vs: &[usize]) {
        if vs.len() < 2 {
            return;
        }
        let parts = rng.gen_range(2..=vs.len().min(3));
        let mut cuts: Vec<usize> = (1..vs.len()).collect();
        cuts.shuffle(rng);
        let mut cuts: Vec<usize> = cuts[..parts - 1].to_vec();
        cuts.sort_unstable();
        let mut pieces = Vec::new();
        let mut from = 0;
        for c in cuts.into_iter().chain([vs.len()]) {
            pieces.push(&vs[from..c]);
            from = c;
        }
        for p in &pieces {
            build(rng, g, p);
        }
        if rng.gen_bool(0.5) {
            for (i, a) in pieces.iter().enumerate() {
                for b in &pieces[i + 1..] {
                    for &u in a.iter() {
                        for &v in b.iter() {
                            add(g, u, v);
                        }
                    }
                }
            }
        }
    }
    let mut g = Graph::with_vertices(n);
    let mut vs: Vec<usize> = (0..n).collect();
    vs.shuffle(rng);
    build(rng, &mut g, &vs);
    g
}

/// C7 on vertices `0..7` with vertex 0 joined to a disjoint union of
/// complete bipartite graphs and isolated vertices on the other `n - 7`.
pub fn cograph_composite(rng: &mut impl Rng, n: usize) -> Graph {
    let mut g = cycle(7);
    for _ in 7..n {
        g.add_vertex();
    }
    let mut blob: Vec<usize> = (7..n).collect();
    blob.shuffle(rng);
    let mut rest = &blob[..];
    while !rest.is_empty() {
        let take = rng.gen_range(1..=rest.len().min(12));
        let (part, tail) = rest.split_at(take);
        rest = tail;
        let split = rng.gen_range(0..=part.len() / 2);
        for &a in &part[..split] {
            for &b in &part[split..] {
                add(&mut g, a, b);
            }
        }
    }
    for v in 7..n {
        add(&mut g, 0, v);
    }
    g
}

pub fn named(name: Named) -> Graph {
    match name {
        Named::Petersen => {
            let mut e: Vec<(u32, u32)> = Vec::new();
            for i in 0..5 {
                e.push((i, (i + 1) % 5));
                e.push((i, i + 5));
                e.push((5 + i, 5 + (i + 2) % 5));
            }
            Graph::from_edges(10, &e)
        }
        Named::K4 => Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]),
        Named::CoC7 => {
            let mut e = Vec::new();
            for i in 0..7u32 {
                for j in i + 1..7 {
                    if (j - i) % 7 != 1 && (j - i) % 7 != 6 {
                        e.push((i, j));
                    }
                }
            }
            Graph::from_edges(7, &e)
        }
        Named::C5 => cycle(5),
        Named::C7 => cycle(7),
        Named::C9 => cycle(9),
    }
}

/// `g` with vertex `v` renamed to `perm[v]`.
pub fn relabel(g: &Graph, perm: &[u32]) -> Graph {
    let edges: Vec<(u32, u32)> = g.edges().map(|(u, v)| (perm[u.index()], perm[v.index()])).collect();
    Graph::from_edges(g.id_bound(), &edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_reproduce() {
        let spec = GeneratorSpec {
            kind: GeneratorKind::ErdosRenyi { n: 10, p: 0.3 },
            seed: 7,
        };
        assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
        let other = GeneratorSpec { seed: 8, ..spec.clone() };
        assert_ne!(generate(&spec).unwrap(), generate(&other).unwrap());
    }

    #[test]
    fn petersen_shape() {
        let g = named(Named::Petersen);
        assert_eq!((g.vertex_count(), g.edge_count()), (10, 15));
        assert!(g.vertices().all(|v| g.degree(v) == 3));
    }

    #[test]
    fn cographs_have_no_p4() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..10 {
            let g = random_cograph(&mut rng, n);
            assert!(pattern::find_induced_p4(&g, &g.vertex_set()).is_none());
        }
    }

    #[test]
    fn gadgets_keep_their_cycle() {
        for d in [None, Some(Directed::RiBranch), Some(Directed::SPair), Some(Directed::SingleCut)] {
            for spec in batch(&GeneratorKind::C7Gadget { extra: 9, p: 0.3, directed: d }, 2, 20) {
                let g = generate(&spec).unwrap();
                assert!(pattern::check_class(&g).is_none());
                assert!(pattern::find_induced_cycle(&g, 7).unwrap().is_some());
            }
        }
        let short = GeneratorSpec {
            kind: GeneratorKind::C7Gadget { extra: 2, p: 0.3, directed: Some(Directed::SPair) },
            seed: 0,
        };
        assert!(matches!(generate(&short), Err(GenerateError::Invalid(_))));
    }

    #[test]
    fn mix_spreads() {
        assert_ne!(mix(1, 0), mix(1, 1));
        assert_ne!(mix(1, 0), mix(2, 0));
    }
}
