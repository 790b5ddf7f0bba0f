//! 2-SAT via implication-graph SCCs, and encoders from two-color palettes.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::color::{Color, Palette};
use crate::graph::{Graph, VertexId, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit {
    pub var: usize,
    pub positive: bool,
}

impl Lit {
    pub fn pos(var: usize) -> Lit {
        Lit { var, positive: true }
    }

    pub fn neg(var: usize) -> Lit {
        Lit { var, positive: false }
    }

    pub fn negate(self) -> Lit {
        Lit {
            var: self.var,
            positive: !self.positive,
        }
    }

    fn node(self) -> usize {
        2 * self.var + usize::from(!self.positive)
    }

    pub fn eval(self, assignment: &[bool]) -> bool {
        assignment[self.var] == self.positive
    }
}

pub type Clause = (Lit, Lit);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TwoSatError {
    #[error("vertex {0:?} has palette {1:?}, expected exactly two colors")]
    PaletteSize(VertexId, Palette),
    #[error("vertex {0:?} has no variable")]
    Unmapped(VertexId),
    #[error("vertex {0:?} appears in more than one of X0, X1, X2")]
    Overlap(VertexId),
    #[error("clause mentions variable {0} but the formula has {1}")]
    VariableOutOfRange(usize, usize),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TwoSatFormula {
    variable_count: usize,
    clauses: Vec<Clause>,
}

impl TwoSatFormula {
    pub fn new(variable_count: usize) -> Self {
        TwoSatFormula {
            variable_count,
            clauses: Vec::new(),
        }
    }

    pub fn variable_count(&self) -> usize {
        self.variable_count
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn new_var(&mut self) -> usize {
        self.variable_count += 1;
        self.variable_count - 1
    }

    pub fn add_clause(&mut self, a: Lit, b: Lit) -> Result<(), TwoSatError> {
        for l in [a, b] {
            if l.var >= self.variable_count {
                return Err(TwoSatError::VariableOutOfRange(l.var, self.variable_count));
            }
        }
        self.clauses.push((a, b));
        Ok(())
    }

    pub fn extend_clauses<I: IntoIterator<Item = Clause>>(&mut self, clauses: I) -> Result<(), TwoSatError> {
        for (a, b) in clauses {
            self.add_clause(a, b)?;
        }
        Ok(())
    }

    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        assignment.len() == self.variable_count && self.clauses.iter().all(|(a, b)| a.eval(assignment) || b.eval(assignment))
    }

    pub fn to_dimacs_cnf(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.variable_count, self.clauses.len());
        let lit = |l: Lit| {
            let v = l.var as i64 + 1;
            if l.positive {
                v
            } else {
                -v
            }
        };
        for &(a, b) in &self.clauses {
            let _ = writeln!(s, "{} {} 0", lit(a), lit(b));
        }
        s
    }

    /// A satisfying assignment, or `None`.
    pub fn solve(&self) -> Option<Vec<bool>> {
        let n = 2 * self.variable_count;
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &self.clauses {
            adj[a.negate().node()].push(b.node());
            adj[b.negate().node()].push(a.node());
        }
        let comp = tarjan(&adj);
        let mut out = Vec::with_capacity(self.variable_count);
        for v in 0..self.variable_count {
            let (p, q) = (comp[2 * v], comp[2 * v + 1]);
            if p == q {
                return None;
            }
            // Tarjan numbers sink components first.
            out.push(p < q);
        }
        assert!(self.is_satisfied_by(&out), "2-SAT model failed verification");
        Some(out)
    }
}

/// Iterative Tarjan; component ids are assigned in completion order.
fn tarjan(adj: &[Vec<usize>]) -> Vec<usize> {
    const UNSEEN: usize = usize::MAX;
    let n = adj.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSEEN; n];
    let mut stack = Vec::new();
    let mut call: Vec<(usize, usize)> = Vec::new();
    let mut counter = 0;
    let mut ncomp = 0;
    for s in 0..n {
        if index[s] != UNSEEN {
            continue;
        }
        call.push((s, 0));
        index[s] = counter;
        low[s] = counter;
        counter += 1;
        stack.push(s);
        on_stack[s] = true;
        while let Some(&(v, i)) = call.last() {
            if i < adj[v].len() {
                let w = adj[v][i];
                call.last_mut().unwrap().1 += 1;
                if index[w] == UNSEEN {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().unwrap();
                    on_stack[w] = false;
                    comp[w] = ncomp;
                    if w == v {
                        break;
                    }
                }
                ncomp += 1;
            }
        }
    }
    comp
}

/// One variable per two-color vertex; true means the smaller color.
#[derive(Clone, Debug, Default)]
pub struct ColorVarMap {
    var_of: BTreeMap<VertexId, usize>,
    entries: Vec<(VertexId, Palette)>,
}

impl ColorVarMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn var(&self, v: VertexId) -> Option<usize> {
        self.var_of.get(&v).copied()
    }

    pub fn palette(&self, v: VertexId) -> Option<Palette> {
        self.var(v).map(|i| self.entries[i].1)
    }

    /// Variable of `v`, creating it (and growing `f`) if needed.
    pub fn ensure(&mut self, v: VertexId, p: Palette, f: &mut TwoSatFormula) -> Result<usize, TwoSatError> {
        if p.len() != 2 {
            return Err(TwoSatError::PaletteSize(v, p));
        }
        if let Some(i) = self.var(v) {
            return Ok(i);
        }
        let i = f.new_var();
        debug_assert_eq!(i, self.entries.len(), "formula and map must grow together");
        self.var_of.insert(v, i);
        self.entries.push((v, p));
        Ok(i)
    }

    /// Literal that holds iff `v` takes color `c`; `None` if `c` is not in its palette.
    pub fn lit_for(&self, v: VertexId, c: Color) -> Option<Lit> {
        let i = self.var(v)?;
        let p = self.entries[i].1;
        if !p.contains(c) {
            return None;
        }
        Some(if Some(c) == p.min() { Lit::pos(i) } else { Lit::neg(i) })
    }

    pub fn decode(&self, assignment: &[bool]) -> BTreeMap<VertexId, Color> {
        self.entries
            .iter()
            .enumerate()
            .map(|(i, &(v, p))| (v, if assignment[i] { p.min() } else { p.max() }.unwrap()))
            .collect()
    }
}

/// Adds the clauses for all edges of `g[s]` to `f`, mapping every vertex of
/// `s`. Palettes must have exactly two colors.
pub fn encode_edges_into<P: Fn(VertexId) -> Palette>(
    g: &Graph,
    s: &VertexSet,
    palettes: &P,
    f: &mut TwoSatFormula,
    vars: &mut ColorVarMap,
) -> Result<(), TwoSatError> {
    for &v in s {
        vars.ensure(v, palettes(v), f)?;
    }
    for &u in s {
        for v in g.neighbors(u).filter(|&v| v > u && s.contains(&v)) {
            for c in palettes(u).intersect(palettes(v)).iter() {
                let a = vars.lit_for(u, c).unwrap().negate();
                let b = vars.lit_for(v, c).unwrap().negate();
                f.add_clause(a, b)?;
            }
        }
    }
    Ok(())
}

/// Formula satisfiable iff `g[s]` is colorable from its two-color palettes.
pub fn encode_two_palette_subgraph<P: Fn(VertexId) -> Palette>(
    g: &Graph,
    s: &VertexSet,
    palettes: P,
) -> Result<(TwoSatFormula, ColorVarMap), TwoSatError> {
    let mut f = TwoSatFormula::new(0);
    let mut vars = ColorVarMap::new();
    encode_edges_into(g, s, &palettes, &mut f, &mut vars)?;
    Ok((f, vars))
}

/// Clauses tying a set `R = X0 ∪ X1 ∪ X2` of two-color vertices together:
/// an X1 vertex at the smaller color pulls all of R to the smaller color, an
/// X2 vertex at the larger color pulls all of R to the larger color, and X1
/// and X2 are each uniformly colored.
pub fn encode_rx_constraints(
    x1: &VertexSet,
    x2: &VertexSet,
    x0: &VertexSet,
    vars: &ColorVarMap,
) -> Result<Vec<Clause>, TwoSatError> {
    let mut seen = VertexSet::new();
    for &v in x1.iter().chain(x2).chain(x0) {
        if !seen.insert(v) {
            return Err(TwoSatError::Overlap(v));
        }
    }
    let var = |v: VertexId| vars.var(v).ok_or(TwoSatError::Unmapped(v));
    let all: Vec<usize> = seen.iter().map(|&v| var(v)).collect::<Result<_, _>>()?;
    let mut out = Vec::new();
    for &a in x1 {
        let a = var(a)?;
        out.extend(all.iter().filter(|&&r| r != a).map(|&r| (Lit::neg(a), Lit::pos(r))));
    }
    for &a in x2 {
        let a = var(a)?;
        out.extend(all.iter().filter(|&&r| r != a).map(|&r| (Lit::pos(a), Lit::neg(r))));
    }
    for set in [x1, x2] {
        let ids: Vec<usize> = set.iter().map(|&v| var(v)).collect::<Result<_, _>>()?;
        for w in ids.windows(2) {
            out.push((Lit::neg(w[0]), Lit::pos(w[1])));
            out.push((Lit::pos(w[0]), Lit::neg(w[1])));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pal(cs: &[u8]) -> Palette {
        cs.iter().map(|&c| Color::new(c).unwrap()).collect()
    }

    #[test]
    fn contradiction() {
        let mut f = TwoSatFormula::new(1);
        f.add_clause(Lit::pos(0), Lit::pos(0)).unwrap();
        f.add_clause(Lit::neg(0), Lit::neg(0)).unwrap();
        assert!(f.solve().is_none());
    }

    #[test]
    fn empty_formula() {
        let f = TwoSatFormula::new(3);
        assert_eq!(f.solve().unwrap().len(), 3);
    }

    #[test]
    fn forced_y() {
        let mut f = TwoSatFormula::new(2);
        f.add_clause(Lit::pos(0), Lit::pos(1)).unwrap();
        f.add_clause(Lit::neg(0), Lit::pos(1)).unwrap();
        assert!(f.solve().unwrap()[1]);
    }

    #[test]
    fn out_of_range_clause() {
        let mut f = TwoSatFormula::new(1);
        assert_eq!(f.add_clause(Lit::pos(0), Lit::pos(1)), Err(TwoSatError::VariableOutOfRange(1, 1)));
    }

    #[test]
    fn palette_encodings() {
        let p = pal(&[1, 2]);
        let edge = Graph::from_edges(2, &[(0, 1)]);
        let (f, vars) = encode_two_palette_subgraph(&edge, &edge.vertex_set(), |_| p).unwrap();
        let col = vars.decode(&f.solve().unwrap());
        assert_ne!(col[&VertexId(0)], col[&VertexId(1)]);

        let k3 = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]);
        let (f, _) = encode_two_palette_subgraph(&k3, &k3.vertex_set(), |_| p).unwrap();
        assert!(f.solve().is_none());

        let p3 = Graph::from_edges(3, &[(0, 1), (1, 2)]);
        let (f, vars) = encode_two_palette_subgraph(&p3, &p3.vertex_set(), |_| p).unwrap();
        let col = vars.decode(&f.solve().unwrap());
        assert_eq!(col[&VertexId(0)], col[&VertexId(2)]);

        let bad = encode_two_palette_subgraph(&p3, &p3.vertex_set(), |_| Palette::FULL);
        assert!(matches!(bad, Err(TwoSatError::PaletteSize(..))));
    }

    fn allowed(x1: &[u32], x2: &[u32], x0: &[u32]) -> Vec<Vec<bool>> {
        let set = |xs: &[u32]| xs.iter().map(|&i| VertexId(i)).collect::<VertexSet>();
        let n = x1.len() + x2.len() + x0.len();
        let mut f = TwoSatFormula::new(0);
        let mut vars = ColorVarMap::new();
        for i in 0..n as u32 {
            vars.ensure(VertexId(i), pal(&[1, 2]), &mut f).unwrap();
        }
        let cl = encode_rx_constraints(&set(x1), &set(x2), &set(x0), &vars).unwrap();
        f.extend_clauses(cl).unwrap();
        (0..1u32 << n)
            .map(|m| (0..n).map(|i| m & (1 << i) != 0).collect::<Vec<_>>())
            .filter(|a| f.is_satisfied_by(a))
            .collect()
    }

    #[test]
    fn rx_constraint_examples() {
        // true = color 1; vertex 0 in X1, vertex 1 in X2.
        let mut got = allowed(&[0], &[1], &[]);
        got.sort();
        let mut want = vec![vec![true, true], vec![false, false], vec![false, true]];
        want.sort();
        assert_eq!(got, want);
        assert_eq!(allowed(&[], &[], &[0, 1]).len(), 4);
        let mut got = allowed(&[0, 1], &[], &[]);
        got.sort();
        assert_eq!(got, vec![vec![false, false], vec![true, true]]);
    }

    #[test]
    fn rx_overlap_rejected() {
        let mut f = TwoSatFormula::new(0);
        let mut vars = ColorVarMap::new();
        vars.ensure(VertexId(0), pal(&[1, 2]), &mut f).unwrap();
        let s = VertexSet::from([VertexId(0)]);
        assert_eq!(
            encode_rx_constraints(&s, &s, &VertexSet::new(), &vars),
            Err(TwoSatError::Overlap(VertexId(0)))
        );
    }
}
