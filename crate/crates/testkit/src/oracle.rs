//! Ground truth: plain backtracking list-3-coloring and coloring counts.

use std::collections::BTreeMap;

use hered3_core::{Color, Graph, Palette, VertexId};

/// Graphs above this size are still solved, but slowly.
pub const SOFT_LIMIT: usize = 24;

/// A proper coloring of `g` from `palettes`, or `None`.
///
/// Vertices are taken in id order; after each choice the chosen color is
/// struck from later neighbors, and a neighbor left with one color is
/// assigned at once.
pub fn oracle_list3color<P: Fn(VertexId) -> Palette>(g: &Graph, palettes: P) -> Option<BTreeMap<VertexId, Color>> {
    let order: Vec<VertexId> = g.vertices().collect();
    let pos: BTreeMap<VertexId, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let nbrs: Vec<Vec<usize>> = order.iter().map(|&v| g.neighbors(v).map(|u| pos[&u]).collect()).collect();
    let avail: Vec<Palette> = order.iter().map(|&v| palettes(v)).collect();
    let mut color = vec![None; order.len()];
    if !search(&nbrs, avail, &mut color, 0) {
        return None;
    }
    Some(order.iter().zip(color).map(|(&v, c)| (v, c.unwrap())).collect())
}

/// Colors `v` and propagates forced neighbors. False on a conflict.
fn place(nbrs: &[Vec<usize>], avail: &mut [Palette], color: &mut [Option<Color>], v: usize, c: Color) -> bool {
    let mut queue = vec![(v, c)];
    while let Some((v, c)) = queue.pop() {
        match color[v] {
            Some(d) if d == c => continue,
            Some(_) => return false,
            None => {}
        }
        if !avail[v].contains(c) {
            return false;
        }
        color[v] = Some(c);
        avail[v] = Palette::single(c);
        for &u in &nbrs[v] {
            if color[u] == Some(c) {
                return false;
            }
            if color[u].is_none() && avail[u].contains(c) {
                avail[u] = avail[u].without(c);
                match avail[u].len() {
                    0 => return false,
                    1 => queue.push((u, avail[u].min().unwrap())),
                    _ => {}
                }
            }
        }
    }
    true
}

fn search(nbrs: &[Vec<usize>], avail: Vec<Palette>, color: &mut Vec<Option<Color>>, from: usize) -> bool {
    let Some(v) = (from..color.len()).find(|&i| color[i].is_none()) else {
        return true;
    };
    for c in avail[v].iter() {
        let mut a = avail.clone();
        let mut col = color.clone();
        if place(nbrs, &mut a, &mut col, v, c) && search(nbrs, a, &mut col, v + 1) {
            *color = col;
            return true;
        }
    }
    false
}

/// Whether `g` is 3-colorable.
pub fn oracle_3colorable(g: &Graph) -> bool {
    oracle_list3color(g, |_| Palette::FULL).is_some()
}

/// Number of proper 3-colorings of `g`.
pub fn count_proper_3colorings(g: &Graph) -> u64 {
    let order: Vec<VertexId> = g.vertices().collect();
    let pos: BTreeMap<VertexId, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let earlier: Vec<Vec<usize>> = order
        .iter()
        .enumerate()
        .map(|(i, &v)| g.neighbors(v).map(|u| pos[&u]).filter(|&j| j < i).collect())
        .collect();
    let mut color = vec![0u8; order.len()];
    fn count(i: usize, earlier: &[Vec<usize>], color: &mut [u8]) -> u64 {
        if i == color.len() {
            return 1;
        }
        let mut total = 0;
        for c in 1..=3 {
            if earlier[i].iter().all(|&j| color[j] != c) {
                color[i] = c;
                total += count(i + 1, earlier, color);
            }
        }
        total
    }
    count(0, &earlier, &mut color)
}

/// Checks that `col` properly colors every vertex of `g` within `palettes`.
pub fn is_proper<P: Fn(VertexId) -> Palette>(g: &Graph, palettes: P, col: &BTreeMap<VertexId, Color>) -> bool {
    g.vertices().all(|v| col.get(&v).is_some_and(|&c| palettes(v).contains(c)))
        && g.edges().all(|(u, v)| col[&u] != col[&v])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pal(cs: &[u8]) -> Palette {
        cs.iter().map(|&c| Color::new(c).unwrap()).collect()
    }

    #[test]
    fn fixed_examples() {
        let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert!(!oracle_3colorable(&k4));
        let c7 = Graph::from_edges(7, &(0..7).map(|i| (i, (i + 1) % 7)).collect::<Vec<_>>());
        let col = oracle_list3color(&c7, |_| Palette::FULL).unwrap();
        assert!(is_proper(&c7, |_| Palette::FULL, &col));
        let one = |v: VertexId| if v.0 <= 1 { pal(&[1]) } else { Palette::FULL };
        assert!(oracle_list3color(&c7, one).is_none());
    }

    #[test]
    fn counts() {
        let k3 = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(count_proper_3colorings(&k3), 6);
        assert_eq!(count_proper_3colorings(&Graph::with_vertices(2)), 9);
    }
}
