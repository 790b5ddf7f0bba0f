//! Backward replay of the reduction log.

use std::collections::BTreeMap;

use thiserror::Error;

use super::ReplayRecord;
use crate::cograph;
use crate::color::{Color, Palette};
use crate::exact::{exact_list_color, ExactOutcome};
use crate::graph::{Graph, VertexId, VertexSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReplayError {
    #[error("no free color for deleted vertex {0:?}")]
    NoFreeColor(VertexId),
    #[error("vertex {0:?} has no color when one is required")]
    MissingColor(VertexId),
    #[error("recorded region around {0:?} could not be re-colored")]
    Region(VertexId),
}

/// Extends a coloring of the reduced instance to every vertex the log
/// removed, undoing records newest first.
pub fn replay(log: &[ReplayRecord], mut coloring: BTreeMap<VertexId, Color>) -> Result<BTreeMap<VertexId, Color>, ReplayError> {
    for rec in log.iter().rev() {
        match rec {
            ReplayRecord::Colored { vertex, color } => {
                coloring.insert(*vertex, *color);
            }
            ReplayRecord::Deleted {
                vertex,
                palette,
                neighbors,
            } => {
                let mut free = *palette;
                for u in neighbors {
                    let c = coloring.get(u).ok_or(ReplayError::MissingColor(*u))?;
                    free = free.without(*c);
                }
                let c = free.min().ok_or(ReplayError::NoFreeColor(*vertex))?;
                coloring.insert(*vertex, c);
            }
            ReplayRecord::SolvedComponent { coloring: part } => {
                coloring.extend(part.iter().map(|(&v, &c)| (v, c)));
            }
            ReplayRecord::Region { vertices, edges } => {
                let solved = recolor_region(vertices, edges, &coloring)?;
                coloring.extend(solved);
            }
            ReplayRecord::Introduced { vertex } => {
                coloring.remove(vertex);
            }
            ReplayRecord::Collapse {
                x_new,
                y_new,
                x_members,
                y_members,
            } => {
                let cx = *coloring.get(x_new).ok_or(ReplayError::MissingColor(*x_new))?;
                let cy = *coloring.get(y_new).ok_or(ReplayError::MissingColor(*y_new))?;
                coloring.remove(x_new);
                coloring.remove(y_new);
                coloring.extend(x_members.iter().map(|&v| (v, cx)));
                coloring.extend(y_members.iter().map(|&v| (v, cy)));
            }
        }
    }
    Ok(coloring)
}

fn recolor_region(
    vertices: &[(VertexId, Palette)],
    edges: &[(VertexId, VertexId)],
    coloring: &BTreeMap<VertexId, Color>,
) -> Result<BTreeMap<VertexId, Color>, ReplayError> {
    let index: BTreeMap<VertexId, usize> = vertices.iter().enumerate().map(|(i, (v, _))| (*v, i)).collect();
    let mut avail: Vec<Palette> = vertices.iter().map(|(_, p)| *p).collect();
    let mut local = Graph::with_vertices(vertices.len());
    for &(a, b) in edges {
        match (index.get(&a), index.get(&b)) {
            (Some(&i), Some(&j)) => {
                local.add_edge(VertexId(i as u32), VertexId(j as u32)).expect("local ids");
            }
            (Some(&i), None) | (None, Some(&i)) => {
                let outside = if index.contains_key(&a) { b } else { a };
                let c = coloring.get(&outside).ok_or(ReplayError::MissingColor(outside))?;
                avail[i] = avail[i].without(*c);
            }
            (None, None) => {}
        }
    }
    let all: VertexSet = local.vertex_set();
    let pal = |v: VertexId| avail[v.index()];
    let solved = match cograph::list3color_within(&local, &all, pal) {
        Ok(found) => found,
        Err(_) => match exact_list_color(&local, &all, pal, None) {
            ExactOutcome::Colorable(col) => Some(col),
            _ => None,
        },
    };
    let first = vertices.first().map_or(VertexId(0), |(v, _)| *v);
    let solved = solved.ok_or(ReplayError::Region(first))?;
    Ok(solved.into_iter().map(|(i, c)| (vertices[i.index()].0, c)).collect())
}
