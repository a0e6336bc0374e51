use std::collections::VecDeque;

use super::{Covering, CoveringError};
use crate::graph::{same_graph, Dart, GraphError, GraphMorphism, Vertex};

/// Order in which the lifting search visits the source graph.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TraversalOrder {
    /// Breadth first, darts at each vertex in index order.
    #[default]
    BreadthFirst,
    /// Depth first, darts at each vertex in reverse index order.
    DepthFirstReversed,
}

/// A closed path at the source base point whose image does not lift to a
/// closed path at the target base point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftObstruction {
    pub loop_path: Vec<Dart>,
    /// End point of the lifted image path; differs from the base point.
    pub lifted_end: Vertex,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Lift {
    Map(GraphMorphism),
    Obstructed(LiftObstruction),
}

impl Lift {
    pub fn map(&self) -> Option<&GraphMorphism> {
        match self {
            Lift::Map(m) => Some(m),
            Lift::Obstructed(_) => None,
        }
    }

    pub fn into_map(self) -> Option<GraphMorphism> {
        match self {
            Lift::Map(m) => Some(m),
            Lift::Obstructed(_) => None,
        }
    }

    pub fn is_lifted(&self) -> bool {
        matches!(self, Lift::Map(_))
    }
}

/// Lifts `g: Σ → Δ` through the covering `c: Γ → Δ` with `base_c ↦ base_a`.
pub fn lift(g: &GraphMorphism, c: &Covering, base_c: Vertex, base_a: Vertex) -> Result<Lift, CoveringError> {
    lift_with_order(g, c, base_c, base_a, TraversalOrder::BreadthFirst)
}

pub fn lift_with_order(
    g: &GraphMorphism,
    c: &Covering,
    base_c: Vertex,
    base_a: Vertex,
    order: TraversalOrder,
) -> Result<Lift, CoveringError> {
    let sigma = g.domain();
    let gamma = c.domain();
    if !same_graph(g.codomain(), c.codomain()) {
        return Err(GraphError::GraphMismatch("the map and the covering have different targets".into()).into());
    }
    if base_c.0 >= sigma.vertex_count() {
        return Err(GraphError::VertexOutOfRange(base_c.0).into());
    }
    if base_a.0 >= gamma.vertex_count() {
        return Err(GraphError::VertexOutOfRange(base_a.0).into());
    }
    if g.vertex(base_c) != c.map().vertex(base_a) {
        return Err(CoveringError::BasepointMismatch(format!(
            "`{}` and `{}` have different images",
            sigma.vertex_id(base_c),
            gamma.vertex_id(base_a)
        )));
    }
    if !sigma.is_connected() {
        return Err(CoveringError::Disconnected("source"));
    }

    let mut vmap: Vec<Option<Vertex>> = vec![None; sigma.vertex_count()];
    let mut dmap: Vec<Option<Dart>> = vec![None; sigma.dart_count()];
    let mut parent: Vec<Option<Dart>> = vec![None; sigma.vertex_count()];
    vmap[base_c.0] = Some(base_a);
    let mut queue = VecDeque::from([base_c]);
    while let Some(v) = match order {
        TraversalOrder::BreadthFirst => queue.pop_front(),
        TraversalOrder::DepthFirstReversed => queue.pop_back(),
    } {
        let at = vmap[v.0].expect("queued vertices are assigned");
        let star = sigma.star(v);
        let darts: Box<dyn Iterator<Item = &Dart>> = match order {
            TraversalOrder::BreadthFirst => Box::new(star.iter()),
            TraversalOrder::DepthFirstReversed => Box::new(star.iter().rev()),
        };
        for &d in darts {
            let up = c
                .lift_dart(at, g.dart(d))
                .ok_or_else(|| CoveringError::Internal("star of a covering lacks a lift".into()))?;
            let w = sigma.dst(d);
            let end = gamma.dst(up);
            match vmap[w.0] {
                None => {
                    vmap[w.0] = Some(end);
                    parent[w.0] = Some(d);
                    queue.push_back(w);
                }
                Some(assigned) if assigned != end => {
                    let mut loop_path = tree_path(sigma.as_ref(), &parent, v);
                    loop_path.push(d);
                    loop_path.extend(
                        tree_path(sigma.as_ref(), &parent, w)
                            .into_iter()
                            .rev()
                            .map(Dart::inv),
                    );
                    let lifted_end = c
                        .lift_endpoint(base_a, &g.map_path(&loop_path))
                        .ok_or_else(|| CoveringError::Internal("image path failed to lift".into()))?;
                    return Ok(Lift::Obstructed(LiftObstruction { loop_path, lifted_end }));
                }
                Some(_) => {}
            }
            dmap[d.0] = Some(up);
        }
    }

    let vmap = vmap.into_iter().map(|v| v.expect("source is connected")).collect();
    let dmap = dmap.into_iter().map(|d| d.expect("every star was visited")).collect();
    let h = GraphMorphism::new(sigma.clone(), gamma.clone(), vmap, dmap)?;
    Ok(Lift::Map(h))
}

/// The tree path from the search root to `v`.
fn tree_path(g: &crate::graph::FiniteGraph, parent: &[Option<Dart>], v: Vertex) -> Vec<Dart> {
    let mut path = Vec::new();
    let mut at = v;
    while let Some(d) = parent[at.0] {
        path.push(d);
        at = g.src(d);
    }
    path.reverse();
    path
}
