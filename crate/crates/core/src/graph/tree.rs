use std::collections::VecDeque;
use std::sync::Arc;

use super::{Dart, FiniteGraph, GraphError, Vertex};

/// A breadth-first spanning tree of a connected graph.
#[derive(Clone, Debug)]
pub struct SpanningTree {
    graph: Arc<FiniteGraph>,
    root: Vertex,
    /// Dart from each vertex one step toward the root; `None` at the root.
    parent: Vec<Option<Dart>>,
    in_tree: Vec<bool>,
    order: Vec<Vertex>,
}

/// Breadth-first spanning tree rooted at `root`. Vertices are expanded in
/// discovery order and darts in increasing index order, so the result
/// depends only on the input.
pub fn spanning_tree(graph: &Arc<FiniteGraph>, root: Vertex) -> Result<SpanningTree, GraphError> {
    if root.0 >= graph.vertex_count() {
        return Err(GraphError::VertexOutOfRange(root.0));
    }
    let n = graph.vertex_count();
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    let mut in_tree = vec![false; graph.dart_count()];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::from([root]);
    seen[root.0] = true;
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &d in graph.star(v) {
            let w = graph.dst(d);
            if !seen[w.0] {
                seen[w.0] = true;
                parent[w.0] = Some(d.inv());
                in_tree[d.0] = true;
                in_tree[d.inv().0] = true;
                queue.push_back(w);
            }
        }
    }
    if order.len() != n {
        return Err(GraphError::Disconnected {
            components: graph.components().len(),
        });
    }
    Ok(SpanningTree {
        graph: graph.clone(),
        root,
        parent,
        in_tree,
        order,
    })
}

impl SpanningTree {
    pub fn graph(&self) -> &Arc<FiniteGraph> {
        &self.graph
    }

    pub fn root(&self) -> Vertex {
        self.root
    }

    /// Traversal order (breadth first from the root).
    pub fn order(&self) -> &[Vertex] {
        &self.order
    }

    pub fn parent_dart(&self, v: Vertex) -> Option<Dart> {
        self.parent[v.0]
    }

    pub fn contains(&self, d: Dart) -> bool {
        self.in_tree[d.0]
    }

    /// Tree darts, both orientations, in increasing index order.
    pub fn tree_darts(&self) -> Vec<Dart> {
        self.graph.darts().filter(|d| self.in_tree[d.0]).collect()
    }

    pub fn tree_edge_count(&self) -> usize {
        self.in_tree.iter().filter(|&&t| t).count() / 2
    }

    /// Edges not in the tree, in increasing order.
    pub fn non_tree_edges(&self) -> Vec<usize> {
        (0..self.graph.edge_count())
            .filter(|&e| !self.in_tree[2 * e])
            .collect()
    }

    /// The reduced tree path from `v` to the root.
    pub fn path_to_root(&self, v: Vertex) -> Vec<Dart> {
        let mut path = Vec::new();
        let mut at = v;
        while let Some(d) = self.parent[at.0] {
            path.push(d);
            at = self.graph.dst(d);
        }
        path
    }

    /// The reduced tree path from the root to `v`.
    pub fn path_from_root(&self, v: Vertex) -> Vec<Dart> {
        self.path_to_root(v).into_iter().rev().map(Dart::inv).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{bouquet, cycle, disjoint_union, path};

    #[test]
    fn cycle_tree_sizes() {
        let g = Arc::new(cycle(3));
        let t = spanning_tree(&g, Vertex(0)).unwrap();
        assert_eq!(t.tree_edge_count(), 2);
        assert_eq!(t.non_tree_edges().len(), 1);
    }

    #[test]
    fn bouquet_has_no_tree_edges() {
        let g = Arc::new(bouquet(2));
        let t = spanning_tree(&g, Vertex(0)).unwrap();
        assert_eq!(t.tree_edge_count(), 0);
        assert_eq!(t.non_tree_edges(), vec![0, 1]);
    }

    #[test]
    fn path_is_its_own_tree() {
        let g = Arc::new(path(3));
        let t = spanning_tree(&g, Vertex(0)).unwrap();
        assert_eq!(t.tree_edge_count(), 2);
        assert!(t.non_tree_edges().is_empty());
        assert_eq!(t.path_from_root(Vertex(2)), vec![Dart(0), Dart(2)]);
        assert_eq!(t.path_to_root(Vertex(2)), vec![Dart(3), Dart(1)]);
    }

    #[test]
    fn disconnected_and_unknown_root_errors() {
        let g = Arc::new(disjoint_union(&cycle(3), &cycle(3)));
        assert!(matches!(
            spanning_tree(&g, Vertex(0)),
            Err(GraphError::Disconnected { components: 2 })
        ));
        let c = Arc::new(cycle(3));
        assert!(spanning_tree(&c, Vertex(7)).is_err());
    }

    #[test]
    fn deterministic() {
        let g = Arc::new(cycle(7));
        let a = spanning_tree(&g, Vertex(3)).unwrap();
        let b = spanning_tree(&g, Vertex(3)).unwrap();
        assert_eq!(a.tree_darts(), b.tree_darts());
        assert_eq!(a.order(), b.order());
    }
}
