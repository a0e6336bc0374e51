use std::sync::Arc;

use crate::free_group::{FreeWord, Letter};
use crate::graph::{spanning_tree, Dart, FiniteGraph, GraphError, SpanningTree, Vertex};

/// A free basis of `pi_1(graph, base)`: generator `k` is the loop through the
/// `k`-th non-tree edge, taken in its positive orientation.
#[derive(Clone, Debug)]
pub struct Pi1Data {
    tree: SpanningTree,
    basis: Vec<Dart>,
    letter: Vec<Option<Letter>>,
}

pub fn pi1_data(graph: &Arc<FiniteGraph>, base: Vertex) -> Result<Pi1Data, GraphError> {
    let tree = spanning_tree(graph, base)?;
    let basis: Vec<Dart> = tree
        .non_tree_edges()
        .into_iter()
        .map(|e| Dart::from_edge(e, false))
        .collect();
    let mut letter = vec![None; graph.dart_count()];
    for (k, &d) in basis.iter().enumerate() {
        letter[d.0] = Some(Letter::new(k, false));
        letter[d.inv().0] = Some(Letter::new(k, true));
    }
    Ok(Pi1Data {
        tree,
        basis,
        letter,
    })
}

impl Pi1Data {
    pub fn graph(&self) -> &Arc<FiniteGraph> {
        self.tree.graph()
    }

    pub fn basepoint(&self) -> Vertex {
        self.tree.root()
    }

    pub fn tree(&self) -> &SpanningTree {
        &self.tree
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_darts(&self) -> &[Dart] {
        &self.basis
    }

    /// The letter carried by a dart: empty for tree darts.
    pub fn voltage(&self, d: Dart) -> Option<Letter> {
        self.letter[d.0]
    }

    /// The closed path at the base point representing generator `k`.
    pub fn basis_loop(&self, k: usize) -> Vec<Dart> {
        let d = self.basis[k];
        let g = self.graph();
        let mut path = self.tree.path_from_root(g.src(d));
        path.push(d);
        path.extend(self.tree.path_to_root(g.dst(d)));
        path
    }

    /// The word of a dart path, read through the tree. For a path from `u`
    /// to `v` this is the class of `tree(base, u) · path · tree(v, base)`.
    pub fn path_to_word(&self, path: &[Dart]) -> Result<FreeWord, GraphError> {
        self.graph().check_path(path)?;
        Ok(FreeWord::reduce(path.iter().filter_map(|d| self.letter[d.0])))
    }

    /// Like [`Pi1Data::path_to_word`] but insists on a loop at the base point.
    pub fn loop_to_word(&self, path: &[Dart]) -> Result<FreeWord, GraphError> {
        let g = self.graph();
        let closed = match (path.first(), path.last()) {
            (Some(&a), Some(&b)) => g.src(a) == self.basepoint() && g.dst(b) == self.basepoint(),
            _ => true,
        };
        if !closed {
            return Err(GraphError::Morphism(
                "path is not a loop at the base point".into(),
            ));
        }
        self.path_to_word(path)
    }

    /// A loop at the base point spelling `w`.
    pub fn word_to_loop(&self, w: &FreeWord) -> Vec<Dart> {
        let mut out = Vec::new();
        for l in w.letters() {
            let mut lp = self.basis_loop(l.generator);
            if l.inverse {
                lp = lp.into_iter().rev().map(Dart::inv).collect();
            }
            out.extend(lp);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{bouquet, cycle};

    #[test]
    fn bouquet_basis_is_the_loops() {
        let g = Arc::new(bouquet(2));
        let p = pi1_data(&g, Vertex(0)).unwrap();
        assert_eq!(p.rank(), 2);
        assert_eq!(p.path_to_word(&[Dart(0)]).unwrap(), FreeWord::generator(0));
        assert_eq!(p.path_to_word(&[Dart(2)]).unwrap(), FreeWord::generator(1));
    }

    #[test]
    fn cycle_words() {
        for n in [3, 6] {
            let g = Arc::new(cycle(n));
            let p = pi1_data(&g, Vertex(0)).unwrap();
            assert_eq!(p.rank(), 1);
            let around: Vec<Dart> = (0..n).map(|e| Dart::from_edge(e, false)).collect();
            let word = p.loop_to_word(&around).unwrap();
            assert_eq!(word, FreeWord::generator(0));
            let back: Vec<Dart> = around.iter().rev().map(|d| d.inv()).collect();
            assert_eq!(p.loop_to_word(&back).unwrap(), FreeWord::generator(0).inverse());
        }
    }

    #[test]
    fn basis_loops_read_back_as_generators() {
        let g = Arc::new(crate::graph::disjoint_union(&bouquet(1), &bouquet(1)));
        assert!(pi1_data(&g, Vertex(0)).is_err());
        let g = Arc::new(bouquet(3));
        let p = pi1_data(&g, Vertex(0)).unwrap();
        for k in 0..3 {
            assert_eq!(p.loop_to_word(&p.basis_loop(k)).unwrap(), FreeWord::generator(k));
        }
        let w: FreeWord = "x0 x2^-1 x1".parse().unwrap();
        assert_eq!(p.loop_to_word(&p.word_to_loop(&w)).unwrap(), w);
    }

    #[test]
    fn non_paths_rejected() {
        let g = Arc::new(cycle(3));
        let p = pi1_data(&g, Vertex(0)).unwrap();
        assert!(p.path_to_word(&[Dart(0), Dart(0)]).is_err());
        assert!(p.loop_to_word(&[Dart(0)]).is_err());
    }

    #[test]
    fn concatenation_is_multiplicative() {
        let g = Arc::new(cycle(4));
        let p = pi1_data(&g, Vertex(0)).unwrap();
        let around: Vec<Dart> = (0..4).map(|e| Dart::from_edge(e, false)).collect();
        let twice: Vec<Dart> = around.iter().chain(around.iter()).copied().collect();
        let one = p.loop_to_word(&around).unwrap();
        assert_eq!(p.loop_to_word(&twice).unwrap(), &one * &one);
    }
}
