use std::sync::Arc;

use super::pi1::pi1_data;
use super::{as_covering, Covering, CoveringError};
use crate::free_group::PermRep;
use crate::graph::{Dart, FiniteGraph, GraphMorphism, Vertex};

/// A connected cover together with its base point over the base graph's
/// base point.
#[derive(Clone, Debug)]
pub struct DerivedCover {
    pub graph: Arc<FiniteGraph>,
    pub basepoint: Vertex,
    pub covering: Covering,
}

/// The permutation-voltage cover of `base` defined by the coset action `h`
/// of `pi_1(base, b)`.
///
/// Tree darts carry the identity and the `k`-th basis dart carries `x_k`.
/// Sheet `p` over vertex `v` is vertex `p·|V| + v`, named `"{v}.{p}"`; edge
/// `E` on sheet `p` runs from `(p, src E)` to `(p·voltage(E), dst E)` and is
/// named `"{E}.{p}"`. The image of `pi_1` at `(0, b)` is exactly `Stab(0)`.
pub fn cover_from_subgroup(
    base: &Arc<FiniteGraph>,
    b: Vertex,
    h: &PermRep,
) -> Result<DerivedCover, CoveringError> {
    if !base.is_connected() {
        return Err(CoveringError::Disconnected("base"));
    }
    let basis = pi1_data(base, b)?;
    if basis.rank() != h.rank() {
        return Err(CoveringError::RankMismatch {
            expected: basis.rank(),
            found: h.rank(),
        });
    }
    let n = h.degree();
    let nv = base.vertex_count();
    let ne = base.edge_count();
    let mut vertex_ids = Vec::with_capacity(n * nv);
    for p in 0..n {
        for v in base.vertex_ids() {
            vertex_ids.push(format!("{v}.{p}"));
        }
    }
    let mut edges = Vec::with_capacity(n * ne);
    for p in 0..n {
        for e in 0..ne {
            let d = Dart::from_edge(e, false);
            let q = match basis.voltage(d) {
                Some(l) => h.apply(p, l),
                None => p,
            };
            edges.push((
                format!("{}.{p}", base.edge_id(e)),
                p * nv + base.src(d).0,
                q * nv + base.dst(d).0,
            ));
        }
    }
    let name = format!("{}~{}", base.name().unwrap_or("G"), n);
    let graph = Arc::new(FiniteGraph::from_edges(Some(name), vertex_ids, edges)?);
    let vmap = (0..n * nv).map(|i| Vertex(i % nv)).collect();
    let dmap = (0..2 * n * ne)
        .map(|d| Dart(d % (2 * ne)))
        .collect();
    let map = GraphMorphism::new(graph.clone(), base.clone(), vmap, dmap)?;
    let covering = as_covering(&map)?;
    Ok(DerivedCover {
        graph,
        basepoint: b,
        covering,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free_group::mod_p_kernel_rep;
    use crate::graph::{bouquet, cycle};

    #[test]
    fn mod_two_cover_of_b2() {
        let b2 = Arc::new(bouquet(2));
        let c = cover_from_subgroup(&b2, Vertex(0), &mod_p_kernel_rep(2, 2).unwrap()).unwrap();
        assert_eq!(c.graph.vertex_count(), 4);
        assert_eq!(c.graph.edge_count(), 8);
        assert!(c.graph.is_connected());
        assert_eq!(c.graph.cycle_rank(), 5);
        assert_eq!(c.covering.degree(), 4);
    }

    #[test]
    fn double_cover_of_c3_is_c6() {
        let c3 = Arc::new(cycle(3));
        let c = cover_from_subgroup(&c3, Vertex(0), &PermRep::cycle(2).unwrap()).unwrap();
        let g = &c.graph;
        assert_eq!(g.vertex_count(), 6);
        assert!(g.is_connected());
        assert!(g.vertices().all(|v| g.star(v).len() == 2));
        assert_eq!(g.cycle_rank(), 1);
    }

    #[test]
    fn trivial_rep_gives_a_copy() {
        let c3 = Arc::new(cycle(3));
        let c = cover_from_subgroup(&c3, Vertex(0), &PermRep::trivial(1)).unwrap();
        assert_eq!(c.covering.degree(), 1);
        assert!(c.covering.map().is_bijective());
    }

    #[test]
    fn rank_mismatch_and_disconnected_base() {
        let c3 = Arc::new(cycle(3));
        assert!(matches!(
            cover_from_subgroup(&c3, Vertex(0), &PermRep::trivial(2)),
            Err(CoveringError::RankMismatch { expected: 1, found: 2 })
        ));
        let two = Arc::new(crate::graph::disjoint_union(&cycle(3), &cycle(3)));
        assert!(matches!(
            cover_from_subgroup(&two, Vertex(0), &PermRep::trivial(2)),
            Err(CoveringError::Disconnected(_))
        ));
    }
}
