//! Coverings of finite graphs.
//!
//! A covering is a locally bijective morphism: at each vertex of the domain
//! the dart map restricts to a bijection between stars. Everything else here
//! (monodromy, lifting, deck groups, orbit maps) is built on unique path
//! lifting through such maps.

mod action;
mod deck;
mod derived;
mod lift;
mod monodromy;
mod pi1;

pub use action::{quotient_by_deck_subgroup, quotient_by_group, GroupAction, IntermediateCover, OrbitQuotient};
pub use deck::{deck_group, is_regular, DeckGroup, RegularityEvidence};
pub use derived::{cover_from_subgroup, DerivedCover};
pub use lift::{lift, lift_with_order, Lift, LiftObstruction, TraversalOrder};
pub use monodromy::{image_subgroup, transport_basepoint};
pub use pi1::{pi1_data, Pi1Data};

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::free_group::GroupError;
use crate::graph::{Dart, Element, FiniteGraph, GraphError, GraphMorphism, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StarDefect {
    /// Two darts at the vertex map to the same dart.
    NotInjective { first: Dart, second: Dart },
    /// A dart at the image vertex has no preimage at the vertex.
    NotSurjective { missing: Dart },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoveringError {
    #[error("not locally bijective at vertex {vertex:?}: {defect:?}")]
    NotLocallyBijective { vertex: Vertex, defect: StarDefect },
    #[error("{0} graph is disconnected")]
    Disconnected(&'static str),
    #[error("base point mismatch: {0}")]
    BasepointMismatch(String),
    #[error("rank mismatch: pi_1 of the base has rank {expected}, rep has rank {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("not a subgroup of the deck group: {0}")]
    NotASubgroup(String),
    #[error("not a group action: {0}")]
    NotAnAction(String),
    #[error("action is not free: element {element} fixes {fixed:?}")]
    NotFree { element: usize, fixed: Element },
    #[error("action inverts an edge: element {element} sends dart {dart:?} to its inverse")]
    EdgeInversion { element: usize, dart: Dart },
    #[error("regularity verdicts disagree: {0:?}")]
    InconsistentRegularity(RegularityEvidence),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A verified covering map with its fibers.
#[derive(Clone, Debug)]
pub struct Covering {
    map: GraphMorphism,
    vertex_fibers: Vec<Vec<Vertex>>,
    dart_fibers: Vec<Vec<Dart>>,
    lifts: HashMap<(Vertex, Dart), Dart>,
    component_degrees: Vec<usize>,
}

impl PartialEq for Covering {
    fn eq(&self, other: &Self) -> bool {
        self.map == other.map
    }
}

/// Recognises a covering: checks local bijectivity at every vertex.
pub fn as_covering(f: &GraphMorphism) -> Result<Covering, CoveringError> {
    let dom = f.domain();
    let cod = f.codomain();
    let mut lifts = HashMap::with_capacity(dom.dart_count());
    for v in dom.vertices() {
        let image = f.vertex(v);
        let mut owner: HashMap<Dart, Dart> = HashMap::new();
        for &d in dom.star(v) {
            if let Some(&first) = owner.get(&f.dart(d)) {
                return Err(CoveringError::NotLocallyBijective {
                    vertex: v,
                    defect: StarDefect::NotInjective { first, second: d },
                });
            }
            owner.insert(f.dart(d), d);
        }
        if let Some(&missing) = cod.star(image).iter().find(|e| !owner.contains_key(e)) {
            return Err(CoveringError::NotLocallyBijective {
                vertex: v,
                defect: StarDefect::NotSurjective { missing },
            });
        }
        for (e, d) in owner {
            lifts.insert((v, e), d);
        }
    }
    let mut vertex_fibers = vec![Vec::new(); cod.vertex_count()];
    for v in dom.vertices() {
        vertex_fibers[f.vertex(v).0].push(v);
    }
    let mut dart_fibers = vec![Vec::new(); cod.dart_count()];
    for d in dom.darts() {
        dart_fibers[f.dart(d).0].push(d);
    }
    let codomain_components = cod.component_labels();
    let count = codomain_components.iter().map(|c| c + 1).max().unwrap_or(0);
    let mut component_degrees = vec![0; count];
    for (v, &c) in codomain_components.iter().enumerate() {
        let size = vertex_fibers[v].len();
        if component_degrees[c] == 0 {
            component_degrees[c] = size;
        }
        if component_degrees[c] != size && size != 0 {
            return Err(CoveringError::Internal(
                "fiber sizes differ inside a codomain component".into(),
            ));
        }
    }
    Ok(Covering {
        map: f.clone(),
        vertex_fibers,
        dart_fibers,
        lifts,
        component_degrees,
    })
}

impl Covering {
    pub fn map(&self) -> &GraphMorphism {
        &self.map
    }

    pub fn domain(&self) -> &Arc<FiniteGraph> {
        self.map.domain()
    }

    pub fn codomain(&self) -> &Arc<FiniteGraph> {
        self.map.codomain()
    }

    /// Fiber size over the component of the first codomain vertex; the
    /// degree of the covering whenever the codomain is connected.
    pub fn degree(&self) -> usize {
        self.component_degrees.first().copied().unwrap_or(0)
    }

    /// Fiber size over each codomain component (0 where the domain misses
    /// the component).
    pub fn component_degrees(&self) -> &[usize] {
        &self.component_degrees
    }

    pub fn is_surjective(&self) -> bool {
        self.component_degrees.iter().all(|&d| d > 0)
    }

    pub fn vertex_fiber(&self, v: Vertex) -> &[Vertex] {
        &self.vertex_fibers[v.0]
    }

    pub fn dart_fiber(&self, d: Dart) -> &[Dart] {
        &self.dart_fibers[d.0]
    }

    /// The unique dart at `at` lying over `over`, if `over` starts at the
    /// image of `at`.
    pub fn lift_dart(&self, at: Vertex, over: Dart) -> Option<Dart> {
        self.lifts.get(&(at, over)).copied()
    }

    /// Unique lift of a codomain path starting at `start`.
    pub fn lift_path(&self, start: Vertex, path: &[Dart]) -> Option<Vec<Dart>> {
        let mut at = start;
        let mut out = Vec::with_capacity(path.len());
        for &d in path {
            let up = self.lift_dart(at, d)?;
            at = self.domain().dst(up);
            out.push(up);
        }
        Some(out)
    }

    /// End point of the lift of `path` from `start`.
    pub fn lift_endpoint(&self, start: Vertex, path: &[Dart]) -> Option<Vertex> {
        let mut at = start;
        for &d in path {
            at = self.domain().dst(self.lift_dart(at, d)?);
        }
        Some(at)
    }

    /// Transport of the fiber over `src(e)` to the fiber over `dst(e)`:
    /// pairs `(a, dst(ã))` sorted by `a`, where `ã` is the lift of `e` at
    /// `a`.
    pub fn fiber_transport(&self, e: Dart) -> Vec<(Vertex, Vertex)> {
        let dom = self.domain();
        let mut pairs: Vec<(Vertex, Vertex)> = self.dart_fibers[e.0]
            .iter()
            .map(|&d| (dom.src(d), dom.dst(d)))
            .collect();
        pairs.sort_unstable();
        pairs
    }
}

/// The Euler relation `rank(Γ) - 1 = n · (rank(Δ) - 1)` for a covering of
/// connected graphs, written without subtraction.
pub fn euler_relation_holds(c: &Covering) -> bool {
    let up = c.domain().cycle_rank() as i64 - 1;
    let down = c.codomain().cycle_rank() as i64 - 1;
    up == c.degree() as i64 * down
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::graph::{cycle, path};

    pub fn wrap(n: usize, m: usize) -> GraphMorphism {
        let top = Arc::new(cycle(n));
        let bottom = Arc::new(cycle(m));
        let vmap = (0..n).map(|i| Vertex(i % m)).collect();
        let edges: Vec<(usize, bool)> = (0..n).map(|i| (i % m, false)).collect();
        GraphMorphism::from_edge_map(top, bottom, vmap, &edges).unwrap()
    }

    pub fn path_into_cycle() -> GraphMorphism {
        let p = Arc::new(path(2));
        let c = Arc::new(cycle(3));
        GraphMorphism::from_edge_map(p, c, vec![Vertex(0), Vertex(1)], &[(0, false)]).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::graph::cycle;

    #[test]
    fn wrap_is_a_degree_two_covering() {
        let c = as_covering(&wrap(6, 3)).unwrap();
        assert_eq!(c.degree(), 2);
        assert!(c.is_surjective());
        assert!(euler_relation_holds(&c));
    }

    #[test]
    fn identity_is_a_degree_one_covering() {
        let c = as_covering(&GraphMorphism::identity(Arc::new(cycle(3)))).unwrap();
        assert_eq!(c.degree(), 1);
    }

    #[test]
    fn path_endpoint_is_not_surjective_on_stars() {
        let err = as_covering(&path_into_cycle()).unwrap_err();
        match err {
            CoveringError::NotLocallyBijective { vertex, defect } => {
                assert_eq!(vertex, Vertex(0));
                assert!(matches!(defect, StarDefect::NotSurjective { .. }));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn folding_is_not_injective_on_stars() {
        // C2 -> B1 sending both edges to the loop in the same direction is a
        // covering; sending one reversed folds a star.
        let c2 = Arc::new(cycle(2));
        let b1 = Arc::new(crate::graph::bouquet(1));
        let ok = GraphMorphism::from_edge_map(c2.clone(), b1.clone(), vec![Vertex(0); 2], &[(0, false), (0, false)]).unwrap();
        assert_eq!(as_covering(&ok).unwrap().degree(), 2);
        let folded = GraphMorphism::from_edge_map(c2, b1, vec![Vertex(0); 2], &[(0, false), (0, true)]).unwrap();
        assert!(matches!(
            as_covering(&folded),
            Err(CoveringError::NotLocallyBijective { defect: StarDefect::NotInjective { .. }, .. })
        ));
    }

    #[test]
    fn fiber_transport_is_a_fixed_point_free_bijection() {
        let c = as_covering(&wrap(6, 3)).unwrap();
        for e in c.codomain().darts() {
            let t = c.fiber_transport(e);
            assert_eq!(t.len(), 2);
            let sources: Vec<_> = t.iter().map(|p| p.0).collect();
            assert_eq!(sources, c.vertex_fiber(c.codomain().src(e)).to_vec());
            let mut targets: Vec<_> = t.iter().map(|p| p.1).collect();
            targets.sort();
            assert_eq!(targets, c.vertex_fiber(c.codomain().dst(e)).to_vec());
            assert!(t.iter().all(|(a, b)| a != b));
            // transport back along the inverse dart undoes it
            let back = c.fiber_transport(e.inv());
            for (a, b) in &t {
                assert!(back.contains(&(*b, *a)));
            }
        }
    }

    #[test]
    fn degree_one_transport_is_identity_like() {
        let c = as_covering(&GraphMorphism::identity(Arc::new(cycle(3)))).unwrap();
        for e in c.codomain().darts() {
            let t = c.fiber_transport(e);
            assert_eq!(t, vec![(c.codomain().src(e), c.codomain().dst(e))]);
        }
    }
}
