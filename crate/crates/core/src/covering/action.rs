use std::collections::HashMap;
use std::sync::Arc;

use super::deck::{deck_group, DeckGroup};
use super::{as_covering, Covering, CoveringError};
use crate::graph::{Congruence, Dart, Element, FiniteGraph, GraphMorphism, Vertex};

/// A finite group acting on the left on a graph by automorphisms.
///
/// Element 0 is the identity and `table[i][j]` is the index of `g_i g_j`,
/// so that `g_i · (g_j · x) = (g_i g_j) · x`.
#[derive(Clone, Debug)]
pub struct GroupAction {
    graph: Arc<FiniteGraph>,
    table: Vec<Vec<usize>>,
    maps: Vec<GraphMorphism>,
}

impl GroupAction {
    pub fn new(
        graph: Arc<FiniteGraph>,
        table: Vec<Vec<usize>>,
        vertex_perms: Vec<Vec<Vertex>>,
        dart_perms: Vec<Vec<Dart>>,
    ) -> Result<Self, CoveringError> {
        let n = table.len();
        if n == 0 || vertex_perms.len() != n || dart_perms.len() != n {
            return Err(CoveringError::NotAnAction(
                "table and action maps must list the same non-zero number of elements".into(),
            ));
        }
        let mut maps = Vec::with_capacity(n);
        for (i, (vp, dp)) in vertex_perms.into_iter().zip(dart_perms).enumerate() {
            let m = GraphMorphism::new(graph.clone(), graph.clone(), vp, dp)
                .map_err(|e| CoveringError::NotAnAction(format!("element {i}: {e}")))?;
            if !m.is_bijective() {
                return Err(CoveringError::NotAnAction(format!("element {i} is not bijective")));
            }
            maps.push(m);
        }
        let action = GroupAction { graph, table, maps };
        action.check()?;
        Ok(action)
    }

    /// The action of a finite set of automorphisms closed under
    /// composition; the first must be the identity.
    pub fn from_automorphisms(graph: Arc<FiniteGraph>, maps: Vec<GraphMorphism>) -> Result<Self, CoveringError> {
        let key = |m: &GraphMorphism| (m.vertex_map().to_vec(), m.dart_map().to_vec());
        let index: HashMap<_, usize> = maps.iter().enumerate().map(|(i, m)| (key(m), i)).collect();
        if index.len() != maps.len() {
            return Err(CoveringError::NotAnAction("repeated element".into()));
        }
        let mut table = vec![vec![0; maps.len()]; maps.len()];
        for (i, mi) in maps.iter().enumerate() {
            for (j, mj) in maps.iter().enumerate() {
                let composite = mj.then(mi)?;
                table[i][j] = *index
                    .get(&key(&composite))
                    .ok_or_else(|| CoveringError::NotAnAction(format!("g{i} g{j} is not listed")))?;
            }
        }
        let vertex_perms = maps.iter().map(|m| m.vertex_map().to_vec()).collect();
        let dart_perms = maps.iter().map(|m| m.dart_map().to_vec()).collect();
        Self::new(graph, table, vertex_perms, dart_perms)
    }

    fn check(&self) -> Result<(), CoveringError> {
        let n = self.order();
        if self.table.iter().any(|row| row.len() != n || row.iter().any(|&k| k >= n)) {
            return Err(CoveringError::NotAnAction("table is not square over the elements".into()));
        }
        if self.maps[0] != GraphMorphism::identity(self.graph.clone()) {
            return Err(CoveringError::NotAnAction("element 0 does not act trivially".into()));
        }
        for i in 0..n {
            if self.table[0][i] != i || self.table[i][0] != i {
                return Err(CoveringError::NotAnAction("element 0 is not the identity of the table".into()));
            }
            if !self.table[i].contains(&0) {
                return Err(CoveringError::NotAnAction(format!("element {i} has no inverse")));
            }
            for j in 0..n {
                for k in 0..n {
                    if self.table[self.table[i][j]][k] != self.table[i][self.table[j][k]] {
                        return Err(CoveringError::NotAnAction(format!(
                            "table is not associative at ({i}, {j}, {k})"
                        )));
                    }
                }
                let composite = self.maps[j].then(&self.maps[i])?;
                if composite != self.maps[self.table[i][j]] {
                    return Err(CoveringError::NotAnAction(format!(
                        "g{i} acting after g{j} differs from their product"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn graph(&self) -> &Arc<FiniteGraph> {
        &self.graph
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn element(&self, i: usize) -> &GraphMorphism {
        &self.maps[i]
    }

    /// First non-identity element fixing a vertex or dart.
    pub fn freeness_violation(&self) -> Option<(usize, Element)> {
        for (i, m) in self.maps.iter().enumerate().skip(1) {
            if let Some(v) = self.graph.vertices().find(|&v| m.vertex(v) == v) {
                return Some((i, Element::Vertex(v)));
            }
            if let Some(d) = self.graph.darts().find(|&d| m.dart(d) == d) {
                return Some((i, Element::Dart(d)));
            }
        }
        None
    }

    /// First element sending a dart to its inverse.
    pub fn inversion(&self) -> Option<(usize, Dart)> {
        for (i, m) in self.maps.iter().enumerate() {
            if let Some(d) = self.graph.darts().find(|&d| m.dart(d) == d.inv()) {
                return Some((i, d));
            }
        }
        None
    }

    fn orbit_congruence(&self) -> Congruence {
        let vl: Vec<usize> = self
            .graph
            .vertices()
            .map(|v| self.maps.iter().map(|m| m.vertex(v).0).min().expect("group is non-empty"))
            .collect();
        let dl: Vec<usize> = self
            .graph
            .darts()
            .map(|d| self.maps.iter().map(|m| m.dart(d).0).min().expect("group is non-empty"))
            .collect();
        Congruence::from_labels(self.graph.clone(), &vl, &dl).expect("orbits of an inversion-free action are compatible")
    }
}

/// The orbit map of a free action, its deck group, and the exhibited
/// isomorphism from the acting group onto the deck group.
#[derive(Clone, Debug)]
pub struct OrbitQuotient {
    pub graph: Arc<FiniteGraph>,
    pub covering: Covering,
    pub deck: DeckGroup,
    /// `isomorphism[g]` is the deck element acting as `g`.
    pub isomorphism: Vec<usize>,
}

pub fn quotient_by_group(action: &GroupAction) -> Result<OrbitQuotient, CoveringError> {
    if !action.graph.is_connected() {
        return Err(CoveringError::Disconnected("acted-on"));
    }
    if let Some((element, dart)) = action.inversion() {
        return Err(CoveringError::EdgeInversion { element, dart });
    }
    if let Some((element, fixed)) = action.freeness_violation() {
        return Err(CoveringError::NotFree { element, fixed });
    }
    let (graph, projection) = action.orbit_congruence().quotient();
    let covering = as_covering(&projection)?;
    let deck = deck_group(&covering)?;
    if deck.order() != action.order() || covering.degree() != action.order() {
        return Err(CoveringError::Internal(format!(
            "orbit map of a group of order {} has degree {} and deck order {}",
            action.order(),
            covering.degree(),
            deck.order()
        )));
    }
    let mut isomorphism = Vec::with_capacity(action.order());
    for (g, m) in action.maps.iter().enumerate() {
        let k = deck
            .by_anchor_image(m.vertex(deck.anchor()))
            .ok_or_else(|| CoveringError::Internal(format!("group element {g} is not a deck element")))?;
        if deck.element(k) != m {
            return Err(CoveringError::Internal(format!(
                "group element {g} differs from the deck element it selects"
            )));
        }
        isomorphism.push(k);
    }
    for i in 0..action.order() {
        for j in 0..action.order() {
            if isomorphism[action.table[i][j]] != deck.compose(isomorphism[i], isomorphism[j]) {
                return Err(CoveringError::Internal(format!(
                    "correspondence is not multiplicative at ({i}, {j})"
                )));
            }
        }
    }
    Ok(OrbitQuotient {
        graph,
        covering,
        deck,
        isomorphism,
    })
}

/// The factorization `f = lower ∘ upper` through `Γ/H`.
#[derive(Clone, Debug)]
pub struct IntermediateCover {
    pub graph: Arc<FiniteGraph>,
    pub upper: Covering,
    pub lower: Covering,
}

/// Quotient of the domain by a subgroup `h` (element indices) of the deck
/// group.
pub fn quotient_by_deck_subgroup(deck: &DeckGroup, h: &[usize]) -> Result<IntermediateCover, CoveringError> {
    if !deck.is_subgroup(h) {
        return Err(CoveringError::NotASubgroup(format!("{h:?}")));
    }
    let c = deck.covering();
    let g = c.domain();
    let vl: Vec<usize> = g
        .vertices()
        .map(|v| h.iter().map(|&i| deck.element(i).vertex(v).0).min().expect("subgroups contain 0"))
        .collect();
    let dl: Vec<usize> = g
        .darts()
        .map(|d| h.iter().map(|&i| deck.element(i).dart(d).0).min().expect("subgroups contain 0"))
        .collect();
    let r = Congruence::from_labels(g.clone(), &vl, &dl)?;
    let (graph, projection) = r.quotient();
    let lower_map = c
        .map()
        .descend(&r)?
        .map_err(|w| CoveringError::Internal(format!("covering is not constant on deck orbits: {w:?}")))?
        .rebind(graph.clone(), c.codomain().clone())?;
    if projection.then(&lower_map)? != *c.map() {
        return Err(CoveringError::Internal("factorization does not reproduce the covering".into()));
    }
    Ok(IntermediateCover {
        upper: as_covering(&projection)?,
        lower: as_covering(&lower_map)?,
        graph,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::fixtures::wrap;
    use crate::covering::{cover_from_subgroup, is_regular};
    use crate::free_group::mod_p_kernel_rep;
    use crate::graph::{bouquet, cycle};

    fn rotation(n: usize, k: usize) -> GraphMorphism {
        let g = Arc::new(cycle(n));
        let vmap = (0..n).map(|i| Vertex((i + k) % n)).collect();
        let edges: Vec<(usize, bool)> = (0..n).map(|i| ((i + k) % n, false)).collect();
        GraphMorphism::from_edge_map(g.clone(), g, vmap, &edges).unwrap()
    }

    #[test]
    fn antipodal_action_on_c6() {
        let id = rotation(6, 0);
        let g = id.domain().clone();
        let r3 = rotation(6, 3).rebind(g.clone(), g.clone()).unwrap();
        let act = GroupAction::from_automorphisms(g, vec![id.clone(), r3]).unwrap();
        let q = quotient_by_group(&act).unwrap();
        assert_eq!(q.graph.vertex_count(), 3);
        assert_eq!(q.covering.degree(), 2);
        assert_eq!(q.isomorphism, vec![0, 1]);
        assert!(is_regular(&q.covering).unwrap().0.is_regular());
    }

    #[test]
    fn trivial_action() {
        let id = rotation(5, 0);
        let act = GroupAction::from_automorphisms(id.domain().clone(), vec![id]).unwrap();
        let q = quotient_by_group(&act).unwrap();
        assert!(q.covering.map().is_bijective());
    }

    #[test]
    fn klein_four_on_mod_two_cover() {
        let b2 = Arc::new(bouquet(2));
        let cover = cover_from_subgroup(&b2, Vertex(0), &mod_p_kernel_rep(2, 2).unwrap()).unwrap();
        let deck = deck_group(&cover.covering).unwrap();
        assert_eq!(deck.order(), 4);
        let act = GroupAction::from_automorphisms(cover.graph.clone(), deck.elements().to_vec()).unwrap();
        let q = quotient_by_group(&act).unwrap();
        assert_eq!(q.graph.vertex_count(), 1);
        assert_eq!(q.graph.edge_count(), 2);
        assert!((0..4).all(|i| q.deck.compose(i, i) == 0));
    }

    #[test]
    fn non_free_and_inverting_actions() {
        let g = Arc::new(cycle(4));
        let id = GraphMorphism::identity(g.clone());
        // reflection through v0 and v2 fixes vertices
        let vmap = vec![Vertex(0), Vertex(3), Vertex(2), Vertex(1)];
        let refl = GraphMorphism::from_edge_map(g.clone(), g.clone(), vmap, &[(3, true), (2, true), (1, true), (0, true)]).unwrap();
        let act = GroupAction::from_automorphisms(g.clone(), vec![id.clone(), refl]).unwrap();
        assert!(matches!(quotient_by_group(&act), Err(CoveringError::EdgeInversion { .. }) | Err(CoveringError::NotFree { .. })));
        let bad = GroupAction::new(g.clone(), vec![vec![0, 1], vec![1, 1]], vec![id.vertex_map().to_vec(); 2], vec![id.dart_map().to_vec(); 2]);
        assert!(matches!(bad, Err(CoveringError::NotAnAction(_))));
    }

    #[test]
    fn intermediate_covers_of_c12() {
        let c = as_covering(&wrap(12, 3)).unwrap();
        let deck = deck_group(&c).unwrap();
        let half = deck.generated_subgroup(&[deck.by_anchor_image(Vertex(6)).unwrap()]);
        assert_eq!(half.len(), 2);
        let mid = quotient_by_deck_subgroup(&deck, &half).unwrap();
        assert_eq!(mid.graph.vertex_count(), 6);
        assert_eq!(mid.upper.degree(), 2);
        assert_eq!(mid.lower.degree(), 2);
        assert!(is_regular(&mid.lower).unwrap().0.is_regular());
        let trivial = quotient_by_deck_subgroup(&deck, &[0]).unwrap();
        assert_eq!(trivial.lower.degree(), 4);
        let full: Vec<usize> = (0..4).collect();
        assert!(quotient_by_deck_subgroup(&deck, &full).unwrap().lower.map().is_bijective());
        assert!(matches!(
            quotient_by_deck_subgroup(&deck, &[1]),
            Err(CoveringError::NotASubgroup(_))
        ));
    }
}
