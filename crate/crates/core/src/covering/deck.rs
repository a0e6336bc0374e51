use std::collections::BTreeSet;

use super::lift::lift;
use super::monodromy::image_subgroup;
use super::pi1::pi1_data;
use super::{Covering, CoveringError};
use crate::free_group::is_normal;
use crate::graph::{Element, GraphMorphism, Vertex};

/// The covering transformations of a covering with connected domain.
///
/// Element `i` is the unique deck transformation sending the anchor (domain
/// vertex 0) to the `i`-th point of its fiber that admits one; element 0 is
/// the identity. `table[i][j]` is the index of `e_i ∘ e_j`.
#[derive(Clone, Debug)]
pub struct DeckGroup {
    covering: Covering,
    anchor: Vertex,
    elements: Vec<GraphMorphism>,
    table: Vec<Vec<usize>>,
    inverses: Vec<usize>,
}

pub fn deck_group(c: &Covering) -> Result<DeckGroup, CoveringError> {
    let dom = c.domain();
    if dom.vertex_count() == 0 {
        return Err(CoveringError::Disconnected("empty domain"));
    }
    if !dom.is_connected() {
        return Err(CoveringError::Disconnected("domain"));
    }
    let anchor = Vertex(0);
    let f = c.map();
    let mut elements = Vec::new();
    for &target in c.vertex_fiber(f.vertex(anchor)) {
        if let Some(h) = lift(f, c, anchor, target)?.into_map() {
            elements.push(h);
        }
    }
    if elements.first().map(|e| e.vertex(anchor)) != Some(anchor) {
        return Err(CoveringError::Internal("identity did not lift".into()));
    }
    let position = |v: Vertex| elements.iter().position(|e| e.vertex(anchor) == v);
    let mut table = vec![vec![0; elements.len()]; elements.len()];
    for (i, ei) in elements.iter().enumerate() {
        for (j, ej) in elements.iter().enumerate() {
            let image = ei.vertex(ej.vertex(anchor));
            table[i][j] = position(image)
                .ok_or_else(|| CoveringError::Internal("deck transformations not closed".into()))?;
        }
    }
    let inverses = table
        .iter()
        .map(|row| row.iter().position(|&k| k == 0))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| CoveringError::Internal("deck transformation without inverse".into()))?;
    Ok(DeckGroup {
        covering: c.clone(),
        anchor,
        elements,
        table,
        inverses,
    })
}

impl DeckGroup {
    pub fn covering(&self) -> &Covering {
        &self.covering
    }

    pub fn anchor(&self) -> Vertex {
        self.anchor
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn element(&self, i: usize) -> &GraphMorphism {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[GraphMorphism] {
        &self.elements
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn compose(&self, i: usize, j: usize) -> usize {
        self.table[i][j]
    }

    pub fn inverse(&self, i: usize) -> usize {
        self.inverses[i]
    }

    /// The element sending `from` to `to`, if any.
    pub fn find_mapping(&self, from: Vertex, to: Vertex) -> Option<usize> {
        self.elements.iter().position(|e| e.vertex(from) == to)
    }

    /// The element whose image of the anchor is `v`.
    pub fn by_anchor_image(&self, v: Vertex) -> Option<usize> {
        self.find_mapping(self.anchor, v)
    }

    /// A non-identity element with a fixed vertex or dart.
    pub fn freeness_violation(&self) -> Option<(usize, Element)> {
        for (i, e) in self.elements.iter().enumerate().skip(1) {
            let g = e.domain();
            if let Some(v) = g.vertices().find(|&v| e.vertex(v) == v) {
                return Some((i, Element::Vertex(v)));
            }
            if let Some(d) = g.darts().find(|&d| e.dart(d) == d) {
                return Some((i, Element::Dart(d)));
            }
        }
        None
    }

    /// The subgroup generated by `gens`, sorted.
    pub fn generated_subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut members: BTreeSet<usize> = BTreeSet::from([0]);
        let mut frontier = vec![0];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.table[x][g];
                if members.insert(y) {
                    frontier.push(y);
                }
            }
        }
        members.into_iter().collect()
    }

    pub fn is_subgroup(&self, h: &[usize]) -> bool {
        let set: BTreeSet<usize> = h.iter().copied().collect();
        set.contains(&0)
            && set.iter().all(|&i| i < self.order())
            && set
                .iter()
                .all(|&i| set.contains(&self.inverses[i]) && set.iter().all(|&j| set.contains(&self.table[i][j])))
    }

    pub fn is_normal_subgroup(&self, h: &[usize]) -> bool {
        let set: BTreeSet<usize> = h.iter().copied().collect();
        (0..self.order()).all(|g| {
            set.iter()
                .all(|&x| set.contains(&self.table[self.table[g][x]][self.inverses[g]]))
        })
    }

    /// Every subgroup, each sorted, in lexicographic order.
    pub fn all_subgroups(&self) -> Vec<Vec<usize>> {
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::from([vec![0]]);
        let mut frontier = vec![vec![0]];
        while let Some(s) = frontier.pop() {
            for g in 0..self.order() {
                if s.binary_search(&g).is_ok() {
                    continue;
                }
                let mut gens = s.clone();
                gens.push(g);
                let bigger = self.generated_subgroup(&gens);
                if found.insert(bigger.clone()) {
                    frontier.push(bigger);
                }
            }
        }
        found.into_iter().collect()
    }
}

/// The three regularity verdicts, computed independently.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityEvidence {
    pub degree: usize,
    pub deck_order: usize,
    /// `|deck| = degree`.
    pub order_matches_degree: bool,
    /// The image subgroup at the anchor is normal.
    pub image_normal: bool,
    /// Every pair of points in every fiber is related by a deck element.
    pub transitive_on_fibers: bool,
}

impl RegularityEvidence {
    pub fn is_regular(&self) -> bool {
        self.order_matches_degree
    }

    pub fn consistent(&self) -> bool {
        self.order_matches_degree == self.image_normal && self.image_normal == self.transitive_on_fibers
    }
}

/// Decides regularity three ways; disagreement is reported as an error.
pub fn is_regular(c: &Covering) -> Result<(RegularityEvidence, DeckGroup), CoveringError> {
    if !c.codomain().is_connected() {
        return Err(CoveringError::Disconnected("codomain"));
    }
    let deck = deck_group(c)?;
    let anchor = deck.anchor();
    let p = pi1_data(c.codomain(), c.map().vertex(anchor))?;
    let rep = image_subgroup(c, anchor, &p)?;
    let transitive = c.codomain().vertices().all(|v| {
        let fiber = c.vertex_fiber(v);
        fiber
            .iter()
            .all(|&a| fiber.iter().all(|&b| deck.find_mapping(a, b).is_some()))
    });
    let evidence = RegularityEvidence {
        degree: c.degree(),
        deck_order: deck.order(),
        order_matches_degree: deck.order() == c.degree(),
        image_normal: is_normal(&rep),
        transitive_on_fibers: transitive,
    };
    if !evidence.consistent() {
        return Err(CoveringError::InconsistentRegularity(evidence));
    }
    Ok((evidence, deck))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::covering::fixtures::wrap;
    use crate::covering::{as_covering, cover_from_subgroup};
    use crate::free_group::PermRep;
    use crate::graph::{bouquet, cycle};

    fn degree_three_b2() -> Covering {
        let h = PermRep::new(3, vec![vec![1, 0, 2], vec![0, 2, 1]]).unwrap();
        cover_from_subgroup(&Arc::new(bouquet(2)), Vertex(0), &h).unwrap().covering
    }

    #[test]
    fn antipodal_deck_group() {
        let c = as_covering(&wrap(6, 3)).unwrap();
        let g = deck_group(&c).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.element(1).vertex(Vertex(0)), Vertex(3));
        assert_eq!(g.compose(1, 1), 0);
        assert!(g.freeness_violation().is_none());
        let (ev, _) = is_regular(&c).unwrap();
        assert!(ev.is_regular());
    }

    #[test]
    fn non_normal_cover_has_trivial_deck_group() {
        let c = degree_three_b2();
        assert_eq!(deck_group(&c).unwrap().order(), 1);
        let (ev, _) = is_regular(&c).unwrap();
        assert!(!ev.is_regular() && !ev.image_normal && !ev.transitive_on_fibers);
    }

    #[test]
    fn identity_deck_group() {
        let c = as_covering(&GraphMorphism::identity(Arc::new(cycle(3)))).unwrap();
        assert_eq!(deck_group(&c).unwrap().order(), 1);
        assert!(is_regular(&c).unwrap().0.is_regular());
    }

    #[test]
    fn cyclic_subgroups() {
        let c = as_covering(&wrap(24, 3)).unwrap();
        let g = deck_group(&c).unwrap();
        assert_eq!(g.order(), 8);
        let subs = g.all_subgroups();
        let mut sizes: Vec<usize> = subs.iter().map(Vec::len).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 4, 8]);
        assert!(subs.iter().all(|h| g.is_subgroup(h) && g.is_normal_subgroup(h)));
        assert!(!g.is_subgroup(&[0, 1]));
    }
}
