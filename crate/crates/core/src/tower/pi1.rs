use super::{Tower, TowerError};
use crate::covering::{pi1_data, CoveringError, Pi1Data};
use crate::free_group::{low_index_reps, pushforward_leq, EnumerationLimits, GeneratorImages, PermRep};
use crate::graph::{same_graph, GraphError, GraphMorphism};

/// The homomorphism `pi_1(dom) → pi_1(cod)` induced by `f`, on the bases of
/// `p_dom` and `p_cod`.
pub fn induced_hom(f: &GraphMorphism, p_dom: &Pi1Data, p_cod: &Pi1Data) -> Result<GeneratorImages, TowerError> {
    if !same_graph(f.domain(), p_dom.graph()) || !same_graph(f.codomain(), p_cod.graph()) {
        return Err(GraphError::GraphMismatch("pi_1 data does not match the morphism".into()).into());
    }
    if f.vertex(p_dom.basepoint()) != p_cod.basepoint() {
        return Err(CoveringError::BasepointMismatch(format!(
            "`{}` maps to `{}`, not to `{}`",
            f.domain().vertex_id(p_dom.basepoint()),
            f.codomain().vertex_id(f.vertex(p_dom.basepoint())),
            f.codomain().vertex_id(p_cod.basepoint())
        ))
        .into());
    }
    let images = (0..p_dom.rank())
        .map(|k| p_cod.path_to_word(&f.map_path(&p_dom.basis_loop(k))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GeneratorImages::new(p_cod.rank(), images)?)
}

/// One normal subgroup `H` of `pi_1(Γ_level, a_level)` and the first level
/// whose fundamental group lands inside it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrivialityEntry {
    pub level: usize,
    pub subgroup: PermRep,
    pub satisfied_at: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrivialityReport {
    pub bound: usize,
    /// Highest level whose entries decide the verdict.
    pub certified_through: usize,
    pub entries: Vec<TrivialityEntry>,
}

impl TrivialityReport {
    /// Every subgroup at the certified levels is absorbed within the tower.
    pub fn m_trivial(&self) -> bool {
        self.entries
            .iter()
            .filter(|e| e.level <= self.certified_through)
            .all(|e| e.satisfied_at.is_some())
    }

    pub fn level_satisfied(&self, level: usize) -> bool {
        self.entries
            .iter()
            .filter(|e| e.level == level)
            .all(|e| e.satisfied_at.is_some())
    }

    pub fn unsatisfied(&self) -> impl Iterator<Item = &TrivialityEntry> {
        self.entries.iter().filter(|e| e.satisfied_at.is_none())
    }
}

/// For every level `i` and every normal subgroup `H` of index at most
/// `bound` in `pi_1(Γ_i, a_i)`, finds the first `j ≥ i` with
/// `φ_{ij}(pi_1(Γ_j, a_j)) ⊆ H`.
///
/// Levels near the top can only look at a few deeper levels, so the
/// verdict covers levels `0..=certify_through`; all levels are reported.
pub fn pi1_triviality_check(
    t: &Tower,
    bound: usize,
    certify_through: usize,
    limits: EnumerationLimits,
) -> Result<TrivialityReport, TowerError> {
    let thread = t.basepoint_thread()?;
    if certify_through > t.top() {
        return Err(TowerError::Shape(format!(
            "cannot certify through level {certify_through} of a tower with top level {}",
            t.top()
        )));
    }
    let bases = (0..=t.top())
        .map(|i| pi1_data(t.gamma(i), thread[i]))
        .collect::<Result<Vec<_>, _>>()?;
    let mut entries = Vec::new();
    for i in 0..=t.top() {
        let homs = (i..=t.top())
            .map(|j| induced_hom(&t.phi_composite(i, j), &bases[j], &bases[i]))
            .collect::<Result<Vec<_>, _>>()?;
        for h in low_index_reps(bases[i].rank(), bound, true, limits)? {
            let mut satisfied_at = None;
            for (offset, hom) in homs.iter().enumerate() {
                let whole = PermRep::trivial(hom.source_rank());
                if pushforward_leq(&whole, hom, &h)? {
                    satisfied_at = Some(i + offset);
                    break;
                }
            }
            entries.push(TrivialityEntry {
                level: i,
                subgroup: h,
                satisfied_at,
            });
        }
    }
    Ok(TrivialityReport {
        bound,
        certified_through: certify_through,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::covering::fixtures::wrap;
    use crate::free_group::FreeWord;
    use crate::graph::{bouquet, Vertex};
    use crate::tower::fixtures::{cyclic_tower, pro_two};

    #[test]
    fn identity_induces_identity() {
        let g = Arc::new(bouquet(2));
        let p = pi1_data(&g, Vertex(0)).unwrap();
        let h = induced_hom(&GraphMorphism::identity(g), &p, &p).unwrap();
        assert_eq!(h, GeneratorImages::identity(2));
    }

    #[test]
    fn wrap_squares_the_generator() {
        let f = wrap(6, 3);
        let up = pi1_data(f.domain(), Vertex(0)).unwrap();
        let down = pi1_data(f.codomain(), Vertex(0)).unwrap();
        let h = induced_hom(&f, &up, &down).unwrap();
        assert_eq!(h.images(), &[FreeWord::generator(0).pow(2)]);
    }

    #[test]
    fn loop_collapse() {
        let b2 = Arc::new(bouquet(2));
        let b1 = Arc::new(bouquet(1));
        let f = GraphMorphism::from_edge_map(b2.clone(), b1.clone(), vec![Vertex(0)], &[(0, false), (0, false)]).unwrap();
        let h = induced_hom(&f, &pi1_data(&b2, Vertex(0)).unwrap(), &pi1_data(&b1, Vertex(0)).unwrap()).unwrap();
        assert_eq!(h.images(), &[FreeWord::generator(0), FreeWord::generator(0)]);
    }

    #[test]
    fn pro_two_is_two_trivial_not_three_trivial() {
        let t = pro_two(4);
        let two = pi1_triviality_check(&t, 2, 0, EnumerationLimits::default()).unwrap();
        assert!(two.m_trivial());
        for e in &two.entries {
            if e.level < 4 && e.subgroup.degree() == 2 {
                assert_eq!(e.satisfied_at, Some(e.level + 1));
            }
        }
        let three = pi1_triviality_check(&t, 3, 0, EnumerationLimits::default()).unwrap();
        assert!(!three.m_trivial());
        assert!(three.unsatisfied().filter(|e| e.subgroup.degree() == 3).count() == 5);
    }

    #[test]
    fn factorial_tower_is_three_trivial() {
        let t = cyclic_tower(3, &[1, 2, 6, 24]);
        let r = pi1_triviality_check(&t, 3, 0, EnumerationLimits::default()).unwrap();
        assert!(r.m_trivial());
        assert!(r.level_satisfied(1));
        assert!(!r.level_satisfied(2));
    }
}
