use super::pi1::Pi1Data;
use super::{Covering, CoveringError};
use crate::free_group::{FreeWord, GroupError, PermRep};
use crate::graph::{same_graph, Vertex};

/// The monodromy action of `pi_1(codomain, b)` on the fiber over `b`, with
/// `a` as point 0, in canonical form. Its point stabiliser is
/// `f_* pi_1(domain, a)`.
pub fn image_subgroup(c: &Covering, a: Vertex, p: &Pi1Data) -> Result<PermRep, CoveringError> {
    if !same_graph(p.graph(), c.codomain()) {
        return Err(CoveringError::BasepointMismatch(
            "pi_1 data belongs to another graph".into(),
        ));
    }
    if a.0 >= c.domain().vertex_count() {
        return Err(CoveringError::BasepointMismatch(format!("vertex {} out of range", a.0)));
    }
    let b = p.basepoint();
    if c.map().vertex(a) != b {
        return Err(CoveringError::BasepointMismatch(format!(
            "vertex `{}` lies over `{}`, not over the base point `{}`",
            c.domain().vertex_id(a),
            c.codomain().vertex_id(c.map().vertex(a)),
            c.codomain().vertex_id(b)
        )));
    }
    let mut fiber: Vec<Vertex> = vec![a];
    fiber.extend(c.vertex_fiber(b).iter().copied().filter(|&v| v != a));
    let label = |v: Vertex| fiber.iter().position(|&w| w == v).expect("lift stays in the fiber");
    let perms = (0..p.rank())
        .map(|k| {
            let lp = p.basis_loop(k);
            fiber
                .iter()
                .map(|&start| label(c.lift_endpoint(start, &lp).expect("coverings lift every path")))
                .collect()
        })
        .collect();
    match PermRep::new(fiber.len(), perms) {
        Ok(rep) => Ok(rep.canonical()),
        Err(GroupError::NotTransitive { .. }) => Err(CoveringError::Disconnected("domain")),
        Err(e) => Err(e.into()),
    }
}

/// Re-bases a subgroup along the path class `w`: the result represents
/// `w⁻¹ H w`, the image subgroup seen from the end of the lifted path.
pub fn transport_basepoint(rep: &PermRep, w: &FreeWord) -> Result<PermRep, GroupError> {
    rep.rebased(rep.act(0, w)?)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::covering::fixtures::wrap;
    use crate::covering::{as_covering, cover_from_subgroup, pi1_data};
    use crate::free_group::{is_normal, low_index_reps, mod_p_kernel_rep, rep_equivalent, EnumerationLimits};
    use crate::graph::{bouquet, cycle, GraphMorphism};

    #[test]
    fn double_cover_monodromy_is_a_swap() {
        let c = as_covering(&wrap(6, 3)).unwrap();
        let p = pi1_data(c.codomain(), Vertex(0)).unwrap();
        let rep = image_subgroup(&c, Vertex(0), &p).unwrap();
        assert_eq!(rep, PermRep::cycle(2).unwrap());
    }

    #[test]
    fn identity_monodromy_is_trivial() {
        let g = Arc::new(cycle(3));
        let c = as_covering(&GraphMorphism::identity(g.clone())).unwrap();
        let p = pi1_data(&g, Vertex(0)).unwrap();
        assert_eq!(image_subgroup(&c, Vertex(0), &p).unwrap().degree(), 1);
    }

    #[test]
    fn basepoint_mismatch_is_reported() {
        let c = as_covering(&wrap(6, 3)).unwrap();
        let p = pi1_data(c.codomain(), Vertex(0)).unwrap();
        assert!(matches!(
            image_subgroup(&c, Vertex(1), &p),
            Err(CoveringError::BasepointMismatch(_))
        ));
    }

    #[test]
    fn round_trip_through_derived_covers() {
        let b2 = Arc::new(bouquet(2));
        let p = pi1_data(&b2, Vertex(0)).unwrap();
        for h in low_index_reps(2, 4, false, EnumerationLimits::default()).unwrap() {
            let cover = cover_from_subgroup(&b2, Vertex(0), &h).unwrap();
            let back = image_subgroup(&cover.covering, cover.basepoint, &p).unwrap();
            assert!(rep_equivalent(&back, &h).unwrap());
        }
    }

    #[test]
    fn transport_examples() {
        let k = mod_p_kernel_rep(2, 2).unwrap();
        assert!(is_normal(&k));
        let w: FreeWord = "x0 x1^-1".parse().unwrap();
        assert!(rep_equivalent(&transport_basepoint(&k, &w).unwrap(), &k).unwrap());
        let h = PermRep::new(3, vec![vec![1, 0, 2], vec![0, 2, 1]]).unwrap();
        assert!(rep_equivalent(&transport_basepoint(&h, &FreeWord::identity()).unwrap(), &h).unwrap());
        let moved = transport_basepoint(&h, &FreeWord::generator(0)).unwrap();
        assert!(!rep_equivalent(&moved, &h).unwrap());
    }
}
