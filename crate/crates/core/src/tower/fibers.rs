use super::{Tower, TowerError};
use crate::graph::Vertex;

/// A point of a fiber at level `level` not hit from the fiber above.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DeadEnd {
    pub level: usize,
    pub point: Vertex,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberReport {
    /// `thread[i]` is a vertex of `Δ_i`, with `ψ_i(thread[i+1]) = thread[i]`.
    pub thread: Vec<Vertex>,
    pub fiber_sizes: Vec<usize>,
    /// Whether `φ_i` maps the level `i + 1` fiber onto the level `i` fiber.
    pub onto: Vec<bool>,
    pub dead_ends: Vec<DeadEnd>,
    /// First step at which the `Δ`-thread cannot be continued.
    pub thread_ends_at: Option<usize>,
}

/// Fibers over a thread `v = d_0 ← d_1 ← …` (first preimage at each step)
/// and how the bondings carry them onto each other.
pub fn limit_fiber_report(t: &Tower, v: Vertex) -> Result<FiberReport, TowerError> {
    let coverings = t.coverings()?;
    if v.0 >= t.delta(0).vertex_count() {
        return Err(TowerError::Shape(format!("vertex {} is not in Δ_0", v.0)));
    }
    let mut thread = vec![v];
    let mut thread_ends_at = None;
    for step in 0..t.top() {
        let here = *thread.last().expect("thread starts at v");
        match t.delta(step + 1).vertices().find(|&u| t.psi(step).vertex(u) == here) {
            Some(u) => thread.push(u),
            None => {
                thread_ends_at = Some(step);
                break;
            }
        }
    }
    let fiber_sizes: Vec<usize> = thread
        .iter()
        .enumerate()
        .map(|(i, &d)| coverings[i].vertex_fiber(d).len())
        .collect();
    let mut onto = Vec::new();
    let mut dead_ends = Vec::new();
    for step in 0..thread.len().saturating_sub(1) {
        let below = coverings[step].vertex_fiber(thread[step]);
        let above = coverings[step + 1].vertex_fiber(thread[step + 1]);
        let hit: Vec<Vertex> = above.iter().map(|&x| t.phi(step).vertex(x)).collect();
        let missing: Vec<Vertex> = below.iter().copied().filter(|x| !hit.contains(x)).collect();
        onto.push(missing.is_empty());
        dead_ends.extend(missing.into_iter().map(|point| DeadEnd { level: step, point }));
    }
    Ok(FiberReport {
        thread,
        fiber_sizes,
        onto,
        dead_ends,
        thread_ends_at,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::covering::fixtures::wrap;
    use crate::graph::{cycle, disjoint_union, GraphMorphism};
    use crate::tower::fixtures::pro_two;
    use crate::tower::{validate_tower, Side, TowerWarning};

    #[test]
    fn pro_two_fibers() {
        let r = limit_fiber_report(&pro_two(3), Vertex(0)).unwrap();
        assert_eq!(r.fiber_sizes, vec![1, 2, 4, 8]);
        assert!(r.onto.iter().all(|&o| o));
        assert!(r.dead_ends.is_empty());
    }

    #[test]
    fn constant_fibers() {
        let t = Tower::constant(&wrap(6, 3), 2, None).unwrap();
        assert_eq!(limit_fiber_report(&t, Vertex(1)).unwrap().fiber_sizes, vec![2, 2, 2]);
    }

    #[test]
    fn disjoint_copy_level_dead_ends() {
        let c3 = Arc::new(cycle(3));
        let two = Arc::new(disjoint_union(&cycle(3), &cycle(3)));
        let vmap = (0..6).map(|i| Vertex(i % 3)).collect();
        let edges: Vec<(usize, bool)> = (0..6).map(|i| (i % 3, false)).collect();
        let f0 = GraphMorphism::from_edge_map(two.clone(), c3.clone(), vmap, &edges).unwrap();
        let f1 = GraphMorphism::identity(c3.clone());
        let into_first = GraphMorphism::from_edge_map(
            c3.clone(),
            two,
            (0..3).map(Vertex).collect(),
            &[(0, false), (1, false), (2, false)],
        )
        .unwrap();
        let t = Tower::new(vec![f0, f1], vec![into_first], vec![GraphMorphism::identity(c3)], None).unwrap();
        let v = validate_tower(&t);
        assert!(v.is_valid());
        assert!(matches!(
            v.warnings[0],
            TowerWarning::BondingNotSurjective { step: 0, side: Side::Gamma, .. }
        ));
        let r = limit_fiber_report(&t, Vertex(0)).unwrap();
        assert_eq!(r.fiber_sizes, vec![2, 1]);
        assert_eq!(r.dead_ends, vec![DeadEnd { level: 0, point: Vertex(3) }]);
    }
}
