use std::sync::Arc;

use super::pi1::induced_hom;
use super::{Tower, TowerError};
use crate::covering::{cover_from_subgroup, lift, pi1_data, CoveringError, DerivedCover};
use crate::free_group::{is_normal, pushforward_escape, PermRep};
use crate::graph::{Congruence, FiniteGraph, GraphMorphism, Vertex};

/// A base graph, a decreasing chain of congruences `S_0 ⊇ … ⊇ S_k` on it,
/// and normal subgroups `N_i` of `pi_1(Δ/S_i, S_i[b])`.
#[derive(Clone, Debug)]
pub struct UniversalSpec {
    pub base: Arc<FiniteGraph>,
    pub basepoint: Vertex,
    pub quotients: Vec<Congruence>,
    pub normals: Vec<PermRep>,
}

impl UniversalSpec {
    /// All quotients diagonal.
    pub fn over_base(base: Arc<FiniteGraph>, basepoint: Vertex, normals: Vec<PermRep>) -> Self {
        let quotients = vec![Congruence::diagonal(base.clone()); normals.len()];
        UniversalSpec {
            base,
            basepoint,
            quotients,
            normals,
        }
    }
}

#[derive(Clone, Debug)]
pub struct UniversalTower {
    pub tower: Tower,
    pub levels: Vec<DerivedCover>,
}

pub fn universal_tower(spec: &UniversalSpec) -> Result<UniversalTower, TowerError> {
    let k = spec.normals.len();
    if k == 0 || spec.quotients.len() != k {
        return Err(TowerError::Shape(format!(
            "{} quotients and {} normal subgroups; need equally many, at least one",
            spec.quotients.len(),
            k
        )));
    }
    let mut deltas = Vec::with_capacity(k);
    let mut projections = Vec::with_capacity(k);
    for s in &spec.quotients {
        if !crate::graph::same_graph(s.base(), &spec.base) {
            return Err(TowerError::Shape("a quotient congruence lives on another graph".into()));
        }
        let (q, p) = s.quotient();
        deltas.push(q);
        projections.push(p);
    }
    let mut psi = Vec::with_capacity(k - 1);
    for step in 0..k - 1 {
        let m = projections[step]
            .descend(&spec.quotients[step + 1])?
            .map_err(|_| TowerError::QuotientChain { step })?
            .rebind(deltas[step + 1].clone(), deltas[step].clone())?;
        psi.push(m);
    }
    let bases: Vec<Vertex> = projections.iter().map(|p| p.vertex(spec.basepoint)).collect();
    let p1 = deltas
        .iter()
        .zip(&bases)
        .map(|(d, &b)| pi1_data(d, b))
        .collect::<Result<Vec<_>, _>>()?;
    for (level, n) in spec.normals.iter().enumerate() {
        if !is_normal(n) {
            return Err(TowerError::NotNormal { level });
        }
    }
    for j in 1..k {
        let mut down = GraphMorphism::identity(deltas[j].clone());
        for i in (0..j).rev() {
            down = down.then(&psi[i])?;
            let hom = induced_hom(&down, &p1[j], &p1[i])?;
            if let Some(generator) = pushforward_escape(&spec.normals[j], &hom, &spec.normals[i])? {
                return Err(TowerError::Compatibility {
                    lower: i,
                    upper: j,
                    generator,
                });
            }
        }
    }
    let levels = (0..k)
        .map(|i| {
            cover_from_subgroup(&deltas[i], bases[i], &spec.normals[i])
                .map_err(|source| TowerError::Level { level: i, source })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut phi = Vec::with_capacity(k - 1);
    for step in 0..k - 1 {
        let (lo, hi) = (&levels[step], &levels[step + 1]);
        let g = hi.covering.map().then(&psi[step])?;
        let h = lift(&g, &lo.covering, hi.basepoint, lo.basepoint)?
            .into_map()
            .ok_or_else(|| TowerError::Level {
                level: step,
                source: CoveringError::Internal("bonding does not lift although the chain is compatible".into()),
            })?;
        phi.push(h);
    }
    let tower = Tower::new(
        levels.iter().map(|l| l.covering.map().clone()).collect(),
        phi,
        psi,
        Some(levels.iter().map(|l| l.basepoint).collect()),
    )?;
    Ok(UniversalTower { tower, levels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::{image_subgroup, is_regular};
    use crate::free_group::{abelian_kernel_rep, mod_p_kernel_rep, rep_equivalent};
    use crate::graph::{bouquet, cycle};
    use crate::tower::{deck_tower, kernel_good_pairs, validate_tower, PairVerdict};

    fn factorial_spec() -> UniversalSpec {
        let normals = [1, 2, 6, 24].iter().map(|&n| PermRep::cycle(n).unwrap()).collect();
        UniversalSpec::over_base(Arc::new(cycle(3)), Vertex(0), normals)
    }

    #[test]
    fn factorial_tower_over_c3() {
        let u = universal_tower(&factorial_spec()).unwrap();
        let sizes: Vec<usize> = (0..4).map(|i| u.tower.gamma(i).vertex_count()).collect();
        assert_eq!(sizes, vec![3, 6, 18, 72]);
        assert!(validate_tower(&u.tower).is_valid());
        for c in u.tower.coverings().unwrap() {
            assert!(is_regular(&c).unwrap().0.is_regular());
        }
        let pairs = kernel_good_pairs(&u.tower, 3).unwrap();
        assert!(pairs.iter().all(|p| p.verdict == PairVerdict::RegularGood));
    }

    #[test]
    fn mod_two_mod_four_over_b2() {
        let normals = vec![
            PermRep::trivial(2),
            mod_p_kernel_rep(2, 2).unwrap(),
            abelian_kernel_rep(2, 4).unwrap(),
        ];
        let spec = UniversalSpec::over_base(Arc::new(bouquet(2)), Vertex(0), normals.clone());
        let u = universal_tower(&spec).unwrap();
        assert!(validate_tower(&u.tower).is_valid());
        assert_eq!(deck_tower(&u.tower).unwrap().orders(), vec![1, 4, 16]);
        let p = pi1_data(u.tower.delta(0), Vertex(0)).unwrap();
        for (level, n) in u.levels.iter().zip(&normals) {
            let image = image_subgroup(&level.covering, level.basepoint, &p).unwrap();
            assert!(rep_equivalent(&image, n).unwrap());
        }
    }

    #[test]
    fn single_level_identity() {
        let spec = UniversalSpec::over_base(Arc::new(cycle(4)), Vertex(0), vec![PermRep::trivial(1)]);
        let u = universal_tower(&spec).unwrap();
        assert!(u.tower.level(0).is_bijective());
    }

    #[test]
    fn incompatible_chain_is_rejected() {
        let normals = vec![PermRep::cycle(2).unwrap(), PermRep::cycle(3).unwrap()];
        let spec = UniversalSpec::over_base(Arc::new(cycle(3)), Vertex(0), normals);
        assert!(matches!(
            universal_tower(&spec),
            Err(TowerError::Compatibility { lower: 0, upper: 1, .. })
        ));
        let spec = UniversalSpec::over_base(
            Arc::new(bouquet(2)),
            Vertex(0),
            vec![PermRep::new(3, vec![vec![1, 0, 2], vec![0, 2, 1]]).unwrap()],
        );
        assert!(matches!(universal_tower(&spec), Err(TowerError::NotNormal { level: 0 })));
    }
}
