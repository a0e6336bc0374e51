//! Finite chains of covering squares.
//!
//! Level `i` is a covering `f_i: Γ_i → Δ_i`; step `i` carries bondings
//! `φ_i: Γ_{i+1} → Γ_i` and `ψ_i: Δ_{i+1} → Δ_i` with
//! `f_i ∘ φ_i = ψ_i ∘ f_{i+1}`. Longer bondings are composites.

mod deck;
mod fibers;
mod pairs;
mod pi1;
mod universal;

pub use deck::{deck_tower, DeckTower};
pub use fibers::{limit_fiber_report, DeadEnd, FiberReport};
pub use pairs::{classify_pair, kernel_good_pairs, GoodPairRecord, PairVerdict};
pub use pi1::{induced_hom, pi1_triviality_check, TrivialityEntry, TrivialityReport};
pub use universal::{universal_tower, UniversalSpec, UniversalTower};

use std::sync::Arc;

use thiserror::Error;

use crate::covering::{as_covering, Covering, CoveringError, StarDefect};
use crate::free_group::{FreeWord, GroupError};
use crate::graph::{same_graph, Element, FiniteGraph, GraphError, GraphMorphism, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TowerError {
    #[error("malformed tower: {0}")]
    Shape(String),
    #[error("tower carries no base point thread")]
    NoThread,
    #[error("level {level}: {source}")]
    Level {
        level: usize,
        #[source]
        source: CoveringError,
    },
    #[error("quotient chain is not decreasing at step {step}")]
    QuotientChain { step: usize },
    #[error("normal chain entry {level} is not normal")]
    NotNormal { level: usize },
    #[error("pushforward of N_{upper} escapes N_{lower}: generator {generator}")]
    Compatibility {
        lower: usize,
        upper: usize,
        generator: FreeWord,
    },
    #[error("deck element {element} of level {level} does not project to level {}", level - 1)]
    NotDeckCompatible { level: usize, element: usize },
    #[error(transparent)]
    Covering(#[from] CoveringError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A truncated inverse system of coverings.
#[derive(Clone, Debug)]
pub struct Tower {
    levels: Vec<GraphMorphism>,
    phi: Vec<GraphMorphism>,
    psi: Vec<GraphMorphism>,
    basepoints: Option<Vec<Vertex>>,
}

impl Tower {
    /// Checks only that the maps fit together; covering and commutativity
    /// checks are left to [`validate_tower`].
    pub fn new(
        levels: Vec<GraphMorphism>,
        phi: Vec<GraphMorphism>,
        psi: Vec<GraphMorphism>,
        basepoints: Option<Vec<Vertex>>,
    ) -> Result<Self, TowerError> {
        if levels.is_empty() {
            return Err(TowerError::Shape("a tower needs at least one level".into()));
        }
        let steps = levels.len() - 1;
        if phi.len() != steps || psi.len() != steps {
            return Err(TowerError::Shape(format!(
                "{} levels need {steps} bondings on each side, found {} and {}",
                levels.len(),
                phi.len(),
                psi.len()
            )));
        }
        for i in 0..steps {
            let (lo, hi) = (&levels[i], &levels[i + 1]);
            if !same_graph(phi[i].domain(), hi.domain()) || !same_graph(phi[i].codomain(), lo.domain()) {
                return Err(TowerError::Shape(format!("phi {i} does not run from Γ_{} to Γ_{i}", i + 1)));
            }
            if !same_graph(psi[i].domain(), hi.codomain()) || !same_graph(psi[i].codomain(), lo.codomain()) {
                return Err(TowerError::Shape(format!("psi {i} does not run from Δ_{} to Δ_{i}", i + 1)));
            }
        }
        if let Some(a) = &basepoints {
            if a.len() != levels.len() {
                return Err(TowerError::Shape(format!(
                    "{} base points for {} levels",
                    a.len(),
                    levels.len()
                )));
            }
            for (i, v) in a.iter().enumerate() {
                if v.0 >= levels[i].domain().vertex_count() {
                    return Err(TowerError::Shape(format!("base point of level {i} out of range")));
                }
            }
        }
        Ok(Tower {
            levels,
            phi,
            psi,
            basepoints,
        })
    }

    /// `k + 1` copies of `f` with identity bondings.
    pub fn constant(f: &GraphMorphism, k: usize, basepoint: Option<Vertex>) -> Result<Self, TowerError> {
        let phi = vec![GraphMorphism::identity(f.domain().clone()); k];
        let psi = vec![GraphMorphism::identity(f.codomain().clone()); k];
        Self::new(vec![f.clone(); k + 1], phi, psi, basepoint.map(|a| vec![a; k + 1]))
    }

    /// Index of the top level.
    pub fn top(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, i: usize) -> &GraphMorphism {
        &self.levels[i]
    }

    pub fn gamma(&self, i: usize) -> &Arc<FiniteGraph> {
        self.levels[i].domain()
    }

    pub fn delta(&self, i: usize) -> &Arc<FiniteGraph> {
        self.levels[i].codomain()
    }

    pub fn phi(&self, i: usize) -> &GraphMorphism {
        &self.phi[i]
    }

    pub fn psi(&self, i: usize) -> &GraphMorphism {
        &self.psi[i]
    }

    pub fn basepoints(&self) -> Option<&[Vertex]> {
        self.basepoints.as_deref()
    }

    pub fn basepoint_thread(&self) -> Result<&[Vertex], TowerError> {
        self.basepoints().ok_or(TowerError::NoThread)
    }

    /// `φ_{ij}: Γ_j → Γ_i` for `i ≤ j`.
    pub fn phi_composite(&self, i: usize, j: usize) -> GraphMorphism {
        composite(&self.phi, self.gamma(j), i, j)
    }

    /// `ψ_{ij}: Δ_j → Δ_i` for `i ≤ j`.
    pub fn psi_composite(&self, i: usize, j: usize) -> GraphMorphism {
        composite(&self.psi, self.delta(j), i, j)
    }

    /// The level maps as verified coverings.
    pub fn coverings(&self) -> Result<Vec<Covering>, TowerError> {
        self.levels
            .iter()
            .enumerate()
            .map(|(level, f)| as_covering(f).map_err(|source| TowerError::Level { level, source }))
            .collect()
    }

    /// Replaces the `Γ`-side bonding of step `i`.
    pub fn with_phi(&self, i: usize, phi: GraphMorphism) -> Result<Self, TowerError> {
        let mut bondings = self.phi.clone();
        bondings[i] = phi;
        Self::new(self.levels.clone(), bondings, self.psi.clone(), self.basepoints.clone())
    }
}

fn composite(steps: &[GraphMorphism], top: &Arc<FiniteGraph>, i: usize, j: usize) -> GraphMorphism {
    assert!(i <= j, "composite bonding needs i <= j");
    let mut m = GraphMorphism::identity(top.clone());
    for step in (i..j).rev() {
        m = m.then(&steps[step]).expect("tower shape was checked");
    }
    m
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TowerIssue {
    NotLocallyBijective { level: usize, vertex: Vertex, defect: StarDefect },
    /// `f_i ∘ φ_i` and `ψ_i ∘ f_{i+1}` differ at an element of `Γ_{i+1}`.
    SquareFails { step: usize, witness: Element },
    ThreadBroken { step: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Gamma,
    Delta,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TowerWarning {
    BondingNotSurjective { step: usize, side: Side, missed: Element },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TowerReport {
    pub issues: Vec<TowerIssue>,
    pub warnings: Vec<TowerWarning>,
}

impl TowerReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Checks every level map for local bijectivity, every square for
/// commutativity and the base point thread; non-surjective bondings are
/// warnings.
pub fn validate_tower(t: &Tower) -> TowerReport {
    let mut report = TowerReport::default();
    for (level, f) in t.levels.iter().enumerate() {
        if let Err(CoveringError::NotLocallyBijective { vertex, defect }) = as_covering(f) {
            report.issues.push(TowerIssue::NotLocallyBijective { level, vertex, defect });
        }
    }
    for step in 0..t.top() {
        let left = t.phi[step].then(&t.levels[step]).expect("tower shape was checked");
        let right = t.levels[step + 1].then(&t.psi[step]).expect("tower shape was checked");
        if let Some(witness) = left.first_difference(&right) {
            report.issues.push(TowerIssue::SquareFails { step, witness });
        }
        if let Some(a) = &t.basepoints {
            if t.phi[step].vertex(a[step + 1]) != a[step] {
                report.issues.push(TowerIssue::ThreadBroken { step });
            }
        }
        for (side, m) in [(Side::Gamma, &t.phi[step]), (Side::Delta, &t.psi[step])] {
            let missed = m
                .first_missed_vertex()
                .map(Element::Vertex)
                .or_else(|| m.first_missed_dart().map(Element::Dart));
            if let Some(missed) = missed {
                report.warnings.push(TowerWarning::BondingNotSurjective { step, side, missed });
            }
        }
    }
    report
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::graph::cycle;

    /// `C_{m·d} → C_m` with `v_k ↦ v_{k mod m}`.
    pub fn wrap_onto(top: &Arc<FiniteGraph>, bottom: &Arc<FiniteGraph>, shift: usize) -> GraphMorphism {
        let n = top.vertex_count();
        let m = bottom.vertex_count();
        let vmap = (0..n).map(|i| Vertex((i + shift) % m)).collect();
        let edges: Vec<(usize, bool)> = (0..n).map(|i| ((i + shift) % m, false)).collect();
        GraphMorphism::from_edge_map(top.clone(), bottom.clone(), vmap, &edges).unwrap()
    }

    /// Levels `C_{m·d_i} → C_m` with wrap bondings and identity `ψ`.
    pub fn cyclic_tower(m: usize, degrees: &[usize]) -> Tower {
        let base = Arc::new(cycle(m));
        let gammas: Vec<_> = degrees.iter().map(|d| Arc::new(cycle(m * d))).collect();
        let levels = gammas.iter().map(|g| wrap_onto(g, &base, 0)).collect();
        let phi = gammas.windows(2).map(|w| wrap_onto(&w[1], &w[0], 0)).collect();
        let psi = vec![GraphMorphism::identity(base.clone()); degrees.len() - 1];
        Tower::new(levels, phi, psi, Some(vec![Vertex(0); degrees.len()])).unwrap()
    }

    pub fn pro_two(k: usize) -> Tower {
        let degrees: Vec<usize> = (0..=k).map(|i| 1 << i).collect();
        cyclic_tower(3, &degrees)
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::covering::fixtures::wrap;

    #[test]
    fn constant_tower_is_valid() {
        let t = Tower::constant(&wrap(6, 3), 3, Some(Vertex(0))).unwrap();
        let r = validate_tower(&t);
        assert!(r.is_valid() && r.warnings.is_empty());
    }

    #[test]
    fn pro_two_tower_is_valid() {
        let t = pro_two(3);
        assert!(validate_tower(&t).is_valid());
        assert_eq!(t.phi_composite(0, 3).domain().vertex_count(), 24);
        assert_eq!(t.phi_composite(2, 2), GraphMorphism::identity(t.gamma(2).clone()));
    }

    #[test]
    fn rotated_bonding_breaks_a_square() {
        let t = pro_two(2);
        let rotated = wrap_onto(t.gamma(2), t.gamma(1), 1);
        let bad = t.with_phi(1, rotated).unwrap();
        let r = validate_tower(&bad);
        assert!(r.issues.contains(&TowerIssue::SquareFails {
            step: 1,
            witness: Element::Vertex(Vertex(0))
        }));
        assert!(r.issues.contains(&TowerIssue::ThreadBroken { step: 1 }));
    }

    #[test]
    fn shape_errors() {
        let f = wrap(6, 3);
        assert!(matches!(
            Tower::new(vec![f.clone(), f.clone()], vec![], vec![], None),
            Err(TowerError::Shape(_))
        ));
        assert!(matches!(Tower::new(vec![], vec![], vec![], None), Err(TowerError::Shape(_))));
    }
}
