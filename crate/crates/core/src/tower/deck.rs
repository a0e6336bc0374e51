use super::{Tower, TowerError};
use crate::covering::{deck_group, DeckGroup};

/// Deck groups per level and the projections `G_{i+1} → G_i` through the
/// bondings.
#[derive(Clone, Debug)]
pub struct DeckTower {
    pub groups: Vec<DeckGroup>,
    /// `projections[i][g]` is the image in `G_i` of element `g` of `G_{i+1}`.
    pub projections: Vec<Vec<usize>>,
    pub homomorphic: Vec<bool>,
    pub surjective: Vec<bool>,
}

impl DeckTower {
    pub fn orders(&self) -> Vec<usize> {
        self.groups.iter().map(DeckGroup::order).collect()
    }
}

/// Projects each deck element `α` of level `i + 1` to the unique `β` of level
/// `i` with `β ∘ φ_i = φ_i ∘ α`.
pub fn deck_tower(t: &Tower) -> Result<DeckTower, TowerError> {
    let coverings = t.coverings()?;
    let groups = coverings
        .iter()
        .enumerate()
        .map(|(level, c)| deck_group(c).map_err(|source| TowerError::Level { level, source }))
        .collect::<Result<Vec<_>, _>>()?;
    let mut projections = Vec::with_capacity(t.top());
    let mut homomorphic = Vec::with_capacity(t.top());
    let mut surjective = Vec::with_capacity(t.top());
    for step in 0..t.top() {
        let phi = t.phi(step);
        let (lo, hi) = (&groups[step], &groups[step + 1]);
        let x = hi.anchor();
        let mut image = Vec::with_capacity(hi.order());
        for (g, alpha) in hi.elements().iter().enumerate() {
            let lost = TowerError::NotDeckCompatible { level: step + 1, element: g };
            let beta = lo
                .find_mapping(phi.vertex(x), phi.vertex(alpha.vertex(x)))
                .ok_or_else(|| lost.clone())?;
            let down = phi.then(lo.element(beta))?;
            let across = alpha.then(phi)?;
            if down != across {
                return Err(lost);
            }
            image.push(beta);
        }
        let hom = (0..hi.order())
            .all(|a| (0..hi.order()).all(|b| image[hi.compose(a, b)] == lo.compose(image[a], image[b])));
        let mut hit = vec![false; lo.order()];
        for &b in &image {
            hit[b] = true;
        }
        homomorphic.push(hom);
        surjective.push(hit.iter().all(|&h| h));
        projections.push(image);
    }
    Ok(DeckTower {
        groups,
        projections,
        homomorphic,
        surjective,
    })
}
