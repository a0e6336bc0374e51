use super::{Tower, TowerError};
use crate::covering::{as_covering, is_regular};
use crate::graph::{Congruence, GraphMorphism, InducedMapWitness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PairVerdict {
    /// No induced map between the quotients.
    NotHalf,
    /// The induced map exists but is not locally bijective.
    Half,
    /// The induced map is a covering.
    Good,
    /// The induced map is a regular covering of connected graphs.
    RegularGood,
}

impl PairVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            PairVerdict::NotHalf => "not_half",
            PairVerdict::Half => "half",
            PairVerdict::Good => "good",
            PairVerdict::RegularGood => "regular_good",
        }
    }
}

#[derive(Clone, Debug)]
pub struct GoodPairRecord {
    pub lower: usize,
    pub upper: usize,
    pub r: Congruence,
    pub s: Congruence,
    pub induced: Option<GraphMorphism>,
    pub witness: Option<InducedMapWitness>,
    pub verdict: PairVerdict,
}

/// Classifies `(r, s)` for `f`: does `f` induce a map `dom/r → cod/s`, and is
/// it a (regular) covering.
pub fn classify_pair(
    f: &GraphMorphism,
    r: &Congruence,
    s: &Congruence,
) -> Result<(PairVerdict, Result<GraphMorphism, InducedMapWitness>), TowerError> {
    let induced = match f.induced_quotient_map(r, s)? {
        Ok(m) => m,
        Err(w) => return Ok((PairVerdict::NotHalf, Err(w))),
    };
    let verdict = match as_covering(&induced) {
        Err(_) => PairVerdict::Half,
        Ok(c) => {
            let connected = c.domain().is_connected() && c.codomain().is_connected() && c.domain().vertex_count() > 0;
            if connected && is_regular(&c)?.0.is_regular() {
                PairVerdict::RegularGood
            } else {
                PairVerdict::Good
            }
        }
    };
    Ok((verdict, Ok(induced)))
}

/// The kernel pairs `(ker φ_{ij}, ker ψ_{ij})` for `f_j`, for every `i ≤ j`.
pub fn kernel_good_pairs(t: &Tower, top: usize) -> Result<Vec<GoodPairRecord>, TowerError> {
    if top > t.top() {
        return Err(TowerError::Shape(format!("level {top} is above the top level {}", t.top())));
    }
    let f = t.level(top);
    (0..=top)
        .map(|i| {
            let r = t.phi_composite(i, top).kernel();
            let s = t.psi_composite(i, top).kernel();
            let (verdict, induced) = classify_pair(f, &r, &s)?;
            let (induced, witness) = match induced {
                Ok(m) => (Some(m), None),
                Err(w) => (None, Some(w)),
            };
            Ok(GoodPairRecord {
                lower: i,
                upper: top,
                r,
                s,
                induced,
                witness,
                verdict,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::graph::{bouquet, Dart};
    use crate::tower::fixtures::pro_two;

    #[test]
    fn pro_two_pairs_are_regular_good() {
        let t = pro_two(2);
        let pairs = kernel_good_pairs(&t, 2).unwrap();
        assert_eq!(pairs.len(), 3);
        assert!(pairs.iter().all(|p| p.verdict == PairVerdict::RegularGood));
        assert!(pairs[2].r.is_diagonal() && pairs[2].s.is_diagonal());
        assert_eq!(pairs[0].induced.as_ref().unwrap().domain().vertex_count(), 3);
        assert_eq!(pairs[1].induced.as_ref().unwrap().domain().vertex_count(), 6);
    }

    #[test]
    fn merging_loops_downstairs_only_is_half() {
        let b2 = Arc::new(bouquet(2));
        let f = GraphMorphism::identity(b2.clone());
        let r = Congruence::diagonal(b2.clone());
        let s = Congruence::from_classes(b2, &[], &[vec![Dart(0), Dart(2)]]).unwrap();
        let (verdict, induced) = classify_pair(&f, &r, &s).unwrap();
        assert_eq!(verdict, PairVerdict::Half);
        assert_eq!(induced.unwrap().codomain().edge_count(), 1);
    }

    #[test]
    fn merging_upstairs_only_is_not_half() {
        let b2 = Arc::new(bouquet(2));
        let f = GraphMorphism::identity(b2.clone());
        let r = Congruence::from_classes(b2.clone(), &[], &[vec![Dart(0), Dart(2)]]).unwrap();
        let s = Congruence::diagonal(b2);
        let (verdict, induced) = classify_pair(&f, &r, &s).unwrap();
        assert_eq!(verdict, PairVerdict::NotHalf);
        assert!(induced.is_err());
    }
}
