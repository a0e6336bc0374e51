use std::collections::VecDeque;

use super::word::{substitute, FreeWord, GeneratorImages, Letter};
use super::GroupError;

/// A finite-index subgroup `H` of the free group `F_rank`, encoded as the
/// right action of `F_rank` on the cosets `H\F_rank`, with coset `H` at
/// point 0. Always transitive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PermRep {
    rank: usize,
    degree: usize,
    perms: Vec<Vec<usize>>,
    inverses: Vec<Vec<usize>>,
}

impl PermRep {
    /// Validates permutation images (`perms[g][p]` is `p · x_g`) and
    /// transitivity. `degree` is needed because rank 0 has no permutations.
    pub fn new(degree: usize, perms: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        if degree == 0 {
            return Err(GroupError::InvalidRep("degree must be at least 1".into()));
        }
        let mut inverses = Vec::with_capacity(perms.len());
        for (g, perm) in perms.iter().enumerate() {
            if perm.len() != degree {
                return Err(GroupError::InvalidRep(format!(
                    "permutation {g} has {} entries, expected {degree}",
                    perm.len()
                )));
            }
            let mut inv = vec![usize::MAX; degree];
            for (p, &q) in perm.iter().enumerate() {
                if q >= degree || inv[q] != usize::MAX {
                    return Err(GroupError::InvalidRep(format!(
                        "permutation {g} is not a bijection of 0..{degree}"
                    )));
                }
                inv[q] = p;
            }
            inverses.push(inv);
        }
        let orbits = orbits(degree, &perms);
        if orbits.len() != 1 {
            return Err(GroupError::NotTransitive { orbits });
        }
        Ok(PermRep {
            rank: perms.len(),
            degree,
            perms,
            inverses,
        })
    }

    /// The whole group `F_rank` (index 1).
    pub fn trivial(rank: usize) -> Self {
        PermRep::new(1, vec![vec![0]; rank]).expect("identity action on one point")
    }

    /// The subgroup `nZ` of `F_1 = Z`: a single `n`-cycle.
    pub fn cycle(n: usize) -> Result<Self, GroupError> {
        PermRep::new(n, vec![(0..n).map(|p| (p + 1) % n).collect()])
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Index of the subgroup; equal to the degree.
    pub fn index(&self) -> usize {
        self.degree
    }

    pub fn perms(&self) -> &[Vec<usize>] {
        &self.perms
    }

    pub fn apply(&self, point: usize, letter: Letter) -> usize {
        if letter.inverse {
            self.inverses[letter.generator][point]
        } else {
            self.perms[letter.generator][point]
        }
    }

    /// Right action of a word: `act(p, uv) = act(act(p, u), v)`.
    pub fn act(&self, point: usize, w: &FreeWord) -> Result<usize, GroupError> {
        if point >= self.degree {
            return Err(GroupError::PointOutOfRange {
                point,
                degree: self.degree,
            });
        }
        let mut p = point;
        for &l in w.letters() {
            if l.generator >= self.rank {
                return Err(GroupError::GeneratorOutOfRange {
                    generator: l.generator,
                    rank: self.rank,
                });
            }
            p = self.apply(p, l);
        }
        Ok(p)
    }

    /// Membership in `H = Stab(0)`.
    pub fn contains(&self, w: &FreeWord) -> Result<bool, GroupError> {
        Ok(self.act(0, w)? == 0)
    }

    /// Breadth-first labelling from `start` with letters in the order
    /// `x0, x0^-1, x1, ...`; `label[p]` is the new name of point `p`, and
    /// `word[q]` the transversal word reaching new point `q`.
    fn bfs_labels(&self, start: usize) -> (Vec<usize>, Vec<FreeWord>) {
        let mut label = vec![usize::MAX; self.degree];
        let mut words = Vec::with_capacity(self.degree);
        let mut queue = VecDeque::from([start]);
        label[start] = 0;
        words.push(FreeWord::identity());
        while let Some(p) = queue.pop_front() {
            for slot in 0..2 * self.rank {
                let l = Letter::from_slot(slot);
                let q = self.apply(p, l);
                if label[q] == usize::MAX {
                    label[q] = words.len();
                    let w = &words[label[p]] * &FreeWord::letter(l);
                    words.push(w);
                    queue.push_back(q);
                }
            }
        }
        (label, words)
    }

    fn relabelled(&self, label: &[usize]) -> PermRep {
        let mut perms = vec![vec![0; self.degree]; self.rank];
        let mut inverses = vec![vec![0; self.degree]; self.rank];
        for g in 0..self.rank {
            for p in 0..self.degree {
                let q = self.perms[g][p];
                perms[g][label[p]] = label[q];
                inverses[g][label[q]] = label[p];
            }
        }
        PermRep {
            rank: self.rank,
            degree: self.degree,
            perms,
            inverses,
        }
    }

    /// Canonical form: points renamed in breadth-first order from 0. Two
    /// reps describe the same subgroup iff their canonical forms are equal.
    pub fn canonical(&self) -> PermRep {
        let (label, _) = self.bfs_labels(0);
        self.relabelled(&label)
    }

    /// The same action with `point` as the new base point, in canonical
    /// form. Represents the conjugate `t⁻¹ H t` where `t` carries 0 to
    /// `point`.
    pub fn rebased(&self, point: usize) -> Result<PermRep, GroupError> {
        if point >= self.degree {
            return Err(GroupError::PointOutOfRange {
                point,
                degree: self.degree,
            });
        }
        let (label, _) = self.bfs_labels(point);
        Ok(self.relabelled(&label))
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical() == *self
    }

    /// Schreier transversal: `words()[p]` carries 0 to `p`.
    pub fn transversal(&self) -> Vec<FreeWord> {
        let (label, words) = self.bfs_labels(0);
        let mut out = vec![FreeWord::identity(); self.degree];
        for p in 0..self.degree {
            out[p] = words[label[p]].clone();
        }
        out
    }

    /// Nontrivial Schreier generators `t_p x t_{p·x}⁻¹` of `H`, ordered by
    /// point and then generator. They freely generate `H`, so there are
    /// `1 + n(r - 1)` of them for `r ≥ 1`.
    pub fn schreier_generators(&self) -> Vec<FreeWord> {
        let t = self.transversal();
        let mut out = Vec::new();
        for p in 0..self.degree {
            for g in 0..self.rank {
                let q = self.perms[g][p];
                let w = &(&t[p] * &FreeWord::generator(g)) * &t[q].inverse();
                if !w.is_empty() {
                    out.push(w);
                }
            }
        }
        out
    }
}

/// Orbits of the group generated by `perms` on `0..degree`. Forward images
/// suffice since every permutation has finite order.
pub fn orbits(degree: usize, perms: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; degree];
    let mut out = Vec::new();
    for start in 0..degree {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut orbit = vec![start];
        let mut i = 0;
        while i < orbit.len() {
            let p = orbit[i];
            i += 1;
            for perm in perms {
                let q = perm[p];
                if !seen[q] {
                    seen[q] = true;
                    orbit.push(q);
                }
            }
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}

fn check_rank(a: usize, b: usize) -> Result<(), GroupError> {
    if a != b {
        return Err(GroupError::RankMismatch {
            expected: a,
            found: b,
        });
    }
    Ok(())
}

/// `Stab_h(0) ⊆ Stab_k(0)`: every Schreier generator of `h` fixes 0 in `k`.
pub fn subgroup_leq(h: &PermRep, k: &PermRep) -> Result<bool, GroupError> {
    check_rank(h.rank, k.rank)?;
    for w in h.schreier_generators() {
        if !k.contains(&w)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `H` is normal iff it acts trivially on its own cosets.
pub fn is_normal(rep: &PermRep) -> bool {
    rep.schreier_generators().iter().all(|w| {
        (0..rep.degree).all(|p| rep.act(p, w).expect("generators are in range") == p)
    })
}

/// Same subgroup: a 0-fixing relabelling intertwines the two actions.
pub fn rep_equivalent(a: &PermRep, b: &PermRep) -> Result<bool, GroupError> {
    check_rank(a.rank, b.rank)?;
    Ok(a.degree == b.degree && a.canonical() == b.canonical())
}

/// `φ(N_src) ⊆ N_tgt` for the homomorphism `φ` given by `images`.
pub fn pushforward_leq(
    n_src: &PermRep,
    images: &GeneratorImages,
    n_tgt: &PermRep,
) -> Result<bool, GroupError> {
    Ok(pushforward_escape(n_src, images, n_tgt)?.is_none())
}

/// The first Schreier generator of `n_src` whose image leaves `n_tgt`.
pub fn pushforward_escape(
    n_src: &PermRep,
    images: &GeneratorImages,
    n_tgt: &PermRep,
) -> Result<Option<FreeWord>, GroupError> {
    check_rank(images.source_rank(), n_src.rank)?;
    check_rank(images.target_rank(), n_tgt.rank)?;
    for w in n_src.schreier_generators() {
        if !n_tgt.contains(&substitute(&w, images)?)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Largest `m^r` accepted by [`abelian_kernel_rep`].
pub const MAX_KERNEL_DEGREE: usize = 1 << 20;

/// The kernel of `F_rank -> (Z/modulus)^rank`, as the translation action on
/// `(Z/modulus)^rank`; point `Σ c_k modulus^k` has coordinates `c_k`.
pub fn abelian_kernel_rep(rank: usize, modulus: usize) -> Result<PermRep, GroupError> {
    if modulus == 0 {
        return Err(GroupError::InvalidRep("modulus must be positive".into()));
    }
    let degree = (0..rank).try_fold(1usize, |acc, _| acc.checked_mul(modulus));
    let degree = match degree {
        Some(d) if d <= MAX_KERNEL_DEGREE => d,
        _ => {
            return Err(GroupError::ResourceLimit(format!(
                "translation action of degree {modulus}^{rank} exceeds the bound {MAX_KERNEL_DEGREE}"
            )))
        }
    };
    let perms = (0..rank)
        .map(|k| {
            let stride = modulus.pow(k as u32);
            (0..degree)
                .map(|p| {
                    let c = (p / stride) % modulus;
                    p - c * stride + ((c + 1) % modulus) * stride
                })
                .collect()
        })
        .collect();
    PermRep::new(degree, perms)
}

pub fn mod_p_kernel_rep(rank: usize, p: usize) -> Result<PermRep, GroupError> {
    if p < 2 || (2..p).take_while(|d| d * d <= p).any(|d| p % d == 0) {
        return Err(GroupError::InvalidRep(format!("{p} is not prime")));
    }
    abelian_kernel_rep(rank, p)
}
