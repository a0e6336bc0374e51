//! Low-index subgroup enumeration.
//!
//! Coset tables are filled one entry at a time, always at the first undefined
//! `(point, letter)` slot in scan order. Each slot receives either an existing
//! point whose inverse slot is still free, or the next fresh point. Tables
//! built this way are exactly the breadth-first canonical ones, so each
//! subgroup is produced once and no deduplication is needed.

use super::rep::{is_normal, PermRep};
use super::GroupError;

/// Default cap on search-tree nodes visited by [`low_index_reps`]; enough
/// for rank 3 up to degree 6.
pub const DEFAULT_MAX_WORK: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationLimits {
    pub max_work: u64,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits {
            max_work: DEFAULT_MAX_WORK,
        }
    }
}

struct Search {
    letters: usize,
    max_degree: usize,
    table: Vec<Vec<Option<usize>>>,
    points: usize,
    work: u64,
    max_work: u64,
    found: Vec<PermRep>,
}

impl Search {
    fn first_gap(&self) -> Option<(usize, usize)> {
        for p in 0..self.points {
            for slot in 0..self.letters {
                if self.table[p][slot].is_none() {
                    return Some((p, slot));
                }
            }
        }
        None
    }

    fn set(&mut self, p: usize, slot: usize, q: usize) {
        self.table[p][slot] = Some(q);
        self.table[q][slot ^ 1] = Some(p);
    }

    fn clear(&mut self, p: usize, slot: usize, q: usize) {
        self.table[p][slot] = None;
        self.table[q][slot ^ 1] = None;
    }

    fn emit(&mut self) {
        let rank = self.letters / 2;
        let perms = (0..rank)
            .map(|g| {
                (0..self.points)
                    .map(|p| self.table[p][2 * g].expect("complete table"))
                    .collect()
            })
            .collect();
        self.found
            .push(PermRep::new(self.points, perms).expect("complete coset tables are transitive"));
    }

    fn run(&mut self) -> Result<(), GroupError> {
        self.work += 1;
        if self.work > self.max_work {
            return Err(GroupError::ResourceLimit(format!(
                "low-index search exceeded {} nodes; raise the work bound or lower the degree",
                self.max_work
            )));
        }
        let Some((p, slot)) = self.first_gap() else {
            self.emit();
            return Ok(());
        };
        for q in 0..self.points {
            if self.table[q][slot ^ 1].is_none() {
                self.set(p, slot, q);
                self.run()?;
                self.clear(p, slot, q);
            }
        }
        if self.points < self.max_degree {
            let q = self.points;
            self.points += 1;
            self.set(p, slot, q);
            self.run()?;
            self.clear(p, slot, q);
            self.points -= 1;
        }
        Ok(())
    }
}

/// All subgroups of `F_rank` of index at most `max_degree`, one canonical
/// rep each, sorted by degree and then by permutation images. With
/// `normal_only`, only normal subgroups are kept.
pub fn low_index_reps(
    rank: usize,
    max_degree: usize,
    normal_only: bool,
    limits: EnumerationLimits,
) -> Result<Vec<PermRep>, GroupError> {
    if max_degree == 0 {
        return Err(GroupError::InvalidRep("max_degree must be at least 1".into()));
    }
    let mut search = Search {
        letters: 2 * rank,
        max_degree,
        table: vec![vec![None; 2 * rank]; max_degree],
        points: 1,
        work: 0,
        max_work: limits.max_work,
        found: Vec::new(),
    };
    search.run()?;
    let mut found = search.found;
    if normal_only {
        found.retain(is_normal);
    }
    found.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.perms().cmp(b.perms())));
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count_by_degree(reps: &[PermRep], max: usize) -> Vec<usize> {
        (1..=max).map(|n| reps.iter().filter(|r| r.degree() == n).count()).collect()
    }

    #[test]
    fn rank_two_counts() {
        let reps = low_index_reps(2, 3, false, EnumerationLimits::default()).unwrap();
        assert_eq!(count_by_degree(&reps, 3), vec![1, 3, 13]);
        assert!(reps.iter().all(PermRep::is_canonical));
    }

    #[test]
    fn rank_two_normal_counts() {
        let reps = low_index_reps(2, 3, true, EnumerationLimits::default()).unwrap();
        assert_eq!(count_by_degree(&reps, 3), vec![1, 3, 4]);
    }

    #[test]
    fn rank_one_is_cyclic() {
        let reps = low_index_reps(1, 6, false, EnumerationLimits::default()).unwrap();
        assert_eq!(count_by_degree(&reps, 6), vec![1; 6]);
    }

    #[test]
    fn rank_zero_only_trivial() {
        let reps = low_index_reps(0, 4, false, EnumerationLimits::default()).unwrap();
        assert_eq!(reps.len(), 1);
        assert_eq!(reps[0].degree(), 1);
    }

    #[test]
    fn work_bound_refuses() {
        let err = low_index_reps(3, 5, false, EnumerationLimits { max_work: 1000 }).unwrap_err();
        assert!(matches!(err, GroupError::ResourceLimit(_)));
    }

    #[test]
    fn output_is_deterministic() {
        let a = low_index_reps(2, 4, false, EnumerationLimits::default()).unwrap();
        let b = low_index_reps(2, 4, false, EnumerationLimits::default()).unwrap();
        assert_eq!(a, b);
    }
}
