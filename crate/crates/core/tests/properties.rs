use std::sync::Arc;

use proptest::prelude::*;

use procover::covering::{
    cover_from_subgroup, deck_group, euler_relation_holds, image_subgroup, is_regular, lift, lift_with_order, pi1_data,
    TraversalOrder,
};
use procover::free_group::{
    is_normal, low_index_reps, rep_equivalent, subgroup_leq, EnumerationLimits, FreeWord, Letter, PermRep,
};
use procover::graph::{bouquet, cycle, GraphMorphism, Vertex};
use procover::sample::{random_base, random_rep, rng};
use procover::tower::{induced_hom, pi1_triviality_check, universal_tower, UniversalSpec};

fn word(rank: usize) -> impl Strategy<Value = FreeWord> {
    prop::collection::vec((0..rank.max(1), any::<bool>()), 0..12)
        .prop_map(move |ls| FreeWord::reduce(ls.into_iter().map(|(g, inv)| Letter::new(g, inv))))
}

fn rep_from_seed(seed: u64, rank: usize, max_degree: usize) -> PermRep {
    random_rep(&mut rng(seed), rank, max_degree)
}

fn small_f2_subgroups() -> Vec<PermRep> {
    low_index_reps(2, 3, false, EnumerationLimits::default()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn membership_is_closed_and_matches_the_transversal(seed in any::<u64>(), a in word(2), b in word(2)) {
        let h = rep_from_seed(seed, 2, 5);
        for s in h.schreier_generators() {
            prop_assert!(h.contains(&s).unwrap());
        }
        for (p, t) in h.transversal().iter().enumerate() {
            prop_assert_eq!(h.contains(t).unwrap(), p == 0);
        }
        if h.contains(&a).unwrap() && h.contains(&b).unwrap() {
            prop_assert!(h.contains(&(&a * &b)).unwrap());
            prop_assert!(h.contains(&a.inverse()).unwrap());
        }
        prop_assert_eq!(h.contains(&a).unwrap(), h.act(0, &a).unwrap() == 0);
    }

    #[test]
    fn normal_iff_every_rebase_is_equivalent(seed in any::<u64>()) {
        let h = rep_from_seed(seed, 2, 6);
        let all_equal = (0..h.degree()).all(|p| rep_equivalent(&h.rebased(p).unwrap(), &h).unwrap());
        prop_assert_eq!(is_normal(&h), all_equal);
    }

    #[test]
    fn euler_relation_for_random_covers(seed in any::<u64>()) {
        let mut r = rng(seed);
        let base = Arc::new(random_base(&mut r, 3, 3));
        let rank = pi1_data(&base, Vertex(0)).unwrap().rank();
        let h = random_rep(&mut r, rank, 5);
        let cover = cover_from_subgroup(&base, Vertex(0), &h).unwrap();
        prop_assert!(euler_relation_holds(&cover.covering));
        prop_assert_eq!(cover.covering.degree(), h.degree());
    }

    #[test]
    fn lifts_are_unique(seed in any::<u64>()) {
        let mut r = rng(seed);
        let case = procover::sample::lifting_case(&mut r).unwrap();
        let bfs = lift(&case.g, &case.gamma.covering, case.base_c, case.base_a).unwrap();
        let dfs = lift_with_order(
            &case.g,
            &case.gamma.covering,
            case.base_c,
            case.base_a,
            TraversalOrder::DepthFirstReversed,
        )
        .unwrap();
        prop_assert_eq!(bfs.is_lifted(), dfs.is_lifted());
        prop_assert_eq!(bfs.map(), dfs.map());
    }

    #[test]
    fn deck_groups_act_freely(seed in any::<u64>()) {
        let mut r = rng(seed);
        let base = Arc::new(random_base(&mut r, 3, 2));
        let rank = pi1_data(&base, Vertex(0)).unwrap().rank();
        let h = random_rep(&mut r, rank, 6);
        let cover = cover_from_subgroup(&base, Vertex(0), &h).unwrap();
        let deck = deck_group(&cover.covering).unwrap();
        prop_assert!(deck.freeness_violation().is_none());
        prop_assert_eq!(cover.covering.degree() % deck.order(), 0);
        let (ev, _) = is_regular(&cover.covering).unwrap();
        prop_assert_eq!(ev.is_regular(), is_normal(&h));
    }

    #[test]
    fn induced_homomorphisms_compose(seed in any::<u64>()) {
        let mut r = rng(seed);
        let base = Arc::new(random_base(&mut r, 3, 2));
        let b = Vertex(0);
        let rank = pi1_data(&base, b).unwrap().rank();
        let mid = cover_from_subgroup(&base, b, &random_rep(&mut r, rank, 3)).unwrap();
        let mid_rank = pi1_data(&mid.graph, mid.basepoint).unwrap().rank();
        let top = cover_from_subgroup(&mid.graph, mid.basepoint, &random_rep(&mut r, mid_rank, 2)).unwrap();
        let (p0, p1, p2) = (
            pi1_data(&base, b).unwrap(),
            pi1_data(&mid.graph, mid.basepoint).unwrap(),
            pi1_data(&top.graph, top.basepoint).unwrap(),
        );
        let g1: &GraphMorphism = top.covering.map();
        let g2: &GraphMorphism = mid.covering.map();
        let whole = induced_hom(&g1.then(g2).unwrap(), &p2, &p0).unwrap();
        let steps = induced_hom(g1, &p2, &p1).unwrap().then(&induced_hom(g2, &p1, &p0).unwrap()).unwrap();
        prop_assert_eq!(whole, steps);
        let id = GraphMorphism::identity(base.clone());
        prop_assert_eq!(induced_hom(&id, &p0, &p0).unwrap(), procover::free_group::GeneratorImages::identity(rank));
    }

    #[test]
    fn image_subgroup_inverts_cover_construction(seed in any::<u64>()) {
        let mut r = rng(seed);
        let base = Arc::new(random_base(&mut r, 3, 3));
        let p = pi1_data(&base, Vertex(0)).unwrap();
        let h = random_rep(&mut r, p.rank(), 5);
        let cover = cover_from_subgroup(&base, Vertex(0), &h).unwrap();
        let back = image_subgroup(&cover.covering, cover.basepoint, &p).unwrap();
        prop_assert!(rep_equivalent(&back, &h).unwrap());
    }

    #[test]
    fn triviality_is_monotone_in_the_bound(multipliers in prop::collection::vec(1usize..=3, 1..4), m in 2usize..=4) {
        let mut degrees = vec![1];
        for k in multipliers {
            degrees.push(degrees.last().unwrap() * k);
        }
        let normals = degrees.iter().map(|&d| PermRep::cycle(d).unwrap()).collect();
        let u = universal_tower(&UniversalSpec::over_base(Arc::new(cycle(1)), Vertex(0), normals)).unwrap();
        let limits = EnumerationLimits::default();
        let big = pi1_triviality_check(&u.tower, m, 0, limits).unwrap();
        let small = pi1_triviality_check(&u.tower, m - 1, 0, limits).unwrap();
        if big.m_trivial() {
            prop_assert!(small.m_trivial());
        }
        for e in &small.entries {
            let same = big.entries.iter().find(|f| f.level == e.level && f.subgroup == e.subgroup);
            prop_assert_eq!(same.map(|f| f.satisfied_at), Some(e.satisfied_at));
        }
    }
}

#[test]
fn containment_is_a_partial_order() {
    let subs = small_f2_subgroups();
    for a in &subs {
        assert!(subgroup_leq(a, a).unwrap());
        for b in &subs {
            let ab = subgroup_leq(a, b).unwrap();
            if ab && subgroup_leq(b, a).unwrap() {
                assert!(rep_equivalent(a, b).unwrap());
            }
            if ab {
                assert_eq!(a.degree() % b.degree(), 0, "index of a subgroup is a multiple");
                for c in &subs {
                    if subgroup_leq(b, c).unwrap() {
                        assert!(subgroup_leq(a, c).unwrap());
                    }
                }
            }
        }
    }
}

#[test]
fn bouquet_covers_have_schreier_rank() {
    for r in 1..=3 {
        let base = Arc::new(bouquet(r));
        for h in low_index_reps(r, 3, false, EnumerationLimits::default()).unwrap() {
            let cover = cover_from_subgroup(&base, Vertex(0), &h).unwrap();
            let rank = pi1_data(&cover.graph, cover.basepoint).unwrap().rank();
            assert_eq!(rank, 1 + h.degree() * (r - 1));
            assert_eq!(h.schreier_generators().len(), rank);
        }
    }
}
