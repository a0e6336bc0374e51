//! Seeded generators for randomized suites: small bases, coset actions,
//! lifting problems, and free actions of small groups on derived graphs.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::covering::{
    as_covering, cover_from_subgroup, image_subgroup, lift, pi1_data, CoveringError, DerivedCover, GroupAction,
};
use crate::free_group::{orbits, pushforward_leq, subgroup_leq, GroupError, PermRep};
use crate::graph::{Dart, FiniteGraph, GraphMorphism, Vertex};
use crate::tower::{induced_hom, TowerError};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A connected graph with `1..=max_vertices` vertices and cycle rank
/// `0..=max_rank`: a random tree plus random extra edges, loops allowed.
pub fn random_base<R: Rng>(rng: &mut R, max_vertices: usize, max_rank: usize) -> FiniteGraph {
    let n = rng.gen_range(1..=max_vertices);
    let rank = rng.gen_range(0..=max_rank);
    let mut edges = Vec::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        let (s, t) = if rng.gen_bool(0.5) { (u, v) } else { (v, u) };
        edges.push((s, t));
    }
    for _ in 0..rank {
        edges.push((rng.gen_range(0..n), rng.gen_range(0..n)));
    }
    FiniteGraph::from_edges(
        Some(format!("R{n}.{rank}")),
        (0..n).map(|v| format!("v{v}")).collect(),
        edges
            .into_iter()
            .enumerate()
            .map(|(k, (s, t))| (format!("e{k}"), s, t))
            .collect(),
    )
    .expect("generated ids are distinct")
}

/// A uniformly random transitive action of degree `1..=max_degree`, found by
/// rejection.
pub fn random_rep<R: Rng>(rng: &mut R, rank: usize, max_degree: usize) -> PermRep {
    let degree = if rank == 0 { 1 } else { rng.gen_range(1..=max_degree) };
    loop {
        let perms: Vec<Vec<usize>> = (0..rank)
            .map(|_| {
                let mut p: Vec<usize> = (0..degree).collect();
                p.shuffle(rng);
                p
            })
            .collect();
        if orbits(degree, &perms).len() == 1 {
            return PermRep::new(degree, perms).expect("transitive tuple of bijections");
        }
    }
}

/// `g: Σ → Δ` to be lifted through the covering `Γ → Δ`, with base points.
#[derive(Clone, Debug)]
pub struct LiftingCase {
    pub base: Arc<FiniteGraph>,
    pub gamma: DerivedCover,
    pub g: GraphMorphism,
    pub base_c: Vertex,
    pub base_a: Vertex,
    /// Whether `Σ` was built as a cover of `Γ`.
    pub through_gamma: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LiftingOutcome {
    pub lifted: bool,
    /// `g_* pi_1(Σ) ≤ f_* pi_1(Γ)` via image subgroups and Schreier generators.
    pub contained: bool,
    /// The same containment via pushed-forward generators of `pi_1(Σ)`.
    pub contained_by_generators: bool,
    pub lift_commutes: bool,
}

/// One random lifting problem over a base with at most 3 vertices and
/// rank at most 3. Half the cases factor `Σ → Γ → Δ` so that positive
/// answers are common.
pub fn lifting_case<R: Rng>(rng: &mut R) -> Result<LiftingCase, CoveringError> {
    let base = Arc::new(random_base(rng, 3, 3));
    let b = Vertex(0);
    let r = pi1_data(&base, b)?.rank();
    let h = random_rep(rng, r, 4);
    let gamma = cover_from_subgroup(&base, b, &h)?;
    let through_gamma = rng.gen_bool(0.5);
    let (sigma, g) = if through_gamma {
        let top_rank = pi1_data(&gamma.graph, gamma.basepoint)?.rank();
        let k = random_rep(rng, top_rank, 2);
        let sigma = cover_from_subgroup(&gamma.graph, gamma.basepoint, &k)?;
        let g = sigma.covering.map().then(gamma.covering.map())?;
        (sigma, g)
    } else {
        let k = random_rep(rng, r, 4);
        let sigma = cover_from_subgroup(&base, b, &k)?;
        let g = sigma.covering.map().clone();
        (sigma, g)
    };
    let fiber_c: Vec<Vertex> = g.domain().vertices().filter(|&v| g.vertex(v) == b).collect();
    let base_c = if rng.gen_bool(0.5) { sigma.basepoint } else { *fiber_c.choose(rng).expect("fiber is non-empty") };
    let base_a = if rng.gen_bool(0.5) {
        gamma.basepoint
    } else {
        *gamma.covering.vertex_fiber(b).choose(rng).expect("fiber is non-empty")
    };
    Ok(LiftingCase {
        base,
        gamma,
        g,
        base_c,
        base_a,
        through_gamma,
    })
}

pub fn lifting_suite(seed: u64, count: usize) -> Result<Vec<LiftingCase>, CoveringError> {
    let mut r = rng(seed);
    (0..count).map(|_| lifting_case(&mut r)).collect()
}

/// Decides a lifting case by the search and, independently, by subgroup
/// containment.
pub fn check_lifting(case: &LiftingCase) -> Result<LiftingOutcome, TowerError> {
    let f = &case.gamma.covering;
    let b = case.g.vertex(case.base_c);
    let p = pi1_data(&case.base, b)?;
    let outcome = lift(&case.g, f, case.base_c, case.base_a)?;
    let lift_commutes = match outcome.map() {
        Some(h) => h.vertex(case.base_c) == case.base_a && h.then(f.map())? == case.g,
        None => true,
    };
    let image_gamma = image_subgroup(f, case.base_a, &p)?;
    let sigma_cover = as_covering(&case.g)?;
    let image_sigma = image_subgroup(&sigma_cover, case.base_c, &p)?;
    let contained = subgroup_leq(&image_sigma, &image_gamma)?;
    let ps = pi1_data(case.g.domain(), case.base_c)?;
    let hom = induced_hom(&case.g, &ps, &p)?;
    let contained_by_generators = pushforward_leq(&PermRep::trivial(ps.rank()), &hom, &image_gamma)?;
    Ok(LiftingOutcome {
        lifted: outcome.is_lifted(),
        contained,
        contained_by_generators,
        lift_commutes,
    })
}

/// A finite group by its multiplication table; element 0 is the identity
/// and `table[i][j]` is `g_i g_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmallGroup {
    pub name: String,
    pub table: Vec<Vec<usize>>,
    pub generators: Vec<usize>,
}

impl SmallGroup {
    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|a| (0..self.order()).all(|b| self.table[a][b] == self.table[b][a]))
    }

    pub fn cyclic(n: usize) -> Self {
        SmallGroup {
            name: format!("Z{n}"),
            table: (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect(),
            generators: if n > 1 { vec![1] } else { vec![] },
        }
    }

    /// Direct product; pair `(a, b)` is element `a·|B| + b`.
    pub fn product(a: &SmallGroup, b: &SmallGroup) -> Self {
        let nb = b.order();
        let n = a.order() * nb;
        let table = (0..n)
            .map(|x| (0..n).map(|y| a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb)).collect())
            .collect();
        let mut generators: Vec<usize> = a.generators.iter().map(|&g| g * nb).collect();
        generators.extend(b.generators.iter().copied());
        SmallGroup {
            name: format!("{}x{}", a.name, b.name),
            table,
            generators,
        }
    }

    /// The group generated by permutations of `0..n`, composed right to
    /// left.
    pub fn from_permutations(name: &str, gens: &[Vec<usize>]) -> Self {
        let n = gens.first().map_or(0, Vec::len);
        let identity: Vec<usize> = (0..n).collect();
        let compose = |a: &[usize], b: &[usize]| -> Vec<usize> { b.iter().map(|&x| a[x]).collect() };
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(identity, 0)]);
        let mut i = 0;
        while i < elements.len() {
            for g in gens {
                let next = compose(g, &elements[i]);
                if !index.contains_key(&next) {
                    index.insert(next.clone(), elements.len());
                    elements.push(next);
                }
            }
            i += 1;
        }
        let table = elements
            .iter()
            .map(|a| elements.iter().map(|b| index[&compose(a, b)]).collect())
            .collect();
        SmallGroup {
            name: name.to_owned(),
            table,
            generators: gens.iter().map(|g| index[g]).collect(),
        }
    }

    /// The quaternion group: `±1, ±i, ±j, ±k` as `unit + 4·[negative]`.
    pub fn quaternion() -> Self {
        // unit products (sign flip, unit) for units 1, i, j, k
        const UNIT: [[(bool, usize); 4]; 4] = [
            [(false, 0), (false, 1), (false, 2), (false, 3)],
            [(false, 1), (true, 0), (false, 3), (true, 2)],
            [(false, 2), (true, 3), (true, 0), (false, 1)],
            [(false, 3), (false, 2), (true, 1), (true, 0)],
        ];
        let table = (0..8)
            .map(|a: usize| {
                (0..8)
                    .map(|b: usize| {
                        let (flip, u) = UNIT[a % 4][b % 4];
                        let negative = (a >= 4) ^ (b >= 4) ^ flip;
                        u + 4 * usize::from(negative)
                    })
                    .collect()
            })
            .collect();
        SmallGroup {
            name: "Q8".into(),
            table,
            generators: vec![1, 2],
        }
    }

    /// The kernel of `F_r → G` sending `x_k` to `images[k]`, as the right
    /// regular action on the subgroup generated by the images.
    pub fn kernel_rep(&self, images: &[usize]) -> Result<PermRep, GroupError> {
        let n = self.order();
        let perms = images
            .iter()
            .map(|&g| (0..n).map(|x| self.mul(x, g)).collect())
            .collect::<Vec<Vec<usize>>>();
        let orbit = orbits(n, &perms)
            .into_iter()
            .find(|o| o.contains(&0))
            .expect("0 lies in some orbit");
        let position: HashMap<usize, usize> = orbit.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let restricted = perms
            .iter()
            .map(|p| orbit.iter().map(|x| position[&p[*x]]).collect())
            .collect();
        Ok(PermRep::new(orbit.len(), restricted)?.canonical())
    }
}

/// The symmetric group on three letters.
pub fn symmetric_three() -> SmallGroup {
    SmallGroup::from_permutations("S3", &[vec![1, 0, 2], vec![1, 2, 0]])
}

/// Every group of order at most 8, one per isomorphism class.
pub fn small_groups() -> Vec<SmallGroup> {
    let mut out: Vec<SmallGroup> = (1..=8).map(SmallGroup::cyclic).collect();
    let z2 = SmallGroup::cyclic(2);
    let z4 = SmallGroup::cyclic(4);
    let v4 = SmallGroup::product(&z2, &z2);
    out.push(v4.clone());
    out.push(SmallGroup::product(&z2, &z4));
    out.push(SmallGroup::product(&v4, &z2));
    out.push(symmetric_three());
    out.push(SmallGroup::from_permutations("D4", &[vec![1, 2, 3, 0], vec![0, 3, 2, 1]]));
    out.push(SmallGroup::quaternion());
    out
}

/// The derived graph `G × Δ` of a voltage assignment on the edges of
/// `base`, with `G` acting by left multiplication on the sheets. Vertex
/// `(g, v)` is `g·|V| + v` and edge `(g, e)` runs from `(g, src e)` to
/// `(g·voltage(e), dst e)`.
pub fn derived_action(group: &SmallGroup, base: &FiniteGraph, voltages: &[usize]) -> Result<GroupAction, CoveringError> {
    let n = group.order();
    let nv = base.vertex_count();
    let ne = base.edge_count();
    if voltages.len() != ne {
        return Err(CoveringError::NotAnAction("one voltage per edge is required".into()));
    }
    let vertex_ids = (0..n)
        .flat_map(|g| base.vertex_ids().iter().map(move |v| format!("{v}.{g}")))
        .collect();
    let mut edges = Vec::with_capacity(n * ne);
    for g in 0..n {
        for (e, &volt) in voltages.iter().enumerate() {
            let d = Dart::from_edge(e, false);
            edges.push((
                format!("{}.{g}", base.edge_id(e)),
                g * nv + base.src(d).0,
                group.mul(g, volt) * nv + base.dst(d).0,
            ));
        }
    }
    let graph = Arc::new(FiniteGraph::from_edges(
        Some(format!("{}x{}", group.name, base.name().unwrap_or("G"))),
        vertex_ids,
        edges,
    )?);
    let vertex_perms = (0..n)
        .map(|h| (0..n * nv).map(|i| Vertex(group.mul(h, i / nv) * nv + i % nv)).collect())
        .collect();
    let dart_perms = (0..n)
        .map(|h| {
            (0..2 * n * ne)
                .map(|d| Dart(group.mul(h, d / (2 * ne)) * 2 * ne + d % (2 * ne)))
                .collect()
        })
        .collect();
    GroupAction::new(graph, group.table.clone(), vertex_perms, dart_perms)
}

/// A named action in the free-action suite.
#[derive(Clone, Debug)]
pub struct ActionCase {
    pub group: SmallGroup,
    pub base: Arc<FiniteGraph>,
    pub voltages: Vec<usize>,
    pub action: GroupAction,
}

fn theta() -> FiniteGraph {
    FiniteGraph::from_edges(
        Some("Theta".into()),
        vec!["v0".into(), "v1".into()],
        vec![("a".into(), 0, 1), ("b".into(), 0, 1), ("c".into(), 0, 1)],
    )
    .expect("fixed ids")
}

/// Free, inversion-free actions of every group of order at most 8 on
/// connected derived graphs with at most 16 vertices, several voltage
/// assignments per (group, base) pair.
pub fn action_suite(seed: u64, per_pair: usize) -> Result<Vec<ActionCase>, CoveringError> {
    use crate::graph::{bouquet, cycle};
    let bases: Vec<Arc<FiniteGraph>> = vec![
        Arc::new(bouquet(1)),
        Arc::new(bouquet(2)),
        Arc::new(bouquet(3)),
        Arc::new(cycle(2)),
        Arc::new(theta()),
        Arc::new(cycle(3)),
    ];
    let mut r = rng(seed);
    let mut out = Vec::new();
    for group in small_groups() {
        for base in &bases {
            if group.order() * base.vertex_count() > 16 {
                continue;
            }
            let mut seen = BTreeSet::new();
            for _ in 0..per_pair * 8 {
                if seen.len() == per_pair {
                    break;
                }
                let voltages: Vec<usize> = (0..base.edge_count()).map(|_| r.gen_range(0..group.order())).collect();
                if seen.contains(&voltages) {
                    continue;
                }
                let action = derived_action(&group, base, &voltages)?;
                if action.graph().is_connected() {
                    seen.insert(voltages.clone());
                    out.push(ActionCase {
                        group: group.clone(),
                        base: base.clone(),
                        voltages,
                        action,
                    });
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::quotient_by_group;
    use crate::free_group::is_normal;

    #[test]
    fn small_group_orders_and_commutativity() {
        let groups = small_groups();
        let orders: Vec<usize> = groups.iter().map(SmallGroup::order).collect();
        assert_eq!(orders, vec![1, 2, 3, 4, 5, 6, 7, 8, 4, 8, 8, 6, 8, 8]);
        let abelian: Vec<bool> = groups.iter().map(SmallGroup::is_abelian).collect();
        assert_eq!(abelian.iter().filter(|&&a| !a).count(), 3);
        let q8 = SmallGroup::quaternion();
        assert_eq!((0..8).filter(|&g| q8.mul(g, g) == 0).count(), 2);
    }

    #[test]
    fn derived_actions_quotient_back_to_the_base() {
        let s3 = symmetric_three();
        let base = crate::graph::bouquet(2);
        let act = derived_action(&s3, &base, &s3.generators).unwrap();
        assert!(act.graph().is_connected());
        let q = quotient_by_group(&act).unwrap();
        assert_eq!(q.graph.vertex_count(), 1);
        assert_eq!(q.deck.order(), 6);
    }

    #[test]
    fn kernel_rep_of_a_surjection_is_normal() {
        let s3 = symmetric_three();
        let rep = s3.kernel_rep(&s3.generators).unwrap();
        assert_eq!(rep.degree(), 6);
        assert!(is_normal(&rep));
    }

    #[test]
    fn suites_are_deterministic() {
        let a = lifting_suite(7, 20).unwrap();
        let b = lifting_suite(7, 20).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.g, y.g);
            assert_eq!((x.base_c, x.base_a), (y.base_c, y.base_a));
        }
        let s = action_suite(1, 2).unwrap();
        assert!(s.iter().all(|c| c.action.graph().vertex_count() <= 16));
    }

    #[test]
    fn lifting_agrees_on_a_small_suite() {
        for case in lifting_suite(11, 60).unwrap() {
            let o = check_lifting(&case).unwrap();
            assert_eq!(o.lifted, o.contained);
            assert_eq!(o.contained, o.contained_by_generators);
            assert!(o.lift_commutes);
        }
    }
}
