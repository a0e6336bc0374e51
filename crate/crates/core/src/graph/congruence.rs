use std::collections::HashMap;
use std::sync::Arc;

use super::morphism::{same_graph, Element};
use super::{Dart, FiniteGraph, GraphError, GraphMorphism, Vertex};

/// An equivalence on the vertices and darts of a graph whose quotient is
/// again a Serre graph with the quotient map a morphism.
///
/// Classes are numbered by first occurrence, so two congruences on the same
/// graph are equal iff they have the same classes.
#[derive(Clone, Debug)]
pub struct Congruence {
    base: Arc<FiniteGraph>,
    vclass: Vec<usize>,
    dclass: Vec<usize>,
    vertex_classes: usize,
    dart_classes: usize,
}

impl PartialEq for Congruence {
    fn eq(&self, other: &Self) -> bool {
        self.vclass == other.vclass && self.dclass == other.dclass && same_graph(&self.base, &other.base)
    }
}

impl Eq for Congruence {}

fn renumber(labels: &[usize]) -> (Vec<usize>, usize) {
    let mut fresh = HashMap::new();
    let out = labels
        .iter()
        .map(|&l| {
            let next = fresh.len();
            *fresh.entry(l).or_insert(next)
        })
        .collect();
    (out, fresh.len())
}

/// Why an induced quotient map does not exist: two elements equivalent in
/// the domain congruence whose images are inequivalent in the codomain one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InducedMapWitness {
    pub first: Element,
    pub second: Element,
}

impl Congruence {
    /// Builds a congruence from arbitrary class labels per vertex and per
    /// dart and checks compatibility.
    pub fn from_labels(
        base: Arc<FiniteGraph>,
        vertex_labels: &[usize],
        dart_labels: &[usize],
    ) -> Result<Self, GraphError> {
        if vertex_labels.len() != base.vertex_count() || dart_labels.len() != base.dart_count() {
            return Err(GraphError::Congruence(
                "label vectors do not match the graph size".into(),
            ));
        }
        let (vclass, vertex_classes) = renumber(vertex_labels);
        let (dclass, dart_classes) = renumber(dart_labels);
        let r = Congruence {
            base,
            vclass,
            dclass,
            vertex_classes,
            dart_classes,
        };
        r.check()?;
        Ok(r)
    }

    /// Builds a congruence from explicit classes. Vertices and darts not
    /// listed are singletons. Listing a dart class implies the class of the
    /// inverse darts.
    pub fn from_classes(
        base: Arc<FiniteGraph>,
        vertex_classes: &[Vec<Vertex>],
        dart_classes: &[Vec<Dart>],
    ) -> Result<Self, GraphError> {
        let nv = base.vertex_count();
        let nd = base.dart_count();
        let mut vlabel: Vec<usize> = (0..nv).collect();
        for (k, class) in vertex_classes.iter().enumerate() {
            for v in class {
                if v.0 >= nv {
                    return Err(GraphError::VertexOutOfRange(v.0));
                }
                if vlabel[v.0] >= nv {
                    return Err(GraphError::Congruence(format!(
                        "vertex `{}` listed in two classes",
                        base.vertex_id(*v)
                    )));
                }
                vlabel[v.0] = nv + k;
            }
        }
        let mut dlabel: Vec<usize> = (0..nd).collect();
        let mut claimed = vec![false; nd];
        for (k, class) in dart_classes.iter().enumerate() {
            for d in class {
                if d.0 >= nd {
                    return Err(GraphError::DartOutOfRange(d.0));
                }
                for (dart, label) in [(*d, nd + 2 * k), (d.inv(), nd + 2 * k + 1)] {
                    if claimed[dart.0] {
                        return Err(GraphError::Congruence(format!(
                            "dart `{}` listed in two classes (directly or through its inverse)",
                            base.dart_id(dart)
                        )));
                    }
                    claimed[dart.0] = true;
                    dlabel[dart.0] = label;
                }
            }
        }
        Self::from_labels(base, &vlabel, &dlabel)
    }

    /// The equality relation.
    pub fn diagonal(base: Arc<FiniteGraph>) -> Self {
        let vclass = (0..base.vertex_count()).collect();
        let dclass = (0..base.dart_count()).collect();
        Congruence {
            vertex_classes: base.vertex_count(),
            dart_classes: base.dart_count(),
            base,
            vclass,
            dclass,
        }
    }

    fn check(&self) -> Result<(), GraphError> {
        let g = &self.base;
        // representative dart per class
        let mut rep: Vec<Option<Dart>> = vec![None; self.dart_classes];
        for d in g.darts() {
            let c = self.dclass[d.0];
            if self.dclass[d.inv().0] == c {
                return Err(GraphError::Congruence(format!(
                    "dart `{}` is merged with its inverse",
                    g.dart_id(d)
                )));
            }
            match rep[c] {
                None => rep[c] = Some(d),
                Some(r) => {
                    if self.vclass[g.src(r).0] != self.vclass[g.src(d).0] {
                        return Err(GraphError::Congruence(format!(
                            "incompatible classes: darts `{}` and `{}` are equivalent but their sources are not",
                            g.dart_id(r),
                            g.dart_id(d)
                        )));
                    }
                    if self.dclass[r.inv().0] != self.dclass[d.inv().0] {
                        return Err(GraphError::Congruence(format!(
                            "incompatible classes: darts `{}` and `{}` are equivalent but their inverses are not",
                            g.dart_id(r),
                            g.dart_id(d)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &Arc<FiniteGraph> {
        &self.base
    }

    pub fn vertex_class(&self, v: Vertex) -> usize {
        self.vclass[v.0]
    }

    pub fn dart_class(&self, d: Dart) -> usize {
        self.dclass[d.0]
    }

    pub fn vertex_class_count(&self) -> usize {
        self.vertex_classes
    }

    pub fn dart_class_count(&self) -> usize {
        self.dart_classes
    }

    pub fn is_diagonal(&self) -> bool {
        self.vertex_classes == self.base.vertex_count() && self.dart_classes == self.base.dart_count()
    }

    /// Vertex classes as member lists, in class order.
    pub fn vertex_classes(&self) -> Vec<Vec<Vertex>> {
        let mut out = vec![Vec::new(); self.vertex_classes];
        for (v, &c) in self.vclass.iter().enumerate() {
            out[c].push(Vertex(v));
        }
        out
    }

    pub fn dart_classes(&self) -> Vec<Vec<Dart>> {
        let mut out = vec![Vec::new(); self.dart_classes];
        for (d, &c) in self.dclass.iter().enumerate() {
            out[c].push(Dart(d));
        }
        out
    }

    /// `self ⊆ other` as relations.
    pub fn refines(&self, other: &Congruence) -> bool {
        if !same_graph(&self.base, &other.base) {
            return false;
        }
        let mut vmap = vec![usize::MAX; self.vertex_classes];
        for (v, &c) in self.vclass.iter().enumerate() {
            let o = other.vclass[v];
            if vmap[c] == usize::MAX {
                vmap[c] = o;
            } else if vmap[c] != o {
                return false;
            }
        }
        let mut dmap = vec![usize::MAX; self.dart_classes];
        for (d, &c) in self.dclass.iter().enumerate() {
            let o = other.dclass[d];
            if dmap[c] == usize::MAX {
                dmap[c] = o;
            } else if dmap[c] != o {
                return false;
            }
        }
        true
    }

    /// The quotient graph and the projection onto it.
    ///
    /// Quotient vertex `k` is vertex class `k`, named after its first
    /// member. Quotient edges follow the base edge order: the first base
    /// edge `E` meeting a new dart class names the quotient edge, whose
    /// positive dart is the class of `E+`.
    pub fn quotient(&self) -> (Arc<FiniteGraph>, GraphMorphism) {
        let g = &self.base;
        let mut vertex_ids = vec![String::new(); self.vertex_classes];
        let mut named = vec![false; self.vertex_classes];
        for v in g.vertices() {
            let c = self.vclass[v.0];
            if !named[c] {
                named[c] = true;
                vertex_ids[c] = g.vertex_id(v).to_owned();
            }
        }
        let mut class_dart = vec![usize::MAX; self.dart_classes];
        let mut edges = Vec::new();
        for e in 0..g.edge_count() {
            let plus = Dart::from_edge(e, false);
            let c = self.dclass[plus.0];
            if class_dart[c] != usize::MAX {
                continue;
            }
            let k = edges.len();
            class_dart[c] = 2 * k;
            class_dart[self.dclass[plus.inv().0]] = 2 * k + 1;
            edges.push((
                g.edge_id(e).to_owned(),
                self.vclass[g.src(plus).0],
                self.vclass[g.dst(plus).0],
            ));
        }
        let name = g.name().map(|n| format!("{n}/~"));
        let q = Arc::new(
            FiniteGraph::from_edges(name, vertex_ids, edges)
                .expect("quotient ids are distinct first members"),
        );
        let vmap = self.vclass.iter().map(|&c| Vertex(c)).collect();
        let dmap = self.dclass.iter().map(|&c| Dart(class_dart[c])).collect();
        let projection = GraphMorphism::new(g.clone(), q.clone(), vmap, dmap)
            .expect("projection of a compatible congruence is a morphism");
        (q, projection)
    }
}

impl GraphMorphism {
    /// The kernel congruence: classes are the fibers of the map.
    pub fn kernel(&self) -> Congruence {
        let vl: Vec<usize> = self.vertex_map().iter().map(|v| v.0).collect();
        let dl: Vec<usize> = self.dart_map().iter().map(|d| d.0).collect();
        Congruence::from_labels(self.domain().clone(), &vl, &dl)
            .expect("kernel of a morphism into a Serre graph is a congruence")
    }

    /// The map `domain/r -> codomain/s` induced by `self`, when `self` sends
    /// `r`-equivalent elements to `s`-equivalent ones.
    pub fn induced_quotient_map(
        &self,
        r: &Congruence,
        s: &Congruence,
    ) -> Result<Result<GraphMorphism, InducedMapWitness>, GraphError> {
        if !same_graph(r.base(), self.domain()) {
            return Err(GraphError::GraphMismatch(
                "domain congruence lives on another graph".into(),
            ));
        }
        if !same_graph(s.base(), self.codomain()) {
            return Err(GraphError::GraphMismatch(
                "codomain congruence lives on another graph".into(),
            ));
        }
        let (qr, pr) = r.quotient();
        let (qs, ps) = s.quotient();
        let mut vimage: Vec<Option<(Vertex, Vertex)>> = vec![None; qr.vertex_count()];
        for v in self.domain().vertices() {
            let target = ps.vertex(self.vertex(v));
            let slot = &mut vimage[pr.vertex(v).0];
            match slot {
                None => *slot = Some((target, v)),
                Some((t, first)) if *t != target => {
                    return Ok(Err(InducedMapWitness {
                        first: Element::Vertex(*first),
                        second: Element::Vertex(v),
                    }))
                }
                Some(_) => {}
            }
        }
        let mut dimage: Vec<Option<(Dart, Dart)>> = vec![None; qr.dart_count()];
        for d in self.domain().darts() {
            let target = ps.dart(self.dart(d));
            let slot = &mut dimage[pr.dart(d).0];
            match slot {
                None => *slot = Some((target, d)),
                Some((t, first)) if *t != target => {
                    return Ok(Err(InducedMapWitness {
                        first: Element::Dart(*first),
                        second: Element::Dart(d),
                    }))
                }
                Some(_) => {}
            }
        }
        let vmap = vimage.into_iter().map(|x| x.expect("projection is onto").0).collect();
        let dmap = dimage.into_iter().map(|x| x.expect("projection is onto").0).collect();
        Ok(Ok(GraphMorphism::new(qr, qs, vmap, dmap)?))
    }

    /// The map `domain/r -> codomain` when `self` is constant on `r`-classes.
    pub fn descend(&self, r: &Congruence) -> Result<Result<GraphMorphism, InducedMapWitness>, GraphError> {
        let s = Congruence::diagonal(self.codomain().clone());
        Ok(self.induced_quotient_map(r, &s)?.map(|m| {
            // the quotient by the diagonal is structurally equal to the codomain
            let domain = m.domain().clone();
            m.rebind(domain, self.codomain().clone())
                .expect("diagonal quotient equals the original graph")
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{bouquet, cycle, disjoint_union};

    fn wrap(n: usize, m: usize) -> GraphMorphism {
        let top = Arc::new(cycle(n));
        let bottom = Arc::new(cycle(m));
        let vmap = (0..n).map(|i| Vertex(i % m)).collect();
        let edges: Vec<(usize, bool)> = (0..n).map(|i| (i % m, false)).collect();
        GraphMorphism::from_edge_map(top, bottom, vmap, &edges).unwrap()
    }

    fn antipodal_c6() -> Congruence {
        let c6 = Arc::new(cycle(6));
        let vl: Vec<usize> = (0..6).map(|i| i % 3).collect();
        let dl: Vec<usize> = (0..12).map(|d| (d / 2 % 3) * 2 + d % 2).collect();
        Congruence::from_labels(c6, &vl, &dl).unwrap()
    }

    #[test]
    fn antipodal_quotient_of_c6_is_c3() {
        let r = antipodal_c6();
        let (q, p) = r.quotient();
        assert_eq!(q.vertex_count(), 3);
        assert_eq!(q.dart_count(), 6);
        assert!(q.is_connected());
        assert!(q.vertices().all(|v| q.star(v).len() == 2));
        assert_eq!(q.cycle_rank(), 1);
        assert!(p.is_surjective());
        assert_eq!(p.kernel(), r);
    }

    #[test]
    fn diagonal_quotient_is_identity() {
        let c3 = Arc::new(cycle(3));
        let (q, p) = Congruence::diagonal(c3.clone()).quotient();
        assert_eq!(*q, *c3);
        assert_eq!(p.vertex_map(), GraphMorphism::identity(c3).vertex_map());
    }

    #[test]
    fn merging_bouquet_loops_gives_b1() {
        let b2 = Arc::new(bouquet(2));
        let r = Congruence::from_classes(b2, &[], &[vec![Dart(0), Dart(2)]]).unwrap();
        let (q, _) = r.quotient();
        assert_eq!(q.vertex_count(), 1);
        assert_eq!(q.edge_count(), 1);
    }

    #[test]
    fn merging_a_dart_with_its_inverse_is_rejected() {
        let b1 = Arc::new(bouquet(1));
        let err = Congruence::from_labels(b1, &[0], &[0, 0]).unwrap_err();
        assert!(err.to_string().contains("inverse"));
    }

    #[test]
    fn incompatible_classes_rejected() {
        let c3 = Arc::new(cycle(3));
        // e0+ ~ e1+ without identifying their sources
        let err = Congruence::from_classes(c3, &[], &[vec![Dart(0), Dart(2)]]).unwrap_err();
        assert!(err.to_string().contains("incompatible"));
    }

    #[test]
    fn kernel_of_wrap_is_antipodal() {
        assert_eq!(wrap(6, 3).kernel(), antipodal_c6());
    }

    #[test]
    fn kernel_of_identity_is_diagonal() {
        let c3 = Arc::new(cycle(3));
        assert!(GraphMorphism::identity(c3).kernel().is_diagonal());
    }

    #[test]
    fn kernel_of_collapsing_two_copies() {
        let two = Arc::new(disjoint_union(&cycle(3), &cycle(3)));
        let c3 = Arc::new(cycle(3));
        let vmap = (0..6).map(|i| Vertex(i % 3)).collect();
        let edges: Vec<(usize, bool)> = (0..6).map(|i| (i % 3, false)).collect();
        let f = GraphMorphism::from_edge_map(two, c3, vmap, &edges).unwrap();
        let k = f.kernel();
        assert_eq!(k.vertex_class_count(), 3);
        assert!(k.vertex_classes().iter().all(|c| c.len() == 2));
        assert!(k.dart_classes().iter().all(|c| c.len() == 2));
    }

    #[test]
    fn induced_map_from_antipodal_to_diagonal_is_iso() {
        let f = wrap(6, 3);
        let s = Congruence::diagonal(f.codomain().clone());
        let induced = f.induced_quotient_map(&antipodal_c6(), &s).unwrap().unwrap();
        assert!(induced.is_bijective());
    }

    #[test]
    fn induced_map_with_diagonals_is_f() {
        let f = wrap(6, 3);
        let r = Congruence::diagonal(f.domain().clone());
        let s = Congruence::diagonal(f.codomain().clone());
        let induced = f.induced_quotient_map(&r, &s).unwrap().unwrap();
        assert_eq!(induced.vertex_map(), f.vertex_map());
        assert_eq!(induced.dart_map(), f.dart_map());
    }

    #[test]
    fn induced_map_witness_for_mod_two_kernel() {
        let f = wrap(6, 3);
        let r = wrap(6, 2).kernel();
        let s = Congruence::diagonal(f.codomain().clone());
        let witness = f.induced_quotient_map(&r, &s).unwrap().unwrap_err();
        assert_eq!(witness.first, Element::Vertex(Vertex(0)));
        assert_eq!(witness.second, Element::Vertex(Vertex(2)));
    }

    #[test]
    fn refinement_order() {
        let c12 = wrap(12, 6).kernel();
        let coarse = wrap(12, 3).kernel();
        assert!(c12.refines(&coarse));
        assert!(!coarse.refines(&c12));
        assert!(Congruence::diagonal(c12.base().clone()).refines(&c12));
    }
}
