use std::sync::Arc;

use super::{Dart, FiniteGraph, GraphError, Vertex};

/// A map of graphs: vertices to vertices, darts to darts, commuting with the
/// source map and the involution.
#[derive(Clone, Debug)]
pub struct GraphMorphism {
    domain: Arc<FiniteGraph>,
    codomain: Arc<FiniteGraph>,
    vmap: Vec<Vertex>,
    dmap: Vec<Dart>,
}

impl PartialEq for GraphMorphism {
    fn eq(&self, other: &Self) -> bool {
        self.vmap == other.vmap
            && self.dmap == other.dmap
            && same_graph(&self.domain, &other.domain)
            && same_graph(&self.codomain, &other.codomain)
    }
}

impl Eq for GraphMorphism {}

pub(crate) fn same_graph(a: &Arc<FiniteGraph>, b: &Arc<FiniteGraph>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl GraphMorphism {
    pub fn new(
        domain: Arc<FiniteGraph>,
        codomain: Arc<FiniteGraph>,
        vmap: Vec<Vertex>,
        dmap: Vec<Dart>,
    ) -> Result<Self, GraphError> {
        if vmap.len() != domain.vertex_count() {
            return Err(GraphError::Morphism(format!(
                "vertex map has {} entries, domain has {} vertices",
                vmap.len(),
                domain.vertex_count()
            )));
        }
        if dmap.len() != domain.dart_count() {
            return Err(GraphError::Morphism(format!(
                "dart map has {} entries, domain has {} darts",
                dmap.len(),
                domain.dart_count()
            )));
        }
        if let Some(v) = vmap.iter().find(|v| v.0 >= codomain.vertex_count()) {
            return Err(GraphError::VertexOutOfRange(v.0));
        }
        if let Some(d) = dmap.iter().find(|d| d.0 >= codomain.dart_count()) {
            return Err(GraphError::DartOutOfRange(d.0));
        }
        for d in domain.darts() {
            let image = dmap[d.0];
            if codomain.src(image) != vmap[domain.src(d).0] {
                return Err(GraphError::Morphism(format!(
                    "incidence broken at dart `{}`: image dart `{}` does not start at the image of its source",
                    domain.dart_id(d),
                    codomain.dart_id(image)
                )));
            }
            if dmap[d.inv().0] != image.inv() {
                return Err(GraphError::Morphism(format!(
                    "involution broken at dart `{}`",
                    domain.dart_id(d)
                )));
            }
        }
        Ok(GraphMorphism {
            domain,
            codomain,
            vmap,
            dmap,
        })
    }

    /// Builds a morphism from per-edge images: edge `e` goes to edge
    /// `edge_map[e].0`, reversed when `edge_map[e].1` is set.
    pub fn from_edge_map(
        domain: Arc<FiniteGraph>,
        codomain: Arc<FiniteGraph>,
        vmap: Vec<Vertex>,
        edge_map: &[(usize, bool)],
    ) -> Result<Self, GraphError> {
        if edge_map.len() != domain.edge_count() {
            return Err(GraphError::Morphism(format!(
                "edge map has {} entries, domain has {} edges",
                edge_map.len(),
                domain.edge_count()
            )));
        }
        let mut dmap = Vec::with_capacity(domain.dart_count());
        for &(target, flip) in edge_map {
            if target >= codomain.edge_count() {
                return Err(GraphError::Morphism(format!("edge index {target} out of range")));
            }
            let image = Dart::from_edge(target, flip);
            dmap.push(image);
            dmap.push(image.inv());
        }
        Self::new(domain, codomain, vmap, dmap)
    }

    pub fn identity(graph: Arc<FiniteGraph>) -> Self {
        let vmap = graph.vertices().collect();
        let dmap = graph.darts().collect();
        GraphMorphism {
            domain: graph.clone(),
            codomain: graph,
            vmap,
            dmap,
        }
    }

    pub fn domain(&self) -> &Arc<FiniteGraph> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<FiniteGraph> {
        &self.codomain
    }

    pub fn vertex(&self, v: Vertex) -> Vertex {
        self.vmap[v.0]
    }

    pub fn dart(&self, d: Dart) -> Dart {
        self.dmap[d.0]
    }

    pub fn vertex_map(&self) -> &[Vertex] {
        &self.vmap
    }

    pub fn dart_map(&self) -> &[Dart] {
        &self.dmap
    }

    /// The image of edge `e` as `(edge, flipped)`.
    pub fn edge(&self, e: usize) -> (usize, bool) {
        let image = self.dmap[2 * e];
        (image.edge(), !image.is_positive())
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &GraphMorphism) -> Result<GraphMorphism, GraphError> {
        if !same_graph(&self.codomain, &next.domain) {
            return Err(GraphError::GraphMismatch(
                "cannot compose: codomain of the first map is not the domain of the second".into(),
            ));
        }
        Ok(GraphMorphism {
            domain: self.domain.clone(),
            codomain: next.codomain.clone(),
            vmap: self.vmap.iter().map(|&v| next.vmap[v.0]).collect(),
            dmap: self.dmap.iter().map(|&d| next.dmap[d.0]).collect(),
        })
    }

    /// Same maps, with the domain and codomain replaced by structurally
    /// equal graphs.
    pub fn rebind(
        &self,
        domain: Arc<FiniteGraph>,
        codomain: Arc<FiniteGraph>,
    ) -> Result<GraphMorphism, GraphError> {
        if !same_graph(&self.domain, &domain) || !same_graph(&self.codomain, &codomain) {
            return Err(GraphError::GraphMismatch("rebind needs equal graphs".into()));
        }
        Ok(GraphMorphism {
            domain,
            codomain,
            vmap: self.vmap.clone(),
            dmap: self.dmap.clone(),
        })
    }

    pub fn is_surjective(&self) -> bool {
        self.first_missed_vertex().is_none() && self.first_missed_dart().is_none()
    }

    /// Smallest codomain vertex outside the image, if any.
    pub fn first_missed_vertex(&self) -> Option<Vertex> {
        let mut hit = vec![false; self.codomain.vertex_count()];
        for v in &self.vmap {
            hit[v.0] = true;
        }
        hit.iter().position(|h| !h).map(Vertex)
    }

    pub fn first_missed_dart(&self) -> Option<Dart> {
        let mut hit = vec![false; self.codomain.dart_count()];
        for d in &self.dmap {
            hit[d.0] = true;
        }
        hit.iter().position(|h| !h).map(Dart)
    }

    pub fn is_bijective(&self) -> bool {
        self.domain.vertex_count() == self.codomain.vertex_count()
            && self.domain.dart_count() == self.codomain.dart_count()
            && self.is_surjective()
    }

    /// Maps a dart path through the morphism.
    pub fn map_path(&self, path: &[Dart]) -> Vec<Dart> {
        path.iter().map(|&d| self.dmap[d.0]).collect()
    }

    /// First element where `self` and `other` disagree, as a vertex or dart
    /// of the common domain.
    pub fn first_difference(&self, other: &GraphMorphism) -> Option<Element> {
        if let Some(v) = (0..self.vmap.len()).find(|&v| self.vmap[v] != other.vmap[v]) {
            return Some(Element::Vertex(Vertex(v)));
        }
        (0..self.dmap.len())
            .find(|&d| self.dmap[d] != other.dmap[d])
            .map(|d| Element::Dart(Dart(d)))
    }
}

/// A vertex or a dart; used for witnesses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Element {
    Vertex(Vertex),
    Dart(Dart),
}
