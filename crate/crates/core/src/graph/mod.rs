//! Finite Serre graphs and the combinatorics built directly on them:
//! morphisms, congruences with their quotients, and spanning trees.
//!
//! A graph is a set of vertices and a set of darts (oriented half-edges)
//! together with a source map and a fixed-point-free involution `inv`.
//! Darts are stored in pairs: dart `2k` and dart `2k + 1` are inverse to each
//! other and together form edge `k`. The target of a dart is the source of its
//! inverse.

mod congruence;
mod families;
mod morphism;
mod tree;

pub use congruence::{Congruence, InducedMapWitness};
pub use families::{bouquet, cycle, disjoint_union, path};
pub use morphism::{Element, GraphMorphism};
pub(crate) use morphism::same_graph;
pub use tree::{spanning_tree, SpanningTree};

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Index of a vertex inside its graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex(pub usize);

/// Index of a dart inside its graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dart(pub usize);

impl Vertex {
    pub fn index(self) -> usize {
        self.0
    }
}

impl Dart {
    pub fn index(self) -> usize {
        self.0
    }

    /// The inverse dart. Darts are paired `(2k, 2k + 1)`.
    pub fn inv(self) -> Dart {
        Dart(self.0 ^ 1)
    }

    /// The edge this dart belongs to.
    pub fn edge(self) -> usize {
        self.0 / 2
    }

    /// `true` for the dart oriented as its edge was declared (`src -> dst`).
    pub fn is_positive(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn from_edge(edge: usize, flip: bool) -> Dart {
        Dart(2 * edge + usize::from(flip))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("invalid graph: {0}")]
    Invalid(ValidationReport),
    #[error("unknown vertex id `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge id `{0}`")]
    UnknownEdge(String),
    #[error("vertex index {0} out of range")]
    VertexOutOfRange(usize),
    #[error("dart index {0} out of range")]
    DartOutOfRange(usize),
    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },
    #[error("invalid morphism: {0}")]
    Morphism(String),
    #[error("invalid congruence: {0}")]
    Congruence(String),
    #[error("not a path: dart {at} does not start where dart {previous} ends")]
    NotAPath { previous: usize, at: usize },
    #[error("graphs differ: {0}")]
    GraphMismatch(String),
}

/// A Serre graph with opaque string ids. Immutable once built.
#[derive(Clone)]
pub struct FiniteGraph {
    name: Option<String>,
    vertex_ids: Vec<String>,
    edge_ids: Vec<String>,
    dart_ids: Vec<String>,
    src: Vec<Vertex>,
    star: Vec<Vec<Dart>>,
    vertex_lookup: HashMap<String, Vertex>,
    edge_lookup: HashMap<String, usize>,
    dart_lookup: HashMap<String, Dart>,
}

impl PartialEq for FiniteGraph {
    /// Structural equality on ids and incidence; the display name is ignored.
    fn eq(&self, other: &Self) -> bool {
        self.vertex_ids == other.vertex_ids
            && self.edge_ids == other.edge_ids
            && self.dart_ids == other.dart_ids
            && self.src == other.src
    }
}

impl Eq for FiniteGraph {}

impl fmt::Debug for FiniteGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGraph")
            .field("name", &self.name)
            .field("vertices", &self.vertex_ids.len())
            .field("edges", &self.edge_ids.len())
            .finish()
    }
}

impl FiniteGraph {
    /// Builds a graph from vertex ids and `(edge id, src, dst)` triples given
    /// by vertex index. Edge `k` gets darts `"{id}+"` and `"{id}-"`.
    pub fn from_edges(
        name: Option<String>,
        vertex_ids: Vec<String>,
        edges: Vec<(String, usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut dart_ids = Vec::with_capacity(2 * edges.len());
        let mut src = Vec::with_capacity(2 * edges.len());
        let mut edge_ids = Vec::with_capacity(edges.len());
        for (id, s, t) in edges {
            if s >= vertex_ids.len() {
                return Err(GraphError::VertexOutOfRange(s));
            }
            if t >= vertex_ids.len() {
                return Err(GraphError::VertexOutOfRange(t));
            }
            dart_ids.push(format!("{id}+"));
            dart_ids.push(format!("{id}-"));
            src.push(Vertex(s));
            src.push(Vertex(t));
            edge_ids.push(id);
        }
        Self::assemble(name, vertex_ids, edge_ids, dart_ids, src)
    }

    fn assemble(
        name: Option<String>,
        vertex_ids: Vec<String>,
        edge_ids: Vec<String>,
        dart_ids: Vec<String>,
        src: Vec<Vertex>,
    ) -> Result<Self, GraphError> {
        let mut report = ValidationReport::default();
        let mut vertex_lookup = HashMap::with_capacity(vertex_ids.len());
        for (i, id) in vertex_ids.iter().enumerate() {
            if vertex_lookup.insert(id.clone(), Vertex(i)).is_some() {
                report.push(Violation::DuplicateVertex(id.clone()));
            }
        }
        let mut edge_lookup = HashMap::with_capacity(edge_ids.len());
        for (i, id) in edge_ids.iter().enumerate() {
            if edge_lookup.insert(id.clone(), i).is_some() {
                report.push(Violation::DuplicateEdge(id.clone()));
            }
        }
        let mut dart_lookup = HashMap::with_capacity(dart_ids.len());
        for (i, id) in dart_ids.iter().enumerate() {
            if dart_lookup.insert(id.clone(), Dart(i)).is_some() {
                report.push(Violation::DuplicateDart(id.clone()));
            }
        }
        if !report.is_valid() {
            return Err(GraphError::Invalid(report));
        }
        let mut star = vec![Vec::new(); vertex_ids.len()];
        for (d, s) in src.iter().enumerate() {
            star[s.0].push(Dart(d));
        }
        Ok(FiniteGraph {
            name,
            vertex_ids,
            edge_ids,
            dart_ids,
            src,
            star,
            vertex_lookup,
            edge_lookup,
            dart_lookup,
        })
    }

    /// Validates dart-level data and builds the graph. Each inverse pair
    /// becomes one edge, named after the first dart of the pair.
    pub fn from_parts(parts: &GraphParts) -> Result<Self, GraphError> {
        let report = validate_graph(parts);
        if !report.is_valid() {
            return Err(GraphError::Invalid(report));
        }
        let vindex: HashMap<&str, usize> = parts
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();
        let dindex: HashMap<&str, usize> = parts
            .darts
            .iter()
            .enumerate()
            .map(|(i, d)| (d.id.as_str(), i))
            .collect();
        let mut seen = vec![false; parts.darts.len()];
        let mut edge_ids = Vec::new();
        let mut dart_ids = Vec::new();
        let mut src = Vec::new();
        for (i, d) in parts.darts.iter().enumerate() {
            if seen[i] {
                continue;
            }
            let j = dindex[d.inv.as_str()];
            seen[i] = true;
            seen[j] = true;
            edge_ids.push(d.id.clone());
            dart_ids.push(d.id.clone());
            dart_ids.push(parts.darts[j].id.clone());
            src.push(Vertex(vindex[d.src.as_str()]));
            src.push(Vertex(vindex[parts.darts[j].src.as_str()]));
        }
        Self::assemble(
            parts.name.clone(),
            parts.vertices.clone(),
            edge_ids,
            dart_ids,
            src,
        )
    }

    /// Dart-level view of the graph, suitable for [`validate_graph`].
    pub fn to_parts(&self) -> GraphParts {
        GraphParts {
            name: self.name.clone(),
            vertices: self.vertex_ids.clone(),
            darts: self
                .darts()
                .map(|d| DartSpec {
                    id: self.dart_id(d).to_owned(),
                    src: self.vertex_id(self.src(d)).to_owned(),
                    inv: self.dart_id(d.inv()).to_owned(),
                })
                .collect(),
        }
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_ids.len()
    }

    pub fn dart_count(&self) -> usize {
        self.src.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_ids.len()
    }

    pub fn vertices(&self) -> impl ExactSizeIterator<Item = Vertex> + '_ {
        (0..self.vertex_ids.len()).map(Vertex)
    }

    pub fn darts(&self) -> impl ExactSizeIterator<Item = Dart> + '_ {
        (0..self.src.len()).map(Dart)
    }

    pub fn src(&self, d: Dart) -> Vertex {
        self.src[d.0]
    }

    pub fn dst(&self, d: Dart) -> Vertex {
        self.src[d.inv().0]
    }

    /// Darts with source `v`, in increasing index order.
    pub fn star(&self, v: Vertex) -> &[Dart] {
        &self.star[v.0]
    }

    pub fn vertex_id(&self, v: Vertex) -> &str {
        &self.vertex_ids[v.0]
    }

    pub fn dart_id(&self, d: Dart) -> &str {
        &self.dart_ids[d.0]
    }

    pub fn edge_id(&self, edge: usize) -> &str {
        &self.edge_ids[edge]
    }

    pub fn vertex_ids(&self) -> &[String] {
        &self.vertex_ids
    }

    pub fn edge_ids(&self) -> &[String] {
        &self.edge_ids
    }

    pub fn vertex(&self, id: &str) -> Option<Vertex> {
        self.vertex_lookup.get(id).copied()
    }

    pub fn dart(&self, id: &str) -> Option<Dart> {
        self.dart_lookup.get(id).copied()
    }

    pub fn edge(&self, id: &str) -> Option<usize> {
        self.edge_lookup.get(id).copied()
    }

    pub fn require_vertex(&self, id: &str) -> Result<Vertex, GraphError> {
        self.vertex(id)
            .ok_or_else(|| GraphError::UnknownVertex(id.to_owned()))
    }

    pub fn require_edge(&self, id: &str) -> Result<usize, GraphError> {
        self.edge(id).ok_or_else(|| GraphError::UnknownEdge(id.to_owned()))
    }

    /// Cycle rank `|E| - |V| + c`, the rank of the free fundamental group of
    /// each component summed over components (for connected graphs, the
    /// rank of `pi_1`).
    pub fn cycle_rank(&self) -> usize {
        self.edge_count() + self.components().len() - self.vertex_count()
    }

    /// Vertex partition into connected components, each sorted, listed by
    /// smallest member.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let labels = self.component_labels();
        let count = labels.iter().map(|&c| c + 1).max().unwrap_or(0);
        let mut out = vec![Vec::new(); count];
        for (v, &c) in labels.iter().enumerate() {
            out[c].push(Vertex(v));
        }
        out
    }

    /// Component number for each vertex, numbered in order of smallest member.
    pub fn component_labels(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.vertex_count()];
        let mut next = 0;
        for start in 0..self.vertex_count() {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = next;
            let mut stack = vec![Vertex(start)];
            while let Some(v) = stack.pop() {
                for &d in self.star(v) {
                    let w = self.dst(d);
                    if label[w.0] == usize::MAX {
                        label[w.0] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        label
    }

    /// `true` iff every vertex is reachable from every other one. The empty
    /// graph and a single vertex count as connected.
    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Checks that `path` is a contiguous dart sequence.
    pub fn check_path(&self, path: &[Dart]) -> Result<(), GraphError> {
        for d in path {
            if d.0 >= self.dart_count() {
                return Err(GraphError::DartOutOfRange(d.0));
            }
        }
        for w in path.windows(2) {
            if self.dst(w[0]) != self.src(w[1]) {
                return Err(GraphError::NotAPath {
                    previous: w[0].0,
                    at: w[1].0,
                });
            }
        }
        Ok(())
    }
}

/// Unvalidated dart-level description of a graph.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GraphParts {
    pub name: Option<String>,
    pub vertices: Vec<String>,
    pub darts: Vec<DartSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DartSpec {
    pub id: String,
    pub src: String,
    pub inv: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    DuplicateVertex(String),
    DuplicateEdge(String),
    DuplicateDart(String),
    DanglingSource { dart: String, src: String },
    DanglingInverse { dart: String, inv: String },
    FixedDart(String),
    NotInvolution { dart: String, inv: String, back: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateVertex(v) => write!(f, "duplicate vertex id `{v}`"),
            Violation::DuplicateEdge(e) => write!(f, "duplicate edge id `{e}`"),
            Violation::DuplicateDart(d) => write!(f, "duplicate dart id `{d}`"),
            Violation::DanglingSource { dart, src } => {
                write!(f, "dangling incidence: dart `{dart}` has unknown source `{src}`")
            }
            Violation::DanglingInverse { dart, inv } => {
                write!(f, "dangling incidence: dart `{dart}` has unknown inverse `{inv}`")
            }
            Violation::FixedDart(d) => write!(f, "fixed dart: `{d}` is its own inverse"),
            Violation::NotInvolution { dart, inv, back } => write!(
                f,
                "involution broken: inv(`{dart}`) = `{inv}` but inv(`{inv}`) = `{back}`"
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, v: Violation) {
        self.violations.push(v);
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Lists every invariant violation in dart-level graph data.
pub fn validate_graph(parts: &GraphParts) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut vertices = HashMap::new();
    for v in &parts.vertices {
        if vertices.insert(v.as_str(), ()).is_some() {
            report.push(Violation::DuplicateVertex(v.clone()));
        }
    }
    let mut darts: HashMap<&str, &DartSpec> = HashMap::new();
    for d in &parts.darts {
        if darts.insert(d.id.as_str(), d).is_some() {
            report.push(Violation::DuplicateDart(d.id.clone()));
        }
    }
    for d in &parts.darts {
        if !vertices.contains_key(d.src.as_str()) {
            report.push(Violation::DanglingSource {
                dart: d.id.clone(),
                src: d.src.clone(),
            });
        }
        match darts.get(d.inv.as_str()) {
            None => report.push(Violation::DanglingInverse {
                dart: d.id.clone(),
                inv: d.inv.clone(),
            }),
            Some(_) if d.inv == d.id => report.push(Violation::FixedDart(d.id.clone())),
            Some(e) if e.inv != d.id => report.push(Violation::NotInvolution {
                dart: d.id.clone(),
                inv: e.id.clone(),
                back: e.inv.clone(),
            }),
            Some(_) => {}
        }
    }
    report
}
