//! Versioned JSON file formats and a loader that resolves graph references.
//!
//! Every file is an object with a `"format"` field such as
//! `"procover-graph/1"`. Files that need graphs (morphisms, congruences,
//! actions, towers) refer to them either by a path, resolved against the
//! referring file's directory, or by an inline graph object.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::covering::GroupAction;
use crate::free_group::{FreeWord, GeneratorImages, PermRep};
use crate::graph::{Congruence, Dart, DartSpec, FiniteGraph, GraphMorphism, GraphParts, Vertex};
use crate::tower::{Tower, UniversalSpec};

pub const GRAPH_FORMAT: &str = "procover-graph/1";
pub const MORPHISM_FORMAT: &str = "procover-morphism/1";
pub const CONGRUENCE_FORMAT: &str = "procover-congruence/1";
pub const REP_FORMAT: &str = "procover-rep/1";
pub const IMAGES_FORMAT: &str = "procover-images/1";
pub const ACTION_FORMAT: &str = "procover-action/1";
pub const TOWER_FORMAT: &str = "procover-tower/1";
pub const UNIVERSAL_FORMAT: &str = "procover-universal/1";

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}: malformed JSON: {message}")]
    Json { path: String, message: String },
    #[error("{path}: expected format `{expected}`, found `{found}`")]
    WrongFormat {
        path: String,
        expected: &'static str,
        found: String,
    },
    #[error("{path}: missing `{field}`")]
    Missing { path: String, field: &'static str },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
}

fn invalid(path: &str, e: impl std::fmt::Display) -> FormatError {
    FormatError::Invalid {
        path: path.to_owned(),
        message: e.to_string(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeEntry {
    pub id: String,
    pub src: String,
    pub dst: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DartEntry {
    pub id: String,
    pub src: String,
    pub inv: String,
}

/// A graph, listed by edges or, for raw data that may be invalid, by darts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub format: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub vertices: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<EdgeEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub darts: Option<Vec<DartEntry>>,
}

/// A path to a file or the file's content inline.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Ref<T> {
    Path(String),
    Inline(Box<T>),
}

/// The image of an edge: target edge id, reversed when `flip` is set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeTarget {
    pub edge: String,
    #[serde(default)]
    pub flip: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismFile {
    pub format: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<Ref<GraphFile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub codomain: Option<Ref<GraphFile>>,
    pub vertex_map: BTreeMap<String, String>,
    pub edge_map: BTreeMap<String, EdgeTarget>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceFile {
    pub format: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<Ref<GraphFile>>,
    #[serde(default)]
    pub vertex_classes: Vec<Vec<String>>,
    #[serde(default)]
    pub edge_classes: Vec<Vec<EdgeTarget>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepFile {
    pub format: String,
    pub rank: usize,
    pub degree: usize,
    pub perms: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImagesFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
    pub source_rank: usize,
    pub target_rank: usize,
    pub images: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionElement {
    pub vertex_map: BTreeMap<String, String>,
    pub edge_map: BTreeMap<String, EdgeTarget>,
}

/// A group acting on a graph, listed element by element; the first element
/// must be the identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionFile {
    pub format: String,
    pub graph: Ref<GraphFile>,
    pub elements: Vec<ActionElement>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelEntry {
    pub gamma: Ref<GraphFile>,
    pub delta: Ref<GraphFile>,
    pub f: Ref<MorphismFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerFile {
    pub format: String,
    pub levels: Vec<LevelEntry>,
    #[serde(default)]
    pub phi: Vec<Ref<MorphismFile>>,
    #[serde(default)]
    pub psi: Vec<Ref<MorphismFile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basepoints: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniversalFile {
    pub format: String,
    pub base: Ref<GraphFile>,
    pub basepoint: String,
    #[serde(default)]
    pub quotients: Vec<Option<Ref<CongruenceFile>>>,
    pub normals: Vec<Ref<RepFile>>,
}

trait Versioned {
    const FORMAT: &'static str;
    fn format(&self) -> Option<&str>;
}

macro_rules! versioned {
    ($t:ty, $f:expr) => {
        impl Versioned for $t {
            const FORMAT: &'static str = $f;
            fn format(&self) -> Option<&str> {
                Some(&self.format)
            }
        }
    };
}

versioned!(GraphFile, GRAPH_FORMAT);
versioned!(MorphismFile, MORPHISM_FORMAT);
versioned!(CongruenceFile, CONGRUENCE_FORMAT);
versioned!(RepFile, REP_FORMAT);
versioned!(ActionFile, ACTION_FORMAT);
versioned!(TowerFile, TOWER_FORMAT);
versioned!(UniversalFile, UNIVERSAL_FORMAT);

impl Versioned for ImagesFile {
    const FORMAT: &'static str = IMAGES_FORMAT;
    fn format(&self) -> Option<&str> {
        self.format.as_deref()
    }
}

fn check_format<T: Versioned>(value: &T, path: &str) -> Result<(), FormatError> {
    match value.format() {
        Some(f) if f == T::FORMAT => Ok(()),
        Some(f) => Err(FormatError::WrongFormat {
            path: path.to_owned(),
            expected: T::FORMAT,
            found: f.to_owned(),
        }),
        None => Ok(()),
    }
}

/// Parses a document of a declared format.
fn parse<T: DeserializeOwned + Versioned>(text: &str, path: &str) -> Result<T, FormatError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| FormatError::Json {
        path: path.to_owned(),
        message: e.to_string(),
    })?;
    if let Some(found) = value.get("format").and_then(|f| f.as_str()) {
        if found != T::FORMAT {
            return Err(FormatError::WrongFormat {
                path: path.to_owned(),
                expected: T::FORMAT,
                found: found.to_owned(),
            });
        }
    }
    let parsed: T = serde_json::from_value(value).map_err(|e| FormatError::Json {
        path: path.to_owned(),
        message: e.to_string(),
    })?;
    check_format(&parsed, path)?;
    Ok(parsed)
}

// ---- conversions between file types and library values ----

/// Dart-level data of a graph file, without validation.
pub fn graph_parts(file: &GraphFile) -> GraphParts {
    let mut darts = Vec::new();
    if let Some(edges) = &file.edges {
        for e in edges {
            darts.push(DartSpec {
                id: format!("{}+", e.id),
                src: e.src.clone(),
                inv: format!("{}-", e.id),
            });
            darts.push(DartSpec {
                id: format!("{}-", e.id),
                src: e.dst.clone(),
                inv: format!("{}+", e.id),
            });
        }
    }
    if let Some(listed) = &file.darts {
        darts.extend(listed.iter().map(|d| DartSpec {
            id: d.id.clone(),
            src: d.src.clone(),
            inv: d.inv.clone(),
        }));
    }
    GraphParts {
        name: file.name.clone(),
        vertices: file.vertices.clone(),
        darts,
    }
}

pub fn graph_from_file(file: &GraphFile, path: &str) -> Result<FiniteGraph, FormatError> {
    match (&file.edges, &file.darts) {
        (Some(edges), None) => {
            let index: HashMap<&str, usize> = file
                .vertices
                .iter()
                .enumerate()
                .map(|(i, v)| (v.as_str(), i))
                .collect();
            let lookup = |v: &str| {
                index.get(v).copied().ok_or_else(|| FormatError::Invalid {
                    path: path.to_owned(),
                    message: format!("unknown vertex id `{v}`"),
                })
            };
            let triples = edges
                .iter()
                .map(|e| Ok((e.id.clone(), lookup(&e.src)?, lookup(&e.dst)?)))
                .collect::<Result<Vec<_>, FormatError>>()?;
            FiniteGraph::from_edges(file.name.clone(), file.vertices.clone(), triples).map_err(|e| invalid(path, e))
        }
        (None, Some(_)) => FiniteGraph::from_parts(&graph_parts(file)).map_err(|e| invalid(path, e)),
        (None, None) => Ok(FiniteGraph::from_edges(file.name.clone(), file.vertices.clone(), vec![])
            .map_err(|e| invalid(path, e))?),
        (Some(_), Some(_)) => Err(invalid(path, "list either `edges` or `darts`, not both")),
    }
}

pub fn graph_to_file(g: &FiniteGraph) -> GraphFile {
    GraphFile {
        format: GRAPH_FORMAT.into(),
        name: g.name().map(str::to_owned),
        vertices: g.vertex_ids().to_vec(),
        edges: Some(
            (0..g.edge_count())
                .map(|e| {
                    let d = Dart::from_edge(e, false);
                    EdgeEntry {
                        id: g.edge_id(e).to_owned(),
                        src: g.vertex_id(g.src(d)).to_owned(),
                        dst: g.vertex_id(g.dst(d)).to_owned(),
                    }
                })
                .collect(),
        ),
        darts: None,
    }
}

fn maps_from_file(
    vertex_map: &BTreeMap<String, String>,
    edge_map: &BTreeMap<String, EdgeTarget>,
    domain: &Arc<FiniteGraph>,
    codomain: &Arc<FiniteGraph>,
    path: &str,
) -> Result<GraphMorphism, FormatError> {
    let mut vmap = vec![None; domain.vertex_count()];
    for (from, to) in vertex_map {
        let v = domain.require_vertex(from).map_err(|e| invalid(path, e))?;
        vmap[v.0] = Some(codomain.require_vertex(to).map_err(|e| invalid(path, e))?);
    }
    let vmap = vmap
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| invalid(path, format!("vertex `{}` is not mapped", domain.vertex_id(Vertex(i))))))
        .collect::<Result<Vec<_>, _>>()?;
    let mut emap = vec![None; domain.edge_count()];
    for (from, to) in edge_map {
        let e = domain.require_edge(from).map_err(|e| invalid(path, e))?;
        emap[e] = Some((codomain.require_edge(&to.edge).map_err(|e| invalid(path, e))?, to.flip));
    }
    let emap = emap
        .into_iter()
        .enumerate()
        .map(|(i, e)| e.ok_or_else(|| invalid(path, format!("edge `{}` is not mapped", domain.edge_id(i)))))
        .collect::<Result<Vec<_>, _>>()?;
    GraphMorphism::from_edge_map(domain.clone(), codomain.clone(), vmap, &emap).map_err(|e| invalid(path, e))
}

fn maps_to_file(m: &GraphMorphism) -> (BTreeMap<String, String>, BTreeMap<String, EdgeTarget>) {
    let (dom, cod) = (m.domain(), m.codomain());
    let vertex_map = dom
        .vertices()
        .map(|v| (dom.vertex_id(v).to_owned(), cod.vertex_id(m.vertex(v)).to_owned()))
        .collect();
    let edge_map = (0..dom.edge_count())
        .map(|e| {
            let (target, flip) = m.edge(e);
            (
                dom.edge_id(e).to_owned(),
                EdgeTarget {
                    edge: cod.edge_id(target).to_owned(),
                    flip,
                },
            )
        })
        .collect();
    (vertex_map, edge_map)
}

/// A morphism file with both graphs inline.
pub fn morphism_to_file(m: &GraphMorphism) -> MorphismFile {
    let (vertex_map, edge_map) = maps_to_file(m);
    MorphismFile {
        format: MORPHISM_FORMAT.into(),
        domain: Some(Ref::Inline(Box::new(graph_to_file(m.domain())))),
        codomain: Some(Ref::Inline(Box::new(graph_to_file(m.codomain())))),
        vertex_map,
        edge_map,
    }
}

fn bare_morphism(m: &GraphMorphism) -> Ref<MorphismFile> {
    let (vertex_map, edge_map) = maps_to_file(m);
    Ref::Inline(Box::new(MorphismFile {
        format: MORPHISM_FORMAT.into(),
        domain: None,
        codomain: None,
        vertex_map,
        edge_map,
    }))
}

/// A self-contained tower file: every graph inline, once per level.
pub fn tower_to_file(t: &Tower) -> TowerFile {
    let inline = |g: &FiniteGraph| Ref::Inline(Box::new(graph_to_file(g)));
    TowerFile {
        format: TOWER_FORMAT.into(),
        levels: (0..t.level_count())
            .map(|i| LevelEntry {
                gamma: inline(t.gamma(i)),
                delta: inline(t.delta(i)),
                f: bare_morphism(t.level(i)),
            })
            .collect(),
        phi: (0..t.top()).map(|i| bare_morphism(t.phi(i))).collect(),
        psi: (0..t.top()).map(|i| bare_morphism(t.psi(i))).collect(),
        basepoints: t.basepoints().map(|b| {
            b.iter()
                .enumerate()
                .map(|(i, &v)| t.gamma(i).vertex_id(v).to_owned())
                .collect()
        }),
    }
}

pub fn rep_from_file(file: &RepFile, path: &str) -> Result<PermRep, FormatError> {
    if file.perms.len() != file.rank {
        return Err(invalid(path, format!("rank {} but {} permutations", file.rank, file.perms.len())));
    }
    let rep = PermRep::new(file.degree, file.perms.clone()).map_err(|e| invalid(path, e))?;
    if rep.rank() != file.rank {
        return Err(invalid(path, "rank does not match the permutations"));
    }
    Ok(rep)
}

pub fn rep_to_file(rep: &PermRep) -> RepFile {
    RepFile {
        format: REP_FORMAT.into(),
        rank: rep.rank(),
        degree: rep.degree(),
        perms: rep.perms().to_vec(),
    }
}

pub fn images_from_file(file: &ImagesFile, path: &str) -> Result<GeneratorImages, FormatError> {
    if file.images.len() != file.source_rank {
        return Err(invalid(
            path,
            format!("source rank {} but {} images", file.source_rank, file.images.len()),
        ));
    }
    let words = file
        .images
        .iter()
        .map(|w| w.parse::<FreeWord>().map_err(|e| invalid(path, e)))
        .collect::<Result<Vec<_>, _>>()?;
    GeneratorImages::new(file.target_rank, words).map_err(|e| invalid(path, e))
}

pub fn images_to_file(h: &GeneratorImages) -> ImagesFile {
    ImagesFile {
        format: Some(IMAGES_FORMAT.into()),
        source_rank: h.source_rank(),
        target_rank: h.target_rank(),
        images: h.images().iter().map(|w| w.to_string()).collect(),
    }
}

pub fn congruence_to_file(r: &Congruence) -> CongruenceFile {
    let g = r.base();
    let vertex_classes = r
        .vertex_classes()
        .into_iter()
        .filter(|c| c.len() > 1)
        .map(|c| c.iter().map(|&v| g.vertex_id(v).to_owned()).collect())
        .collect();
    let edge_classes = r
        .dart_classes()
        .into_iter()
        .filter(|c| c.len() > 1 && c[0].is_positive())
        .map(|c| {
            c.iter()
                .map(|&d| EdgeTarget {
                    edge: g.edge_id(d.edge()).to_owned(),
                    flip: !d.is_positive(),
                })
                .collect()
        })
        .collect();
    CongruenceFile {
        format: CONGRUENCE_FORMAT.into(),
        graph: None,
        vertex_classes,
        edge_classes,
    }
}

fn congruence_from_file(file: &CongruenceFile, graph: &Arc<FiniteGraph>, path: &str) -> Result<Congruence, FormatError> {
    let vclasses = file
        .vertex_classes
        .iter()
        .map(|c| c.iter().map(|v| graph.require_vertex(v)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| invalid(path, e))?;
    let dclasses = file
        .edge_classes
        .iter()
        .map(|c| {
            c.iter()
                .map(|t| graph.require_edge(&t.edge).map(|e| Dart::from_edge(e, t.flip)))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| invalid(path, e))?;
    Congruence::from_classes(graph.clone(), &vclasses, &dclasses).map_err(|e| invalid(path, e))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("file types serialize")
}

// ---- loading from disk ----

/// Reads files and resolves references, sharing graphs loaded from the same
/// path.
#[derive(Debug, Default)]
pub struct Loader {
    graphs: HashMap<PathBuf, Arc<FiniteGraph>>,
}

fn read(path: &Path) -> Result<String, FormatError> {
    fs::read_to_string(path).map_err(|e| FormatError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn dir_of(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

impl Loader {
    pub fn new() -> Self {
        Self::default()
    }

    fn document<T: DeserializeOwned + Versioned>(&self, path: &Path) -> Result<T, FormatError> {
        parse(&read(path)?, &path.display().to_string())
    }

    /// Dart-level data of a graph file, for validation.
    pub fn graph_parts(&self, path: &Path) -> Result<GraphParts, FormatError> {
        Ok(graph_parts(&self.document::<GraphFile>(path)?))
    }

    pub fn graph(&mut self, path: &Path) -> Result<Arc<FiniteGraph>, FormatError> {
        let key = path.to_path_buf();
        if let Some(g) = self.graphs.get(&key) {
            return Ok(g.clone());
        }
        let file: GraphFile = self.document(path)?;
        let g = Arc::new(graph_from_file(&file, &path.display().to_string())?);
        self.graphs.insert(key, g.clone());
        Ok(g)
    }

    fn graph_ref(&mut self, r: &Ref<GraphFile>, dir: &Path, at: &str) -> Result<Arc<FiniteGraph>, FormatError> {
        match r {
            Ref::Path(p) => self.graph(&dir.join(p)),
            Ref::Inline(file) => {
                check_format(file.as_ref(), at)?;
                Ok(Arc::new(graph_from_file(file, at)?))
            }
        }
    }

    fn resolve<T: DeserializeOwned + Versioned>(&self, r: &Ref<T>, dir: &Path, at: &str) -> Result<(T, PathBuf, String), FormatError>
    where
        T: Clone,
    {
        match r {
            Ref::Path(p) => {
                let full = dir.join(p);
                Ok((self.document(&full)?, dir_of(&full), full.display().to_string()))
            }
            Ref::Inline(v) => {
                check_format(v.as_ref(), at)?;
                Ok((v.as_ref().clone(), dir.to_path_buf(), at.to_owned()))
            }
        }
    }

    /// Loads a morphism. Graphs given by the caller take precedence; a graph
    /// the file also declares must then be equal to it.
    pub fn morphism(
        &mut self,
        path: &Path,
        domain: Option<Arc<FiniteGraph>>,
        codomain: Option<Arc<FiniteGraph>>,
    ) -> Result<GraphMorphism, FormatError> {
        let file: MorphismFile = self.document(path)?;
        self.morphism_from(&file, &dir_of(path), &path.display().to_string(), domain, codomain)
    }

    fn morphism_from(
        &mut self,
        file: &MorphismFile,
        dir: &Path,
        at: &str,
        domain: Option<Arc<FiniteGraph>>,
        codomain: Option<Arc<FiniteGraph>>,
    ) -> Result<GraphMorphism, FormatError> {
        let mut pick = |given: Option<Arc<FiniteGraph>>, declared: &Option<Ref<GraphFile>>, field: &'static str| {
            match (given, declared) {
                (Some(g), None) => Ok(g),
                (Some(g), Some(r)) => {
                    let d = self.graph_ref(r, dir, at)?;
                    if *d != *g {
                        return Err(invalid(at, format!("declared {field} differs from the expected graph")));
                    }
                    Ok(g)
                }
                (None, Some(r)) => self.graph_ref(r, dir, at),
                (None, None) => Err(FormatError::Missing {
                    path: at.to_owned(),
                    field,
                }),
            }
        };
        let domain = pick(domain, &file.domain, "domain")?;
        let codomain = pick(codomain, &file.codomain, "codomain")?;
        maps_from_file(&file.vertex_map, &file.edge_map, &domain, &codomain, at)
    }

    pub fn congruence(&mut self, path: &Path, graph: Option<Arc<FiniteGraph>>) -> Result<Congruence, FormatError> {
        let file: CongruenceFile = self.document(path)?;
        self.congruence_from(&file, &dir_of(path), &path.display().to_string(), graph)
    }

    fn congruence_from(
        &mut self,
        file: &CongruenceFile,
        dir: &Path,
        at: &str,
        graph: Option<Arc<FiniteGraph>>,
    ) -> Result<Congruence, FormatError> {
        let graph = match (graph, &file.graph) {
            (Some(g), _) => g,
            (None, Some(r)) => self.graph_ref(r, dir, at)?,
            (None, None) => {
                return Err(FormatError::Missing {
                    path: at.to_owned(),
                    field: "graph",
                })
            }
        };
        congruence_from_file(file, &graph, at)
    }

    /// The raw rep file, before the transitivity check.
    pub fn rep_file(&self, path: &Path) -> Result<RepFile, FormatError> {
        self.document(path)
    }

    pub fn rep(&self, path: &Path) -> Result<PermRep, FormatError> {
        rep_from_file(&self.document(path)?, &path.display().to_string())
    }

    pub fn images(&self, path: &Path) -> Result<GeneratorImages, FormatError> {
        images_from_file(&self.document(path)?, &path.display().to_string())
    }

    pub fn action(&mut self, path: &Path) -> Result<GroupAction, FormatError> {
        let at = path.display().to_string();
        let file: ActionFile = self.document(path)?;
        let graph = self.graph_ref(&file.graph, &dir_of(path), &at)?;
        let maps = file
            .elements
            .iter()
            .map(|e| maps_from_file(&e.vertex_map, &e.edge_map, &graph, &graph, &at))
            .collect::<Result<Vec<_>, _>>()?;
        GroupAction::from_automorphisms(graph, maps).map_err(|e| invalid(&at, e))
    }

    pub fn tower(&mut self, path: &Path) -> Result<Tower, FormatError> {
        let at = path.display().to_string();
        let dir = dir_of(path);
        let file: TowerFile = self.document(path)?;
        let mut gammas = Vec::new();
        let mut deltas = Vec::new();
        let mut levels = Vec::new();
        for level in &file.levels {
            let gamma = self.graph_ref(&level.gamma, &dir, &at)?;
            let delta = self.graph_ref(&level.delta, &dir, &at)?;
            let (f, fdir, fat) = self.resolve(&level.f, &dir, &at)?;
            levels.push(self.morphism_from(&f, &fdir, &fat, Some(gamma.clone()), Some(delta.clone()))?);
            gammas.push(gamma);
            deltas.push(delta);
        }
        let mut bondings = |refs: &[Ref<MorphismFile>], graphs: &[Arc<FiniteGraph>]| {
            refs.iter()
                .enumerate()
                .map(|(i, r)| {
                    let (m, mdir, mat) = self.resolve(r, &dir, &at)?;
                    let (Some(hi), Some(lo)) = (graphs.get(i + 1), graphs.get(i)) else {
                        return Err(invalid(&at, "more bondings than steps"));
                    };
                    self.morphism_from(&m, &mdir, &mat, Some(hi.clone()), Some(lo.clone()))
                })
                .collect::<Result<Vec<_>, FormatError>>()
        };
        let phi = bondings(&file.phi, &gammas)?;
        let psi = bondings(&file.psi, &deltas)?;
        let basepoints = match &file.basepoints {
            None => None,
            Some(ids) => {
                if ids.len() != gammas.len() {
                    return Err(invalid(&at, format!("{} base points for {} levels", ids.len(), gammas.len())));
                }
                Some(
                    ids.iter()
                        .zip(&gammas)
                        .map(|(v, g)| g.require_vertex(v).map_err(|e| invalid(&at, e)))
                        .collect::<Result<Vec<_>, _>>()?,
                )
            }
        };
        Tower::new(levels, phi, psi, basepoints).map_err(|e| invalid(&at, e))
    }

    pub fn universal(&mut self, path: &Path) -> Result<UniversalSpec, FormatError> {
        let at = path.display().to_string();
        let dir = dir_of(path);
        let file: UniversalFile = self.document(path)?;
        let base = self.graph_ref(&file.base, &dir, &at)?;
        let basepoint = base.require_vertex(&file.basepoint).map_err(|e| invalid(&at, e))?;
        let normals = file
            .normals
            .iter()
            .map(|r| {
                let (rep, _, rat) = self.resolve(r, &dir, &at)?;
                rep_from_file(&rep, &rat)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let quotients = if file.quotients.is_empty() {
            vec![Congruence::diagonal(base.clone()); normals.len()]
        } else {
            file.quotients
                .iter()
                .map(|q| match q {
                    None => Ok(Congruence::diagonal(base.clone())),
                    Some(r) => {
                        let (c, cdir, cat) = self.resolve(r, &dir, &at)?;
                        self.congruence_from(&c, &cdir, &cat, Some(base.clone()))
                    }
                })
                .collect::<Result<Vec<_>, _>>()?
        };
        Ok(UniversalSpec {
            base,
            basepoint,
            quotients,
            normals,
        })
    }
}

/// Parses an in-memory graph document.
pub fn parse_graph(text: &str) -> Result<FiniteGraph, FormatError> {
    graph_from_file(&parse::<GraphFile>(text, "<input>")?, "<input>")
}

pub fn parse_rep(text: &str) -> Result<PermRep, FormatError> {
    rep_from_file(&parse::<RepFile>(text, "<input>")?, "<input>")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{bouquet, cycle};

    #[test]
    fn graph_round_trip() {
        let g = cycle(4);
        let text = to_json(&graph_to_file(&g));
        assert_eq!(parse_graph(&text).unwrap(), g);
    }

    #[test]
    fn tower_round_trip() {
        let t = crate::tower::fixtures::pro_two(2);
        let dir = std::env::temp_dir().join(format!("procover-tower-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("t.json");
        fs::write(&path, to_json(&tower_to_file(&t))).unwrap();
        let back = Loader::new().tower(&path).unwrap();
        fs::remove_dir_all(&dir).unwrap();
        assert_eq!(back.level_count(), 3);
        for i in 0..3 {
            assert_eq!(back.level(i), t.level(i));
        }
        assert_eq!(back.basepoints(), t.basepoints());
    }

    #[test]
    fn wrong_format_and_bad_json() {
        let text = r#"{"format": "procover-rep/1", "vertices": []}"#;
        assert!(matches!(parse_graph(text), Err(FormatError::WrongFormat { .. })));
        assert!(matches!(parse_graph("{"), Err(FormatError::Json { .. })));
    }

    #[test]
    fn dart_listing_with_a_fixed_dart_is_invalid() {
        let text = r#"{"format": "procover-graph/1", "vertices": ["v"],
            "darts": [{"id": "a", "src": "v", "inv": "a"}]}"#;
        assert!(matches!(parse_graph(text), Err(FormatError::Invalid { .. })));
        let file: GraphFile = parse(text, "t").unwrap();
        let report = crate::graph::validate_graph(&graph_parts(&file));
        assert!(report.to_string().contains("fixed dart"));
    }

    #[test]
    fn rep_round_trip() {
        let rep = PermRep::new(3, vec![vec![1, 0, 2], vec![0, 2, 1]]).unwrap();
        let text = to_json(&rep_to_file(&rep));
        assert_eq!(parse_rep(&text).unwrap(), rep);
        assert!(parse_rep(r#"{"format": "procover-rep/1", "rank": 1, "degree": 2, "perms": [[0, 0]]}"#).is_err());
    }

    #[test]
    fn morphism_and_congruence_round_trip() {
        let dir = std::env::temp_dir().join(format!("procover-formats-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let b2 = Arc::new(bouquet(2));
        let b1 = Arc::new(bouquet(1));
        let m = GraphMorphism::from_edge_map(b2.clone(), b1, vec![Vertex(0)], &[(0, false), (0, true)]).unwrap();
        let path = dir.join("m.json");
        fs::write(&path, to_json(&morphism_to_file(&m))).unwrap();
        let mut loader = Loader::new();
        assert_eq!(loader.morphism(&path, None, None).unwrap(), m);
        let r = m.kernel();
        let cpath = dir.join("r.json");
        fs::write(&cpath, to_json(&congruence_to_file(&r))).unwrap();
        assert_eq!(loader.congruence(&cpath, Some(b2)).unwrap(), r);
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn images_parse() {
        let file = ImagesFile {
            format: None,
            source_rank: 2,
            target_rank: 2,
            images: vec!["x1 x0".into(), "x1".into()],
        };
        let h = images_from_file(&file, "t").unwrap();
        assert_eq!(images_to_file(&h).images, vec!["x1 x0", "x1"]);
    }
}
