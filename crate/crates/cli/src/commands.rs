use std::fs;
use std::path::Path;

use serde_json::{json, Value};
use thiserror::Error;

use procover::covering::{
    as_covering, cover_from_subgroup, deck_group, euler_relation_holds, image_subgroup, is_regular, lift, pi1_data,
    quotient_by_deck_subgroup, quotient_by_group, Covering, CoveringError, Lift, StarDefect,
};
use procover::formats::{graph_to_file, morphism_to_file, rep_from_file, rep_to_file, to_json, FormatError, Loader};
use procover::free_group::{
    is_normal, low_index_reps, orbits, EnumerationLimits, FreeWord, GroupError, Letter, PermRep, DEFAULT_MAX_WORK,
};
use procover::graph::{validate_graph, Dart, Element, FiniteGraph, GraphError, GraphMorphism, Vertex};
use procover::sample;
use procover::tower::{classify_pair, PairVerdict, TowerError};

use crate::report::{Report, INPUT_ERROR, NEGATIVE, OK, RESOURCE_GUARD};
use crate::{towers, Command};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Resource(String),
    #[error("cannot write {path}: {message}")]
    Write { path: String, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Resource(_) => RESOURCE_GUARD,
            _ => INPUT_ERROR,
        }
    }
}

fn resource(e: &GroupError) -> bool {
    matches!(e, GroupError::ResourceLimit(_))
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        if resource(&e) {
            CliError::Resource(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<CoveringError> for CliError {
    fn from(e: CoveringError) -> Self {
        match &e {
            CoveringError::Group(g) if resource(g) => CliError::Resource(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<TowerError> for CliError {
    fn from(e: TowerError) -> Self {
        match &e {
            TowerError::Group(g)
            | TowerError::Covering(CoveringError::Group(g))
            | TowerError::Level {
                source: CoveringError::Group(g),
                ..
            } if resource(g) => CliError::Resource(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

pub struct Context {
    pub seed: u64,
    pub max_work: Option<u64>,
}

impl Context {
    pub fn limits(&self) -> EnumerationLimits {
        EnumerationLimits {
            max_work: self.max_work.unwrap_or(DEFAULT_MAX_WORK),
        }
    }
}

pub struct Outcome {
    pub report: Report,
    pub exit: u8,
}

impl Outcome {
    pub fn ok(report: Report) -> Self {
        Outcome { report, exit: OK }
    }

    pub fn negative(report: Report) -> Self {
        Outcome { report, exit: NEGATIVE }
    }

    pub fn decide(report: Report, positive: bool) -> Self {
        if positive {
            Self::ok(report)
        } else {
            Self::negative(report)
        }
    }
}

// ---- rendering helpers ----

pub fn path_ids(g: &FiniteGraph, path: &[Dart]) -> String {
    path.iter().map(|&d| g.dart_id(d)).collect::<Vec<_>>().join(" ")
}

pub fn element_id(g: &FiniteGraph, e: Element) -> String {
    match e {
        Element::Vertex(v) => format!("vertex {}", g.vertex_id(v)),
        Element::Dart(d) => format!("dart {}", g.dart_id(d)),
    }
}

pub fn vertex_arg(g: &FiniteGraph, id: Option<&str>) -> Result<Vertex, CliError> {
    match id {
        Some(id) => Ok(g.require_vertex(id)?),
        None if g.vertex_count() > 0 => Ok(Vertex(0)),
        None => Err(CliError::Input("graph has no vertices".into())),
    }
}

pub fn write_out(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Write {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn vertex_map_value(m: &GraphMorphism) -> Value {
    let (dom, cod) = (m.domain(), m.codomain());
    Value::Object(
        dom.vertices()
            .map(|v| (dom.vertex_id(v).to_owned(), json!(cod.vertex_id(m.vertex(v)))))
            .collect(),
    )
}

/// `Ok(covering)`, or the negative outcome with the star witness.
pub fn covering_or_negative(command: &str, m: &GraphMorphism) -> Result<Result<Covering, Outcome>, CliError> {
    match as_covering(m) {
        Ok(c) => Ok(Ok(c)),
        Err(CoveringError::NotLocallyBijective { vertex, defect }) => {
            let (dom, cod) = (m.domain(), m.codomain());
            let witness = match defect {
                StarDefect::NotInjective { first, second } => json!({
                    "vertex": dom.vertex_id(vertex),
                    "defect": "not injective",
                    "darts": path_ids(dom, &[first, second]),
                    "image": cod.dart_id(m.dart(first)),
                }),
                StarDefect::NotSurjective { missing } => json!({
                    "vertex": dom.vertex_id(vertex),
                    "defect": "not surjective",
                    "missing": cod.dart_id(missing),
                }),
            };
            Ok(Err(Outcome::negative(Report::new(command, "not a covering").with("witness", witness))))
        }
        Err(e) => Err(e.into()),
    }
}

macro_rules! covering {
    ($cmd:expr, $m:expr) => {
        match covering_or_negative($cmd, $m)? {
            Ok(c) => c,
            Err(outcome) => return Ok(outcome),
        }
    };
}

// ---- dispatch ----

pub fn dispatch(command: &Command, ctx: &Context) -> Result<Outcome, CliError> {
    let mut loader = Loader::new();
    match command {
        Command::Validate { graph } => validate(&loader, graph),
        Command::Quotient { congruence, graph, out } => {
            let g = graph.as_ref().map(|p| loader.graph(p)).transpose()?;
            let r = loader.congruence(congruence, g)?;
            let (q, p) = r.quotient();
            if let Some(out) = out {
                write_out(out, &to_json(&graph_to_file(&q)))?;
            }
            let report = Report::new("quotient", "quotient")
                .with("vertices", q.vertex_count())
                .with("edges", q.edge_count())
                .with("vertex_map", vertex_map_value(&p))
                .with("graph", graph_to_file(&q));
            Ok(Outcome::ok(report))
        }
        Command::CheckCover { morphism } => {
            let m = loader.morphism(morphism, None, None)?;
            let c = covering!("check-cover", &m);
            let mut report = Report::new("check-cover", "covering")
                .with("degree", c.degree())
                .with("component_degrees", c.component_degrees())
                .with("surjective", c.is_surjective());
            if c.domain().is_connected() && c.codomain().is_connected() {
                report.set("euler_relation", euler_relation_holds(&c));
            }
            Ok(Outcome::ok(report))
        }
        Command::Pi1 { graph, base } => {
            let g = loader.graph(graph)?;
            let b = vertex_arg(&g, base.as_deref())?;
            let p = pi1_data(&g, b)?;
            let tree: Vec<&str> = p.tree().tree_darts().iter().map(|&d| g.edge_id(d.edge())).collect();
            let basis: Vec<Value> = (0..p.rank())
                .map(|k| {
                    json!({
                        "generator": FreeWord::generator(k).to_string(),
                        "dart": g.dart_id(p.basis_darts()[k]),
                        "loop": path_ids(&g, &p.basis_loop(k)),
                    })
                })
                .collect();
            let report = Report::new("pi1", "free")
                .with("base", g.vertex_id(b))
                .with("rank", p.rank())
                .with("tree_edges", tree)
                .with("basis", basis);
            Ok(Outcome::ok(report))
        }
        Command::CoverFromRep { graph, rep, base, out } => cover_from_rep(&mut loader, graph, rep, base.as_deref(), out.as_deref()),
        Command::ImageSubgroup { morphism, base } => {
            let m = loader.morphism(morphism, None, None)?;
            let c = covering!("image-subgroup", &m);
            let a = vertex_arg(m.domain(), base.as_deref())?;
            let p = pi1_data(m.codomain(), m.vertex(a))?;
            let rep = image_subgroup(&c, a, &p)?;
            let gens: Vec<String> = rep.schreier_generators().iter().map(ToString::to_string).collect();
            let report = Report::new("image-subgroup", "subgroup")
                .with("base", m.domain().vertex_id(a))
                .with("index", rep.index())
                .with("normal", is_normal(&rep))
                .with("schreier_rank", gens.len())
                .with("schreier_generators", gens)
                .with("rep", rep_to_file(&rep));
            Ok(Outcome::ok(report))
        }
        Command::Lift { map, covering, from, to } => {
            let fm = loader.morphism(covering, None, None)?;
            let c = covering!("lift", &fm);
            let g = loader.morphism(map, None, Some(fm.codomain().clone()))?;
            let base_c = vertex_arg(g.domain(), from.as_deref())?;
            let base_a = match to {
                Some(id) => fm.domain().require_vertex(id)?,
                None => *c
                    .vertex_fiber(g.vertex(base_c))
                    .first()
                    .ok_or_else(|| CliError::Input("the covering has an empty fiber over g(from)".into()))?,
            };
            let (sigma, gamma) = (g.domain(), fm.domain());
            let report = Report::new("lift", "lifted")
                .with("from", sigma.vertex_id(base_c))
                .with("to", gamma.vertex_id(base_a));
            match lift(&g, &c, base_c, base_a)? {
                Lift::Map(h) => Ok(Outcome::ok(report.with("vertex_map", vertex_map_value(&h)))),
                Lift::Obstructed(o) => {
                    let mut report = report.with(
                        "witness",
                        json!({
                            "loop": path_ids(sigma, &o.loop_path),
                            "image": path_ids(g.codomain(), &g.map_path(&o.loop_path)),
                            "lifted_end": gamma.vertex_id(o.lifted_end),
                        }),
                    );
                    report.verdict = "obstructed".into();
                    Ok(Outcome::negative(report))
                }
            }
        }
        Command::Deck { morphism } => {
            let m = loader.morphism(morphism, None, None)?;
            let c = covering!("deck", &m);
            let deck = deck_group(&c)?;
            let dom = m.domain();
            let images: Vec<&str> = deck.elements().iter().map(|e| dom.vertex_id(e.vertex(deck.anchor()))).collect();
            let report = Report::new("deck", "deck group")
                .with("order", deck.order())
                .with("degree", c.degree())
                .with("anchor", dom.vertex_id(deck.anchor()))
                .with("anchor_images", images)
                .with("free", deck.freeness_violation().is_none())
                .with("table", deck.table());
            Ok(Outcome::ok(report))
        }
        Command::Regular { morphism } => regular(&mut loader, morphism),
        Command::OrbitQuotient { action, out } => {
            let action = loader.action(action)?;
            let g = action.graph().clone();
            match quotient_by_group(&action) {
                Ok(q) => {
                    if let Some(out) = out {
                        write_out(out, &to_json(&morphism_to_file(q.covering.map())))?;
                    }
                    let report = Report::new("orbit-quotient", "regular covering")
                        .with("order", action.order())
                        .with("degree", q.covering.degree())
                        .with("deck_order", q.deck.order())
                        .with("quotient_vertices", q.graph.vertex_count())
                        .with("quotient_edges", q.graph.edge_count())
                        .with("isomorphism", &q.isomorphism)
                        .with("graph", graph_to_file(&q.graph));
                    Ok(Outcome::ok(report))
                }
                Err(CoveringError::NotFree { element, fixed }) => Ok(Outcome::negative(
                    Report::new("orbit-quotient", "not free")
                        .with("witness", json!({"element": element, "fixed": element_id(&g, fixed)})),
                )),
                Err(CoveringError::EdgeInversion { element, dart }) => Ok(Outcome::negative(
                    Report::new("orbit-quotient", "inverts an edge")
                        .with("witness", json!({"element": element, "dart": g.dart_id(dart)})),
                )),
                Err(e) => Err(e.into()),
            }
        }
        Command::DeckQuotient { morphism, generators, out } => {
            let m = loader.morphism(morphism, None, None)?;
            let c = covering!("deck-quotient", &m);
            let deck = deck_group(&c)?;
            if let Some(&bad) = generators.iter().find(|&&g| g >= deck.order()) {
                return Err(CliError::Input(format!(
                    "deck element {bad} does not exist; the deck group has order {}",
                    deck.order()
                )));
            }
            let h = deck.generated_subgroup(generators);
            let ic = quotient_by_deck_subgroup(&deck, &h)?;
            if let Some(out) = out {
                write_out(out, &to_json(&morphism_to_file(ic.lower.map())))?;
            }
            let report = Report::new("deck-quotient", "factorization")
                .with("subgroup", &h)
                .with("normal", deck.is_normal_subgroup(&h))
                .with("intermediate_vertices", ic.graph.vertex_count())
                .with("upper_degree", ic.upper.degree())
                .with("lower_degree", ic.lower.degree())
                .with("lower_regular", is_regular(&ic.lower)?.0.is_regular());
            Ok(Outcome::ok(report))
        }
        Command::GoodPair { morphism, r, s } => {
            let m = loader.morphism(morphism, None, None)?;
            let r = loader.congruence(r, Some(m.domain().clone()))?;
            let s = loader.congruence(s, Some(m.codomain().clone()))?;
            let (verdict, induced) = classify_pair(&m, &r, &s)?;
            let mut report = Report::new("good-pair", verdict.as_str());
            match induced {
                Err(w) => report.set(
                    "witness",
                    json!({
                        "first": element_id(m.domain(), w.first),
                        "second": element_id(m.domain(), w.second),
                    }),
                ),
                Ok(q) => {
                    report.set("domain_vertices", q.domain().vertex_count());
                    report.set("codomain_vertices", q.codomain().vertex_count());
                    if verdict == PairVerdict::Half {
                        if let Err(Outcome { report: inner, .. }) = covering_or_negative("good-pair", &q)? {
                            report.set("witness", &inner.details["witness"]);
                        }
                    }
                }
            }
            Ok(Outcome::decide(report, verdict >= PairVerdict::Good))
        }
        Command::LowIndex {
            rank,
            max_degree,
            normal,
            list,
        } => {
            let reps = low_index_reps(*rank, *max_degree, *normal, ctx.limits())?;
            let mut by_index = vec![0usize; *max_degree];
            for r in &reps {
                by_index[r.degree() - 1] += 1;
            }
            let mut report = Report::new("low-index", "enumerated")
                .with("rank", rank)
                .with("max_degree", max_degree)
                .with("normal", normal)
                .with("count", reps.len())
                .with("by_index", by_index);
            if *list {
                report.set("reps", reps.iter().map(|r| r.perms().to_vec()).collect::<Vec<_>>());
            }
            Ok(Outcome::ok(report))
        }
        Command::CheckLifting { cases } => check_lifting(ctx.seed, *cases),
        Command::Tower { command } => towers::dispatch(command, &mut loader, ctx),
    }
}

fn validate(loader: &Loader, path: &Path) -> Result<Outcome, CliError> {
    let parts = loader.graph_parts(path)?;
    let v = validate_graph(&parts);
    if !v.is_valid() {
        let violations: Vec<String> = v.violations.iter().map(ToString::to_string).collect();
        return Ok(Outcome::negative(
            Report::new("validate", "invalid").with("violations", violations),
        ));
    }
    let g = FiniteGraph::from_parts(&parts)?;
    let report = Report::new("validate", "valid")
        .with("vertices", g.vertex_count())
        .with("edges", g.edge_count())
        .with("components", g.components().len())
        .with("cycle_rank", g.cycle_rank());
    Ok(Outcome::ok(report))
}

fn cover_from_rep(
    loader: &mut Loader,
    graph: &Path,
    rep: &Path,
    base: Option<&str>,
    out: Option<&Path>,
) -> Result<Outcome, CliError> {
    let g = loader.graph(graph)?;
    let b = vertex_arg(&g, base)?;
    let file = loader.rep_file(rep)?;
    let bijective = file.perms.iter().all(|p| {
        let mut seen = vec![false; file.degree];
        p.len() == file.degree && p.iter().all(|&x| x < file.degree && !std::mem::replace(&mut seen[x], true))
    });
    if bijective && file.perms.len() == file.rank && file.degree > 0 {
        let orbit_list = orbits(file.degree, &file.perms);
        if orbit_list.len() > 1 {
            let report = Report::new("cover-from-rep", "not transitive")
                .with("orbits", orbit_list)
                .with("note", "each orbit defines one connected cover; split the rep to build them");
            return Ok(Outcome::negative(report));
        }
    }
    let h: PermRep = rep_from_file(&file, &rep.display().to_string())?;
    let cover = cover_from_subgroup(&g, b, &h)?;
    if let Some(out) = out {
        write_out(out, &to_json(&morphism_to_file(cover.covering.map())))?;
    }
    let report = Report::new("cover-from-rep", "covering")
        .with("degree", cover.covering.degree())
        .with("vertices", cover.graph.vertex_count())
        .with("edges", cover.graph.edge_count())
        .with("basepoint", cover.graph.vertex_id(cover.basepoint))
        .with("cycle_rank", cover.graph.cycle_rank())
        .with("euler_relation", euler_relation_holds(&cover.covering));
    Ok(Outcome::ok(report))
}

fn regular(loader: &mut Loader, path: &Path) -> Result<Outcome, CliError> {
    let m = loader.morphism(path, None, None)?;
    let c = covering!("regular", &m);
    let (ev, deck) = is_regular(&c)?;
    let mut report = Report::new("regular", if ev.is_regular() { "regular" } else { "not regular" })
        .with("degree", ev.degree)
        .with("deck_order", ev.deck_order)
        .with("image_normal", ev.image_normal)
        .with("transitive_on_fibers", ev.transitive_on_fibers);
    if ev.is_regular() {
        return Ok(Outcome::ok(report));
    }
    let dom = m.domain();
    let anchor = deck.anchor();
    let unreached = c
        .vertex_fiber(m.vertex(anchor))
        .iter()
        .copied()
        .find(|&v| deck.by_anchor_image(v).is_none())
        .expect("a non-regular covering has an unreached fiber point");
    let p = pi1_data(m.codomain(), m.vertex(anchor))?;
    let rep = image_subgroup(&c, anchor, &p)?;
    let conjugate = non_normal_witness(&rep)?;
    report.set(
        "witness",
        json!({
            "anchor": dom.vertex_id(anchor),
            "unreached": dom.vertex_id(unreached),
            "subgroup_element": conjugate.0.to_string(),
            "conjugator": conjugate.1.to_string(),
        }),
    );
    Ok(Outcome::negative(report))
}

/// `(w, x)` with `w ∈ H` and `x w x⁻¹ ∉ H`, for a generator letter `x`.
fn non_normal_witness(rep: &PermRep) -> Result<(FreeWord, FreeWord), CliError> {
    for w in rep.schreier_generators() {
        for slot in 0..2 * rep.rank() {
            let x = FreeWord::letter(Letter::from_slot(slot));
            let conj = FreeWord::reduce(x.letters().iter().chain(w.letters()).chain(x.inverse().letters()).copied());
            if !rep.contains(&conj)? {
                return Ok((w, x));
            }
        }
    }
    Err(CliError::Input("image subgroup is normal although the deck group is small".into()))
}

fn check_lifting(seed: u64, cases: usize) -> Result<Outcome, CliError> {
    let suite = sample::lifting_suite(seed, cases)?;
    let mut lifted = 0;
    let mut disagreements = Vec::new();
    for (i, case) in suite.iter().enumerate() {
        let o = sample::check_lifting(case)?;
        lifted += usize::from(o.lifted);
        if o.lifted != o.contained || o.contained != o.contained_by_generators || !o.lift_commutes {
            disagreements.push(i);
        }
    }
    let report = Report::new("check-lifting", if disagreements.is_empty() { "agree" } else { "disagree" })
        .with("seed", seed)
        .with("cases", cases)
        .with("lifted", lifted)
        .with("obstructed", cases - lifted)
        .with("disagreements", &disagreements);
    Ok(Outcome::decide(report, disagreements.is_empty()))
}
