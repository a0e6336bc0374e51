use serde_json::json;

use procover::formats::{to_json, tower_to_file, Loader};
use procover::graph::Element;
use procover::tower::{
    deck_tower, kernel_good_pairs, limit_fiber_report, pi1_triviality_check, universal_tower, validate_tower, PairVerdict,
    Side, Tower, TowerError, TowerIssue, TowerWarning,
};

use crate::commands::{element_id, vertex_arg, write_out, CliError, Context, Outcome};
use crate::report::Report;
use crate::TowerCommand;

const TRUNCATION_NOTE: &str = "a finite tower certifies m-triviality up to its top level only; \
                               it cannot certify triviality of the profinite fundamental group of the limit";

fn issue_text(t: &Tower, issue: &TowerIssue) -> String {
    match issue {
        TowerIssue::NotLocallyBijective { level, vertex, defect } => format!(
            "level {level}: f is not locally bijective at {} ({defect:?})",
            t.gamma(*level).vertex_id(*vertex)
        ),
        TowerIssue::SquareFails { step, witness } => format!(
            "square {step}: f_{step} after phi_{step} differs from psi_{step} after f_{} at {}",
            step + 1,
            element_id(t.gamma(step + 1), *witness)
        ),
        TowerIssue::ThreadBroken { step } => format!("base point thread breaks at step {step}"),
    }
}

fn warning_text(t: &Tower, w: &TowerWarning) -> String {
    match w {
        TowerWarning::BondingNotSurjective { step, side, missed } => {
            let (name, g) = match side {
                Side::Gamma => ("phi", t.gamma(*step)),
                Side::Delta => ("psi", t.delta(*step)),
            };
            format!("{name}_{step} is not surjective; it misses {}", element_id(g, *missed))
        }
    }
}

fn element_pair(t: &Tower, level: usize, a: Element, b: Element) -> serde_json::Value {
    let g = t.gamma(level);
    json!({"first": element_id(g, a), "second": element_id(g, b)})
}

pub fn dispatch(command: &TowerCommand, loader: &mut Loader, ctx: &Context) -> Result<Outcome, CliError> {
    match command {
        TowerCommand::Validate { tower } => {
            let t = loader.tower(tower)?;
            let v = validate_tower(&t);
            let mut report = Report::new("tower validate", if v.is_valid() { "valid" } else { "invalid" })
                .with("levels", t.level_count())
                .with("issues", v.issues.iter().map(|i| issue_text(&t, i)).collect::<Vec<_>>());
            for w in &v.warnings {
                report.warn(warning_text(&t, w));
            }
            Ok(Outcome::decide(report, v.is_valid()))
        }
        TowerCommand::GoodPairs { tower, level } => {
            let t = loader.tower(tower)?;
            let top = level.unwrap_or(t.top());
            let records = kernel_good_pairs(&t, top)?;
            let weakest = records.iter().map(|r| r.verdict).min().unwrap_or(PairVerdict::RegularGood);
            let pairs: Vec<_> = records
                .iter()
                .map(|r| {
                    let mut entry = json!({
                        "lower": r.lower,
                        "upper": r.upper,
                        "verdict": r.verdict.as_str(),
                        "r_vertex_classes": r.r.vertex_class_count(),
                        "s_vertex_classes": r.s.vertex_class_count(),
                    });
                    if let Some(w) = r.witness {
                        entry["witness"] = element_pair(&t, top, w.first, w.second);
                    }
                    entry
                })
                .collect();
            let report = Report::new("tower good-pairs", weakest.as_str())
                .with("level", top)
                .with("pairs", pairs);
            Ok(Outcome::decide(report, weakest >= PairVerdict::Good))
        }
        TowerCommand::Deck { tower } => {
            let t = loader.tower(tower)?;
            match deck_tower(&t) {
                Ok(d) => {
                    let compatible = d.homomorphic.iter().all(|&h| h);
                    let report = Report::new("tower deck", if compatible { "compatible" } else { "not compatible" })
                        .with("orders", d.orders())
                        .with("projections", &d.projections)
                        .with("homomorphic", &d.homomorphic)
                        .with("surjective", &d.surjective);
                    Ok(Outcome::decide(report, compatible))
                }
                Err(TowerError::NotDeckCompatible { level, element }) => Ok(Outcome::negative(
                    Report::new("tower deck", "not compatible").with("witness", json!({"level": level, "element": element})),
                )),
                Err(e) => Err(e.into()),
            }
        }
        TowerCommand::Universal { spec, out } => {
            let spec = loader.universal(spec)?;
            let negative = |verdict: &str, witness: serde_json::Value| {
                Ok(Outcome::negative(Report::new("tower universal", verdict).with("witness", witness)))
            };
            let u = match universal_tower(&spec) {
                Ok(u) => u,
                Err(TowerError::Compatibility { lower, upper, generator }) => {
                    return negative(
                        "incompatible",
                        json!({"lower": lower, "upper": upper, "generator": generator.to_string()}),
                    )
                }
                Err(TowerError::NotNormal { level }) => return negative("not normal", json!({"level": level})),
                Err(TowerError::QuotientChain { step }) => return negative("not a chain", json!({"step": step})),
                Err(e) => return Err(e.into()),
            };
            let t = &u.tower;
            if let Some(out) = out {
                write_out(out, &to_json(&tower_to_file(t)))?;
            }
            let v = validate_tower(t);
            let levels: Vec<_> = (0..t.level_count())
                .map(|i| {
                    json!({
                        "gamma_vertices": t.gamma(i).vertex_count(),
                        "delta_vertices": t.delta(i).vertex_count(),
                        "degree": u.levels[i].covering.degree(),
                    })
                })
                .collect();
            let deck = deck_tower(t)?;
            let mut report = Report::new("tower universal", "universal tower")
                .with("levels", levels)
                .with("deck_orders", deck.orders())
                .with("valid", v.is_valid());
            for w in &v.warnings {
                report.warn(warning_text(t, w));
            }
            Ok(Outcome::ok(report))
        }
        TowerCommand::Pi1Trivial {
            tower,
            bound,
            certify_through,
        } => {
            let t = loader.tower(tower)?;
            let r = pi1_triviality_check(&t, *bound, *certify_through, ctx.limits())?;
            let trivial = r.m_trivial();
            let verdict = if trivial { format!("{bound}-trivial") } else { format!("not {bound}-trivial") };
            let per_level: Vec<_> = (0..t.level_count())
                .map(|i| {
                    json!({
                        "level": i,
                        "subgroups": r.entries.iter().filter(|e| e.level == i).count(),
                        "satisfied": r.level_satisfied(i),
                    })
                })
                .collect();
            let unsatisfied: Vec<_> = r
                .unsatisfied()
                .map(|e| json!({"level": e.level, "index": e.subgroup.degree(), "perms": e.subgroup.perms()}))
                .collect();
            let report = Report::new("tower pi1-trivial", &verdict)
                .with("bound", bound)
                .with("depth", t.top())
                .with("certified_through", r.certified_through)
                .with("levels", per_level)
                .with("unsatisfied", unsatisfied)
                .with("scope", TRUNCATION_NOTE);
            Ok(Outcome::decide(report, trivial))
        }
        TowerCommand::Fibers { tower, vertex } => {
            let t = loader.tower(tower)?;
            let v = vertex_arg(t.delta(0), vertex.as_deref())?;
            let r = limit_fiber_report(&t, v)?;
            let complete = r.dead_ends.is_empty() && r.thread_ends_at.is_none();
            let thread: Vec<&str> = r.thread.iter().enumerate().map(|(i, &d)| t.delta(i).vertex_id(d)).collect();
            let dead: Vec<_> = r
                .dead_ends
                .iter()
                .map(|d| json!({"level": d.level, "point": t.gamma(d.level).vertex_id(d.point)}))
                .collect();
            let mut report = Report::new("tower fibers", if complete { "onto" } else { "not onto" })
                .with("thread", thread)
                .with("fiber_sizes", &r.fiber_sizes)
                .with("onto", &r.onto);
            if let Some(step) = r.thread_ends_at {
                report.set("thread_ends_at", step);
            }
            if !dead.is_empty() {
                report.set("witness", json!({"dead_ends": dead}));
            }
            Ok(Outcome::decide(report, complete))
        }
    }
}
