use crate::{CliError, Command, Common, Format, SetArgs, EXIT_BOUND, EXIT_INTERNAL, EXIT_OK};
use endspace_core::endspace::{necklace_search, rank_search, verify_necklace, EndSpace};
use endspace_core::graph::EdgeKind;
use endspace_core::quotient::{export_dot, level_in_window, level_json, verify_system, QuotientChain, QuotientError, DEFAULT_EDGE_BOUND};
use endspace_core::sources::{open_source, Cardinality, Certainty, Source, VertexSet};
use endspace_core::tours::{check_euler, lift_euler, span_walk, walk_items, Thread, ThreadJson, TourError};
use serde_json::{json, Value};
use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::Write;

type Outcome = Result<i32, CliError>;

fn open(common: &Common) -> Result<(Box<dyn Source>, usize), CliError> {
    let s = open_source(&common.source)?;
    let depth = s.order().map_or(common.depth, |o| common.depth.min(o));
    Ok((s, depth))
}

fn emit(out: &mut dyn Write, format: Format, value: &Value, text: &str) -> Result<(), CliError> {
    let body = match format {
        Format::Json => serde_json::to_string(value).map_err(|e| CliError::internal(e.to_string()))? + "\n",
        Format::Text => text.to_string(),
    };
    out.write_all(body.as_bytes())
        .map_err(|e| CliError::internal(format!("cannot write output: {e}")))
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("result types serialize")
}

fn card(c: Cardinality) -> String {
    match c {
        Cardinality::Finite(k) => k.to_string(),
        Cardinality::Infinite => "infinite".into(),
    }
}

pub(crate) fn dispatch(cmd: &Command, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Info(c) => info(c, out),
        Command::Quotients { common, dot } => quotients(common, dot.as_deref(), out, err),
        Command::Ends(c) => ends(c, out),
        Command::LimitEdges(c) => limit_edges(c, out),
        Command::BasicOpen { common, end, level } => basic_open(common, *end, *level, out),
        Command::Necklace { common, beads, sets } => necklace(common, *beads, sets, out),
        Command::Rank {
            common,
            r_max,
            sep_bound,
            sets,
        } => rank(common, *r_max, *sep_bound, sets, out),
        Command::CheckEuler(c) => euler_check(c, out, err),
        Command::EulerTour {
            common,
            tour_limit,
            anchor,
        } => euler_tour(common, *tour_limit, *anchor, out, err),
        Command::SpanWalk(c) => spanning(c, out),
        Command::Verify(c) => verify(c, out),
    }
}

fn info(common: &Common, out: &mut dyn Write) -> Outcome {
    let (s, depth) = open(common)?;
    let window = s.window_for(depth);
    let mut certainty = Certainty::Exact;
    let mut text = format!("source: {}\n", s.name());
    let order = s.order();
    match order {
        Some(o) => writeln!(text, "order: {o}").unwrap(),
        None => writeln!(text, "order: infinite").unwrap(),
    }
    let mut vertices = Vec::new();
    for v in 0..depth {
        let d = s.degree(v);
        certainty = certainty.and(d.certainty);
        writeln!(
            text,
            "  {}: in {} out {}",
            s.label(v),
            card(d.value.in_degree),
            card(d.value.out_degree)
        )
        .unwrap();
        vertices.push(json!({
            "label": s.label(v),
            "in_degree": to_value(&d.value.in_degree),
            "out_degree": to_value(&d.value.out_degree),
        }));
    }
    let mut levels = Vec::new();
    for n in 0..=depth {
        match level_in_window(s.as_ref(), n, window, DEFAULT_EDGE_BOUND) {
            Ok(l) => {
                certainty = certainty.and(l.certainty);
                writeln!(text, "level {n}: {} classes, {} edges", l.class_count(), l.graph.edge_count()).unwrap();
                levels.push(json!({
                    "n": n,
                    "solid": true,
                    "classes": l.class_count(),
                    "edges": l.graph.edge_count(),
                }));
            }
            Err(QuotientError::NonSolidAtLevel { report, .. }) => {
                certainty = certainty.and(report.certainty);
                writeln!(text, "level {n}: not solid").unwrap();
                levels.push(json!({ "n": n, "solid": false }));
            }
            Err(e) => return Err(e.into()),
        }
    }
    let parts = s.parts();
    if !parts.is_empty() {
        writeln!(text, "parts: {}", parts.join(", ")).unwrap();
    }
    writeln!(text, "certainty: {certainty}").unwrap();
    let value = json!({
        "source": s.name(),
        "order": order,
        "depth": depth,
        "window": window,
        "parts": parts,
        "vertices": vertices,
        "levels": levels,
        "certainty": certainty,
    });
    emit(out, common.format, &value, &text)?;
    Ok(EXIT_OK)
}

fn quotients(common: &Common, dot: Option<&std::path::Path>, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let (s, depth) = open(common)?;
    let chain = QuotientChain::build(s.as_ref(), depth)?;
    if let Some(dir) = dot {
        std::fs::create_dir_all(dir).map_err(|e| CliError::invalid(format!("cannot create {}: {e}", dir.display())))?;
        for l in &chain.levels {
            let path = dir.join(format!("level{}.dot", l.n));
            std::fs::write(&path, export_dot(l))
                .map_err(|e| CliError::invalid(format!("cannot write {}: {e}", path.display())))?;
        }
        let _ = writeln!(err, "wrote {} DOT files to {}", chain.levels.len(), dir.display());
    }
    let mut text = String::new();
    for l in &chain.levels {
        let quotient = l.graph.edges().iter().filter(|e| e.kind == EdgeKind::Quotient).count();
        writeln!(
            text,
            "level {}: {} classes, {} edges ({} quotient)",
            l.n,
            l.class_count(),
            l.graph.edge_count(),
            quotient
        )
        .unwrap();
        for c in &l.classes {
            let mark = if c.is_infinite() { " (infinite)" } else { "" };
            writeln!(text, "  {}{}", c.id, mark).unwrap();
        }
    }
    writeln!(text, "certainty: {}", chain.certainty()).unwrap();
    let levels: Vec<Value> = chain.levels.iter().map(|l| level_json(l, s.as_ref())).collect();
    let value = json!({
        "window": chain.window,
        "levels": levels,
        "certainty": chain.certainty(),
    });
    emit(out, common.format, &value, &text)?;
    Ok(EXIT_OK)
}

fn ends(common: &Common, out: &mut dyn Write) -> Outcome {
    let (s, depth) = open(common)?;
    let space = EndSpace::compute(s.as_ref(), depth)?;
    let value = json!({
        "ends": space.ends.len(),
        "limit_edges": space.limit_edges.len(),
        "ends_per_level": space.ends_per_level,
        "end_threads": to_value(&space.ends),
        "limit_edge_threads": to_value(&space.limit_edges),
        "certainty": space.certainty,
    });
    let per_level: Vec<String> = space.ends_per_level.iter().map(|k| k.to_string()).collect();
    let text = format!(
        "ends: {}\nlimit edges: {}\ninfinite components per level: {}\ncertainty: {}\n",
        space.ends.len(),
        space.limit_edges.len(),
        per_level.join(" "),
        space.certainty
    );
    emit(out, common.format, &value, &text)?;
    Ok(EXIT_OK)
}

fn limit_edges(common: &Common, out: &mut dyn Write) -> Outcome {
    let (s, depth) = open(common)?;
    let space = EndSpace::compute(s.as_ref(), depth)?;
    let value = json!({
        "limit_edges": space.limit_edges.len(),
        "threads": to_value(&space.limit_edges),
        "certainty": space.certainty,
    });
    let mut text = format!("limit edges: {}\n", space.limit_edges.len());
    for (i, t) in space.limit_edges.iter().enumerate() {
        writeln!(text, "  {i}: {}", serde_json::to_string(&t.ends).expect("serializes")).unwrap();
    }
    writeln!(text, "certainty: {}", space.certainty).unwrap();
    emit(out, common.format, &value, &text)?;
    Ok(EXIT_OK)
}

fn basic_open(common: &Common, end: usize, level: Option<usize>, out: &mut dyn Write) -> Outcome {
    let (s, depth) = open(common)?;
    let space = EndSpace::compute(s.as_ref(), depth)?;
    let b = space.basic_open(end, level.unwrap_or(depth))?;
    let members: Vec<String> = b.members.iter().map(|&v| s.label(v)).collect();
    let text = format!(
        "level {} class {} (size {})\nmembers in window: {}\nends: {:?}\nlimit edges: {:?}\nboundary edges: {}\ncertainty: {}\n",
        b.level,
        b.class,
        card(b.size),
        members.join(" "),
        b.ends,
        b.limit_edges,
        b.boundary.len(),
        b.certainty
    );
    emit(out, common.format, &to_value(&b), &text)?;
    Ok(EXIT_OK)
}

fn parse_sets(s: &dyn Source, args: &SetArgs) -> Result<Vec<VertexSet>, CliError> {
    if args.sets.is_empty() {
        return Ok(vec![VertexSet::All]);
    }
    args.sets
        .iter()
        .map(|spec| {
            if spec == "all" {
                return Ok(VertexSet::All);
            }
            if let Some(name) = spec.strip_prefix("part:") {
                if !s.parts().iter().any(|p| p == name) {
                    return Err(CliError::invalid(format!("source has no part `{name}`")));
                }
                return Ok(VertexSet::Part(name.to_string()));
            }
            let set = spec
                .split(',')
                .map(|l| {
                    s.index_of(l.trim())
                        .ok_or_else(|| CliError::invalid(format!("unknown vertex `{l}`")))
                })
                .collect::<Result<BTreeSet<usize>, _>>()?;
            Ok(VertexSet::Finite(set))
        })
        .collect()
}

fn necklace(common: &Common, beads: usize, sets: &SetArgs, out: &mut dyn Write) -> Outcome {
    let (s, depth) = open(common)?;
    let sets = parse_sets(s.as_ref(), sets)?;
    let Some(p) = necklace_search(s.as_ref(), &sets, beads, depth) else {
        let value = json!({ "found": false, "beads": beads, "certainty": Certainty::Provisional });
        let text = format!("no necklace with {beads} beads below depth {depth}\ncertainty: provisional\n");
        emit(out, common.format, &value, &text)?;
        return Ok(EXIT_OK);
    };
    let check = verify_necklace(s.as_ref(), &p, depth)?;
    let mut text = format!("necklace with {} beads\n", p.beads.len());
    for (i, b) in p.beads.iter().enumerate() {
        let labels: Vec<String> = b.iter().map(|&v| s.label(v)).collect();
        writeln!(text, "  bead {i}: {}", labels.join(" ")).unwrap();
    }
    writeln!(text, "verified: {}\ncertainty: {}", check.ok, p.certainty).unwrap();
    let value = json!({
        "found": true,
        "necklace": to_value(&p),
        "check": to_value(&check),
        "certainty": p.certainty,
    });
    emit(out, common.format, &value, &text)?;
    Ok(if check.ok { EXIT_OK } else { EXIT_INTERNAL })
}

fn rank(common: &Common, r_max: usize, sep_bound: usize, sets: &SetArgs, out: &mut dyn Write) -> Outcome {
    let (s, depth) = open(common)?;
    let sets = parse_sets(s.as_ref(), sets)?;
    let r = rank_search(s.as_ref(), &sets, r_max, sep_bound, depth)?;
    let head = match r.rank() {
        Some(k) => format!("rank {k}"),
        None => format!("no rank up to {r_max}"),
    };
    let text = format!("{head}\ncertainty: {}\n", r.certainty);
    emit(out, common.format, &to_value(&r), &text)?;
    Ok(EXIT_OK)
}

fn euler_check(common: &Common, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let (s, depth) = open(common)?;
    let c = check_euler(s.as_ref(), depth)?;
    if !c.non_solid_levels.is_empty() {
        let levels: Vec<String> = c.non_solid_levels.iter().map(|n| n.to_string()).collect();
        let _ = writeln!(err, "note: levels {} are not solid", levels.join(", "));
    }
    let text = match &c.witness {
        None => format!("verdict: ok\ncertainty: {}\n", c.certainty),
        Some(w) => format!("verdict: witness\nwitness: {w}\ncertainty: {}\n", c.certainty),
    };
    emit(out, common.format, &to_value(&c), &text)?;
    Ok(EXIT_OK)
}

fn thread_text(t: &Thread, chain: &QuotientChain) -> String {
    let mut text = String::new();
    for (i, w) in t.walks.iter().enumerate() {
        let n = t.first_level + i;
        writeln!(text, "level {n}: {}", walk_items(&chain.levels[n], w).join(" ")).unwrap();
    }
    let ok = t.certificates.iter().all(|c| *c);
    writeln!(text, "complete: {}\nprojections: {}\ncertainty: {}", t.complete, ok, t.certainty).unwrap();
    text
}

fn euler_tour(common: &Common, tour_limit: usize, anchor: usize, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let (s, depth) = open(common)?;
    let t = match lift_euler(s.as_ref(), depth, anchor, tour_limit) {
        Ok(t) => t,
        Err(TourError::EulerConditionFailed { witness }) => {
            let value = json!({ "verdict": "witness", "witness": to_value(&witness), "certainty": Certainty::Exact });
            emit(out, common.format, &value, &format!("verdict: witness\nwitness: {witness}\n"))?;
            return Ok(EXIT_OK);
        }
        Err(e) => return Err(e.into()),
    };
    let chain = QuotientChain::build(s.as_ref(), depth)?;
    let value = to_value(&ThreadJson { thread: &t, chain: &chain });
    emit(out, common.format, &value, &thread_text(&t, &chain))?;
    if !t.complete {
        let _ = writeln!(err, "tour budget exhausted at level {}", t.walks.len());
        return Ok(EXIT_BOUND);
    }
    Ok(EXIT_OK)
}

fn spanning(common: &Common, out: &mut dyn Write) -> Outcome {
    let (s, depth) = open(common)?;
    let t = match span_walk(s.as_ref(), depth) {
        Ok(t) => t,
        Err(TourError::NotStronglyConnected { level, from, to }) => {
            let value = json!({
                "verdict": "not_strongly_connected",
                "level": level,
                "from": from,
                "to": to,
                "certainty": Certainty::Exact,
            });
            let text = format!("verdict: not strongly connected\nlevel {level}: no path from {from} to {to}\n");
            emit(out, common.format, &value, &text)?;
            return Ok(EXIT_OK);
        }
        Err(e) => return Err(e.into()),
    };
    let chain = QuotientChain::build(s.as_ref(), depth)?;
    let value = to_value(&ThreadJson { thread: &t, chain: &chain });
    emit(out, common.format, &value, &thread_text(&t, &chain))?;
    Ok(EXIT_OK)
}

fn verify(common: &Common, out: &mut dyn Write) -> Outcome {
    let (s, depth) = open(common)?;
    let r = verify_system(s.as_ref(), depth)?;
    let text = match &r.violation {
        None => format!("{} levels, {} maps: all laws hold\ncertainty: {}\n", r.levels, r.maps_checked, r.certainty),
        Some(v) => format!("violation: {}\ncertainty: {}\n", serde_json::to_string(v).expect("serializes"), r.certainty),
    };
    emit(out, common.format, &to_value(&r), &text)?;
    Ok(if r.passed() { EXIT_OK } else { EXIT_INTERNAL })
}
