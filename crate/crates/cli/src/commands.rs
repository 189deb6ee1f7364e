use std::fs;
use std::path::Path;

use hyperperc::chandelier::{build_chandelier, chandelier_sequence};
use hyperperc::contour::{finite_interior_clusters, ContourContext};
use hyperperc::critical::{
    auto_pairs, decay_fit, phi, subcritical_certificate, DecayPair, DecayVariant, PhiMethod, PhiRegion,
    BoundaryMode,
};
use hyperperc::io::{read_graph, GraphFile};
use hyperperc::matching::matching_graph;
use hyperperc::percolation::{
    core_ball, crossing_counts, sample, two_point_many, CrossingRow, Estimate, TwoPointEvent,
};
use hyperperc::tiling::build_ball_with_budget;
use hyperperc::tree::{grow_tree, Condition};
use hyperperc::walks::{turn_walk, WalkRule};
use hyperperc::{Error, HalfEdge, Result, RotationGraph, Side, TilingSpec, Vertex};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{AdjacencyArg, Command, Config, DecayArg, GraphArgs, MethodArg, SideArg, TwoPointArg};
use crate::svg::{self, Overlay};

pub fn run(config: &Config) -> Result<()> {
    let hash = config.hash();
    let g = &config.global;
    let out = g.out.as_deref();
    let seed = g.seed;
    let budget = g.budget;
    let result = match &config.command {
        Command::Generate { p, q, radius, allow_non_hyperbolic, star_edges } => {
            let spec = TilingSpec { face_degree: *p, vertex_degree: *q, radius: *radius, allow_non_hyperbolic: *allow_non_hyperbolic };
            let graph = build_ball_with_budget(&spec, budget)?;
            let mut file = serde_json::to_value(GraphFile::from_graph(&graph, Some(spec), *star_edges))?;
            file["config_hash"] = json!(hash);
            eprintln!("{} vertices, {} edges", graph.vertex_count(), graph.edge_count());
            return write_text(out, &serde_json::to_string(&file)?);
        }
        Command::Walk { graph, from, to, rule, steps } => {
            let (graph, _) = load(graph, budget)?;
            check_vertex(&graph, *from)?;
            let to = match to {
                Some(t) => *t,
                None => *graph
                    .rotation(*from)
                    .first()
                    .ok_or_else(|| Error::precondition(format!("vertex {from} is isolated")))?,
            };
            let rule: WalkRule = rule.parse()?;
            let walk = turn_walk(&graph, HalfEdge::new(*from, to), rule, *steps)?;
            json!({ "rule": rule.to_string(), "steps": walk.path.len() - 1, "truncated": walk.truncated, "path": walk.path })
        }
        Command::Tree { graph, root, slot, condition, depth, svg: svg_path } => {
            let (graph, _) = load(graph, budget)?;
            let condition: Condition = condition.parse()?;
            let tree = grow_tree(&graph, *root, *slot, condition, *depth)?;
            if let Some(path) = svg_path {
                let edges = tree.edges().collect();
                let drawing = svg::render(&graph, &[Overlay { color: "red", width: 0.006, edges }], &hash);
                write_text(Some(path), &drawing)?;
            }
            let census: Vec<Value> = tree
                .census()
                .iter()
                .map(|c| json!({ "zero": c[0], "half": c[1], "one": c[2], "total": c[0] + c[1] + c[2] }))
                .collect();
            let degrees = tree.tree_degrees();
            let mut histogram = [0usize; 5];
            for (i, d) in degrees.iter().enumerate() {
                if tree.is_expanded(i) {
                    histogram[(*d).min(4)] += 1;
                }
            }
            json!({
                "root": tree.root,
                "condition": format!("{:?}", tree.condition),
                "vertices": tree.len(),
                "truncated": tree.truncated,
                "levels": census,
                "expanded_degree_histogram": histogram,
            })
        }
        Command::Chandelier { graph, root, v1, side, from, to, depth, svg: svg_path } => {
            let (graph, _) = load(graph, budget)?;
            let side = match side {
                SideArg::Left => Side::Left,
                SideArg::Right => Side::Right,
            };
            match (root, from, to) {
                (Some(r), None, None) => {
                    let c = build_chandelier(&graph, *r, *v1, side, *depth)?;
                    if let Some(path) = svg_path {
                        let edges = c.edges().collect();
                        write_text(Some(path), &svg::render(&graph, &[Overlay { color: "red", width: 0.006, edges }], &hash))?;
                    }
                    json!({ "root": c.root, "v1": c.v1, "v2": c.v2, "side": format!("{:?}", c.side),
                            "vertices": c.len(), "l1": c.l1, "l2": c.l2 })
                }
                (None, Some(a), Some(b)) => {
                    let geodesic = graph
                        .shortest_path(*a, *b)
                        .ok_or_else(|| Error::precondition(format!("{a} and {b} are not connected")))?;
                    let seq = chandelier_sequence(&graph, &geodesic, *depth)?;
                    if let Some(path) = svg_path {
                        let pick = |c: &hyperperc::chandelier::Chandelier| c.edges().collect::<Vec<_>>();
                        let left = seq.pairs.iter().flat_map(|&(l, _)| pick(&seq.left[l])).collect();
                        let right = seq.pairs.iter().flat_map(|&(_, r)| pick(&seq.right[r])).collect();
                        let spine = geodesic.windows(2).map(|w| (w[0], w[1])).collect();
                        let overlays = [
                            Overlay { color: "black", width: 0.008, edges: spine },
                            Overlay { color: "red", width: 0.006, edges: left },
                            Overlay { color: "blue", width: 0.006, edges: right },
                        ];
                        write_text(Some(path), &svg::render(&graph, &overlays, &hash))?;
                    }
                    json!({
                        "geodesic": geodesic,
                        "left_roots": seq.left_roots(),
                        "right_roots": seq.right_roots(),
                        "pairs": seq.pairs,
                        "required_pairs": seq.required_pairs(),
                    })
                }
                _ => return Err(Error::precondition("give either --root, or both --from and --to")),
            }
        }
        Command::Matching { graph, list } => {
            let (graph, _) = load(graph, budget)?;
            let mg = matching_graph(&graph);
            let mut histogram = std::collections::BTreeMap::new();
            for v in graph.vertices().filter(|&v| !mg.is_partial(v)) {
                *histogram.entry(mg.degree(v)).or_insert(0usize) += 1;
            }
            let mut value = json!({
                "vertices": graph.vertex_count(),
                "edges": graph.edge_count(),
                "star_edges": mg.star_edge_count(),
                "interior_star_degree_histogram": histogram,
            });
            if *list {
                value["star_edge_list"] = json!(mg.star_edges().collect::<Vec<_>>());
            }
            value
        }
        Command::Percolate { graph, p, samples, core_radius, adjacency, report } => {
            let (graph, _) = load(graph, budget)?;
            let core = core_ball(&graph, *core_radius);
            let rows = match adjacency {
                AdjacencyArg::Graph => crossing_counts(&graph, *p, &core, *samples, seed)?,
                AdjacencyArg::Star => crossing_counts(&matching_graph(&graph), *p, &core, *samples, seed)?,
            };
            if let Some(path) = report {
                write_csv::<CrossingRow>(path, &hash, &rows)?;
            }
            summarize_crossings(&rows, *samples)
        }
        Command::TwoPoint { graph, p, u, v, samples, variant } => {
            let (graph, _) = load(graph, budget)?;
            check_vertex(&graph, *u)?;
            check_vertex(&graph, *v)?;
            let mg = matching_graph(&graph);
            let pairs = [(*u, *v)];
            let est = match variant {
                TwoPointArg::Points => two_point_many(&graph, *p, &pairs, TwoPointEvent::Points, &|_| Vec::new(), *samples, seed)?,
                TwoPointArg::Star => two_point_many(&mg, *p, &pairs, TwoPointEvent::Points, &|_| Vec::new(), *samples, seed)?,
                TwoPointArg::StarBoundaries => {
                    let nb = |x: Vertex| mg.neighbors(x).collect::<Vec<_>>();
                    two_point_many(&mg, *p, &pairs, TwoPointEvent::StarBoundaries, &nb, *samples, seed)?
                }
            };
            let d = mg.distances_from_set([*u])[*v as usize];
            json!({ "u": u, "v": v, "star_distance": d, "estimate": est[0] })
        }
        Command::Decay { graph, p, pairs, samples, variant, csv } => {
            let (graph, _) = load(graph, budget)?;
            let mg = matching_graph(&graph);
            let schedule = if pairs == "auto" { auto_pairs(&mg, 0) } else { parse_pairs(&mg, pairs)? };
            let variant = match variant {
                DecayArg::Points => DecayVariant::Points,
                DecayArg::StarBoundaries => DecayVariant::StarBoundaries,
            };
            let fit = decay_fit(&mg, *p, &schedule, variant, *samples, seed)?;
            if let Some(path) = csv {
                #[derive(Serialize)]
                struct Row {
                    distance: u32,
                    u: Vertex,
                    v: Vertex,
                    successes: u64,
                    samples: u64,
                    mean: f64,
                    std_error: f64,
                    log_prob: f64,
                }
                let rows: Vec<Row> = fit
                    .points
                    .iter()
                    .map(|pt| Row {
                        distance: pt.pair.distance,
                        u: pt.pair.u,
                        v: pt.pair.v,
                        successes: pt.estimate.successes,
                        samples: pt.estimate.samples,
                        mean: pt.estimate.mean,
                        std_error: pt.estimate.std_error,
                        log_prob: pt.log_prob,
                    })
                    .collect();
                write_csv(path, &hash, &rows)?;
            }
            let mut value = serde_json::to_value(&fit)?;
            value["rate"] = json!(fit.rate());
            value["ci_excludes_zero"] = json!(fit.ci_excludes_zero());
            value
        }
        Command::Phi { graph, v, radius, p, method, samples } => {
            let (graph, _) = load(graph, budget)?;
            let region = PhiRegion::ball(&graph, *v, *radius, BoundaryMode::Truncated)?;
            let method = match method {
                MethodArg::Exact => PhiMethod::Exact,
                MethodArg::Mc => PhiMethod::MonteCarlo { samples: *samples, seed },
            };
            let value = phi(&graph, *p, &region, method)?;
            json!({
                "v": v, "radius": radius, "p": p,
                "set_size": region.set.len(), "interior_size": region.interior.len(), "frontier_size": region.frontier.len(),
                "phi": value,
            })
        }
        Command::Certify { graph, p, v, core_radius, max_radius, epsilon } => {
            let (graph, _) = load(graph, budget)?;
            check_vertex(&graph, *v)?;
            let dist = graph.distances_from(*v);
            let mut results = Vec::new();
            for x in graph.vertices().filter(|&x| dist[x as usize] <= *core_radius) {
                let cert = subcritical_certificate(&graph, *p, x, *max_radius, *epsilon)?;
                results.push(json!({
                    "v": x,
                    "certified": cert.is_some(),
                    "radius": cert.as_ref().map(|c| c.radius),
                    "phi": cert.as_ref().map(|c| c.phi),
                }));
            }
            let all = results.iter().all(|r| r["certified"] == json!(true));
            json!({ "p": p, "epsilon": epsilon, "all_certified": all, "vertices": results })
        }
        Command::Contour { graph, p, sample: index } => {
            let (graph, _) = load(graph, budget)?;
            let mg = matching_graph(&graph);
            let ctx = ContourContext::new(&mg);
            let config = sample(graph.vertex_count(), *p, seed, *index)?;
            let mut clusters = Vec::new();
            for xi in finite_interior_clusters(&mg, &config) {
                let contour = ctx.outer_boundary(&config, &xi)?;
                let check = ctx.verify(&config, &xi, &contour);
                if !check.ok() {
                    return Err(Error::invariant(format!("contour of cluster at {} fails verification", xi[0])));
                }
                clusters.push(json!({ "cluster": xi, "contour": contour, "check": check }));
            }
            json!({ "p": p, "sample": index, "clusters": clusters })
        }
        Command::Render { graph, svg: path, tree_depth, chandelier } => {
            let (graph, _) = load(graph, budget)?;
            let mut overlays = Vec::new();
            if let Some(depth) = tree_depth {
                let tree = grow_tree(&graph, 0, 0, Condition::One, *depth)?;
                overlays.push(Overlay { color: "red", width: 0.006, edges: tree.edges().collect() });
            }
            if let Some(root) = chandelier {
                let c = build_chandelier(&graph, *root, None, Side::Left, usize::MAX)?;
                overlays.push(Overlay { color: "blue", width: 0.006, edges: c.edges().collect() });
            }
            write_text(Some(path), &svg::render(&graph, &overlays, &hash))?;
            json!({ "svg": path, "vertices": graph.vertex_count() })
        }
        Command::Run { .. } => return Err(Error::precondition("run cannot be nested")),
    };
    let mut result = result;
    result["config_hash"] = json!(hash);
    write_text(out, &serde_json::to_string_pretty(&result)?)
}

fn load(args: &GraphArgs, budget: usize) -> Result<(RotationGraph, Option<TilingSpec>)> {
    if let Some(path) = &args.graph {
        return read_graph(path);
    }
    let parts: Vec<usize> = args
        .tiling
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::precondition(format!("cannot parse tiling '{}'", args.tiling)))?;
    let [p, q, radius] = parts[..] else {
        return Err(Error::precondition(format!("tiling must be p,q,radius, got '{}'", args.tiling)));
    };
    let spec = TilingSpec { face_degree: p, vertex_degree: q, radius, allow_non_hyperbolic: args.allow_non_hyperbolic };
    Ok((build_ball_with_budget(&spec, budget)?, Some(spec)))
}

fn check_vertex(g: &RotationGraph, v: Vertex) -> Result<()> {
    if (v as usize) < g.vertex_count() {
        Ok(())
    } else {
        Err(Error::precondition(format!("vertex {v} is not in the graph")))
    }
}

fn parse_pairs(mg: &hyperperc::matching::MatchingGraph<'_>, text: &str) -> Result<Vec<DecayPair>> {
    text.split(',')
        .map(|item| {
            let bad = || Error::precondition(format!("cannot parse pair '{item}'"));
            let (a, b) = item.trim().split_once('-').ok_or_else(bad)?;
            let u: Vertex = a.parse().map_err(|_| bad())?;
            let v: Vertex = b.parse().map_err(|_| bad())?;
            check_vertex(mg.base, u)?;
            check_vertex(mg.base, v)?;
            Ok(DecayPair { u, v, distance: mg.distances_from_set([u])[v as usize] })
        })
        .collect()
}

fn summarize_crossings(rows: &[CrossingRow], samples: u64) -> Value {
    let per_state = |state: u8| {
        let counts: Vec<f64> = rows.iter().filter(|r| r.state == state).map(|r| r.clusters_touching as f64).collect();
        Estimate::from_values(&counts)
    };
    let both = rows
        .chunks(2)
        .filter(|pair| pair.iter().all(|r| r.clusters_touching > 0))
        .count();
    json!({
        "samples": samples,
        "p": rows.first().map(|r| r.p),
        "open_crossing_clusters": per_state(1),
        "closed_crossing_clusters": per_state(0),
        "both_states_cross": Estimate::from_counts(both as u64, samples),
        "note": "crossing = cluster meets both the core ball and the truncation boundary",
    })
}

fn write_text(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn write_csv<T: Serialize>(path: &Path, hash: &str, rows: &[T]) -> Result<()> {
    let io = |e: &dyn std::fmt::Display| Error::Io(format!("{}: {e}", path.display()));
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| io(&e))?;
    }
    let body = w.into_inner().map_err(|e| io(&e))?;
    let mut text = format!("# hyperperc config {hash}\n").into_bytes();
    text.extend(body);
    fs::write(path, text).map_err(|e| io(&e))
}
