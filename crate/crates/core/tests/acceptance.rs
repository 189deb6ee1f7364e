//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Criteria 4, 5 and 8 are finite-volume proxies for the coexistence of
//! infinitely many infinite clusters, which cannot be observed directly.
//!
//! By default the process exits 0 after printing every line so that a red
//! criterion stays visible without breaking `cargo test`; set
//! `ACCEPTANCE_STRICT=1` to exit non-zero on any FAIL.

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::Instant;

use hyperperc::chandelier::chandelier_sequence;
use hyperperc::contour::{finite_interior_clusters, ContourContext};
use hyperperc::critical::{
    auto_pairs, decay_fit, phi_exact, phi_monte_carlo, phi_poly, russo_grid, russo_inequality_check, BoundaryMode,
    DecayFit, DecayVariant, PhiRegion,
};
use hyperperc::curvature::{euler_patch_check, gauss_bonnet_deficit, sample_cycle, CyclePatch};
use hyperperc::matching::matching_graph;
use hyperperc::percolation::{core_ball, crossing_counts, sample};
use hyperperc::tiling::{build_ball_with_budget, fixtures};
use hyperperc::tree::{census_recursion, grow_tree, tree_pc, type_matrix, Condition, Letter};
use hyperperc::walks::{turn_walk, WalkRule};
use hyperperc::{build_ball, trace_faces, Exact, Rational, RotationGraph, Side, TilingSpec, Vertex};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type Outcome = (bool, String);

fn ball(p: usize, q: usize, r: usize) -> RotationGraph {
    build_ball(&TilingSpec::new(p, q, r)).expect("tiling builds")
}

fn c1_self_avoidance() -> Outcome {
    let cases: [(usize, usize, Vec<WalkRule>); 2] = [
        (
            3,
            7,
            vec![
                WalkRule::LabelShift(3),
                WalkRule::LabelShift(-3),
                WalkRule::FacesOnSide { side: Side::Left, count: 3 },
                WalkRule::FacesOnSide { side: Side::Right, count: 3 },
            ],
        ),
        (
            4,
            5,
            vec![
                WalkRule::LabelShift(2),
                WalkRule::FacesOnSide { side: Side::Left, count: 2 },
                WalkRule::FacesOnSide { side: Side::Right, count: 2 },
            ],
        ),
    ];
    let mut walks = 0usize;
    for (p, q, rules) in cases {
        let g = ball(p, q, 8);
        for h in g.half_edges() {
            for &rule in &rules {
                let w = match turn_walk(&g, h, rule, 200) {
                    Ok(w) => w,
                    Err(e) => return (false, format!("{{{p},{q}}} {rule:?} from {h:?}: {e}")),
                };
                let distinct: HashSet<_> = w.path.iter().collect();
                if distinct.len() != w.path.len() {
                    return (false, format!("{{{p},{q}}} {rule:?} from {h:?} repeats a vertex"));
                }
                walks += 1;
            }
        }
    }
    (true, format!("{walks} walks, no repeated vertex"))
}

fn c2_gauss_bonnet() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut single_face_zero = 0usize;
    for (p, q) in [(3, 7), (4, 5)] {
        let g = ball(p, q, 6);
        let faces = trace_faces(&g);
        let mut done = 0;
        while done < 10_000 {
            let Some(cycle) = sample_cycle(&g, &faces, 40, &mut rng) else { continue };
            let patch = match CyclePatch::from_cycle(&g, &faces, &cycle) {
                Ok(patch) => patch,
                Err(e) => return (false, format!("{{{p},{q}}}: {e}")),
            };
            let euler = euler_patch_check(&patch);
            if !euler.holds {
                return (false, format!("{{{p},{q}}}: Euler fails {euler:?}"));
            }
            let deficit = match gauss_bonnet_deficit::<Rational>(&g, &faces, &patch) {
                Ok(d) => d,
                Err(e) => return (false, format!("{{{p},{q}}}: {e}")),
            };
            if *deficit.coefficient() > Rational::zero() {
                return (false, format!("{{{p},{q}}}: positive deficit {:?}", deficit.coefficient()));
            }
            if patch.face_ids().len() == 1 {
                if !deficit.coefficient().is_zero() {
                    return (false, format!("{{{p},{q}}}: single face deficit {:?}", deficit.coefficient()));
                }
                single_face_zero += 1;
            }
            done += 1;
        }
    }
    let ok = single_face_zero > 0;
    (ok, format!("2×10⁴ cycles, deficit ≤ 0; {single_face_zero} single-face cycles with deficit = 0"))
}

fn power_iteration_pc() -> f64 {
    let m = type_matrix();
    let mut x = [1.0f64; 3];
    let mut lambda = 0.0;
    for _ in 0..10_000 {
        let mut y = [0.0; 3];
        for (i, yi) in y.iter_mut().enumerate() {
            for (j, xj) in x.iter().enumerate() {
                // row vector times matrix: counts flow from type i to its children
                *yi += m[j][i] as f64 * xj;
            }
        }
        let norm = y.iter().sum::<f64>();
        let next = norm / x.iter().sum::<f64>();
        x = y.map(|v| v / norm);
        if (next - lambda).abs() < 1e-16 {
            lambda = next;
            break;
        }
        lambda = next;
    }
    1.0 / lambda
}

fn c3_tree() -> Outcome {
    let g = ball(3, 7, 9);
    let t = match grow_tree(&g, 0, 0, Condition::One, 5) {
        Ok(t) => t,
        Err(e) => return (false, e.to_string()),
    };
    if t.truncated {
        return (false, "tree reached the boundary".into());
    }
    let deg = t.tree_degrees();
    if deg[0] != 2 {
        return (false, format!("root degree {}", deg[0]));
    }
    for (i, n) in t.nodes.iter().enumerate().skip(1) {
        if t.is_expanded(i) {
            let want = if n.label.last() == Some(Letter::One) { 4 } else { 3 };
            if deg[i] != want {
                return (false, format!("label {} has degree {}", n.label, deg[i]));
            }
        }
    }
    let census: Vec<u64> = t.census().iter().skip(1).map(|c| c.iter().sum::<usize>() as u64).collect();
    let expected = census_recursion(6);
    let typed_ok = t.census().iter().skip(1).zip(&expected).all(|(c, e)| c.map(|x| x as u64) == *e);
    if !typed_ok || census[..3] != [2, 5, 12] {
        return (false, format!("census {census:?}"));
    }
    let pc = tree_pc::<f64>();
    let oracle = power_iteration_pc();
    let sqrt2 = 2f64.sqrt() - 1.0;
    let ok = (pc.p_c - oracle).abs() <= 1e-12
        && (pc.p_c - sqrt2).abs() <= 1e-12
        && pc.p_c <= pc.paper_bound
        && (pc.paper_bound - 0.43679).abs() < 1e-5
        && pc.paper_bound < 0.5;
    (ok, format!("census {census:?}, p_c = {:.15}, power iteration {:.15}, bound {:.5}", pc.p_c, oracle, pc.paper_bound))
}

const COEXISTENCE_THRESHOLD: f64 = 0.9;

fn c4_coexistence() -> Outcome {
    let g = ball(3, 7, 8);
    let core = core_ball(&g, 2);
    let n = 1000;
    let rows = match crossing_counts(&g, 0.5, &core, n, 4) {
        Ok(r) => r,
        Err(e) => return (false, e.to_string()),
    };
    let both = rows.chunks(2).filter(|r| r.iter().all(|x| x.clusters_touching > 0)).count();
    let frac = both as f64 / n as f64;
    (frac >= COEXISTENCE_THRESHOLD, format!("both states cross in {both}/{n} = {frac:.3} (≥ {COEXISTENCE_THRESHOLD})"))
}

fn fit_line(label: &str, f: &DecayFit) -> String {
    format!("{label} slope {:.4} CI [{:.4}, {:.4}]", f.slope, f.ci_low, f.ci_high)
}

fn c5_decay() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    let g = ball(3, 7, 10);
    let mg = matching_graph(&g);
    let pairs = auto_pairs(&mg, 0);
    for (label, variant) in [("{3,7} points", DecayVariant::Points), ("{3,7} star", DecayVariant::StarBoundaries)] {
        match decay_fit(&mg, 0.5, &pairs, variant, 20_000, 5) {
            Ok(f) => {
                ok &= f.slope < 0.0 && f.ci_excludes_zero();
                parts.push(fit_line(label, &f));
            }
            Err(e) => return (false, format!("{label}: {e}")),
        }
    }
    let flat = build_ball(&TilingSpec::control(4, 4, 20)).expect("control builds");
    let mf = matching_graph(&flat);
    let pairs = auto_pairs(&mf, 0);
    for (label, variant) in [("{4,4} points", DecayVariant::Points), ("{4,4} star", DecayVariant::StarBoundaries)] {
        match decay_fit(&mf, 0.7, &pairs, variant, 20_000, 5) {
            Ok(f) => {
                ok &= !f.ci_excludes_zero();
                parts.push(fit_line(label, &f));
            }
            Err(e) => return (false, format!("{label}: {e}")),
        }
    }
    (ok, parts.join("; "))
}

fn c6_phi() -> Outcome {
    for n in 1..=10usize {
        let g = fixtures::path(2 * n + 1);
        let set: Vec<Vertex> = g.vertices().collect();
        let region = PhiRegion::new(&g, n as Vertex, &set, BoundaryMode::Truncated).expect("region");
        for k in 1..20 {
            let p = Exact::new(k.into(), 20.into());
            let expect = Exact::from_integer(2.into()) * num_traits::pow(p.clone(), n);
            if phi_exact(&g, &p, &region).expect("small") != expect {
                return (false, format!("path n = {n} at p = {p}"));
            }
        }
    }
    let g = ball(3, 7, 3);
    let region = PhiRegion::ball(&g, 0, 2, BoundaryMode::Truncated).expect("region");
    let mut parts = vec!["2pⁿ exact for n ≤ 10".to_string()];
    for p in [0.1, 0.3, 0.5] {
        let exact: f64 = phi_exact(&g, &p, &region).expect("small");
        let mc = phi_monte_carlo(&g, p, &region, 20_000, 6).expect("mc");
        let z = (mc.mean - exact).abs() / mc.std_error;
        if z > 3.0 {
            return (false, format!("p = {p}: MC {} vs exact {exact} ({z:.2}σ)", mc.mean));
        }
        parts.push(format!("p={p}: {z:.2}σ"));
    }
    let poly = phi_poly(&g, &region).expect("small");
    let vals: Vec<Exact> = (0..=100).map(|k| poly.eval(&Exact::new(k.into(), 100.into()))).collect();
    if !vals.windows(2).all(|w| w[0] <= w[1]) {
        return (false, "φ not monotone".into());
    }
    parts.push("monotone on 101 points".into());
    (true, parts.join(", "))
}

fn russo_fixtures() -> Vec<(String, RotationGraph)> {
    let mut out = vec![
        ("triangle".to_string(), fixtures::triangle()),
        ("square".to_string(), fixtures::square()),
        ("hexagon_with_diagonal_pair".to_string(), fixtures::hexagon_with_diagonal_pair()),
        ("{3,7} R=1".to_string(), ball(3, 7, 1)),
        ("{4,5} R=1".to_string(), ball(4, 5, 1)),
    ];
    for n in 2..=16 {
        out.push((format!("path({n})"), fixtures::path(n)));
    }
    for n in 2..=15 {
        out.push((format!("star({n})"), fixtures::star(n)));
    }
    for n in 3..=15 {
        out.push((format!("wheel({n})"), fixtures::wheel(n)));
    }
    for r in 1..=3 {
        for c in r..=7 {
            if (r + 1) * (c + 1) <= 16 {
                out.push((format!("grid({r},{c})"), fixtures::grid(r, c)));
            }
        }
    }
    out.retain(|(_, g)| g.vertex_count() <= 16);
    out
}

fn c7_russo() -> Outcome {
    let grid = russo_grid();
    let mut jobs = Vec::new();
    for (name, g) in russo_fixtures() {
        for v in g.vertices() {
            let dist = g.distances_from(v);
            for r in 0..=3 {
                let lambda: Vec<Vertex> = g.vertices().filter(|&x| dist[x as usize] <= r).collect();
                if lambda.len() < g.vertex_count() {
                    jobs.push((name.clone(), g.clone(), v, lambda));
                }
            }
        }
    }
    jobs.push(("path(5)".into(), fixtures::path(5), 2, vec![1, 2, 3]));
    let star = fixtures::star(4);
    jobs.push(("star(4)".into(), star.clone(), 0, star.vertices().collect()));
    let failures: Vec<String> = jobs
        .par_iter()
        .filter_map(|(name, g, v, lambda)| match russo_inequality_check(g, *v, lambda, &grid) {
            Ok(rep) if rep.holds() => None,
            Ok(rep) => {
                let bad = rep.failures().next().map(|pt| pt.p.to_string()).unwrap_or_default();
                Some(format!("{name} v={v} |Λ|={} first failure at p={bad}", lambda.len()))
            }
            Err(e) => Some(format!("{name} v={v}: {e}")),
        })
        .collect();
    let total = jobs.len();
    if failures.is_empty() {
        (true, format!("{total} (graph, v, Λ) cases × 99 grid points"))
    } else {
        (false, format!("{} of {total} cases fail, e.g. {}", failures.len(), failures[0]))
    }
}

fn c8_contours() -> Outcome {
    let g = ball(3, 7, 8);
    let mg = matching_graph(&g);
    let ctx = ContourContext::new(&mg);
    let mut checked = 0usize;
    for i in 0..1000 {
        let config = sample(g.vertex_count(), 0.7, 8, i).expect("valid p");
        for xi in finite_interior_clusters(&mg, &config) {
            let walk = match ctx.outer_boundary(&config, &xi) {
                Ok(w) => w,
                Err(e) => return (false, format!("sample {i}: {e}")),
            };
            let check = ctx.verify(&config, &xi, &walk);
            if !check.ok() {
                return (false, format!("sample {i}, cluster at {}: {check:?}", xi[0]));
            }
            checked += 1;
        }
    }
    (checked > 0, format!("{checked} clusters in 1000 samples, all enclosed"))
}

fn c9_chandeliers() -> Outcome {
    let g = match build_ball_with_budget(&TilingSpec::new(3, 7, 14), 5_000_000) {
        Ok(g) => g,
        Err(e) => return (false, e.to_string()),
    };
    let dist0 = g.distances_from(0);
    let to_boundary = g.distances_to_boundary();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let near: Vec<Vertex> = g.vertices().filter(|&v| dist0[v as usize] <= 4).collect();
    let mut geodesics = Vec::new();
    while geodesics.len() < 100 {
        let a = near[rng.gen_range(0..near.len())];
        let da = g.distances_from(a);
        let len = rng.gen_range(15..=25u32);
        let ends: Vec<Vertex> = g.vertices().filter(|&v| da[v as usize] == len && to_boundary[v as usize] >= 1).collect();
        if ends.is_empty() {
            continue;
        }
        let b = ends[rng.gen_range(0..ends.len())];
        let path = g.shortest_path(a, b).expect("connected");
        if !path.iter().any(|&v| g.is_boundary(v)) {
            geodesics.push(path);
        }
    }
    let checked: Vec<std::result::Result<i64, String>> = geodesics
        .par_iter()
        .map(|path| {
            let (a, b) = (path[0], path[path.len() - 1]);
            let seq = chandelier_sequence(&g, path, usize::MAX).map_err(|e| format!("geodesic {a}→{b}: {e}"))?;
            for family in [&seq.left, &seq.right] {
                let mut seen = HashSet::new();
                for c in family.iter() {
                    if !c.vertices().all(|v| seen.insert(v)) {
                        return Err(format!("geodesic {a}→{b}: overlapping chandeliers on one side"));
                    }
                }
            }
            let mut seen = HashSet::new();
            for &(l, r) in &seq.pairs {
                if !seq.left[l].vertices().chain(seq.right[r].vertices()).all(|v| seen.insert(v)) {
                    return Err(format!("geodesic {a}→{b}: selected pair overlaps"));
                }
            }
            let d = path.len() - 1;
            let need = (d / 3).saturating_sub(1);
            if seq.pairs.len() < need {
                return Err(format!("geodesic {a}→{b} of length {d}: {} pairs < {need}", seq.pairs.len()));
            }
            Ok(seq.pairs.len() as i64 - need as i64)
        })
        .collect();
    let mut min_slack = i64::MAX;
    for c in checked {
        match c {
            Ok(slack) => min_slack = min_slack.min(slack),
            Err(e) => return (false, e),
        }
    }
    (true, format!("100 geodesics, families disjoint, pair count ≥ ⌊d/3⌋ − 1 (min slack {min_slack})"))
}

fn c10_matching() -> Outcome {
    let g = ball(3, 7, 5);
    let mg = matching_graph(&g);
    if mg.star_edge_count() != 0 {
        return (false, "triangulation has star edges".into());
    }
    for v in g.vertices() {
        let mut a: Vec<Vertex> = mg.neighbors(v).collect();
        let mut b = g.rotation(v).to_vec();
        a.sort_unstable();
        b.sort_unstable();
        if a != b {
            return (false, format!("G* ≠ G at {v}"));
        }
    }
    let g = ball(4, 5, 4);
    let mg = matching_graph(&g);
    let faces = trace_faces(&g);
    let mut interior = 0usize;
    for v in g.vertices() {
        // oracle: G-neighbours plus every vertex sharing a finite face
        let mut want: HashSet<Vertex> = g.rotation(v).iter().copied().collect();
        for f in faces.around(&g, v) {
            let rec = faces.get(f);
            if rec.finite {
                want.extend(rec.boundary_walk.iter().copied());
            }
        }
        want.remove(&v);
        let got: Vec<Vertex> = mg.neighbors(v).collect();
        let got_set: HashSet<Vertex> = got.iter().copied().collect();
        if got.len() != got_set.len() || got_set.contains(&v) {
            return (false, format!("star neighbourhood of {v} is not simple"));
        }
        if got_set != want {
            return (false, format!("star neighbourhood of {v} differs from the face scan"));
        }
        if got.iter().any(|&u| !mg.are_adjacent(u, v)) {
            return (false, format!("asymmetric star adjacency at {v}"));
        }
        if faces.all_finite_at(&g, v) && !g.is_boundary(v) {
            if got.len() != 10 {
                return (false, format!("interior vertex {v} has G*-degree {}", got.len()));
            }
            interior += 1;
        }
    }
    (interior > 0, format!("{{3,7}}: G* = G; {{4,5}}: {interior} interior vertices of G*-degree 10, symmetric, simple"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("self-avoiding turn walks", c1_self_avoidance),
        ("Gauss-Bonnet on sampled cycles", c2_gauss_bonnet),
        ("tree structure and p_c", c3_tree),
        ("coexistence at p = 1/2 (proxy)", c4_coexistence),
        ("exponential decay (proxy)", c5_decay),
        ("φ oracle equivalence", c6_phi),
        ("Russo-type inequality", c7_russo),
        ("duality contours (proxy)", c8_contours),
        ("chandelier disjointness", c9_chandeliers),
        ("matching graph", c10_matching),
    ];
    // optional criterion numbers on the command line: `-- 5 9`
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    let mut ran = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        if !only.is_empty() && !only.contains(&(i + 1)) {
            continue;
        }
        ran += 1;
        let t = Instant::now();
        let (ok, detail) = f();
        if !ok {
            failed += 1;
        }
        println!(
            "{} criterion {:>2} {name}: {detail} [{:.1}s]",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            t.elapsed().as_secs_f64()
        );
    }
    println!("{}/{ran} criteria pass", ran - failed);
    let strict = std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    if failed > 0 && strict {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
