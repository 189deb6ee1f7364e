//! Static SVG drawings. Vertices sit on circles by graph distance from
//! vertex 0, with radii shrinking geometrically towards the rim of a disk;
//! the coordinates are only for legibility.

use std::f64::consts::TAU;
use std::fmt::Write;

use hyperperc::{RotationGraph, Vertex};

const SHRINK: f64 = 0.78;

pub fn layout(g: &RotationGraph) -> Vec<(f64, f64)> {
    let n = g.vertex_count();
    let dist = g.distances_from(0);
    let mut layers: Vec<Vec<Vertex>> = Vec::new();
    for v in g.vertices() {
        let d = dist[v as usize];
        if d == u32::MAX {
            continue;
        }
        if layers.len() <= d as usize {
            layers.resize(d as usize + 1, Vec::new());
        }
        layers[d as usize].push(v);
    }
    let mut angle = vec![0.0f64; n];
    let mut pos = vec![(0.0, 0.0); n];
    for (d, layer) in layers.iter_mut().enumerate() {
        layer.sort_by_key(|&v| g.order(v));
        let r = 1.0 - SHRINK.powi(d as i32);
        // rotate the layer so its first vertex lines up with a neighbour inside
        let offset = if d == 0 {
            0.0
        } else {
            g.rotation(layer[0])
                .iter()
                .find(|&&u| dist[u as usize] + 1 == d as u32)
                .map(|&u| angle[u as usize])
                .unwrap_or(0.0)
        };
        for (i, &v) in layer.iter().enumerate() {
            let a = offset + TAU * i as f64 / layer.len() as f64;
            angle[v as usize] = a;
            pos[v as usize] = (r * a.cos(), r * a.sin());
        }
    }
    pos
}

/// A set of edges drawn in one colour.
pub struct Overlay<'a> {
    pub color: &'a str,
    pub width: f64,
    pub edges: Vec<(Vertex, Vertex)>,
}

pub fn render(g: &RotationGraph, overlays: &[Overlay<'_>], config_hash: &str) -> String {
    let pos = layout(g);
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="-1.05 -1.05 2.1 2.1" width="800" height="800">"#
    )
    .unwrap();
    writeln!(s, "<desc>hyperperc config {config_hash}</desc>").unwrap();
    writeln!(s, r#"<rect x="-1.05" y="-1.05" width="2.1" height="2.1" fill="white"/>"#).unwrap();
    let line = |s: &mut String, (a, b): (Vertex, Vertex)| {
        let (x1, y1) = pos[a as usize];
        let (x2, y2) = pos[b as usize];
        writeln!(s, r#"<line x1="{x1:.5}" y1="{y1:.5}" x2="{x2:.5}" y2="{y2:.5}"/>"#).unwrap();
    };
    writeln!(s, r##"<g stroke="#9a9a9a" stroke-width="0.002">"##).unwrap();
    for e in g.edges() {
        line(&mut s, e);
    }
    writeln!(s, "</g>").unwrap();
    for o in overlays {
        writeln!(s, r#"<g stroke="{}" stroke-width="{}">"#, o.color, o.width).unwrap();
        for &e in &o.edges {
            line(&mut s, e);
        }
        writeln!(s, "</g>").unwrap();
    }
    writeln!(s, "</svg>").unwrap();
    s
}
