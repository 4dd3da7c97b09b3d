//! Independent oracles shared by the integration tests. Nothing here calls the
//! library's canonical forms or symmetry search.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use isostitch::design_graph::Cycle;
use isostitch::grid::{SegmentId, Vertex, Window};

pub fn rot60(v: Vertex) -> Vertex {
    Vertex::new(-v.j, v.i + v.j)
}

pub fn reflect(v: Vertex) -> Vertex {
    Vertex::new(v.i + v.j, -v.j)
}

/// The twelve point operations of the lattice as plain functions of a vertex.
pub fn point_ops() -> Vec<Box<dyn Fn(Vertex) -> Vertex>> {
    let mut ops: Vec<Box<dyn Fn(Vertex) -> Vertex>> = Vec::new();
    for m in [false, true] {
        for r in 0..6 {
            ops.push(Box::new(move |v: Vertex| {
                let mut w = if m { reflect(v) } else { v };
                for _ in 0..r {
                    w = rot60(w);
                }
                w
            }));
        }
    }
    ops
}

fn edge_set(vertices: &[Vertex]) -> BTreeSet<(Vertex, Vertex)> {
    let n = vertices.len();
    (0..n)
        .map(|k| {
            let (a, b) = (vertices[k], vertices[(k + 1) % n]);
            if a < b {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect()
}

/// Brute-force congruence: some point operation followed by the translation
/// that aligns least vertices maps the edge set of `b` onto that of `a`.
pub fn congruent(a: &Cycle, b: &Cycle) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let target = edge_set(a.vertices());
    let a_min = *a.vertices().iter().min().unwrap();
    point_ops().iter().any(|op| {
        let image: Vec<Vertex> = b.vertices().iter().map(|v| op(*v)).collect();
        let t = a_min - *image.iter().min().unwrap();
        let moved: Vec<Vertex> = image.iter().map(|v| *v + t).collect();
        edge_set(&moved) == target
    })
}

/// Vertex degrees counted straight from a segment set.
pub fn degrees(segments: &BTreeSet<SegmentId>) -> HashMap<Vertex, usize> {
    let mut deg = HashMap::new();
    for s in segments {
        let (p, q) = s.endpoints();
        *deg.entry(p).or_insert(0) += 1;
        *deg.entry(q).or_insert(0) += 1;
    }
    deg
}

/// A vertex lies on no stitched line iff its A, B and C coordinates
/// `j`, `i`, `i + j` are odd, odd and even.
pub fn lies_on_no_line(v: Vertex) -> bool {
    v.j.rem_euclid(2) == 1 && v.i.rem_euclid(2) == 1 && (v.i + v.j).rem_euclid(2) == 0
}

pub fn window_vertices(w: &Window) -> impl Iterator<Item = Vertex> + '_ {
    (w.j_min..=w.j_max).flat_map(move |j| (w.i_min..=w.i_max).map(move |i| Vertex::new(i, j)))
}

/// Snowflake iterate by turtle walk: after `order` replacement rounds on the
/// unit triangle every direction is one unit step.
pub fn turtle_snowflake(order: u32) -> Vec<Vertex> {
    const STEP: [(i64, i64); 6] = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)];
    let mut dirs: Vec<u8> = vec![0, 2, 4];
    for _ in 0..order {
        dirs = dirs
            .iter()
            .flat_map(|&d| [d, (d + 5) % 6, (d + 1) % 6, d])
            .collect();
    }
    let mut out = Vec::new();
    let mut cur = Vertex::new(0, 0);
    for d in dirs {
        out.push(cur);
        let (di, dj) = STEP[d as usize];
        cur = Vertex::new(cur.i + di, cur.j + dj);
    }
    assert_eq!(cur, Vertex::new(0, 0));
    out
}
