//! Deterministic SVG charts of designs.
//!
//! Output is byte-stable: coordinates are printed with four decimals and
//! elements are emitted in a fixed order (grid dots, back, front, highlights).

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::design_graph::Cycle;
use crate::grid::{vertex_degree_class, vertex_to_cartesian, SegmentId, Vertex, VertexClass};
use crate::stitcher::Design;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RenderSide {
    Front,
    Back,
    Both,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenderOptions {
    pub side: RenderSide,
    /// Reflect the back side in x, as seen from behind the fabric.
    pub mirror_back: bool,
    pub show_grid_dots: bool,
    pub show_empty_vertices: bool,
    pub highlight: Vec<Cycle>,
    pub stroke_width: f64,
    pub unit_px: f64,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self {
            side: RenderSide::Front,
            mirror_back: false,
            show_grid_dots: false,
            show_empty_vertices: false,
            highlight: Vec::new(),
            stroke_width: 0.15,
            unit_px: 12.0,
        }
    }
}

const FRONT_COLOR: &str = "#1f3b73";
const BACK_COLOR: &str = "#c0392b";
const DOT_COLOR: &str = "#9a9a9a";
const HIGHLIGHT_COLOR: &str = "#f39c12";
const MARGIN: f64 = 1.0;

/// Four-decimal formatting without a negative zero.
fn num(x: f64) -> String {
    let s = format!("{x:.4}");
    if s == "-0.0000" {
        "0.0000".to_string()
    } else {
        s
    }
}

struct Frame {
    x_min: f64,
    x_max: f64,
    y_max: f64,
    unit: f64,
}

impl Frame {
    fn new(design: &Design, unit: f64) -> Self {
        let w = design.window;
        let corners = [
            Vertex::new(w.i_min, w.j_min),
            Vertex::new(w.i_max, w.j_min),
            Vertex::new(w.i_min, w.j_max),
            Vertex::new(w.i_max, w.j_max),
        ];
        let pts: Vec<(f64, f64)> = corners.iter().map(|v| vertex_to_cartesian(*v)).collect();
        Self {
            x_min: pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min),
            x_max: pts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max),
            y_max: pts.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max),
            unit,
        }
    }

    fn y_min(&self, design: &Design) -> f64 {
        vertex_to_cartesian(Vertex::new(design.window.i_min, design.window.j_min)).1
    }

    /// Pixel coordinates of a vertex; `mirrored` reflects about the vertical center line.
    fn project(&self, v: Vertex, mirrored: bool) -> (f64, f64) {
        let (mut x, y) = vertex_to_cartesian(v);
        if mirrored {
            x = self.x_min + self.x_max - x;
        }
        (
            (x - self.x_min + MARGIN) * self.unit,
            (self.y_max - y + MARGIN) * self.unit,
        )
    }
}

#[allow(clippy::too_many_arguments)]
fn write_segments(
    out: &mut String,
    frame: &Frame,
    stroke: &str,
    id: &str,
    set: &BTreeSet<SegmentId>,
    color: &str,
    dashed: bool,
    mirrored: bool,
) {
    let unit = frame.unit;
    let dash = if dashed {
        format!(
            " stroke-dasharray=\"{} {}\"",
            num(0.2 * unit),
            num(0.1 * unit)
        )
    } else {
        String::new()
    };
    let _ = writeln!(
        out,
        "<g id=\"{id}\" stroke=\"{color}\" stroke-width=\"{stroke}\" stroke-linecap=\"round\"{dash}>"
    );
    for seg in set {
        let (p, q) = seg.endpoints();
        let (x1, y1) = frame.project(p, mirrored);
        let (x2, y2) = frame.project(q, mirrored);
        let _ = writeln!(
            out,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
            num(x1),
            num(y1),
            num(x2),
            num(y2)
        );
    }
    out.push_str("</g>\n");
}

pub fn to_svg(design: &Design, opts: &RenderOptions) -> Vec<u8> {
    let unit = if opts.unit_px > 0.0 {
        opts.unit_px
    } else {
        1.0
    };
    let stroke = if opts.stroke_width > 0.0 {
        opts.stroke_width
    } else {
        0.15
    };
    let frame = Frame::new(design, unit);
    let width = (frame.x_max - frame.x_min + 2.0 * MARGIN) * unit;
    let height = (frame.y_max - frame.y_min(design) + 2.0 * MARGIN) * unit;
    let sw = num(stroke * unit);

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">",
        w = num(width),
        h = num(height)
    );
    let _ = writeln!(
        out,
        "<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"#ffffff\"/>",
        num(width),
        num(height)
    );

    let conv = &design.pattern.convention;
    if opts.show_grid_dots || opts.show_empty_vertices {
        out.push_str("<g id=\"grid\">\n");
        let r = num(0.06 * unit);
        for v in design.window.vertices() {
            let empty = vertex_degree_class(v, conv) == VertexClass::Empty;
            let (x, y) = frame.project(v, false);
            if empty && opts.show_empty_vertices {
                let _ = writeln!(
                    out,
                    "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"{DOT_COLOR}\" stroke-width=\"{}\"/>",
                    num(x),
                    num(y),
                    num(0.1 * unit),
                    num(0.03 * unit)
                );
            } else if opts.show_grid_dots {
                let _ = writeln!(
                    out,
                    "<circle cx=\"{}\" cy=\"{}\" r=\"{r}\" fill=\"{DOT_COLOR}\"/>",
                    num(x),
                    num(y)
                );
            }
        }
        out.push_str("</g>\n");
    }

    let draw_back = matches!(opts.side, RenderSide::Back | RenderSide::Both);
    let draw_front = matches!(opts.side, RenderSide::Front | RenderSide::Both);
    if draw_back {
        // dashed only when sharing the chart with the front
        let dashed = opts.side == RenderSide::Both;
        write_segments(
            &mut out,
            &frame,
            &sw,
            "back",
            &design.back,
            BACK_COLOR,
            dashed,
            opts.mirror_back,
        );
    }
    if draw_front {
        write_segments(
            &mut out,
            &frame,
            &sw,
            "front",
            &design.front,
            FRONT_COLOR,
            false,
            false,
        );
    }

    if !opts.highlight.is_empty() {
        let _ = writeln!(
            out,
            "<g id=\"highlight\" fill=\"none\" stroke=\"{HIGHLIGHT_COLOR}\" stroke-width=\"{}\" stroke-linejoin=\"round\">",
            num(2.0 * stroke * unit)
        );
        for cycle in &opts.highlight {
            let pts: Vec<String> = cycle
                .vertices()
                .iter()
                .map(|v| {
                    let (x, y) = frame.project(*v, false);
                    format!("{},{}", num(x), num(y))
                })
                .collect();
            let _ = writeln!(out, "<polygon points=\"{}\"/>", pts.join(" "));
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out.into_bytes()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Window;
    use crate::stitcher::{generate_design, StitchPattern};

    fn count(svg: &[u8], needle: &str) -> usize {
        String::from_utf8_lossy(svg).matches(needle).count()
    }

    #[test]
    fn empty_design_only_dots() {
        let p = StitchPattern::uniform_word("0").unwrap();
        let d = generate_design(Window::square(0, 0).unwrap(), &p).unwrap();
        let opts = RenderOptions {
            side: RenderSide::Both,
            show_grid_dots: true,
            ..Default::default()
        };
        let svg = to_svg(&d, &opts);
        assert_eq!(count(&svg, "<circle"), 1);
        assert_eq!(count(&svg, "<line"), 0);
    }

    #[test]
    fn one_line_per_segment() {
        let p = StitchPattern::uniform_word("0").unwrap();
        let d = generate_design(Window::square(0, 20).unwrap(), &p).unwrap();
        let svg = to_svg(&d, &RenderOptions::default());
        assert_eq!(count(&svg, "<line"), d.front.len());
        let both = to_svg(
            &d,
            &RenderOptions {
                side: RenderSide::Both,
                ..Default::default()
            },
        );
        assert_eq!(count(&both, "<line"), d.front.len() + d.back.len());
        assert_eq!(svg, to_svg(&d, &RenderOptions::default()));
    }

    #[test]
    fn coordinates_inside_viewbox() {
        let p = StitchPattern::uniform_word("01").unwrap();
        let d = generate_design(Window::new(-5, 9, 3, 12).unwrap(), &p).unwrap();
        for mirror_back in [false, true] {
            let svg = String::from_utf8(to_svg(
                &d,
                &RenderOptions {
                    side: RenderSide::Both,
                    mirror_back,
                    show_grid_dots: true,
                    ..Default::default()
                },
            ))
            .unwrap();
            let vb: Vec<f64> = svg
                .split("viewBox=\"")
                .nth(1)
                .unwrap()
                .split('"')
                .next()
                .unwrap()
                .split(' ')
                .map(|x| x.parse().unwrap())
                .collect();
            for attr in ["x1", "x2", "cx"] {
                for part in svg.split(&format!(" {attr}=\"")).skip(1) {
                    let x: f64 = part.split('"').next().unwrap().parse().unwrap();
                    assert!((0.0..=vb[2]).contains(&x), "{attr}={x}");
                }
            }
            for attr in ["y1", "y2", "cy"] {
                for part in svg.split(&format!(" {attr}=\"")).skip(1) {
                    let y: f64 = part.split('"').next().unwrap().parse().unwrap();
                    assert!((0.0..=vb[3]).contains(&y), "{attr}={y}");
                }
            }
        }
    }

    #[test]
    fn no_negative_zero() {
        assert_eq!(num(-0.00001), "0.0000");
        assert_eq!(num(1.23456), "1.2346");
    }
}
