//! Deterministic SVG scatter plots of the outcome plane.
//!
//! Pure string assembly, no imaging dependency: the same input and
//! options always produce byte-identical output, which makes the plots
//! usable in golden tests.

use crate::enumeration::{Candidates, LotteryHull, PointCloud};
use crate::model::OutcomePoint;
use crate::rational::rat_to_f64;

#[derive(Debug, Clone)]
pub struct SvgOptions {
    pub width: u32,
    pub height: u32,
    pub show_hull: bool,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions { width: 640, height: 480, show_hull: false }
    }
}

/// One dot on the plot.
#[derive(Debug, Clone)]
pub struct PlotPoint {
    pub x: f64,
    pub y: f64,
    pub on_periphery: bool,
}

/// A labelled marker (solver annotations).
#[derive(Debug, Clone)]
pub struct PlotMarker {
    pub label: String,
    pub x: f64,
    pub y: f64,
}

/// Assemble the plot inputs from an enumerated cloud.
pub fn plot_points(cloud: &PointCloud, candidates: &Candidates) -> Vec<PlotPoint> {
    cloud
        .iter()
        .map(|(p, _)| PlotPoint {
            x: rat_to_f64(&p.u_x),
            y: rat_to_f64(&p.u_y),
            on_periphery: candidates.periphery.contains(p),
        })
        .collect()
}

/// Assemble plot inputs from a raw point list.
pub fn plot_points_raw(points: &[OutcomePoint], candidates: &Candidates) -> Vec<PlotPoint> {
    points
        .iter()
        .map(|p| PlotPoint {
            x: rat_to_f64(&p.u_x),
            y: rat_to_f64(&p.u_y),
            on_periphery: candidates.periphery.contains(p),
        })
        .collect()
}

pub fn hull_polyline(hull: &LotteryHull) -> Vec<(f64, f64)> {
    hull.vertices
        .iter()
        .map(|v| (rat_to_f64(&v.u_x), rat_to_f64(&v.u_y)))
        .collect()
}

struct Frame {
    min_x: f64,
    min_y: f64,
    scale_x: f64,
    scale_y: f64,
    height: f64,
    margin: f64,
}

impl Frame {
    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        (
            self.margin + (x - self.min_x) * self.scale_x,
            self.height - self.margin - (y - self.min_y) * self.scale_y,
        )
    }
}

/// Render the scatter. Points are drawn in the order given, so callers
/// feed them in cloud order to keep the output stable.
pub fn render_svg(
    points: &[PlotPoint],
    hull: Option<&[(f64, f64)]>,
    markers: &[PlotMarker],
    caption: Option<&str>,
    opts: &SvgOptions,
) -> String {
    let margin = 50.0;
    let (width, height) = (opts.width as f64, opts.height as f64);

    let mut min_x: f64 = 0.0;
    let mut max_x: f64 = 0.0;
    let mut min_y: f64 = 0.0;
    let mut max_y: f64 = 0.0;
    let mut extend = |x: f64, y: f64| {
        min_x = min_x.min(x);
        max_x = max_x.max(x);
        min_y = min_y.min(y);
        max_y = max_y.max(y);
    };
    for p in points {
        extend(p.x, p.y);
    }
    if let Some(hull) = hull {
        for &(x, y) in hull {
            extend(x, y);
        }
    }
    for m in markers {
        extend(m.x, m.y);
    }
    let span_x = if max_x > min_x { max_x - min_x } else { 1.0 };
    let span_y = if max_y > min_y { max_y - min_y } else { 1.0 };
    let frame = Frame {
        min_x,
        min_y,
        scale_x: (width - 2.0 * margin) / span_x,
        scale_y: (height - 2.0 * margin) / span_y,
        height,
        margin,
    };

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
        opts.width, opts.height, opts.width, opts.height
    ));
    svg.push_str(&format!(
        "<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n",
        opts.width, opts.height
    ));

    // axes through the origin
    let (ox, oy) = frame.map(0.0, 0.0);
    svg.push_str(&format!(
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#444\" stroke-width=\"1\"/>\n",
        margin, oy, width - margin, oy
    ));
    svg.push_str(&format!(
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#444\" stroke-width=\"1\"/>\n",
        ox, margin, ox, height - margin
    ));
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" fill=\"#444\">u_x</text>\n",
        width - margin + 6.0, oy + 4.0
    ));
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" fill=\"#444\">u_y</text>\n",
        ox - 10.0, margin - 8.0
    ));

    if let Some(hull) = hull {
        if !hull.is_empty() {
            let path: Vec<String> = hull
                .iter()
                .map(|&(x, y)| {
                    let (px, py) = frame.map(x, y);
                    format!("{:.2},{:.2}", px, py)
                })
                .collect();
            svg.push_str(&format!(
                "<polyline points=\"{}\" fill=\"none\" stroke=\"#e08020\" stroke-width=\"1.5\"/>\n",
                path.join(" ")
            ));
        }
    }

    for p in points {
        let (px, py) = frame.map(p.x, p.y);
        if p.on_periphery {
            svg.push_str(&format!(
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"4\" fill=\"#2060c0\"/>\n",
                px, py
            ));
        } else {
            svg.push_str(&format!(
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.5\" fill=\"#9a9a9a\"/>\n",
                px, py
            ));
        }
    }

    for m in markers {
        let (px, py) = frame.map(m.x, m.y);
        svg.push_str(&format!(
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"6\" fill=\"none\" stroke=\"#c03030\" stroke-width=\"2\"/>\n",
            px, py
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" fill=\"#c03030\">{}</text>\n",
            px + 8.0,
            py - 6.0,
            escape(&m.label)
        ));
    }

    if let Some(caption) = caption {
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"13\" fill=\"#222\">{}</text>\n",
            margin,
            height - 16.0,
            escape(caption)
        ));
    }

    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
