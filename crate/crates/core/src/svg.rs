//! Static SVG heat map of a grid report with the embedding drawn on top.
//!
//! Cells are filled along a linear RGB ramp from `LOW_COLOR` at the field
//! minimum to `HIGH_COLOR` at the maximum. A constant field uses `LOW_COLOR`
//! throughout. Grid cells are the only `rect` elements in the document.

use std::fmt::Write as _;
use std::path::Path;

use crate::data::Embedding;
use crate::error::Result;
use crate::interpret::GridReport;
use crate::io::write_text;

pub const LOW_COLOR: [u8; 3] = [68, 1, 84];
pub const HIGH_COLOR: [u8; 3] = [253, 231, 37];

const PLOT_SIZE: f64 = 500.0;
const MARGIN: f64 = 40.0;
const LEGEND_WIDTH: f64 = 120.0;

pub fn ramp_color(t: f64) -> String {
    let t = if t.is_finite() { t.clamp(0.0, 1.0) } else { 0.0 };
    let mix = |a: u8, b: u8| (a as f64 + (b as f64 - a as f64) * t).round() as u8;
    format!(
        "#{:02x}{:02x}{:02x}",
        mix(LOW_COLOR[0], HIGH_COLOR[0]),
        mix(LOW_COLOR[1], HIGH_COLOR[1]),
        mix(LOW_COLOR[2], HIGH_COLOR[2])
    )
}

/// Four significant digits.
pub fn legend_number(v: f64) -> String {
    format!("{v:.3e}")
}

pub fn render_heatmap_svg(report: &GridReport, embedding: &Embedding) -> String {
    let grid = &report.grid;
    let r = grid.resolution;
    let step = |a: usize| {
        let s = (grid.max[a] - grid.min[a]) / (r - 1) as f64;
        if s > 0.0 {
            s
        } else {
            1.0
        }
    };
    let (sx, sy) = (step(0), step(1));
    // the plotted extent covers every cell completely
    let x0 = grid.min[0] - sx / 2.0;
    let y0 = grid.min[1] - sy / 2.0;
    let wx = PLOT_SIZE / (sx * r as f64);
    let wy = PLOT_SIZE / (sy * r as f64);
    let px = |x: f64| MARGIN + (x - x0) * wx;
    let py = |y: f64| MARGIN + PLOT_SIZE - (y - y0) * wy;

    let (lo, hi) = report.range();
    let span = hi - lo;
    let width = PLOT_SIZE + 2.0 * MARGIN + LEGEND_WIDTH;
    let height = PLOT_SIZE + 2.0 * MARGIN;

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="{MARGIN}" y="{}" font-family="sans-serif" font-size="14">{}</text>"#,
        MARGIN - 12.0,
        report.field
    )
    .unwrap();

    s.push_str("<g class=\"cells\">\n");
    let cell_w = sx * wx;
    let cell_h = sy * wy;
    for (i, p) in grid.points.iter().enumerate() {
        let v = report.scalar(i);
        let t = if span > 0.0 { (v - lo) / span } else { 0.0 };
        writeln!(
            s,
            r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="{}"/>"#,
            px(p[0] - sx / 2.0),
            py(p[1] + sy / 2.0),
            cell_w,
            cell_h,
            ramp_color(t)
        )
        .unwrap();
    }
    s.push_str("</g>\n<g class=\"points\">\n");
    for row in embedding.rows() {
        writeln!(
            s,
            r#"<circle cx="{:.3}" cy="{:.3}" r="2" fill="white" stroke="black" stroke-width="0.5"/>"#,
            px(row[0]),
            py(row[1])
        )
        .unwrap();
    }
    s.push_str("</g>\n");

    let lx = MARGIN + PLOT_SIZE + 20.0;
    writeln!(
        s,
        r#"<defs><linearGradient id="ramp" x1="0" y1="1" x2="0" y2="0"><stop offset="0" stop-color="{}"/><stop offset="1" stop-color="{}"/></linearGradient></defs>"#,
        ramp_color(0.0),
        ramp_color(1.0)
    )
    .unwrap();
    writeln!(
        s,
        r#"<g class="legend"><path d="M{lx} {MARGIN} h20 v{PLOT_SIZE} h-20 Z" fill="url(#ramp)"/>"#
    )
    .unwrap();
    writeln!(
        s,
        r#"<text class="legend-max" x="{}" y="{}" font-family="sans-serif" font-size="12">{}</text>"#,
        lx + 26.0,
        MARGIN + 10.0,
        legend_number(hi)
    )
    .unwrap();
    writeln!(
        s,
        r#"<text class="legend-min" x="{}" y="{}" font-family="sans-serif" font-size="12">{}</text></g>"#,
        lx + 26.0,
        MARGIN + PLOT_SIZE,
        legend_number(lo)
    )
    .unwrap();
    s.push_str("</svg>\n");
    s
}

pub fn write_svg_heatmap(
    report: &GridReport,
    embedding: &Embedding,
    path: impl AsRef<Path>,
) -> Result<()> {
    write_text(path.as_ref(), &render_heatmap_svg(report, embedding))
}
