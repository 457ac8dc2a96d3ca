//! Stage-by-cue SVG heatmap.

use std::fmt::Write;

use dpc_core::harness::TrajectoryRecord;
use dpc_core::Result;

const CELL_W: usize = 80;
const CELL_H: usize = 28;
const LEFT: usize = 64;
const TOP: usize = 40;
const LEGEND_H: usize = 48;
pub const CUE_LABELS: [&str; 4] = ["A_hat", "P_hat", "C_hat", "D_hat"];

/// Grid of `maps[cue][stage]`, one column per cue. Opacity is the value
/// min-max scaled within its column; a constant column is drawn at 0.5.
pub fn render_maps(title: &str, maps: &[Vec<f64>; 4]) -> String {
    let n = maps[0].len();
    let width = LEFT + 4 * CELL_W + 16;
    let height = TOP + n * CELL_H + LEGEND_H;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="monospace" font-size="11">"#
    );
    let _ = writeln!(s, r#"<text x="{LEFT}" y="16">{}</text>"#, escape(title));
    for (c, label) in CUE_LABELS.iter().enumerate() {
        let _ = writeln!(s, r#"<text x="{}" y="{}">{label}</text>"#, LEFT + c * CELL_W + 4, TOP - 6);
    }
    for l in 0..n {
        let _ = writeln!(s, r#"<text x="4" y="{}">stage {}</text>"#, TOP + l * CELL_H + CELL_H / 2 + 4, l + 1);
    }
    for (c, col) in maps.iter().enumerate() {
        let lo = col.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = col.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        for (l, v) in col.iter().enumerate() {
            let opacity = if hi - lo > 0.0 { (v - lo) / (hi - lo) } else { 0.5 };
            let _ = writeln!(
                s,
                r##"<rect x="{}" y="{}" width="{CELL_W}" height="{CELL_H}" fill="#1f4e99" fill-opacity="{opacity:.4}" stroke="#888888" stroke-width="0.5"><title>{v:.6}</title></rect>"##,
                LEFT + c * CELL_W,
                TOP + l * CELL_H
            );
        }
        let y = TOP + n * CELL_H + 16;
        let _ = writeln!(s, r#"<text x="{}" y="{y}">min {lo:.3}</text>"#, LEFT + c * CELL_W + 4);
        let _ = writeln!(s, r#"<text x="{}" y="{}">max {hi:.3}</text>"#, LEFT + c * CELL_W + 4, y + 14);
    }
    s.push_str("</svg>\n");
    s
}

pub fn render_heatmap(record: &TrajectoryRecord) -> Result<String> {
    if record.entries.is_empty() {
        return Err(dpc_core::Error::Contract("trajectory record is empty".into()));
    }
    let title = format!("{} ({} seeds)", record.condition.label(), record.entries.len());
    Ok(render_maps(&title, &record.maps()))
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
