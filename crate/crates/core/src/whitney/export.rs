//! Text and SVG export of decompositions.
//!
//! Text format: a header line, one cube per line as
//! `cube <level> <index...> <flags>` where flags is a string over `t`
//! (truncated), `s` (synthetic) or `-`, then one `pair <i> <j>` line per
//! face-adjacent pair with `i < j`.

use std::fmt::Write as _;

use crate::whitney::decompose::{Side, WhitneyDecomposition};

pub fn to_text(dec: &WhitneyDecomposition) -> String {
    let n = dec.grid().dim();
    let mut s = String::new();
    let side = match dec.side() {
        Side::Interior => "interior",
        Side::Exterior => "exterior",
    };
    let _ = writeln!(
        s,
        "whitney {side} dim {n} K {} truncation {} cubes {}",
        dec.grid().level(),
        dec.truncation_level(),
        dec.len()
    );
    for c in dec.cubes() {
        let idx: Vec<String> = c.cube.index[..n].iter().map(|v| v.to_string()).collect();
        let mut flags = String::new();
        if c.truncated {
            flags.push('t');
        }
        if c.synthetic {
            flags.push('s');
        }
        if flags.is_empty() {
            flags.push('-');
        }
        let _ = writeln!(s, "cube {} {} {}", c.cube.level, idx.join(" "), flags);
    }
    for i in 0..dec.len() {
        for &j in dec.neighbors(i) {
            if (i as u32) < j {
                let _ = writeln!(s, "pair {i} {j}");
            }
        }
    }
    s
}

fn level_color(level: i32, lo: i32, hi: i32) -> String {
    let t = if hi > lo { (level - lo) as f64 / (hi - lo) as f64 } else { 0.0 };
    let r = (40.0 + 200.0 * t) as u8;
    let b = (220.0 - 180.0 * t) as u8;
    format!("#{r:02x}60{b:02x}")
}

/// 2D SVG of the cube outlines, colored by level. Empty string in 3D.
pub fn to_svg(dec: &WhitneyDecomposition, size_px: f64) -> String {
    if dec.grid().dim() != 2 {
        return String::new();
    }
    let (blo, bhi) = dec.grid().bbox();
    let ext = (bhi[0] - blo[0]).max(bhi[1] - blo[1]);
    let sc = size_px / ext;
    let lo_level = dec.cubes().iter().map(|c| c.cube.level).min().unwrap_or(0);
    let hi_level = dec.cubes().iter().map(|c| c.cube.level).max().unwrap_or(0);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size_px}" height="{size_px}" viewBox="0 0 {size_px} {size_px}">"#
    );
    for c in dec.cubes() {
        let lo = c.cube.lower();
        let side = c.cube.side() * sc;
        let x = (lo[0] - blo[0]) * sc;
        // flip y so that the picture is upright
        let y = size_px - (lo[1] - blo[1]) * sc - side;
        let fill = if c.truncated { "#dddddd" } else { "none" };
        let _ = writeln!(
            s,
            r#"<rect x="{x:.3}" y="{y:.3}" width="{side:.3}" height="{side:.3}" fill="{fill}" stroke="{}" stroke-width="0.5"/>"#,
            level_color(c.cube.level, lo_level, hi_level)
        );
    }
    s.push_str("</svg>\n");
    s
}
