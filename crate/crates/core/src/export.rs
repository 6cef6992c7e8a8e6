//! CSV and SVG renderings of an [`EnvelopeResult`].

use std::fmt::Write as _;
use std::io;
use std::path::Path;

use crate::envelope::EnvelopeResult;

pub const CSV_HEADER: &str =
    "alpha,z_lower,z_upper,certified_min,certified_max,n_candidates_min,n_candidates_max,repair";

/// `v` with 12 significant digits in the style of C's `%.12g`.
pub fn format_g12(v: f64) -> String {
    format_g(v, 12)
}

fn format_g(v: f64, digits: usize) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_owned()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// One row per level, ascending α, LF line endings.
pub fn envelope_csv(result: &EnvelopeResult) -> String {
    let mut out = String::with_capacity(64 * (result.levels.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    let rows = result
        .levels
        .iter()
        .zip(result.z_lower.values())
        .zip(result.z_upper.values());
    for ((d, &lo), &hi) in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            format_g12(d.alpha),
            format_g12(lo),
            format_g12(hi),
            d.certified_min,
            d.certified_max,
            d.n_candidates_min,
            d.n_candidates_max,
            format_g12(d.repair)
        )
        .expect("write to string");
    }
    out
}

pub fn write_envelope_csv(result: &EnvelopeResult, path: impl AsRef<Path>) -> io::Result<()> {
    std::fs::write(path, envelope_csv(result))
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 56.0;

/// Membership-style plot: value on the horizontal axis, α on the vertical.
pub fn envelope_svg(result: &EnvelopeResult) -> String {
    let alphas = result.grid().levels();
    let lower = result.z_lower.values();
    let upper = result.z_upper.values();
    let mut lo = lower.iter().chain(upper).copied().fold(f64::INFINITY, f64::min);
    let mut hi = lower.iter().chain(upper).copied().fold(f64::NEG_INFINITY, f64::max);
    if hi - lo < 1e-12 {
        lo -= 0.5;
        hi += 0.5;
    }
    let pad = 0.05 * (hi - lo);
    let (lo, hi) = (lo - pad, hi + pad);
    let plot_w = WIDTH - 2.0 * MARGIN;
    let plot_h = HEIGHT - 2.0 * MARGIN;
    let sx = |v: f64| MARGIN + (v - lo) / (hi - lo) * plot_w;
    let sy = |a: f64| HEIGHT - MARGIN - a * plot_h;
    let polyline = |values: &[f64]| {
        values
            .iter()
            .zip(alphas)
            .map(|(&v, &a)| format!("{:.3},{:.3}", sx(v), sy(a)))
            .collect::<Vec<_>>()
            .join(" ")
    };

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )
    .unwrap();
    s.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    let (x0, x1, y0, y1) = (MARGIN, WIDTH - MARGIN, HEIGHT - MARGIN, MARGIN);
    writeln!(s, r#"<g class="axes" stroke="black" stroke-width="1">"#).unwrap();
    writeln!(s, r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}"/>"#).unwrap();
    writeln!(s, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}"/>"#).unwrap();
    for k in 0..=4 {
        let t = k as f64 / 4.0;
        let (x, y) = (x0 + t * plot_w, y0 - t * plot_h);
        writeln!(s, r#"<line x1="{x:.3}" y1="{y0}" x2="{x:.3}" y2="{:.3}"/>"#, y0 + 5.0).unwrap();
        writeln!(s, r#"<line x1="{x0}" y1="{y:.3}" x2="{:.3}" y2="{y:.3}"/>"#, x0 - 5.0).unwrap();
    }
    s.push_str("</g>\n");
    writeln!(s, r#"<g class="labels" font-family="sans-serif" font-size="12">"#).unwrap();
    for k in 0..=4 {
        let t = k as f64 / 4.0;
        let (x, y) = (x0 + t * plot_w, y0 - t * plot_h);
        let value = format_g(lo + t * (hi - lo), 4);
        writeln!(s, r#"<text x="{x:.3}" y="{:.3}" text-anchor="middle">{value}</text>"#, y0 + 20.0).unwrap();
        writeln!(s, r#"<text x="{:.3}" y="{:.3}" text-anchor="end">{t}</text>"#, x0 - 8.0, y + 4.0).unwrap();
    }
    writeln!(s, r#"<text x="{:.3}" y="{:.3}" text-anchor="middle">value</text>"#, WIDTH / 2.0, HEIGHT - 12.0).unwrap();
    writeln!(s, r#"<text x="16" y="{:.3}" text-anchor="middle">α</text>"#, HEIGHT / 2.0).unwrap();
    s.push_str("</g>\n");
    writeln!(
        s,
        r#"<polyline class="z-lower" fill="none" stroke="steelblue" stroke-width="2" points="{}"/>"#,
        polyline(lower)
    )
    .unwrap();
    writeln!(
        s,
        r#"<polyline class="z-upper" fill="none" stroke="firebrick" stroke-width="2" points="{}"/>"#,
        polyline(upper)
    )
    .unwrap();
    s.push_str("</svg>\n");
    s
}

pub fn write_plot_svg(result: &EnvelopeResult, path: impl AsRef<Path>) -> io::Result<()> {
    std::fs::write(path, envelope_svg(result))
}
