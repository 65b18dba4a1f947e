//! Static single-file SVG charts: a categorical strip plot of homogeneity
//! scores, a register-profile scatter plot, and a similarity heatmap with its
//! Ward dendrogram. Output contains no scripts or external references.

use std::fmt::Write;

use crate::analysis::{Dendrogram, RegisterProfile};

const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn open(out: &mut String, width: f64, height: f64, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{width}" height="{height}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="16">{}</text>"#,
        width / 2.0,
        escape(title)
    );
}

/// Padded `[min, max]` over `values`, never degenerate.
fn extent(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return (-1.0, 1.0);
    }
    let pad = ((hi - lo) * 0.05).max(0.05);
    (lo - pad, hi + pad)
}

/// Round tick values covering `[lo, hi]`, about five of them.
fn nice_ticks(lo: f64, hi: f64) -> Vec<f64> {
    let range = hi - lo;
    let mag = 10f64.powf((range / 7.0).log10().floor());
    let step = [1.0, 2.0, 2.5, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| range / s <= 7.0)
        .unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|i| i as f64 * step).collect()
}

fn ticks(out: &mut String, lo: f64, hi: f64, vertical: bool, scale: impl Fn(f64) -> f64) {
    for v in nice_ticks(lo, hi) {
        let p = scale(v);
        let label = format!("{}", (v * 1e6).round() / 1e6);
        if vertical {
            let _ = writeln!(
                out,
                r##"<line x1="{MARGIN}" y1="{p:.2}" x2="{:.2}" y2="{p:.2}" stroke="#e0e0e0"/><text x="{:.2}" y="{:.2}" text-anchor="end">{label}</text>"##,
                WIDTH - MARGIN,
                MARGIN - 6.0,
                p + 4.0
            );
        } else {
            let _ = writeln!(
                out,
                r##"<line x1="{p:.2}" y1="{MARGIN}" x2="{p:.2}" y2="{:.2}" stroke="#e0e0e0"/><text x="{p:.2}" y="{:.2}" text-anchor="middle">{label}</text>"##,
                HEIGHT - MARGIN,
                HEIGHT - MARGIN + 16.0
            );
        }
    }
}

fn axis_labels(out: &mut String, x_label: &str, y_label: &str) {
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 14.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{y}" text-anchor="middle" transform="rotate(-90 16 {y})">{}</text>"#,
        escape(y_label),
        y = HEIGHT / 2.0
    );
}

/// Deterministic jitter in [-0.5, 0.5) from an index.
fn jitter(i: usize) -> f64 {
    let mut x = (i as u64).wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^= x >> 31;
    (x >> 11) as f64 / (1u64 << 53) as f64 - 0.5
}

/// One jittered column of points per group, with the group mean marked.
pub fn strip_plot(title: &str, y_label: &str, groups: &[(String, Vec<f64>)]) -> String {
    let mut out = String::new();
    open(&mut out, WIDTH, HEIGHT, title);
    let (lo, hi) = extent(groups.iter().flat_map(|(_, v)| v.iter().copied()));
    let y = |v: f64| HEIGHT - MARGIN - (v - lo) / (hi - lo) * (HEIGHT - 2.0 * MARGIN);
    ticks(&mut out, lo, hi, true, y);
    let band = (WIDTH - 2.0 * MARGIN) / groups.len().max(1) as f64;
    for (g, (name, values)) in groups.iter().enumerate() {
        let color = PALETTE[g % PALETTE.len()];
        let center = MARGIN + band * (g as f64 + 0.5);
        let _ = writeln!(out, r#"<g fill="{color}" fill-opacity="0.6">"#);
        for (i, &v) in values.iter().enumerate() {
            let cx = center + jitter(i + 7919 * g) * band * 0.6;
            let _ = writeln!(out, r#"<circle cx="{cx:.2}" cy="{:.2}" r="3"/>"#, y(v));
        }
        out.push_str("</g>\n");
        if !values.is_empty() {
            let mean = values.iter().sum::<f64>() / values.len() as f64;
            let _ = writeln!(
                out,
                r##"<line x1="{:.2}" y1="{my:.2}" x2="{:.2}" y2="{my:.2}" stroke="#000" stroke-width="2"/>"##,
                center - band * 0.35,
                center + band * 0.35,
                my = y(mean)
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{center:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            HEIGHT - MARGIN + 16.0,
            escape(name)
        );
    }
    axis_labels(&mut out, "corpus", y_label);
    out.push_str("</svg>\n");
    out
}

/// Profile points, x = similarity to WK, y = similarity to TW, colored by source.
pub fn profile_scatter(title: &str, profile: &RegisterProfile) -> String {
    let mut sources: Vec<&str> = Vec::new();
    for p in &profile.points {
        if !sources.contains(&p.source_corpus_id.as_str()) {
            sources.push(&p.source_corpus_id);
        }
    }
    let mut out = String::new();
    open(&mut out, WIDTH, HEIGHT, title);
    let (xlo, xhi) = extent(profile.points.iter().map(|p| p.z_to_wk));
    let (ylo, yhi) = extent(profile.points.iter().map(|p| p.z_to_tw));
    let x = |v: f64| MARGIN + (v - xlo) / (xhi - xlo) * (WIDTH - 2.0 * MARGIN);
    let y = |v: f64| HEIGHT - MARGIN - (v - ylo) / (yhi - ylo) * (HEIGHT - 2.0 * MARGIN);
    ticks(&mut out, ylo, yhi, true, y);
    ticks(&mut out, xlo, xhi, false, x);
    for (s, name) in sources.iter().enumerate() {
        let color = PALETTE[s % PALETTE.len()];
        let _ = writeln!(out, r#"<g fill="{color}" fill-opacity="0.6">"#);
        for p in profile.points.iter().filter(|p| p.source_corpus_id == *name) {
            let _ = writeln!(out, r#"<circle cx="{:.2}" cy="{:.2}" r="3"/>"#, x(p.z_to_wk), y(p.z_to_tw));
        }
        out.push_str("</g>\n");
        let ly = MARGIN + 16.0 * s as f64;
        let _ = writeln!(
            out,
            r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="{color}"/><text x="{:.2}" y="{:.2}">{}</text>"#,
            WIDTH - MARGIN - 90.0,
            ly - 4.0,
            WIDTH - MARGIN - 82.0,
            ly,
            escape(name)
        );
    }
    axis_labels(
        &mut out,
        "standardized similarity to WK",
        "standardized similarity to TW",
    );
    out.push_str("</svg>\n");
    out
}

fn heat_color(v: f64, lo: f64, hi: f64) -> String {
    let t = if hi > lo { ((v - lo) / (hi - lo)).clamp(0.0, 1.0) } else { 1.0 };
    // white to dark blue
    let r = (255.0 * (1.0 - t) + 8.0 * t).round() as u8;
    let g = (255.0 * (1.0 - t) + 48.0 * t).round() as u8;
    let b = (255.0 * (1.0 - t) + 107.0 * t).round() as u8;
    format!("#{r:02x}{g:02x}{b:02x}")
}

/// Similarity heatmap in dendrogram leaf order with the tree drawn above it.
pub fn cluster_heatmap(title: &str, dendrogram: &Dendrogram) -> String {
    let n = dendrogram.leaves.len();
    let order = dendrogram.leaf_order();
    let label_w = 120.0;
    let tree_h = 140.0;
    let cell = (480.0 / n.max(1) as f64).min(40.0);
    let left = MARGIN + label_w;
    let top = 40.0 + tree_h;
    let width = (left + cell * n as f64 + MARGIN).max(left + 220.0);
    let height = top + cell * n as f64 + MARGIN;
    let mut out = String::new();
    open(&mut out, width, height, title);

    let values = dendrogram.matrix.iter().flatten().copied();
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| (l.min(v), h.max(v)));
    for (r, &i) in order.iter().enumerate() {
        for (c, &j) in order.iter().enumerate() {
            let v = dendrogram.matrix.get(i).and_then(|row| row.get(j)).copied().unwrap_or(f64::NAN);
            let _ = writeln!(
                out,
                r#"<rect x="{:.2}" y="{:.2}" width="{cell:.2}" height="{cell:.2}" fill="{}"><title>{} / {}: {v:.4}</title></rect>"#,
                left + c as f64 * cell,
                top + r as f64 * cell,
                heat_color(v, lo, hi),
                escape(&dendrogram.leaves[i]),
                escape(&dendrogram.leaves[j])
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            left - 6.0,
            top + (r as f64 + 0.5) * cell + 4.0,
            escape(&dendrogram.leaves[i])
        );
    }

    let _ = writeln!(
        out,
        r#"<text x="{left:.2}" y="{:.2}">rho {lo:.3}</text><rect x="{:.2}" y="{:.2}" width="80" height="10" fill="url(#heat)"/><text x="{:.2}" y="{:.2}">{hi:.3}</text>"#,
        top + cell * n as f64 + 22.0,
        left + 70.0,
        top + cell * n as f64 + 13.0,
        left + 156.0,
        top + cell * n as f64 + 22.0
    );
    let _ = writeln!(
        out,
        r#"<defs><linearGradient id="heat"><stop offset="0" stop-color="{}"/><stop offset="1" stop-color="{}"/></linearGradient></defs>"#,
        heat_color(lo, lo, hi),
        heat_color(hi, lo, hi)
    );

    // tree: x from leaf position, y from merge height
    let max_h = dendrogram.merges.iter().map(|m| m.height).fold(0.0, f64::max).max(1e-12);
    let mut pos = vec![(0.0, 0.0); n + dendrogram.merges.len()];
    for (r, &i) in order.iter().enumerate() {
        pos[i] = (left + (r as f64 + 0.5) * cell, top - 4.0);
    }
    out.push_str(r##"<g stroke="#333" fill="none">"##);
    out.push('\n');
    for (s, m) in dendrogram.merges.iter().enumerate() {
        let (xa, ya) = pos[m.node_a];
        let (xb, yb) = pos[m.node_b];
        let yh = top - 4.0 - (m.height.max(0.0) / max_h) * (tree_h - 10.0);
        let _ = writeln!(
            out,
            r#"<polyline points="{xa:.2},{ya:.2} {xa:.2},{yh:.2} {xb:.2},{yh:.2} {xb:.2},{yb:.2}"/>"#
        );
        pos[n + s] = ((xa + xb) / 2.0, yh);
    }
    out.push_str("</g>\n</svg>\n");
    out
}
