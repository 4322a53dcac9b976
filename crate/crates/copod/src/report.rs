//! Score tables, explanation TSVs and the dimensional outlier chart.

use std::fmt::Write as _;
use std::io::{self, Write};

use copod_core::{DimensionalScores, ScoreBreakdown};

use crate::csv_io::fmt_f64;

/// `row_index,score,p_l,p_r,p_s`, one line per scored row.
pub fn write_scores_csv(breakdowns: &[ScoreBreakdown], mut out: impl Write) -> io::Result<()> {
    writeln!(out, "row_index,score,p_l,p_r,p_s")?;
    for (i, b) in breakdowns.iter().enumerate() {
        writeln!(
            out,
            "{i},{},{},{},{}",
            fmt_f64(b.score),
            fmt_f64(b.p_l),
            fmt_f64(b.p_r),
            fmt_f64(b.p_s)
        )?;
    }
    out.flush()
}

/// One line per dimension; `dimension` counts from 1.
pub fn write_explain_tsv(names: &[String], scores: &DimensionalScores, mut out: impl Write) -> io::Result<()> {
    writeln!(out, "dimension\tname\tO_d\tband_99\tband_contamination\texceeds_99")?;
    let exceeds = scores.exceeds_99();
    for j in 0..scores.per_dim.len() {
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}",
            j + 1,
            names[j],
            fmt_f64(scores.per_dim[j]),
            fmt_f64(scores.band_99[j]),
            fmt_f64(scores.band_contamination[j]),
            exceeds[j] as u8
        )?;
    }
    out.flush()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 64.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 70.0;

/// Static SVG: the per-dimension scores as a marked line, with the
/// 99th-percentile band (green) and the contamination band (black).
pub fn render_explain_svg(title: &str, names: &[String], scores: &DimensionalScores) -> String {
    let d = scores.per_dim.len();
    let y_max = scores
        .per_dim
        .iter()
        .chain(&scores.band_99)
        .chain(&scores.band_contamination)
        .fold(0.0f64, |a, &b| a.max(b))
        .max(1e-9)
        * 1.1;
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let x_at = |j: usize| {
        if d == 1 {
            LEFT + plot_w / 2.0
        } else {
            LEFT + plot_w * j as f64 / (d - 1) as f64
        }
    };
    let y_at = |v: f64| TOP + plot_h * (1.0 - v / y_max);
    let polyline = |vals: &[f64]| {
        vals.iter()
            .enumerate()
            .map(|(j, &v)| format!("{:.2},{:.2}", x_at(j), y_at(v)))
            .collect::<Vec<_>>()
            .join(" ")
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="22" text-anchor="middle" font-size="15">{}</text>"#,
        LEFT + plot_w / 2.0,
        escape(title)
    );
    // axes
    let _ = writeln!(
        svg,
        r#"<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{:.2}" stroke="black"/>"#,
        TOP + plot_h
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{LEFT}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black"/>"#,
        TOP + plot_h,
        LEFT + plot_w,
        TOP + plot_h
    );
    for k in 0..=5 {
        let v = y_max * k as f64 / 5.0;
        let y = y_at(v);
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{LEFT}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{v:.2}</text>"#,
            LEFT - 4.0,
            LEFT - 7.0,
            y + 4.0
        );
    }
    for (j, name) in names.iter().enumerate().take(d) {
        let x = x_at(j);
        let y = TOP + plot_h;
        let _ = writeln!(
            svg,
            r#"<line x1="{x:.2}" y1="{y:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="end" transform="rotate(-35 {x:.2} {:.2})">{} ({})</text>"#,
            y + 4.0,
            y + 16.0,
            y + 16.0,
            j + 1,
            escape(name)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{:.2}" transform="rotate(-90 16 {:.2})" text-anchor="middle">dimensional outlier score</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    );

    let _ = writeln!(
        svg,
        r#"<polyline points="{}" fill="none" stroke="green" stroke-width="1.5" stroke-dasharray="6 3"/>"#,
        polyline(&scores.band_99)
    );
    let _ = writeln!(
        svg,
        r#"<polyline points="{}" fill="none" stroke="black" stroke-width="1.5" stroke-dasharray="2 3"/>"#,
        polyline(&scores.band_contamination)
    );
    let _ = writeln!(
        svg,
        r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="2"/>"#,
        polyline(&scores.per_dim)
    );
    for (j, (&v, hit)) in scores.per_dim.iter().zip(scores.exceeds_99()).enumerate() {
        let fill = if hit { "crimson" } else { "steelblue" };
        let _ = writeln!(
            svg,
            r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="{fill}"/>"#,
            x_at(j),
            y_at(v)
        );
    }

    let lx = WIDTH - RIGHT + 14.0;
    let legend = [
        ("steelblue", "", "O_d(x)".to_string()),
        ("green", "6 3", "99th percentile".to_string()),
        (
            "black",
            "2 3",
            format!("{:.2}th percentile", (1.0 - scores.contamination) * 100.0),
        ),
    ];
    for (k, (color, dash, label)) in legend.iter().enumerate() {
        let y = TOP + 10.0 + 20.0 * k as f64;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{color}" stroke-width="2" stroke-dasharray="{dash}"/><text x="{:.2}" y="{:.2}">{}</text>"#,
            lx + 22.0,
            lx + 28.0,
            y + 4.0,
            escape(label)
        );
    }
    svg.push_str("</svg>\n");
    svg
}
