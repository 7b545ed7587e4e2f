//! Self-contained SVG line plot of a distance-frequency series.

use std::fmt::Write;
use std::path::Path;

use jumpga_core::experiments::Figure1Series;

use crate::error::{CliError, Result};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 64.0;
const RIGHT: f64 = 120.0;
const TOP: f64 = 24.0;
const BOTTOM: f64 = 48.0;
/// Points per line above which the series is thinned.
const MAX_POINTS: usize = 2000;
const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

/// "Nice" tick step near `span / 5`.
fn tick_step(span: f64) -> f64 {
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let nice = if norm <= 1.0 {
        1.0
    } else if norm <= 2.0 {
        2.0
    } else if norm <= 5.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn sample_indices(len: usize) -> Vec<usize> {
    if len <= MAX_POINTS {
        return (0..len).collect();
    }
    let step = len.div_ceil(MAX_POINTS);
    let mut idx: Vec<usize> = (0..len).step_by(step).collect();
    if *idx.last().unwrap() != len - 1 {
        idx.push(len - 1);
    }
    idx
}

pub fn render_svg_string(series: &Figure1Series) -> String {
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let x_max = series.iterations.last().copied().unwrap_or(0).max(1) as f64;
    let px = |t: f64| LEFT + plot_w * t / x_max;
    let py = |v: f64| TOP + plot_h * (1.0 - v);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        s,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );

    for i in 0..=5 {
        let v = i as f64 / 5.0;
        let y = py(v);
        let _ = writeln!(
            s,
            r##"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#dddddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">{v:.1}</text>"##,
            LEFT + plot_w,
            LEFT - 6.0,
            y + 4.0
        );
    }
    if series.len() == 1 {
        let x = px(series.iterations[0] as f64);
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            TOP + plot_h + 18.0,
            series.iterations[0]
        );
    } else if !series.is_empty() {
        let step = tick_step(x_max);
        for t in (0..).map(|i| i as f64 * step).take_while(|&t| t <= x_max) {
            let _ = writeln!(
                s,
                r#"<line x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{y1:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{t}</text>"#,
                TOP + plot_h + 18.0,
                x = px(t),
                y0 = TOP + plot_h,
                y1 = TOP + plot_h + 5.0,
            );
        }
    }
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">iteration</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 10.0
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">relative frequency</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    );

    let idx = sample_indices(series.len());
    for j in 0..series.columns() {
        let color = PALETTE[j % PALETTE.len()];
        let mut points = String::new();
        for &i in &idx {
            let _ = write!(
                points,
                "{:.2},{:.2} ",
                px(series.iterations[i] as f64),
                py(series.row(i)[j])
            );
        }
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            points.trim_end()
        );
        let ly = TOP + 16.0 + 18.0 * j as f64;
        let lx = WIDTH - RIGHT + 12.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{ly}" x2="{:.2}" y2="{ly}" stroke="{color}" stroke-width="3"/><text x="{:.2}" y="{:.2}">d = {}</text>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0,
            2 * j
        );
    }
    s.push_str("</svg>\n");
    s
}

pub fn render_svg(series: &Figure1Series, path: &Path) -> Result<()> {
    std::fs::write(path, render_svg_string(series)).map_err(|e| CliError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(rows: usize) -> Figure1Series {
        let mut s = Figure1Series::empty(5);
        for i in 0..rows {
            let a = 1.0 / (1.0 + i as f64);
            s.push(i as u64 * 3, &[a, 1.0 - a, 0.0, 0.0, 0.0, 0.0]);
        }
        s
    }

    #[test]
    fn one_line_per_distance_class() {
        let svg = render_svg_string(&series(50));
        assert_eq!(svg.matches("<polyline").count(), 6);
        assert!(svg.contains("d = 10"));
        assert!(!svg.contains("href"));
        assert_eq!(svg, render_svg_string(&series(50)));
    }

    #[test]
    fn single_snapshot_has_one_tick() {
        let svg = render_svg_string(&series(1));
        assert_eq!(svg.matches("text-anchor=\"middle\">0</text>").count(), 1);
    }

    #[test]
    fn long_series_are_thinned() {
        assert_eq!(sample_indices(10).len(), 10);
        let idx = sample_indices(10_001);
        assert!(idx.len() <= MAX_POINTS + 1);
        assert_eq!(*idx.last().unwrap(), 10_000);
        assert_eq!(tick_step(1000.0), 200.0);
        assert_eq!(tick_step(7.0), 2.0);
    }
}
