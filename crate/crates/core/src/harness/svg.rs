use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{HarnessError, Method, SweepResult, SweepRow};

const WIDTH: f64 = 820.0;
const HEIGHT: f64 = 520.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 220.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;
const TICKS: usize = 5;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

struct Series<'a> {
    kicks: usize,
    phi_d: f64,
    method: Method,
    points: Vec<&'a SweepRow>,
}

/// Energy against `kbar`, one polyline per `(kicks, phi_d, method)`.
/// Identical input gives byte-identical output.
pub fn svg_string(result: &SweepResult) -> Result<String, HarnessError> {
    if result.rows.is_empty() {
        return Err(HarnessError::EmptyResult);
    }
    let mut series: Vec<Series> = Vec::new();
    for r in &result.rows {
        match series.iter_mut().find(|s| {
            s.kicks == r.kicks && s.phi_d.to_bits() == r.phi_d.to_bits() && s.method == r.method
        }) {
            Some(s) => s.points.push(r),
            None => series.push(Series {
                kicks: r.kicks,
                phi_d: r.phi_d,
                method: r.method,
                points: vec![r],
            }),
        }
    }
    for s in series.iter_mut() {
        s.points.sort_by(|a, b| a.kbar.total_cmp(&b.kbar));
    }

    let finite = |v: f64| if v.is_finite() { Some(v) } else { None };
    let (x_lo, x_hi) = padded_range(result.rows.iter().map(|r| r.kbar));
    let (y_lo, y_hi) = padded_range(result.rows.iter().filter_map(|r| finite(r.energy)));
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w;
    let sy = |y: f64| TOP + (1.0 - (y - y_lo) / (y_hi - y_lo)) * plot_h;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        s,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );
    for i in 0..=TICKS {
        let t = i as f64 / TICKS as f64;
        let xv = x_lo + t * (x_hi - x_lo);
        let yv = y_lo + t * (y_hi - y_lo);
        let (px, py) = (sx(xv), sy(yv));
        let _ = writeln!(
            s,
            r#"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">{xv:.3}</text>"#,
            TOP + plot_h,
            TOP + plot_h + 5.0,
            TOP + plot_h + 20.0
        );
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{py:.2}" x2="{LEFT}" y2="{py:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{yv:.3}</text>"#,
            LEFT - 5.0,
            LEFT - 8.0,
            py + 4.0
        );
    }
    let subtract = result.manifest.config.subtract_e0;
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">k̄ (effective Planck constant)</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        s,
        r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">{} (recoil units)</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0,
        if subtract { "E − E₀" } else { "E" }
    );

    for (i, ser) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts = ser
            .points
            .iter()
            .filter(|r| r.energy.is_finite())
            .map(|r| format!("{:.2},{:.2}", sx(r.kbar), sy(r.energy)))
            .collect::<Vec<_>>()
            .join(" ");
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>"#
        );
        if ser.points.len() == 1 && ser.points[0].energy.is_finite() {
            let p = ser.points[0];
            let _ = writeln!(
                s,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#,
                sx(p.kbar),
                sy(p.energy)
            );
        }
        let ly = TOP + 10.0 + 18.0 * i as f64;
        let lx = WIDTH - RIGHT + 15.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/><text x="{:.2}" y="{:.2}">{} kicks, φd={}, {}</text>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0,
            ser.kicks,
            ser.phi_d,
            ser.method
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn padded_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo <= f64::EPSILON * hi.abs().max(1.0) {
        let pad = hi.abs().max(1.0) * 0.05;
        return (lo - pad, hi + pad);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

pub fn emit_svg(result: &SweepResult, path: &Path) -> Result<(), HarnessError> {
    let text = svg_string(result)?;
    fs::write(path, text).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })
}
