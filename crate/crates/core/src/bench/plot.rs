use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use super::{Method, Row};
use crate::error::Result;

const W: f64 = 720.0;
const H: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 50.0;
const FLOOR: f64 = 1e-17;
const COLORS: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"];

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

/// Median relative spectral error per total sample size, for each method.
pub fn median_curves(rows: &[Row]) -> BTreeMap<Method, Vec<(f64, f64)>> {
    let mut groups: BTreeMap<Method, BTreeMap<usize, Vec<f64>>> = BTreeMap::new();
    for r in rows {
        if let Some(e) = r.rel_err_spectral {
            groups.entry(r.method).or_default().entry(r.total_samples).or_default().push(e);
        }
    }
    groups
        .into_iter()
        .map(|(m, by_s)| (m, by_s.into_iter().map(|(s, mut e)| (s as f64, median(&mut e))).collect()))
        .collect()
}

/// Single-panel SVG of log relative error against `S`, one polyline per
/// method, plus `sigma_{k+1}/sigma_1` against rank `k` when `svd` is given.
pub fn svg_plot(rows: &[Row], svd: Option<&[f64]>) -> String {
    let mut curves: Vec<(String, Vec<(f64, f64)>)> =
        median_curves(rows).into_iter().map(|(m, c)| (m.to_string(), c)).collect();
    let x_max = curves.iter().flat_map(|(_, c)| c.iter().map(|p| p.0)).fold(1.0, f64::max);
    if let Some(s) = svd {
        let pts: Vec<(f64, f64)> =
            s.iter().enumerate().skip(1).map(|(k, &v)| (k as f64, v)).take_while(|p| p.0 <= x_max).collect();
        curves.push(("svd".to_string(), pts));
    }
    let ys = curves.iter().flat_map(|(_, c)| c.iter().map(|p| p.1.max(FLOOR).log10()));
    let (lo, hi) = ys.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), y| (a.min(y), b.max(y)));
    let (lo, hi) = if lo.is_finite() { (lo.floor(), hi.ceil().max(lo.floor() + 1.0)) } else { (-16.0, 0.0) };
    let pw = W - LEFT - RIGHT;
    let ph = H - TOP - BOTTOM;
    let px = |x: f64| LEFT + pw * x / x_max;
    let py = |y: f64| TOP + ph * (hi - y.max(FLOOR).log10()) / (hi - lo);

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<g font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(s, r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#);
    let mut e = lo as i64;
    let step = (((hi - lo) / 8.0).ceil() as i64).max(1);
    while e <= hi as i64 {
        let y = TOP + ph * (hi - e as f64) / (hi - lo);
        let _ = writeln!(s, r##"<line x1="{LEFT}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="#ddd"/>"##, LEFT + pw);
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">1e{e}</text>"#, LEFT - 6.0, y + 4.0);
        e += step;
    }
    for k in 0..=5 {
        let x = x_max * k as f64 / 5.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{:.0}</text>"#,
            px(x),
            TOP + ph + 18.0,
            x
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">total samples S (svd: rank k)</text>"#,
        LEFT + pw / 2.0,
        H - 10.0
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">relative error</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0
    );
    for (i, (name, pts)) in curves.iter().enumerate() {
        let color = if name == "svd" { "black" } else { COLORS[i % COLORS.len()] };
        let dash = if name == "svd" { r#" stroke-dasharray="6 4""# } else { "" };
        let path: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.1},{:.1}", px(x), py(y))).collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5"{dash} points="{}"/>"#,
            path.join(" ")
        );
        for &(x, y) in pts.iter().filter(|_| name != "svd") {
            let _ = writeln!(s, r#"<circle cx="{:.1}" cy="{:.1}" r="2.5" fill="{color}"/>"#, px(x), py(y));
        }
        let ly = TOP + 16.0 + 18.0 * i as f64;
        let lx = LEFT + pw + 12.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="2"{dash}/>"#,
            lx + 24.0
        );
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}">{name}</text>"#, lx + 30.0, ly + 4.0);
    }
    s.push_str("</g>\n</svg>\n");
    s
}

pub fn emit_svg_plot(rows: &[Row], svd: Option<&[f64]>, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, svg_plot(rows, svd))?;
    Ok(())
}
