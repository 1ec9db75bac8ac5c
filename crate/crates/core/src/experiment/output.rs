//! CSV and SVG artifacts.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use crate::error::Result;
use crate::fv::Grid1D;
use crate::integrator::{RunRecord, Snapshot};
use crate::model::NEURITES;

pub const SERIES_HEADER: &str = "time,L1,L2,lambda_som,lambda1,lambda2,mass_residual";
pub const SNAPSHOT_HEADER: &str = "y,x1,f_plus1,f_minus1,x2,f_plus2,f_minus2";

/// 17 significant digits, round-trip exact.
fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Series rows; the time column is `step * tau`, never an accumulated sum.
pub fn series_csv(record: &RunRecord) -> String {
    let mut out = String::with_capacity(128 * (record.len() + 1));
    out.push_str(SERIES_HEADER);
    out.push('\n');
    for i in 0..record.len() {
        let t = record.steps[i] as f64 * record.tau;
        let row = [
            t,
            record.lengths[0][i],
            record.lengths[1][i],
            record.lambda_som[i],
            record.lambda[0][i],
            record.lambda[1][i],
            record.mass_residual[i],
        ];
        let cells: Vec<String> = row.iter().map(|v| num(*v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn snapshot_csv(snap: &Snapshot) -> String {
    let n = snap.fields[0].n_cells();
    let grid = Grid1D::new(n).expect("snapshot grids have at least two cells");
    let mut out = String::new();
    out.push_str(SNAPSHOT_HEADER);
    out.push('\n');
    for (k, y) in grid.centers().iter().enumerate() {
        let mut cells = vec![num(*y)];
        for j in 0..NEURITES {
            cells.push(num(y * snap.lengths[j]));
            cells.push(num(snap.fields[j].f_plus[k]));
            cells.push(num(snap.fields[j].f_minus[k]));
        }
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// `snapshot_<t>.csv` with `t = step * tau` printed without trailing zeros.
pub fn snapshot_file_name(snap: &Snapshot, tau: f64) -> String {
    let t = format!("{:.6}", snap.step as f64 * tau);
    let t = t.trim_end_matches('0').trim_end_matches('.');
    format!("snapshot_{t}.csv")
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(contents.as_bytes())?;
    Ok(())
}

/// Writes `series.csv` and one file per snapshot; returns the snapshot paths.
pub fn write_csv_artifacts(dir: &Path, record: &RunRecord) -> Result<Vec<PathBuf>> {
    write_file(&dir.join("series.csv"), &series_csv(record))?;
    let mut paths = Vec::new();
    for snap in &record.snapshots {
        let path = dir.join(snapshot_file_name(snap, record.tau));
        write_file(&path, &snapshot_csv(snap))?;
        paths.push(path);
    }
    Ok(paths)
}

const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/// A named polyline.
pub struct Line<'a> {
    pub label: &'a str,
    pub x: &'a [f64],
    pub y: &'a [f64],
}

/// Minimal line chart with axes, tick labels at the extremes and a legend.
pub fn line_chart(title: &str, x_label: &str, lines: &[Line]) -> String {
    let (w, h, margin) = (640.0, 400.0, 60.0);
    let finite = |v: &&f64| v.is_finite();
    let xs = lines.iter().flat_map(|l| l.x.iter()).filter(finite);
    let ys = lines.iter().flat_map(|l| l.y.iter()).filter(finite);
    let (x0, x1) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(*v), b.max(*v)));
    let (mut y0, mut y1) = ys.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(*v), b.max(*v)));
    if !(y1 > y0) {
        y0 -= 0.5;
        y1 += 0.5;
    }
    let x_span = if x1 > x0 { x1 - x0 } else { 1.0 };
    let px = |x: f64| margin + (x - x0) / x_span * (w - 2.0 * margin);
    let py = |y: f64| h - margin - (y - y0) / (y1 - y0) * (h - 2.0 * margin);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{title}</text>"#, w / 2.0);
    let _ = writeln!(
        s,
        r#"<path d="M{m} {t} V{b} H{r}" stroke="black" fill="none"/>"#,
        m = margin,
        t = margin,
        b = h - margin,
        r = w - margin
    );
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{x_label}</text>"#, w / 2.0, h - 15.0);
    for (v, anchor, x) in [(x0, "start", margin), (x1, "end", w - margin)] {
        let _ = writeln!(s, r#"<text x="{x}" y="{}" text-anchor="{anchor}">{}</text>"#, h - margin + 15.0, short(v));
    }
    for v in [y0, y1] {
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#, margin - 5.0, py(v) + 4.0, short(v));
    }
    for (i, line) in lines.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let mut d = String::new();
        for (k, (x, y)) in line.x.iter().zip(line.y).enumerate() {
            if !(x.is_finite() && y.is_finite()) {
                continue;
            }
            let _ = write!(d, "{}{:.2} {:.2} ", if k == 0 { "M" } else { "L" }, px(*x), py(*y));
        }
        let _ = writeln!(s, r#"<path d="{}" stroke="{color}" fill="none" stroke-width="1.5"/>"#, d.trim_end());
        let ly = margin + 16.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{ly}" fill="{color}" text-anchor="end">{}</text>"#,
            w - margin - 5.0,
            line.label
        );
    }
    s.push_str("</svg>\n");
    s
}

fn short(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e4 || v.abs() < 1e-3) {
        format!("{v:.3e}")
    } else {
        format!("{v:.4}")
    }
}

/// Lengths and pools over time, and every density snapshot.
pub fn write_svg_artifacts(dir: &Path, record: &RunRecord) -> Result<()> {
    let t: Vec<f64> = record.steps.iter().map(|s| *s as f64 * record.tau).collect();
    let lengths = line_chart(
        "Neurite lengths",
        "t",
        &[
            Line { label: "L1", x: &t, y: &record.lengths[0] },
            Line { label: "L2", x: &t, y: &record.lengths[1] },
        ],
    );
    write_file(&dir.join("lengths.svg"), &lengths)?;
    let pools = line_chart(
        "Vesicle pools",
        "t",
        &[
            Line { label: "soma", x: &t, y: &record.lambda_som },
            Line { label: "cone 1", x: &t, y: &record.lambda[0] },
            Line { label: "cone 2", x: &t, y: &record.lambda[1] },
        ],
    );
    write_file(&dir.join("pools.svg"), &pools)?;
    for snap in &record.snapshots {
        let n = snap.fields[0].n_cells();
        let grid = Grid1D::new(n)?;
        let x: [Vec<f64>; NEURITES] =
            std::array::from_fn(|j| grid.centers().iter().map(|y| y * snap.lengths[j]).collect());
        let chart = line_chart(
            &format!("Densities at t = {}", short(snap.step as f64 * record.tau)),
            "x",
            &[
                Line { label: "f+ 1", x: &x[0], y: &snap.fields[0].f_plus },
                Line { label: "f- 1", x: &x[0], y: &snap.fields[0].f_minus },
                Line { label: "f+ 2", x: &x[1], y: &snap.fields[1].f_plus },
                Line { label: "f- 2", x: &x[1], y: &snap.fields[1].f_minus },
            ],
        );
        let name = snapshot_file_name(snap, record.tau).replace(".csv", ".svg");
        write_file(&dir.join(name), &chart)?;
    }
    Ok(())
}
