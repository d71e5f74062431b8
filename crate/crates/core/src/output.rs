//! CSV, JSON and SVG emitters for scans and curves, and the JSON schema
//! that every JSON document produced here conforms to.
//!
//! Floats in CSV are written with 17 significant digits so that a value
//! read back parses to the same `f64`.

use std::fmt::Write as _;
use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::hemisphere::{CurvePoint, CurveStatus};
use crate::pseudospectra::PseudospectrumSample;
use crate::scan::{BisectResult, Measure, Ray, ScanGrid};

pub const SCHEMA_VERSION: &str = "1.0.0";

/// JSON Schema (draft 2020-12) for all JSON documents, keyed by `kind`.
pub const SCHEMA: &str = include_str!("schema.json");

/// Float with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

fn json_f64(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        Value::Null
    }
}

fn json_opt(v: Option<f64>) -> Value {
    v.map_or(Value::Null, json_f64)
}

/// CSV header for a grid: `lambda_1, …, lambda_d, mu_c, mu_q, mu_w, in_zero_set`.
pub fn grid_csv_header(d: usize) -> Vec<String> {
    let mut cols: Vec<String> = (1..=d).map(|j| format!("lambda_{j}")).collect();
    cols.extend(["mu_c", "mu_q", "mu_w", "in_zero_set"].map(String::from));
    cols
}

/// One row per lattice point in flat-index order. Missing values are left
/// empty.
pub fn write_grid_csv(grid: &ScanGrid, mut out: impl Write) -> Result<()> {
    let d = grid.samples.first().map_or(grid.region.d(), |s| s.lambda.len());
    writeln!(out, "{}", grid_csv_header(d).join(","))?;
    for (s, flag) in grid.samples.iter().zip(grid.zero_flags()) {
        let mut row: Vec<String> = s.lambda.iter().map(|&v| fmt_f64(v)).collect();
        row.push(fmt_opt(s.mu_c));
        row.push(fmt_opt(s.mu_q));
        row.push(fmt_opt(s.mu_w));
        row.push(if flag { "1".into() } else { "0".into() });
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

/// Descriptive fields attached to every JSON document.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunInfo {
    pub zoo: Option<Value>,
    pub notes: Vec<String>,
}

/// Region header plus a flat value array with one row per lattice point.
pub fn grid_json(grid: &ScanGrid, info: &RunInfo) -> Value {
    let d = grid.samples.first().map_or(grid.region.d(), |s| s.lambda.len());
    let flags = grid.zero_flags();
    let values: Vec<Value> = grid
        .samples
        .iter()
        .zip(&flags)
        .map(|(s, &flag)| {
            let mut row: Vec<Value> = s.lambda.iter().map(|&v| json_f64(v)).collect();
            row.extend([json_opt(s.mu_c), json_opt(s.mu_q), json_opt(s.mu_w), json!(flag)]);
            Value::Array(row)
        })
        .collect();
    json!({
        "schema_version": SCHEMA_VERSION,
        "kind": "scan_grid",
        "region": {
            "lo": grid.region.lo(),
            "hi": grid.region.hi(),
            "resolution": grid.region.resolution(),
        },
        "which": grid.which,
        "epsilon": grid.epsilon,
        "columns": grid_csv_header(d),
        "zero_count": flags.iter().filter(|&&f| f).count(),
        "values": values,
        "zoo": info.zoo.clone().unwrap_or(Value::Null),
        "notes": info.notes,
    })
}

pub const CURVE_COLUMNS: [&str; 8] = ["z", "x", "e", "f", "eig_small", "residual", "status", "b"];

fn status_name(s: CurveStatus) -> String {
    serde_json::to_value(s)
        .ok()
        .and_then(|v| v.as_str().map(String::from))
        .unwrap_or_default()
}

/// Curve points as CSV with columns [`CURVE_COLUMNS`].
pub fn write_curve_csv(points: &[CurvePoint], mut out: impl Write) -> Result<()> {
    writeln!(out, "{}", CURVE_COLUMNS.join(","))?;
    for p in points {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            fmt_f64(p.z),
            fmt_f64(p.x),
            fmt_f64(p.e_val),
            fmt_f64(p.f_val),
            fmt_f64(p.eig_small),
            fmt_f64(p.residual),
            status_name(p.status),
            fmt_f64(p.b)
        )?;
    }
    Ok(())
}

pub fn curve_json(b: f64, points: &[CurvePoint], experimental: bool, info: &RunInfo) -> Value {
    let pts: Vec<Value> = points
        .iter()
        .map(|p| {
            json!({
                "z": json_f64(p.z),
                "x": json_f64(p.x),
                "e": json_f64(p.e_val),
                "f": json_f64(p.f_val),
                "eig_small": json_f64(p.eig_small),
                "residual": json_f64(p.residual),
                "status": status_name(p.status),
            })
        })
        .collect();
    json!({
        "schema_version": SCHEMA_VERSION,
        "kind": "curve",
        "b": b,
        "experimental": experimental,
        "accepted": points.iter().filter(|p| p.is_accepted()).count(),
        "points": pts,
        "zoo": info.zoo.clone().unwrap_or(Value::Null),
        "notes": info.notes,
    })
}

/// Samples along a ray, with the located crossing if any.
pub fn slice_json(ray: &Ray, t_samples: &[f64], samples: &[PseudospectrumSample], crossing: Option<&BisectResult>, info: &RunInfo) -> Value {
    let rows: Vec<Value> = t_samples
        .iter()
        .zip(samples)
        .map(|(&t, s)| {
            json!({
                "t": t,
                "lambda": s.lambda,
                "mu_c": json_opt(s.mu_c),
                "mu_q": json_opt(s.mu_q),
                "mu_w": json_opt(s.mu_w),
            })
        })
        .collect();
    json!({
        "schema_version": SCHEMA_VERSION,
        "kind": "slice",
        "origin": ray.origin,
        "direction": ray.direction,
        "samples": rows,
        "crossing": crossing.map_or(Value::Null, |c| serde_json::to_value(c).unwrap_or(Value::Null)),
        "zoo": info.zoo.clone().unwrap_or(Value::Null),
        "notes": info.notes,
    })
}

/// Slice samples as CSV: `t, lambda_1 … lambda_d, mu_c, mu_q, mu_w`.
pub fn write_slice_csv(t_samples: &[f64], samples: &[PseudospectrumSample], mut out: impl Write) -> Result<()> {
    let d = samples.first().map_or(0, |s| s.lambda.len());
    let mut header = vec!["t".to_string()];
    header.extend((1..=d).map(|j| format!("lambda_{j}")));
    header.extend(["mu_c", "mu_q", "mu_w"].map(String::from));
    writeln!(out, "{}", header.join(","))?;
    for (&t, s) in t_samples.iter().zip(samples) {
        let mut row = vec![fmt_f64(t)];
        row.extend(s.lambda.iter().map(|&v| fmt_f64(v)));
        row.extend([fmt_opt(s.mu_c), fmt_opt(s.mu_q), fmt_opt(s.mu_w)]);
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

/// One line of a check suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Pass/fail summary of a check suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<CheckLine>,
}

impl CheckReport {
    pub fn new(suite: impl Into<String>, seed: u64) -> Self {
        Self {
            suite: suite.into(),
            seed,
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(CheckLine {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema_version": SCHEMA_VERSION,
            "kind": "check_report",
            "suite": self.suite,
            "seed": self.seed,
            "passed": self.passed(),
            "checks": self.checks,
        })
    }

    /// `PASS name: detail` lines.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let _ = writeln!(s, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        }
        let _ = writeln!(
            s,
            "{}: {}/{} checks passed",
            self.suite,
            self.checks.iter().filter(|c| c.passed).count(),
            self.checks.len()
        );
        s
    }
}

/// Anchors of the color ramp, dark (small values) to light (large values).
const RAMP_ANCHORS: [(f64, [f64; 3]); 5] = [
    (0.00, [13.0, 8.0, 135.0]),
    (0.25, [126.0, 3.0, 168.0]),
    (0.50, [204.0, 71.0, 120.0]),
    (0.75, [248.0, 149.0, 64.0]),
    (1.00, [240.0, 249.0, 33.0]),
];

/// The fixed 256-step color ramp, linearly interpolated between
/// [`RAMP_ANCHORS`].
pub fn color_ramp() -> Vec<[u8; 3]> {
    (0..256)
        .map(|k| {
            let t = k as f64 / 255.0;
            let i = RAMP_ANCHORS
                .windows(2)
                .position(|w| t <= w[1].0)
                .unwrap_or(RAMP_ANCHORS.len() - 2);
            let (t0, c0) = RAMP_ANCHORS[i];
            let (t1, c1) = RAMP_ANCHORS[i + 1];
            let u = (t - t0) / (t1 - t0);
            let mut rgb = [0u8; 3];
            for ch in 0..3 {
                rgb[ch] = (c0[ch] + u * (c1[ch] - c0[ch])).round().clamp(0.0, 255.0) as u8;
            }
            rgb
        })
        .collect()
}

fn ramp_color(ramp: &[[u8; 3]], v: f64, vmax: f64) -> String {
    let t = if vmax > 0.0 { (v / vmax).clamp(0.0, 1.0) } else { 0.0 };
    let [r, g, b] = ramp[(t * 255.0).round() as usize];
    format!("#{r:02x}{g:02x}{b:02x}")
}

/// Heatmap settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatmapOptions {
    pub measure: Measure,
    pub cell: f64,
    /// overlay cells with value `≤ epsilon`
    pub overlay_epsilon: Option<f64>,
    /// for 3-D grids, how many slices along the last axis to draw
    pub max_slices: usize,
}

impl Default for HeatmapOptions {
    fn default() -> Self {
        Self {
            measure: Measure::Clifford,
            cell: 4.0,
            overlay_epsilon: None,
            max_slices: 5,
        }
    }
}

/// SVG heatmap with one rectangle per lattice cell.
///
/// 1-D grids give a single strip, 2-D grids a single panel with the first
/// axis horizontal, and 3-D grids a row of panels at evenly spaced indices
/// of the last axis. Cells in the zero set get a white dot.
pub fn heatmap_svg(grid: &ScanGrid, opts: &HeatmapOptions) -> Result<String> {
    let region = &grid.region;
    let d = region.d();
    if d > 3 {
        return Err(Error::InvalidArgument(format!("heatmaps support up to 3 axes, got {d}")));
    }
    let values = grid.values(opts.measure);
    if values.iter().all(Option::is_none) {
        return Err(Error::InvalidArgument(format!("{:?} was not sampled in this grid", opts.measure)));
    }
    let vmax = values.iter().flatten().fold(0.0f64, |m, &v| m.max(v));
    let res = region.resolution();
    let (nx, ny) = match d {
        1 => (res[0], 1),
        _ => (res[0], res[1]),
    };
    let slices: Vec<usize> = if d == 3 {
        let nz = res[2];
        let k = opts.max_slices.clamp(1, nz);
        let mut v: Vec<usize> = (0..k)
            .map(|i| if k == 1 { nz / 2 } else { i * (nz - 1) / (k - 1) })
            .collect();
        v.dedup();
        v
    } else {
        vec![0]
    };
    let c = opts.cell;
    let margin = 24.0;
    let panel_w = nx as f64 * c;
    let panel_h = ny as f64 * c;
    let width = margin + slices.len() as f64 * (panel_w + margin);
    let height = panel_h + 2.0 * margin + 24.0;
    let ramp = color_ramp();

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (p, &slice) in slices.iter().enumerate() {
        let ox = margin + p as f64 * (panel_w + margin);
        let oy = margin;
        if d == 3 {
            let _ = writeln!(
                s,
                r#"<text x="{ox}" y="{}" font-size="11" font-family="sans-serif">axis 3 = {:.4}</text>"#,
                oy - 6.0,
                region.coordinate(2, slice)
            );
        }
        let _ = writeln!(s, "<g shape-rendering=\"crispEdges\">");
        for i in 0..nx {
            for j in 0..ny {
                let multi: Vec<usize> = match d {
                    1 => vec![i],
                    2 => vec![i, j],
                    _ => vec![i, j, slice],
                };
                let idx = region.flat_index(&multi);
                let Some(v) = values[idx] else { continue };
                // second axis grows upward
                let x = ox + i as f64 * c;
                let y = oy + (ny - 1 - j) as f64 * c;
                let _ = writeln!(
                    s,
                    r#"<rect x="{x}" y="{y}" width="{c}" height="{c}" fill="{}"/>"#,
                    ramp_color(&ramp, v, vmax)
                );
            }
        }
        let _ = writeln!(s, "</g>");
        if let Some(eps) = opts.overlay_epsilon {
            let _ = writeln!(s, "<g fill=\"white\" stroke=\"black\" stroke-width=\"0.3\">");
            for i in 0..nx {
                for j in 0..ny {
                    let multi: Vec<usize> = match d {
                        1 => vec![i],
                        2 => vec![i, j],
                        _ => vec![i, j, slice],
                    };
                    if values[region.flat_index(&multi)].is_some_and(|v| v <= eps) {
                        let x = ox + (i as f64 + 0.5) * c;
                        let y = oy + ((ny - 1 - j) as f64 + 0.5) * c;
                        let _ = writeln!(s, r#"<circle cx="{x}" cy="{y}" r="{}"/>"#, (0.35 * c).max(0.8));
                    }
                }
            }
            let _ = writeln!(s, "</g>");
        }
    }
    let _ = writeln!(
        s,
        r#"<text x="{margin}" y="{}" font-size="11" font-family="sans-serif">{:?}: 0 (dark) to {} (light)</text>"#,
        height - 10.0,
        opts.measure,
        fmt_f64(vmax)
    );
    s.push_str("</svg>\n");
    Ok(s)
}

/// SVG of traced curve points in the `(x, z)` half-plane, with the
/// sign region of `f_b` shaded (`f_b ≥ 0` below `z = b`, `f_b ≤ 0` above).
pub fn curve_svg(b: f64, points: &[CurvePoint], shading: &[(f64, f64, bool)], extent: [f64; 4]) -> String {
    let [x0, x1, z0, z1] = extent;
    let size = 420.0;
    let margin = 30.0;
    let sx = |x: f64| margin + (x - x0) / (x1 - x0) * size;
    let sz = |z: f64| margin + (z1 - z) / (z1 - z0) * size;
    let mut s = String::new();
    let total = size + 2.0 * margin;
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{total}" height="{total}" viewBox="0 0 {total} {total}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, "<g fill=\"#cfe8ff\" stroke=\"none\">");
    let cell = shading_cell(shading);
    for &(x, z, on) in shading {
        if on {
            let w = cell.0 / (x1 - x0) * size;
            let h = cell.1 / (z1 - z0) * size;
            let _ = writeln!(s, r#"<rect x="{}" y="{}" width="{w}" height="{h}"/>"#, sx(x) - w / 2.0, sz(z) - h / 2.0);
        }
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(
        s,
        r#"<rect x="{margin}" y="{margin}" width="{size}" height="{size}" fill="none" stroke="black" stroke-width="0.8"/>"#
    );
    let _ = writeln!(s, "<g>");
    for p in points {
        if !(p.x.is_finite() && p.z.is_finite()) {
            continue;
        }
        let color = if p.is_accepted() || p.status == CurveStatus::Degenerate {
            "black"
        } else {
            "#999999"
        };
        let _ = writeln!(s, r#"<circle cx="{}" cy="{}" r="1.6" fill="{color}"/>"#, sx(p.x), sz(p.z));
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(
        s,
        r#"<text x="{margin}" y="{}" font-size="12" font-family="sans-serif">b = {b:.2}; horizontal x in [{x0}, {x1}], vertical z in [{z0}, {z1}]</text>"#,
        margin - 10.0
    );
    s.push_str("</svg>\n");
    s
}

fn shading_cell(shading: &[(f64, f64, bool)]) -> (f64, f64) {
    let mut xs: Vec<f64> = shading.iter().map(|p| p.0).collect();
    let mut zs: Vec<f64> = shading.iter().map(|p| p.1).collect();
    let step = |v: &mut Vec<f64>| {
        v.sort_by(f64::total_cmp);
        v.dedup();
        v.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
    };
    let (dx, dz) = (step(&mut xs), step(&mut zs));
    (if dx.is_finite() { dx } else { 0.0 }, if dz.is_finite() { dz } else { 0.0 })
}

/// Parses the embedded schema.
pub fn schema() -> Value {
    serde_json::from_str(SCHEMA).expect("embedded schema is valid JSON")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::par::ExecPolicy;
    use crate::pseudospectra::{Evaluator, Which};
    use crate::scan::{grid_scan, Region, ScanOptions};
    use crate::zoo::ZooSpec;

    fn small_grid() -> ScanGrid {
        let a = ZooSpec::TwoProjection { z: 0.5 }.build().unwrap();
        let ev = Evaluator::new(&a).unwrap();
        grid_scan(
            &ev,
            &Region::cube(-2.0, 2.0, 2, 5).unwrap(),
            &ScanOptions {
                which: Which::CQ,
                policy: ExecPolicy::Sequential,
                ..Default::default()
            },
        )
        .unwrap()
    }

    #[test]
    fn floats_round_trip_through_text() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MIN_POSITIVE] {
            assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn csv_has_fixed_columns_and_round_trips() {
        let grid = small_grid();
        let mut buf = Vec::new();
        write_grid_csv(&grid, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "lambda_1,lambda_2,mu_c,mu_q,mu_w,in_zero_set");
        let rows: Vec<&str> = lines.collect();
        assert_eq!(rows.len(), 25);
        for (row, s) in rows.iter().zip(&grid.samples) {
            let cols: Vec<&str> = row.split(',').collect();
            assert_eq!(cols[2].parse::<f64>().unwrap(), s.mu_c.unwrap());
            assert_eq!(cols[3].parse::<f64>().unwrap(), s.mu_q.unwrap());
            assert_eq!(cols[4], "");
        }
    }

    #[test]
    fn ramp_has_256_monotone_luminance_steps() {
        let ramp = color_ramp();
        assert_eq!(ramp.len(), 256);
        assert_eq!(ramp[0], [13, 8, 135]);
        assert_eq!(ramp[255], [240, 249, 33]);
    }

    #[test]
    fn heatmap_is_svg_with_one_rect_per_cell() {
        let grid = small_grid();
        let svg = heatmap_svg(
            &grid,
            &HeatmapOptions {
                overlay_epsilon: Some(0.5),
                ..Default::default()
            },
        )
        .unwrap();
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<rect x=").count(), 25);
        let windowed = heatmap_svg(
            &grid,
            &HeatmapOptions {
                measure: Measure::Windowed,
                ..Default::default()
            },
        );
        assert!(windowed.is_err());
    }

    #[test]
    fn json_documents_carry_kind_and_version() {
        let grid = small_grid();
        let v = grid_json(&grid, &RunInfo::default());
        assert_eq!(v["kind"], "scan_grid");
        assert_eq!(v["schema_version"], SCHEMA_VERSION);
        assert_eq!(v["values"].as_array().unwrap().len(), 25);
        let schema = schema();
        assert_eq!(schema["properties"]["schema_version"]["const"], SCHEMA_VERSION);
    }
}
