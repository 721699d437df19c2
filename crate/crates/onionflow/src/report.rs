//! Deterministic CSV and SVG emission.
//!
//! Data files never contain timestamps; identical runs produce identical
//! bytes. CSV uses `.` decimals, `\n` line endings, and a header row. SVG
//! coordinates are written with fixed 6-decimal formatting.

use std::fmt::Write as _;

use crate::acsf::FrontCurve;
use crate::geometry::{ChainPoint, ConvexChain, FloatPoint};
use crate::harness::{ComparisonRecord, QuadrantReportRow};
use crate::peel::LayerRecord;
use crate::quadrant::QuadrantProfile;

/// `index,vertex_count,remaining_points` rows, one per layer.
pub fn layer_csv(records: &[LayerRecord]) -> String {
    let mut out = String::from("index,vertex_count,remaining_points\n");
    for r in records {
        writeln!(out, "{},{},{}", r.index, r.vertex_count, r.remaining_points).unwrap();
    }
    out
}

/// The comparison table with its fixed header.
pub fn comparison_csv(records: &[ComparisonRecord]) -> String {
    let mut out =
        String::from("region,n,fraction,m_layers,t_flow,hausdorff,initial_hausdorff,c_est\n");
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.region,
            r.n,
            r.fraction,
            r.m_layers,
            r.t_flow,
            r.hausdorff,
            r.initial_hausdorff,
            r.c_est
        )
        .unwrap();
    }
    out
}

/// `n,alpha,ratio,c_est` rows of the quadrant hyperbola-fit report.
pub fn quadrant_report_csv(rows: &[QuadrantReportRow]) -> String {
    let mut out = String::from("n,alpha,ratio,c_est\n");
    for r in rows {
        writeln!(out, "{},{},{},{}", r.n, r.alpha, r.ratio, r.c_est).unwrap();
    }
    out
}

/// Per-iteration quadrant trace: layer size, removed total, diagonal point,
/// and the hyperbola-fit extent for each configured alpha.
pub fn quadrant_trace_csv(n: u64, alphas: &[f64]) -> crate::Result<String> {
    let mut header = String::from("n,layer_size,s,k_n");
    for a in alphas {
        write!(header, ",x_alpha_{a}").unwrap();
    }
    header.push('\n');
    let mut out = header;
    let mut profile = QuadrantProfile::new();
    for i in 1..=n {
        profile.advance_to(i);
        let sizes = profile.layer_sizes();
        write!(
            out,
            "{},{},{},{}",
            i,
            sizes[sizes.len() - 1],
            profile.total_removed(),
            profile.k_n()
        )
        .unwrap();
        for &a in alphas {
            write!(out, ",{}", profile.hyperbola_fit_extent(a)?.x_alpha).unwrap();
        }
        out.push('\n');
    }
    Ok(out)
}

/// `x a[x]` pairs of the current quadrant profile, one per line.
pub fn profile_dump(profile: &QuadrantProfile) -> String {
    let mut out = String::new();
    for (x, a) in profile.columns().iter().enumerate() {
        writeln!(out, "{x} {a}").unwrap();
    }
    out
}

/// Flow snapshots as `t,x,y` rows.
pub fn curve_snapshots_csv(snapshots: &[(f64, FrontCurve)]) -> String {
    let mut out = String::from("t,x,y\n");
    for (t, curve) in snapshots {
        for p in curve.points() {
            writeln!(out, "{},{},{}", t, p.x, p.y).unwrap();
        }
    }
    out
}

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

/// Accumulates closed polylines and renders a self-contained SVG.
pub struct SvgPlot {
    shapes: Vec<(Vec<FloatPoint>, usize)>,
    min: FloatPoint,
    max: FloatPoint,
}

impl SvgPlot {
    pub fn new() -> Self {
        SvgPlot {
            shapes: Vec::new(),
            min: FloatPoint::new(f64::INFINITY, f64::INFINITY),
            max: FloatPoint::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
        }
    }

    pub fn add_chain<P: ChainPoint>(&mut self, chain: &ConvexChain<P>, color_index: usize) {
        self.add_loop(&chain.to_float_points(), color_index);
    }

    pub fn add_loop(&mut self, points: &[FloatPoint], color_index: usize) {
        for p in points {
            self.min.x = self.min.x.min(p.x);
            self.min.y = self.min.y.min(p.y);
            self.max.x = self.max.x.max(p.x);
            self.max.y = self.max.y.max(p.y);
        }
        self.shapes.push((points.to_vec(), color_index));
    }

    pub fn is_empty(&self) -> bool {
        self.shapes.is_empty()
    }

    /// Renders with the y-axis flipped so the output matches mathematical
    /// orientation.
    pub fn render(&self) -> String {
        let width = (self.max.x - self.min.x).max(1e-9);
        let height = (self.max.y - self.min.y).max(1e-9);
        let margin = 0.02 * width.max(height);
        let stroke = 0.002 * width.max(height);
        let mut out = String::new();
        writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{:.6} {:.6} {:.6} {:.6}">"#,
            self.min.x - margin,
            -self.max.y - margin,
            width + 2.0 * margin,
            height + 2.0 * margin,
        )
        .unwrap();
        writeln!(out, r#"<g fill="none" stroke-width="{stroke:.6}">"#).unwrap();
        for (points, color_index) in &self.shapes {
            let color = PALETTE[color_index % PALETTE.len()];
            let mut coords = String::new();
            for p in points {
                if !coords.is_empty() {
                    coords.push(' ');
                }
                write!(coords, "{:.6},{:.6}", p.x, -p.y).unwrap();
            }
            writeln!(out, r#"<polygon stroke="{color}" points="{coords}"/>"#).unwrap();
        }
        writeln!(out, "</g>").unwrap();
        writeln!(out, "</svg>").unwrap();
        out
    }
}

impl Default for SvgPlot {
    fn default() -> Self {
        Self::new()
    }
}
