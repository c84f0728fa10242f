use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::overlay::{OverlayBound, OverlayKind};
use crate::bounds::{CurveData, ExclusionCurve, ScenarioKind};
use crate::error::{Error, Result};

const WIDTH: f64 = 920.0;
const HEIGHT: f64 = 600.0;
const LEFT: f64 = 90.0;
const RIGHT: f64 = 340.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;

const CURVE_COLORS: [&str; 6] = [
    "#1b6ca8", "#c0392b", "#27ae60", "#8e44ad", "#d35400", "#2c3e50",
];
const OVERLAY_COLORS: [&str; 4] = ["#7f8c8d", "#b7950b", "#5d6d7e", "#a04000"];

pub const GRW_RC_M: f64 = 1e-7;
pub const GRW_LAMBDA_PER_S: f64 = 1e-16;

/// A labeled point, or a segment when both `*_end` coordinates are given.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Marker {
    pub label: String,
    pub rc_m: f64,
    pub lambda_per_s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rc_end_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_end_per_s: Option<f64>,
}

impl Marker {
    pub fn point(label: impl Into<String>, rc_m: f64, lambda_per_s: f64) -> Self {
        Marker {
            label: label.into(),
            rc_m,
            lambda_per_s,
            rc_end_m: None,
            lambda_end_per_s: None,
        }
    }

    pub fn end(&self) -> Option<(f64, f64)> {
        self.rc_end_m.zip(self.lambda_end_per_s)
    }
}

pub fn grw_marker() -> Marker {
    Marker::point("GRW", GRW_RC_M, GRW_LAMBDA_PER_S)
}

pub fn load_markers(path: &Path) -> Result<Vec<Marker>> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagramSpec {
    pub rc_range: (f64, f64),
    pub lambda_range: (f64, f64),
    pub curves: Vec<ExclusionCurve>,
    pub overlays: Vec<OverlayBound>,
    pub markers: Vec<Marker>,
}

pub const DEFAULT_LAMBDA_RANGE: (f64, f64) = (1e-30, 1.0);

impl DiagramSpec {
    /// Spec spanning the r_c extent of the curves, with the GRW marker.
    pub fn new(curves: Vec<ExclusionCurve>) -> Self {
        let rc = curves
            .iter()
            .flat_map(|c| c.samples())
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| {
                (lo.min(s.r_c), hi.max(s.r_c))
            });
        DiagramSpec {
            rc_range: rc,
            lambda_range: DEFAULT_LAMBDA_RANGE,
            curves,
            overlays: Vec::new(),
            markers: vec![grw_marker()],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.curves.is_empty() {
            return Err(Error::Validation(
                "diagram needs at least one exclusion curve".into(),
            ));
        }
        for (name, (lo, hi)) in [
            ("rc_range", self.rc_range),
            ("lambda_range", self.lambda_range),
        ] {
            if !(lo > 0.0 && hi.is_finite() && lo < hi) {
                return Err(Error::Validation(format!(
                    "{name} must satisfy 0 < min < max, got ({lo:e}, {hi:e})"
                )));
            }
        }
        for curve in &self.curves {
            if let CurveData::Dp { .. } = curve.data {
                return Err(Error::Validation(format!(
                    "curve '{}' is a DP bound; the diagram shows the CSL (r_c, lambda) plane",
                    curve.scenario.label
                )));
            }
            if curve.samples().is_empty() {
                return Err(Error::Validation(format!(
                    "curve '{}' has no samples",
                    curve.scenario.label
                )));
            }
        }
        for overlay in &self.overlays {
            if overlay.samples.is_empty() {
                return Err(Error::Validation(format!(
                    "overlay '{}' has no samples",
                    overlay.label
                )));
            }
        }
        for m in &self.markers {
            let (rc_end, l_end) = m.end().unwrap_or((m.rc_m, m.lambda_per_s));
            if [m.rc_m, m.lambda_per_s, rc_end, l_end]
                .iter()
                .any(|v| !(*v > 0.0))
            {
                return Err(Error::Validation(format!(
                    "marker '{}' needs positive coordinates",
                    m.label
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderedDiagram {
    pub svg: String,
    pub csv: String,
}

struct Axes {
    rc: (f64, f64),
    lambda: (f64, f64),
}

impl Axes {
    fn x(&self, rc: f64) -> f64 {
        let (a, b) = (self.rc.0.log10(), self.rc.1.log10());
        LEFT + (rc.log10() - a) / (b - a) * (WIDTH - LEFT - RIGHT)
    }

    fn y(&self, lambda: f64) -> f64 {
        let (a, b) = (self.lambda.0.log10(), self.lambda.1.log10());
        HEIGHT - BOTTOM - (lambda.log10() - a) / (b - a) * (HEIGHT - TOP - BOTTOM)
    }

    fn point(&self, rc: f64, lambda: f64) -> String {
        format!("{:.3},{:.3}", self.x(rc), self.y(lambda))
    }
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

/// Table of every sampled curve point, `{:.12e}` formatted.
pub fn curves_csv(curves: &[ExclusionCurve]) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["scenario", "rc_m", "lambda_crit_per_s"])
        .map_err(|e| Error::Validation(e.to_string()))?;
    for curve in curves {
        for s in curve.samples() {
            writer
                .write_record([
                    curve.scenario.label.clone(),
                    format!("{:.12e}", s.r_c),
                    format!("{:.12e}", s.lambda_crit),
                ])
                .map_err(|e| Error::Validation(e.to_string()))?;
        }
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::Validation(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn decades(lo: f64, hi: f64) -> impl Iterator<Item = i32> {
    let first = lo.log10().ceil() as i32;
    let last = hi.log10().floor() as i32;
    first..=last
}

fn draw_axes(svg: &mut String, axes: &Axes) {
    let (x0, x1) = (LEFT, WIDTH - RIGHT);
    let (y0, y1) = (HEIGHT - BOTTOM, TOP);
    let _ = writeln!(
        svg,
        r##"<rect x="{x0}" y="{y1}" width="{:.3}" height="{:.3}" fill="none" stroke="#000"/>"##,
        x1 - x0,
        y0 - y1
    );
    let lambda_step = {
        let span = decades(axes.lambda.0, axes.lambda.1).count().max(1);
        span.div_ceil(10)
    };
    for k in decades(axes.rc.0, axes.rc.1) {
        let x = axes.x(10f64.powi(k));
        let _ = writeln!(
            svg,
            r##"<line x1="{x:.3}" y1="{y0}" x2="{x:.3}" y2="{:.3}" stroke="#000"/><text x="{x:.3}" y="{:.3}" text-anchor="middle" font-size="12">10<tspan dy="-6" font-size="9">{k}</tspan></text>"##,
            y0 + 5.0,
            y0 + 20.0
        );
    }
    for (i, k) in decades(axes.lambda.0, axes.lambda.1).enumerate() {
        if i % lambda_step != 0 {
            continue;
        }
        let y = axes.y(10f64.powi(k));
        let _ = writeln!(
            svg,
            r##"<line x1="{:.3}" y1="{y:.3}" x2="{x0}" y2="{y:.3}" stroke="#000"/><text x="{:.3}" y="{:.3}" text-anchor="end" font-size="12">10<tspan dy="-6" font-size="9">{k}</tspan></text>"##,
            x0 - 5.0,
            x0 - 12.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.3}" y="{:.3}" text-anchor="middle" font-size="14">r_c [m]</text>"#,
        0.5 * (x0 + x1),
        HEIGHT - 15.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="20" y="{:.3}" text-anchor="middle" font-size="14" transform="rotate(-90 20 {:.3})">λ [1/s]</text>"#,
        0.5 * (y0 + y1),
        0.5 * (y0 + y1)
    );
}

fn overlay_polygon(axes: &Axes, overlay: &OverlayBound) -> String {
    let pts: Vec<String> = overlay
        .samples
        .iter()
        .map(|s| axes.point(s.rc_m, s.lambda_per_s))
        .collect();
    let first = overlay.samples.first().expect("validated non-empty");
    let last = overlay.samples.last().expect("validated non-empty");
    let edge = match overlay.kind {
        OverlayKind::ExcludedAbove => Some(TOP),
        OverlayKind::ExcludedBelow => Some(HEIGHT - BOTTOM),
        OverlayKind::ExcludedRegion => None,
    };
    match edge {
        Some(y) => format!(
            "{} {:.3},{y:.3} {:.3},{y:.3}",
            pts.join(" "),
            axes.x(last.rc_m),
            axes.x(first.rc_m)
        ),
        None => pts.join(" "),
    }
}

/// Log-log SVG of the exclusion curves, overlays and markers, and the CSV of
/// the same curve samples. Output depends only on `spec`.
pub fn render_diagram(spec: &DiagramSpec) -> Result<RenderedDiagram> {
    spec.validate()?;
    let axes = Axes {
        rc: spec.rc_range,
        lambda: spec.lambda_range,
    };
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif">"#
    );
    let _ = writeln!(
        svg,
        r##"<defs><clipPath id="plot"><rect x="{LEFT}" y="{TOP}" width="{:.3}" height="{:.3}"/></clipPath><pattern id="hatch" width="8" height="8" patternUnits="userSpaceOnUse" patternTransform="rotate(45)"><line x1="0" y1="0" x2="0" y2="8" stroke="#888" stroke-width="1"/></pattern></defs>"##,
        WIDTH - LEFT - RIGHT,
        HEIGHT - TOP - BOTTOM
    );
    let _ = writeln!(
        svg,
        r##"<rect width="{WIDTH}" height="{HEIGHT}" fill="#fff"/>"##
    );

    let _ = writeln!(svg, r#"<g clip-path="url(#plot)">"#);
    for (i, overlay) in spec.overlays.iter().enumerate() {
        let color = OVERLAY_COLORS[i % OVERLAY_COLORS.len()];
        let _ = writeln!(
            svg,
            r#"<polygon class="overlay" points="{}" fill="{color}" fill-opacity="0.25" stroke="{color}"><title>{} ({})</title></polygon>"#,
            overlay_polygon(&axes, overlay),
            escape(&overlay.label),
            escape(&overlay.source)
        );
    }
    for (i, curve) in spec.curves.iter().enumerate() {
        let color = CURVE_COLORS[i % CURVE_COLORS.len()];
        let samples = curve.samples();
        let line: Vec<String> = samples
            .iter()
            .map(|s| axes.point(s.r_c, s.lambda_crit))
            .collect();
        let (fill, dash) = match curve.scenario.kind {
            ScenarioKind::Observed => (format!(r#"fill="{color}" fill-opacity="0.15""#), ""),
            ScenarioKind::Speculative => (
                r#"fill="url(#hatch)" fill-opacity="0.5""#.to_string(),
                r#" stroke-dasharray="6,4""#,
            ),
        };
        // the excluded side of a curve is λ > λ_crit
        let _ = writeln!(
            svg,
            r#"<polygon class="excluded" points="{} {:.3},{TOP} {:.3},{TOP}" {fill} stroke="none"/>"#,
            line.join(" "),
            axes.x(samples[samples.len() - 1].r_c),
            axes.x(samples[0].r_c)
        );
        let _ = writeln!(
            svg,
            r#"<polyline class="curve" points="{}" fill="none" stroke="{color}" stroke-width="2"{dash}><title>{}</title></polyline>"#,
            line.join(" "),
            escape(&curve.scenario.label)
        );
    }
    for m in &spec.markers {
        match m.end() {
            Some((rc_end, l_end)) => {
                let _ = writeln!(
                    svg,
                    r##"<line class="marker" x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="#000" stroke-width="3"/>"##,
                    axes.x(m.rc_m),
                    axes.y(m.lambda_per_s),
                    axes.x(rc_end),
                    axes.y(l_end)
                );
            }
            None => {
                let _ = writeln!(
                    svg,
                    r##"<circle class="marker" cx="{:.3}" cy="{:.3}" r="4" fill="#000"/>"##,
                    axes.x(m.rc_m),
                    axes.y(m.lambda_per_s)
                );
            }
        }
        let _ = writeln!(
            svg,
            r#"<text x="{:.3}" y="{:.3}" font-size="12">{}</text>"#,
            axes.x(m.rc_m) + 6.0,
            axes.y(m.lambda_per_s) - 6.0,
            escape(&m.label)
        );
    }
    let _ = writeln!(svg, "</g>");

    draw_axes(&mut svg, &axes);

    let legend_x = WIDTH - RIGHT + 15.0;
    let mut legend_y = TOP + 10.0;
    for (i, curve) in spec.curves.iter().enumerate() {
        let color = CURVE_COLORS[i % CURVE_COLORS.len()];
        let dash = match curve.scenario.kind {
            ScenarioKind::Observed => "",
            ScenarioKind::Speculative => r#" stroke-dasharray="6,4""#,
        };
        let _ = writeln!(
            svg,
            r#"<line x1="{legend_x:.3}" y1="{legend_y:.3}" x2="{:.3}" y2="{legend_y:.3}" stroke="{color}" stroke-width="2"{dash}/><text x="{:.3}" y="{:.3}" font-size="11">{} ({} K)</text>"#,
            legend_x + 25.0,
            legend_x + 30.0,
            legend_y + 4.0,
            escape(&curve.scenario.label),
            curve.scenario.temperature
        );
        legend_y += 18.0;
    }
    for (i, overlay) in spec.overlays.iter().enumerate() {
        let color = OVERLAY_COLORS[i % OVERLAY_COLORS.len()];
        let _ = writeln!(
            svg,
            r#"<rect x="{legend_x:.3}" y="{:.3}" width="25" height="8" fill="{color}" fill-opacity="0.25" stroke="{color}"/><text x="{:.3}" y="{:.3}" font-size="11">{}</text>"#,
            legend_y - 4.0,
            legend_x + 30.0,
            legend_y + 4.0,
            escape(&overlay.label)
        );
        legend_y += 18.0;
    }
    svg.push_str("</svg>\n");

    Ok(RenderedDiagram {
        svg,
        csv: curves_csv(&spec.curves)?,
    })
}
