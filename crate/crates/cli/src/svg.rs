//! Standalone SVG line charts over core counts.
//!
//! One polyline per plan, infeasible rows omitted. The energy axis is
//! logarithmic (its spans cover orders of magnitude); the voltage axis is
//! linear. Output bytes are a pure function of the input plans, so repeated
//! emission is byte-identical.

use std::fmt::Write as _;
use std::path::Path;

use voltplan::OperatingPlan64;

use crate::error::{CliError, CliResult};

const WIDTH: f64 = 820.0;
const HEIGHT: f64 = 520.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 220.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 55.0;

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

/// Which per-row quantity is plotted on the vertical axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChartAxis {
    /// Total energy per run, log scale.
    Energy,
    /// Supply voltage, linear scale.
    Voltage,
}

impl ChartAxis {
    fn label(self) -> &'static str {
        match self {
            ChartAxis::Energy => "energy per run [J]",
            ChartAxis::Voltage => "supply voltage [V]",
        }
    }

    fn value(self, row: &voltplan::PlanRow64) -> f64 {
        match self {
            ChartAxis::Energy => row.e_j,
            ChartAxis::Voltage => row.v_p,
        }
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders the chart as an SVG document string.
pub fn render_chart(plans: &[OperatingPlan64], axis: ChartAxis) -> CliResult<String> {
    let series: Vec<(String, Vec<(f64, f64)>)> = plans
        .iter()
        .map(|plan| {
            let label = xml_escape(&format!("t_r={} {}", plan.target.t_r, plan.model_summary));
            let points = plan
                .feasible_rows()
                .map(|row| (f64::from(row.p), axis.value(row)))
                .collect();
            (label, points)
        })
        .collect();
    if series.iter().all(|(_, pts)| pts.is_empty()) {
        return Err(CliError::Infeasible(
            "no feasible rows in any plan; nothing to plot".into(),
        ));
    }

    let xs = series.iter().flat_map(|(_, pts)| pts.iter().map(|p| p.0));
    let (mut x_lo, mut x_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for x in xs {
        x_lo = x_lo.min(x);
        x_hi = x_hi.max(x);
    }
    if x_lo == x_hi {
        x_lo -= 1.0;
        x_hi += 1.0;
    }

    let ys = series.iter().flat_map(|(_, pts)| pts.iter().map(|p| p.1));
    let (y_lo, y_hi, y_ticks): (f64, f64, Vec<(f64, String)>) = match axis {
        ChartAxis::Energy => {
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for y in ys {
                let l = y.log10();
                lo = lo.min(l);
                hi = hi.max(l);
            }
            let lo = lo.floor();
            let hi = if hi.ceil() > lo { hi.ceil() } else { lo + 1.0 };
            let step = (((hi - lo) / 8.0).ceil() as i64).max(1);
            let ticks = (lo as i64..=hi as i64)
                .step_by(step as usize)
                .map(|k| (k as f64, format!("1e{k}")))
                .collect();
            (lo, hi, ticks)
        }
        ChartAxis::Voltage => {
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for y in ys {
                lo = lo.min(y);
                hi = hi.max(y);
            }
            let lo = (lo * 20.0).floor() / 20.0;
            let mut hi = (hi * 20.0).ceil() / 20.0;
            if hi <= lo {
                hi = lo + 0.05;
            }
            let ticks = (0..=5)
                .map(|i| {
                    let v = lo + (hi - lo) * f64::from(i) / 5.0;
                    (v, format!("{v:.3}"))
                })
                .collect();
            (lo, hi, ticks)
        }
    };

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let x_pos = |x: f64| MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w;
    let y_pos = |y: f64| {
        let t = match axis {
            ChartAxis::Energy => (y.log10() - y_lo) / (y_hi - y_lo),
            ChartAxis::Voltage => (y - y_lo) / (y_hi - y_lo),
        };
        MARGIN_TOP + (1.0 - t) * plot_h
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="24" font-family="monospace" font-size="15">{} vs cores</text>"#,
        MARGIN_LEFT,
        axis.label()
    );

    // Horizontal gridlines and y tick labels.
    for (value, label) in &y_ticks {
        let y = MARGIN_TOP + (1.0 - (value - y_lo) / (y_hi - y_lo)) * plot_h;
        let _ = writeln!(
            svg,
            r##"<line x1="{MARGIN_LEFT:.1}" y1="{y:.2}" x2="{:.1}" y2="{y:.2}" stroke="#dddddd"/>"##,
            MARGIN_LEFT + plot_w
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.2}" font-family="monospace" font-size="12" text-anchor="end">{label}</text>"#,
            MARGIN_LEFT - 8.0,
            y + 4.0
        );
    }

    // X ticks at up to 8 integer core counts.
    let span = x_hi - x_lo;
    let x_step = (span / 8.0).ceil().max(1.0);
    let mut x_tick = x_lo;
    while x_tick <= x_hi + 1e-9 {
        let x = x_pos(x_tick);
        let _ = writeln!(
            svg,
            r##"<line x1="{x:.2}" y1="{:.1}" x2="{x:.2}" y2="{:.1}" stroke="#aaaaaa"/>"##,
            MARGIN_TOP + plot_h,
            MARGIN_TOP + plot_h + 5.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{x:.2}" y="{:.1}" font-family="monospace" font-size="12" text-anchor="middle">{}</text>"#,
            MARGIN_TOP + plot_h + 20.0,
            x_tick as u64
        );
        x_tick += x_step;
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" font-family="monospace" font-size="13" text-anchor="middle">cores p</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 12.0
    );

    // Axis frame.
    let _ = writeln!(
        svg,
        r##"<rect x="{MARGIN_LEFT:.1}" y="{MARGIN_TOP:.1}" width="{plot_w:.1}" height="{plot_h:.1}" fill="none" stroke="#333333"/>"##
    );

    // One polyline per plan with at least one feasible row.
    let mut legend_row = 0;
    for (i, (label, points)) in series.iter().enumerate() {
        if points.is_empty() {
            continue;
        }
        let color = PALETTE[i % PALETTE.len()];
        let mut coords = String::new();
        for (x, y) in points {
            let _ = write!(coords, "{:.2},{:.2} ", x_pos(*x), y_pos(*y));
        }
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.8"/>"#,
            coords.trim_end()
        );
        let ly = MARGIN_TOP + 14.0 + 18.0 * f64::from(legend_row);
        let lx = MARGIN_LEFT + plot_w + 14.0;
        let _ = writeln!(
            svg,
            r#"<rect x="{lx:.1}" y="{:.1}" width="12" height="12" fill="{color}"/>"#,
            ly - 10.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{ly:.1}" font-family="monospace" font-size="12">{label}</text>"#,
            lx + 18.0
        );
        legend_row += 1;
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Renders and writes a chart file.
pub fn emit_svg(plans: &[OperatingPlan64], axis: ChartAxis, path: &Path) -> CliResult<()> {
    let svg = render_chart(plans, axis)?;
    std::fs::write(path, svg)
        .map_err(|e| CliError::Internal(format!("{}: {e}", path.display())))
}
