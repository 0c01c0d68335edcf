//! Text and SVG renderings of alignment charts.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::routing::{build_graph, RoutePlan};
use crate::sfamily::{BarChart, MultiTrainChart};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Overlay {
    /// A passenger trip, drawn leg by leg with dotted links at transfers.
    Route(RoutePlan),
    /// Station types where passengers can change train type.
    Connectors,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChartRendering {
    pub text: String,
    pub svg: String,
}

const UNIT: i64 = 24;
const ROW: i64 = 20;
const MARGIN: i64 = 60;

/// Horizontal extent of a chart in units from the train's back, bars included.
fn extent(chart: &BarChart) -> (i64, i64) {
    let mut lo = 0i64;
    let mut hi = chart.m as i64;
    for bar in chart.bars.iter().filter(|b| b.b > 0) {
        lo = lo.min(bar.b as i64 - bar.d as i64);
        hi = hi.max(bar.b as i64);
    }
    (lo, hi)
}

fn text_chart(out: &mut String, label: &str, chart: &BarChart, legs: &[(usize, usize)], types: &[String]) {
    let (lo, hi) = extent(chart);
    let width = chart.bars.iter().map(|b| b.label.len()).chain([label.len()]).max().unwrap_or(1);
    let _ = writeln!(out, "train {label}: M = {}, front at right", chart.m);
    for bar in chart.bars.iter().rev() {
        if bar.b == 0 {
            let _ = writeln!(out, "{:<width$} (skipped)", bar.label);
            continue;
        }
        let (a, b) = (bar.b as i64 - bar.d as i64, bar.b as i64);
        let cells: String = (lo..hi).map(|x| if x >= a && x < b { '#' } else { '.' }).collect();
        let _ = writeln!(out, "{:<width$} |{cells}| b={} d={}", bar.label, bar.b, bar.d);
    }
    let cells: String = (lo..hi).map(|x| if x >= 0 && x < chart.m as i64 { '=' } else { ' ' }).collect();
    let _ = writeln!(out, "{:<width$} |{cells}|", label);
    for &(o, d) in legs {
        let _ = writeln!(out, "  ride {} -> {}", types[o], types[d]);
    }
}

struct Layout {
    lo: i64,
    /// Top y of each chart's group.
    top: Vec<i64>,
    height: i64,
    width: i64,
}

fn layout(multi: &MultiTrainChart) -> Layout {
    let mut lo = 0;
    let mut hi = 0;
    for t in &multi.trains {
        let (a, b) = extent(&t.chart);
        lo = lo.min(a);
        hi = hi.max(b);
    }
    let mut top = Vec::new();
    let mut y = ROW;
    for t in &multi.trains {
        top.push(y);
        y += (t.chart.bars.len() as i64 + 2) * ROW + ROW;
    }
    Layout { lo, top, height: y, width: (hi - lo) * UNIT + 2 * MARGIN }
}

impl Layout {
    fn x(&self, units: i64) -> i64 {
        MARGIN + (units - self.lo) * UNIT
    }

    /// Vertical centre of bar row `r` (0 = bottom bar) in chart `k`.
    fn bar_y(&self, multi: &MultiTrainChart, k: usize, r: usize) -> i64 {
        let rows = multi.trains[k].chart.bars.len() as i64;
        self.top[k] + ROW + (rows - 1 - r as i64) * ROW + ROW / 2
    }
}

/// Point where a leg of train `k` leaves bar `from` for bar `to`: the middle of
/// their shared span.
fn leg_x(chart: &BarChart, from: usize, to: usize) -> Option<i64> {
    let (a, b) = chart.span(from)?;
    let (c, d) = chart.span(to)?;
    let lo = a.max(c) as i64;
    let hi = b.min(d) as i64;
    (hi > lo).then(|| lo + hi)
}

fn svg_chart(svg: &mut String, multi: &MultiTrainChart, lay: &Layout, k: usize) {
    let t = &multi.trains[k];
    let chart = &t.chart;
    let _ = writeln!(svg, r#"<g id="train-{}">"#, t.label);
    let _ = writeln!(svg, r#"<text x="4" y="{}" font-size="12">train {}</text>"#, lay.top[k] + ROW / 2 + 4, t.label);
    for (r, bar) in chart.bars.iter().enumerate() {
        let y = lay.bar_y(multi, k, r) - ROW / 2 + 3;
        let _ = writeln!(svg, r#"<text x="4" y="{}" font-size="12">{}</text>"#, y + 11, bar.label);
        if bar.b == 0 {
            continue;
        }
        let x0 = lay.x(bar.b as i64 - bar.d as i64);
        let x1 = lay.x(bar.b as i64);
        let _ = writeln!(
            svg,
            r##"<rect x="{x0}" y="{y}" width="{}" height="{}" fill="#9ab" stroke="#345"/>"##,
            x1 - x0,
            ROW - 6
        );
    }
    let y = lay.top[k] + (chart.bars.len() as i64 + 1) * ROW + 3;
    let _ = writeln!(
        svg,
        r##"<rect x="{}" y="{y}" width="{}" height="{}" fill="#456" stroke="#123"/>"##,
        lay.x(0),
        chart.m as i64 * UNIT,
        ROW - 6
    );
    svg.push_str("</g>\n");
}

fn svg_route(svg: &mut String, multi: &MultiTrainChart, lay: &Layout, plan: &RoutePlan) {
    let mut prev: Option<(i64, i64)> = None;
    for leg in &plan.legs {
        let k = leg.train;
        let chart = &multi.trains[k].chart;
        let (Some(rb), Some(ra)) = (multi.bar_of(k, leg.board), multi.bar_of(k, leg.alight)) else {
            continue;
        };
        let Some(x2) = leg_x(chart, rb, ra) else { continue };
        let x = lay.x(0) + x2 * UNIT / 2;
        let (y0, y1) = (lay.bar_y(multi, k, rb), lay.bar_y(multi, k, ra));
        if let Some((px, py)) = prev {
            let _ =
                writeln!(svg, r##"<path d="M{px},{py} L{x},{y0}" fill="none" stroke="#c30" stroke-dasharray="3,3"/>"##);
        }
        let _ = writeln!(svg, r##"<path d="M{x},{y0} L{x},{y1}" fill="none" stroke="#c30" stroke-width="2"/>"##);
        prev = Some((x, y1));
    }
}

fn svg_connectors(svg: &mut String, multi: &MultiTrainChart, lay: &Layout) {
    let g = build_graph(multi);
    for (&i, ks) in &g.connectors {
        for pair in ks.windows(2) {
            let (Some(ra), Some(rb)) = (multi.bar_of(pair[0], i), multi.bar_of(pair[1], i)) else {
                continue;
            };
            let ya = lay.bar_y(multi, pair[0], ra);
            let yb = lay.bar_y(multi, pair[1], rb);
            let x = lay.x(0) - UNIT / 2;
            let _ =
                writeln!(svg, r##"<path d="M{x},{ya} L{x},{yb}" fill="none" stroke="#063" stroke-dasharray="2,4"/>"##);
        }
    }
}

/// Deterministic text and SVG drawings of every train's chart with overlays.
pub fn render_chart(multi: &MultiTrainChart, overlays: &[Overlay]) -> ChartRendering {
    let mut text = String::new();
    for (k, t) in multi.trains.iter().enumerate() {
        if k > 0 {
            text.push('\n');
        }
        let legs: Vec<(usize, usize)> = overlays
            .iter()
            .filter_map(|o| match o {
                Overlay::Route(p) => Some(p),
                Overlay::Connectors => None,
            })
            .flat_map(|p| p.legs.iter().filter(|l| l.train == k).map(|l| (l.board, l.alight)))
            .collect();
        text_chart(&mut text, &t.label, &t.chart, &legs, &multi.types);
    }
    for o in overlays {
        match o {
            Overlay::Route(p) => {
                let mut line = format!("route {} -> {}:", multi.types[p.origin], multi.types[p.destination]);
                for (x, leg) in p.legs.iter().enumerate() {
                    if x > 0 {
                        let _ = write!(line, " transfer at {};", multi.types[leg.board]);
                    }
                    let _ = write!(
                        line,
                        " {} -> {} on {}",
                        multi.types[leg.board], multi.types[leg.alight], multi.trains[leg.train].label
                    );
                    if x + 1 < p.legs.len() {
                        line.push(';');
                    }
                }
                let _ = writeln!(text, "{line}");
            }
            Overlay::Connectors => {
                let g = build_graph(multi);
                let names: Vec<&str> = g.connectors.keys().map(|&i| multi.types[i].as_str()).collect();
                let _ = writeln!(text, "connectors: {}", names.join(" "));
            }
        }
    }

    let lay = layout(multi);
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        lay.width, lay.height, lay.width, lay.height
    );
    for k in 0..multi.trains.len() {
        svg_chart(&mut svg, multi, &lay, k);
    }
    for o in overlays {
        match o {
            Overlay::Route(p) => svg_route(&mut svg, multi, &lay, p),
            Overlay::Connectors => svg_connectors(&mut svg, multi, &lay),
        }
    }
    svg.push_str("</svg>\n");
    ChartRendering { text, svg }
}
