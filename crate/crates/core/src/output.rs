//! CSV and SVG output.
//!
//! Numbers are written as the shortest decimal that parses back to the same
//! `f64`, so identical runs give identical bytes.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::measures::MeasureTriple;
use crate::scan::{EsdEvent, EventKind, FluctuationTrace, MeasureSeries};

pub const SERIES_HEADER: &str = "t,decoherence,purity,concurrence";
pub const EVENTS_HEADER: &str = "kind,t_event,t_lo,t_hi";
pub const TRACE_HEADER: &str = "t,re,im";

pub fn series_csv(s: &MeasureSeries) -> String {
    let mut out = String::with_capacity(64 * s.triples.len());
    out.push_str(SERIES_HEADER);
    out.push('\n');
    for (t, m) in s.times().into_iter().zip(&s.triples) {
        let _ = writeln!(out, "{:?},{:?},{:?},{:?}", t, m.decoherence, m.purity, m.concurrence);
    }
    out
}

pub fn events_csv(events: &[EsdEvent]) -> String {
    let mut out = String::from(EVENTS_HEADER);
    out.push('\n');
    for e in events {
        let _ = writeln!(out, "{},{:?},{:?},{:?}", e.kind, e.t_event, e.bracket.0, e.bracket.1);
    }
    out
}

pub fn trace_csv(tr: &FluctuationTrace) -> String {
    let mut out = String::from(TRACE_HEADER);
    out.push('\n');
    for (i, t) in tr.grid.times().into_iter().enumerate() {
        let _ = writeln!(out, "{:?},{:?},{:?}", t, tr.re_values[i], tr.im_values[i]);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesRow {
    pub t: f64,
    pub triple: MeasureTriple,
}

/// Reads a file written by [`series_csv`].
pub fn read_series_csv(text: &str) -> Result<Vec<SeriesRow>> {
    read_rows(text, SERIES_HEADER, |line, fields| {
        let x = parse_fields::<4>(line, fields)?;
        Ok(SeriesRow {
            t: x[0],
            triple: MeasureTriple {
                decoherence: x[1],
                purity: x[2],
                concurrence: x[3],
            },
        })
    })
}

/// Reads a file written by [`events_csv`].
pub fn read_events_csv(text: &str) -> Result<Vec<EsdEvent>> {
    read_rows(text, EVENTS_HEADER, |line, fields| {
        if fields.len() != 4 {
            return Err(parse_error(line, format!("expected 4 fields, found {}", fields.len())));
        }
        let kind: EventKind = fields[0].parse().map_err(|e| parse_error(line, e))?;
        let x = parse_fields::<3>(line, &fields[1..])?;
        if !(x[1] <= x[0] && x[0] <= x[2]) {
            return Err(parse_error(line, "event time outside its bracket".into()));
        }
        Ok(EsdEvent {
            kind,
            t_event: x[0],
            bracket: (x[1], x[2]),
        })
    })
}

fn read_rows<T>(text: &str, header: &str, mut row: impl FnMut(usize, &[&str]) -> Result<T>) -> Result<Vec<T>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim_end_matches('\r') == header => {}
        Some((_, h)) => return Err(parse_error(1, format!("expected header `{header}`, found `{h}`"))),
        None => return Err(parse_error(1, "empty file".into())),
    }
    let mut out = Vec::new();
    for (i, raw) in lines {
        let line = raw.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        out.push(row(i + 1, &fields)?);
    }
    Ok(out)
}

fn parse_fields<const N: usize>(line: usize, fields: &[&str]) -> Result<[f64; N]> {
    if fields.len() != N {
        return Err(parse_error(line, format!("expected {N} fields, found {}", fields.len())));
    }
    let mut out = [0.0; N];
    for (slot, f) in out.iter_mut().zip(fields) {
        *slot = f
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| parse_error(line, format!("`{f}` is not a finite number")))?;
    }
    Ok(out)
}

fn parse_error(line: usize, message: String) -> Error {
    Error::Parse { line, message }
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 420.0;
const MARGIN_LEFT: f64 = 64.0;
const MARGIN_RIGHT: f64 = 150.0;
const MARGIN_Y: f64 = 40.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#2ca02c", "#d62728", "#9467bd", "#ff7f0e", "#17becf"];

pub struct Line<'a> {
    pub label: String,
    pub y: &'a [f64],
}

/// Static SVG 1.1 line chart of several curves over a shared x axis.
pub fn svg_line_chart(title: &str, x_label: &str, x: &[f64], lines: &[Line<'_>]) -> String {
    let finite = |v: &&f64| v.is_finite();
    let (x_lo, x_hi) = bounds(x.iter().filter(finite).copied());
    let (y_lo, y_hi) = bounds(lines.iter().flat_map(|l| l.y.iter().filter(finite).copied()));
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - 2.0 * MARGIN_Y;
    let sx = |v: f64| MARGIN_LEFT + (v - x_lo) / (x_hi - x_lo) * plot_w;
    let sy = |v: f64| HEIGHT - MARGIN_Y - (v - y_lo) / (y_hi - y_lo) * plot_h;

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        escape(title)
    );
    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN_LEFT}" y="{MARGIN_Y}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );
    for k in 0..=4 {
        let fx = x_lo + (x_hi - x_lo) * k as f64 / 4.0;
        let fy = y_lo + (y_hi - y_lo) * k as f64 / 4.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>"#,
            sx(fx),
            HEIGHT - MARGIN_Y + 16.0,
            tick(fx)
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="end">{}</text>"#,
            MARGIN_LEFT - 6.0,
            sy(fy) + 4.0,
            tick(fy)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">{}</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 6.0,
        escape(x_label)
    );
    for (i, line) in lines.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut points = String::new();
        for (&xv, &yv) in x.iter().zip(line.y) {
            if xv.is_finite() && yv.is_finite() {
                let _ = write!(points, "{:.2},{:.2} ", sx(xv), sy(yv));
            }
        }
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            points.trim_end()
        );
        let ly = MARGIN_Y + 16.0 + 18.0 * i as f64;
        let lx = WIDTH - MARGIN_RIGHT + 12.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#,
            lx + 20.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12">{}</text>"#,
            lx + 26.0,
            ly + 4.0,
            escape(&line.label)
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Chart of decoherence, purity and concurrence for one series.
pub fn series_svg(title: &str, s: &MeasureSeries) -> String {
    let (d, p, c) = (s.decoherence(), s.purity(), s.concurrence());
    svg_line_chart(
        title,
        "t",
        &s.times(),
        &[
            Line { label: "decoherence".into(), y: &d },
            Line { label: "purity".into(), y: &p },
            Line { label: "concurrence".into(), y: &c },
        ],
    )
}

pub fn trace_svg(title: &str, tr: &FluctuationTrace) -> String {
    svg_line_chart(
        title,
        "t",
        &tr.grid.times(),
        &[
            Line { label: format!("Re ρ{}{}", tr.element.row(), tr.element.col()), y: &tr.re_values },
            Line { label: format!("Im ρ{}{}", tr.element.row(), tr.element.col()), y: &tr.im_values },
        ],
    )
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !(lo.is_finite() && hi.is_finite()) {
        (0.0, 1.0)
    } else if hi - lo < 1e-12 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn tick(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}
