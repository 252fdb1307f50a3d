//! Deterministic SVG rendering: filled sublevel-set contours with a sample
//! scatter for 2-D estimates, shaded bands with a trajectory fan for 1-D
//! tubes. Byte-identical output for identical inputs.

use std::fmt::Write as _;

use reachkit::contour::extract_contours;
use reachkit::ode::SampleSet;
use reachkit::reachset::{ReachEstimate, ReachTube, ScalarField};
use reachkit::Result;

const W: f64 = 640.0;
const H: f64 = 640.0;
const MARGIN: f64 = 50.0;

fn fmt(v: f64) -> String {
    // fixed decimals keep the output bytes stable
    format!("{v:.3}")
}

struct Frame {
    x_lo: f64,
    x_hi: f64,
    y_lo: f64,
    y_hi: f64,
    height: f64,
}

impl Frame {
    fn new(x: (f64, f64), y: (f64, f64), height: f64) -> Self {
        Self {
            x_lo: x.0,
            x_hi: x.1,
            y_lo: y.0,
            y_hi: y.1,
            height,
        }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x_lo) / (self.x_hi - self.x_lo) * (W - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        // SVG y grows downward
        self.height - MARGIN - (y - self.y_lo) / (self.y_hi - self.y_lo) * (self.height - 2.0 * MARGIN)
    }
}

fn svg_header(out: &mut String, height: f64) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{height}" viewBox="0 0 {W} {height}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
}

fn svg_axes(out: &mut String, f: &Frame, x_label: &str, y_label: &str) {
    let _ = writeln!(
        out,
        r#"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black" stroke-width="1"/>"#,
        fmt(MARGIN),
        fmt(MARGIN),
        fmt(W - 2.0 * MARGIN),
        fmt(f.height - 2.0 * MARGIN)
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">{}</text>"#,
        fmt(W / 2.0),
        fmt(f.height - 12.0),
        x_label
    );
    let _ = writeln!(
        out,
        r#"<text x="14" y="{}" font-size="12" text-anchor="middle" transform="rotate(-90 14 {})">{}</text>"#,
        fmt(f.height / 2.0),
        fmt(f.height / 2.0),
        y_label
    );
    for (value, px, py, anchor) in [
        (f.x_lo, f.px(f.x_lo), f.height - MARGIN + 16.0, "middle"),
        (f.x_hi, f.px(f.x_hi), f.height - MARGIN + 16.0, "middle"),
        (f.y_lo, MARGIN - 6.0, f.py(f.y_lo) + 4.0, "end"),
        (f.y_hi, MARGIN - 6.0, f.py(f.y_hi) + 4.0, "end"),
    ] {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="10" text-anchor="{}">{}</text>"#,
            fmt(px),
            fmt(py),
            anchor,
            fmt(value)
        );
    }
}

/// Filled contour of the estimate's sublevel set plus the sample scatter.
pub fn render_2d(
    field: &ScalarField,
    estimate: &ReachEstimate,
    samples: Option<&SampleSet>,
    labels: (&str, &str),
) -> Result<String> {
    let frame = Frame::new(field.bounds[0], field.bounds[1], H);
    let mut out = String::new();
    svg_header(&mut out, H);

    // the membership boundary is at threshold + slack, same as `contains`
    let level = field.threshold + estimate.slack();
    let contours = extract_contours(field, level, true);
    let mut path = String::new();
    for polyline in &contours {
        for (i, &(x, y)) in polyline.iter().enumerate() {
            let cmd = if i == 0 { 'M' } else { 'L' };
            let _ = write!(path, "{cmd}{} {} ", fmt(frame.px(x)), fmt(frame.py(y)));
        }
        path.push_str("Z ");
    }
    let _ = writeln!(
        out,
        r##"<path d="{}" fill="#4a7fd4" fill-opacity="0.5" fill-rule="evenodd" stroke="#1d4e9e" stroke-width="1.2"/>"##,
        path.trim_end()
    );

    if let Some(set) = samples {
        for i in 0..set.n_samples() {
            let row = set.terminal_row(i);
            let _ = writeln!(
                out,
                r#"<circle cx="{}" cy="{}" r="1.2" fill="black"/>"#,
                fmt(frame.px(row[0])),
                fmt(frame.py(row[1]))
            );
        }
    }
    svg_axes(&mut out, &frame, labels.0, labels.1);
    out.push_str("</svg>\n");
    Ok(out)
}

/// Shaded reach band of a 1-D tube over time, with a fan of sample
/// trajectories underneath.
pub fn render_tube(
    tube: &ReachTube,
    intervals: &[(f64, f64)],
    samples: Option<&SampleSet>,
    fan: usize,
    label: &str,
) -> Result<String> {
    let t_lo = tube.times[0];
    let t_hi = *tube.times.last().unwrap();
    let mut y_lo = f64::INFINITY;
    let mut y_hi = f64::NEG_INFINITY;
    for (lo, hi) in intervals {
        y_lo = y_lo.min(*lo);
        y_hi = y_hi.max(*hi);
    }
    let pad = 0.08 * (y_hi - y_lo).max(1e-9);
    let frame = Frame::new((t_lo, t_hi), (y_lo - pad, y_hi + pad), H * 0.75);

    let mut out = String::new();
    svg_header(&mut out, frame.height);

    if let (Some(set), true) = (samples, fan > 0) {
        if let Some(full) = set.full() {
            let count = set.n_samples().min(fan);
            for s in 0..count {
                let mut d = String::new();
                for (i, t) in full.times.iter().enumerate() {
                    let cmd = if i == 0 { 'M' } else { 'L' };
                    let _ = write!(
                        d,
                        "{cmd}{} {} ",
                        fmt(frame.px(*t)),
                        fmt(frame.py(full.state(s, i)[0]))
                    );
                }
                let _ = writeln!(
                    out,
                    r##"<path d="{}" fill="none" stroke="#e8a4c9" stroke-width="0.6"/>"##,
                    d.trim_end()
                );
            }
        }
    }

    // band polygon: upper edge forward, lower edge backward
    let mut band = String::new();
    for (i, t) in tube.times.iter().enumerate() {
        let cmd = if i == 0 { 'M' } else { 'L' };
        let _ = write!(band, "{cmd}{} {} ", fmt(frame.px(*t)), fmt(frame.py(intervals[i].1)));
    }
    for (i, t) in tube.times.iter().enumerate().rev() {
        let _ = write!(band, "L{} {} ", fmt(frame.px(*t)), fmt(frame.py(intervals[i].0)));
    }
    band.push('Z');
    let _ = writeln!(
        out,
        r##"<path d="{}" fill="#c2447f" fill-opacity="0.45" stroke="#8f2859" stroke-width="1"/>"##,
        band
    );

    svg_axes(&mut out, &frame, "t", label);
    out.push_str("</svg>\n");
    Ok(out)
}
