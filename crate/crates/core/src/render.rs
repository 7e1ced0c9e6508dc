//! SVG pictures of the curve invariant on the cylinder cut open along a
//! vertical line, optionally with the lines of a surgery slope.
//!
//! The meridian sits at x = 1/2 with marked points at half-integer heights.
//! Paths use only M, L and Z so that crossings can be recomputed exactly
//! from the emitted coordinates.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::curve::CurveProfile;
use crate::surgery::SlopePair;

const UNIT: f64 = 100.0;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RenderError {
    #[error("only box-class profiles with epsilon = 0 can be drawn")]
    Unsupported,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Overlay {
    pub slope: SlopePair,
    /// Draw -p/q instead of p/q.
    pub negative: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramSpec {
    pub profile: CurveProfile,
    pub overlay: Option<Overlay>,
}

fn num(x: f64) -> String {
    let s = format!("{x:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.to_string() }
}

struct Frame {
    top: f64,
}

impl Frame {
    fn pt(&self, x: f64, y: f64) -> String {
        format!("{} {}", num(UNIT * x), num(UNIT * (self.top - y)))
    }
}

pub fn render_curves(spec: &DiagramSpec) -> Result<String, RenderError> {
    let profile = &spec.profile;
    let census = match (&profile.e, profile.box_class, profile.epsilon) {
        (Some(e), true, 0) => e,
        _ => return Err(RenderError::Unsupported),
    };
    let g = profile.genus.max(1);
    let top = (g + 1) as f64;
    let frame = Frame { top };
    let (width, height) = (UNIT, UNIT * 2.0 * top);
    let (p, q) = spec.overlay.map_or((1, 1), |o| (o.slope.p, o.slope.q));
    let big_r = 1.0 / (8.0 * p.max(1) as f64);
    let small_r = 1.0 / (16.0 * q as f64);

    let mut svg = String::new();
    writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = num(width),
        h = num(height)
    )
    .unwrap();
    writeln!(svg, r##"<rect x="0" y="0" width="{}" height="{}" fill="white" stroke="#bbb"/>"##, num(width), num(height))
        .unwrap();
    writeln!(
        svg,
        r##"<line id="meridian" x1="{x}" y1="0" x2="{x}" y2="{h}" stroke="#999" stroke-dasharray="2 2"/>"##,
        x = num(UNIT * 0.5),
        h = num(height)
    )
    .unwrap();

    writeln!(svg, r#"<path id="gamma0" class="curve" fill="none" stroke="black" d="M {} L {}"/>"#, frame.pt(0.0, 0.0), frame.pt(1.0, 0.0))
        .unwrap();

    let mut by_height: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
    for (&(s, d), &c) in census {
        by_height.entry(s).or_default().extend(std::iter::repeat_n(d, c as usize));
    }
    for (&s, ds) in &by_height {
        let k = ds.len() as f64;
        for (j, &d) in ds.iter().enumerate() {
            let f = (j + 1) as f64 / k;
            let (rx, ry) = (big_r * f, small_r * f);
            let (lo, hi) = (s as f64 - 0.5, s as f64 + 0.5);
            // crossing of the two diagonals sits just above the lower peg
            let pts = [
                (0.5 - rx, hi),
                (0.5, hi + 2.0 * ry),
                (0.5 + rx, hi),
                (0.5 + rx, lo + 3.0 * ry),
                (0.5 - rx, lo),
                (0.5, lo - 2.0 * ry),
                (0.5 + rx, lo),
                (0.5 - rx, lo + 3.0 * ry),
            ];
            let mut d_attr = format!("M {}", frame.pt(pts[0].0, pts[0].1));
            for &(x, y) in &pts[1..] {
                write!(d_attr, " L {}", frame.pt(x, y)).unwrap();
            }
            d_attr.push_str(" Z");
            writeln!(
                svg,
                r##"<path id="box-s{s}-d{d}-{j}" class="curve" fill="none" stroke="#1f5fa8" d="{d_attr}"/>"##
            )
            .unwrap();
        }
    }

    for h in -(g + 1)..=g {
        let (cx, cy) = (UNIT * 0.5, UNIT * (top - (h as f64 + 0.5)));
        writeln!(svg, r#"<circle class="peg" cx="{}" cy="{}" r="{}"/>"#, num(cx), num(cy), num(UNIT * small_r * 0.5))
            .unwrap();
    }

    if let Some(o) = spec.overlay {
        let sign = if o.negative { -1.0 } else { 1.0 };
        let slope = sign * p as f64 / q as f64;
        let eps = 1.0 / (3.0 * q as f64);
        let reach = (g + 3) * q + p;
        for i in 0..p {
            let mut d_attr = String::new();
            let first = -reach + (i + reach).rem_euclid(p);
            for v in (first..=reach).step_by(p as usize) {
                let centre = -0.5 + v as f64 / q as f64 + eps;
                let (y0, y1) = (centre - 0.5 * slope, centre + 0.5 * slope);
                if y0.max(y1) < -top || y0.min(y1) > top {
                    continue;
                }
                if !d_attr.is_empty() {
                    d_attr.push(' ');
                }
                write!(d_attr, "M {} L {}", frame.pt(0.0, y0), frame.pt(1.0, y1)).unwrap();
            }
            let tag = if o.negative { "minus" } else { "plus" };
            writeln!(
                svg,
                r##"<path id="line-{tag}-{i}" class="overlay" fill="none" stroke="#c0392b" d="{d_attr}"/>"##
            )
            .unwrap();
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
