//! JSON and SVG renderings of paths.

use std::fmt::Write as _;

use laakso::{Enclosure, Error, PathItem, PathRep, Rational, SpaceConfig};
use serde_json::{json, Value};

/// `"p/q"`, or `"p"` for integers.
pub fn fraction(r: &Rational) -> String {
    r.to_string()
}

pub fn enclosure(e: &Enclosure) -> Value {
    match e {
        Enclosure::Exact(r) => json!(fraction(r)),
        Enclosure::Within(iv) => json!({ "lo": fraction(&iv.lo), "hi": fraction(&iv.hi) }),
    }
}

pub fn path_json(path: &PathRep) -> Value {
    let mut segments = Vec::new();
    let mut jumps = Vec::new();
    let mut limit = Value::Null;
    for item in &path.items {
        match item {
            PathItem::Segment(s) => segments.push(json!({
                "address": s.address.to_string(),
                "from": fraction(&s.from),
                "to": fraction(&s.to),
            })),
            PathItem::Jump(j) => jumps.push(json!({
                "order": j.at.order,
                "height": fraction(&j.at.value),
                "kind": j.kind.to_string(),
                "from": j.from_address.to_string(),
                "to": j.to_address.to_string(),
            })),
            PathItem::Limit(l) => {
                limit = json!({
                    "omega_bar": enclosure(&l.omega_bar),
                    "truncated_at": l.truncated_at,
                    "from_address": l.from_address.to_string(),
                    "from_height": fraction(&l.from_height),
                    "to_address": l.to_address.to_string(),
                    "to_height": fraction(&l.to_height),
                })
            }
        }
    }
    json!({ "segments": segments, "jumps": jumps, "limit": limit })
}

const SIZE: f64 = 400.0;
const MARGIN: f64 = 20.0;

/// Viewport: attractor value on [0, 1] left to right, height on [0, 1]
/// bottom to top, drawn in a 440 x 440 box with a 20 unit margin.
fn xy(value: f64, height: f64) -> (f64, f64) {
    (MARGIN + value * SIZE, MARGIN + (1.0 - height) * SIZE)
}

fn to_f64(r: &Rational) -> f64 {
    Enclosure::Exact(r.clone()).approx_f64()
}

pub fn svg(cfg: &SpaceConfig, path: &PathRep) -> Result<String, Error> {
    let width = Rational::new(1.into(), 1_000_000.into());
    let place = |a: &laakso::Address| -> Result<f64, Error> { Ok(a.value(cfg.scale(), &width)?.approx_f64()) };
    let mut body = String::new();
    let line = |body: &mut String, a: (f64, f64), b: (f64, f64), style: &str| {
        let _ = writeln!(
            body,
            r#"  <line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" {style}/>"#,
            a.0, a.1, b.0, b.1
        );
    };
    for item in &path.items {
        match item {
            PathItem::Segment(s) => {
                let v = place(&s.address)?;
                line(&mut body, xy(v, to_f64(&s.from)), xy(v, to_f64(&s.to)), r#"stroke="black" stroke-width="2""#);
            }
            PathItem::Jump(j) => {
                let h = to_f64(&j.at.value);
                let (a, b) = (place(&j.from_address)?, place(&j.to_address)?);
                line(&mut body, xy(a, h), xy(b, h), r#"stroke="steelblue" stroke-dasharray="4 3""#);
            }
            PathItem::Limit(l) => {
                let omega = l.omega_bar.approx_f64();
                let (a, b) = (place(&l.from_address)?, place(&l.to_address)?);
                let dotted = r#"stroke="gray" stroke-dasharray="1 3""#;
                line(&mut body, xy(a, to_f64(&l.from_height)), xy(a, omega), dotted);
                line(&mut body, xy(a, omega), xy(b, omega), dotted);
                line(&mut body, xy(b, omega), xy(b, to_f64(&l.to_height)), r#"stroke="black" stroke-width="2""#);
            }
        }
    }
    for (p, colour) in [(&path.start, "green"), (&path.end, "red")] {
        let (x, y) = xy(place(p.address())?, to_f64(p.height()));
        let _ = writeln!(body, r#"  <circle cx="{x:.3}" cy="{y:.3}" r="4" fill="{colour}"/>"#);
    }
    let full = SIZE + 2.0 * MARGIN;
    Ok(format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{full}\" height=\"{full}\" viewBox=\"0 0 {full} {full}\">\n  <rect x=\"{MARGIN}\" y=\"{MARGIN}\" width=\"{SIZE}\" height=\"{SIZE}\" fill=\"none\" stroke=\"#ccc\"/>\n{body}</svg>\n"
    ))
}
