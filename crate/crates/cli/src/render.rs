//! SVG picture of the ideal polygon of a document: a semicircle for every
//! finite side and the two vertical sides at 0 and 1 running up to the top
//! edge, colored by pairing class.

use std::collections::HashMap;
use std::fmt::Write;

use crate::document::SequenceDocument;

pub const WIDTH: f64 = 1000.0;
pub const HEIGHT: f64 = 600.0;
const X_MIN: f64 = -0.05;
const X_MAX: f64 = 1.05;
const Y_MAX: f64 = 0.66;

const EVEN_COLOR: &str = "#d62728";
const ODD_COLOR: &str = "#9467bd";
const FREE_COLOR: &str = "#7f7f7f";
const PLAIN_COLOR: &str = "#000000";
const VERTICAL_COLOR: &str = "#1f77b4";

fn px(x: f64) -> f64 {
    (x - X_MIN) * WIDTH / (X_MAX - X_MIN)
}

fn py(y: f64) -> f64 {
    HEIGHT - y * HEIGHT / Y_MAX
}

/// Color of the `k`-th pairing class, spread around the hue circle.
fn pair_color(k: usize) -> String {
    let hue = (k as f64 * 137.508) % 360.0;
    format!("hsl({hue:.1},65%,42%)")
}

pub fn render_svg(doc: &SequenceDocument) -> String {
    let mut colors: HashMap<usize, String> = HashMap::new();
    let mut classes = 0;
    for (i, side) in doc.sides.iter().enumerate() {
        let color = match (side.label.as_str(), side.partner_index) {
            ("even", _) => EVEN_COLOR.to_string(),
            ("odd", _) => ODD_COLOR.to_string(),
            ("free", _) => FREE_COLOR.to_string(),
            ("paired", Some(j)) => match colors.get(&j) {
                Some(c) => c.clone(),
                None => {
                    classes += 1;
                    pair_color(classes)
                }
            },
            _ => PLAIN_COLOR.to_string(),
        };
        colors.insert(i, color);
    }

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    for x in [0.0, 1.0] {
        let _ = writeln!(
            out,
            r#"<line x1="{x:.3}" y1="{y0:.3}" x2="{x:.3}" y2="{y1:.3}" stroke="{VERTICAL_COLOR}" stroke-width="1.5"/>"#,
            x = px(x),
            y0 = py(0.0),
            y1 = py(Y_MAX),
        );
    }
    let value = |i: usize| doc.entries.get(i).map(|e| e.num as f64 / e.den as f64);
    for (i, side) in doc.sides.iter().enumerate() {
        let (Some(u), Some(v)) = (value(side.left_index), value(side.right_index)) else {
            continue;
        };
        let r = (v - u).abs() / 2.0 * WIDTH / (X_MAX - X_MIN);
        let _ = writeln!(
            out,
            r#"<path d="M {x1:.3} {y:.3} A {r:.3} {r:.3} 0 0 1 {x2:.3} {y:.3}" fill="none" stroke="{c}" stroke-width="1.5"/>"#,
            x1 = px(u),
            x2 = px(v),
            y = py(0.0),
            c = colors[&i],
        );
    }
    for e in &doc.entries {
        let _ = writeln!(
            out,
            r#"<text x="{x:.3}" y="{y:.3}" font-family="sans-serif" font-size="9" text-anchor="middle">{n}/{d}</text>"#,
            x = px(e.num as f64 / e.den as f64),
            y = py(0.0) - 4.0,
            n = e.num,
            d = e.den,
        );
    }
    out.push_str("</svg>\n");
    out
}
