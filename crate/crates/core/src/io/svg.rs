//! SVG drawing of a stressed planar framework.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{abs_max, IoError, Result};
use crate::exactnum::{Rat, Vec3};
use crate::stress::StressedFramework;
use crate::surface::{ConeCertifier, ConeSpec, Membership};

const CANVAS: i64 = 1000;
const MARGIN: i64 = 20;
const DIGITS: usize = 12;

#[derive(Clone, Debug)]
pub struct RenderStyle {
    pub min_width: Rat,
    pub max_width: Rat,
    /// Canvas units per unit of `|ω̄|`; by default the largest stress gets `max_width`.
    pub width_scale: Option<Rat>,
    pub positive_color: String,
    pub negative_color: String,
    pub neutral_color: String,
    pub vertex_radius: Rat,
    pub labels: bool,
}

impl Default for RenderStyle {
    fn default() -> Self {
        RenderStyle {
            min_width: Rat::new(1.into(), 4.into()),
            max_width: Rat::from(BigInt::from(6)),
            width_scale: None,
            positive_color: "#1f5fbf".into(),
            negative_color: "#c62828".into(),
            neutral_color: "#9e9e9e".into(),
            vertex_radius: Rat::from(BigInt::from(2)),
            labels: false,
        }
    }
}

/// The two coordinates kept when drawing on a plane with normal `n`: the
/// largest `|nᵢ|` (first one on ties) is dropped.
pub fn chart_axes(normal: &Vec3<BigInt>) -> (usize, usize) {
    let drop = (0..3)
        .rev()
        .max_by_key(|&i| normal.0[i].abs())
        .expect("three coordinates");
    match drop {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

/// Plain decimal with at most `digits` significant digits, rounded half away
/// from zero, trailing zeros removed.
pub fn format_decimal(r: &Rat, digits: usize) -> String {
    if r.is_zero() {
        return "0".into();
    }
    let neg = r.is_negative();
    let a = r.abs();
    let ten = BigInt::from(10);
    let pow10 = |e: i64| -> Rat {
        let p = num_traits::pow(ten.clone(), e.unsigned_abs() as usize);
        if e >= 0 {
            Rat::from(p)
        } else {
            Rat::new(BigInt::one(), p)
        }
    };
    // 10^e ≤ a < 10^(e+1)
    let mut e = (a.numer().to_string().len() as i64) - (a.denom().to_string().len() as i64);
    while pow10(e) > a {
        e -= 1;
    }
    while pow10(e + 1) <= a {
        e += 1;
    }
    let shift = digits as i64 - 1 - e;
    let round = |shift: i64| -> BigInt {
        let x = &a * pow10(shift);
        let (q, rem) = x.numer().div_rem(x.denom());
        if rem * 2 >= *x.denom() {
            q + 1
        } else {
            q
        }
    };
    let mut shift = shift;
    let mut n = round(shift);
    if n.to_string().len() > digits {
        shift -= 1;
        n = round(shift);
    }
    let mut s = n.to_string();
    if shift > 0 {
        let shift = shift as usize;
        if s.len() <= shift {
            s = format!("{}{}", "0".repeat(shift - s.len() + 1), s);
        }
        s.insert(s.len() - shift, '.');
        let t = s.trim_end_matches('0').trim_end_matches('.');
        s = t.to_string();
    } else {
        s.push_str(&"0".repeat((-shift) as usize));
    }
    if neg {
        s.insert(0, '-');
    }
    s
}

fn fmt(r: &Rat) -> String {
    format_decimal(r, DIGITS)
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Corners of the cone section `cone ∩ plane` as display approximations, or
/// `None` when the section is unbounded.
fn cone_section(f: &StressedFramework, certifier: &ConeCertifier) -> Option<Vec<Vec3<Rat>>> {
    let n = f.plane.normal().to_rat();
    let c = Rat::from(f.plane.offset().clone());
    let mut corners = Vec::new();
    for ray in certifier.ray_enclosures() {
        let mid = Vec3(ray.map(|iv| (&iv.lo + &iv.hi) / Rat::from(BigInt::from(2))));
        let d = n.dot(&mid);
        if d.is_zero() || (&c / &d).is_negative() {
            return None;
        }
        corners.push(mid.scale(&(&c / &d)));
    }
    Some(corners)
}

/// Draws the framework: one `<line>` per edge coloured by the sign of `ω̄`
/// with width proportional to `|ω̄|`, then the vertices. With a cone every
/// vertex is first checked, exactly, to lie strictly inside it, and the
/// section of the cone by the plane frames the picture.
pub fn render_svg(f: &StressedFramework, style: &RenderStyle, cone: Option<&ConeSpec>) -> Result<String> {
    if f.vertices.is_empty() {
        return Err(IoError::EmptyFramework);
    }
    let mut section = None;
    if let Some(cone) = cone {
        let mut cert = ConeCertifier::new(cone).map_err(|e| IoError::Invalid(e.to_string()))?;
        for (v, p) in f.vertices.iter().enumerate() {
            let m = cert
                .classify(&p.clear_denominators())
                .map_err(|e| IoError::Invalid(e.to_string()))?;
            if m != Membership::Interior {
                return Err(IoError::VertexOutsideCone(v));
            }
        }
        section = cone_section(f, &cert);
    }

    let (a, b) = chart_axes(f.plane.normal());
    let chart = |p: &Vec3<Rat>| (p.0[a].clone(), p.0[b].clone());
    let pts: Vec<(Rat, Rat)> = f.vertices.iter().map(chart).collect();
    let frame: Vec<(Rat, Rat)> = match &section {
        Some(tri) => tri.iter().map(chart).collect(),
        None => pts.clone(),
    };
    let min_u = frame.iter().map(|p| &p.0).min().unwrap().clone();
    let max_u = frame.iter().map(|p| &p.0).max().unwrap().clone();
    let min_v = frame.iter().map(|p| &p.1).min().unwrap().clone();
    let max_v = frame.iter().map(|p| &p.1).max().unwrap().clone();
    let span = std::cmp::max(&max_u - &min_u, &max_v - &min_v);
    let scale = if span.is_zero() {
        Rat::one()
    } else {
        Rat::from(BigInt::from(CANVAS)) / span
    };
    let margin = Rat::from(BigInt::from(MARGIN));
    let to_canvas = |(u, v): &(Rat, Rat)| ((u - &min_u) * &scale + &margin, (&max_v - v) * &scale + &margin);
    let width = (&max_u - &min_u) * &scale + &margin * Rat::from(BigInt::from(2));
    let height = (&max_v - &min_v) * &scale + &margin * Rat::from(BigInt::from(2));

    let stresses: Vec<Rat> = f.edges.iter().filter_map(|e| e.omega_bar.clone()).collect();
    let k = style
        .width_scale
        .clone()
        .unwrap_or_else(|| &style.max_width / abs_max(&stresses));

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">",
        w = fmt(&width),
        h = fmt(&height)
    );
    if let Some(tri) = &section {
        let corners: Vec<String> = tri
            .iter()
            .map(|p| {
                let (x, y) = to_canvas(&chart(p));
                format!("{},{}", fmt(&x), fmt(&y))
            })
            .collect();
        let _ = writeln!(
            s,
            "<polygon class=\"cone\" points=\"{}\" fill=\"none\" stroke=\"#bdbdbd\" stroke-dasharray=\"4 3\"/>",
            corners.join(" ")
        );
    }
    let _ = writeln!(s, "<g class=\"edges\" stroke-linecap=\"round\">");
    for e in &f.edges {
        let (x1, y1) = to_canvas(&pts[e.i]);
        let (x2, y2) = to_canvas(&pts[e.j]);
        let (color, w) = match &e.omega_bar {
            Some(w) if w.is_positive() => (&style.positive_color, &k * w.abs()),
            Some(w) if w.is_negative() => (&style.negative_color, &k * w.abs()),
            _ => (&style.neutral_color, style.min_width.clone()),
        };
        let w = w.clamp(style.min_width.clone(), style.max_width.clone());
        let _ = writeln!(
            s,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"{}\"/>",
            fmt(&x1),
            fmt(&y1),
            fmt(&x2),
            fmt(&y2),
            color,
            fmt(&w)
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, "<g class=\"vertices\" fill=\"#212121\">");
    for p in &pts {
        let (x, y) = to_canvas(p);
        let _ = writeln!(
            s,
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
            fmt(&x),
            fmt(&y),
            fmt(&style.vertex_radius)
        );
    }
    let _ = writeln!(s, "</g>");
    if style.labels {
        let _ = writeln!(s, "<g class=\"labels\" font-family=\"monospace\" font-size=\"9\">");
        for (v, p) in pts.iter().enumerate() {
            let (x, y) = to_canvas(p);
            let text = match &f.labels {
                Some(l) => format!("{},{},{}", l[v].i, l[v].j, l[v].k),
                None => v.to_string(),
            };
            let _ = writeln!(
                s,
                "<text x=\"{}\" y=\"{}\">{}</text>",
                fmt(&(x + &style.vertex_radius)),
                fmt(&(y - &style.vertex_radius)),
                xml_escape(&text)
            );
        }
        let _ = writeln!(s, "</g>");
    }
    s.push_str("</svg>\n");
    Ok(s)
}
