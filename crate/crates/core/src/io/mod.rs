//! JSON documents for matrices, cones, sail specs, surfaces and stressed
//! frameworks, plus SVG rendering of planar frameworks.
//!
//! Numbers are exact: integers are JSON integers, non-integral rationals are
//! `"p/q"` strings. Float literals are rejected outright.

mod svg;

pub use svg::{chart_axes, format_decimal, render_svg, RenderStyle};

use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde_json::{Map, Number, Value};
use thiserror::Error;

use crate::exactnum::{Int, LatticePoint, Mat3, Rat, Vec3};
use crate::stress::{EdgeStress, ProjectionPlane, StressedFramework};
use crate::surface::{build_surface, ConeSpec, OrbitLabel, OrientedSurface, PeriodicSailSpec, RaySign};

pub const VERSION: u64 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("ParseError: line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("FloatRejected: float literal {literal:?} at line {line}, column {column}")]
    FloatRejected { line: usize, column: usize, literal: String },
    #[error("KindMismatch: expected {expected}, found {found}")]
    KindMismatch { expected: String, found: String },
    #[error("InvalidDocument: {0}")]
    Invalid(String),
    #[error("EmptyFramework: nothing to draw")]
    EmptyFramework,
    #[error("VertexOutsideCone: vertex {0} is not strictly inside the cone")]
    VertexOutsideCone(usize),
    #[error("IoError: {0}")]
    Io(String),
}

impl IoError {
    pub fn name(&self) -> &'static str {
        match self {
            IoError::Parse { .. } => "ParseError",
            IoError::FloatRejected { .. } => "FloatRejected",
            IoError::KindMismatch { .. } => "KindMismatch",
            IoError::Invalid(_) => "InvalidDocument",
            IoError::EmptyFramework => "EmptyFramework",
            IoError::VertexOutsideCone(_) => "VertexOutsideCone",
            IoError::Io(_) => "IoError",
        }
    }
}

pub type Result<T> = std::result::Result<T, IoError>;

fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(IoError::Invalid(msg.into()))
}

/// A typed document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    Matrix(Mat3<Rat>),
    Cone(ConeSpec),
    SailSpec(PeriodicSailSpec),
    Surface(OrientedSurface),
    Framework(StressedFramework),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Matrix(_) => "matrix",
            Document::Cone(_) => "cone",
            Document::SailSpec(_) => "sailspec",
            Document::Surface(_) => "surface",
            Document::Framework(_) => "framework",
        }
    }

    fn mismatch<T>(&self, expected: &str) -> Result<T> {
        Err(IoError::KindMismatch {
            expected: expected.into(),
            found: self.kind().into(),
        })
    }

    pub fn into_matrix(self) -> Result<Mat3<Rat>> {
        match self {
            Document::Matrix(m) => Ok(m),
            d => d.mismatch("matrix"),
        }
    }

    pub fn into_cone(self) -> Result<ConeSpec> {
        match self {
            Document::Cone(c) => Ok(c),
            d => d.mismatch("cone"),
        }
    }

    pub fn into_sailspec(self) -> Result<PeriodicSailSpec> {
        match self {
            Document::SailSpec(s) => Ok(s),
            d => d.mismatch("sailspec"),
        }
    }

    pub fn into_surface(self) -> Result<OrientedSurface> {
        match self {
            Document::Surface(s) => Ok(s),
            d => d.mismatch("surface"),
        }
    }

    pub fn into_framework(self) -> Result<StressedFramework> {
        match self {
            Document::Framework(f) => Ok(f),
            d => d.mismatch("framework"),
        }
    }
}

// ---- exact scalars ----

/// `"p/q"` in lowest terms, or the bare integer.
pub fn format_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"n"` or `"p/q"` with `q ≠ 0`; the result is reduced.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p = Int::from_str(p.trim()).ok()?;
            let q = Int::from_str(q.trim()).ok()?;
            (!q.is_zero()).then(|| Rat::new(p, q))
        }
        None => Int::from_str(s).ok().map(Rat::from),
    }
}

fn int_value(i: &Int) -> Value {
    Value::Number(Number::from_str(&i.to_string()).expect("integer literal"))
}

fn rat_value(r: &Rat) -> Value {
    if r.is_integer() {
        int_value(r.numer())
    } else {
        Value::String(format_rat(r))
    }
}

fn get_rat(v: &Value, what: &str) -> Result<Rat> {
    match v {
        Value::Number(n) => match Int::from_str(&n.to_string()) {
            Ok(i) => Ok(Rat::from(i)),
            Err(_) => invalid(format!("{what}: {n} is not an integer")),
        },
        Value::String(s) => parse_rat(s).map_or_else(|| invalid(format!("{what}: {s:?} is not a rational")), Ok),
        _ => invalid(format!("{what}: expected a number")),
    }
}

fn get_int(v: &Value, what: &str) -> Result<Int> {
    let r = get_rat(v, what)?;
    if !r.is_integer() {
        return invalid(format!("{what}: expected an integer"));
    }
    Ok(r.to_integer())
}

fn get_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .and_then(|x| usize::try_from(x).ok())
        .map_or_else(|| invalid(format!("{what}: expected a non-negative index")), Ok)
}

fn get_i64(v: &Value, what: &str) -> Result<i64> {
    v.as_i64().map_or_else(|| invalid(format!("{what}: expected a small integer")), Ok)
}

fn get_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().map_or_else(|| invalid(format!("{what}: expected an array")), Ok)
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).map_or_else(|| invalid(format!("missing field {key:?}")), Ok)
}

fn get_triple<T, F: Fn(&Value, &str) -> Result<T>>(v: &Value, what: &str, f: F) -> Result<[T; 3]> {
    let a = get_array(v, what)?;
    if a.len() != 3 {
        return invalid(format!("{what}: expected three entries"));
    }
    Ok([f(&a[0], what)?, f(&a[1], what)?, f(&a[2], what)?])
}

fn rat_vec_value(v: &Vec3<Rat>) -> Value {
    Value::Array(v.0.iter().map(rat_value).collect())
}

fn int_vec_value(v: &LatticePoint) -> Value {
    Value::Array(v.0.iter().map(int_value).collect())
}

fn get_rat_vec(v: &Value, what: &str) -> Result<Vec3<Rat>> {
    get_triple(v, what, get_rat).map(Vec3)
}

fn get_int_vec(v: &Value, what: &str) -> Result<LatticePoint> {
    get_triple(v, what, get_int).map(Vec3)
}

fn rat_matrix_value(m: &Mat3<Rat>) -> Value {
    Value::Array(m.0.iter().map(|r| Value::Array(r.iter().map(rat_value).collect())).collect())
}

fn int_matrix_value(m: &Mat3<Int>) -> Value {
    Value::Array(m.0.iter().map(|r| Value::Array(r.iter().map(int_value).collect())).collect())
}

fn get_rat_matrix(v: &Value, what: &str) -> Result<Mat3<Rat>> {
    let rows = get_triple(v, what, |r, w| get_triple(r, w, get_rat))?;
    Ok(Mat3(rows))
}

fn get_int_matrix(v: &Value, what: &str) -> Result<Mat3<Int>> {
    let rows = get_triple(v, what, |r, w| get_triple(r, w, get_int))?;
    Ok(Mat3(rows))
}

fn label_value(l: &OrbitLabel) -> Value {
    Value::Array(vec![l.i.into(), l.j.into(), (l.k as u64).into()])
}

fn get_label(v: &Value, what: &str) -> Result<OrbitLabel> {
    let a = get_array(v, what)?;
    if a.len() != 3 {
        return invalid(format!("{what}: a label is [i, j, k]"));
    }
    Ok(OrbitLabel::new(get_i64(&a[0], what)?, get_i64(&a[1], what)?, get_usize(&a[2], what)?))
}

fn index_list_value(f: &[usize]) -> Value {
    Value::Array(f.iter().map(|&v| (v as u64).into()).collect())
}

fn get_index_list(v: &Value, what: &str) -> Result<Vec<usize>> {
    get_array(v, what)?.iter().map(|x| get_usize(x, what)).collect()
}

fn faces_value(faces: &[Vec<usize>]) -> Value {
    Value::Array(faces.iter().map(|f| index_list_value(f)).collect())
}

fn get_faces(v: &Value) -> Result<Vec<Vec<usize>>> {
    get_array(v, "faces")?.iter().map(|f| get_index_list(f, "faces")).collect()
}

fn get_edge_pairs(v: &Value) -> Result<Vec<(usize, usize)>> {
    get_array(v, "edges")?
        .iter()
        .map(|e| {
            let p = get_index_list(e, "edges")?;
            match p[..] {
                [a, b] => Ok((a, b)),
                _ => invalid("edges: an edge is [i, j]"),
            }
        })
        .collect()
}

// ---- documents ----

fn signs_string(s: &[RaySign; 3]) -> String {
    s.iter().map(|r| r.as_char()).collect()
}

fn parse_signs(s: &str) -> Result<[RaySign; 3]> {
    let v: Vec<RaySign> = s
        .chars()
        .map(|c| match c {
            '+' => Ok(RaySign::Plus),
            '-' => Ok(RaySign::Minus),
            _ => invalid(format!("signs: unexpected {c:?}")),
        })
        .collect::<Result<_>>()?;
    v.try_into().map_or_else(|_| invalid("signs: expected three of + and -"), Ok)
}

fn body(doc: &Document) -> Map<String, Value> {
    let mut m = Map::new();
    match doc {
        Document::Matrix(a) => {
            m.insert("rows".into(), rat_matrix_value(a));
        }
        Document::Cone(ConeSpec::Algebraic { matrix, signs }) => {
            m.insert("matrix".into(), int_matrix_value(matrix));
            m.insert("signs".into(), Value::String(signs_string(signs)));
        }
        Document::Cone(ConeSpec::Rational { rays }) => {
            m.insert("rays".into(), Value::Array(rays.iter().map(rat_vec_value).collect()));
        }
        Document::SailSpec(s) => {
            m.insert("matrix".into(), int_matrix_value(&s.matrix));
            m.insert("M".into(), int_matrix_value(&s.m));
            m.insert("N".into(), int_matrix_value(&s.n));
            m.insert("seeds".into(), Value::Array(s.seeds.iter().map(int_vec_value).collect()));
            m.insert(
                "fd_edges".into(),
                Value::Array(
                    s.fd_edges
                        .iter()
                        .map(|[a, b]| Value::Array(vec![label_value(a), label_value(b)]))
                        .collect(),
                ),
            );
            m.insert(
                "fd_faces".into(),
                Value::Array(
                    s.fd_faces
                        .iter()
                        .map(|f| Value::Array(f.iter().map(label_value).collect()))
                        .collect(),
                ),
            );
        }
        Document::Surface(s) => {
            m.insert("vertices".into(), Value::Array(s.vertices().iter().map(rat_vec_value).collect()));
            m.insert("faces".into(), faces_value(s.faces()));
            m.insert(
                "edges".into(),
                Value::Array(s.edges().iter().map(|&(a, b)| index_list_value(&[a, b])).collect()),
            );
            if let Some(l) = s.labels() {
                m.insert("labels".into(), Value::Array(l.iter().map(label_value).collect()));
            }
        }
        Document::Framework(f) => {
            let mut plane = Map::new();
            plane.insert("normal".into(), int_vec_value(f.plane.normal()));
            plane.insert("offset".into(), int_value(f.plane.offset()));
            m.insert("plane".into(), Value::Object(plane));
            m.insert("vertices".into(), Value::Array(f.vertices.iter().map(rat_vec_value).collect()));
            m.insert("betas".into(), Value::Array(f.betas.iter().map(rat_value).collect()));
            let edges = f
                .edges
                .iter()
                .map(|e| {
                    let mut o = Map::new();
                    o.insert("i".into(), (e.i as u64).into());
                    o.insert("j".into(), (e.j as u64).into());
                    if let Some(w) = &e.omega {
                        o.insert("omega".into(), rat_value(w));
                    }
                    if let Some(w) = &e.omega_bar {
                        o.insert("omega_bar".into(), rat_value(w));
                    }
                    Value::Object(o)
                })
                .collect();
            m.insert("edges".into(), Value::Array(edges));
            if let Some(faces) = &f.faces {
                m.insert("faces".into(), faces_value(faces));
            }
            m.insert(
                "interior_flags".into(),
                Value::Array(f.interior.iter().map(|b| Value::Bool(*b)).collect()),
            );
            if let Some(l) = &f.labels {
                m.insert("labels".into(), Value::Array(l.iter().map(label_value).collect()));
            }
        }
    }
    m.insert("kind".into(), Value::String(doc.kind().into()));
    m.insert("version".into(), VERSION.into());
    m
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

/// Pretty printer that keeps arrays of scalars on one line.
fn write_value(v: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Array(items) if items.iter().all(is_scalar) => {
            let parts: Vec<String> = items.iter().map(Value::to_string).collect();
            out.push('[');
            out.push_str(&parts.join(", "));
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (k, item) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(item, indent + 1, out);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) if map.values().all(is_scalar) && map.len() <= 4 => {
            let parts: Vec<String> = map.iter().map(|(k, v)| format!("{}: {v}", Value::from(k.as_str()))).collect();
            out.push('{');
            out.push_str(&parts.join(", "));
            out.push('}');
        }
        Value::Object(map) => {
            out.push_str("{\n");
            for (k, (key, item)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::from(key.as_str()).to_string());
                out.push_str(": ");
                write_value(item, indent + 1, out);
                out.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}

/// Canonical text: sorted keys, two-space indentation, scalar arrays on one
/// line, trailing newline.
pub fn write_document(doc: &Document) -> String {
    let mut s = String::new();
    write_value(&Value::Object(body(doc)), 0, &mut s);
    s.push('\n');
    s
}

/// Position and text of the first float literal outside strings.
fn find_float(text: &str) -> Option<(usize, usize, String)> {
    let (mut line, mut col) = (1, 1);
    let mut chars = text.chars().peekable();
    let mut in_string = false;
    while let Some(c) = chars.next() {
        let (l0, c0) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
        if in_string {
            match c {
                '\\' => {
                    chars.next();
                    col += 1;
                }
                '"' => in_string = false,
                _ => {}
            }
            continue;
        }
        if c == '"' {
            in_string = true;
        } else if c == '-' || c.is_ascii_digit() {
            let mut lit = c.to_string();
            while let Some(&d) = chars.peek() {
                if d.is_ascii_digit() || matches!(d, '.' | 'e' | 'E' | '+' | '-') {
                    lit.push(d);
                    chars.next();
                    col += 1;
                } else {
                    break;
                }
            }
            if lit.contains(['.', 'e', 'E']) {
                return Some((l0, c0, lit));
            }
        }
    }
    None
}

pub fn read_document(text: &str) -> Result<Document> {
    let value: Value = serde_json::from_str(text).map_err(|e| IoError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if let Some((line, column, literal)) = find_float(text) {
        return Err(IoError::FloatRejected { line, column, literal });
    }
    let Value::Object(obj) = value else {
        return invalid("top level must be an object");
    };
    match obj.get("version").and_then(Value::as_u64) {
        Some(VERSION) => {}
        _ => return invalid(format!("expected \"version\": {VERSION}")),
    }
    let kind = field(&obj, "kind")?.as_str().unwrap_or_default();
    match kind {
        "matrix" => Ok(Document::Matrix(get_rat_matrix(field(&obj, "rows")?, "rows")?)),
        "cone" => read_cone(&obj).map(Document::Cone),
        "sailspec" => read_sailspec(&obj).map(Document::SailSpec),
        "surface" => read_surface(&obj).map(Document::Surface),
        "framework" => read_framework(&obj).map(Document::Framework),
        other => invalid(format!("unknown kind {other:?}")),
    }
}

/// Reads a document and checks its kind.
pub fn read_document_as(text: &str, kind: &str) -> Result<Document> {
    let doc = read_document(text)?;
    if doc.kind() != kind {
        return doc.mismatch(kind);
    }
    Ok(doc)
}

pub fn read_file(path: &std::path::Path) -> Result<Document> {
    let text = std::fs::read_to_string(path).map_err(|e| IoError::Io(format!("{}: {e}", path.display())))?;
    read_document(&text)
}

fn read_cone(obj: &Map<String, Value>) -> Result<ConeSpec> {
    let r = if let Some(rays) = obj.get("rays") {
        let rays = get_array(rays, "rays")?;
        if rays.len() != 3 {
            return invalid("rays: expected three rays");
        }
        ConeSpec::rational([
            get_rat_vec(&rays[0], "rays")?,
            get_rat_vec(&rays[1], "rays")?,
            get_rat_vec(&rays[2], "rays")?,
        ])
    } else {
        let m = get_int_matrix(field(obj, "matrix")?, "matrix")?;
        let signs = parse_signs(field(obj, "signs")?.as_str().unwrap_or_default())?;
        ConeSpec::algebraic(m, signs)
    };
    r.map_err(|e| IoError::Invalid(e.to_string()))
}

fn read_sailspec(obj: &Map<String, Value>) -> Result<PeriodicSailSpec> {
    let seeds = get_array(field(obj, "seeds")?, "seeds")?
        .iter()
        .map(|s| get_int_vec(s, "seeds"))
        .collect::<Result<_>>()?;
    let fd_edges = get_array(field(obj, "fd_edges")?, "fd_edges")?
        .iter()
        .map(|e| {
            let pair = get_array(e, "fd_edges")?;
            match &pair[..] {
                [a, b] => Ok([get_label(a, "fd_edges")?, get_label(b, "fd_edges")?]),
                _ => invalid("fd_edges: an edge template is [label, label]"),
            }
        })
        .collect::<Result<_>>()?;
    let fd_faces = get_array(field(obj, "fd_faces")?, "fd_faces")?
        .iter()
        .map(|f| get_array(f, "fd_faces")?.iter().map(|l| get_label(l, "fd_faces")).collect())
        .collect::<Result<_>>()?;
    PeriodicSailSpec::new(
        get_int_matrix(field(obj, "matrix")?, "matrix")?,
        get_int_matrix(field(obj, "M")?, "M")?,
        get_int_matrix(field(obj, "N")?, "N")?,
        seeds,
        fd_edges,
        fd_faces,
    )
    .map_err(|e| IoError::Invalid(e.to_string()))
}

fn get_labels(v: Option<&Value>) -> Result<Option<Vec<OrbitLabel>>> {
    v.map(|v| get_array(v, "labels")?.iter().map(|l| get_label(l, "labels")).collect())
        .transpose()
}

fn read_surface(obj: &Map<String, Value>) -> Result<OrientedSurface> {
    let vertices = get_array(field(obj, "vertices")?, "vertices")?
        .iter()
        .map(|v| get_rat_vec(v, "vertices"))
        .collect::<Result<Vec<_>>>()?;
    let faces = get_faces(field(obj, "faces")?)?;
    let mut s = build_surface(vertices, faces).map_err(|e| IoError::Invalid(e.to_string()))?;
    if let Some(e) = obj.get("edges") {
        s = s
            .with_extra_edges(get_edge_pairs(e)?)
            .map_err(|e| IoError::Invalid(e.to_string()))?;
    }
    if let Some(l) = get_labels(obj.get("labels"))? {
        s = s.with_labels(l).map_err(|e| IoError::Invalid(e.to_string()))?;
    }
    Ok(s)
}

fn read_framework(obj: &Map<String, Value>) -> Result<StressedFramework> {
    let plane_obj = field(obj, "plane")?
        .as_object()
        .map_or_else(|| invalid("plane: expected an object"), Ok)?;
    let plane = ProjectionPlane::new(
        get_int_vec(field(plane_obj, "normal")?, "plane.normal")?,
        get_int(field(plane_obj, "offset")?, "plane.offset")?,
    )
    .map_err(|e| IoError::Invalid(e.to_string()))?;
    let vertices: Vec<Vec3<Rat>> = get_array(field(obj, "vertices")?, "vertices")?
        .iter()
        .map(|v| get_rat_vec(v, "vertices"))
        .collect::<Result<_>>()?;
    let n = vertices.len();
    if let Some(v) = vertices.iter().position(|p| !plane.contains(p)) {
        return invalid(format!("vertex {v} is not on the plane"));
    }
    let betas: Vec<Rat> = get_array(field(obj, "betas")?, "betas")?
        .iter()
        .map(|b| get_rat(b, "betas"))
        .collect::<Result<_>>()?;
    let edges = get_array(field(obj, "edges")?, "edges")?
        .iter()
        .map(|e| {
            let o = e.as_object().map_or_else(|| invalid("edges: expected objects"), Ok)?;
            let opt = |k: &str| o.get(k).map(|v| get_rat(v, k)).transpose();
            let edge = EdgeStress {
                i: get_usize(field(o, "i")?, "edges.i")?,
                j: get_usize(field(o, "j")?, "edges.j")?,
                omega: opt("omega")?,
                omega_bar: opt("omega_bar")?,
            };
            if edge.i >= n || edge.j >= n || edge.i == edge.j {
                return invalid(format!("edge {}-{} is out of range", edge.i, edge.j));
            }
            Ok(edge)
        })
        .collect::<Result<_>>()?;
    let faces = obj.get("faces").map(get_faces).transpose()?;
    if let Some(bad) = faces.iter().flatten().flatten().find(|&&v| v >= n) {
        return invalid(format!("face vertex {bad} is out of range"));
    }
    let interior: Vec<bool> = get_array(field(obj, "interior_flags")?, "interior_flags")?
        .iter()
        .map(|b| b.as_bool().map_or_else(|| invalid("interior_flags: expected booleans"), Ok))
        .collect::<Result<_>>()?;
    let labels = get_labels(obj.get("labels"))?;
    if betas.len() != n || interior.len() != n || labels.as_ref().is_some_and(|l| l.len() != n) {
        return invalid("betas, interior_flags and labels need one entry per vertex");
    }
    if betas.iter().any(|b| b.is_zero()) {
        return invalid("betas must be nonzero");
    }
    Ok(StressedFramework {
        plane,
        vertices,
        betas,
        edges,
        faces,
        interior,
        labels,
    })
}

/// `"x,y,z"` with integer or `p/q` entries.
pub fn parse_point(s: &str) -> Option<Vec3<Rat>> {
    let parts: Vec<Rat> = s.split(',').map(parse_rat).collect::<Option<_>>()?;
    let [x, y, z]: [Rat; 3] = parts.try_into().ok()?;
    Some(Vec3([x, y, z]))
}

/// `"x,y,z"` with integer entries.
pub fn parse_lattice_point(s: &str) -> Option<LatticePoint> {
    let p = parse_point(s)?;
    p.to_int()
}

pub(crate) fn abs_max(values: &[Rat]) -> Rat {
    values.iter().map(Signed::abs).max().unwrap_or_else(Rat::one)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::exactnum::rat;
    use crate::stress::project_surface;
    use crate::surface::{generate_patch, Window};

    #[test]
    fn golden_matrix_document() {
        let text = "{\"kind\": \"matrix\", \"version\": 1, \"rows\": [[1,1,1],[1,2,2],[1,2,3]]}";
        let m = read_document(text).unwrap().into_matrix().unwrap();
        assert_eq!(m, Mat3::from_int_rows([[1, 1, 1], [1, 2, 2], [1, 2, 3]]));
        let again = write_document(&Document::Matrix(m.clone()));
        assert!(again.ends_with('\n'));
        assert_eq!(read_document(&again).unwrap(), Document::Matrix(m));
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rat("1/3"), Some(rat(1, 3)));
        assert_eq!(parse_rat("2/4").map(|r| format_rat(&r)), Some("1/2".into()));
        assert_eq!(parse_rat("-6/3"), Some(rat(-2, 1)));
        assert_eq!(parse_rat("1/0"), None);
        assert_eq!(parse_rat("0.5"), None);
        assert_eq!(format_rat(&rat(-11, 69)), "-11/69");
    }

    #[test]
    fn floats_are_rejected_with_position() {
        let text = "{\"kind\": \"matrix\", \"version\": 1,\n \"rows\": [[1,0.5,1],[1,2,2],[1,2,3]]}";
        assert_eq!(
            read_document(text),
            Err(IoError::FloatRejected {
                line: 2,
                column: 14,
                literal: "0.5".into()
            })
        );
        // inside strings a dot is harmless
        let text = "{\"kind\": \"matrix\", \"version\": 1, \"note\": \"0.5\", \"rows\": [[1,0,0],[0,1,0],[0,0,1]]}";
        assert!(read_document(text).is_ok());
        assert_eq!(read_document("{\"a\": 1e3}").unwrap_err().name(), "FloatRejected");
    }

    #[test]
    fn parse_errors_carry_positions() {
        let err = read_document("{\n  \"kind\": ,\n}").unwrap_err();
        assert!(matches!(err, IoError::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn kind_mismatch() {
        let text = write_document(&Document::Matrix(Mat3::identity()));
        assert_eq!(read_document_as(&text, "surface").unwrap_err().name(), "KindMismatch");
        assert_eq!(read_document(&text).unwrap().into_cone().unwrap_err().name(), "KindMismatch");
    }

    #[test]
    fn round_trips_are_byte_identical() {
        let spec = catalog::pentagon_sail();
        let patch = generate_patch(&spec, Window::square(-1, 1)).unwrap();
        let f = project_surface(&patch.surface, &catalog::pentagon_plane()).unwrap();
        let cone = ConeSpec::algebraic(spec.matrix.clone(), [RaySign::Minus, RaySign::Minus, RaySign::Plus]).unwrap();
        for doc in [
            Document::SailSpec(spec),
            Document::Surface(patch.surface),
            Document::Framework(f),
            Document::Cone(cone),
            Document::Matrix(Mat3::from_rows([[rat(1, 2), rat(0, 1), rat(-3, 7)], [rat(1, 1), rat(1, 1), rat(1, 1)], [rat(2, 1), rat(0, 1), rat(5, 3)]])),
        ] {
            let text = write_document(&doc);
            let back = read_document(&text).unwrap();
            assert_eq!(back, doc);
            assert_eq!(write_document(&back), text);
        }
    }

    #[test]
    fn off_plane_framework_is_invalid() {
        let patch = generate_patch(&catalog::golden_sail(), Window::square(0, 1)).unwrap();
        let f = project_surface(&patch.surface, &catalog::golden_plane()).unwrap();
        let text = write_document(&Document::Framework(f)).replacen("\"offset\": 1", "\"offset\": 2", 1);
        assert_eq!(read_document(&text).unwrap_err().name(), "InvalidDocument");
    }
}
