//! Projective lifting coefficients of polyhedral surfaces, central projection
//! to an affine plane, and exact equilibrium checks of the resulting stresses.

mod lift;

pub use lift::{lift_framework, LiftResult, SeedPoint};

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactnum::{denominator_lcm, det3_cols, Int, LatticePoint, Rat, Vec3};
use crate::intgeom::{self, IntGeomError};
use crate::surface::{OrbitLabel, OrientedSurface, PeriodicSailSpec, Window};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StressError {
    #[error("PlaneThroughOrigin: a face plane of edge {0:?} passes through the origin")]
    PlaneThroughOrigin(Option<(usize, usize)>),
    #[error("DegenerateTriple: the points do not span an affine plane")]
    DegenerateTriple,
    #[error("BoundaryEdge: edge {0}-{1} has fewer than two adjacent faces")]
    BoundaryEdge(usize, usize),
    #[error("InvalidPlane: {0}")]
    InvalidPlane(String),
    #[error("ImproperPlane: vertex rays parallel to the plane: {0:?}")]
    ImproperPlane(Vec<usize>),
    #[error("ParallelStarEdges: two edges at vertex {0} are parallel ({1} and {2})")]
    ParallelStarEdges(usize, usize, usize),
    #[error("MonodromyNonzero: face {face} predicts β = {predicted} for vertex {vertex}, already lifted with β = {known}")]
    MonodromyNonzero {
        face: usize,
        vertex: usize,
        predicted: Box<Rat>,
        known: Box<Rat>,
    },
    #[error("ZeroDenominator: lifting across edge {0}-{1} divides by zero")]
    ZeroDenominator(usize, usize),
    #[error("InvalidSeed: {0}")]
    InvalidSeed(String),
    #[error("MissingFaces: the framework carries no face cycles")]
    MissingFaces,
    #[error("MissingStress: edge {0}-{1} has two faces but no stress")]
    MissingStress(usize, usize),
    #[error("UnreachedVertices: vertices {0:?} lie on no face reachable from the seed")]
    UnreachedVertices(Vec<usize>),
    #[error("{0}")]
    IntGeom(#[from] IntGeomError),
}

impl StressError {
    pub fn name(&self) -> &'static str {
        match self {
            StressError::PlaneThroughOrigin(_) => "PlaneThroughOrigin",
            StressError::DegenerateTriple => "DegenerateTriple",
            StressError::BoundaryEdge(..) => "BoundaryEdge",
            StressError::InvalidPlane(_) => "InvalidPlane",
            StressError::ImproperPlane(_) => "ImproperPlane",
            StressError::ParallelStarEdges(..) => "ParallelStarEdges",
            StressError::MonodromyNonzero { .. } => "MonodromyNonzero",
            StressError::ZeroDenominator(..) => "ZeroDenominator",
            StressError::InvalidSeed(_) => "InvalidSeed",
            StressError::MissingFaces => "MissingFaces",
            StressError::MissingStress(..) => "MissingStress",
            StressError::UnreachedVertices(_) => "UnreachedVertices",
            StressError::IntGeom(e) => e.name(),
        }
    }
}

pub type Result<T> = std::result::Result<T, StressError>;

fn det3(a: &Vec3<Rat>, b: &Vec3<Rat>, c: &Vec3<Rat>) -> Rat {
    det3_cols(a, b, c)
}

/// `det(p2−p1, p3−p1, p4−p1) / (det(p1,p2,p3)·det(p1,p2,p4))`.
pub fn lifting_coefficient(p1: &Vec3<Rat>, p2: &Vec3<Rat>, p3: &Vec3<Rat>, p4: &Vec3<Rat>) -> Result<Rat> {
    let e = p2 - p1;
    if e.is_zero() || e.cross(&(p3 - p1)).is_zero() || e.cross(&(p4 - p1)).is_zero() {
        return Err(StressError::DegenerateTriple);
    }
    let d3 = det3(p1, p2, p3);
    let d4 = det3(p1, p2, p4);
    if d3.is_zero() || d4.is_zero() {
        return Err(StressError::PlaneThroughOrigin(None));
    }
    Ok(det3(&e, &(p3 - p1), &(p4 - p1)) / (d3 * d4))
}

/// `|ω|` of an integer configuration through lattice invariants, with the
/// invariants it was assembled from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantCoefficient {
    pub value: Rat,
    /// Integer sine of the two planes along `p1 p2`.
    pub sine: Int,
    /// Integer length of `p1 p2`.
    pub length: Int,
    /// Integer distances from the origin to the planes `p1 p2 p3` and `p1 p2 p4`.
    pub distances: (Int, Int),
}

pub fn lifting_coefficient_invariants(
    p1: &LatticePoint,
    p2: &LatticePoint,
    p3: &LatticePoint,
    p4: &LatticePoint,
) -> Result<InvariantCoefficient> {
    let o = LatticePoint::zero();
    let dist = |q: &LatticePoint| match intgeom::integer_distance_plane(&o, p1, p2, q) {
        Err(IntGeomError::PointOnPlane) => Err(StressError::PlaneThroughOrigin(None)),
        other => other.map_err(StressError::from),
    };
    let d1 = dist(p3)?;
    let d2 = dist(p4)?;
    let sine = intgeom::integer_sine(p1, p2, p3, p4)?;
    let length = intgeom::integer_length(p1, p2)?;
    let value = Rat::new(sine.clone(), &length * &d1 * &d2);
    Ok(InvariantCoefficient {
        value,
        sine,
        length,
        distances: (d1, d2),
    })
}

/// Coefficient `ω_ij = ω(p_i, p_j; p_k, p_l)` of an interior edge, `p_k` on
/// the right face and `p_l` on the left face of `i -> j`.
pub fn edge_lifting_coefficient(s: &OrientedSurface, i: usize, j: usize) -> Result<Rat> {
    let (left, right) = s.edge_faces(i, j);
    let (Some(left), Some(right)) = (left, right) else {
        return Err(StressError::BoundaryEdge(i, j));
    };
    let l = s.vertex_beyond_edge(left);
    let k = s.vertex_beyond_edge(right);
    let v = s.vertices();
    lifting_coefficient(&v[i], &v[j], &v[k], &v[l]).map_err(|e| match e {
        StressError::PlaneThroughOrigin(_) => StressError::PlaneThroughOrigin(Some((i, j))),
        e => e,
    })
}

/// Coefficients of all interior edges; edges with a single face are listed
/// separately and carry no coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SurfaceCoefficients {
    pub values: BTreeMap<(usize, usize), Rat>,
    pub boundary: Vec<(usize, usize)>,
}

pub fn surface_lifting_coefficients(s: &OrientedSurface) -> Result<SurfaceCoefficients> {
    let mut out = SurfaceCoefficients::default();
    for &(i, j) in s.edges() {
        match edge_lifting_coefficient(s, i, j) {
            Ok(w) => {
                out.values.insert((i, j), w);
            }
            Err(StressError::BoundaryEdge(..)) => out.boundary.push((i, j)),
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Affine plane `n·x = c` avoiding the origin; `(n, c)` has no common factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjectionPlane {
    normal: LatticePoint,
    offset: Int,
}

impl ProjectionPlane {
    pub fn new(normal: LatticePoint, offset: Int) -> Result<Self> {
        if normal.is_zero() {
            return Err(StressError::InvalidPlane("normal is zero".into()));
        }
        if offset.is_zero() {
            return Err(StressError::InvalidPlane("plane passes through the origin".into()));
        }
        let g = normal.content().gcd(&offset);
        Ok(ProjectionPlane {
            normal: normal.map(|c| c / &g),
            offset: offset / g,
        })
    }

    pub fn normal(&self) -> &LatticePoint {
        &self.normal
    }

    pub fn offset(&self) -> &Int {
        &self.offset
    }

    pub fn contains(&self, p: &Vec3<Rat>) -> bool {
        self.normal.to_rat().dot(p) == Rat::from(self.offset.clone())
    }

    /// `β = (n·p)/c`, so that `p = β·p̄`.
    pub fn beta(&self, p: &Vec3<Rat>) -> Rat {
        self.normal.to_rat().dot(p) / Rat::from(self.offset.clone())
    }
}

impl std::fmt::Display for ProjectionPlane {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let n = &self.normal.0;
        write!(f, "{},{},{};{}", n[0], n[1], n[2], self.offset)
    }
}

impl std::str::FromStr for ProjectionPlane {
    type Err = StressError;

    /// `"n1,n2,n3;c"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || StressError::InvalidPlane(format!("expected \"n1,n2,n3;c\", got {s:?}"));
        let (n, c) = s.split_once(';').ok_or_else(bad)?;
        let n: Vec<Int> = n
            .split(',')
            .map(|t| t.trim().parse::<Int>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        let c: Int = c.trim().parse().map_err(|_| bad())?;
        let [x, y, z]: [Int; 3] = n.try_into().map_err(|_| bad())?;
        ProjectionPlane::new(Vec3([x, y, z]), c)
    }
}

/// One edge of a framework with its lifting coefficient `ω` and
/// projection-stress `ω̄ = βᵢβⱼω`. Edges with a single face carry neither.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeStress {
    pub i: usize,
    pub j: usize,
    pub omega: Option<Rat>,
    pub omega_bar: Option<Rat>,
}

/// Planar framework on a projection plane with a stress on its edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StressedFramework {
    pub plane: ProjectionPlane,
    pub vertices: Vec<Vec3<Rat>>,
    pub betas: Vec<Rat>,
    pub edges: Vec<EdgeStress>,
    pub faces: Option<Vec<Vec<usize>>>,
    pub interior: Vec<bool>,
    pub labels: Option<Vec<OrbitLabel>>,
}

impl StressedFramework {
    /// `ω̄` by undirected edge.
    pub fn stress_map(&self) -> BTreeMap<(usize, usize), Rat> {
        self.edges
            .iter()
            .filter_map(|e| Some(((e.i.min(e.j), e.i.max(e.j)), e.omega_bar.clone()?)))
            .collect()
    }

    /// `ω` by undirected edge.
    pub fn coefficient_map(&self) -> BTreeMap<(usize, usize), Rat> {
        self.edges
            .iter()
            .filter_map(|e| Some(((e.i.min(e.j), e.i.max(e.j)), e.omega.clone()?)))
            .collect()
    }

    /// The surface `pᵢ = βᵢ·p̄ᵢ` this framework was projected from, if the
    /// framework carries faces.
    pub fn source_points(&self) -> Vec<Vec3<Rat>> {
        self.vertices
            .iter()
            .zip(&self.betas)
            .map(|(p, b)| p.scale(b))
            .collect()
    }
}

/// Central projection of `s` to `plane`, with the stresses induced by the
/// lifting coefficients of `s`.
pub fn project_surface(s: &OrientedSurface, plane: &ProjectionPlane) -> Result<StressedFramework> {
    let betas: Vec<Rat> = s.vertices().iter().map(|p| plane.beta(p)).collect();
    let bad: Vec<usize> = (0..betas.len()).filter(|&i| betas[i].is_zero()).collect();
    if !bad.is_empty() {
        return Err(StressError::ImproperPlane(bad));
    }
    let coeffs = surface_lifting_coefficients(s)?;
    let vertices = s
        .vertices()
        .iter()
        .zip(&betas)
        .map(|(p, b)| p.scale(&b.recip()))
        .collect();
    let edges = s
        .edges()
        .iter()
        .map(|&(i, j)| {
            let omega = coeffs.values.get(&(i, j)).cloned();
            let omega_bar = omega.as_ref().map(|w| &betas[i] * &betas[j] * w);
            EdgeStress { i, j, omega, omega_bar }
        })
        .collect();
    Ok(StressedFramework {
        plane: plane.clone(),
        vertices,
        betas,
        edges,
        faces: Some(s.faces().to_vec()),
        interior: s.interior_vertices(),
        labels: s.labels().map(<[OrbitLabel]>::to_vec),
    })
}

/// Per-vertex residuals of an equilibrium check.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EquilibriumReport {
    /// Checked vertices with their exact residual vectors.
    pub residuals: Vec<(usize, Vec3<Rat>)>,
    /// Vertices without a complete stressed star.
    pub skipped: Vec<usize>,
}

impl EquilibriumReport {
    pub fn failing(&self) -> Vec<usize> {
        self.residuals
            .iter()
            .filter(|(_, r)| !r.is_zero())
            .map(|(v, _)| *v)
            .collect()
    }

    pub fn passed(&self) -> bool {
        self.residuals.iter().all(|(_, r)| r.is_zero())
    }

    pub fn checked(&self) -> usize {
        self.residuals.len()
    }
}

fn incident(edges: &[(usize, usize)], n: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = vec![Vec::new(); n];
    for &(a, b) in edges {
        out[a].push((a, b));
        out[b].push((a, b));
    }
    out
}

/// Sums `term(i, j, w)` over the star of every interior vertex whose incident
/// edges are all stressed.
fn star_sums<F>(
    n: usize,
    interior: &[bool],
    edges: &[(usize, usize)],
    stress: &BTreeMap<(usize, usize), Rat>,
    term: F,
) -> EquilibriumReport
where
    F: Fn(usize, usize, &Rat) -> Vec3<Rat>,
{
    let star = incident(edges, n);
    let mut report = EquilibriumReport::default();
    for v in 0..n {
        let full = interior.get(v).copied().unwrap_or(false)
            && !star[v].is_empty()
            && star[v].iter().all(|e| stress.contains_key(e));
        if !full {
            report.skipped.push(v);
            continue;
        }
        let mut sum = Vec3::zero();
        for &(a, b) in &star[v] {
            let other = if a == v { b } else { a };
            sum = &sum + &term(v, other, &stress[&(a, b)]);
        }
        report.residuals.push((v, sum));
    }
    report
}

/// `Σⱼ ω̄ᵢⱼ(p̄ⱼ − p̄ᵢ)` at every interior vertex.
pub fn check_planar_equilibrium(f: &StressedFramework) -> EquilibriumReport {
    let edges: Vec<(usize, usize)> = f.edges.iter().map(|e| (e.i.min(e.j), e.i.max(e.j))).collect();
    let p = &f.vertices;
    star_sums(p.len(), &f.interior, &edges, &f.stress_map(), |i, j, w| {
        (&p[j] - &p[i]).scale(w)
    })
}

/// `Σⱼ ωᵢⱼ(pᵢ × pⱼ)` at every interior vertex of `s`.
pub fn check_projective_equilibrium(
    s: &OrientedSurface,
    omega: &BTreeMap<(usize, usize), Rat>,
) -> EquilibriumReport {
    let p = s.vertices();
    star_sums(p.len(), &s.interior_vertices(), s.edges(), omega, |i, j, w| {
        p[i].cross(&p[j]).scale(w)
    })
}

/// Lcm of the denominators.
pub fn integer_multiplier<'a, I: IntoIterator<Item = &'a Rat>>(values: I) -> Int {
    denominator_lcm(values)
}

/// Scales every stress (and coefficient) whose endpoints lie in `window` by
/// the lcm of their denominators, dropping the stresses of other edges.
/// Without labels or window all stresses are kept.
pub fn integerize_stresses(f: &StressedFramework, window: Option<&Window>) -> (StressedFramework, Int) {
    let keep = |e: &EdgeStress| match (window, &f.labels) {
        (Some(w), Some(l)) => w.contains(&l[e.i]) && w.contains(&l[e.j]),
        _ => true,
    };
    let kept: Vec<bool> = f.edges.iter().map(keep).collect();
    let m = integer_multiplier(
        f.edges
            .iter()
            .zip(&kept)
            .filter(|(_, k)| **k)
            .filter_map(|(e, _)| e.omega_bar.as_ref()),
    );
    let scale = Rat::from(m.clone());
    let mut out = f.clone();
    for (e, k) in out.edges.iter_mut().zip(kept) {
        if k {
            e.omega_bar = e.omega_bar.as_ref().map(|w| w * &scale);
            e.omega = e.omega.as_ref().map(|w| w * &scale);
        } else {
            e.omega_bar = None;
            e.omega = None;
        }
    }
    (out, m)
}

/// Whether all values share one strict sign.
pub fn common_sign<'a, I: IntoIterator<Item = &'a Rat>>(values: I) -> Option<Int> {
    let mut sign: Option<Int> = None;
    for v in values {
        let s = v.signum().to_integer();
        if s.is_zero() || sign.get_or_insert_with(|| s.clone()) != &s {
            return None;
        }
    }
    sign.or_else(|| Some(Int::one()))
}

/// Coefficient values per edge orbit of a periodic sail.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PeriodicityReport {
    /// Per edge template: the common value, if the orbit is consistent and
    /// was seen, and the number of edges compared.
    pub classes: BTreeMap<usize, OrbitSummary>,
    /// Edges matching no edge template.
    pub unclassified: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OrbitSummary {
    pub value: Option<Rat>,
    pub edges: usize,
    /// Pairs `(e, g·e)` with different coefficients.
    pub mismatches: Vec<((usize, usize), (usize, usize))>,
}

impl PeriodicityReport {
    pub fn passed(&self) -> bool {
        self.unclassified.is_empty() && self.classes.values().all(|c| c.mismatches.is_empty())
    }

    pub fn flagged_classes(&self) -> Vec<usize> {
        self.classes
            .iter()
            .filter(|(_, c)| !c.mismatches.is_empty())
            .map(|(k, _)| *k)
            .collect()
    }
}

/// Compares `ω(e)` with `ω(M·e)` and `ω(N·e)` for every edge with both
/// endpoints in `window`, whenever the translate is present.
pub fn check_periodicity(
    spec: &PeriodicSailSpec,
    labels: &[OrbitLabel],
    omega: &BTreeMap<(usize, usize), Rat>,
    window: &Window,
) -> PeriodicityReport {
    let index: BTreeMap<OrbitLabel, usize> = labels.iter().enumerate().map(|(i, l)| (*l, i)).collect();
    let mut report = PeriodicityReport::default();
    let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (&(u, v), w) in omega {
        let (lu, lv) = (labels[u], labels[v]);
        if !window.contains(&lu) || !window.contains(&lv) {
            continue;
        }
        let Some(class) = spec.edge_class(lu, lv) else {
            report.unclassified.push((u, v));
            continue;
        };
        let summary = report.classes.entry(class).or_default();
        if seen.insert((u, v)) {
            summary.edges += 1;
        }
        if summary.value.is_none() {
            summary.value = Some(w.clone());
        }
        for (di, dj) in [(1, 0), (0, 1)] {
            let (Some(&a), Some(&b)) = (index.get(&lu.shifted(di, dj)), index.get(&lv.shifted(di, dj))) else {
                continue;
            };
            if let Some(w2) = omega.get(&(a.min(b), a.max(b))) {
                if w2 != w {
                    summary.mismatches.push(((u, v), (a.min(b), a.max(b))));
                }
            }
        }
    }
    for c in report.classes.values_mut() {
        if !c.mismatches.is_empty() {
            c.value = None;
        }
    }
    report
}
