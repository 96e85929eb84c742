use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};

use super::{build_surface, OrientedSurface, Result, SurfaceError};
use crate::exactnum::{classify_spectrum, Int, LatticePoint, Mat3};

/// Orbit coordinate `(i, j, k)`: vertex `M^i N^j seed_k`. In templates the
/// pair `(i, j)` is an offset relative to the instantiation point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrbitLabel {
    pub i: i64,
    pub j: i64,
    pub k: usize,
}

impl OrbitLabel {
    pub fn new(i: i64, j: i64, k: usize) -> Self {
        OrbitLabel { i, j, k }
    }

    pub fn shifted(self, di: i64, dj: i64) -> Self {
        OrbitLabel {
            i: self.i + di,
            j: self.j + dj,
            k: self.k,
        }
    }
}

impl fmt::Display for OrbitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{};{})", self.i, self.j, self.k)
    }
}

/// Inclusive rectangle of orbit coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub i: (i64, i64),
    pub j: (i64, i64),
}

impl Window {
    pub fn new(i0: i64, i1: i64, j0: i64, j1: i64) -> Self {
        Window { i: (i0, i1), j: (j0, j1) }
    }

    pub fn square(lo: i64, hi: i64) -> Self {
        Window::new(lo, hi, lo, hi)
    }

    pub fn is_empty(&self) -> bool {
        self.i.0 > self.i.1 || self.j.0 > self.j.1
    }

    pub fn contains(&self, l: &OrbitLabel) -> bool {
        (self.i.0..=self.i.1).contains(&l.i) && (self.j.0..=self.j.1).contains(&l.j)
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{},{}..{}", self.i.0, self.i.1, self.j.0, self.j.1)
    }
}

impl std::str::FromStr for Window {
    type Err = String;

    /// Parses `i0..i1,j0..j1`, or a single `a..b` used for both axes.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let range = |r: &str| -> std::result::Result<(i64, i64), String> {
            let (a, b) = r
                .split_once("..")
                .ok_or_else(|| format!("expected a..b, got {r:?}"))?;
            let p = |x: &str| x.trim().parse::<i64>().map_err(|e| format!("{x:?}: {e}"));
            Ok((p(a)?, p(b)?))
        };
        match s.split_once(',') {
            Some((i, j)) => {
                let (i, j) = (range(i)?, range(j)?);
                Ok(Window { i, j })
            }
            None => {
                let r = range(s)?;
                Ok(Window { i: r, j: r })
            }
        }
    }
}

/// Matrix `A`, generators `M`, `N` of its positive Dirichlet group, and a
/// fundamental domain given by orbit-labelled templates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicSailSpec {
    pub matrix: Mat3<Int>,
    pub m: Mat3<Int>,
    pub n: Mat3<Int>,
    pub seeds: Vec<LatticePoint>,
    pub fd_edges: Vec<[OrbitLabel; 2]>,
    pub fd_faces: Vec<Vec<OrbitLabel>>,
}

impl PeriodicSailSpec {
    /// Checks the templates: seed indices in range, faces with at least three
    /// labels, and Euler characteristic zero over one period.
    pub fn new(
        matrix: Mat3<Int>,
        m: Mat3<Int>,
        n: Mat3<Int>,
        seeds: Vec<LatticePoint>,
        fd_edges: Vec<[OrbitLabel; 2]>,
        fd_faces: Vec<Vec<OrbitLabel>>,
    ) -> Result<Self> {
        let spec = PeriodicSailSpec {
            matrix,
            m,
            n,
            seeds,
            fd_edges,
            fd_faces,
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(SurfaceError::InvalidSpec(msg));
        if self.seeds.is_empty() {
            return bad("no seeds".into());
        }
        let labels = self
            .fd_edges
            .iter()
            .flatten()
            .chain(self.fd_faces.iter().flatten());
        for l in labels {
            if l.k >= self.seeds.len() {
                return bad(format!("label {l} refers to a missing seed"));
            }
        }
        for (t, [a, b]) in self.fd_edges.iter().enumerate() {
            if a == b {
                return bad(format!("edge template {t} is a loop"));
            }
        }
        if let Some(t) = self.fd_faces.iter().position(|f| f.len() < 3) {
            return bad(format!("face template {t} has fewer than three vertices"));
        }
        let chi = self.seeds.len() as i64 - self.fd_edges.len() as i64 + self.fd_faces.len() as i64;
        if chi != 0 {
            return bad(format!("per-period Euler characteristic V-E+F = {chi}, expected 0"));
        }
        Ok(())
    }

    pub fn period_counts(&self) -> (usize, usize, usize) {
        (self.seeds.len(), self.fd_edges.len(), self.fd_faces.len())
    }

    /// Which edge template, if any, the labelled edge `{a, b}` instantiates.
    pub fn edge_class(&self, a: OrbitLabel, b: OrbitLabel) -> Option<usize> {
        self.fd_edges.iter().position(|[s, t]| {
            let matches = |x: OrbitLabel, y: OrbitLabel, s: &OrbitLabel, t: &OrbitLabel| {
                x.k == s.k && y.k == t.k && x.i - s.i == y.i - t.i && x.j - s.j == y.j - t.j
            };
            matches(a, b, s, t) || matches(b, a, s, t)
        })
    }

    /// `M^i N^j seed_k`.
    pub fn vertex(&self, l: OrbitLabel) -> Result<LatticePoint> {
        let mi = self.m.pow_unimodular(l.i).map_err(singular)?;
        let nj = self.n.pow_unimodular(l.j).map_err(singular)?;
        Ok((&mi * &nj).mul_vec(&self.seeds[l.k]))
    }
}

fn singular(_: crate::exactnum::SingularMatrix) -> SurfaceError {
    SurfaceError::GeneratorsRejected("generator is not unimodular".into())
}

/// Pass/fail of each condition for `M`, `N` to generate `Ξ₊(A)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DirichletReport {
    pub a_m_commute: bool,
    pub a_n_commute: bool,
    pub m_n_commute: bool,
    pub m_unimodular: bool,
    pub n_unimodular: bool,
    pub m_positive_spectrum: bool,
    pub n_positive_spectrum: bool,
}

impl DirichletReport {
    pub fn checks(&self) -> [(&'static str, bool); 7] {
        [
            ("AM = MA", self.a_m_commute),
            ("AN = NA", self.a_n_commute),
            ("MN = NM", self.m_n_commute),
            ("|det M| = 1", self.m_unimodular),
            ("|det N| = 1", self.n_unimodular),
            ("M has distinct positive real eigenvalues", self.m_positive_spectrum),
            ("N has distinct positive real eigenvalues", self.n_positive_spectrum),
        ]
    }

    pub fn passed(&self) -> bool {
        self.checks().iter().all(|(_, ok)| *ok)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.checks()
            .iter()
            .filter(|(_, ok)| !ok)
            .map(|(name, _)| *name)
            .collect()
    }
}

impl fmt::Display for DirichletReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, ok) in self.checks() {
            writeln!(f, "{} {}", if ok { "pass" } else { "FAIL" }, name)?;
        }
        Ok(())
    }
}

pub fn verify_dirichlet_generators(a: &Mat3<Int>, m: &Mat3<Int>, n: &Mat3<Int>) -> DirichletReport {
    let commute = |x: &Mat3<Int>, y: &Mat3<Int>| x * y == y * x;
    DirichletReport {
        a_m_commute: commute(a, m),
        a_n_commute: commute(a, n),
        m_n_commute: commute(m, n),
        m_unimodular: m.is_unimodular(),
        n_unimodular: n.is_unimodular(),
        m_positive_spectrum: classify_spectrum(m).all_positive,
        n_positive_spectrum: classify_spectrum(n).all_positive,
    }
}

/// A finite window of a periodic sail.
#[derive(Clone, Debug)]
pub struct SailPatch {
    pub surface: OrientedSurface,
    pub window: Window,
    /// Edge template index of every edge of `surface`, keyed `(i, j)` with `i < j`.
    pub edge_class: BTreeMap<(usize, usize), usize>,
    /// Vertex index of each orbit label.
    pub index: BTreeMap<OrbitLabel, usize>,
}

impl SailPatch {
    pub fn label(&self, v: usize) -> OrbitLabel {
        self.surface.labels().expect("patch surfaces are labelled")[v]
    }
}

/// Offsets `(a, b)` at which every label of `template` lands in `window`.
fn offsets<'t>(
    template: &'t [OrbitLabel],
    window: &'t Window,
) -> impl Iterator<Item = (i64, i64)> + 't {
    let min_i = template.iter().map(|l| l.i).min().unwrap_or(0);
    let max_i = template.iter().map(|l| l.i).max().unwrap_or(0);
    let min_j = template.iter().map(|l| l.j).min().unwrap_or(0);
    let max_j = template.iter().map(|l| l.j).max().unwrap_or(0);
    (window.i.0 - min_i..=window.i.1 - max_i)
        .flat_map(move |a| (window.j.0 - min_j..=window.j.1 - max_j).map(move |b| (a, b)))
}

/// Instantiates the fundamental domain over `window`.
///
/// Faces and edges are instantiated wherever all their labels fall inside
/// the window; the vertices are the `p_{ij,k}` lying on at least one face. Every interior
/// edge must fold with one common nonzero sign, which holds for the boundary
/// of a convex body.
pub fn generate_patch(spec: &PeriodicSailSpec, window: Window) -> Result<SailPatch> {
    if window.is_empty() {
        return Err(SurfaceError::TemplateOutOfRange);
    }
    spec.validate()?;
    let report = verify_dirichlet_generators(&spec.matrix, &spec.m, &spec.n);
    if !report.passed() {
        return Err(SurfaceError::GeneratorsRejected(report.failures().join("; ")));
    }

    let mut m_pows = BTreeMap::new();
    for i in window.i.0..=window.i.1 {
        m_pows.insert(i, spec.m.pow_unimodular(i).map_err(singular)?);
    }
    let mut vertices = Vec::new();
    let mut labels = Vec::new();
    let mut index = BTreeMap::new();
    for j in window.j.0..=window.j.1 {
        let nj = spec.n.pow_unimodular(j).map_err(singular)?;
        for i in window.i.0..=window.i.1 {
            let g = &m_pows[&i] * &nj;
            for (k, seed) in spec.seeds.iter().enumerate() {
                let l = OrbitLabel::new(i, j, k);
                index.insert(l, vertices.len());
                labels.push(l);
                vertices.push(g.mul_vec(seed).to_rat());
            }
        }
    }

    let mut faces: Vec<Vec<usize>> = Vec::new();
    for template in &spec.fd_faces {
        for (a, b) in offsets(template, &window) {
            faces.push(template.iter().map(|l| index[&l.shifted(a, b)]).collect());
        }
    }

    // keep only vertices on some face; the rest cannot be reached from a face
    let mut used = vec![false; vertices.len()];
    for &v in faces.iter().flatten() {
        used[v] = true;
    }
    let mut renumber = vec![usize::MAX; vertices.len()];
    let mut kept = 0;
    for (v, u) in used.iter().enumerate() {
        if *u {
            renumber[v] = kept;
            kept += 1;
        }
    }
    let vertices: Vec<_> = vertices.into_iter().zip(&used).filter(|(_, u)| **u).map(|(p, _)| p).collect();
    let labels: Vec<OrbitLabel> = labels.into_iter().zip(&used).filter(|(_, u)| **u).map(|(l, _)| l).collect();
    let index: BTreeMap<OrbitLabel, usize> = labels.iter().enumerate().map(|(i, l)| (*l, i)).collect();
    for f in &mut faces {
        for v in f.iter_mut() {
            *v = renumber[*v];
        }
    }

    let mut edge_class = BTreeMap::new();
    for (t, template) in spec.fd_edges.iter().enumerate() {
        for (a, b) in offsets(template, &window) {
            let (Some(&u), Some(&v)) = (
                index.get(&template[0].shifted(a, b)),
                index.get(&template[1].shifted(a, b)),
            ) else {
                continue;
            };
            edge_class.insert((u.min(v), u.max(v)), t);
        }
    }

    let surface = build_surface(vertices, faces)?
        .with_extra_edges(edge_class.keys().copied())?
        .with_labels(labels)?;

    for &(u, v) in surface.edges() {
        if !edge_class.contains_key(&(u, v)) {
            let l = surface.labels().unwrap_or_default();
            return Err(SurfaceError::InvalidSpec(format!(
                "face edge {}-{} matches no edge template",
                l[u], l[v]
            )));
        }
    }

    let mut fold_sign = None;
    for &(u, v) in surface.edges() {
        let Some(d) = surface.fold_determinant(u, v) else {
            continue;
        };
        let s = d.signum();
        if s.is_zero() || *fold_sign.get_or_insert(s.clone()) != s {
            return Err(SurfaceError::NonConvexEdge(u, v));
        }
    }

    Ok(SailPatch {
        surface,
        window,
        edge_class,
        index,
    })
}

/// Distinct edge templates touching at least one face template.
#[cfg(test)]
fn face_edge_classes(spec: &PeriodicSailSpec) -> std::collections::BTreeSet<usize> {
    let mut out = std::collections::BTreeSet::new();
    for f in &spec.fd_faces {
        for p in 0..f.len() {
            if let Some(c) = spec.edge_class(f[p], f[(p + 1) % f.len()]) {
                out.insert(c);
            }
        }
    }
    out
}
