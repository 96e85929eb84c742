//! Oriented polyhedral surfaces, algebraic sails generated from Dirichlet
//! generators, and a brute-force lattice hull used to cross-check them.

mod cone;
mod hull;
mod sail;

pub use cone::{cone_membership, ConeCertifier, ConeSpec, Membership, RaySign, DEFAULT_STEP_CAP};
pub use hull::{brute_force_sail, compare_with_patch, BruteForceSail, OracleComparison};
pub use sail::{
    generate_patch, verify_dirichlet_generators, DirichletReport, OrbitLabel, PeriodicSailSpec,
    SailPatch, Window,
};

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use crate::exactnum::{det3_cols, Rat, Vec3};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("IndexOutOfRange: face {face} references vertex {index}")]
    IndexOutOfRange { face: usize, index: usize },
    #[error("DegenerateFace: face {0} has fewer than three distinct non-collinear vertices")]
    DegenerateFace(usize),
    #[error("NonPlanarFace: vertices of face {0} are not coplanar")]
    NonPlanarFace(usize),
    #[error("InconsistentOrientation: edge {0}->{1} is traversed in the same direction by two faces")]
    InconsistentOrientation(usize, usize),
    #[error("NonManifoldEdge: edge {0}-{1} is shared by more than two faces")]
    NonManifoldEdge(usize, usize),
    #[error("InvalidEdge: edge {0}-{1} is not a pair of distinct existing vertices")]
    InvalidEdge(usize, usize),
    #[error("LabelCount: {labels} labels for {vertices} vertices")]
    LabelCount { labels: usize, vertices: usize },
    #[error("InvalidSpec: {0}")]
    InvalidSpec(String),
    #[error("GeneratorsRejected: {0}")]
    GeneratorsRejected(String),
    #[error("TemplateOutOfRange: window is empty")]
    TemplateOutOfRange,
    #[error("NonConvexEdge: edge {0}-{1} breaks the common fold sign of the patch")]
    NonConvexEdge(usize, usize),
    #[error("InvalidCone: {0}")]
    InvalidCone(String),
    #[error("PrecisionExhausted: sign not certified after {0} bisection steps")]
    PrecisionExhausted(u32),
    #[error("InsufficientPoints: fewer than four affinely independent lattice points in the box")]
    InsufficientPoints,
}

impl SurfaceError {
    pub fn name(&self) -> &'static str {
        match self {
            SurfaceError::IndexOutOfRange { .. } => "IndexOutOfRange",
            SurfaceError::DegenerateFace(_) => "DegenerateFace",
            SurfaceError::NonPlanarFace(_) => "NonPlanarFace",
            SurfaceError::InconsistentOrientation(..) => "InconsistentOrientation",
            SurfaceError::NonManifoldEdge(..) => "NonManifoldEdge",
            SurfaceError::InvalidEdge(..) => "InvalidEdge",
            SurfaceError::LabelCount { .. } => "LabelCount",
            SurfaceError::InvalidSpec(_) => "InvalidSpec",
            SurfaceError::GeneratorsRejected(_) => "GeneratorsRejected",
            SurfaceError::TemplateOutOfRange => "TemplateOutOfRange",
            SurfaceError::NonConvexEdge(..) => "NonConvexEdge",
            SurfaceError::InvalidCone(_) => "InvalidCone",
            SurfaceError::PrecisionExhausted(_) => "PrecisionExhausted",
            SurfaceError::InsufficientPoints => "InsufficientPoints",
        }
    }
}

pub type Result<T> = std::result::Result<T, SurfaceError>;

/// A face together with the position of an edge's start vertex in its cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FaceSide {
    pub face: usize,
    pub pos: usize,
}

/// Polyhedral 2-surface with consistently oriented face cycles.
///
/// Edges are stored undirected as `(i, j)` with `i < j`. They are the edges of
/// the faces plus any extra edges attached with [`OrientedSurface::with_extra_edges`]
/// (edges of a truncated patch whose faces fell outside the window).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedSurface {
    vertices: Vec<Vec3<Rat>>,
    faces: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    labels: Option<Vec<OrbitLabel>>,
    half_edges: BTreeMap<(usize, usize), FaceSide>,
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn check_face_geometry(fi: usize, face: &[usize], vertices: &[Vec3<Rat>]) -> Result<()> {
    let p0 = &vertices[face[0]];
    let p1 = &vertices[face[1]];
    let d1 = p1 - p0;
    let normal = face[2..]
        .iter()
        .map(|&v| d1.cross(&(&vertices[v] - p0)))
        .find(|n| !n.is_zero())
        .ok_or(SurfaceError::DegenerateFace(fi))?;
    if face
        .iter()
        .any(|&v| !normal.dot(&(&vertices[v] - p0)).is_zero())
    {
        return Err(SurfaceError::NonPlanarFace(fi));
    }
    Ok(())
}

/// Validates vertices and face cycles into an [`OrientedSurface`].
pub fn build_surface(vertices: Vec<Vec3<Rat>>, faces: Vec<Vec<usize>>) -> Result<OrientedSurface> {
    let mut half_edges: BTreeMap<(usize, usize), FaceSide> = BTreeMap::new();
    let mut face_count: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (fi, face) in faces.iter().enumerate() {
        if let Some(&bad) = face.iter().find(|&&v| v >= vertices.len()) {
            return Err(SurfaceError::IndexOutOfRange { face: fi, index: bad });
        }
        let mut seen = face.clone();
        seen.sort_unstable();
        seen.dedup();
        if face.len() < 3 || seen.len() != face.len() {
            return Err(SurfaceError::DegenerateFace(fi));
        }
        check_face_geometry(fi, face, &vertices)?;
        for pos in 0..face.len() {
            let a = face[pos];
            let b = face[(pos + 1) % face.len()];
            let count = face_count.entry(ordered(a, b)).or_insert(0);
            *count += 1;
            if *count > 2 {
                return Err(SurfaceError::NonManifoldEdge(a.min(b), a.max(b)));
            }
            if half_edges.insert((a, b), FaceSide { face: fi, pos }).is_some() {
                return Err(SurfaceError::InconsistentOrientation(a, b));
            }
        }
    }
    let edges = face_count.into_keys().collect();
    Ok(OrientedSurface {
        vertices,
        faces,
        edges,
        labels: None,
        half_edges,
    })
}

impl OrientedSurface {
    pub fn vertices(&self) -> &[Vec3<Rat>] {
        &self.vertices
    }

    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn labels(&self) -> Option<&[OrbitLabel]> {
        self.labels.as_deref()
    }

    pub fn with_extra_edges<I: IntoIterator<Item = (usize, usize)>>(mut self, extra: I) -> Result<Self> {
        for (a, b) in extra {
            if a == b || a >= self.vertices.len() || b >= self.vertices.len() {
                return Err(SurfaceError::InvalidEdge(a, b));
            }
            let e = ordered(a, b);
            if let Err(pos) = self.edges.binary_search(&e) {
                self.edges.insert(pos, e);
            }
        }
        Ok(self)
    }

    pub fn with_labels(mut self, labels: Vec<OrbitLabel>) -> Result<Self> {
        if labels.len() != self.vertices.len() {
            return Err(SurfaceError::LabelCount {
                labels: labels.len(),
                vertices: self.vertices.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// The face traversing `a -> b` in its cycle order.
    pub fn face_traversing(&self, a: usize, b: usize) -> Option<FaceSide> {
        self.half_edges.get(&(a, b)).copied()
    }

    /// `(left, right)` faces of the oriented edge `a -> b`: the left face
    /// traverses `a -> b`, the right face traverses `b -> a`.
    pub fn edge_faces(&self, a: usize, b: usize) -> (Option<FaceSide>, Option<FaceSide>) {
        (self.face_traversing(a, b), self.face_traversing(b, a))
    }

    pub fn is_interior_edge(&self, a: usize, b: usize) -> bool {
        matches!(self.edge_faces(a, b), (Some(_), Some(_)))
    }

    /// A vertex of `side.face` off the line of the edge starting at
    /// `side.pos`: the one following the edge, or the next non-collinear one.
    pub fn vertex_beyond_edge(&self, side: FaceSide) -> usize {
        let face = &self.faces[side.face];
        let n = face.len();
        let a = &self.vertices[face[side.pos]];
        let b = &self.vertices[face[(side.pos + 1) % n]];
        let dir = b - a;
        (2..n)
            .map(|k| face[(side.pos + k) % n])
            .find(|&v| !dir.cross(&(&self.vertices[v] - a)).is_zero())
            .unwrap_or(face[(side.pos + 2) % n])
    }

    /// `det(p_j − p_i, p_k − p_i, p_l − p_i)` for an interior edge, with `p_k`
    /// on the right face and `p_l` on the left face of `i -> j`.
    pub fn fold_determinant(&self, i: usize, j: usize) -> Option<Rat> {
        let (left, right) = self.edge_faces(i, j);
        let (left, right) = (left?, right?);
        let l = self.vertex_beyond_edge(left);
        let k = self.vertex_beyond_edge(right);
        let v = &self.vertices;
        let pi = &v[i];
        Some(det3_cols(&(&v[j] - pi), &(&v[k] - pi), &(&v[l] - pi)))
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    /// Vertices whose whole star is present: every incident edge has two
    /// faces and the faces close up into a fan.
    pub fn interior_vertices(&self) -> Vec<bool> {
        let n = self.vertices.len();
        let mut edge_count = vec![0usize; n];
        let mut interior_edges = vec![0usize; n];
        for &(a, b) in &self.edges {
            edge_count[a] += 1;
            edge_count[b] += 1;
            if self.is_interior_edge(a, b) {
                interior_edges[a] += 1;
                interior_edges[b] += 1;
            }
        }
        let mut face_count = vec![0usize; n];
        for face in &self.faces {
            for &v in face {
                face_count[v] += 1;
            }
        }
        (0..n)
            .map(|v| {
                edge_count[v] > 0
                    && interior_edges[v] == edge_count[v]
                    && face_count[v] == edge_count[v]
            })
            .collect()
    }

    /// Faces whose supporting plane passes through the origin.
    pub fn faces_through_origin(&self) -> Vec<usize> {
        self.faces
            .iter()
            .enumerate()
            .filter(|(_, f)| {
                let v = &self.vertices;
                let a = &v[f[0]];
                let b = &v[f[1]];
                let n = f[2..]
                    .iter()
                    .map(|&c| (b - a).cross(&(&v[c] - a)))
                    .find(|n| !n.is_zero())
                    .unwrap_or_else(Vec3::zero);
                n.dot(a).is_zero()
            })
            .map(|(i, _)| i)
            .collect()
    }
}
