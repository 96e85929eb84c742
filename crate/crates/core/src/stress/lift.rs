//! Reconstruction of a polyhedral surface from a stressed planar framework
//! and the lifted position of one face.

use std::collections::{BTreeMap, VecDeque};

use num_traits::{Signed, Zero};

use super::{det3, Result, StressError, StressedFramework};
use crate::exactnum::{Rat, Vec3};
use crate::surface::{build_surface, FaceSide, OrientedSurface, SurfaceError};

/// A vertex index with its prescribed lifted position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedPoint {
    pub vertex: usize,
    pub point: Vec3<Rat>,
}

#[derive(Clone, Debug)]
pub struct LiftResult {
    pub surface: OrientedSurface,
    pub betas: Vec<Rat>,
    /// Face adjacencies crossed to reach new faces.
    pub tree_crossings: usize,
    /// Face adjacencies re-checked for consistency (zero monodromy).
    pub loop_checks: usize,
}

fn surface_err(e: SurfaceError) -> StressError {
    StressError::InvalidSeed(format!("framework faces are not a valid surface: {e}"))
}

fn check_star_directions(f: &StressedFramework) -> Result<()> {
    let mut star: Vec<Vec<usize>> = vec![Vec::new(); f.vertices.len()];
    for e in &f.edges {
        star[e.i].push(e.j);
        star[e.j].push(e.i);
    }
    let p = &f.vertices;
    for (v, nbrs) in star.iter().enumerate() {
        for (x, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[x + 1..] {
                let (da, db) = (&p[a] - &p[v], &p[b] - &p[v]);
                // opposite edges are fine: every crossing is solved on its own
                if da.cross(&db).is_zero() && da.dot(&db).is_positive() {
                    return Err(StressError::ParallelStarEdges(v, a.min(b), a.max(b)));
                }
            }
        }
    }
    Ok(())
}

/// `β` of the ray through `v̄` where it meets the plane through `a`, `b`, `c`.
fn ray_plane_beta(a: &Vec3<Rat>, b: &Vec3<Rat>, c: &Vec3<Rat>, v: &Vec3<Rat>) -> Option<Rat> {
    let m = (b - a).cross(&(c - a));
    let den = m.dot(v);
    (!den.is_zero()).then(|| m.dot(a) / den)
}

struct Lifter<'a> {
    f: &'a StressedFramework,
    planar: OrientedSurface,
    stress: BTreeMap<(usize, usize), Rat>,
    beta: Vec<Option<Rat>>,
    visited: Vec<bool>,
    tree_crossings: usize,
    loop_checks: usize,
}

impl Lifter<'_> {
    fn lifted(&self, v: usize) -> Vec3<Rat> {
        self.f.vertices[v].scale(self.beta[v].as_ref().expect("vertex already lifted"))
    }

    fn assign(&mut self, face: usize, v: usize, b: Rat) -> Result<()> {
        match &self.beta[v] {
            Some(known) if *known != b => Err(StressError::MonodromyNonzero {
                face,
                vertex: v,
                predicted: Box::new(b),
                known: Box::new(known.clone()),
            }),
            Some(_) => Ok(()),
            None => {
                self.beta[v] = Some(b);
                Ok(())
            }
        }
    }

    /// Lifts every vertex of `face` onto the plane through three lifted points.
    fn lift_face_plane(&mut self, face: usize, a: usize, b: usize, c: usize) -> Result<()> {
        let (pa, pb, pc) = (self.lifted(a), self.lifted(b), self.lifted(c));
        for v in self.planar.faces()[face].clone() {
            let bv = ray_plane_beta(&pa, &pb, &pc, &self.f.vertices[v])
                .ok_or(StressError::ZeroDenominator(a, b))?;
            self.assign(face, v, bv)?;
        }
        Ok(())
    }

    /// Crosses the edge `a -> b` of the lifted face `side.face` into the face
    /// on its right and returns that face, after lifting it or checking it.
    fn cross(&mut self, side: FaceSide) -> Result<Option<usize>> {
        let face = &self.planar.faces()[side.face];
        let a = face[side.pos];
        let b = face[(side.pos + 1) % face.len()];
        let Some(right) = self.planar.face_traversing(b, a) else {
            return Ok(None);
        };
        let key = (a.min(b), a.max(b));
        let wbar = self.stress.get(&key).ok_or(StressError::MissingStress(key.0, key.1))?;
        let k = self.planar.vertex_beyond_edge(side);
        let q = self.planar.vertex_beyond_edge(right);
        let (pa, pb, pk) = (self.lifted(a), self.lifted(b), self.lifted(k));
        let (ba, bb) = (self.beta[a].clone().unwrap(), self.beta[b].clone().unwrap());
        let w = wbar / (ba * bb);
        // ω(a, b; q, k) = w with q = β·q̄ is linear in β
        let qbar = &self.f.vertices[q];
        let dk = det3(&pa, &pb, &pk);
        let x = det3(&(&pb - &pa), &(&pk - &pa), qbar);
        let y = det3(&pa, &pb, qbar);
        let den = x + &w * &dk * y;
        if den.is_zero() {
            return Err(StressError::ZeroDenominator(a, b));
        }
        let bq = dk / den;
        self.assign(right.face, q, bq)?;
        if self.visited[right.face] {
            self.loop_checks += 1;
            return Ok(None);
        }
        self.visited[right.face] = true;
        self.tree_crossings += 1;
        self.lift_face_plane(right.face, a, b, q)?;
        Ok(Some(right.face))
    }
}

/// Reconstructs the surface projecting to `f` with stress `ω̄`, given the
/// lifted positions of three vertices of one face.
///
/// Faces are visited breadth-first from the seed face; every further face
/// adjacency is checked for agreement, so a stress that admits no lifting is
/// reported as `MonodromyNonzero`.
pub fn lift_framework(f: &StressedFramework, seed: &[SeedPoint; 3]) -> Result<LiftResult> {
    let faces = f.faces.clone().ok_or(StressError::MissingFaces)?;
    let planar = build_surface(f.vertices.clone(), faces).map_err(surface_err)?;
    let n = f.vertices.len();
    let ids: Vec<usize> = seed.iter().map(|s| s.vertex).collect();
    if ids.iter().any(|&v| v >= n) {
        return Err(StressError::InvalidSeed(format!("seed vertices {ids:?} out of range (n = {n})")));
    }
    if ids[0] == ids[1] || ids[1] == ids[2] || ids[0] == ids[2] {
        return Err(StressError::InvalidSeed("seed vertices must be distinct".into()));
    }
    let seed_face = planar
        .faces()
        .iter()
        .position(|face| ids.iter().all(|v| face.contains(v)))
        .ok_or_else(|| StressError::InvalidSeed(format!("vertices {ids:?} share no face")))?;
    check_star_directions(f)?;

    let mut beta = vec![None; n];
    for s in seed {
        let b = f.plane.beta(&s.point);
        if b.is_zero() || f.vertices[s.vertex].scale(&b) != s.point {
            return Err(StressError::InvalidSeed(format!(
                "point {} does not project to vertex {}",
                s.point, s.vertex
            )));
        }
        beta[s.vertex] = Some(b);
    }
    let mut lifter = Lifter {
        f,
        visited: vec![false; planar.faces().len()],
        planar,
        stress: f.stress_map(),
        beta,
        tree_crossings: 0,
        loop_checks: 0,
    };
    let (a, b, c) = (ids[0], ids[1], ids[2]);
    if det3(&lifter.lifted(a), &lifter.lifted(b), &lifter.lifted(c)).is_zero() {
        return Err(StressError::InvalidSeed("seed points are collinear or span a plane through the origin".into()));
    }
    lifter.visited[seed_face] = true;
    lifter.lift_face_plane(seed_face, a, b, c)?;

    let mut queue = VecDeque::from([seed_face]);
    while let Some(face) = queue.pop_front() {
        for pos in 0..lifter.planar.faces()[face].len() {
            if let Some(next) = lifter.cross(FaceSide { face, pos })? {
                queue.push_back(next);
            }
        }
    }

    let unreached: Vec<usize> = (0..n).filter(|&v| lifter.beta[v].is_none()).collect();
    if !unreached.is_empty() {
        return Err(StressError::UnreachedVertices(unreached));
    }
    let betas: Vec<Rat> = lifter.beta.into_iter().map(Option::unwrap).collect();
    let points = f.vertices.iter().zip(&betas).map(|(p, b)| p.scale(b)).collect();
    let mut surface = build_surface(points, lifter.planar.faces().to_vec())
        .and_then(|s| s.with_extra_edges(f.edges.iter().map(|e| (e.i, e.j))))
        .map_err(surface_err)?;
    if let Some(labels) = &f.labels {
        surface = surface.with_labels(labels.clone()).map_err(surface_err)?;
    }
    Ok(LiftResult {
        surface,
        betas,
        tree_crossings: lifter.tree_crossings,
        loop_checks: lifter.loop_checks,
    })
}
