//! Brute-force sail: convex hull of the nonzero lattice points of a cone
//! inside the box `[-B, B]³`, restricted to the faces that look at the origin.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::ToPrimitive;

use super::{build_surface, ConeCertifier, ConeSpec, Membership, OrientedSurface, Result, SurfaceError};
use crate::exactnum::{Int, LatticePoint, Vec3};

type P = [i64; 3];

#[derive(Clone, Debug)]
pub struct BruteForceSail {
    pub surface: OrientedSurface,
    /// Per face: the same vertex set is also a sail face in the box of
    /// twice the size.
    pub certified: Vec<bool>,
    pub bound: i64,
}

fn sub(a: &P, b: &P) -> [i128; 3] {
    [
        (a[0] - b[0]) as i128,
        (a[1] - b[1]) as i128,
        (a[2] - b[2]) as i128,
    ]
}

fn cross(u: [i128; 3], v: [i128; 3]) -> [i128; 3] {
    [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ]
}

fn dot(u: [i128; 3], v: [i128; 3]) -> i128 {
    u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
}

/// Positive when `d` is on the side the normal of `a b c` points to.
fn orient(a: &P, b: &P, c: &P, d: &P) -> i128 {
    dot(cross(sub(b, a), sub(c, a)), sub(d, a))
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn primitive(n: [i128; 3]) -> [i128; 3] {
    let g = gcd(gcd(n[0], n[1]), n[2]);
    n.map(|c| c / g)
}

/// Triangulated hull as outward-oriented triangles.
fn hull_triangles(pts: &[P]) -> Result<Vec<[usize; 3]>> {
    let n = pts.len();
    let i0 = 0;
    let i1 = (1..n).find(|&i| pts[i] != pts[i0]).ok_or(SurfaceError::InsufficientPoints)?;
    let i2 = (1..n)
        .find(|&i| cross(sub(&pts[i1], &pts[i0]), sub(&pts[i], &pts[i0])) != [0; 3])
        .ok_or(SurfaceError::InsufficientPoints)?;
    let i3 = (1..n)
        .find(|&i| orient(&pts[i0], &pts[i1], &pts[i2], &pts[i]) != 0)
        .ok_or(SurfaceError::InsufficientPoints)?;

    let mut faces: Vec<Option<[usize; 3]>> = Vec::new();
    let mut edge_face: HashMap<(usize, usize), usize> = HashMap::new();
    let add = |f: [usize; 3], faces: &mut Vec<Option<[usize; 3]>>, ef: &mut HashMap<(usize, usize), usize>| {
        let id = faces.len();
        for k in 0..3 {
            ef.insert((f[k], f[(k + 1) % 3]), id);
        }
        faces.push(Some(f));
    };
    let (a, b, c) = if orient(&pts[i0], &pts[i1], &pts[i2], &pts[i3]) > 0 {
        (i0, i2, i1)
    } else {
        (i0, i1, i2)
    };
    for f in [[a, b, c], [a, i3, b], [b, i3, c], [c, i3, a]] {
        add(f, &mut faces, &mut edge_face);
    }

    for p in 0..n {
        if [i0, i1, i2, i3].contains(&p) {
            continue;
        }
        let visible: Vec<usize> = faces
            .iter()
            .enumerate()
            .filter_map(|(id, f)| {
                let f = f.as_ref()?;
                (orient(&pts[f[0]], &pts[f[1]], &pts[f[2]], &pts[p]) > 0).then_some(id)
            })
            .collect();
        if visible.is_empty() {
            continue;
        }
        let vis: BTreeSet<usize> = visible.iter().copied().collect();
        let mut horizon = Vec::new();
        for &id in &visible {
            let f = faces[id].unwrap();
            for k in 0..3 {
                let (u, v) = (f[k], f[(k + 1) % 3]);
                let other = edge_face[&(v, u)];
                if !vis.contains(&other) {
                    horizon.push((u, v));
                }
            }
        }
        for &id in &visible {
            let f = faces[id].take().unwrap();
            for k in 0..3 {
                edge_face.remove(&(f[k], f[(k + 1) % 3]));
            }
        }
        for (u, v) in horizon {
            add([u, v, p], &mut faces, &mut edge_face);
        }
    }
    Ok(faces.into_iter().flatten().collect())
}

/// A facet of the hull: outward primitive normal, offset, boundary cycle.
struct Facet {
    normal: [i128; 3],
    offset: i128,
    cycle: Vec<usize>,
}

fn merge_facets(pts: &[P], tris: &[[usize; 3]]) -> Vec<Facet> {
    let mut groups: BTreeMap<([i128; 3], i128), Vec<[usize; 3]>> = BTreeMap::new();
    for t in tris {
        let n = primitive(cross(sub(&pts[t[1]], &pts[t[0]]), sub(&pts[t[2]], &pts[t[0]])));
        let h = dot(n, pts[t[0]].map(|c| c as i128));
        groups.entry((n, h)).or_default().push(*t);
    }
    groups
        .into_iter()
        .map(|((normal, offset), ts)| {
            let directed: BTreeSet<(usize, usize)> = ts
                .iter()
                .flat_map(|t| (0..3).map(move |k| (t[k], t[(k + 1) % 3])))
                .collect();
            let next: BTreeMap<usize, usize> = directed
                .iter()
                .filter(|(u, v)| !directed.contains(&(*v, *u)))
                .copied()
                .collect();
            let start = *next.keys().min_by_key(|&&v| pts[v]).unwrap();
            let mut cycle = vec![start];
            let mut cur = next[&start];
            while cur != start {
                cycle.push(cur);
                cur = next[&cur];
            }
            // drop vertices in the middle of a straight boundary run
            let m = cycle.len();
            let keep: Vec<usize> = (0..m)
                .filter(|&k| {
                    let (a, b, c) = (cycle[(k + m - 1) % m], cycle[k], cycle[(k + 1) % m]);
                    cross(sub(&pts[b], &pts[a]), sub(&pts[c], &pts[b])) != [0; 3]
                })
                .map(|k| cycle[k])
                .collect();
            Facet {
                normal,
                offset,
                cycle: keep,
            }
        })
        .collect()
}

fn to_lattice(v: [i128; 3]) -> LatticePoint {
    Vec3(v.map(Int::from))
}

const ANCHORS: usize = 64;

fn in_cone(cert: &mut ConeCertifier, p: &P) -> Result<bool> {
    Ok(cert.classify(&Vec3::from_i64(p[0], p[1], p[2]))? != Membership::Exterior)
}

/// Nonzero lattice points of the closed cone in the box, minus points of the
/// form `a + r` with `a` one of the smallest points and `r ≠ 0` in the cone.
/// Such a point lies strictly behind every origin-facing support plane, so
/// removing it changes no sail face of the truncated hull.
fn cone_points(cert: &mut ConeCertifier, bound: i64) -> Result<Vec<P>> {
    let mut all = Vec::new();
    for x in -bound..=bound {
        for y in -bound..=bound {
            for z in -bound..=bound {
                let p = [x, y, z];
                if p != [0, 0, 0] && in_cone(cert, &p)? {
                    all.push(p);
                }
            }
        }
    }
    all.sort_by_key(|p| (p.iter().map(|c| c.abs()).sum::<i64>(), *p));
    let anchors: Vec<P> = all.iter().take(ANCHORS).copied().collect();
    let mut out = anchors.clone();
    for p in &all[anchors.len().min(all.len())..] {
        let mut dominated = false;
        for a in &anchors {
            let d = [p[0] - a[0], p[1] - a[1], p[2] - a[2]];
            if in_cone(cert, &d)? {
                dominated = true;
                break;
            }
        }
        if !dominated {
            out.push(*p);
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Sail faces as vertex cycles oriented with their normal pointing away
/// from the origin.
fn sail_faces(cert: &mut ConeCertifier, bound: i64) -> Result<Vec<Vec<P>>> {
    let pts = cone_points(cert, bound)?;
    let tris = hull_triangles(&pts)?;
    let mut out = Vec::new();
    for f in merge_facets(&pts, &tris) {
        if f.offset >= 0 {
            continue;
        }
        let n = to_lattice(f.normal);
        let mut facing = true;
        for i in 0..3 {
            if cert.ray_functional_sign(&n, i)? != Ordering::Less {
                facing = false;
                break;
            }
        }
        if facing {
            out.push(f.cycle.iter().rev().map(|&v| pts[v]).collect());
        }
    }
    Ok(out)
}

/// Computes the faces of the lattice hull of the cone that face the origin,
/// using lattice points with coordinates in `[-bound, bound]`.
pub fn brute_force_sail(cone: &ConeSpec, bound: i64) -> Result<BruteForceSail> {
    if bound <= 0 {
        return Err(SurfaceError::InsufficientPoints);
    }
    let mut cert = ConeCertifier::new(cone)?;
    let faces = sail_faces(&mut cert, bound)?;
    let bigger: BTreeSet<BTreeSet<P>> = sail_faces(&mut cert, 2 * bound)?
        .into_iter()
        .map(|f| f.into_iter().collect())
        .collect();
    let certified = faces
        .iter()
        .map(|f| bigger.contains(&f.iter().copied().collect::<BTreeSet<P>>()))
        .collect();

    let verts: BTreeSet<P> = faces.iter().flatten().copied().collect();
    let index: BTreeMap<P, usize> = verts.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    let vertices = verts
        .iter()
        .map(|p| Vec3::<Int>::from_i64(p[0], p[1], p[2]).to_rat())
        .collect();
    let face_idx = faces
        .iter()
        .map(|f| f.iter().map(|p| index[p]).collect())
        .collect();
    let surface = build_surface(vertices, face_idx)?;
    Ok(BruteForceSail {
        surface,
        certified,
        bound,
    })
}

impl BruteForceSail {
    /// Vertices as integer points.
    pub fn lattice_vertices(&self) -> Vec<LatticePoint> {
        self.surface
            .vertices()
            .iter()
            .map(|v| v.to_int().expect("hull vertices are lattice points"))
            .collect()
    }

    /// Certified faces as sets of vertex coordinates.
    pub fn certified_faces(&self) -> Vec<BTreeSet<[i64; 3]>> {
        let vs = self.lattice_vertices();
        self.surface
            .faces()
            .iter()
            .zip(&self.certified)
            .filter(|(_, c)| **c)
            .map(|(f, _)| {
                f.iter()
                    .map(|&i| vs[i].0.clone().map(|c| c.to_i64().unwrap()))
                    .collect()
            })
            .collect()
    }
}

/// Hull faces against a generated patch, restricted to the certified region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleComparison {
    /// Vertices of certified hull faces.
    pub certified_vertices: BTreeSet<P>,
    /// Patch vertices on the support plane of some certified face.
    pub patch_vertices_in_region: BTreeSet<P>,
    /// Certified vertices the patch does not reach.
    pub uncovered: BTreeSet<P>,
    /// Certified faces whose vertices are all patch vertices, and how many
    /// of those are patch faces too.
    pub covered_faces: usize,
    pub matched_faces: usize,
}

impl OracleComparison {
    /// The patch and the hull agree wherever both are defined.
    pub fn agrees(&self) -> bool {
        self.covered_faces == self.matched_faces
            && self.patch_vertices_in_region.is_subset(&self.certified_vertices)
    }

    /// Agreement, with every certified vertex present in the patch.
    pub fn identical(&self) -> bool {
        self.agrees() && self.uncovered.is_empty() && self.certified_vertices == self.patch_vertices_in_region
    }
}

pub fn compare_with_patch(hull: &BruteForceSail, patch: &OrientedSurface) -> OracleComparison {
    let small = |v: &crate::exactnum::Vec3| -> Option<P> {
        let p = v.to_int()?;
        Some([p.0[0].to_i64()?, p.0[1].to_i64()?, p.0[2].to_i64()?])
    };
    let patch_points: Vec<Option<P>> = patch.vertices().iter().map(small).collect();
    let all: BTreeSet<P> = patch_points.iter().flatten().copied().collect();
    let patch_faces: BTreeSet<BTreeSet<P>> = patch
        .faces()
        .iter()
        .filter_map(|f| f.iter().map(|&v| patch_points[v]).collect::<Option<BTreeSet<P>>>())
        .collect();

    let hull_points: Vec<P> = hull
        .lattice_vertices()
        .iter()
        .map(|p| small(&p.to_rat()).expect("hull points are small"))
        .collect();
    let mut out = OracleComparison {
        certified_vertices: BTreeSet::new(),
        patch_vertices_in_region: BTreeSet::new(),
        uncovered: BTreeSet::new(),
        covered_faces: 0,
        matched_faces: 0,
    };
    for (f, _) in hull.surface.faces().iter().zip(&hull.certified).filter(|(_, c)| **c) {
        let pts: Vec<P> = f.iter().map(|&i| hull_points[i]).collect();
        let n = primitive(cross(sub(&pts[1], &pts[0]), sub(&pts[2], &pts[0])));
        let c = dot(n, pts[0].map(i128::from));
        out.patch_vertices_in_region
            .extend(all.iter().filter(|q| dot(n, q.map(i128::from)) == c));
        let set: BTreeSet<P> = pts.iter().copied().collect();
        if set.is_subset(&all) {
            out.covered_faces += 1;
            out.matched_faces += usize::from(patch_faces.contains(&set));
        }
        out.certified_vertices.extend(set);
    }
    out.uncovered = out.certified_vertices.difference(&all).copied().collect();
    out
}
