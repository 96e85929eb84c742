//! Integer-geometry invariants of lattice configurations in ℤ³.
//!
//! All invariants are indices of sublattices and are evaluated through
//! closed gcd/determinant formulas; the divisions in the distance and sine
//! formulas are exact.

use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::exactnum::{det3_cols, Int, LatticePoint, Vec3};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntGeomError {
    #[error("DegeneratePoints: the two points coincide")]
    DegeneratePoints,
    #[error("DegenerateVectors: the vectors are linearly dependent")]
    DegenerateVectors,
    #[error("PointOnLine: the point lies on the line")]
    PointOnLine,
    #[error("PointOnPlane: the point lies on the plane")]
    PointOnPlane,
    #[error("DegeneratePlane: the three points are collinear")]
    DegeneratePlane,
    #[error("CoplanarInput: the two planes coincide")]
    CoplanarInput,
}

impl IntGeomError {
    pub fn name(&self) -> &'static str {
        match self {
            IntGeomError::DegeneratePoints => "DegeneratePoints",
            IntGeomError::DegenerateVectors => "DegenerateVectors",
            IntGeomError::PointOnLine => "PointOnLine",
            IntGeomError::PointOnPlane => "PointOnPlane",
            IntGeomError::DegeneratePlane => "DegeneratePlane",
            IntGeomError::CoplanarInput => "CoplanarInput",
        }
    }
}

pub type Result<T> = std::result::Result<T, IntGeomError>;

/// Plane `normal · x = offset` with a primitive integer normal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntegerPlane {
    normal: LatticePoint,
    offset: Int,
}

impl IntegerPlane {
    /// Plane through three integer points, normal made primitive.
    pub fn through(q1: &LatticePoint, q2: &LatticePoint, q3: &LatticePoint) -> Result<Self> {
        let n = (q2 - q1).cross(&(q3 - q1));
        let normal = n.primitive().ok_or(IntGeomError::DegeneratePlane)?;
        let offset = normal.dot(q1);
        Ok(IntegerPlane { normal, offset })
    }

    pub fn normal(&self) -> &LatticePoint {
        &self.normal
    }

    pub fn offset(&self) -> &Int {
        &self.offset
    }

    pub fn contains(&self, p: &LatticePoint) -> bool {
        self.normal.dot(p) == self.offset
    }

    /// Integer distance to a point: |n·p − c| for a primitive normal.
    pub fn lattice_distance(&self, p: &LatticePoint) -> Int {
        (self.normal.dot(p) - &self.offset).abs()
    }
}

fn exact_div(num: Int, den: &Int) -> Int {
    let (q, r) = num.div_rem(den);
    debug_assert!(r.is_zero(), "inexact lattice index division");
    q
}

pub fn integer_length(p: &LatticePoint, q: &LatticePoint) -> Result<Int> {
    let d = q - p;
    if d.is_zero() {
        return Err(IntGeomError::DegeneratePoints);
    }
    Ok(d.content())
}

pub fn integer_area(v1: &LatticePoint, v2: &LatticePoint) -> Result<Int> {
    let c = v1.cross(v2);
    if c.is_zero() {
        return Err(IntGeomError::DegenerateVectors);
    }
    Ok(c.content())
}

pub fn integer_volume(v1: &LatticePoint, v2: &LatticePoint, v3: &LatticePoint) -> Result<Int> {
    let d = det3_cols(v1, v2, v3);
    if d.is_zero() {
        return Err(IntGeomError::DegenerateVectors);
    }
    Ok(d.abs())
}

/// Integer distance from `p` to the line through `a` and `b`.
pub fn integer_distance_line(p: &LatticePoint, a: &LatticePoint, b: &LatticePoint) -> Result<Int> {
    let len = integer_length(a, b)?;
    let area = integer_area(&(a - p), &(b - p)).map_err(|_| IntGeomError::PointOnLine)?;
    Ok(exact_div(area, &len))
}

/// Integer distance from `p` to the plane through `q1`, `q2`, `q3`.
pub fn integer_distance_plane(
    p: &LatticePoint,
    q1: &LatticePoint,
    q2: &LatticePoint,
    q3: &LatticePoint,
) -> Result<Int> {
    let area = integer_area(&(q2 - q1), &(q3 - q1)).map_err(|_| IntGeomError::DegeneratePlane)?;
    let vol = integer_volume(&(q1 - p), &(q2 - p), &(q3 - p))
        .map_err(|_| IntGeomError::PointOnPlane)?;
    Ok(exact_div(vol, &area))
}

/// Integer sine of the angle between the planes spanned by `p1 p2 p3` and
/// `p1 p2 p4`, which share the line `p1 p2`.
pub fn integer_sine(
    p1: &LatticePoint,
    p2: &LatticePoint,
    p3: &LatticePoint,
    p4: &LatticePoint,
) -> Result<Int> {
    let len = integer_length(p1, p2)?;
    let d3 = integer_distance_line(p3, p1, p2)?;
    let d4 = integer_distance_line(p4, p1, p2)?;
    let vol = integer_volume(&(p3 - p1), &(p4 - p1), &(p2 - p1))
        .map_err(|_| IntGeomError::CoplanarInput)?;
    Ok(exact_div(vol, &(len * d3 * d4)))
}

/// Convenience for tests and the CLI.
pub fn lattice(x: i64, y: i64, z: i64) -> LatticePoint {
    Vec3::from_i64(x, y, z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::int;

    fn p(x: i64, y: i64, z: i64) -> LatticePoint {
        lattice(x, y, z)
    }

    #[test]
    fn length_examples() {
        assert_eq!(integer_length(&p(0, 0, 0), &p(1, 1, 2)), Ok(int(1)));
        assert_eq!(integer_length(&p(0, 0, 0), &p(2, 4, 6)), Ok(int(2)));
        assert_eq!(integer_length(&p(2, 3, 4), &p(2, 7, 9)), Ok(int(1)));
        assert_eq!(
            integer_length(&p(1, 2, 3), &p(1, 2, 3)),
            Err(IntGeomError::DegeneratePoints)
        );
    }

    #[test]
    fn area_examples() {
        assert_eq!(integer_area(&p(1, 0, 0), &p(0, 1, 0)), Ok(int(1)));
        assert_eq!(integer_area(&p(1, 2, 0), &p(2, -1, 0)), Ok(int(5)));
        assert_eq!(integer_area(&p(2, 0, 0), &p(0, 3, 0)), Ok(int(6)));
        assert_eq!(
            integer_area(&p(1, 2, 3), &p(-2, -4, -6)),
            Err(IntGeomError::DegenerateVectors)
        );
    }

    #[test]
    fn volume_examples() {
        assert_eq!(integer_volume(&p(1, 0, 0), &p(0, 1, 0), &p(0, 0, 1)), Ok(int(1)));
        // normal form (a,0,0), (b,c,0), (q,r,s)
        assert_eq!(integer_volume(&p(3, 0, 0), &p(5, 4, 0), &p(7, -2, 5)), Ok(int(60)));
        let (p1, p2, p3, p4) = (p(2, 3, 4), p(2, 7, 9), p(1, -3, 5), p(5, 6, 7));
        assert_eq!(integer_volume(&(&p3 - &p1), &(&p4 - &p1), &(&p2 - &p1)), Ok(int(99)));
    }

    #[test]
    fn distance_to_line_examples() {
        assert_eq!(integer_distance_line(&p(0, 1, 0), &p(0, 0, 0), &p(1, 0, 0)), Ok(int(1)));
        assert_eq!(integer_distance_line(&p(0, 5, 0), &p(0, 0, 0), &p(1, 0, 0)), Ok(int(5)));
        assert_eq!(integer_distance_line(&p(7, 4, 0), &p(0, 0, 0), &p(3, 0, 0)), Ok(int(4)));
        assert_eq!(
            integer_distance_line(&p(2, 0, 0), &p(0, 0, 0), &p(1, 0, 0)),
            Err(IntGeomError::PointOnLine)
        );
    }

    #[test]
    fn distance_to_plane_examples() {
        let o = p(0, 0, 0);
        let (e1, e2) = (p(1, 0, 0), p(0, 1, 0));
        assert_eq!(integer_distance_plane(&p(0, 0, 1), &o, &e1, &e2), Ok(int(1)));
        assert_eq!(integer_distance_plane(&p(4, -3, 7), &o, &e1, &e2), Ok(int(7)));
        assert_eq!(
            integer_distance_plane(&o, &p(2, 3, 4), &p(2, 7, 9), &p(1, -3, 5)),
            Ok(int(69))
        );
        assert_eq!(
            integer_distance_plane(&p(5, 5, 0), &o, &e1, &e2),
            Err(IntGeomError::PointOnPlane)
        );
        assert_eq!(
            integer_distance_plane(&p(0, 0, 1), &o, &e1, &p(2, 0, 0)),
            Err(IntGeomError::DegeneratePlane)
        );
    }

    #[test]
    fn sine_examples() {
        // xz and yz planes meeting along the z axis
        assert_eq!(
            integer_sine(&p(0, 0, 0), &p(0, 0, 1), &p(1, 0, 0), &p(0, 1, 0)),
            Ok(int(1))
        );
        // normal form with r = 4, s = 6: s / gcd(r, s) = 3
        assert_eq!(
            integer_sine(&p(0, 0, 0), &p(2, 0, 0), &p(1, 3, 0), &p(5, 4, 6)),
            Ok(int(3))
        );
        assert_eq!(
            integer_sine(&p(2, 3, 4), &p(2, 7, 9), &p(1, -3, 5), &p(5, 6, 7)),
            Ok(int(33))
        );
        assert_eq!(
            integer_sine(&p(0, 0, 0), &p(1, 0, 0), &p(0, 1, 0), &p(3, 2, 0)),
            Err(IntGeomError::CoplanarInput)
        );
    }

    #[test]
    fn plane_normal_is_primitive() {
        let pl = IntegerPlane::through(&p(2, 3, 4), &p(2, 7, 9), &p(1, -3, 5)).unwrap();
        assert_eq!(pl.normal().content(), int(1));
        assert_eq!(pl.lattice_distance(&p(0, 0, 0)), int(69));
        assert!(pl.contains(&p(2, 7, 9)));
    }
}
