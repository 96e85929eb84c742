//! Worked sails: the golden sail, the pentagon sail and the one-parameter
//! family `M_a`, each with its generators, fundamental domain and a
//! projection plane on which every vertex has positive β.

use crate::exactnum::{int, mat_inv, Int, LatticePoint, Mat3, Rat, Vec3};
use crate::stress::ProjectionPlane;
use crate::surface::{OrbitLabel, PeriodicSailSpec};

fn exact(m: Mat3<Rat>) -> Mat3<Int> {
    m.to_int().expect("generator is integral")
}

fn inv(m: &Mat3<Rat>) -> Mat3<Rat> {
    mat_inv(m).expect("generator is invertible")
}

fn lbl(i: i64, j: i64, k: usize) -> OrbitLabel {
    OrbitLabel::new(i, j, k)
}

/// Single-orbit templates shared by the golden sail and the `M_a` family:
/// every face is a triangle and `p₀₀` has six neighbours.
fn triangulated_templates() -> (Vec<[OrbitLabel; 2]>, Vec<Vec<OrbitLabel>>) {
    let edges = vec![
        [lbl(0, 1, 0), lbl(0, 0, 0)],
        [lbl(0, 1, 0), lbl(1, 0, 0)],
        [lbl(0, 1, 0), lbl(1, 1, 0)],
    ];
    let faces = vec![
        vec![lbl(0, 1, 0), lbl(0, 0, 0), lbl(1, 0, 0)],
        vec![lbl(0, 1, 0), lbl(1, 0, 0), lbl(1, 1, 0)],
    ];
    (edges, faces)
}

/// `A = L = [[1,1,1],[1,2,2],[1,2,3]]`, `M = L⁻¹(L−I)²`, `N = L`, seed `(0,0,1)`.
pub fn golden_sail() -> PeriodicSailSpec {
    let l = Mat3::from_int_rows([[1, 1, 1], [1, 2, 2], [1, 2, 3]]);
    let lm = &l - &Mat3::identity();
    let m = &inv(&l) * &(&lm * &lm);
    let (edges, faces) = triangulated_templates();
    PeriodicSailSpec::new(
        exact(l.clone()),
        exact(m),
        exact(l),
        vec![Vec3::from_i64(0, 0, 1)],
        edges,
        faces,
    )
    .expect("golden sail templates are valid")
}

/// Plane `z = 1`.
pub fn golden_plane() -> ProjectionPlane {
    ProjectionPlane::new(Vec3::from_i64(0, 0, 1), int(1)).unwrap()
}

/// `A = L = [[0,1,0],[0,0,1],[1,1,−3]]`, `M = L⁻²`, `N = M(3I − 2L⁻¹)`; three
/// vertex orbits, seven edge orbits, three triangles and a pentagon.
pub fn pentagon_sail() -> PeriodicSailSpec {
    let l = Mat3::from_int_rows([[0, 1, 0], [0, 0, 1], [1, 1, -3]]);
    let li = inv(&l);
    let m = &li * &li;
    let three = Mat3::diag(Rat::from(int(3)), Rat::from(int(3)), Rat::from(int(3)));
    let n = &m * &(&three - &li.scale(&Rat::from(int(2))));
    let seeds = vec![
        Vec3::from_i64(0, 2, -5),
        Vec3::from_i64(0, 1, -2),
        Vec3::from_i64(-1, 1, -1),
    ];
    let edges = vec![
        [lbl(0, 0, 0), lbl(1, 0, 0)],
        [lbl(0, 0, 1), lbl(1, 0, 0)],
        [lbl(1, 0, 1), lbl(1, 0, 0)],
        [lbl(1, 0, 1), lbl(1, 1, 0)],
        [lbl(1, 1, 0), lbl(0, 0, 2)],
        [lbl(1, 0, 1), lbl(0, 0, 2)],
        [lbl(0, 1, 0), lbl(0, 0, 2)],
    ];
    // cycles oriented so that every coefficient comes out positive
    let faces = vec![
        vec![lbl(0, 0, 1), lbl(1, 0, 0), lbl(0, 0, 0)],
        vec![lbl(1, 1, 0), lbl(0, 0, 2), lbl(0, 1, 0)],
        vec![lbl(1, 1, 0), lbl(1, 0, 1), lbl(0, 0, 2)],
        vec![lbl(0, 0, 1), lbl(0, 1, 0), lbl(0, 0, 2), lbl(1, 0, 1), lbl(1, 0, 0)],
    ];
    PeriodicSailSpec::new(exact(l), exact(m), exact(n), seeds, edges, faces)
        .expect("pentagon sail templates are valid")
}

/// Plane `y = 1`.
pub fn pentagon_plane() -> ProjectionPlane {
    ProjectionPlane::new(Vec3::from_i64(0, 1, 0), int(1)).unwrap()
}

/// `A = M_a = [[0,0,1],[1,0,−a−5],[0,1,a+6]]`, `M = A`, `N = A⁻¹(A − I)²`.
pub fn family_sail(a: u32) -> PeriodicSailSpec {
    let a = i64::from(a);
    let ma = Mat3::from_int_rows([[0, 0, 1], [1, 0, -a - 5], [0, 1, a + 6]]);
    let d = &ma - &Mat3::identity();
    let n = &inv(&ma) * &(&d * &d);
    let (edges, faces) = triangulated_templates();
    PeriodicSailSpec::new(
        exact(ma.clone()),
        exact(ma),
        exact(n),
        vec![Vec3::from_i64(0, 0, 1)],
        edges,
        faces,
    )
    .expect("family templates are valid")
}

/// Plane `2x + y + z = 1`.
pub fn family_plane() -> ProjectionPlane {
    ProjectionPlane::new(Vec3::from_i64(2, 1, 1), int(1)).unwrap()
}

/// A point of the sail, used to pick the cone of the eigen-ray fan.
pub fn sail_point(spec: &PeriodicSailSpec) -> &LatticePoint {
    &spec.seeds[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_matrices() {
        let g = golden_sail();
        assert_eq!(g.m, Mat3::from_i64([[1, 0, 1], [0, 2, 1], [1, 1, 2]]));
        let p = pentagon_sail();
        assert_eq!(p.m, Mat3::from_i64([[4, -2, -1], [-1, 3, 1], [1, 0, 0]]));
        assert_eq!(p.n, Mat3::from_i64([[24, -28, -11], [-11, 13, 5], [5, -6, -2]]));
        let k = family_sail(0);
        assert_eq!(k.n, Mat3::from_i64([[3, 1, 1], [-5, -2, -4], [1, 1, 4]]));
        assert_eq!(k.m.mul_vec(&k.seeds[0]), Vec3::from_i64(1, -5, 6));
        assert_eq!(k.vertex(lbl(0, 1, 0)).unwrap(), Vec3::from_i64(1, -4, 4));
    }
}
