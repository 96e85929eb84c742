//! Simplicial cones and certified lattice-point membership.
//!
//! For an algebraic cone the rays are eigenvectors of an integer matrix with
//! irreducible characteristic cubic. Each eigenvalue is held as an exact
//! rational isolating interval; eigenvectors are enclosed by evaluating the
//! cross product of two rows of `A − λI` over that interval. A lattice point
//! `p ≠ 0` never lies on a facet of such a cone, so refining the intervals
//! eventually certifies every sign.

use std::cmp::Ordering;

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Result, SurfaceError};
use crate::exactnum::{
    char_poly, classify_spectrum, det3_cols, isolate_real_roots, Int, Interval, LatticePoint, Mat3,
    Poly, Rat, RootInterval, Vec3,
};

pub const DEFAULT_STEP_CAP: u32 = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RaySign {
    Plus,
    Minus,
}

impl RaySign {
    pub fn as_char(self) -> char {
        match self {
            RaySign::Plus => '+',
            RaySign::Minus => '-',
        }
    }
}

/// One of the `2³` cones spanned by the eigen-rays `±x₁, ±x₂, ±x₃` of an
/// integer matrix, or a cone spanned by three explicit rational rays.
///
/// Eigen-rays are ordered by ascending eigenvalue and each is oriented so
/// that its last coordinate is positive; the sign vector then picks `±xᵢ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConeSpec {
    Algebraic { matrix: Mat3<Int>, signs: [RaySign; 3] },
    Rational { rays: [Vec3<Rat>; 3] },
}

impl ConeSpec {
    pub fn algebraic(matrix: Mat3<Int>, signs: [RaySign; 3]) -> Result<Self> {
        let s = classify_spectrum(&matrix);
        if !s.distinct_real {
            return Err(SurfaceError::InvalidCone(
                "matrix does not have three distinct real eigenvalues".into(),
            ));
        }
        if !s.irreducible_over_q {
            return Err(SurfaceError::InvalidCone(
                "characteristic polynomial is reducible over Q".into(),
            ));
        }
        Ok(ConeSpec::Algebraic { matrix, signs })
    }

    pub fn rational(rays: [Vec3<Rat>; 3]) -> Result<Self> {
        if det3_cols(&rays[0], &rays[1], &rays[2]).is_zero() {
            return Err(SurfaceError::InvalidCone("rays are linearly dependent".into()));
        }
        Ok(ConeSpec::Rational { rays })
    }

    /// The algebraic cone of `matrix` whose interior contains `p`.
    pub fn algebraic_containing(matrix: Mat3<Int>, p: &LatticePoint) -> Result<Self> {
        let probe = ConeSpec::algebraic(matrix.clone(), [RaySign::Plus; 3])?;
        let mut cert = ConeCertifier::new(&probe)?;
        let coords = cert.coordinate_signs(p)?;
        let mut signs = [RaySign::Plus; 3];
        for (s, c) in signs.iter_mut().zip(coords) {
            *s = if c == Ordering::Less { RaySign::Minus } else { RaySign::Plus };
        }
        Ok(ConeSpec::Algebraic { matrix, signs })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    Interior,
    /// On a facet; only possible for rational cones.
    Boundary,
    Exterior,
}

impl Membership {
    /// Membership in the closed cone.
    pub fn in_closed_cone(self) -> bool {
        self != Membership::Exterior
    }
}

type IVec = [Interval; 3];

fn icross(a: &IVec, b: &IVec) -> IVec {
    [
        &(&a[1] * &b[2]) - &(&a[2] * &b[1]),
        &(&a[2] * &b[0]) - &(&a[0] * &b[2]),
        &(&a[0] * &b[1]) - &(&a[1] * &b[0]),
    ]
}

fn idot(a: &IVec, b: &IVec) -> Interval {
    &(&(&a[0] * &b[0]) + &(&a[1] * &b[1])) + &(&a[2] * &b[2])
}

fn idot_int(a: &IVec, p: &LatticePoint) -> Interval {
    let t = |i: usize| a[i].scale(&Rat::from_integer(p.0[i].clone()));
    &(&t(0) + &t(1)) + &t(2)
}

const FAST_SCALE_BITS: u32 = 48;

/// Eigen-ray enclosures at one precision level.
struct Enclosure {
    /// Oriented, sign-applied rays `sᵢ·oᵢ·eᵢ`.
    rays: [IVec; 3],
    /// `yᵢ` with `sign(yᵢ·p) = sign(λᵢ)` for `p = Σ λᵢ xᵢ`; `None` while
    /// the orientation or `det(x₁,x₂,x₃)` is not yet certified.
    facet_normals: Option<[IVec; 3]>,
    /// `facet_normals` rounded outward onto a `2^-48` grid.
    fast: Option<[[(i128, i128); 3]; 3]>,
}

struct AlgebraicState {
    poly: Poly,
    eigen_poly: [Poly; 3],
    roots: Vec<RootInterval>,
    steps: u32,
    signs: [RaySign; 3],
    enclosure: Enclosure,
}

enum Kind {
    Algebraic(Box<AlgebraicState>),
    Rational { rays: [Vec3<Rat>; 3], normals: [Vec3<Rat>; 3] },
}

/// Reusable membership oracle for one cone; refines lazily.
pub struct ConeCertifier {
    kind: Kind,
    step_cap: u32,
}

fn poly_vec_cross(a: &[Poly; 3], b: &[Poly; 3]) -> [Poly; 3] {
    let mul = |p: &Poly, q: &Poly| {
        if p.is_zero() || q.is_zero() {
            return Poly::new(vec![]);
        }
        let mut c = vec![Rat::zero(); p.coeffs().len() + q.coeffs().len() - 1];
        for (i, x) in p.coeffs().iter().enumerate() {
            for (j, y) in q.coeffs().iter().enumerate() {
                c[i + j] += x * y;
            }
        }
        Poly::new(c)
    };
    let sub = |p: Poly, q: Poly| {
        let n = p.coeffs().len().max(q.coeffs().len());
        let get = |r: &Poly, i: usize| r.coeffs().get(i).cloned().unwrap_or_else(Rat::zero);
        Poly::new((0..n).map(|i| get(&p, i) - get(&q, i)).collect())
    };
    [
        sub(mul(&a[1], &b[2]), mul(&a[2], &b[1])),
        sub(mul(&a[2], &b[0]), mul(&a[0], &b[2])),
        sub(mul(&a[0], &b[1]), mul(&a[1], &b[0])),
    ]
}

/// Rows of `A − λI` as polynomials in `λ`.
fn shifted_rows(m: &Mat3<Int>) -> [[Poly; 3]; 3] {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let c = Rat::from_integer(m.0[i][j].clone());
            if i == j {
                Poly::new(vec![c, -Rat::one()])
            } else {
                Poly::new(vec![c])
            }
        })
    })
}

fn to_fixed(r: &Rat, up: bool) -> Option<i128> {
    let scaled = r * Rat::from_integer(Int::one() << FAST_SCALE_BITS);
    let v = if up { scaled.ceil() } else { scaled.floor() };
    v.to_integer().to_i128().filter(|x| x.unsigned_abs() < (1u128 << 100))
}

impl AlgebraicState {
    fn new(matrix: &Mat3<Int>, signs: [RaySign; 3]) -> Result<Self> {
        let poly = char_poly(&matrix.to_rat()).to_poly();
        let roots = isolate_real_roots(&poly);
        if roots.len() != 3 {
            return Err(SurfaceError::InvalidCone("expected three real eigenvalues".into()));
        }
        let rows = shifted_rows(matrix);
        // a nonzero polynomial of degree ≤ 2 cannot vanish at a root of an
        // irreducible cubic, so any non-identically-zero pair works
        let eigen_poly = [(0, 1), (0, 2), (1, 2)]
            .into_iter()
            .map(|(a, b)| poly_vec_cross(&rows[a], &rows[b]))
            .find(|v| v.iter().any(|p| !p.is_zero()))
            .ok_or_else(|| SurfaceError::InvalidCone("A − λI has rank < 2".into()))?;
        let mut st = AlgebraicState {
            poly,
            eigen_poly,
            roots,
            steps: 0,
            signs,
            enclosure: Enclosure {
                rays: std::array::from_fn(|_| std::array::from_fn(|_| Interval::point(Rat::zero()))),
                facet_normals: None,
                fast: None,
            },
        };
        st.refine_to(8);
        Ok(st)
    }

    fn refine_to(&mut self, steps: u32) {
        while self.steps < steps {
            for r in &mut self.roots {
                r.bisect(&self.poly);
            }
            self.steps += 1;
        }
        self.rebuild();
    }

    fn rebuild(&mut self) {
        let mut rays: [IVec; 3] = std::array::from_fn(|_| std::array::from_fn(|_| Interval::point(Rat::zero())));
        let mut oriented = true;
        for (i, root) in self.roots.iter().enumerate() {
            let x = root.as_interval();
            let e: IVec = std::array::from_fn(|c| self.eigen_poly[c].eval_interval(&x));
            let orient = match e[2].certain_sign() {
                Some(Ordering::Greater) => Ordering::Greater,
                Some(Ordering::Less) => Ordering::Less,
                _ => {
                    oriented = false;
                    Ordering::Greater
                }
            };
            let flip = (orient == Ordering::Less) ^ (self.signs[i] == RaySign::Minus);
            rays[i] = if flip { e.map(|c| -&c) } else { e };
        }
        let facet_normals = if oriented {
            let n = [
                icross(&rays[1], &rays[2]),
                icross(&rays[2], &rays[0]),
                icross(&rays[0], &rays[1]),
            ];
            match idot(&rays[0], &n[0]).certain_sign() {
                Some(Ordering::Greater) => Some(n),
                Some(Ordering::Less) => Some(n.map(|v| v.map(|c| -&c))),
                _ => None,
            }
        } else {
            None
        };
        let fast = facet_normals.as_ref().and_then(|n| {
            let mut out = [[(0i128, 0i128); 3]; 3];
            for i in 0..3 {
                for c in 0..3 {
                    out[i][c] = (to_fixed(&n[i][c].lo, false)?, to_fixed(&n[i][c].hi, true)?);
                }
            }
            Some(out)
        });
        self.enclosure = Enclosure {
            rays,
            facet_normals,
            fast,
        };
    }
}

fn fast_sign(bounds: &[(i128, i128); 3], p: &[i64; 3]) -> Option<Ordering> {
    let (mut lo, mut hi) = (0i128, 0i128);
    for c in 0..3 {
        let x = p[c] as i128;
        let (a, b) = (bounds[c].0 * x, bounds[c].1 * x);
        lo += a.min(b);
        hi += a.max(b);
    }
    if lo > 0 {
        Some(Ordering::Greater)
    } else if hi < 0 {
        Some(Ordering::Less)
    } else {
        None
    }
}

impl ConeCertifier {
    pub fn new(cone: &ConeSpec) -> Result<Self> {
        Self::with_step_cap(cone, DEFAULT_STEP_CAP)
    }

    pub fn with_step_cap(cone: &ConeSpec, step_cap: u32) -> Result<Self> {
        let kind = match cone {
            ConeSpec::Algebraic { matrix, signs } => {
                Kind::Algebraic(Box::new(AlgebraicState::new(matrix, *signs)?))
            }
            ConeSpec::Rational { rays } => {
                let d = det3_cols(&rays[0], &rays[1], &rays[2]);
                if d.is_zero() {
                    return Err(SurfaceError::InvalidCone("rays are linearly dependent".into()));
                }
                let s = d.signum();
                let normals = [
                    rays[1].cross(&rays[2]).scale(&s),
                    rays[2].cross(&rays[0]).scale(&s),
                    rays[0].cross(&rays[1]).scale(&s),
                ];
                Kind::Rational {
                    rays: rays.clone(),
                    normals,
                }
            }
        };
        Ok(ConeCertifier { kind, step_cap })
    }

    /// Doubles the bisection depth; errors once the cap is reached.
    fn refine(&mut self) -> Result<()> {
        let cap = self.step_cap;
        match &mut self.kind {
            Kind::Algebraic(st) => {
                if st.steps >= cap {
                    return Err(SurfaceError::PrecisionExhausted(st.steps));
                }
                let next = (st.steps * 2).clamp(16, cap);
                st.refine_to(next);
                Ok(())
            }
            Kind::Rational { .. } => Ok(()),
        }
    }

    /// Signs of the coordinates of `p` in the (sign-applied) ray basis.
    pub fn coordinate_signs(&mut self, p: &LatticePoint) -> Result<[Ordering; 3]> {
        let mut out = [Ordering::Equal; 3];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.coordinate_sign(p, i)?;
        }
        Ok(out)
    }

    fn coordinate_sign(&mut self, p: &LatticePoint, i: usize) -> Result<Ordering> {
        loop {
            match &self.kind {
                Kind::Rational { normals, .. } => {
                    return Ok(normals[i].dot(&p.to_rat()).cmp(&Rat::zero()));
                }
                Kind::Algebraic(st) => {
                    if let Some(n) = &st.enclosure.facet_normals {
                        if let Some(s) = idot_int(&n[i], p).certain_sign() {
                            return Ok(s);
                        }
                    }
                }
            }
            self.refine()?;
        }
    }

    pub fn classify(&mut self, p: &LatticePoint) -> Result<Membership> {
        if let (Kind::Algebraic(st), Some(small)) = (&self.kind, small_point(p)) {
            if let Some(fast) = &st.enclosure.fast {
                let mut all_positive = true;
                for n in fast {
                    match fast_sign(n, &small) {
                        Some(Ordering::Less) => return Ok(Membership::Exterior),
                        Some(_) => {}
                        None => all_positive = false,
                    }
                }
                if all_positive {
                    return Ok(Membership::Interior);
                }
            }
        }
        let mut on_facet = false;
        for i in 0..3 {
            match self.coordinate_sign(p, i)? {
                Ordering::Less => return Ok(Membership::Exterior),
                Ordering::Equal => on_facet = true,
                Ordering::Greater => {}
            }
        }
        Ok(if on_facet {
            Membership::Boundary
        } else {
            Membership::Interior
        })
    }

    /// Certified sign of `n · xᵢ` for the (sign-applied) ray `i`.
    pub fn ray_functional_sign(&mut self, n: &LatticePoint, i: usize) -> Result<Ordering> {
        loop {
            match &self.kind {
                Kind::Rational { rays, .. } => {
                    return Ok(rays[i].dot(&n.to_rat()).cmp(&Rat::zero()));
                }
                Kind::Algebraic(st) => {
                    if st.enclosure.facet_normals.is_some() {
                        if let Some(s) = idot_int(&st.enclosure.rays[i], n).certain_sign() {
                            if s != Ordering::Equal {
                                return Ok(s);
                            }
                        }
                    }
                }
            }
            self.refine()?;
        }
    }

    /// Rational enclosures of the rays at the current precision.
    pub fn ray_enclosures(&self) -> [[Interval; 3]; 3] {
        match &self.kind {
            Kind::Algebraic(st) => st.enclosure.rays.clone(),
            Kind::Rational { rays, .. } => {
                std::array::from_fn(|i| std::array::from_fn(|c| Interval::point(rays[i].0[c].clone())))
            }
        }
    }

    pub fn ray_signs(&self) -> Option<[RaySign; 3]> {
        match &self.kind {
            Kind::Algebraic(st) => Some(st.signs),
            Kind::Rational { .. } => None,
        }
    }
}

fn small_point(p: &LatticePoint) -> Option<[i64; 3]> {
    let mut out = [0i64; 3];
    for (o, c) in out.iter_mut().zip(&p.0) {
        let v = c.to_i64()?;
        if v.unsigned_abs() > 1 << 24 {
            return None;
        }
        *o = v;
    }
    Some(out)
}

/// Decides whether `p` lies in the cone. For algebraic cones the answer is
/// `Interior` or `Exterior`; the boundary cannot contain a nonzero lattice point.
pub fn cone_membership(p: &LatticePoint, cone: &ConeSpec) -> Result<Membership> {
    ConeCertifier::new(cone)?.classify(p)
}
