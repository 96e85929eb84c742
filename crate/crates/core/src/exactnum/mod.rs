//! Exact scalars, 3-vectors and 3×3 matrices.
//!
//! Integers are [`BigInt`], rationals are [`BigRational`] (always reduced with
//! a positive denominator, so `==` is structural). Everything here is pure and
//! allocation-only; no floating point is involved anywhere.

mod interval;
mod poly;

pub use interval::Interval;
pub use poly::{isolate_real_roots, Poly, RootInterval};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Int = BigInt;
pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("SingularMatrix: determinant is zero")]
pub struct SingularMatrix;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(Int::from(num), Int::from(den))
}

pub fn rat_from_int(v: &Int) -> Rat {
    Rat::from_integer(v.clone())
}

/// Least common multiple of the denominators of `values` (1 for an empty set).
pub fn denominator_lcm<'a, I: IntoIterator<Item = &'a Rat>>(values: I) -> Int {
    values
        .into_iter()
        .fold(Int::one(), |acc, r| acc.lcm(r.denom()))
}

/// Scalars usable in [`Vec3`] and [`Mat3`].
pub trait Scalar: Clone + Signed + fmt::Debug + PartialEq {}
impl<T: Clone + Signed + fmt::Debug + PartialEq> Scalar for T {}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vec3<T = Rat>(pub [T; 3]);

pub type LatticePoint = Vec3<Int>;

impl<T: Scalar> Vec3<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Vec3([x, y, z])
    }

    pub fn zero() -> Self {
        Vec3([T::zero(), T::zero(), T::zero()])
    }

    pub fn x(&self) -> &T {
        &self.0[0]
    }

    pub fn y(&self) -> &T {
        &self.0[1]
    }

    pub fn z(&self) -> &T {
        &self.0[2]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, o: &Self) -> T {
        self.0[0].clone() * o.0[0].clone()
            + self.0[1].clone() * o.0[1].clone()
            + self.0[2].clone() * o.0[2].clone()
    }

    pub fn cross(&self, o: &Self) -> Self {
        let [a0, a1, a2] = &self.0;
        let [b0, b1, b2] = &o.0;
        Vec3([
            a1.clone() * b2.clone() - a2.clone() * b1.clone(),
            a2.clone() * b0.clone() - a0.clone() * b2.clone(),
            a0.clone() * b1.clone() - a1.clone() * b0.clone(),
        ])
    }

    pub fn scale(&self, s: &T) -> Self {
        Vec3(self.0.clone().map(|c| c * s.clone()))
    }

    pub fn map<U, F: FnMut(T) -> U>(self, f: F) -> Vec3<U> {
        Vec3(self.0.map(f))
    }
}

impl Vec3<Int> {
    pub fn from_i64(x: i64, y: i64, z: i64) -> Self {
        Vec3([int(x), int(y), int(z)])
    }

    pub fn to_rat(&self) -> Vec3<Rat> {
        Vec3(self.0.clone().map(Rat::from_integer))
    }

    /// gcd of the absolute component values; zero only for the zero vector.
    pub fn content(&self) -> Int {
        self.0.iter().fold(Int::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content. `None` for the zero vector.
    pub fn primitive(&self) -> Option<Self> {
        let g = self.content();
        if g.is_zero() {
            return None;
        }
        Some(Vec3(self.0.clone().map(|c| c / &g)))
    }
}

impl Vec3<Rat> {
    pub fn from_ratios(x: (i64, i64), y: (i64, i64), z: (i64, i64)) -> Self {
        Vec3([rat(x.0, x.1), rat(y.0, y.1), rat(z.0, z.1)])
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }

    pub fn to_int(&self) -> Option<Vec3<Int>> {
        if !self.is_integral() {
            return None;
        }
        Some(Vec3(self.0.clone().map(|c| c.to_integer())))
    }

    /// Smallest positive integer multiple of `self` with integer entries.
    pub fn clear_denominators(&self) -> Vec3<Int> {
        let l = denominator_lcm(self.0.iter());
        let lr = Rat::from_integer(l);
        Vec3(self.0.clone().map(|c| (c * &lr).to_integer()))
    }
}

impl<T: Scalar> Add for &Vec3<T> {
    type Output = Vec3<T>;
    fn add(self, o: &Vec3<T>) -> Vec3<T> {
        Vec3([
            self.0[0].clone() + o.0[0].clone(),
            self.0[1].clone() + o.0[1].clone(),
            self.0[2].clone() + o.0[2].clone(),
        ])
    }
}

impl<T: Scalar> Sub for &Vec3<T> {
    type Output = Vec3<T>;
    fn sub(self, o: &Vec3<T>) -> Vec3<T> {
        Vec3([
            self.0[0].clone() - o.0[0].clone(),
            self.0[1].clone() - o.0[1].clone(),
            self.0[2].clone() - o.0[2].clone(),
        ])
    }
}

impl<T: Scalar> Neg for &Vec3<T> {
    type Output = Vec3<T>;
    fn neg(self) -> Vec3<T> {
        Vec3(self.0.clone().map(|c| -c))
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for Vec3<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
    }
}

/// Determinant of the matrix whose columns (equivalently rows) are `a`, `b`, `c`.
pub fn det3_cols<T: Scalar>(a: &Vec3<T>, b: &Vec3<T>, c: &Vec3<T>) -> T {
    a.dot(&b.cross(c))
}

/// Row-major 3×3 matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat3<T = Rat>(pub [[T; 3]; 3]);

impl<T: Scalar> Mat3<T> {
    pub fn from_rows(rows: [[T; 3]; 3]) -> Self {
        Mat3(rows)
    }

    pub fn identity() -> Self {
        Self::diag(T::one(), T::one(), T::one())
    }

    pub fn zero() -> Self {
        Self::diag(T::zero(), T::zero(), T::zero())
    }

    pub fn diag(a: T, b: T, c: T) -> Self {
        let z = T::zero;
        Mat3([[a, z(), z()], [z(), b, z()], [z(), z(), c]])
    }

    pub fn row(&self, i: usize) -> Vec3<T> {
        Vec3(self.0[i].clone())
    }

    pub fn col(&self, j: usize) -> Vec3<T> {
        Vec3([self.0[0][j].clone(), self.0[1][j].clone(), self.0[2][j].clone()])
    }

    pub fn transpose(&self) -> Self {
        Mat3([self.col(0).0, self.col(1).0, self.col(2).0])
    }

    pub fn det(&self) -> T {
        det3_cols(&self.row(0), &self.row(1), &self.row(2))
    }

    pub fn trace(&self) -> T {
        self.0[0][0].clone() + self.0[1][1].clone() + self.0[2][2].clone()
    }

    /// Sum of the principal 2×2 minors.
    pub fn principal_minor_sum(&self) -> T {
        let m = &self.0;
        let minor = |i: usize, j: usize| {
            m[i][i].clone() * m[j][j].clone() - m[i][j].clone() * m[j][i].clone()
        };
        minor(0, 1) + minor(0, 2) + minor(1, 2)
    }

    /// Classical adjugate (transpose of the cofactor matrix).
    pub fn adjugate(&self) -> Self {
        let c0 = self.row(1).cross(&self.row(2));
        let c1 = self.row(2).cross(&self.row(0));
        let c2 = self.row(0).cross(&self.row(1));
        // rows of the cofactor matrix are c0, c1, c2; transpose them
        Mat3([c0.0, c1.0, c2.0]).transpose()
    }

    pub fn mul_vec(&self, v: &Vec3<T>) -> Vec3<T> {
        Vec3([self.row(0).dot(v), self.row(1).dot(v), self.row(2).dot(v)])
    }

    pub fn scale(&self, s: &T) -> Self {
        Mat3(self.0.clone().map(|r| r.map(|c| c * s.clone())))
    }

    pub fn map<U, F: FnMut(T) -> U + Copy>(self, f: F) -> Mat3<U> {
        Mat3(self.0.map(|r| r.map(f)))
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }
}

impl<T: Scalar> Mul for &Mat3<T> {
    type Output = Mat3<T>;
    fn mul(self, o: &Mat3<T>) -> Mat3<T> {
        let cols = [o.col(0), o.col(1), o.col(2)];
        Mat3(std::array::from_fn(|i| {
            let r = self.row(i);
            std::array::from_fn(|j| r.dot(&cols[j]))
        }))
    }
}

impl<T: Scalar> Add for &Mat3<T> {
    type Output = Mat3<T>;
    fn add(self, o: &Mat3<T>) -> Mat3<T> {
        Mat3(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.0[i][j].clone() + o.0[i][j].clone())
        }))
    }
}

impl<T: Scalar> Sub for &Mat3<T> {
    type Output = Mat3<T>;
    fn sub(self, o: &Mat3<T>) -> Mat3<T> {
        Mat3(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.0[i][j].clone() - o.0[i][j].clone())
        }))
    }
}

impl Mat3<Int> {
    pub fn from_i64(rows: [[i64; 3]; 3]) -> Self {
        Mat3(rows.map(|r| r.map(Int::from)))
    }

    pub fn to_rat(&self) -> Mat3<Rat> {
        self.clone().map(Rat::from_integer)
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs().is_one()
    }

    /// Integer inverse of a unimodular matrix.
    pub fn unimodular_inverse(&self) -> Result<Mat3<Int>, SingularMatrix> {
        let d = self.det();
        if d.is_zero() {
            return Err(SingularMatrix);
        }
        if !d.abs().is_one() {
            return Err(SingularMatrix);
        }
        Ok(self.adjugate().scale(&d))
    }

    /// `self^k`, negative powers through the integer inverse.
    pub fn pow_unimodular(&self, k: i64) -> Result<Mat3<Int>, SingularMatrix> {
        let base = if k < 0 {
            self.unimodular_inverse()?
        } else {
            self.clone()
        };
        Ok(pow_nonneg(&base, k.unsigned_abs()))
    }
}

impl Mat3<Rat> {
    pub fn from_int_rows(rows: [[i64; 3]; 3]) -> Self {
        Mat3::<Int>::from_i64(rows).to_rat()
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().flatten().all(|c| c.is_integer())
    }

    pub fn to_int(&self) -> Option<Mat3<Int>> {
        if !self.is_integral() {
            return None;
        }
        Some(self.clone().map(|c| c.to_integer()))
    }
}

pub fn det3(m: &Mat3<Rat>) -> Rat {
    m.det()
}

pub fn mat_inv(m: &Mat3<Rat>) -> Result<Mat3<Rat>, SingularMatrix> {
    let d = m.det();
    if d.is_zero() {
        return Err(SingularMatrix);
    }
    Ok(m.adjugate().scale(&d.recip()))
}

fn pow_nonneg<T: Scalar>(m: &Mat3<T>, mut e: u64) -> Mat3<T> {
    let mut acc = Mat3::identity();
    let mut base = m.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = &acc * &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    acc
}

pub fn mat_pow(m: &Mat3<Rat>, k: i64) -> Result<Mat3<Rat>, SingularMatrix> {
    let base = if k < 0 { mat_inv(m)? } else { m.clone() };
    Ok(pow_nonneg(&base, k.unsigned_abs()))
}

pub fn cross(u: &Vec3<Rat>, v: &Vec3<Rat>) -> Vec3<Rat> {
    u.cross(v)
}

/// Monic cubic `λ³ + c2·λ² + c1·λ + c0`, stored as `[1, c2, c1, c0]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cubic(pub [Rat; 4]);

impl Cubic {
    pub fn eval(&self, x: &Rat) -> Rat {
        self.0
            .iter()
            .fold(Rat::zero(), |acc, c| acc * x + c)
    }

    /// 18abcd − 4b³d + b²c² − 4ac³ − 27a²d².
    pub fn discriminant(&self) -> Rat {
        let [a, b, c, d] = &self.0;
        let n = |v: i64| Rat::from_integer(Int::from(v));
        n(18) * a * b * c * d - n(4) * b * b * b * d + b * b * c * c
            - n(4) * a * c * c * c
            - n(27) * a * a * d * d
    }

    pub fn to_poly(&self) -> Poly {
        let [a, b, c, d] = self.0.clone();
        Poly::new(vec![d, c, b, a])
    }

    /// Evaluates the polynomial at a matrix argument.
    pub fn eval_matrix(&self, m: &Mat3<Rat>) -> Mat3<Rat> {
        self.0
            .iter()
            .fold(Mat3::zero(), |acc, c| &(&acc * m) + &Mat3::identity().scale(c))
    }
}

impl fmt::Display for Cubic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [_, b, c, d] = &self.0;
        let term = |f: &mut fmt::Formatter<'_>, coef: &Rat, pow: &str| -> fmt::Result {
            if coef.is_zero() {
                return Ok(());
            }
            let sign = if coef.is_negative() { '-' } else { '+' };
            let mag = coef.abs();
            if mag.is_one() && !pow.is_empty() {
                write!(f, "{sign}{pow}")
            } else {
                write!(f, "{sign}{mag}{pow}")
            }
        };
        write!(f, "λ³")?;
        term(f, b, "λ²")?;
        term(f, c, "λ")?;
        term(f, d, "")
    }
}

pub fn char_poly(m: &Mat3<Rat>) -> Cubic {
    Cubic([Rat::one(), -m.trace(), m.principal_minor_sum(), -m.det()])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Spectrum {
    pub distinct_real: bool,
    pub all_positive: bool,
    pub irreducible_over_q: bool,
}

pub fn classify_spectrum(m: &Mat3<Int>) -> Spectrum {
    let mr = m.to_rat();
    let cubic = char_poly(&mr);
    let disc = cubic.discriminant();
    let distinct_real = disc.is_positive();
    // sign pattern + − + − rules out non-positive roots once all roots are real
    let all_positive = distinct_real
        && m.trace().is_positive()
        && m.principal_minor_sum().is_positive()
        && m.det().is_positive();
    Spectrum {
        distinct_real,
        all_positive,
        irreducible_over_q: !disc.is_zero() && !has_integer_root(&cubic),
    }
}

/// A monic integer cubic is reducible over ℚ iff it has an integer root.
fn has_integer_root(cubic: &Cubic) -> bool {
    let poly = cubic.to_poly();
    for mut root in isolate_real_roots(&poly) {
        let two = rat(1, 2);
        while root.hi.clone() - root.lo.clone() > two {
            root.bisect(&poly);
        }
        let lo = root.lo.floor().to_integer();
        let hi = root.hi.ceil().to_integer();
        let mut k = lo;
        while k <= hi {
            if poly.eval(&Rat::from_integer(k.clone())).is_zero() {
                return true;
            }
            k += 1;
        }
    }
    false
}
