//! Dense univariate polynomials over ℚ and real-root isolation by Sturm
//! sequences with exact rational bisection.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use super::{Interval, Rat};

/// Coefficients in ascending degree; trailing zeros are trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(Vec<Rat>);

impl Poly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.0.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
    }

    /// Interval Horner evaluation; encloses the range over `x`.
    pub fn eval_interval(&self, x: &Interval) -> Interval {
        self.0
            .iter()
            .rev()
            .fold(Interval::point(Rat::zero()), |acc, c| {
                &(&acc * x) + &Interval::point(c.clone())
            })
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rat::from_integer((i as i64).into()))
                .collect(),
        )
    }

    fn rem(&self, d: &Poly) -> Poly {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.0[dd].clone();
        let mut r = self.0.clone();
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1;
            let q = &r[k] / &lead;
            for (i, c) in d.0.iter().enumerate() {
                let idx = k - dd + i;
                r[idx] = &r[idx] - &q * c;
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        Poly::new(r)
    }

    fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }

    fn sign_at(&self, x: &Rat) -> Ordering {
        self.eval(x).cmp(&Rat::zero())
    }

    /// Cauchy bound: every real root lies in `(-R, R)`.
    fn root_bound(&self) -> Rat {
        let Some(d) = self.degree() else {
            return Rat::one();
        };
        let lead = self.0[d].abs();
        let m = self.0[..d]
            .iter()
            .map(|c| c.abs() / &lead)
            .max()
            .unwrap_or_else(Rat::zero);
        m + Rat::one()
    }
}

fn sturm_chain(p: &Poly) -> Vec<Poly> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        let r = chain[n - 2].rem(&chain[n - 1]).neg();
        if r.is_zero() {
            break;
        }
        chain.push(r);
    }
    chain
}

fn sign_changes(chain: &[Poly], x: &Rat) -> usize {
    let signs: Vec<Ordering> = chain
        .iter()
        .map(|p| p.sign_at(x))
        .filter(|s| *s != Ordering::Equal)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// An isolating interval for one real root. Either `lo == hi` is the exact
/// root, or `p(lo)` and `p(hi)` are nonzero with opposite signs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: Rat,
    pub hi: Rat,
}

impl RootInterval {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn as_interval(&self) -> Interval {
        Interval::new(self.lo.clone(), self.hi.clone())
    }

    /// One bisection step, keeping the sign change (or landing on the root).
    pub fn bisect(&mut self, p: &Poly) {
        if self.is_exact() {
            return;
        }
        let mid = (&self.lo + &self.hi) / Rat::from_integer(2.into());
        let sm = p.sign_at(&mid);
        if sm == Ordering::Equal {
            self.lo = mid.clone();
            self.hi = mid;
        } else if sm == p.sign_at(&self.lo) {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
    }
}

/// Isolates all real roots of a square-free polynomial, in ascending order.
pub fn isolate_real_roots(p: &Poly) -> Vec<RootInterval> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let chain = sturm_chain(p);
    let r = p.root_bound();
    let mut out = Vec::new();
    isolate_in(p, &chain, -r.clone(), r, &mut out);
    out
}

/// Roots in the half-open `(a, b]`; neither endpoint is assumed a non-root.
fn isolate_in(p: &Poly, chain: &[Poly], a: Rat, b: Rat, out: &mut Vec<RootInterval>) {
    let count = sign_changes(chain, &a).saturating_sub(sign_changes(chain, &b));
    if count == 0 {
        return;
    }
    if count == 1 {
        if p.eval(&b).is_zero() {
            out.push(RootInterval { lo: b.clone(), hi: b });
            return;
        }
        if !p.eval(&a).is_zero() {
            out.push(RootInterval { lo: a, hi: b });
            return;
        }
    }
    let mid = (&a + &b) / Rat::from_integer(2.into());
    isolate_in(p, chain, a, mid.clone(), out);
    isolate_in(p, chain, mid, b, out);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn poly(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&v| rat(v, 1)).collect())
    }

    #[test]
    fn isolates_integer_roots_exactly_or_by_sign_change() {
        // (x-1)(x-2)(x-3)
        let p = poly(&[-6, 11, -6, 1]);
        let roots = isolate_real_roots(&p);
        assert_eq!(roots.len(), 3);
        for (r, want) in roots.into_iter().zip([1, 2, 3]) {
            let mut r = r;
            for _ in 0..60 {
                r.bisect(&p);
            }
            assert!(r.as_interval().contains(&rat(want, 1)));
        }
    }

    #[test]
    fn irrational_roots_are_bracketed() {
        // x^3 - 6x^2 + 5x - 1 has three roots in (0, 6)
        let p = poly(&[-1, 5, -6, 1]);
        let roots = isolate_real_roots(&p);
        assert_eq!(roots.len(), 3);
        for r in &roots {
            assert!(!r.is_exact());
            assert_ne!(p.sign_at(&r.lo), p.sign_at(&r.hi));
        }
        assert!(roots.windows(2).all(|w| w[0].hi <= w[1].lo));
    }

    #[test]
    fn complex_pair_is_not_reported() {
        // (x^2 + 1)(x - 1)
        let p = poly(&[-1, 1, -1, 1]);
        assert_eq!(isolate_real_roots(&p).len(), 1);
    }
}
