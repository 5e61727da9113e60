//! Real roots of univariate rational polynomials: Sturm-sequence isolation,
//! exact bisection, and recognition of rational roots.

use num_traits::{One, Signed, Zero};

use crate::rational::{to_f64, Rational};

/// Coefficients from the constant term upwards, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly(Vec<Rational>);

#[derive(Clone, Debug, PartialEq)]
pub enum RealRoot {
    Exact(Rational),
    /// An irrational (or unrecognised) root, bracketed by `[lo, hi]`.
    Approximate { value: f64, lo: Rational, hi: Rational },
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly(coeffs)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.0.iter().rev().fold(Rational::zero(), |acc, c| acc * t + c)
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer((i as i64).into()))
                .collect(),
        )
    }

    fn lead(&self) -> &Rational {
        self.0.last().expect("nonzero polynomial")
    }

    /// Quotient and remainder; `d` must be nonzero.
    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let mut r = self.0.clone();
        let mut q = vec![Rational::zero(); r.len().saturating_sub(dd)];
        while r.len() > dd && !r.is_empty() {
            let shift = r.len() - 1 - dd;
            let c = r.last().expect("nonempty") / d.lead();
            for (i, dc) in d.0.iter().enumerate() {
                r[shift + i] -= &c * dc;
            }
            q[shift] = c;
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        (UniPoly::new(q), UniPoly::new(r))
    }

    pub fn monic(&self) -> UniPoly {
        let l = self.lead().clone();
        UniPoly(self.0.iter().map(|c| c / &l).collect())
    }

    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// `p / gcd(p, p')`, the product of the distinct irreducible factors.
    pub fn square_free(&self) -> UniPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    fn sturm_sequence(&self) -> Vec<UniPoly> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let r = seq[n - 2].div_rem(&seq[n - 1]).1;
            if r.is_zero() {
                break;
            }
            seq.push(UniPoly(r.0.iter().map(|c| -c).collect()));
        }
        seq
    }

    /// Cauchy bound: every real root lies in `(-B, B)`.
    fn root_bound(&self) -> Rational {
        let l = self.lead().abs();
        let m = self.0[..self.0.len() - 1]
            .iter()
            .map(|c| c.abs() / &l)
            .fold(Rational::zero(), |a, b| if b > a { b } else { a });
        m + Rational::one()
    }

    /// All real roots, in increasing order. Exact rational roots are
    /// recognised when their denominators are moderate.
    pub fn real_roots(&self) -> Vec<RealRoot> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let p = self.square_free();
        let seq = p.sturm_sequence();
        let b = p.root_bound();
        let mut pending = vec![(-b.clone(), b)];
        let mut isolated = Vec::new();
        while let Some((lo, hi)) = pending.pop() {
            let count = sign_changes(&seq, &lo) - sign_changes(&seq, &hi);
            match count {
                0 => {}
                1 => isolated.push((lo, hi)),
                _ => {
                    let mid = (&lo + &hi) / Rational::from_integer(2.into());
                    pending.push((mid.clone(), hi));
                    pending.push((lo, mid));
                }
            }
        }
        isolated.sort_by(|a, b| a.0.cmp(&b.0));
        isolated.into_iter().map(|(lo, hi)| refine(&p, lo, hi)).collect()
    }
}

fn sign(x: &Rational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

fn sign_changes(seq: &[UniPoly], t: &Rational) -> usize {
    let signs: Vec<i8> = seq.iter().map(|p| sign(&p.eval(t))).filter(|&s| s != 0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Narrows `(lo, hi]` holding one root of the square-free `p`.
fn refine(p: &UniPoly, mut lo: Rational, mut hi: Rational) -> RealRoot {
    if p.eval(&hi).is_zero() {
        return RealRoot::Exact(hi);
    }
    let width = Rational::new(1.into(), num_bigint::BigInt::from(1u64) << 64);
    let two = Rational::from_integer(2.into());
    let s_hi = sign(&p.eval(&hi));
    while &hi - &lo > width {
        let q = simplest_between(&lo, &hi);
        if q > lo && p.eval(&q).is_zero() {
            return RealRoot::Exact(q);
        }
        let mid = (&lo + &hi) / &two;
        let s = sign(&p.eval(&mid));
        if s == 0 {
            return RealRoot::Exact(mid);
        }
        if s == s_hi {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let q = simplest_between(&lo, &hi);
    if p.eval(&q).is_zero() {
        return RealRoot::Exact(q);
    }
    RealRoot::Approximate { value: to_f64(&((&lo + &hi) / &two)), lo, hi }
}

/// The rational with the smallest denominator in `[lo, hi]`.
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    debug_assert!(lo <= hi);
    if !lo.is_positive() && !hi.is_negative() {
        return Rational::zero();
    }
    if hi.is_negative() {
        return -simplest_between(&-hi, &-lo);
    }
    let c = lo.ceil();
    if &c <= hi {
        return c;
    }
    let n = lo.floor();
    let inner = simplest_between(&(hi - &n).recip(), &(lo - &n).recip());
    n + inner.recip()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::new(c.iter().map(|&v| int(v)).collect())
    }

    #[test]
    fn simplest() {
        assert_eq!(simplest_between(&frac(1, 3), &frac(1, 2)), frac(1, 2));
        assert_eq!(simplest_between(&frac(3, 10), &frac(2, 5)), frac(1, 3));
        assert_eq!(simplest_between(&frac(-7, 2), &frac(-3, 1)), int(-3));
        assert_eq!(simplest_between(&frac(-1, 2), &frac(1, 2)), int(0));
    }

    #[test]
    fn rational_roots() {
        // (2t - 1)(t + 3) t^2
        let q = p(&[0, 0, -3, 5, 2]);
        let roots = q.real_roots();
        assert_eq!(
            roots,
            vec![RealRoot::Exact(int(-3)), RealRoot::Exact(int(0)), RealRoot::Exact(frac(1, 2))]
        );
    }

    #[test]
    fn irrational_roots() {
        let roots = p(&[-2, 0, 1]).real_roots();
        assert_eq!(roots.len(), 2);
        match &roots[1] {
            RealRoot::Approximate { value, .. } => assert!((value - 2f64.sqrt()).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
        assert!(p(&[1, 0, 1]).real_roots().is_empty());
        assert!(p(&[5]).real_roots().is_empty());
    }

    #[test]
    fn square_free_part() {
        let q = p(&[0, 0, 1]);
        assert_eq!(q.square_free(), p(&[0, 1]));
    }
}
