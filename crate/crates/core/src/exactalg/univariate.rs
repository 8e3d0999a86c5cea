//! Dense univariate polynomials over the rationals: interpolation,
//! Sturm-sequence root counting and exact integer-root extraction.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::{q_int, MultiPoly};

/// Coefficients in increasing degree; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly(Vec<BigRational>);

impl UniPoly {
    pub fn new(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UniPoly(c)
    }

    pub fn zero() -> Self {
        UniPoly(Vec::new())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// View of a multivariate polynomial that only involves variable `i`.
    pub fn from_multi(p: &MultiPoly, i: usize) -> Option<Self> {
        let coeffs = p.coeffs_in(i);
        let mut out = Vec::with_capacity(coeffs.len());
        for c in coeffs {
            out.push(c.constant_value()?);
        }
        Some(UniPoly::new(out))
    }

    /// Newton interpolation through `(xs[i], ys[i])`.
    pub fn interpolate(xs: &[BigRational], ys: &[BigRational]) -> Self {
        assert_eq!(xs.len(), ys.len());
        let n = xs.len();
        let mut dd: Vec<BigRational> = ys.to_vec();
        for j in 1..n {
            for i in (j..n).rev() {
                dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - j]);
            }
        }
        // expand Newton form
        let mut poly = vec![BigRational::zero(); n];
        for j in (0..n).rev() {
            // poly = poly * (x - xs[j]) + dd[j]
            let mut next = vec![BigRational::zero(); n];
            for (e, c) in poly.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if e + 1 < n {
                    next[e + 1] += c;
                }
                next[e] -= c * &xs[j];
            }
            next[0] += &dd[j];
            poly = next;
        }
        UniPoly::new(poly)
    }

    fn lc(&self) -> &BigRational {
        self.0.last().expect("nonzero polynomial")
    }

    pub fn derivative(&self) -> Self {
        UniPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(e, c)| c * q_int(e as i64))
                .collect(),
        )
    }

    pub fn rem(&self, d: &UniPoly) -> UniPoly {
        let mut r = self.0.clone();
        let dd = d.degree().expect("nonzero divisor");
        let lc = d.lc().clone();
        while r.len() > dd && !r.is_empty() {
            let shift = r.len() - 1 - dd;
            let f = r.last().unwrap() / &lc;
            for (i, c) in d.0.iter().enumerate() {
                r[i + shift] -= &f * c;
            }
            r.pop();
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        UniPoly::new(r)
    }

    fn sturm_sequence(&self) -> Vec<UniPoly> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let r = seq[n - 2].rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(UniPoly::new(r.0.into_iter().map(|c| -c).collect()));
        }
        seq
    }

    /// Nonnegative integer roots, ascending. Exact: real roots are isolated
    /// with a Sturm sequence and candidate integers tested by evaluation.
    pub fn nonneg_integer_roots(&self) -> Vec<BigInt> {
        self.integer_roots_in(&BigInt::zero())
    }

    /// Integer roots `>= lo`, ascending.
    pub fn integer_roots_in(&self, lo: &BigInt) -> Vec<BigInt> {
        if self.is_zero() || self.degree() == Some(0) {
            return Vec::new();
        }
        let bound = self.root_bound();
        let lo = lo.clone().max(-&bound - BigInt::one());
        let hi = bound + BigInt::one();
        if lo > hi {
            return Vec::new();
        }
        let seq = self.sturm_sequence();
        // Endpoints sit strictly between consecutive integers and avoid
        // real roots, so V(a) - V(b) counts the distinct roots in (a, b).
        let endpoint = |x: &BigInt| -> BigRational {
            let base = BigRational::from_integer(x.clone());
            let mut d = 2i64;
            loop {
                let t = &base + BigRational::new(BigInt::one(), BigInt::from(d));
                if !self.eval(&t).is_zero() {
                    return t;
                }
                d += 1;
            }
        };
        let sign_changes = |x: &BigRational| -> usize {
            let mut prev: Option<bool> = None;
            let mut count = 0;
            for p in &seq {
                let v = p.eval(x);
                if v.is_zero() {
                    continue;
                }
                let s = v.is_positive();
                if let Some(ps) = prev {
                    if ps != s {
                        count += 1;
                    }
                }
                prev = Some(s);
            }
            count
        };
        let mut out = Vec::new();
        // Interval (a + t_a, b + t_b) holds the integers a+1 ..= b.
        let start = &lo - BigInt::one();
        let (sa, sb) = (endpoint(&start), endpoint(&hi));
        let mut stack = vec![(start, hi, sign_changes(&sa), sign_changes(&sb))];
        while let Some((a, b, va, vb)) = stack.pop() {
            if va <= vb {
                continue;
            }
            if &b - &a <= BigInt::from(4) {
                let mut x = &a + BigInt::one();
                while x <= b {
                    if self.eval(&BigRational::from_integer(x.clone())).is_zero() {
                        out.push(x.clone());
                    }
                    x += BigInt::one();
                }
                continue;
            }
            let mid: BigInt = (&a + &b).div_floor(&BigInt::from(2));
            let vm = sign_changes(&endpoint(&mid));
            stack.push((a, mid.clone(), va, vm));
            stack.push((mid, b, vm, vb));
        }
        out.sort();
        out.dedup();
        out
    }

    /// `p(x + c)` by repeated synthetic division.
    pub fn shift(&self, c: &BigRational) -> UniPoly {
        let mut a = self.0.clone();
        let n = a.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let t = &a[j + 1] * c;
                a[j] += t;
            }
        }
        UniPoly::new(a)
    }

    /// Resultant via the Sylvester determinant.
    pub fn resultant(&self, other: &UniPoly) -> BigRational {
        let (Some(m), Some(n)) = (self.degree(), other.degree()) else {
            return BigRational::zero();
        };
        if m == 0 && n == 0 {
            return BigRational::one();
        }
        let size = m + n;
        let mut s = vec![vec![BigRational::zero(); size]; size];
        for i in 0..n {
            for (d, c) in self.0.iter().enumerate() {
                s[i][i + m - d] = c.clone();
            }
        }
        for i in 0..m {
            for (d, c) in other.0.iter().enumerate() {
                s[n + i][i + n - d] = c.clone();
            }
        }
        super::matrix::det_rational(&s)
    }

    /// Cauchy bound on the modulus of every root (as a ceiling integer).
    pub fn root_bound(&self) -> BigInt {
        let lc = self.lc().abs();
        let mut m = BigRational::zero();
        for c in &self.0[..self.0.len() - 1] {
            let r = c.abs() / &lc;
            if r > m {
                m = r;
            }
        }
        (m + BigRational::one()).ceil().to_integer()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::new(c.iter().map(|&x| q_int(x)).collect())
    }

    #[test]
    fn integer_roots_of_products() {
        // (n-3)(n+1) = n^2 - 2n - 3
        assert_eq!(p(&[-3, -2, 1]).nonneg_integer_roots(), vec![BigInt::from(3)]);
        // (n+1)(3n+4): roots -1, -4/3
        assert!(p(&[4, 7, 3]).nonneg_integer_roots().is_empty());
        // n(n-5)^2(2n-1)
        let q = p(&[0, 25, -10, 1]);
        let r = UniPoly::new(
            (0..=4)
                .map(|e| {
                    let mut acc = BigRational::zero();
                    for (i, c) in q.coeffs().iter().enumerate() {
                        if e >= i && e - i <= 1 {
                            let f = if e - i == 1 { q_int(2) } else { q_int(-1) };
                            acc += c * f;
                        }
                    }
                    acc
                })
                .collect(),
        );
        assert_eq!(r.nonneg_integer_roots(), vec![BigInt::from(0), BigInt::from(5)]);
    }

    #[test]
    fn large_root() {
        // (n - 1000003)(n + 7)
        let big = 1_000_003i64;
        let q = p(&[-7 * big, 7 - big, 1]);
        assert_eq!(q.nonneg_integer_roots(), vec![BigInt::from(big)]);
    }

    #[test]
    fn shift_and_resultant() {
        // (x+1)^2 shifted by 2 is (x+3)^2
        assert_eq!(p(&[1, 2, 1]).shift(&q_int(2)), p(&[9, 6, 1]));
        // Res(x - 2, x - 5) = 2 - 5 up to sign convention; zero iff common root
        assert_eq!(p(&[-2, 1]).resultant(&p(&[-5, 1])).abs(), q_int(3));
        assert!(p(&[-2, 1]).resultant(&p(&[4, -4, 1])).is_zero());
        // Res(x^2+1, x^2-1) = 4
        assert_eq!(p(&[1, 0, 1]).resultant(&p(&[-1, 0, 1])), q_int(4));
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let q = p(&[5, -3, 0, 2]);
        let xs: Vec<_> = (0..4).map(q_int).collect();
        let ys: Vec<_> = xs.iter().map(|x| q.eval(x)).collect();
        assert_eq!(UniPoly::interpolate(&xs, &ys), q);
    }
}
