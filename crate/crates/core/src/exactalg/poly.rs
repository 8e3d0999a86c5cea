//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Terms are kept in a `BTreeMap` keyed by [`Monomial`], whose ordering is
//! graded lexicographic over the owning variable list (earlier variables
//! dominate). The largest key is the leading term.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Ordered list of variable names shared by a family of polynomials.
#[derive(Clone, Debug)]
pub struct Vars(Arc<Vec<String>>);

impl Vars {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Self {
        Vars(Arc::new(names.iter().map(|s| s.as_ref().to_string()).collect()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|v| v == name)
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0[i]
    }

    pub fn same(&self, other: &Vars) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl PartialEq for Vars {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}

impl Eq for Vars {}

/// Exponent vector; ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self.divides(other)`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    vars: Vars,
    terms: BTreeMap<Monomial, BigRational>,
}

pub fn q_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl MultiPoly {
    pub fn zero(vars: &Vars) -> Self {
        MultiPoly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, BigRational::one())
    }

    pub fn constant(vars: &Vars, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(vars.len()), c);
        }
        MultiPoly {
            vars: vars.clone(),
            terms,
        }
    }

    pub fn from_int(vars: &Vars, c: i64) -> Self {
        Self::constant(vars, q_int(c))
    }

    /// The variable with index `i`, as a polynomial.
    pub fn var(vars: &Vars, i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Self::monomial(vars, Monomial(e), BigRational::one())
    }

    pub fn var_named(vars: &Vars, name: &str) -> Option<Self> {
        vars.index_of(name).map(|i| Self::var(vars, i))
    }

    pub fn monomial(vars: &Vars, m: Monomial, c: BigRational) -> Self {
        debug_assert_eq!(m.0.len(), vars.len());
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigRational)>>(vars: &Vars, it: I) -> Self {
        let mut p = Self::zero(vars);
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_value().is_some_and(|c| c.is_one())
    }

    /// Value of a constant polynomial (`None` if it involves variables).
    pub fn constant_value(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn constant_term(&self) -> BigRational {
        self.terms
            .get(&Monomial::one(self.vars.len()))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn coeff(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> BigRational {
        self.leading_term()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigRational::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    /// Degree in variable `i`; `None` for the zero polynomial.
    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[i]).max()
    }

    pub fn involves(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.0[i] > 0)
    }

    /// Leading term with respect to variable `i`: the part of the
    /// polynomial of maximal degree in `i`, reduced to its grlex-leading
    /// monomial.
    pub fn leading_term_in(&self, i: usize) -> MultiPoly {
        let Some(d) = self.degree_in(i) else {
            return self.clone();
        };
        let top = self
            .terms
            .iter().rfind(|(m, _)| m.0[i] == d)
            .map(|(m, c)| (m.clone(), c.clone()));
        match top {
            Some((m, c)) => MultiPoly::monomial(&self.vars, m, c),
            None => MultiPoly::zero(&self.vars),
        }
    }

    pub fn scale(&self, c: &BigRational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.vars);
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &BigRational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.vars);
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(&self.vars);
        let mut base = self.clone();
        let mut e = e;
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

    /// Evaluates at a full assignment (indexed by variable position).
    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        debug_assert_eq!(point.len(), self.vars.len());
        let mut powers: Vec<Vec<BigRational>> = Vec::with_capacity(point.len());
        for (i, x) in point.iter().enumerate() {
            let d = self.degree_in(i).unwrap_or(0) as usize;
            let mut row = Vec::with_capacity(d + 1);
            row.push(BigRational::one());
            for e in 1..=d {
                let next = &row[e - 1] * x;
                row.push(next);
            }
            powers.push(row);
        }
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= &powers[i][e as usize];
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitutes a constant for variable `i` (the variable stays in the
    /// list with exponent zero everywhere).
    pub fn subst_value(&self, i: usize, x: &BigRational) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.vars);
        let d = self.degree_in(i).unwrap_or(0) as usize;
        let mut pw = Vec::with_capacity(d + 1);
        pw.push(BigRational::one());
        for e in 1..=d {
            let next = &pw[e - 1] * x;
            pw.push(next);
        }
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            let e = m2.0[i] as usize;
            m2.0[i] = 0;
            out.add_term(m2, c * &pw[e]);
        }
        out
    }

    /// Substitutes values for several variables at once.
    pub fn subst_values(&self, assignments: &[(usize, BigRational)]) -> MultiPoly {
        let mut p = self.clone();
        for (i, x) in assignments {
            p = p.subst_value(*i, x);
        }
        p
    }

    /// Substitutes the polynomial `s` for variable `i`.
    pub fn subst_poly(&self, i: usize, s: &MultiPoly) -> MultiPoly {
        let coeffs = self.coeffs_in(i);
        // Horner in s
        let mut acc = MultiPoly::zero(&self.vars);
        for c in coeffs.iter().rev() {
            acc = &(&acc * s) + c;
        }
        acc
    }

    /// `p(x_i + s)` for a rational shift `s`.
    pub fn shift(&self, i: usize, s: &BigRational) -> MultiPoly {
        if s.is_zero() || !self.involves(i) {
            return self.clone();
        }
        let lin = &MultiPoly::var(&self.vars, i) + &MultiPoly::constant(&self.vars, s.clone());
        self.subst_poly(i, &lin)
    }

    pub fn shift_int(&self, i: usize, s: i64) -> MultiPoly {
        self.shift(i, &q_int(s))
    }

    /// Coefficients with respect to variable `i`: `p = sum_e c_e * x_i^e`,
    /// each `c_e` free of `x_i`. Trailing entry is nonzero (empty for zero).
    pub fn coeffs_in(&self, i: usize) -> Vec<MultiPoly> {
        let d = match self.degree_in(i) {
            Some(d) => d as usize,
            None => return Vec::new(),
        };
        let mut out = vec![MultiPoly::zero(&self.vars); d + 1];
        for (m, c) in &self.terms {
            let e = m.0[i] as usize;
            let mut m2 = m.clone();
            m2.0[i] = 0;
            out[e].terms.insert(m2, c.clone());
        }
        out
    }

    pub fn from_coeffs_in(vars: &Vars, i: usize, coeffs: &[MultiPoly]) -> MultiPoly {
        let mut out = MultiPoly::zero(vars);
        for (e, c) in coeffs.iter().enumerate() {
            for (m, v) in &c.terms {
                let mut m2 = m.clone();
                m2.0[i] += e as u32;
                out.add_term(m2, v.clone());
            }
        }
        out
    }

    /// Exact division; `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &MultiPoly) -> Option<MultiPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let (lm, lc) = d.leading_term().map(|(m, c)| (m.clone(), c.clone()))?;
        let lc_inv = lc.recip();
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero(&self.vars);
        while let Some((m, c)) = rem.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
            if !lm.divides(&m) {
                return None;
            }
            let qm = lm.quotient_of(&m);
            let qc = &c * &lc_inv;
            for (dm, dc) in &d.terms {
                rem.add_term(dm.mul(&qm), -(dc * &qc));
            }
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Splits off the rational content: returns `(c, p)` with `self = c * p`,
    /// `p` having coprime integer coefficients and positive leading coefficient.
    pub fn primitive_integer(&self) -> (BigRational, MultiPoly) {
        if self.is_zero() {
            return (BigRational::one(), self.clone());
        }
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut num_gcd = BigInt::zero();
        for c in self.terms.values() {
            let v = c.numer() * (&den_lcm / c.denom());
            num_gcd = num_gcd.gcd(&v);
        }
        let mut content = BigRational::new(num_gcd, den_lcm);
        if self.leading_coeff().is_negative() {
            content = -content;
        }
        let inv = content.recip();
        (content, self.scale(&inv))
    }

    /// Integer coefficients of a primitive polynomial, with the scale used.
    pub fn integer_terms(&self) -> (BigRational, Vec<(Monomial, BigInt)>) {
        let (c, p) = self.primitive_integer();
        let terms = p
            .terms
            .iter()
            .map(|(m, v)| (m.clone(), v.numer().clone()))
            .collect();
        (c, terms)
    }

    /// Scales to leading coefficient one.
    pub fn monic(&self) -> MultiPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading_coeff().recip())
    }

    /// Re-expresses the polynomial over another variable list. Every
    /// variable actually used must exist in `target`.
    pub fn remap(&self, target: &Vars) -> Option<MultiPoly> {
        if self.vars.same(target) {
            return Some(self.clone());
        }
        let mut idx = Vec::with_capacity(self.vars.len());
        for (i, name) in self.vars.names().iter().enumerate() {
            let used = self.involves(i);
            match target.index_of(name) {
                Some(j) => idx.push(Some(j)),
                None if !used => idx.push(None),
                None => return None,
            }
        }
        let mut out = MultiPoly::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; target.len()];
            for (i, &x) in m.0.iter().enumerate() {
                if let Some(j) = idx[i] {
                    e[j] += x;
                }
            }
            out.add_term(Monomial(e), c.clone());
        }
        Some(out)
    }

    /// Indices of variables that occur.
    pub fn used_vars(&self) -> Vec<usize> {
        (0..self.vars.len()).filter(|&i| self.involves(i)).collect()
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &'a MultiPoly) -> MultiPoly {
        debug_assert!(self.vars.same(&rhs.vars));
        let (big, small) = if self.terms.len() >= rhs.terms.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &'a MultiPoly) -> MultiPoly {
        debug_assert!(self.vars.same(&rhs.vars));
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &'a MultiPoly) -> MultiPoly {
        debug_assert!(self.vars.same(&rhs.vars));
        let mut out = MultiPoly::zero(&self.vars);
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: MultiPoly) -> MultiPoly {
        &self + &rhs
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        &self - &rhs
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

pub(crate) fn fmt_rational(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        alloc::format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for MultiPoly {
    /// Terms in decreasing grlex order, e.g. `2*k^2*n - 1/3*a + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if idx == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else if neg {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !a.is_one() || m.is_one() {
                factors.push(fmt_rational(&a));
            }
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.vars.name(i).to_string()),
                    _ => factors.push(alloc::format!("{}^{}", self.vars.name(i), e)),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}
