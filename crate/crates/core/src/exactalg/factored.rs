//! Rational functions kept as `unit * prod atom^e` over a coprime base of
//! monic polynomials. Shift quotients of proper terms are products of
//! many linear atoms, and this form keeps them small.

use alloc::vec::Vec;
use core::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::gcd::poly_gcd;
use super::poly::{MultiPoly, Vars};
use super::ratfun::RationalFunction;

/// Invariants: atoms are monic, non-constant, pairwise distinct and
/// pairwise coprime; exponents are nonzero; the unit is nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factored {
    vars: Vars,
    unit: BigRational,
    atoms: Vec<(MultiPoly, i32)>,
}

fn is_linear(p: &MultiPoly) -> bool {
    p.total_degree() == Some(1)
}

impl Factored {
    pub fn one(vars: &Vars) -> Self {
        Factored {
            vars: vars.clone(),
            unit: BigRational::one(),
            atoms: Vec::new(),
        }
    }

    pub fn constant(vars: &Vars, c: BigRational) -> Self {
        assert!(!c.is_zero(), "zero is not a factored ratio");
        Factored {
            vars: vars.clone(),
            unit: c,
            atoms: Vec::new(),
        }
    }

    pub fn from_poly(p: &MultiPoly, e: i32) -> Self {
        let mut f = Self::one(p.vars());
        f.insert(p, e);
        f
    }

    pub fn from_ratfun(r: &RationalFunction) -> Self {
        let mut f = Self::one(r.vars());
        f.insert(r.numer(), 1);
        f.insert(r.denom(), -1);
        f
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn unit(&self) -> &BigRational {
        &self.unit
    }

    pub fn atoms(&self) -> &[(MultiPoly, i32)] {
        &self.atoms
    }

    pub fn is_one(&self) -> bool {
        self.unit.is_one() && self.atoms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn scale(&mut self, c: &BigRational) {
        assert!(!c.is_zero());
        self.unit *= c;
    }

    /// Multiplies by `p^e`, refining the base as needed. Panics on zero `p`.
    pub fn insert(&mut self, p: &MultiPoly, e: i32) {
        assert!(!p.is_zero(), "zero factor");
        if e == 0 {
            return;
        }
        if let Some(c) = p.constant_value() {
            self.unit *= pow_q(&c, e);
            return;
        }
        let lc = p.leading_coeff();
        self.unit *= pow_q(&lc, e);
        let mut pending = alloc::vec![(p.monic(), e)];
        'outer: while let Some((x, ex)) = pending.pop() {
            if x.is_constant() || ex == 0 {
                continue;
            }
            let lin = is_linear(&x);
            for idx in 0..self.atoms.len() {
                let a = &self.atoms[idx].0;
                if *a == x {
                    self.atoms[idx].1 += ex;
                    if self.atoms[idx].1 == 0 {
                        self.atoms.remove(idx);
                    }
                    continue 'outer;
                }
                if lin && is_linear(a) {
                    continue;
                }
                let g = if lin {
                    if a.div_exact(&x).is_some() {
                        x.clone()
                    } else {
                        continue;
                    }
                } else if is_linear(a) {
                    if x.div_exact(a).is_some() {
                        a.clone()
                    } else {
                        continue;
                    }
                } else {
                    poly_gcd(a, &x)
                };
                if g.is_constant() {
                    continue;
                }
                let (a, ea) = self.atoms.remove(idx);
                let a_rest = a.div_exact(&g).expect("gcd divides");
                let x_rest = x.div_exact(&g).expect("gcd divides");
                pending.push((a_rest, ea));
                pending.push((x_rest, ex));
                pending.push((g.clone(), ea));
                pending.push((g, ex));
                continue 'outer;
            }
            self.atoms.push((x, ex));
        }
    }

    pub fn mul(&self, other: &Factored) -> Factored {
        let (mut big, small) = if self.atoms.len() >= other.atoms.len() {
            (self.clone(), other)
        } else {
            (other.clone(), self)
        };
        big.unit *= &small.unit;
        for (a, e) in &small.atoms {
            big.insert(a, *e);
        }
        big
    }

    pub fn recip(&self) -> Factored {
        Factored {
            vars: self.vars.clone(),
            unit: self.unit.recip(),
            atoms: self.atoms.iter().map(|(a, e)| (a.clone(), -e)).collect(),
        }
    }

    pub fn div(&self, other: &Factored) -> Factored {
        self.mul(&other.recip())
    }

    pub fn pow(&self, e: i32) -> Factored {
        if e == 0 {
            return Self::one(&self.vars);
        }
        Factored {
            vars: self.vars.clone(),
            unit: pow_q(&self.unit, e),
            atoms: self.atoms.iter().map(|(a, x)| (a.clone(), x * e)).collect(),
        }
    }

    /// Substitutes `v -> v + s`. Shifts preserve monicity and coprimality.
    pub fn shift(&self, v: usize, s: &BigRational) -> Factored {
        if s.is_zero() {
            return self.clone();
        }
        Factored {
            vars: self.vars.clone(),
            unit: self.unit.clone(),
            atoms: self.atoms.iter().map(|(a, e)| (a.shift(v, s), *e)).collect(),
        }
    }

    pub fn shift_int(&self, v: usize, s: i64) -> Factored {
        self.shift(v, &BigRational::from_integer(s.into()))
    }

    /// Substitutes a value; `None` when some atom vanishes there.
    pub fn subst_value(&self, v: usize, x: &BigRational) -> Option<Factored> {
        let mut out = Self::constant(&self.vars, self.unit.clone());
        for (a, e) in &self.atoms {
            let b = a.subst_value(v, x);
            if b.is_zero() {
                return None;
            }
            out.insert(&b, *e);
        }
        Some(out)
    }

    /// Value at a full point; `None` when some atom vanishes there.
    pub fn eval(&self, point: &[BigRational]) -> Option<BigRational> {
        let mut acc = self.unit.clone();
        for (a, e) in &self.atoms {
            let v = a.eval(point);
            if v.is_zero() {
                return None;
            }
            acc *= pow_q(&v, *e);
        }
        Some(acc)
    }

    pub fn numer_poly(&self) -> MultiPoly {
        let mut p = MultiPoly::constant(&self.vars, self.unit.clone());
        for (a, e) in &self.atoms {
            if *e > 0 {
                p = &p * &a.pow(*e as u32);
            }
        }
        p
    }

    pub fn denom_poly(&self) -> MultiPoly {
        let mut p = MultiPoly::one(&self.vars);
        for (a, e) in &self.atoms {
            if *e < 0 {
                p = &p * &a.pow((-e) as u32);
            }
        }
        p
    }

    /// Numerator and denominator as factor lists (exponents positive).
    pub fn split(&self) -> (Vec<(MultiPoly, u32)>, Vec<(MultiPoly, u32)>) {
        let num = self
            .atoms
            .iter()
            .filter(|(_, e)| *e > 0)
            .map(|(a, e)| (a.clone(), *e as u32))
            .collect();
        let den = self
            .atoms
            .iter()
            .filter(|(_, e)| *e < 0)
            .map(|(a, e)| (a.clone(), (-e) as u32))
            .collect();
        (num, den)
    }

    pub fn to_ratfun(&self) -> RationalFunction {
        RationalFunction::from_coprime(self.numer_poly(), self.denom_poly())
    }

    /// Exponent of each base element in this ratio. Every atom must be a
    /// product of base elements (as produced by [`coprime_base`]).
    pub fn exponents_in(&self, base: &[MultiPoly]) -> Vec<i32> {
        let mut out = alloc::vec![0i32; base.len()];
        for (a, e) in &self.atoms {
            if let Some(i) = base.iter().position(|b| b == a) {
                out[i] += e;
                continue;
            }
            let mut rest = a.clone();
            for (i, b) in base.iter().enumerate() {
                while let Some(q) = rest.div_exact(b) {
                    out[i] += e;
                    rest = q;
                    if rest.is_constant() {
                        break;
                    }
                }
                if rest.is_constant() {
                    break;
                }
            }
            assert!(rest.is_constant(), "atom not covered by base");
        }
        out
    }
}

/// Coprime monic base that every atom of every ratio factors over.
pub fn coprime_base(vars: &Vars, family: &[&Factored]) -> Vec<MultiPoly> {
    let mut acc = Factored::one(vars);
    for f in family {
        // Positive exponents never cancel, so every element survives.
        for (a, _) in f.atoms() {
            acc.insert(a, 1);
        }
    }
    acc.atoms.into_iter().map(|(a, _)| a).collect()
}

pub fn pow_q(c: &BigRational, e: i32) -> BigRational {
    if e >= 0 {
        num_traits::pow(c.clone(), e as usize)
    } else {
        num_traits::pow(c.recip(), (-e) as usize)
    }
}

impl fmt::Display for Factored {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::poly::fmt_rational(&self.unit))?;
        for (a, e) in &self.atoms {
            write!(f, "*({a})^{e}")?;
        }
        Ok(())
    }
}
