use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::gcd::poly_gcd;
use super::poly::{MultiPoly, Vars};

/// Quotient of polynomials, kept reduced with a monic denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    num: MultiPoly,
    den: MultiPoly,
}

impl RationalFunction {
    /// Builds `num / den` in lowest terms. Panics if `den` is zero.
    pub fn new(num: MultiPoly, den: MultiPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero(num.vars());
        }
        let g = poly_gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides"),
                den.div_exact(&g).expect("gcd divides"),
            )
        };
        Self::normalized(num, den)
    }

    /// Builds from parts already known to be coprime.
    pub fn from_coprime(num: MultiPoly, den: MultiPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero(num.vars());
        }
        Self::normalized(num, den)
    }

    fn normalized(num: MultiPoly, den: MultiPoly) -> Self {
        let lc = den.leading_coeff();
        if lc.is_one() {
            RationalFunction { num, den }
        } else {
            let inv = lc.recip();
            RationalFunction {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        let one = MultiPoly::one(p.vars());
        RationalFunction { num: p, den: one }
    }

    pub fn zero(vars: &Vars) -> Self {
        Self::from_poly(MultiPoly::zero(vars))
    }

    pub fn one(vars: &Vars) -> Self {
        Self::from_poly(MultiPoly::one(vars))
    }

    pub fn constant(vars: &Vars, c: BigRational) -> Self {
        Self::from_poly(MultiPoly::constant(vars, c))
    }

    pub fn numer(&self) -> &MultiPoly {
        &self.num
    }

    pub fn denom(&self) -> &MultiPoly {
        &self.den
    }

    pub fn into_parts(self) -> (MultiPoly, MultiPoly) {
        (self.num, self.den)
    }

    pub fn vars(&self) -> &Vars {
        self.num.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        let n = self.num.constant_value()?;
        let d = self.den.constant_value()?;
        Some(n / d)
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        Self::normalized(self.den.clone(), self.num.clone())
    }

    /// Evaluates at a full point; `None` when the denominator vanishes.
    pub fn eval(&self, point: &[BigRational]) -> Option<BigRational> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(point) / d)
    }

    pub fn subst_value(&self, i: usize, x: &BigRational) -> Option<Self> {
        let d = self.den.subst_value(i, x);
        if d.is_zero() {
            return None;
        }
        Some(Self::new(self.num.subst_value(i, x), d))
    }

    pub fn shift(&self, i: usize, s: &BigRational) -> Self {
        // Shifting preserves coprimality and the leading coefficient.
        RationalFunction {
            num: self.num.shift(i, s),
            den: self.den.shift(i, s),
        }
    }

    pub fn shift_int(&self, i: usize, s: i64) -> Self {
        self.shift(i, &super::poly::q_int(s))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.vars());
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, e: i32) -> Self {
        if e >= 0 {
            RationalFunction {
                num: self.num.pow(e as u32),
                den: self.den.pow(e as u32),
            }
        } else {
            self.recip().pow(-e)
        }
    }

    pub fn remap(&self, target: &Vars) -> Option<Self> {
        Some(RationalFunction {
            num: self.num.remap(target)?,
            den: self.den.remap(target)?,
        })
    }
}

impl<'a> Add<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &'a RationalFunction) -> RationalFunction {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RationalFunction::new(&self.num + &rhs.num, self.den.clone());
        }
        let g = poly_gcd(&self.den, &rhs.den);
        let a = self.den.div_exact(&g).expect("gcd divides");
        let b = rhs.den.div_exact(&g).expect("gcd divides");
        let num = &(&self.num * &b) + &(&rhs.num * &a);
        let den = &self.den * &b;
        RationalFunction::new(num, den)
    }
}

impl<'a> Sub<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &'a RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &'a RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero(self.vars());
        }
        let g1 = poly_gcd(&self.num, &rhs.den);
        let g2 = poly_gcd(&rhs.num, &self.den);
        let n1 = self.num.div_exact(&g1).expect("gcd divides");
        let d2 = rhs.den.div_exact(&g1).expect("gcd divides");
        let n2 = rhs.num.div_exact(&g2).expect("gcd divides");
        let d1 = self.den.div_exact(&g2).expect("gcd divides");
        RationalFunction::from_coprime(&n1 * &n2, &d1 * &d2)
    }
}

impl<'a> Div<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn div(self, rhs: &'a RationalFunction) -> RationalFunction {
        self * &rhs.recip()
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let wrap_num = self.num.num_terms() > 1;
        let wrap_den = self.den.num_terms() > 1 || !self.den.leading_coeff().is_one();
        match (wrap_num, wrap_den) {
            (true, true) => write!(f, "({})/({})", self.num, self.den),
            (true, false) => write!(f, "({})/{}", self.num, self.den),
            (false, true) => write!(f, "{}/({})", self.num, self.den),
            (false, false) => write!(f, "{}/{}", self.num, self.den),
        }
    }
}
