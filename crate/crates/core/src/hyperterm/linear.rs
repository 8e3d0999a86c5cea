use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use core::fmt;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::exactalg::poly::{fmt_rational, Monomial, MultiPoly, Vars};

/// Affine combination `constant + sum coeff_s * s` of named symbols.
/// No zero coefficients are stored.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearForm {
    constant: BigRational,
    coeffs: BTreeMap<String, BigRational>,
}

impl LinearForm {
    pub fn constant(c: BigRational) -> Self {
        LinearForm {
            constant: c,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn int(c: i64) -> Self {
        Self::constant(BigRational::from_integer(c.into()))
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn var(name: &str) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(name.to_string(), BigRational::one());
        LinearForm {
            constant: BigRational::zero(),
            coeffs,
        }
    }

    pub fn from_parts<I: IntoIterator<Item = (String, BigRational)>>(constant: BigRational, it: I) -> Self {
        let mut f = Self::constant(constant);
        for (s, c) in it {
            f.add_coeff(&s, &c);
        }
        f
    }

    fn add_coeff(&mut self, s: &str, c: &BigRational) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(s.to_string()).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(s);
        }
    }

    pub fn constant_part(&self) -> &BigRational {
        &self.constant
    }

    pub fn coeffs(&self) -> &BTreeMap<String, BigRational> {
        &self.coeffs
    }

    pub fn coeff(&self, s: &str) -> BigRational {
        self.coeffs.get(s).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn involves(&self, s: &str) -> bool {
        self.coeffs.contains_key(s)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The value when constant.
    pub fn as_constant(&self) -> Option<&BigRational> {
        self.is_constant().then_some(&self.constant)
    }

    pub fn add(&self, o: &LinearForm) -> LinearForm {
        let mut r = self.clone();
        r.constant += &o.constant;
        for (s, c) in &o.coeffs {
            r.add_coeff(s, c);
        }
        r
    }

    pub fn sub(&self, o: &LinearForm) -> LinearForm {
        self.add(&o.scale(&-BigRational::one()))
    }

    pub fn add_const(&self, c: &BigRational) -> LinearForm {
        let mut r = self.clone();
        r.constant += c;
        r
    }

    pub fn add_int(&self, c: i64) -> LinearForm {
        self.add_const(&BigRational::from_integer(c.into()))
    }

    pub fn scale(&self, c: &BigRational) -> LinearForm {
        if c.is_zero() {
            return Self::zero();
        }
        LinearForm {
            constant: &self.constant * c,
            coeffs: self.coeffs.iter().map(|(s, x)| (s.clone(), x * c)).collect(),
        }
    }

    /// Substitutes `s -> s + delta`.
    pub fn shift(&self, s: &str, delta: &BigRational) -> LinearForm {
        match self.coeffs.get(s) {
            Some(c) => self.add_const(&(c * delta)),
            None => self.clone(),
        }
    }

    /// Substitutes a value for `s`.
    pub fn subst(&self, s: &str, value: &BigRational) -> LinearForm {
        let Some(c) = self.coeffs.get(s) else {
            return self.clone();
        };
        let mut r = self.clone();
        r.constant += c * value;
        r.coeffs.remove(s);
        r
    }

    /// Substitutes `s -> lf`.
    pub fn subst_form(&self, s: &str, lf: &LinearForm) -> LinearForm {
        let Some(c) = self.coeffs.get(s) else {
            return self.clone();
        };
        let mut r = self.clone();
        r.coeffs.remove(s);
        r.add(&lf.scale(c))
    }

    pub fn eval(&self, point: &BTreeMap<String, BigRational>) -> Result<BigRational, Error> {
        let mut acc = self.constant.clone();
        for (s, c) in &self.coeffs {
            let v = point.get(s).ok_or_else(|| Error::MissingAssignment(s.clone()))?;
            acc += c * v;
        }
        Ok(acc)
    }

    /// Polynomial over `vars`. Panics if a symbol is missing from `vars`.
    pub fn to_poly(&self, vars: &Vars) -> MultiPoly {
        let mut p = MultiPoly::constant(vars, self.constant.clone());
        for (s, c) in &self.coeffs {
            let i = vars.index_of(s).unwrap_or_else(|| panic!("symbol `{s}` not in variable list"));
            let mut e = alloc::vec![0u32; vars.len()];
            e[i] = 1;
            p.add_term(Monomial(e), c.clone());
        }
        p
    }

    /// Inverse of [`LinearForm::to_poly`]; `None` unless total degree <= 1.
    pub fn from_poly(p: &MultiPoly) -> Option<LinearForm> {
        if p.total_degree().unwrap_or(0) > 1 {
            return None;
        }
        let mut f = Self::constant(p.constant_term());
        for (m, c) in p.terms() {
            if let Some(i) = m.0.iter().position(|&e| e == 1) {
                f.add_coeff(p.vars().name(i), c);
            }
        }
        Some(f)
    }

    /// Whether every coefficient and the constant are integers.
    pub fn is_integral(&self) -> bool {
        self.constant.is_integer() && self.coeffs.values().all(|c| c.is_integer())
    }

    /// Splits into `(l0, m)` with `self = l0 + m`, `m` an integer and the
    /// constant of `l0` in `[0, 1)`.
    pub fn split_integer_part(&self) -> (LinearForm, BigRational) {
        let m = BigRational::from_integer(self.constant.floor().to_integer());
        let mut l0 = self.clone();
        l0.constant -= &m;
        (l0, m)
    }

    /// Integer value when constant and integral.
    pub fn as_integer(&self) -> Option<num_bigint::BigInt> {
        let c = self.as_constant()?;
        c.is_integer().then(|| c.to_integer())
    }

    /// Whether the form is a single symbol with coefficient one.
    fn is_bare_symbol(&self) -> bool {
        self.constant.is_zero() && self.coeffs.len() == 1 && self.coeffs.values().all(|c| c.is_one())
    }

    pub(crate) fn render_atomic(&self) -> String {
        if self.is_bare_symbol() || (self.is_constant() && self.constant.is_integer() && !self.constant.is_negative()) {
            self.to_string()
        } else {
            alloc::format!("({self})")
        }
    }
}

impl fmt::Display for LinearForm {
    /// Symbols in name order, then the constant: `a+b-2*n+1/2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (s, c) in &self.coeffs {
            let a = c.abs();
            if c.is_negative() {
                f.write_str("-")?;
            } else if !first {
                f.write_str("+")?;
            }
            if a.is_one() {
                f.write_str(s)?;
            } else {
                write!(f, "{}*{}", fmt_rational(&a), s)?;
            }
            first = false;
        }
        if first {
            return f.write_str(&fmt_rational(&self.constant));
        }
        if !self.constant.is_zero() {
            if self.constant.is_negative() {
                f.write_str("-")?;
            } else {
                f.write_str("+")?;
            }
            f.write_str(&fmt_rational(&self.constant.abs()))?;
        }
        Ok(())
    }
}

/// Greatest integer `<= x`.
pub(crate) fn floor_int(x: &BigRational) -> num_bigint::BigInt {
    x.numer().div_floor(x.denom())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::poly::q_int;

    #[test]
    fn arithmetic_and_display() {
        let n = LinearForm::var("n");
        let k = LinearForm::var("k");
        let f = n.scale(&q_int(2)).sub(&k).add_int(1);
        assert_eq!(f.to_string(), "-k+2*n+1");
        assert_eq!(f.shift("k", &q_int(1)).to_string(), "-k+2*n");
        assert_eq!(f.subst("n", &q_int(3)).to_string(), "-k+7");
        let half = LinearForm::constant(BigRational::new((-1).into(), 2.into()));
        assert_eq!(half.to_string(), "-1/2");
        let (l0, m) = half.add(&n).split_integer_part();
        assert_eq!(m, q_int(-1));
        assert_eq!(l0.to_string(), "n+1/2");
    }

    #[test]
    fn polynomial_round_trip() {
        let v = Vars::new(&["k", "n", "a"]);
        let f = LinearForm::var("a").sub(&LinearForm::var("k")).add_int(3);
        assert_eq!(LinearForm::from_poly(&f.to_poly(&v)).unwrap(), f);
    }
}
