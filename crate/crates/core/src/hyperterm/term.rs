use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::linear::LinearForm;
use crate::error::Error;
use crate::exactalg::factored::pow_q;
use crate::exactalg::poly::{fmt_rational, MultiPoly, Vars};
use crate::exactalg::ratfun::RationalFunction;

/// Constant counts above this are kept symbolic instead of expanded.
const EXPAND_LIMIT: u32 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorial {
    pub arg: LinearForm,
    pub exp: i32,
}

/// `binomial(upper, lower)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Binomial {
    pub upper: LinearForm,
    pub lower: LinearForm,
    pub exp: i32,
}

/// Rising factorial `rf(base, count) = base (base+1) ... (base+count-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rising {
    pub base: LinearForm,
    pub count: LinearForm,
    pub exp: i32,
}

/// `base^exponent` with a nonzero rational base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Power {
    pub base: BigRational,
    pub exponent: LinearForm,
}

/// Product of special factors and a rational function, kept normalized:
/// polynomial factors are monic and distinct, constants live in `unit`,
/// special factors with constant counts are expanded, opposite factors
/// cancel, and every list is sorted. The zero term has `unit == 0` and
/// empty lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermExpression {
    vars: Vars,
    unit: BigRational,
    polys: Vec<(MultiPoly, i32)>,
    factorials: Vec<Factorial>,
    binomials: Vec<Binomial>,
    rising: Vec<Rising>,
    powers: Vec<Power>,
}

fn small_nonneg(lf: &LinearForm) -> Option<u32> {
    let m = lf.as_integer()?;
    let m = m.to_u32()?;
    (m <= EXPAND_LIMIT).then_some(m)
}

fn factorial_int(m: u32) -> BigRational {
    let mut acc = BigInt::one();
    for i in 2..=m {
        acc *= i;
    }
    BigRational::from_integer(acc)
}

impl TermExpression {
    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, BigRational::one())
    }

    pub fn zero(vars: &Vars) -> Self {
        Self::constant(vars, BigRational::zero())
    }

    pub fn constant(vars: &Vars, c: BigRational) -> Self {
        TermExpression {
            vars: vars.clone(),
            unit: c,
            polys: Vec::new(),
            factorials: Vec::new(),
            binomials: Vec::new(),
            rising: Vec::new(),
            powers: Vec::new(),
        }
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        let mut t = Self::one(p.vars());
        t.polys.push((p, 1));
        t.normalized()
    }

    pub fn from_ratfun(r: &RationalFunction) -> Self {
        let mut t = Self::one(r.vars());
        t.polys.push((r.numer().clone(), 1));
        t.polys.push((r.denom().clone(), -1));
        t.normalized()
    }

    pub fn factorial(vars: &Vars, arg: LinearForm, exp: i32) -> Self {
        let mut t = Self::one(vars);
        t.factorials.push(Factorial { arg, exp });
        t.normalized()
    }

    pub fn binomial(vars: &Vars, upper: LinearForm, lower: LinearForm, exp: i32) -> Self {
        let mut t = Self::one(vars);
        t.binomials.push(Binomial { upper, lower, exp });
        t.normalized()
    }

    pub fn rising(vars: &Vars, base: LinearForm, count: LinearForm, exp: i32) -> Self {
        let mut t = Self::one(vars);
        t.rising.push(Rising { base, count, exp });
        t.normalized()
    }

    pub fn power(vars: &Vars, base: BigRational, exponent: LinearForm) -> Self {
        assert!(!base.is_zero(), "zero power base");
        let mut t = Self::one(vars);
        t.powers.push(Power { base, exponent });
        t.normalized()
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn unit(&self) -> &BigRational {
        &self.unit
    }

    pub fn polys(&self) -> &[(MultiPoly, i32)] {
        &self.polys
    }

    pub fn factorials(&self) -> &[Factorial] {
        &self.factorials
    }

    pub fn binomials(&self) -> &[Binomial] {
        &self.binomials
    }

    pub fn rising_factorials(&self) -> &[Rising] {
        &self.rising
    }

    pub fn powers(&self) -> &[Power] {
        &self.powers
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    /// No factorials, binomials, rising factorials or powers.
    pub fn is_rational(&self) -> bool {
        self.factorials.is_empty() && self.binomials.is_empty() && self.rising.is_empty() && self.powers.is_empty()
    }

    /// The rational-function factor `unit * prod poly^e`.
    pub fn rational_factor(&self) -> RationalFunction {
        let mut num = MultiPoly::constant(&self.vars, self.unit.clone());
        let mut den = MultiPoly::one(&self.vars);
        for (p, e) in &self.polys {
            if *e > 0 {
                num = &num * &p.pow(*e as u32);
            } else {
                den = &den * &p.pow((-e) as u32);
            }
        }
        RationalFunction::new(num, den)
    }

    /// All special factors rewritten as factorials:
    /// `binomial(u, l) = u! / (l! (u-l)!)` and `rf(b, c) = (b+c-1)! / (b-1)!`.
    pub fn gamma_factorials(&self) -> Vec<(LinearForm, i32)> {
        let mut out: Vec<(LinearForm, i32)> = self.factorials.iter().map(|f| (f.arg.clone(), f.exp)).collect();
        for b in &self.binomials {
            out.push((b.upper.clone(), b.exp));
            out.push((b.lower.clone(), -b.exp));
            out.push((b.upper.sub(&b.lower), -b.exp));
        }
        for r in &self.rising {
            out.push((r.base.add(&r.count).add_int(-1), r.exp));
            out.push((r.base.add_int(-1), -r.exp));
        }
        out
    }

    /// Every linear argument and exponent, for symbol scans.
    fn linear_forms(&self) -> impl Iterator<Item = &LinearForm> {
        self.factorials
            .iter()
            .map(|f| &f.arg)
            .chain(self.binomials.iter().flat_map(|b| [&b.upper, &b.lower]))
            .chain(self.rising.iter().flat_map(|r| [&r.base, &r.count]))
            .chain(self.powers.iter().map(|p| &p.exponent))
    }

    pub fn uses(&self, name: &str) -> bool {
        if self.linear_forms().any(|l| l.involves(name)) {
            return true;
        }
        match self.vars.index_of(name) {
            Some(i) => self.polys.iter().any(|(p, _)| p.involves(i)),
            None => false,
        }
    }

    pub fn mul(&self, o: &TermExpression) -> TermExpression {
        assert!(self.vars.same(&o.vars), "terms over different variables");
        if self.is_zero() || o.is_zero() {
            return Self::zero(&self.vars);
        }
        let mut t = self.clone();
        t.unit *= &o.unit;
        t.polys.extend(o.polys.iter().cloned());
        t.factorials.extend(o.factorials.iter().cloned());
        t.binomials.extend(o.binomials.iter().cloned());
        t.rising.extend(o.rising.iter().cloned());
        t.powers.extend(o.powers.iter().cloned());
        t.normalized()
    }

    pub fn mul_ratfun(&self, r: &RationalFunction) -> TermExpression {
        self.mul(&Self::from_ratfun(r))
    }

    pub fn scale(&self, c: &BigRational) -> TermExpression {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        let mut t = self.clone();
        t.unit *= c;
        t
    }

    pub fn inv(&self) -> Result<TermExpression, Error> {
        if self.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let mut t = self.clone();
        t.unit = t.unit.recip();
        for p in &mut t.polys {
            p.1 = -p.1;
        }
        for f in &mut t.factorials {
            f.exp = -f.exp;
        }
        for b in &mut t.binomials {
            b.exp = -b.exp;
        }
        for r in &mut t.rising {
            r.exp = -r.exp;
        }
        for p in &mut t.powers {
            p.exponent = p.exponent.scale(&-BigRational::one());
        }
        Ok(t.normalized())
    }

    pub fn div(&self, o: &TermExpression) -> Result<TermExpression, Error> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, m: i32) -> Result<TermExpression, Error> {
        let base = if m < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one(&self.vars);
        for _ in 0..m.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    fn map_forms(&self, f: impl Fn(&LinearForm) -> LinearForm) -> TermExpression {
        let mut t = self.clone();
        for x in &mut t.factorials {
            x.arg = f(&x.arg);
        }
        for b in &mut t.binomials {
            b.upper = f(&b.upper);
            b.lower = f(&b.lower);
        }
        for r in &mut t.rising {
            r.base = f(&r.base);
            r.count = f(&r.count);
        }
        for p in &mut t.powers {
            p.exponent = f(&p.exponent);
        }
        t
    }

    /// Substitutes `name -> name + delta`.
    pub fn shift(&self, name: &str, delta: &BigRational) -> TermExpression {
        let mut t = self.map_forms(|l| l.shift(name, delta));
        if let Some(i) = self.vars.index_of(name) {
            for p in &mut t.polys {
                p.0 = p.0.shift(i, delta);
            }
        }
        t.normalized()
    }

    pub fn shift_int(&self, name: &str, delta: i64) -> TermExpression {
        self.shift(name, &BigRational::from_integer(delta.into()))
    }

    /// Substitutes a value for `name`. Fails when a denominator polynomial
    /// vanishes identically.
    pub fn subst(&self, name: &str, value: &BigRational) -> Result<TermExpression, Error> {
        let mut t = self.map_forms(|l| l.subst(name, value));
        if let Some(i) = self.vars.index_of(name) {
            for p in &mut t.polys {
                p.0 = p.0.subst_value(i, value);
                if p.0.is_zero() && p.1 < 0 {
                    return Err(Error::ZeroDenominator);
                }
            }
        }
        Ok(t.normalized())
    }

    pub fn subst_all(&self, point: &BTreeMap<String, BigRational>) -> Result<TermExpression, Error> {
        let mut t = self.clone();
        for (s, v) in point {
            t = t.subst(s, v)?;
        }
        Ok(t)
    }

    fn normalized(mut self) -> TermExpression {
        if self.unit.is_zero() {
            return Self::zero(&self.vars);
        }
        let vars = self.vars.clone();
        let mut zero = false;
        let mut new_polys: Vec<(MultiPoly, i32)> = Vec::new();

        // Factorials of small nonnegative integers are numbers.
        let mut facts = Vec::new();
        for f in core::mem::take(&mut self.factorials) {
            match small_nonneg(&f.arg) {
                Some(m) => self.unit *= pow_q(&factorial_int(m), f.exp),
                None => facts.push(f),
            }
        }

        // binomial(u, m) = prod_{j<m} (u - j) / m! for a small constant m.
        let mut binoms = Vec::new();
        for b in core::mem::take(&mut self.binomials) {
            if b.lower.as_integer().is_some_and(|m| m.is_negative()) {
                if b.exp > 0 {
                    zero = true;
                    continue;
                }
                binoms.push(b);
                continue;
            }
            match small_nonneg(&b.lower) {
                Some(m) => {
                    let ps: Vec<MultiPoly> = (0..m).map(|j| b.upper.add_int(-(j as i64)).to_poly(&vars)).collect();
                    if ps.iter().any(|p| p.is_zero()) {
                        if b.exp > 0 {
                            zero = true;
                        } else {
                            binoms.push(b);
                        }
                        continue;
                    }
                    self.unit *= pow_q(&factorial_int(m), -b.exp);
                    new_polys.extend(ps.into_iter().map(|p| (p, b.exp)));
                }
                None => binoms.push(b),
            }
        }

        // rf(b, m) = prod_{j<m} (b + j) for a small constant m.
        let mut rises = Vec::new();
        for r in core::mem::take(&mut self.rising) {
            match small_nonneg(&r.count) {
                Some(m) => {
                    let ps: Vec<MultiPoly> = (0..m).map(|j| r.base.add_int(j as i64).to_poly(&vars)).collect();
                    if ps.iter().any(|p| p.is_zero()) {
                        if r.exp > 0 {
                            zero = true;
                        } else {
                            rises.push(r);
                        }
                        continue;
                    }
                    new_polys.extend(ps.into_iter().map(|p| (p, r.exp)));
                }
                None => rises.push(r),
            }
        }
        if zero {
            return Self::zero(&vars);
        }

        // Powers: merge equal bases, fold integer exponents.
        let mut by_base: BTreeMap<BigRational, LinearForm> = BTreeMap::new();
        for p in core::mem::take(&mut self.powers) {
            let e = by_base.entry(p.base).or_insert_with(LinearForm::zero);
            *e = e.add(&p.exponent);
        }
        let mut powers = Vec::new();
        for (base, exponent) in by_base {
            if base.is_one() {
                continue;
            }
            // The integer part of the exponent's constant goes to the unit.
            let (rest, m) = exponent.split_integer_part();
            if let Some(m) = m.to_integer().to_i32() {
                self.unit *= pow_q(&base, m);
                if rest.is_constant() && rest.constant_part().is_zero() {
                    continue;
                }
                powers.push(Power { base, exponent: rest });
            } else {
                powers.push(Power { base, exponent });
            }
        }

        // Polynomials: monic, merged, constants folded.
        let mut polys: Vec<(MultiPoly, i32)> = Vec::new();
        for (p, e) in core::mem::take(&mut self.polys).into_iter().chain(new_polys) {
            if e == 0 {
                continue;
            }
            if p.is_zero() {
                debug_assert!(e > 0, "zero denominator polynomial");
                return Self::zero(&vars);
            }
            if let Some(c) = p.constant_value() {
                self.unit *= pow_q(&c, e);
                continue;
            }
            let lc = p.leading_coeff();
            self.unit *= pow_q(&lc, e);
            let m = p.monic();
            match polys.iter_mut().find(|(q, _)| *q == m) {
                Some(slot) => slot.1 += e,
                None => polys.push((m, e)),
            }
        }
        polys.retain(|(_, e)| *e != 0);
        let mut keyed: Vec<(bool, String, (MultiPoly, i32))> =
            polys.into_iter().map(|pe| (pe.1 < 0, pe.0.to_string(), pe)).collect();
        keyed.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
        self.polys = keyed.into_iter().map(|x| x.2).collect();

        self.factorials = cancel(facts, |f| f.arg.clone(), |f| f.exp, |arg, exp| Factorial { arg, exp });
        self.binomials = cancel(
            binoms,
            |b| (b.upper.clone(), b.lower.clone()),
            |b| b.exp,
            |(upper, lower), exp| Binomial { upper, lower, exp },
        );
        self.rising = cancel(
            rises,
            |r| (r.base.clone(), r.count.clone()),
            |r| r.exp,
            |(base, count), exp| Rising { base, count, exp },
        );
        self.powers = powers;
        self
    }
}

/// Nets out equal factors, then lists numerator copies before denominator
/// copies, each group in key order.
fn cancel<T, K: Ord + Clone>(
    items: Vec<T>,
    key: impl Fn(&T) -> K,
    exp: impl Fn(&T) -> i32,
    make: impl Fn(K, i32) -> T,
) -> Vec<T> {
    let mut net: BTreeMap<K, i32> = BTreeMap::new();
    for it in &items {
        *net.entry(key(it)).or_insert(0) += exp(it);
    }
    let mut out = Vec::new();
    for (k, e) in net.iter().filter(|(_, e)| **e > 0) {
        for _ in 0..*e {
            out.push(make(k.clone(), 1));
        }
    }
    for (k, e) in net.iter().filter(|(_, e)| **e < 0) {
        for _ in 0..-*e {
            out.push(make(k.clone(), -1));
        }
    }
    out
}

fn render_unit(c: &BigRational) -> String {
    if c.is_integer() && !c.is_negative() {
        fmt_rational(c)
    } else {
        alloc::format!("({})", fmt_rational(c))
    }
}

impl fmt::Display for TermExpression {
    /// Renders in the input grammar; parsing the output gives back an
    /// equal term.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut num: Vec<String> = Vec::new();
        let mut den: Vec<String> = Vec::new();
        if !self.unit.is_one() {
            num.push(render_unit(&self.unit));
        }
        for p in &self.powers {
            num.push(alloc::format!("{}^({})", render_unit_always(&p.base), p.exponent));
        }
        let push = |num: &mut Vec<String>, den: &mut Vec<String>, s: String, e: i32| {
            if e > 0 {
                num.push(s);
            } else {
                den.push(s);
            }
        };
        for x in &self.factorials {
            push(&mut num, &mut den, alloc::format!("{}!", x.arg.render_atomic()), x.exp);
        }
        for b in &self.binomials {
            push(&mut num, &mut den, alloc::format!("binomial({},{})", b.upper, b.lower), b.exp);
        }
        for r in &self.rising {
            push(&mut num, &mut den, alloc::format!("rf({},{})", r.base, r.count), r.exp);
        }
        for (p, e) in &self.polys {
            let s = if e.abs() == 1 {
                alloc::format!("({p})")
            } else {
                alloc::format!("({p})^{}", e.abs())
            };
            push(&mut num, &mut den, s, *e);
        }
        if num.is_empty() {
            f.write_str("1")?;
        } else {
            f.write_str(&num.join("*"))?;
        }
        for d in den {
            write!(f, "/{d}")?;
        }
        Ok(())
    }
}

fn render_unit_always(c: &BigRational) -> String {
    alloc::format!("({})", fmt_rational(c))
}
