//! Exact evaluation of terms.
//!
//! * [`eval_term`] is strict: every factorial argument, binomial lower
//!   index and rising-factorial count must be a nonnegative integer.
//! * [`eval_lenient`] reads each factor in Gamma form and returns zero
//!   where the zeros outnumber the poles; it is the summand evaluator.
//! * [`GammaSum`] sums terms whose parameters stay symbolic, keeping
//!   factorials of parameter-dependent arguments as atoms.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::linear::{floor_int, LinearForm};
use super::term::TermExpression;
use crate::error::Error;
use crate::exactalg::factored::pow_q;
use crate::exactalg::poly::{MultiPoly, Vars};
use crate::exactalg::ratfun::RationalFunction;

/// Largest factorial argument or product length evaluated.
const COUNT_LIMIT: u64 = 200_000;

fn count_of(x: &BigRational, what: &dyn Fn() -> String) -> Result<Option<u64>, Error> {
    if !x.is_integer() {
        return Err(Error::NonIntegerArgument(what()));
    }
    if x.is_negative() {
        return Ok(None);
    }
    match x.to_integer().to_u64() {
        Some(m) if m <= COUNT_LIMIT => Ok(Some(m)),
        _ => Err(Error::Precondition(alloc::format!("argument {} too large to expand", what()))),
    }
}

fn factorial_q(m: u64) -> BigRational {
    let mut acc = BigInt::one();
    for i in 2..=m {
        acc *= i;
    }
    BigRational::from_integer(acc)
}

/// `prod_{j<m} (x + step*j)`.
fn product(x: &BigRational, m: u64, step: i64) -> BigRational {
    let mut acc = BigRational::one();
    let mut y = x.clone();
    let s = BigRational::from_integer(step.into());
    for _ in 0..m {
        acc *= &y;
        if acc.is_zero() {
            return acc;
        }
        y += &s;
    }
    acc
}

fn positional(vars: &Vars, polys: &[(MultiPoly, i32)], point: &BTreeMap<String, BigRational>) -> Result<Vec<BigRational>, Error> {
    let mut out = Vec::with_capacity(vars.len());
    for (i, name) in vars.names().iter().enumerate() {
        match point.get(name) {
            Some(v) => out.push(v.clone()),
            None if polys.iter().any(|(p, _)| p.involves(i)) => return Err(Error::MissingAssignment(name.clone())),
            None => out.push(BigRational::zero()),
        }
    }
    Ok(out)
}

/// Strict exact value of `f` at a point assigning every symbol it uses.
pub fn eval_term(f: &TermExpression, point: &BTreeMap<String, BigRational>) -> Result<BigRational, Error> {
    if f.is_zero() {
        return Ok(BigRational::zero());
    }
    let mut acc = f.unit().clone();
    for x in f.factorials() {
        let v = x.arg.eval(point)?;
        let m = count_of(&v, &|| x.arg.to_string())?.ok_or_else(|| Error::NegativeFactorial(v.to_string()))?;
        acc *= pow_q(&factorial_q(m), x.exp);
    }
    for b in f.binomials() {
        let l = b.lower.eval(point)?;
        let m = count_of(&l, &|| b.lower.to_string())?.ok_or_else(|| Error::NegativeLowerIndex(l.to_string()))?;
        let u = b.upper.eval(point)?;
        let v = product(&u, m, -1) / factorial_q(m);
        if v.is_zero() && b.exp < 0 {
            return Err(Error::ZeroDenominator);
        }
        acc *= pow_q_zero(&v, b.exp);
    }
    for r in f.rising_factorials() {
        let c = r.count.eval(point)?;
        let m = count_of(&c, &|| r.count.to_string())?.ok_or_else(|| Error::NegativeLowerIndex(c.to_string()))?;
        let v = product(&r.base.eval(point)?, m, 1);
        if v.is_zero() && r.exp < 0 {
            return Err(Error::ZeroDenominator);
        }
        acc *= pow_q_zero(&v, r.exp);
    }
    for p in f.powers() {
        let e = p.exponent.eval(point)?;
        if !e.is_integer() {
            return Err(Error::NonIntegerArgument(p.exponent.to_string()));
        }
        let e = e.to_integer().to_i32().ok_or_else(|| Error::Precondition("exponent too large".into()))?;
        acc *= pow_q(&p.base, e);
    }
    let pt = positional(f.vars(), f.polys(), point)?;
    for (p, e) in f.polys() {
        let v = p.eval(&pt);
        if v.is_zero() && *e < 0 {
            return Err(Error::ZeroDenominator);
        }
        acc *= pow_q_zero(&v, *e);
    }
    Ok(acc)
}

fn pow_q_zero(v: &BigRational, e: i32) -> BigRational {
    if v.is_zero() {
        BigRational::zero()
    } else {
        pow_q(v, e)
    }
}

/// Value with zero/pole bookkeeping.
struct Orders {
    value: BigRational,
    order: i32,
    singular: bool,
}

impl Orders {
    fn absorb(&mut self, v: BigRational, e: i32) {
        if v.is_zero() {
            self.order += e;
            self.singular = true;
        } else {
            self.value *= pow_q(&v, e);
        }
    }

    fn pole(&mut self, e: i32) {
        self.order -= e;
        self.singular = true;
    }

    fn finish(self) -> Result<BigRational, Error> {
        match self.order {
            o if o > 0 => Ok(BigRational::zero()),
            o if o < 0 => Err(Error::ZeroDenominator),
            _ if self.singular => Err(Error::Precondition("indeterminate product of zeros and poles".into())),
            _ => Ok(self.value),
        }
    }
}

/// Summand value: like [`eval_term`], but a negative binomial lower index
/// or a factorial pole in a denominator yields a zero of the term instead
/// of an error. The result is zero when zeros outnumber poles.
pub fn eval_lenient(f: &TermExpression, point: &BTreeMap<String, BigRational>) -> Result<BigRational, Error> {
    if f.is_zero() {
        return Ok(BigRational::zero());
    }
    let mut acc = Orders {
        value: f.unit().clone(),
        order: 0,
        singular: false,
    };
    for x in f.factorials() {
        let v = x.arg.eval(point)?;
        match count_of(&v, &|| x.arg.to_string())? {
            Some(m) => acc.absorb(factorial_q(m), x.exp),
            None => acc.pole(x.exp),
        }
    }
    for b in f.binomials() {
        let l = b.lower.eval(point)?;
        match count_of(&l, &|| b.lower.to_string())? {
            Some(m) => {
                let u = b.upper.eval(point)?;
                acc.absorb(product(&u, m, -1) / factorial_q(m), b.exp);
            }
            None => acc.absorb(BigRational::zero(), b.exp),
        }
    }
    for r in f.rising_factorials() {
        let c = r.count.eval(point)?;
        let base = r.base.eval(point)?;
        match count_of(&c, &|| r.count.to_string())? {
            Some(m) => acc.absorb(product(&base, m, 1), r.exp),
            None => {
                // rf(b, -m) = 1 / ((b-1)(b-2)...(b-m))
                let m = count_of(&-c, &|| r.count.to_string())?.expect("negative count");
                acc.absorb(product(&(base - BigRational::one()), m, -1), -r.exp);
            }
        }
    }
    for p in f.powers() {
        let e = p.exponent.eval(point)?;
        if !e.is_integer() {
            return Err(Error::NonIntegerArgument(p.exponent.to_string()));
        }
        let e = e.to_integer().to_i32().ok_or_else(|| Error::Precondition("exponent too large".into()))?;
        acc.absorb(pow_q(&p.base, e), 1);
    }
    let pt = positional(f.vars(), f.polys(), point)?;
    for (p, e) in f.polys() {
        acc.absorb(p.eval(&pt), *e);
    }
    acc.finish()
}

/// Integer interval of `k`; `None` ends are unbounded. Empty when
/// `lo > hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Support {
    pub lo: Option<i64>,
    pub hi: Option<i64>,
}

impl Support {
    pub fn empty() -> Self {
        Support { lo: Some(0), hi: Some(-1) }
    }

    pub fn is_empty(&self) -> bool {
        matches!((self.lo, self.hi), (Some(a), Some(b)) if a > b)
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_some() && self.hi.is_some()
    }
}

impl fmt::Display for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.lo {
            Some(a) => write!(f, "[{a}, ")?,
            None => f.write_str("(-inf, ")?,
        }
        match self.hi {
            Some(b) => write!(f, "{b}]"),
            None => f.write_str("+inf)"),
        }
    }
}

fn to_i64(x: BigInt) -> Result<i64, Error> {
    x.to_i64().ok_or_else(|| Error::Precondition("support bound out of range".into()))
}

/// Smallest integer interval of `k` outside which `f` vanishes because of
/// forced zeros (factorial poles in the denominator of the Gamma form
/// outnumbering those in the numerator). `point` assigns every symbol
/// except `k`.
pub fn natural_support(f: &TermExpression, point: &BTreeMap<String, BigRational>, k: &str) -> Result<Support, Error> {
    let mut fixed = point.clone();
    fixed.remove(k);
    let t = f.subst_all(&fixed)?;
    if t.is_zero() {
        return Ok(Support::empty());
    }
    for name in f.vars().names() {
        if name != k && t.uses(name) {
            return Err(Error::MissingAssignment(name.clone()));
        }
    }
    // Each factorial argument x = a k + b is a pole when it is a negative
    // integer; only integral a, b give forced zeros on integer k.
    let mut lines: Vec<(BigInt, BigInt, i32)> = Vec::new();
    let mut base = 0i32;
    for (arg, e) in t.gamma_factorials() {
        let a = arg.coeff(k);
        let b = arg.constant_part().clone();
        if !a.is_integer() || !b.is_integer() {
            continue;
        }
        if a.is_zero() {
            if b.is_negative() {
                base -= e;
            }
            continue;
        }
        lines.push((a.to_integer(), b.to_integer(), e));
    }
    let count = |kk: &BigInt| -> i32 {
        let mut c = base;
        for (a, b, e) in &lines {
            if (a * kk + b).is_negative() {
                c -= e;
            }
        }
        c
    };
    let mut cands: Vec<BigInt> = Vec::new();
    for (a, b, _) in &lines {
        // Boundary of {a k + b < 0}.
        let t = if a.is_positive() {
            let r = BigRational::new(-b.clone(), a.clone());
            -floor_int(&-r) - BigInt::one()
        } else {
            let r = BigRational::new(-b.clone(), a.clone());
            floor_int(&r) + BigInt::one()
        };
        for d in -1..=1 {
            cands.push(&t + BigInt::from(d));
        }
    }
    cands.sort();
    cands.dedup();
    let Some(first) = cands.first().cloned() else {
        return Ok(if base > 0 {
            Support::empty()
        } else {
            Support { lo: None, hi: None }
        });
    };
    let last = cands.last().cloned().expect("nonempty");
    let below = count(&(first - BigInt::one())) <= 0;
    let above = count(&(last + BigInt::one())) <= 0;
    let alive: Vec<&BigInt> = cands.iter().filter(|c| count(c) <= 0).collect();
    let lo = if below {
        None
    } else {
        match alive.first() {
            Some(x) => Some(to_i64((*x).clone())?),
            None if !above => return Ok(Support::empty()),
            None => None,
        }
    };
    let hi = if above {
        None
    } else {
        match alive.last() {
            Some(x) => Some(to_i64((*x).clone())?),
            None => return Ok(Support::empty()),
        }
    };
    if lo.is_none() && hi.is_none() && !below && !above {
        return Ok(Support::empty());
    }
    Ok(Support { lo, hi })
}

/// Signature of a Gamma monomial: canonical factorial atoms `L0!` (the
/// constant of `L0` lies in `[0, 1)`) with their exponents.
pub type Signature = Vec<(LinearForm, i32)>;

/// Rewrites a term whose remaining symbols are parameters as
/// `coefficient * prod atom!^e`. `None` when the term is forced to zero.
pub fn gamma_normal_form(f: &TermExpression) -> Result<Option<(Signature, RationalFunction)>, Error> {
    if f.is_zero() {
        return Ok(None);
    }
    let vars = f.vars();
    let mut coeff = f.rational_factor();
    let mut sig: BTreeMap<LinearForm, i32> = BTreeMap::new();
    let mut order = 0i32;
    let mut singular = false;
    if let Some(p) = f.powers().first() {
        return Err(Error::NonIntegerArgument(alloc::format!("power exponent {}", p.exponent)));
    }
    for (arg, e) in f.gamma_factorials() {
        if let Some(c) = arg.as_constant() {
            if c.is_integer() {
                if c.is_negative() {
                    order -= e;
                    singular = true;
                } else {
                    let m = count_of(c, &|| arg.to_string())?.expect("nonnegative");
                    coeff = coeff.scale(&pow_q(&factorial_q(m), e));
                }
                continue;
            }
        }
        let (l0, m) = arg.split_integer_part();
        let m = m.to_integer().to_i64().ok_or_else(|| Error::Precondition("shift too large".into()))?;
        // (l0 + m)! / l0! as a polynomial ratio.
        let mut num = MultiPoly::one(vars);
        let mut den = MultiPoly::one(vars);
        if m >= 0 {
            for i in 1..=m {
                num = &num * &l0.add_int(i).to_poly(vars);
            }
        } else {
            for i in 0..-m {
                den = &den * &l0.add_int(-i).to_poly(vars);
            }
        }
        let r = RationalFunction::new(num, den).pow(e);
        coeff = &coeff * &r;
        *sig.entry(l0).or_insert(0) += e;
    }
    if order > 0 {
        return Ok(None);
    }
    if order < 0 {
        return Err(Error::ZeroDenominator);
    }
    if singular {
        return Err(Error::Precondition("indeterminate product of zeros and poles".into()));
    }
    let sig: Signature = sig.into_iter().filter(|(_, e)| *e != 0).collect();
    Ok(Some((sig, coeff)))
}

/// Exact sum of terms in the parameter field, grouped by Gamma signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaSum {
    vars: Vars,
    parts: BTreeMap<Signature, RationalFunction>,
}

impl GammaSum {
    pub fn new(vars: &Vars) -> Self {
        GammaSum {
            vars: vars.clone(),
            parts: BTreeMap::new(),
        }
    }

    /// Adds a term with every non-parameter symbol already substituted.
    pub fn add_term(&mut self, f: &TermExpression) -> Result<(), Error> {
        if let Some((sig, c)) = gamma_normal_form(f)? {
            self.add_part(sig, c);
        }
        Ok(())
    }

    pub fn add_part(&mut self, sig: Signature, c: RationalFunction) {
        if c.is_zero() {
            return;
        }
        let slot = self.parts.entry(sig.clone()).or_insert_with(|| RationalFunction::zero(&self.vars));
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.parts.remove(&sig);
        }
    }

    pub fn add_sum(&mut self, o: &GammaSum) {
        for (s, c) in &o.parts {
            self.add_part(s.clone(), c.clone());
        }
    }

    pub fn negate(&self) -> GammaSum {
        GammaSum {
            vars: self.vars.clone(),
            parts: self.parts.iter().map(|(s, c)| (s.clone(), -c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    /// The value when no factorial atoms remain.
    pub fn as_ratfun(&self) -> Option<RationalFunction> {
        match self.parts.len() {
            0 => Some(RationalFunction::zero(&self.vars)),
            1 => self.parts.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn parts(&self) -> &BTreeMap<Signature, RationalFunction> {
        &self.parts
    }
}

impl fmt::Display for GammaSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("0");
        }
        for (i, (sig, c)) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})")?;
            for (l, e) in sig {
                write!(f, "*{}!^{}", l.render_atomic(), e)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::poly::q_int;
    use crate::hyperterm::parse::parse_term;

    fn vars() -> Vars {
        Vars::new(&["k", "n", "a", "b"])
    }

    fn pt(pairs: &[(&str, BigRational)]) -> BTreeMap<String, BigRational> {
        pairs.iter().map(|(s, v)| (s.to_string(), v.clone())).collect()
    }

    #[test]
    fn strict_values() {
        let v = vars();
        let b = parse_term("binomial(n,k)", &v).unwrap();
        assert_eq!(eval_term(&b, &pt(&[("n", q_int(5)), ("k", q_int(2))])).unwrap(), q_int(10));
        let r = parse_term("rf(a,k)", &v).unwrap();
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(
            eval_term(&r, &pt(&[("a", half), ("k", q_int(3))])).unwrap(),
            BigRational::new(15.into(), 8.into())
        );
        let f = parse_term("n!", &v).unwrap();
        assert!(matches!(eval_term(&f, &pt(&[("n", q_int(-1))])), Err(Error::NegativeFactorial(_))));
    }

    #[test]
    fn lenient_zeros() {
        let v = vars();
        let b = parse_term("binomial(n,k)", &v).unwrap();
        assert!(eval_lenient(&b, &pt(&[("n", q_int(3)), ("k", q_int(-1))])).unwrap().is_zero());
        assert!(eval_lenient(&b, &pt(&[("n", q_int(3)), ("k", q_int(4))])).unwrap().is_zero());
        let f = parse_term("1/k!", &v).unwrap();
        assert!(eval_lenient(&f, &pt(&[("k", q_int(-2))])).unwrap().is_zero());
    }

    #[test]
    fn supports() {
        let v = vars();
        let b = parse_term("binomial(n,k)", &v).unwrap();
        assert_eq!(
            natural_support(&b, &pt(&[("n", q_int(5))]), "k").unwrap(),
            Support { lo: Some(0), hi: Some(5) }
        );
        let d = parse_term("(-1)^k*binomial(a+b,a+k)*binomial(a+n,n+k)*binomial(b+n,b+k)", &v).unwrap();
        let p = pt(&[("a", q_int(1)), ("b", q_int(1)), ("n", q_int(1))]);
        assert_eq!(natural_support(&d, &p, "k").unwrap(), Support { lo: Some(-1), hi: Some(1) });
        let f = parse_term("1/k!", &v).unwrap();
        assert_eq!(natural_support(&f, &BTreeMap::new(), "k").unwrap(), Support { lo: Some(0), hi: None });
        let z = parse_term("0*k!", &v).unwrap();
        assert!(natural_support(&z, &BTreeMap::new(), "k").unwrap().is_empty());
    }

    #[test]
    fn gamma_sum_cancels_atoms() {
        let v = vars();
        // (a+1)! - (a+1) a! = 0 symbolically in a
        let mut s = GammaSum::new(&v);
        s.add_term(&parse_term("(a+1)!", &v).unwrap()).unwrap();
        s.add_term(&parse_term("-(a+1)*a!", &v).unwrap()).unwrap();
        assert!(s.is_zero());
        let mut t = GammaSum::new(&v);
        t.add_term(&parse_term("binomial(a+b,a)*a!*b!/(a+b)!", &v).unwrap()).unwrap();
        assert_eq!(t.as_ratfun().unwrap(), RationalFunction::one(&v));
    }
}
