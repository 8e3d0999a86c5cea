use alloc::string::ToString;

use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::term::TermExpression;
use crate::error::Error;
use crate::exactalg::factored::{pow_q, Factored};
use crate::exactalg::ratfun::RationalFunction;

fn int_coeff(c: &BigRational, v: &str, what: impl FnOnce() -> alloc::string::String) -> Result<i64, Error> {
    if !c.is_integer() {
        return Err(Error::NonIntegerShift {
            var: v.to_string(),
            factor: what(),
        });
    }
    c.to_integer().to_i64().ok_or_else(|| Error::Precondition("shift coefficient too large".into()))
}

/// `f(v+1)/f(v)` as a product of monic atoms (mostly linear).
pub fn shift_quotient_factored(f: &TermExpression, v: &str) -> Result<Factored, Error> {
    let vars = f.vars();
    let vi = vars
        .index_of(v)
        .ok_or_else(|| Error::Precondition(alloc::format!("`{v}` is not a variable of the term")))?;
    if f.is_zero() {
        return Err(Error::ZeroRatio);
    }
    let mut q = Factored::one(vars);
    for (arg, e) in f.gamma_factorials() {
        let c = int_coeff(&arg.coeff(v), v, || alloc::format!("{}!", arg.render_atomic()))?;
        // (L+c)!/L! as a product of linear factors.
        if c > 0 {
            for i in 1..=c {
                q.insert(&arg.add_int(i).to_poly(vars), e);
            }
        } else {
            for i in 0..-c {
                q.insert(&arg.add_int(-i).to_poly(vars), -e);
            }
        }
    }
    for p in f.powers() {
        let c = int_coeff(&p.exponent.coeff(v), v, || alloc::format!("power with exponent {}", p.exponent))?;
        let c = i32::try_from(c).map_err(|_| Error::Precondition("exponent shift too large".into()))?;
        q.scale(&pow_q(&p.base, c));
    }
    for (p, e) in f.polys() {
        if p.involves(vi) {
            q.insert(&p.shift_int(vi, 1), *e);
            q.insert(p, -*e);
        }
    }
    Ok(q)
}

/// `f(v+1)/f(v)` as a reduced rational function.
pub fn shift_quotient(f: &TermExpression, v: &str) -> Result<RationalFunction, Error> {
    Ok(shift_quotient_factored(f, v)?.to_ratfun())
}

/// `f(v+s)/f(v)` for an integer `s`.
pub fn shift_ratio_factored(f: &TermExpression, v: &str, s: i64) -> Result<Factored, Error> {
    let q = shift_quotient_factored(f, v)?;
    let vi = f.vars().index_of(v).expect("checked above");
    let mut acc = Factored::one(f.vars());
    if s >= 0 {
        for i in 0..s {
            acc = acc.mul(&q.shift_int(vi, i));
        }
    } else {
        for i in 1..=-s {
            acc = acc.div(&q.shift_int(vi, -i));
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::poly::Vars;
    use crate::hyperterm::parse::{parse_ratfun, parse_term};

    fn check(term: &str, v: &str, expect: &str) {
        let vars = Vars::new(&["k", "n", "a"]);
        let f = parse_term(term, &vars).unwrap();
        let q = shift_quotient(&f, v).unwrap();
        assert_eq!(q, parse_ratfun(expect, &vars).unwrap(), "{term} in {v}");
    }

    #[test]
    fn standard_quotients() {
        check("binomial(n,k)", "k", "(n-k)/(k+1)");
        check("rf(a,k)", "k", "a+k");
        check("binomial(n,k)", "n", "(n+1)/(n+1-k)");
        check("(-1)^k*k!/(2*k+1)", "k", "-(k+1)*(2*k+1)/(2*k+3)");
        check("binomial(2*n,n)", "n", "2*(2*n+1)/(n+1)");
    }

    #[test]
    fn non_integer_shift_rejected() {
        let vars = Vars::new(&["k", "n", "a"]);
        let f = parse_term("rf(n/2,k)", &vars).unwrap();
        assert!(matches!(shift_quotient(&f, "n"), Err(Error::NonIntegerShift { .. })));
    }
}
