//! Gosper's algorithm: decides whether a hypergeometric term has a
//! hypergeometric antidifference and returns its rational certificate.
//!
//! Conventions: the shift ratio is written `p(k+1)/p(k) * q(k)/r(k)` with
//! `gcd(q(k), r(k+j)) = 1` for every `j >= 0`. The antidifference is then
//! `G = r(k-1) x(k) / p(k) * t` where the polynomial `x` solves
//! `q(k) x(k+1) - r(k-1) x(k) = p(k)`.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::exactalg::factored::Factored;
use crate::exactalg::gcd::poly_gcd;
use crate::exactalg::matrix::PolyMatrix;
use crate::exactalg::nullspace::solve_particular;
use crate::exactalg::poly::{MultiPoly, Vars};
use crate::exactalg::ratfun::RationalFunction;
use crate::exactalg::univariate::UniPoly;
use crate::hyperterm::quotient::shift_quotient_factored;
use crate::hyperterm::term::TermExpression;

/// Largest polynomial-solution degree attempted.
pub const MAX_ANSATZ_DEGREE: usize = 400;

/// `ratio = p(k+1)/p(k) * q(k)/r(k)` with `gcd(q(k), r(k+j)) = 1`, `j >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GosperForm {
    pub p: MultiPoly,
    pub q: MultiPoly,
    pub r: MultiPoly,
}

/// Rational certificate `R` with `G = R * f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub ratio: RationalFunction,
}

/// Nonnegative integers `j` for which `a(k)` and `b(k+j)` may share a
/// factor. Every true shift is included; callers confirm each by a gcd.
fn shift_candidates(a: &MultiPoly, b: &MultiPoly, k: usize) -> Vec<i64> {
    if a.total_degree() == Some(1) && b.total_degree() == Some(1) {
        // Monic linear atoms involving k are k + alpha and k + beta.
        return match (a - b).constant_value() {
            Some(j) if j.is_integer() && !j.is_negative() => j.to_integer().to_i64().into_iter().collect(),
            _ => Vec::new(),
        };
    }
    let vars = a.vars();
    let da = a.degree_in(k).unwrap_or(0) as usize;
    let db = b.degree_in(k).unwrap_or(0) as usize;
    let lca = lead_coeff_in(a, k);
    let lcb = lead_coeff_in(b, k);
    let mut rng = ChaCha8Rng::seed_from_u64(0x0073_6869_6674);
    let point = loop {
        let pt: Vec<BigRational> = (0..vars.len())
            .map(|i| {
                if i == k {
                    BigRational::zero()
                } else {
                    BigRational::from_integer(BigInt::from(rng.gen_range(-1000i64..=1000)))
                }
            })
            .collect();
        if !lca.eval(&pt).is_zero() && !lcb.eval(&pt).is_zero() {
            break pt;
        }
    };
    let spec = |p: &MultiPoly| -> UniPoly {
        let mut p = p.clone();
        for (i, v) in point.iter().enumerate() {
            if i != k {
                p = p.subst_value(i, v);
            }
        }
        UniPoly::from_multi(&p, k).expect("only k remains")
    };
    let ua = spec(a);
    let ub = spec(b);
    let deg = da * db;
    let xs: Vec<BigRational> = (0..=deg as i64).map(|j| BigRational::from_integer(j.into())).collect();
    let ys: Vec<BigRational> = xs.iter().map(|j| ua.resultant(&ub.shift(j))).collect();
    let res = UniPoly::interpolate(&xs, &ys);
    res.nonneg_integer_roots()
        .into_iter()
        .filter_map(|j| j.to_i64())
        .collect()
}

fn lead_coeff_in(p: &MultiPoly, k: usize) -> MultiPoly {
    p.coeffs_in(k).pop().unwrap_or_else(|| MultiPoly::zero(p.vars()))
}

/// Gosper form of a factored ratio in variable `k`.
pub fn pqr_factored(ratio: &Factored, k: usize) -> GosperForm {
    let vars = ratio.vars().clone();
    let mut q_const = MultiPoly::constant(&vars, ratio.unit().clone());
    let mut r_const = MultiPoly::one(&vars);
    let mut num: Vec<(MultiPoly, u32)> = Vec::new();
    let mut den: Vec<(MultiPoly, u32)> = Vec::new();
    for (a, e) in ratio.atoms() {
        let ae = e.unsigned_abs();
        match (a.involves(k), *e > 0) {
            (true, true) => num.push((a.clone(), ae)),
            (true, false) => den.push((a.clone(), ae)),
            (false, true) => q_const = &q_const * &a.pow(ae),
            (false, false) => r_const = &r_const * &a.pow(ae),
        }
    }
    let mut p_atoms: Vec<(MultiPoly, u32)> = Vec::new();
    loop {
        let mut hit = None;
        'search: for (ia, (a, _)) in num.iter().enumerate() {
            for (ib, (b, _)) in den.iter().enumerate() {
                for j in shift_candidates(a, b, k) {
                    let g = poly_gcd(a, &b.shift_int(k, j));
                    if g.involves(k) {
                        hit = Some((ia, ib, j, g));
                        break 'search;
                    }
                }
            }
        }
        let Some((ia, ib, j, g)) = hit else {
            break;
        };
        let m = num[ia].1.min(den[ib].1);
        let a = num[ia].0.clone();
        let b = den[ib].0.clone();
        num[ia].1 -= m;
        den[ib].1 -= m;
        let a_rest = a.div_exact(&g).expect("gcd divides");
        let gj = g.shift_int(k, -j);
        let b_rest = b.div_exact(&gj).expect("shifted gcd divides");
        for i in 1..=j {
            p_atoms.push((g.shift_int(k, -i), m));
        }
        if a_rest.involves(k) {
            num.push((a_rest, m));
        } else {
            q_const = &q_const * &a_rest.pow(m);
        }
        if b_rest.involves(k) {
            den.push((b_rest, m));
        } else {
            r_const = &r_const * &b_rest.pow(m);
        }
        num.retain(|x| x.1 > 0);
        den.retain(|x| x.1 > 0);
    }
    let prod = |base: MultiPoly, xs: &[(MultiPoly, u32)]| {
        xs.iter().fold(base, |acc, (a, e)| &acc * &a.pow(*e))
    };
    GosperForm {
        p: prod(MultiPoly::one(&vars), &p_atoms),
        q: prod(q_const, &num),
        r: prod(r_const, &den),
    }
}

/// Gosper form of a nonzero rational function of `k`.
pub fn pqr_decompose(ratio: &RationalFunction, k: usize) -> Result<GosperForm, Error> {
    if ratio.is_zero() {
        return Err(Error::ZeroRatio);
    }
    Ok(pqr_factored(&Factored::from_ratfun(ratio), k))
}

/// Degree bound for polynomial solutions `x` of
/// `q(k) x(k+1) - r1(k) x(k) = c(k)` with `deg_k c = rhs_deg`; `None`
/// when no polynomial solution can exist.
pub fn gosper_degree_bound(q: &MultiPoly, r1: &MultiPoly, rhs_deg: i64, k: usize) -> Option<usize> {
    let minus = q - r1;
    let plus = q + r1;
    let dm = minus.degree_in(k).filter(|_| !minus.is_zero()).map(i64::from);
    let dp = plus.degree_in(k).filter(|_| !plus.is_zero()).map(i64::from);
    let d = match (dm, dp) {
        (Some(m), p) if p.is_none_or(|p| m >= p) => rhs_deg - m,
        (_, Some(l)) => {
            let mut d = rhs_deg - l + 1;
            let c = minus.coeffs_in(k);
            let below = c.get((l - 1) as usize).cloned().unwrap_or_else(|| MultiPoly::zero(q.vars()));
            let lc = lead_coeff_in(&plus, k);
            let l0 = RationalFunction::new(below.scale(&BigRational::from_integer((-2).into())), lc);
            if let Some(v) = l0.constant_value() {
                if v.is_integer() && !v.is_negative() {
                    if let Some(v) = v.to_integer().to_i64() {
                        d = d.max(v);
                    }
                }
            }
            d
        }
        _ => return None,
    };
    (d >= 0).then_some(d as usize)
}

/// Polynomials `q(k) (k+1)^i - r1(k) k^i` for `i = 0..=d`; the columns of
/// the ansatz system.
pub fn ansatz_columns(q: &MultiPoly, r1: &MultiPoly, d: usize, k: usize) -> Vec<MultiPoly> {
    let vars = q.vars();
    let kk = MultiPoly::var(vars, k);
    let k1 = &kk + &MultiPoly::one(vars);
    let mut pk = MultiPoly::one(vars);
    let mut pk1 = MultiPoly::one(vars);
    let mut out = Vec::with_capacity(d + 1);
    for _ in 0..=d {
        out.push(&(q * &pk1) - &(r1 * &pk));
        pk = &pk * &kk;
        pk1 = &pk1 * &k1;
    }
    out
}

/// Coefficient matrix (rows = powers of `k`) of a list of column polynomials.
pub fn coefficient_matrix(vars: &Vars, cols: &[MultiPoly], k: usize) -> PolyMatrix {
    let expanded: Vec<Vec<MultiPoly>> = cols.iter().map(|c| c.coeffs_in(k)).collect();
    let rows = expanded.iter().map(|c| c.len()).max().unwrap_or(0);
    let mut entries = Vec::with_capacity(rows * cols.len());
    for m in 0..rows {
        for c in &expanded {
            entries.push(c.get(m).cloned().unwrap_or_else(|| MultiPoly::zero(vars)));
        }
    }
    PolyMatrix::new(vars, rows, cols.len(), entries)
}

/// Certificate from a factored shift ratio, or `None` when the term is
/// not Gosper-summable.
pub fn gosper_from_ratio(ratio: &Factored, k: usize) -> Result<Option<RationalFunction>, Error> {
    let vars = ratio.vars().clone();
    let form = pqr_factored(ratio, k);
    let r1 = form.r.shift_int(k, -1);
    let pdeg = form.p.degree_in(k).unwrap_or(0) as i64;
    let Some(d) = gosper_degree_bound(&form.q, &r1, pdeg, k) else {
        return Ok(None);
    };
    if d > MAX_ANSATZ_DEGREE {
        return Err(Error::Precondition(alloc::format!("polynomial ansatz degree {d} too large")));
    }
    let cols = ansatz_columns(&form.q, &r1, d, k);
    let mut a = coefficient_matrix(&vars, &cols, k);
    let mut rhs = form.p.coeffs_in(k);
    let rows = a.rows().max(rhs.len());
    if rows > a.rows() {
        let mut entries = a.entries().to_vec();
        entries.resize(rows * a.cols(), MultiPoly::zero(&vars));
        a = PolyMatrix::new(&vars, rows, a.cols(), entries);
    }
    rhs.resize(rows, MultiPoly::zero(&vars));
    let Some(x) = solve_particular(&a, &rhs) else {
        return Ok(None);
    };
    let kk = RationalFunction::from_poly(MultiPoly::var(&vars, k));
    let mut xk = RationalFunction::zero(&vars);
    for c in x.iter().rev() {
        xk = &(&xk * &kk) + c;
    }
    let cert = &(&RationalFunction::from_poly(r1) * &xk) / &RationalFunction::from_poly(form.p);
    if !is_antidifference(&cert, &ratio.to_ratfun(), k) {
        return Err(Error::Precondition("internal: Gosper certificate failed verification".into()));
    }
    Ok(Some(cert))
}

/// Whether `R(k+1) rho(k) - R(k) = 1`.
pub fn is_antidifference(cert: &RationalFunction, rho: &RationalFunction, k: usize) -> bool {
    let lhs = &(&cert.shift_int(k, 1) * rho) - cert;
    lhs.is_one()
}

/// Hypergeometric antidifference of `f` in `k`, as the certificate
/// `R = G / f`; `None` when none exists.
pub fn gosper_antidifference(f: &TermExpression, k: &str) -> Result<Option<Certificate>, Error> {
    if f.is_zero() {
        return Ok(Some(Certificate {
            ratio: RationalFunction::zero(f.vars()),
        }));
    }
    let ki = f
        .vars()
        .index_of(k)
        .ok_or_else(|| Error::Precondition(alloc::format!("`{k}` is not a variable of the term")))?;
    let ratio = shift_quotient_factored(f, k)?;
    Ok(gosper_from_ratio(&ratio, ki)?.map(|ratio| Certificate { ratio }))
}

impl GosperForm {
    /// `p(k+1)/p(k) * q(k)/r(k)`.
    pub fn ratio(&self, k: usize) -> RationalFunction {
        let p = RationalFunction::from_poly(self.p.clone());
        let p1 = p.shift_int(k, 1);
        &(&p1 / &p) * &RationalFunction::new(self.q.clone(), self.r.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperterm::parse::{parse_ratfun, parse_term};

    fn vars() -> Vars {
        Vars::new(&["k", "n", "a"])
    }

    fn rf(s: &str) -> RationalFunction {
        parse_ratfun(s, &vars()).unwrap()
    }

    fn poly(s: &str) -> MultiPoly {
        let r = rf(s);
        assert!(r.denom().is_one());
        r.numer().clone()
    }

    #[test]
    fn pqr_examples() {
        let g = pqr_decompose(&rf("k/(k+2)"), 0).unwrap();
        assert_eq!((g.p, g.q, g.r), (poly("1"), poly("k"), poly("k+2")));
        let g = pqr_decompose(&rf("(k+3)/k"), 0).unwrap();
        assert_eq!((g.p, g.q, g.r), (poly("k*(k+1)*(k+2)"), poly("1"), poly("1")));
        let g = pqr_decompose(&rf("2"), 0).unwrap();
        assert_eq!((g.p, g.q, g.r), (poly("1"), poly("2"), poly("1")));
        assert!(matches!(pqr_decompose(&rf("0"), 0), Err(Error::ZeroRatio)));
    }

    #[test]
    fn nonlinear_atoms_are_peeled() {
        // ratio (k^2+n+2k+1)/(k^2+n) = q/r with r(k+1) = q
        let r = rf("((k+1)^2+n)/(k^2+n)");
        let g = pqr_decompose(&r, 0).unwrap();
        assert_eq!(g.p, poly("k^2+n"));
        assert!(g.q.is_one() && g.r.is_one());
        assert_eq!(g.ratio(0), r);
    }

    #[test]
    fn antidifferences() {
        let v = vars();
        let c = gosper_antidifference(&parse_term("k*k!", &v).unwrap(), "k").unwrap().unwrap();
        assert_eq!(c.ratio, rf("1/k"));
        let c = gosper_antidifference(&parse_term("1/(k*(k+1))", &v).unwrap(), "k").unwrap().unwrap();
        assert_eq!(c.ratio, rf("-(k+1)"));
        assert!(gosper_antidifference(&parse_term("k!", &v).unwrap(), "k").unwrap().is_none());
        let z = gosper_antidifference(&TermExpression::zero(&v), "k").unwrap().unwrap();
        assert!(z.ratio.is_zero());
    }

    #[test]
    fn binomial_wz_difference_is_summable() {
        // C(n+1,k)/2^(n+1) - C(n,k)/2^n telescopes in k.
        let v = vars();
        let f = parse_term("binomial(n,k)/2^n*((n+1)/(2*(n+1-k))-1)", &v).unwrap();
        let c = gosper_antidifference(&f, "k").unwrap().unwrap();
        let rho = shift_quotient_factored(&f, "k").unwrap().to_ratfun();
        assert!(is_antidifference(&c.ratio, &rho, 0));
        assert!(!c.ratio.is_zero());
    }
}
