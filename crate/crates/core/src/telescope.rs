//! Creative telescoping: polynomials `a_0..a_J` in `(n, params)` and a
//! rational certificate `R` with
//! `sum_j a_j f(n+j, k) = G(n, k+1) - G(n, k)`, `G = R f`.
//!
//! With `sigma_j = f(n+j,k)/f(n,k)`, `D` the lcm of their denominators and
//! `rho D(k)/D(k+1) = p1(k+1)/p1(k) q(k)/r(k)` in Gosper form, the unknown
//! polynomial `b` solves `q(k) b(k+1) - r(k-1) b(k) = p1(k) sum_j a_j sigma_j D`
//! and `R = r(k-1) b(k) / (p1(k) D(k))`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::exactalg::factored::{coprime_base, Factored};
use crate::exactalg::gcd::poly_gcd;
use crate::exactalg::matrix::PolyMatrix;
use crate::exactalg::nullspace::nullspace_poly;
use crate::exactalg::poly::{MultiPoly, Vars};
use crate::exactalg::ratfun::RationalFunction;
use crate::gosper::{ansatz_columns, coefficient_matrix, gosper_degree_bound, pqr_factored, MAX_ANSATZ_DEGREE};
use crate::hyperterm::quotient::{shift_quotient_factored, shift_ratio_factored};
use crate::hyperterm::term::TermExpression;

/// Default order limit of the escalation loop.
pub const DEFAULT_MAX_ORDER: usize = 6;

/// `sum_j a_j(n) A(n+j) = 0`. The coefficients are coprime as a family,
/// integral and primitive, and `a_J` has a positive leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recurrence {
    coeffs: Vec<MultiPoly>,
}

impl Recurrence {
    /// Content-normalized recurrence; `None` when every coefficient is zero.
    pub fn new(coeffs: Vec<MultiPoly>) -> Option<Self> {
        let (r, _) = normalize_family(coeffs)?;
        Some(r)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[MultiPoly] {
        &self.coeffs
    }

    pub fn leading(&self) -> &MultiPoly {
        self.coeffs.last().expect("nonempty")
    }

    pub fn vars(&self) -> &Vars {
        self.coeffs[0].vars()
    }

    /// `sum_j a_j(n) values[j]` with `n` and the parameters fixed by `point`
    /// (positional over the coefficient variables).
    pub fn apply(&self, point: &[BigRational], values: &[BigRational]) -> BigRational {
        self.coeffs
            .iter()
            .zip(values)
            .fold(BigRational::zero(), |acc, (a, v)| acc + a.eval(point) * v)
    }
}

impl fmt::Display for Recurrence {
    /// `(a_0)*A(n) + (a_1)*A(n+1) + ...`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, a) in self.coeffs.iter().enumerate() {
            if j > 0 {
                f.write_str(" + ")?;
            }
            match j {
                0 => write!(f, "({a})*A(n)")?,
                _ => write!(f, "({a})*A(n+{j})")?,
            }
        }
        Ok(())
    }
}

/// Divides out the polynomial and rational content of a family and fixes
/// the sign; also returns the factor the family was multiplied by.
fn normalize_family(mut coeffs: Vec<MultiPoly>) -> Option<(Recurrence, RationalFunction)> {
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    let vars = coeffs.first()?.vars().clone();
    let g = coeffs.iter().fold(MultiPoly::zero(&vars), |g, c| poly_gcd(&g, c));
    let mut coeffs: Vec<MultiPoly> = coeffs.iter().map(|c| c.div_exact(&g).expect("gcd divides")).collect();
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for c in &coeffs {
        for (_, x) in c.terms() {
            num = num.gcd(x.numer());
            den = den.lcm(x.denom());
        }
    }
    let mut s = BigRational::new(den, num);
    if coeffs.last().expect("nonempty").leading_coeff().is_negative() {
        s = -s;
    }
    for c in coeffs.iter_mut() {
        *c = c.scale(&s);
    }
    let factor = RationalFunction::new(MultiPoly::constant(&vars, s), g);
    Some((Recurrence { coeffs }, factor))
}

/// How the `a_j` combine the shifted summands.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AnsatzShape {
    /// `sum_j a_j f(n+j, k)`.
    Plain,
    /// `sum_j a_j (f(n+j+1, k) - f(n+j, k))`, built on `f` itself so that
    /// the difference factor never enters the denominators.
    Differenced,
}

/// Shape and size of the unknown vector `(a_0..a_J, b_0..b_K)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TelescoperAnsatz {
    pub order: usize,
    pub degree: usize,
    pub shape: AnsatzShape,
}

impl TelescoperAnsatz {
    pub fn unknowns(&self) -> usize {
        self.order + 1 + self.degree + 1
    }
}

/// `p2(k) b(k+1) - p3(k-1) b(k) = sum_j a_j p[j](k)`; `scale` is `p1 D`.
#[derive(Clone, Debug)]
pub struct GzEquation {
    pub p: Vec<MultiPoly>,
    pub p2: MultiPoly,
    pub p3: MultiPoly,
    pub scale: MultiPoly,
}

/// Ansatz, equation and the homogeneous coefficient matrix acting on
/// `(a_0..a_J, b_0..b_K)`; rows are powers of `k`, entries lie in
/// `(n, params)`.
#[derive(Clone, Debug)]
pub struct GzSystem {
    pub ansatz: TelescoperAnsatz,
    pub equation: GzEquation,
    pub matrix: PolyMatrix,
    k: usize,
}

impl GzSystem {
    /// `R = p3(k-1) b(k) / (p1 D)` relative to the term the system was
    /// built on.
    pub fn certificate(&self, b: &[RationalFunction]) -> RationalFunction {
        let vars = self.matrix.vars();
        let kk = RationalFunction::from_poly(MultiPoly::var(vars, self.k));
        let mut x = RationalFunction::zero(vars);
        for c in b.iter().rev() {
            x = &(&x * &kk) + c;
        }
        let r1 = RationalFunction::from_poly(self.equation.p3.shift_int(self.k, -1));
        &(&r1 * &x) / &RationalFunction::from_poly(self.equation.scale.clone())
    }
}

fn var_index(vars: &Vars, name: &str) -> Result<usize, Error> {
    vars.index_of(name)
        .ok_or_else(|| Error::Precondition(alloc::format!("`{name}` is not a variable of the term")))
}

/// Builds the linear system for order `j`; `None` when the degree bound
/// rules out any solution.
pub fn assemble_gz_system(
    f: &TermExpression,
    k: &str,
    n: &str,
    j: usize,
    shape: AnsatzShape,
) -> Result<Option<GzSystem>, Error> {
    let vars = f.vars().clone();
    let ki = var_index(&vars, k)?;
    var_index(&vars, n)?;
    if f.is_zero() {
        return Err(Error::Precondition("summand is identically zero".into()));
    }
    let count = match shape {
        AnsatzShape::Plain => j + 1,
        AnsatzShape::Differenced => j + 2,
    };
    let sigmas: Vec<Factored> = (0..count)
        .map(|i| shift_ratio_factored(f, n, i as i64))
        .collect::<Result<_, _>>()?;
    let refs: Vec<&Factored> = sigmas.iter().collect();
    let base = coprime_base(&vars, &refs);
    let exps: Vec<Vec<i32>> = sigmas.iter().map(|s| s.exponents_in(&base)).collect();
    let mut dfact = Factored::one(&vars);
    for (b, atom) in base.iter().enumerate() {
        let e = exps.iter().map(|x| (-x[b]).max(0)).max().unwrap_or(0);
        if e > 0 {
            dfact.insert(atom, e);
        }
    }
    let rho = shift_quotient_factored(f, k)?;
    let rbar = rho.mul(&dfact).div(&dfact.shift_int(ki, 1));
    let form = pqr_factored(&rbar, ki);
    let r1 = form.r.shift_int(ki, -1);
    let sd: Vec<MultiPoly> = sigmas
        .iter()
        .map(|s| {
            let t = s.mul(&dfact);
            debug_assert!(t.denom_poly().is_one());
            &t.numer_poly() * &form.p
        })
        .collect();
    let p: Vec<MultiPoly> = match shape {
        AnsatzShape::Plain => sd,
        AnsatzShape::Differenced => (0..=j).map(|i| &sd[i + 1] - &sd[i]).collect(),
    };
    let rhs_deg = p.iter().filter(|x| !x.is_zero()).filter_map(|x| x.degree_in(ki)).max();
    let Some(rhs_deg) = rhs_deg else {
        return Err(Error::Precondition("shifted summands cancel identically".into()));
    };
    let Some(kdeg) = gosper_degree_bound(&form.q, &r1, i64::from(rhs_deg), ki) else {
        return Ok(None);
    };
    if kdeg > MAX_ANSATZ_DEGREE {
        return Err(Error::Precondition(alloc::format!("ansatz degree {kdeg} too large")));
    }
    let mut cols: Vec<MultiPoly> = p.iter().map(|x| -x).collect();
    cols.extend(ansatz_columns(&form.q, &r1, kdeg, ki));
    let matrix = coefficient_matrix(&vars, &cols, ki).without_zero_rows();
    let dpoly = dfact.numer_poly();
    Ok(Some(GzSystem {
        ansatz: TelescoperAnsatz { order: j, degree: kdeg, shape },
        equation: GzEquation {
            p,
            p2: form.q,
            p3: form.r,
            scale: &form.p * &dpoly,
        },
        matrix,
        k: ki,
    }))
}

/// A recurrence with its certificate, relative to the summand it was
/// computed for.
#[derive(Clone, Debug)]
pub struct Telescoper {
    pub recurrence: Recurrence,
    pub certificate: RationalFunction,
    pub degree: usize,
}

/// Picks a null vector with nonzero `a`-part: lowest effective order,
/// then lowest total degree of its leading coefficient.
fn choose_vector(basis: Vec<Vec<MultiPoly>>, na: usize) -> Option<Vec<MultiPoly>> {
    basis
        .into_iter()
        .filter_map(|v| {
            let top = (0..na).rev().find(|&i| !v[i].is_zero())?;
            let deg = v[top].total_degree().unwrap_or(0);
            Some(((top, deg), v))
        })
        .min_by(|a, b| a.0.cmp(&b.0))
        .map(|(_, v)| v)
}

/// Solves one system; the certificate is relative to the base term.
pub fn solve_gz_system(sys: &GzSystem) -> Option<(Recurrence, RationalFunction)> {
    let na = sys.ansatz.order + 1;
    let v = choose_vector(nullspace_poly(&sys.matrix), na)?;
    let (rec, factor) = normalize_family(v[..na].to_vec())?;
    let b: Vec<RationalFunction> = v[na..]
        .iter()
        .map(|x| &RationalFunction::from_poly(x.clone()) * &factor)
        .collect();
    Some((rec, sys.certificate(&b)))
}

/// Tries `J = 0, 1, ..., max_order` and returns the first telescoper.
pub fn creative_telescope(f: &TermExpression, k: &str, n: &str, max_order: usize) -> Result<Option<Telescoper>, Error> {
    for j in 0..=max_order {
        let Some(sys) = assemble_gz_system(f, k, n, j, AnsatzShape::Plain)? else {
            continue;
        };
        if let Some((recurrence, certificate)) = solve_gz_system(&sys) {
            if !verify_certificate(f, k, n, &recurrence, &certificate) {
                return Err(Error::Precondition("internal: telescoper failed verification".into()));
            }
            return Ok(Some(Telescoper {
                recurrence,
                certificate,
                degree: sys.ansatz.degree,
            }));
        }
    }
    Ok(None)
}

/// Whether `sum_j a_j sigma_j = R(k+1) rho - R` identically.
pub fn verify_certificate(f: &TermExpression, k: &str, n: &str, rec: &Recurrence, cert: &RationalFunction) -> bool {
    let check = || -> Result<bool, Error> {
        let vars = f.vars();
        let ki = var_index(vars, k)?;
        if f.is_zero() || !rec.vars().same(vars) || !cert.vars().same(vars) {
            return Ok(false);
        }
        let mut lhs = RationalFunction::zero(vars);
        for (j, a) in rec.coeffs().iter().enumerate() {
            let s = shift_ratio_factored(f, n, j as i64)?.to_ratfun();
            lhs = &lhs + &(&s * &RationalFunction::from_poly(a.clone()));
        }
        let rho = shift_quotient_factored(f, k)?.to_ratfun();
        let rhs = &(&cert.shift_int(ki, 1) * &rho) - cert;
        Ok(lhs == rhs)
    };
    check().unwrap_or(false)
}

/// Renders the coefficients as a comma-separated list.
pub fn render_coeffs(rec: &Recurrence) -> String {
    let parts: Vec<String> = rec.coeffs().iter().map(|c| alloc::format!("{c}")).collect();
    parts.join(", ")
}
