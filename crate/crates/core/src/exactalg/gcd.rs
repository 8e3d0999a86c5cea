//! Multivariate polynomial GCD by recursive content / primitive
//! pseudo-remainder sequences.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::poly::MultiPoly;

/// Mersenne prime used for the modular coprimality filter.
const P: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(P)) as u64
}

fn pow_mod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a);
        }
        a = mul_mod(a, a);
        e >>= 1;
    }
    r
}

fn int_mod(c: &BigInt) -> u64 {
    let r = (c % BigInt::from(P)).to_i64().expect("reduced below the modulus");
    if r < 0 {
        (r + P as i64) as u64
    } else {
        r as u64
    }
}

/// Image of an integral polynomial in `F_P[v]` after substituting
/// `point[i]` for every other variable; index `i` holds the coefficient of
/// `v^i`.
fn image_mod(p: &MultiPoly, v: usize, point: &[u64]) -> Vec<u64> {
    let (_, terms) = p.integer_terms();
    let deg = p.degree_in(v).unwrap_or(0) as usize;
    let mut out = alloc::vec![0u64; deg + 1];
    for (m, c) in terms {
        let mut t = int_mod(&c);
        for (i, &e) in m.0.iter().enumerate() {
            if i != v && e > 0 {
                t = mul_mod(t, pow_mod(point[i], u64::from(e)));
            }
        }
        let slot = &mut out[m.0[v] as usize];
        *slot = (*slot + t) % P;
    }
    out
}

fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

/// Degree of the univariate GCD over `F_P`; `a` and `b` must be nonzero.
fn gcd_degree_mod(mut a: Vec<u64>, mut b: Vec<u64>) -> usize {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let inv = pow_mod(*b.last().expect("nonzero"), P - 2);
        while a.len() >= b.len() {
            let f = mul_mod(*a.last().expect("nonzero"), inv);
            let shift = a.len() - b.len();
            for (i, &bc) in b.iter().enumerate() {
                a[i + shift] = (a[i + shift] + P - mul_mod(f, bc)) % P;
            }
            trim(&mut a);
        }
        core::mem::swap(&mut a, &mut b);
    }
    a.len() - 1
}

/// Whether the GCD of `p` and `q` certainly does not involve `v`. An
/// integral common factor `g` reduces to a common factor of the images,
/// and keeps its degree in `v` when the leading coefficients of `p` and
/// `q` survive the substitution; a constant image GCD therefore rules out
/// any dependence on `v`. `false` means "undecided".
fn coprime_in_by_image(p: &MultiPoly, q: &MultiPoly, v: usize) -> bool {
    let n = p.vars().len();
    // Fixed, spread-out evaluation values; soundness does not depend on them.
    let point: Vec<u64> = (0..n as u64).map(|i| pow_mod(3 + 2 * i, 17 + i)).collect();
    let a = image_mod(p, v, &point);
    let b = image_mod(q, v, &point);
    if a.last().is_none_or(Zero::is_zero) || b.last().is_none_or(Zero::is_zero) {
        return false;
    }
    gcd_degree_mod(a, b) == 0
}

/// Greatest common divisor normalized to leading coefficient one.
/// `gcd(p, 0)` is `p` made monic; `gcd(0, 0)` is zero.
pub fn poly_gcd(p: &MultiPoly, q: &MultiPoly) -> MultiPoly {
    debug_assert!(p.vars().same(q.vars()));
    if p.is_zero() || q.is_zero() || p.is_constant() || q.is_constant() {
        return gcd_rec(p, q).monic();
    }
    let (_, pi) = p.primitive_integer();
    let (_, qi) = q.primitive_integer();
    if let Some(g) = heuristic_gcd(&pi, &qi) {
        return g.monic();
    }
    gcd_rec(p, q).monic()
}

/// Bit budget for evaluation images; beyond it the heuristic gives up.
const HEU_MAX_BITS: u64 = 1 << 20;

fn max_norm(p: &MultiPoly) -> BigInt {
    p.terms().map(|(_, c)| c.numer().abs()).max().unwrap_or_default()
}

fn integer_content(p: &MultiPoly) -> BigInt {
    p.terms().fold(BigInt::zero(), |g, (_, c)| g.gcd(c.numer()))
}

/// Heuristic GCD of integral polynomials: evaluate one variable at a large
/// integer `xi`, take the GCD of the images recursively and read the
/// candidate back from its balanced `xi`-adic digits. With
/// `xi >= 2 min(|a|, |b|) + 2` a primitive candidate dividing both inputs
/// is their GCD up to the integer content. `None` when no candidate
/// survives the trial divisions.
fn heuristic_gcd(a: &MultiPoly, b: &MultiPoly) -> Option<MultiPoly> {
    let vars = a.vars();
    if a.is_constant() || b.is_constant() {
        let g = integer_content(a).gcd(&integer_content(b));
        return Some(MultiPoly::constant(vars, BigRational::from_integer(g)));
    }
    let v = (0..vars.len()).find(|&i| a.involves(i) || b.involves(i))?;
    let mut xi = BigInt::from(2) * max_norm(a).min(max_norm(b)) + BigInt::from(29);
    let deg = u64::from(a.degree_in(v).unwrap_or(0).max(b.degree_in(v).unwrap_or(0)));
    for _ in 0..6 {
        if xi.bits() * (deg + 1) > HEU_MAX_BITS {
            return None;
        }
        let x = BigRational::from_integer(xi.clone());
        let ae = a.subst_value(v, &x);
        let be = b.subst_value(v, &x);
        if !ae.is_zero() && !be.is_zero() {
            let ge = heuristic_gcd(&ae, &be)?;
            let cand = xi_adic(&ge, v, &xi).primitive_integer().1;
            if !cand.is_zero() && a.div_exact(&cand).is_some() && b.div_exact(&cand).is_some() {
                let c = integer_content(a).gcd(&integer_content(b));
                return Some(cand.scale(&BigRational::from_integer(c)));
            }
        }
        xi = &xi * BigInt::from(73_794) / BigInt::from(27_011);
    }
    None
}

/// Polynomial in `v` whose balanced base-`xi` digits are the coefficients
/// of `g`.
fn xi_adic(g: &MultiPoly, v: usize, xi: &BigInt) -> MultiPoly {
    let vars = g.vars();
    let half = xi / BigInt::from(2);
    let mut rest = g.clone();
    let mut digits = Vec::new();
    while !rest.is_zero() {
        let digit = MultiPoly::from_terms(
            vars,
            rest.terms().map(|(m, c)| {
                let mut r = c.numer().mod_floor(xi);
                if r > half {
                    r -= xi;
                }
                (m.clone(), BigRational::from_integer(r))
            }),
        );
        rest = (&rest - &digit).scale(&BigRational::new(BigInt::from(1), xi.clone()));
        digits.push(digit);
    }
    MultiPoly::from_coeffs_in(vars, v, &digits)
}

/// Least common multiple (monic).
pub fn poly_lcm(p: &MultiPoly, q: &MultiPoly) -> MultiPoly {
    if p.is_zero() || q.is_zero() {
        return MultiPoly::zero(p.vars());
    }
    let g = poly_gcd(p, q);
    (p * &q.div_exact(&g).expect("gcd divides")).monic()
}

fn gcd_rec(p: &MultiPoly, q: &MultiPoly) -> MultiPoly {
    if p.is_zero() {
        return q.clone();
    }
    if q.is_zero() {
        return p.clone();
    }
    if p.is_constant() || q.is_constant() {
        return MultiPoly::one(p.vars());
    }
    if p.num_terms() == 1 && q.num_terms() == 1 {
        return monomial_gcd(p, q);
    }
    // A variable present in either argument.
    let v = (0..p.vars().len())
        .find(|&i| p.involves(i) || q.involves(i))
        .expect("non-constant polynomial has a variable");
    match (p.involves(v), q.involves(v)) {
        (true, false) => return gcd_rec(&content_in(p, v), q),
        (false, true) => return gcd_rec(p, &content_in(q, v)),
        _ => {}
    }
    // The content GCD starts from the smaller argument, so the larger one
    // never has its own content computed.
    let (small, large) = if p.num_terms() <= q.num_terms() { (p, q) } else { (q, p) };
    let cs = content_in(small, v);
    let mut c = cs.clone();
    for coeff in large.coeffs_in(v).iter().rev().filter(|x| !x.is_zero()) {
        if c.is_constant() {
            break;
        }
        c = gcd_rec(&c, coeff);
    }
    let c = if c.is_constant() { MultiPoly::one(p.vars()) } else { c.monic() };
    if coprime_in_by_image(p, q, v) {
        return c;
    }
    // A divisor of a primitive polynomial is primitive, so the content of
    // `large` cannot affect the primitive part of the GCD.
    let ss = small.div_exact(&cs).expect("content divides");
    let g = primitive_prs(large.clone(), ss, v);
    &c * &g
}

fn monomial_gcd(p: &MultiPoly, q: &MultiPoly) -> MultiPoly {
    let (mp, _) = p.leading_term().expect("nonzero");
    let (mq, _) = q.leading_term().expect("nonzero");
    let e = mp.0.iter().zip(&mq.0).map(|(a, b)| *a.min(b)).collect();
    MultiPoly::monomial(
        p.vars(),
        super::poly::Monomial(e),
        num_traits::One::one(),
    )
}

/// GCD of the coefficients of `p` viewed as a polynomial in variable `v`.
pub fn content_in(p: &MultiPoly, v: usize) -> MultiPoly {
    let coeffs = p.coeffs_in(v);
    let mut it = coeffs.into_iter().filter(|c| !c.is_zero());
    let mut g = match it.next() {
        Some(c) => c,
        None => return MultiPoly::zero(p.vars()),
    };
    for c in it {
        if g.is_constant() {
            break;
        }
        g = gcd_rec(&g, &c);
    }
    if g.is_constant() {
        MultiPoly::one(p.vars())
    } else {
        g.monic()
    }
}

pub fn primitive_part_in(p: &MultiPoly, v: usize) -> MultiPoly {
    if p.is_zero() {
        return p.clone();
    }
    let c = content_in(p, v);
    p.div_exact(&c).expect("content divides")
}

/// Pseudo-remainder of `a` by `b` as polynomials in variable `v`.
pub fn pseudo_remainder(a: &MultiPoly, b: &MultiPoly, v: usize) -> MultiPoly {
    let vars = a.vars().clone();
    let mut ac = a.coeffs_in(v);
    let bc = b.coeffs_in(v);
    let db = bc.len() - 1;
    let lb = bc[db].clone();
    while !ac.is_empty() && ac.len() > db {
        let da = ac.len() - 1;
        let la = ac[da].clone();
        for c in ac.iter_mut() {
            *c = &*c * &lb;
        }
        for (i, bcoef) in bc.iter().enumerate() {
            let idx = i + da - db;
            ac[idx] = &ac[idx] - &(&la * bcoef);
        }
        while ac.last().is_some_and(|c| c.is_zero()) {
            ac.pop();
        }
    }
    MultiPoly::from_coeffs_in(&vars, v, &ac)
}

/// Primitive in `v` with coprime integer coefficients; keeps the
/// remainder sequence free of coefficient growth.
fn primitive_normalized(p: &MultiPoly, v: usize) -> MultiPoly {
    primitive_part_in(p, v).primitive_integer().1
}

fn primitive_prs(a: MultiPoly, b: MultiPoly, v: usize) -> MultiPoly {
    let mut a = a.primitive_integer().1;
    let mut b = b.primitive_integer().1;
    if a.degree_in(v) < b.degree_in(v) {
        core::mem::swap(&mut a, &mut b);
    }
    loop {
        let r = pseudo_remainder(&a, &b, v);
        if r.is_zero() {
            return primitive_part_in(&b, v);
        }
        if !r.involves(v) {
            return MultiPoly::one(a.vars());
        }
        a = b;
        b = primitive_normalized(&r, v);
    }
}

/// Removes common factors from a list of polynomials (all nonzero entries
/// are divided by their joint GCD). Returns the GCD used.
pub fn remove_common_content(polys: &mut [MultiPoly]) -> Option<MultiPoly> {
    let mut g: Option<MultiPoly> = None;
    for p in polys.iter().filter(|p| !p.is_zero()) {
        match &g {
            Some(h) if h.is_one() => break,
            Some(h) => g = Some(poly_gcd(h, p)),
            None => g = Some(p.monic()),
        }
    }
    let g = g?;
    if !g.is_one() {
        for p in polys.iter_mut() {
            if !p.is_zero() {
                *p = p.div_exact(&g).expect("gcd divides");
            }
        }
    }
    Some(g)
}

pub fn divides(d: &MultiPoly, p: &MultiPoly) -> bool {
    p.div_exact(d).is_some()
}
