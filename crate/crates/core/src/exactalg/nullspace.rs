//! Right nullspaces of polynomial matrices over the rational-function
//! field, by fraction-free Gauss-Jordan elimination.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::gcd::remove_common_content;
use super::matrix::{rank_rational, PolyMatrix};
use super::poly::MultiPoly;
use super::ratfun::RationalFunction;

/// Reduced echelon form where every pivot entry equals the common value `d`.
struct Echelon {
    a: Vec<Vec<MultiPoly>>,
    pivots: Vec<usize>,
    d: MultiPoly,
}

/// Bareiss-Montante elimination. Every entry stays a minor of the input, so
/// each division is exact; `None` signals that an exact division failed.
fn echelon(rows: Vec<Vec<MultiPoly>>, cols: usize, vars: &super::poly::Vars) -> Option<Echelon> {
    let mut a = rows;
    let nrows = a.len();
    let mut prev = MultiPoly::one(vars);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == nrows {
            break;
        }
        // Prefer the sparsest pivot among candidates.
        let Some(p) = (r..nrows)
            .filter(|&i| !a[i][c].is_zero())
            .min_by_key(|&i| a[i][c].num_terms())
        else {
            continue;
        };
        a.swap(r, p);
        let piv = a[r][c].clone();
        for i in 0..nrows {
            if i == r {
                continue;
            }
            let f = a[i][c].clone();
            for j in 0..cols {
                if j == c {
                    continue;
                }
                let t = &(&piv * &a[i][j]) - &(&f * &a[r][j]);
                a[i][j] = if prev.is_one() { t } else { t.div_exact(&prev)? };
            }
            a[i][c] = MultiPoly::zero(vars);
        }
        pivots.push(c);
        prev = piv;
        r += 1;
    }
    // Earlier pivots were rescaled along the way, so all now equal `prev`.
    debug_assert!(pivots.iter().enumerate().all(|(i, &c)| a[i][c] == prev));
    Some(Echelon { a, pivots, d: prev })
}

fn null_vectors(e: &Echelon, cols: usize, vars: &super::poly::Vars) -> Vec<Vec<MultiPoly>> {
    let mut out = Vec::new();
    for f in 0..cols {
        if e.pivots.contains(&f) {
            continue;
        }
        let mut x = alloc::vec![MultiPoly::zero(vars); cols];
        x[f] = e.d.clone();
        for (i, &c) in e.pivots.iter().enumerate() {
            x[c] = -&e.a[i][f];
        }
        remove_common_content(&mut x);
        out.push(x);
    }
    out
}

/// Rows of `m` that are independent at a random point; the full list when
/// none could be chosen.
fn candidate_rows(m: &PolyMatrix) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6e75_6c6c);
    let point: Vec<BigRational> = (0..m.vars().len())
        .map(|_| BigRational::from_integer(BigInt::from(rng.gen_range(-(1i64 << 40)..(1i64 << 40)))))
        .collect();
    let (_, basis) = rank_rational(&m.eval(&point));
    basis
}

fn rows_of(m: &PolyMatrix, idx: &[usize]) -> Vec<Vec<MultiPoly>> {
    idx.iter().map(|&i| m.row(i).to_vec()).collect()
}

fn eliminate(m: &PolyMatrix, idx: &[usize]) -> Echelon {
    if let Some(e) = echelon(rows_of(m, idx), m.cols(), m.vars()) {
        return e;
    }
    echelon_rational(m, idx)
}

/// Fallback through rational functions; results are scaled back to
/// polynomial rows with a common pivot value.
fn echelon_rational(m: &PolyMatrix, idx: &[usize]) -> Echelon {
    let vars = m.vars();
    let cols = m.cols();
    let mut a: Vec<Vec<RationalFunction>> = idx
        .iter()
        .map(|&i| m.row(i).iter().cloned().map(RationalFunction::from_poly).collect())
        .collect();
    let nrows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for j in 0..cols {
            a[r][j] = &a[r][j] * &inv;
        }
        for i in 0..nrows {
            if i == r || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for j in 0..cols {
                let t = &f * &a[r][j];
                a[i][j] = &a[i][j] - &t;
            }
        }
        pivots.push(c);
        r += 1;
    }
    // Scale to polynomials: multiply everything by the lcm of denominators.
    let mut l = MultiPoly::one(vars);
    for row in &a {
        for x in row {
            l = super::gcd::poly_lcm(&l, x.denom());
        }
    }
    let lr = RationalFunction::from_poly(l.clone());
    let a = a
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|x| {
                    let y = &x * &lr;
                    y.numer().div_exact(y.denom()).expect("lcm clears denominators")
                })
                .collect()
        })
        .collect();
    Echelon { a, pivots, d: l }
}

/// Polynomial basis of the right nullspace. Each vector has coprime
/// entries (common factors removed).
pub fn nullspace_poly(m: &PolyMatrix) -> Vec<Vec<MultiPoly>> {
    let vars = m.vars();
    let all: Vec<usize> = (0..m.rows()).collect();
    let chosen = candidate_rows(m);
    if chosen.len() < all.len() {
        let e = eliminate(m, &chosen);
        let vs = null_vectors(&e, m.cols(), vars);
        if vs.iter().all(|v| m.mul_vec(v).iter().all(|x| x.is_zero())) {
            return vs;
        }
    }
    let e = eliminate(m, &all);
    null_vectors(&e, m.cols(), vars)
}

/// Basis of the right nullspace over the rational-function field; empty
/// iff `m` has full column rank.
pub fn solve_nullspace(m: &PolyMatrix) -> Vec<Vec<RationalFunction>> {
    nullspace_poly(m)
        .into_iter()
        .map(|v| v.into_iter().map(RationalFunction::from_poly).collect())
        .collect()
}

/// One solution of `a x = b` with every free unknown set to zero, or
/// `None` when the system is inconsistent.
pub fn solve_particular(a: &PolyMatrix, b: &[MultiPoly]) -> Option<Vec<RationalFunction>> {
    assert_eq!(b.len(), a.rows());
    let vars = a.vars();
    let cols = a.cols();
    let mut entries = Vec::with_capacity(a.rows() * (cols + 1));
    for i in 0..a.rows() {
        entries.extend_from_slice(a.row(i));
        entries.push(-&b[i]);
    }
    let aug = PolyMatrix::new(vars, a.rows(), cols + 1, entries).without_zero_rows();
    if aug.rows() == 0 {
        return Some(alloc::vec![RationalFunction::zero(vars); cols]);
    }
    let idx = candidate_rows(&aug);
    let try_rows = |idx: &[usize]| -> Option<Vec<RationalFunction>> {
        let e = eliminate(&aug, idx);
        if e.pivots.contains(&cols) {
            return None;
        }
        let mut x = alloc::vec![RationalFunction::zero(vars); cols];
        for (i, &c) in e.pivots.iter().enumerate() {
            x[c] = RationalFunction::new(-&e.a[i][cols], e.d.clone());
        }
        Some(x)
    };
    let check = |x: &[RationalFunction]| -> bool {
        (0..a.rows()).all(|i| {
            let mut acc = RationalFunction::from_poly(-&b[i]);
            for (j, xj) in x.iter().enumerate() {
                if !xj.is_zero() && !a.get(i, j).is_zero() {
                    acc = &acc + &(xj * &RationalFunction::from_poly(a.get(i, j).clone()));
                }
            }
            acc.is_zero()
        })
    };
    if idx.len() < aug.rows() {
        if let Some(x) = try_rows(&idx) {
            if check(&x) {
                return Some(x);
            }
        }
    }
    let all: Vec<usize> = (0..aug.rows()).collect();
    try_rows(&all)
}

/// Whether a rational vector is zero.
pub fn is_zero_vector(v: &[BigRational]) -> bool {
    v.iter().all(|x| x.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::poly::{q_int, Vars};
    use alloc::vec;

    fn c(v: &Vars, x: i64) -> MultiPoly {
        MultiPoly::from_int(v, x)
    }

    fn proportional(a: &[RationalFunction], b: &[RationalFunction]) -> bool {
        let i = a.iter().position(|x| !x.is_zero()).unwrap();
        let s = &b[i] / &a[i];
        a.iter().zip(b).all(|(x, y)| &(x * &s) == y)
    }

    #[test]
    fn proportional_rows() {
        let v = Vars::new(&["n"]);
        let m = PolyMatrix::from_rows(&v, vec![vec![c(&v, 1), c(&v, 1)], vec![c(&v, 2), c(&v, 2)]]);
        let ns = solve_nullspace(&m);
        assert_eq!(ns.len(), 1);
        let expect = [RationalFunction::one(&v), RationalFunction::constant(&v, q_int(-1))];
        assert!(proportional(&ns[0], &expect));
    }

    #[test]
    fn symbolic_rank_one() {
        let v = Vars::new(&["n"]);
        let n = MultiPoly::var(&v, 0);
        let m = PolyMatrix::from_rows(&v, vec![vec![n.clone(), c(&v, 1)], vec![n.pow(2), n.clone()]]);
        let ns = solve_nullspace(&m);
        assert_eq!(ns.len(), 1);
        let expect = [RationalFunction::one(&v), RationalFunction::from_poly(-&n)];
        assert!(proportional(&ns[0], &expect));
    }

    #[test]
    fn identity_has_trivial_nullspace() {
        let v = Vars::new(&["n"]);
        let m = PolyMatrix::from_rows(&v, vec![vec![c(&v, 1), c(&v, 0)], vec![c(&v, 0), c(&v, 1)]]);
        assert!(solve_nullspace(&m).is_empty());
    }

    #[test]
    fn particular_solution() {
        let v = Vars::new(&["n"]);
        let n = MultiPoly::var(&v, 0);
        // n x + y = 1, unknown z free
        let m = PolyMatrix::from_rows(&v, vec![vec![n.clone(), c(&v, 1), c(&v, 0)]]);
        let x = solve_particular(&m, &[c(&v, 1)]).unwrap();
        assert!(x[1].is_zero() || x[0].is_zero());
        let bad = PolyMatrix::from_rows(&v, vec![vec![n.clone()], vec![n.clone()]]);
        assert!(solve_particular(&bad, &[c(&v, 1), c(&v, 2)]).is_none());
    }
}
