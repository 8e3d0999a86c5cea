//! Matrices of polynomials and exact numeric determinants.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::{MultiPoly, Vars};
use crate::error::Error;

/// Rectangular matrix of polynomials over one variable list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    vars: Vars,
    entries: Vec<MultiPoly>,
}

impl PolyMatrix {
    pub fn new(vars: &Vars, rows: usize, cols: usize, entries: Vec<MultiPoly>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count");
        assert!(
            entries.iter().all(|e| e.vars().same(vars)),
            "entries must share the matrix variable list"
        );
        PolyMatrix {
            rows,
            cols,
            vars: vars.clone(),
            entries,
        }
    }

    pub fn from_rows(vars: &Vars, rows: Vec<Vec<MultiPoly>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Self::new(vars, r, c, rows.into_iter().flatten().collect())
    }

    pub fn zeros(vars: &Vars, rows: usize, cols: usize) -> Self {
        Self::new(vars, rows, cols, alloc::vec![MultiPoly::zero(vars); rows * cols])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn get(&self, i: usize, j: usize) -> &MultiPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: MultiPoly) {
        assert!(p.vars().same(&self.vars));
        self.entries[i * self.cols + j] = p;
    }

    pub fn row(&self, i: usize) -> &[MultiPoly] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[MultiPoly] {
        &self.entries
    }

    /// Keeps the listed rows, in order.
    pub fn select_rows(&self, rows: &[usize]) -> PolyMatrix {
        let mut e = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            e.extend_from_slice(self.row(r));
        }
        PolyMatrix::new(&self.vars, rows.len(), self.cols, e)
    }

    /// Keeps the listed columns, in order.
    pub fn select_cols(&self, cols: &[usize]) -> PolyMatrix {
        let mut e = Vec::with_capacity(cols.len() * self.rows);
        for i in 0..self.rows {
            for &c in cols {
                e.push(self.get(i, c).clone());
            }
        }
        PolyMatrix::new(&self.vars, self.rows, cols.len(), e)
    }

    /// Drops rows whose entries are all identically zero.
    pub fn without_zero_rows(&self) -> PolyMatrix {
        let keep: Vec<usize> = (0..self.rows)
            .filter(|&i| self.row(i).iter().any(|e| !e.is_zero()))
            .collect();
        self.select_rows(&keep)
    }

    /// Matrix-vector product with a polynomial vector.
    pub fn mul_vec(&self, v: &[MultiPoly]) -> Vec<MultiPoly> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = MultiPoly::zero(&self.vars);
                for (j, x) in v.iter().enumerate() {
                    if !x.is_zero() && !self.get(i, j).is_zero() {
                        acc = &acc + &(self.get(i, j) * x);
                    }
                }
                acc
            })
            .collect()
    }

    /// Numeric matrix at a full point given by variable position.
    pub fn eval(&self, point: &[BigRational]) -> Vec<Vec<BigRational>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|e| e.eval(point)).collect())
            .collect()
    }

    /// Resolves a symbol map into a positional point. Variables that no
    /// entry uses may be omitted (they are set to zero).
    pub fn point_from_map(&self, point: &BTreeMap<String, BigRational>) -> Result<Vec<BigRational>, Error> {
        let mut out = Vec::with_capacity(self.vars.len());
        for (i, name) in self.vars.names().iter().enumerate() {
            match point.get(name) {
                Some(v) => out.push(v.clone()),
                None => {
                    if self.entries.iter().any(|e| e.involves(i)) {
                        return Err(Error::MissingAssignment(name.clone()));
                    }
                    out.push(BigRational::zero());
                }
            }
        }
        Ok(out)
    }
}

/// Exact determinant of the numeric matrix obtained by substituting `point`.
pub fn det_at_point(m: &PolyMatrix, point: &BTreeMap<String, BigRational>) -> Result<BigRational, Error> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let p = m.point_from_map(point)?;
    Ok(det_rational(&m.eval(&p)))
}

/// Scales each row to coprime integers; returns the integer rows and the
/// product of the scale factors used (`original = scaled / factor`).
fn integer_rows(a: &[Vec<BigRational>]) -> (Vec<Vec<BigInt>>, BigRational) {
    let mut factor = BigRational::one();
    let rows = a
        .iter()
        .map(|row| {
            let mut l = BigInt::one();
            for x in row {
                l = l.lcm(x.denom());
            }
            factor *= BigRational::from_integer(l.clone());
            row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect();
    (rows, factor)
}

/// Determinant by fraction-free (Bareiss) elimination over the integers.
pub fn det_rational(a: &[Vec<BigRational>]) -> BigRational {
    let n = a.len();
    if n == 0 {
        return BigRational::one();
    }
    assert!(a.iter().all(|r| r.len() == n), "square matrix required");
    let (mut m, factor) = integer_rows(a);
    let d = bareiss_det(&mut m);
    BigRational::from_integer(d) / factor
}

/// Bareiss determinant of an integer matrix (destroys the input).
pub fn bareiss_det(m: &mut [Vec<BigInt>]) -> BigInt {
    let n = m.len();
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, p);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

/// Rank of a rational matrix, with the pivot rows chosen greedily in order.
pub fn rank_rational(a: &[Vec<BigRational>]) -> (usize, Vec<usize>) {
    if a.is_empty() {
        return (0, Vec::new());
    }
    let (m, _) = integer_rows(a);
    rank_integer(m)
}

/// Rank of an integer matrix by fraction-free elimination. Also returns the
/// indices of a maximal set of independent rows (earliest first).
pub fn rank_integer(mut m: Vec<Vec<BigInt>>) -> (usize, Vec<usize>) {
    let rows = m.len();
    if rows == 0 {
        return (0, Vec::new());
    }
    let cols = m[0].len();
    let mut order: Vec<usize> = (0..rows).collect();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        order.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                m[i][j] = v / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    let mut basis: Vec<usize> = order[..r].to_vec();
    basis.sort_unstable();
    (r, basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::poly::q_int;
    use alloc::string::ToString;
    use alloc::vec;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn numeric_determinants() {
        let v = Vars::new(&["n", "a"]);
        let c = |x: BigRational| MultiPoly::constant(&v, x);
        let m = PolyMatrix::from_rows(&v, vec![vec![c(q_int(1)), c(q_int(2))], vec![c(q_int(3)), c(q_int(4))]]);
        assert_eq!(det_at_point(&m, &BTreeMap::new()).unwrap(), q_int(-2));
        let h = PolyMatrix::from_rows(&v, vec![vec![c(q_int(1)), c(q(1, 2))], vec![c(q(1, 2)), c(q(1, 3))]]);
        assert_eq!(det_at_point(&h, &BTreeMap::new()).unwrap(), q(1, 12));
    }

    #[test]
    fn symbolic_rank_one_vanishes() {
        let v = Vars::new(&["n", "a"]);
        let n = MultiPoly::var(&v, 0);
        let a = MultiPoly::var(&v, 1);
        let m = PolyMatrix::from_rows(&v, vec![vec![n.clone(), a.clone()], vec![&n * &n, &n * &a]]);
        let mut pt = BTreeMap::new();
        pt.insert("n".to_string(), q_int(7));
        pt.insert("a".to_string(), q_int(3));
        assert!(det_at_point(&m, &pt).unwrap().is_zero());
        pt.remove("a");
        assert!(matches!(det_at_point(&m, &pt), Err(Error::MissingAssignment(_))));
    }

    #[test]
    fn non_square_is_an_error() {
        let v = Vars::new(&["n"]);
        let m = PolyMatrix::zeros(&v, 2, 3);
        assert!(matches!(det_at_point(&m, &BTreeMap::new()), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn rank_and_basis_rows() {
        let a = vec![
            vec![q_int(1), q_int(2)],
            vec![q_int(2), q_int(4)],
            vec![q_int(0), q_int(1)],
        ];
        let (r, basis) = rank_rational(&a);
        assert_eq!(r, 2);
        assert_eq!(basis, vec![0, 2]);
    }
}
