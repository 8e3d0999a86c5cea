//! Maximum-weight assignment (Hungarian method) and the permanent degree
//! bound for determinants of polynomial matrices.

use alloc::vec;
use alloc::vec::Vec;

use super::matrix::PolyMatrix;
use crate::error::Error;

/// Maximum total weight of an assignment that matches every row of the
/// smaller side to a distinct line of the larger side. `None` entries are
/// forbidden. Returns the weight and, for each row, its matched column;
/// `None` when no complete assignment avoids forbidden entries.
pub fn max_weight_assignment(w: &[Vec<Option<i64>>]) -> Option<(i64, Vec<usize>)> {
    let rows = w.len();
    if rows == 0 {
        return Some((0, Vec::new()));
    }
    let cols = w[0].len();
    assert!(w.iter().all(|r| r.len() == cols), "ragged weight matrix");
    if rows > cols {
        let t: Vec<Vec<Option<i64>>> = (0..cols).map(|j| (0..rows).map(|i| w[i][j]).collect()).collect();
        let (total, col_to_row) = max_weight_assignment(&t)?;
        let mut row_to_col = vec![usize::MAX; rows];
        for (j, &i) in col_to_row.iter().enumerate() {
            row_to_col[i] = j;
        }
        return Some((total, row_to_col));
    }
    let max_abs = w
        .iter()
        .flatten()
        .flatten()
        .map(|x| x.unsigned_abs() as i128)
        .max()
        .unwrap_or(0);
    // Larger than any achievable spread of legal totals.
    let forbidden = (max_abs + 1) * (2 * rows as i128 + 2);
    let cost: Vec<Vec<i128>> = w
        .iter()
        .map(|r| r.iter().map(|x| x.map_or(forbidden, |v| -(v as i128))).collect())
        .collect();
    let assign = hungarian_min(&cost);
    let mut total = 0i64;
    for (i, &j) in assign.iter().enumerate() {
        total += w[i][j]?;
    }
    Some((total, assign))
}

/// Minimum-cost assignment of each row to a distinct column (rows <= cols),
/// by shortest augmenting paths with potentials. O(rows^2 * cols).
fn hungarian_min(a: &[Vec<i128>]) -> Vec<usize> {
    let n = a.len();
    let m = a[0].len();
    const INF: i128 = i128::MAX / 4;
    // 1-based arrays; column 0 is the virtual start.
    let mut u = vec![0i128; n + 1];
    let mut v = vec![0i128; m + 1];
    let mut p = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![INF; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = INF;
            let mut j1 = 0usize;
            for j in 1..=m {
                if !used[j] {
                    let cur = a[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut out = vec![0usize; n];
    for j in 1..=m {
        if p[j] != 0 {
            out[p[j] - 1] = j - 1;
        }
    }
    out
}

/// Upper bound on the degree of a determinant in one variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeBound {
    pub degree: u32,
    /// No assignment avoids zero entries, so the determinant is identically zero.
    pub structurally_zero: bool,
}

fn degree_weights(m: &PolyMatrix, v: usize) -> Vec<Vec<Option<i64>>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|e| e.degree_in(v).map(i64::from)).collect())
        .collect()
}

/// Degree in `v` of the permanent of the matrix of leading terms in `v`.
/// Monomial entries cannot cancel in a permanent, so this bounds the
/// degree of the determinant.
pub fn permanent_degree_bound(m: &PolyMatrix, v: &str) -> Result<DegreeBound, Error> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let Some(i) = m.vars().index_of(v) else {
        return Ok(DegreeBound {
            degree: 0,
            structurally_zero: structurally_zero(m),
        });
    };
    Ok(bound_from_weights(&degree_weights(m, i)))
}

/// Bound valid simultaneously for every maximal minor of a matrix with at
/// least as many rows as columns: the best assignment of columns to
/// distinct rows.
pub fn minor_degree_bound(m: &PolyMatrix, v: usize) -> DegreeBound {
    assert!(m.rows() >= m.cols(), "needs rows >= cols");
    bound_from_weights(&degree_weights(m, v))
}

fn bound_from_weights(w: &[Vec<Option<i64>>]) -> DegreeBound {
    match max_weight_assignment(w) {
        Some((d, _)) => DegreeBound {
            degree: d as u32,
            structurally_zero: false,
        },
        None => DegreeBound {
            degree: 0,
            structurally_zero: true,
        },
    }
}

fn structurally_zero(m: &PolyMatrix) -> bool {
    let w: Vec<Vec<Option<i64>>> = (0..m.rows())
        .map(|i| m.row(i).iter().map(|e| (!e.is_zero()).then_some(0)).collect())
        .collect();
    max_weight_assignment(&w).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::poly::{MultiPoly, Vars};

    fn brute(w: &[Vec<Option<i64>>]) -> Option<i64> {
        fn go(w: &[Vec<Option<i64>>], i: usize, used: &mut Vec<bool>) -> Option<i64> {
            if i == w.len() {
                return Some(0);
            }
            let mut best = None;
            for j in 0..w[0].len() {
                if used[j] {
                    continue;
                }
                if let Some(x) = w[i][j] {
                    used[j] = true;
                    if let Some(r) = go(w, i + 1, used) {
                        best = Some(best.map_or(x + r, |b: i64| b.max(x + r)));
                    }
                    used[j] = false;
                }
            }
            best
        }
        go(w, 0, &mut vec![false; w[0].len()])
    }

    #[test]
    fn off_diagonal_assignment_wins() {
        let v = Vars::new(&["x"]);
        let x = MultiPoly::var(&v, 0);
        let one = MultiPoly::one(&v);
        let m = PolyMatrix::from_rows(&v, vec![vec![x.clone(), x.pow(2)], vec![x.pow(3), one.clone()]]);
        let b = permanent_degree_bound(&m, "x").unwrap();
        assert_eq!(b.degree, 5);
        assert!(!b.structurally_zero);
        let id = PolyMatrix::from_rows(
            &v,
            vec![
                vec![one.clone(), MultiPoly::zero(&v), MultiPoly::zero(&v)],
                vec![MultiPoly::zero(&v), one.clone(), MultiPoly::zero(&v)],
                vec![MultiPoly::zero(&v), MultiPoly::zero(&v), one.clone()],
            ],
        );
        assert_eq!(permanent_degree_bound(&id, "x").unwrap().degree, 0);
    }

    #[test]
    fn structurally_zero_is_flagged() {
        let v = Vars::new(&["x"]);
        let x = MultiPoly::var(&v, 0);
        let z = MultiPoly::zero(&v);
        let m = PolyMatrix::from_rows(&v, vec![vec![x.clone(), x.clone()], vec![z.clone(), z]]);
        assert!(permanent_degree_bound(&m, "x").unwrap().structurally_zero);
    }

    proptest::proptest! {
        #[test]
        fn hungarian_matches_enumeration(
            r in 1usize..5, extra in 0usize..3,
            cells in proptest::collection::vec(proptest::option::weighted(0.8, -9i64..20), 35)
        ) {
            let c = r + extra;
            let w: Vec<Vec<Option<i64>>> = (0..r).map(|i| (0..c).map(|j| cells[i * 7 + j]).collect()).collect();
            let got = max_weight_assignment(&w).map(|x| x.0);
            proptest::prop_assert_eq!(got, brute(&w));
            let t: Vec<Vec<Option<i64>>> = (0..c).map(|j| (0..r).map(|i| w[i][j]).collect()).collect();
            proptest::prop_assert_eq!(max_weight_assignment(&t).map(|x| x.0), brute(&w));
        }
    }
}
