//! Determinant vanishing on a tensor grid sized by a priori degree bounds.
//!
//! A nonzero polynomial of degree at most `d_v` in each variable `v` cannot
//! vanish on a grid with `d_v + 1` distinct values per variable, so testing
//! every grid point decides whether it is identically zero.

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::exactalg::assignment::{minor_degree_bound, permanent_degree_bound};
use crate::exactalg::matrix::{bareiss_det, rank_integer, PolyMatrix};
use crate::exactalg::poly::Monomial;

/// Evaluates independent grid points, possibly in parallel. Implementations
/// must return the position of the first failing index in slice order,
/// whatever the completion order.
pub trait GridRunner: Sync {
    fn first_failure(&self, indices: &[u64], ok: &(dyn Fn(u64) -> bool + Sync)) -> Option<usize>;
}

/// Single-threaded runner.
#[derive(Clone, Copy, Debug, Default)]
pub struct SequentialRunner;

impl GridRunner for SequentialRunner {
    fn first_failure(&self, indices: &[u64], ok: &(dyn Fn(u64) -> bool + Sync)) -> Option<usize> {
        indices.iter().position(|&i| !ok(i))
    }
}

/// Per-variable degree bound of the determinant (or of every maximal minor).
pub type DegreeBounds = Vec<(String, u32)>;

/// Tensor grid: variable `vars[i]` ranges over `lo[i] .. lo[i] + size[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    pub vars: Vec<usize>,
    pub lo: Vec<i64>,
    pub size: Vec<u64>,
}

impl Grid {
    /// `d + 1` consecutive integers centred at zero for each bound.
    pub fn centred(bounds: &[(usize, u32)]) -> Self {
        let vars = bounds.iter().map(|b| b.0).collect();
        let lo = bounds.iter().map(|b| -((i64::from(b.1) + 1) / 2)).collect();
        let size = bounds.iter().map(|b| u64::from(b.1) + 1).collect();
        Grid { vars, lo, size }
    }

    pub fn total(&self) -> Option<u64> {
        self.size.iter().try_fold(1u64, |acc, &s| acc.checked_mul(s))
    }

    /// Coordinates of a grid index; the first variable varies slowest.
    pub fn coords(&self, mut idx: u64) -> Vec<i64> {
        let mut out = alloc::vec![0i64; self.size.len()];
        for i in (0..self.size.len()).rev() {
            out[i] = self.lo[i] + (idx % self.size[i]) as i64;
            idx /= self.size[i];
        }
        out
    }

    /// Positional point over `nvars` variables; variables off the grid are 0.
    pub fn point(&self, idx: u64, nvars: usize) -> Vec<BigRational> {
        let mut pt = alloc::vec![BigRational::zero(); nvars];
        for (v, c) in self.vars.iter().zip(self.coords(idx)) {
            pt[*v] = BigRational::from_integer(BigInt::from(c));
        }
        pt
    }
}

/// Indices to test: all of them for certainty 1, otherwise
/// `ceil(certainty * total)` drawn uniformly without replacement.
pub fn sample_indices(total: u64, certainty: &BigRational, seed: u64) -> Result<Vec<u64>, Error> {
    if certainty <= &BigRational::zero() || certainty > &BigRational::from_integer(1.into()) {
        return Err(Error::Precondition("certainty must lie in (0, 1]".into()));
    }
    let count = (certainty * BigRational::from_integer(total.into()))
        .ceil()
        .to_integer()
        .to_u64()
        .expect("bounded by total");
    if count >= total {
        return Ok((0..total).collect());
    }
    let len = usize::try_from(total).map_err(|_| Error::Precondition("grid too large to sample".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx: Vec<u64> = sample(&mut rng, len, count as usize).into_iter().map(|i| i as u64).collect();
    idx.sort_unstable();
    Ok(idx)
}

/// Integer evaluator for a polynomial matrix at integer points. Each row is
/// scaled by the common denominator of its coefficients, which leaves rank
/// and determinant vanishing unchanged.
struct IntegerRows {
    entries: Vec<Vec<Vec<(Monomial, BigInt)>>>,
    max_deg: Vec<u32>,
}

impl IntegerRows {
    fn new(m: &PolyMatrix) -> Self {
        let mut max_deg = alloc::vec![0u32; m.vars().len()];
        let entries = (0..m.rows())
            .map(|i| {
                let row = m.row(i);
                let den = row
                    .iter()
                    .flat_map(|e| e.terms().map(|(_, c)| c.denom().clone()))
                    .fold(BigInt::one(), |l, d| l.lcm(&d));
                row.iter()
                    .map(|e| {
                        e.terms()
                            .map(|(mono, c)| {
                                for (d, &x) in max_deg.iter_mut().zip(&mono.0) {
                                    *d = (*d).max(x);
                                }
                                (mono.clone(), c.numer() * (&den / c.denom()))
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        IntegerRows { entries, max_deg }
    }

    fn eval(&self, point: &[i64]) -> Vec<Vec<BigInt>> {
        let powers: Vec<Vec<BigInt>> = point
            .iter()
            .zip(&self.max_deg)
            .map(|(&x, &d)| {
                let x = BigInt::from(x);
                let mut p = alloc::vec![BigInt::one()];
                for i in 0..d as usize {
                    let next = &p[i] * &x;
                    p.push(next);
                }
                p
            })
            .collect();
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|terms| {
                        let mut acc = BigInt::zero();
                        for (mono, c) in terms {
                            let mut t = c.clone();
                            for (v, &e) in mono.0.iter().enumerate() {
                                if e > 0 {
                                    t *= &powers[v][e as usize];
                                }
                            }
                            acc += t;
                        }
                        acc
                    })
                    .collect()
            })
            .collect()
    }
}

/// Outcome of a grid test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vanishing {
    pub passed: bool,
    pub grid_total: u64,
    pub grid_tested: u64,
    /// Grid-order-first point with a nonzero value.
    pub witness: Option<Vec<(String, i64)>>,
    pub bounds: DegreeBounds,
}

fn run(
    m: &PolyMatrix,
    bounds: Vec<(usize, u32)>,
    certainty: &BigRational,
    seed: u64,
    runner: &dyn GridRunner,
    singular_at: &(dyn Fn(Vec<Vec<BigInt>>) -> bool + Sync),
) -> Result<Vanishing, Error> {
    let vars = m.vars();
    let named: DegreeBounds = bounds.iter().map(|(v, d)| (String::from(vars.name(*v)), *d)).collect();
    let grid = Grid::centred(&bounds);
    let total = grid.total().ok_or_else(|| Error::Precondition("grid size overflows".into()))?;
    let indices = sample_indices(total, certainty, seed)?;
    let nv = vars.len();
    let rows = IntegerRows::new(m);
    let ok = |i: u64| {
        let mut pt = alloc::vec![0i64; nv];
        for (v, c) in grid.vars.iter().zip(grid.coords(i)) {
            pt[*v] = c;
        }
        singular_at(rows.eval(&pt))
    };
    let fail = runner.first_failure(&indices, &ok);
    let witness = fail.map(|pos| {
        grid.vars
            .iter()
            .zip(grid.coords(indices[pos]))
            .map(|(v, c)| (String::from(vars.name(*v)), c))
            .collect()
    });
    Ok(Vanishing {
        passed: fail.is_none(),
        grid_total: total,
        grid_tested: fail.map_or(indices.len() as u64, |p| p as u64 + 1),
        witness,
        bounds: named,
    })
}

fn used_vars(m: &PolyMatrix) -> Vec<usize> {
    let mut used: Vec<usize> = m.entries().iter().flat_map(|e| e.used_vars()).collect();
    used.sort_unstable();
    used.dedup();
    used
}

fn trivially_passed() -> Vanishing {
    Vanishing {
        passed: true,
        grid_total: 0,
        grid_tested: 0,
        witness: None,
        bounds: Vec::new(),
    }
}

/// Tests `det m == 0` on the grid sized by permanent degree bounds.
pub fn vanishing_test(m: &PolyMatrix, certainty: &BigRational, seed: u64, runner: &dyn GridRunner) -> Result<Vanishing, Error> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let mut bounds = Vec::new();
    for v in used_vars(m) {
        let b = permanent_degree_bound(m, m.vars().name(v))?;
        if b.structurally_zero {
            return Ok(trivially_passed());
        }
        bounds.push((v, b.degree));
    }
    run(m, bounds, certainty, seed, runner, &|mut a| bareiss_det(&mut a).is_zero())
}

/// Tests that a matrix with at least as many rows as columns is rank
/// deficient: every maximal minor vanishes iff the rank drops at every
/// point of a grid sized for all minors at once.
pub fn rank_deficiency_test(
    m: &PolyMatrix,
    certainty: &BigRational,
    seed: u64,
    runner: &dyn GridRunner,
) -> Result<Vanishing, Error> {
    if m.rows() < m.cols() {
        return Ok(trivially_passed());
    }
    let mut bounds = Vec::new();
    for v in used_vars(m) {
        let b = minor_degree_bound(m, v);
        if b.structurally_zero {
            return Ok(trivially_passed());
        }
        bounds.push((v, b.degree));
    }
    let cols = m.cols();
    run(m, bounds, certainty, seed, runner, &move |a| rank_integer(a).0 < cols)
}

/// Square matrices use the determinant; tall ones the rank test; wide
/// ones always have a nontrivial kernel.
pub fn system_test(m: &PolyMatrix, certainty: &BigRational, seed: u64, runner: &dyn GridRunner) -> Result<Vanishing, Error> {
    if m.is_square() {
        vanishing_test(m, certainty, seed, runner)
    } else {
        rank_deficiency_test(m, certainty, seed, runner)
    }
}
