//! Properties of gcds, degree bounds, the grid kernel and nullspaces,
//! checked against brute-force determinant expansion.

use ctproof_core::exactalg::gcd::divides;
use ctproof_core::exactalg::{
    permanent_degree_bound, poly_gcd, q_int, solve_nullspace, Monomial, MultiPoly, PolyMatrix, RationalFunction, Vars,
};
use ctproof_core::synd::{vanishing_test, SequentialRunner};
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

fn kn() -> Vars {
    Vars::new(&["k", "n"])
}

fn poly(vars: &Vars, terms: &[(u32, u32, i64)]) -> MultiPoly {
    MultiPoly::from_terms(vars, terms.iter().map(|&(a, b, c)| (Monomial(vec![a, b]), q_int(c))))
}

fn arb_terms(max_deg: u32, max_terms: usize) -> impl Strategy<Value = Vec<(u32, u32, i64)>> {
    prop::collection::vec((0..=max_deg, 0..=max_deg, -5i64..=5), 0..=max_terms)
}

fn arb_poly(max_deg: u32, max_terms: usize) -> impl Strategy<Value = MultiPoly> {
    arb_terms(max_deg, max_terms).prop_map(|t| poly(&kn(), &t))
}

fn arb_nonzero(max_deg: u32, max_terms: usize) -> impl Strategy<Value = MultiPoly> {
    arb_poly(max_deg, max_terms).prop_filter("nonzero", |p| !p.is_zero())
}

/// Determinant by permutation expansion.
fn leibniz(m: &PolyMatrix) -> MultiPoly {
    let n = m.rows();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = MultiPoly::zero(m.vars());
    permute(m, &mut perm, 0, &mut total);
    total
}

fn permute(m: &PolyMatrix, perm: &mut Vec<usize>, i: usize, total: &mut MultiPoly) {
    if i == perm.len() {
        let mut term = MultiPoly::one(m.vars());
        for (r, &c) in perm.iter().enumerate() {
            term = &term * m.get(r, c);
        }
        let inversions = (0..perm.len())
            .flat_map(|a| (a + 1..perm.len()).map(move |b| (a, b)))
            .filter(|&(a, b)| perm[a] > perm[b])
            .count();
        *total = if inversions % 2 == 0 { &*total + &term } else { &*total - &term };
        return;
    }
    for j in i..perm.len() {
        perm.swap(i, j);
        permute(m, perm, i + 1, total);
        perm.swap(i, j);
    }
}

/// A square matrix whose last row is a polynomial combination of the
/// others when `singular` is set.
fn arb_matrix(n: usize, singular: bool) -> impl Strategy<Value = PolyMatrix> {
    (
        prop::collection::vec(arb_poly(2, 3), n * n),
        prop::collection::vec(arb_poly(1, 2), n - 1),
    )
        .prop_map(move |(mut entries, mult)| {
            let vars = kn();
            if singular {
                for c in 0..n {
                    let mut acc = MultiPoly::zero(&vars);
                    for (r, m) in mult.iter().enumerate() {
                        acc = &acc + &(m * &entries[r * n + c]);
                    }
                    entries[(n - 1) * n + c] = acc;
                }
            }
            PolyMatrix::new(&vars, n, n, entries)
        })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn gcd_divides_and_leaves_coprime_cofactors(a in arb_nonzero(3, 4), b in arb_nonzero(3, 4)) {
        let g = poly_gcd(&a, &b);
        prop_assert!(divides(&g, &a));
        prop_assert!(divides(&g, &b));
        let ca = a.div_exact(&g).unwrap();
        let cb = b.div_exact(&g).unwrap();
        prop_assert!(poly_gcd(&ca, &cb).is_constant());
    }

    #[test]
    fn gcd_finds_common_factor(a in arb_nonzero(2, 3), b in arb_nonzero(2, 3), c in arb_nonzero(2, 3)) {
        let g = poly_gcd(&(&a * &c), &(&b * &c));
        prop_assert!(divides(&c, &g));
        let rest = g.div_exact(&c).unwrap();
        prop_assert_eq!(rest.monic(), poly_gcd(&a, &b).monic());
    }

    #[test]
    fn gcd_with_zero_is_the_other_argument(a in arb_nonzero(3, 4)) {
        let z = MultiPoly::zero(&kn());
        prop_assert_eq!(poly_gcd(&a, &z).monic(), a.monic());
        prop_assert_eq!(poly_gcd(&z, &a).monic(), a.monic());
    }

    #[test]
    fn permanent_bound_dominates_true_degree(m in arb_matrix(3, false)) {
        let det = leibniz(&m);
        for (i, v) in ["k", "n"].iter().enumerate() {
            let b = permanent_degree_bound(&m, v).unwrap();
            if b.structurally_zero {
                prop_assert!(det.is_zero());
            } else if let Some(d) = det.degree_in(i) {
                prop_assert!(d <= b.degree, "deg_{} = {} > bound {}", v, d, b.degree);
            }
        }
    }

    #[test]
    fn exhaustive_grid_decides_singularity(m in (2usize..=3).prop_flat_map(|n| (Just(n), any::<bool>())).prop_flat_map(|(n, s)| arb_matrix(n, s))) {
        let det_zero = leibniz(&m).is_zero();
        let v = vanishing_test(&m, &BigRational::one(), 0, &SequentialRunner).unwrap();
        prop_assert_eq!(v.passed, det_zero);
        if v.passed {
            prop_assert_eq!(v.grid_tested, v.grid_total);
        }
        if let Some(w) = &v.witness {
            prop_assert!(!det_zero);
            let point: Vec<BigRational> = ["k", "n"]
                .iter()
                .map(|name| w.iter().find(|(x, _)| x == name).map_or(q_int(0), |(_, x)| q_int(*x)))
                .collect();
            prop_assert!(leibniz(&m).eval(&point) != q_int(0));
        }
    }

    #[test]
    fn constructed_singular_matrices_pass(m in arb_matrix(3, true)) {
        prop_assert!(leibniz(&m).is_zero());
        let v = vanishing_test(&m, &BigRational::one(), 7, &SequentialRunner).unwrap();
        prop_assert!(v.passed);
    }

    #[test]
    fn nullspace_vectors_annihilate(m in (2usize..=3).prop_flat_map(|n| arb_matrix(n, true))) {
        let basis = solve_nullspace(&m);
        prop_assert!(!basis.is_empty());
        let vars = m.vars().clone();
        for v in &basis {
            prop_assert!(v.iter().any(|x| !x.is_zero()));
            for r in 0..m.rows() {
                let mut acc = RationalFunction::zero(&vars);
                for (c, x) in v.iter().enumerate() {
                    acc = &acc + &(&RationalFunction::from_poly(m.get(r, c).clone()) * x);
                }
                prop_assert!(acc.is_zero());
            }
        }
    }

    #[test]
    fn nonsingular_matrices_have_trivial_nullspace(m in arb_matrix(3, false)) {
        prop_assert_eq!(solve_nullspace(&m).is_empty(), !leibniz(&m).is_zero());
    }
}

#[test]
fn structurally_zero_matrix_is_reported() {
    let vars = kn();
    let z = MultiPoly::zero(&vars);
    let k = MultiPoly::var(&vars, 0);
    let m = PolyMatrix::from_rows(&vars, vec![vec![k.clone(), z.clone()], vec![k.clone(), z]]);
    assert!(permanent_degree_bound(&m, "k").unwrap().structurally_zero);
    assert!(vanishing_test(&m, &BigRational::one(), 0, &SequentialRunner).unwrap().passed);
}
