//! Telescopers of known sums, checked against brute-force partial sums.

use std::collections::BTreeMap;

use ctproof_core::exactalg::{q_int, RationalFunction, Vars};
use ctproof_core::hyperterm::{eval_lenient, parse_term, ParamSet, TermExpression};
use ctproof_core::telescope::{creative_telescope, verify_certificate, Recurrence};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A definite sum over `lo(n) <= k <= hi(n)`, limits linear in `n`.
struct Case {
    summand: &'static str,
    n: &'static str,
    params: &'static [&'static str],
    lo: (i64, i64),
    hi: (i64, i64),
    /// Parameter values must stay integral to keep the support finite.
    integral: bool,
}

const CASES: &[Case] = &[
    Case { summand: "binomial(n,k)", n: "n", params: &[], lo: (0, 0), hi: (1, 0), integral: false },
    Case { summand: "binomial(n,k)^2", n: "n", params: &[], lo: (0, 0), hi: (1, 0), integral: false },
    Case { summand: "binomial(a,k)*binomial(n,k)", n: "n", params: &["a"], lo: (0, 0), hi: (1, 0), integral: false },
    Case {
        summand: "(-1)^k*binomial(a+b,a+k)*binomial(b+c,b+k)*binomial(c+a,c+k)",
        n: "a",
        params: &["b", "c"],
        lo: (-1, 0),
        hi: (1, 0),
        integral: true,
    },
    Case {
        summand: "rf(-2*n-1,k)*rf(2*n+3,k)*rf(1,k)*rf(n+2,k)*rf(n+3/2,k)/(rf(1,k)*rf(3/2,k)*rf(2*n+3,k)*rf(2,k)*k!)",
        n: "n",
        params: &[],
        lo: (0, 0),
        hi: (2, 1),
        integral: false,
    },
];

fn vars_of(c: &Case) -> Vars {
    ParamSet::new(c.params).unwrap().vars("k", c.n).unwrap()
}

fn sum_at(c: &Case, f: &TermExpression, n: i64, params: &BTreeMap<String, BigRational>) -> BigRational {
    let mut p = params.clone();
    p.insert(c.n.to_string(), q_int(n));
    let mut acc = BigRational::zero();
    for k in c.lo.0 * n + c.lo.1..=c.hi.0 * n + c.hi.1 {
        p.insert("k".into(), q_int(k));
        acc += eval_lenient(f, &p).unwrap();
    }
    acc
}

fn random_params(c: &Case, rng: &mut ChaCha8Rng) -> BTreeMap<String, BigRational> {
    c.params
        .iter()
        .map(|p| {
            let v = if c.integral {
                q_int(rng.gen_range(0..=4))
            } else {
                BigRational::new(BigInt::from(rng.gen_range(-20..=20)), BigInt::from(rng.gen_range(1..=20)))
            };
            (p.to_string(), v)
        })
        .collect()
}

fn telescope(c: &Case) -> (TermExpression, Recurrence, RationalFunction) {
    let f = parse_term(c.summand, &vars_of(c)).unwrap();
    let t = creative_telescope(&f, "k", c.n, 4).unwrap().expect("telescoper exists");
    (f, t.recurrence, t.certificate)
}

#[test]
fn recurrences_annihilate_brute_force_sums() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for c in CASES {
        let (f, rec, cert) = telescope(c);
        assert!(verify_certificate(&f, "k", c.n, &rec, &cert), "{}", c.summand);
        let vars = vars_of(c);
        let rounds = if c.params.is_empty() { 1 } else { 3 };
        for _ in 0..rounds {
            let params = random_params(c, &mut rng);
            let sums: Vec<BigRational> = (0..=20 + rec.order() as i64).map(|n| sum_at(c, &f, n, &params)).collect();
            for n in 0..=20i64 {
                let point: Vec<BigRational> = vars
                    .names()
                    .iter()
                    .map(|v| match v.as_str() {
                        "k" => q_int(0),
                        v if v == c.n => q_int(n),
                        v => params[v].clone(),
                    })
                    .collect();
                let window = &sums[n as usize..=n as usize + rec.order()];
                assert!(rec.apply(&point, window).is_zero(), "{} at n = {n}, {params:?}", c.summand);
            }
        }
    }
}

/// Coefficients divided by the last one, as rational functions.
fn normalized(rec: &Recurrence) -> Vec<RationalFunction> {
    let last = RationalFunction::from_poly(rec.leading().clone());
    rec.coeffs()
        .iter()
        .map(|a| &RationalFunction::from_poly(a.clone()) / &last)
        .collect()
}

#[test]
fn known_binomial_recurrences() {
    let expect = |c: &Case, coeffs: &[&str]| {
        let (_, rec, _) = telescope(c);
        let vars = vars_of(c);
        let want: Vec<_> = coeffs
            .iter()
            .map(|s| ctproof_core::hyperterm::parse_ratfun(s, &vars).unwrap())
            .collect();
        let want = Recurrence::new(want.iter().map(|r| r.numer().clone()).collect()).unwrap();
        assert_eq!(normalized(&rec), normalized(&want), "{}", c.summand);
    };
    expect(&CASES[0], &["-2", "1"]);
    expect(&CASES[1], &["-2*(2*n+1)", "n+1"]);
    expect(&CASES[2], &["-(a+n+1)", "n+1"]);
}

#[test]
fn recurrence_is_invariant_under_scaling() {
    for c in &CASES[..3] {
        let (f, rec, _) = telescope(c);
        for s in [q_int(3), BigRational::new((-2).into(), 7.into())] {
            let g = f.scale(&s);
            let t = creative_telescope(&g, "k", c.n, 4).unwrap().unwrap();
            assert_eq!(t.recurrence.coeffs(), rec.coeffs(), "{}", c.summand);
        }
    }
}

#[test]
fn perturbed_certificates_fail() {
    for c in &CASES[..3] {
        let (f, rec, cert) = telescope(c);
        let vars = vars_of(c);
        let one = RationalFunction::one(&vars);
        assert!(!verify_certificate(&f, "k", c.n, &rec, &(&cert + &one)));
        assert!(!verify_certificate(&f, "k", c.n, &rec, &cert.scale(&q_int(2))));
        let mut coeffs = rec.coeffs().to_vec();
        coeffs[0] = &coeffs[0] + &ctproof_core::exactalg::MultiPoly::one(&vars);
        assert!(!verify_certificate(&f, "k", c.n, &Recurrence::new(coeffs).unwrap(), &cert));
    }
}

#[test]
fn order_zero_when_summand_telescopes() {
    // k*k! telescopes by itself: no n-shift is needed.
    let vars = Vars::new(&["k", "n"]);
    let f = parse_term("k*k!", &vars).unwrap();
    let t = creative_telescope(&f, "k", "n", 2).unwrap().unwrap();
    assert_eq!(t.recurrence.order(), 0);
    assert!(t.recurrence.coeffs()[0].is_constant());
}
