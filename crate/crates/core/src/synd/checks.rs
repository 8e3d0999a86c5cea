//! Exact sums at fixed `n`, the leading-coefficient root search on a
//! specialized summand, and the initial-value checks closing the induction.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Identity, NormalizedIdentity};
use crate::error::Error;
use crate::exactalg::poly::q_int;
use crate::exactalg::univariate::UniPoly;
use crate::hyperterm::eval::{natural_support, GammaSum};
use crate::hyperterm::term::TermExpression;
use crate::telescope::creative_telescope;

/// Denominators of the generic parameter values used for support
/// detection; small integer combinations of their reciprocals are never
/// integers.
const GENERIC_PRIMES: [i64; 12] = [1009, 1013, 1019, 1021, 1031, 1033, 1039, 1049, 1051, 1061, 1063, 1069];

fn limit_at(l: &Option<crate::hyperterm::LinearForm>, n_name: &str, n: i64) -> Result<Option<i64>, Error> {
    let Some(l) = l else {
        return Ok(None);
    };
    let v = l.subst(n_name, &q_int(n));
    let c = v
        .as_integer()
        .ok_or_else(|| Error::Precondition(alloc::format!("summation limit {l} is not an integer at {n_name} = {n}")))?;
    Ok(Some(c.to_i64().ok_or_else(|| Error::Precondition("summation limit out of range".into()))?))
}

/// Range of `k` summed at a given `n`: the declared limits, which must
/// cover the natural support of the summand at generic parameters.
pub fn summation_range(id: &Identity, n: i64) -> Result<(i64, i64), Error> {
    let mut point: BTreeMap<String, BigRational> = BTreeMap::new();
    for (i, p) in id.params.names().iter().enumerate() {
        let d = GENERIC_PRIMES.get(i).copied().unwrap_or(1069 + 2 * i as i64 + 1);
        point.insert(p.clone(), BigRational::new(BigInt::from(1), BigInt::from(d)));
    }
    point.insert(id.n.clone(), q_int(n));
    let natural = natural_support(&id.summand, &point, &id.k)?;
    let lo = limit_at(&id.lower, &id.n, n)?;
    let hi = limit_at(&id.upper, &id.n, n)?;
    if natural.is_empty() {
        return Ok((0, -1));
    }
    let within = |x: Option<i64>, bound: Option<i64>, below: bool| match (x, bound) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some(x), Some(b)) => {
            if below {
                b <= x
            } else {
                x <= b
            }
        }
    };
    if !within(natural.lo, lo, true) || !within(natural.hi, hi, false) {
        return Err(Error::Precondition(alloc::format!(
            "declared limits exclude part of the support {natural} at {} = {n}",
            id.n
        )));
    }
    match (lo.or(natural.lo), hi.or(natural.hi)) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(Error::UnboundedSupport { n }),
    }
}

/// `sum_k F(n, k) - RHS(n)` as an exact symbolic sum in the parameters.
pub fn defect_at(id: &Identity, n: i64) -> Result<GammaSum, Error> {
    let vars = id.summand.vars();
    let (lo, hi) = summation_range(id, n)?;
    let at_n = id.summand.subst(&id.n, &q_int(n))?;
    let mut acc = GammaSum::new(vars);
    for k in lo..=hi {
        acc.add_term(&at_n.subst(&id.k, &q_int(k))?)?;
    }
    let mut rhs = GammaSum::new(vars);
    for t in &id.rhs {
        rhs.add_term(&t.subst(&id.n, &q_int(n))?)?;
    }
    acc.add_sum(&rhs.negate());
    Ok(acc)
}

/// Result of the specialized recurrence search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeadingCheck {
    /// Largest nonnegative integer root of the leading coefficient.
    pub n0: Option<i64>,
    pub order: usize,
    pub specialization: Vec<(String, BigRational)>,
}

fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let mut num = 0i64;
    while num == 0 {
        num = rng.gen_range(-20i64..=20);
    }
    let den = rng.gen_range(1i64..=20);
    BigRational::new(num.into(), den.into())
}

/// Whether specialization turned a parameter-dependent factorial argument
/// into an integral one, creating spurious zeros or poles.
fn degenerates(f: &TermExpression, spec: &[(String, BigRational)]) -> bool {
    f.gamma_factorials().into_iter().any(|(arg, _)| {
        if !spec.iter().any(|(p, _)| arg.involves(p)) {
            return false;
        }
        let s = spec.iter().fold(arg.clone(), |acc, (p, v)| acc.subst(p, v));
        s.is_integral()
    })
}

/// Specializes every parameter to a small random rational, finds a
/// recurrence for the specialized summand and returns the largest
/// nonnegative integer root of its leading coefficient. `Ok(None)` when no
/// usable specialization yields a recurrence.
pub fn leading_coeff_check(nid: &NormalizedIdentity, seed: u64, max_order: usize) -> Result<Option<LeadingCheck>, Error> {
    let f = nid.telescoped_summand();
    let vars = f.vars().clone();
    let ni = vars.index_of(&nid.identity.n).expect("n is a variable");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6c65_6164);
    for _ in 0..=5 {
        let spec: Vec<(String, BigRational)> =
            nid.identity.params.names().iter().map(|p| (p.clone(), random_rational(&mut rng))).collect();
        if degenerates(&f, &spec) {
            continue;
        }
        let mut g = f.clone();
        for (p, v) in &spec {
            g = g.subst(p, v)?;
        }
        if g.is_zero() {
            continue;
        }
        let Some(t) = creative_telescope(&g, &nid.identity.k, &nid.identity.n, max_order)? else {
            continue;
        };
        let lead = UniPoly::from_multi(t.recurrence.leading(), ni).expect("only n remains after specialization");
        let n0 = lead.nonneg_integer_roots().last().and_then(|r| r.to_i64());
        return Ok(Some(LeadingCheck {
            n0,
            order: t.recurrence.order(),
            specialization: spec,
        }));
    }
    Ok(None)
}

/// Exact checks `sum_k F(n, k) = RHS(n)` for `n = 0 ..= last`.
pub fn initial_conditions_check(id: &Identity, last: i64) -> Result<Vec<(i64, bool)>, Error> {
    (0..=last).map(|n| Ok((n, defect_at(id, n)?.is_zero()))).collect()
}

/// Last `n` whose value must be checked so that a recurrence of order `j`
/// with leading-coefficient roots at most `n0` propagates the identity.
/// For a normalized identity the recurrence acts on first differences,
/// which adds one more value.
pub fn last_initial_index(j: usize, n0: Option<i64>, differenced: bool) -> i64 {
    let j = j as i64;
    let m = match n0 {
        Some(r) => (j - 1).max(r + j),
        None => j - 1,
    };
    if differenced {
        m + 1
    } else {
        m.max(0)
    }
}

pub fn all_passed(checks: &[(i64, bool)]) -> bool {
    checks.iter().all(|c| c.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn initial_index_ranges() {
        assert_eq!(last_initial_index(2, None, false), 1);
        assert_eq!(last_initial_index(2, Some(3), false), 5);
        assert_eq!(last_initial_index(1, None, true), 1);
        assert_eq!(last_initial_index(1, Some(0), true), 2);
    }

    #[test]
    fn random_values_are_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let r = random_rational(&mut rng);
            assert!(!r.is_zero());
            assert!(r.numer().magnitude() <= &20u32.into() && r.denom() <= &20.into());
        }
    }
}
