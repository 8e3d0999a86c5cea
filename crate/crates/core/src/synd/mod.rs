//! Proofs of definite-sum identities without solving for the recurrence.
//!
//! The identity is normalized by its right-hand side and differenced in
//! `n`, which lowers the needed recurrence order by one. Existence of a
//! telescoper of order `J` is then decided by the vanishing of the
//! determinant of its coefficient system, tested on an integer grid whose
//! size follows from a priori degree bounds. A specialized run bounds the
//! integer roots of the leading coefficient, and exact initial values close
//! the induction.

pub mod checks;
pub mod grid;

pub use checks::{initial_conditions_check, last_initial_index, leading_coeff_check, LeadingCheck};
pub use grid::{
    rank_deficiency_test, sample_indices, system_test, vanishing_test, DegreeBounds, Grid, GridRunner, SequentialRunner,
    Vanishing,
};

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::exactalg::matrix::{rank_rational, PolyMatrix};
use crate::exactalg::ratfun::RationalFunction;
use crate::gosper::gosper_antidifference;
use crate::hyperterm::quotient::shift_quotient;
use crate::hyperterm::{LinearForm, ParamSet, TermExpression};
use crate::telescope::{assemble_gz_system, verify_certificate, AnsatzShape, Recurrence, DEFAULT_MAX_ORDER};

/// `sum_{k = lower}^{upper} summand = rhs`, where `rhs` is a sum of terms
/// (empty for zero) and a missing limit is unbounded.
#[derive(Clone, Debug)]
pub struct Identity {
    pub summand: TermExpression,
    pub rhs: Vec<TermExpression>,
    pub k: String,
    pub n: String,
    pub lower: Option<LinearForm>,
    pub upper: Option<LinearForm>,
    pub params: ParamSet,
}

/// The identity divided by its right-hand side, with the first difference
/// in `n` as a multiplier: `ftil = fhat * (rho_n - 1)`.
#[derive(Clone, Debug)]
pub struct NormalizedIdentity {
    pub identity: Identity,
    pub fhat: TermExpression,
    pub multiplier: RationalFunction,
    /// `RHS(n+1) / RHS(n)`; one when the right-hand side is zero.
    pub rhs_ratio: RationalFunction,
    pub rhs_is_zero: bool,
}

impl NormalizedIdentity {
    pub fn ftil(&self) -> TermExpression {
        self.fhat.mul_ratfun(&self.multiplier)
    }

    /// The summand whose recurrence is sought: `ftil`, or `F` itself when
    /// the right-hand side is zero.
    pub fn telescoped_summand(&self) -> TermExpression {
        if self.rhs_is_zero {
            self.fhat.clone()
        } else {
            self.ftil()
        }
    }
}

/// Divides by a hypergeometric right-hand side and forms the difference
/// multiplier; a zero right-hand side passes `F` through.
pub fn normalize_and_delta(id: &Identity) -> Result<NormalizedIdentity, Error> {
    let vars = id.summand.vars();
    let rhs: Vec<&TermExpression> = id.rhs.iter().filter(|t| !t.is_zero()).collect();
    if rhs.is_empty() {
        return Ok(NormalizedIdentity {
            identity: id.clone(),
            fhat: id.summand.clone(),
            multiplier: RationalFunction::zero(vars),
            rhs_ratio: RationalFunction::one(vars),
            rhs_is_zero: true,
        });
    }
    let [b] = rhs.as_slice() else {
        return Err(Error::NotHypergeometric("right-hand side is a sum of several terms".into()));
    };
    if b.uses(&id.k) {
        return Err(Error::NotHypergeometric(alloc::format!("right-hand side depends on {}", id.k)));
    }
    let rhs_ratio = shift_quotient(b, &id.n).map_err(|e| Error::NotHypergeometric(alloc::format!("{e}")))?;
    let fhat = id.summand.div(b)?;
    let rho = shift_quotient(&fhat, &id.n)?;
    let multiplier = &rho - &RationalFunction::one(vars);
    Ok(NormalizedIdentity {
        identity: id.clone(),
        fhat,
        multiplier,
        rhs_ratio,
        rhs_is_zero: false,
    })
}

/// Coefficient system whose nontrivial kernel is a telescoper of order `j`
/// for the telescoped summand, with dependent `b`-columns removed (a
/// kernel vector then always has a nonzero recurrence part). `None` when
/// the degree bound excludes this order.
pub fn assemble_synd_matrix(nid: &NormalizedIdentity, j: usize) -> Result<Option<(PolyMatrix, usize)>, Error> {
    let id = &nid.identity;
    let shape = if nid.rhs_is_zero {
        AnsatzShape::Plain
    } else {
        AnsatzShape::Differenced
    };
    let Some(sys) = assemble_gz_system(&nid.fhat, &id.k, &id.n, j, shape)? else {
        return Ok(None);
    };
    let m = sys.matrix;
    let na = j + 1;
    let b_cols: Vec<usize> = (na..m.cols()).collect();
    let b_block = m.select_cols(&b_cols);
    let mut rng = ChaCha8Rng::seed_from_u64(0x6262_6c6b);
    let point: Vec<BigRational> = (0..m.vars().len())
        .map(|_| BigRational::from_integer(BigInt::from(rng.gen_range(-(1i64 << 40)..(1i64 << 40)))))
        .collect();
    let evaluated = b_block.eval(&point);
    let transposed: Vec<Vec<BigRational>> = (0..b_cols.len())
        .map(|c| evaluated.iter().map(|row| row[c].clone()).collect())
        .collect();
    let (_, keep) = rank_rational(&transposed);
    let mut cols: Vec<usize> = (0..na).collect();
    cols.extend(keep.iter().map(|&c| na + c));
    Ok(Some((m.select_cols(&cols).without_zero_rows(), sys.ansatz.degree)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    Rigorous,
    SemiRigorous,
    Refuted,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Rigorous => "rigorous",
            Verdict::SemiRigorous => "semi-rigorous",
            Verdict::Refuted => "refuted",
            Verdict::Inconclusive => "inconclusive",
        }
    }

    pub fn proved(&self) -> bool {
        matches!(self, Verdict::Rigorous | Verdict::SemiRigorous)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which route produced the verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Direct antidifference of the telescoped summand (a WZ pair).
    Gosper,
    /// Grid vanishing of the telescoper system.
    Determinant,
    /// Exact initial check before any recurrence was sought.
    InitialCheck,
    None,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Gosper => "gosper",
            Method::Determinant => "determinant",
            Method::InitialCheck => "initial-check",
            Method::None => "none",
        }
    }
}

/// Shape of the system accepted by the grid test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SystemShape {
    Square,
    /// More equations than unknowns; decided by a rank test on the grid.
    Tall,
    /// Fewer equations than unknowns; a kernel vector exists outright.
    Wide,
}

impl SystemShape {
    pub fn as_str(&self) -> &'static str {
        match self {
            SystemShape::Square => "square",
            SystemShape::Tall => "tall",
            SystemShape::Wide => "wide",
        }
    }
}

/// Grid outcome for one rejected order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Attempt {
    pub order: usize,
    pub degree: usize,
    pub rows: usize,
    pub cols: usize,
    pub grid_total: u64,
    pub grid_tested: u64,
    pub witness: Option<Vec<(String, i64)>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofReport {
    pub verdict: Verdict,
    pub method: Method,
    pub certainty: BigRational,
    pub seed: u64,
    pub order: Option<usize>,
    pub degree: Option<usize>,
    pub shape: Option<SystemShape>,
    pub rows: usize,
    pub cols: usize,
    pub degree_bounds: DegreeBounds,
    pub grid_total: u64,
    pub grid_tested: u64,
    pub nonzero_point: Option<Vec<(String, i64)>>,
    pub leading_root_bound: Option<i64>,
    pub specialization: Vec<(String, BigRational)>,
    pub initial_checks: Vec<(i64, bool)>,
    /// Certificate of `recurrence` relative to the summand (Gosper route).
    pub certificate: Option<RationalFunction>,
    pub recurrence: Option<Recurrence>,
    pub attempts: Vec<Attempt>,
    pub notes: Vec<String>,
    /// Microseconds per stage, filled only when a clock is supplied.
    pub timings: Vec<(String, u64)>,
}

impl ProofReport {
    fn new(certainty: &BigRational, seed: u64) -> Self {
        ProofReport {
            verdict: Verdict::Inconclusive,
            method: Method::None,
            certainty: certainty.clone(),
            seed,
            order: None,
            degree: None,
            shape: None,
            rows: 0,
            cols: 0,
            degree_bounds: Vec::new(),
            grid_total: 0,
            grid_tested: 0,
            nonzero_point: None,
            leading_root_bound: None,
            specialization: Vec::new(),
            initial_checks: Vec::new(),
            certificate: None,
            recurrence: None,
            attempts: Vec::new(),
            notes: Vec::new(),
            timings: Vec::new(),
        }
    }
}

/// Monotone microsecond clock; lets a hosted caller time the stages.
pub trait Clock {
    fn now_micros(&self) -> u64;
}

/// Clock that records nothing.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoClock;

impl Clock for NoClock {
    fn now_micros(&self) -> u64 {
        0
    }
}

#[derive(Clone, Debug)]
pub struct ProveOptions {
    pub certainty: BigRational,
    pub seed: u64,
    pub max_order: usize,
    /// Try a direct antidifference before the grid test.
    pub fast_path: bool,
}

impl Default for ProveOptions {
    fn default() -> Self {
        ProveOptions {
            certainty: BigRational::one(),
            seed: 0,
            max_order: DEFAULT_MAX_ORDER,
            fast_path: true,
        }
    }
}

struct Stopwatch<'a> {
    clock: &'a dyn Clock,
    start: u64,
}

impl Stopwatch<'_> {
    fn lap(&mut self, report: &mut ProofReport, stage: &str) {
        let now = self.clock.now_micros();
        report.timings.push((String::from(stage), now.saturating_sub(self.start)));
        self.start = now;
    }
}

/// Full proof attempt. Errors from malformed input propagate; failures of
/// the method itself yield an inconclusive report.
pub fn prove(id: &Identity, opts: &ProveOptions, runner: &dyn GridRunner, clock: &dyn Clock) -> Result<ProofReport, Error> {
    let mut report = ProofReport::new(&opts.certainty, opts.seed);
    let mut sw = Stopwatch {
        clock,
        start: clock.now_micros(),
    };
    sample_indices(1, &opts.certainty, opts.seed)?;

    // An exact value at n = 0 can refute before any structure is required.
    let first = checks::defect_at(id, 0)?.is_zero();
    report.initial_checks.push((0, first));
    if !first {
        report.verdict = Verdict::Refuted;
        report.method = Method::InitialCheck;
        sw.lap(&mut report, "initial");
        return Ok(report);
    }

    let nid = match normalize_and_delta(id) {
        Ok(n) => n,
        Err(e @ Error::NotHypergeometric(_)) => {
            report.notes.push(alloc::format!("{e}"));
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    sw.lap(&mut report, "normalize");

    if opts.fast_path {
        let proved = gosper_route(&nid, &mut report)?;
        sw.lap(&mut report, "gosper");
        if proved {
            return Ok(report);
        }
    }

    for j in 1..=opts.max_order {
        let Some((m, kdeg)) = assemble_synd_matrix(&nid, j)? else {
            continue;
        };
        let v = system_test(&m, &opts.certainty, opts.seed, runner)?;
        if !v.passed {
            report.attempts.push(Attempt {
                order: j,
                degree: kdeg,
                rows: m.rows(),
                cols: m.cols(),
                grid_total: v.grid_total,
                grid_tested: v.grid_tested,
                witness: v.witness,
            });
            continue;
        }
        sw.lap(&mut report, "grid");
        report.order = Some(j);
        report.degree = Some(kdeg);
        report.rows = m.rows();
        report.cols = m.cols();
        report.shape = Some(match m.rows().cmp(&m.cols()) {
            core::cmp::Ordering::Equal => SystemShape::Square,
            core::cmp::Ordering::Greater => SystemShape::Tall,
            core::cmp::Ordering::Less => SystemShape::Wide,
        });
        if report.shape != Some(SystemShape::Square) {
            report.notes.push(String::from("non-square system decided by rank deficiency"));
        }
        report.degree_bounds = v.bounds;
        report.grid_total = v.grid_total;
        report.grid_tested = v.grid_tested;

        let Some(lead) = leading_coeff_check(&nid, opts.seed, opts.max_order)? else {
            report.notes.push(String::from("no recurrence for any parameter specialization"));
            sw.lap(&mut report, "leading");
            return Ok(report);
        };
        sw.lap(&mut report, "leading");
        report.leading_root_bound = lead.n0;
        report.specialization = lead.specialization;
        let order = j.max(lead.order);
        let last = last_initial_index(order, lead.n0, !nid.rhs_is_zero);
        report.initial_checks = initial_conditions_check(id, last)?;
        sw.lap(&mut report, "initial");
        report.method = Method::Determinant;
        report.verdict = if !checks::all_passed(&report.initial_checks) {
            Verdict::Refuted
        } else if report.grid_tested == report.grid_total {
            Verdict::Rigorous
        } else {
            Verdict::SemiRigorous
        };
        return Ok(report);
    }
    if let Some(a) = report.attempts.last() {
        report.nonzero_point = a.witness.clone();
    }
    report.notes.push(alloc::format!("no telescoper up to order {}", opts.max_order));
    Ok(report)
}

/// WZ fast path: an antidifference of the telescoped summand proves the
/// identity outright once the value at `n = 0` is known.
fn gosper_route(nid: &NormalizedIdentity, report: &mut ProofReport) -> Result<bool, Error> {
    let id = &nid.identity;
    let g = nid.telescoped_summand();
    if g.is_zero() {
        return Ok(false);
    }
    let cert = match gosper_antidifference(&g, &id.k) {
        Ok(Some(c)) => c.ratio,
        Ok(None) => return Ok(false),
        Err(Error::Precondition(msg)) => {
            report.notes.push(msg);
            return Ok(false);
        }
        Err(e) => return Err(e),
    };
    // Relative to `F` itself: with `RHS(n+1)/RHS(n) = u/w`, the pair
    // `(-u, w)` annihilates the sum and `u R (rho_n - 1)` certifies it.
    let vars = g.vars();
    let (rec, wz) = if nid.rhs_is_zero {
        (Recurrence::new(alloc::vec![crate::exactalg::MultiPoly::one(vars)]), cert)
    } else {
        let u = nid.rhs_ratio.numer().clone();
        let w = nid.rhs_ratio.denom().clone();
        let wz = &(&cert * &nid.multiplier) * &RationalFunction::from_poly(u.clone());
        (Recurrence::new(alloc::vec![-&u, w]), wz)
    };
    let Some(rec) = rec else {
        return Ok(false);
    };
    if !verify_certificate(&id.summand, &id.k, &id.n, &rec, &wz) {
        report.notes.push(String::from("antidifference failed verification"));
        return Ok(false);
    }
    report.verdict = Verdict::Rigorous;
    report.method = Method::Gosper;
    report.order = Some(0);
    report.certificate = Some(wz);
    report.recurrence = Some(rec);
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::poly::{q_int, Vars};
    use crate::hyperterm::parse::{parse_linear, parse_sum, parse_term};

    pub(crate) fn identity(summand: &str, rhs: &str, lower: &str, upper: &str, params: &[&str]) -> Identity {
        let ps = ParamSet::new(params).unwrap();
        let vars: Vars = ps.vars("k", "n").unwrap();
        Identity {
            summand: parse_term(summand, &vars).unwrap(),
            rhs: parse_sum(rhs, &vars).unwrap(),
            k: "k".into(),
            n: "n".into(),
            lower: Some(parse_linear(lower, &vars).unwrap()),
            upper: Some(parse_linear(upper, &vars).unwrap()),
            params: ps,
        }
    }

    fn run(id: &Identity, certainty: BigRational) -> ProofReport {
        let opts = ProveOptions {
            certainty,
            ..ProveOptions::default()
        };
        prove(id, &opts, &SequentialRunner, &NoClock).unwrap()
    }

    #[test]
    fn multiplier_of_row_sum() {
        let id = identity("binomial(n,k)", "2^n", "0", "n", &[]);
        let nid = normalize_and_delta(&id).unwrap();
        let vars = nid.fhat.vars().clone();
        let expect = crate::hyperterm::parse::parse_ratfun("(2*k-n-1)/(2*(n+1-k))", &vars).unwrap();
        assert_eq!(nid.multiplier, expect);
    }

    #[test]
    fn zero_rhs_passes_through() {
        let id = identity("(-1)^k*binomial(2*n+1,k)", "0", "0", "2*n+1", &[]);
        let nid = normalize_and_delta(&id).unwrap();
        assert!(nid.rhs_is_zero);
        assert_eq!(nid.fhat, id.summand);
    }

    #[test]
    fn non_hypergeometric_rhs_rejected() {
        let id = identity("binomial(n,k)", "2^n+1", "0", "n", &[]);
        assert!(matches!(normalize_and_delta(&id), Err(Error::NotHypergeometric(_))));
    }

    #[test]
    fn false_identity_refuted_at_zero() {
        let id = identity("binomial(n,k)", "2^n+1", "0", "n", &[]);
        let r = run(&id, q_int(1));
        assert_eq!(r.verdict, Verdict::Refuted);
        assert_eq!(r.initial_checks, alloc::vec![(0, false)]);
    }

    #[test]
    fn chu_vandermonde_rigorous() {
        let id = identity("binomial(a,k)*binomial(n,k)", "binomial(a+n,a)", "0", "n", &["a"]);
        let r = run(&id, q_int(1));
        assert_eq!(r.verdict, Verdict::Rigorous);
        assert_eq!(r.method, Method::Gosper);
        let (rec, cert) = (r.recurrence.unwrap(), r.certificate.unwrap());
        assert!(verify_certificate(&id.summand, "k", "n", &rec, &cert));
    }

    #[test]
    fn determinant_route_without_fast_path() {
        let id = identity("binomial(a,k)*binomial(n,k)", "binomial(a+n,a)", "0", "n", &["a"]);
        let opts = ProveOptions {
            fast_path: false,
            ..ProveOptions::default()
        };
        let r = prove(&id, &opts, &SequentialRunner, &NoClock).unwrap();
        assert_eq!((r.verdict, r.method), (Verdict::Rigorous, Method::Determinant));
        assert!(r.order.unwrap() <= 2);
    }

    #[test]
    fn central_binomial_rigorous() {
        let id = identity("binomial(n,k)^2", "binomial(2*n,n)", "0", "n", &[]);
        let r = run(&id, q_int(1));
        assert_eq!(r.verdict, Verdict::Rigorous);
    }

    #[test]
    fn order_zero_summand_has_trivial_kernel() {
        let id = identity("binomial(n,k)", "0", "0", "n", &[]);
        let nid = normalize_and_delta(&id).unwrap();
        let sys = assemble_gz_system(&nid.fhat, "k", "n", 0, AnsatzShape::Plain).unwrap();
        if let Some(sys) = sys {
            assert!(crate::exactalg::solve_nullspace(&sys.matrix).is_empty());
        }
    }
}
