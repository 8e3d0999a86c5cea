//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any
//! fails. Runs without the test harness so the lines print in order.

use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use ctproof::{prove_file, IdentityFile, RunConfig};
use ctproof_core::exactalg::{permanent_degree_bound, q_int, Monomial, MultiPoly, PolyMatrix, RationalFunction, Vars};
use ctproof_core::hyperterm::parse_term;
use ctproof_core::synd::{vanishing_test, Method, SequentialRunner, Verdict};
use ctproof_core::telescope::{creative_telescope, verify_certificate, Recurrence};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Check = Box<dyn Fn() -> Outcome>;

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)
}

fn config(certainty: BigRational, fast_path: bool) -> RunConfig {
    RunConfig {
        certainty,
        fast_path,
        ..RunConfig::default()
    }
}

fn secs(d: Duration) -> String {
    format!("{:.1} s", d.as_secs_f64())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Proves a corpus file and checks verdict and time limit.
fn prove_within(name: &str, certainty: BigRational, fast_path: bool, want: Verdict, limit: Duration) -> Outcome {
    let t = Instant::now();
    let run = prove_file(&corpus(name), &config(certainty, fast_path)).map_err(|e| e.to_string())?;
    let took = t.elapsed();
    let r = &run.report;
    ensure(r.verdict == want, || format!("verdict {} ({})", r.verdict, r.method.as_str()))?;
    ensure(took < limit, || format!("took {} (limit {})", secs(took), secs(limit)))?;
    Ok(format!(
        "{} via {}, J = {}, grid {}/{}, {}",
        r.verdict,
        r.method.as_str(),
        r.order.map_or("-".into(), |j| j.to_string()),
        r.grid_tested,
        r.grid_total,
        secs(took)
    ))
}

fn chu_vandermonde() -> Outcome {
    let t = Instant::now();
    let mut parts = Vec::new();
    for fast in [true, false] {
        let run = prove_file(&corpus("chu-vandermonde.identity"), &config(BigRational::one(), fast)).map_err(|e| e.to_string())?;
        let r = &run.report;
        ensure(r.verdict == Verdict::Rigorous, || format!("verdict {} with fast path {fast}", r.verdict))?;
        let j = r.order.ok_or("no order reported")?;
        ensure(j <= 2, || format!("J = {j}"))?;
        parts.push(format!("{} at J = {j}", r.method.as_str()));
    }
    let took = t.elapsed();
    ensure(took < Duration::from_secs(60), || format!("took {}", secs(took)))?;
    Ok(format!("rigorous by {}, {}", parts.join(" and "), secs(took)))
}

fn pascal(rows: usize) -> Vec<Vec<BigInt>> {
    let mut t: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
    for n in 1..rows {
        let prev = &t[n - 1];
        let mut row = vec![BigInt::one(); n + 1];
        for k in 1..n {
            row[k] = &prev[k - 1] + &prev[k];
        }
        t.push(row);
    }
    t
}

/// Checks the telescoper of `summand` against `expected` (up to a factor)
/// and against exact partial sums for `n = 0..20`.
fn known_recurrence(summand: &str, expected: &[&str], sums: &[BigInt]) -> Result<(), String> {
    let vars = Vars::new(&["k", "n"]);
    let f = parse_term(summand, &vars).map_err(|e| e.to_string())?;
    let t = creative_telescope(&f, "k", "n", 4)
        .map_err(|e| e.to_string())?
        .ok_or_else(|| format!("{summand}: no telescoper"))?;
    let rec = &t.recurrence;
    ensure(rec.order() + 1 == expected.len(), || format!("{summand}: order {}", rec.order()))?;
    let want: Vec<MultiPoly> = expected
        .iter()
        .map(|s| ctproof_core::hyperterm::parse_ratfun(s, &vars).map(|r| r.numer().clone()))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    // a_i * w_j == a_j * w_i for all i, j means proportional.
    for i in 0..want.len() {
        for j in 0..want.len() {
            ensure(&rec.coeffs()[i] * &want[j] == &rec.coeffs()[j] * &want[i], || {
                format!("{summand}: got {}, want multiple of {}", ctproof_core::telescope::render_coeffs(rec), expected.join(", "))
            })?;
        }
    }
    for n in 0..=20usize {
        let point = [q_int(0), q_int(n as i64)];
        let window: Vec<BigRational> = sums[n..=n + rec.order()].iter().map(|s| BigRational::from_integer(s.clone())).collect();
        ensure(rec.apply(&point, &window).is_zero(), || format!("{summand}: partial sums fail at n = {n}"))?;
    }
    Ok(())
}

fn known_recurrences() -> Outcome {
    let t = pascal(23);
    let s1: Vec<BigInt> = t.iter().map(|row| row.iter().sum()).collect();
    let s2: Vec<BigInt> = t.iter().map(|row| row.iter().map(|c| c * c).sum()).collect();
    known_recurrence("binomial(n,k)", &["-2", "1"], &s1)?;
    known_recurrence("binomial(n,k)^2", &["-2*(2*n+1)", "n+1"], &s2)?;
    Ok("C(n,k) gives (-2, 1), C(n,k)^2 gives (-2(2n+1), n+1); partial sums n = 0..20 agree".into())
}

/// Small random change to a recurrence or certificate.
fn mutate(rng: &mut ChaCha8Rng, rec: &Recurrence, cert: &RationalFunction) -> (Recurrence, RationalFunction) {
    let vars = cert.vars().clone();
    let nz = |rng: &mut ChaCha8Rng| {
        let n = loop {
            let n = rng.gen_range(-3i64..=3);
            if n != 0 {
                break n;
            }
        };
        BigRational::new(BigInt::from(n), BigInt::from(rng.gen_range(1i64..=3)))
    };
    let bump = |rng: &mut ChaCha8Rng, p: &MultiPoly| {
        let v = rng.gen_range(0..vars.len());
        let mut e = vec![0u32; vars.len()];
        e[v] = rng.gen_range(0..=1);
        p + &MultiPoly::monomial(&vars, Monomial(e), nz(rng))
    };
    let mut coeffs = rec.coeffs().to_vec();
    let (num, den) = (cert.numer().clone(), cert.denom().clone());
    match rng.gen_range(0..5) {
        0 => (rec.clone(), cert + &RationalFunction::constant(&vars, nz(rng))),
        1 => {
            let c = nz(rng);
            let c = if c == BigRational::one() { q_int(2) } else { c };
            (rec.clone(), cert.scale(&c))
        }
        2 => (rec.clone(), RationalFunction::new(bump(rng, &num), den)),
        3 => (rec.clone(), RationalFunction::new(num, bump(rng, &den))),
        _ => {
            let i = rng.gen_range(0..coeffs.len());
            coeffs[i] = bump(rng, &coeffs[i]);
            match Recurrence::new(coeffs) {
                Some(r) => (r, cert.clone()),
                None => (rec.clone(), cert + &RationalFunction::one(&vars)),
            }
        }
    }
}

fn certificate_suite() -> Outcome {
    let mut emitted = Vec::new();
    for name in [
        "binomial-2n.identity",
        "central-binomial.identity",
        "chu-vandermonde.identity",
        "dixon.identity",
        "mrr-specialized.identity",
    ] {
        let file = IdentityFile::read(&corpus(name)).map_err(|e| e.to_string())?;
        let id = file.to_identity().map_err(|e| e.to_string())?;
        let run = ctproof::prove_identity(&file, &config(BigRational::one(), true)).map_err(|e| e.to_string())?;
        if let (Some(rec), Some(cert)) = (run.report.recurrence, run.report.certificate) {
            ensure(verify_certificate(&id.summand, &id.k, &id.n, &rec, &cert), || format!("{name}: emitted certificate fails"))?;
            emitted.push((name, id, rec, cert));
        }
    }
    let vars = Vars::new(&["k", "n"]);
    for s in ["binomial(n,k)", "binomial(n,k)^2", "binomial(n,k)*2^k"] {
        let f = parse_term(s, &vars).map_err(|e| e.to_string())?;
        if let Some(t) = creative_telescope(&f, "k", "n", 4).map_err(|e| e.to_string())? {
            ensure(verify_certificate(&f, "k", "n", &t.recurrence, &t.certificate), || format!("{s}: telescoper fails"))?;
        }
    }
    ensure(emitted.len() >= 3, || format!("only {} proofs emitted certificates", emitted.len()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(512);
    for i in 0..100 {
        let (name, id, rec, cert) = &emitted[i % emitted.len()];
        let (r2, c2) = mutate(&mut rng, rec, cert);
        ensure(!verify_certificate(&id.summand, &id.k, &id.n, &r2, &c2), || {
            format!("{name}: mutation {i} still verifies: [{}] / {c2}", ctproof_core::telescope::render_coeffs(&r2))
        })?;
    }
    Ok(format!("{} emitted certificates verify; 100 of 100 mutations rejected", emitted.len()))
}

fn random_poly(rng: &mut ChaCha8Rng, vars: &Vars, max_deg: u32, terms: usize) -> MultiPoly {
    let n = rng.gen_range(0..=terms);
    MultiPoly::from_terms(
        vars,
        (0..n).map(|_| {
            let e = vec![rng.gen_range(0..=max_deg), rng.gen_range(0..=max_deg)];
            (Monomial(e), q_int(rng.gen_range(-5..=5)))
        }),
    )
}

fn random_matrix(rng: &mut ChaCha8Rng, vars: &Vars, singular: bool) -> PolyMatrix {
    let mut e: Vec<MultiPoly> = (0..9).map(|_| random_poly(rng, vars, 2, 3)).collect();
    if singular {
        let a = random_poly(rng, vars, 1, 2);
        let b = random_poly(rng, vars, 1, 2);
        for c in 0..3 {
            e[6 + c] = &(&a * &e[c]) + &(&b * &e[3 + c]);
        }
    }
    PolyMatrix::new(vars, 3, 3, e)
}

/// Determinant by permutation expansion.
fn leibniz3(m: &PolyMatrix) -> MultiPoly {
    let perms: [([usize; 3], bool); 6] = [
        ([0, 1, 2], true),
        ([1, 2, 0], true),
        ([2, 0, 1], true),
        ([0, 2, 1], false),
        ([2, 1, 0], false),
        ([1, 0, 2], false),
    ];
    perms.iter().fold(MultiPoly::zero(m.vars()), |acc, (p, even)| {
        let t = &(m.get(0, p[0]) * m.get(1, p[1])) * m.get(2, p[2]);
        if *even {
            &acc + &t
        } else {
            &acc - &t
        }
    })
}

fn degree_bounds() -> Outcome {
    let vars = Vars::new(&["x", "y"]);
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    let mut tight = 0;
    for i in 0..100 {
        let m = random_matrix(&mut rng, &vars, false);
        let det = leibniz3(&m);
        for (v, name) in ["x", "y"].iter().enumerate() {
            let b = permanent_degree_bound(&m, name).map_err(|e| e.to_string())?;
            if let Some(d) = det.degree_in(v) {
                ensure(!b.structurally_zero && d <= b.degree, || format!("matrix {i}: deg_{name} {d} exceeds {b:?}"))?;
                tight += usize::from(d == b.degree);
            }
        }
    }
    Ok(format!("100 matrices, bound >= degree in x and y ({tight} of 200 tight)"))
}

fn grid_kernel() -> Outcome {
    let vars = Vars::new(&["x", "y"]);
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    let (mut singular, mut nonsingular) = (0, 0);
    while singular < 50 || nonsingular < 50 {
        let want_singular = singular < 50 && (nonsingular >= 50 || rng.gen_bool(0.5));
        let m = random_matrix(&mut rng, &vars, want_singular);
        let det_zero = leibniz3(&m).is_zero();
        if !want_singular && det_zero {
            continue;
        }
        ensure(det_zero == want_singular, || "constructed singular matrix has nonzero determinant".into())?;
        let v = vanishing_test(&m, &BigRational::one(), 0, &SequentialRunner).map_err(|e| e.to_string())?;
        ensure(v.passed == det_zero, || format!("vanishing test says {} for det zero = {det_zero}", v.passed))?;
        if det_zero {
            singular += 1;
        } else {
            nonsingular += 1;
        }
    }
    Ok("50 singular pass, 50 nonsingular rejected".into())
}

fn refutation() -> Outcome {
    let run = prove_file(&corpus("negative/false-identity.identity"), &RunConfig::default()).map_err(|e| e.to_string())?;
    let r = &run.report;
    ensure(r.verdict == Verdict::Refuted, || format!("verdict {}", r.verdict))?;
    ensure(r.method == Method::InitialCheck, || format!("method {}", r.method.as_str()))?;
    ensure(r.initial_checks.first() == Some(&(0, false)), || format!("checks {:?}", r.initial_checks))?;
    Ok("refuted by the exact check at n = 0".into())
}

fn determinism() -> Outcome {
    let dir = corpus("");
    let run = |jobs: &str| {
        Command::new(env!("CARGO_BIN_EXE_ctproof"))
            .args(["corpus", dir.to_str().unwrap(), "--certainty", "0.1", "--seed", "3", "--jobs", jobs, "--json", "-"])
            .output()
            .map_err(|e| e.to_string())
    };
    let a = run("1")?;
    let b = run("1")?;
    ensure(a.status.success(), || format!("exit {:?}", a.status.code()))?;
    ensure(a.stdout == b.stdout, || "reports differ between runs".into())?;
    let c = run("4")?;
    ensure(a.stdout == c.stdout, || "reports differ with --jobs 4".into())?;
    Ok(format!("{} bytes identical across two runs and --jobs 4", a.stdout.len()))
}

fn main() -> ExitCode {
    let tenth = BigRational::new(1.into(), 10.into());
    let criteria: Vec<(&str, Check)> = vec![
        ("chu-vandermonde rigorous at J <= 2 in < 60 s", Box::new(chu_vandermonde)),
        (
            "dixon rigorous in < 10 min",
            Box::new(|| prove_within("dixon.identity", BigRational::one(), true, Verdict::Rigorous, Duration::from_secs(600))),
        ),
        (
            "mrr at x = 1, z = 1/2 rigorous in < 120 s",
            Box::new(|| {
                prove_within("mrr-specialized.identity", BigRational::one(), true, Verdict::Rigorous, Duration::from_secs(120))
            }),
        ),
        (
            "mrr symbolic semi-rigorous at certainty 0.1 in < 30 min",
            Box::new(move || {
                prove_within("mrr.identity", tenth.clone(), true, Verdict::SemiRigorous, Duration::from_secs(1800))
            }),
        ),
        ("known binomial recurrences", Box::new(known_recurrences)),
        ("certificate suite", Box::new(certificate_suite)),
        ("degree-bound soundness", Box::new(degree_bounds)),
        ("grid-kernel soundness", Box::new(grid_kernel)),
        ("refutation of sum C(n,k) = 2^n + 1", Box::new(refutation)),
        ("byte-identical reports", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
