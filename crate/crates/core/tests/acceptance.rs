//! Acceptance run: one PASS/FAIL line per criterion, with its runtime limit.
//! Runs without the libtest harness so the lines are always printed.

use std::time::{Duration, Instant};

use bs3_lambda::classifier::{compare, kp_scan, theorem_reproduction, KpScanMode, TheoremConfig};
use bs3_lambda::genus::{primes_between, rector_pair, GenusPoint, KoModel, ALLOWED_RESIDUES, DEFAULT_P_MAX};
use bs3_lambda::lambda::{
    adams, check_adams_properties, newton_adams_formula, AdamsConfig, BinomialZ, CheckStatus, LambdaRing,
    LineSumRing, PerturbedLambda2, Report,
};
use bs3_lambda::poly::{Monomial, MultiPoly};
use bs3_lambda::symfun::{elementary, splitting_oracle_check, universal_compose, universal_product};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

struct Outcome {
    ok: bool,
    note: String,
}

fn pass(note: impl Into<String>) -> Outcome {
    Outcome { ok: true, note: note.into() }
}

fn fail(note: impl Into<String>) -> Outcome {
    Outcome { ok: false, note: note.into() }
}

fn criterion_1() -> Outcome {
    for n in 1..=5 {
        let up = universal_product(n, n, n).unwrap();
        for (k, l) in [(n, n), (n + 1, n + 2)] {
            if !splitting_oracle_check(&up, k, l) {
                return fail(format!("P_{n} disagrees with the subset oracle at (k,l)=({k},{l})"));
            }
        }
    }
    let mut pairs = 0;
    for n in 1..=6 {
        for m in 1..=6 / n {
            let up = universal_compose(n, m, n * m).unwrap();
            for k in [n * m, n * m + 1] {
                if !splitting_oracle_check(&up, k, 0) {
                    return fail(format!("P_{{{n},{m}}} disagrees with the subset oracle at k={k}"));
                }
            }
            pairs += 1;
        }
    }
    pass(format!("P_1..P_5 at two sizes each, {pairs} composition pairs with nm <= 6"))
}

fn criterion_2() -> Outcome {
    for k in 1..=8usize {
        let e: Vec<MultiPoly> = (1..=k).map(|i| elementary(k, i)).collect();
        let got = newton_adams_formula(k).expr.substitute(&e, &[]);
        let mut power_sum = MultiPoly::zero();
        for i in 0..k {
            power_sum.add_term(Monomial::var_pow(i, k as u32), BigInt::from(1));
        }
        if got != power_sum {
            return fail(format!("psi^{k} on {k} line elements is not the power sum"));
        }
    }
    let z = BinomialZ::default();
    for k in 1..=10 {
        for n in -20i64..=20 {
            if adams(&z, k, &BigInt::from(n)) != BigInt::from(n) {
                return fail(format!("psi^{k}({n}) != {n} in the binomial ring"));
            }
        }
    }
    pass("psi^k = p_k for k <= 8; psi^k(n) = n for k <= 10, |n| <= 20")
}

fn adams_report<R: LambdaRing>(ring: &R, samples: usize, seed: u64) -> Report {
    let cfg = AdamsConfig {
        samples,
        kl_max: 8,
        ..AdamsConfig::default()
    };
    check_adams_properties(ring, &cfg, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn criterion_3() -> Outcome {
    let required: Vec<String> = std::iter::once("psi_k_psi_l_is_psi_kl".to_string())
        .chain([2, 3, 5, 7].iter().map(|p| format!("frobenius_mod_{p}")))
        .collect();
    let reports = [
        adams_report(&BinomialZ::default(), 100, 1),
        adams_report(&LineSumRing::new(4, 6), 100, 2),
    ];
    for report in &reports {
        for name in &required {
            match report.outcome(name) {
                Some(o) if o.status == CheckStatus::Pass && o.cases >= 100 => {}
                Some(o) => return fail(format!("{}: {name} is {:?} after {} cases", report.instance, o.status, o.cases)),
                None => return fail(format!("{}: {name} was not run", report.instance)),
            }
        }
        if !report.passed() {
            return fail(format!("{}: other Adams properties failed", report.instance));
        }
    }
    let controls = [
        adams_report(&PerturbedLambda2(BinomialZ::default()), 20, 3),
        adams_report(&PerturbedLambda2(LineSumRing::new(3, 4)), 20, 4),
    ];
    for c in &controls {
        if c.passed() {
            return fail(format!("negative control {} passed", c.instance));
        }
    }
    pass("both instances pass with >= 100 cases per property; both perturbed controls fail")
}

fn criterion_4() -> Outcome {
    let rows = [(1i64, (1i8, 1i8)), (5, (1, -1)), (7, (-1, 1)), (11, (-1, -1))];
    for (a, pair) in rows {
        for rep in [a, -a, 24 - a, a + 24] {
            if rector_pair(&BigInt::from(rep)).ok() != Some(pair) {
                return fail(format!("a = {rep} does not give {pair:?}"));
            }
        }
    }
    let rejected = (0..24i64).filter(|a| rector_pair(&BigInt::from(*a)).is_err()).count();
    if rejected != 16 {
        return fail(format!("{rejected} residues rejected, expected 16"));
    }
    pass("4 rows reproduced; 16 forbidden residues rejected")
}

fn criterion_5() -> Outcome {
    for &a in &ALLOWED_RESIDUES {
        let model = KoModel::new(a).unwrap();
        for m in -5i64..=5 {
            let shifted = model.representative_shift(m).unwrap();
            if shifted.a_residue() != a || shifted.a() != &BigInt::from(a + 24 * m) {
                return fail(format!("shift of a = {a} by m = {m} gives {}", shifted.a()));
            }
        }
        if model.orientation_flip().unwrap().a() != &BigInt::from(-a) {
            return fail(format!("flip of a = {a} is not -a"));
        }
    }
    pass("a' = a + 24m for all 8 residues, m in [-5, 5]; flips give -a")
}

fn criterion_6() -> Outcome {
    let report = theorem_reproduction(&TheoremConfig {
        ko_bound: 100,
        primes: vec![],
        ..TheoremConfig::default()
    })
    .unwrap();
    if report.ko_table.len() != 64 {
        return fail(format!("table has {} rows", report.ko_table.len()));
    }
    let mut witnesses = 0;
    for row in &report.ko_table {
        let v = &row.verdict;
        let expected = ((&v.a_x - &v.a_y) % 24u32 == BigInt::from(0)) || ((&v.a_x + &v.a_y) % 24u32 == BigInt::from(0));
        if expected != v.intertwinable || expected != row.expected {
            return fail(format!("({}, {}) marked {}", v.a_x, v.a_y, v.intertwinable));
        }
        if expected {
            if v.witness.is_none() {
                return fail(format!("({}, {}) has no witness", v.a_x, v.a_y));
            }
            witnesses += 1;
        } else {
            match &v.certificate {
                Some(c) if c.sigma2_prime_bound == 100 && c.candidates == 402 => {}
                _ => return fail(format!("({}, {}) lacks a |sigma2'| <= 100 certificate", v.a_x, v.a_y)),
            }
        }
    }
    pass(format!("{witnesses} witnessed pairs, {} exhausted pairs", 64 - witnesses))
}

fn criterion_7() -> Outcome {
    let mut scanned = 0u64;
    for (primes, mode) in [(vec![3u64, 5], KpScanMode::Exhaustive), (vec![7, 11, 13], KpScanMode::Bounded(3))] {
        for p in primes {
            for s_x in [1i8, -1] {
                for s_y in [1i8, -1] {
                    let v = kp_scan(p, s_x, s_y, mode).unwrap();
                    scanned += v.scan.candidates;
                    if v.intertwinable != (s_x == s_y) {
                        return fail(format!("p = {p}, signs ({s_x}, {s_y}): intertwinable = {}", v.intertwinable));
                    }
                }
            }
        }
    }
    pass(format!("exhaustive at p = 3, 5 and bounded at p = 7, 11, 13; {scanned} candidates"))
}

fn criterion_8() -> Outcome {
    let bs3 = GenusPoint::classifying_space(DEFAULT_P_MAX);
    let same = compare(&bs3, &bs3).unwrap();
    match &same.ko_witness {
        Some(w) if same.equivalent && w.eps == 1 && w.sigma2_prime == BigInt::from(0) => {}
        _ => return fail("BS^3 is not equivalent to itself via the identity"),
    }
    let primes = primes_between(5, DEFAULT_P_MAX);
    for &p in &primes {
        let flipped = bs3.with_flipped_sign(p).unwrap();
        let c = compare(&bs3, &flipped).unwrap();
        let label = format!("(X/{p})");
        if c.equivalent || c.distinguished_by.as_deref() != Some(label.as_str()) {
            return fail(format!("flip at {p}: {:?}", c.distinguished_by));
        }
    }
    // (X/2) and (X/3) live in a(X): flipping one of them changes the class.
    let signs = bs3.odd_signs().clone();
    for (a, label) in [(7, "(X/2)"), (5, "(X/3)")] {
        let other = GenusPoint::canonicalize(a, &signs, DEFAULT_P_MAX).unwrap();
        let c = compare(&bs3, &other).unwrap();
        if c.equivalent || c.distinguished_by.as_deref() != Some(label) {
            return fail(format!("flip of {label}: {:?}", c.distinguished_by));
        }
    }
    pass(format!("identity witness on BS^3; {} single flips named correctly", primes.len() + 2))
}

type Criterion = (&'static str, fn() -> Outcome, u64);

fn main() {
    let criteria: [Criterion; 8] = [
        ("universal polynomials match the splitting oracle", criterion_1, 60),
        ("Newton formula and binomial Adams operations", criterion_2, 10),
        ("Adams composition and Frobenius on both instances", criterion_3, 30),
        ("Rector pair table", criterion_4, 1),
        ("mod-24 well-definedness of a(X)", criterion_5, 1),
        ("KO residue table", criterion_6, 5),
        ("K-side sign scans", criterion_7, 120),
        ("compare on BS^3 and single flips", criterion_8, 1),
    ];
    let mut failures = 0;
    for (i, (title, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*limit);
        let ok = outcome.ok && in_time;
        if !ok {
            failures += 1;
        }
        println!(
            "criterion {}: {} {title} [{:.2}s, limit {limit}s]{} -- {}",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            if in_time { "" } else { " over time" },
            outcome.note
        );
    }
    println!("acceptance: {} of 8 criteria passed", 8 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
