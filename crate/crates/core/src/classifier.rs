//! Deciding when two genus models are related by an Adams-compatible
//! filtered isomorphism, and checking that this agrees with equality of
//! Rector invariants.
//!
//! KO side: a ring map is fixed by `σ(x) = ε y + σ₂' ξ y²` below filtration
//! 9. It intertwines `ψ²` exactly when the `b_R y²` coefficients of
//! `σψ²(ξx)` and `ψ²σ(ξx)` agree.
//!
//! K side: after normalizing, `α(t) = t + c₂t² + ... + c_h t^h` with
//! `h = (p+1)/2` and `c_i ∈ Z/p²`; it intertwines `ψ^p` when
//! `αψ^p(t) = ψ^p α(t)` in the quotient.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::genus::{
    primes_between, GenusError, GenusPoint, KModel, KQuotient, KoAlgebra, KoModel, ALLOWED_RESIDUES,
};
use crate::poly::{Monomial, MultiPoly};

fn serialize_bigint<S: serde::Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match v.to_i64() {
        Some(small) => s.serialize_i64(small),
        None => s.serialize_str(&v.to_string()),
    }
}

/// Candidate filtered ring map `KO^*(X) → KO^*(Y)` below filtration 9.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoCandidateKO {
    pub eps: i8,
    #[serde(serialize_with = "serialize_bigint")]
    pub sigma2_prime: BigInt,
}

impl IsoCandidateKO {
    pub fn new(eps: i8, sigma2_prime: impl Into<BigInt>) -> Self {
        assert!(eps == 1 || eps == -1, "eps must be ±1");
        IsoCandidateKO {
            eps,
            sigma2_prime: sigma2_prime.into(),
        }
    }

    pub fn identity() -> Self {
        Self::new(1, 0)
    }

    /// `σ(x) = ε y + σ₂' ξ y²`.
    pub fn image_of_x(&self) -> MultiPoly {
        &KoAlgebra::x().scale(&BigInt::from(self.eps)) + &KoAlgebra::xi_x2().scale(&self.sigma2_prime)
    }

    pub fn apply(&self, alg: &KoAlgebra, v: &MultiPoly) -> MultiPoly {
        alg.apply_map(v, &self.image_of_x())
    }

    /// `(ε, σ₂)` read off `σ(ξx) = ε ξy + σ₂ b_R y²`.
    pub fn xi_x_coefficients(&self, alg: &KoAlgebra) -> (BigInt, BigInt) {
        let [_, e, s2] = alg
            .degree0_coords(&self.apply(alg, &KoAlgebra::xi_x()))
            .expect("σ(ξx) has degree 0");
        (e, s2)
    }

    pub fn sigma2(&self) -> BigInt {
        &self.sigma2_prime * 4
    }
}

/// `b_R y²`-coefficient of `σψ²(ξx) − ψ²σ(ξx)`, computed in the model of `Y`.
pub fn ko_intertwine_residue_models(x: &KoModel, y: &KoModel, cand: &IsoCandidateKO) -> Result<BigInt, GenusError> {
    let alg = y.algebra();
    let lhs = cand.apply(alg, &x.psi2(&KoAlgebra::xi_x())?);
    let rhs = y.psi2(&cand.apply(alg, &KoAlgebra::xi_x()))?;
    let [c0, c1, c2] = alg.degree0_coords(&(&lhs - &rhs))?;
    debug_assert!(c0.is_zero() && c1.is_zero(), "ξy coefficients always agree");
    Ok(c2)
}

pub fn ko_intertwine_residue(a_x: i64, a_y: i64, cand: &IsoCandidateKO) -> Result<BigInt, GenusError> {
    ko_intertwine_residue_models(&KoModel::new(a_x)?, &KoModel::new(a_y)?, cand)
}

/// Solves `residue(σ₂') = 0` for fixed `ε` using linearity in `σ₂'`.
/// Returns the unique root if it is an integer.
pub fn solve_ko_witness(x: &KoModel, y: &KoModel, eps: i8) -> Result<Option<BigInt>, GenusError> {
    let r0 = ko_intertwine_residue_models(x, y, &IsoCandidateKO::new(eps, 0))?;
    let r1 = ko_intertwine_residue_models(x, y, &IsoCandidateKO::new(eps, 1))?;
    let slope = &r1 - &r0;
    if slope.is_zero() {
        return Err(GenusError::Degenerate("residue does not depend on sigma2'".into()));
    }
    let (q, r) = (-&r0).div_rem(&slope);
    Ok(r.is_zero().then_some(q))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExhaustionCertificate {
    pub eps: [i8; 2],
    pub sigma2_prime_bound: u64,
    pub candidates: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KoVerdict {
    #[serde(serialize_with = "serialize_bigint")]
    pub a_x: BigInt,
    #[serde(serialize_with = "serialize_bigint")]
    pub a_y: BigInt,
    pub intertwinable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<IsoCandidateKO>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<ExhaustionCertificate>,
}

/// Scans `ε ∈ {±1}`, `|σ₂'| ≤ bound` for a candidate intertwining `ψ²`, in
/// order of increasing `|σ₂'|` with `ε = +1` first.
pub fn ko_equivalent_models(x: &KoModel, y: &KoModel, bound: u64) -> Result<KoVerdict, GenusError> {
    let mut scanned = 0u64;
    for size in 0..=bound {
        for eps in [1i8, -1] {
            let values: &[i64] = if size == 0 { &[0] } else { &[1, -1] };
            for &sign in values {
                let cand = IsoCandidateKO::new(eps, BigInt::from(size) * sign);
                scanned += 1;
                if ko_intertwine_residue_models(x, y, &cand)?.is_zero() {
                    return Ok(KoVerdict {
                        a_x: x.a().clone(),
                        a_y: y.a().clone(),
                        intertwinable: true,
                        witness: Some(cand),
                        certificate: None,
                    });
                }
            }
        }
    }
    Ok(KoVerdict {
        a_x: x.a().clone(),
        a_y: y.a().clone(),
        intertwinable: false,
        witness: None,
        certificate: Some(ExhaustionCertificate {
            eps: [1, -1],
            sigma2_prime_bound: bound,
            candidates: scanned,
        }),
    })
}

pub fn ko_equivalent(a_x: i64, a_y: i64, bound: u64) -> Result<KoVerdict, GenusError> {
    ko_equivalent_models(&KoModel::new(a_x)?, &KoModel::new(a_y)?, bound)
}

// ---------------------------------------------------------------------------
// K side

/// Normalized candidate `α(t) = t + Σ c_i t^i`; `higher[j]` is the
/// coefficient of `t^{j+2}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoCandidateK {
    pub higher: Vec<u64>,
}

impl IsoCandidateK {
    pub fn identity() -> Self {
        IsoCandidateK { higher: Vec::new() }
    }

    pub fn new(higher: Vec<u64>) -> Self {
        IsoCandidateK { higher }
    }

    pub fn alpha(&self, q: &KQuotient) -> MultiPoly {
        let mut f = MultiPoly::var(0);
        for (j, c) in self.higher.iter().enumerate() {
            f.add_term(Monomial::var_pow(0, j as u32 + 2), BigInt::from(*c));
        }
        q.reduce(&f)
    }
}

/// Whether `α` commutes with `ψ^p` between the two K models.
pub fn kp_intertwine_models(x: &KModel, y: &KModel, cand: &IsoCandidateK) -> Result<bool, GenusError> {
    if x.prime() != y.prime() {
        return Err(GenusError::Degenerate(format!("primes {} and {} differ", x.prime(), y.prime())));
    }
    let q = y.quotient();
    let max = q.max_power();
    if cand.higher.len() + 1 > max {
        return Err(GenusError::PowerOutOfRange {
            k: cand.higher.len() + 1,
            max,
        });
    }
    let alpha = cand.alpha(q);
    let lhs = q.compose(&x.psi_p_generator(), &alpha);
    let rhs = q.compose(&alpha, &y.psi_p_generator());
    Ok(lhs == rhs)
}

pub fn kp_intertwine_check(p: u64, s_x: i8, s_y: i8, cand: &IsoCandidateK) -> Result<bool, GenusError> {
    kp_intertwine_models(&KModel::new(p, s_x)?, &KModel::new(p, s_y)?, cand)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KpScanMode {
    /// Every coefficient ranges over all residues mod `p²`.
    Exhaustive,
    /// Every coefficient ranges over `0..bound`.
    Bounded(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KpScanCertificate {
    pub mode: &'static str,
    pub coefficient_range: u64,
    pub free_coefficients: usize,
    pub candidates: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KpVerdict {
    pub p: u64,
    pub s_x: i8,
    pub s_y: i8,
    pub intertwinable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<IsoCandidateK>,
    pub scan: KpScanCertificate,
}

/// Searches normalized candidates for one intertwining `ψ^p`. Stops at the
/// first witness.
pub fn kp_scan_models(x: &KModel, y: &KModel, mode: KpScanMode) -> Result<KpVerdict, GenusError> {
    let q = y.quotient();
    let free = q.max_power() - 1;
    let modulus = q.modulus().to_u64().expect("p^2 fits in u64");
    let range = match mode {
        KpScanMode::Exhaustive => modulus,
        KpScanMode::Bounded(b) => b.clamp(1, modulus),
    };
    let mut coeffs = vec![0u64; free];
    let mut scanned = 0u64;
    let mut witness = None;
    loop {
        let cand = IsoCandidateK::new(coeffs.clone());
        scanned += 1;
        if kp_intertwine_models(x, y, &cand)? {
            witness = Some(cand);
            break;
        }
        // odometer step
        let mut i = 0;
        while i < free {
            coeffs[i] += 1;
            if coeffs[i] < range {
                break;
            }
            coeffs[i] = 0;
            i += 1;
        }
        if i == free {
            break;
        }
    }
    Ok(KpVerdict {
        p: q.prime(),
        s_x: x.sign(),
        s_y: y.sign(),
        intertwinable: witness.is_some(),
        witness,
        scan: KpScanCertificate {
            mode: match mode {
                KpScanMode::Exhaustive => "exhaustive",
                KpScanMode::Bounded(_) => "bounded",
            },
            coefficient_range: range,
            free_coefficients: free,
            candidates: scanned,
        },
    })
}

pub fn kp_scan(p: u64, s_x: i8, s_y: i8, mode: KpScanMode) -> Result<KpVerdict, GenusError> {
    kp_scan_models(&KModel::new(p, s_x)?, &KModel::new(p, s_y)?, mode)
}

// ---------------------------------------------------------------------------
// Decisions on genus points

pub fn homotopy_equivalent(x: &GenusPoint, y: &GenusPoint) -> Result<bool, GenusError> {
    if x.p_max() != y.p_max() {
        return Err(GenusError::PrimeMaxMismatch(x.p_max(), y.p_max()));
    }
    Ok(x == y)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub equivalent: bool,
    /// First differing invariant, checking `(X/2)`, `(X/3)`, then odd primes
    /// in increasing order.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distinguished_by: Option<String>,
    pub differing: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ko_witness: Option<IsoCandidateKO>,
}

pub fn compare(x: &GenusPoint, y: &GenusPoint) -> Result<Comparison, GenusError> {
    let equivalent = homotopy_equivalent(x, y)?;
    let mut differing = Vec::new();
    let (x2, x3) = x.rector_pair();
    let (y2, y3) = y.rector_pair();
    if x2 != y2 {
        differing.push("(X/2)".to_string());
    }
    if x3 != y3 {
        differing.push("(X/3)".to_string());
    }
    for (p, s) in x.odd_signs() {
        if y.sign(*p) != Some(*s) {
            differing.push(format!("(X/{p})"));
        }
    }
    let ko = ko_equivalent(x.a_class() as i64, y.a_class() as i64, 1)?;
    Ok(Comparison {
        equivalent,
        distinguished_by: differing.first().cloned(),
        differing,
        ko_witness: if equivalent { ko.witness } else { None },
    })
}

// ---------------------------------------------------------------------------
// Theorem reproduction

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremConfig {
    /// `|σ₂'|` bound for the KO scans.
    pub ko_bound: u64,
    /// Odd primes for the K-side scans.
    pub primes: Vec<u64>,
    /// Primes up to this are scanned exhaustively mod `p²`.
    pub exhaustive_up_to: u64,
    /// Coefficient range for the bounded scans at larger primes.
    pub spot_range: u64,
    /// Eigenvalue of `ψ²` on `b_R x²` in every KO model (16 unless running
    /// a negative control).
    pub top_eigenvalue: i64,
}

impl Default for TheoremConfig {
    fn default() -> Self {
        TheoremConfig {
            ko_bound: 100,
            primes: vec![3, 5, 7],
            exhaustive_up_to: 5,
            spot_range: 3,
            top_eigenvalue: 16,
        }
    }
}

impl TheoremConfig {
    pub fn scan_mode(&self, p: u64) -> KpScanMode {
        if p <= self.exhaustive_up_to {
            KpScanMode::Exhaustive
        } else {
            KpScanMode::Bounded(self.spot_range)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KoRow {
    /// `a(X) ≡ ±a(Y) (mod 24)`.
    pub expected: bool,
    #[serde(flatten)]
    pub verdict: KoVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KpRow {
    /// `(X/p) = (Y/p)`.
    pub expected: bool,
    #[serde(flatten)]
    pub verdict: KpVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CombinedSummary {
    /// Primes `≥ 5` whose signs range freely.
    pub free_primes: Vec<u64>,
    pub cases: u64,
    pub agreements: u64,
    pub mismatches: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub ko_bound: u64,
    pub top_eigenvalue: i64,
    pub ko_table: Vec<KoRow>,
    pub ko_consistent: bool,
    pub kp_tables: Vec<KpRow>,
    pub kp_consistent: bool,
    pub combined: CombinedSummary,
    pub consistent: bool,
}

fn congruent_up_to_sign(a: i64, b: i64) -> bool {
    (a - b).rem_euclid(24) == 0 || (a + b).rem_euclid(24) == 0
}

/// Runs the KO residue table, the K-side sign tables, and the combined
/// check that a model-level intertwiner exists on every prime exactly when
/// the two genus points are homotopy equivalent.
pub fn theorem_reproduction(cfg: &TheoremConfig) -> Result<TheoremReport, GenusError> {
    let mut ko_table = Vec::with_capacity(64);
    let mut ko_lookup: HashMap<(i64, i64), bool> = HashMap::new();
    for &a_x in &ALLOWED_RESIDUES {
        for &a_y in &ALLOWED_RESIDUES {
            let mx = KoModel::new(a_x)?.with_top_eigenvalue(cfg.top_eigenvalue);
            let my = KoModel::new(a_y)?.with_top_eigenvalue(cfg.top_eigenvalue);
            let verdict = ko_equivalent_models(&mx, &my, cfg.ko_bound)?;
            ko_lookup.insert((a_x, a_y), verdict.intertwinable);
            ko_table.push(KoRow {
                expected: congruent_up_to_sign(a_x, a_y),
                verdict,
            });
        }
    }
    let ko_consistent = ko_table.iter().all(|r| r.expected == r.verdict.intertwinable);

    let mut kp_tables = Vec::new();
    let mut kp_lookup: HashMap<(u64, i8, i8), bool> = HashMap::new();
    for &p in &cfg.primes {
        for s_x in [1i8, -1] {
            for s_y in [1i8, -1] {
                let verdict = kp_scan(p, s_x, s_y, cfg.scan_mode(p))?;
                kp_lookup.insert((p, s_x, s_y), verdict.intertwinable);
                kp_tables.push(KpRow {
                    expected: s_x == s_y,
                    verdict,
                });
            }
        }
    }
    let kp_consistent = kp_tables.iter().all(|r| r.expected == r.verdict.intertwinable);

    let combined = combined_check(cfg, &ko_lookup, &kp_lookup)?;
    let consistent = ko_consistent && kp_consistent && combined.mismatches.is_empty();
    Ok(TheoremReport {
        ko_bound: cfg.ko_bound,
        top_eigenvalue: cfg.top_eigenvalue,
        ko_table,
        ko_consistent,
        kp_tables,
        kp_consistent,
        combined,
        consistent,
    })
}

fn combined_check(
    cfg: &TheoremConfig,
    ko: &HashMap<(i64, i64), bool>,
    kp: &HashMap<(u64, i8, i8), bool>,
) -> Result<CombinedSummary, GenusError> {
    let p_max = cfg.primes.iter().copied().max().unwrap_or(3);
    let free_primes = primes_between(5, p_max);
    let assignments: Vec<BTreeMap<u64, i8>> = (0..1u64 << free_primes.len())
        .map(|mask| {
            free_primes
                .iter()
                .enumerate()
                .map(|(i, &p)| (p, if mask >> i & 1 == 1 { -1 } else { 1 }))
                .collect()
        })
        .collect();

    let mut summary = CombinedSummary {
        free_primes: free_primes.clone(),
        cases: 0,
        agreements: 0,
        mismatches: Vec::new(),
    };
    for &a_x in &ALLOWED_RESIDUES {
        for &a_y in &ALLOWED_RESIDUES {
            for sx in &assignments {
                for sy in &assignments {
                    let px = GenusPoint::canonicalize(a_x, sx, p_max)?;
                    let py = GenusPoint::canonicalize(a_y, sy, p_max)?;
                    let expected = homotopy_equivalent(&px, &py)?;
                    // Primes outside the K scans (only possible for p ≥ 5 if
                    // the caller left gaps) fall back to sign equality.
                    let mut model = ko[&(a_x, a_y)];
                    for &p in &cfg.primes {
                        let (s_x, s_y) = (px.sign(p).expect("tracked"), py.sign(p).expect("tracked"));
                        model &= kp[&(p, s_x, s_y)];
                    }
                    for &p in free_primes.iter().filter(|p| !cfg.primes.contains(p)) {
                        model &= px.sign(p) == py.sign(p);
                    }
                    summary.cases += 1;
                    if model == expected {
                        summary.agreements += 1;
                    } else if summary.mismatches.len() < 16 {
                        summary
                            .mismatches
                            .push(format!("a_x={a_x} a_y={a_y} signs_x={sx:?} signs_y={sy:?}: model {model}, invariants {expected}"));
                    }
                }
            }
        }
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_intertwines_bs3_with_itself() {
        assert_eq!(ko_intertwine_residue(1, 1, &IsoCandidateKO::identity()).unwrap(), BigInt::zero());
    }

    #[test]
    fn candidate_coefficients() {
        let alg = KoAlgebra::new(crate::genus::KO_THRESHOLD);
        let c = IsoCandidateKO::new(-1, 3);
        let (e, s2) = c.xi_x_coefficients(&alg);
        assert_eq!(e, BigInt::from(-1));
        assert_eq!(s2, c.sigma2());
        assert_eq!(s2, BigInt::from(12));
    }

    #[test]
    fn residue_matches_linear_formula() {
        // 2(a_x − 6σ₂ − ε a_y) with σ₂ = 4σ₂'
        for &(ax, ay, eps, s) in &[(1i64, 23i64, -1i8, 1i64), (1, 5, 1, 0), (7, 17, 1, -2), (11, 13, -1, 3)] {
            let got = ko_intertwine_residue(ax, ay, &IsoCandidateKO::new(eps, s)).unwrap();
            assert_eq!(got, BigInt::from(2 * (ax - 24 * s - eps as i64 * ay)));
        }
    }

    #[test]
    fn ko_witnesses() {
        let v = ko_equivalent(1, 23, 1).unwrap();
        assert!(v.intertwinable);
        assert_eq!(v.witness, Some(IsoCandidateKO::new(-1, 1)));
        assert!(!ko_equivalent(1, 5, 1).unwrap().intertwinable);
        let v = ko_equivalent(7, 17, 1).unwrap();
        assert_eq!(v.witness, Some(IsoCandidateKO::new(-1, 1)));
        assert_eq!(ko_equivalent(5, 5, 3).unwrap().witness, Some(IsoCandidateKO::identity()));
    }

    #[test]
    fn ko_certificate_counts_candidates() {
        let v = ko_equivalent(1, 5, 100).unwrap();
        let cert = v.certificate.unwrap();
        assert_eq!(cert.sigma2_prime_bound, 100);
        assert_eq!(cert.candidates, 2 + 4 * 100);
    }

    #[test]
    fn linear_solver_agrees() {
        let x = KoModel::new(1).unwrap();
        let y = KoModel::new(23).unwrap();
        assert_eq!(solve_ko_witness(&x, &y, -1).unwrap(), Some(BigInt::from(1)));
        assert_eq!(solve_ko_witness(&x, &y, 1).unwrap(), None);
    }

    #[test]
    fn kp_examples() {
        assert!(kp_intertwine_check(3, 1, 1, &IsoCandidateK::identity()).unwrap());
        assert!(kp_intertwine_check(3, -1, -1, &IsoCandidateK::new(vec![1])).unwrap());
        assert!(!kp_intertwine_check(3, 1, -1, &IsoCandidateK::identity()).unwrap());
        assert!(kp_intertwine_check(4, 1, 1, &IsoCandidateK::identity()).is_err());
        assert!(kp_intertwine_check(3, 1, 1, &IsoCandidateK::new(vec![1, 1])).is_err());
    }

    #[test]
    fn kp_scan_at_five() {
        let v = kp_scan(5, 1, -1, KpScanMode::Exhaustive).unwrap();
        assert!(!v.intertwinable);
        assert_eq!(v.scan.candidates, 625);
        let v = kp_scan(5, -1, -1, KpScanMode::Exhaustive).unwrap();
        assert_eq!(v.witness, Some(IsoCandidateK::new(vec![0, 0])));
    }

    #[test]
    fn comparison_names_first_difference() {
        let bs3 = GenusPoint::classifying_space(13);
        let c = compare(&bs3, &bs3).unwrap();
        assert!(c.equivalent);
        assert_eq!(c.ko_witness, Some(IsoCandidateKO::identity()));

        let flipped = bs3.with_flipped_sign(11).unwrap();
        let c = compare(&bs3, &flipped).unwrap();
        assert!(!c.equivalent);
        assert_eq!(c.distinguished_by.as_deref(), Some("(X/11)"));

        let signs = bs3.odd_signs().clone();
        let seven = GenusPoint::canonicalize(7, &signs, 13).unwrap();
        let c = compare(&bs3, &seven).unwrap();
        assert_eq!(c.distinguished_by.as_deref(), Some("(X/2)"));
        assert_eq!(c.differing, vec!["(X/2)".to_string()]);
    }

    #[test]
    fn mismatched_prime_ranges() {
        let a = GenusPoint::classifying_space(13);
        let b = GenusPoint::classifying_space(17);
        assert_eq!(homotopy_equivalent(&a, &b), Err(GenusError::PrimeMaxMismatch(13, 17)));
    }

    #[test]
    fn small_theorem_run() {
        let cfg = TheoremConfig {
            ko_bound: 2,
            primes: vec![3, 5],
            ..TheoremConfig::default()
        };
        let report = theorem_reproduction(&cfg).unwrap();
        assert!(report.consistent, "{:?}", report.combined.mismatches);
        assert_eq!(report.combined.cases, 64 * 4);
    }
}
