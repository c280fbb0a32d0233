//! λ-rings: the instance interface, Adams operations from the Newton
//! recurrence, sample-based axiom checking, and two reference instances.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, RngCore};
use serde::Serialize;

use crate::poly::{binomial, Monomial, MultiPoly};
use crate::symfun::{compose_poly, product_poly, LambdaExpr, LambdaSymbol};

/// A concrete λ-ring, seen through its operations.
///
/// Elements are opaque values; the trait supplies the ring structure, the
/// operations `λ^i`, a sampler for property checks, and (optionally) a
/// divisibility test deciding membership in `pR`.
pub trait LambdaRing {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn name(&self) -> String;
    fn from_int(&self, n: &BigInt) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn lambda(&self, i: usize, a: &Self::Elem) -> Self::Elem;
    fn sample(&self, rng: &mut dyn RngCore) -> Self::Elem;
    fn render(&self, a: &Self::Elem) -> String;

    /// `[λ^1(a), ..., λ^n(a)]`; instances with a cheaper joint computation
    /// override this.
    fn lambdas(&self, n: usize, a: &Self::Elem) -> Vec<Self::Elem> {
        (1..=n).map(|i| self.lambda(i, a)).collect()
    }

    /// Whether `a ∈ pR`; `None` when the instance cannot decide.
    fn divisible_by(&self, _a: &Self::Elem, _p: u64) -> Option<bool> {
        None
    }

    fn zero(&self) -> Self::Elem {
        self.from_int(&BigInt::zero())
    }

    fn one(&self) -> Self::Elem {
        self.from_int(&BigInt::one())
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn pow(&self, a: &Self::Elem, k: u32) -> Self::Elem {
        let mut acc = self.one();
        let mut base = a.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
}

/// Evaluates a λ-expression with `Lr_i ↦ r_vals[i-1]`, `Ls_j ↦ s_vals[j-1]`.
pub fn eval_expr<R: LambdaRing + ?Sized>(ring: &R, expr: &LambdaExpr, r_vals: &[R::Elem], s_vals: &[R::Elem]) -> R::Elem {
    let mut acc = ring.zero();
    for (m, c) in expr.poly().terms() {
        let mut term = ring.from_int(c);
        for (slot, e) in m.support() {
            let v = match LambdaSymbol::from_slot(slot) {
                LambdaSymbol::R(i) => &r_vals[i - 1],
                LambdaSymbol::S(j) => &s_vals[j - 1],
            };
            term = ring.mul(&term, &ring.pow(v, e));
        }
        acc = ring.add(&acc, &term);
    }
    acc
}

// ---------------------------------------------------------------------------
// Adams operations

/// `ψ^k` as an integer polynomial in `Lr_1, ..., Lr_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdamsFormula {
    pub k: usize,
    pub expr: LambdaExpr,
}

fn adams_cache() -> &'static Mutex<Vec<Arc<AdamsFormula>>> {
    static CACHE: OnceLock<Mutex<Vec<Arc<AdamsFormula>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(Vec::new()))
}

/// Solves `ψ^k - λ^1 ψ^{k-1} + ... + (-1)^{k-1} λ^{k-1} ψ^1 = (-1)^{k-1} k λ^k`
/// for `ψ^k`, reusing the cached lower formulas.
pub fn newton_adams_formula(k: usize) -> Arc<AdamsFormula> {
    assert!(k >= 1, "Adams operations are indexed from 1");
    let mut cache = adams_cache().lock().expect("adams cache poisoned");
    while cache.len() < k {
        let j = cache.len() + 1;
        let sign = |i: usize| if i % 2 == 1 { BigInt::one() } else { -BigInt::one() };
        // (-1)^{j-1} j λ^j
        let mut psi = LambdaExpr::r(j).poly().scale(&(sign(j) * BigInt::from(j)));
        for i in 1..j {
            let lower = &cache[j - i - 1].expr;
            let term = LambdaExpr::r(i).poly() * lower.poly();
            psi = &psi + &term.scale(&sign(i));
        }
        cache.push(Arc::new(AdamsFormula {
            k: j,
            expr: LambdaExpr::from_poly(psi),
        }));
    }
    cache[k - 1].clone()
}

/// `ψ^k(a)` in the ring `R`.
pub fn adams<R: LambdaRing + ?Sized>(ring: &R, k: usize, a: &R::Elem) -> R::Elem {
    let formula = newton_adams_formula(k);
    let lambdas = ring.lambdas(k, a);
    eval_expr(ring, &formula.expr, &lambdas, &[])
}

// ---------------------------------------------------------------------------
// Reports

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub status: CheckStatus,
    pub cases: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckOutcome {
    fn new(name: impl Into<String>) -> Self {
        CheckOutcome {
            name: name.into(),
            status: CheckStatus::Pass,
            cases: 0,
            counterexample: None,
            detail: None,
        }
    }

    fn skipped(name: impl Into<String>, why: &str) -> Self {
        CheckOutcome {
            status: CheckStatus::Skipped,
            detail: Some(why.to_string()),
            ..Self::new(name)
        }
    }

    /// Records one case; the first failure wins the counterexample slot.
    fn record(&mut self, ok: bool, witness: impl FnOnce() -> (Vec<String>, String)) {
        self.cases += 1;
        if !ok && self.status != CheckStatus::Fail {
            let (elems, detail) = witness();
            self.status = CheckStatus::Fail;
            self.counterexample = Some(elems);
            self.detail = Some(detail);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub instance: String,
    pub outcomes: Vec<CheckOutcome>,
}

impl Report {
    /// No check failed; skipped checks do not count against the report.
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.status != CheckStatus::Fail)
    }

    pub fn outcome(&self, name: &str) -> Option<&CheckOutcome> {
        self.outcomes.iter().find(|o| o.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.outcomes.iter().filter(|o| o.status == CheckStatus::Fail)
    }

    fn sorted(mut self) -> Self {
        self.outcomes.sort_by(|a, b| a.name.cmp(&b.name));
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AxiomConfig {
    pub samples: usize,
    /// Largest `n` for the unit, addition and product axioms.
    pub n_max: usize,
    /// Composition axiom is checked for all `n, m ≥ 1` with `nm` up to this.
    pub compose_cap: usize,
}

impl Default for AxiomConfig {
    fn default() -> Self {
        AxiomConfig {
            samples: 100,
            n_max: 4,
            compose_cap: 6,
        }
    }
}

/// Checks the five λ-ring axioms on sampled elements.
pub fn check_axioms<R: LambdaRing + ?Sized>(ring: &R, cfg: &AxiomConfig, rng: &mut dyn RngCore) -> Report {
    let mut l0 = CheckOutcome::new("lambda0_is_one");
    let mut l1 = CheckOutcome::new("lambda1_is_identity");
    let mut unit = CheckOutcome::new("lambda_n_of_one_vanishes");
    let mut addition = CheckOutcome::new("addition");
    let mut product = CheckOutcome::new("product");
    let mut composition = CheckOutcome::new("composition");

    let one = ring.one();
    for n in 2..=cfg.n_max {
        let v = ring.lambda(n, &one);
        unit.record(v == ring.zero(), || (vec![ring.render(&one)], format!("lambda^{n}(1) = {}", ring.render(&v))));
    }

    let products: Vec<_> = (1..=cfg.n_max)
        .map(|n| product_poly(n).expect("P_n is computable"))
        .collect();
    let compositions: Vec<_> = (1..=cfg.compose_cap)
        .flat_map(|n| (1..=cfg.compose_cap / n).map(move |m| (n, m)))
        .map(|(n, m)| compose_poly(n, m).expect("P_{n,m} is computable"))
        .collect();
    let lambda_depth = cfg.n_max.max(cfg.compose_cap);

    for _ in 0..cfg.samples {
        let r = ring.sample(rng);
        let s = ring.sample(rng);
        let show = || vec![ring.render(&r), ring.render(&s)];

        let l0v = ring.lambda(0, &r);
        l0.record(l0v == one, || (vec![ring.render(&r)], format!("lambda^0 = {}", ring.render(&l0v))));
        let l1v = ring.lambda(1, &r);
        l1.record(l1v == r, || (vec![ring.render(&r)], format!("lambda^1 = {}", ring.render(&l1v))));

        let lr: Vec<_> = std::iter::once(ring.one()).chain(ring.lambdas(lambda_depth, &r)).collect();
        let ls: Vec<_> = std::iter::once(ring.one()).chain(ring.lambdas(cfg.n_max, &s)).collect();
        let sum = ring.add(&r, &s);
        let rs = ring.mul(&r, &s);

        for n in 1..=cfg.n_max {
            let lhs = ring.lambda(n, &sum);
            let mut rhs = ring.zero();
            for i in 0..=n {
                rhs = ring.add(&rhs, &ring.mul(&lr[i], &ls[n - i]));
            }
            addition.record(lhs == rhs, || (show(), format!("n = {n}")));

            let lhs = ring.lambda(n, &rs);
            let rhs = eval_expr(ring, &products[n - 1].expr, &lr[1..=n], &ls[1..=n]);
            product.record(lhs == rhs, || (show(), format!("n = {n}")));
        }

        for up in &compositions {
            let crate::symfun::UniversalKind::Composition { n, m } = up.kind else {
                unreachable!()
            };
            let lhs = ring.lambda(n, &ring.lambda(m, &r));
            let rhs = eval_expr(ring, &up.expr, &lr[1..=n * m], &[]);
            composition.record(lhs == rhs, || (vec![ring.render(&r)], format!("n = {n}, m = {m}")));
        }
    }

    Report {
        instance: ring.name(),
        outcomes: vec![l0, l1, unit, addition, product, composition],
    }
    .sorted()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdamsConfig {
    pub samples: usize,
    /// `ψ^k ψ^l = ψ^{kl}` is checked for every `k, l ≥ 1` with `kl` up to this.
    pub kl_max: usize,
    /// Additivity and multiplicativity are checked for `k` up to this.
    pub k_max: usize,
    pub primes: Vec<u64>,
}

impl Default for AdamsConfig {
    fn default() -> Self {
        AdamsConfig {
            samples: 100,
            kl_max: 8,
            k_max: 4,
            primes: vec![2, 3, 5, 7],
        }
    }
}

/// Checks `ψ^1 = Id`, `ψ^k ψ^l = ψ^{kl}`, `ψ^p(a) ≡ a^p mod pR`, and that
/// each `ψ^k` is additive and multiplicative.
pub fn check_adams_properties<R: LambdaRing + ?Sized>(ring: &R, cfg: &AdamsConfig, rng: &mut dyn RngCore) -> Report {
    let mut identity = CheckOutcome::new("psi1_is_identity");
    let mut composite = CheckOutcome::new("psi_k_psi_l_is_psi_kl");
    let mut additive = CheckOutcome::new("psi_k_additive");
    let mut multiplicative = CheckOutcome::new("psi_k_multiplicative");
    let mut frobenius: Vec<CheckOutcome> = cfg
        .primes
        .iter()
        .map(|p| CheckOutcome::new(format!("frobenius_mod_{p}")))
        .collect();
    let mut undecidable: BTreeSet<u64> = BTreeSet::new();

    let pairs: Vec<(usize, usize)> = (1..=cfg.kl_max)
        .flat_map(|k| (1..=cfg.kl_max / k).map(move |l| (k, l)))
        .collect();

    for _ in 0..cfg.samples {
        let a = ring.sample(rng);
        let b = ring.sample(rng);

        let mut psi: HashMap<usize, R::Elem> = HashMap::new();
        let mut psi_of = |k: usize| psi.entry(k).or_insert_with(|| adams(ring, k, &a)).clone();

        let p1 = psi_of(1);
        identity.record(p1 == a, || (vec![ring.render(&a)], format!("psi^1 = {}", ring.render(&p1))));

        for &(k, l) in &pairs {
            let lhs = adams(ring, k, &psi_of(l));
            let rhs = psi_of(k * l);
            composite.record(lhs == rhs, || (vec![ring.render(&a)], format!("k = {k}, l = {l}")));
        }

        for (outcome, &p) in frobenius.iter_mut().zip(&cfg.primes) {
            let diff = ring.sub(&psi_of(p as usize), &ring.pow(&a, p as u32));
            match ring.divisible_by(&diff, p) {
                Some(ok) => outcome.record(ok, || (vec![ring.render(&a)], format!("psi^{p}(a) - a^{p} = {}", ring.render(&diff)))),
                None => {
                    undecidable.insert(p);
                }
            }
        }

        let sum = ring.add(&a, &b);
        let prod = ring.mul(&a, &b);
        for k in 1..=cfg.k_max {
            let pa = psi_of(k);
            let pb = adams(ring, k, &b);
            let show = || vec![ring.render(&a), ring.render(&b)];
            additive.record(adams(ring, k, &sum) == ring.add(&pa, &pb), || (show(), format!("k = {k}")));
            multiplicative.record(adams(ring, k, &prod) == ring.mul(&pa, &pb), || (show(), format!("k = {k}")));
        }
    }

    let mut outcomes = vec![identity, composite, additive, multiplicative];
    for (outcome, p) in frobenius.into_iter().zip(&cfg.primes) {
        if undecidable.contains(p) {
            outcomes.push(CheckOutcome::skipped(outcome.name, "instance cannot decide membership in pR"));
        } else {
            outcomes.push(outcome);
        }
    }
    Report {
        instance: ring.name(),
        outcomes,
    }
    .sorted()
}

// ---------------------------------------------------------------------------
// Instances

/// The integers with `λ^i(n) = C(n, i)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BinomialZ {
    /// Samples are drawn uniformly from `[-sample_bound, sample_bound]`.
    pub sample_bound: i64,
}

impl Default for BinomialZ {
    fn default() -> Self {
        BinomialZ { sample_bound: 20 }
    }
}

impl LambdaRing for BinomialZ {
    type Elem = BigInt;

    fn name(&self) -> String {
        "BinomialZ".into()
    }

    fn from_int(&self, n: &BigInt) -> BigInt {
        n.clone()
    }

    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }

    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }

    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }

    fn lambda(&self, i: usize, a: &BigInt) -> BigInt {
        binomial(a, i as u64)
    }

    fn sample(&self, rng: &mut dyn RngCore) -> BigInt {
        BigInt::from(rng.gen_range(-self.sample_bound..=self.sample_bound))
    }

    fn render(&self, a: &BigInt) -> String {
        a.to_string()
    }

    fn divisible_by(&self, a: &BigInt, p: u64) -> Option<bool> {
        Some(a.is_multiple_of(&BigInt::from(p)))
    }
}

/// Symmetric integer polynomials in `k` line variables modulo total degree
/// greater than `degree`, with `λ_t(Σ c_α x^α) = ∏ (1 + x^α t)^{c_α}`.
///
/// Every monomial is a product of line elements and hence itself a line
/// element. The sampler only produces non-negative coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineSumRing {
    k: usize,
    degree: u64,
}

impl LineSumRing {
    pub fn new(k: usize, degree: u64) -> Self {
        LineSumRing { k, degree }
    }

    pub fn vars(&self) -> usize {
        self.k
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn truncate(&self, p: &MultiPoly) -> MultiPoly {
        let d = self.degree;
        p.retain_terms(|m| m.degree() <= d)
    }

    /// `x_1 + ... + x_k`.
    pub fn line_sum(&self) -> MultiPoly {
        crate::symfun::elementary(self.k, 1)
    }

    /// `x_1^j + ... + x_k^j`, the power-sum oracle for `ψ^j`.
    pub fn power_sum(&self, j: u32) -> MultiPoly {
        let mut p = MultiPoly::zero();
        for i in 0..self.k {
            p = &p + &MultiPoly::monomial(Monomial::var_pow(i, j), 1);
        }
        self.truncate(&p)
    }

    /// Sum over the distinct permutations of the exponent vector `parts`
    /// padded to `k` entries.
    pub fn monomial_symmetric(&self, parts: &[u32]) -> MultiPoly {
        let mut exps = vec![0u32; self.k];
        exps[..parts.len()].copy_from_slice(parts);
        exps.sort_unstable();
        let mut out = MultiPoly::zero();
        loop {
            out.add_term(Monomial::new(exps.clone()), BigInt::one());
            if !next_permutation(&mut exps) {
                break;
            }
        }
        self.truncate(&out)
    }

    /// Coefficients `[1, λ^1(a), ..., λ^i(a)]` of `λ_t(a)` up to `t^i`.
    fn lambda_series(&self, i: usize, a: &MultiPoly) -> Vec<MultiPoly> {
        let mut series = vec![MultiPoly::zero(); i + 1];
        series[0] = MultiPoly::one();
        for (m, c) in a.terms() {
            let deg = m.degree();
            // (1 + m t)^c = Σ_j C(c, j) m^j t^j, with m^j surviving only
            // while j·deg ≤ D.
            let mut factor: Vec<(usize, Monomial, BigInt)> = Vec::new();
            for j in 1..=i {
                if deg > 0 && (j as u64) * deg > self.degree {
                    break;
                }
                let b = binomial(c, j as u64);
                if !b.is_zero() {
                    factor.push((j, m.pow(j as u32), b));
                }
            }
            if factor.is_empty() {
                continue;
            }
            let mut next = series.clone();
            for (pos, coeff) in series.iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                for (j, mj, b) in &factor {
                    if pos + j > i {
                        break;
                    }
                    let room = self.degree - mj.degree();
                    for (mm, cc) in coeff.terms() {
                        if mm.degree() <= room {
                            next[pos + j].add_term(mm.mul(mj), cc * b);
                        }
                    }
                }
            }
            series = next;
        }
        series
    }

    fn mul_trunc(&self, a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        let d = self.degree;
        let mut out = MultiPoly::zero();
        for (ma, ca) in a.terms() {
            let da = ma.degree();
            if da > d {
                continue;
            }
            for (mb, cb) in b.terms() {
                if da + mb.degree() <= d {
                    out.add_term(ma.mul(mb), ca * cb);
                }
            }
        }
        out
    }
}

fn next_permutation(v: &mut [u32]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

impl LambdaRing for LineSumRing {
    type Elem = MultiPoly;

    fn name(&self) -> String {
        format!("LineSumRing(k={}, D={})", self.k, self.degree)
    }

    fn from_int(&self, n: &BigInt) -> MultiPoly {
        MultiPoly::constant(n.clone())
    }

    fn add(&self, a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        a + b
    }

    fn neg(&self, a: &MultiPoly) -> MultiPoly {
        -a
    }

    fn mul(&self, a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        self.mul_trunc(a, b)
    }

    fn lambda(&self, i: usize, a: &MultiPoly) -> MultiPoly {
        self.lambda_series(i, a).swap_remove(i)
    }

    fn lambdas(&self, n: usize, a: &MultiPoly) -> Vec<MultiPoly> {
        let mut series = self.lambda_series(n, a);
        series.remove(0);
        series
    }

    fn sample(&self, rng: &mut dyn RngCore) -> MultiPoly {
        let mut p = MultiPoly::constant(rng.gen_range(0..=3));
        // a few monomial symmetric functions of weight ≤ 3
        let shapes: [&[u32]; 6] = [&[1], &[2], &[1, 1], &[3], &[2, 1], &[1, 1, 1]];
        let terms = rng.gen_range(1..=3);
        for _ in 0..terms {
            let shape = shapes[rng.gen_range(0..shapes.len())];
            if shape.len() > self.k {
                continue;
            }
            let c = BigInt::from(rng.gen_range(1..=3));
            p = &p + &self.monomial_symmetric(shape).scale(&c);
        }
        self.truncate(&p)
    }

    fn render(&self, a: &MultiPoly) -> String {
        a.to_string()
    }

    fn divisible_by(&self, a: &MultiPoly, p: u64) -> Option<bool> {
        Some(a.all_coefficients_divisible_by(&BigInt::from(p)))
    }
}

/// Wraps an instance and replaces `λ^2(r)` with `λ^2(r) + 1`; a negative
/// control that must fail the axiom checks.
#[derive(Debug, Clone)]
pub struct PerturbedLambda2<R>(pub R);

impl<R: LambdaRing> LambdaRing for PerturbedLambda2<R> {
    type Elem = R::Elem;

    fn name(&self) -> String {
        format!("PerturbedLambda2({})", self.0.name())
    }

    fn from_int(&self, n: &BigInt) -> R::Elem {
        self.0.from_int(n)
    }

    fn add(&self, a: &R::Elem, b: &R::Elem) -> R::Elem {
        self.0.add(a, b)
    }

    fn neg(&self, a: &R::Elem) -> R::Elem {
        self.0.neg(a)
    }

    fn mul(&self, a: &R::Elem, b: &R::Elem) -> R::Elem {
        self.0.mul(a, b)
    }

    fn lambda(&self, i: usize, a: &R::Elem) -> R::Elem {
        let v = self.0.lambda(i, a);
        if i == 2 {
            self.0.add(&v, &self.0.one())
        } else {
            v
        }
    }

    fn sample(&self, rng: &mut dyn RngCore) -> R::Elem {
        self.0.sample(rng)
    }

    fn render(&self, a: &R::Elem) -> String {
        self.0.render(a)
    }

    fn divisible_by(&self, a: &R::Elem, p: u64) -> Option<bool> {
        self.0.divisible_by(a, p)
    }
}
