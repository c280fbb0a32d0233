//! Truncated filtered models of `KO^*(X)` and `K^*(X)` for `X` in the genus
//! of `BS^3`, and the classification data (Rector invariants) of such `X`.
//!
//! The KO model is `Z[ξ, b_R][x] / (ξ² − 4 b_R)` cut off at filtration 9,
//! with `ξ` in degree −4, `b_R` in degree −8 and `x` in degree 4 and
//! filtration 4. The K model is the degree-0 part generated by `t = b² u`,
//! with coefficients mod `p²` and everything of filtration `2p + 3` or more
//! quotiented away.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::poly::{Monomial, MultiPoly};

/// Residues mod 24 that `a(X)` can take.
pub const ALLOWED_RESIDUES: [i64; 8] = [1, 5, 7, 11, 13, 17, 19, 23];

/// Canonical representatives of `{±a mod 24}`.
pub const CLASS_REPRESENTATIVES: [u8; 4] = [1, 5, 7, 11];

/// Default largest odd prime whose sign a [`GenusPoint`] tracks.
pub const DEFAULT_P_MAX: u64 = 97;

/// Default KO truncation: work modulo `KO^0_9`.
pub const KO_THRESHOLD: u32 = 9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenusError {
    #[error("a = {a} is {residue} mod 24; a(X) must be ±1, ±5, ±7 or ±11 mod 24")]
    ForbiddenResidue { a: BigInt, residue: i64 },
    #[error("{0} is not in the truncated degree-0 module spanned by 1, xi*x, bR*x^2")]
    NotInDegreeZero(String),
    #[error("power t^{k} is outside 1..={max}")]
    PowerOutOfRange { k: usize, max: usize },
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("sign for p = {0} must be +1 or -1")]
    BadSign(i64),
    #[error("no sign given for prime {0}")]
    MissingPrime(u64),
    #[error("signs given for {0}, which is not a prime in 5..=P_max")]
    UnexpectedPrime(String),
    #[error("genus points track different prime ranges: P_max {0} vs {1}")]
    PrimeMaxMismatch(u64, u64),
    #[error("noise term {0} does not lie in the stated filtration")]
    BadNoise(&'static str),
    #[error("change of representative does not preserve the model: {0}")]
    Degenerate(String),
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Primes `p` with `lo ≤ p ≤ hi`.
pub fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&n| is_prime(n)).collect()
}

fn residue24(a: &BigInt) -> i64 {
    a.mod_floor(&BigInt::from(24)).to_i64().expect("residue fits")
}

fn check_residue(a: &BigInt) -> Result<i64, GenusError> {
    let r = residue24(a);
    if ALLOWED_RESIDUES.contains(&r) {
        Ok(r)
    } else {
        Err(GenusError::ForbiddenResidue { a: a.clone(), residue: r })
    }
}

/// `((X/2), (X/3))` from `a(X) mod 24`.
pub fn rector_pair(a: &BigInt) -> Result<(i8, i8), GenusError> {
    let r = check_residue(a)?;
    Ok(match r.min(24 - r) {
        1 => (1, 1),
        5 => (1, -1),
        7 => (-1, 1),
        11 => (-1, -1),
        _ => unreachable!("allowed residues fold onto 1, 5, 7, 11"),
    })
}

// ---------------------------------------------------------------------------
// KO model

const XI: usize = 0;
const BR: usize = 1;
const X: usize = 2;

/// Arithmetic in `Z[ξ, b_R, x] / (ξ² − 4 b_R, filtration ≥ threshold)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KoAlgebra {
    threshold: u32,
}

impl KoAlgebra {
    pub fn new(threshold: u32) -> Self {
        KoAlgebra { threshold }
    }

    pub fn threshold(&self) -> u32 {
        self.threshold
    }

    pub fn filtration(m: &Monomial) -> u32 {
        4 * m.exponent(X)
    }

    pub fn degree(m: &Monomial) -> i64 {
        4 * m.exponent(X) as i64 - 4 * m.exponent(XI) as i64 - 8 * m.exponent(BR) as i64
    }

    /// Rewrites `ξ²` as `4 b_R` and drops terms at or above the threshold.
    pub fn normalize(&self, p: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m, c) in p.terms() {
            if Self::filtration(m) >= self.threshold {
                continue;
            }
            let (pairs, xi) = (m.exponent(XI) / 2, m.exponent(XI) % 2);
            let mono = Monomial::new(vec![xi, m.exponent(BR) + pairs, m.exponent(X)]);
            out.add_term(mono, c * BigInt::from(4).pow(pairs));
        }
        out
    }

    pub fn mul(&self, a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        self.normalize(&(a * b))
    }

    pub fn xi() -> MultiPoly {
        MultiPoly::var(XI)
    }

    pub fn b_r() -> MultiPoly {
        MultiPoly::var(BR)
    }

    pub fn x() -> MultiPoly {
        MultiPoly::var(X)
    }

    /// `ξ x`, filtration 4, degree 0.
    pub fn xi_x() -> MultiPoly {
        MultiPoly::monomial(Monomial::new(vec![1, 0, 1]), 1)
    }

    /// `b_R x²`, filtration 8, degree 0.
    pub fn br_x2() -> MultiPoly {
        MultiPoly::monomial(Monomial::new(vec![0, 1, 2]), 1)
    }

    /// `ξ x²`, filtration 8, degree 4.
    pub fn xi_x2() -> MultiPoly {
        MultiPoly::monomial(Monomial::new(vec![1, 0, 2]), 1)
    }

    /// Coordinates of a degree-0 element on `{1, ξx, b_R x²}`.
    pub fn degree0_coords(&self, v: &MultiPoly) -> Result<[BigInt; 3], GenusError> {
        let v = self.normalize(v);
        let basis = [Monomial::one(), Monomial::new(vec![1, 0, 1]), Monomial::new(vec![0, 1, 2])];
        for (m, _) in v.terms() {
            if !basis.contains(m) {
                return Err(GenusError::NotInDegreeZero(render_ko(&v)));
            }
        }
        Ok(basis.map(|b| v.coefficient(&b)))
    }

    pub fn from_degree0_coords(c: &[BigInt; 3]) -> MultiPoly {
        &(&MultiPoly::constant(c[0].clone()) + &Self::xi_x().scale(&c[1])) + &Self::br_x2().scale(&c[2])
    }

    /// Image of `v` under the KO^*-linear ring map determined by
    /// `x ↦ image`.
    pub fn apply_map(&self, v: &MultiPoly, image: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m, c) in v.terms() {
            let coeff_part = MultiPoly::monomial(Monomial::new(vec![m.exponent(XI), m.exponent(BR)]), c.clone());
            let mut term = coeff_part;
            for _ in 0..m.exponent(X) {
                term = self.mul(&term, image);
            }
            out = &out + &term;
        }
        self.normalize(&out)
    }
}

/// Renders a KO-model element with `xi`, `bR`, `x`, in order of increasing
/// filtration.
pub fn render_ko(p: &MultiPoly) -> String {
    let mut terms: Vec<_> = p.terms().rev().collect();
    terms.sort_by_key(|(m, _)| KoAlgebra::filtration(m));
    render_terms(&terms, &["xi", "bR", "x"])
}

fn render_terms(terms: &[(&Monomial, &BigInt)], names: &[&str]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (idx, (m, c)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        out.push_str(match (idx, neg) {
            (0, true) => "-",
            (0, false) => "",
            (_, true) => " - ",
            (_, false) => " + ",
        });
        let abs = c.abs();
        let factors: Vec<String> = m
            .support()
            .map(|(i, e)| if e == 1 { names[i].to_string() } else { format!("{}^{e}", names[i]) })
            .collect();
        if factors.is_empty() {
            out.push_str(&abs.to_string());
        } else {
            if !abs.is_one() {
                out.push_str(&format!("{abs}*"));
            }
            out.push_str(&factors.join("*"));
        }
    }
    out
}

/// Truncated `KO^*(X)` with `ψ²(ξx) = 4ξx + 2a·b_R x²` and
/// `ψ²(b_R x²) = 16·b_R x²` modulo filtration 9.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KoModel {
    a: BigInt,
    algebra: KoAlgebra,
    top_eigenvalue: BigInt,
}

impl KoModel {
    pub fn new(a: impl Into<BigInt>) -> Result<Self, GenusError> {
        let a = a.into();
        check_residue(&a)?;
        Ok(KoModel {
            a,
            algebra: KoAlgebra::new(KO_THRESHOLD),
            top_eigenvalue: BigInt::from(16),
        })
    }

    /// Replaces the eigenvalue of `ψ²` on `b_R x²`; only meaningful as a
    /// negative control.
    pub fn with_top_eigenvalue(mut self, e: impl Into<BigInt>) -> Self {
        self.top_eigenvalue = e.into();
        self
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn a_residue(&self) -> i64 {
        residue24(&self.a)
    }

    pub fn algebra(&self) -> &KoAlgebra {
        &self.algebra
    }

    pub fn top_eigenvalue(&self) -> &BigInt {
        &self.top_eigenvalue
    }

    /// `ψ²` on the truncated degree-0 module, extended linearly.
    pub fn psi2(&self, v: &MultiPoly) -> Result<MultiPoly, GenusError> {
        let [c0, c1, c2] = self.algebra.degree0_coords(v)?;
        let two_a = &self.a * 2;
        let image = [
            c0,
            &c1 * 4,
            &c1 * &two_a + &c2 * &self.top_eigenvalue,
        ];
        Ok(KoAlgebra::from_degree0_coords(&image))
    }

    /// General change of representative `x' = εx + m·ξx²`. Recomputes `a'`
    /// from `ψ²(ξx')` written over the primed basis `{1, ξx', b_R x'²}`.
    pub fn reparametrize(&self, eps: i8, m: impl Into<BigInt>) -> Result<KoModel, GenusError> {
        assert!(eps == 1 || eps == -1, "orientation must be ±1");
        let alg = &self.algebra;
        let x_new = &KoAlgebra::x().scale(&BigInt::from(eps)) + &KoAlgebra::xi_x2().scale(&m.into());
        let xi_x_new = alg.mul(&KoAlgebra::xi(), &x_new);
        let br_x2_new = alg.mul(&KoAlgebra::b_r(), &alg.mul(&x_new, &x_new));

        let e1 = alg.degree0_coords(&xi_x_new)?;
        let e2 = alg.degree0_coords(&br_x2_new)?;
        let image = alg.degree0_coords(&self.psi2(&xi_x_new)?)?;
        // Triangular solve: image = u·e1 + v·e2 (no constant part).
        let (u, r) = image[1].div_rem(&e1[1]);
        if !r.is_zero() {
            return Err(GenusError::Degenerate("xi*x' coefficient not divisible".into()));
        }
        let rest = &image[2] - &u * &e1[2];
        let (v, r) = rest.div_rem(&e2[2]);
        if !r.is_zero() || u != BigInt::from(4) {
            return Err(GenusError::Degenerate(format!("psi^2(xi*x') = {}", render_ko(&self.psi2(&xi_x_new)?))));
        }
        let (a_new, r) = v.div_rem(&BigInt::from(2));
        if !r.is_zero() {
            return Err(GenusError::Degenerate("bR*x'^2 coefficient is odd".into()));
        }
        Ok(KoModel {
            a: a_new,
            algebra: self.algebra,
            top_eigenvalue: self.top_eigenvalue.clone(),
        })
    }

    /// `x' = x + m·ξx²`; yields `a' = a + 24m`.
    pub fn representative_shift(&self, m: impl Into<BigInt>) -> Result<KoModel, GenusError> {
        self.reparametrize(1, m)
    }

    /// `x' = −x`; yields `a' = −a`.
    pub fn orientation_flip(&self) -> Result<KoModel, GenusError> {
        self.reparametrize(-1, 0)
    }
}

// ---------------------------------------------------------------------------
// K model

/// `Z/p²[t] / (t^k : 4k ≥ 2p + 3)`, i.e. `K^0` of the model modulo
/// filtration `2p + 3` and `p²`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KQuotient {
    p: u64,
    modulus: BigInt,
}

impl KQuotient {
    pub fn new(p: u64) -> Result<Self, GenusError> {
        if p == 2 || !is_prime(p) {
            return Err(GenusError::NotOddPrime(p));
        }
        Ok(KQuotient {
            p,
            modulus: BigInt::from(p) * BigInt::from(p),
        })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    /// Largest surviving power of `t`: `(p + 1) / 2`.
    pub fn max_power(&self) -> usize {
        self.p.div_ceil(2) as usize
    }

    /// Filtration cutoff `2p + 3`.
    pub fn filtration_cutoff(&self) -> u64 {
        2 * self.p + 3
    }

    pub fn survives(&self, k: u32) -> bool {
        4 * (k as u64) < self.filtration_cutoff()
    }

    pub fn t() -> MultiPoly {
        MultiPoly::var(0)
    }

    pub fn reduce(&self, f: &MultiPoly) -> MultiPoly {
        let lifted = if f.modulus().is_some() { f.lift() } else { f.clone() };
        lifted
            .retain_terms(|m| self.survives(m.exponent(0)))
            .reduce_mod(self.modulus.clone())
            .expect("p^2 >= 9")
    }

    pub fn mul(&self, a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        self.reduce(&(&a.lift() * &b.lift()))
    }

    pub fn pow(&self, a: &MultiPoly, k: u32) -> MultiPoly {
        let mut acc = self.reduce(&MultiPoly::one());
        for _ in 0..k {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// `f(g(t))` in the quotient, by Horner's rule.
    pub fn compose(&self, f: &MultiPoly, g: &MultiPoly) -> MultiPoly {
        let f = f.lift();
        let top = f.total_degree().unwrap_or(0) as u32;
        let mut acc = self.reduce(&MultiPoly::zero());
        for k in (0..=top).rev() {
            acc = self.mul(&acc, g);
            let c = f.coefficient(&Monomial::var_pow(0, k));
            acc = self.reduce(&(&acc.lift() + &MultiPoly::constant(c)));
        }
        acc
    }
}

/// Truncated `K^*(X)` at an odd prime `p` with
/// `ψ^p(t) = t^p + 2·(X/p)·p·t^{(p+1)/2} + p·w + p²·x₀`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KModel {
    quotient: KQuotient,
    sign: i8,
    w: MultiPoly,
    x0: MultiPoly,
}

impl KModel {
    pub fn new(p: u64, sign: i8) -> Result<Self, GenusError> {
        if sign != 1 && sign != -1 {
            return Err(GenusError::BadSign(sign as i64));
        }
        Ok(KModel {
            quotient: KQuotient::new(p)?,
            sign,
            w: MultiPoly::zero(),
            x0: MultiPoly::zero(),
        })
    }

    /// Attaches the error terms: `w` must have filtration at least `2p + 3`
    /// and `x₀` filtration at least 4 (no constant term).
    pub fn with_noise(mut self, w: MultiPoly, x0: MultiPoly) -> Result<Self, GenusError> {
        if w.terms().any(|(m, _)| self.quotient.survives(m.exponent(0)) || m.width() > 1) {
            return Err(GenusError::BadNoise("w"));
        }
        if x0.terms().any(|(m, _)| m.is_one() || m.width() > 1) {
            return Err(GenusError::BadNoise("x0"));
        }
        self.w = w;
        self.x0 = x0;
        Ok(self)
    }

    pub fn prime(&self) -> u64 {
        self.quotient.p
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn quotient(&self) -> &KQuotient {
        &self.quotient
    }

    /// `ψ^p(t)` as an integer polynomial, before any quotient.
    pub fn psi_p_generator_exact(&self) -> MultiPoly {
        let p = BigInt::from(self.quotient.p);
        let half = self.quotient.p.div_ceil(2) as u32;
        let frobenius = MultiPoly::monomial(Monomial::var_pow(0, self.quotient.p as u32), 1);
        let rector = MultiPoly::monomial(Monomial::var_pow(0, half), BigInt::from(2 * self.sign as i64) * &p);
        let noise = &self.w.scale(&p) + &self.x0.scale(&(&p * &p));
        &(&frobenius + &rector) + &noise
    }

    /// `ψ^p(t)` in the quotient.
    pub fn psi_p_generator(&self) -> MultiPoly {
        self.quotient.reduce(&self.psi_p_generator_exact())
    }

    /// `ψ^p(t^k) = (ψ^p t)^k` in the quotient, for `0 ≤ k ≤ (p+1)/2`.
    pub fn psi_p(&self, k: usize) -> Result<MultiPoly, GenusError> {
        let max = self.quotient.max_power();
        if k > max {
            return Err(GenusError::PowerOutOfRange { k, max });
        }
        Ok(self.quotient.pow(&self.psi_p_generator(), k as u32))
    }

    /// `ψ^p` of an arbitrary quotient element.
    pub fn apply_psi(&self, f: &MultiPoly) -> MultiPoly {
        self.quotient.compose(f, &self.psi_p_generator())
    }
}

/// Renders a K-model element with `t` for `b²u`.
pub fn render_k(p: &MultiPoly) -> String {
    let lifted = p.lift();
    let terms: Vec<_> = lifted.terms().rev().collect();
    let body = render_terms(&terms, &["t"]);
    match p.modulus() {
        Some(m) => format!("{body} (mod {m})"),
        None => body,
    }
}

// ---------------------------------------------------------------------------
// Genus points

/// Rector data of a space in the genus of `BS^3`, up to homotopy type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenusPoint {
    a_class: u8,
    signs: BTreeMap<u64, i8>,
    p_max: u64,
}

impl GenusPoint {
    /// Canonical form of `(a, signs)`: `a` is folded onto its class in
    /// `{1, 5, 7, 11}` (identifying `a` with `−a`) and `signs` must cover
    /// exactly the primes `5 ≤ p ≤ p_max`. `p_max` itself is rounded down to
    /// a prime.
    pub fn canonicalize(a: impl Into<BigInt>, signs: &BTreeMap<u64, i8>, p_max: u64) -> Result<Self, GenusError> {
        let a = a.into();
        let r = check_residue(&a)?;
        let a_class = r.min(24 - r) as u8;
        let primes = primes_between(5, p_max);
        let mut kept = BTreeMap::new();
        for &p in &primes {
            let s = *signs.get(&p).ok_or(GenusError::MissingPrime(p))?;
            if s != 1 && s != -1 {
                return Err(GenusError::BadSign(s as i64));
            }
            kept.insert(p, s);
        }
        if let Some(extra) = signs.keys().find(|p| !primes.contains(p)) {
            return Err(GenusError::UnexpectedPrime(extra.to_string()));
        }
        let p_max = primes.last().copied().unwrap_or(3);
        Ok(GenusPoint {
            a_class,
            signs: kept,
            p_max,
        })
    }

    /// `BS^3` itself: `a = 1` and every sign `+1`.
    pub fn classifying_space(p_max: u64) -> Self {
        let signs = primes_between(5, p_max).into_iter().map(|p| (p, 1)).collect();
        Self::canonicalize(1, &signs, p_max).expect("BS^3 data is valid")
    }

    /// Same point with `(X/p)` negated for one prime `p ≥ 5`.
    pub fn with_flipped_sign(&self, p: u64) -> Result<Self, GenusError> {
        let mut out = self.clone();
        let s = out.signs.get_mut(&p).ok_or(GenusError::MissingPrime(p))?;
        *s = -*s;
        Ok(out)
    }

    pub fn a_class(&self) -> u8 {
        self.a_class
    }

    pub fn p_max(&self) -> u64 {
        self.p_max
    }

    pub fn odd_signs(&self) -> &BTreeMap<u64, i8> {
        &self.signs
    }

    pub fn rector_pair(&self) -> (i8, i8) {
        rector_pair(&BigInt::from(self.a_class)).expect("class representative is allowed")
    }

    /// `(X/p)` for any prime `p ≤ P_max`, including 2 and 3.
    pub fn sign(&self, p: u64) -> Option<i8> {
        match p {
            2 => Some(self.rector_pair().0),
            3 => Some(self.rector_pair().1),
            _ => self.signs.get(&p).copied(),
        }
    }
}

impl fmt::Display for GenusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (s2, s3) = self.rector_pair();
        let flipped: Vec<String> = self.signs.iter().filter(|(_, &s)| s < 0).map(|(p, _)| p.to_string()).collect();
        write!(f, "a = {} mod ±24, (X/2) = {s2:+}, (X/3) = {s3:+}", self.a_class)?;
        if flipped.is_empty() {
            write!(f, ", (X/p) = +1 for 5 <= p <= {}", self.p_max)
        } else {
            write!(f, ", (X/p) = -1 exactly for p in {{{}}} up to {}", flipped.join(", "), self.p_max)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct GenusPointJson {
    a_class: i64,
    signs: BTreeMap<String, i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p_max: Option<u64>,
}

impl Serialize for GenusPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = serializer.serialize_map(Some(2))?;
        m.serialize_entry("a_class", &self.a_class)?;
        // BTreeMap<u64, _> keeps numeric order; serde_json writes the keys
        // as strings.
        m.serialize_entry("signs", &self.signs)?;
        m.end()
    }
}

impl<'de> Deserialize<'de> for GenusPoint {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = GenusPointJson::deserialize(deserializer)?;
        let mut signs = BTreeMap::new();
        for (k, v) in &raw.signs {
            let p: u64 = k
                .parse()
                .map_err(|_| D::Error::custom(GenusError::UnexpectedPrime(k.clone())))?;
            if *v != 1 && *v != -1 {
                return Err(D::Error::custom(GenusError::BadSign(*v)));
            }
            signs.insert(p, *v as i8);
        }
        let p_max = raw.p_max.unwrap_or_else(|| signs.keys().copied().max().unwrap_or(3));
        GenusPoint::canonicalize(raw.a_class, &signs, p_max).map_err(D::Error::custom)
    }
}
