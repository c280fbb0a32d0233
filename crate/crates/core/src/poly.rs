//! Sparse multivariate polynomials with exact integer or mod-m coefficients.
//!
//! Variables are anonymous indices `x0, x1, ...`. Terms are kept in a
//! `BTreeMap` keyed by [`Monomial`], ordered graded-lexicographically, and
//! the map never stores a zero coefficient.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("incompatible coefficient rings: modulus {left:?} vs {right:?}")]
    ModulusMismatch {
        left: Option<BigInt>,
        right: Option<BigInt>,
    },
    #[error("variable x{0} is not bound")]
    UnboundVariable(usize),
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(BigInt),
    #[error("polynomial already carries modulus {0}")]
    AlreadyReduced(BigInt),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Exponent vector with trailing zeros stripped.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    pub fn var(index: usize) -> Self {
        Self::var_pow(index, 1)
    }

    pub fn var_pow(index: usize, e: u32) -> Self {
        let mut v = vec![0; index + 1];
        v[index] = e;
        Self::new(v)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exponent(&self, index: usize) -> u32 {
        self.0.get(index).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of variable slots this monomial touches.
    pub fn width(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (long, short) = if self.0.len() >= other.0.len() {
            (&self.0, &other.0)
        } else {
            (&other.0, &self.0)
        };
        let mut out = long.clone();
        for (o, s) in out.iter_mut().zip(short.iter()) {
            *o += s;
        }
        Monomial(out)
    }

    pub fn pow(&self, k: u32) -> Monomial {
        if k == 0 {
            return Monomial::one();
        }
        Monomial(self.0.iter().map(|e| e * k).collect())
    }

    /// Indices and exponents of the variables that actually occur.
    pub fn support(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| (i, e))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: total degree first, then the exponent of `x0`,
    /// then `x1`, and so on.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let n = self.0.len().max(other.0.len());
            for i in 0..n {
                match self.exponent(i).cmp(&other.exponent(i)) {
                    Ordering::Equal => continue,
                    ord => return ord,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, BigInt>,
    nvars: usize,
    modulus: Option<BigInt>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus && self.terms == other.terms
    }
}

impl Eq for MultiPoly {}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({self})")
    }
}

impl Default for MultiPoly {
    fn default() -> Self {
        Self::zero()
    }
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly {
            terms: BTreeMap::new(),
            nvars: 0,
            modulus: None,
        }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(Monomial::one(), c)
    }

    pub fn var(index: usize) -> Self {
        Self::monomial(Monomial::var(index), 1)
    }

    pub fn monomial(m: Monomial, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero();
        p.nvars = m.width();
        p.add_term(m, c.into());
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, merging
    /// duplicates.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (e, c) in terms {
            let m = Monomial::new(e);
            p.nvars = p.nvars.max(m.width());
            p.add_term(m, c.into());
        }
        p
    }

    /// Zero polynomial over `Z/m`.
    pub fn zero_mod(m: impl Into<BigInt>) -> Result<Self, PolyError> {
        let m = m.into();
        if m < BigInt::from(2) {
            return Err(PolyError::InvalidModulus(m));
        }
        Ok(MultiPoly {
            terms: BTreeMap::new(),
            nvars: 0,
            modulus: Some(m),
        })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Widens the declared variable count; never shrinks it below the
    /// variables actually in use.
    pub fn with_nvars(mut self, n: usize) -> Self {
        self.nvars = self.nvars.max(n);
        self
    }

    pub fn modulus(&self) -> Option<&BigInt> {
        self.modulus.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Coefficient of the constant term.
    pub fn constant_term(&self) -> BigInt {
        self.coefficient(&Monomial::one())
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    fn normalize_coeff(&self, c: BigInt) -> BigInt {
        match &self.modulus {
            Some(m) => c.mod_floor(m),
            None => c,
        }
    }

    /// In-place `self += c * m`.
    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        self.nvars = self.nvars.max(m.width());
        let c = self.normalize_coeff(c);
        if c.is_zero() {
            return;
        }
        let modulus = self.modulus.clone();
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let mut sum = o.get() + c;
                if let Some(m) = &modulus {
                    sum = sum.mod_floor(m);
                }
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn check_compatible(&self, other: &MultiPoly) -> Result<(), PolyError> {
        if self.modulus != other.modulus {
            return Err(PolyError::ModulusMismatch {
                left: self.modulus.clone(),
                right: other.modulus.clone(),
            });
        }
        Ok(())
    }

    fn empty_like(&self, nvars: usize) -> MultiPoly {
        MultiPoly {
            terms: BTreeMap::new(),
            nvars,
            modulus: self.modulus.clone(),
        }
    }

    /// Constant polynomial in the same coefficient ring as `self`.
    pub fn constant_like(&self, c: impl Into<BigInt>) -> MultiPoly {
        let mut p = self.empty_like(0);
        p.add_term(Monomial::one(), c.into());
        p
    }

    pub fn try_add(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.check_compatible(other)?;
        let (mut out, rhs) = if self.terms.len() >= other.terms.len() {
            (self.clone(), other)
        } else {
            (other.clone(), self)
        };
        out.nvars = self.nvars.max(other.nvars);
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.try_add(&other.neg_ref())
    }

    pub fn try_mul(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.check_compatible(other)?;
        let mut out = self.empty_like(self.nvars.max(other.nvars));
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    fn neg_ref(&self) -> MultiPoly {
        let mut out = self.empty_like(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> MultiPoly {
        let mut out = self.empty_like(self.nvars);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), a * c);
        }
        out
    }

    /// Multiplies every term by the monomial `m` and the scalar `c`.
    pub fn mul_term(&self, m: &Monomial, c: &BigInt) -> MultiPoly {
        let mut out = self.empty_like(self.nvars.max(m.width()));
        for (mm, a) in &self.terms {
            out.add_term(mm.mul(m), a * c);
        }
        out
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut result = self.constant_like(1);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// In-place `self += c * m * other`, the workhorse of the symmetric
    /// function routines.
    pub fn add_scaled_assign(&mut self, other: &MultiPoly, m: &Monomial, c: &BigInt) {
        assert_eq!(self.modulus, other.modulus, "modulus mismatch");
        self.nvars = self.nvars.max(other.nvars).max(m.width());
        for (mm, a) in &other.terms {
            self.add_term(mm.mul(m), a * c);
        }
    }

    /// Simultaneous substitution `x_i ↦ bindings[i]`. Every variable that
    /// occurs in `self` must be bound.
    pub fn substitute(&self, bindings: &BTreeMap<usize, MultiPoly>) -> Result<MultiPoly, PolyError> {
        for m in self.terms.keys() {
            for (i, _) in m.support() {
                if !bindings.contains_key(&i) {
                    return Err(PolyError::UnboundVariable(i));
                }
            }
        }
        for b in bindings.values() {
            self.check_compatible(b)?;
        }
        let mut powers: BTreeMap<(usize, u32), MultiPoly> = BTreeMap::new();
        let mut out = self.empty_like(0);
        for (m, c) in &self.terms {
            let mut term = self.constant_like(c.clone());
            for (i, e) in m.support() {
                let pw = powers
                    .entry((i, e))
                    .or_insert_with(|| bindings[&i].pow(e))
                    .clone();
                term = &term * &pw;
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Renames variables through `f`; colliding images are merged.
    pub fn map_vars(&self, f: impl Fn(usize) -> usize) -> MultiPoly {
        let mut out = self.empty_like(0);
        for (m, c) in &self.terms {
            let mut exps: Vec<u32> = Vec::new();
            for (i, e) in m.support() {
                let j = f(i);
                if exps.len() <= j {
                    exps.resize(j + 1, 0);
                }
                exps[j] += e;
            }
            let m = Monomial::new(exps);
            out.nvars = out.nvars.max(m.width());
            out.add_term(m, c.clone());
        }
        out
    }

    /// Keeps only the terms accepted by `keep`.
    pub fn retain_terms(&self, keep: impl Fn(&Monomial) -> bool) -> MultiPoly {
        let mut out = self.clone();
        out.terms.retain(|m, _| keep(m));
        out
    }

    pub fn reduce_mod(&self, m: impl Into<BigInt>) -> Result<MultiPoly, PolyError> {
        let m = m.into();
        if let Some(existing) = &self.modulus {
            return Err(PolyError::AlreadyReduced(existing.clone()));
        }
        let mut out = MultiPoly::zero_mod(m)?;
        out.nvars = self.nvars;
        for (mono, c) in &self.terms {
            out.add_term(mono.clone(), c.clone());
        }
        Ok(out)
    }

    /// Forgets the modulus, lifting each residue to its representative in
    /// `[0, m)`.
    pub fn lift(&self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.clone(),
            nvars: self.nvars,
            modulus: None,
        }
    }

    /// True when every coefficient is divisible by `d`.
    pub fn all_coefficients_divisible_by(&self, d: &BigInt) -> bool {
        self.terms.values().all(|c| c.is_multiple_of(d))
    }

    /// Exact division of every coefficient by `d`; `None` if some
    /// coefficient is not divisible.
    pub fn div_exact(&self, d: &BigInt) -> Option<MultiPoly> {
        if self.modulus.is_some() || !self.all_coefficients_divisible_by(d) {
            return None;
        }
        let mut out = self.empty_like(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c / d);
        }
        Some(out)
    }

    /// Applies a permutation of variable indices given as an image table;
    /// indices outside the table are fixed.
    pub fn permute_vars(&self, perm: &[usize]) -> MultiPoly {
        self.map_vars(|i| perm.get(i).copied().unwrap_or(i))
    }

    /// Swaps `x_i` and `x_j`.
    pub fn swap_vars(&self, i: usize, j: usize) -> MultiPoly {
        self.map_vars(|v| {
            if v == i {
                j
            } else if v == j {
                i
            } else {
                v
            }
        })
    }

    /// Evaluates at integer points; every occurring variable must be bound.
    pub fn evaluate(&self, point: &[BigInt]) -> Result<BigInt, PolyError> {
        let mut acc = BigInt::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, e) in m.support() {
                let v = point.get(i).ok_or(PolyError::UnboundVariable(i))?;
                t *= num_traits::pow(v.clone(), e as usize);
            }
            acc += t;
        }
        Ok(self.normalize_coeff(acc))
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;

    /// Panics on modulus mismatch; use [`MultiPoly::try_add`] to recover.
    fn add(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.try_add(rhs).expect("MultiPoly addition")
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;

    fn sub(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.try_sub(rhs).expect("MultiPoly subtraction")
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;

    fn mul(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.try_mul(rhs).expect("MultiPoly multiplication")
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;

    fn neg(self) -> MultiPoly {
        self.neg_ref()
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;

    fn neg(self) -> MultiPoly {
        self.neg_ref()
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: MultiPoly) -> MultiPoly {
        &self + &rhs
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        &self - &rhs
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

/// Writes one term body `coef*x0^e0*x1^e1...` with the coefficient's sign
/// already stripped by the caller.
fn write_term(f: &mut fmt::Formatter<'_>, m: &Monomial, abs: &BigInt) -> fmt::Result {
    if m.is_one() {
        return write!(f, "{abs}");
    }
    let mut first = true;
    if !abs.is_one() {
        write!(f, "{abs}")?;
        first = false;
    }
    for (i, e) in m.support() {
        if !first {
            f.write_str("*")?;
        }
        first = false;
        if e == 1 {
            write!(f, "x{i}")?;
        } else {
            write!(f, "x{i}^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for MultiPoly {
    /// Terms in descending graded-lex order, e.g. `x0^2 - 2*x1 + 3`.
    /// Polynomials over `Z/m` carry a trailing ` (mod m)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            f.write_str("0")?;
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (idx, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            write_term(f, m, &c.abs())?;
        }
        if let Some(m) = &self.modulus {
            write!(f, " (mod {m})")?;
        }
        Ok(())
    }
}

fn parse_factor(tok: &str) -> Result<(Option<BigInt>, Option<(usize, u32)>), PolyError> {
    let bad = || PolyError::Parse(format!("bad factor `{tok}`"));
    if let Some(rest) = tok.strip_prefix('x') {
        let (idx, exp) = match rest.split_once('^') {
            Some((i, e)) => (i, e.parse::<u32>().map_err(|_| bad())?),
            None => (rest, 1),
        };
        let idx = idx.parse::<usize>().map_err(|_| bad())?;
        Ok((None, Some((idx, exp))))
    } else {
        let c = tok.parse::<BigInt>().map_err(|_| bad())?;
        Ok((Some(c), None))
    }
}

impl FromStr for MultiPoly {
    type Err = PolyError;

    /// Inverse of `Display`. Accepts `x3` and `x3^1` alike, repeated
    /// variables, and any term order.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (body, modulus) = match s.strip_suffix(')').and_then(|r| r.rsplit_once("(mod ")) {
            Some((body, m)) => {
                let m = m
                    .trim()
                    .parse::<BigInt>()
                    .map_err(|_| PolyError::Parse(format!("bad modulus `{m}`")))?;
                (body.trim(), Some(m))
            }
            None => (s, None),
        };
        if body.is_empty() {
            return Err(PolyError::Parse("empty input".into()));
        }
        // Split into signed terms on top-level `+`/`-` separated by spaces.
        let compact: String = body.split_whitespace().collect::<Vec<_>>().join(" ");
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut sign = false;
        let mut current = String::new();
        for (i, tok) in compact.split(' ').enumerate() {
            match tok {
                "+" | "-" if i > 0 => {
                    if current.is_empty() {
                        return Err(PolyError::Parse("dangling operator".into()));
                    }
                    terms.push((sign, std::mem::take(&mut current)));
                    sign = tok == "-";
                }
                _ => {
                    if !current.is_empty() {
                        return Err(PolyError::Parse(format!("unexpected token `{tok}`")));
                    }
                    match tok.strip_prefix('-') {
                        Some(rest) if i == 0 => {
                            sign = true;
                            current = rest.to_string();
                        }
                        _ => current = tok.to_string(),
                    }
                }
            }
        }
        if current.is_empty() {
            return Err(PolyError::Parse("dangling operator".into()));
        }
        terms.push((sign, current));

        let mut p = match &modulus {
            Some(m) => MultiPoly::zero_mod(m.clone())?,
            None => MultiPoly::zero(),
        };
        for (neg, body) in terms {
            let mut coef = BigInt::one();
            let mut exps: Vec<u32> = Vec::new();
            for factor in body.split('*') {
                match parse_factor(factor)? {
                    (Some(c), _) => coef *= c,
                    (None, Some((i, e))) => {
                        if exps.len() <= i {
                            exps.resize(i + 1, 0);
                        }
                        exps[i] += e;
                    }
                    (None, None) => unreachable!(),
                }
            }
            if neg {
                coef = -coef;
            }
            let m = Monomial::new(exps);
            p.nvars = p.nvars.max(m.width());
            p.add_term(m, coef);
        }
        Ok(p)
    }
}

/// Binomial coefficient `C(n, k)` for any integer `n`, via the falling
/// factorial `n (n-1) ... (n-k+1) / k!`.
pub fn binomial(n: &BigInt, k: u64) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 0..k {
        num *= n - BigInt::from(j);
        den *= BigInt::from(j + 1);
    }
    num / den
}
