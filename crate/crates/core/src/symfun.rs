//! Elementary symmetric polynomials, the fundamental theorem of symmetric
//! polynomials, and the universal polynomials `P_n` and `P_{n,m}` that
//! govern `λ^n(rs)` and `λ^n(λ^m(r))`.
//!
//! Both universal families are derived by the splitting principle: expand a
//! generating product over formal line elements, read off the coefficient of
//! `t^n`, and rewrite it in elementary symmetric polynomials.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::poly::{Monomial, MultiPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymError {
    #[error("polynomial is not symmetric: swapping x{0} and x{1} changes it")]
    NotSymmetric(usize, usize),
    #[error("variable x{index} lies outside the {k} symmetric variables")]
    VariableOutOfRange { index: usize, k: usize },
    #[error("need at least {needed} {which}-variables for a stable answer, got {got}")]
    Unstable {
        which: &'static str,
        needed: usize,
        got: usize,
    },
    #[error("degrees must be positive")]
    ZeroDegree,
}

/// One of the formal symbols `λ^i(r)` or `λ^i(s)`, `i ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LambdaSymbol {
    R(usize),
    S(usize),
}

impl LambdaSymbol {
    /// Variable slot in the backing polynomial: `λ^i(r)` and `λ^i(s)` are
    /// interleaved so neither family needs a fixed width.
    pub fn slot(self) -> usize {
        match self {
            LambdaSymbol::R(i) => 2 * (i - 1),
            LambdaSymbol::S(i) => 2 * (i - 1) + 1,
        }
    }

    pub fn from_slot(slot: usize) -> Self {
        if slot.is_multiple_of(2) {
            LambdaSymbol::R(slot / 2 + 1)
        } else {
            LambdaSymbol::S(slot / 2 + 1)
        }
    }
}

impl fmt::Display for LambdaSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LambdaSymbol::R(i) => write!(f, "Lr{i}"),
            LambdaSymbol::S(i) => write!(f, "Ls{i}"),
        }
    }
}

/// Integer polynomial in the symbols `Lr1, Lr2, ..., Ls1, Ls2, ...`.
#[derive(Clone, PartialEq, Eq)]
pub struct LambdaExpr {
    poly: MultiPoly,
}

impl LambdaExpr {
    pub fn zero() -> Self {
        LambdaExpr {
            poly: MultiPoly::zero(),
        }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        LambdaExpr {
            poly: MultiPoly::constant(c),
        }
    }

    pub fn symbol(sym: LambdaSymbol) -> Self {
        LambdaExpr {
            poly: MultiPoly::var(sym.slot()),
        }
    }

    pub fn r(i: usize) -> Self {
        Self::symbol(LambdaSymbol::R(i))
    }

    pub fn s(i: usize) -> Self {
        Self::symbol(LambdaSymbol::S(i))
    }

    pub fn from_poly(poly: MultiPoly) -> Self {
        LambdaExpr { poly }
    }

    pub fn poly(&self) -> &MultiPoly {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Terms in descending graded-lex order as `(coefficient, [(symbol, exponent)])`.
    pub fn terms(&self) -> Vec<(BigInt, Vec<(LambdaSymbol, u32)>)> {
        self.poly
            .terms()
            .rev()
            .map(|(m, c)| {
                let factors = m
                    .support()
                    .map(|(slot, e)| (LambdaSymbol::from_slot(slot), e))
                    .collect();
                (c.clone(), factors)
            })
            .collect()
    }

    /// Largest `i` with `λ^i(r)` or `λ^i(s)` occurring.
    pub fn max_index(&self) -> usize {
        self.poly
            .terms()
            .flat_map(|(m, _)| m.support().map(|(slot, _)| slot / 2 + 1).collect::<Vec<_>>())
            .max()
            .unwrap_or(0)
    }

    pub fn uses_s(&self) -> bool {
        self.poly
            .terms()
            .any(|(m, _)| m.support().any(|(slot, _)| slot % 2 == 1))
    }

    /// Replaces `λ^i(r) ↦ r_vals[i-1]` and `λ^j(s) ↦ s_vals[j-1]`; missing
    /// values count as zero.
    pub fn substitute(&self, r_vals: &[MultiPoly], s_vals: &[MultiPoly]) -> MultiPoly {
        let mut bindings = BTreeMap::new();
        for (m, _) in self.poly.terms() {
            for (slot, _) in m.support() {
                let v = match LambdaSymbol::from_slot(slot) {
                    LambdaSymbol::R(i) => r_vals.get(i - 1),
                    LambdaSymbol::S(j) => s_vals.get(j - 1),
                };
                bindings.insert(slot, v.cloned().unwrap_or_else(MultiPoly::zero));
            }
        }
        self.poly
            .substitute(&bindings)
            .expect("every symbol is bound")
    }

    fn monomial_text(factors: &[(LambdaSymbol, u32)]) -> String {
        factors
            .iter()
            .map(|(s, e)| if *e == 1 { s.to_string() } else { format!("{s}^{e}") })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl fmt::Display for LambdaExpr {
    /// ASCII form, e.g. `Lr1^2 - 2*Lr2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (c, factors)) in terms.iter().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if idx == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let abs = c.abs();
            let mono = Self::monomial_text(factors);
            match (mono.is_empty(), abs.is_one()) {
                (true, _) => write!(f, "{abs}")?,
                (false, true) => f.write_str(&mono)?,
                (false, false) => write!(f, "{abs}*{mono}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LambdaExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LambdaExpr({self})")
    }
}

/// Serialized as a list of `{"coef": "<integer>", "monomial": "Lr1^2*Ls2"}`.
struct ExprTerms<'a>(&'a LambdaExpr);

impl Serialize for ExprTerms<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let terms = self.0.terms();
        let mut seq = serializer.serialize_seq(Some(terms.len()))?;
        for (c, factors) in &terms {
            seq.serialize_element(&TermJson {
                coef: c.to_string(),
                monomial: LambdaExpr::monomial_text(factors),
            })?;
        }
        seq.end()
    }
}

struct TermJson {
    coef: String,
    monomial: String,
}

impl Serialize for TermJson {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut m = serializer.serialize_map(Some(2))?;
        m.serialize_entry("coef", &self.coef)?;
        m.serialize_entry("monomial", &self.monomial)?;
        m.end()
    }
}

impl Serialize for LambdaExpr {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ExprTerms(self).serialize(serializer)
    }
}

// ---------------------------------------------------------------------------

/// The `i`-th elementary symmetric polynomial in `x0, ..., x_{k-1}`.
pub fn elementary(k: usize, i: usize) -> MultiPoly {
    elementary_in(0, k, i)
}

/// The `i`-th elementary symmetric polynomial in the block of variables
/// `x_start, ..., x_{start+k-1}`.
pub fn elementary_in(start: usize, k: usize, i: usize) -> MultiPoly {
    let mut out = MultiPoly::zero();
    if i > k {
        return out;
    }
    let mut stack: Vec<usize> = Vec::with_capacity(i);
    fn rec(start: usize, k: usize, i: usize, from: usize, stack: &mut Vec<usize>, out: &mut MultiPoly) {
        if stack.len() == i {
            let mut e = vec![0u32; start + k];
            for &j in stack.iter() {
                e[start + j] = 1;
            }
            *out = &*out + &MultiPoly::monomial(Monomial::new(e), 1);
            return;
        }
        let remaining = i - stack.len();
        for j in from..=(k - remaining) {
            stack.push(j);
            rec(start, k, i, j + 1, stack, out);
            stack.pop();
        }
    }
    rec(start, k, i, 0, &mut stack, &mut out);
    out.with_nvars(start + k)
}

/// Cached elementary symmetric polynomials for one or two blocks of
/// variables: `x0..x_{k-1}` and, when `l > 0`, `x_k..x_{k+l-1}`.
#[derive(Debug, Clone)]
pub struct SymContext {
    k: usize,
    l: usize,
    ex: Vec<MultiPoly>,
    ey: Vec<MultiPoly>,
}

impl SymContext {
    pub fn new(k: usize, l: usize) -> Self {
        let ex = (0..=k).map(|i| elementary_in(0, k, i)).collect();
        let ey = (0..=l).map(|j| elementary_in(k, l, j)).collect();
        SymContext { k, l, ex, ey }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn l(&self) -> usize {
        self.l
    }

    /// `e_i` of the x-block; zero for `i > k`.
    pub fn ex(&self, i: usize) -> MultiPoly {
        self.ex.get(i).cloned().unwrap_or_default()
    }

    /// `e_j` of the y-block; zero for `j > l`.
    pub fn ey(&self, j: usize) -> MultiPoly {
        self.ey.get(j).cloned().unwrap_or_default()
    }

    /// `[e_1, ..., e_n]` of the x-block.
    pub fn ex_values(&self, n: usize) -> Vec<MultiPoly> {
        (1..=n).map(|i| self.ex(i)).collect()
    }

    pub fn ey_values(&self, n: usize) -> Vec<MultiPoly> {
        (1..=n).map(|j| self.ey(j)).collect()
    }
}

/// First adjacent transposition inside the block that moves `p`, if any.
fn symmetry_witness(p: &MultiPoly, start: usize, k: usize) -> Option<(usize, usize)> {
    (start..start + k.saturating_sub(1)).find_map(|j| (p.swap_vars(j, j + 1) != *p).then_some((j, j + 1)))
}

/// Rewrites `p`, symmetric in the block `x_start..x_{start+k-1}`, as a
/// polynomial in the block's elementary symmetric polynomials; `e_i` takes
/// over the slot of `x_{start+i-1}`. Variables outside the block are treated
/// as coefficients and left untouched.
///
/// Classical leading-term elimination: the graded-lex leading block monomial
/// `x^a` of a symmetric polynomial has `a` weakly decreasing, and it is also
/// the leading monomial of `e_1^{a1-a2} e_2^{a2-a3} ... e_k^{ak}`.
pub fn express_block_in_elementaries(p: &MultiPoly, start: usize, k: usize) -> Result<MultiPoly, SymError> {
    if let Some((i, j)) = symmetry_witness(p, start, k) {
        return Err(SymError::NotSymmetric(i, j));
    }
    let in_block = |i: usize| i >= start && i < start + k;

    // block exponent vector (local indices) -> coefficient polynomial
    let mut grouped: BTreeMap<Monomial, MultiPoly> = BTreeMap::new();
    for (m, c) in p.terms() {
        let mut block = vec![0u32; k];
        let mut rest = Vec::new();
        for (i, e) in m.support() {
            if in_block(i) {
                block[i - start] = e;
            } else {
                if rest.len() <= i {
                    rest.resize(i + 1, 0);
                }
                rest[i] = e;
            }
        }
        let entry = grouped.entry(Monomial::new(block)).or_default();
        *entry = &*entry + &MultiPoly::monomial(Monomial::new(rest), c.clone());
    }

    let local: Vec<MultiPoly> = (0..=k).map(|i| elementary(k, i)).collect();
    let mut powers: HashMap<(usize, u32), MultiPoly> = HashMap::new();
    let mut result = MultiPoly::zero();

    while let Some((lead, coeff)) = grouped.pop_last() {
        let a: Vec<u32> = (0..k).map(|i| lead.exponent(i)).collect();
        debug_assert!(a.windows(2).all(|w| w[0] >= w[1]), "leading exponent not a partition");
        let mut product = MultiPoly::one();
        let mut e_exps = vec![0u32; start + k];
        for i in 0..k {
            let d = a[i] - a.get(i + 1).copied().unwrap_or(0);
            if d > 0 {
                let pw = powers.entry((i + 1, d)).or_insert_with(|| local[i + 1].pow(d));
                product = &product * pw;
                e_exps[start + i] = d;
            }
        }
        result.add_scaled_assign(&coeff, &Monomial::new(e_exps), &BigInt::one());
        // Subtract coeff * product from the remaining terms; the leading
        // block monomial cancels exactly and has already been popped.
        for (m, c) in product.terms() {
            if *m == lead {
                continue;
            }
            let entry = grouped.entry(m.clone()).or_default();
            let updated = entry.try_sub(&coeff.scale(c)).expect("integer polynomials");
            if updated.is_zero() {
                grouped.remove(m);
            } else {
                *entry = updated;
            }
        }
    }
    Ok(result)
}

/// Fundamental theorem of symmetric polynomials for `p` in `x0..x_{k-1}`:
/// returns `q` with `q(e_1, ..., e_k) = p`, where `e_i` is variable `x_{i-1}`
/// of `q`.
pub fn express_in_elementaries(p: &MultiPoly, k: usize) -> Result<MultiPoly, SymError> {
    if let Some(index) = p
        .terms()
        .flat_map(|(m, _)| m.support().map(|(i, _)| i).collect::<Vec<_>>())
        .find(|&i| i >= k)
    {
        return Err(SymError::VariableOutOfRange { index, k });
    }
    express_block_in_elementaries(p, 0, k)
}

/// Coefficients `[c_0, ..., c_n]` of `∏ (1 + f t)` over `factors`, truncated
/// at `t^n`.
fn truncated_generating_product<'a>(factors: impl IntoIterator<Item = &'a Monomial>, n: usize) -> Vec<MultiPoly> {
    let mut coeffs = vec![MultiPoly::zero(); n + 1];
    coeffs[0] = MultiPoly::one();
    let one = BigInt::one();
    for f in factors {
        for d in (1..=n).rev() {
            if coeffs[d - 1].is_zero() {
                continue;
            }
            let prev = coeffs[d - 1].clone();
            coeffs[d].add_scaled_assign(&prev, f, &one);
        }
    }
    coeffs
}

fn product_line_monomials(k: usize, l: usize) -> Vec<Monomial> {
    let mut out = Vec::with_capacity(k * l);
    for i in 0..k {
        for j in 0..l {
            let mut e = vec![0u32; k + l];
            e[i] = 1;
            e[k + j] = 1;
            out.push(Monomial::new(e));
        }
    }
    out
}

fn subset_monomials(k: usize, m: usize) -> Vec<Monomial> {
    elementary(k, m).terms().map(|(mono, _)| mono.clone()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UniversalKind {
    /// `λ^n(rs) = P_n(λ(r); λ(s))`
    Product { n: usize },
    /// `λ^n(λ^m(r)) = P_{n,m}(λ(r))`
    Composition { n: usize, m: usize },
}

impl UniversalKind {
    pub fn degree(self) -> usize {
        match self {
            UniversalKind::Product { n } => n,
            UniversalKind::Composition { n, .. } => n,
        }
    }
}

impl fmt::Display for UniversalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UniversalKind::Product { n } => write!(f, "P_{n}"),
            UniversalKind::Composition { n, m } => write!(f, "P_{n},{m}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalPoly {
    pub kind: UniversalKind,
    pub expr: LambdaExpr,
}

impl UniversalPoly {
    /// Same polynomial with one coefficient negated; used as a negative
    /// control for the oracle.
    pub fn with_flipped_sign(&self) -> UniversalPoly {
        let mut p = self.expr.poly().clone();
        if let Some((m, c)) = p.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
            let two = BigInt::from(2);
            p = &p - &MultiPoly::monomial(m, &c * &two);
        }
        UniversalPoly {
            kind: self.kind,
            expr: LambdaExpr::from_poly(p),
        }
    }
}

impl Serialize for UniversalPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self.kind {
            UniversalKind::Product { n } => {
                let mut s = serializer.serialize_struct("UniversalPoly", 3)?;
                s.serialize_field("kind", "product")?;
                s.serialize_field("n", &n)?;
                s.serialize_field("terms", &self.expr)?;
                s.end()
            }
            UniversalKind::Composition { n, m } => {
                let mut s = serializer.serialize_struct("UniversalPoly", 4)?;
                s.serialize_field("kind", "composition")?;
                s.serialize_field("n", &n)?;
                s.serialize_field("m", &m)?;
                s.serialize_field("terms", &self.expr)?;
                s.end()
            }
        }
    }
}

/// `P_n`, computed on `k` x-lines and `l` y-lines (both at least `n`).
pub fn universal_product(n: usize, k: usize, l: usize) -> Result<UniversalPoly, SymError> {
    if n == 0 {
        return Err(SymError::ZeroDegree);
    }
    if k < n {
        return Err(SymError::Unstable { which: "x", needed: n, got: k });
    }
    if l < n {
        return Err(SymError::Unstable { which: "y", needed: n, got: l });
    }
    let lines = product_line_monomials(k, l);
    let coeff = truncated_generating_product(&lines, n).swap_remove(n);
    let in_ex = express_block_in_elementaries(&coeff, 0, k)?;
    let in_both = express_block_in_elementaries(&in_ex, k, l)?;
    let expr = in_both.map_vars(|v| {
        if v < k {
            LambdaSymbol::R(v + 1).slot()
        } else {
            LambdaSymbol::S(v - k + 1).slot()
        }
    });
    Ok(UniversalPoly {
        kind: UniversalKind::Product { n },
        expr: LambdaExpr::from_poly(expr),
    })
}

/// `P_{n,m}`, computed on `k ≥ nm` lines.
///
/// The generating product runs over all `C(k, m)` subsets, so the cost
/// grows quickly with `k` and `m`.
pub fn universal_compose(n: usize, m: usize, k: usize) -> Result<UniversalPoly, SymError> {
    if n == 0 || m == 0 {
        return Err(SymError::ZeroDegree);
    }
    if k < n * m {
        return Err(SymError::Unstable { which: "x", needed: n * m, got: k });
    }
    let subsets = subset_monomials(k, m);
    let coeff = truncated_generating_product(&subsets, n).swap_remove(n);
    let in_e = express_block_in_elementaries(&coeff, 0, k)?;
    let expr = in_e.map_vars(|v| LambdaSymbol::R(v + 1).slot());
    Ok(UniversalPoly {
        kind: UniversalKind::Composition { n, m },
        expr: LambdaExpr::from_poly(expr),
    })
}

/// `e_n(z_1, ..., z_N)` for a list of monomials `z_i`, summed directly over
/// all `n`-element index subsets.
fn elementary_of_monomials(zs: &[Monomial], n: usize) -> MultiPoly {
    let mut acc: HashMap<Monomial, BigInt> = HashMap::new();
    fn rec(zs: &[Monomial], n: usize, from: usize, cur: &Monomial, depth: usize, acc: &mut HashMap<Monomial, BigInt>) {
        if depth == n {
            *acc.entry(cur.clone()).or_insert_with(BigInt::zero) += 1;
            return;
        }
        let remaining = n - depth;
        if zs.len() < remaining {
            return;
        }
        for j in from..=(zs.len() - remaining) {
            let next = cur.mul(&zs[j]);
            rec(zs, n, j + 1, &next, depth + 1, acc);
        }
    }
    rec(zs, n, 0, &Monomial::one(), 0, &mut acc);
    MultiPoly::from_terms(acc.into_iter().map(|(m, c)| (m.exponents().to_vec(), c)))
}

/// Brute-force check of a universal polynomial on sums of line elements:
/// substitutes `λ^i(r) ↦ e_i(x_1..x_k)`, `λ^j(s) ↦ e_j(y_1..y_l)` and compares
/// with the coefficient of `t^n` in the defining product, the latter summed
/// subset by subset. `l` is ignored for compositions.
pub fn splitting_oracle_check(up: &UniversalPoly, k: usize, l: usize) -> bool {
    match up.kind {
        UniversalKind::Product { n } => {
            let ctx = SymContext::new(k, l);
            let lhs = up.expr.substitute(&ctx.ex_values(n), &ctx.ey_values(n));
            let rhs = elementary_of_monomials(&product_line_monomials(k, l), n);
            lhs == rhs
        }
        UniversalKind::Composition { n, m } => {
            let ctx = SymContext::new(k, 0);
            let lhs = up.expr.substitute(&ctx.ex_values(n * m), &[]);
            let rhs = elementary_of_monomials(&subset_monomials(k, m), n);
            lhs == rhs
        }
    }
}

fn cache() -> &'static Mutex<HashMap<UniversalKind, Arc<UniversalPoly>>> {
    static CACHE: OnceLock<Mutex<HashMap<UniversalKind, Arc<UniversalPoly>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Memoized `P_n` at the minimal stable size.
pub fn product_poly(n: usize) -> Result<Arc<UniversalPoly>, SymError> {
    cached(UniversalKind::Product { n }, || universal_product(n, n, n))
}

/// Memoized `P_{n,m}` at the minimal stable size.
pub fn compose_poly(n: usize, m: usize) -> Result<Arc<UniversalPoly>, SymError> {
    cached(UniversalKind::Composition { n, m }, || universal_compose(n, m, n * m))
}

fn cached(
    key: UniversalKind,
    build: impl FnOnce() -> Result<UniversalPoly, SymError>,
) -> Result<Arc<UniversalPoly>, SymError> {
    if let Some(hit) = cache().lock().expect("cache poisoned").get(&key) {
        return Ok(hit.clone());
    }
    // Built outside the lock; a racing worker may build the same entry.
    let built = Arc::new(build()?);
    Ok(cache()
        .lock()
        .expect("cache poisoned")
        .entry(key)
        .or_insert(built)
        .clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    #[test]
    fn elementary_examples() {
        assert_eq!(elementary(2, 1), p("x0 + x1"));
        assert_eq!(elementary(3, 3), p("x0*x1*x2"));
        assert!(elementary(2, 3).is_zero());
        assert_eq!(elementary(4, 0), MultiPoly::one());
        assert_eq!(elementary(5, 2).len(), 10);
        assert!(elementary(5, 2).terms().all(|(_, c)| c.is_one()));
    }

    #[test]
    fn power_sum_in_elementaries() {
        // x0^2 + x1^2 = e1^2 - 2 e2
        let q = express_in_elementaries(&p("x0^2 + x1^2"), 2).unwrap();
        assert_eq!(q, p("x0^2 - 2*x1"));
        let q = express_in_elementaries(&p("x0^2*x1 + x0*x1^2"), 2).unwrap();
        assert_eq!(q, p("x0*x1"));
        for i in 0..=4 {
            let q = express_in_elementaries(&elementary(4, i), 4).unwrap();
            let expected = if i == 0 { MultiPoly::one() } else { MultiPoly::var(i - 1) };
            assert_eq!(q, expected);
        }
    }

    #[test]
    fn non_symmetric_input_names_a_transposition() {
        assert_eq!(
            express_in_elementaries(&p("x0^2 + x1"), 2),
            Err(SymError::NotSymmetric(0, 1))
        );
        assert_eq!(
            express_in_elementaries(&p("x0 + x1 + 2*x2"), 3),
            Err(SymError::NotSymmetric(1, 2))
        );
        assert!(matches!(
            express_in_elementaries(&p("x3"), 2),
            Err(SymError::VariableOutOfRange { index: 3, k: 2 })
        ));
    }

    #[test]
    fn low_degree_products() {
        let p1 = universal_product(1, 1, 1).unwrap();
        assert_eq!(p1.expr.to_string(), "Lr1*Ls1");
        let p2 = universal_product(2, 2, 2).unwrap();
        let expected = &(&(&LambdaExpr::r(1).poly().pow(2) * LambdaExpr::s(2).poly())
            + &(LambdaExpr::r(2).poly() * &LambdaExpr::s(1).poly().pow(2)))
            - &(LambdaExpr::r(2).poly() * LambdaExpr::s(2).poly()).scale(&BigInt::from(2));
        assert_eq!(p2.expr.poly(), &expected);
        assert_eq!(p2, universal_product(2, 3, 4).unwrap());
    }

    #[test]
    fn low_degree_compositions() {
        for m in 1..=4 {
            assert_eq!(universal_compose(1, m, m).unwrap().expr, LambdaExpr::r(m));
        }
        for n in 1..=4 {
            assert_eq!(universal_compose(n, 1, n).unwrap().expr, LambdaExpr::r(n));
        }
        let p22 = universal_compose(2, 2, 4).unwrap();
        assert_eq!(p22.expr.to_string(), "Lr1*Lr3 - Lr4");
        assert_eq!(p22, universal_compose(2, 2, 5).unwrap());
    }

    #[test]
    fn stability_is_a_precondition() {
        assert!(matches!(universal_product(3, 2, 3), Err(SymError::Unstable { which: "x", .. })));
        assert!(matches!(universal_product(3, 3, 2), Err(SymError::Unstable { which: "y", .. })));
        assert!(matches!(universal_compose(2, 3, 5), Err(SymError::Unstable { .. })));
    }

    #[test]
    fn oracle_accepts_and_rejects() {
        let p2 = universal_product(2, 2, 2).unwrap();
        assert!(splitting_oracle_check(&p2, 2, 2));
        assert!(splitting_oracle_check(&p2, 3, 1));
        assert!(!splitting_oracle_check(&p2.with_flipped_sign(), 2, 2));
        let p22 = universal_compose(2, 2, 4).unwrap();
        assert!(splitting_oracle_check(&p22, 4, 0));
        assert!(!splitting_oracle_check(&p22.with_flipped_sign(), 4, 0));
    }

    #[test]
    fn json_shape() {
        let p2 = product_poly(2).unwrap();
        let v = serde_json::to_value(&*p2).unwrap();
        assert_eq!(v["kind"], "product");
        assert_eq!(v["n"], 2);
        assert_eq!(v["terms"][0]["monomial"], "Lr1^2*Ls2");
        let c = compose_poly(2, 2).unwrap();
        let v = serde_json::to_value(&*c).unwrap();
        assert_eq!(v["kind"], "composition");
        assert_eq!(v["m"], 2);
    }
}
