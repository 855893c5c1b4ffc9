//! Mod-2 Steenrod-type algebra on generators `Sq^i`, reduced to admissible
//! normal form with the Adem relations.
//!
//! Two conventions are supported: the classical algebra (`Sq^0 = 1`) and the
//! variant where `Sq^0 = 0`, in which the `k = 0` term of every Adem relation
//! is dropped. The quotient `A/A·Sq^1` is modelled by discarding admissible
//! monomials whose last index is 1.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use serde::Serialize;
use thiserror::Error;

use crate::f2core::{F2Matrix, F2Vec};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SteenrodError {
    #[error("cannot combine elements with conventions {0:?} and {1:?}")]
    ConventionMismatch(Convention, Convention),
    #[error("cannot combine an element of A with one of A/A.Sq1")]
    QuotientMismatch,
    #[error("malformed Steenrod text: {0}")]
    Parse(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Convention {
    Sq0IsOne,
    Sq0IsZero,
}

/// `C(n, k) mod 2` by Lucas: odd exactly when the bits of `k` sit inside those of `n`.
#[inline]
pub fn binom_mod2(n: i64, k: i64) -> bool {
    n >= 0 && k >= 0 && k <= n && (k & !n) == 0
}

/// A word `Sq^{i_1} ... Sq^{i_s}`; ordered by length, then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct SqMonomial(pub Vec<u32>);

impl SqMonomial {
    pub fn new(indices: Vec<u32>) -> Self {
        SqMonomial(indices)
    }

    pub fn one() -> Self {
        SqMonomial(Vec::new())
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_admissible(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= 2 * w[1])
    }

    /// Admissible and not ending in `Sq^1`.
    pub fn in_l0(&self) -> bool {
        self.is_admissible() && self.0.last().is_none_or(|&i| i >= 2)
    }

    /// The spanning condition `b_j >= b_{j+1} + ... + b_s` on the shifted
    /// indices `b_j = i_j - 1`. Kept for comparison with the admissible basis only.
    pub fn satisfies_spanning_condition(&self) -> bool {
        let mut tail = 0u32;
        for &i in self.0.iter().rev() {
            if i - 1 < tail {
                return false;
            }
            tail += i - 1;
        }
        true
    }

    /// Sum of `i_j - 1`, the internal degree once each `Sq^{i+1}` is read as a
    /// degree-`i` operation.
    pub fn reduced_degree(&self) -> u32 {
        self.degree() - self.len() as u32
    }
}

impl Ord for SqMonomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for SqMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SqMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sq[")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for SqMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for SqMonomial {
    type Err = SteenrodError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s
            .trim()
            .strip_prefix("Sq[")
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| SteenrodError::Parse(s.to_string()))?;
        if inner.trim().is_empty() {
            return Ok(SqMonomial::one());
        }
        inner
            .split(',')
            .map(|t| match t.trim().parse::<u32>() {
                Ok(i) if i >= 1 => Ok(i),
                _ => Err(SteenrodError::Parse(s.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(SqMonomial)
    }
}

/// A GF(2)-linear combination of admissible monomials.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SteenrodElement {
    convention: Convention,
    quotient_sq1: bool,
    terms: BTreeSet<SqMonomial>,
}

impl SteenrodElement {
    pub fn zero(convention: Convention) -> Self {
        SteenrodElement { convention, quotient_sq1: false, terms: BTreeSet::new() }
    }

    pub fn one(convention: Convention) -> Self {
        Self::from_admissible(convention, [SqMonomial::one()])
    }

    /// Wraps monomials already known to be admissible; repeated terms cancel.
    pub fn from_admissible(convention: Convention, monos: impl IntoIterator<Item = SqMonomial>) -> Self {
        let mut e = Self::zero(convention);
        for m in monos {
            assert!(m.is_admissible(), "{m} is not admissible");
            e.toggle(m);
        }
        e
    }

    /// Normal form of an arbitrary word.
    pub fn from_word(convention: Convention, word: &[u32]) -> Self {
        adem_reduce(word, convention)
    }

    /// Image in `A/A·Sq^1`.
    pub fn into_quotient(mut self) -> Self {
        self.terms.retain(|m| m.in_l0());
        self.quotient_sq1 = true;
        self
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn is_quotient(&self) -> bool {
        self.quotient_sq1
    }

    pub fn terms(&self) -> impl Iterator<Item = &SqMonomial> {
        self.terms.iter()
    }

    pub fn contains(&self, m: &SqMonomial) -> bool {
        self.terms.contains(m)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Common degree of all terms, `None` for zero or inhomogeneous elements.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.iter().map(SqMonomial::degree);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    fn toggle(&mut self, m: SqMonomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<(), SteenrodError> {
        if self.convention != other.convention {
            return Err(SteenrodError::ConventionMismatch(self.convention, other.convention));
        }
        if self.quotient_sq1 != other.quotient_sq1 {
            return Err(SteenrodError::QuotientMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, SteenrodError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for m in &other.terms {
            out.toggle(m.clone());
        }
        Ok(out)
    }

    /// Product `self * other`. In the quotient only `other` may carry the flag,
    /// since `A/A·Sq^1` is a left module.
    pub fn mul(&self, other: &Self) -> Result<Self, SteenrodError> {
        if self.convention != other.convention {
            return Err(SteenrodError::ConventionMismatch(self.convention, other.convention));
        }
        if self.quotient_sq1 {
            return Err(SteenrodError::QuotientMismatch);
        }
        let mut out = Self::zero(self.convention);
        out.quotient_sq1 = other.quotient_sq1;
        for m in &self.terms {
            let mut acc = other.clone();
            for &k in m.0.iter().rev() {
                acc = left_multiply(k, &acc);
            }
            for t in acc.terms {
                out.toggle(t);
            }
        }
        Ok(out)
    }

    /// Parses `Sq[a,b]+Sq[c]` or `0`, reducing to normal form.
    pub fn parse(convention: Convention, s: &str) -> Result<Self, SteenrodError> {
        let s = s.trim();
        let mut out = Self::zero(convention);
        if s == "0" {
            return Ok(out);
        }
        for part in s.split('+') {
            let m: SqMonomial = part.parse()?;
            out = out.add(&adem_reduce(&m.0, convention))?;
        }
        Ok(out)
    }
}

impl fmt::Display for SteenrodElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, m) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, "+")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for SteenrodElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} ({:?}{})", self.convention, if self.quotient_sq1 { ", mod Sq1" } else { "" })
    }
}

type ProductKey = (Convention, u32, SqMonomial);
type ProductCache = RwLock<HashMap<ProductKey, Arc<Vec<SqMonomial>>>>;

fn product_cache() -> &'static ProductCache {
    static CACHE: OnceLock<ProductCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `Sq^k` times an admissible monomial, as a sorted list of admissible terms.
fn sq_times_monomial(k: u32, m: &SqMonomial, conv: Convention) -> Arc<Vec<SqMonomial>> {
    if k == 0 {
        return Arc::new(match conv {
            Convention::Sq0IsOne => vec![m.clone()],
            Convention::Sq0IsZero => vec![],
        });
    }
    if m.0.first().is_none_or(|&i| k >= 2 * i) {
        let mut v = Vec::with_capacity(m.len() + 1);
        v.push(k);
        v.extend_from_slice(&m.0);
        return Arc::new(vec![SqMonomial(v)]);
    }
    let key = (conv, k, m.clone());
    if let Some(hit) = product_cache().read().unwrap().get(&key) {
        return hit.clone();
    }

    let i = m.0[0];
    let rest = SqMonomial(m.0[1..].to_vec());
    let mut acc: BTreeSet<SqMonomial> = BTreeSet::new();
    let mut toggle = |t: SqMonomial| {
        if !acc.remove(&t) {
            acc.insert(t);
        }
    };
    let c_min = match conv {
        Convention::Sq0IsOne => 0,
        Convention::Sq0IsZero => 1,
    };
    for c in c_min..=k / 2 {
        if !binom_mod2(i as i64 - c as i64 - 1, k as i64 - 2 * c as i64) {
            continue;
        }
        let a = k + i - c;
        for t in sq_times_monomial(c, &rest, conv).iter() {
            for u in sq_times_monomial(a, t, conv).iter() {
                toggle(u.clone());
            }
        }
    }
    let out = Arc::new(acc.into_iter().collect::<Vec<_>>());
    product_cache().write().unwrap().insert(key, out.clone());
    out
}

/// Admissible normal form of the word `Sq^{w_1} ... Sq^{w_s}`.
pub fn adem_reduce(word: &[u32], convention: Convention) -> SteenrodElement {
    let mut acc = SteenrodElement::one(convention);
    for &k in word.iter().rev() {
        acc = left_multiply(k, &acc);
    }
    acc
}

/// `Sq^k · x`, reduced modulo `A·Sq^1` when `x` lives in the quotient.
pub fn left_multiply(k: u32, x: &SteenrodElement) -> SteenrodElement {
    let mut out = SteenrodElement::zero(x.convention);
    out.quotient_sq1 = x.quotient_sq1;
    for m in &x.terms {
        for t in sq_times_monomial(k, m, x.convention).iter() {
            if !x.quotient_sq1 || t.in_l0() {
                out.toggle(t.clone());
            }
        }
    }
    out
}

/// Sorted admissible monomials of one degree, with a position index.
#[derive(Debug)]
pub struct L0Basis {
    pub degree: u32,
    pub quotient_sq1: bool,
    pub monomials: Vec<SqMonomial>,
    index: HashMap<SqMonomial, usize>,
}

impl L0Basis {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn position(&self, m: &SqMonomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Coordinate vector of `x`, which must be homogeneous of this degree.
    pub fn coordinates(&self, x: &SteenrodElement) -> F2Vec {
        let mut v = F2Vec::zeros(self.len());
        for m in x.terms() {
            let p = self
                .position(m)
                .unwrap_or_else(|| panic!("{m} is not in the degree-{} basis", self.degree));
            v.flip(p);
        }
        v
    }

    pub fn element(&self, convention: Convention, v: &F2Vec) -> SteenrodElement {
        let mut e = SteenrodElement::from_admissible(convention, v.ones().map(|i| self.monomials[i].clone()));
        e.quotient_sq1 = self.quotient_sq1;
        e
    }
}

fn admissible_with_first_at_most(degree: u32, max_first: u32, out: &mut Vec<SqMonomial>, prefix: &mut Vec<u32>) {
    if degree == 0 {
        out.push(SqMonomial(prefix.clone()));
        return;
    }
    for i in 1..=degree.min(max_first) {
        prefix.push(i);
        admissible_with_first_at_most(degree - i, i / 2, out, prefix);
        prefix.pop();
    }
}

type BasisCache = RwLock<HashMap<(u32, bool), Arc<L0Basis>>>;

/// Admissible monomials of `degree` (not ending in 1 when `quotient_sq1`), in
/// the global length-then-lexicographic order. Cached once per degree.
pub fn basis(degree: u32, quotient_sq1: bool) -> Arc<L0Basis> {
    static CACHE: OnceLock<BasisCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(b) = cache.read().unwrap().get(&(degree, quotient_sq1)) {
        return b.clone();
    }
    let mut monos = Vec::new();
    admissible_with_first_at_most(degree, degree, &mut monos, &mut Vec::new());
    if quotient_sq1 {
        monos.retain(SqMonomial::in_l0);
    }
    monos.sort();
    let index = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let b = Arc::new(L0Basis { degree, quotient_sq1, monomials: monos, index });
    cache.write().unwrap().entry((degree, quotient_sq1)).or_insert(b).clone()
}

/// Matrix of `Sq^k ·` from degree `source_degree` to `source_degree + k`;
/// columns follow the source basis order.
pub fn left_mult_matrix(k: u32, source_degree: u32, quotient_sq1: bool, convention: Convention) -> F2Matrix {
    let src = basis(source_degree, quotient_sq1);
    let tgt = basis(source_degree + k, quotient_sq1);
    let cols: Vec<F2Vec> = src
        .monomials
        .iter()
        .map(|m| {
            let mut x = SteenrodElement::from_admissible(convention, [m.clone()]);
            x.quotient_sq1 = quotient_sq1;
            tgt.coordinates(&left_multiply(k, &x))
        })
        .collect();
    F2Matrix::from_columns(tgt.len(), &cols)
}

/// Counts, in one degree, the admissible basis of `A/A·Sq^1` and the words
/// meeting the spanning condition. The two are reported side by side only.
pub fn l0_spanning_audit(degree: u32) -> (usize, usize) {
    let adm = basis(degree, true).len();
    let mut all = Vec::new();
    words_of_degree(degree, &mut all, &mut Vec::new());
    let spanning = all.iter().filter(|m| m.satisfies_spanning_condition()).count();
    (adm, spanning)
}

fn words_of_degree(degree: u32, out: &mut Vec<SqMonomial>, prefix: &mut Vec<u32>) {
    if degree == 0 {
        out.push(SqMonomial(prefix.clone()));
        return;
    }
    for i in 1..=degree {
        prefix.push(i);
        words_of_degree(degree - i, out, prefix);
        prefix.pop();
    }
}
