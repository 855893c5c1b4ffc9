//! Truncated p-adic integers `Z/p^N` and the principal unit groups they model.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;
use thiserror::Error;

pub const DEFAULT_PRECISION: u32 = 12;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum PadicError {
    #[error("root not defined: {0}")]
    RootDomain(String),
    #[error("{l} is not a topological generator of Z_{p}^x")]
    NotAGenerator { p: u64, l: u64 },
    #[error("{0} is not a unit")]
    NotAUnit(String),
    #[error("{value} is not divisible by {p}^{k}")]
    NotDivisible { value: String, p: u64, k: u32 },
}

/// `p^e` as `u64`, panicking on overflow.
pub fn pow_u64(p: u64, e: u32) -> u64 {
    p.checked_pow(e).unwrap_or_else(|| panic!("{p}^{e} does not fit in a machine word"))
}

/// Number of series terms for `log` at precision `n`, and the guard digits.
fn log_terms(p: u64, n: u32) -> (u64, u32) {
    let vt = if p == 2 { 2 } else { 1 };
    // Terms t^k/k with k*vt - v(k) >= n vanish.
    let mut kmax = 1u64;
    while (kmax * vt) as i64 - (kmax.ilog(p) as i64) < n as i64 {
        kmax += 1;
    }
    (kmax, kmax.ilog(p))
}

/// Largest precision at which every operation here, `log` included, fits in
/// machine words.
pub fn word_precision(p: u64) -> u32 {
    let fits = |e: u32| p.checked_pow(e).is_some_and(|q| q < 1 << 62);
    let mut n = 1;
    while fits(n + 1 + log_terms(p, n + 1).1) {
        n += 1;
    }
    n
}

/// Largest `e` with `p^e | n`; `None` for `n = 0`.
pub fn vp(p: u64, mut n: u64) -> Option<u32> {
    if n == 0 {
        return None;
    }
    let mut e = 0;
    while n.is_multiple_of(p) {
        n /= p;
        e += 1;
    }
    Some(e)
}

fn mulmod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, q: u64) -> u64 {
    let mut r = 1 % q;
    a %= q;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, q);
        }
        a = mulmod(a, a, q);
        e >>= 1;
    }
    r
}

/// Inverse of a unit `a` modulo `p^e`.
fn invmod(a: u64, q: u64) -> Option<u64> {
    let (mut r0, mut r1) = (q as i128, (a % q) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (t0, t1) = (t1, t0 - k * t1);
    }
    (r0 == 1).then(|| t0.rem_euclid(q as i128) as u64)
}

/// An element of `Z/p^prec`, read as a p-adic integer known to precision `prec`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PadicInt {
    p: u64,
    prec: u32,
    residue: u64,
}

impl PadicInt {
    pub fn new(p: u64, prec: u32, value: i64) -> Self {
        assert!(p >= 2 && prec >= 1, "need p >= 2 and precision >= 1");
        let q = pow_u64(p, prec);
        assert!(q < 1 << 62, "p^N must stay below 2^62");
        PadicInt { p, prec, residue: (value as i128).rem_euclid(q as i128) as u64 }
    }

    pub fn from_residue(p: u64, prec: u32, residue: u64) -> Self {
        let q = pow_u64(p, prec);
        assert!(q < 1 << 62, "p^N must stay below 2^62");
        PadicInt { p, prec, residue: residue % q }
    }

    pub fn zero(p: u64, prec: u32) -> Self {
        Self::new(p, prec, 0)
    }

    pub fn one(p: u64, prec: u32) -> Self {
        Self::new(p, prec, 1)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn modulus(&self) -> u64 {
        pow_u64(self.p, self.prec)
    }

    /// Representative in `(-p^N/2, p^N/2]`.
    pub fn signed(&self) -> i64 {
        let q = self.modulus();
        if self.residue > q / 2 {
            self.residue as i64 - q as i64
        } else {
            self.residue as i64
        }
    }

    /// Valuation, equal to the precision for zero.
    pub fn valuation(&self) -> u32 {
        vp(self.p, self.residue).unwrap_or(self.prec)
    }

    pub fn is_zero(&self) -> bool {
        self.residue == 0
    }

    pub fn is_unit(&self) -> bool {
        !self.residue.is_multiple_of(self.p)
    }

    /// `x = 1 mod p` for odd `p`, `x = 1 mod 4` for `p = 2`.
    pub fn is_principal(&self) -> bool {
        let m = if self.p == 2 { 4 } else { self.p };
        self.prec >= 1 && self.residue % m.min(self.modulus()) == 1 % m.min(self.modulus())
    }

    /// Reduces to a lower precision.
    pub fn truncate(&self, prec: u32) -> Self {
        let prec = prec.min(self.prec);
        Self::from_residue(self.p, prec, self.residue)
    }

    fn common(&self, other: &Self) -> (u64, u32, u64) {
        assert_eq!(self.p, other.p, "mixing primes {} and {}", self.p, other.p);
        let prec = self.prec.min(other.prec);
        (self.p, prec, pow_u64(self.p, prec))
    }

    pub fn pow(&self, e: u64) -> Self {
        Self { residue: powmod(self.residue, e, self.modulus()), ..*self }
    }

    pub fn inverse(&self) -> Result<Self, PadicError> {
        invmod(self.residue, self.modulus())
            .map(|r| Self { residue: r, ..*self })
            .ok_or_else(|| PadicError::NotAUnit(self.to_string()))
    }

    /// `x^e` for any integer `e`; negative exponents need a unit.
    pub fn pow_i(&self, e: i64) -> Result<Self, PadicError> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inverse()?.pow(e.unsigned_abs()))
        }
    }

    /// Exact division by `p^k`; the result is known to precision `N - k`.
    pub fn div_p_pow(&self, k: u32) -> Result<Self, PadicError> {
        if k == 0 {
            return Ok(*self);
        }
        if self.valuation() < k {
            return Err(PadicError::NotDivisible { value: self.to_string(), p: self.p, k });
        }
        if k >= self.prec {
            return Err(PadicError::NotDivisible { value: format!("{self} (no digits left)"), p: self.p, k });
        }
        Ok(Self::from_residue(self.p, self.prec - k, self.residue / pow_u64(self.p, k)))
    }

    /// The unique principal unit `y` with `y^den = x^num`, by Newton iteration.
    pub fn unit_pow(&self, num: i64, den: i64) -> Result<Self, PadicError> {
        if den == 0 {
            return Err(PadicError::RootDomain("zero denominator".into()));
        }
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        if (den as u64).is_multiple_of(self.p) {
            return Err(PadicError::RootDomain(format!("denominator {den} divisible by {}", self.p)));
        }
        if den == 1 {
            return self.pow_i(num);
        }
        if self.p == 2 && self.is_unit() && !self.is_principal() {
            // (-1)^{1/den} = -1 for odd den.
            let r = (-*self).unit_pow(num, den)?;
            return Ok(if num % 2 == 0 { r } else { -r });
        }
        if !self.is_principal() {
            let want = if self.p == 2 { "1 mod 4" } else { "1 mod p" };
            return Err(PadicError::RootDomain(format!("{self} is not {want}")));
        }
        let z = self.pow_i(num)?;
        let d = Self::new(self.p, self.prec, den);
        let mut y = Self::one(self.p, self.prec);
        for _ in 0..(2 * self.prec + 8) {
            let f = y.pow(den as u64) - z;
            if f.is_zero() {
                return Ok(y);
            }
            let df = d * y.pow(den as u64 - 1);
            y = y - f * df.inverse()?;
        }
        Err(PadicError::RootDomain(format!("Newton iteration did not settle for {self}^({num}/{den})")))
    }

    /// `log x` for a principal unit, by the power series computed with enough
    /// guard digits that every division by `k` is exact.
    pub fn log(&self) -> Result<Self, PadicError> {
        if !self.is_principal() {
            return Err(PadicError::RootDomain(format!("log of non-principal {self}")));
        }
        let p = self.p;
        let n = self.prec;
        let (kmax, guard) = log_terms(p, n);
        let qg = pow_u64(p, n + guard);
        let t = (self.residue + qg - 1) % qg;
        let mut acc: u128 = 0;
        let mut tk = 1u64;
        for k in 1..=kmax {
            tk = mulmod(tk, t, qg);
            let e = vp(p, k).unwrap();
            let kk = k / pow_u64(p, e);
            let term = (tk / pow_u64(p, e)) as u128 * invmod(kk, qg).unwrap() as u128 % qg as u128;
            if k % 2 == 1 {
                acc = (acc + term) % qg as u128;
            } else {
                acc = (acc + qg as u128 - term) % qg as u128;
            }
        }
        Ok(Self::from_residue(p, n, acc as u64))
    }
}

impl fmt::Display for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}^{}", self.signed(), self.p, self.prec)
    }
}

impl Add for PadicInt {
    type Output = PadicInt;
    fn add(self, o: PadicInt) -> PadicInt {
        let (p, prec, q) = self.common(&o);
        PadicInt { p, prec, residue: ((self.residue % q) + (o.residue % q)) % q }
    }
}

impl Sub for PadicInt {
    type Output = PadicInt;
    fn sub(self, o: PadicInt) -> PadicInt {
        let (p, prec, q) = self.common(&o);
        PadicInt { p, prec, residue: ((self.residue % q) + q - (o.residue % q)) % q }
    }
}

impl Mul for PadicInt {
    type Output = PadicInt;
    fn mul(self, o: PadicInt) -> PadicInt {
        let (p, prec, q) = self.common(&o);
        PadicInt { p, prec, residue: mulmod(self.residue, o.residue, q) }
    }
}

impl Neg for PadicInt {
    type Output = PadicInt;
    fn neg(self) -> PadicInt {
        let q = self.modulus();
        PadicInt { residue: (q - self.residue) % q, ..self }
    }
}

/// Checks that `l` topologically generates `Z_p^x` (odd `p`) or `Z_2^x / {+-1}`.
pub fn check_generator(p: u64, l: u64) -> Result<(), PadicError> {
    let err = PadicError::NotAGenerator { p, l };
    if p == 2 {
        return if l % 8 == 3 || l % 8 == 5 { Ok(()) } else { Err(err) };
    }
    if l.is_multiple_of(p) {
        return Err(err);
    }
    // Order of l mod p is p-1, and l^{p-1} != 1 mod p^2.
    let order_full = (1..p).find(|&k| powmod(l, k, p) == 1).unwrap();
    if order_full != p - 1 || powmod(l, p - 1, p * p) == 1 {
        return Err(err);
    }
    Ok(())
}

/// Smallest primitive root modulo `p^2` (for `p = 2`, the generator 3 of `Z_2^x/{+-1}`).
pub fn default_generator(p: u64) -> u64 {
    (2..).find(|&l| check_generator(p, l).is_ok()).unwrap()
}

/// `v_p(1 - l^i)` for a topological generator `l` and `i >= 1`, from the
/// structure of `Z_p^x`.
pub fn valuation_one_minus_power(p: u64, l: u64, i: u64) -> Result<u32, PadicError> {
    check_generator(p, l)?;
    assert!(i >= 1, "exponent must be positive");
    if p == 2 {
        // l = +-3 mod 8: v(l - 1) and v(l + 1) are 1 and 2 in some order.
        let v_minus = vp(2, l - 1).unwrap();
        return Ok(if i % 2 == 1 { v_minus } else { 3 + vp(2, i).unwrap() - 1 });
    }
    if !i.is_multiple_of(p - 1) {
        return Ok(0);
    }
    Ok(vp(p, i).unwrap() + 1)
}

/// Order of `(1 + p^b Z_p) / (1 + p^a Z_p)` for `a >= b >= 1`.
pub fn quotient_order(p: u64, a: u32, b: u32) -> u64 {
    assert!(a >= b && b >= 1, "need a >= b >= 1");
    pow_u64(p, a - b)
}

/// Splits a 2-adic unit as `sign * u` with `u = 1 mod 4`.
pub fn two_adic_sign(x: &PadicInt) -> Result<(bool, PadicInt), PadicError> {
    assert_eq!(x.prime(), 2);
    if !x.is_unit() {
        return Err(PadicError::NotAUnit(x.to_string()));
    }
    if x.residue() % 4 == 1 {
        Ok((false, *x))
    } else {
        Ok((true, -*x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_signed() {
        let x = PadicInt::new(3, 4, -5);
        assert_eq!(x.signed(), -5);
        assert_eq!((x * x.inverse().unwrap()).residue(), 1);
        assert!(PadicInt::new(3, 4, 6).inverse().is_err());
    }

    #[test]
    fn mixed_precision_truncates() {
        let a = PadicInt::new(5, 6, 7);
        let b = PadicInt::new(5, 3, 200);
        assert_eq!((a + b).precision(), 3);
        assert_eq!((a + b).residue(), (207 % 125) as u64);
    }
}
