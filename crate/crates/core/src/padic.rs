//! Truncated p-adic integers and residues modulo `p^k`.
//!
//! A [`PadicInt`] stores its canonical expansion `x = x_0 + x_1 p + … + x_{N-1} p^{N-1}`
//! little-endian, so `digits()[j]` is the coefficient of `p^j`. All arithmetic is
//! exact modulo `p^N`; mixing precisions is an error rather than a silent truncation.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest modulus `p^n` handled by the word-level helpers.
pub const MAX_MODULUS: u64 = 1 << 62;

const MAX_PRIME: u64 = 1 << 31;

/// A prime `p ≥ 2`. Primality is checked at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if !(2..MAX_PRIME).contains(&p) || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Prime(p))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    /// `p^n`, or an error once it leaves the supported range.
    pub fn pow(self, n: u32) -> Result<u64> {
        match self.0.checked_pow(n) {
            Some(v) if v <= MAX_MODULUS => Ok(v),
            _ => Err(Error::PrecisionOverflow {
                p: self.0,
                exponent: n,
            }),
        }
    }

    /// `p^n` for exponents already validated by a caller.
    #[inline]
    pub(crate) fn pow_unchecked(self, n: u32) -> u64 {
        self.0.pow(n)
    }

    pub fn is_two(self) -> bool {
        self.0 == 2
    }
}

impl TryFrom<u64> for Prime {
    type Error = Error;
    fn try_from(p: u64) -> Result<Self> {
        Prime::new(p)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> u64 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    let (a, b) = (a % m, b % m);
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Reduces a signed integer into `[0, m)`.
#[inline]
pub fn reduce_signed(n: i128, m: u64) -> u64 {
    n.rem_euclid(m as i128) as u64
}

/// `u^{-1} mod p`. For `u = 2` this is `2^{p-2} mod p`.
pub fn inv_mod_p(u: i128, p: Prime) -> Result<u64> {
    let r = reduce_signed(u, p.get());
    if r == 0 {
        return Err(Error::NotInvertible { value: u, p: p.get() });
    }
    Ok(pow_mod(r, p.get() - 2, p.get()))
}

/// Digit `j` of `x` in base `p`.
#[inline]
pub fn digit(x: u64, j: u32, p: Prime) -> u64 {
    match p.get().checked_pow(j) {
        Some(pj) => (x / pj) % p.get(),
        None => 0,
    }
}

/// Number of base-`p` digits of `m`, computed by repeated division (never by a float log).
/// Zero has no digits.
pub fn digit_len(mut m: u64, p: Prime) -> u32 {
    let mut len = 0;
    while m > 0 {
        m /= p.get();
        len += 1;
    }
    len
}

/// `⌊log_p m⌋` for `m ≥ 1`.
pub fn floor_log(m: u64, p: Prime) -> u32 {
    debug_assert!(m > 0);
    digit_len(m, p) - 1
}

/// p-adic valuation of a truncated integer. Zero cannot be told apart from a
/// high power of `p` after truncation, so it reports `AtLeast(N)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Valuation {
    Finite(u32),
    AtLeast(u32),
}

impl Valuation {
    /// Lower bound usable for ultrametric comparisons.
    pub fn lower_bound(self) -> u32 {
        match self {
            Valuation::Finite(v) | Valuation::AtLeast(v) => v,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::AtLeast(v) => write!(f, ">= {v}"),
        }
    }
}

/// Fixed-precision p-adic integer.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PadicInt {
    p: Prime,
    digits: Vec<u32>,
}

impl PadicInt {
    pub fn from_digits(p: Prime, digits: Vec<u32>) -> Result<Self> {
        if digits.is_empty() {
            return Err(Error::ZeroPrecision);
        }
        if let Some(&d) = digits.iter().find(|&&d| d as u64 >= p.get()) {
            return Err(Error::InvalidDigit {
                digit: d as u64,
                p: p.get(),
            });
        }
        Ok(PadicInt { p, digits })
    }

    /// Base-`p` expansion of `n mod p^N`; negative `n` is taken as its p-adic complement.
    pub fn from_integer(n: i128, p: Prime, precision: usize) -> Result<Self> {
        if precision == 0 {
            return Err(Error::ZeroPrecision);
        }
        let pp = p.get() as i128;
        let negative = n < 0;
        // |n| digit by digit, then complement when negative.
        let mut mag = n.unsigned_abs();
        let mut digits = Vec::with_capacity(precision);
        for _ in 0..precision {
            digits.push((mag % pp as u128) as u32);
            mag /= pp as u128;
        }
        let out = PadicInt { p, digits };
        Ok(if negative { out.neg() } else { out })
    }

    pub fn zero(p: Prime, precision: usize) -> Result<Self> {
        Self::from_integer(0, p, precision)
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn precision(&self) -> usize {
        self.digits.len()
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(|&d| d == 0)
    }

    /// Digit equality on the shorter of the two expansions.
    pub fn eq_at_common_precision(&self, other: &PadicInt) -> bool {
        self.p == other.p && self.digits.iter().zip(&other.digits).all(|(a, b)| a == b)
    }

    fn check_compatible(&self, other: &PadicInt) -> Result<()> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch {
                left: self.p.get(),
                right: other.p.get(),
            });
        }
        if self.precision() != other.precision() {
            return Err(Error::PrecisionMismatch {
                left: self.precision(),
                right: other.precision(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &PadicInt) -> Result<PadicInt> {
        self.check_compatible(other)?;
        let p = self.p.get();
        let mut carry = 0u64;
        let digits = self
            .digits
            .iter()
            .zip(&other.digits)
            .map(|(&a, &b)| {
                let s = a as u64 + b as u64 + carry;
                carry = s / p;
                (s % p) as u32
            })
            .collect();
        Ok(PadicInt { p: self.p, digits })
    }

    pub fn neg(&self) -> PadicInt {
        // -x = (p^N - 1 - x) + 1
        let p = self.p.get();
        let mut carry = 1u64;
        let digits = self
            .digits
            .iter()
            .map(|&d| {
                let s = (p - 1 - d as u64) + carry;
                carry = s / p;
                (s % p) as u32
            })
            .collect();
        PadicInt { p: self.p, digits }
    }

    pub fn sub(&self, other: &PadicInt) -> Result<PadicInt> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &PadicInt) -> Result<PadicInt> {
        self.check_compatible(other)?;
        let n = self.precision();
        let p = self.p.get() as u128;
        let mut acc = vec![0u128; n];
        for (i, &a) in self.digits.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.digits[..n - i].iter().enumerate() {
                acc[i + j] += a as u128 * b as u128;
            }
        }
        let mut carry = 0u128;
        let digits = acc
            .into_iter()
            .map(|v| {
                let s = v + carry;
                carry = s / p;
                (s % p) as u32
            })
            .collect();
        Ok(PadicInt { p: self.p, digits })
    }

    pub fn valuation(&self) -> Valuation {
        match self.digits.iter().position(|&d| d != 0) {
            Some(v) => Valuation::Finite(v as u32),
            None => Valuation::AtLeast(self.precision() as u32),
        }
    }

    /// Residue `Σ_{j<k} x_j p^j` modulo `p^k`.
    pub fn reduce(&self, k: u32) -> Result<Residue> {
        if k as usize > self.precision() {
            return Err(Error::LevelTooHigh {
                requested: k,
                available: self.precision() as u32,
            });
        }
        let modulus = self.p.pow(k)?;
        let value = self.digits[..k as usize]
            .iter()
            .rev()
            .fold(0u64, |acc, &d| acc * self.p.get() + d as u64);
        debug_assert!(value < modulus);
        Ok(Residue {
            p: self.p,
            level: k,
            value,
        })
    }

    /// Lowest digit, i.e. the value modulo `p`.
    pub fn mod_p(&self) -> u64 {
        self.digits[0] as u64
    }

    /// Drops `j` low digits, assuming they are zero. The quotient keeps the
    /// digits that are still known, so its precision shrinks by `j`.
    pub fn div_by_p_power(&self, j: u32) -> Result<PadicInt> {
        let j = j as usize;
        if j >= self.precision() {
            return Err(Error::LevelTooHigh {
                requested: j as u32,
                available: self.precision() as u32,
            });
        }
        if self.digits[..j].iter().any(|&d| d != 0) {
            return Err(Error::InexactDivision {
                k: j as u32,
                numerator: self.reduce(self.precision().min(12) as u32).map(|r| r.value).unwrap_or(0),
                context: "p-adic integer".into(),
            });
        }
        Ok(PadicInt {
            p: self.p,
            digits: self.digits[j..].to_vec(),
        })
    }
}

impl fmt::Display for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.digits.iter().map(|d| d.to_string()).collect();
        write!(f, "{} (base {})", body.join(","), self.p)
    }
}

impl FromStr for PadicInt {
    type Err = Error;

    /// Parses the canonical form `d0,d1,…,dN-1 (base p)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let open = s
            .find("(base")
            .ok_or_else(|| Error::parse(0, "expected \"(base p)\" suffix"))?;
        let close = s
            .rfind(')')
            .filter(|&c| c > open)
            .ok_or_else(|| Error::parse(s.len(), "unterminated \"(base p)\""))?;
        let p: u64 = s[open + 5..close]
            .trim()
            .parse()
            .map_err(|_| Error::parse(open + 5, "bad base"))?;
        let p = Prime::new(p)?;
        let digits = s[..open]
            .split(',')
            .map(|d| {
                d.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::parse(0, format!("bad digit {d:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        PadicInt::from_digits(p, digits)
    }
}

/// A residue `value mod p^level`, `0 ≤ value < p^level`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Residue {
    p: Prime,
    level: u32,
    value: u64,
}

impl Residue {
    pub fn new(value: u64, level: u32, p: Prime) -> Result<Self> {
        let modulus = p.pow(level)?;
        if value >= modulus {
            return Err(Error::ValueOutOfRange { value, level });
        }
        Ok(Residue { p, level, value })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn modulus(&self) -> u64 {
        self.p.pow_unchecked(self.level)
    }

    pub fn to_padic(&self) -> Result<PadicInt> {
        PadicInt::from_integer(self.value as i128, self.p, self.level.max(1) as usize)
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}^{}", self.value, self.p, self.level)
    }
}
