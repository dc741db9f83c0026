//! Van der Put expansions `f(x) = Σ_m B_m χ(m, x)`.
//!
//! `χ(m, x) = 1` iff `x ≡ m mod p^{n(m)}`, where `n(m)` is the number of base-`p`
//! digits of `m` and `n(0) = 1`. Coefficients are indexed by `m < p^n` for a
//! precision of `n` digits.

use crate::error::{Error, Result};
use crate::padic::{add_mod, digit, digit_len, floor_log, sub_mod, PadicInt, Prime, Residue};

/// `n(m)`: the level at which `χ(m, ·)` is determined.
pub fn chi_level(m: u64, p: Prime) -> u32 {
    digit_len(m, p).max(1)
}

/// `χ(m, x)`; `x` must be known to at least `n(m)` digits.
pub fn chi(m: u64, x: &Residue) -> Result<bool> {
    let p = x.prime();
    let n = chi_level(m, p);
    if x.level() < n {
        return Err(Error::LevelTooHigh { requested: n, available: x.level() });
    }
    let q = p.pow(n)?;
    Ok(x.value() % q == m)
}

/// `B_m` and `b_m = B_m / p^{⌊log_p m⌋}` for `m < p^n`, each to `n` digits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VdpCoefficients {
    p: Prime,
    precision: u32,
    big: Vec<PadicInt>,
    small: Vec<PadicInt>,
}

impl VdpCoefficients {
    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn len(&self) -> usize {
        self.big.len()
    }

    pub fn is_empty(&self) -> bool {
        self.big.is_empty()
    }

    /// `B_m`.
    pub fn big(&self, m: usize) -> &PadicInt {
        &self.big[m]
    }

    /// `b_m`; its precision is `n - ⌊log_p m⌋`.
    pub fn small(&self, m: usize) -> &PadicInt {
        &self.small[m]
    }

    /// `B_m mod p^n` as integers.
    pub fn big_values(&self) -> Vec<u64> {
        let n = self.precision;
        self.big
            .iter()
            .map(|b| b.reduce(n).expect("precision n").value())
            .collect()
    }
}

/// Van der Put coefficients of `f` to precision `n`, from a raw evaluator.
/// Fails with [`Error::NotCompatible`] naming the first `m` whose `B_m` is not
/// divisible by `p^{⌊log_p m⌋}`.
pub fn vdp_coefficients_raw(p: Prime, n: u32, f: impl Fn(u64) -> u64) -> Result<VdpCoefficients> {
    if n == 0 {
        return Err(Error::ZeroPrecision);
    }
    let q = p.pow(n)?;
    let values: Vec<u64> = (0..q).map(|x| f(x) % q).collect();
    let mut big = Vec::with_capacity(q as usize);
    let mut small = Vec::with_capacity(q as usize);
    for m in 0..q {
        let (b, j) = if m < p.get() {
            (values[m as usize], 0)
        } else {
            let j = floor_log(m, p);
            let base = m % p.pow_unchecked(j);
            (sub_mod(values[m as usize], values[base as usize], q), j)
        };
        let b_big = PadicInt::from_integer(b as i128, p, n as usize)?;
        let b_small = b_big.div_by_p_power(j).map_err(|_| {
            Error::NotCompatible(format!(
                "B_{m} = {b} is not divisible by {}^{j}",
                p.get()
            ))
        })?;
        big.push(b_big);
        small.push(b_small);
    }
    Ok(VdpCoefficients {
        p,
        precision: n,
        big,
        small,
    })
}

/// `Σ_{m < p^L} B_m χ(m, x) mod p^L` with `L = level(x)`.
///
/// Only the terms with `χ(m, x) = 1` are visited: `m = x mod p` and, for
/// `2 ≤ t ≤ L`, `m = x mod p^t` whenever digit `t-1` of `x` is nonzero.
pub fn vdp_eval(c: &VdpCoefficients, x: &Residue) -> Result<Residue> {
    if x.prime() != c.p {
        return Err(Error::PrimeMismatch { left: c.p.get(), right: x.prime().get() });
    }
    let level = x.level();
    if level > c.precision {
        return Err(Error::LevelTooHigh { requested: level, available: c.precision });
    }
    if level == 0 {
        return Residue::new(0, 0, c.p);
    }
    let q = c.p.pow(level)?;
    let term = |m: u64| c.big[m as usize].reduce(level).expect("level ≤ precision").value();
    let value = sum_chi_terms(c.p, level, x.value(), term, q);
    Residue::new(value, level, c.p)
}

fn sum_chi_terms(p: Prime, level: u32, x: u64, coeff: impl Fn(u64) -> u64, q: u64) -> u64 {
    let mut acc = coeff(x % p.get()) % q;
    for t in 2..=level {
        if digit(x, t - 1, p) != 0 {
            acc = add_mod(acc, coeff(x % p.pow_unchecked(t)) % q, q);
        }
    }
    acc
}

/// A compatible function stored as its van der Put coefficients `B_m mod p^{K+1}`,
/// `m < p^{K+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VdpFn {
    p: Prime,
    depth: u32,
    coeffs: Vec<u64>,
}

impl VdpFn {
    /// Validates that `B_m ≡ 0 mod p^{⌊log_p m⌋}` for `m ≥ p`, which is exactly
    /// compatibility of the represented function.
    pub fn new(p: Prime, coeffs: Vec<u64>) -> Result<Self> {
        let len = coeffs.len() as u64;
        let n = digit_len(len.saturating_sub(1), p).max(1);
        let q = p.pow(n)?;
        if len != q {
            return Err(Error::InvalidParams(format!(
                "van der Put table needs p^n entries, got {len}"
            )));
        }
        for (m, &b) in coeffs.iter().enumerate() {
            let m = m as u64;
            if b >= q {
                return Err(Error::ValueOutOfRange { value: b, level: n });
            }
            if m >= p.get() {
                let j = floor_log(m, p);
                if b % p.pow_unchecked(j) != 0 {
                    return Err(Error::NotCompatible(format!(
                        "B_{m} = {b} is not divisible by {}^{j}",
                        p.get()
                    )));
                }
            }
        }
        Ok(VdpFn { p, depth: n - 1, coeffs })
    }

    pub fn from_coefficients(c: &VdpCoefficients) -> Result<Self> {
        VdpFn::new(c.p, c.big_values())
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// `f(x) mod p^{depth+1}`.
    pub fn value(&self, x: u64) -> u64 {
        let q = self.coeffs.len() as u64;
        sum_chi_terms(self.p, self.depth + 1, x % q, |m| self.coeffs[m as usize], q)
    }

    pub fn truncate(&self, depth: u32) -> Result<VdpFn> {
        if depth > self.depth {
            return Err(Error::DepthExceeded { requested: depth, certified: self.depth });
        }
        let q = self.p.pow(depth + 1)?;
        Ok(VdpFn {
            p: self.p,
            depth,
            coeffs: self.coeffs[..q as usize].iter().map(|b| b % q).collect(),
        })
    }
}
