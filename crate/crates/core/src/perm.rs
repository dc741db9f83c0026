//! Permutations of `{0, …, n-1}`.
//!
//! Composition is right-to-left everywhere in the crate: `g.compose(&f)` is
//! `g ∘ f`, i.e. `x ↦ g(f(x))`. Products along an orbit are built by
//! left-multiplying the newest factor.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn new(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            let v = v as usize;
            if v >= n {
                return Err(Error::NotAPermutation(format!("image {v} out of range 0..{n}")));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::NotAPermutation(format!("image {v} repeated")));
            }
        }
        Ok(Perm { images })
    }

    pub fn identity(n: usize) -> Self {
        Perm {
            images: (0..n as u32).collect(),
        }
    }

    /// `x ↦ x + c mod n`.
    pub fn shift(n: usize, c: u64) -> Self {
        let c = (c % n as u64) as u32;
        Perm {
            images: (0..n as u32).map(|x| (x + c) % n as u32).collect(),
        }
    }

    /// `x ↦ a·x + b mod n` (a bijection when `gcd(a, n) = 1`).
    pub fn affine(n: usize, a: u64, b: u64) -> Result<Self> {
        let n64 = n as u64;
        Perm::new((0..n64).map(|x| ((a % n64 * x + b) % n64) as u32).collect())
    }

    /// Builds a permutation from disjoint cycles; points not mentioned are fixed.
    pub fn from_cycles(n: usize, cycles: &[Vec<u32>]) -> Result<Self> {
        let mut images: Vec<u32> = (0..n as u32).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (i, &a) in cycle.iter().enumerate() {
                let a_us = a as usize;
                if a_us >= n || std::mem::replace(&mut touched[a_us], true) {
                    return Err(Error::NotAPermutation(format!("bad cycle entry {a}")));
                }
                images[a_us] = cycle[(i + 1) % cycle.len()];
            }
        }
        Perm::new(images)
    }

    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.images[x as usize]
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i as u32 == v)
    }

    /// `self ∘ inner`: `inner` acts first.
    pub fn compose(&self, inner: &Perm) -> Result<Perm> {
        if self.len() != inner.len() {
            return Err(Error::SizeMismatch {
                left: self.len(),
                right: inner.len(),
            });
        }
        Ok(Perm {
            images: inner.images.iter().map(|&x| self.images[x as usize]).collect(),
        })
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0u32; self.len()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v as usize] = i as u32;
        }
        Perm { images }
    }

    /// `n`-fold composition; `power(0)` is the identity.
    pub fn power(&self, mut n: u64) -> Perm {
        let mut acc = Perm::identity(self.len());
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = base.compose(&acc).expect("same size");
            }
            base = base.compose(&base).expect("same size");
            n >>= 1;
        }
        acc
    }

    /// `g ∘ self ∘ g⁻¹`.
    pub fn conjugate_by(&self, g: &Perm) -> Result<Perm> {
        g.compose(self)?.compose(&g.inverse())
    }

    /// Disjoint cycles, each starting at its smallest point, ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x as u32);
                x = self.images[x] as usize;
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_type(&self) -> CycleType {
        CycleType::from_lengths(self.cycles().iter().map(|c| c.len() as u64).collect())
    }

    /// Least `n ≥ 1` with `self^n = ε`, as the lcm of the cycle lengths.
    pub fn order(&self) -> u64 {
        self.cycles()
            .iter()
            .map(|c| c.len() as u64)
            .fold(1, |acc, l| acc / gcd(acc, l) * l)
    }

    /// True iff the permutation is a single cycle through every point.
    pub fn is_transitive(&self) -> bool {
        let n = self.len();
        if n == 0 {
            return false;
        }
        let mut x = self.images[0];
        let mut len = 1;
        while x != 0 {
            x = self.images[x as usize];
            len += 1;
        }
        len == n
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl TryFrom<Vec<u32>> for Perm {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Perm::new(v)
    }
}

impl From<Perm> for Vec<u32> {
    fn from(p: Perm) -> Vec<u32> {
        p.images
    }
}

/// One-line cycle notation, e.g. `(0 1 2)(3)(4)`.
impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for cycle in self.cycles() {
            let body: Vec<String> = cycle.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}

/// Accepts either an image list `1,2,0` or cycle notation `(0 1 2)(3)`.
/// Cycle notation must mention every point so the size is known.
impl FromStr for Perm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('(') {
            let mut cycles = Vec::new();
            for chunk in s.split(')').map(str::trim).filter(|c| !c.is_empty()) {
                let body = chunk
                    .strip_prefix('(')
                    .ok_or_else(|| Error::parse(0, format!("bad cycle {chunk:?}")))?;
                let cycle = body
                    .split_whitespace()
                    .map(|t| t.parse::<u32>().map_err(|_| Error::parse(0, format!("bad point {t:?}"))))
                    .collect::<Result<Vec<_>>>()?;
                cycles.push(cycle);
            }
            let n: usize = cycles.iter().map(Vec::len).sum();
            Perm::from_cycles(n, &cycles)
        } else {
            let images = s
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::parse(0, format!("bad image {t:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            Perm::new(images)
        }
    }
}

/// Multiset of cycle lengths, stored in non-increasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CycleType(Vec<u64>);

impl CycleType {
    pub fn from_lengths(mut lengths: Vec<u64>) -> Self {
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        CycleType(lengths)
    }

    pub fn lengths(&self) -> &[u64] {
        &self.0
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn is_single_cycle(&self) -> bool {
        self.0.len() == 1
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        write!(f, "{{{}}}", body.join(","))
    }
}
