//! Ground truth by exhaustion over `Z/p^nZ`, and cross-validation of the
//! orbit-product criterion against it.
//!
//! Oracle levels are moduli exponents: `n` means "modulo `p^n`", which is
//! criterion level `k = n - 1`.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::criteria::check_ergodic_general;
use crate::error::{Error, Result};
use crate::func::CompatibleFn;
use crate::padic::Prime;
use crate::perm::CycleType;

/// Default exponent ceiling for exhaustive checks at prime `p`.
pub fn default_depth_ceiling(p: Prime) -> u32 {
    match p.get() {
        2 => 16,
        3 => 8,
        5 => 6,
        q => {
            let mut n = 1;
            while q.checked_pow(n + 1).is_some_and(|v| v <= 6561) {
                n += 1;
            }
            n
        }
    }
}

fn require_exponent(f: &CompatibleFn, n: u32) -> Result<u64> {
    if n == 0 {
        return Err(Error::ZeroPrecision);
    }
    if n > f.depth() + 1 {
        return Err(Error::DepthExceeded { requested: n, certified: f.depth() + 1 });
    }
    Ok(f.p().pow_unchecked(n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Bijectivity {
    Bijective,
    /// `f(first) ≡ f(second) mod p^n` with `first < second`.
    Collision { first: u64, second: u64 },
}

impl Bijectivity {
    pub fn is_bijective(&self) -> bool {
        matches!(self, Bijectivity::Bijective)
    }
}

/// Whether `x ↦ f(x) mod p^n` permutes `{0, …, p^n - 1}`.
pub fn is_bijective_mod(f: &CompatibleFn, n: u32) -> Result<Bijectivity> {
    let q = require_exponent(f, n)?;
    let mut preimage = vec![u64::MAX; q as usize];
    for x in 0..q {
        let y = (f.value(x) % q) as usize;
        if preimage[y] != u64::MAX {
            return Ok(Bijectivity::Collision { first: preimage[y], second: x });
        }
        preimage[y] = x;
    }
    Ok(Bijectivity::Bijective)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleCheck {
    pub single_cycle: bool,
    /// Steps until the orbit of 0 first returns to 0, or the number of distinct
    /// points visited when it never does.
    pub orbit_length: u64,
}

/// Whether `f mod p^n` is one cycle through all of `Z/p^nZ`, by walking the
/// orbit of 0; at most `p^n` steps.
pub fn is_single_cycle_mod(f: &CompatibleFn, n: u32) -> Result<CycleCheck> {
    let q = require_exponent(f, n)?;
    let mut seen = vec![false; q as usize];
    let mut x = 0u64;
    let mut steps = 0u64;
    loop {
        seen[x as usize] = true;
        x = f.value(x) % q;
        steps += 1;
        if x == 0 {
            return Ok(CycleCheck { single_cycle: steps == q, orbit_length: steps });
        }
        if seen[x as usize] {
            return Ok(CycleCheck { single_cycle: false, orbit_length: steps });
        }
    }
}

/// Cycle lengths of `f mod p^n`; fails unless the reduction is bijective.
pub fn cycle_structure_mod(f: &CompatibleFn, n: u32) -> Result<CycleType> {
    let q = require_exponent(f, n)?;
    if let Bijectivity::Collision { first, second } = is_bijective_mod(f, n)? {
        return Err(Error::NotBijective { level: n, first, second });
    }
    let mut seen = vec![false; q as usize];
    let mut lengths = Vec::new();
    for start in 0..q {
        if seen[start as usize] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x as usize] {
            seen[x as usize] = true;
            x = f.value(x) % q;
            len += 1;
        }
        lengths.push(len);
    }
    Ok(CycleType::from_lengths(lengths))
}

/// The orbit `0, f(0), f(f(0)), …` modulo `p^n` up to its first repetition.
pub fn orbit_of_zero(f: &CompatibleFn, n: u32) -> Result<Vec<u64>> {
    let q = require_exponent(f, n)?;
    let mut seen = vec![false; q as usize];
    let mut out = Vec::new();
    let mut x = 0u64;
    while !seen[x as usize] {
        seen[x as usize] = true;
        out.push(x);
        x = f.value(x) % q;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelPair {
    pub k: u32,
    pub criterion: bool,
    pub oracle: bool,
}

/// Criterion and oracle verdicts for one function at every level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossReport {
    pub id: String,
    pub levels: Vec<LevelPair>,
    pub agree: bool,
    pub micros: u64,
}

/// Runs the orbit-product criterion and the oracle at levels `0..=depth` on
/// every corpus member, in parallel. Report order follows the corpus.
pub fn cross_validate(corpus: &[(String, CompatibleFn)], depth: u32) -> Result<Vec<CrossReport>> {
    corpus
        .par_iter()
        .map(|(id, f)| {
            let start = Instant::now();
            let verdict = check_ergodic_general(f, depth)?;
            let levels = (0..=depth)
                .map(|k| {
                    Ok(LevelPair {
                        k,
                        criterion: verdict.holds_at(k),
                        oracle: is_single_cycle_mod(f, k + 1)?.single_cycle,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let agree = levels.iter().all(|l| l.criterion == l.oracle);
            Ok(CrossReport {
                id: id.clone(),
                levels,
                agree,
                micros: start.elapsed().as_micros() as u64,
            })
        })
        .collect()
}

#[derive(Serialize)]
struct CsvRow<'a> {
    id: &'a str,
    k: u32,
    criterion: bool,
    oracle: bool,
    agree: bool,
    micros: u64,
}

/// One CSV row per function and level: `id,k,criterion,oracle,agree,micros`.
pub fn write_reports_csv<W: Write>(reports: &[CrossReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in reports {
        for l in &r.levels {
            w.serialize(CsvRow {
                id: &r.id,
                k: l.k,
                criterion: l.criterion,
                oracle: l.oracle,
                agree: l.criterion == l.oracle,
                micros: r.micros,
            })
            .map_err(|e| Error::Output(e.to_string()))?;
        }
    }
    w.flush().map_err(|e| Error::Output(e.to_string()))?;
    Ok(())
}
