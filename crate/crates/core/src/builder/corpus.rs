//! Seeded random members of the function classes, for testing and
//! cross-validation. Every generator is deterministic in its seed.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{build_ergodic, random_blueprint, random_measure_preserving, Family};
use crate::error::Result;
use crate::func::{CompatibleFn, Expr, TableFn};
use crate::padic::Prime;
use crate::perm::Perm;

pub fn random_perm<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Perm {
    let mut images: Vec<u32> = (0..n as u32).collect();
    images.shuffle(rng);
    Perm::new(images).expect("shuffle is a bijection")
}

/// Uniform random `n`-cycle.
pub fn random_transitive<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Perm {
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.shuffle(rng);
    Perm::from_cycles(n, &[order]).expect("one cycle through every point")
}

/// `φ_0`: a random transitive permutation three times out of four, otherwise
/// an arbitrary one.
fn mostly_transitive(rng: &mut ChaCha8Rng, n: usize) -> Perm {
    if rng.gen_bool(0.75) {
        random_transitive(rng, n)
    } else {
        random_perm(rng, n)
    }
}

/// `c ∈ {0, 1, 2}`, `(a_0, a_1, a_2, a_3) ∈ {1, 1+p, 2}^4`: 81 coefficient
/// vectors times 3 constants.
pub fn affine_grid(p: Prime) -> Vec<Family> {
    let choices = [1i64, 1 + p.get() as i64, 2];
    let mut out = Vec::with_capacity(243);
    for c in 0..3 {
        for idx in 0..81usize {
            let a = (0..4)
                .map(|j| choices[(idx / 3usize.pow(j)) % 3])
                .collect();
            out.push(Family::Affine { c, a });
        }
    }
    out
}

/// Shift subfunctions `x_k + α` with random offsets.
pub fn random_additive(seed: u64, p: Prime, depth: u32) -> Family {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = p.get() as usize;
    let phi0 = mostly_transitive(&mut rng, n).images().to_vec();
    let alpha = (1..=depth)
        .map(|k| (0..p.pow_unchecked(k)).map(|_| rng.gen_range(0..p.get() as u32)).collect())
        .collect();
    Family::Additive { phi0, alpha }
}

#[derive(Debug, Clone)]
pub struct GformInstance {
    pub phi0: Perm,
    pub g: CompatibleFn,
}

/// Random `φ_0` and a random table `g` of the given depth.
pub fn random_gform(seed: u64, p: Prime, depth: u32) -> Result<GformInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = p.get() as usize;
    let phi0 = mostly_transitive(&mut rng, n);
    let tables = (0..=depth)
        .map(|k| {
            (0..p.pow_unchecked(k + 1))
                .map(|_| rng.gen_range(0..p.get() as u32))
                .collect()
        })
        .collect();
    let g = CompatibleFn::from_table(TableFn::new(p, tables)?);
    Ok(GformInstance { phi0, g })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemanInstance {
    pub c: i64,
    pub r: i64,
    pub h: Expr,
}

impl LemanInstance {
    pub fn family(&self) -> Family {
        Family::Leman { c: self.c, r: self.r, h: self.h.to_string() }
    }
}

/// `c ≢ 0` and `r ≡ 1 mod p`, with `h` a random cubic.
pub fn random_leman(seed: u64, p: Prime) -> LemanInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pp = p.get() as i64;
    let c = loop {
        let c = rng.gen_range(-pp * pp..pp * pp);
        if c.rem_euclid(pp) != 0 {
            break c;
        }
    };
    let r = 1 + pp * rng.gen_range(-pp..pp);
    let mut h = Expr::Const(rng.gen_range(-5..=5));
    for e in 1..=3 {
        let coeff = Expr::Const(rng.gen_range(-5..=5));
        h = h + coeff * Expr::pow(Expr::X, e);
    }
    LemanInstance { c, r, h }
}

#[derive(Debug, Clone)]
pub struct CyclicInstance {
    pub phi0: Perm,
    pub generators: Vec<Perm>,
    pub exponents: Vec<Vec<u64>>,
}

impl CyclicInstance {
    pub fn family(&self) -> Family {
        Family::Cyclic {
            phi0: self.phi0.images().to_vec(),
            generators: self.generators.iter().map(|g| g.images().to_vec()).collect(),
            exponents: self.exponents.clone(),
        }
    }
}

/// Generators mostly transitive, exponents uniform in `0..p`.
pub fn random_cyclic(seed: u64, p: Prime, depth: u32) -> CyclicInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = p.get() as usize;
    let phi0 = mostly_transitive(&mut rng, n);
    let generators = (0..depth).map(|_| mostly_transitive(&mut rng, n)).collect();
    let exponents = (1..=depth)
        .map(|k| (0..p.pow_unchecked(k)).map(|_| rng.gen_range(0..p.get())).collect())
        .collect();
    CyclicInstance { phi0, generators, exponents }
}

#[derive(Debug, Clone)]
pub struct FixedDerivativeInstance {
    pub f: CompatibleFn,
    pub s: u32,
    /// `slopes[k][x̄]` for `x̄ < p^S`; zero for `k ≤ S`.
    pub slopes: Vec<Vec<u64>>,
}

/// Levels `0..=S` from an ergodic build two times out of three (otherwise
/// arbitrary permutations); above `S`, `φ_{k,x̄}(x_k) = A_k(x̄ mod p^S)·x_k + α`
/// with nonzero slopes whose product is forced to 1 two times out of three.
pub fn random_fixed_derivative(seed: u64, p: Prime, s: u32, depth: u32) -> Result<FixedDerivativeInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pp = p.get();
    let n = pp as usize;
    let lower_seed = rng.gen();
    let lower = if rng.gen_bool(2.0 / 3.0) {
        build_ergodic(&random_blueprint(lower_seed, p, s)?)?
    } else {
        random_measure_preserving(lower_seed, p, s)?
    };
    let ps = p.pow(s)?;
    let force_unit_product = rng.gen_bool(2.0 / 3.0);
    let mut slopes = vec![vec![0u64; ps as usize]; depth as usize + 1];
    for row in slopes.iter_mut().skip(s as usize + 1) {
        for a in row.iter_mut() {
            *a = rng.gen_range(1..pp);
        }
        if force_unit_product {
            let rest = row[..ps as usize - 1]
                .iter()
                .fold(1u64, |acc, &a| acc * a % pp);
            row[ps as usize - 1] = crate::padic::pow_mod(rest, pp - 2, pp);
        }
    }
    let phi0 = Perm::new(lower.tables()[0].clone())?;
    let t = TableFn::from_subfunctions(p, depth, &phi0, |k, x| {
        if k <= s {
            Perm::new(lower.subfunction_images(k, x))
        } else {
            let a = slopes[k as usize][(x % ps) as usize];
            Perm::affine(n, a, rng.gen_range(0..pp))
        }
    })?;
    Ok(FixedDerivativeInstance { f: CompatibleFn::from_table(t), s, slopes })
}
