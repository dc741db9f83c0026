//! Construction of ergodic and measure-preserving functions.
//!
//! [`build_ergodic`] fixes `φ_{k,0}` level by level so that the orbit product
//! `F_{k,0}` equals a chosen transitive target; every other subfunction is free.

mod corpus;
mod family;

pub use corpus::{
    affine_grid, random_additive, random_cyclic, random_fixed_derivative, random_gform, random_leman,
    random_perm, random_transitive, CyclicInstance, FixedDerivativeInstance, GformInstance,
    LemanInstance,
};
pub use family::{family_from_json, Family};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::func::TableFn;
use crate::padic::Prime;
use crate::perm::Perm;

/// Free data for one level `k ≥ 1` of an ergodic construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelBlueprint {
    /// `φ_{k,x̄}` for `x̄ < p^k`; entry 0 is ignored and recomputed.
    pub side: Vec<Perm>,
    /// Transitive target `H_k` for the orbit product `F_{k,0}`.
    pub target: Perm,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Blueprint {
    pub p: Prime,
    /// Transitive `φ_0`.
    pub phi0: Perm,
    /// Levels `1..=K`, in order.
    pub levels: Vec<LevelBlueprint>,
}

impl Blueprint {
    pub fn depth(&self) -> u32 {
        self.levels.len() as u32
    }

    /// Replaces every target with `targets[k-1]`.
    pub fn with_targets(mut self, targets: &[Perm]) -> Result<Self> {
        if targets.len() != self.levels.len() {
            return Err(Error::InvalidParams(format!(
                "{} targets for {} levels",
                targets.len(),
                self.levels.len()
            )));
        }
        for (level, t) in self.levels.iter_mut().zip(targets) {
            level.target = t.clone();
        }
        Ok(self)
    }
}

/// `Σ_{j<k} p^j tables[j][x mod p^{j+1}]`, i.e. `f(x) mod p^k`.
fn partial_value(tables: &[Vec<u32>], p: u64, k: usize, x: u64) -> u64 {
    let mut acc = 0;
    let mut scale = 1;
    for t in &tables[..k] {
        acc += t[(x % t.len() as u64) as usize] as u64 * scale;
        scale *= p;
    }
    acc
}

/// Builds the function whose orbit products are `F_{k,0} = H_k` at every level.
///
/// Strictly bottom-up: at level `k` the orbit `y_0 = 0, y_{i+1} = f(y_i) mod p^k`
/// uses the finished lower levels, `G_k = φ_{k,y_{N-1}} ∘ … ∘ φ_{k,y_1}` collects the
/// side tables along it, and `φ_{k,0} = G_k^{-1} ∘ H_k`.
pub fn build_ergodic(bp: &Blueprint) -> Result<TableFn> {
    let p = bp.p;
    let pp = p.get();
    if bp.phi0.len() as u64 != pp {
        return Err(Error::SizeMismatch { left: bp.phi0.len(), right: pp as usize });
    }
    if !bp.phi0.is_transitive() {
        return Err(Error::NotTransitive(format!("φ_0 = {}", bp.phi0)));
    }
    crate::func::table_entries(p, bp.depth())?;

    let mut tables: Vec<Vec<u32>> = vec![bp.phi0.images().to_vec()];
    for (idx, level) in bp.levels.iter().enumerate() {
        let k = idx as u32 + 1;
        let pk = p.pow_unchecked(k);
        if level.side.len() as u64 != pk {
            return Err(Error::InvalidParams(format!(
                "level {k} has {} side tables, expected {pk}",
                level.side.len()
            )));
        }
        if let Some(bad) = level.side.iter().chain([&level.target]).find(|s| s.len() as u64 != pp) {
            return Err(Error::SizeMismatch { left: bad.len(), right: pp as usize });
        }
        if !level.target.is_transitive() {
            return Err(Error::NotTransitive(format!("target at level {k} = {}", level.target)));
        }

        let mut g = Perm::identity(pp as usize);
        let mut y = partial_value(&tables, pp, k as usize, 0) % pk;
        for _ in 1..pk {
            g = level.side[y as usize].compose(&g)?;
            y = partial_value(&tables, pp, k as usize, y) % pk;
        }
        debug_assert_eq!(y, 0, "lower levels are transitive");
        let anchor = g.inverse().compose(&level.target)?;

        let mut t = vec![0u32; (pk * pp) as usize];
        for prefix in 0..pk {
            let perm = if prefix == 0 { &anchor } else { &level.side[prefix as usize] };
            for (xk, &img) in perm.images().iter().enumerate() {
                t[(prefix + pk * xk as u64) as usize] = img;
            }
        }
        tables.push(t);
    }
    TableFn::new(p, tables)
}

/// Blueprint with a random transitive `φ_0`, uniform random side tables, and
/// targets `x ↦ x + 1`. Deterministic in `seed`.
pub fn random_blueprint(seed: u64, p: Prime, depth: u32) -> Result<Blueprint> {
    crate::func::table_entries(p, depth)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = p.get() as usize;
    let phi0 = random_transitive(&mut rng, n);
    let levels = (1..=depth)
        .map(|k| LevelBlueprint {
            side: (0..p.pow_unchecked(k)).map(|_| random_perm(&mut rng, n)).collect(),
            target: Perm::shift(n, 1),
        })
        .collect();
    Ok(Blueprint { p, phi0, levels })
}

/// Uniform random permutation at every node `(k, x̄)`. Deterministic in `seed`.
pub fn random_measure_preserving(seed: u64, p: Prime, depth: u32) -> Result<TableFn> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = p.get() as usize;
    let phi0 = random_perm(&mut rng, n);
    TableFn::from_subfunctions(p, depth, &phi0, |_, _| Ok(random_perm(&mut rng, n)))
}
