//! Decision procedures for measure preservation and ergodicity.
//!
//! The general procedures work for every prime and every compatible function.
//! The class-specific ones trade generality for closed-form conditions and
//! require odd `p`; each verifies the shape it relies on before deciding.

mod derivative;
mod general;
mod measure;
mod special;
mod sums;
mod verdict;

pub use derivative::{check_ergodic_fixed_derivative, check_ergodic_unif_diff, infer_slopes};
pub use general::{check_ergodic_anchor_free, check_ergodic_general, orbit_product};
pub use measure::{check_measure_preserving_coords, check_measure_preserving_vdp};
pub use special::{
    check_ergodic_cyclic_subgroup, check_ergodic_perdigit_affine, leman_sufficient, LemanOutcome,
};
pub use sums::{assemble_gform, check_ergodic_additive, check_ergodic_gform};
pub use verdict::{LevelStatus, Status, SumCondition, Verdict, VerdictKind, Witness};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::func::CompatibleFn;
use crate::padic::Prime;
use crate::perm::Perm;

/// Levels with at most this many prefixes are form-checked exhaustively.
pub const FORM_EXHAUSTIVE_PREFIXES: u64 = 1 << 18;
/// Number of prefixes drawn per level above that size.
pub const FORM_SAMPLE_SIZE: usize = 4096;
/// Seed of the prefix sampler; level `k` uses `FORM_SAMPLE_SEED + k`.
pub const FORM_SAMPLE_SEED: u64 = 0x0dd5_eed0;

fn require_odd(p: Prime) -> Result<()> {
    if p.is_two() {
        return Err(Error::UnsupportedPrime(2));
    }
    Ok(())
}

fn require_depth(f: &CompatibleFn, depth: u32) -> Result<()> {
    if depth > f.depth() {
        return Err(Error::DepthExceeded { requested: depth, certified: f.depth() });
    }
    Ok(())
}

/// Prefixes inspected by form checks at level `k`: all of them when few,
/// otherwise 0 plus a fixed-seed sample.
fn form_prefixes(p: Prime, k: u32) -> Vec<u64> {
    let n = p.pow_unchecked(k);
    if n <= FORM_EXHAUSTIVE_PREFIXES {
        return (0..n).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(FORM_SAMPLE_SEED + k as u64);
    std::iter::once(0)
        .chain((0..FORM_SAMPLE_SIZE).map(|_| rng.gen_range(0..n)))
        .collect()
}

/// Level-0 verdict: `φ_0` must be a transitive permutation.
fn level_zero(f: &CompatibleFn) -> Option<Witness> {
    match crate::func::subfunction_perm(f, 0, 0).expect("level 0 exists") {
        crate::func::Subfunction::NotBijective { prefix, first, second, .. } => {
            Some(Witness::NotBijective { prefix, first, second })
        }
        crate::func::Subfunction::Perm(phi0) => not_transitive(0, &phi0),
    }
}

fn not_transitive(anchor: u64, product: &Perm) -> Option<Witness> {
    (!product.is_transitive()).then(|| Witness::NotTransitive {
        anchor,
        product: product.to_string(),
        cycle_type: product.cycle_type().lengths().to_vec(),
    })
}
