use super::{level_zero, not_transitive, require_depth, Verdict, VerdictKind, Witness};
use crate::error::{Error, Result};
use crate::func::{subfunction_perm, CompatibleFn, Subfunction};
use crate::perm::Perm;

/// `F_{k,a} = φ_{k,y_{N-1}} ∘ … ∘ φ_{k,y_1} ∘ φ_{k,y_0}` with `y_0 = a mod p^k`,
/// `y_{i+1} = f(y_i) mod p^k` and `N = p^k`. At `k = 0` this is `φ_0`.
///
/// Returns the first non-bijective factor instead when there is one.
pub fn orbit_product(f: &CompatibleFn, k: u32, anchor: u64) -> Result<Subfunction> {
    require_depth(f, k)?;
    let pk = f.p().pow_unchecked(k);
    let mut y = anchor % pk;
    let mut acc = Perm::identity(f.p().get() as usize);
    for _ in 0..pk {
        match subfunction_perm(f, k, y)? {
            Subfunction::Perm(phi) => acc = phi.compose(&acc)?,
            bad => return Ok(bad),
        }
        y = f.value(y) % pk;
    }
    Ok(Subfunction::Perm(acc))
}

/// Length of the orbit of `anchor` under `f mod p^k`, capped at `p^k + 1`
/// when it never returns.
fn orbit_length(f: &CompatibleFn, k: u32, anchor: u64) -> u64 {
    let pk = f.p().pow_unchecked(k);
    let start = anchor % pk;
    let mut y = f.value(start) % pk;
    let mut n = 1;
    while y != start && n <= pk {
        y = f.value(y) % pk;
        n += 1;
    }
    n
}

/// Ergodicity through `depth` by orbit products anchored at `anchor mod p^k`.
///
/// Level 0 holds iff `φ_0` is transitive. Level `k ≥ 1` holds iff the lower
/// levels hold and `F_{k,anchor}` is a single `p`-cycle; its factors must all be
/// bijective, and the orbit of the anchor modulo `p^k` must have length `p^k`.
pub fn check_ergodic_anchor_free(f: &CompatibleFn, depth: u32, anchor: u64) -> Result<Verdict> {
    require_depth(f, depth)?;
    let mut failure = level_zero(f).map(|w| (0, w));
    for k in 1..=depth {
        if failure.is_some() {
            break;
        }
        let pk = f.p().pow_unchecked(k);
        let a = anchor % pk;
        let len = orbit_length(f, k, a);
        if len != pk {
            // Transitivity of the previous level guarantees a full orbit.
            return Err(Error::NotTransitive(format!(
                "f mod {}^{k} passed level {} but the orbit of {a} has length {len}",
                f.p(),
                k - 1
            )));
        }
        failure = match orbit_product(f, k, a)? {
            Subfunction::NotBijective { prefix, first, second, .. } => {
                Some((k, Witness::NotBijective { prefix, first, second }))
            }
            Subfunction::Perm(product) => not_transitive(a, &product).map(|w| (k, w)),
        };
    }
    Ok(Verdict::from_first_failure(VerdictKind::Ergodic, depth, failure))
}

/// [`check_ergodic_anchor_free`] anchored at 0.
pub fn check_ergodic_general(f: &CompatibleFn, depth: u32) -> Result<Verdict> {
    check_ergodic_anchor_free(f, depth, 0)
}
