use serde::{Deserialize, Serialize};

use super::{not_transitive, require_odd, Verdict, VerdictKind, Witness};
use crate::error::{Error, Result};
use crate::func::{affine_coeff, CompatibleFn};
use crate::padic::PadicInt;
use crate::perm::Perm;

/// Ergodicity when every subfunction at level `k` is a power of one generator:
/// `φ_{k,x̄} = g_k^{n(k, x̄)}`.
///
/// The orbit product collapses to `g_k^{Σ_x̄ n(k, x̄)}`, so level `k ≥ 1` holds
/// iff `g_k` is transitive and `Σ_{x̄<p^k} n(k, x̄) ≢ 0 mod p`. `gks[k-1]` is the
/// generator of level `k`.
pub fn check_ergodic_cyclic_subgroup(
    phi0: &Perm,
    gks: &[Perm],
    nfun: impl Fn(u32, u64) -> u64,
    depth: u32,
) -> Result<Verdict> {
    let p = phi0.len() as u64;
    if gks.len() < depth as usize {
        return Err(Error::InvalidParams(format!(
            "{} generators supplied for depth {depth}",
            gks.len()
        )));
    }
    if let Some(g) = gks.iter().find(|g| g.len() as u64 != p) {
        return Err(Error::SizeMismatch { left: g.len(), right: p as usize });
    }
    let mut failure = not_transitive(0, phi0).map(|w| (0, w));
    for k in 1..=depth {
        if failure.is_some() {
            break;
        }
        let g = &gks[k as usize - 1];
        if let Some(w) = not_transitive(0, g) {
            failure = Some((k, w));
            break;
        }
        let pk = p
            .checked_pow(k)
            .ok_or(Error::PrecisionOverflow { p, exponent: k })?;
        let exponent_sum = (0..pk).fold(0u64, |acc, x| (acc + nfun(k, x) % p) % p);
        if exponent_sum == 0 {
            failure = Some((
                k,
                Witness::Condition {
                    detail: format!("exponent sum at level {k} is divisible by p"),
                },
            ));
        }
    }
    Ok(Verdict::from_first_failure(VerdictKind::Ergodic, depth, failure))
}

/// Ergodicity of `c + Σ_k a_k p^k x_k` over the digits of `x`.
///
/// Level 0 holds iff `c ≢ 0` and `a_0 ≡ 1 mod p`; level `k ≥ 1` additionally
/// needs `a_k ≡ 1 mod p`. Coefficients past the end of `a` repeat the last one.
pub fn check_ergodic_perdigit_affine(c: &PadicInt, a: &[PadicInt], depth: u32) -> Result<Verdict> {
    let p = c.prime();
    require_odd(p)?;
    if a.is_empty() {
        return Err(Error::InvalidParams("no digit coefficients".into()));
    }
    if let Some(bad) = a.iter().find(|ak| ak.prime() != p) {
        return Err(Error::PrimeMismatch { left: p.get(), right: bad.prime().get() });
    }
    let mut failure = None;
    if c.mod_p() == 0 {
        failure = Some((
            0,
            Witness::Condition {
                detail: "constant term c ≡ 0 mod p".into(),
            },
        ));
    }
    for k in 0..=depth {
        if failure.is_some() {
            break;
        }
        let ak = affine_coeff(a, k as usize).mod_p();
        if ak != 1 {
            failure = Some((
                k,
                Witness::Condition {
                    detail: format!("a_{k} ≡ {ak} mod p, expected 1"),
                },
            ));
        }
    }
    Ok(Verdict::from_first_failure(VerdictKind::Ergodic, depth, failure))
}

/// Outcome of the sufficient test for `c + r·x + p·(h(x+1) - h(x))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum LemanOutcome {
    /// The function is ergodic at every level.
    Certified,
    /// The test does not apply; this is not a refutation.
    NotApplicable { reason: String },
}

/// Sufficient condition for `c + r·x + p·(h(x+1) - h(x))` (with `r = 1` when
/// absent) to be ergodic: odd `p`, `c ≢ 0` and `r ≡ 1 mod p`, `h` compatible.
pub fn leman_sufficient(c: &PadicInt, r: Option<&PadicInt>, h: &CompatibleFn) -> LemanOutcome {
    let p = c.prime();
    let not = |reason: String| LemanOutcome::NotApplicable { reason };
    if p.is_two() {
        return not("the test is stated for odd p".into());
    }
    if h.p() != p {
        return not(format!("h is defined over p = {}, c over p = {p}", h.p()));
    }
    if r.is_some_and(|r| r.prime() != p) {
        return not("r is defined over a different prime".into());
    }
    if c.mod_p() == 0 {
        return not("c ≡ 0 mod p".into());
    }
    if let Some(r) = r {
        if r.mod_p() != 1 {
            return not(format!("r ≡ {} mod p, expected 1", r.mod_p()));
        }
    }
    LemanOutcome::Certified
}
