//! Sum conditions for functions whose subfunctions are all digit shifts,
//! `φ_{k,x̄}(x_k) = x_k + α_k(x̄) mod p` for `k ≥ 1`.

use super::{
    form_prefixes, level_zero, not_transitive, orbit_product, require_depth, require_odd, SumCondition,
    Verdict, VerdictKind, Witness,
};
use crate::error::{Error, Result};
use crate::func::{CompatibleFn, TableFn};
use crate::padic::{add_mod, pow_mod, Prime};
use crate::perm::Perm;

/// `2^{p-2} ≡ 2^{-1} mod p`.
fn half(p: Prime) -> u64 {
    pow_mod(2, p.get() - 2, p.get())
}

/// `Σ_{i<n} f(i) mod p^e`, accumulated without storing the values.
fn streaming_sum(n: u64, modulus: u64, f: impl Fn(u64) -> u64) -> u64 {
    (0..n).fold(0, |acc, i| add_mod(acc, f(i) % modulus, modulus))
}

/// `2^{p-2} + p^{-k} Σ_{i<p^k} f(i) mod p`, with the division checked exact.
fn additive_sum(f: &CompatibleFn, k: u32) -> Result<SumCondition> {
    let p = f.p();
    let pk = p.pow_unchecked(k);
    let s = streaming_sum(pk, pk * p.get(), |i| f.value(i));
    if s % pk != 0 {
        return Err(Error::InexactDivision {
            k,
            numerator: s,
            context: format!("sum of f(i) over i < {pk}"),
        });
    }
    Ok(SumCondition::new(k, (half(p) + s / pk) % p.get()))
}

fn check_shift_form(f: &CompatibleFn, depth: u32) -> Result<()> {
    let p = f.p().get();
    for k in 1..=depth {
        for prefix in form_prefixes(f.p(), k) {
            let images = f.subfunction_images(k, prefix);
            let alpha = images[0] as u64;
            for (x, &img) in images.iter().enumerate() {
                let want = (alpha + x as u64) % p;
                if img as u64 != want {
                    return Err(Error::FormMismatch {
                        k,
                        prefix,
                        detail: format!("digit {x} maps to {img}, a shift by {alpha} gives {want}"),
                    });
                }
            }
        }
    }
    Ok(())
}

/// Ergodicity of a function with shift subfunctions.
///
/// Level 0 holds iff `φ_0` is transitive; level 1 is decided by the orbit
/// product `F_{1,0}`; level `k ≥ 2` holds iff `2^{p-2} + p^{-k} Σ_{i<p^k} f(i)`
/// is a unit modulo `p`. The level-1 value of the same sum is recorded as well.
pub fn check_ergodic_additive(f: &CompatibleFn, depth: u32) -> Result<Verdict> {
    require_odd(f.p())?;
    require_depth(f, depth)?;
    check_shift_form(f, depth)?;

    let mut sums = Vec::new();
    let mut notes = Vec::new();
    let mut failure = level_zero(f).map(|w| (0, w));
    if failure.is_none() && depth >= 1 {
        let product = orbit_product(f, 1, 0)?
            .into_perm()
            .expect("shift subfunctions are bijective");
        let s1 = additive_sum(f, 1)?;
        if s1.holds != product.is_transitive() {
            notes.push(format!(
                "level 1: orbit product transitive = {}, sum condition = {}",
                product.is_transitive(),
                s1.holds
            ));
        }
        sums.push(s1);
        failure = not_transitive(0, &product).map(|w| (1, w));
    }
    for k in 2..=depth {
        if failure.is_some() {
            break;
        }
        let s = additive_sum(f, k)?;
        sums.push(s);
        if !s.holds {
            failure = Some((k, Witness::SumVanishes { lhs: s.lhs }));
        }
    }
    let mut v = Verdict::from_first_failure(VerdictKind::Ergodic, depth, failure);
    v.sums = sums;
    v.notes = notes;
    Ok(v)
}

/// `f(x) = φ_0(x_0) + (x - x_0) + p·g(x)` modulo `p^{depth+1}` as a table.
pub fn assemble_gform(phi0: &Perm, g: &CompatibleFn, depth: u32) -> Result<CompatibleFn> {
    let p = g.p();
    if phi0.len() as u64 != p.get() {
        return Err(Error::SizeMismatch { left: phi0.len(), right: p.get() as usize });
    }
    if g.depth() + 1 < depth {
        return Err(Error::DepthExceeded { requested: depth, certified: g.depth() + 1 });
    }
    let q = p.pow(depth + 1)?;
    let pp = p.get();
    let t = TableFn::from_fn(p, depth, |x| {
        let x0 = x % pp;
        let lift = phi0.apply(x0 as u32) as u64 + (x - x0);
        (lift + pp * (g.value(x) % q)) % q
    })?;
    Ok(CompatibleFn::from_table(t))
}

/// Ergodicity of `f = φ_0(x_0) + (x - x_0) + p·g(x)`.
///
/// Level 0 holds iff `φ_0` is transitive; level `k ≥ 1` holds iff
/// `G_k = p^{-(k-1)} (Σ_{i<p^k} g(i) mod p^k)` is a unit modulo `p`.
/// Equivalent to [`check_ergodic_additive`] on the assembled function, since
/// `p^{-k} Σ f(i) ≡ G_k - 2^{-1} mod p` for odd `p`.
pub fn check_ergodic_gform(phi0: &Perm, g: &CompatibleFn, depth: u32) -> Result<Verdict> {
    let p = g.p();
    require_odd(p)?;
    if phi0.len() as u64 != p.get() {
        return Err(Error::SizeMismatch { left: phi0.len(), right: p.get() as usize });
    }
    if g.depth() + 1 < depth {
        return Err(Error::DepthExceeded { requested: depth, certified: g.depth() + 1 });
    }
    let mut sums = Vec::new();
    let mut failure = not_transitive(0, phi0).map(|w| (0, w));
    for k in 1..=depth {
        if failure.is_some() {
            break;
        }
        let pk = p.pow_unchecked(k);
        let below = pk / p.get();
        let s = streaming_sum(pk, pk, |i| g.value(i));
        if s % below != 0 {
            return Err(Error::InexactDivision {
                k: k - 1,
                numerator: s,
                context: format!("sum of g(i) over i < {pk}"),
            });
        }
        let cond = SumCondition::new(k, (s / below) % p.get());
        sums.push(cond);
        if !cond.holds {
            failure = Some((k, Witness::SumVanishes { lhs: cond.lhs }));
        }
    }
    let mut v = Verdict::from_first_failure(VerdictKind::Ergodic, depth, failure);
    v.sums = sums;
    Ok(v)
}
