//! Functions whose subfunctions above level `S` are affine in the new digit
//! with a slope depending only on the first `S` digits:
//! `φ_k(x̄, x_k) = A_k(x̄ mod p^S)·x_k + α_k(x̄) mod p` for `S < k`.

use super::{form_prefixes, require_depth, require_odd, SumCondition, Verdict, VerdictKind, Witness};
use crate::error::{Error, Result};
use crate::func::CompatibleFn;
use crate::oracle::is_single_cycle_mod;
use crate::padic::{add_mod, mul_mod, pow_mod, sub_mod};

fn check_slope_form(f: &CompatibleFn, s: u32, a: &impl Fn(u32, u64) -> u64, depth: u32) -> Result<()> {
    let p = f.p().get();
    let ps = f.p().pow_unchecked(s);
    for k in s + 1..=depth {
        for prefix in form_prefixes(f.p(), k) {
            let images = f.subfunction_images(k, prefix);
            let slope = a(k, prefix % ps) % p;
            let alpha = images[0] as u64;
            for (x, &img) in images.iter().enumerate() {
                let want = (alpha + slope * x as u64) % p;
                if img as u64 != want {
                    return Err(Error::FormMismatch {
                        k,
                        prefix,
                        detail: format!(
                            "digit {x} maps to {img}, slope {slope} with offset {alpha} gives {want}"
                        ),
                    });
                }
            }
        }
    }
    Ok(())
}

/// `L_k = 2^{-1} Σ_i τ_i - Σ_i τ_i · D_i / p^k mod p` over the orbit
/// `y_0 = 0, y_{i+1} = f(y_i) mod p^S`, `i < p^S`, where
/// `τ_i = Π_{i<j<p^S} A_k(y_j)` and
/// `D_i = p^{k-S} y_{i+1} - Σ_{β<p^{k-S}} f(y_i + p^S β) mod p^{k+1}`.
fn slope_sum(f: &CompatibleFn, s: u32, a: &impl Fn(u32, u64) -> u64, k: u32) -> Result<SumCondition> {
    let pr = f.p();
    let p = pr.get();
    let ps = pr.pow_unchecked(s);
    let pk = pr.pow_unchecked(k);
    let q = pk * p;
    let lifts = pr.pow_unchecked(k - s);

    let mut orbit = Vec::with_capacity(ps as usize + 1);
    orbit.push(0u64);
    for i in 0..ps as usize {
        orbit.push(f.value(orbit[i]) % ps);
    }
    let mut tau = vec![1u64; ps as usize];
    for i in (0..ps as usize - 1).rev() {
        tau[i] = mul_mod(tau[i + 1], a(k, orbit[i + 1]) % p, p);
    }

    let half = pow_mod(2, p - 2, p);
    let mut lhs = mul_mod(half, tau.iter().fold(0, |acc, &t| add_mod(acc, t, p)), p);
    for i in 0..ps as usize {
        let fiber = (0..lifts).fold(0, |acc, beta| add_mod(acc, f.value(orbit[i] + ps * beta) % q, q));
        let d = sub_mod(mul_mod(lifts, orbit[i + 1], q), fiber, q);
        if !d.is_multiple_of(pk) {
            return Err(Error::InexactDivision {
                k,
                numerator: d,
                context: format!("fiber sum over prefix {}", orbit[i]),
            });
        }
        lhs = sub_mod(lhs, mul_mod(tau[i], (d / pk) % p, p), p);
    }
    Ok(SumCondition::new(k, lhs))
}

/// Ergodicity of a function with slope form above level `S`; `a(k, x̄)` gives
/// `A_k` at prefixes `x̄ < p^S`.
///
/// Levels `0..=S` are decided exhaustively. Level `k > S` holds iff the lower
/// levels hold, `Π_{x̄<p^S} A_k(x̄) ≡ 1 mod p`, and `L_k ≢ 0 mod p`. When
/// `S ≥ 1` the value of `L_S` is reported as a note without affecting the verdict.
pub fn check_ergodic_fixed_derivative(
    f: &CompatibleFn,
    s: u32,
    a: impl Fn(u32, u64) -> u64,
    depth: u32,
) -> Result<Verdict> {
    require_odd(f.p())?;
    require_depth(f, depth)?;
    check_slope_form(f, s, &a, depth)?;
    let p = f.p().get();
    let ps = f.p().pow_unchecked(s);

    let mut failure = None;
    for k in 0..=s.min(depth) {
        let c = is_single_cycle_mod(f, k + 1)?;
        if !c.single_cycle {
            failure = Some((k, Witness::OracleCycle { orbit_length: c.orbit_length }));
            break;
        }
    }
    let mut notes = Vec::new();
    if failure.is_none() && s >= 1 && s <= depth {
        let diag = slope_sum(f, s, &a, s)?;
        notes.push(format!("slope sum evaluated at level {s}: {}", diag.lhs));
    }
    let mut sums = Vec::new();
    for k in s + 1..=depth {
        if failure.is_some() {
            break;
        }
        let product = (0..ps).fold(1, |acc, x| mul_mod(acc, a(k, x) % p, p));
        if product != 1 {
            failure = Some((
                k,
                Witness::Condition {
                    detail: format!("product of slopes at level {k} is {product} mod p, expected 1"),
                },
            ));
            break;
        }
        let cond = slope_sum(f, s, &a, k)?;
        sums.push(cond);
        if !cond.holds {
            failure = Some((k, Witness::SumVanishes { lhs: cond.lhs }));
        }
    }
    let mut v = Verdict::from_first_failure(VerdictKind::Ergodic, depth, failure);
    v.sums = sums;
    v.notes = notes;
    Ok(v)
}

/// Slopes `A_k(x̄) = φ_k(x̄, 1) - φ_k(x̄, 0) mod p` read off `f` for
/// `x̄ < p^S`; indexed `[k][x̄]` for `k ≤ depth`.
pub fn infer_slopes(f: &CompatibleFn, s: u32, depth: u32) -> Result<Vec<Vec<u64>>> {
    require_depth(f, depth)?;
    let p = f.p().get();
    let ps = f.p().pow(s)?;
    Ok((0..=depth)
        .map(|k| {
            (0..ps)
                .map(|x| {
                    if k < s {
                        return 0;
                    }
                    let images = f.subfunction_images(k, x);
                    (images[1] as u64 + p - images[0] as u64) % p
                })
                .collect()
        })
        .collect())
}

/// Ergodicity of a function that is uniformly differentiable modulo `p` above
/// level `S` with derivative `df`.
///
/// First checks `f(x + p^k h) ≡ f(x) + p^k h·df(x) mod p^{k+1}` for
/// `S < k ≤ depth`, `x < p^k`, `0 < h < p`, then decides with slopes
/// `A_k(x̄) = df(x̄) mod p`.
pub fn check_ergodic_unif_diff(
    f: &CompatibleFn,
    df: impl Fn(u64) -> u64,
    s: u32,
    depth: u32,
) -> Result<Verdict> {
    require_odd(f.p())?;
    require_depth(f, depth)?;
    let p = f.p().get();
    for k in s + 1..=depth {
        let pk = f.p().pow_unchecked(k);
        let q = pk * p;
        for x in 0..pk {
            let fx = f.value(x) % q;
            let slope = df(x) % p;
            for h in 1..p {
                let want = add_mod(fx, pk * ((h * slope) % p), q);
                if f.value(x + pk * h) % q != want {
                    return Err(Error::DiffMismatch { k, x, h });
                }
            }
        }
    }
    check_ergodic_fixed_derivative(f, s, |_, x| df(x) % p, depth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::{check_ergodic_additive, check_ergodic_general};
    use crate::padic::Prime;

    fn f(src: &str, depth: u32) -> CompatibleFn {
        CompatibleFn::parse(Prime::new(3).unwrap(), depth, src).unwrap()
    }

    #[test]
    fn shift_with_unit_slope() {
        let g = f("1+x", 3);
        let v = check_ergodic_unif_diff(&g, |_| 1, 1, 3).unwrap();
        assert!(v.holds());
        assert_eq!(v.statuses(), check_ergodic_general(&g, 3).unwrap().statuses());
    }

    #[test]
    fn unit_slopes_agree_with_additive() {
        for src in ["1+x", "x", "2+x+3x^2", "1+x+9x^3", "1+x+3diff(x^2)", "2+x+6x^2"] {
            let g = f(src, 3);
            let a = check_ergodic_additive(&g, 3).unwrap();
            let b = check_ergodic_fixed_derivative(&g, 1, |_, _| 1, 3).unwrap();
            assert_eq!(a.statuses(), b.statuses(), "{src}");
        }
    }

    #[test]
    fn squaring_fails_early() {
        let sq = f("x^2", 3);
        let v = check_ergodic_unif_diff(&sq, |x| 2 * x, 1, 3).unwrap();
        assert!(!v.holds_at(0));
    }

    #[test]
    fn wrong_derivative_is_caught() {
        let g = f("1+x+3x^2", 3);
        assert!(matches!(
            check_ergodic_unif_diff(&g, |_| 2, 1, 3),
            Err(Error::DiffMismatch { k: 2, .. })
        ));
    }

    #[test]
    fn slope_form_violation() {
        let h = f("1+2x", 3);
        assert!(matches!(
            check_ergodic_fixed_derivative(&h, 0, |_, _| 1, 3),
            Err(Error::FormMismatch { k: 1, .. })
        ));
    }

    #[test]
    fn slopes_match_derivative() {
        let g = f("1+4x+3x^2", 3);
        let slopes = infer_slopes(&g, 1, 3).unwrap();
        for row in &slopes[2..=3] {
            for (x, &a) in row.iter().enumerate() {
                assert_eq!(a, (4 + 6 * x as u64) % 3);
            }
        }
        let v = check_ergodic_fixed_derivative(&g, 1, |k, x| slopes[k as usize][x as usize], 3).unwrap();
        assert_eq!(v.statuses(), check_ergodic_general(&g, 3).unwrap().statuses());
    }
}
