use super::{require_depth, Verdict, VerdictKind, Witness};
use crate::error::Result;
use crate::func::{subfunction_perm, vdp_coefficients, CompatibleFn, Subfunction};

/// Measure preservation through depth `depth` from the coordinate functions:
/// level `k` holds iff every `φ_{k,x̄}` is a bijection of the digits.
pub fn check_measure_preserving_coords(f: &CompatibleFn, depth: u32) -> Result<Verdict> {
    require_depth(f, depth)?;
    let p = f.p();
    for k in 0..=depth {
        for prefix in 0..p.pow_unchecked(k) {
            if let Subfunction::NotBijective { first, second, .. } = subfunction_perm(f, k, prefix)? {
                return Ok(Verdict::from_first_failure(
                    VerdictKind::MeasurePreserving,
                    depth,
                    Some((k, Witness::NotBijective { prefix, first, second })),
                ));
            }
        }
    }
    Ok(Verdict::from_first_failure(VerdictKind::MeasurePreserving, depth, None))
}

/// Measure preservation from the normalized van der Put coefficients:
/// `b_0, …, b_{p-1}` must be distinct modulo `p`, and for every level `k ≥ 1`
/// and prefix `x̄ < p^k` the values `b_{x̄ + p^k h}`, `0 < h < p`, must be
/// distinct and nonzero modulo `p`.
pub fn check_measure_preserving_vdp(f: &CompatibleFn, depth: u32) -> Result<Verdict> {
    require_depth(f, depth)?;
    let p = f.p();
    let pp = p.get();
    let c = vdp_coefficients(f, depth + 1)?;
    let b = |m: u64| c.small(m as usize).mod_p();

    let fiber_failure = |ms: &mut dyn Iterator<Item = u64>, allow_zero: bool| -> Option<Witness> {
        let mut owner = vec![u64::MAX; pp as usize];
        for m in ms {
            let r = b(m);
            if r == 0 && !allow_zero {
                return Some(Witness::VdpZero { m });
            }
            let slot = &mut owner[r as usize];
            if *slot != u64::MAX {
                return Some(Witness::VdpCollision { first: *slot, second: m, residue: r });
            }
            *slot = m;
        }
        None
    };

    let mut failure = fiber_failure(&mut (0..pp), true).map(|w| (0, w));
    'levels: for k in 1..=depth {
        if failure.is_some() {
            break;
        }
        let pk = p.pow_unchecked(k);
        for prefix in 0..pk {
            if let Some(w) = fiber_failure(&mut (1..pp).map(|h| prefix + pk * h), false) {
                failure = Some((k, w));
                break 'levels;
            }
        }
    }
    Ok(Verdict::from_first_failure(VerdictKind::MeasurePreserving, depth, failure))
}
