//! Compatible (1-Lipschitz) maps `Z_p → Z_p` and their coordinate structure.
//!
//! A function certified to depth `K` is known modulo `p^{K+1}`: its coordinate
//! functions `φ_0, …, φ_K` are all determined. `φ_k(x_0, …, x_k)` is digit `k` of
//! `f(x)`, and for a prefix `x̄ < p^k` the subfunction `φ_{k,x̄}` is
//! `x_k ↦ φ_k(x̄, x_k)`.

mod expr;
mod schema;
mod table;
mod vdp;

use std::sync::OnceLock;

pub use expr::{affine_coeff, Expr};
pub use schema::{FnBody, FnDocument};
pub use table::{table_entries, TableFn, TABLE_ENTRY_CAP};
pub use vdp::{chi, chi_level, vdp_coefficients_raw, vdp_eval, VdpCoefficients, VdpFn};

use crate::error::{Error, Result};
use crate::padic::{digit, Prime, Residue};
use crate::perm::Perm;
use expr::EvalCtx;

/// Moduli up to this size have all their values memoized on first use.
const CACHE_LIMIT: u64 = 1 << 20;

#[derive(Debug, Clone)]
pub enum Repr {
    Expr(Expr),
    Table(TableFn),
    Vdp(VdpFn),
}

/// A compatible function known modulo `p^{depth+1}`.
#[derive(Debug, Clone)]
pub struct CompatibleFn {
    p: Prime,
    depth: u32,
    modulus: u64,
    repr: Repr,
    cache: OnceLock<Vec<u64>>,
}

impl CompatibleFn {
    fn with_repr(p: Prime, depth: u32, repr: Repr) -> Result<Self> {
        let modulus = p.pow(depth + 1)?;
        Ok(CompatibleFn {
            p,
            depth,
            modulus,
            repr,
            cache: OnceLock::new(),
        })
    }

    pub fn from_expr(p: Prime, depth: u32, expr: Expr) -> Result<Self> {
        Self::with_repr(p, depth, Repr::Expr(expr))
    }

    pub fn parse(p: Prime, depth: u32, src: &str) -> Result<Self> {
        Self::from_expr(p, depth, Expr::parse(src)?)
    }

    pub fn from_table(t: TableFn) -> Self {
        let (p, depth) = (t.prime(), t.depth());
        Self::with_repr(p, depth, Repr::Table(t)).expect("table sizes are already bounded")
    }

    pub fn from_vdp(v: VdpFn) -> Self {
        let (p, depth) = (v.prime(), v.depth());
        Self::with_repr(p, depth, Repr::Vdp(v)).expect("coefficient count is already bounded")
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// `p^{depth+1}`.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn repr(&self) -> &Repr {
        &self.repr
    }

    pub fn as_table(&self) -> Option<&TableFn> {
        match &self.repr {
            Repr::Table(t) => Some(t),
            _ => None,
        }
    }

    fn eval_uncached(&self, x: u64) -> u64 {
        match &self.repr {
            Repr::Expr(e) => e.eval(
                x,
                &EvalCtx {
                    p: self.p,
                    digits: self.depth + 1,
                    modulus: self.modulus,
                },
            ),
            Repr::Table(t) => t.value(x),
            Repr::Vdp(v) => v.value(x),
        }
    }

    /// `f(x) mod p^{depth+1}`; `x` is reduced first.
    pub fn value(&self, x: u64) -> u64 {
        let x = x % self.modulus;
        if self.modulus <= CACHE_LIMIT && !matches!(self.repr, Repr::Table(_)) {
            let values = self
                .cache
                .get_or_init(|| (0..self.modulus).map(|y| self.eval_uncached(y)).collect());
            return values[x as usize];
        }
        self.eval_uncached(x)
    }

    /// `f(x) mod p^n` for `n ≤ depth + 1`.
    pub fn eval_mod(&self, x: u64, n: u32) -> Result<u64> {
        if n > self.depth + 1 {
            return Err(Error::LevelTooHigh { requested: n, available: self.depth + 1 });
        }
        Ok(self.value(x) % self.p.pow_unchecked(n))
    }

    pub fn eval(&self, x: &Residue) -> Result<Residue> {
        if x.prime() != self.p {
            return Err(Error::PrimeMismatch { left: self.p.get(), right: x.prime().get() });
        }
        let v = self.eval_mod(x.value(), x.level())?;
        Residue::new(v, x.level(), self.p)
    }

    /// Digit `k` of `f(x)` with no range checks; `k ≤ depth`.
    #[inline]
    pub(crate) fn coord(&self, k: u32, x: u64) -> u32 {
        match &self.repr {
            Repr::Table(t) => t.coord(k, x),
            _ => digit(self.value(x), k, self.p) as u32,
        }
    }

    /// Raw images of `φ_{k,prefix}`; `k ≤ depth`, `prefix < p^k`.
    pub(crate) fn subfunction_images(&self, k: u32, prefix: u64) -> Vec<u32> {
        match &self.repr {
            Repr::Table(t) => t.subfunction_images(k, prefix),
            _ => {
                let pk = self.p.pow_unchecked(k);
                (0..self.p.get()).map(|xk| self.coord(k, prefix + pk * xk)).collect()
            }
        }
    }

    pub fn to_table(&self) -> Result<TableFn> {
        match &self.repr {
            Repr::Table(t) => Ok(t.clone()),
            _ => TableFn::from_fn(self.p, self.depth, |x| self.value(x)),
        }
    }

    pub fn to_vdp(&self) -> Result<VdpFn> {
        match &self.repr {
            Repr::Vdp(v) => Ok(v.clone()),
            _ => VdpFn::from_coefficients(&vdp_coefficients(self, self.depth + 1)?),
        }
    }

    /// Same function, certified to a different depth. Expressions may be
    /// re-certified deeper; tables and coefficients only shallower.
    pub fn with_depth(&self, depth: u32) -> Result<CompatibleFn> {
        match &self.repr {
            Repr::Expr(e) => Self::from_expr(self.p, depth, e.clone()),
            Repr::Table(t) => Ok(Self::from_table(t.truncate(depth)?)),
            Repr::Vdp(v) => Ok(Self::from_vdp(v.truncate(depth)?)),
        }
    }

    pub fn to_document(&self) -> FnDocument {
        let body = match &self.repr {
            Repr::Expr(e) => FnBody::Expr { expr: e.to_string() },
            Repr::Table(t) => FnBody::Table { tables: t.tables().to_vec() },
            Repr::Vdp(v) => FnBody::Vdp { coeffs: v.coeffs().to_vec() },
        };
        FnDocument {
            p: self.p.get(),
            depth: self.depth,
            body,
            meta: None,
        }
    }

    pub fn from_document(doc: &FnDocument) -> Result<Self> {
        let p = Prime::new(doc.p)?;
        let f = match &doc.body {
            FnBody::Expr { expr } => Self::parse(p, doc.depth, expr)?,
            FnBody::Table { tables } => Self::from_table(TableFn::new(p, tables.clone())?),
            FnBody::Vdp { coeffs } => Self::from_vdp(VdpFn::new(p, coeffs.clone())?),
        };
        if f.depth != doc.depth {
            return Err(Error::InvalidParams(format!(
                "declared depth {} but the {} data has depth {}",
                doc.depth,
                doc.body.kind(),
                f.depth
            )));
        }
        Ok(f)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_document(&serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_document()).expect("document serializes")
    }
}

fn check_level(f: &CompatibleFn, k: u32) -> Result<()> {
    if k > f.depth {
        return Err(Error::DepthExceeded { requested: k, certified: f.depth });
    }
    Ok(())
}

/// `φ_k(x̄_k)`: digit `k` of `f(x)`, where `x` must be known to `k+1` digits.
/// Higher digits of `x` are ignored.
pub fn coordinate_fn(f: &CompatibleFn, k: u32, x: &Residue) -> Result<u32> {
    check_level(f, k)?;
    if x.level() < k + 1 {
        return Err(Error::LevelTooHigh { requested: k + 1, available: x.level() });
    }
    Ok(f.coord(k, x.value() % f.p.pow_unchecked(k + 1)))
}

/// Outcome of reading off `φ_{k,x̄}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Subfunction {
    Perm(Perm),
    /// `φ_k(x̄, first) = φ_k(x̄, second)` with `first < second`.
    NotBijective { k: u32, prefix: u64, first: u32, second: u32 },
}

impl Subfunction {
    pub fn into_perm(self) -> Option<Perm> {
        match self {
            Subfunction::Perm(p) => Some(p),
            Subfunction::NotBijective { .. } => None,
        }
    }
}

pub(crate) fn classify_images(k: u32, prefix: u64, images: Vec<u32>) -> Subfunction {
    let mut first_seen = vec![u32::MAX; images.len()];
    for (xk, &img) in images.iter().enumerate() {
        let slot = &mut first_seen[img as usize];
        if *slot != u32::MAX {
            return Subfunction::NotBijective { k, prefix, first: *slot, second: xk as u32 };
        }
        *slot = xk as u32;
    }
    Subfunction::Perm(Perm::new(images).expect("checked injective"))
}

/// `φ_{k,prefix}`: `x_k ↦ φ_k(prefix, x_k)`. At `k = 0` the prefix must be 0
/// and the result is `φ_0`.
pub fn subfunction_perm(f: &CompatibleFn, k: u32, prefix: u64) -> Result<Subfunction> {
    check_level(f, k)?;
    if prefix >= f.p.pow_unchecked(k) {
        return Err(Error::ValueOutOfRange { value: prefix, level: k });
    }
    Ok(classify_images(k, prefix, f.subfunction_images(k, prefix)))
}

/// Outcome of a compatibility scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Compatibility {
    Certified,
    /// `f(x + p^k h) ≢ f(x) mod p^k`.
    CounterExample { k: u32, x: u64, h: u64 },
}

/// Checks `f(x + p^k h) ≡ f(x) mod p^k` for `1 ≤ k ≤ depth`, `x < p^k`, `0 < h < p`.
/// Together these imply that `f mod p^{depth+1}` respects every congruence
/// modulo `p^j`, `j ≤ depth + 1`, on inputs below `p^{depth+1}`.
pub fn is_compatible_up_to(p: Prime, depth: u32, f: impl Fn(u64) -> u64) -> Result<Compatibility> {
    p.pow(depth + 1)?;
    for k in 1..=depth {
        let pk = p.pow_unchecked(k);
        for x in 0..pk {
            let base = f(x) % pk;
            for h in 1..p.get() {
                if f(x + pk * h) % pk != base {
                    return Ok(Compatibility::CounterExample { k, x, h });
                }
            }
        }
    }
    Ok(Compatibility::Certified)
}

/// The induced map `x ↦ f(x) mod p^{k+1}` on `{0, …, p^{k+1}-1}`.
pub fn reduce_fn(f: &CompatibleFn, k: u32) -> Result<Vec<u64>> {
    check_level(f, k)?;
    let q = f.p.pow_unchecked(k + 1);
    Ok((0..q).map(|x| f.value(x) % q).collect())
}

/// Van der Put coefficients of `f` to `n ≤ depth + 1` digits.
pub fn vdp_coefficients(f: &CompatibleFn, n: u32) -> Result<VdpCoefficients> {
    if n > f.depth + 1 {
        return Err(Error::DepthExceeded { requested: n, certified: f.depth + 1 });
    }
    vdp_coefficients_raw(f.p, n, |x| f.value(x))
}
