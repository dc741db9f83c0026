use crate::error::{Error, Result};
use crate::padic::{digit, Prime};
use crate::perm::Perm;

/// Upper bound on `Σ_k p^{k+1}` stored by one [`TableFn`].
pub const TABLE_ENTRY_CAP: u64 = 2_000_000;

/// A compatible function given by its coordinate tables.
///
/// `tables[k]` has `p^{k+1}` entries; entry `x` is digit `k` of `f(x)` for
/// `x < p^{k+1}`. Every such table set defines a compatible function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableFn {
    p: Prime,
    tables: Vec<Vec<u32>>,
}

/// Number of table entries needed for depth `depth`, or an error past the cap.
pub fn table_entries(p: Prime, depth: u32) -> Result<u64> {
    let mut total = 0u64;
    for k in 0..=depth {
        total = total.saturating_add(p.pow(k + 1).unwrap_or(u64::MAX));
    }
    if total > TABLE_ENTRY_CAP {
        return Err(Error::TableTooLarge {
            entries: total,
            cap: TABLE_ENTRY_CAP,
        });
    }
    Ok(total)
}

impl TableFn {
    pub fn new(p: Prime, tables: Vec<Vec<u32>>) -> Result<Self> {
        if tables.is_empty() {
            return Err(Error::ZeroPrecision);
        }
        table_entries(p, tables.len() as u32 - 1)?;
        for (k, t) in tables.iter().enumerate() {
            let want = p.pow(k as u32 + 1)? as usize;
            if t.len() != want {
                return Err(Error::InvalidParams(format!(
                    "table at level {k} has {} entries, expected {want}",
                    t.len()
                )));
            }
            if let Some(&d) = t.iter().find(|&&d| d as u64 >= p.get()) {
                return Err(Error::InvalidDigit { digit: d as u64, p: p.get() });
            }
        }
        Ok(TableFn { p, tables })
    }

    /// Tabulates `f` through digit level `depth`. `f` must be compatible on
    /// `x < p^{depth+1}`; only `f(x) mod p^{k+1}` is read at level `k`.
    pub fn from_fn(p: Prime, depth: u32, f: impl Fn(u64) -> u64) -> Result<Self> {
        table_entries(p, depth)?;
        let top = p.pow(depth + 1)?;
        let values: Vec<u64> = (0..top).map(&f).collect();
        let tables = (0..=depth)
            .map(|k| {
                let n = p.pow_unchecked(k + 1) as usize;
                values[..n].iter().map(|&v| digit(v, k, p) as u32).collect()
            })
            .collect();
        Ok(TableFn { p, tables })
    }

    /// Assembles tables from subfunction permutations: `phi0` at level 0 and
    /// `sub(k, prefix)` for each level `1 ≤ k ≤ depth` and `prefix < p^k`.
    pub fn from_subfunctions(
        p: Prime,
        depth: u32,
        phi0: &Perm,
        mut sub: impl FnMut(u32, u64) -> Result<Perm>,
    ) -> Result<Self> {
        table_entries(p, depth)?;
        let pp = p.get() as usize;
        if phi0.len() != pp {
            return Err(Error::SizeMismatch { left: phi0.len(), right: pp });
        }
        let mut tables = vec![phi0.images().to_vec()];
        for k in 1..=depth {
            let pk = p.pow_unchecked(k);
            let mut t = vec![0u32; (pk as usize) * pp];
            for prefix in 0..pk {
                let perm = sub(k, prefix)?;
                if perm.len() != pp {
                    return Err(Error::SizeMismatch { left: perm.len(), right: pp });
                }
                for (xk, &img) in perm.images().iter().enumerate() {
                    t[prefix as usize + pk as usize * xk] = img;
                }
            }
            tables.push(t);
        }
        Ok(TableFn { p, tables })
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn depth(&self) -> u32 {
        self.tables.len() as u32 - 1
    }

    pub fn tables(&self) -> &[Vec<u32>] {
        &self.tables
    }

    pub fn into_tables(self) -> Vec<Vec<u32>> {
        self.tables
    }

    /// Digit `k` of `f(x)`; `x` is reduced modulo `p^{k+1}`.
    #[inline]
    pub fn coord(&self, k: u32, x: u64) -> u32 {
        let t = &self.tables[k as usize];
        t[(x % t.len() as u64) as usize]
    }

    /// `f(x) mod p^{depth+1}`.
    pub fn value(&self, x: u64) -> u64 {
        let p = self.p.get();
        let mut acc = 0u64;
        let mut scale = 1u64;
        for k in 0..self.tables.len() as u32 {
            acc += self.coord(k, x) as u64 * scale;
            scale *= p;
        }
        acc
    }

    /// `x_k ↦ φ_k(prefix, x_k)` as a raw image list (not necessarily bijective).
    pub fn subfunction_images(&self, k: u32, prefix: u64) -> Vec<u32> {
        let pk = self.p.pow_unchecked(k);
        (0..self.p.get())
            .map(|xk| self.tables[k as usize][(prefix + pk * xk) as usize])
            .collect()
    }

    /// Replaces `φ_{k,prefix}` by `perm`.
    pub fn set_subfunction(&mut self, k: u32, prefix: u64, perm: &Perm) -> Result<()> {
        if k > self.depth() {
            return Err(Error::LevelTooHigh { requested: k, available: self.depth() });
        }
        let pk = self.p.pow_unchecked(k);
        if prefix >= pk {
            return Err(Error::ValueOutOfRange { value: prefix, level: k });
        }
        if perm.len() as u64 != self.p.get() {
            return Err(Error::SizeMismatch { left: perm.len(), right: self.p.get() as usize });
        }
        for (xk, &img) in perm.images().iter().enumerate() {
            self.tables[k as usize][(prefix + pk * xk as u64) as usize] = img;
        }
        Ok(())
    }

    /// Keeps levels `0..=depth`.
    pub fn truncate(&self, depth: u32) -> Result<TableFn> {
        if depth > self.depth() {
            return Err(Error::DepthExceeded { requested: depth, certified: self.depth() });
        }
        Ok(TableFn {
            p: self.p,
            tables: self.tables[..=depth as usize].to_vec(),
        })
    }
}
