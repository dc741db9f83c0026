use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::criteria::assemble_gform;
use crate::error::{Error, Result};
use crate::func::{CompatibleFn, Expr, TableFn};
use crate::padic::Prime;
use crate::perm::Perm;

const FAMILY_NAMES: [&str; 5] = ["affine", "leman", "additive", "gform", "cyclic"];

/// Named function families with their parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum Family {
    /// `c + Σ_k a_k p^k x_k`; the last coefficient repeats.
    Affine { c: i64, a: Vec<i64> },
    /// `c + r·x + p·(h(x+1) - h(x))`.
    Leman {
        c: i64,
        #[serde(default = "one")]
        r: i64,
        h: String,
    },
    /// `φ_{k,x̄}(x_k) = x_k + alpha[k-1][x̄] mod p`, with `φ_0 = phi0`.
    Additive { phi0: Vec<u32>, alpha: Vec<Vec<u32>> },
    /// `φ_0(x_0) + (x - x_0) + p·g(x)`.
    Gform { phi0: Vec<u32>, g: String },
    /// `φ_{k,x̄} = generators[k-1]^{exponents[k-1][x̄]}`, with `φ_0 = phi0`.
    Cyclic {
        phi0: Vec<u32>,
        generators: Vec<Vec<u32>>,
        exponents: Vec<Vec<u64>>,
    },
}

fn one() -> i64 {
    1
}

/// Parses `params` (a JSON object) as the parameters of family `name`.
pub fn family_from_json(name: &str, params: Value) -> Result<Family> {
    if !FAMILY_NAMES.contains(&name) {
        return Err(Error::UnknownFamily(name.into()));
    }
    let mut obj = match params {
        Value::Object(m) => m,
        Value::Null => Default::default(),
        other => return Err(Error::InvalidParams(format!("expected an object, got {other}"))),
    };
    obj.insert("family".into(), Value::String(name.into()));
    serde_json::from_value(Value::Object(obj)).map_err(|e| Error::InvalidParams(e.to_string()))
}

fn level_tables<T: Clone>(name: &str, rows: &[Vec<T>], p: Prime, depth: u32) -> Result<()> {
    if rows.len() < depth as usize {
        return Err(Error::InvalidParams(format!(
            "{name} covers {} levels, expected {depth}",
            rows.len()
        )));
    }
    for (i, row) in rows.iter().take(depth as usize).enumerate() {
        let want = p.pow(i as u32 + 1)? as usize;
        if row.len() != want {
            return Err(Error::InvalidParams(format!(
                "{name} at level {} has {} entries, expected {want}",
                i + 1,
                row.len()
            )));
        }
    }
    Ok(())
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Affine { .. } => "affine",
            Family::Leman { .. } => "leman",
            Family::Additive { .. } => "additive",
            Family::Gform { .. } => "gform",
            Family::Cyclic { .. } => "cyclic",
        }
    }

    /// The member of the family at prime `p`, certified to `depth`.
    pub fn build(&self, p: Prime, depth: u32) -> Result<CompatibleFn> {
        match self {
            Family::Affine { c, a } => {
                if a.is_empty() {
                    return Err(Error::InvalidParams("affine needs at least one coefficient".into()));
                }
                CompatibleFn::from_expr(p, depth, Expr::Affine {
                        c: *c as i128,
                        coeffs: a.iter().map(|&v| v as i128).collect(),
                    })
            }
            Family::Leman { c, r, h } => {
                let h = Expr::parse(h)?;
                let linear = Expr::Const(*c as i128) + Expr::Const(*r as i128) * Expr::X;
                let e = linear + Expr::Const(p.get() as i128) * Expr::diff(h);
                CompatibleFn::from_expr(p, depth, e)
            }
            Family::Additive { phi0, alpha } => {
                let phi0 = Perm::new(phi0.clone())?;
                level_tables("alpha", alpha, p, depth)?;
                let n = p.get() as usize;
                let t = TableFn::from_subfunctions(p, depth, &phi0, |k, x| {
                    Ok(Perm::shift(n, alpha[k as usize - 1][x as usize] as u64))
                })?;
                Ok(CompatibleFn::from_table(t))
            }
            Family::Gform { phi0, g } => {
                let phi0 = Perm::new(phi0.clone())?;
                let g = CompatibleFn::parse(p, depth, g)?;
                assemble_gform(&phi0, &g, depth)
            }
            Family::Cyclic { phi0, generators, exponents } => {
                let phi0 = Perm::new(phi0.clone())?;
                if generators.len() < depth as usize {
                    return Err(Error::InvalidParams(format!(
                        "{} generators for depth {depth}",
                        generators.len()
                    )));
                }
                let gens = generators
                    .iter()
                    .map(|g| Perm::new(g.clone()))
                    .collect::<Result<Vec<_>>>()?;
                level_tables("exponents", exponents, p, depth)?;
                let t = TableFn::from_subfunctions(p, depth, &phi0, |k, x| {
                    Ok(gens[k as usize - 1].power(exponents[k as usize - 1][x as usize]))
                })?;
                Ok(CompatibleFn::from_table(t))
            }
        }
    }
}
