//! Measure preservation and ergodicity of compatible maps on the p-adic integers.
//!
//! Functions are represented exactly modulo `p^{K+1}` and decided level by
//! level: a verdict "holds through depth `K`" means every finite condition up to
//! `K` was verified, which is necessary but not sufficient for the full property.

pub mod builder;
pub mod criteria;
pub mod error;
pub mod func;
pub mod oracle;
pub mod padic;
pub mod perm;

pub use error::{Error, Result};
pub use func::{CompatibleFn, Expr, TableFn, VdpCoefficients, VdpFn};
pub use padic::{PadicInt, Prime, Residue, Valuation};
pub use perm::{CycleType, Perm};
