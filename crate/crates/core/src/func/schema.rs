use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

/// JSON form of a function:
///
/// ```json
/// {"p": 3, "depth": 2, "repr": "expr", "expr": "x^2 + x + 1"}
/// {"p": 3, "depth": 0, "repr": "table", "tables": [[1, 2, 0]]}
/// {"p": 3, "depth": 0, "repr": "vdp", "coeffs": [1, 2, 0]}
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FnDocument {
    pub p: u64,
    pub depth: u32,
    #[serde(flatten)]
    pub body: FnBody,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<Map<String, Value>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "repr", rename_all = "lowercase")]
pub enum FnBody {
    Expr { expr: String },
    Table { tables: Vec<Vec<u32>> },
    Vdp { coeffs: Vec<u64> },
}

impl FnBody {
    pub fn kind(&self) -> &'static str {
        match self {
            FnBody::Expr { .. } => "expr",
            FnBody::Table { .. } => "table",
            FnBody::Vdp { .. } => "vdp",
        }
    }
}
