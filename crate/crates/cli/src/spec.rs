//! Resolution of the `<FN>` argument shared by every subcommand.
//!
//! `-` reads standard input; text starting with `{` or `[` is JSON; an
//! existing path is read from disk; anything else is an expression.

use std::io::Read;
use std::path::Path;

use padic_ergodic::builder::Family;
use padic_ergodic::func::FnDocument;
use padic_ergodic::{CompatibleFn, Error, Expr, Prime, Result};
use serde_json::Value;

pub const DEFAULT_P: u64 = 3;
pub const DEFAULT_DEPTH: u32 = 4;

#[derive(Debug, Clone)]
pub enum Spec {
    Expr(Expr),
    Document(FnDocument),
    Family(Family),
    List(Vec<Spec>),
}

pub fn read_spec(arg: &str) -> Result<Spec> {
    let text = if arg == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::InvalidParams(format!("reading standard input: {e}")))?;
        buf
    } else if Path::new(arg).is_file() {
        std::fs::read_to_string(arg).map_err(|e| Error::InvalidParams(format!("reading {arg}: {e}")))?
    } else {
        arg.to_string()
    };
    classify(&text)
}

fn classify(text: &str) -> Result<Spec> {
    let trimmed = text.trim();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        from_value(serde_json::from_str(trimmed)?)
    } else {
        Ok(Spec::Expr(Expr::parse(trimmed)?))
    }
}

fn from_value(v: Value) -> Result<Spec> {
    match v {
        Value::Array(items) => Ok(Spec::List(items.into_iter().map(from_value).collect::<Result<_>>()?)),
        Value::String(src) => Ok(Spec::Expr(Expr::parse(&src)?)),
        Value::Object(ref obj) if obj.contains_key("family") => serde_json::from_value(v)
            .map(Spec::Family)
            .map_err(|e| Error::InvalidParams(e.to_string())),
        other => Ok(Spec::Document(serde_json::from_value(other)?)),
    }
}

/// Prime and depth from the command line; `None` when not given.
#[derive(Debug, Clone, Copy)]
pub struct Ctx {
    pub p: Option<u64>,
    pub depth: Option<u32>,
}

impl Ctx {
    pub fn prime(&self) -> Result<Prime> {
        Prime::new(self.p.unwrap_or(DEFAULT_P))
    }

    pub fn depth(&self) -> u32 {
        self.depth.unwrap_or(DEFAULT_DEPTH)
    }

    /// Documents carry their own prime and depth; explicit flags must agree
    /// with the prime and may only re-certify the depth.
    pub fn function(&self, spec: &Spec) -> Result<CompatibleFn> {
        match spec {
            Spec::Expr(e) => CompatibleFn::from_expr(self.prime()?, self.depth(), e.clone()),
            Spec::Family(fam) => fam.build(self.prime()?, self.depth()),
            Spec::Document(doc) => {
                if let Some(p) = self.p.filter(|&p| p != doc.p) {
                    return Err(Error::PrimeMismatch { left: p, right: doc.p });
                }
                let f = CompatibleFn::from_document(doc)?;
                match self.depth {
                    Some(d) if d != f.depth() => f.with_depth(d),
                    _ => Ok(f),
                }
            }
            Spec::List(_) => Err(Error::InvalidParams("expected one function, got a list".into())),
        }
    }

    /// Every member of a list, or the single function, with display ids.
    pub fn corpus(&self, spec: &Spec) -> Result<Vec<(String, CompatibleFn)>> {
        match spec {
            Spec::List(items) => items
                .iter()
                .enumerate()
                .map(|(i, s)| Ok((label(s, i), self.function(s)?)))
                .collect(),
            single => Ok(vec![(label(single, 0), self.function(single)?)]),
        }
    }
}

fn label(spec: &Spec, index: usize) -> String {
    match spec {
        Spec::Expr(e) => e.to_string(),
        Spec::Family(f) => format!("{}/{index}", f.name()),
        Spec::Document(doc) => doc
            .meta
            .as_ref()
            .and_then(|m| m.get("id"))
            .and_then(Value::as_str)
            .map_or_else(|| format!("{}/{index}", doc.body.kind()), str::to_string),
        Spec::List(_) => format!("list/{index}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CTX: Ctx = Ctx { p: None, depth: None };

    #[test]
    fn expressions_and_json() {
        assert!(matches!(classify("x^2 + 1").unwrap(), Spec::Expr(_)));
        let doc = classify(r#"{"p": 3, "depth": 0, "repr": "table", "tables": [[1, 2, 0]]}"#).unwrap();
        assert_eq!(CTX.function(&doc).unwrap().value(2), 0);
        let fam = classify(r#"{"family": "affine", "c": 1, "a": [1]}"#).unwrap();
        assert_eq!(CTX.function(&fam).unwrap().value(242), 0);
        let list = classify(r#"["x+1", {"family": "affine", "c": 2, "a": [1]}]"#).unwrap();
        let corpus = CTX.corpus(&list).unwrap();
        assert_eq!(corpus.len(), 2);
        assert_eq!(corpus[0].0, "x + 1");
        assert_eq!(corpus[1].0, "affine/1");
    }

    #[test]
    fn documents_keep_their_prime() {
        let doc = classify(r#"{"p": 5, "depth": 1, "repr": "expr", "expr": "x+1"}"#).unwrap();
        let ctx = Ctx { p: Some(3), depth: None };
        assert!(matches!(ctx.function(&doc), Err(Error::PrimeMismatch { .. })));
        let deeper = Ctx { p: None, depth: Some(3) };
        assert_eq!(deeper.function(&doc).unwrap().depth(), 3);
    }

    #[test]
    fn malformed_input() {
        assert!(matches!(classify("x +* 2"), Err(Error::Parse { .. })));
        assert!(matches!(classify("{\"family\": \"nope\"}"), Err(Error::InvalidParams(_))));
        assert!(matches!(classify("{not json"), Err(Error::Json(_))));
    }
}
