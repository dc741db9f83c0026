//! Closed-form expressions in one variable `x`, evaluated exactly modulo `p^D`.
//!
//! Grammar (lowest to highest precedence):
//!
//! ```text
//! compose := sum (("∘" | "@") compose)?
//! sum     := term (("+" | "-") term)*
//! term    := unary (("*" unary) | unary)*        juxtaposition multiplies: 2x, 3(x+1)
//! unary   := "-" unary | power
//! power   := atom ("^" integer)?
//! atom    := integer | "x" | "(" compose ")"
//!          | "diff" "(" compose ")"              h(x+1) - h(x)
//!          | "affine" "(" int "," "[" int ("," int)* "]" ")"
//! ```
//!
//! `f ∘ g` is `f(g(x))`. `affine(c,[a0,…,am])` is `c + Σ_k a_k p^k x_k` over the
//! digits of `x`; digits above `m` reuse `a_m`.

use std::fmt;

use crate::error::{Error, Result};
use crate::padic::{add_mod, mul_mod, pow_mod, reduce_signed, sub_mod, Prime};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Const(i128),
    X,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
    /// `outer ∘ inner`
    Compose(Box<Expr>, Box<Expr>),
    /// `h(x+1) - h(x)`
    Diff(Box<Expr>),
    Affine { c: i128, coeffs: Vec<i128> },
}

/// Modulus data shared by every node of one evaluation.
#[derive(Debug, Clone, Copy)]
pub(crate) struct EvalCtx {
    pub p: Prime,
    pub digits: u32,
    pub modulus: u64,
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr> {
        let tokens = tokenize(src)?;
        let mut parser = Parser { tokens, pos: 0 };
        let expr = parser.compose()?;
        if let Some(tok) = parser.peek() {
            return Err(Error::parse(tok.pos, format!("unexpected {:?}", tok.kind)));
        }
        Ok(expr)
    }

    pub fn constant(c: i128) -> Expr {
        Expr::Const(c)
    }

    pub fn pow(a: Expr, e: u32) -> Expr {
        Expr::Pow(Box::new(a), e)
    }

    pub fn compose(outer: Expr, inner: Expr) -> Expr {
        Expr::Compose(Box::new(outer), Box::new(inner))
    }

    pub fn diff(h: Expr) -> Expr {
        Expr::Diff(Box::new(h))
    }

    pub(crate) fn eval(&self, x: u64, ctx: &EvalCtx) -> u64 {
        let m = ctx.modulus;
        match self {
            Expr::Const(c) => reduce_signed(*c, m),
            Expr::X => x % m,
            Expr::Add(a, b) => add_mod(a.eval(x, ctx), b.eval(x, ctx), m),
            Expr::Sub(a, b) => sub_mod(a.eval(x, ctx), b.eval(x, ctx), m),
            Expr::Mul(a, b) => mul_mod(a.eval(x, ctx), b.eval(x, ctx), m),
            Expr::Neg(a) => sub_mod(0, a.eval(x, ctx), m),
            Expr::Pow(a, e) => pow_mod(a.eval(x, ctx), *e as u64, m),
            Expr::Compose(outer, inner) => outer.eval(inner.eval(x, ctx), ctx),
            Expr::Diff(h) => sub_mod(h.eval(add_mod(x, 1, m), ctx), h.eval(x, ctx), m),
            Expr::Affine { c, coeffs } => {
                let p = ctx.p.get();
                let mut acc = reduce_signed(*c, m);
                let mut rest = x % m;
                let mut scale = 1u64;
                for k in 0..ctx.digits as usize {
                    let xk = rest % p;
                    rest /= p;
                    if xk != 0 {
                        let a = reduce_signed(*affine_coeff(coeffs, k), m);
                        acc = add_mod(acc, mul_mod(mul_mod(a, scale, m), xk, m), m);
                    }
                    scale = mul_mod(scale, p, m);
                }
                acc
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Compose(..) => 0,
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Const(c) if *c < 0 => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }
}

/// Coefficient of digit `k` in a per-digit affine form; the last one repeats.
pub fn affine_coeff<T>(coeffs: &[T], k: usize) -> &T {
    &coeffs[k.min(coeffs.len() - 1)]
}

fn write_child(f: &mut fmt::Formatter<'_>, child: &Expr, min_prec: u8) -> fmt::Result {
    if child.precedence() < min_prec {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

impl std::ops::Add for Expr {
    type Output = Expr;

    fn add(self, rhs: Expr) -> Expr {
        Expr::Add(Box::new(self), Box::new(rhs))
    }
}

impl std::ops::Sub for Expr {
    type Output = Expr;

    fn sub(self, rhs: Expr) -> Expr {
        Expr::Sub(Box::new(self), Box::new(rhs))
    }
}

impl std::ops::Mul for Expr {
    type Output = Expr;

    fn mul(self, rhs: Expr) -> Expr {
        Expr::Mul(Box::new(self), Box::new(rhs))
    }
}

impl std::ops::Neg for Expr {
    type Output = Expr;

    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::X => write!(f, "x"),
            Expr::Add(a, b) => {
                write_child(f, a, 1)?;
                write!(f, " + ")?;
                write_child(f, b, 2)
            }
            Expr::Sub(a, b) => {
                write_child(f, a, 1)?;
                write!(f, " - ")?;
                write_child(f, b, 2)
            }
            Expr::Mul(a, b) => {
                write_child(f, a, 2)?;
                write!(f, "*")?;
                write_child(f, b, 3)
            }
            Expr::Neg(a) => {
                write!(f, "-")?;
                write_child(f, a, 4)
            }
            Expr::Pow(a, e) => {
                write_child(f, a, 5)?;
                write!(f, "^{e}")
            }
            Expr::Compose(outer, inner) => {
                write_child(f, outer, 1)?;
                write!(f, " ∘ ")?;
                write_child(f, inner, 0)
            }
            Expr::Diff(h) => write!(f, "diff({h})"),
            Expr::Affine { c, coeffs } => {
                let body: Vec<String> = coeffs.iter().map(|a| a.to_string()).collect();
                write!(f, "affine({c},[{}])", body.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum TokenKind {
    Int(i128),
    X,
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Compose,
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokenKind,
    pos: usize,
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        let kind = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().map(|&(_, c)| c).collect();
                let v = text
                    .parse::<i128>()
                    .map_err(|_| Error::parse(pos, "integer literal too large"))?;
                out.push(Token { kind: TokenKind::Int(v), pos });
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && chars[i].1.is_ascii_alphanumeric() {
                    i += 1;
                }
                let word: String = chars[start..i].iter().map(|&(_, c)| c).collect();
                let kind = if word == "x" {
                    TokenKind::X
                } else {
                    TokenKind::Ident(word)
                };
                out.push(Token { kind, pos });
                continue;
            }
            '+' => TokenKind::Plus,
            '-' | '−' => TokenKind::Minus,
            '*' | '×' | '·' => TokenKind::Star,
            '^' => TokenKind::Caret,
            '(' => TokenKind::LParen,
            ')' => TokenKind::RParen,
            '[' => TokenKind::LBracket,
            ']' => TokenKind::RBracket,
            ',' => TokenKind::Comma,
            '∘' | '@' => TokenKind::Compose,
            other => return Err(Error::parse(pos, format!("unexpected character {other:?}"))),
        };
        out.push(Token { kind, pos });
        i += 1;
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn peek_kind(&self) -> Option<&TokenKind> {
        self.peek().map(|t| &t.kind)
    }

    fn end_pos(&self) -> usize {
        self.tokens.last().map(|t| t.pos + 1).unwrap_or(0)
    }

    fn next(&mut self) -> Result<Token> {
        let tok = self
            .tokens
            .get(self.pos)
            .cloned()
            .ok_or_else(|| Error::parse(self.end_pos(), "unexpected end of input"))?;
        self.pos += 1;
        Ok(tok)
    }

    fn expect(&mut self, kind: TokenKind) -> Result<()> {
        let tok = self.next()?;
        if tok.kind != kind {
            return Err(Error::parse(tok.pos, format!("expected {kind:?}, found {:?}", tok.kind)));
        }
        Ok(())
    }

    fn compose(&mut self) -> Result<Expr> {
        let outer = self.sum()?;
        if self.peek_kind() == Some(&TokenKind::Compose) {
            self.pos += 1;
            let inner = self.compose()?;
            return Ok(Expr::compose(outer, inner));
        }
        Ok(outer)
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut acc = self.term()?;
        loop {
            match self.peek_kind() {
                Some(TokenKind::Plus) => {
                    self.pos += 1;
                    acc = acc + self.term()?;
                }
                Some(TokenKind::Minus) => {
                    self.pos += 1;
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.unary()?;
        loop {
            match self.peek_kind() {
                Some(TokenKind::Star) => {
                    self.pos += 1;
                    acc = acc * self.unary()?;
                }
                Some(TokenKind::Int(_) | TokenKind::X | TokenKind::LParen | TokenKind::Ident(_)) => {
                    acc = acc * self.unary()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek_kind() == Some(&TokenKind::Minus) {
            self.pos += 1;
            let inner = self.unary()?;
            return Ok(match inner {
                Expr::Const(c) => Expr::Const(-c),
                other => Expr::Neg(Box::new(other)),
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek_kind() == Some(&TokenKind::Caret) {
            self.pos += 1;
            let tok = self.next()?;
            return match tok.kind {
                TokenKind::Int(e) if (0..=u32::MAX as i128).contains(&e) => Ok(Expr::pow(base, e as u32)),
                _ => Err(Error::parse(tok.pos, "exponent must be a non-negative integer")),
            };
        }
        Ok(base)
    }

    fn signed_int(&mut self) -> Result<i128> {
        let negative = if self.peek_kind() == Some(&TokenKind::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        let tok = self.next()?;
        match tok.kind {
            TokenKind::Int(v) => Ok(if negative { -v } else { v }),
            other => Err(Error::parse(tok.pos, format!("expected integer, found {other:?}"))),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let tok = self.next()?;
        match tok.kind {
            TokenKind::Int(v) => Ok(Expr::Const(v)),
            TokenKind::X => Ok(Expr::X),
            TokenKind::LParen => {
                let inner = self.compose()?;
                self.expect(TokenKind::RParen)?;
                Ok(inner)
            }
            TokenKind::Ident(name) if name == "diff" => {
                self.expect(TokenKind::LParen)?;
                let h = self.compose()?;
                self.expect(TokenKind::RParen)?;
                Ok(Expr::diff(h))
            }
            TokenKind::Ident(name) if name == "affine" => {
                self.expect(TokenKind::LParen)?;
                let c = self.signed_int()?;
                self.expect(TokenKind::Comma)?;
                self.expect(TokenKind::LBracket)?;
                let mut coeffs = vec![self.signed_int()?];
                while self.peek_kind() == Some(&TokenKind::Comma) {
                    self.pos += 1;
                    coeffs.push(self.signed_int()?);
                }
                self.expect(TokenKind::RBracket)?;
                self.expect(TokenKind::RParen)?;
                Ok(Expr::Affine { c, coeffs })
            }
            TokenKind::Ident(name) => Err(Error::parse(tok.pos, format!("unknown function {name:?}"))),
            other => Err(Error::parse(tok.pos, format!("unexpected {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64, digits: u32) -> EvalCtx {
        let p = Prime::new(p).unwrap();
        EvalCtx {
            p,
            digits,
            modulus: p.pow(digits).unwrap(),
        }
    }

    fn eval(src: &str, x: u64, p: u64, digits: u32) -> u64 {
        Expr::parse(src).unwrap().eval(x, &ctx(p, digits))
    }

    #[test]
    fn arithmetic() {
        assert_eq!(eval("x+1", 8, 3, 2), 0);
        assert_eq!(eval("1+2x", 4, 3, 2), 0);
        assert_eq!(eval("x^2 - 1", 0, 5, 2), 24);
        assert_eq!(eval("-x", 1, 3, 3), 26);
        assert_eq!(eval("3(x+1)*2", 1, 7, 2), 12);
        assert_eq!(eval("2x^2", 3, 7, 2), 18);
    }

    #[test]
    fn composition_and_diff() {
        // (x+1)^2 at x = 2
        assert_eq!(eval("x^2 ∘ x+1", 2, 5, 2), 9);
        assert_eq!(eval("x^2 @ (x+1)", 2, 5, 2), 9);
        // diff(x^2) = 2x + 1
        for x in 0..25 {
            assert_eq!(eval("diff(x^2)", x, 5, 2), (2 * x + 1) % 25);
        }
    }

    #[test]
    fn affine_digits() {
        // c + a0 x0 + a1 p x1, p = 3, x = 5 = 2 + 1*3
        assert_eq!(eval("affine(1,[2,4])", 5, 3, 2), (1 + 2 * 2 + 4 * 3) % 9);
        // coefficients repeat: affine(0,[1]) is the identity
        for x in 0..27 {
            assert_eq!(eval("affine(0,[1])", x, 3, 3), x);
        }
        assert_eq!(eval("affine(-1,[1,-1])", 0, 3, 2), 8);
    }

    #[test]
    fn display_reparses() {
        for src in [
            "x+1",
            "1 - (x - 2)",
            "-(x+1)^3 * 2",
            "(x∘x+1)*x",
            "x^2 ∘ (x + 1 ∘ 2x)",
            "affine(-2,[1,4,-3])",
            "diff(x^3 - x) + -5",
            "(-3)^2",
        ] {
            let e = Expr::parse(src).unwrap();
            let again = Expr::parse(&e.to_string()).unwrap();
            assert_eq!(e, again, "{src} -> {e}");
        }
    }

    #[test]
    fn parse_errors() {
        for bad in ["", "x+", "x ^ -1", "foo(x)", "affine(1,[])", "(x", "x % 2", "x)"] {
            assert!(matches!(Expr::parse(bad), Err(Error::Parse { .. })), "{bad}");
        }
    }
}
