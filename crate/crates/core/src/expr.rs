//! Coefficient expressions in one variable `x`.
//!
//! The potential q(x) is supplied per side as text and parsed into a small
//! AST which is then evaluated pointwise during integration. Grammar:
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := unary ('^' factor)?
//! unary  := '-' unary | atom
//! atom   := number | 'x' | 'pi' | 'e' | ident '(' expr ')' | '(' expr ')'
//! ```
//!
//! `^` is right-associative. Numbers are decimal with an optional exponent.
//! Whitespace is insignificant. `log` is the natural logarithm.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::real::{as_f64, Real};

/// Binary operators, in source form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

/// Unary function applications accepted by the grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Abs,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            _ => return None,
        })
    }
}

/// Named constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Named {
    Pi,
    E,
}

/// Expression tree. Literals are stored as `f64` and converted to the
/// working scalar on evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    /// The variable `x`.
    Var,
    Const(Named),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    /// Evaluates the expression at `x`.
    ///
    /// Any finite input either yields a finite value or a domain error
    /// naming the offending subexpression (log/sqrt outside the domain,
    /// division by zero, overflow to a non-finite value).
    pub fn eval<F: Real>(&self, x: F) -> Result<F> {
        let v = match self {
            Expr::Num(n) => F::from_f64(*n).unwrap_or_else(F::nan),
            Expr::Var => x,
            Expr::Const(Named::Pi) => F::from_f64(std::f64::consts::PI).unwrap(),
            Expr::Const(Named::E) => F::from_f64(std::f64::consts::E).unwrap(),
            Expr::Neg(e) => -e.eval(x)?,
            Expr::Bin(op, l, r) => {
                let a = l.eval(x)?;
                let b = r.eval(x)?;
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b == F::zero() {
                            return Err(self.domain_error(x, "division by zero"));
                        }
                        a / b
                    }
                    BinOp::Pow => a.powf(b),
                }
            }
            Expr::Call(f, arg) => {
                let a = arg.eval(x)?;
                match f {
                    Func::Sin => a.sin(),
                    Func::Cos => a.cos(),
                    Func::Tan => a.tan(),
                    Func::Exp => a.exp(),
                    Func::Log => {
                        if a <= F::zero() {
                            return Err(self.domain_error(x, "log of a non-positive value"));
                        }
                        a.ln()
                    }
                    Func::Sqrt => {
                        if a < F::zero() {
                            return Err(self.domain_error(x, "sqrt of a negative value"));
                        }
                        a.sqrt()
                    }
                    Func::Abs => a.abs(),
                }
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(self.domain_error(x, "non-finite result"))
        }
    }

    fn domain_error<F: Real>(&self, x: F, detail: &str) -> Error {
        Error::EvalDomain {
            node: self.to_string(),
            x: as_f64(x),
            detail: detail.to_string(),
        }
    }
}

/// Parses expression text into an [`Expr`].
pub fn parse(source: &str) -> Result<Expr> {
    let tokens = lex(source)?;
    let mut p = Parser { tokens, pos: 0 };
    let e = p.expr()?;
    match p.peek() {
        Tok::Eof => Ok(e),
        t => Err(p.unexpected("end of input", t)),
    }
}

impl FromStr for Expr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Expr> {
        parse(s)
    }
}

// ---- lexer ----

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(n) => format!("number {n}"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'+' => {
                out.push((Tok::Plus, i));
                i += 1;
            }
            b'-' => {
                out.push((Tok::Minus, i));
                i += 1;
            }
            b'*' => {
                out.push((Tok::Star, i));
                i += 1;
            }
            b'/' => {
                out.push((Tok::Slash, i));
                i += 1;
            }
            b'^' => {
                out.push((Tok::Caret, i));
                i += 1;
            }
            b'(' => {
                out.push((Tok::LParen, i));
                i += 1;
            }
            b')' => {
                out.push((Tok::RParen, i));
                i += 1;
            }
            b'0'..=b'9' | b'.' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                // exponent only if followed by digits (else `e` is the constant)
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text = &src[start..i];
                let n: f64 = text.parse().map_err(|_| Error::Syntax {
                    offset: start,
                    expected: "a number".into(),
                    found: format!("`{text}`"),
                })?;
                out.push((Tok::Num(n), start));
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..i].to_string()), start));
            }
            _ => {
                return Err(Error::Syntax {
                    offset: i,
                    expected: "a token".into(),
                    found: format!("`{}`", &src[i..i + 1]),
                })
            }
        }
    }
    out.push((Tok::Eof, src.len()));
    Ok(out)
}

// ---- parser ----

struct Parser {
    tokens: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Tok {
        self.tokens[self.pos].0.clone()
    }

    fn offset(&self) -> usize {
        self.tokens[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.tokens[self.pos].0.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &str, found: Tok) -> Error {
        Error::Syntax {
            offset: self.offset(),
            expected: expected.into(),
            found: found.describe(),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => break,
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => break,
            };
            self.bump();
            let rhs = self.factor()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.unary()?;
        if self.peek() == Tok::Caret {
            self.bump();
            let exp = self.factor()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek() == Tok::Minus {
            self.bump();
            let inner = self.unary()?;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr> {
        let offset = self.offset();
        match self.bump() {
            Tok::Num(n) => Ok(Expr::Num(n)),
            Tok::Ident(name) => match name.as_str() {
                "x" => Ok(Expr::Var),
                "pi" => Ok(Expr::Const(Named::Pi)),
                "e" => Ok(Expr::Const(Named::E)),
                _ => {
                    if self.peek() == Tok::LParen {
                        let f = Func::from_name(&name)
                            .ok_or(Error::UnknownIdentifier { offset, name })?;
                        self.bump();
                        let arg = self.expr()?;
                        let close_offset = self.offset();
                        match self.bump() {
                            Tok::RParen => Ok(Expr::Call(f, Box::new(arg))),
                            t => Err(Error::Syntax {
                                offset: close_offset,
                                expected: "`)`".into(),
                                found: t.describe(),
                            }),
                        }
                    } else {
                        Err(Error::UnknownIdentifier { offset, name })
                    }
                }
            },
            Tok::LParen => {
                let e = self.expr()?;
                let close_offset = self.offset();
                match self.bump() {
                    Tok::RParen => Ok(e),
                    t => Err(Error::Syntax {
                        offset: close_offset,
                        expected: "`)`".into(),
                        found: t.describe(),
                    }),
                }
            }
            t => Err(Error::Syntax {
                offset,
                expected: "a number, `x`, `pi`, `e`, a function call, or `(`".into(),
                found: t.describe(),
            }),
        }
    }
}

// ---- unparser ----

impl fmt::Display for Expr {
    /// Renders source text that reparses to a structurally identical tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(n) => write!(f, "{n}"),
            Expr::Var => write!(f, "x"),
            Expr::Const(Named::Pi) => write!(f, "pi"),
            Expr::Const(Named::E) => write!(f, "e"),
            Expr::Neg(e) => {
                write!(f, "-")?;
                // any infix child changes meaning without parentheses
                if matches!(**e, Expr::Bin(..)) {
                    write!(f, "({e})")
                } else {
                    write!(f, "{e}")
                }
            }
            Expr::Bin(op, l, r) => {
                let (sym, lp, rp) = match op {
                    BinOp::Add => ("+", false, matches!(**r, Expr::Bin(BinOp::Add | BinOp::Sub, ..))),
                    BinOp::Sub => ("-", false, matches!(**r, Expr::Bin(BinOp::Add | BinOp::Sub, ..))),
                    BinOp::Mul => (
                        "*",
                        matches!(**l, Expr::Bin(BinOp::Add | BinOp::Sub, ..)),
                        matches!(**r, Expr::Bin(BinOp::Add | BinOp::Sub | BinOp::Mul | BinOp::Div, ..)),
                    ),
                    BinOp::Div => (
                        "/",
                        matches!(**l, Expr::Bin(BinOp::Add | BinOp::Sub, ..)),
                        matches!(**r, Expr::Bin(BinOp::Add | BinOp::Sub | BinOp::Mul | BinOp::Div, ..)),
                    ),
                    BinOp::Pow => ("^", matches!(**l, Expr::Bin(..)), matches!(**r, Expr::Bin(BinOp::Add | BinOp::Sub | BinOp::Mul | BinOp::Div, ..))),
                };
                if lp {
                    write!(f, "({l})")?;
                } else {
                    write!(f, "{l}")?;
                }
                write!(f, "{sym}")?;
                if rp {
                    write!(f, "({r})")
                } else {
                    write!(f, "{r}")
                }
            }
            Expr::Call(func, arg) => write!(f, "{}({arg})", func.name()),
        }
    }
}
