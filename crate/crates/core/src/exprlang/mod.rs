//! A small arithmetic expression language for user-supplied functions.
//!
//! Grammar (whitespace is ignored):
//!
//! ```text
//! expr    = term { ("+" | "-") term } ;
//! term    = unary { ("*" | "/") unary } ;
//! unary   = "-" unary | power ;
//! power   = primary [ "^" unary ] ;            (* right-associative *)
//! primary = number | ident | ident "(" expr { "," expr } ")" | "(" expr ")" ;
//! number  = digits [ "." digits ] [ ("e" | "E") [ "+" | "-" ] digits ]
//!         | "." digits [ exponent ] ;
//! ```
//!
//! Identifiers are the variables `t`, `s`, `y` (only those declared in the
//! signature may appear), the constants `pi` and `e`, and the functions
//! `sqrt exp ln sin cos abs gamma` (one argument) and `pow` (two).

mod gamma;

pub use gamma::gamma;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExprError {
    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown identifier `{name}` at position {pos}")]
    UnknownIdentifier { name: String, pos: usize },
    #[error("`{name}` at position {pos} takes {expected} argument(s), got {found}")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
        pos: usize,
    },
    #[error("variable `{name}` at position {pos} is not in the signature ({signature})")]
    UndeclaredVariable {
        name: String,
        pos: usize,
        signature: String,
    },
    #[error("expected {expected} argument(s), got {found}")]
    ArgumentCount { expected: usize, found: usize },
    #[error("domain error in `{node}`: {message}")]
    Domain { node: String, message: String },
    #[error("non-finite result in `{node}`")]
    NonFinite { node: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variable {
    T,
    S,
    Y,
}

impl Variable {
    fn from_name(name: &str) -> Option<Self> {
        match name {
            "t" => Some(Variable::T),
            "s" => Some(Variable::S),
            "y" => Some(Variable::Y),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Variable::T => "t",
            Variable::S => "s",
            Variable::Y => "y",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sqrt,
    Exp,
    Ln,
    Sin,
    Cos,
    Abs,
    Pow,
    Gamma,
}

impl Func {
    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sqrt" => Func::Sqrt,
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "abs" => Func::Abs,
            "pow" => Func::Pow,
            "gamma" => Func::Gamma,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Sqrt => "sqrt",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Abs => "abs",
            Func::Pow => "pow",
            Func::Gamma => "gamma",
        }
    }

    fn arity(self) -> usize {
        match self {
            Func::Pow => 2,
            _ => 1,
        }
    }
}

/// Expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(Variable),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
}

/// Fully parenthesized rendering; parsing it back yields the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var(v) => f.write_str(v.name()),
            Expr::Neg(inner) => write!(f, "(-{inner})"),
            Expr::Binary(op, l, r) => write!(f, "({l} {} {r})", op.symbol()),
            Expr::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    Comma,
    End,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() || c == '.' {
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let text = &src[start..i];
            let value: f64 = text.parse().map_err(|_| ExprError::Syntax {
                pos: start,
                message: format!("malformed number `{text}`"),
            })?;
            out.push((Tok::Num(value), start));
        } else if c.is_ascii_alphabetic() || c == '_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(src[start..i].to_string()), start));
        } else {
            let tok = match c {
                '+' | '-' | '*' | '/' | '^' => Tok::Op(c),
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                _ => {
                    return Err(ExprError::Syntax {
                        pos: start,
                        message: format!(
                            "unexpected character `{}`",
                            src[start..].chars().next().unwrap()
                        ),
                    })
                }
            };
            out.push((tok, start));
            i += c.len_utf8();
        }
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    cursor: usize,
    signature: &'a [Variable],
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.cursor].0
    }

    fn pos(&self) -> usize {
        self.toks[self.cursor].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.cursor].clone();
        if self.cursor + 1 < self.toks.len() {
            self.cursor += 1;
        }
        t
    }

    fn unexpected(&self) -> ExprError {
        let message = match self.peek() {
            Tok::End => "unexpected end of input".to_string(),
            Tok::Num(n) => format!("unexpected number {n}"),
            Tok::Ident(s) => format!("unexpected identifier `{s}`"),
            Tok::Op(c) => format!("unexpected `{c}`"),
            Tok::LParen => "unexpected `(`".to_string(),
            Tok::RParen => "unexpected `)`".to_string(),
            Tok::Comma => "unexpected `,`".to_string(),
        };
        ExprError::Syntax {
            pos: self.pos(),
            message,
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        while let Tok::Op(c @ ('+' | '-')) = *self.peek() {
            self.bump();
            let rhs = self.term()?;
            let op = if c == '+' { BinOp::Add } else { BinOp::Sub };
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        while let Tok::Op(c @ ('*' | '/')) = *self.peek() {
            self.bump();
            let rhs = self.unary()?;
            let op = if c == '*' { BinOp::Mul } else { BinOp::Div };
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if *self.peek() == Tok::Op('-') {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.primary()?;
        if *self.peek() == Tok::Op('^') {
            self.bump();
            let exponent = self.unary()?;
            return Ok(Expr::Binary(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ExprError> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok(Expr::Const(n))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                let pos = self.pos();
                self.bump();
                if *self.peek() == Tok::LParen {
                    let func = Func::from_name(&name).ok_or(ExprError::UnknownIdentifier {
                        name: name.clone(),
                        pos,
                    })?;
                    self.bump();
                    let mut args = vec![self.expr()?];
                    while *self.peek() == Tok::Comma {
                        self.bump();
                        args.push(self.expr()?);
                    }
                    self.expect_rparen()?;
                    if args.len() != func.arity() {
                        return Err(ExprError::ArityMismatch {
                            name,
                            expected: func.arity(),
                            found: args.len(),
                            pos,
                        });
                    }
                    return Ok(Expr::Call(func, args));
                }
                if let Some(var) = Variable::from_name(&name) {
                    if !self.signature.contains(&var) {
                        return Err(ExprError::UndeclaredVariable {
                            name,
                            pos,
                            signature: signature_text(self.signature),
                        });
                    }
                    return Ok(Expr::Var(var));
                }
                match name.as_str() {
                    "pi" => Ok(Expr::Const(std::f64::consts::PI)),
                    "e" => Ok(Expr::Const(std::f64::consts::E)),
                    _ if Func::from_name(&name).is_some() => Err(ExprError::Syntax {
                        pos: self.pos(),
                        message: format!("function `{name}` must be followed by `(`"),
                    }),
                    _ => Err(ExprError::UnknownIdentifier { name, pos }),
                }
            }
            _ => Err(self.unexpected()),
        }
    }

    fn expect_rparen(&mut self) -> Result<(), ExprError> {
        if *self.peek() == Tok::RParen {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected())
        }
    }
}

fn signature_text(sig: &[Variable]) -> String {
    let names: Vec<&str> = sig.iter().map(|v| v.name()).collect();
    format!("[{}]", names.join(", "))
}

/// A parsed expression together with the ordered list of variables it
/// receives at evaluation time.
#[derive(Debug, Clone, PartialEq)]
pub struct ExprFn {
    ast: Expr,
    signature: Vec<Variable>,
    source: String,
}

impl ExprFn {
    pub fn parse(source: &str, signature: &[Variable]) -> Result<Self, ExprError> {
        if source.trim().is_empty() {
            return Err(ExprError::Syntax {
                pos: 0,
                message: "empty expression".into(),
            });
        }
        let mut parser = Parser {
            toks: lex(source)?,
            cursor: 0,
            signature,
        };
        let ast = parser.expr()?;
        if *parser.peek() != Tok::End {
            return Err(parser.unexpected());
        }
        Ok(Self {
            ast,
            signature: signature.to_vec(),
            source: source.to_string(),
        })
    }

    /// Function of `t`.
    pub fn of_t(source: &str) -> Result<Self, ExprError> {
        Self::parse(source, &[Variable::T])
    }

    /// Function of `(t, y)`.
    pub fn of_t_y(source: &str) -> Result<Self, ExprError> {
        Self::parse(source, &[Variable::T, Variable::Y])
    }

    pub fn ast(&self) -> &Expr {
        &self.ast
    }

    pub fn signature(&self) -> &[Variable] {
        &self.signature
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// True for the expression `t` (possibly parenthesized).
    pub fn is_identity(&self) -> bool {
        self.signature.first() == Some(&Variable::T) && self.ast == Expr::Var(Variable::T)
    }

    /// Evaluates with `args` bound to the signature in order.
    pub fn eval<S: Scalar>(&self, args: &[S]) -> Result<S, ExprError> {
        if args.len() != self.signature.len() {
            return Err(ExprError::ArgumentCount {
                expected: self.signature.len(),
                found: args.len(),
            });
        }
        self.eval_node(&self.ast, args)
    }

    fn lookup<S: Scalar>(&self, var: Variable, args: &[S]) -> S {
        let idx = self
            .signature
            .iter()
            .position(|v| *v == var)
            .expect("variables are checked against the signature at parse time");
        args[idx]
    }

    fn eval_node<S: Scalar>(&self, node: &Expr, args: &[S]) -> Result<S, ExprError> {
        let domain = |message: &str| ExprError::Domain {
            node: node.to_string(),
            message: message.to_string(),
        };
        let value = match node {
            Expr::Const(c) => S::lit(*c),
            Expr::Var(v) => self.lookup(*v, args),
            Expr::Neg(inner) => -self.eval_node(inner, args)?,
            Expr::Binary(op, l, r) => {
                let a = self.eval_node(l, args)?;
                let b = self.eval_node(r, args)?;
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                    BinOp::Pow => power(a, b)
                        .ok_or_else(|| domain("negative base with non-integer exponent"))?,
                }
            }
            Expr::Call(func, call_args) => {
                let x = self.eval_node(&call_args[0], args)?;
                match func {
                    Func::Sqrt if x < S::zero() => {
                        return Err(domain("square root of a negative number"))
                    }
                    Func::Sqrt => x.sqrt(),
                    Func::Exp => x.exp(),
                    Func::Ln if x <= S::zero() => {
                        return Err(domain("logarithm of a non-positive number"))
                    }
                    Func::Ln => x.ln(),
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Abs => x.abs(),
                    Func::Gamma if x <= S::zero() && x == x.floor() => {
                        return Err(domain("gamma has a pole at non-positive integers"))
                    }
                    Func::Gamma => gamma(x),
                    Func::Pow => {
                        let b = self.eval_node(&call_args[1], args)?;
                        power(x, b)
                            .ok_or_else(|| domain("negative base with non-integer exponent"))?
                    }
                }
            }
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(ExprError::NonFinite {
                node: node.to_string(),
            })
        }
    }
}

fn power<S: Scalar>(base: S, exponent: S) -> Option<S> {
    if base < S::zero() && exponent != exponent.floor() {
        return None;
    }
    if exponent == exponent.floor() && exponent.abs() <= S::lit(64.0) {
        return Some(base.powi(exponent.to_i32().expect("small integer")));
    }
    Some(base.powf(exponent))
}

impl fmt::Display for ExprFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}
