//! Scalar expressions in the variables `t` and `z`.
//!
//! Grammar (recursive descent, `^` right-associative, unary minus binds
//! tighter than the base of `^`):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := base ('^' factor)?
//! base   := number | 't' | 'z' | ident '(' expr ')' | '(' expr ')' | '-' base
//! ```

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    T,
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryOp {
    Neg,
    Sin,
    Cos,
    Abs,
    Exp,
    Log,
    Sqrt,
}

impl UnaryOp {
    fn from_ident(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => UnaryOp::Sin,
            "cos" => UnaryOp::Cos,
            "abs" => UnaryOp::Abs,
            "exp" => UnaryOp::Exp,
            "log" => UnaryOp::Log,
            "sqrt" => UnaryOp::Sqrt,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            UnaryOp::Neg => "-",
            UnaryOp::Sin => "sin",
            UnaryOp::Cos => "cos",
            UnaryOp::Abs => "abs",
            UnaryOp::Exp => "exp",
            UnaryOp::Log => "log",
            UnaryOp::Sqrt => "sqrt",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinaryOp {
    fn symbol(self) -> char {
        match self {
            BinaryOp::Add => '+',
            BinaryOp::Sub => '-',
            BinaryOp::Mul => '*',
            BinaryOp::Div => '/',
            BinaryOp::Pow => '^',
        }
    }
}

#[derive(Debug, Clone)]
pub enum Node {
    Number(f64),
    Var(Var),
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
}

/// An expression tree node together with the byte offset it was parsed from.
///
/// Equality is structural: source offsets are ignored.
#[derive(Debug, Clone)]
pub struct Expr {
    pub node: Node,
    pub offset: usize,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        match (&self.node, &other.node) {
            (Node::Number(a), Node::Number(b)) => a.to_bits() == b.to_bits(),
            (Node::Var(a), Node::Var(b)) => a == b,
            (Node::Unary(o1, a), Node::Unary(o2, b)) => o1 == o2 && a == b,
            (Node::Binary(o1, l1, r1), Node::Binary(o2, l2, r2)) => {
                o1 == o2 && l1 == l2 && r1 == r2
            }
            _ => false,
        }
    }
}

impl Expr {
    pub fn number(v: f64) -> Self {
        Expr {
            node: Node::Number(v),
            offset: 0,
        }
    }

    pub fn uses_var(&self, var: Var) -> bool {
        match &self.node {
            Node::Number(_) => false,
            Node::Var(v) => *v == var,
            Node::Unary(_, e) => e.uses_var(var),
            Node::Binary(_, l, r) => l.uses_var(var) || r.uses_var(var),
        }
    }

    /// Evaluate at `(t, z)`. Domain violations (log or sqrt of a negative
    /// number, division by zero, non-real powers) are reported with the
    /// offending node's source offset rather than returned as NaN.
    pub fn eval(&self, t: f64, z: f64) -> Result<f64> {
        match &self.node {
            Node::Number(v) => Ok(*v),
            Node::Var(Var::T) => Ok(t),
            Node::Var(Var::Z) => Ok(z),
            Node::Unary(op, e) => {
                let x = e.eval(t, z)?;
                match op {
                    UnaryOp::Neg => Ok(-x),
                    UnaryOp::Sin => Ok(x.sin()),
                    UnaryOp::Cos => Ok(x.cos()),
                    UnaryOp::Abs => Ok(x.abs()),
                    UnaryOp::Exp => Ok(x.exp()),
                    UnaryOp::Log if x <= 0.0 => Err(self.eval_error(format!("log of {x}"))),
                    UnaryOp::Log => Ok(x.ln()),
                    UnaryOp::Sqrt if x < 0.0 => Err(self.eval_error(format!("sqrt of {x}"))),
                    UnaryOp::Sqrt => Ok(x.sqrt()),
                }
            }
            Node::Binary(op, l, r) => {
                let x = l.eval(t, z)?;
                let y = r.eval(t, z)?;
                match op {
                    BinaryOp::Add => Ok(x + y),
                    BinaryOp::Sub => Ok(x - y),
                    BinaryOp::Mul => Ok(x * y),
                    BinaryOp::Div if y == 0.0 => Err(self.eval_error("division by zero")),
                    BinaryOp::Div => Ok(x / y),
                    BinaryOp::Pow => {
                        let v = x.powf(y);
                        if v.is_nan() && !x.is_nan() && !y.is_nan() {
                            Err(self.eval_error(format!("{x}^{y} is not real")))
                        } else {
                            Ok(v)
                        }
                    }
                }
            }
        }
    }

    fn eval_error(&self, message: impl Into<String>) -> Error {
        Error::Eval {
            offset: self.offset,
            message: message.into(),
        }
    }
}

impl fmt::Display for Expr {
    /// Fully parenthesized form; reparses to a structurally identical tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.node {
            Node::Number(v) => write!(f, "{v}"),
            Node::Var(Var::T) => f.write_str("t"),
            Node::Var(Var::Z) => f.write_str("z"),
            Node::Unary(UnaryOp::Neg, e) => write!(f, "-({e})"),
            Node::Unary(op, e) => write!(f, "{}({e})", op.name()),
            Node::Binary(op, l, r) => write!(f, "({l} {} {r})", op.symbol()),
        }
    }
}

impl std::str::FromStr for Expr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

pub fn parse(source: &str) -> Result<Expr> {
    let mut p = Parser { src: source, pos: 0 };
    p.skip_ws();
    if p.pos == source.len() {
        return Err(p.error("an expression (input is empty)"));
    }
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != source.len() {
        return Err(p.error("end of input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn error(&self, expected: &str) -> Error {
        Error::Parse {
            offset: self.pos,
            expected: expected.to_string(),
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            self.skip_ws();
            let at = self.pos;
            let op = match self.peek() {
                Some(b'+') => BinaryOp::Add,
                Some(b'-') => BinaryOp::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = binary(op, lhs, rhs, at);
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            self.skip_ws();
            let at = self.pos;
            let op = match self.peek() {
                Some(b'*') => BinaryOp::Mul,
                Some(b'/') => BinaryOp::Div,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.factor()?;
            lhs = binary(op, lhs, rhs, at);
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.base()?;
        self.skip_ws();
        let at = self.pos;
        if self.eat(b'^') {
            let exponent = self.factor()?;
            return Ok(binary(BinaryOp::Pow, base, exponent, at));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Expr> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            None => Err(self.error("a number, variable, function or '('")),
            Some(b'-') => {
                self.pos += 1;
                let inner = self.base()?;
                Ok(Expr {
                    node: Node::Unary(UnaryOp::Neg, Box::new(inner)),
                    offset: start,
                })
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("')'"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.ident(),
            Some(_) => Err(self.error("a number, variable, function or '('")),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut end = start;
        while end < bytes.len() && (bytes[end].is_ascii_digit() || bytes[end] == b'.') {
            end += 1;
        }
        // optional exponent, only consumed when digits follow
        if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
            let mut k = end + 1;
            if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                k += 1;
            }
            if k < bytes.len() && bytes[k].is_ascii_digit() {
                while k < bytes.len() && bytes[k].is_ascii_digit() {
                    k += 1;
                }
                end = k;
            }
        }
        let text = &self.src[start..end];
        let value: f64 = text.parse().map_err(|_| Error::Parse {
            offset: start,
            expected: "a decimal number".to_string(),
        })?;
        self.pos = end;
        Ok(Expr {
            node: Node::Number(value),
            offset: start,
        })
    }

    fn ident(&mut self) -> Result<Expr> {
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut end = start;
        while end < bytes.len() && (bytes[end].is_ascii_alphanumeric() || bytes[end] == b'_') {
            end += 1;
        }
        let name = &self.src[start..end];
        let node = match name {
            "t" => Node::Var(Var::T),
            "z" => Node::Var(Var::Z),
            _ => {
                let Some(op) = UnaryOp::from_ident(name) else {
                    return Err(Error::Parse {
                        offset: start,
                        expected: format!(
                            "t, z or one of sin, cos, abs, exp, log, sqrt (found unknown identifier `{name}`)"
                        ),
                    });
                };
                self.pos = end;
                if !self.eat(b'(') {
                    return Err(self.error("'(' after function name"));
                }
                let arg = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("')'"));
                }
                return Ok(Expr {
                    node: Node::Unary(op, Box::new(arg)),
                    offset: start,
                });
            }
        };
        self.pos = end;
        Ok(Expr {
            node,
            offset: start,
        })
    }
}

fn binary(op: BinaryOp, lhs: Expr, rhs: Expr, offset: usize) -> Expr {
    Expr {
        node: Node::Binary(op, Box::new(lhs), Box::new(rhs)),
        offset,
    }
}
