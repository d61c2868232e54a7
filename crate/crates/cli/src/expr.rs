//! Potential expressions: a small recursive-descent language over `t`.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' unary)?
//! atom  := number | 'pi' | 't' | param | func '(' expr ')' | '(' expr ')'
//! ```

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Sinh,
    Cosh,
    Tanh,
    Abs,
    Sqrt,
}

const FUNCS: [(&str, Func); 9] = [
    ("sin", Func::Sin),
    ("cos", Func::Cos),
    ("tan", Func::Tan),
    ("exp", Func::Exp),
    ("sinh", Func::Sinh),
    ("cosh", Func::Cosh),
    ("tanh", Func::Tanh),
    ("abs", Func::Abs),
    ("sqrt", Func::Sqrt),
];

impl Func {
    fn lookup(name: &str) -> Option<Func> {
        FUNCS.iter().find(|(n, _)| *n == name).map(|(_, f)| *f)
    }

    pub fn name(self) -> &'static str {
        FUNCS.iter().find(|(_, f)| *f == self).map(|(n, _)| *n).unwrap()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Number(f64),
    Pi,
    Var,
    Param(String),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq, Error)]
#[error("parse error at byte {position}: {message} (expected {})", expected.join(" or "))]
pub struct ParseError {
    pub position: usize,
    pub message: String,
    pub expected: Vec<&'static str>,
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("square root of negative value {0}")]
    NegativeSqrt(f64),
    #[error("parameter `{0}` is not bound")]
    Unbound(String),
    #[error("non-finite value from {0}")]
    NonFinite(String),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Sym(char),
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn next(&mut self) -> Result<(usize, Tok), ParseError> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&b) = bytes.get(start) else {
            return Ok((start, Tok::End));
        };
        if b.is_ascii_digit() || b == b'.' {
            let mut end = start;
            while end < bytes.len() && (bytes[end].is_ascii_digit() || bytes[end] == b'.') {
                end += 1;
            }
            if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
                let mut e = end + 1;
                if e < bytes.len() && (bytes[e] == b'+' || bytes[e] == b'-') {
                    e += 1;
                }
                if e < bytes.len() && bytes[e].is_ascii_digit() {
                    while e < bytes.len() && bytes[e].is_ascii_digit() {
                        e += 1;
                    }
                    end = e;
                }
            }
            let text = &self.src[start..end];
            let value = text
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| ParseError {
                    position: start,
                    message: format!("malformed number `{text}`"),
                    expected: vec!["number"],
                })?;
            self.pos = end;
            return Ok((start, Tok::Num(value)));
        }
        if b.is_ascii_alphabetic() || b == b'_' {
            let mut end = start;
            while end < bytes.len() && (bytes[end].is_ascii_alphanumeric() || bytes[end] == b'_') {
                end += 1;
            }
            self.pos = end;
            return Ok((start, Tok::Ident(self.src[start..end].to_string())));
        }
        let c = self.src[start..].chars().next().unwrap();
        if "+-*/^()".contains(c) {
            self.pos += 1;
            return Ok((start, Tok::Sym(c)));
        }
        Err(ParseError {
            position: start,
            message: format!("unexpected character `{c}`"),
            expected: vec!["expression"],
        })
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    at: usize,
    params: &'a [&'a str],
}

const OPERAND: [&str; 1] = ["expression"];

impl<'a> Parser<'a> {
    fn bump(&mut self) -> Result<(), ParseError> {
        let (at, tok) = self.lexer.next()?;
        self.at = at;
        self.tok = tok;
        Ok(())
    }

    fn fail<T>(&self, message: String, expected: &[&'static str]) -> Result<T, ParseError> {
        Err(ParseError {
            position: self.at,
            message,
            expected: expected.to_vec(),
        })
    }

    fn found(&self) -> String {
        match &self.tok {
            Tok::Num(x) => format!("number {x}"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::End => "end of input".to_string(),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        while let Tok::Sym(c @ ('+' | '-')) = self.tok {
            self.bump()?;
            let op = if c == '+' { BinOp::Add } else { BinOp::Sub };
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(self.term()?));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while let Tok::Sym(c @ ('*' | '/')) = self.tok {
            self.bump()?;
            let op = if c == '*' { BinOp::Mul } else { BinOp::Div };
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.tok == Tok::Sym('-') {
            self.bump()?;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.tok == Tok::Sym('^') {
            self.bump()?;
            return Ok(Expr::Binary(BinOp::Pow, Box::new(base), Box::new(self.unary()?)));
        }
        Ok(base)
    }

    fn close(&mut self) -> Result<(), ParseError> {
        if self.tok != Tok::Sym(')') {
            return self.fail(format!("found {}", self.found()), &["')'", "operator"]);
        }
        self.bump()
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.tok.clone() {
            Tok::Num(x) => {
                self.bump()?;
                Ok(Expr::Number(x))
            }
            Tok::Sym('(') => {
                self.bump()?;
                let e = self.expr()?;
                self.close()?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let at = self.at;
                self.bump()?;
                if let Some(f) = Func::lookup(&name) {
                    if self.tok != Tok::Sym('(') {
                        return self.fail(format!("function `{name}` needs an argument"), &["'('"]);
                    }
                    self.bump()?;
                    let arg = self.expr()?;
                    self.close()?;
                    return Ok(Expr::Call(f, Box::new(arg)));
                }
                match name.as_str() {
                    "pi" => Ok(Expr::Pi),
                    "t" => Ok(Expr::Var),
                    _ if self.params.contains(&name.as_str()) => Ok(Expr::Param(name)),
                    _ => Err(ParseError {
                        position: at,
                        message: format!("unknown identifier `{name}`"),
                        expected: vec!["function", "'pi'", "'t'", "parameter"],
                    }),
                }
            }
            _ => self.fail(format!("found {}", self.found()), &OPERAND),
        }
    }
}

/// Parses an expression in `t` with no free parameters.
pub fn parse_potential(text: &str) -> Result<Expr, ParseError> {
    parse_with_params(text, &[])
}

/// Parses an expression whose identifiers may also name one of `params`.
pub fn parse_with_params(text: &str, params: &[&str]) -> Result<Expr, ParseError> {
    let mut p = Parser {
        lexer: Lexer { src: text, pos: 0 },
        tok: Tok::End,
        at: 0,
        params,
    };
    p.bump()?;
    let e = p.expr()?;
    if p.tok != Tok::End {
        return p.fail(format!("trailing {}", p.found()), &["operator", "end of input"]);
    }
    Ok(e)
}

pub type Bindings = BTreeMap<String, f64>;

impl Expr {
    pub fn eval(&self, t: f64, params: &Bindings) -> Result<f64, EvalError> {
        let v = match self {
            Expr::Number(x) => *x,
            Expr::Pi => PI,
            Expr::Var => t,
            Expr::Param(name) => *params.get(name).ok_or_else(|| EvalError::Unbound(name.clone()))?,
            Expr::Neg(e) => -e.eval(t, params)?,
            Expr::Binary(op, l, r) => {
                let (a, b) = (l.eval(t, params)?, r.eval(t, params)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div if b == 0.0 => return Err(EvalError::DivisionByZero),
                    BinOp::Div => a / b,
                    BinOp::Pow => a.powf(b),
                }
            }
            Expr::Call(f, e) => {
                let x = e.eval(t, params)?;
                match f {
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Tan => x.tan(),
                    Func::Exp => x.exp(),
                    Func::Sinh => x.sinh(),
                    Func::Cosh => x.cosh(),
                    Func::Tanh => x.tanh(),
                    Func::Abs => x.abs(),
                    Func::Sqrt if x < 0.0 => return Err(EvalError::NegativeSqrt(x)),
                    Func::Sqrt => x.sqrt(),
                }
            }
        };
        if !v.is_finite() {
            return Err(EvalError::NonFinite(self.to_string()));
        }
        Ok(v)
    }

    /// Replaces every parameter by its value.
    pub fn bind(&self, params: &Bindings) -> Result<Expr, EvalError> {
        Ok(match self {
            Expr::Param(name) => {
                Expr::Number(*params.get(name).ok_or_else(|| EvalError::Unbound(name.clone()))?)
            }
            Expr::Neg(e) => Expr::Neg(Box::new(e.bind(params)?)),
            Expr::Binary(op, l, r) => Expr::Binary(*op, Box::new(l.bind(params)?), Box::new(r.bind(params)?)),
            Expr::Call(f, e) => Expr::Call(*f, Box::new(e.bind(params)?)),
            other => other.clone(),
        })
    }

    /// Names of the parameters used, sorted and deduplicated.
    pub fn params(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_params(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_params(&self, out: &mut Vec<String>) {
        match self {
            Expr::Param(n) => out.push(n.clone()),
            Expr::Neg(e) | Expr::Call(_, e) => e.collect_params(out),
            Expr::Binary(_, l, r) => {
                l.collect_params(out);
                r.collect_params(out);
            }
            _ => {}
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Binary(BinOp::Mul | BinOp::Div, ..) => 2,
            Expr::Neg(_) => 3,
            Expr::Number(x) if x.is_sign_negative() => 3,
            Expr::Binary(BinOp::Pow, ..) => 4,
            _ => 5,
        }
    }
}

fn wrap(f: &mut fmt::Formatter<'_>, e: &Expr, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

/// Prints with the fewest parentheses that reparse to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Number(x) if x.is_sign_negative() => write!(f, "-{}", -x),
            Expr::Number(x) => write!(f, "{x}"),
            Expr::Pi => f.write_str("pi"),
            Expr::Var => f.write_str("t"),
            Expr::Param(n) => f.write_str(n),
            Expr::Neg(e) => {
                f.write_str("-")?;
                wrap(f, e, e.precedence() < 3)
            }
            Expr::Call(func, e) => write!(f, "{}({e})", func.name()),
            Expr::Binary(BinOp::Pow, l, r) => {
                wrap(f, l, l.precedence() <= 4)?;
                f.write_str("^")?;
                wrap(f, r, r.precedence() < 3)
            }
            Expr::Binary(op, l, r) => {
                let p = self.precedence();
                wrap(f, l, l.precedence() < p)?;
                write!(f, " {} ", op.symbol())?;
                wrap(f, r, r.precedence() <= p)
            }
        }
    }
}
