//! Expressions in the single variable `y`, used to enter custom scaled
//! deformation maps `k(y)`.
//!
//! The grammar is a small precedence-climbing one:
//!
//! ```text
//! sum     := product (('+' | '-') product)*
//! product := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | power
//! power   := atom ('^' unary)?          // right associative
//! atom    := number | 'y' | 'pi' | 'e' | func '(' sum ')' | '(' sum ')'
//! ```
//!
//! There is no implicit multiplication, and the only accepted variable is `y`.
//! Evaluation never yields NaN or an infinity; those cases surface as
//! [`EvalError`].

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at byte {offset}: {message}")]
pub struct SyntaxError {
    pub offset: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("cannot evaluate `{node}` at y = {y}: {reason}")]
pub struct EvalError {
    /// Canonical text of the sub-expression that failed.
    pub node: String,
    pub y: f64,
    pub reason: &'static str,
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
    Sin,
    Cos,
    Tan,
    Atan,
    Sinh,
    Cosh,
    Tanh,
    Sqrt,
    Exp,
    Ln,
    Abs,
}

impl Func {
    pub const ALL: [Func; 11] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Atan,
        Func::Sinh,
        Func::Cosh,
        Func::Tanh,
        Func::Sqrt,
        Func::Exp,
        Func::Ln,
        Func::Abs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Atan => "atan",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Sqrt => "sqrt",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Abs => "abs",
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedConst {
    Pi,
    E,
}

impl NamedConst {
    fn value(self) -> f64 {
        match self {
            NamedConst::Pi => std::f64::consts::PI,
            NamedConst::E => std::f64::consts::E,
        }
    }

    fn name(self) -> &'static str {
        match self {
            NamedConst::Pi => "pi",
            NamedConst::E => "e",
        }
    }
}

/// Parsed expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Named(NamedConst),
    Var,
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn parse(source: &str) -> Result<Expr, SyntaxError> {
        let tokens = tokenize(source)?;
        let mut parser = Parser {
            tokens,
            pos: 0,
            end: source.len(),
            depth: 0,
        };
        let expr = parser.sum()?;
        match parser.peek() {
            None => Ok(expr),
            Some(tok) => Err(SyntaxError {
                offset: tok.offset,
                message: match tok.kind {
                    TokenKind::RParen => "unbalanced parenthesis: unexpected ')'".into(),
                    _ => format!("unexpected token {}", tok.kind),
                },
            }),
        }
    }

    pub fn eval(&self, y: f64) -> Result<f64, EvalError> {
        let fail = |reason| EvalError {
            node: self.to_string(),
            y,
            reason,
        };
        let value = match self {
            Expr::Const(c) => *c,
            Expr::Named(c) => c.value(),
            Expr::Var => y,
            Expr::Neg(inner) => -inner.eval(y)?,
            Expr::Binary(op, lhs, rhs) => {
                let l = lhs.eval(y)?;
                let r = rhs.eval(y)?;
                match op {
                    BinOp::Add => l + r,
                    BinOp::Sub => l - r,
                    BinOp::Mul => l * r,
                    BinOp::Div => {
                        if r == 0.0 {
                            return Err(fail("division by zero"));
                        }
                        l / r
                    }
                    BinOp::Pow => {
                        if l < 0.0 && r.fract() != 0.0 {
                            return Err(fail("non-integer power of a negative base"));
                        }
                        if l == 0.0 && r < 0.0 {
                            return Err(fail("negative power of zero"));
                        }
                        l.powf(r)
                    }
                }
            }
            Expr::Call(func, arg) => {
                let x = arg.eval(y)?;
                match func {
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Tan => x.tan(),
                    Func::Atan => x.atan(),
                    Func::Sinh => x.sinh(),
                    Func::Cosh => x.cosh(),
                    Func::Tanh => x.tanh(),
                    Func::Sqrt => {
                        if x < 0.0 {
                            return Err(fail("square root of a negative number"));
                        }
                        x.sqrt()
                    }
                    Func::Exp => x.exp(),
                    Func::Ln => {
                        if x <= 0.0 {
                            return Err(fail("logarithm of a non-positive number"));
                        }
                        x.ln()
                    }
                    Func::Abs => x.abs(),
                }
            }
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(fail("non-finite result"))
        }
    }
}

impl FromStr for Expr {
    type Err = SyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Expr::parse(s)
    }
}

/// Canonical, fully parenthesized form. Re-parsing it gives back the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) if c.is_sign_negative() => write!(f, "(-{:?})", -c),
            Expr::Const(c) => write!(f, "{c:?}"),
            Expr::Named(c) => f.write_str(c.name()),
            Expr::Var => f.write_str("y"),
            Expr::Neg(inner) => write!(f, "(-{inner})"),
            Expr::Binary(op, l, r) => write!(f, "({l} {} {r})", op.symbol()),
            Expr::Call(func, arg) => write!(f, "{}({arg})", func.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum TokenKind {
    Number(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Number(n) => write!(f, "number {n}"),
            TokenKind::Ident(s) => write!(f, "`{s}`"),
            TokenKind::Op(c) => write!(f, "`{c}`"),
            TokenKind::LParen => f.write_str("`(`"),
            TokenKind::RParen => f.write_str("`)`"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokenKind,
    offset: usize,
}

fn tokenize(source: &str) -> Result<Vec<Token>, SyntaxError> {
    let bytes = source.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' | b'-' | b'*' | b'/' | b'^' => {
                tokens.push(Token {
                    kind: TokenKind::Op(c as char),
                    offset: start,
                });
                i += 1;
            }
            b'(' => {
                tokens.push(Token {
                    kind: TokenKind::LParen,
                    offset: start,
                });
                i += 1;
            }
            b')' => {
                tokens.push(Token {
                    kind: TokenKind::RParen,
                    offset: start,
                });
                i += 1;
            }
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                // Exponent only when followed by digits, so `2e` stays `2` then `e`.
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
                let text = &source[start..i];
                let value = text.parse::<f64>().map_err(|_| SyntaxError {
                    offset: start,
                    message: format!("malformed number `{text}`"),
                })?;
                tokens.push(Token {
                    kind: TokenKind::Number(value),
                    offset: start,
                });
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                tokens.push(Token {
                    kind: TokenKind::Ident(source[start..i].to_string()),
                    offset: start,
                });
            }
            _ => {
                let ch = source[start..].chars().next().unwrap_or('?');
                return Err(SyntaxError {
                    offset: start,
                    message: format!("unexpected character `{ch}`"),
                });
            }
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end: usize,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let tok = self.tokens.get(self.pos).cloned();
        if tok.is_some() {
            self.pos += 1;
        }
        tok
    }

    fn eat_op(&mut self, ops: &[char]) -> Option<char> {
        match self.peek() {
            Some(Token {
                kind: TokenKind::Op(c),
                ..
            }) if ops.contains(c) => {
                let c = *c;
                self.pos += 1;
                Some(c)
            }
            _ => None,
        }
    }

    fn end_of_input(&self) -> SyntaxError {
        let message = if self.depth > 0 {
            "unbalanced parenthesis: unexpected end of input"
        } else {
            "unexpected end of input"
        };
        SyntaxError {
            offset: self.end,
            message: message.into(),
        }
    }

    fn sum(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.product()?;
        while let Some(op) = self.eat_op(&['+', '-']) {
            let rhs = self.product()?;
            let op = if op == '+' { BinOp::Add } else { BinOp::Sub };
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn product(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.unary()?;
        while let Some(op) = self.eat_op(&['*', '/']) {
            let rhs = self.unary()?;
            let op = if op == '*' { BinOp::Mul } else { BinOp::Div };
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, SyntaxError> {
        match self.eat_op(&['-', '+']) {
            Some('-') => Ok(Expr::Neg(Box::new(self.unary()?))),
            Some(_) => self.unary(),
            None => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, SyntaxError> {
        let base = self.atom()?;
        if self.eat_op(&['^']).is_some() {
            let exponent = self.unary()?;
            return Ok(Expr::Binary(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, SyntaxError> {
        let Some(tok) = self.next() else {
            return Err(self.end_of_input());
        };
        match tok.kind {
            TokenKind::Number(n) => Ok(Expr::Const(n)),
            TokenKind::LParen => {
                self.depth += 1;
                let inner = self.sum()?;
                self.expect_rparen()?;
                self.depth -= 1;
                Ok(inner)
            }
            TokenKind::Ident(name) => match name.as_str() {
                "y" => Ok(Expr::Var),
                "pi" => Ok(Expr::Named(NamedConst::Pi)),
                "e" => Ok(Expr::Named(NamedConst::E)),
                _ => {
                    let Some(func) = Func::from_name(&name) else {
                        return Err(SyntaxError {
                            offset: tok.offset,
                            message: format!("unknown identifier `{name}`"),
                        });
                    };
                    match self.next() {
                        Some(Token {
                            kind: TokenKind::LParen,
                            ..
                        }) => {}
                        Some(other) => {
                            return Err(SyntaxError {
                                offset: other.offset,
                                message: format!("expected `(` after `{name}`"),
                            })
                        }
                        None => return Err(self.end_of_input()),
                    }
                    self.depth += 1;
                    let arg = self.sum()?;
                    self.expect_rparen()?;
                    self.depth -= 1;
                    Ok(Expr::Call(func, Box::new(arg)))
                }
            },
            TokenKind::RParen => Err(SyntaxError {
                offset: tok.offset,
                message: "unbalanced parenthesis: unexpected ')'".into(),
            }),
            TokenKind::Op(c) => Err(SyntaxError {
                offset: tok.offset,
                message: format!("unexpected operator `{c}`"),
            }),
        }
    }

    fn expect_rparen(&mut self) -> Result<(), SyntaxError> {
        match self.next() {
            Some(Token {
                kind: TokenKind::RParen,
                ..
            }) => Ok(()),
            Some(other) => Err(SyntaxError {
                offset: other.offset,
                message: format!("expected `)`, found {}", other.kind),
            }),
            None => Err(self.end_of_input()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn ev(src: &str, y: f64) -> f64 {
        Expr::parse(src).unwrap().eval(y).unwrap()
    }

    #[test]
    fn variable_node() {
        assert_eq!(Expr::parse("y").unwrap(), Expr::Var);
    }

    #[test]
    fn atan_expression() {
        assert!((ev("2*atan(y)/pi", 1.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn unclosed_paren_reports_offset() {
        let err = Expr::parse("y*(").unwrap_err();
        assert_eq!(err.offset, 3);
        assert!(err.message.contains("unbalanced"));
        assert_eq!(Expr::parse("(y").unwrap_err().offset, 2);
        assert_eq!(Expr::parse("y)").unwrap_err().offset, 1);
    }

    #[test]
    fn unknown_identifier_rejected_at_parse_time() {
        let err = Expr::parse("2*x").unwrap_err();
        assert_eq!(err.offset, 2);
        assert!(err.message.contains("unknown identifier"));
        assert!(Expr::parse("sn(y)").is_err());
    }

    #[test]
    fn no_implicit_multiplication() {
        assert!(Expr::parse("2y").is_err());
        assert!(Expr::parse("2 y").is_err());
        assert!(Expr::parse("2e").is_err());
        assert!(Expr::parse("sin y").is_err());
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(ev("2+3*4", 0.0), 14.0);
        assert_eq!(ev("2^3^2", 0.0), 512.0);
        assert_eq!(ev("-y^2", 3.0), -9.0);
        assert_eq!(ev("(2+3)*4", 0.0), 20.0);
        assert_eq!(ev("8/4/2", 0.0), 1.0);
        assert_eq!(ev("2^-1", 0.0), 0.5);
        assert_eq!(ev("1e-3*1.5E2", 0.0), 0.15);
    }

    #[test]
    fn cube() {
        assert_eq!(ev("y^3", 2.0), 8.0);
    }

    #[test]
    fn kempf_map() {
        let v = ev("tan(pi*y/2)*2/pi", 0.5);
        assert!((v - 2.0 / PI).abs() < 1e-15);
    }

    #[test]
    fn domain_errors() {
        let e = Expr::parse("sqrt(y)").unwrap();
        let err = e.eval(-1.0).unwrap_err();
        assert_eq!(err.node, "sqrt(y)");
        assert_eq!(err.y, -1.0);
        assert!(Expr::parse("ln(y)").unwrap().eval(0.0).is_err());
        assert!(Expr::parse("1/y").unwrap().eval(0.0).is_err());
        assert!(Expr::parse("y^0.5").unwrap().eval(-2.0).is_err());
        assert_eq!(ev("y^2", -2.0), 4.0);
        assert!(Expr::parse("exp(y)").unwrap().eval(1000.0).is_err());
        assert!(Expr::parse("y^-1").unwrap().eval(0.0).is_err());
    }

    #[test]
    fn display_is_reparseable() {
        let e = Expr::parse("-y^2 + 3*sin(pi*y)/ (1 - e)").unwrap();
        let printed = e.to_string();
        assert_eq!(Expr::parse(&printed).unwrap(), e);
    }
}
