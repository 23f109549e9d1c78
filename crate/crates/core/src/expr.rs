//! A small closed grammar for real double sequences written inline.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('-' | '+') unary | power
//! power  := atom ('^' unary)?
//! atom   := number | 'm' | 'n' | func '(' expr (',' expr)* ')' | '(' expr ')'
//! func   := 'pow' | 'log' | 'sin'
//! ```
//!
//! `log` is the natural logarithm. `−` and `·` are accepted as aliases of `-`
//! and `*`, so `(−1)^(m+n)` parses as written.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::sequence::DoubleSequence;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    M,
    N,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Log(Box<Expr>),
    Sin(Box<Expr>),
}

impl Expr {
    pub fn eval(&self, m: usize, n: usize) -> f64 {
        match self {
            Expr::Num(x) => *x,
            Expr::M => m as f64,
            Expr::N => n as f64,
            Expr::Neg(a) => -a.eval(m, n),
            Expr::Add(a, b) => a.eval(m, n) + b.eval(m, n),
            Expr::Sub(a, b) => a.eval(m, n) - b.eval(m, n),
            Expr::Mul(a, b) => a.eval(m, n) * b.eval(m, n),
            Expr::Div(a, b) => a.eval(m, n) / b.eval(m, n),
            Expr::Pow(a, b) => a.eval(m, n).powf(b.eval(m, n)),
            Expr::Log(a) => a.eval(m, n).ln(),
            Expr::Sin(a) => a.eval(m, n).sin(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    Comma,
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '0'..='9' | '.' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                // exponent part, e.g. 1e-3
                if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                    let mut j = i + 1;
                    if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                        j += 1;
                    }
                    if j < chars.len() && chars[j].is_ascii_digit() {
                        i = j;
                        while i < chars.len() && chars[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text: String = chars[start..i].iter().collect();
                let x = text
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad number `{text}`")))?;
                out.push(Token::Num(x));
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                out.push(Token::Ident(chars[start..i].iter().collect()));
            }
            '+' | '-' | '*' | '/' | '^' => {
                out.push(Token::Op(c));
                i += 1;
            }
            '−' => {
                out.push(Token::Op('-'));
                i += 1;
            }
            '·' | '×' => {
                out.push(Token::Op('*'));
                i += 1;
            }
            '(' => {
                out.push(Token::LParen);
                i += 1;
            }
            ')' => {
                out.push(Token::RParen);
                i += 1;
            }
            ',' => {
                out.push(Token::Comma);
                i += 1;
            }
            other => return Err(Error::Parse(format!("unexpected character `{other}`"))),
        }
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

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Token) -> Result<()> {
        match self.next() {
            Some(t) if t == want => Ok(()),
            Some(t) => Err(Error::Parse(format!("expected {want:?}, found {t:?}"))),
            None => Err(Error::Parse(format!("expected {want:?}, found end of input"))),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Some(Token::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = match op {
                '+' => Expr::Add(Box::new(lhs), Box::new(rhs)),
                _ => Expr::Sub(Box::new(lhs), Box::new(rhs)),
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while let Some(Token::Op(op @ ('*' | '/'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = match op {
                '*' => Expr::Mul(Box::new(lhs), Box::new(rhs)),
                _ => Expr::Div(Box::new(lhs), Box::new(rhs)),
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(Token::Op('-')) => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some(Token::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if let Some(Token::Op('^')) = self.peek() {
            self.pos += 1;
            let exp = self.unary()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn args(&mut self, func: &str, count: usize) -> Result<Vec<Expr>> {
        self.expect(Token::LParen)?;
        let mut args = vec![self.expr()?];
        while let Some(Token::Comma) = self.peek() {
            self.pos += 1;
            args.push(self.expr()?);
        }
        self.expect(Token::RParen)?;
        if args.len() != count {
            return Err(Error::Parse(format!(
                "{func} takes {count} argument(s), got {}",
                args.len()
            )));
        }
        Ok(args)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.next() {
            Some(Token::Num(x)) => Ok(Expr::Num(x)),
            Some(Token::Ident(id)) => match id.as_str() {
                "m" => Ok(Expr::M),
                "n" => Ok(Expr::N),
                "log" => {
                    let mut a = self.args("log", 1)?;
                    Ok(Expr::Log(Box::new(a.remove(0))))
                }
                "sin" => {
                    let mut a = self.args("sin", 1)?;
                    Ok(Expr::Sin(Box::new(a.remove(0))))
                }
                "pow" => {
                    let mut a = self.args("pow", 2)?;
                    let e = a.remove(1);
                    let b = a.remove(0);
                    Ok(Expr::Pow(Box::new(b), Box::new(e)))
                }
                other => Err(Error::Parse(format!("unknown identifier `{other}`"))),
            },
            Some(Token::LParen) => {
                let e = self.expr()?;
                self.expect(Token::RParen)?;
                Ok(e)
            }
            Some(t) => Err(Error::Parse(format!("unexpected token {t:?}"))),
            None => Err(Error::Parse("unexpected end of input".into())),
        }
    }
}

pub fn parse(src: &str) -> Result<Expr> {
    let tokens = tokenize(src)?;
    if tokens.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { tokens, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(Error::Parse(format!(
            "trailing input starting at {:?}",
            p.tokens[p.pos]
        )));
    }
    Ok(e)
}

/// Parses `src` into a real double sequence named after the expression.
pub fn sequence(src: &str) -> Result<DoubleSequence> {
    let e = Arc::new(parse(src)?);
    Ok(DoubleSequence::real(src.trim(), move |m, n| e.eval(m, n)))
}
