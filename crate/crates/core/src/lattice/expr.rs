//! Rational expressions over the stencil placeholders.

use std::fmt;

use thiserror::Error;

/// Placeholder symbols an expression may mention.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sym {
    X00,
    X10,
    X01,
    Z,
}

impl Sym {
    pub const ALL: [Sym; 4] = [Sym::X00, Sym::X10, Sym::X01, Sym::Z];

    pub fn name(self) -> &'static str {
        match self {
            Sym::X00 => "x00",
            Sym::X10 => "x10",
            Sym::X01 => "x01",
            Sym::Z => "z",
        }
    }

    fn from_name(s: &str) -> Option<Sym> {
        Sym::ALL.into_iter().find(|x| x.name() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => " + ",
            BinOp::Sub => " - ",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Num(u64),
    Sym(Sym),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("syntax error at position {pos}: {msg}")]
pub struct ParseError {
    /// Byte offset into the source text.
    pub pos: usize,
    pub msg: String,
}

impl Expr {
    pub fn sym(s: Sym) -> Expr {
        Expr::Sym(s)
    }

    pub fn bin(op: BinOp, a: Expr, b: Expr) -> Expr {
        Expr::Bin(op, Box::new(a), Box::new(b))
    }

    pub fn parse(text: &str) -> Result<Expr, ParseError> {
        let tokens = tokenize(text)?;
        let mut p = Parser { tokens, i: 0, end: text.len() };
        let e = p.expr()?;
        if let Some(t) = p.tokens.get(p.i) {
            return Err(ParseError { pos: t.pos, msg: format!("unexpected {}", t.kind.describe()) });
        }
        Ok(e)
    }

    /// Every symbol the expression mentions.
    pub fn symbols(&self) -> Vec<Sym> {
        let mut out = Vec::new();
        self.visit(&mut |s| out.push(s));
        out.sort();
        out.dedup();
        out
    }

    fn visit(&self, f: &mut impl FnMut(Sym)) {
        match self {
            Expr::Num(_) => {}
            Expr::Sym(s) => f(*s),
            Expr::Neg(a) => a.visit(f),
            Expr::Bin(_, a, b) => {
                a.visit(f);
                b.visit(f);
            }
        }
    }

    /// Evaluates bottom-up with caller-supplied arithmetic.
    pub fn eval<T, E>(
        &self,
        leaf: &mut impl FnMut(Leaf) -> Result<T, E>,
        op: &mut impl FnMut(Op<T>) -> Result<T, E>,
    ) -> Result<T, E> {
        match self {
            Expr::Num(n) => leaf(Leaf::Num(*n)),
            Expr::Sym(s) => leaf(Leaf::Sym(*s)),
            Expr::Neg(a) => {
                let a = a.eval(leaf, op)?;
                op(Op::Neg(a))
            }
            Expr::Bin(o, a, b) => {
                let a = a.eval(leaf, op)?;
                let b = b.eval(leaf, op)?;
                op(Op::Bin(*o, a, b))
            }
        }
    }
}

/// Leaf of an expression handed to [`Expr::eval`].
pub enum Leaf {
    Num(u64),
    Sym(Sym),
}

/// Interior node handed to [`Expr::eval`].
pub enum Op<T> {
    Neg(T),
    Bin(BinOp, T, T),
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(n) => write!(f, "{n}"),
            Expr::Sym(s) => f.write_str(s.name()),
            Expr::Neg(a) => match **a {
                Expr::Bin(..) => write!(f, "-({a})"),
                _ => write!(f, "-{a}"),
            },
            Expr::Bin(op, a, b) => {
                let p = op.precedence();
                let left_paren = matches!(**a, Expr::Bin(o, ..) if o.precedence() < p);
                let right_paren = matches!(**b, Expr::Bin(o, ..) if o.precedence() <= p);
                if left_paren {
                    write!(f, "({a})")?;
                } else {
                    write!(f, "{a}")?;
                }
                f.write_str(op.symbol())?;
                if right_paren {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum TokKind {
    Num(u64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
}

impl TokKind {
    fn describe(&self) -> String {
        match self {
            TokKind::Num(n) => format!("number {n}"),
            TokKind::Ident(s) => format!("identifier '{s}'"),
            TokKind::Plus => "'+'".into(),
            TokKind::Minus => "'-'".into(),
            TokKind::Star => "'*'".into(),
            TokKind::Slash => "'/'".into(),
            TokKind::LParen => "'('".into(),
            TokKind::RParen => "')'".into(),
        }
    }
}

struct Token {
    kind: TokKind,
    pos: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let kind = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => TokKind::Plus,
            b'-' => TokKind::Minus,
            b'*' => TokKind::Star,
            b'/' => TokKind::Slash,
            b'(' => TokKind::LParen,
            b')' => TokKind::RParen,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n = text[start..i]
                    .parse()
                    .map_err(|_| ParseError { pos: start, msg: "integer literal too large".into() })?;
                out.push(Token { kind: TokKind::Num(n), pos: start });
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push(Token { kind: TokKind::Ident(text[start..i].to_string()), pos: start });
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(ParseError { pos: start, msg: format!("unexpected character '{ch}'") });
            }
        };
        out.push(Token { kind, pos: start });
        i += 1;
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    i: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&TokKind> {
        self.tokens.get(self.i).map(|t| &t.kind)
    }

    fn pos(&self) -> usize {
        self.tokens.get(self.i).map_or(self.end, |t| t.pos)
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.term()?;
        loop {
            let op = match self.peek() {
                Some(TokKind::Plus) => BinOp::Add,
                Some(TokKind::Minus) => BinOp::Sub,
                _ => return Ok(e),
            };
            self.i += 1;
            let rhs = self.term()?;
            e = Expr::bin(op, e, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(TokKind::Star) => BinOp::Mul,
                Some(TokKind::Slash) => BinOp::Div,
                _ => return Ok(e),
            };
            self.i += 1;
            let rhs = self.unary()?;
            e = Expr::bin(op, e, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some(&TokKind::Minus) {
            self.i += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        let Some(tok) = self.peek().cloned() else {
            return Err(ParseError { pos, msg: "unexpected end of expression".into() });
        };
        self.i += 1;
        match tok {
            TokKind::Num(n) => Ok(Expr::Num(n)),
            TokKind::Ident(name) => Sym::from_name(&name)
                .map(Expr::Sym)
                .ok_or_else(|| ParseError { pos, msg: format!("unknown symbol '{name}' (expected x00, x10, x01 or z)") }),
            TokKind::LParen => {
                let e = self.expr()?;
                if self.peek() != Some(&TokKind::RParen) {
                    return Err(ParseError { pos: self.pos(), msg: "expected ')'".into() });
                }
                self.i += 1;
                Ok(e)
            }
            other => Err(ParseError { pos, msg: format!("unexpected {}", other.describe()) }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn precedence_and_associativity() {
        let e = Expr::parse("x00 - x10 - x01").unwrap();
        assert_eq!(e.to_string(), "x00 - x10 - x01");
        let e = Expr::parse("x00 - (x10 - x01)").unwrap();
        assert_eq!(e.to_string(), "x00 - (x10 - x01)");
        let e = Expr::parse("x00 + z/(x10 - x01)").unwrap();
        assert_eq!(e.to_string(), "x00 + z/(x10 - x01)");
        let e = Expr::parse("-x00*x01").unwrap();
        assert!(matches!(e, Expr::Bin(BinOp::Mul, ..)));
    }

    #[test]
    fn errors_carry_positions() {
        let err = Expr::parse("x00 + * z").unwrap_err();
        assert_eq!(err.pos, 6);
        let err = Expr::parse("x00 + y").unwrap_err();
        assert_eq!(err.pos, 6);
        let err = Expr::parse("(x00 + z").unwrap_err();
        assert_eq!(err.pos, 8);
        let err = Expr::parse("x00 $").unwrap_err();
        assert_eq!(err.pos, 4);
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (0u64..50).prop_map(Expr::Num),
            prop::sample::select(Sym::ALL.to_vec()).prop_map(Expr::Sym),
        ];
        leaf.prop_recursive(5, 40, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
                (
                    prop::sample::select(vec![BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div]),
                    inner.clone(),
                    inner
                )
                    .prop_map(|(o, a, b)| Expr::bin(o, a, b)),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(e in arb_expr()) {
            let printed = e.to_string();
            let back = Expr::parse(&printed).unwrap();
            prop_assert_eq!(&back, &e, "printed as {}", printed);
        }
    }
}
