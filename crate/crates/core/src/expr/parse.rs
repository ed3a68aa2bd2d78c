use thiserror::Error;

use super::{BinOp, Constant, Expr, Func, Var};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { offset: usize, name: String },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. } | ParseError::UnknownIdentifier { offset, .. } => {
                *offset
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(u8),
    LParen,
    RParen,
    End,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    tok: Tok,
    tok_start: usize,
}

fn syntax(offset: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        offset,
        message: message.into(),
    }
}

/// Parse an expression in `s`, `t`, `w`. See the module docs for the grammar.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        tok: Tok::End,
        tok_start: 0,
    };
    p.advance()?;
    if p.tok == Tok::End {
        return Err(syntax(p.tok_start, "empty expression"));
    }
    let e = p.sum()?;
    if p.tok != Tok::End {
        return Err(syntax(p.tok_start, "unexpected trailing input"));
    }
    Ok(e)
}

impl Parser<'_> {
    fn advance(&mut self) -> Result<(), ParseError> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        self.tok_start = self.pos;
        let Some(&c) = self.src.get(self.pos) else {
            self.tok = Tok::End;
            return Ok(());
        };
        self.tok = match c {
            b'0'..=b'9' | b'.' => self.number()?,
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = self.pos;
                while self
                    .src
                    .get(self.pos)
                    .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
                {
                    self.pos += 1;
                }
                Tok::Ident(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
            }
            b'+' | b'-' | b'*' | b'/' | b'^' => {
                self.pos += 1;
                Tok::Op(c)
            }
            b'(' => {
                self.pos += 1;
                Tok::LParen
            }
            b')' => {
                self.pos += 1;
                Tok::RParen
            }
            _ => return Err(syntax(self.pos, format!("unexpected character `{}`", c as char))),
        };
        Ok(())
    }

    fn number(&mut self) -> Result<Tok, ParseError> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let from = p.pos;
            while p.src.get(p.pos).is_some_and(u8::is_ascii_digit) {
                p.pos += 1;
            }
            p.pos - from
        };
        let mut n = digits(self);
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            n += digits(self);
        }
        if n == 0 {
            return Err(syntax(start, "malformed number"));
        }
        // exponent only when digits follow, so `2e` stays a number then `e`
        if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                self.pos = save;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        text.parse::<f64>()
            .map(Tok::Num)
            .map_err(|_| syntax(start, "malformed number"))
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.product()?;
        loop {
            let op = match self.tok {
                Tok::Op(b'+') => BinOp::Add,
                Tok::Op(b'-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.advance()?;
            let rhs = self.product()?;
            lhs = Expr::bin(op, lhs, rhs);
        }
    }

    fn product(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.tok {
                Tok::Op(b'*') => BinOp::Mul,
                Tok::Op(b'/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.advance()?;
            let rhs = self.unary()?;
            lhs = Expr::bin(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.tok == Tok::Op(b'-') {
            self.advance()?;
            return Ok(Expr::neg(self.unary()?));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.tok == Tok::Op(b'^') {
            self.advance()?;
            let exp = self.unary()?;
            return Ok(Expr::bin(BinOp::Pow, base, exp));
        }
        Ok(base)
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        if self.tok != Tok::RParen {
            return Err(syntax(self.tok_start, "expected `)`"));
        }
        self.advance()
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let start = self.tok_start;
        match std::mem::replace(&mut self.tok, Tok::End) {
            Tok::Num(x) => {
                self.advance()?;
                Ok(Expr::Num(x))
            }
            Tok::LParen => {
                self.advance()?;
                let e = self.sum()?;
                self.expect_rparen()?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.advance()?;
                let leaf = match name.as_str() {
                    "s" => Some(Expr::Var(Var::S)),
                    "t" => Some(Expr::Var(Var::T)),
                    "w" => Some(Expr::Var(Var::W)),
                    "pi" => Some(Expr::Const(Constant::Pi)),
                    "e" => Some(Expr::Const(Constant::E)),
                    _ => None,
                };
                if let Some(leaf) = leaf {
                    return Ok(leaf);
                }
                let Some(func) = Func::from_name(&name) else {
                    return Err(ParseError::UnknownIdentifier {
                        offset: start,
                        name,
                    });
                };
                if self.tok != Tok::LParen {
                    return Err(syntax(self.tok_start, format!("expected `(` after `{name}`")));
                }
                self.advance()?;
                let arg = self.sum()?;
                self.expect_rparen()?;
                Ok(Expr::call(func, arg))
            }
            Tok::End => Err(syntax(start, "unexpected end of input")),
            tok => {
                self.tok = tok;
                Err(syntax(start, "expected a number, variable, function or `(`"))
            }
        }
    }
}
