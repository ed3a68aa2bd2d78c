//! Scalar expressions in the variables `s`, `t`, `w`.
//!
//! Grammar, lowest precedence first:
//!
//! ```text
//! sum     := product (('+' | '-') product)*
//! product := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' unary)?
//! atom    := number | 's' | 't' | 'w' | 'pi' | 'e' | func '(' sum ')' | '(' sum ')'
//! func    := sin | cos | tan | sinh | cosh | exp | ln | sqrt | csc | sec | csch | sech
//! ```
//!
//! `^` is right associative and binds tighter than unary minus, so `-s^2`
//! is `-(s^2)` and `2^-s` is `2^(-s)`.

mod eval;
mod jet;
mod parse;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use eval::{eval_s, eval_tw, eval_value, EvalError};
pub use jet::{Jet1x4, Jet2x2, Taylor};
pub use parse::{parse, ParseError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Var {
    S,
    T,
    W,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::S => "s",
            Var::T => "t",
            Var::W => "w",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Constant {
    Pi,
    E,
}

impl Constant {
    pub fn value(self) -> f64 {
        match self {
            Constant::Pi => std::f64::consts::PI,
            Constant::E => std::f64::consts::E,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Constant::Pi => "pi",
            Constant::E => "e",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Exp,
    Ln,
    Sqrt,
    Csc,
    Sec,
    Csch,
    Sech,
}

impl Func {
    pub const ALL: [Func; 12] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Sinh,
        Func::Cosh,
        Func::Exp,
        Func::Ln,
        Func::Sqrt,
        Func::Csc,
        Func::Sec,
        Func::Csch,
        Func::Sech,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
            Func::Csc => "csc",
            Func::Sec => "sec",
            Func::Csch => "csch",
            Func::Sech => "sech",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
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
            BinOp::Add => " + ",
            BinOp::Sub => " - ",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(Var),
    Const(Constant),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn num(x: f64) -> Expr {
        Expr::Num(x)
    }

    pub fn var(v: Var) -> Expr {
        Expr::Var(v)
    }

    pub fn bin(op: BinOp, a: Expr, b: Expr) -> Expr {
        Expr::Bin(op, Box::new(a), Box::new(b))
    }

    pub fn call(f: Func, a: Expr) -> Expr {
        Expr::Call(f, Box::new(a))
    }

    pub fn neg(a: Expr) -> Expr {
        Expr::Neg(Box::new(a))
    }

    /// Whether `v` occurs anywhere in the tree.
    pub fn uses(&self, v: Var) -> bool {
        match self {
            Expr::Var(x) => *x == v,
            Expr::Num(_) | Expr::Const(_) => false,
            Expr::Neg(a) | Expr::Call(_, a) => a.uses(v),
            Expr::Bin(_, a, b) => a.uses(v) || b.uses(v),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
            Expr::Neg(_) => 3,
            Expr::Bin(BinOp::Pow, ..) => 4,
            Expr::Num(x) if x.is_sign_negative() => 3,
            _ => 5,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        let paren = self.precedence() < min_prec;
        if paren {
            f.write_str("(")?;
        }
        match self {
            Expr::Num(x) => write!(f, "{x}")?,
            Expr::Var(v) => f.write_str(v.name())?,
            Expr::Const(c) => f.write_str(c.name())?,
            Expr::Neg(a) => {
                f.write_str("-")?;
                a.write_at(f, 3)?;
            }
            Expr::Call(func, a) => {
                write!(f, "{}(", func.name())?;
                a.write_at(f, 0)?;
                f.write_str(")")?;
            }
            Expr::Bin(op, a, b) => {
                let (lp, rp) = match op {
                    BinOp::Add | BinOp::Sub => (1, 2),
                    BinOp::Mul | BinOp::Div => (2, 3),
                    BinOp::Pow => (5, 3),
                };
                a.write_at(f, lp)?;
                f.write_str(op.symbol())?;
                b.write_at(f, rp)?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

impl FromStr for Expr {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

impl Serialize for Expr {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Expr {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let text = String::deserialize(de)?;
        parse(&text).map_err(serde::de::Error::custom)
    }
}
