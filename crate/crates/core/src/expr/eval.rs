use thiserror::Error;

use super::jet::{Jet1x4, Jet2x2, Taylor};
use super::{BinOp, Expr, Func, Var};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("variable `{0}` is not available here")]
    ForeignVariable(&'static str),
}

fn domain(msg: impl Into<String>) -> EvalError {
    EvalError::Domain(msg.into())
}

/// Value and the first four `s`-derivatives of `expr` at `s0`.
pub fn eval_s(expr: &Expr, s0: f64) -> Result<Jet1x4, EvalError> {
    eval_with(expr, &|v| match v {
        Var::S => Ok(Jet1x4::variable(s0)),
        other => Err(EvalError::ForeignVariable(other.name())),
    })
}

/// Value and partials up to second order in `(t, w)` at `(t0, w0)`.
pub fn eval_tw(expr: &Expr, t0: f64, w0: f64) -> Result<Jet2x2, EvalError> {
    eval_with(expr, &|v| match v {
        Var::T => Ok(Jet2x2::var_t(t0)),
        Var::W => Ok(Jet2x2::var_w(w0)),
        Var::S => Err(EvalError::ForeignVariable("s")),
    })
}

/// Plain value with all three variables bound.
pub fn eval_value(expr: &Expr, s: f64, t: f64, w: f64) -> Result<f64, EvalError> {
    eval_with(expr, &|v| {
        Ok(match v {
            Var::S => s,
            Var::T => t,
            Var::W => w,
        })
    })
}

fn checked<J: Taylor>(j: J, what: &str) -> Result<J, EvalError> {
    if j.is_finite() {
        Ok(j)
    } else {
        Err(domain(format!("{what} is not finite")))
    }
}

fn recip<J: Taylor>(x: J, what: &str) -> Result<J, EvalError> {
    let v = x.value();
    if v == 0.0 {
        return Err(domain(format!("{what}: division by zero")));
    }
    let i = 1.0 / v;
    let (i2, i3) = (i * i, i * i * i);
    checked(x.compose([i, -i2, 2.0 * i3, -6.0 * i3 * i, 24.0 * i3 * i2]), what)
}

fn powi_derivs(x: f64, n: i32) -> [f64; 5] {
    let mut out = [0.0; 5];
    let mut coef = 1.0;
    for (k, slot) in out.iter_mut().enumerate() {
        let e = n - k as i32;
        *slot = if coef == 0.0 { 0.0 } else { coef * x.powi(e) };
        coef *= e as f64;
    }
    out
}

fn powf_derivs(x: f64, p: f64) -> [f64; 5] {
    let mut out = [0.0; 5];
    let mut coef = 1.0;
    for (k, slot) in out.iter_mut().enumerate() {
        *slot = coef * x.powf(p - k as f64);
        coef *= p - k as f64;
    }
    out
}

fn pow<J: Taylor>(a: J, b: J) -> Result<J, EvalError> {
    let x = a.value();
    if b.is_constant() {
        let p = b.value();
        if p.fract() == 0.0 && p.abs() <= 64.0 {
            let n = p as i32;
            if x == 0.0 && n < 0 {
                return Err(domain("zero raised to a negative power"));
            }
            return checked(a.compose(powi_derivs(x, n)), "power");
        }
        if x <= 0.0 {
            return Err(domain(format!("non-positive base {x} with non-integer exponent")));
        }
        return checked(a.compose(powf_derivs(x, p)), "power");
    }
    if x <= 0.0 {
        return Err(domain(format!("non-positive base {x} with variable exponent")));
    }
    let ln = a.compose(ln_derivs(x));
    let y = b * ln;
    let e = y.value().exp();
    checked(y.compose([e; 5]), "power")
}

fn ln_derivs(x: f64) -> [f64; 5] {
    let i = 1.0 / x;
    [x.ln(), i, -i * i, 2.0 * i * i * i, -6.0 * i * i * i * i]
}

fn apply<J: Taylor>(f: Func, a: J) -> Result<J, EvalError> {
    let x = a.value();
    let out = match f {
        Func::Sin => {
            let (s, c) = x.sin_cos();
            a.compose([s, c, -s, -c, s])
        }
        Func::Cos => {
            let (s, c) = x.sin_cos();
            a.compose([c, -s, -c, s, c])
        }
        Func::Sinh => {
            let (s, c) = (x.sinh(), x.cosh());
            a.compose([s, c, s, c, s])
        }
        Func::Cosh => {
            let (s, c) = (x.sinh(), x.cosh());
            a.compose([c, s, c, s, c])
        }
        Func::Exp => a.compose([x.exp(); 5]),
        Func::Ln => {
            if x <= 0.0 {
                return Err(domain(format!("ln of non-positive value {x}")));
            }
            a.compose(ln_derivs(x))
        }
        Func::Sqrt => {
            if x < 0.0 {
                return Err(domain(format!("sqrt of negative value {x}")));
            }
            a.compose(powf_derivs(x, 0.5))
        }
        Func::Tan => apply(Func::Sin, a)? * recip(apply(Func::Cos, a)?, "tan")?,
        Func::Csc => recip(apply(Func::Sin, a)?, "csc")?,
        Func::Sec => recip(apply(Func::Cos, a)?, "sec")?,
        Func::Csch => recip(apply(Func::Sinh, a)?, "csch")?,
        Func::Sech => recip(apply(Func::Cosh, a)?, "sech")?,
    };
    checked(out, f.name())
}

fn eval_with<J: Taylor>(
    expr: &Expr,
    var: &dyn Fn(Var) -> Result<J, EvalError>,
) -> Result<J, EvalError> {
    Ok(match expr {
        Expr::Num(x) => J::constant(*x),
        Expr::Const(c) => J::constant(c.value()),
        Expr::Var(v) => var(*v)?,
        Expr::Neg(a) => -eval_with(a, var)?,
        Expr::Call(f, a) => apply(*f, eval_with(a, var)?)?,
        Expr::Bin(op, a, b) => {
            let a = eval_with(a, var)?;
            let b = eval_with(b, var)?;
            match op {
                BinOp::Add => checked(a + b, "sum")?,
                BinOp::Sub => checked(a - b, "difference")?,
                BinOp::Mul => checked(a * b, "product")?,
                BinOp::Div => checked(a * recip(b, "quotient")?, "quotient")?,
                BinOp::Pow => pow(a, b)?,
            }
        }
    })
}
