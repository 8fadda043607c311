use thiserror::Error;

use super::ast::{BinOp, Expr, Func};
use super::jet::ScalarJet;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum EvalError {
    /// The expression left its real domain; `subexpr` is the offending node
    /// in canonical form.
    #[error("domain error in `{subexpr}` at t = {t}: {reason}")]
    Domain {
        subexpr: String,
        t: f64,
        reason: &'static str,
    },
}

fn domain(node: &Expr, t: f64, reason: &'static str) -> EvalError {
    EvalError::Domain {
        subexpr: node.to_string(),
        t,
        reason,
    }
}

/// Evaluates `expr` and its first three derivatives with respect to `t`.
pub fn eval_scalar_jet(expr: &Expr, t: f64) -> Result<ScalarJet, EvalError> {
    let jet = eval(expr, t)?;
    if !jet.is_finite() {
        return Err(domain(expr, t, "non-finite result"));
    }
    Ok(jet)
}

fn eval(node: &Expr, t: f64) -> Result<ScalarJet, EvalError> {
    let out = match node {
        Expr::Num(v) => ScalarJet::constant(*v),
        Expr::Var => ScalarJet::variable(t),
        Expr::Const(c) => ScalarJet::constant(c.value()),
        Expr::Neg(e) => -eval(e, t)?,
        Expr::Binary(op, l, r) => {
            let lhs = eval(l, t)?;
            let rhs = eval(r, t)?;
            match op {
                BinOp::Add => lhs + rhs,
                BinOp::Sub => lhs - rhs,
                BinOp::Mul => lhs * rhs,
                BinOp::Div => {
                    if rhs.c0 == 0.0 {
                        return Err(domain(node, t, "division by zero"));
                    }
                    lhs * rhs.recip()
                }
                BinOp::Pow => pow(node, &lhs, &rhs, t)?,
            }
        }
        Expr::Call(func, arg) => {
            let u = eval(arg, t)?;
            match func {
                Func::Sin => u.sin(),
                Func::Cos => u.cos(),
                Func::Tan => u.tan(),
                Func::Exp => u.exp(),
                Func::Log => {
                    if u.c0 <= 0.0 {
                        return Err(domain(node, t, "log of a non-positive value"));
                    }
                    u.ln()
                }
                Func::Sqrt => {
                    if u.c0 <= 0.0 {
                        return Err(domain(node, t, "sqrt of a non-positive value"));
                    }
                    u.sqrt()
                }
                Func::Atan => u.atan(),
                Func::Sinh => u.sinh(),
                Func::Cosh => u.cosh(),
            }
        }
    };
    if !out.is_finite() {
        return Err(domain(node, t, "non-finite result"));
    }
    Ok(out)
}

fn pow(node: &Expr, base: &ScalarJet, exponent: &ScalarJet, t: f64) -> Result<ScalarJet, EvalError> {
    if exponent.is_constant() {
        let p = exponent.c0;
        if p.fract() == 0.0 && p.abs() <= f64::from(i32::MAX) {
            if p < 0.0 && base.c0 == 0.0 {
                return Err(domain(node, t, "zero raised to a negative power"));
            }
            return Ok(base.powi(p as i32));
        }
        if base.c0 < 0.0 {
            return Err(domain(node, t, "negative base with non-integer exponent"));
        }
        if base.c0 == 0.0 {
            return Err(domain(node, t, "zero base with non-integer exponent"));
        }
        return Ok(base.powf(p));
    }
    // variable exponent: base^exponent = exp(exponent * ln(base))
    if base.c0 <= 0.0 {
        return Err(domain(node, t, "non-positive base with variable exponent"));
    }
    Ok((*exponent * base.ln()).exp())
}
