//! Scalar expressions in one variable `t`, evaluated on order-3 jets.
//!
//! Grammar, loosest to tightest binding:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?          // right associative
//! primary := number | 't' | 'pi' | 'e'
//!          | func '(' expr ')' | '(' expr ')'
//! func    := sin | cos | tan | exp | log | sqrt | atan | sinh | cosh
//! ```
//!
//! `-2^2` is `-(2^2)` and `2^3^2` is `2^(3^2)`. A unary minus is accepted
//! directly after `^` so that `t^-1` parses. There is no `abs`, `floor`,
//! `min`/`max` or conditional: every expression that evaluates is C^∞ on
//! its domain.

mod ast;
mod eval;
mod jet;
mod parser;

pub use ast::{BinOp, Constant, Expr, Func};
pub use eval::{eval_scalar_jet, EvalError};
pub use jet::ScalarJet;
pub use parser::{parse_expression, ParseError, ParseErrorKind};

pub use crate::curve::make_expression_trajectory;
