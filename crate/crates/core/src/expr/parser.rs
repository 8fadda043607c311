use std::fmt;

use thiserror::Error;

use super::ast::{BinOp, Constant, Expr, Func};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Empty,
    UnexpectedChar(char),
    UnexpectedToken(String),
    UnexpectedEnd,
    UnknownIdentifier(String),
    InvalidNumber(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Empty => f.write_str("empty expression"),
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character {c:?}"),
            ParseErrorKind::UnexpectedToken(tok) => write!(f, "unexpected `{tok}`"),
            ParseErrorKind::UnexpectedEnd => f.write_str("unexpected end of input"),
            ParseErrorKind::UnknownIdentifier(id) => write!(f, "unknown identifier `{id}`"),
            ParseErrorKind::InvalidNumber(s) => write!(f, "invalid number `{s}`"),
        }
    }
}

/// Syntax error with the byte offset at which parsing stopped and the set of
/// tokens that would have been accepted there.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
    pub expected: Vec<&'static str>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at offset {}", self.kind, self.offset)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok<'s> {
    Num(f64),
    Ident(&'s str),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok<'_> {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("{v:?}"),
            Tok::Ident(s) => (*s).to_owned(),
            Tok::Plus => "+".into(),
            Tok::Minus => "-".into(),
            Tok::Star => "*".into(),
            Tok::Slash => "/".into(),
            Tok::Caret => "^".into(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
            Tok::End => "end of input".into(),
        }
    }
}

const OPERAND: &[&str] = &["number", "t", "pi", "e", "function", "(", "-"];
const OPERATOR: &[&str] = &["+", "-", "*", "/", "^", ")", "end of input"];

struct Lexer<'s> {
    src: &'s str,
    pos: usize,
}

impl<'s> Lexer<'s> {
    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    /// Returns the next token and its starting offset.
    fn next(&mut self) -> Result<(Tok<'s>, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let Some(&c) = bytes.get(start) else {
            return Ok((Tok::End, start));
        };
        let single = match c {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            self.pos += 1;
            return Ok((tok, start));
        }
        if c.is_ascii_digit() || c == b'.' {
            return self.number(start);
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            let len = bytes[start..]
                .iter()
                .take_while(|b| b.is_ascii_alphanumeric() || **b == b'_')
                .count();
            self.pos += len;
            return Ok((Tok::Ident(&self.src[start..start + len]), start));
        }
        let ch = self.src[start..].chars().next().unwrap_or('\0');
        Err(ParseError {
            offset: start,
            kind: ParseErrorKind::UnexpectedChar(ch),
            expected: OPERAND.to_vec(),
        })
    }

    fn number(&mut self, start: usize) -> Result<(Tok<'s>, usize), ParseError> {
        let bytes = self.src.as_bytes();
        let digits = |from: usize| bytes[from..].iter().take_while(|b| b.is_ascii_digit()).count();
        let mut end = start + digits(start);
        let int_digits = end - start;
        let mut frac_digits = 0;
        if bytes.get(end) == Some(&b'.') {
            frac_digits = digits(end + 1);
            end += 1 + frac_digits;
        }
        if int_digits + frac_digits == 0 {
            return Err(ParseError {
                offset: start,
                kind: ParseErrorKind::InvalidNumber(".".into()),
                expected: vec!["digit"],
            });
        }
        if matches!(bytes.get(end), Some(b'e' | b'E')) {
            let mut exp = end + 1;
            if matches!(bytes.get(exp), Some(b'+' | b'-')) {
                exp += 1;
            }
            let exp_digits = digits(exp);
            // `2e` or `2e+` without digits leaves the `e` for the next token
            if exp_digits > 0 {
                end = exp + exp_digits;
            }
        }
        let text = &self.src[start..end];
        self.pos = end;
        match text.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok((Tok::Num(v), start)),
            _ => Err(ParseError {
                offset: start,
                kind: ParseErrorKind::InvalidNumber(text.into()),
                expected: vec!["finite number"],
            }),
        }
    }
}

struct Parser<'s> {
    lexer: Lexer<'s>,
    tok: Tok<'s>,
    tok_pos: usize,
}

impl<'s> Parser<'s> {
    fn new(src: &'s str) -> Result<Self, ParseError> {
        let mut lexer = Lexer { src, pos: 0 };
        let (tok, tok_pos) = lexer.next()?;
        Ok(Parser { lexer, tok, tok_pos })
    }

    fn bump(&mut self) -> Result<(), ParseError> {
        let (tok, pos) = self.lexer.next()?;
        self.tok = tok;
        self.tok_pos = pos;
        Ok(())
    }

    fn unexpected(&self, expected: &[&'static str]) -> ParseError {
        let kind = match self.tok {
            Tok::End => ParseErrorKind::UnexpectedEnd,
            ref t => ParseErrorKind::UnexpectedToken(t.describe()),
        };
        ParseError {
            offset: self.tok_pos,
            kind,
            expected: expected.to_vec(),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump()?;
            let rhs = self.term()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.tok {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump()?;
            let rhs = self.unary()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.tok == Tok::Minus {
            self.bump()?;
            return Ok(Expr::neg(self.unary()?));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if self.tok == Tok::Caret {
            self.bump()?;
            let exponent = self.unary()?;
            return Ok(Expr::binary(BinOp::Pow, base, exponent));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        match self.tok.clone() {
            Tok::Num(v) => {
                self.bump()?;
                Ok(Expr::Num(v))
            }
            Tok::LParen => {
                self.bump()?;
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                let at = self.tok_pos;
                let node = match name {
                    "t" => Expr::Var,
                    "pi" => Expr::Const(Constant::Pi),
                    "e" => Expr::Const(Constant::E),
                    _ => {
                        let Some(func) = Func::from_name(name) else {
                            return Err(ParseError {
                                offset: at,
                                kind: ParseErrorKind::UnknownIdentifier(name.into()),
                                expected: OPERAND.to_vec(),
                            });
                        };
                        self.bump()?;
                        if self.tok != Tok::LParen {
                            return Err(self.unexpected(&["("]));
                        }
                        self.bump()?;
                        let arg = self.expr()?;
                        self.expect_rparen()?;
                        return Ok(Expr::call(func, arg));
                    }
                };
                self.bump()?;
                Ok(node)
            }
            _ => Err(self.unexpected(OPERAND)),
        }
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        if self.tok != Tok::RParen {
            return Err(self.unexpected(&["+", "-", "*", "/", "^", ")"]));
        }
        self.bump()
    }
}

/// Parses a scalar expression in `t`.
pub fn parse_expression(source: &str) -> Result<Expr, ParseError> {
    if source.trim().is_empty() {
        return Err(ParseError {
            offset: 0,
            kind: ParseErrorKind::Empty,
            expected: OPERAND.to_vec(),
        });
    }
    let mut parser = Parser::new(source)?;
    let expr = parser.expr()?;
    if parser.tok != Tok::End {
        return Err(parser.unexpected(OPERATOR));
    }
    Ok(expr)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn err(src: &str) -> ParseError {
        parse_expression(src).expect_err(src)
    }

    #[test]
    fn function_node() {
        assert_eq!(parse_expression("cos(t)").unwrap(), Expr::call(Func::Cos, Expr::Var));
    }

    #[test]
    fn precedence() {
        let e = parse_expression("1 + 2 * t ^ 2").unwrap();
        let expected = Expr::binary(
            BinOp::Add,
            Expr::Num(1.0),
            Expr::binary(
                BinOp::Mul,
                Expr::Num(2.0),
                Expr::binary(BinOp::Pow, Expr::Var, Expr::Num(2.0)),
            ),
        );
        assert_eq!(e, expected);
    }

    #[test]
    fn power_is_right_associative() {
        let e = parse_expression("2^3^2").unwrap();
        let expected = Expr::binary(
            BinOp::Pow,
            Expr::Num(2.0),
            Expr::binary(BinOp::Pow, Expr::Num(3.0), Expr::Num(2.0)),
        );
        assert_eq!(e, expected);
    }

    #[test]
    fn power_binds_tighter_than_negation() {
        let e = parse_expression("-t^2").unwrap();
        assert_eq!(e, Expr::neg(Expr::binary(BinOp::Pow, Expr::Var, Expr::Num(2.0))));
        let e = parse_expression("t^-1").unwrap();
        assert_eq!(e, Expr::binary(BinOp::Pow, Expr::Var, Expr::neg(Expr::Num(1.0))));
    }

    #[test]
    fn subtraction_is_left_associative() {
        let e = parse_expression("t - 1 - 2").unwrap();
        let expected = Expr::binary(
            BinOp::Sub,
            Expr::binary(BinOp::Sub, Expr::Var, Expr::Num(1.0)),
            Expr::Num(2.0),
        );
        assert_eq!(e, expected);
    }

    #[test]
    fn numbers() {
        assert_eq!(parse_expression("1.5e-3").unwrap(), Expr::Num(1.5e-3));
        assert_eq!(parse_expression(".25").unwrap(), Expr::Num(0.25));
        assert_eq!(parse_expression("3.").unwrap(), Expr::Num(3.0));
        // `2e` is the literal 2 followed by the constant e, which is not valid
        let e = err("2e");
        assert_eq!(e.offset, 1);
        assert!(matches!(e.kind, ParseErrorKind::UnexpectedToken(ref s) if s == "e"));
        assert!(matches!(err("1e999").kind, ParseErrorKind::InvalidNumber(_)));
    }

    #[test]
    fn whitespace_insensitive() {
        assert_eq!(
            parse_expression("  sin ( t )*2 ").unwrap(),
            parse_expression("sin(t)*2").unwrap()
        );
    }

    #[test]
    fn function_requires_parentheses() {
        let e = err("sin t");
        assert_eq!(e.offset, 4);
        assert_eq!(e.expected, vec!["("]);
    }

    #[test]
    fn error_positions() {
        assert_eq!(err("").kind, ParseErrorKind::Empty);
        assert_eq!(err("   ").kind, ParseErrorKind::Empty);
        let e = err("x + 1");
        assert_eq!(e.offset, 0);
        assert_eq!(e.kind, ParseErrorKind::UnknownIdentifier("x".into()));
        let e = err("(t + 1");
        assert_eq!(e.offset, 6);
        assert_eq!(e.kind, ParseErrorKind::UnexpectedEnd);
        let e = err("t + 1)");
        assert_eq!(e.offset, 5);
        let e = err("t $ 2");
        assert_eq!(e.offset, 2);
        assert_eq!(e.kind, ParseErrorKind::UnexpectedChar('$'));
        let e = err("t * * 2");
        assert_eq!(e.offset, 4);
        assert!(e.expected.contains(&"number"));
        let e = err("abs(t)");
        assert_eq!(e.kind, ParseErrorKind::UnknownIdentifier("abs".into()));
        let e = err("sin()");
        assert_eq!(e.offset, 4);
    }

    #[test]
    fn display_mentions_offset_and_expectations() {
        let msg = err("sin t").to_string();
        assert!(msg.contains("offset 4"), "{msg}");
        assert!(msg.contains("expected ("), "{msg}");
    }
}
