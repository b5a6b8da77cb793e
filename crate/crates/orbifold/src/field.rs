//! Parser for the planar-field mini-language.
//!
//! Grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' positive-integer)*
//! atom   := 'z' | 'conj(z)' | number 'i'? | '(' expr ')'
//! ```
//!
//! Expressions evaluate over the complex plane and become sampleable
//! planar vector fields.

use std::fmt;

use num::complex::Complex64;

use crate::charts::PlanarField;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at offset {}: {}", self.offset, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Z,
    ConjZ,
    Const(Complex64),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Pow(Box<Node>, u32),
}

impl Node {
    fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            Node::Z => z,
            Node::ConjZ => z.conj(),
            Node::Const(c) => *c,
            Node::Add(a, b) => a.eval(z) + b.eval(z),
            Node::Sub(a, b) => a.eval(z) - b.eval(z),
            Node::Mul(a, b) => a.eval(z) * b.eval(z),
            Node::Pow(a, k) => a.eval(z).powu(*k),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, byte: u8) -> bool {
        if self.peek() == Some(byte) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Node, ParseError> {
        let mut node = self.term()?;
        loop {
            if self.eat(b'+') {
                node = Node::Add(Box::new(node), Box::new(self.term()?));
            } else if self.eat(b'-') {
                node = Node::Sub(Box::new(node), Box::new(self.term()?));
            } else {
                return Ok(node);
            }
        }
    }

    fn term(&mut self) -> Result<Node, ParseError> {
        let mut node = self.factor()?;
        while self.eat(b'*') {
            node = Node::Mul(Box::new(node), Box::new(self.factor()?));
        }
        Ok(node)
    }

    fn factor(&mut self) -> Result<Node, ParseError> {
        let mut node = self.atom()?;
        while self.eat(b'^') {
            let exponent = self.positive_integer()?;
            node = Node::Pow(Box::new(node), exponent);
        }
        Ok(node)
    }

    fn atom(&mut self) -> Result<Node, ParseError> {
        match self.peek() {
            Some(b'z') => {
                self.pos += 1;
                Ok(Node::Z)
            }
            Some(b'c') => {
                let rest = &self.src[self.pos..];
                if rest.starts_with(b"conj(z)") {
                    self.pos += 7;
                    Ok(Node::ConjZ)
                } else {
                    self.error("expected conj(z)")
                }
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return self.error("expected ')'");
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) => self.error(format!("unexpected character '{}'", c as char)),
            None => self.error("unexpected end of input"),
        }
    }

    fn number(&mut self) -> Result<Node, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self
            .src
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_digit() || *c == b'.')
        {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let value: f64 = match text.parse() {
            Ok(v) => v,
            Err(_) => {
                self.pos = start;
                return self.error(format!("invalid number '{text}'"));
            }
        };
        if self.src.get(self.pos) == Some(&b'i') {
            self.pos += 1;
            Ok(Node::Const(Complex64::new(0.0, value)))
        } else {
            Ok(Node::Const(Complex64::new(value, 0.0)))
        }
    }

    fn positive_integer(&mut self) -> Result<u32, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.error("expected a positive integer exponent");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        match text.parse::<u32>() {
            Ok(v) if v >= 1 => Ok(v),
            _ => {
                self.pos = start;
                self.error(format!("invalid exponent '{text}'"))
            }
        }
    }
}

/// Parses a field expression into a sampleable planar field.
pub fn parse_field(expr: &str) -> Result<PlanarField, ParseError> {
    let mut parser = Parser {
        src: expr.as_bytes(),
        pos: 0,
    };
    let node = parser.expr()?;
    parser.skip_ws();
    if parser.pos != parser.src.len() {
        return parser.error("trailing input");
    }
    let label = expr.trim().to_string();
    Ok(PlanarField::new(label, move |x, y| {
        let w = node.eval(Complex64::new(x, y));
        (w.re, w.im)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charts::winding_index;

    fn eval(expr: &str, x: f64, y: f64) -> (f64, f64) {
        parse_field(expr).unwrap().eval(x, y)
    }

    #[test]
    fn identity_field() {
        assert_eq!(eval("z", 0.3, -0.7), (0.3, -0.7));
    }

    #[test]
    fn polynomial_evaluation() {
        // z^2 + i z at z = 1 is 1 + i.
        let (u, v) = eval("z^2 + (0+1i)*z", 1.0, 0.0);
        assert!((u - 1.0).abs() < 1e-12);
        assert!((v - 1.0).abs() < 1e-12);

        let (u, v) = eval("conj(z)^3", 0.0, 1.0);
        assert!((u - 0.0).abs() < 1e-12);
        assert!((v - 1.0).abs() < 1e-12);

        let (u, v) = eval("2 * z - 1", 1.0, 0.0);
        assert!((u - 1.0).abs() < 1e-12 && v.abs() < 1e-12);
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        let err = parse_field("z^^").unwrap_err();
        assert_eq!(err.offset, 2);
        assert!(parse_field("").is_err());
        assert!(parse_field("(z").is_err());
        assert!(parse_field("z )").is_err());
        assert!(parse_field("conj(w)").is_err());
    }

    #[test]
    fn parsed_fields_wind_correctly() {
        assert_eq!(
            winding_index(&parse_field("z^2").unwrap(), 1.0, 256).unwrap(),
            2
        );
        assert_eq!(
            winding_index(&parse_field("conj(z)").unwrap(), 1.0, 256).unwrap(),
            -1
        );
    }
}
