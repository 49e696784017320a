//! Infix ingestion: `235*x1 + 42*x2^2; 2*x1^2*x3 - 1`.
//!
//! Supports `+ - * ^`, parentheses, and integer literals. Exponents must be
//! nonnegative integer literals.

use num_bigint::BigInt;

use super::{PolyError, PolySystem, Polynomial};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    offset: usize,
    vars: &'a [String],
}

impl<'a> Parser<'a> {
    fn n(&self) -> usize {
        self.vars.len()
    }

    fn err(&self, msg: impl Into<String>) -> PolyError {
        PolyError::Syntax { pos: self.offset + self.pos, msg: msg.into() }
    }

    fn peek(&mut self) -> Option<u8> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial, PolyError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial, PolyError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.peek();
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.err("expected nonnegative integer exponent"));
            }
            let k: u32 = digits.parse().map_err(|_| self.err(format!("exponent `{digits}` out of range")))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).expect("ascii")
    }

    fn atom(&mut self) -> Result<Polynomial, PolyError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                let d = self.digits();
                if matches!(self.src.get(self.pos), Some(b'.') | Some(b'e') | Some(b'E')) {
                    while self.pos < self.src.len()
                        && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'.')
                    {
                        self.pos += 1;
                    }
                    let lit = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                    return Err(PolyError::NonIntegerCoefficient(lit.to_string()));
                }
                Ok(Polynomial::constant(self.n(), d.parse::<BigInt>().expect("digits")))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                match self.vars.iter().position(|v| v == name) {
                    Some(v) => Ok(Polynomial::var(self.n(), v)),
                    None => Err(PolyError::UnknownIdentifier(name.to_string())),
                }
            }
            Some(c) => Err(self.err(format!("unexpected `{}`", c as char))),
            None => Err(self.err("unexpected end of expression")),
        }
    }
}

/// Parses semicolon-separated infix polynomials over `var_names` into a system.
/// Blank segments (e.g. after a trailing `;`) are ignored.
pub fn parse_infix(text: &str, var_names: &[String]) -> Result<PolySystem, PolyError> {
    if !text.is_ascii() {
        return Err(PolyError::Syntax { pos: 0, msg: "non-ASCII input".into() });
    }
    let mut polys = Vec::new();
    let mut offset = 0;
    for segment in text.split(';') {
        if !segment.trim().is_empty() {
            let mut p = Parser { src: segment.as_bytes(), pos: 0, offset, vars: var_names };
            let poly = p.expr()?;
            if p.peek().is_some() {
                return Err(p.err("trailing characters in polynomial"));
            }
            polys.push(poly);
        }
        offset += segment.len() + 1;
    }
    PolySystem::new(var_names.len(), polys)
}

#[cfg(test)]
mod tests {
    use super::super::serialize_problem;
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn reference_example() {
        let s = parse_infix("235*x1 + 42*x2^2; 2*x1^2*x3 - 1", &names(&["x1", "x2", "x3"])).unwrap();
        assert_eq!(serialize_problem(&s), "[[((1,0,0),235),((0,2,0),42)],[((2,0,1),2),((0,0,0),-1)]]");
    }

    #[test]
    fn cancellation_gives_zero() {
        let s = parse_infix("x1 - x1", &names(&["x1"])).unwrap();
        assert!(s.polys()[0].is_zero());
    }

    #[test]
    fn implicit_unit_coefficient() {
        let s = parse_infix("x2^3", &names(&["x1", "x2"])).unwrap();
        assert_eq!(serialize_problem(&s), "[[((0,3),1)]]");
    }

    #[test]
    fn expands_products() {
        let v = names(&["a", "b"]);
        let s = parse_infix("(a+b)^2 - (a-b)*(a+b)", &v).unwrap();
        // 2ab + 2b^2
        assert_eq!(serialize_problem(&s), "[[((1,1),2),((0,2),2)]]");
        let s = parse_infix("-a^2", &v).unwrap();
        assert_eq!(serialize_problem(&s), "[[((2,0),-1)]]");
    }

    #[test]
    fn errors() {
        let v = names(&["x", "y"]);
        assert_eq!(parse_infix("x + z", &v), Err(PolyError::UnknownIdentifier("z".into())));
        assert_eq!(parse_infix("1.5*x", &v), Err(PolyError::NonIntegerCoefficient("1.5".into())));
        assert!(matches!(parse_infix("x +", &v), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse_infix("x / y", &v), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse_infix("(x", &v), Err(PolyError::Syntax { .. })));
        assert_eq!(parse_infix(" ; ", &v), Err(PolyError::EmptyProblem));
    }
}
