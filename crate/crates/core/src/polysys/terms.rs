//! The terms text format, one problem per line:
//!
//! ```text
//! problem := '[' poly (',' poly)* ']'
//! poly    := '[' mono (',' mono)* ']'
//! mono    := '(' '(' int (',' int)* ')' ',' int ')'
//! ```
//!
//! Whitespace is allowed between tokens. The zero polynomial serializes as `[]`,
//! which the parser accepts as well.

use std::fmt::Write as _;

use num_bigint::BigInt;

use super::{PolyError, PolySystem, Polynomial};

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, msg: impl Into<String>) -> PolyError {
        PolyError::Syntax { pos: self.pos, msg: msg.into() }
    }

    fn expect(&mut self, c: u8) -> Result<(), PolyError> {
        match self.peek() {
            Some(x) if x == c => {
                self.pos += 1;
                Ok(())
            }
            Some(x) => Err(self.err(format!("expected `{}`, found `{}`", c as char, x as char))),
            None => Err(self.err(format!("expected `{}`, found end of input", c as char))),
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer_text(&mut self) -> Result<&'a str, PolyError> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.src.get(self.pos), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        let digits = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits {
            self.pos = start;
            return Err(self.err("expected integer"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).expect("ascii"))
    }

    fn exponent(&mut self) -> Result<u32, PolyError> {
        let start = self.pos;
        let t = self.integer_text()?;
        t.parse::<u32>().map_err(|_| PolyError::Syntax { pos: start, msg: format!("invalid exponent `{t}`") })
    }

    fn coefficient(&mut self) -> Result<BigInt, PolyError> {
        let t = self.integer_text()?;
        Ok(t.trim_start_matches('+').parse::<BigInt>().expect("validated digits"))
    }
}

/// Parses one problem line in terms format into a normalized system.
pub fn parse_problem(line: &str) -> Result<PolySystem, PolyError> {
    let mut c = Cursor { src: line.as_bytes(), pos: 0 };
    let mut arity: Option<usize> = None;
    let mut raw: Vec<Vec<(Vec<u32>, BigInt)>> = Vec::new();

    c.expect(b'[')?;
    if c.peek() == Some(b']') {
        return Err(PolyError::EmptyProblem);
    }
    loop {
        c.expect(b'[')?;
        let mut monos = Vec::new();
        if !c.eat(b']') {
            loop {
                c.expect(b'(')?;
                c.expect(b'(')?;
                let at = c.pos;
                let mut exps = vec![c.exponent()?];
                while c.eat(b',') {
                    exps.push(c.exponent()?);
                }
                c.expect(b')')?;
                match arity {
                    None => arity = Some(exps.len()),
                    Some(n) if n != exps.len() => {
                        return Err(PolyError::Arity { pos: at, expected: n, found: exps.len() })
                    }
                    _ => {}
                }
                c.expect(b',')?;
                let coeff = c.coefficient()?;
                c.expect(b')')?;
                monos.push((exps, coeff));
                if !c.eat(b',') {
                    break;
                }
            }
            c.expect(b']')?;
        }
        raw.push(monos);
        if !c.eat(b',') {
            break;
        }
    }
    c.expect(b']')?;
    if c.peek().is_some() {
        return Err(c.err("trailing characters after problem"));
    }

    let n = arity.ok_or_else(|| c.err("cannot infer variable count from a problem without monomials"))?;
    let polys = raw.into_iter().map(|m| Polynomial::from_terms(n, m)).collect();
    PolySystem::new(n, polys)
}

/// Canonical terms-format text: sorted monomials, no whitespace.
pub fn serialize_problem(s: &PolySystem) -> String {
    let mut out = String::from("[");
    for (i, p) in s.polys().iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push('[');
        for (j, m) in p.terms().iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            out.push_str("((");
            for (k, e) in m.exponents.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                write!(out, "{e}").unwrap();
            }
            write!(out, "),{})", m.coeff).unwrap();
        }
        out.push(']');
    }
    out.push(']');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = "[[((1,0,0),235),((0,2,0),42)],[((2,0,1),2),((0,0,0),-1)]]";

    #[test]
    fn parses_the_reference_example() {
        let s = parse_problem(EXAMPLE).unwrap();
        assert_eq!(s.n_vars(), 3);
        assert_eq!(s.polys().len(), 2);
        assert_eq!(s.polys()[0].to_string(), "235*x1 + 42*x2^2");
        assert_eq!(s.polys()[1].to_string(), "2*x1^2*x3 - 1");
        assert_eq!(serialize_problem(&s), EXAMPLE);
    }

    #[test]
    fn tolerates_whitespace() {
        let spaced = "[ [ ( (1, 0, 0), 235 ), ((0,2,0), 42) ],\t[((2,0,1),2),((0,0,0),-1)] ]";
        assert_eq!(serialize_problem(&parse_problem(spaced).unwrap()), EXAMPLE);
    }

    #[test]
    fn constant_and_merge() {
        let s = parse_problem("[[((0,0),5)]]").unwrap();
        assert_eq!(s.n_vars(), 2);
        assert!(s.polys()[0].is_constant());
        let s = parse_problem("[[((1,0),1),((1,0),2)]]").unwrap();
        assert_eq!(serialize_problem(&s), "[[((1,0),3)]]");
    }

    #[test]
    fn zero_coefficients_dropped() {
        let s = parse_problem("[[((1,0),0),((0,1),4)]]").unwrap();
        assert_eq!(serialize_problem(&s), "[[((0,1),4)]]");
        let s = parse_problem("[[((1,0),2),((1,0),-2)],[((0,1),1)]]").unwrap();
        assert!(s.polys()[0].is_zero());
        assert_eq!(serialize_problem(&s), "[[],[((0,1),1)]]");
    }

    #[test]
    fn errors() {
        assert_eq!(parse_problem("[]"), Err(PolyError::EmptyProblem));
        assert!(matches!(
            parse_problem("[[((1,0),1),((1,0,0),2)]]"),
            Err(PolyError::Arity { expected: 2, found: 3, .. })
        ));
        match parse_problem("[[((1,0),1)x]]") {
            Err(PolyError::Syntax { pos, .. }) => assert_eq!(pos, 11),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_problem("[[((-1,0),1)]]"), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse_problem("[[((1,0),1)]] junk"), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse_problem("[[]]"), Err(PolyError::Syntax { .. })));
    }

    #[test]
    fn big_coefficients_survive() {
        let line = "[[((1),123456789012345678901234567890)]]";
        assert_eq!(serialize_problem(&parse_problem(line).unwrap()), line);
    }
}
