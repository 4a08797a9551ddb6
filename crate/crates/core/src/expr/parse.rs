use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Zero};

use super::{Chart, Expr, Func};
use crate::error::{Error, Result};

const FUNCS: [&str; 5] = ["exp", "log", "sqrt", "sin", "cos"];

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub(crate) fn is_reserved(s: &str) -> bool {
    s == "pi" || FUNCS.contains(&s)
}

/// Parses `text` allowing the chart coordinates, `extra_vars` and `pi`.
pub fn parse(text: &str, chart: &Chart, extra_vars: &[&str]) -> Result<Expr> {
    let mut allowed: Vec<&str> = chart.coords().iter().map(|c| &**c).collect();
    allowed.extend_from_slice(extra_vars);
    let mut p = Parser { src: text.as_bytes(), pos: 0, allowed };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected character"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    allowed: Vec<&'a str>,
}

impl<'a> Parser<'a> {
    fn error(&self, message: &str) -> Error {
        Error::Syntax { offset: self.pos, message: message.to_string() }
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

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digit_after_slash(&self) -> bool {
        self.src[self.pos + 1..].iter().find(|c| !c.is_ascii_whitespace()).is_some_and(|c| c.is_ascii_digit())
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut terms = vec![self.term()?];
        loop {
            if self.eat(b'+') {
                terms.push(self.term()?);
            } else if self.eat(b'-') {
                terms.push(-self.term()?);
            } else {
                return Ok(Expr::add(terms));
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut factors = vec![self.factor()?];
        loop {
            if self.eat(b'*') {
                factors.push(self.factor()?);
            } else if self.eat(b'/') {
                factors.push(self.factor()?.recip());
            } else {
                return Ok(Expr::mul(factors));
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        let negate = self.eat(b'-');
        let mut base = self.atom()?;
        if self.eat(b'^') {
            let e = self.exponent()?;
            base = Expr::pow(base, e);
        }
        Ok(if negate { -base } else { base })
    }

    fn exponent(&mut self) -> Result<BigRational> {
        if self.eat(b'(') {
            let neg = self.eat(b'-');
            let r = self.rational()?;
            self.expect(b')')?;
            Ok(if neg { -r } else { r })
        } else {
            let neg = self.eat(b'-');
            let r = self.rational()?;
            Ok(if neg { -r } else { r })
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("exponent must be a rational literal"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(BigInt::from_str_radix(digits, 10).unwrap())
    }

    fn rational(&mut self) -> Result<BigRational> {
        let num = self.integer()?;
        if self.peek() == Some(b'/') && self.digit_after_slash() {
            self.pos += 1;
            let at = self.pos;
            let den = self.integer()?;
            if den.is_zero() {
                return Err(Error::Syntax { offset: at, message: "zero denominator".into() });
            }
            Ok(BigRational::new(num, den))
        } else {
            Ok(BigRational::from_integer(num))
        }
    }

    /// Decimal literal, converted exactly.
    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let int_part = std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string();
        let mut frac_part = String::new();
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            self.pos += 1;
            let fstart = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            frac_part = std::str::from_utf8(&self.src[fstart..self.pos]).unwrap().to_string();
        }
        if int_part.is_empty() && frac_part.is_empty() {
            self.pos = start;
            return Err(self.error("malformed number"));
        }
        let digits = format!("{int_part}{frac_part}");
        let num = BigInt::from_str_radix(&digits, 10).unwrap();
        let den = BigInt::from(10u8).pow(frac_part.len() as u32);
        Ok(Expr::constant(BigRational::new(num, den)))
    }

    fn atom(&mut self) -> Result<Expr> {
        let c = match self.peek() {
            Some(c) => c,
            None => return Err(self.error("unexpected end of input")),
        };
        if c.is_ascii_digit() || c == b'.' {
            return self.number();
        }
        if c == b'(' {
            self.pos += 1;
            let e = self.expr()?;
            self.expect(b')')?;
            return Ok(e);
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            let start = self.pos;
            while self.pos < self.src.len()
                && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
            {
                self.pos += 1;
            }
            let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            if FUNCS.contains(&name) {
                self.expect(b'(')?;
                let arg = self.expr()?;
                self.expect(b')')?;
                return Ok(match name {
                    "exp" => Expr::func(Func::Exp, arg),
                    "log" => Expr::func(Func::Log, arg),
                    "sin" => Expr::func(Func::Sin, arg),
                    "cos" => Expr::func(Func::Cos, arg),
                    _ => Expr::sqrt(arg),
                });
            }
            if name == "pi" {
                return Ok(Expr::pi());
            }
            if self.allowed.contains(&name) {
                return Ok(Expr::var(name));
            }
            return Err(Error::UnknownIdentifier { name: name.to_string(), offset: start });
        }
        Err(self.error("unexpected character"))
    }
}
