use num_bigint::BigInt;

use super::poly::Q;
use super::ratfunc::RatFunc;
use super::variable::{is_token_name, Variable};
use super::AlgebraError;

/// Parse the textual form produced by `Display` for `RatFunc`.
///
/// Grammar: sums and differences of products and quotients of powers of
/// atoms; atoms are unsigned integers, variables (`t1`, `h0`, `psi0_1`,
/// `lambda2_1`, `@name`) and parenthesized expressions. Exponents are
/// integers and may be negative.
pub fn parse_ratfunc(s: &str) -> Result<RatFunc, AlgebraError> {
    let mut p = Parser { src: s.as_bytes(), pos: 0 };
    let r = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(r)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> AlgebraError {
        AlgebraError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
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

    fn expr(&mut self) -> Result<RatFunc, AlgebraError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc, AlgebraError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = &acc * &self.unary()?;
            } else if self.eat(b'/') {
                let rhs = self.unary()?;
                acc = acc.div(&rhs)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RatFunc, AlgebraError> {
        if self.eat(b'-') {
            return Ok(-&self.unary()?);
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<RatFunc, AlgebraError> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let neg = self.eat(b'-');
        self.skip_ws();
        let digits = self.digits();
        if digits.is_empty() {
            return Err(self.err("expected exponent"));
        }
        let e: i64 = digits.parse().map_err(|_| self.err("exponent too large"))?;
        base.powi(if neg { -e } else { e })
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn index(&mut self) -> Result<u32, AlgebraError> {
        let d = self.digits();
        if d.is_empty() {
            return Err(self.err("expected index"));
        }
        d.parse().map_err(|_| self.err("index too large"))
    }

    fn keyword(&mut self, kw: &str) -> bool {
        let end = self.pos + kw.len();
        if self.src.len() >= end && &self.src[self.pos..end] == kw.as_bytes() {
            self.pos = end;
            true
        } else {
            false
        }
    }

    fn atom(&mut self) -> Result<RatFunc, AlgebraError> {
        match self.peek() {
            None => Err(self.err("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let r = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(r)
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits();
                let n: BigInt = d.parse().map_err(|_| self.err("bad integer"))?;
                Ok(RatFunc::constant(Q::from_integer(n)))
            }
            Some(b'@') => {
                self.pos += 1;
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                if !is_token_name(name) {
                    return Err(self.err("empty token name"));
                }
                Ok(RatFunc::var(Variable::token(name)))
            }
            Some(_) => {
                let v = if self.keyword("psi") {
                    let e = self.index()?;
                    self.expect_underscore()?;
                    Variable::psi(e, self.index()?)
                } else if self.keyword("lambda") {
                    let v = self.index()?;
                    self.expect_underscore()?;
                    let i = self.index()?;
                    if i == 0 {
                        return Err(self.err("lambda index starts at 1"));
                    }
                    Variable::lambda(v, i)
                } else if self.keyword("t") {
                    Variable::t(self.index()?)
                } else if self.keyword("h") {
                    Variable::h(self.index()?)
                } else {
                    return Err(self.err("unexpected character"));
                };
                Ok(RatFunc::var(v))
            }
        }
    }

    fn expect_underscore(&mut self) -> Result<(), AlgebraError> {
        if self.src.get(self.pos) == Some(&b'_') {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err("expected '_'"))
        }
    }
}
