//! Tiny integer-polynomial expression language shared by the ring-element
//! and series literal parsers: `+ - * ^`, parentheses, integers, names.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Expr {
    Int(i64),
    Var(String, usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

pub(crate) trait Algebra {
    type Value: Clone;
    fn int(&self, n: i64) -> Self::Value;
    fn var(&self, name: &str, offset: usize) -> Result<Self::Value>;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn sub(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn neg(&self, a: &Self::Value) -> Self::Value;
}

impl Expr {
    pub(crate) fn eval<A: Algebra>(&self, alg: &A) -> Result<A::Value> {
        Ok(match self {
            Expr::Int(n) => alg.int(*n),
            Expr::Var(name, offset) => alg.var(name, *offset)?,
            Expr::Add(a, b) => alg.add(&a.eval(alg)?, &b.eval(alg)?),
            Expr::Sub(a, b) => alg.sub(&a.eval(alg)?, &b.eval(alg)?),
            Expr::Mul(a, b) => alg.mul(&a.eval(alg)?, &b.eval(alg)?),
            Expr::Neg(a) => alg.neg(&a.eval(alg)?),
            Expr::Pow(a, n) => {
                let base = a.eval(alg)?;
                let mut acc = alg.int(1);
                for _ in 0..*n {
                    acc = alg.mul(&acc, &base);
                }
                acc
            }
        })
    }
}

pub(crate) fn parse(src: &str) -> Result<Expr> {
    let mut p = ExprParser { src: src.as_bytes(), pos: 0 };
    let e = p.sum()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(Error::parse(p.pos, "unexpected trailing input"));
    }
    Ok(e)
}

struct ExprParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl ExprParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut acc = if self.peek() == Some(b'-') {
            self.pos += 1;
            Expr::Neg(Box::new(self.term()?))
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = Expr::Mul(Box::new(acc), Box::new(self.factor()?));
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let n = self.digits().ok_or_else(|| Error::parse(start, "expected exponent"))?;
            let n = u32::try_from(n).map_err(|_| Error::parse(start, "exponent too large"))?;
            return Ok(Expr::Pow(Box::new(base), n));
        }
        Ok(base)
    }

    fn digits(&mut self) -> Option<i64> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).ok()?.parse().ok()
    }

    fn atom(&mut self) -> Result<Expr> {
        let start = self.pos;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.sum()?;
                if self.peek() != Some(b')') {
                    return Err(Error::parse(self.pos, "expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                self.digits().map(Expr::Int).ok_or_else(|| Error::parse(start, "integer literal out of range"))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
                Ok(Expr::Var(name, start))
            }
            _ => Err(Error::parse(start, "expected a number, a name or `(`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Ints;
    impl Algebra for Ints {
        type Value = i64;
        fn int(&self, n: i64) -> i64 {
            n
        }
        fn var(&self, name: &str, offset: usize) -> Result<i64> {
            match name {
                "x" => Ok(3),
                _ => Err(Error::parse(offset, "unknown")),
            }
        }
        fn add(&self, a: &i64, b: &i64) -> i64 {
            a + b
        }
        fn sub(&self, a: &i64, b: &i64) -> i64 {
            a - b
        }
        fn mul(&self, a: &i64, b: &i64) -> i64 {
            a * b
        }
        fn neg(&self, a: &i64) -> i64 {
            -a
        }
    }

    #[test]
    fn precedence() {
        assert_eq!(parse("1+2*x^2").unwrap().eval(&Ints).unwrap(), 19);
        assert_eq!(parse("-(1 + x) * 2 - 1").unwrap().eval(&Ints).unwrap(), -9);
        assert_eq!(parse("x^0").unwrap().eval(&Ints).unwrap(), 1);
    }

    #[test]
    fn errors_carry_offsets() {
        assert_eq!(parse("1 + y").unwrap().eval(&Ints), Err(Error::parse(4, "unknown")));
        assert!(parse("1 +").is_err());
        assert!(parse("(1").is_err());
        assert!(parse("1 2").is_err());
    }
}
