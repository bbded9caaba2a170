use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub const MAX_WITT_LENGTH: u32 = 26;
pub const MAX_CYCLO_LENGTH: u32 = 12;
pub const MAX_NILPOTENT_EXPONENT: u32 = 64;

/// Constructor tree of a catalog ring.
///
/// ```text
/// F5 | F25 | Z/5^<n> | cyclo(<m>) | <base>[e<i>]/(e<i>^<m>)
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Descriptor {
    F5,
    F25,
    /// `Z/5^n`, the length-`n` Witt vectors of F5.
    WittF5(u32),
    /// `Z[u]/(Phi5(1+u), u^m)`.
    Cyclo(u32),
    /// `base[var]/(var^exponent)`.
    Nilpotent { base: Box<Descriptor>, var: String, exponent: u32 },
}

impl Descriptor {
    pub fn parse(s: &str) -> Result<Self> {
        let mut p = Parser { src: s.as_bytes(), pos: 0 };
        p.skip_ws();
        let mut desc = p.base()?;
        loop {
            p.skip_ws();
            if p.pos == p.src.len() {
                break;
            }
            desc = p.suffix(desc)?;
        }
        desc.check_fresh()?;
        Ok(desc)
    }

    /// Names of the generators in declaration order (`i` for F25, `u` for
    /// cyclo, then the nilpotent variables).
    pub fn generator_names(&self) -> Vec<String> {
        match self {
            Descriptor::F5 | Descriptor::WittF5(_) => vec![],
            Descriptor::F25 => vec!["i".to_string()],
            Descriptor::Cyclo(_) => vec!["u".to_string()],
            Descriptor::Nilpotent { base, var, .. } => {
                let mut names = base.generator_names();
                names.push(var.clone());
                names
            }
        }
    }

    fn check_fresh(&self) -> Result<()> {
        let names = self.generator_names();
        for (i, n) in names.iter().enumerate() {
            if n == "t" || names[..i].contains(n) {
                return Err(Error::parse(0, format!("generator `{n}` is not fresh")));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Descriptor::F5 => write!(f, "F5"),
            Descriptor::F25 => write!(f, "F25"),
            Descriptor::WittF5(n) => write!(f, "Z/5^{n}"),
            Descriptor::Cyclo(m) => write!(f, "cyclo({m})"),
            Descriptor::Nilpotent { base, var, exponent } => {
                write!(f, "{base}[{var}]/({var}^{exponent})")
            }
        }
    }
}

impl FromStr for Descriptor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Descriptor::parse(s)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(token.as_bytes()) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected `{token}`")))
        }
    }

    fn int(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::parse(start, "expected an integer"))
    }

    fn var(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        if self.src.get(self.pos) != Some(&b'e') {
            return Err(Error::parse(start, "nilpotent generators are named e<digits>"));
        }
        self.pos += 1;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn base(&mut self) -> Result<Descriptor> {
        let start = self.pos;
        if self.eat("F25") {
            Ok(Descriptor::F25)
        } else if self.eat("F5") {
            Ok(Descriptor::F5)
        } else if self.eat("Z/5^") {
            let n = self.int()?;
            if !(1..=MAX_WITT_LENGTH).contains(&n) {
                return Err(Error::parse(start, format!("Z/5^n needs 1 <= n <= {MAX_WITT_LENGTH}")));
            }
            Ok(Descriptor::WittF5(n))
        } else if self.eat("cyclo(") {
            let m = self.int()?;
            self.expect(")")?;
            if !(1..=MAX_CYCLO_LENGTH).contains(&m) {
                return Err(Error::parse(start, format!("cyclo(m) needs 1 <= m <= {MAX_CYCLO_LENGTH}")));
            }
            Ok(Descriptor::Cyclo(m))
        } else {
            Err(Error::parse(start, "expected F5, F25, Z/5^n or cyclo(m)"))
        }
    }

    fn suffix(&mut self, base: Descriptor) -> Result<Descriptor> {
        let start = self.pos;
        self.expect("[")?;
        let var = self.var()?;
        self.expect("]")?;
        self.expect("/")?;
        self.expect("(")?;
        let again = self.var()?;
        if again != var {
            return Err(Error::parse(start, format!("relation must be in `{var}`, found `{again}`")));
        }
        self.expect("^")?;
        let exponent = self.int()?;
        self.expect(")")?;
        if !(2..=MAX_NILPOTENT_EXPONENT).contains(&exponent) {
            return Err(Error::parse(start, format!("nilpotent exponent must be in 2..={MAX_NILPOTENT_EXPONENT}")));
        }
        Ok(Descriptor::Nilpotent { base: Box::new(base), var, exponent })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_catalog() {
        assert_eq!(Descriptor::parse("F5").unwrap(), Descriptor::F5);
        assert_eq!(Descriptor::parse(" F25 ").unwrap(), Descriptor::F25);
        assert_eq!(Descriptor::parse("Z/5^3").unwrap(), Descriptor::WittF5(3));
        assert_eq!(Descriptor::parse("cyclo(5)").unwrap(), Descriptor::Cyclo(5));
        let d = Descriptor::parse("F5[e1]/(e1^2)[e2]/(e2^3)").unwrap();
        assert_eq!(d.generator_names(), vec!["e1", "e2"]);
        assert_eq!(d.to_string(), "F5[e1]/(e1^2)[e2]/(e2^3)");
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["F7", "Z/5^0", "F5[e]/(e^1)", "F5[e]/(e1^2)", "F5[e]/(e^2)[e]/(e^2)", "cyclo(0)", "F5 junk"] {
            assert!(Descriptor::parse(bad).is_err(), "{bad} should not parse");
        }
    }

    #[test]
    fn display_round_trips() {
        for s in ["F5", "F25[e]/(e^2)", "Z/5^2[e3]/(e3^4)", "cyclo(3)[e]/(e^2)"] {
            assert_eq!(Descriptor::parse(s).unwrap().to_string(), s);
        }
    }
}
