use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::artin::Ring;
use crate::error::{Error, Result};

/// The polynomial variables, in monomial order (leftmost most significant).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    A0,
    A1,
    A2,
    A3,
    Y1,
    Y2,
}

pub const NVARS: usize = 6;

impl Var {
    pub const ALL: [Var; NVARS] = [Var::A0, Var::A1, Var::A2, Var::A3, Var::Y1, Var::Y2];

    pub fn name(self) -> &'static str {
        ["a0", "a1", "a2", "a3", "y1", "y2"][self as usize]
    }
}

pub(super) type Exps = [u16; NVARS];

/// Polynomial in `a0..a3, y1, y2` with exact rational coefficients.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Poly {
    terms: BTreeMap<Exps, BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert([0; NVARS], c);
        }
        p
    }

    pub fn int(n: i64) -> Self {
        Poly::constant(BigRational::from_integer(n.into()))
    }

    pub fn var(v: Var) -> Self {
        let mut e = [0; NVARS];
        e[v as usize] = 1;
        Poly { terms: BTreeMap::from([(e, BigRational::one())]) }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub(super) fn terms(&self) -> impl Iterator<Item = (&Exps, &BigRational)> {
        self.terms.iter()
    }

    fn add_term(&mut self, e: Exps, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }

    pub fn scale(&self, s: &BigRational) -> Poly {
        if s.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(e, c)| (*e, c * s)).collect() }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let mut e = *e1;
                for (x, y) in e.iter_mut().zip(e2) {
                    *x += y;
                }
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Poly {
        (0..n).fold(Poly::one(), |acc, _| acc.mul(self))
    }

    fn leading(&self) -> Option<(&Exps, &BigRational)> {
        self.terms.iter().next_back()
    }

    /// `self / d` when `d` divides `self` exactly.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (ld, lc) = d.leading()?;
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((lr, cr)) = rem.leading() {
            if lr.iter().zip(ld).any(|(a, b)| a < b) {
                return None;
            }
            let mut e = *lr;
            for (x, y) in e.iter_mut().zip(ld) {
                *x -= y;
            }
            let t = Poly { terms: BTreeMap::from([(e, cr / lc)]) };
            rem = rem.sub(&t.mul(d));
            quot = quot.add(&t);
        }
        Some(quot)
    }

    /// `(c, p)` with `self = c * p`, `p` having coprime integer coefficients
    /// and a positive leading coefficient.
    pub fn primitive(&self) -> (BigRational, Poly) {
        let Some((_, lead)) = self.leading() else {
            return (BigRational::one(), Poly::zero());
        };
        let mut g = BigInt::zero();
        let mut l = BigInt::one();
        for c in self.terms.values() {
            g = g.gcd(c.numer());
            l = l.lcm(c.denom());
        }
        let mut c = BigRational::new(g, l);
        if lead.is_negative() {
            c = -c;
        }
        let p = self.scale(&c.recip());
        (c, p)
    }

    /// Value at `a0 = 0` and the like.
    pub fn set_zero(&self, v: Var) -> Poly {
        Poly { terms: self.terms.iter().filter(|(e, _)| e[v as usize] == 0).map(|(e, c)| (*e, c.clone())).collect() }
    }

    pub fn eval<R: Ring>(&self, ring: &R, values: &[R::Elem; NVARS]) -> Result<R::Elem> {
        let mut acc = ring.zero();
        for (e, c) in &self.terms {
            let mut term = rational_to_ring(ring, c)?;
            for (x, &k) in values.iter().zip(e) {
                term = ring.mul(&term, &ring.pow(x, u64::from(k)));
            }
            acc = ring.add(&acc, &term);
        }
        Ok(acc)
    }
}

/// Image of a rational whose denominator is a unit in `ring`.
pub fn rational_to_ring<R: Ring>(ring: &R, q: &BigRational) -> Result<R::Elem> {
    let m = BigInt::from(ring.additive_order());
    let reduce = |n: &BigInt| n.mod_floor(&m).to_i64().expect("additive order fits in i64");
    let d = ring.from_int(reduce(q.denom()));
    Ok(ring.mul(&ring.from_int(reduce(q.numer())), &ring.inv(&d).map_err(|_| Error::NotUnit)?))
}

fn degree(e: &Exps) -> u32 {
    e.iter().map(|&x| u32::from(x)).sum()
}

pub(super) fn monomial_string(e: &Exps) -> String {
    let parts: Vec<String> = Var::ALL
        .iter()
        .zip(e)
        .filter(|(_, &k)| k > 0)
        .map(|(v, &k)| if k == 1 { v.name().to_string() } else { format!("{}^{k}", v.name()) })
        .collect();
    parts.join("*")
}

/// Terms in print order: higher total degree first, then lexicographically
/// larger exponents.
pub(super) fn print_order<T>(items: impl Iterator<Item = (Exps, T)>) -> Vec<(Exps, T)> {
    let mut v: Vec<(Exps, T)> = items.collect();
    v.sort_by(|a, b| (degree(&b.0), b.0).cmp(&(degree(&a.0), a.0)));
    v
}

/// Appends `coef*monomial` with a leading sign separator.
pub(super) fn push_term(out: &mut String, c: &BigRational, monomial: &str) {
    let first = out.is_empty();
    let neg = c.is_negative();
    match (first, neg) {
        (true, true) => out.push('-'),
        (false, true) => out.push_str(" - "),
        (false, false) => out.push_str(" + "),
        (true, false) => {}
    }
    let a = c.abs();
    if monomial.is_empty() {
        out.push_str(&a.to_string());
    } else if a.is_one() {
        out.push_str(monomial);
    } else {
        out.push_str(&format!("{a}*{monomial}"));
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (e, c) in print_order(self.terms.iter().map(|(e, c)| (*e, c))) {
            push_term(&mut out, c, &monomial_string(&e));
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}
