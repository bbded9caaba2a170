use std::fmt;

use num_rational::BigRational;
use num_traits::One;

use super::poly::{monomial_string, push_term, Poly, Var, NVARS};
use crate::artin::Ring;
use crate::error::{Error, Result};

/// `s1² = a0² + y1`.
pub fn s1_squared() -> Poly {
    Poly::var(Var::A0).pow(2).add(&Poly::var(Var::Y1))
}

/// `s2² = y2`.
pub fn s2_squared() -> Poly {
    Poly::var(Var::Y2)
}

/// `(p00 + p10 s1 + p01 s2 + p11 s1 s2) / q`, with `q` kept as a product of
/// primitive polynomial factors.
///
/// Component `i` carries `s1^(i & 1) s2^(i >> 1)`. Factors common to every
/// numerator component are cancelled, so the form is unique once the factor
/// list consists of distinct irreducibles; equality never relies on this and
/// is decided on the numerators of the difference.
#[derive(Clone, PartialEq, Eq)]
pub struct SurdExpr {
    num: [Poly; 4],
    den: Vec<(Poly, u32)>,
}

impl SurdExpr {
    pub fn zero() -> Self {
        SurdExpr { num: Default::default(), den: Vec::new() }
    }

    pub fn one() -> Self {
        SurdExpr::poly(Poly::one())
    }

    pub fn int(n: i64) -> Self {
        SurdExpr::poly(Poly::int(n))
    }

    pub fn rational(n: i64, d: i64) -> Self {
        SurdExpr::poly(Poly::constant(BigRational::new(n.into(), d.into())))
    }

    pub fn poly(p: Poly) -> Self {
        let mut num: [Poly; 4] = Default::default();
        num[0] = p;
        SurdExpr { num, den: Vec::new() }
    }

    pub fn var(v: Var) -> Self {
        SurdExpr::poly(Poly::var(v))
    }

    pub fn s1() -> Self {
        let mut num: [Poly; 4] = Default::default();
        num[1] = Poly::one();
        SurdExpr { num, den: Vec::new() }
    }

    pub fn s2() -> Self {
        let mut num: [Poly; 4] = Default::default();
        num[2] = Poly::one();
        SurdExpr { num, den: Vec::new() }
    }

    pub fn component(&self, s1: bool, s2: bool) -> &Poly {
        &self.num[usize::from(s1) | usize::from(s2) << 1]
    }

    pub fn denominator(&self) -> Poly {
        self.den.iter().fold(Poly::one(), |acc, (f, e)| acc.mul(&f.pow(*e)))
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Poly::is_zero)
    }

    /// No surd components.
    pub fn is_rational(&self) -> bool {
        self.num[1..].iter().all(Poly::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let (den, fa, fb) = common_denominator(&self.den, &other.den);
        let num = std::array::from_fn(|i| self.num[i].mul(&fa).add(&other.num[i].mul(&fb)));
        SurdExpr { num, den }.normalized()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        SurdExpr { num: std::array::from_fn(|i| self.num[i].neg()), den: self.den.clone() }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        SurdExpr { num: std::array::from_fn(|i| self.num[i].scale(c)), den: self.den.clone() }.normalized()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let rel = [Poly::one(), s1_squared(), s2_squared(), s1_squared().mul(&s2_squared())];
        let mut num: [Poly; 4] = Default::default();
        for i in 0..4 {
            if self.num[i].is_zero() {
                continue;
            }
            for j in 0..4 {
                if other.num[j].is_zero() {
                    continue;
                }
                // s-bits present in both factors square into the relations
                let p = self.num[i].mul(&other.num[j]).mul(&rel[i & j]);
                num[i ^ j] = num[i ^ j].add(&p);
            }
        }
        let mut den = self.den.clone();
        for (f, e) in &other.den {
            push_factor(&mut den, f.clone(), *e);
        }
        SurdExpr { num, den }.normalized()
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(SurdExpr::one(), |acc, _| acc.mul(self))
    }

    /// Image under `s1 -> -s1` and/or `s2 -> -s2`.
    pub fn conjugate(&self, flip_s1: bool, flip_s2: bool) -> Self {
        let mask = usize::from(flip_s1) | usize::from(flip_s2) << 1;
        let num = std::array::from_fn(|i| if (i & mask).count_ones() % 2 == 1 { self.num[i].neg() } else { self.num[i].clone() });
        SurdExpr { num, den: self.den.clone() }
    }

    /// Product of the four sign-conjugates; always rational.
    pub fn norm(&self) -> SurdExpr {
        let z = self.mul(&self.conjugate(true, false));
        z.mul(&z.conjugate(false, true))
    }

    /// Inverse by rationalizing with conjugates.
    pub fn inv(&self) -> Result<Self> {
        let c1 = self.conjugate(true, false);
        let z = self.mul(&c1);
        let c2 = z.conjugate(false, true);
        let n = z.mul(&c2);
        debug_assert!(n.is_rational());
        let p = n.num[0].clone();
        if p.is_zero() {
            return Err(Error::NotInvertible);
        }
        // 1/self = c1 c2 / n = c1 c2 q / p where n = p / q
        let mut out = c1.mul(&c2).mul(&SurdExpr::poly(n.denominator()));
        out.divide_by(&p);
        Ok(out.normalized())
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    /// Substitutes `v = 0` in every component. The relation `s1² = a0² + y1`
    /// is not rewritten, so further arithmetic on the result is only
    /// meaningful when `v` does not occur in the relations.
    pub fn set_zero(&self, v: Var) -> Result<Self> {
        let num = std::array::from_fn(|i| self.num[i].set_zero(v));
        let mut den = Vec::new();
        let mut scale = BigRational::one();
        for (f, e) in &self.den {
            let (c, p) = f.set_zero(v).primitive();
            if p.is_zero() {
                return Err(Error::NotInvertible);
            }
            scale *= c.pow(*e as i32);
            if !p.is_constant() {
                push_factor(&mut den, p, *e);
            }
        }
        Ok(SurdExpr { num, den }.scale(&scale.recip()))
    }

    /// Value at concrete `a0..y2`, `s1`, `s2`, which must satisfy the two
    /// relations.
    pub fn eval<R: Ring>(&self, ring: &R, at: &Assignment<R>) -> Result<R::Elem> {
        at.check(ring)?;
        let basis = [ring.one(), at.s1.clone(), at.s2.clone(), ring.mul(&at.s1, &at.s2)];
        let mut acc = ring.zero();
        for (p, b) in self.num.iter().zip(&basis) {
            acc = ring.add(&acc, &ring.mul(&p.eval(ring, &at.values)?, b));
        }
        let d = self.denominator().eval(ring, &at.values)?;
        Ok(ring.mul(&acc, &ring.inv(&d).map_err(|_| Error::NotUnit)?))
    }

    fn divide_by(&mut self, p: &Poly) {
        let (c, mut rest) = p.primitive();
        for n in &mut self.num {
            *n = n.scale(&c.recip());
        }
        let mut known: Vec<Poly> = self.den.iter().map(|(f, _)| f.clone()).collect();
        known.push(s1_squared());
        known.extend(Var::ALL.iter().map(|&v| Poly::var(v)));
        for f in known {
            while let Some(q) = rest.div_exact(&f) {
                push_factor(&mut self.den, f.clone(), 1);
                rest = q;
                if rest.is_constant() {
                    break;
                }
            }
        }
        // quotients of primitive polynomials with positive leading terms stay
        // primitive, so a constant remainder is 1
        if !rest.is_constant() {
            push_factor(&mut self.den, rest, 1);
        }
    }

    fn normalized(mut self) -> Self {
        if self.is_zero() {
            self.den.clear();
            return self;
        }
        for k in 0..self.den.len() {
            while self.den[k].1 > 0 {
                let f = &self.den[k].0;
                let quotients: Option<Vec<Poly>> = self.num.iter().map(|n| n.div_exact(f)).collect();
                match quotients {
                    Some(q) => {
                        self.num = q.try_into().expect("four components");
                        self.den[k].1 -= 1;
                    }
                    None => break,
                }
            }
        }
        self.den.retain(|(_, e)| *e > 0);
        self.den.sort();
        self
    }
}

fn push_factor(den: &mut Vec<(Poly, u32)>, f: Poly, e: u32) {
    match den.iter_mut().find(|(g, _)| *g == f) {
        Some(slot) => slot.1 += e,
        None => den.push((f, e)),
    }
}

/// Least common multiple of two factored denominators, and the cofactors of
/// each.
fn common_denominator(a: &[(Poly, u32)], b: &[(Poly, u32)]) -> (Vec<(Poly, u32)>, Poly, Poly) {
    let mut den = a.to_vec();
    for (f, e) in b {
        match den.iter_mut().find(|(g, _)| g == f) {
            Some(slot) => slot.1 = slot.1.max(*e),
            None => den.push((f.clone(), *e)),
        }
    }
    let exp = |side: &[(Poly, u32)], f: &Poly| side.iter().find(|(g, _)| g == f).map_or(0, |(_, e)| *e);
    let mut fa = Poly::one();
    let mut fb = Poly::one();
    for (f, e) in &den {
        fa = fa.mul(&f.pow(e - exp(a, f)));
        fb = fb.mul(&f.pow(e - exp(b, f)));
    }
    (den, fa, fb)
}

/// Concrete values for the variables and the two surds.
#[derive(Clone)]
pub struct Assignment<R: Ring> {
    pub values: [R::Elem; NVARS],
    pub s1: R::Elem,
    pub s2: R::Elem,
}

impl<R: Ring> Assignment<R> {
    fn check(&self, ring: &R) -> Result<()> {
        let s1sq = s1_squared().eval(ring, &self.values)?;
        let s2sq = s2_squared().eval(ring, &self.values)?;
        if ring.mul(&self.s1, &self.s1) != s1sq || ring.mul(&self.s2, &self.s2) != s2sq {
            return Err(Error::InvalidInput("surd values violate s1^2 = a0^2 + y1 or s2^2 = y2".into()));
        }
        Ok(())
    }
}

impl fmt::Display for SurdExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let surd = ["", "s1", "s2", "s1*s2"];
        let mut terms = Vec::new();
        for (i, p) in self.num.iter().enumerate() {
            for (e, c) in p.terms() {
                let mut e8 = [0u16; NVARS + 2];
                e8[..NVARS].copy_from_slice(e);
                e8[NVARS] = (i & 1) as u16;
                e8[NVARS + 1] = (i >> 1) as u16;
                terms.push((e8, (i, *e, c)));
            }
        }
        let mut num = String::new();
        for (_, (i, e, c)) in print_order_wide(terms) {
            let m = [monomial_string(&e), surd[i].to_string()];
            let m: Vec<&str> = m.iter().map(String::as_str).filter(|s| !s.is_empty()).collect();
            push_term(&mut num, c, &m.join("*"));
        }
        if self.den.is_empty() {
            return f.write_str(&num);
        }
        let single = self.num.iter().map(Poly::len).sum::<usize>() == 1;
        let num = if single && !num.starts_with('-') { num } else { format!("({num})") };
        let factors: Vec<String> = self
            .den
            .iter()
            .map(|(p, e)| {
                let base = if p.len() > 1 { format!("({p})") } else { p.to_string() };
                if *e == 1 { base } else { format!("{base}^{e}") }
            })
            .collect();
        let den = if factors.len() == 1 { factors[0].clone() } else { format!("({})", factors.join("*")) };
        write!(f, "{num}/{den}")
    }
}

fn print_order_wide<T>(mut v: Vec<([u16; NVARS + 2], T)>) -> Vec<([u16; NVARS + 2], T)> {
    let deg = |e: &[u16; NVARS + 2]| e.iter().map(|&x| u32::from(x)).sum::<u32>();
    v.sort_by(|a, b| (deg(&b.0), b.0).cmp(&(deg(&a.0), a.0)));
    v
}

impl fmt::Debug for SurdExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SurdExpr({self})")
    }
}
