//! Truncated power series `A[[t]] / (t^prec)` with guaranteed-precision
//! tracking.
//!
//! A series of precision `p` stores exactly `p` coefficients and stands for
//! every power series agreeing with them modulo `t^p`. Each operation reports
//! the largest precision its inputs justify:
//!
//! * ring operations: `min` of the input precisions;
//! * `sqrt`, `div`, `inverse`: the input precision;
//! * `g.compose(f)`: `min(prec f, prec g - (nu - 1))` where `nu` is the least
//!   power killing the constant term of `f` (so no loss when `f(0) = 0`, and
//!   at most `e - 1` for a ring of nilpotency index `e`): the `t^j`
//!   coefficient of `f^i` depends only on `f mod t^(j+1)` and carries
//!   `f(0)^(i-j)`, so the unknown `g_i` with `i >= prec g` are invisible
//!   below degree `prec g - nu + 1`;
//! * `comp_inverse`: same loss as one composition with `t - g(0)`.

use std::fmt;
use std::sync::Arc;

use crate::artin::{Residue, Ring};
use crate::error::{Error, Result};
use crate::expr::{self, Algebra};

pub struct TruncatedSeries<R: Ring> {
    ring: Arc<R>,
    coeffs: Vec<R::Elem>,
}

impl<R: Ring> Clone for TruncatedSeries<R> {
    fn clone(&self) -> Self {
        TruncatedSeries { ring: Arc::clone(&self.ring), coeffs: self.coeffs.clone() }
    }
}

impl<R: Ring> PartialEq for TruncatedSeries<R> {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same_ring(&other.ring) && self.coeffs == other.coeffs
    }
}

impl<R: Ring> Eq for TruncatedSeries<R> {}

impl<R: Ring> fmt::Debug for TruncatedSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self, self.ring.descriptor())
    }
}

/// Result of [`TruncatedSeries::t_order`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TOrder {
    Exact(usize),
    /// Every stored coefficient vanishes.
    AtLeast(usize),
}

impl<R: Ring> TruncatedSeries<R> {
    /// Panics on an empty coefficient list: precision is at least 1.
    pub fn new(ring: Arc<R>, coeffs: Vec<R::Elem>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series has precision >= 1");
        TruncatedSeries { ring, coeffs }
    }

    pub fn zero(ring: Arc<R>, prec: usize) -> Self {
        let z = ring.zero();
        TruncatedSeries::new(ring, vec![z; prec])
    }

    pub fn constant(ring: Arc<R>, c: R::Elem, prec: usize) -> Self {
        let mut s = TruncatedSeries::zero(ring, prec);
        s.coeffs[0] = c;
        s
    }

    pub fn one(ring: Arc<R>, prec: usize) -> Self {
        let one = ring.one();
        TruncatedSeries::constant(ring, one, prec)
    }

    /// `c * t^k` at the given precision.
    pub fn monomial(ring: Arc<R>, c: R::Elem, k: usize, prec: usize) -> Self {
        let mut s = TruncatedSeries::zero(ring, prec);
        if k < prec {
            s.coeffs[k] = c;
        }
        s
    }

    /// The series `t`.
    pub fn t(ring: Arc<R>, prec: usize) -> Self {
        let one = ring.one();
        TruncatedSeries::monomial(ring, one, 1, prec)
    }

    pub fn ring(&self) -> &Arc<R> {
        &self.ring
    }

    pub fn prec(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, i: usize) -> &R::Elem {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R::Elem> {
        self.coeffs
    }

    pub fn truncate(&self, prec: usize) -> Self {
        assert!(prec >= 1 && prec <= self.prec(), "cannot truncate to {prec} from {}", self.prec());
        TruncatedSeries::new(Arc::clone(&self.ring), self.coeffs[..prec].to_vec())
    }

    /// Equality of the first `prec` coefficients.
    pub fn agrees_to(&self, other: &Self, prec: usize) -> bool {
        prec <= self.prec() && prec <= other.prec() && self.coeffs[..prec] == other.coeffs[..prec]
    }

    /// Equality modulo `t^min(prec)`.
    pub fn agrees(&self, other: &Self) -> bool {
        self.agrees_to(other, self.prec().min(other.prec()))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| self.ring.is_zero(c))
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        self.ring.check_same(&other.ring)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let r = &self.ring;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| r.add(a, b)).collect();
        Ok(TruncatedSeries::new(Arc::clone(r), coeffs))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let r = &self.ring;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| r.sub(a, b)).collect();
        Ok(TruncatedSeries::new(Arc::clone(r), coeffs))
    }

    pub fn neg(&self) -> Self {
        let r = &self.ring;
        TruncatedSeries::new(Arc::clone(r), self.coeffs.iter().map(|a| r.neg(a)).collect())
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let r = &self.ring;
        TruncatedSeries::new(Arc::clone(r), self.coeffs.iter().map(|a| r.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        Ok(self.mul_to(other, self.prec().min(other.prec())))
    }

    /// Product modulo `t^prec` (`prec` must not exceed either input).
    fn mul_to(&self, other: &Self, prec: usize) -> Self {
        let r = &self.ring;
        let mut out = vec![r.zero(); prec];
        for (i, a) in self.coeffs.iter().take(prec).enumerate() {
            if r.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(prec - i).enumerate() {
                out[i + j] = r.add(&out[i + j], &r.mul(a, b));
            }
        }
        TruncatedSeries::new(Arc::clone(r), out)
    }

    /// Multiplicative inverse; the constant term must be a unit.
    pub fn inverse(&self) -> Result<Self> {
        let one = TruncatedSeries::one(Arc::clone(&self.ring), self.prec());
        one.div(self)
    }

    /// `self / g` by back-substitution; `g(0)` must be a unit.
    pub fn div(&self, g: &Self) -> Result<Self> {
        self.check_ring(g)?;
        let r = &self.ring;
        let inv0 = r.inv(&g.coeffs[0])?;
        let prec = self.prec().min(g.prec());
        let mut h: Vec<R::Elem> = Vec::with_capacity(prec);
        for k in 0..prec {
            let mut acc = self.coeffs[k].clone();
            for i in 1..=k {
                acc = r.sub(&acc, &r.mul(&g.coeffs[i], &h[k - i]));
            }
            h.push(r.mul(&acc, &inv0));
        }
        let q = TruncatedSeries::new(Arc::clone(r), h);
        debug_assert!(q.mul_to(g, prec).agrees_to(self, prec), "division check failed");
        Ok(q)
    }

    /// Square root with constant term `sqrt_unit(f(0), branch)`.
    pub fn sqrt(&self, branch: Option<Residue>) -> Result<Self> {
        let r = &self.ring;
        let r0 = r.sqrt(&self.coeffs[0], branch)?;
        let inv_2r0 = r.inv(&r.add(&r0, &r0))?;
        let prec = self.prec();
        let mut out = vec![r0];
        for k in 1..prec {
            let mut acc = self.coeffs[k].clone();
            for i in 1..k {
                acc = r.sub(&acc, &r.mul(&out[i], &out[k - i]));
            }
            out.push(r.mul(&acc, &inv_2r0));
        }
        let s = TruncatedSeries::new(Arc::clone(r), out);
        debug_assert!(s.mul_to(&s, prec) == *self, "square root check failed");
        Ok(s)
    }

    /// Formal derivative, known modulo `t^(prec - 1)`.
    pub fn derivative(&self) -> Result<Self> {
        if self.prec() < 2 {
            return Err(Error::PrecisionUnderflow(0));
        }
        let r = &self.ring;
        let coeffs = (1..self.prec()).map(|k| r.mul_int(&self.coeffs[k], k as i64)).collect();
        Ok(TruncatedSeries::new(Arc::clone(r), coeffs))
    }

    /// Least index of a nonzero coefficient.
    pub fn t_order(&self) -> TOrder {
        match self.coeffs.iter().position(|c| !self.ring.is_zero(c)) {
            Some(i) => TOrder::Exact(i),
            None => TOrder::AtLeast(self.prec()),
        }
    }

    /// `self / t^k`, requiring the first `k` coefficients to vanish.
    pub fn shift_down(&self, k: usize) -> Result<Self> {
        if k >= self.prec() {
            return Err(Error::PrecisionUnderflow(self.prec() as i64 - k as i64));
        }
        if self.coeffs[..k].iter().any(|c| !self.ring.is_zero(c)) {
            return Err(Error::InvalidInput(format!("series is not divisible by t^{k}")));
        }
        Ok(TruncatedSeries::new(Arc::clone(&self.ring), self.coeffs[k..].to_vec()))
    }

    /// `self * t^k`, which gains `k` in precision.
    pub fn shift_up(&self, k: usize) -> Self {
        let mut coeffs = vec![self.ring.zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        TruncatedSeries::new(Arc::clone(&self.ring), coeffs)
    }

    /// Precision lost by substituting a series with constant term `c`.
    fn substitution_loss(&self, c: &R::Elem) -> Result<usize> {
        let nu = self.ring.nilpotency_order(c).ok_or(Error::NonNilpotentConstant)?;
        Ok(nu as usize - 1)
    }

    /// `self(f(t))`, the group law on automorphisms.
    pub fn compose(&self, f: &Self) -> Result<Self> {
        self.check_ring(f)?;
        let loss = self.substitution_loss(&f.coeffs[0])?;
        let prec = (self.prec() as i64 - loss as i64).min(f.prec() as i64);
        if prec < 1 {
            return Err(Error::PrecisionUnderflow(prec));
        }
        let prec = prec as usize;
        let f = f.truncate(prec);
        // Horner; with f(0) = 0 only the first `prec` coefficients matter
        let used = if loss == 0 { prec } else { self.prec() };
        let r = &self.ring;
        let mut acc = TruncatedSeries::zero(Arc::clone(r), prec);
        for c in self.coeffs[..used].iter().rev() {
            acc = acc.mul_to(&f, prec);
            acc.coeffs[0] = r.add(&acc.coeffs[0], c);
        }
        Ok(acc)
    }

    /// Compositional inverse: `self(h) = h(self) = t`.
    ///
    /// Requires `self(0)` in the maximal ideal and a unit linear coefficient.
    /// The zero-constant part is inverted by Newton iteration
    /// `h <- h - (g(h) - t) / g'(h)`; a nonzero constant is then undone by
    /// composing with `t - g(0)`.
    pub fn comp_inverse(&self) -> Result<Self> {
        let r = &self.ring;
        if self.prec() < 2 {
            return Err(Error::PrecisionUnderflow(self.prec() as i64));
        }
        if !r.in_maximal_ideal(&self.coeffs[0]) {
            return Err(Error::NonNilpotentConstant);
        }
        if !r.is_unit(&self.coeffs[1]) {
            return Err(Error::NotAutomorphism("linear coefficient is not a unit".into()));
        }
        let mut g = self.clone();
        g.coeffs[0] = r.zero();
        let h = g.reversion()?;
        if r.is_zero(&self.coeffs[0]) {
            return Ok(h);
        }
        let shift = TruncatedSeries::t(Arc::clone(r), self.prec())
            .sub(&TruncatedSeries::constant(Arc::clone(r), self.coeffs[0].clone(), self.prec()))?;
        h.compose(&shift)
    }

    fn reversion(&self) -> Result<Self> {
        let r = &self.ring;
        let prec = self.prec();
        let t = TruncatedSeries::t(Arc::clone(r), prec);
        let mut h = t.scale(&r.inv(&self.coeffs[1])?);
        let dg = self.derivative()?;
        for _ in 0..=usize::BITS - prec.leading_zeros() + 1 {
            let err = self.compose(&h)?.sub(&t)?;
            let k = match err.t_order() {
                TOrder::AtLeast(_) => return Ok(h),
                TOrder::Exact(k) => k,
            };
            // err = O(t^k), so the quotient only needs g'(h) modulo t^(prec - k)
            let slope = dg.compose(&h)?;
            let step = err.shift_down(k)?.div(&slope.truncate(prec - k))?.shift_up(k);
            h = h.sub(&step)?;
        }
        Err(Error::SearchExhausted("Newton reversion did not converge".into()))
    }

    pub fn map_ring<S: Ring>(&self, target: Arc<S>, f: impl Fn(&R::Elem) -> S::Elem) -> TruncatedSeries<S> {
        TruncatedSeries::new(target, self.coeffs.iter().map(f).collect())
    }

    /// Parse `c0 + c1*t + ... @prec=N`; coefficients are ring literals.
    pub fn parse(ring: Arc<R>, literal: &str) -> Result<Self> {
        let (body, prec) = match literal.rfind('@') {
            Some(at) => {
                let tail = literal[at + 1..].trim();
                let n = tail
                    .strip_prefix("prec")
                    .map(str::trim_start)
                    .and_then(|s| s.strip_prefix('='))
                    .and_then(|s| s.trim().parse::<usize>().ok())
                    .filter(|&n| n >= 1)
                    .ok_or_else(|| Error::parse(at, "expected `@prec=N` with N >= 1"))?;
                (&literal[..at], n)
            }
            None => return Err(Error::parse(literal.len(), "missing `@prec=N` suffix")),
        };
        expr::parse(body)?.eval(&SeriesAlgebra { ring, prec })
    }

    /// Canonical binary form: magic, precision, dimension, then
    /// little-endian `u64` coordinates of each coefficient.
    pub fn to_bytes(&self) -> Vec<u8> {
        let dim = self.ring.coordinates(&self.ring.zero()).len();
        let mut out = Vec::with_capacity(12 + 8 * dim * self.prec());
        out.extend_from_slice(BINARY_MAGIC);
        out.extend_from_slice(&(self.prec() as u32).to_le_bytes());
        out.extend_from_slice(&(dim as u32).to_le_bytes());
        for c in &self.coeffs {
            for x in self.ring.coordinates(c) {
                out.extend_from_slice(&(x as u64).to_le_bytes());
            }
        }
        out
    }

    pub fn from_bytes(ring: Arc<R>, bytes: &[u8]) -> Result<Self> {
        let bad = |m: &str| Error::InvalidInput(format!("binary series: {m}"));
        if bytes.len() < 12 || &bytes[..4] != BINARY_MAGIC {
            return Err(bad("missing header"));
        }
        let word = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().unwrap()) as usize;
        let (prec, dim) = (word(4), word(8));
        let expected_dim = ring.coordinates(&ring.zero()).len();
        if dim != expected_dim {
            return Err(bad("dimension does not match the ring"));
        }
        if prec == 0 || bytes.len() != 12 + 8 * dim * prec {
            return Err(bad("length does not match header"));
        }
        let mut coeffs = Vec::with_capacity(prec);
        for chunk in bytes[12..].chunks(8 * dim) {
            let raw: Vec<i64> = chunk
                .chunks(8)
                .map(|b| u64::from_le_bytes(b.try_into().unwrap()) as i64)
                .collect();
            coeffs.push(ring.from_coordinates(&raw)?);
        }
        Ok(TruncatedSeries::new(ring, coeffs))
    }
}

const BINARY_MAGIC: &[u8; 4] = b"UDS1";

/// Canonical text: nonzero terms in increasing degree, `@prec=N` suffix.
impl<R: Ring> fmt::Display for TruncatedSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if self.ring.is_zero(c) {
                continue;
            }
            let lit = self.ring.format_element(c);
            let coef = if lit.contains('+') { format!("({lit})") } else { lit };
            terms.push(match (k, coef.as_str()) {
                (0, _) => coef,
                (1, "1") => "t".to_string(),
                (1, _) => format!("{coef}*t"),
                (_, "1") => format!("t^{k}"),
                _ => format!("{coef}*t^{k}"),
            });
        }
        if terms.is_empty() {
            terms.push("0".into());
        }
        write!(f, "{} @prec={}", terms.join(" + "), self.prec())
    }
}

struct SeriesAlgebra<R: Ring> {
    ring: Arc<R>,
    prec: usize,
}

impl<R: Ring> Algebra for SeriesAlgebra<R> {
    type Value = TruncatedSeries<R>;

    fn int(&self, n: i64) -> Self::Value {
        TruncatedSeries::constant(Arc::clone(&self.ring), self.ring.from_int(n), self.prec)
    }

    fn var(&self, name: &str, offset: usize) -> Result<Self::Value> {
        if name == "t" {
            return Ok(TruncatedSeries::t(Arc::clone(&self.ring), self.prec));
        }
        let c = self
            .ring
            .parse_element(name)
            .map_err(|_| Error::parse(offset, format!("unknown name `{name}`")))?;
        Ok(TruncatedSeries::constant(Arc::clone(&self.ring), c, self.prec))
    }

    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value {
        a.add(b).expect("same ring")
    }

    fn sub(&self, a: &Self::Value, b: &Self::Value) -> Self::Value {
        a.sub(b).expect("same ring")
    }

    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Self::Value {
        a.mul(b).expect("same ring")
    }

    fn neg(&self, a: &Self::Value) -> Self::Value {
        a.neg()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::artin::ArtinRing;

    type S = TruncatedSeries<ArtinRing>;

    fn ring(s: &str) -> Arc<ArtinRing> {
        Arc::new(ArtinRing::parse(s).unwrap())
    }

    fn series(r: &Arc<ArtinRing>, lit: &str) -> S {
        S::parse(Arc::clone(r), lit).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let f5 = ring("F5");
        let p = series(&f5, "1 + t @prec=3").mul(&series(&f5, "1 - t @prec=3")).unwrap();
        assert_eq!(p, series(&f5, "1 + 4*t^2 @prec=3"));
        let tt = S::t(f5.clone(), 2).mul(&S::t(f5.clone(), 2)).unwrap();
        assert!(tt.is_zero());
        let eps = ring("F5[e]/(e^2)");
        let x = series(&eps, "1 + e*t @prec=3");
        assert_eq!(x.mul(&x).unwrap(), series(&eps, "1 + 2*e*t @prec=3"));
        // precision of a mixed product is the minimum
        assert_eq!(series(&f5, "1 @prec=5").mul(&series(&f5, "1 @prec=2")).unwrap().prec(), 2);
    }

    #[test]
    fn division_examples() {
        let f5 = ring("F5");
        let q = series(&f5, "t @prec=4").div(&series(&f5, "1 + t @prec=4")).unwrap();
        assert_eq!(q, series(&f5, "t + 4*t^2 + t^3 @prec=4"));
        let f = series(&f5, "2 + 3*t^2 @prec=4");
        assert_eq!(f.div(&S::one(f5.clone(), 4)).unwrap(), f);
        let eps = ring("F5[e]/(e^2)");
        let inv = series(&eps, "1 @prec=3").div(&series(&eps, "1 - e*t @prec=3")).unwrap();
        assert_eq!(inv, series(&eps, "1 + e*t @prec=3"));
        assert_eq!(series(&f5, "1 @prec=3").div(&series(&f5, "t @prec=3")), Err(Error::NotUnit));
    }

    #[test]
    fn sqrt_examples() {
        let f5 = ring("F5");
        let s = series(&f5, "1 + t^2 @prec=6").sqrt(Some(1)).unwrap();
        assert_eq!(s, series(&f5, "1 + 3*t^2 + 3*t^4 @prec=6"));
        assert_eq!(series(&f5, "1 @prec=3").sqrt(None).unwrap(), series(&f5, "1 @prec=3"));
        let c2 = ring("cyclo(2)");
        let f = series(&c2, "1 + u + t^2 @prec=4");
        let s = f.sqrt(Some(1)).unwrap();
        assert_eq!(s.mul(&s).unwrap(), f);
        assert_eq!(c2.residue(s.coeff(0)), 1);
    }

    #[test]
    fn compose_precision_contract() {
        let eps = ring("F5[e]/(e^2)");
        let g = series(&eps, "1 + t + t^5 @prec=6");
        let shifted = series(&eps, "e + t @prec=6");
        assert_eq!(g.compose(&shifted).unwrap().prec(), 5);
        let f = series(&eps, "t + e*t^2 @prec=6");
        assert_eq!(g.compose(&f).unwrap().prec(), 6);
        // a better-known outer series keeps the inner precision
        let long = series(&eps, "1 + t + t^5 @prec=7");
        assert_eq!(long.compose(&shifted).unwrap().prec(), 6);
        assert!(long.compose(&shifted).unwrap().agrees(&g.compose(&shifted).unwrap()));
        let unit_const = series(&eps, "1 + t @prec=6");
        assert_eq!(g.compose(&unit_const), Err(Error::NonNilpotentConstant));
        // identity is right-neutral
        assert_eq!(g.compose(&S::t(eps.clone(), 6)).unwrap(), g);
    }

    #[test]
    fn compose_with_nilpotent_constant_is_exact_on_polynomials() {
        // (1 + t^2)(e + t) with the polynomial fully known
        let eps = ring("F5[e]/(e^2)");
        let g = series(&eps, "1 + t^2 @prec=6");
        let f = series(&eps, "e + t @prec=6");
        let c = g.compose(&f).unwrap();
        assert_eq!(c, series(&eps, "1 + 2*e*t + t^2 @prec=5"));
    }

    #[test]
    fn comp_inverse_examples() {
        let f5 = ring("F5");
        let t = S::t(f5.clone(), 6);
        assert_eq!(t.comp_inverse().unwrap(), t);
        let g = series(&f5, "t + t^2 @prec=4");
        let h = g.comp_inverse().unwrap();
        assert_eq!(h, series(&f5, "t + 4*t^2 + 2*t^3 @prec=4"));
        assert!(g.compose(&h).unwrap().agrees(&S::t(f5.clone(), 4)));
        assert!(h.compose(&g).unwrap().agrees(&S::t(f5.clone(), 4)));
    }

    #[test]
    fn comp_inverse_with_nilpotent_constant() {
        let r = ring("F5[e]/(e^3)");
        let g = series(&r, "e + (1+e)*t + 2*t^2 + e*t^3 @prec=8");
        let h = g.comp_inverse().unwrap();
        assert!(h.prec() >= 8 - 2 * 2);
        let id = S::t(r.clone(), 8);
        let gh = g.compose(&h).unwrap();
        let hg = h.compose(&g).unwrap();
        assert!(gh.agrees(&id), "g(h) = {gh}");
        assert!(hg.agrees(&id), "h(g) = {hg}");
    }

    #[test]
    fn t_order_examples() {
        let f5 = ring("F5");
        assert_eq!(series(&f5, "t^2 + t^3 @prec=5").t_order(), TOrder::Exact(2));
        assert_eq!(S::zero(f5, 5).t_order(), TOrder::AtLeast(5));
        let eps = ring("F5[e]/(e^2)");
        assert_eq!(series(&eps, "e*t @prec=3").t_order(), TOrder::Exact(1));
    }

    #[test]
    fn text_and_binary_forms() {
        let r = ring("F5[e1]/(e1^2)");
        let s = series(&r, "(1+2*e1) + e1*t^2 + 3*t^3 @prec=5");
        assert_eq!(s.to_string(), "(1+2*e1) + e1*t^2 + 3*t^3 @prec=5");
        assert_eq!(series(&r, &s.to_string()), s);
        assert_eq!(S::from_bytes(r.clone(), &s.to_bytes()).unwrap(), s);
        assert_eq!(S::zero(r.clone(), 2).to_string(), "0 @prec=2");
        assert!(S::parse(r.clone(), "1 + t").is_err());
        let mut bytes = s.to_bytes();
        bytes[12] = 7; // coordinate outside [0, 5)
        assert!(S::from_bytes(r, &bytes).is_err());
    }
}
