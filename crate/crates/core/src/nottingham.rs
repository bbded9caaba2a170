//! Continuous automorphisms of `A[[t]]`: powers, order, Hasse conductor,
//! conjugation and the conductor-2 normal form over a residue field.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::artin::{EnumFilter, Residue, Ring};
use crate::error::{Error, Result};
use crate::series::{TOrder, TruncatedSeries};

/// A series `c0 + c1 t + ...` with `c0` in the maximal ideal and `c1` a unit.
pub struct Automorphism<R: Ring> {
    series: TruncatedSeries<R>,
}

impl<R: Ring> Clone for Automorphism<R> {
    fn clone(&self) -> Self {
        Automorphism { series: self.series.clone() }
    }
}

impl<R: Ring> PartialEq for Automorphism<R> {
    fn eq(&self, other: &Self) -> bool {
        self.series == other.series
    }
}

impl<R: Ring> Eq for Automorphism<R> {}

impl<R: Ring> fmt::Debug for Automorphism<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.series, f)
    }
}

impl<R: Ring> fmt::Display for Automorphism<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.series, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Order {
    /// `a^order = t` modulo `t^prec`, and no smaller power is.
    Exact { order: u64, prec: usize },
    /// No power up to `cap` equals `t` at the precision still available.
    ExceedsCap { cap: u64, prec: usize },
}

impl Order {
    pub fn value(self) -> Option<u64> {
        match self {
            Order::Exact { order, .. } => Some(order),
            Order::ExceedsCap { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Conductor {
    pub value: usize,
    /// Residue of the leading coefficient of `a(t)/t - 1`.
    pub leading: Residue,
}

impl<R: Ring> Automorphism<R> {
    pub fn new(series: TruncatedSeries<R>) -> Result<Self> {
        let ring = series.ring();
        if series.prec() < 2 {
            return Err(Error::NotAutomorphism("linear coefficient is not known".into()));
        }
        if !ring.in_maximal_ideal(series.coeff(0)) {
            return Err(Error::NotAutomorphism("constant term is not in the maximal ideal".into()));
        }
        if !ring.is_unit(series.coeff(1)) {
            return Err(Error::NotAutomorphism("linear coefficient is not a unit".into()));
        }
        Ok(Automorphism { series })
    }

    pub fn identity(ring: Arc<R>, prec: usize) -> Self {
        Automorphism { series: TruncatedSeries::t(ring, prec.max(2)) }
    }

    pub fn series(&self) -> &TruncatedSeries<R> {
        &self.series
    }

    pub fn into_series(self) -> TruncatedSeries<R> {
        self.series
    }

    pub fn ring(&self) -> &Arc<R> {
        self.series.ring()
    }

    pub fn prec(&self) -> usize {
        self.series.prec()
    }

    /// Equal to `t` at the stored precision.
    pub fn is_identity(&self) -> bool {
        self.series == TruncatedSeries::t(Arc::clone(self.ring()), self.prec())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        let s = self.series.compose(&other.series)?;
        Automorphism::new(s)
    }

    pub fn inverse(&self) -> Result<Self> {
        Automorphism::new(self.series.comp_inverse()?)
    }

    /// `n`-fold composite by square-and-multiply.
    pub fn power(&self, mut n: u64) -> Result<Self> {
        let mut result = Automorphism::identity(Arc::clone(self.ring()), self.prec());
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = result.compose(&base)?;
            }
            n >>= 1;
            if n > 0 {
                base = base.compose(&base)?;
            }
        }
        Ok(result)
    }

    /// Least `n <= cap` with `self^n = t` at working precision.
    pub fn order(&self, cap: u64) -> Order {
        let mut acc = self.clone();
        for n in 1..=cap {
            if acc.is_identity() {
                return Order::Exact { order: n, prec: acc.prec() };
            }
            if n == cap {
                break;
            }
            acc = match self.compose(&acc) {
                Ok(next) => next,
                Err(_) => return Order::ExceedsCap { cap: n, prec: acc.prec() },
            };
        }
        Order::ExceedsCap { cap, prec: acc.prec() }
    }

    /// `ord_t(a(t)/t - 1)` of the reduction modulo the maximal ideal.
    pub fn hasse_conductor(&self) -> Result<Conductor> {
        let ring = self.ring();
        let one = ring.one();
        for i in 0..self.prec() - 1 {
            let mut c = self.series.coeff(i + 1).clone();
            if i == 0 {
                c = ring.sub(&c, &one);
            }
            let r = ring.residue(&c);
            if r != 0 {
                return Ok(Conductor { value: i, leading: r });
            }
        }
        Err(Error::IdentityAtPrecision(self.prec() - 1))
    }

    /// `x ∘ self ∘ x^{-1}`.
    pub fn conjugate(&self, x: &Self) -> Result<Self> {
        x.compose(&self.compose(&x.inverse()?)?)
    }

    pub fn truncate(&self, prec: usize) -> Self {
        Automorphism { series: self.series.truncate(prec) }
    }
}

/// `t / sqrt(t^2 + y)` with the given branch of `sqrt(y)` (default principal).
pub fn sigma_family<R: Ring>(ring: Arc<R>, y: &R::Elem, branch: Option<Residue>, prec: usize) -> Result<Automorphism<R>> {
    if prec < 2 {
        return Err(Error::PrecisionUnderflow(prec as i64));
    }
    // t * h is known modulo t^prec once h is known modulo t^(prec - 1)
    let inner = TruncatedSeries::monomial(Arc::clone(&ring), ring.one(), 2, prec - 1)
        .add(&TruncatedSeries::constant(Arc::clone(&ring), y.clone(), prec - 1))?;
    let h = inner.sqrt(branch)?.inverse()?;
    Automorphism::new(h.shift_up(1))
}

/// The base automorphism `t / sqrt(t^2 + 1)`.
pub fn base_sigma<R: Ring>(ring: Arc<R>, prec: usize) -> Result<Automorphism<R>> {
    let one = ring.one();
    sigma_family(ring, &one, None, prec)
}

/// Drop every coefficient to its residue, as a series over `field`.
pub fn reduce<R: Ring, F: Ring>(a: &Automorphism<R>, field: Arc<F>) -> Result<Automorphism<F>> {
    let ring = a.ring();
    Automorphism::new(a.series().map_ring(Arc::clone(&field), |c| field.lift_residue(ring.residue(c))))
}

/// A conjugator `ξ` (with `ξ(0) = 0`) such that `ξ ∘ σ ∘ ξ^{-1} = a` modulo
/// `t^prec`, for `a` of order 5 and conductor 2 over a residue field.
///
/// Depth-first search over the coefficients of `ξ` in increasing degree,
/// trying values in the enumeration order, so the first hit is the
/// lexicographically least solution. Writing `E(ξ) = ξ∘σ - a∘ξ`, changing
/// `ξ_j` only moves coefficients of `E` of degree `>= j + 2` (because `a`
/// and `σ` are both `t + O(t^3)`), so once `ξ_1..ξ_j` are fixed the
/// coefficients of `E` up to degree `j + 2` are final and can be checked.
pub fn normal_form_o5c2<R: Ring>(a: &Automorphism<R>, prec: usize) -> Result<Automorphism<R>> {
    let ring = Arc::clone(a.ring());
    if ring.nilpotency_index() != 1 {
        return Err(Error::InvalidInput("the normal form search runs over a residue field".into()));
    }
    if prec < 4 || prec > a.prec() {
        return Err(Error::InvalidInput(format!("precision must lie in 4..={}", a.prec())));
    }
    let a = a.truncate(prec);
    if a.order(5).value() != Some(5) {
        return Err(Error::InvalidInput("input does not have order 5 at this precision".into()));
    }
    if a.hasse_conductor()?.value != 2 {
        return Err(Error::InvalidInput("input does not have conductor 2".into()));
    }
    let sigma = base_sigma(Arc::clone(&ring), prec)?;
    let values = ring.enumerate(EnumFilter::All)?;
    let mut xi: Vec<R::Elem> = vec![ring.zero(); prec];
    if dfs(&ring, &sigma, &a, &values, &mut xi, 1) {
        let xi = Automorphism::new(TruncatedSeries::new(Arc::clone(&ring), xi))?;
        debug_assert!(sigma.conjugate(&xi).map(|c| c == a).unwrap_or(false));
        return Ok(xi);
    }
    Err(Error::SearchExhausted(format!("no conductor-2 normal form conjugator at precision {prec}")))
}

fn dfs<R: Ring>(
    ring: &Arc<R>,
    sigma: &Automorphism<R>,
    a: &Automorphism<R>,
    values: &[R::Elem],
    xi: &mut Vec<R::Elem>,
    j: usize,
) -> bool {
    let prec = xi.len();
    // degrees >= prec are not constrained, so ξ_j for j + 2 >= prec is free
    if j + 2 >= prec {
        return true;
    }
    for v in values {
        if j == 1 && ring.is_zero(v) {
            continue;
        }
        xi[j] = v.clone();
        let x = TruncatedSeries::new(Arc::clone(ring), xi.clone());
        let lhs = x.compose(sigma.series()).expect("ξ(0) = 0");
        let rhs = a.series().compose(&x).expect("ξ(0) = 0");
        if lhs.agrees_to(&rhs, j + 3) && dfs(ring, sigma, a, values, xi, j + 1) {
            return true;
        }
    }
    xi[j] = ring.zero();
    false
}

/// `t_order` of the reduction of `a(t)/t - 1`, exposed for reports that want
/// the raw valuation without the identity error.
pub fn conductor_valuation<R: Ring>(a: &Automorphism<R>) -> TOrder {
    match a.hasse_conductor() {
        Ok(c) => TOrder::Exact(c.value),
        Err(_) => TOrder::AtLeast(a.prec() - 1),
    }
}
