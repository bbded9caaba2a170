use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::{hom_points, versal_family, Lift};
use crate::artin::{EnumFilter, Ring};
use crate::error::{Error, Result};
use crate::nottingham::Automorphism;
use crate::series::TruncatedSeries;

/// Search for `ξ` with `ξ ≡ t mod m` and `ξ ∘ σ̃₁ = σ̃₂ ∘ ξ` modulo `t^prec`.
///
/// The search is exhaustive over truncated `ξ = ξ_0 + ξ_1 t + ...` with
/// `ξ_0, ξ_i ∈ m` and `ξ_1 ∈ 1 + m`, so `Ok(None)` refutes equivalence: a
/// genuine conjugator truncates to a solution. Coefficients are fixed in
/// increasing degree. The degree-`k` coefficient of the equation involves
/// `ξ_0..ξ_{k+δ}` only, where `δ = ν(σ̃₁(0)) - 1` (zero for the versal
/// family), so it is checked as soon as `ξ_{k+δ}` is chosen.
///
/// `σ̃₂` must be known to precision `prec + e - 1` so that `σ̃₂ ∘ ξ` is exact
/// modulo `t^prec` for every nilpotent `ξ_0`.
pub fn equivalent<R: Ring>(l1: &Lift<R>, l2: &Lift<R>, prec: usize) -> Result<Option<Automorphism<R>>> {
    Ok(Search::new(l1, l2, prec)?.run().map(|(xi, _)| xi))
}

pub(super) struct Search<'a, R: Ring> {
    ring: &'a Arc<R>,
    s1: &'a TruncatedSeries<R>,
    s2: &'a TruncatedSeries<R>,
    prec: usize,
    lag: usize,
    ideal: Vec<R::Elem>,
    principal: Vec<R::Elem>,
    nodes: u64,
}

impl<'a, R: Ring> Search<'a, R> {
    pub(super) fn new(l1: &'a Lift<R>, l2: &'a Lift<R>, prec: usize) -> Result<Self> {
        let ring = l1.automorphism().ring();
        ring.check_same(l2.automorphism().ring())?;
        if prec < 1 {
            return Err(Error::PrecisionUnderflow(0));
        }
        let s1 = l1.automorphism().series();
        let s2 = l2.automorphism().series();
        let lag = ring.nilpotency_order(s1.coeff(0)).ok_or(Error::NonNilpotentConstant)? as usize - 1;
        let e = ring.nilpotency_index() as usize;
        if s1.prec() < prec + lag || s2.prec() < prec + e - 1 {
            return Err(Error::InvalidInput(format!(
                "lifts must be known to precision {} and {} for a search at precision {prec}",
                prec + lag,
                prec + e - 1
            )));
        }
        let ideal = ring.enumerate(EnumFilter::MaximalIdeal)?;
        let one = ring.one();
        let principal = ideal.iter().map(|x| ring.add(&one, x)).collect();
        Ok(Search { ring, s1, s2, prec, lag, ideal, principal, nodes: 0 })
    }

    /// First solution in enumeration order, and the number of nodes visited.
    pub(super) fn run(mut self) -> Option<(Automorphism<R>, u64)> {
        let mut xi = Vec::with_capacity(self.prec + self.lag);
        let found = self.dfs(&mut xi);
        let nodes = self.nodes;
        if !found {
            return None;
        }
        let series = TruncatedSeries::new(Arc::clone(self.ring), xi);
        Some((Automorphism::new(series).expect("ξ_1 is a unit"), nodes))
    }

    fn dfs(&mut self, xi: &mut Vec<R::Elem>) -> bool {
        let j = xi.len();
        if j == self.prec + self.lag {
            return true;
        }
        let candidates = if j == 1 { self.principal.clone() } else { self.ideal.clone() };
        for c in candidates {
            self.nodes += 1;
            xi.push(c);
            let ok = j < self.lag || self.coefficient_vanishes(xi, j - self.lag);
            if ok && self.dfs(xi) {
                return true;
            }
            xi.pop();
        }
        false
    }

    /// Degree-`k` coefficient of `ξ ∘ σ̃₁ - σ̃₂ ∘ ξ` is zero, where `xi` holds
    /// `ξ_0..ξ_{k+lag}`.
    fn coefficient_vanishes(&self, xi: &[R::Elem], k: usize) -> bool {
        let ring = self.ring;
        let x = TruncatedSeries::new(Arc::clone(ring), xi.to_vec());
        let lhs = x.compose(&self.s1.truncate(k + 1)).expect("precision checked in new");
        let nu = ring.nilpotency_order(&xi[0]).expect("ξ_0 is nilpotent") as usize;
        let outer = self.s2.truncate((k + nu).min(self.s2.prec()));
        let rhs = outer.compose(&x.truncate(k + 1)).expect("precision checked in new");
        lhs.coeff(k) == rhs.coeff(k)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairVerdict {
    pub y1: String,
    pub y2: String,
    pub same_point: bool,
    /// A conjugator found by the search, if any.
    pub conjugator: Option<String>,
    pub nodes: u64,
}

impl PairVerdict {
    pub fn consistent(&self) -> bool {
        self.same_point == self.conjugator.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UniversalityReport {
    pub ring: String,
    pub prec: usize,
    pub points: usize,
    pub diagonal_equivalent: usize,
    pub off_diagonal_refuted: usize,
    pub pairs: Vec<PairVerdict>,
}

impl UniversalityReport {
    /// Conjugators exist exactly on the diagonal.
    pub fn pass(&self) -> bool {
        self.pairs.iter().all(PairVerdict::consistent)
    }
}

/// Run [`equivalent`] on every ordered pair of versal points of `ring`.
pub fn universality_scan<R: Ring>(ring: &Arc<R>, prec: usize) -> Result<UniversalityReport> {
    let points = hom_points(ring)?;
    let e = ring.nilpotency_index() as usize;
    let lifts = points.iter().map(|p| versal_family(p, prec + e - 1)).collect::<Result<Vec<_>>>()?;
    let n = points.len();
    let pairs = (0..n * n)
        .into_par_iter()
        .map(|ij| {
            let (i, j) = (ij / n, ij % n);
            let search = Search::new(&lifts[i], &lifts[j], prec)?;
            let mut nodes = 0;
            let conjugator = search.run().map(|(xi, k)| {
                nodes = k;
                xi.to_string()
            });
            Ok(PairVerdict {
                y1: points[i].literal(),
                y2: points[j].literal(),
                same_point: points[i].y() == points[j].y(),
                conjugator,
                nodes,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let diagonal_equivalent = pairs.iter().filter(|p| p.same_point && p.conjugator.is_some()).count();
    let off_diagonal_refuted = pairs.iter().filter(|p| !p.same_point && p.conjugator.is_none()).count();
    Ok(UniversalityReport {
        ring: ring.descriptor().to_string(),
        prec,
        points: n,
        diagonal_equivalent,
        off_diagonal_refuted,
        pairs,
    })
}
