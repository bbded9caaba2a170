//! Lifts of `σ` to Artinian rings, their equivalence, the family
//! `σ_y(t) = t / sqrt(t^2 + y)` indexed by roots of `Φ₅`, and the scans
//! that check this family is universal.

mod chain;
mod equivalence;
mod tangent;

pub use chain::{catalog, proof_chain_check, proof_chain_for, ChainStep, ProofChainReport, Witness};
pub use equivalence::{equivalent, universality_scan, PairVerdict, UniversalityReport};
pub use tangent::{
    coboundary, cocycle_shift, obstruction_check, tangent_space, CocycleMap, ObstructionReport, TangentClass,
    TangentReport, TangentSlice,
};

use std::sync::Arc;

use serde::Serialize;

use crate::artin::{phi5, EnumFilter, Ring};
use crate::error::{Error, Result};
use crate::nottingham::{base_sigma, sigma_family, Automorphism};
use crate::series::TruncatedSeries;

/// A root `y` of `Φ₅` with `y ≡ 1` modulo the maximal ideal, i.e. a local
/// homomorphism `W[y]/(Φ₅) -> A`.
pub struct VersalPoint<R: Ring> {
    ring: Arc<R>,
    y: R::Elem,
}

impl<R: Ring> Clone for VersalPoint<R> {
    fn clone(&self) -> Self {
        VersalPoint { ring: Arc::clone(&self.ring), y: self.y.clone() }
    }
}

impl<R: Ring> std::fmt::Debug for VersalPoint<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "y = {}", self.ring.format_element(&self.y))
    }
}

impl<R: Ring> VersalPoint<R> {
    pub fn new(ring: Arc<R>, y: R::Elem) -> Result<Self> {
        if ring.residue(&y) != 1 {
            return Err(Error::InvalidInput("versal point must be congruent to 1".into()));
        }
        if !ring.is_zero(&phi5(&*ring, &y)) {
            return Err(Error::InvalidInput("versal point must be a root of Φ₅".into()));
        }
        Ok(VersalPoint { ring, y })
    }

    pub fn ring(&self) -> &Arc<R> {
        &self.ring
    }

    pub fn y(&self) -> &R::Elem {
        &self.y
    }

    pub fn literal(&self) -> String {
        self.ring.format_element(&self.y)
    }
}

/// Every versal point of `ring`, by exhaustive scan of `1 + m`.
pub fn hom_points<R: Ring>(ring: &Arc<R>) -> Result<Vec<VersalPoint<R>>> {
    let one = ring.one();
    Ok(ring
        .enumerate(EnumFilter::MaximalIdeal)?
        .into_iter()
        .map(|x| ring.add(&one, &x))
        .filter(|y| ring.is_zero(&phi5(&**ring, y)))
        .map(|y| VersalPoint { ring: Arc::clone(ring), y })
        .collect())
}

/// An automorphism of `A[[t]]`, known modulo `t^prec`, reducing to `σ` and
/// of order 5.
pub struct Lift<R: Ring> {
    sigma: Automorphism<R>,
}

impl<R: Ring> Clone for Lift<R> {
    fn clone(&self) -> Self {
        Lift { sigma: self.sigma.clone() }
    }
}

impl<R: Ring> std::fmt::Debug for Lift<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Lift({:?})", self.sigma)
    }
}

impl<R: Ring> Lift<R> {
    /// Checks both lift conditions.
    pub fn new(sigma: Automorphism<R>) -> Result<Self> {
        let check = is_lift(&sigma);
        if !check.is_lift() {
            return Err(Error::InvalidInput(format!("not a lift of σ: {check:?}")));
        }
        Ok(Lift { sigma })
    }

    pub fn automorphism(&self) -> &Automorphism<R> {
        &self.sigma
    }

    pub fn prec(&self) -> usize {
        self.sigma.prec()
    }
}

/// Outcome of [`is_lift`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LiftCheck {
    pub reduces_to_sigma: bool,
    pub order_five: bool,
    /// Precision at which `power(·, 5) = t` was tested.
    pub order_prec: usize,
}

impl LiftCheck {
    pub fn is_lift(&self) -> bool {
        self.reduces_to_sigma && self.order_five
    }
}

pub fn is_lift<R: Ring>(candidate: &Automorphism<R>) -> LiftCheck {
    let ring = candidate.ring();
    let prec = candidate.prec();
    let reduces_to_sigma = match base_sigma(Arc::clone(ring), prec) {
        Ok(sigma) => (0..prec).all(|i| {
            ring.residue(candidate.series().coeff(i)) == ring.residue(sigma.series().coeff(i))
        }),
        Err(_) => false,
    };
    let (order_five, order_prec) = match candidate.power(5) {
        Ok(p) => (p.is_identity(), p.prec()),
        Err(_) => (false, 0),
    };
    LiftCheck { reduces_to_sigma, order_five, order_prec }
}

/// `σ_y(t) = t / sqrt(t^2 + y)` with the principal branch.
pub fn versal_family<R: Ring>(p: &VersalPoint<R>, prec: usize) -> Result<Lift<R>> {
    let sigma = sigma_family(Arc::clone(&p.ring), &p.y, None, prec)?;
    // reduction to σ holds by construction; order 5 is the closed-form iterate at k = 5
    debug_assert!(is_lift(&sigma).is_lift());
    Ok(Lift { sigma })
}

/// `σ_y^k(t) = t / sqrt(S_k(y) t^2 + y^k)` with `S_k = 1 + y + ... + y^(k-1)`.
pub fn iterate_closed_form<R: Ring>(p: &VersalPoint<R>, k: u64, prec: usize) -> Result<Automorphism<R>> {
    let ring = &p.ring;
    if prec < 2 {
        return Err(Error::PrecisionUnderflow(prec as i64));
    }
    let mut s_k = ring.zero();
    let mut y_k = ring.one();
    for _ in 0..k {
        s_k = ring.add(&s_k, &y_k);
        y_k = ring.mul(&y_k, &p.y);
    }
    let inner = TruncatedSeries::monomial(Arc::clone(ring), s_k, 2, prec - 1)
        .add(&TruncatedSeries::constant(Arc::clone(ring), y_k, prec - 1))?;
    Automorphism::new(inner.sqrt(None)?.inverse()?.shift_up(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::artin::ArtinRing;

    fn ring(s: &str) -> Arc<ArtinRing> {
        Arc::new(ArtinRing::parse(s).unwrap())
    }

    #[test]
    fn hom_point_examples() {
        assert_eq!(hom_points(&ring("F5")).unwrap().len(), 1);
        let eps = ring("F5[e]/(e^2)");
        let pts = hom_points(&eps).unwrap();
        let lits: Vec<String> = pts.iter().map(|p| p.literal()).collect();
        assert_eq!(lits, ["1", "1+e", "1+2*e", "1+3*e", "1+4*e"]);
        assert!(hom_points(&ring("Z/5^2")).unwrap().is_empty());
    }

    #[test]
    fn versal_family_at_one_is_sigma() {
        let f5 = ring("F5");
        let p = VersalPoint::new(f5.clone(), f5.one()).unwrap();
        let lift = versal_family(&p, 12).unwrap();
        assert_eq!(*lift.automorphism(), base_sigma(f5, 12).unwrap());
    }

    #[test]
    fn lift_checks() {
        let eps = ring("F5[e]/(e^2)");
        for p in hom_points(&eps).unwrap() {
            assert!(is_lift(versal_family(&p, 10).unwrap().automorphism()).is_lift());
        }
        let t = Automorphism::identity(eps.clone(), 8);
        let check = is_lift(&t);
        assert!(!check.reduces_to_sigma && check.order_five);
        assert!(VersalPoint::new(eps.clone(), eps.from_int(2)).is_err());
    }

    #[test]
    fn closed_form_iterates() {
        let c3 = ring("cyclo(3)");
        let y = c3.parse_element("1+u").unwrap();
        let p = VersalPoint::new(c3.clone(), y).unwrap();
        let sigma = versal_family(&p, 12).unwrap();
        for k in 0..=5 {
            let closed = iterate_closed_form(&p, k, 12).unwrap();
            assert_eq!(sigma.automorphism().power(k).unwrap(), closed, "k = {k}");
        }
        assert!(iterate_closed_form(&p, 5, 12).unwrap().is_identity());
    }
}
