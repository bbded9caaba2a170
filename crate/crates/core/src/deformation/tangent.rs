//! First-order deformations of `σ` as linear algebra over F5.
//!
//! A lift to `F5[ε]/ε²` is `σ + ε d` with `d ∈ F5[[t]]`. Its fifth power is
//! `t + ε Z(d)` where `Z` is the linear map obtained by differentiating the
//! five-fold composite, and conjugating by `t + ε c` changes `d` by
//! `B(c) = c∘σ - σ'·c`. The tangent space is `ker Z / im B`.
//!
//! Pulling back along `σ` and subtracting the identity raises the `t`-order
//! by 2 (the conductor), and `Φ₅(x) ≡ (x - 1)⁴` mod 5, so `Z` raises it by
//! [`COCYCLE_SHIFT`] = 8. Hence the cocycle condition on `d mod t^N` is
//! `Z(d) ≡ 0 mod t^(N+8)`, which is well defined on truncations; the naive
//! `mod t^N` condition would admit spurious cocycles.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::hom_points;
use crate::artin::{ArtinRing, Ring, TabulatedRing};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};
use crate::nottingham::{base_sigma, Automorphism};
use crate::series::TruncatedSeries;

/// Minimal `t`-order increase of the cocycle map.
pub const COCYCLE_SHIFT: usize = 8;

/// Largest truncation accepted by [`tangent_space`].
pub const MAX_TANGENT_PREC: usize = 64;

type F5Series = TruncatedSeries<TabulatedRing>;

fn f5() -> Arc<TabulatedRing> {
    Arc::new(TabulatedRing::parse("F5").expect("F5 is in the catalog"))
}

fn to_series(ring: &Arc<TabulatedRing>, v: &[u8], prec: usize) -> F5Series {
    let mut coeffs: Vec<u16> = v.iter().take(prec).map(|&x| ring.from_int(i64::from(x))).collect();
    coeffs.resize(prec, 0);
    TruncatedSeries::new(Arc::clone(ring), coeffs)
}

fn to_vec(s: &F5Series) -> Vec<u8> {
    s.coeffs().iter().map(|c| s.ring().coordinates(c)[0] as u8).collect()
}

/// The linearized order-5 condition `d ↦ Z(d)`, modulo `t^prec`.
pub struct CocycleMap {
    ring: Arc<TabulatedRing>,
    prec: usize,
    /// `σ^0, ..., σ^4`
    iterates: Vec<F5Series>,
    /// `σ' ∘ σ^k` for `k = 0..4`
    slopes: Vec<F5Series>,
}

impl CocycleMap {
    pub fn new(prec: usize) -> Result<Self> {
        let ring = f5();
        let sigma = base_sigma(Arc::clone(&ring), prec + 1)?;
        let slope = sigma.series().derivative()?;
        let sigma = sigma.truncate(prec);
        let mut iterates = vec![Automorphism::identity(Arc::clone(&ring), prec)];
        for k in 1..5 {
            let next = sigma.compose(&iterates[k - 1])?;
            iterates.push(next);
        }
        let slopes = iterates.iter().map(|it| slope.compose(it.series())).collect::<Result<Vec<_>>>()?;
        let iterates = iterates.into_iter().map(Automorphism::into_series).collect();
        Ok(CocycleMap { ring, prec, iterates, slopes })
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    /// `Z(d) mod t^prec` by the chain rule
    /// `∂F_k = d∘σ^(k-1) + (σ'∘σ^(k-1))·∂F_(k-1)` for `F_k = σ̃^k`.
    pub fn apply(&self, d: &[u8]) -> Vec<u8> {
        let d = to_series(&self.ring, d, self.prec);
        let mut acc = TruncatedSeries::zero(Arc::clone(&self.ring), self.prec);
        for k in 0..5 {
            let term = d.compose(&self.iterates[k]).expect("σ^k(0) = 0");
            acc = term.add(&self.slopes[k].mul(&acc).expect("same ring")).expect("same ring");
        }
        to_vec(&acc)
    }

    /// Matrix of `Z` restricted to `d mod t^unknowns`.
    pub fn matrix(&self, unknowns: usize) -> Matrix {
        let columns: Vec<Vec<u8>> = (0..unknowns).map(|i| self.apply(&unit(i, unknowns))).collect();
        Matrix::from_columns(self.prec, &columns)
    }
}

fn unit(i: usize, len: usize) -> Vec<u8> {
    let mut v = vec![0; len];
    v[i] = 1;
    v
}

/// `B(c) = c∘σ - σ'·c` modulo `t^prec`.
pub fn coboundary(c: &[u8], prec: usize) -> Result<Vec<u8>> {
    let ring = f5();
    let sigma = base_sigma(Arc::clone(&ring), prec + 1)?;
    let slope = sigma.series().derivative()?;
    let c = to_series(&ring, c, prec);
    let pulled = c.compose(&sigma.series().truncate(prec))?;
    Ok(to_vec(&pulled.sub(&slope.mul(&c)?)?))
}

/// Least `ord_t Z(t^i) - i` over `i < columns`, computed modulo
/// `t^(columns + extra)`; returns `None` if every column vanishes there.
pub fn cocycle_shift(columns: usize, extra: usize) -> Result<Option<usize>> {
    let z = CocycleMap::new(columns + extra)?;
    Ok((0..columns)
        .filter_map(|i| z.apply(&unit(i, columns)).iter().position(|&x| x != 0).map(|o| o - i))
        .min())
}

/// A coset of `im B` in the cocycle space, stored as its canonical
/// representative (zero on every pivot of the row-reduced coboundaries).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct TangentClass {
    pub coefficients: Vec<u8>,
}

impl fmt::Display for TangentClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coefficients
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match i {
                0 => c.to_string(),
                1 => format!("{c}*t"),
                _ => format!("{c}*t^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TangentSlice {
    pub prec: usize,
    pub cocycle_dim: usize,
    pub coboundary_dim: usize,
    pub dimension: usize,
    pub class_count: u64,
    /// Every `Z(t^i)` vanished below degree `i + 8`.
    pub shift_verified: bool,
    /// Classes of the `ε`-derivatives of `σ_(1+cε)`, `c = 0..4`.
    pub hom_point_classes: Vec<TangentClass>,
    pub images_distinct: bool,
    pub images_exhaust: bool,
    /// Representatives spanning the quotient.
    pub basis: Vec<TangentClass>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TangentReport {
    pub slices: Vec<TangentSlice>,
    pub stable: bool,
    pub dimension: Option<usize>,
}

impl TangentReport {
    pub fn pass(&self) -> bool {
        self.stable
            && self.dimension == Some(1)
            && self.slices.iter().all(|s| s.shift_verified && s.images_distinct && s.images_exhaust)
    }
}

/// `dim ker Z / im B` over `F5[ε]/ε²` for each truncation in `sweep`.
pub fn tangent_space(sweep: &[usize]) -> Result<TangentReport> {
    if sweep.is_empty() {
        return Err(Error::InvalidInput("empty precision sweep".into()));
    }
    let slices = sweep.iter().map(|&n| tangent_slice(n)).collect::<Result<Vec<_>>>()?;
    let stable = slices.windows(2).all(|w| w[0].dimension == w[1].dimension);
    let dimension = stable.then(|| slices[0].dimension);
    Ok(TangentReport { slices, stable, dimension })
}

fn tangent_slice(n: usize) -> Result<TangentSlice> {
    if !(2..=MAX_TANGENT_PREC).contains(&n) {
        return Err(Error::InvalidInput(format!("tangent precision must lie in 2..={MAX_TANGENT_PREC}")));
    }
    let z = CocycleMap::new(n + COCYCLE_SHIFT)?;
    let zm = z.matrix(n);
    let shift_verified = (0..n).all(|i| (0..(i + COCYCLE_SHIFT).min(zm.rows())).all(|r| zm.get(r, i) == 0));
    let cocycles = Subspace::span(n, &zm.kernel());
    let boundaries: Vec<Vec<u8>> = (0..n).map(|i| coboundary(&unit(i, n), n)).collect::<Result<_>>()?;
    let boundaries = Subspace::span(n, &boundaries);
    // coboundaries of truncations are cocycles; see the module docs
    let inside = boundaries.basis().iter().all(|b| cocycles.contains(b));
    if !inside {
        return Err(Error::InvalidInput(format!("coboundaries escape the cocycle space at precision {n}")));
    }
    let dimension = cocycles.dim() - boundaries.dim();

    let mut basis = Vec::new();
    let mut grown = boundaries.clone();
    for v in cocycles.basis() {
        if !grown.contains(v) {
            basis.push(TangentClass { coefficients: boundaries.reduce(v) });
            let mut span = grown.basis().to_vec();
            span.push(v.clone());
            grown = Subspace::span(n, &span);
        }
    }

    let hom_point_classes = hom_point_directions(n)?
        .into_iter()
        .map(|d| {
            if cocycles.contains(&d) {
                Ok(TangentClass { coefficients: boundaries.reduce(&d) })
            } else {
                Err(Error::InvalidInput("a versal direction is not a cocycle".into()))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let mut distinct = hom_point_classes.clone();
    distinct.sort_by(|a, b| a.coefficients.cmp(&b.coefficients));
    distinct.dedup();
    let class_count = 5u64.pow(dimension as u32);
    Ok(TangentSlice {
        prec: n,
        cocycle_dim: cocycles.dim(),
        coboundary_dim: boundaries.dim(),
        dimension,
        class_count,
        shift_verified,
        images_distinct: distinct.len() == hom_point_classes.len(),
        images_exhaust: distinct.len() as u64 == class_count,
        hom_point_classes,
        basis,
    })
}

/// `ε`-coefficients of `σ_y` for every versal point `y` of `F5[ε]/ε²`.
fn hom_point_directions(n: usize) -> Result<Vec<Vec<u8>>> {
    let eps = Arc::new(ArtinRing::parse("F5[e]/(e^2)")?);
    hom_points(&eps)?
        .iter()
        .map(|p| {
            let lift = super::versal_family(p, n)?;
            Ok(lift.automorphism().series().coeffs().iter().map(|c| eps.coordinates(c)[1] as u8).collect())
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ObstructionReport {
    pub ring: String,
    pub prec: usize,
    pub hom_points: usize,
    /// `(σ_W^5 - t)/5` over F5, for `Z/25` only.
    pub inhomogeneity: Option<String>,
    /// Whether `Z(d) = -(σ_W^5 - t)/5` has a solution `d mod t^prec`.
    pub system_consistent: Option<bool>,
}

impl ObstructionReport {
    pub fn pass(&self) -> bool {
        self.hom_points == 0 && self.system_consistent != Some(true)
    }
}

/// No versal points in `Z/5^n`; for `n = 2`, the order-5 condition on
/// `σ_W + 5d` is an inconsistent linear system in `d mod t^prec`.
pub fn obstruction_check(n: u32, prec: usize) -> Result<ObstructionReport> {
    if n < 2 {
        return Err(Error::InvalidInput("the obstruction needs Z/5^n with n >= 2".into()));
    }
    let ring = Arc::new(ArtinRing::parse(&format!("Z/5^{n}"))?);
    let points = hom_points(&ring)?.len();
    let mut report = ObstructionReport {
        ring: ring.descriptor().to_string(),
        prec,
        hom_points: points,
        inhomogeneity: None,
        system_consistent: None,
    };
    if n == 2 {
        if !(2..=MAX_TANGENT_PREC).contains(&prec) {
            return Err(Error::InvalidInput(format!("precision must lie in 2..={MAX_TANGENT_PREC}")));
        }
        let v = inhomogeneity(&ring, prec)?;
        let zm = CocycleMap::new(prec)?.matrix(prec);
        let rhs: Vec<u8> = v.iter().map(|&x| (5 - x) % 5).collect();
        report.inhomogeneity = Some(TangentClass { coefficients: v }.to_string());
        report.system_consistent = Some(zm.solve(&rhs).is_some());
    }
    Ok(report)
}

/// `(σ_W^5 - t)/5` with `σ_W = t/sqrt(t^2 + 1)` over `Z/25`.
fn inhomogeneity(ring: &Arc<ArtinRing>, prec: usize) -> Result<Vec<u8>> {
    let w = base_sigma(Arc::clone(ring), prec)?.power(5)?;
    let diff = w.series().sub(&TruncatedSeries::t(Arc::clone(ring), prec))?;
    diff.coeffs()
        .iter()
        .map(|c| {
            let x = ring.coordinates(c)[0];
            if x % 5 != 0 {
                return Err(Error::InvalidInput("σ_W does not reduce to an order-5 map".into()));
            }
            Ok((x / 5) as u8)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::artin::ArtinRing;
    use rand::{Rng as _, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn shift_is_eight() {
        assert_eq!(cocycle_shift(20, 16).unwrap(), Some(COCYCLE_SHIFT));
    }

    #[test]
    fn linearization_matches_composition() {
        let eps = Arc::new(ArtinRing::parse("F5[e]/(e^2)").unwrap());
        let prec = 14;
        let z = CocycleMap::new(prec).unwrap();
        let sigma = base_sigma(eps.clone(), prec).unwrap();
        let e = eps.parse_element("e").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..8 {
            let d: Vec<u8> = (0..prec).map(|_| rng.gen_range(0..5)).collect();
            let pert = TruncatedSeries::new(
                eps.clone(),
                d.iter().map(|&x| eps.mul(&e, &eps.from_int(i64::from(x)))).collect(),
            );
            let lift = Automorphism::new(sigma.series().add(&pert).unwrap()).unwrap();
            let fifth = lift.power(5).unwrap();
            let direct: Vec<u8> = fifth.series().coeffs().iter().map(|c| eps.coordinates(c)[1] as u8).collect();
            assert_eq!(direct[..fifth.prec()], z.apply(&d)[..fifth.prec()]);
        }
    }

    #[test]
    fn coboundary_of_zero() {
        assert_eq!(coboundary(&[0; 6], 6).unwrap(), vec![0; 6]);
    }

    #[test]
    fn tangent_dimension_is_one() {
        let r = tangent_space(&[8, 12]).unwrap();
        assert!(r.pass(), "{r:?}");
        assert_eq!(r.slices[0].class_count, 5);
    }

    #[test]
    fn obstruction_over_z25() {
        let r = obstruction_check(2, 8).unwrap();
        assert_eq!(r.hom_points, 0);
        // t(1 + 5t^2)^(-1/2) = t - (5/2)t^3 mod 25
        assert_eq!(r.inhomogeneity.as_deref(), Some("2*t^3"));
        assert_eq!(r.system_consistent, Some(false));
        assert!(r.pass());
    }
}
