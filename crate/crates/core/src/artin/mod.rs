//! Finite Artinian local rings with residue field of characteristic 5.
//!
//! Two back ends implement [`Ring`]: [`ArtinRing`] stores elements as
//! canonical coordinate vectors over a monomial basis, and
//! [`TabulatedRing`] indexes every element of a small ring and answers
//! arithmetic from precomputed tables. The exhaustive scans run on the
//! latter.

mod coords;
mod descriptor;
mod hnf;
mod table;

pub use coords::{ArtinRing, Coords, RingElement};
pub use descriptor::Descriptor;
pub use table::{TabulatedRing, TABLE_LIMIT};

use std::fmt::Debug;
use std::hash::Hash;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Default cap on the number of elements an exhaustive enumeration may visit.
pub const DEFAULT_ENUMERATION_BOUND: u64 = 1 << 24;

/// Environment variable overriding [`DEFAULT_ENUMERATION_BOUND`].
pub const ENUMERATION_BOUND_ENV: &str = "UNIVDEF_ENUM_BOUND";

pub fn enumeration_bound() -> u64 {
    static BOUND: OnceLock<u64> = OnceLock::new();
    *BOUND.get_or_init(|| {
        std::env::var(ENUMERATION_BOUND_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_ENUMERATION_BOUND)
    })
}

/// Residue-field element, encoded as `a + 5b` for `a + b*i` (`i^2 = 2`
/// in F25). For F5 it is simply the integer representative.
pub type Residue = u8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ResidueField {
    F5,
    F25,
}

impl ResidueField {
    pub fn size(self) -> u8 {
        match self {
            ResidueField::F5 => 5,
            ResidueField::F25 => 25,
        }
    }

    pub fn add(self, a: Residue, b: Residue) -> Residue {
        let (a0, a1) = (a % 5, a / 5);
        let (b0, b1) = (b % 5, b / 5);
        (a0 + b0) % 5 + 5 * ((a1 + b1) % 5)
    }

    pub fn mul(self, a: Residue, b: Residue) -> Residue {
        let (a0, a1) = (a % 5, a / 5);
        let (b0, b1) = (b % 5, b / 5);
        let re = (a0 * b0 + 2 * a1 * b1) % 5;
        let im = (a0 * b1 + a1 * b0) % 5;
        re + 5 * im
    }

    pub fn neg(self, a: Residue) -> Residue {
        let (a0, a1) = (a % 5, a / 5);
        (5 - a0) % 5 + 5 * ((5 - a1) % 5)
    }

    pub fn inv(self, a: Residue) -> Option<Residue> {
        (1..self.size()).find(|&b| self.mul(a, b) == 1)
    }

    /// Both square roots of `a`, smallest encoding first. `None` when `a` is
    /// a non-square; for `a = 0` the single root is repeated.
    pub fn sqrt_roots(self, a: Residue) -> Option<[Residue; 2]> {
        let mut roots = (0..self.size()).filter(|&r| self.mul(r, r) == a);
        let first = roots.next()?;
        let second = roots.next().unwrap_or(first);
        Some([first, second])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnumFilter {
    All,
    MaximalIdeal,
    Units,
}

/// A finite commutative local ring with residue field F5 or F25.
///
/// Elements are plain values; every operation goes through the ring so that
/// canonical reduction stays in one place.
pub trait Ring: Send + Sync {
    type Elem: Clone + PartialEq + Eq + Hash + Debug + Send + Sync;

    fn descriptor(&self) -> &Descriptor;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn residue(&self, a: &Self::Elem) -> Residue;
    fn residue_field(&self) -> ResidueField;
    /// A fixed section of the residue map.
    fn lift_residue(&self, r: Residue) -> Self::Elem;

    /// Least `e` with `m^e = 0`.
    fn nilpotency_index(&self) -> u32;
    /// Order of `1` in the additive group (a power of 5).
    fn additive_order(&self) -> u64;
    /// Canonical literal of an element, e.g. `1+2*e1`.
    fn format_element(&self, a: &Self::Elem) -> String;
    fn parse_element(&self, literal: &str) -> Result<Self::Elem>;
    /// Canonical coordinate vector over the monomial basis.
    fn coordinates(&self, a: &Self::Elem) -> Coords;
    /// Inverse of [`Ring::coordinates`]; rejects non-canonical vectors.
    fn from_coordinates(&self, coords: &[i64]) -> Result<Self::Elem>;

    /// Number of elements, `None` if it does not fit in a `u64`.
    fn cardinality(&self) -> Option<u64>;
    /// The element with the given index in the canonical enumeration order.
    fn element_at(&self, index: u64) -> Self::Elem;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn is_unit(&self, a: &Self::Elem) -> bool {
        self.residue(a) != 0
    }

    fn in_maximal_ideal(&self, a: &Self::Elem) -> bool {
        self.residue(a) == 0
    }

    fn same_ring(&self, other: &Self) -> bool {
        self.descriptor() == other.descriptor()
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.same_ring(other) {
            Ok(())
        } else {
            Err(Error::RingMismatch {
                left: self.descriptor().to_string(),
                right: other.descriptor().to_string(),
            })
        }
    }

    fn pow(&self, a: &Self::Elem, mut n: u64) -> Self::Elem {
        let mut result = self.one();
        let mut base = a.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = self.mul(&result, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        result
    }

    fn mul_int(&self, a: &Self::Elem, n: i64) -> Self::Elem {
        self.mul(a, &self.from_int(n))
    }

    /// Least `k >= 1` with `a^k = 0`; `None` for elements outside `m`.
    fn nilpotency_order(&self, a: &Self::Elem) -> Option<u32> {
        if !self.in_maximal_ideal(a) {
            return None;
        }
        let mut power = a.clone();
        let mut k = 1;
        while !self.is_zero(&power) {
            power = self.mul(&power, a);
            k += 1;
        }
        Some(k)
    }

    /// Inverse of a unit by Newton iteration `r <- r(2 - a r)` from a lift of
    /// the residue inverse.
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem> {
        let field = self.residue_field();
        let r0 = field.inv(self.residue(a)).ok_or(Error::NotUnit)?;
        let mut r = self.lift_residue(r0);
        let two = self.from_int(2);
        let one = self.one();
        for _ in 0..newton_steps(self.nilpotency_index()) + 1 {
            let ar = self.mul(a, &r);
            if ar == one {
                return Ok(r);
            }
            r = self.mul(&r, &self.sub(&two, &ar));
        }
        debug_assert!(false, "Newton inversion failed to converge");
        Err(Error::NotUnit)
    }

    /// Square root of a unit with square residue, with the given residue
    /// `branch` (default: the root with the smallest encoding).
    fn sqrt(&self, a: &Self::Elem, branch: Option<Residue>) -> Result<Self::Elem> {
        let field = self.residue_field();
        let res = self.residue(a);
        if res == 0 {
            return Err(Error::NotUnit);
        }
        let roots = field.sqrt_roots(res).ok_or(Error::NotSquare)?;
        let b = match branch {
            None => roots[0],
            Some(b) if roots.contains(&b) => b,
            Some(b) => return Err(Error::BadBranch { branch: b, residue: res }),
        };
        let half = self.inv(&self.from_int(2))?;
        let mut r = self.lift_residue(b);
        for _ in 0..newton_steps(self.nilpotency_index()) + 1 {
            if self.mul(&r, &r) == *a {
                return Ok(r);
            }
            let q = self.mul(a, &self.inv(&r)?);
            r = self.mul(&half, &self.add(&r, &q));
        }
        debug_assert!(false, "Newton square root failed to converge");
        Err(Error::NotSquare)
    }

    /// The two residue-field roots usable as `sqrt` branches, principal first.
    fn sqrt_branches(&self, a: &Self::Elem) -> Result<[Residue; 2]> {
        let res = self.residue(a);
        if res == 0 {
            return Err(Error::NotUnit);
        }
        self.residue_field().sqrt_roots(res).ok_or(Error::NotSquare)
    }

    fn enumerate(&self, filter: EnumFilter) -> Result<Vec<Self::Elem>> {
        let card = self.checked_cardinality()?;
        Ok((0..card)
            .map(|i| self.element_at(i))
            .filter(|x| match filter {
                EnumFilter::All => true,
                EnumFilter::MaximalIdeal => self.in_maximal_ideal(x),
                EnumFilter::Units => self.is_unit(x),
            })
            .collect())
    }

    fn checked_cardinality(&self) -> Result<u64> {
        let bound = enumeration_bound();
        match self.cardinality() {
            Some(c) if c <= bound => Ok(c),
            other => Err(Error::UnsupportedSize {
                cardinality: other.map_or_else(|| "> 2^64".to_string(), |c| c.to_string()),
                bound,
            }),
        }
    }
}

/// Newton steps needed to push an error in `m` past `m^e`: `ceil(log2 e)`.
pub(crate) fn newton_steps(e: u32) -> u32 {
    let mut steps = 0;
    while (1u64 << steps) < u64::from(e) {
        steps += 1;
    }
    steps
}

/// `1 + y + y^2 + y^3 + y^4`.
pub fn phi5<R: Ring>(ring: &R, y: &R::Elem) -> R::Elem {
    let mut acc = ring.zero();
    for _ in 0..5 {
        acc = ring.add(&ring.mul(&acc, y), &ring.one());
    }
    acc
}
