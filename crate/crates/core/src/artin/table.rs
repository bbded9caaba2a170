use std::sync::Arc;

use super::coords::{ArtinRing, Coords};
use super::descriptor::Descriptor;
use super::{Residue, ResidueField, Ring};
use crate::error::{Error, Result};

/// Largest ring that is tabulated (the tables are `n^2` entries each).
pub const TABLE_LIMIT: u64 = 3125;

/// A small ring with every element indexed and addition/multiplication
/// answered from full Cayley tables.
///
/// Element `k` is the `k`-th element of the canonical enumeration of the
/// underlying [`ArtinRing`].
#[derive(Debug, Clone)]
pub struct TabulatedRing {
    base: Arc<ArtinRing>,
    n: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    residue: Vec<Residue>,
    lifts: Vec<u16>,
    one: u16,
}

impl TabulatedRing {
    pub fn new(base: Arc<ArtinRing>) -> Result<Self> {
        let n = match base.cardinality() {
            Some(c) if c <= TABLE_LIMIT => c as usize,
            other => {
                return Err(Error::UnsupportedSize {
                    cardinality: other.map_or_else(|| "> 2^64".into(), |c| c.to_string()),
                    bound: TABLE_LIMIT,
                })
            }
        };
        let elems: Vec<Coords> = (0..n as u64).map(|i| base.element_at(i)).collect();
        let index = |c: &Coords| encode(base.moduli(), c);
        let mut add = vec![0u16; n * n];
        let mut mul = vec![0u16; n * n];
        for i in 0..n {
            for j in i..n {
                let s = index(&base.add(&elems[i], &elems[j]));
                let p = index(&base.mul(&elems[i], &elems[j]));
                add[i * n + j] = s;
                add[j * n + i] = s;
                mul[i * n + j] = p;
                mul[j * n + i] = p;
            }
        }
        let neg = elems.iter().map(|x| index(&base.neg(x))).collect();
        let residue = elems.iter().map(|x| base.residue(x)).collect();
        let lifts = (0..base.residue_field().size()).map(|r| index(&base.lift_residue(r))).collect();
        let one = index(&base.one());
        Ok(TabulatedRing { base, n, add, mul, neg, residue, lifts, one })
    }

    pub fn parse(desc: &str) -> Result<Self> {
        TabulatedRing::new(Arc::new(ArtinRing::parse(desc)?))
    }

    pub fn base(&self) -> &Arc<ArtinRing> {
        &self.base
    }

    pub fn coords(&self, a: u16) -> Coords {
        self.base.element_at(u64::from(a))
    }

    pub fn index_of(&self, c: &Coords) -> u16 {
        encode(self.base.moduli(), c)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }
}

fn encode(moduli: &[i64], c: &Coords) -> u16 {
    let mut idx: u64 = 0;
    for (&x, &m) in c.iter().zip(moduli).rev() {
        idx = idx * m as u64 + x as u64;
    }
    idx as u16
}

impl Ring for TabulatedRing {
    type Elem = u16;

    fn descriptor(&self) -> &Descriptor {
        self.base.descriptor()
    }

    fn zero(&self) -> u16 {
        0
    }

    fn one(&self) -> u16 {
        self.one
    }

    fn from_int(&self, n: i64) -> u16 {
        self.index_of(&self.base.from_int(n))
    }

    #[inline]
    fn add(&self, a: &u16, b: &u16) -> u16 {
        self.add[*a as usize * self.n + *b as usize]
    }

    #[inline]
    fn sub(&self, a: &u16, b: &u16) -> u16 {
        self.add[*a as usize * self.n + self.neg[*b as usize] as usize]
    }

    #[inline]
    fn neg(&self, a: &u16) -> u16 {
        self.neg[*a as usize]
    }

    #[inline]
    fn mul(&self, a: &u16, b: &u16) -> u16 {
        self.mul[*a as usize * self.n + *b as usize]
    }

    fn residue(&self, a: &u16) -> Residue {
        self.residue[*a as usize]
    }

    fn residue_field(&self) -> ResidueField {
        self.base.residue_field()
    }

    fn lift_residue(&self, r: Residue) -> u16 {
        self.lifts[r as usize]
    }

    fn format_element(&self, a: &u16) -> String {
        self.base.format_element(&self.coords(*a))
    }

    fn parse_element(&self, literal: &str) -> Result<u16> {
        Ok(self.index_of(&self.base.parse_element(literal)?))
    }

    fn coordinates(&self, a: &u16) -> Coords {
        self.coords(*a)
    }

    fn from_coordinates(&self, coords: &[i64]) -> Result<u16> {
        Ok(self.index_of(&self.base.coords_from_canonical(coords)?))
    }

    fn nilpotency_index(&self) -> u32 {
        self.base.nilpotency_index()
    }

    fn additive_order(&self) -> u64 {
        self.base.additive_order()
    }

    fn cardinality(&self) -> Option<u64> {
        Some(self.n as u64)
    }

    fn element_at(&self, index: u64) -> u16 {
        index as u16
    }

    fn is_zero(&self, a: &u16) -> bool {
        *a == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_agree_with_coordinates() {
        let t = TabulatedRing::parse("cyclo(3)").unwrap();
        let base = t.base().clone();
        for a in 0..t.len() as u16 {
            for b in [0u16, 1, 7, 42, 124] {
                let (ca, cb) = (t.coords(a), t.coords(b));
                assert_eq!(t.coords(t.mul(&a, &b)), base.mul(&ca, &cb));
                assert_eq!(t.coords(t.sub(&a, &b)), base.sub(&ca, &cb));
            }
        }
        assert_eq!(t.index_of(&base.one()), t.one());
    }

    #[test]
    fn too_large_to_tabulate() {
        assert!(TabulatedRing::parse("Z/5^6").is_err());
    }
}
