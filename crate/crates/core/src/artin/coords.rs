use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

use super::descriptor::Descriptor;
use super::hnf::hermite_normal_form;
use super::{Residue, ResidueField, Ring};
use crate::error::{Error, Result};
use crate::expr::{self, Algebra};

/// Canonical coordinates over the monomial basis.
pub type Coords = SmallVec<[i64; 8]>;

const MAX_DIM: usize = 256;

/// A catalog ring presented as `Z^d / L` with a multiplication table.
///
/// `L` is kept in upper-triangular Hermite normal form; a coordinate vector
/// is canonical when each coordinate lies in `[0, pivot)`.
#[derive(Debug, Clone)]
pub struct ArtinRing {
    desc: Descriptor,
    dim: usize,
    lattice: Vec<Vec<i64>>,
    moduli: Vec<i64>,
    order: i64,
    // mult[i][j] = sparse coordinates of b_i * b_j
    mult: Vec<Vec<Vec<(usize, i64)>>>,
    labels: Vec<String>,
    generators: Vec<(String, Coords)>,
    field: ResidueField,
    nilpotency: u32,
    cardinality: Option<u64>,
    imaginary: Option<Coords>,
}

/// Presentation before canonical reduction.
struct Raw {
    dim: usize,
    relations: Vec<Vec<i128>>,
    mult: Vec<Vec<Vec<i128>>>,
    labels: Vec<String>,
    generators: Vec<(String, Vec<i128>)>,
    field: ResidueField,
    nilpotency: u32,
}

fn unit_vector(dim: usize, k: usize) -> Vec<i128> {
    let mut v = vec![0; dim];
    v[k] = 1;
    v
}

/// `u^k` in `Z[u]/(Phi5(1+u))` on the basis `1, u, u^2, u^3`.
fn cyclo_power(k: usize) -> Vec<i128> {
    // u^4 = -5 - 10u - 10u^2 - 5u^3
    const U4: [i128; 4] = [-5, -10, -10, -5];
    let mut v = vec![1i128, 0, 0, 0];
    for _ in 0..k {
        let top = v[3];
        v = vec![0, v[0], v[1], v[2]];
        for (j, c) in U4.iter().enumerate() {
            v[j] += top * c;
        }
    }
    v
}

fn raw(desc: &Descriptor) -> Result<Raw> {
    Ok(match desc {
        Descriptor::F5 => Raw {
            dim: 1,
            relations: vec![vec![5]],
            mult: vec![vec![vec![1]]],
            labels: vec!["1".into()],
            generators: vec![],
            field: ResidueField::F5,
            nilpotency: 1,
        },
        Descriptor::F25 => Raw {
            dim: 2,
            relations: vec![vec![5, 0], vec![0, 5]],
            // i^2 = 2, a non-square mod 5
            mult: vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![2, 0]]],
            labels: vec!["1".into(), "i".into()],
            generators: vec![("i".into(), vec![0, 1])],
            field: ResidueField::F25,
            nilpotency: 1,
        },
        Descriptor::WittF5(n) => Raw {
            dim: 1,
            relations: vec![vec![5i128.pow(*n)]],
            mult: vec![vec![vec![1]]],
            labels: vec!["1".into()],
            generators: vec![],
            field: ResidueField::F5,
            nilpotency: *n,
        },
        Descriptor::Cyclo(m) => {
            let m = *m as usize;
            Raw {
                dim: 4,
                relations: (0..4).map(|j| cyclo_power(m + j)).collect(),
                mult: (0..4).map(|a| (0..4).map(|b| cyclo_power(a + b)).collect()).collect(),
                labels: vec!["1".into(), "u".into(), "u^2".into(), "u^3".into()],
                generators: vec![("u".into(), vec![0, 1, 0, 0])],
                field: ResidueField::F5,
                nilpotency: m as u32,
            }
        }
        Descriptor::Nilpotent { base, var, exponent } => {
            let b = raw(base)?;
            let m = *exponent as usize;
            let dim = b.dim * m;
            if dim > MAX_DIM {
                return Err(Error::InvalidInput(format!("ring dimension {dim} exceeds {MAX_DIM}")));
            }
            let embed = |block: usize, v: &[i128]| {
                let mut out = vec![0i128; dim];
                out[block * b.dim..(block + 1) * b.dim].copy_from_slice(v);
                out
            };
            let relations = (0..m).flat_map(|j| b.relations.iter().map(move |r| (j, r))).map(|(j, r)| embed(j, r)).collect();
            let mut mult = vec![vec![vec![0i128; dim]; dim]; dim];
            for (j, row) in mult.iter_mut().enumerate() {
                for (l, cell) in row.iter_mut().enumerate() {
                    let (bj, ij) = (j / b.dim, j % b.dim);
                    let (bl, il) = (l / b.dim, l % b.dim);
                    if bj + bl < m {
                        *cell = embed(bj + bl, &b.mult[ij][il]);
                    }
                }
            }
            let mut labels = Vec::with_capacity(dim);
            for j in 0..m {
                let power = match j {
                    0 => String::new(),
                    1 => var.clone(),
                    _ => format!("{var}^{j}"),
                };
                for l in &b.labels {
                    labels.push(match (l.as_str(), power.is_empty()) {
                        (_, true) => l.clone(),
                        ("1", false) => power.clone(),
                        (_, false) => format!("{l}*{power}"),
                    });
                }
            }
            let mut generators: Vec<(String, Vec<i128>)> =
                b.generators.iter().map(|(n, v)| (n.clone(), embed(0, v))).collect();
            generators.push((var.clone(), unit_vector(dim, b.dim)));
            Raw {
                dim,
                relations,
                mult,
                labels,
                generators,
                field: b.field,
                nilpotency: b.nilpotency + *exponent - 1,
            }
        }
    })
}

impl ArtinRing {
    pub fn new(desc: Descriptor) -> Result<Self> {
        let raw = raw(&desc)?;
        let dim = raw.dim;
        let lattice128 = hermite_normal_form(raw.relations, dim)
            .ok_or_else(|| Error::InvalidInput(format!("{desc} is not a finite ring")))?;
        let moduli128: Vec<i128> = (0..dim).map(|j| lattice128[j][j]).collect();
        let mut ring = ArtinRing {
            desc,
            dim,
            lattice: Vec::new(),
            moduli: Vec::new(),
            order: 0,
            mult: Vec::new(),
            labels: raw.labels,
            generators: Vec::new(),
            field: raw.field,
            nilpotency: raw.nilpotency,
            cardinality: None,
            imaginary: None,
        };
        // additive order of 1: smallest power of 5 killing it
        let mut order: i128 = 1;
        loop {
            let mut v = vec![0i128; dim];
            v[0] = order;
            if reduce_with(&lattice128, &mut v, None).iter().all(|&x| x == 0) {
                break;
            }
            order *= 5;
            if order > i128::from(i64::MAX) / 5 {
                return Err(Error::InvalidInput("additive order too large".into()));
            }
        }
        ring.order = order as i64;
        ring.lattice = lattice128
            .iter()
            .map(|r| r.iter().map(|&x| x as i64).collect())
            .collect();
        ring.moduli = moduli128.iter().map(|&m| m as i64).collect();
        ring.cardinality = ring.moduli.iter().try_fold(1u64, |acc, &m| acc.checked_mul(m as u64));
        ring.mult = raw
            .mult
            .iter()
            .map(|row| {
                row.iter()
                    .map(|cell| {
                        let c = ring.reduce_i128(cell.clone());
                        c.iter().enumerate().filter(|(_, &x)| x != 0).map(|(k, &x)| (k, x)).collect()
                    })
                    .collect()
            })
            .collect();
        ring.generators = raw.generators.into_iter().map(|(n, v)| (n, ring.reduce_i128(v))).collect();
        if ring.field == ResidueField::F25 {
            ring.imaginary = ring.generator("i").cloned();
        }
        Ok(ring)
    }

    pub fn parse(desc: &str) -> Result<Self> {
        ArtinRing::new(Descriptor::parse(desc)?)
    }

    /// The residue field itself as a catalog ring.
    pub fn residue_ring(field: ResidueField) -> Self {
        let d = match field {
            ResidueField::F5 => Descriptor::F5,
            ResidueField::F25 => Descriptor::F25,
        };
        ArtinRing::new(d).expect("residue fields are always constructible")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Labels of the basis monomials, in coordinate order.
    pub fn basis_labels(&self) -> &[String] {
        &self.labels
    }

    /// Pivot of the relation lattice at each coordinate.
    pub fn moduli(&self) -> &[i64] {
        &self.moduli
    }

    pub fn generator(&self, name: &str) -> Option<&Coords> {
        self.generators.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    pub fn generator_names(&self) -> Vec<&str> {
        self.generators.iter().map(|(n, _)| n.as_str()).collect()
    }

    fn reduce_i128(&self, mut v: Vec<i128>) -> Coords {
        let order = i128::from(self.order);
        let lattice: Vec<Vec<i128>> =
            self.lattice.iter().map(|r| r.iter().map(|&x| i128::from(x)).collect()).collect();
        reduce_with(&lattice, &mut v, Some(order)).into_iter().map(|x| x as i64).collect()
    }

    /// Reduce an integer vector (coordinates already in `[0, order)`).
    fn reduce_in_place(&self, v: &mut [i128]) -> Coords {
        let order = i128::from(self.order);
        for j in 0..self.dim {
            let pivot = i128::from(self.moduli[j]);
            let q = v[j].div_euclid(pivot);
            if q != 0 {
                let row = &self.lattice[j];
                for k in j..self.dim {
                    v[k] = (v[k] - q * i128::from(row[k])).rem_euclid(order);
                }
            }
        }
        v.iter().map(|&x| x as i64).collect()
    }

    pub fn parse_element(&self, literal: &str) -> Result<Coords> {
        expr::parse(literal)?.eval(&ElementAlgebra(self))
    }

    /// Canonical literal, e.g. `1+2*e1`; coordinates with modulus 1 never
    /// appear.
    pub fn format_element(&self, a: &Coords) -> String {
        let mut terms = Vec::new();
        for (k, &c) in a.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let label = &self.labels[k];
            terms.push(match (label.as_str(), c) {
                ("1", _) => c.to_string(),
                (_, 1) => label.clone(),
                _ => format!("{c}*{label}"),
            });
        }
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join("+")
        }
    }

    /// Decode coordinates given as raw integers, rejecting non-canonical input.
    pub fn coords_from_canonical(&self, raw: &[i64]) -> Result<Coords> {
        if raw.len() != self.dim {
            return Err(Error::InvalidInput(format!("expected {} coordinates, got {}", self.dim, raw.len())));
        }
        for (k, (&x, &m)) in raw.iter().zip(&self.moduli).enumerate() {
            if !(0..m).contains(&x) {
                return Err(Error::InvalidInput(format!("coordinate {k} = {x} outside [0, {m})")));
            }
        }
        Ok(raw.iter().copied().collect())
    }

    pub fn element(self: &Arc<Self>, literal: &str) -> Result<RingElement> {
        Ok(RingElement { ring: Arc::clone(self), coords: self.parse_element(literal)? })
    }
}

fn reduce_with(lattice: &[Vec<i128>], v: &mut [i128], order: Option<i128>) -> Vec<i128> {
    let dim = v.len();
    if let Some(n) = order {
        v.iter_mut().for_each(|x| *x = x.rem_euclid(n));
    }
    for j in 0..dim {
        let pivot = lattice[j][j];
        let q = v[j].div_euclid(pivot);
        if q != 0 {
            for k in j..dim {
                v[k] -= q * lattice[j][k];
                if let Some(n) = order {
                    v[k] = v[k].rem_euclid(n);
                }
            }
        }
    }
    v.to_vec()
}

impl Ring for ArtinRing {
    type Elem = Coords;

    fn descriptor(&self) -> &Descriptor {
        &self.desc
    }

    fn zero(&self) -> Coords {
        SmallVec::from_elem(0, self.dim)
    }

    fn one(&self) -> Coords {
        self.from_int(1)
    }

    fn from_int(&self, n: i64) -> Coords {
        let mut v = vec![0i128; self.dim];
        v[0] = i128::from(n).rem_euclid(i128::from(self.order));
        self.reduce_in_place(&mut v)
    }

    fn add(&self, a: &Coords, b: &Coords) -> Coords {
        let order = i128::from(self.order);
        let mut v: Vec<i128> = a.iter().zip(b).map(|(&x, &y)| (i128::from(x) + i128::from(y)) % order).collect();
        self.reduce_in_place(&mut v)
    }

    fn sub(&self, a: &Coords, b: &Coords) -> Coords {
        let order = i128::from(self.order);
        let mut v: Vec<i128> =
            a.iter().zip(b).map(|(&x, &y)| (i128::from(x) - i128::from(y)).rem_euclid(order)).collect();
        self.reduce_in_place(&mut v)
    }

    fn neg(&self, a: &Coords) -> Coords {
        let order = i128::from(self.order);
        let mut v: Vec<i128> = a.iter().map(|&x| (-i128::from(x)).rem_euclid(order)).collect();
        self.reduce_in_place(&mut v)
    }

    fn mul(&self, a: &Coords, b: &Coords) -> Coords {
        let order = i128::from(self.order);
        let small = order < (1 << 28);
        let mut acc = vec![0i128; self.dim];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let xy = i128::from(x) * i128::from(y) % order;
                for &(k, c) in &self.mult[i][j] {
                    if small {
                        acc[k] += xy * i128::from(c);
                    } else {
                        acc[k] = (acc[k] + xy * i128::from(c)) % order;
                    }
                }
            }
        }
        acc.iter_mut().for_each(|x| *x = x.rem_euclid(order));
        self.reduce_in_place(&mut acc)
    }

    fn residue(&self, a: &Coords) -> Residue {
        match self.field {
            ResidueField::F5 => a[0].rem_euclid(5) as Residue,
            ResidueField::F25 => (a[0].rem_euclid(5) + 5 * a[1].rem_euclid(5)) as Residue,
        }
    }

    fn residue_field(&self) -> ResidueField {
        self.field
    }

    fn lift_residue(&self, r: Residue) -> Coords {
        let re = self.from_int(i64::from(r % 5));
        match &self.imaginary {
            Some(i) if r >= 5 => self.add(&re, &self.mul_int(i, i64::from(r / 5))),
            _ => re,
        }
    }

    fn format_element(&self, a: &Coords) -> String {
        ArtinRing::format_element(self, a)
    }

    fn parse_element(&self, literal: &str) -> Result<Coords> {
        ArtinRing::parse_element(self, literal)
    }

    fn coordinates(&self, a: &Coords) -> Coords {
        a.clone()
    }

    fn from_coordinates(&self, coords: &[i64]) -> Result<Coords> {
        self.coords_from_canonical(coords)
    }

    fn nilpotency_index(&self) -> u32 {
        self.nilpotency
    }

    fn additive_order(&self) -> u64 {
        self.order as u64
    }

    fn cardinality(&self) -> Option<u64> {
        self.cardinality
    }

    fn element_at(&self, mut index: u64) -> Coords {
        self.moduli
            .iter()
            .map(|&m| {
                let c = (index % m as u64) as i64;
                index /= m as u64;
                c
            })
            .collect()
    }
}

struct ElementAlgebra<'a>(&'a ArtinRing);

impl Algebra for ElementAlgebra<'_> {
    type Value = Coords;
    fn int(&self, n: i64) -> Coords {
        self.0.from_int(n)
    }
    fn var(&self, name: &str, offset: usize) -> Result<Coords> {
        self.0
            .generator(name)
            .cloned()
            .ok_or_else(|| Error::parse(offset, format!("unknown generator `{name}` in {}", self.0.desc)))
    }
    fn add(&self, a: &Coords, b: &Coords) -> Coords {
        self.0.add(a, b)
    }
    fn sub(&self, a: &Coords, b: &Coords) -> Coords {
        self.0.sub(a, b)
    }
    fn mul(&self, a: &Coords, b: &Coords) -> Coords {
        self.0.mul(a, b)
    }
    fn neg(&self, a: &Coords) -> Coords {
        self.0.neg(a)
    }
}

/// An element bound to its ring; arithmetic checks that operands agree.
#[derive(Debug, Clone)]
pub struct RingElement {
    ring: Arc<ArtinRing>,
    coords: Coords,
}

impl PartialEq for RingElement {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same_ring(&other.ring) && self.coords == other.coords
    }
}

impl Eq for RingElement {}

impl RingElement {
    pub fn new(ring: Arc<ArtinRing>, coords: Coords) -> Self {
        RingElement { ring, coords }
    }

    pub fn ring(&self) -> &Arc<ArtinRing> {
        &self.ring
    }

    pub fn coords(&self) -> &Coords {
        &self.coords
    }

    fn binary(&self, other: &Self, f: impl Fn(&ArtinRing, &Coords, &Coords) -> Coords) -> Result<Self> {
        self.ring.check_same(&other.ring)?;
        Ok(RingElement { ring: Arc::clone(&self.ring), coords: f(&self.ring, &self.coords, &other.coords) })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.binary(other, |r, a, b| r.add(a, b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.binary(other, |r, a, b| r.sub(a, b))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.binary(other, |r, a, b| r.mul(a, b))
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(RingElement { ring: Arc::clone(&self.ring), coords: self.ring.inv(&self.coords)? })
    }

    pub fn sqrt(&self, branch: Option<Residue>) -> Result<Self> {
        Ok(RingElement { ring: Arc::clone(&self.ring), coords: self.ring.sqrt(&self.coords, branch)? })
    }

    pub fn is_unit(&self) -> bool {
        self.ring.is_unit(&self.coords)
    }

    pub fn residue(&self) -> Residue {
        self.ring.residue(&self.coords)
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.ring.format_element(&self.coords))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::artin::EnumFilter;

    fn ring(s: &str) -> Arc<ArtinRing> {
        Arc::new(ArtinRing::parse(s).unwrap())
    }

    #[test]
    fn build_examples() {
        let f5 = ring("F5");
        assert_eq!((f5.nilpotency_index(), f5.cardinality()), (1, Some(5)));
        let eps = ring("F5[e]/(e^2)");
        assert_eq!((eps.nilpotency_index(), eps.cardinality()), (2, Some(25)));
        assert_eq!(eps.basis_labels(), ["1", "e"]);
        assert_eq!(ring("F25[e]/(e^3)").cardinality(), Some(25 * 25 * 25));
        assert_eq!(ring("Z/5^4").cardinality(), Some(625));
    }

    #[test]
    fn cyclo_cardinality_and_characteristic() {
        for m in 1..=8u32 {
            let r = ring(&format!("cyclo({m})"));
            assert_eq!(r.cardinality(), Some(5u64.pow(m)), "cyclo({m})");
            assert_eq!(r.nilpotency_index(), m);
            let expected = if m <= 4 { 5 } else { 25 };
            assert_eq!(r.additive_order(), expected, "characteristic of cyclo({m})");
        }
    }

    #[test]
    fn cyclo2_is_dual_numbers() {
        // relation reduction: u^2 = 0 and 5 = 0 in cyclo(2)
        let r = ring("cyclo(2)");
        let u = r.element("u").unwrap();
        assert_eq!(u.mul(&u).unwrap().to_string(), "0");
        assert_eq!(r.element("5").unwrap().to_string(), "0");
        assert_eq!(r.element("u + u").unwrap().to_string(), "2*u");
    }

    #[test]
    fn ring_arith_examples() {
        let z25 = ring("Z/5^2");
        assert_eq!(z25.element("7*8").unwrap().to_string(), "6");
        let eps = ring("F5[e]/(e^2)");
        let x = eps.element("1+2*e").unwrap();
        let y = eps.element("1+3*e").unwrap();
        assert_eq!(x.mul(&y).unwrap().to_string(), "1");
        let other = ring("F5[e]/(e^3)").element("e").unwrap();
        assert!(matches!(x.mul(&other), Err(Error::RingMismatch { .. })));
    }

    #[test]
    fn cyclo5_five_times_u() {
        let r = ring("cyclo(5)");
        let lhs = r.element("5*u").unwrap();
        // 5 = -u^4 - 5u^3 - 10u^2 - 10u in cyclo
        let rhs = r.element("u*(-(u^4) - 5*u^3 - 10*u^2 - 10*u)").unwrap();
        assert_eq!(lhs, rhs);
        // 5 lies in m^4, so 5u lies in m^5 = 0
        assert_eq!(lhs.to_string(), "0");
        assert_ne!(r.element("5").unwrap().to_string(), "0");
        assert_eq!(r.element("25").unwrap().to_string(), "0");
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(ring("F5").element("2").unwrap().inv().unwrap().to_string(), "3");
        assert_eq!(ring("Z/5^2").element("7").unwrap().inv().unwrap().to_string(), "18");
        assert_eq!(ring("F5[e]/(e^2)").element("1+e").unwrap().inv().unwrap().to_string(), "1+4*e");
        assert_eq!(ring("F5[e]/(e^2)").element("e").unwrap().inv(), Err(Error::NotUnit));
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(ring("F5").element("1").unwrap().sqrt(None).unwrap().to_string(), "1");
        let four = ring("Z/5^2").element("4").unwrap();
        assert_eq!(four.sqrt(Some(2)).unwrap().to_string(), "2");
        assert_eq!(four.sqrt(Some(3)).unwrap().to_string(), "23");
        let x = ring("F5[e]/(e^2)").element("1+e").unwrap();
        assert_eq!(x.sqrt(Some(1)).unwrap().to_string(), "1+3*e");
        assert_eq!(ring("F5").element("2").unwrap().sqrt(None), Err(Error::NotSquare));
        assert_eq!(four.sqrt(Some(1)), Err(Error::BadBranch { branch: 1, residue: 4 }));
    }

    #[test]
    fn enumerate_examples() {
        let f5 = ring("F5");
        assert_eq!(f5.enumerate(EnumFilter::MaximalIdeal).unwrap(), vec![f5.zero()]);
        let eps = ring("F5[e]/(e^2)");
        let m: Vec<String> = eps.enumerate(EnumFilter::MaximalIdeal).unwrap().iter().map(|x| eps.format_element(x)).collect();
        assert_eq!(m, ["0", "e", "2*e", "3*e", "4*e"]);
        assert_eq!(ring("Z/5^2").enumerate(EnumFilter::Units).unwrap().len(), 20);
    }

    #[test]
    fn enumeration_bound_is_enforced() {
        let big = ring("Z/5^20");
        assert!(matches!(big.enumerate(EnumFilter::All), Err(Error::UnsupportedSize { .. })));
    }

    #[test]
    fn literal_round_trip() {
        let r = ring("F25[e1]/(e1^2)[e2]/(e2^2)");
        let x = r.element("3 + i*e1 + 2*e1*e2 - i").unwrap();
        assert_eq!(r.element(&x.to_string()).unwrap(), x);
        assert!(r.element("u").is_err());
    }
}
