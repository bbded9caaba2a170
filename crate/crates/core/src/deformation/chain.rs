//! Exhaustive check of each implication used to show `y₁ = y₂`, as a
//! statement about one finite ring.
//!
//! Notation: `S = a₀² + y₁`, `s₁ = sqrt(S)` and `s₂ = sqrt(y₂)` on either
//! branch, `q = a₁²`. The relations are
//!
//! * (E0) `a₀ = a₀/s₁`
//! * (E1) `a₁/s₁ - a₀²a₁/s₁³ = a₁/s₂`
//! * (E1') `1/s₁ - 1/s₂ = a₀²`
//! * (D) `a₀q/s₁³ - (a₀/s₁)(a₀²q/S² + ½(a₀²q/S² - (q + 2a₀a₂)/S)) = a₂/s₁ - a₂/y₂`
//! * (E2) `(a₂/s₂)(1/s₂ - 1) = (3/2)(a₀² - 1)a₀q`
//!
//! and the steps are
//!
//! 1. E0 ∧ E1 ⇒ E1'
//! 2. E0 ∧ E1' ∧ D ⇒ E2
//! 3. E2 ⇒ `a₀ ∈ (1/s₂ - 1)A`
//! 4. E0 ∧ E1' ⇒ `a₀(1/s₂ - 1) = a₀³`
//! 5. `x² ∈ x³A ⇒ x² = 0` for `x ∈ m`
//! 6. E1' ∧ `a₀² = 0` ⇒ `y₁ = y₂`
//!
//! Step 4 as written has the wrong sign: E1' times `a₀`, then E0, gives
//! `a₀(1 - 1/s₂) = a₀³`. Both forms are evaluated; the corrected one is
//! reported as a supplementary step. Only the sign-free consequence
//! `a₀² ∈ a₀³A` is used afterwards.
//!
//! Every predicate depends on `a₁` only through `q`, so the `a₁` loop runs
//! over the distinct unit squares, each weighted by its number of roots.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::hom_points;
use crate::artin::{ArtinRing, Descriptor, EnumFilter, Ring, TabulatedRing};
use crate::error::{Error, Result};

/// Variable name to ring literal.
pub type Witness = BTreeMap<String, String>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainStep {
    pub step: String,
    pub statement: String,
    /// Instances satisfying the hypotheses.
    pub instances: u64,
    pub counterexamples: u64,
    /// The first counterexample in enumeration order.
    pub witness: Option<Witness>,
}

impl ChainStep {
    pub fn holds(&self) -> bool {
        self.counterexamples == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProofChainReport {
    pub ring: String,
    pub cardinality: u64,
    pub points: usize,
    pub steps: Vec<ChainStep>,
    /// Sign-corrected variants, outside the verdict.
    pub supplementary: Vec<ChainStep>,
}

impl ProofChainReport {
    pub fn pass(&self) -> bool {
        self.steps.iter().all(ChainStep::holds)
    }
}

const STATEMENTS: [(&str, &str); 7] = [
    ("i", "E0 and E1 imply E1'"),
    ("ii", "E0, E1' and the third-order display imply E2"),
    ("iii", "E2 implies a0 in (1/s2 - 1)A"),
    ("iv", "E0 and E1' imply a0(1/s2 - 1) = a0^3"),
    ("v", "x^2 in x^3 A implies x^2 = 0 for x in m"),
    ("vi", "E1' and a0^2 = 0 imply y1 = y2"),
    ("iv'", "E0 and E1' imply a0(1 - 1/s2) = a0^3"),
];

#[derive(Default, Clone)]
struct Tally {
    instances: u64,
    counterexamples: u64,
    witness: Option<(usize, Witness)>,
}

impl Tally {
    fn hit(&mut self, key: usize, ok: bool, weight: u64, witness: impl FnOnce() -> Witness) {
        self.instances += weight;
        if !ok {
            self.counterexamples += weight;
            if self.witness.is_none() {
                self.witness = Some((key, witness()));
            }
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.instances += other.instances;
        self.counterexamples += other.counterexamples;
        self.witness = match (self.witness, other.witness) {
            (Some(a), Some(b)) => Some(if b.0 < a.0 { b } else { a }),
            (a, b) => a.or(b),
        };
        self
    }
}

/// Lookup tables for the ring operations the scan needs.
struct Tables {
    ring: Arc<TabulatedRing>,
    n: usize,
    elements: Vec<u16>,
    ideal: Vec<u16>,
    points: Vec<u16>,
    /// `inv[x]`, meaningless for non-units
    inv: Vec<u16>,
    /// `root[b][x]`: square root on branch `b` (0 = principal), if defined
    root: [Vec<Option<u16>>; 2],
    /// `(q, some a₁ with a₁² = q, number of such a₁)`
    unit_squares: Vec<(u16, u16, u64)>,
    /// units `u` with `u x = 0`, per `x`
    unit_annihilators: Vec<u64>,
    half: u16,
    three_halves: u16,
    one: u16,
}

impl Tables {
    fn new(ring: Arc<TabulatedRing>) -> Result<Self> {
        let elements = ring.enumerate(EnumFilter::All)?;
        let n = elements.len();
        let units: Vec<u16> = ring.enumerate(EnumFilter::Units)?;
        let ideal = ring.enumerate(EnumFilter::MaximalIdeal)?;
        let points = hom_points(&ring)?.iter().map(|p| *p.y()).collect();
        let mut inv = vec![0u16; n];
        for &u in &units {
            inv[u as usize] = ring.inv(&u)?;
        }
        let mut root = [vec![None; n], vec![None; n]];
        for &u in &units {
            if let Ok(branches) = ring.sqrt_branches(&u) {
                for (b, r) in branches.into_iter().enumerate() {
                    root[b][u as usize] = Some(ring.sqrt(&u, Some(r))?);
                }
            }
        }
        let mut squares: BTreeMap<u16, (u16, u64)> = BTreeMap::new();
        for &u in &units {
            let entry = squares.entry(ring.mul(&u, &u)).or_insert((u, 0));
            entry.1 += 1;
        }
        let unit_squares = squares.into_iter().map(|(q, (a, k))| (q, a, k)).collect();
        let unit_annihilators =
            elements.iter().map(|x| units.iter().filter(|u| ring.is_zero(&ring.mul(u, x))).count() as u64).collect();
        let half = ring.inv(&ring.from_int(2))?;
        let three_halves = ring.mul(&ring.from_int(3), &half);
        let one = ring.one();
        Ok(Tables { ring, n, elements, ideal, points, inv, root, unit_squares, unit_annihilators, half, three_halves, one })
    }

    #[inline]
    fn add(&self, a: u16, b: u16) -> u16 {
        self.ring.add(&a, &b)
    }

    #[inline]
    fn sub(&self, a: u16, b: u16) -> u16 {
        self.ring.sub(&a, &b)
    }

    #[inline]
    fn mul(&self, a: u16, b: u16) -> u16 {
        self.ring.mul(&a, &b)
    }

    fn lit(&self, x: u16) -> String {
        self.ring.format_element(&x)
    }
}

/// One choice of `(a₀, y₁, y₂)` and branches, with the derived surds.
struct Frame {
    a0: u16,
    y1: u16,
    y2: u16,
    s1: u16,
    s2: u16,
    is1: u16,
    is2: u16,
    a0_sq: u16,
    e0: bool,
    e1p: bool,
}

impl Frame {
    fn witness(&self, t: &Tables) -> Witness {
        let mut w = Witness::new();
        for (k, v) in [("a0", self.a0), ("y1", self.y1), ("y2", self.y2), ("s1", self.s1), ("s2", self.s2)] {
            w.insert(k.into(), t.lit(v));
        }
        w
    }
}

/// Left minus right side of the third-order display.
fn display_gap(t: &Tables, f: &Frame, q: u16, a2: u16) -> u16 {
    let i_s = t.mul(f.is1, f.is1);
    let i_s2 = t.mul(i_s, i_s);
    let is1_cubed = t.mul(i_s, f.is1);
    let a0q = t.mul(f.a0, q);
    let a0sq_q_over_s2 = t.mul(t.mul(f.a0_sq, q), i_s2);
    let inner = t.sub(a0sq_q_over_s2, t.mul(t.add(q, t.mul(t.add(f.a0, f.a0), a2)), i_s));
    let bracket = t.add(a0sq_q_over_s2, t.mul(t.half, inner));
    let lhs = t.sub(t.mul(a0q, is1_cubed), t.mul(t.mul(f.a0, f.is1), bracket));
    let rhs = t.sub(t.mul(a2, f.is1), t.mul(a2, t.mul(f.is2, f.is2)));
    t.sub(lhs, rhs)
}

/// Left side of E2: `(a₂/s₂)(1/s₂ - 1)`.
fn e2_lhs(t: &Tables, is2: u16, a2: u16) -> u16 {
    t.mul(t.mul(a2, is2), t.sub(is2, t.one))
}

/// Right side of E2: `(3/2)(a₀² - 1)a₀q`.
fn e2_rhs(t: &Tables, a0: u16, q: u16) -> u16 {
    let a0_sq = t.mul(a0, a0);
    t.mul(t.mul(t.mul(t.three_halves, t.sub(a0_sq, t.one)), a0), q)
}

/// Run every step over all witnesses in `ring`.
pub fn proof_chain_check(ring: Arc<TabulatedRing>) -> Result<ProofChainReport> {
    let t = Tables::new(ring)?;
    let tallies: Vec<Vec<Tally>> = t.ideal.par_iter().enumerate().map(|(ia, &a0)| scan_a0(&t, ia, a0)).collect();
    let mut total = vec![Tally::default(); STATEMENTS.len()];
    for per_a0 in tallies {
        total = total.into_iter().zip(per_a0).map(|(a, b)| a.merge(b)).collect();
    }
    total[4] = step_v(&t);
    let mut steps: Vec<ChainStep> = total
        .into_iter()
        .zip(STATEMENTS)
        .map(|(tally, (step, statement))| ChainStep {
            step: step.into(),
            statement: statement.into(),
            instances: tally.instances,
            counterexamples: tally.counterexamples,
            witness: tally.witness.map(|(_, w)| w),
        })
        .collect();
    let supplementary = steps.split_off(6);
    Ok(ProofChainReport {
        ring: t.ring.descriptor().to_string(),
        cardinality: t.n as u64,
        points: t.points.len(),
        steps,
        supplementary,
    })
}

fn scan_a0(t: &Tables, ia: usize, a0: u16) -> Vec<Tally> {
    let mut tally = vec![Tally::default(); STATEMENTS.len()];
    let a0_sq = t.mul(a0, a0);
    let a0_cu = t.mul(a0_sq, a0);
    let mut key = ia;
    for &y1 in &t.points {
        let big_s = t.add(a0_sq, y1);
        for b1 in 0..2 {
            let Some(s1) = t.root[b1][big_s as usize] else { continue };
            let is1 = t.inv[s1 as usize];
            for &y2 in &t.points {
                for b2 in 0..2 {
                    let Some(s2) = t.root[b2][y2 as usize] else { continue };
                    let is2 = t.inv[s2 as usize];
                    key += t.ideal.len();
                    let e0 = a0 == t.mul(a0, is1);
                    let e1p = t.sub(is1, is2) == a0_sq;
                    let f = Frame { a0, y1, y2, s1, s2, is1, is2, a0_sq, e0, e1p };
                    step_i(t, &f, key, &mut tally[0]);
                    if f.e0 && f.e1p {
                        step_ii(t, &f, key, &mut tally[1]);
                        let lhs = t.mul(a0, t.sub(is2, t.one));
                        tally[3].hit(key, lhs == a0_cu, 1, || f.witness(t));
                        let corrected = t.mul(a0, t.sub(t.one, is2));
                        tally[6].hit(key, corrected == a0_cu, 1, || f.witness(t));
                    }
                    if f.e1p && t.ring.is_zero(&a0_sq) {
                        tally[5].hit(key, y1 == y2, 1, || f.witness(t));
                    }
                    // step iii does not involve y1; count it once per (y2, b2)
                    if y1 == t.points[0] && b1 == first_branch(t, big_s) {
                        step_iii(t, &f, key, &mut tally[2]);
                    }
                }
            }
        }
    }
    tally
}

fn first_branch(t: &Tables, x: u16) -> usize {
    if t.root[0][x as usize].is_some() {
        0
    } else {
        1
    }
}

/// E1 holds for exactly the units annihilating
/// `X = 1/s₁ - a₀²/s₁³ - 1/s₂`; each is an instance.
fn step_i(t: &Tables, f: &Frame, key: usize, tally: &mut Tally) {
    if !f.e0 {
        return;
    }
    let is1_cubed = t.mul(t.mul(f.is1, f.is1), f.is1);
    let x = t.sub(t.sub(f.is1, t.mul(f.a0_sq, is1_cubed)), f.is2);
    let count = t.unit_annihilators[x as usize];
    if count > 0 {
        tally.hit(key, f.e1p, count, || {
            let mut w = f.witness(t);
            let a1 = t.elements.iter().copied().find(|&u| t.ring.is_unit(&u) && t.ring.is_zero(&t.mul(u, x)));
            w.insert("a1".into(), t.lit(a1.expect("counted above")));
            w
        });
    }
}

/// Both sides of D and E2 are sums of a part linear in `q` and a part
/// linear in `a₂` (no `q·a₂` terms), so the pairs `(q, a₂)` are matched by
/// bucketing `a₂` on its part instead of testing all `|A*|·|A|` pairs.
fn step_ii(t: &Tables, f: &Frame, key: usize, tally: &mut Tally) {
    let by_gap = Buckets::new(t, |a2| display_gap(t, f, 0, a2));
    for &(q, a1, mult) in &t.unit_squares {
        let target = t.ring.neg(&display_gap(t, f, q, 0));
        let rhs = e2_rhs(t, f.a0, q);
        for &a2 in by_gap.get(target) {
            let ok = e2_lhs(t, f.is2, a2) == rhs;
            tally.hit(key, ok, mult, || {
                let mut w = f.witness(t);
                w.insert("a1".into(), t.lit(a1));
                w.insert("a2".into(), t.lit(a2));
                w
            });
        }
    }
}

fn step_iii(t: &Tables, f: &Frame, key: usize, tally: &mut Tally) {
    let v = t.sub(f.is2, t.one);
    let in_ideal = t.elements.iter().any(|&b| t.mul(v, b) == f.a0);
    let by_lhs = Buckets::new(t, |a2| e2_lhs(t, f.is2, a2));
    for &(q, a1, mult) in &t.unit_squares {
        let solutions = by_lhs.get(e2_rhs(t, f.a0, q));
        if let Some(&a2) = solutions.first() {
            tally.hit(key, in_ideal, mult * solutions.len() as u64, || {
                let mut w = Witness::new();
                w.insert("a0".into(), t.lit(f.a0));
                w.insert("y2".into(), t.lit(f.y2));
                w.insert("s2".into(), t.lit(f.s2));
                w.insert("a1".into(), t.lit(a1));
                w.insert("a2".into(), t.lit(a2));
                w
            });
        }
    }
}

/// Elements of `A` grouped by the value of a key function (counting sort).
struct Buckets {
    start: Vec<u32>,
    items: Vec<u16>,
}

impl Buckets {
    fn new(t: &Tables, key: impl Fn(u16) -> u16) -> Self {
        let keys: Vec<u16> = t.elements.iter().map(|&x| key(x)).collect();
        let mut start = vec![0u32; t.n + 1];
        for &k in &keys {
            start[k as usize + 1] += 1;
        }
        for i in 0..t.n {
            start[i + 1] += start[i];
        }
        let mut fill = start.clone();
        let mut items = vec![0u16; t.n];
        for (&x, &k) in t.elements.iter().zip(&keys) {
            items[fill[k as usize] as usize] = x;
            fill[k as usize] += 1;
        }
        Buckets { start, items }
    }

    fn get(&self, k: u16) -> &[u16] {
        &self.items[self.start[k as usize] as usize..self.start[k as usize + 1] as usize]
    }
}

fn step_v(t: &Tables) -> Tally {
    let mut tally = Tally::default();
    for (key, &x) in t.ideal.iter().enumerate() {
        let x2 = t.mul(x, x);
        let x3 = t.mul(x2, x);
        if let Some(&b) = t.elements.iter().find(|&&b| t.mul(x3, b) == x2) {
            tally.hit(key, t.ring.is_zero(&x2), 1, || {
                let mut w = Witness::new();
                w.insert("x".into(), t.lit(x));
                w.insert("b".into(), t.lit(b));
                w
            });
        }
    }
    tally
}

/// Every catalog descriptor with at most `max_cardinality` elements.
///
/// Bases are `F5`, `F25`, `Z/5^n` and `cyclo(m)`; towers adjoin `e_k` with
/// `e_k^m = 0` (`m >= 2`) to any listed ring other than the presentations
/// `Z/5^1` and `cyclo(1)` of F5 itself.
pub fn catalog(max_cardinality: u64) -> Vec<String> {
    let mut bases: Vec<(Descriptor, u64)> = Vec::new();
    bases.push((Descriptor::F5, 5));
    bases.push((Descriptor::F25, 25));
    for n in 1..=26u32 {
        match 5u64.checked_pow(n) {
            Some(c) if c <= max_cardinality => bases.push((Descriptor::WittF5(n), c)),
            _ => break,
        }
    }
    for m in 1..=12u32 {
        match 5u64.checked_pow(m) {
            Some(c) if c <= max_cardinality => bases.push((Descriptor::Cyclo(m), c)),
            _ => break,
        }
    }
    bases.retain(|(_, c)| *c <= max_cardinality);
    let mut out = Vec::new();
    let mut frontier: Vec<(Descriptor, u64, u32)> = bases.into_iter().map(|(d, c)| (d, c, 0)).collect();
    while let Some((d, card, depth)) = frontier.pop() {
        out.push((d.to_string(), card));
        if matches!(d, Descriptor::WittF5(1) | Descriptor::Cyclo(1)) {
            continue;
        }
        let mut m = 2u32;
        while let Some(c) = card.checked_pow(m).filter(|&c| c <= max_cardinality) {
            let child = Descriptor::Nilpotent { base: Box::new(d.clone()), var: format!("e{}", depth + 1), exponent: m };
            frontier.push((child, c, depth + 1));
            m += 1;
        }
    }
    out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    out.into_iter().map(|(d, _)| d).collect()
}

/// Convenience wrapper: tabulate `desc` and run [`proof_chain_check`].
pub fn proof_chain_for(desc: &str) -> Result<ProofChainReport> {
    let ring = ArtinRing::parse(desc)?;
    if ring.cardinality().map_or(true, |c| c > crate::artin::TABLE_LIMIT) {
        return Err(Error::UnsupportedSize {
            cardinality: ring.cardinality().map_or_else(|| "> 2^64".into(), |c| c.to_string()),
            bound: crate::artin::TABLE_LIMIT,
        });
    }
    proof_chain_check(Arc::new(TabulatedRing::new(Arc::new(ring))?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn step<'a>(r: &'a ProofChainReport, id: &str) -> &'a ChainStep {
        r.steps.iter().chain(&r.supplementary).find(|s| s.step == id).unwrap()
    }

    #[test]
    fn field_case_is_vacuous() {
        let r = proof_chain_for("F5").unwrap();
        assert!(r.pass(), "{r:?}");
        assert_eq!(r.points, 1);
    }

    #[test]
    fn dual_numbers_hold() {
        let r = proof_chain_for("F5[e]/(e^2)").unwrap();
        assert!(r.pass(), "{r:?}");
        assert!(step(&r, "ii").instances > 0);
    }

    #[test]
    fn step_v_on_z25() {
        let r = proof_chain_for("Z/5^2").unwrap();
        let v = step(&r, "v");
        assert_eq!(v.counterexamples, 0);
        // x = 0 is the only element with x^2 in x^3 A
        assert_eq!(v.instances, 5);
        assert_eq!(r.points, 0);
    }

    #[test]
    fn literal_sign_fails_where_a0_cubed_survives() {
        let r = proof_chain_for("F5[e1]/(e1^4)").unwrap();
        assert!(step(&r, "iv").counterexamples > 0);
        assert_eq!(step(&r, "iv'").counterexamples, 0);
        for id in ["i", "ii", "iii", "v", "vi"] {
            assert!(step(&r, id).holds(), "step {id}: {:?}", step(&r, id));
        }
    }

    #[test]
    fn display_helper_matches_the_literal_formula() {
        // display_gap against a direct transcription with divisions
        let ring = Arc::new(TabulatedRing::parse("F5[e]/(e^3)").unwrap());
        let t = Tables::new(ring.clone()).unwrap();
        let r = &*ring;
        for &a0 in t.ideal.iter().take(7) {
            for &y1 in t.points.iter().take(4) {
                let s = r.add(&r.mul(&a0, &a0), &y1);
                let s1 = r.sqrt(&s, None).unwrap();
                let y2 = t.points[t.points.len() - 1];
                let s2 = r.sqrt(&y2, None).unwrap();
                let f = Frame {
                    a0, y1, y2, s1, s2,
                    is1: r.inv(&s1).unwrap(),
                    is2: r.inv(&s2).unwrap(),
                    a0_sq: r.mul(&a0, &a0),
                    e0: false, e1p: false,
                };
                for a1 in [1u16, 7, 33] {
                    if !r.is_unit(&a1) {
                        continue;
                    }
                    for a2 in [0u16, 3, 64] {
                        let div = |x: u16, y: u16| r.mul(&x, &r.inv(&y).unwrap());
                        let q = r.mul(&a1, &a1);
                        let s_sq = r.mul(&s, &s);
                        let s1_cu = r.mul(&s, &s1);
                        let a0sq_a1sq = r.mul(&f.a0_sq, &q);
                        let inner = r.sub(&div(a0sq_a1sq, s_sq), &div(r.add(&q, &r.mul(&r.from_int(2), &r.mul(&a0, &a2))), s));
                        let bracket = r.add(&div(a0sq_a1sq, s_sq), &r.mul(&t.half, &inner));
                        let lhs = r.sub(&div(r.mul(&a0, &q), s1_cu), &r.mul(&div(a0, s1), &bracket));
                        let rhs = r.sub(&div(a2, s1), &div(a2, y2));
                        assert_eq!(display_gap(&t, &f, q, a2), r.sub(&lhs, &rhs));
                    }
                }
            }
        }
    }

    #[test]
    fn display_gap_is_additive() {
        let ring = Arc::new(TabulatedRing::parse("F5[e]/(e^4)").unwrap());
        let t = Tables::new(ring.clone()).unwrap();
        let r = &*ring;
        for (i, &a0) in t.ideal.iter().enumerate().step_by(11) {
            let y1 = t.points[i % t.points.len()];
            let y2 = t.points[(3 * i + 1) % t.points.len()];
            let s1 = r.sqrt(&r.add(&r.mul(&a0, &a0), &y1), Some(4)).unwrap();
            let s2 = r.sqrt(&y2, None).unwrap();
            let f = Frame {
                a0, y1, y2, s1, s2,
                is1: r.inv(&s1).unwrap(),
                is2: r.inv(&s2).unwrap(),
                a0_sq: r.mul(&a0, &a0),
                e0: false, e1p: false,
            };
            for &(q, _, _) in t.unit_squares.iter().step_by(17) {
                for a2 in (0..625u16).step_by(29) {
                    let split = r.add(&display_gap(&t, &f, q, 0), &display_gap(&t, &f, 0, a2));
                    assert_eq!(display_gap(&t, &f, q, a2), split);
                }
            }
        }
    }

    #[test]
    fn catalog_up_to_625() {
        let c = catalog(625);
        for d in ["F5", "F25", "Z/5^4", "cyclo(4)", "F5[e1]/(e1^4)", "F25[e1]/(e1^2)", "F5[e1]/(e1^2)[e2]/(e2^2)"] {
            assert!(c.iter().any(|x| x == d), "{d} missing from {c:?}");
        }
        assert!(!c.iter().any(|x| x.starts_with("Z/5^1[")));
        for d in &c {
            assert!(ArtinRing::parse(d).unwrap().cardinality().unwrap() <= 625);
        }
    }
}
