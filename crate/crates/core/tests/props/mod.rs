//! Randomized properties shared by the `properties` and `acceptance`
//! targets. Each returns `Err` with the minimal failing input.

use std::sync::{Arc, OnceLock};

use proptest::collection::vec;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

use univdef::artin::{ArtinRing, Ring, TabulatedRing};
use univdef::deformation::{coboundary, equivalent, hom_points, is_lift, versal_family, CocycleMap, Lift};
use univdef::nottingham::{base_sigma, Automorphism, Order};
use univdef::series::TruncatedSeries;
use univdef::symbolic::{s1_squared, Assignment, Poly, SurdExpr, Var};

pub const SEED: [u8; 32] = *b"univdef property corpus, seed 05";

pub fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, rng_algorithm: RngAlgorithm::ChaCha, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &SEED))
}

pub const RINGS: [&str; 8] =
    ["F5", "F25", "Z/5^3", "F5[e]/(e^3)", "cyclo(3)", "cyclo(5)", "F25[e]/(e^2)", "Z/5^2[e1]/(e1^2)"];

/// Rings small enough to tabulate quickly in debug builds.
pub const SMALL: usize = 5;

fn rings() -> &'static Vec<Arc<ArtinRing>> {
    static R: OnceLock<Vec<Arc<ArtinRing>>> = OnceLock::new();
    R.get_or_init(|| RINGS.iter().map(|d| Arc::new(ArtinRing::parse(d).unwrap())).collect())
}

fn tables() -> &'static Vec<TabulatedRing> {
    static T: OnceLock<Vec<TabulatedRing>> = OnceLock::new();
    T.get_or_init(|| rings()[..SMALL].iter().map(|r| TabulatedRing::new(Arc::clone(r)).unwrap()).collect())
}

fn elem(r: &ArtinRing, x: u64) -> <ArtinRing as Ring>::Elem {
    r.element_at(x % r.cardinality().unwrap())
}

fn ideal(r: &ArtinRing, x: u64) -> <ArtinRing as Ring>::Elem {
    let a = elem(r, x);
    r.sub(&a, &r.lift_residue(r.residue(&a)))
}

fn unit(r: &ArtinRing, x: u64) -> <ArtinRing as Ring>::Elem {
    let a = elem(r, x);
    if r.is_unit(&a) {
        a
    } else {
        r.add(&a, &r.one())
    }
}

fn series(r: &Arc<ArtinRing>, raw: &[u64], constant: fn(&ArtinRing, u64) -> <ArtinRing as Ring>::Elem) -> TruncatedSeries<ArtinRing> {
    let mut c: Vec<_> = raw.iter().map(|&x| elem(r, x)).collect();
    c[0] = constant(r, raw[0]);
    TruncatedSeries::new(Arc::clone(r), c)
}

/// `ξ` with `ξ(0) ∈ m` and `ξ'(0)` a unit.
fn automorphism(r: &Arc<ArtinRing>, raw: &[u64]) -> Automorphism<ArtinRing> {
    let mut s = series(r, raw, ideal).into_coeffs();
    s[1] = unit(r, raw[1]);
    Automorphism::new(TruncatedSeries::new(Arc::clone(r), s)).unwrap()
}

fn extend(s: &TruncatedSeries<ArtinRing>, raw: &[u64]) -> TruncatedSeries<ArtinRing> {
    let r = s.ring();
    let mut c = s.coeffs().to_vec();
    c.extend(raw.iter().map(|&x| elem(r, x)));
    TruncatedSeries::new(Arc::clone(r), c)
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), TestCaseError> {
    if ok {
        Ok(())
    } else {
        Err(TestCaseError::fail(msg()))
    }
}

fn run<S: Strategy>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    runner(cases).run(&strategy, test).map_err(|e| e.to_string())
}

fn ring_index() -> impl Strategy<Value = usize> {
    0..RINGS.len()
}

pub fn ring_axioms(cases: u32) -> Result<(), String> {
    run(cases, (ring_index(), any::<[u64; 3]>()), |(ri, [x, y, z])| {
        let r = &*rings()[ri];
        let (a, b, c) = (elem(r, x), elem(r, y), elem(r, z));
        check(r.mul(&r.mul(&a, &b), &c) == r.mul(&a, &r.mul(&b, &c)), || "mul assoc".into())?;
        check(r.add(&r.add(&a, &b), &c) == r.add(&a, &r.add(&b, &c)), || "add assoc".into())?;
        check(r.mul(&a, &b) == r.mul(&b, &a), || "mul comm".into())?;
        check(r.mul(&a, &r.add(&b, &c)) == r.add(&r.mul(&a, &b), &r.mul(&a, &c)), || "distributivity".into())?;
        check(r.is_zero(&r.add(&a, &r.neg(&a))), || "additive inverse".into())?;
        check(r.sub(&a, &b) == r.add(&a, &r.neg(&b)), || "subtraction".into())?;
        check(r.mul(&a, &r.one()) == a, || "unit element".into())?;
        match r.inv(&a) {
            Ok(i) => check(r.is_unit(&a) && r.mul(&a, &i) == r.one(), || "inverse".into())?,
            Err(_) => check(!r.is_unit(&a), || "unit without inverse".into())?,
        }
        if let Ok(branches) = r.sqrt_branches(&a) {
            for br in branches {
                let s = r.sqrt(&a, Some(br)).map_err(|e| TestCaseError::fail(e.to_string()))?;
                check(r.mul(&s, &s) == a && r.residue(&s) == br, || format!("sqrt branch {br}"))?;
            }
        }
        check(r.parse_element(&r.format_element(&a)).ok() == Some(a.clone()), || "literal round trip".into())?;
        let coords: Vec<i64> = r.coordinates(&a).iter().copied().collect();
        check(r.from_coordinates(&coords).ok() == Some(a.clone()), || "coordinate round trip".into())
    })
}

pub fn tabulated_agrees(cases: u32) -> Result<(), String> {
    run(cases, (0..SMALL, any::<[u64; 2]>()), |(ri, [x, y])| {
        let r = &*rings()[ri];
        let t = &tables()[ri];
        let (a, b) = (elem(r, x), elem(r, y));
        let (ta, tb) = (t.index_of(&a), t.index_of(&b));
        check(t.coords(t.add(&ta, &tb)) == r.add(&a, &b), || "add".into())?;
        check(t.coords(t.mul(&ta, &tb)) == r.mul(&a, &b), || "mul".into())?;
        check(t.coords(t.neg(&ta)) == r.neg(&a), || "neg".into())?;
        check(t.inv(&ta).ok().map(|i| t.coords(i)) == r.inv(&a).ok(), || "inv".into())?;
        check(t.sqrt(&ta, None).ok().map(|s| t.coords(s)) == r.sqrt(&a, None).ok(), || "sqrt".into())?;
        check(t.format_element(&ta) == r.format_element(&a), || "literal".into())
    })
}

pub fn series_remultiplication(cases: u32) -> Result<(), String> {
    let strategy = (ring_index(), vec(any::<u64>(), 1..10), vec(any::<u64>(), 1..10));
    run(cases, strategy, |(ri, fr, gr)| {
        let r = &rings()[ri];
        let f = series(r, &fr, unit);
        let g = series(r, &gr, elem);
        let inv = f.inverse().map_err(|e| TestCaseError::fail(e.to_string()))?;
        check(inv.mul(&f).unwrap() == TruncatedSeries::one(Arc::clone(r), f.prec()), || "f * f^-1".into())?;
        let q = g.div(&f).map_err(|e| TestCaseError::fail(e.to_string()))?;
        check(q.mul(&f).unwrap().agrees(&g), || "(g / f) * f".into())?;
        if let Ok(branches) = r.sqrt_branches(f.coeff(0)) {
            for br in branches {
                let s = f.sqrt(Some(br)).map_err(|e| TestCaseError::fail(e.to_string()))?;
                check(s.mul(&s).unwrap() == f, || format!("sqrt(f)^2, branch {br}"))?;
            }
        }
        Ok(())
    })
}

pub fn composition_associativity(cases: u32) -> Result<(), String> {
    let strategy = (ring_index(), vec(any::<u64>(), 4..10), vec(any::<u64>(), 4..10), vec(any::<u64>(), 4..10));
    run(cases, strategy, |(ri, fr, gr, hr)| {
        let r = &rings()[ri];
        let (f, g, h) = (series(r, &fr, ideal), series(r, &gr, ideal), series(r, &hr, elem));
        let (Ok(lhs), Ok(rhs)) = (g.compose(&f).and_then(|gf| h.compose(&gf)), h.compose(&g).and_then(|hg| hg.compose(&f))) else {
            return Err(TestCaseError::reject("precision exhausted"));
        };
        check(lhs.agrees(&rhs), || format!("{lhs} vs {rhs}"))
    })
}

/// Coefficients below the reported precision do not depend on input
/// coefficients at or above the input precision.
pub fn precision_soundness(cases: u32) -> Result<(), String> {
    let strategy = (ring_index(), vec(any::<u64>(), 3..9), vec(any::<u64>(), 3..9), any::<[u64; 3]>(), any::<[u64; 3]>());
    run(cases, strategy, |(ri, fr, gr, fx, gx)| {
        let r = &rings()[ri];
        let e = r.nilpotency_index() as usize;
        let f = series(r, &fr, ideal);
        let g = series(r, &gr, elem);
        let (f2, g2) = (extend(&f, &fx), extend(&g, &gx));
        let fail = |e: univdef::Error| TestCaseError::fail(e.to_string());
        if let Ok(c) = g.compose(&f) {
            check(c.prec() + e > f.prec().min(g.prec()), || "composition lost more than e - 1".into())?;
            check(g2.compose(&f2).map_err(fail)?.agrees_to(&c, c.prec()), || "compose".into())?;
        }
        let p = f.mul(&g).map_err(fail)?;
        check(f2.mul(&g2).map_err(fail)?.agrees_to(&p, p.prec()), || "mul".into())?;
        if r.is_unit(g.coeff(0)) {
            let i = g.inverse().map_err(fail)?;
            check(g2.inverse().map_err(fail)?.agrees_to(&i, i.prec()), || "inverse".into())?;
            if let Ok(s) = g.sqrt(None) {
                check(g2.sqrt(None).map_err(fail)?.agrees_to(&s, s.prec()), || "sqrt".into())?;
            }
        }
        let a = automorphism(r, &gr);
        let a2 = Automorphism::new(extend(a.series(), &gx)).unwrap();
        if let Ok(inv) = a.inverse() {
            check(inv.prec() + e > a.prec(), || "reversion lost more than e - 1".into())?;
            check(a2.inverse().map_err(fail)?.series().agrees_to(inv.series(), inv.prec()), || "reversion".into())?;
        }
        Ok(())
    })
}

const CONJ_RINGS: [usize; 4] = [0, 1, 3, 4];

/// Conjugating a lift by `ξ ≡ t mod m` preserves order 5 and liftness, and
/// over a field preserves the conductor.
pub fn conjugation_invariance(cases: u32) -> Result<(), String> {
    run(cases, (0..CONJ_RINGS.len(), any::<u64>(), vec(any::<u64>(), 10)), |(k, pick, xr)| {
        let r = &rings()[CONJ_RINGS[k]];
        let points = hom_points(r).unwrap();
        let p = &points[(pick % points.len() as u64) as usize];
        let sigma = versal_family(p, 10).unwrap();
        let mut xc: Vec<_> = xr.iter().map(|&x| ideal(r, x)).collect();
        xc[1] = r.add(&xc[1], &r.one());
        let xi = Automorphism::new(TruncatedSeries::new(Arc::clone(r), xc)).unwrap();
        let c = sigma.automorphism().conjugate(&xi).map_err(|e| TestCaseError::fail(e.to_string()))?;
        check(matches!(c.order(10), Order::Exact { order: 5, .. }), || format!("order of {c}"))?;
        check(is_lift(&c).is_lift(), || "conjugate is a lift".into())?;
        if r.nilpotency_index() == 1 {
            let before = sigma.automorphism().hasse_conductor().unwrap().value;
            check(c.hasse_conductor().map(|x| x.value) == Ok(before), || "conductor".into())?;
        }
        Ok(())
    })
}

/// A planted conjugate over the dual numbers is found by the search.
pub fn planted_conjugators(cases: u32) -> Result<(), String> {
    let eps = Arc::new(ArtinRing::parse("F5[e]/(e^2)").unwrap());
    run(cases, (0..5usize, vec(any::<u64>(), 6)), move |(pick, xr)| {
        let points = hom_points(&eps).unwrap();
        let lift = versal_family(&points[pick], 6).unwrap();
        let mut xc: Vec<_> = xr.iter().map(|&x| ideal(&eps, x)).collect();
        xc[0] = eps.zero();
        xc[1] = eps.add(&xc[1], &eps.one());
        let xi = Automorphism::new(TruncatedSeries::new(Arc::clone(&eps), xc)).unwrap();
        let planted = Lift::new(lift.automorphism().conjugate(&xi).unwrap()).unwrap();
        let found = equivalent(&lift, &planted, 4).map_err(|e| TestCaseError::fail(e.to_string()))?;
        check(found.is_some(), || "planted conjugator missed".into())
    })
}

/// First-order perturbations: the cocycle map is the ε-part of the fifth
/// power and the coboundary is the ε-part of conjugation by `t + εc`.
pub fn tangent_linearization(cases: u32) -> Result<(), String> {
    let eps = Arc::new(ArtinRing::parse("F5[e]/(e^2)").unwrap());
    let prec = 12;
    let z = CocycleMap::new(prec).unwrap();
    let sigma = base_sigma(Arc::clone(&eps), prec).unwrap();
    let e = eps.parse_element("e").unwrap();
    let lift_eps = |d: &[u8]| -> TruncatedSeries<ArtinRing> {
        TruncatedSeries::new(Arc::clone(&eps), d.iter().map(|&x| eps.mul(&e, &eps.from_int(i64::from(x)))).collect())
    };
    let eps_part = |s: &TruncatedSeries<ArtinRing>| -> Vec<u8> { s.coeffs().iter().map(|c| eps.coordinates(c)[1] as u8).collect() };
    run(cases, (vec(0u8..5, prec), vec(0u8..5, prec)), |(d, c)| {
        let lift = Automorphism::new(sigma.series().add(&lift_eps(&d)).unwrap()).unwrap();
        let fifth = lift.power(5).unwrap();
        let n = fifth.prec();
        check(eps_part(fifth.series())[..n] == z.apply(&d)[..n], || "cocycle map".into())?;
        let mut xc = lift_eps(&c).into_coeffs();
        xc[0] = eps.zero();
        xc[1] = eps.add(&xc[1], &eps.one());
        let xi = Automorphism::new(TruncatedSeries::new(Arc::clone(&eps), xc)).unwrap();
        let conj = sigma.conjugate(&xi).unwrap();
        let diff = conj.series().sub(sigma.series()).unwrap();
        let mut c0 = c.clone();
        c0[0] = 0;
        let b = coboundary(&c0, prec).unwrap();
        check(eps_part(&diff)[..diff.prec()] == b[..diff.prec()], || "coboundary".into())
    })
}

/// Sum of `c * [v] * [w] * basis` terms, variables and basis picked by bits of
/// the two bytes.
fn surd(raw: &[(i8, u8, u8)]) -> SurdExpr {
    let vars = [Var::A0, Var::A1, Var::Y1, Var::Y2];
    let basis = [SurdExpr::one(), SurdExpr::s1(), SurdExpr::s2(), SurdExpr::s1().mul(&SurdExpr::s2())];
    raw.iter().fold(SurdExpr::zero(), |acc, &(c, m, b)| {
        let mut mono = Poly::int(i64::from(c));
        if m & 4 != 0 {
            mono = mono.mul(&Poly::var(vars[usize::from(m % 4)]));
        }
        if m & 32 != 0 {
            mono = mono.mul(&Poly::var(vars[usize::from((m >> 3) % 4)]));
        }
        acc.add(&SurdExpr::poly(mono).mul(&basis[usize::from(b % 4)]))
    })
}

fn sampled_assignment(r: &ArtinRing, raw: [u64; 6], b1: bool, b2: bool) -> Option<Assignment<ArtinRing>> {
    let values = [ideal(r, raw[0]), unit(r, raw[1]), elem(r, raw[2]), elem(r, raw[3]), unit(r, raw[4]), unit(r, raw[5])];
    let s = s1_squared().eval(r, &values).ok()?;
    let s1 = r.sqrt(&s, Some(r.sqrt_branches(&s).ok()?[usize::from(b1)])).ok()?;
    let s2 = r.sqrt(&values[5], Some(r.sqrt_branches(&values[5]).ok()?[usize::from(b2)])).ok()?;
    Some(Assignment { values, s1, s2 })
}

pub fn surd_field_axioms(cases: u32) -> Result<(), String> {
    let term = (-4i8..5, any::<u8>(), any::<u8>());
    let ring = Arc::new(ArtinRing::parse("F5[e]/(e^2)").unwrap());
    let strategy = (vec(term.clone(), 1..4), vec(term.clone(), 1..4), vec(term, 1..3), any::<[u64; 6]>(), any::<(bool, bool)>());
    run(cases, strategy, move |(xr, yr, zr, vals, (b1, b2))| {
        let (x, y, z) = (surd(&xr), surd(&yr), surd(&zr));
        check(x.mul(&y) == y.mul(&x), || "mul comm".into())?;
        check(x.mul(&y.add(&z)) == x.mul(&y).add(&x.mul(&z)), || "distributivity".into())?;
        check(x.mul(&y).mul(&z) == x.mul(&y.mul(&z)), || "mul assoc".into())?;
        if !x.is_zero() {
            let i = x.inv().map_err(|e| TestCaseError::fail(format!("{x}: {e}")))?;
            check(x.mul(&i) == SurdExpr::one(), || format!("{x} * 1/{x}"))?;
            check(i.inv().ok() == Some(x.clone()), || "double inversion".into())?;
        }
        let Some(at) = sampled_assignment(&ring, vals, b1, b2) else {
            return Err(TestCaseError::reject("no square roots"));
        };
        let (Ok(ex), Ok(ey)) = (x.eval(&*ring, &at), y.eval(&*ring, &at)) else {
            return Ok(());
        };
        check(x.mul(&y).eval(&*ring, &at).ok() == Some(ring.mul(&ex, &ey)), || "eval mul".into())?;
        check(x.add(&y).eval(&*ring, &at).ok() == Some(ring.add(&ex, &ey)), || "eval add".into())
    })
}

pub fn serialization_round_trips(cases: u32) -> Result<(), String> {
    run(cases, (ring_index(), vec(any::<u64>(), 1..12)), |(ri, raw)| {
        let r = &rings()[ri];
        let s = series(r, &raw, elem);
        let back = TruncatedSeries::from_bytes(Arc::clone(r), &s.to_bytes()).map_err(|e| TestCaseError::fail(e.to_string()))?;
        check(back == s, || "bytes".into())?;
        let parsed = TruncatedSeries::parse(Arc::clone(r), &s.to_string()).map_err(|e| TestCaseError::fail(format!("{s}: {e}")))?;
        check(parsed == s, || format!("text {s}"))
    })
}

pub struct Property {
    pub id: &'static str,
    pub label: &'static str,
    pub check: fn(u32) -> Result<(), String>,
    pub cases: u32,
}

/// Every property with its default case count.
pub const ALL: [Property; 11] = [
    Property { id: "ring_axioms", label: "ring axioms", check: ring_axioms, cases: 256 },
    Property { id: "tabulated_agrees", label: "tabulated rings agree with coordinates", check: tabulated_agrees, cases: 256 },
    Property { id: "series_remultiplication", label: "series re-multiplication", check: series_remultiplication, cases: 128 },
    Property { id: "composition_associativity", label: "composition associativity", check: composition_associativity, cases: 128 },
    Property { id: "precision_soundness", label: "precision soundness", check: precision_soundness, cases: 128 },
    Property { id: "conjugation_invariance", label: "conjugation invariance", check: conjugation_invariance, cases: 48 },
    Property { id: "planted_conjugators", label: "planted conjugators", check: planted_conjugators, cases: 16 },
    Property { id: "tangent_linearization", label: "tangent linearization", check: tangent_linearization, cases: 24 },
    Property { id: "surd_field_axioms", label: "surd field axioms", check: surd_field_axioms, cases: 96 },
    Property { id: "serialization_round_trips", label: "serialization round trips", check: serialization_round_trips, cases: 128 },
    Property { id: "report_round_trip", label: "report round trip", check: report_round_trip, cases: 1 },
];

pub fn report_round_trip(_: u32) -> Result<(), String> {
    let out = univdef::cli::execute(["univdef", "universality", "--ring", "F5[e]/(e^2)", "--prec", "4"]);
    let r: univdef::cli::Report = serde_json::from_str(&out.stdout).map_err(|e| e.to_string())?;
    let again: univdef::cli::Report = serde_json::from_str(&serde_json::to_string(&r).unwrap()).map_err(|e| e.to_string())?;
    if r == again && out.code == 0 {
        Ok(())
    } else {
        Err("report does not round-trip".into())
    }
}
