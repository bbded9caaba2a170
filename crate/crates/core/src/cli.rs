//! Command-line front end. Every subcommand yields a [`Report`]; its JSON
//! form is the contract and `--format text` is a rendering of it.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::artin::{ArtinRing, Ring, TabulatedRing};
use crate::deformation::{
    catalog, hom_points, is_lift, iterate_closed_form, obstruction_check, proof_chain_check, tangent_space,
    universality_scan, versal_family, Witness,
};
use crate::error::{Error, Result};
use crate::nottingham::{base_sigma, normal_form_o5c2, Automorphism, Order};
use crate::series::TruncatedSeries;
use crate::symbolic::{verify_displayed_equations_with, SymbolicOptions};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Indeterminate,
}

impl Verdict {
    fn of(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    /// Fail dominates indeterminate, which dominates pass.
    pub fn combine(verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
        verdicts.into_iter().fold(Verdict::Pass, |acc, v| match (acc, v) {
            (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
            (Verdict::Indeterminate, _) | (_, Verdict::Indeterminate) => Verdict::Indeterminate,
            _ => Verdict::Pass,
        })
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail | Verdict::Indeterminate => 1,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prec: Option<usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub bounds: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub params: Params,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    pub details: Value,
    pub elapsed_ms: u64,
    pub version: String,
}

impl Report {
    pub fn render_text(&self) -> String {
        let mut out = format!("{}: {:?} ({} ms)\n", self.command, self.verdict, self.elapsed_ms).to_lowercase();
        if let Some(items) = self.details.get("criteria").and_then(Value::as_array) {
            for c in items {
                out.push_str(&format!(
                    "  criterion {}: {} ({} ms) {}\n",
                    c["criterion"],
                    c["verdict"].as_str().unwrap_or("?"),
                    c["elapsed_ms"],
                    c["summary"].as_str().unwrap_or("")
                ));
            }
        }
        for w in &self.witnesses {
            let parts: Vec<String> = w.iter().map(|(k, v)| format!("{k} = {v}")).collect();
            out.push_str(&format!("  witness: {}\n", parts.join(", ")));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Profile {
    Quick,
    Full,
}

#[derive(Debug, Parser)]
#[command(name = "univdef", version, about = "Power-series automorphisms in residue characteristic 5 and checks of their deformation ring")]
pub struct Cli {
    /// Worker threads for parallel scans (default: all cores).
    #[arg(long, global = true, env = "UNIVDEF_JOBS")]
    pub jobs: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct SeriesArgs {
    #[arg(long, default_value = "F5")]
    pub ring: String,
    #[arg(long)]
    pub prec: usize,
    /// Series literal such as `t + 2*t^3`; `sigma` (the default) is `t/sqrt(t^2 + 1)`.
    #[arg(long)]
    pub series: Option<String>,
    /// Replace the series `a` by `x ∘ a ∘ x⁻¹`.
    #[arg(long)]
    pub conjugate_by: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Multiplicative order of an automorphism.
    Order {
        #[command(flatten)]
        series: SeriesArgs,
        #[arg(long, default_value_t = 64)]
        cap: u64,
        /// Expected order (5 when the series is σ).
        #[arg(long)]
        expect: Option<u64>,
    },
    /// Hasse conductor and its leading coefficient.
    Conductor {
        #[command(flatten)]
        series: SeriesArgs,
        /// Expected conductor (2 when the series is σ).
        #[arg(long)]
        expect: Option<usize>,
    },
    /// Conjugator taking σ to an order-5, conductor-2 automorphism.
    NormalForm {
        #[command(flatten)]
        series: SeriesArgs,
    },
    /// `is_lift` on the versal family at every versal point.
    VersalCheck {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        prec: usize,
    },
    /// Closed-form iterates against repeated composition, for powers 0..=k.
    Iterates {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        prec: usize,
    },
    /// Tangent space over F5[e]/(e^2) at several precisions.
    Tangent {
        #[arg(long, value_delimiter = ',', default_value = "8,12,16")]
        prec_sweep: Vec<usize>,
    },
    /// Conjugator search on all pairs of versal points.
    Universality {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        prec: usize,
    },
    /// Exhaustive check of each step of the argument on one ring or the catalog.
    ProofChain {
        #[arg(long, conflicts_with = "max_cardinality", required_unless_present = "max_cardinality")]
        ring: Option<String>,
        /// Every catalog ring with at most this many elements.
        #[arg(long)]
        max_cardinality: Option<u64>,
    },
    /// Order-5 lifts of σ to Z/5^n.
    Obstruction {
        #[arg(long, default_value_t = 2)]
        n: u32,
        #[arg(long)]
        prec: usize,
    },
    /// Symbolic coefficients of the conjugation equation against the displayed relations.
    CoeffEqs {
        #[arg(long, default_value_t = 64)]
        samples: usize,
        #[arg(long, default_value_t = 125)]
        oracle_max_cardinality: u64,
        #[arg(long, default_value_t = 5)]
        seed: u64,
    },
    /// Acceptance criteria 1 to 8 in sequence.
    VerifyAll {
        #[arg(long, value_enum, default_value_t = Profile::Quick)]
        profile: Profile,
    },
}

/// Process-level result: exit code and the text for each stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parse `args` (including the program name) and run. Usage and size errors
/// give code 2.
pub fn execute<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code: 2, stdout: String::new(), stderr: text }
            };
        }
    };
    let report = match cli.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::InvalidInput(e.to_string()))
            .and_then(|pool| pool.install(|| run(&cli.command))),
        None => run(&cli.command),
    };
    match report {
        Ok(r) => {
            let stdout = match cli.format {
                Format::Json => serde_json::to_string_pretty(&r).expect("reports serialize") + "\n",
                Format::Text => r.render_text(),
            };
            Outcome { code: r.verdict.exit_code(), stdout, stderr: String::new() }
        }
        Err(e) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

pub fn run(command: &Command) -> Result<Report> {
    let start = Instant::now();
    let mut report = match command {
        Command::Order { series, cap, expect } => order(series, *cap, *expect),
        Command::Conductor { series, expect } => conductor(series, *expect),
        Command::NormalForm { series } => normal_form(series),
        Command::VersalCheck { ring, prec } => versal_check(ring, *prec),
        Command::Iterates { ring, k, prec } => iterates(ring, *k, *prec),
        Command::Tangent { prec_sweep } => tangent(prec_sweep),
        Command::Universality { ring, prec } => universality(ring, *prec),
        Command::ProofChain { ring, max_cardinality } => proof_chain(ring.as_deref(), *max_cardinality),
        Command::Obstruction { n, prec } => obstruction(*n, *prec),
        Command::CoeffEqs { samples, oracle_max_cardinality, seed } => coeff_eqs(*samples, *oracle_max_cardinality, *seed),
        Command::VerifyAll { profile } => verify_all(*profile),
    }?;
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

fn report(command: &str, params: Params, verdict: Verdict, witnesses: Vec<Witness>, details: Value) -> Report {
    Report { command: command.into(), params, verdict, witnesses, details, elapsed_ms: 0, version: VERSION.into() }
}

fn params(ring: Option<&str>, prec: Option<usize>, bounds: &[(&str, Value)]) -> Params {
    Params {
        ring: ring.map(str::to_string),
        prec,
        bounds: bounds.iter().map(|(k, v)| ((*k).to_string(), v.clone())).collect(),
    }
}

fn witness(pairs: &[(&str, String)]) -> Witness {
    pairs.iter().map(|(k, v)| ((*k).to_string(), v.clone())).collect()
}

fn artin(desc: &str) -> Result<Arc<ArtinRing>> {
    Ok(Arc::new(ArtinRing::parse(desc)?))
}

fn parse_series<R: Ring>(ring: &Arc<R>, literal: &str, prec: usize) -> Result<TruncatedSeries<R>> {
    if literal.contains('@') {
        TruncatedSeries::parse(Arc::clone(ring), literal)
    } else {
        TruncatedSeries::parse(Arc::clone(ring), &format!("{literal} @prec={prec}"))
    }
}

/// The automorphism named by `--series` / `--conjugate-by`, and whether it
/// is σ itself.
fn resolve<R: Ring>(ring: &Arc<R>, args: &SeriesArgs) -> Result<(Automorphism<R>, bool)> {
    let (a, is_sigma) = match args.series.as_deref() {
        None | Some("sigma") => (base_sigma(Arc::clone(ring), args.prec)?, true),
        Some(lit) => (Automorphism::new(parse_series(ring, lit, args.prec)?)?, false),
    };
    match &args.conjugate_by {
        None => Ok((a, is_sigma)),
        Some(lit) => {
            let x = Automorphism::new(parse_series(ring, lit, args.prec)?)?;
            Ok((a.conjugate(&x)?, false))
        }
    }
}

fn series_params(args: &SeriesArgs, extra: &[(&str, Value)]) -> Params {
    let mut bounds: Vec<(&str, Value)> = extra.to_vec();
    bounds.push(("series", json!(args.series.as_deref().unwrap_or("sigma"))));
    if let Some(x) = &args.conjugate_by {
        bounds.push(("conjugate_by", json!(x)));
    }
    params(Some(&args.ring), Some(args.prec), &bounds)
}

fn order(args: &SeriesArgs, cap: u64, expect: Option<u64>) -> Result<Report> {
    let ring = artin(&args.ring)?;
    let (a, is_sigma) = resolve(&ring, args)?;
    let expect = expect.or(is_sigma.then_some(5));
    let o = a.order(cap);
    let verdict = match (o, expect) {
        (Order::ExceedsCap { .. }, _) => Verdict::Indeterminate,
        (Order::Exact { order, .. }, Some(e)) => Verdict::of(order == e),
        (Order::Exact { .. }, None) => Verdict::Pass,
    };
    let details = json!({ "series": a.to_string(), "order": o, "expected": expect });
    Ok(report("order", series_params(args, &[("cap", json!(cap))]), verdict, vec![], details))
}

fn conductor(args: &SeriesArgs, expect: Option<usize>) -> Result<Report> {
    let ring = artin(&args.ring)?;
    let (a, is_sigma) = resolve(&ring, args)?;
    let expect = expect.or(is_sigma.then_some(2));
    let p = series_params(args, &[]);
    match a.hasse_conductor() {
        Ok(c) => {
            // σ has leading coefficient 2 as well
            let ok = expect.map_or(true, |e| c.value == e) && (!is_sigma || c.leading == 2);
            let details = json!({ "series": a.to_string(), "conductor": c.value, "leading": c.leading, "expected": expect });
            Ok(report("conductor", p, Verdict::of(ok), vec![], details))
        }
        Err(Error::IdentityAtPrecision(k)) => {
            let details = json!({ "series": a.to_string(), "identity_modulo": format!("t^{}", k + 1) });
            Ok(report("conductor", p, Verdict::Indeterminate, vec![], details))
        }
        Err(e) => Err(e),
    }
}

fn normal_form(args: &SeriesArgs) -> Result<Report> {
    let ring = artin(&args.ring)?;
    let (a, _) = resolve(&ring, args)?;
    let p = series_params(args, &[]);
    match normal_form_o5c2(&a, args.prec) {
        Ok(xi) => {
            let sigma = base_sigma(Arc::clone(&ring), args.prec)?;
            let ok = sigma.conjugate(&xi)? == a.truncate(args.prec);
            let details = json!({ "series": a.to_string(), "conjugator": xi.to_string() });
            Ok(report("normal-form", p, Verdict::of(ok), vec![], details))
        }
        Err(Error::SearchExhausted(msg)) => {
            let details = json!({ "series": a.to_string(), "conjugator": Value::Null, "message": msg });
            Ok(report("normal-form", p, Verdict::Fail, vec![witness(&[("series", a.to_string())])], details))
        }
        Err(e) => Err(e),
    }
}

fn versal_check(desc: &str, prec: usize) -> Result<Report> {
    let ring = artin(desc)?;
    let mut items = Vec::new();
    let mut witnesses = Vec::new();
    for point in hom_points(&ring)? {
        let lift = versal_family(&point, prec)?;
        let check = is_lift(lift.automorphism());
        if !check.is_lift() {
            witnesses.push(witness(&[("y", point.literal())]));
        }
        items.push(json!({ "y": point.literal(), "lift": lift.automorphism().to_string(), "check": check }));
    }
    let details = json!({ "points": items.len(), "lifts": items });
    Ok(report("versal-check", params(Some(desc), Some(prec), &[]), Verdict::of(witnesses.is_empty()), witnesses, details))
}

fn iterates(desc: &str, k: u64, prec: usize) -> Result<Report> {
    let ring = artin(desc)?;
    let points = hom_points(&ring)?;
    let mut comparisons = 0u64;
    let mut witnesses = Vec::new();
    let mut fifth_power_identity = true;
    for point in &points {
        let sigma = versal_family(point, prec)?;
        let mut power = Automorphism::identity(Arc::clone(&ring), prec);
        for j in 0..=k {
            let closed = iterate_closed_form(point, j, prec)?;
            comparisons += 1;
            if power != closed {
                witnesses.push(witness(&[("y", point.literal()), ("k", j.to_string())]));
            }
            if j == 5 && !power.is_identity() {
                fifth_power_identity = false;
            }
            power = power.compose(sigma.automorphism())?;
        }
        if power.prec() < prec {
            return Err(Error::PrecisionUnderflow(power.prec() as i64));
        }
    }
    let details = json!({
        "points": points.len(),
        "comparisons": comparisons,
        "fifth_power_identity": (k >= 5).then_some(fifth_power_identity),
    });
    let ok = witnesses.is_empty() && fifth_power_identity;
    Ok(report("iterates", params(Some(desc), Some(prec), &[("k", json!(k))]), Verdict::of(ok), witnesses, details))
}

fn tangent(sweep: &[usize]) -> Result<Report> {
    let r = tangent_space(sweep)?;
    let p = params(Some("F5[e]/(e^2)"), None, &[("prec_sweep", json!(sweep))]);
    Ok(report("tangent", p, Verdict::of(r.pass()), vec![], serde_json::to_value(&r).expect("serializable")))
}

fn universality(desc: &str, prec: usize) -> Result<Report> {
    let ring = Arc::new(TabulatedRing::parse(desc)?);
    let r = universality_scan(&ring, prec)?;
    let witnesses = r
        .pairs
        .iter()
        .filter(|p| !p.consistent())
        .map(|p| witness(&[("y1", p.y1.clone()), ("y2", p.y2.clone())]))
        .collect();
    let details = serde_json::to_value(&r).expect("serializable");
    Ok(report("universality", params(Some(desc), Some(prec), &[]), Verdict::of(r.pass()), witnesses, details))
}

fn proof_chain(desc: Option<&str>, max_card: Option<u64>) -> Result<Report> {
    let rings = match (desc, max_card) {
        (Some(d), _) => vec![d.to_string()],
        (None, Some(n)) => catalog(n),
        (None, None) => return Err(Error::InvalidInput("give --ring or --max-cardinality".into())),
    };
    let mut reports = Vec::new();
    let mut witnesses = Vec::new();
    for d in &rings {
        let r = proof_chain_check(Arc::new(TabulatedRing::parse(d)?))?;
        for s in r.steps.iter().filter(|s| !s.holds()) {
            let mut w = s.witness.clone().unwrap_or_default();
            w.insert("ring".into(), r.ring.clone());
            w.insert("step".into(), s.step.clone());
            witnesses.push(w);
        }
        reports.push(r);
    }
    let ok = reports.iter().all(|r| r.pass());
    let bounds = max_card.map(|n| vec![("max_cardinality", json!(n))]).unwrap_or_default();
    let details = json!({ "rings": reports });
    Ok(report("proof-chain", params(desc, None, &bounds), Verdict::of(ok), witnesses, details))
}

fn obstruction(n: u32, prec: usize) -> Result<Report> {
    let r = obstruction_check(n, prec)?;
    let details = serde_json::to_value(&r).expect("serializable");
    Ok(report("obstruction", params(Some(&format!("Z/5^{n}")), Some(prec), &[]), Verdict::of(r.pass()), vec![], details))
}

fn coeff_eqs(samples: usize, oracle: u64, seed: u64) -> Result<Report> {
    let opts = SymbolicOptions { oracle_max_cardinality: oracle, engine_samples: samples, seed };
    let r = verify_displayed_equations_with(opts)?;
    let witnesses = r.engine.first_mismatch.iter().map(|m| witness(&[("mismatch", m.clone())])).collect();
    let bounds = [("samples", json!(samples)), ("oracle_max_cardinality", json!(oracle)), ("seed", json!(seed))];
    let details = serde_json::to_value(&r).expect("serializable");
    Ok(report("coeff-eqs", params(None, None, &bounds), Verdict::of(r.pass()), witnesses, details))
}

/// One acceptance criterion, run through the library.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub criterion: u8,
    pub verdict: Verdict,
    pub elapsed_ms: u64,
    pub summary: String,
}

fn timed(criterion: u8, f: impl FnOnce() -> Result<(Verdict, String)>) -> CriterionResult {
    let start = Instant::now();
    let (verdict, summary) = f().unwrap_or_else(|e| (Verdict::Fail, format!("error: {e}")));
    CriterionResult { criterion, verdict, elapsed_ms: start.elapsed().as_millis() as u64, summary }
}

/// Criteria 1 to 8. Criterion 9 is the property-test suite and runs under
/// `cargo test`.
pub fn criteria(profile: Profile) -> Vec<CriterionResult> {
    let full = profile == Profile::Full;
    let iter_prec = if full { 20 } else { 12 };
    let sweep: &[usize] = if full { &[8, 12, 16, 20] } else { &[8, 12, 16] };
    let samples = if full { 256 } else { 64 };
    vec![
        timed(1, || {
            let f5 = artin("F5")?;
            let sigma = base_sigma(Arc::clone(&f5), 16)?;
            let o = sigma.order(64);
            let c = base_sigma(f5, 8)?.hasse_conductor()?;
            let ok = o.value() == Some(5) && c.value == 2 && c.leading == 2;
            Ok((Verdict::of(ok), format!("order {:?}, conductor {} with leading {}", o.value(), c.value, c.leading)))
        }),
        timed(2, || {
            let mut verdicts = Vec::new();
            let mut points = 0;
            for d in ["F5", "F25", "F5[e]/(e^2)", "cyclo(3)"] {
                let r = iterates(d, 5, iter_prec)?;
                points += r.details["points"].as_u64().unwrap_or(0);
                verdicts.push(r.verdict);
            }
            Ok((Verdict::combine(verdicts), format!("{points} versal points, k <= 5, prec {iter_prec}")))
        }),
        timed(3, || {
            let mut verdicts = Vec::new();
            for m in 2..=5 {
                let ring = artin(&format!("cyclo({m})"))?;
                let point = crate::deformation::VersalPoint::new(Arc::clone(&ring), ring.parse_element("1+u")?)?;
                verdicts.push(Verdict::of(is_lift(versal_family(&point, 16)?.automorphism()).is_lift()));
            }
            Ok((Verdict::combine(verdicts), "y = 1 + u on cyclo(2..=5) at prec 16".into()))
        }),
        timed(4, || {
            let r = tangent_space(sweep)?;
            let ok = r.pass()
                && r.dimension == Some(1)
                && r.slices.iter().all(|s| s.class_count == 5 && s.images_distinct && s.images_exhaust);
            Ok((Verdict::of(ok), format!("dimension {:?} across {sweep:?}", r.dimension)))
        }),
        timed(5, || {
            let mut verdicts = Vec::new();
            let mut parts = Vec::new();
            for d in ["F5[e]/(e^2)", "F5[e]/(e^3)"] {
                let r = universality_scan(&Arc::new(TabulatedRing::parse(d)?), 4)?;
                verdicts.push(Verdict::of(r.pass()));
                parts.push(format!("{d}: {} diagonal, {} refuted", r.diagonal_equivalent, r.off_diagonal_refuted));
            }
            Ok((Verdict::combine(verdicts), parts.join("; ")))
        }),
        timed(6, || {
            let r = proof_chain(None, Some(625))?;
            let failing: Vec<String> = r.witnesses.iter().map(|w| format!("{} step {}", w["ring"], w["step"])).collect();
            let summary = if failing.is_empty() { "no counterexamples".to_string() } else { format!("counterexamples: {}", failing.join(", ")) };
            Ok((r.verdict, summary))
        }),
        timed(7, || {
            let r = coeff_eqs(samples, 125, 5)?;
            let w = r.details["engine"]["witnesses"].as_u64().unwrap_or(0);
            let verdict = if w < 1000 { Verdict::Fail } else { r.verdict };
            Ok((verdict, format!("{w} engine witnesses")))
        }),
        timed(8, || {
            let r = obstruction_check(2, 8)?;
            Ok((Verdict::of(r.pass()), format!("{} hom points, system consistent: {:?}", r.hom_points, r.system_consistent)))
        }),
    ]
}

fn verify_all(profile: Profile) -> Result<Report> {
    let results = criteria(profile);
    let verdict = Verdict::combine(results.iter().map(|c| c.verdict));
    let witnesses = results
        .iter()
        .filter(|c| c.verdict != Verdict::Pass)
        .map(|c| witness(&[("criterion", c.criterion.to_string()), ("summary", c.summary.clone())]))
        .collect();
    let name = match profile {
        Profile::Quick => "quick",
        Profile::Full => "full",
    };
    let details = json!({ "criteria": results });
    Ok(report("verify-all", params(None, None, &[("profile", json!(name))]), verdict, witnesses, details))
}
