//! Sweep specifications, the verification driver and its JSON report.
//!
//! A sweep expands its families into `(form, h)` cells, enumerates each
//! cell, and runs the requested theorem checks, gap-principle audits and
//! pair verifications. Cells run in parallel; the report lists them in
//! expansion order and carries no timing, so equal inputs give
//! byte-identical output.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::algseq::{eligible_pairs, verify_pair, PairReport};
use crate::criteria::{self, skip_scope, TheoremId, TheoremVerdict};
use crate::exactnum::{exact_sqrt, parse_bigint, rint, Precision, QuadElem};
use crate::fault;
use crate::forms::DiagForm;
use crate::pade::{self, PadePair};
use crate::solver::{classify, enumerate_binomial_convergents, enumerate_box, gap_audit, AuditReport, Outcome, TieRule};
use crate::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// Where solutions are looked for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Search {
    /// `|x| <= x_bound`, `0 <= y <= y_bound`.
    Box { x: u64, y: u64 },
    /// Continued-fraction search of the positive quadrant, binomials only.
    Convergents { y_max: BigInt },
}

impl Search {
    fn to_json(&self) -> Value {
        match self {
            Search::Box { x, y } => json!({ "box": [x, y] }),
            Search::Convergents { y_max } => json!({ "convergents": y_max.to_string() }),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    /// `a x^r - b y^r` over a grid; `b < 0` gives definite forms for even `r`.
    Binomial {
        a: Vec<BigInt>,
        b: Vec<BigInt>,
        r: Vec<u32>,
        h: Vec<BigInt>,
    },
    /// `Tr(α(x + βy)^r)` with random `α, β` in `Z[√D]`.
    XiRandom {
        seed: u64,
        d: Vec<BigInt>,
        coeff_bound: i64,
        count: usize,
        r: Vec<u32>,
        h: Vec<BigInt>,
        /// Replace forms with `D < 0` by their reduced equivalents.
        reduce: bool,
    },
    Explicit { forms: Vec<Value>, h: Vec<BigInt> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaSpec {
    pub pairs_per_cell: usize,
    pub n_max: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadeSpec {
    pub n_max: u32,
    pub r_min: u32,
    pub r_max: u32,
    pub samples: usize,
    pub t_m_max: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub name: String,
    pub seed: u64,
    pub families: Vec<Family>,
    pub theorems: Vec<TheoremId>,
    pub search: Search,
    pub gap_audit: bool,
    pub lambda: Option<LambdaSpec>,
    pub pade: Option<PadeSpec>,
    pub tie_rule: TieRule,
    pub bits_budget: u32,
    source: Value,
}

fn field<'a>(v: &'a Value, k: &str) -> Option<&'a Value> {
    v.get(k).filter(|x| !x.is_null())
}

fn parse_int_value(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::Parse(format!("not an integer: {n}"))),
        Value::String(s) => parse_power(s),
        other => Err(Error::Parse(format!("expected an integer, got {other}"))),
    }
}

/// Decimal integers, optionally written `b^e` or `-b^e`.
pub fn parse_power(s: &str) -> Result<BigInt> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let v = match body.split_once('^') {
        Some((b, e)) => {
            let e: usize = e
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?;
            num_traits::pow(parse_bigint(b)?, e)
        }
        None => parse_bigint(body)?,
    };
    Ok(if neg { -v } else { v })
}

/// A list of integers: an array of numbers or strings, a single value, or
/// `{"range": [lo, hi]}` (inclusive).
fn parse_values(v: &Value, what: &str) -> Result<Vec<BigInt>> {
    let out = match v {
        Value::Array(xs) => xs.iter().map(parse_int_value).collect::<Result<Vec<_>>>()?,
        Value::Object(o) if o.contains_key("range") => {
            let r = o["range"]
                .as_array()
                .filter(|r| r.len() == 2)
                .ok_or_else(|| Error::Parse(format!("{what}: range must be [lo, hi]")))?;
            let lo = parse_int_value(&r[0])?;
            let hi = parse_int_value(&r[1])?;
            if &hi - &lo > BigInt::from(1_000_000) {
                return Err(Error::Parse(format!("{what}: range too long")));
            }
            let mut xs = Vec::new();
            let mut x = lo;
            while x <= hi {
                xs.push(x.clone());
                x += 1;
            }
            xs
        }
        other => vec![parse_int_value(other)?],
    };
    if out.is_empty() {
        return Err(Error::Parse(format!("{what}: empty list")));
    }
    Ok(out)
}

fn parse_small(v: &Value, what: &str) -> Result<Vec<u32>> {
    parse_values(v, what)?
        .iter()
        .map(|x| {
            u32::try_from(x.clone()).map_err(|_| Error::Parse(format!("{what}: {x} out of range")))
        })
        .collect()
}

fn require<'a>(v: &'a Value, k: &str, ctx: &str) -> Result<&'a Value> {
    field(v, k).ok_or_else(|| Error::Parse(format!("{ctx}: missing {k:?}")))
}

fn positive_hs(hs: Vec<BigInt>) -> Result<Vec<BigInt>> {
    if let Some(h) = hs.iter().find(|h| !h.is_positive()) {
        return Err(Error::Parse(format!("h must be positive, got {h}")));
    }
    Ok(hs)
}

fn parse_family(v: &Value) -> Result<Family> {
    let kind = require(v, "kind", "family")?
        .as_str()
        .ok_or_else(|| Error::Parse("family kind must be a string".into()))?;
    let h = positive_hs(parse_values(require(v, "h", kind)?, "h")?)?;
    match kind {
        "binomial" => Ok(Family::Binomial {
            a: parse_values(require(v, "a", kind)?, "a")?,
            b: parse_values(require(v, "b", kind)?, "b")?,
            r: parse_small(require(v, "r", kind)?, "r")?,
            h,
        }),
        "xi_random" => {
            let d = parse_values(require(v, "d", kind)?, "d")?;
            if let Some(bad) = d.iter().find(|d| d.is_zero() || (d.is_positive() && exact_sqrt(d).is_some())) {
                return Err(Error::Parse(format!("xi_random needs non-square D, got {bad}")));
            }
            let num = |k: &str| -> Result<u64> {
                require(v, k, kind)?
                    .as_u64()
                    .ok_or_else(|| Error::Parse(format!("{kind}: {k} must be a nonnegative integer")))
            };
            Ok(Family::XiRandom {
                seed: num("seed")?,
                d,
                coeff_bound: num("coeff_bound")?.max(1) as i64,
                count: num("count")? as usize,
                r: parse_small(require(v, "r", kind)?, "r")?,
                h,
                reduce: field(v, "reduce").and_then(Value::as_bool).unwrap_or(false),
            })
        }
        "explicit" => Ok(Family::Explicit {
            forms: require(v, "forms", kind)?
                .as_array()
                .cloned()
                .ok_or_else(|| Error::Parse("explicit: forms must be an array".into()))?,
            h,
        }),
        other => Err(Error::Parse(format!("unknown family kind {other:?}"))),
    }
}

fn parse_theorem(v: &Value) -> Result<TheoremId> {
    let (name, m, l, eps) = match v {
        Value::String(s) => (s.as_str(), None, None, None),
        Value::Object(_) => {
            let name = require(v, "id", "theorem")?
                .as_str()
                .ok_or_else(|| Error::Parse("theorem id must be a string".into()))?;
            let small = |k: &str| field(v, k).and_then(Value::as_u64).map(|x| x as u32);
            let eps = match field(v, "epsilon") {
                Some(Value::String(s)) => Some(s.clone()),
                Some(other) => return Err(Error::Parse(format!("epsilon must be a \"p/q\" string, got {other}"))),
                None => None,
            };
            (name, small("m"), small("l"), eps)
        }
        other => return Err(Error::Parse(format!("bad theorem entry {other}"))),
    };
    TheoremId::from_parts(name, m, l, eps.as_deref()).map_err(|e| Error::Parse(e.to_string()))
}

impl SweepSpec {
    pub fn from_json(v: &Value) -> Result<SweepSpec> {
        let families = require(v, "families", "sweep")?
            .as_array()
            .ok_or_else(|| Error::Parse("families must be an array".into()))?
            .iter()
            .map(parse_family)
            .collect::<Result<Vec<_>>>()?;
        let theorems = match field(v, "theorems") {
            Some(Value::Array(ts)) => ts.iter().map(parse_theorem).collect::<Result<Vec<_>>>()?,
            Some(_) => return Err(Error::Parse("theorems must be an array".into())),
            None => Vec::new(),
        };
        let search = match field(v, "search") {
            None => Search::Box { x: 60, y: 60 },
            Some(s) => {
                if let Some(b) = field(s, "box") {
                    let xs = parse_values(b, "box")?;
                    let get = |i: usize| -> Result<u64> {
                        xs.get(i)
                            .or(xs.first())
                            .and_then(|x| u64::try_from(x.clone()).ok())
                            .ok_or_else(|| Error::Parse("box bounds must be nonnegative".into()))
                    };
                    Search::Box { x: get(0)?, y: get(1)? }
                } else if let Some(c) = field(s, "convergents") {
                    Search::Convergents { y_max: parse_int_value(c)? }
                } else {
                    return Err(Error::Parse("search must be {\"box\": ..} or {\"convergents\": ..}".into()));
                }
            }
        };
        let lambda = field(v, "lambda").map(|l| LambdaSpec {
                pairs_per_cell: field(l, "pairs_per_cell").and_then(Value::as_u64).unwrap_or(8) as usize,
                n_max: field(l, "n_max").and_then(Value::as_u64).unwrap_or(3) as u32,
            });
        let pade = match field(v, "pade") {
            None => None,
            Some(p) => {
                let g = |k: &str, d: u64| field(p, k).and_then(Value::as_u64).unwrap_or(d) as u32;
                Some(PadeSpec {
                    n_max: g("n_max", 6),
                    r_min: g("r_min", 5),
                    r_max: g("r_max", 9),
                    samples: g("samples", 20) as usize,
                    t_m_max: g("t_m_max", 30),
                })
            }
        };
        let tie_rule = match field(v, "tie_rule").and_then(Value::as_str) {
            None | Some("low") => TieRule::Low,
            Some("high") => TieRule::High,
            Some(other) => return Err(Error::Parse(format!("tie_rule must be low or high, got {other:?}"))),
        };
        if families.is_empty() && pade.is_none() {
            return Err(Error::Parse("sweep has nothing to run".into()));
        }
        Ok(SweepSpec {
            name: field(v, "name").and_then(Value::as_str).unwrap_or("sweep").to_string(),
            seed: field(v, "seed").and_then(Value::as_u64).unwrap_or(0),
            families,
            theorems,
            search,
            gap_audit: field(v, "gap_audit").and_then(Value::as_bool).unwrap_or(false),
            lambda,
            pade,
            tie_rule,
            bits_budget: field(v, "bits_budget").and_then(Value::as_u64).unwrap_or(4096) as u32,
            source: v.clone(),
        })
    }

    pub fn parse(s: &str) -> Result<SweepSpec> {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(format!("sweep spec: {e}")))?;
        SweepSpec::from_json(&v)
    }

    /// The spec as given, for embedding in reports.
    pub fn source(&self) -> &Value {
        &self.source
    }

    /// Expand all families into cells, in a fixed order. Forms that fail to
    /// construct are kept as cells with an error.
    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for (fi, fam) in self.families.iter().enumerate() {
            match fam {
                Family::Binomial { a, b, r, h } => {
                    for r in r {
                        for a in a {
                            for b in b {
                                let form = DiagForm::binomial_signed(a, b, *r);
                                for h in h {
                                    out.push(Cell {
                                        family: fi,
                                        form: form.clone(),
                                        h: h.clone(),
                                        binomial: Some((a.clone(), b.clone())),
                                    });
                                }
                            }
                        }
                    }
                }
                Family::XiRandom { seed, d, coeff_bound, count, r, h, reduce } => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ self.seed.rotate_left(32));
                    for _ in 0..*count {
                        let mut form = random_trace_form(&mut rng, d, *coeff_bound, r);
                        if *reduce {
                            form = form.and_then(|f| if f.d().is_negative() { f.reduce().map(|(g, _)| g) } else { Ok(f) });
                        }
                        for h in h {
                            out.push(Cell {
                                family: fi,
                                form: form.clone(),
                                h: h.clone(),
                                binomial: None,
                            });
                        }
                    }
                }
                Family::Explicit { forms, h } => {
                    for f in forms {
                        let form = DiagForm::from_json(f);
                        for h in h {
                            out.push(Cell {
                                family: fi,
                                form: form.clone(),
                                h: h.clone(),
                                binomial: None,
                            });
                        }
                    }
                }
            }
        }
        out
    }
}

/// A random `Tr(α(x + βy)^r)` with `α, β` in `Z[√D]`, coordinates in
/// `[-bound, bound]` and `β` irrational.
pub fn random_trace_form(rng: &mut ChaCha8Rng, ds: &[BigInt], bound: i64, rs: &[u32]) -> Result<DiagForm> {
    let d = ds[rng.gen_range(0..ds.len())].clone();
    let r = rs[rng.gen_range(0..rs.len())];
    let mut coord = |nonzero: bool| loop {
        let x = rng.gen_range(-bound..=bound);
        if !nonzero || x != 0 {
            return x;
        }
    };
    let (a0, a1) = loop {
        let p = (coord(false), coord(false));
        if p != (0, 0) {
            break p;
        }
    };
    let b0 = coord(false);
    let b1 = coord(true);
    let alpha = QuadElem::new(rint(a0), rint(a1), d.clone());
    let beta = QuadElem::new(rint(b0), rint(b1), d);
    DiagForm::trace_form(&alpha, &beta, r)
}

/// One `(form, h)` pair of a sweep.
#[derive(Clone, Debug)]
pub struct Cell {
    pub family: usize,
    pub form: Result<DiagForm>,
    pub h: BigInt,
    /// `(a, b)` when the form is `a x^r - b y^r`.
    pub binomial: Option<(BigInt, BigInt)>,
}

#[derive(Clone, Debug)]
pub struct CellReport {
    pub index: usize,
    pub json: Value,
    pub verdicts: Vec<TheoremVerdict>,
    pub audit: Option<AuditReport>,
    pub pairs: Vec<PairReport>,
    /// Errors that stop a check from concluding (budgets, bad input).
    pub errors: Vec<String>,
    pub multi_element_classes: bool,
}

impl CellReport {
    pub fn falsifications(&self) -> usize {
        self.verdicts.iter().filter(|v| v.falsified()).count()
            + self.audit.as_ref().map_or(0, AuditReport::falsifications)
            + self.pairs.iter().filter(|p| p.falsified()).count()
    }
}

fn run_cell(spec: &SweepSpec, index: usize, cell: &Cell) -> CellReport {
    let mut rep = CellReport {
        index,
        json: json!({ "index": index, "family": cell.family, "h": cell.h.to_string() }),
        verdicts: Vec::new(),
        audit: None,
        pairs: Vec::new(),
        errors: Vec::new(),
        multi_element_classes: false,
    };
    let form = match &cell.form {
        Ok(f) => f,
        Err(e) => {
            rep.errors.push(format!("form: {e}"));
            rep.json["errors"] = json!(rep.errors);
            return rep;
        }
    };
    rep.json["form"] = json!({
        "provenance": form.provenance(),
        "r": form.r(),
        "coeffs": form.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "D": form.d().to_string(),
        "class": form.class().label(),
    });
    if let Err(e) = fill_cell(spec, cell, form, &mut rep) {
        rep.errors.push(e.to_string());
    }
    finish_cell_json(&mut rep);
    rep
}

fn fill_cell(spec: &SweepSpec, cell: &Cell, form: &DiagForm, rep: &mut CellReport) -> Result<()> {
    let h = &cell.h;
    let prec = Precision::with_budget(spec.bits_budget);
    let records = match &spec.search {
        Search::Box { x, y } => enumerate_box(form, h, *x, *y)?,
        Search::Convergents { y_max } => {
            let (a, b) = cell
                .binomial
                .as_ref()
                .filter(|(a, b)| a.is_positive() && b.is_positive())
                .ok_or_else(|| Error::Precondition("convergent search needs a positive binomial".into()))?;
            enumerate_binomial_convergents(a, b, form.r(), h, y_max, spec.bits_budget.max(1 << 12))?.0
        }
    };
    rep.json["search"] = spec.search.to_json();
    rep.json["solutions"] = json!(records.len());
    for t in &spec.theorems {
        let v = if t.is_binomial_only() {
            match &cell.binomial {
                Some((a, b)) if a.is_positive() && b.is_positive() => skip_scope(
                    t,
                    criteria::check_binomial(t, a, b, h, form.r(), &records, &prec),
                ),
                _ => Ok(TheoremVerdict::out_of_scope(t.clone(), "stated for a x^r - b y^r with a, b > 0")),
            }
        } else {
            criteria::check_or_skip(t, form, h, &records, &prec)
        };
        match v {
            Ok(v) => rep.verdicts.push(v),
            Err(e) => rep.errors.push(format!("{t}: {e}")),
        }
    }
    if !spec.gap_audit && spec.lambda.is_none() {
        return Ok(());
    }
    let cls = classify(form, &records, spec.tie_rule, spec.bits_budget)?;
    rep.multi_element_classes = cls.groups.values().any(|g| g.len() > 1);
    if spec.gap_audit {
        rep.audit = Some(gap_audit(form, h, &cls, spec.bits_budget)?);
    }
    if let Some(l) = &spec.lambda {
        for (k, s, t) in eligible_pairs(&cls, h, l.pairs_per_cell)? {
            rep.pairs.push(verify_pair(form, h, k, s, t, l.n_max, spec.bits_budget)?);
        }
    }
    Ok(())
}

fn finish_cell_json(rep: &mut CellReport) {
    let j = &mut rep.json;
    if !rep.verdicts.is_empty() {
        j["verdicts"] = Value::Array(rep.verdicts.iter().map(TheoremVerdict::to_json).collect());
    }
    if let Some(a) = &rep.audit {
        // keep the report compact: counts per check plus any non-passing entries
        let mut per: Map<String, Value> = Map::new();
        for c in &a.checks {
            let e = per.entry(c.name.to_string()).or_insert_with(|| json!({"pass": 0, "fail": 0, "undecided": 0}));
            let k = match c.outcome {
                Outcome::Pass => "pass",
                Outcome::Fail => "fail",
                Outcome::Undecided => "undecided",
            };
            e[k] = json!(e[k].as_u64().unwrap_or(0) + 1);
        }
        let bad: Vec<Value> = a
            .checks
            .iter()
            .filter(|c| c.outcome != Outcome::Pass)
            .map(|c| c.to_json())
            .collect();
        j["audit"] = json!({ "by_check": per, "non_passing": bad, "multi_element_classes": rep.multi_element_classes });
    }
    if !rep.pairs.is_empty() {
        j["pairs"] = Value::Array(rep.pairs.iter().map(PairReport::to_json).collect());
    }
    if !rep.errors.is_empty() {
        j["errors"] = json!(rep.errors);
    }
}

/// Results of the Padé property suite.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PadeSummary {
    pub checks: usize,
    pub failures: Vec<String>,
}

pub fn pade_suite(p: &PadeSpec, seed: u64) -> Result<PadeSummary> {
    let mut out = PadeSummary::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let note = |ok: bool, what: String, out: &mut PadeSummary| {
        out.checks += 1;
        if !ok {
            out.failures.push(what);
        }
    };
    // Gaussian rationals with |1 - z| <= 2, on a 1/64 grid
    let samples: Vec<_> = (0..p.samples)
        .map(|_| loop {
            let re = crate::exactnum::rat(rng.gen_range(-64..=192), 64);
            let im = crate::exactnum::rat(rng.gen_range(-128..=128), 64);
            let w = crate::Rational::from_integer(1.into()) - &re;
            if &w * &w + &im * &im <= rint(4) {
                break (re, im);
            }
        })
        .collect();
    for r in p.r_min..=p.r_max {
        for n in 1..=p.n_max {
            for g in 0..=1 {
                let pp = PadePair::build(n, g, r)?;
                note(pade::vanishing_order_holds(&pp)?, format!("vanishing order n={n} g={g} r={r}"), &mut out);
                note(pade::sup_bound_check(&pp, &samples), format!("sup bound n={n} g={g} r={r}"), &mut out);
                note(pade::c_coefficients_positive(&pp), format!("positive C coefficients n={n} g={g} r={r}"), &mut out);
                let i = g;
                note(pade::wronskian_check(n, i, r)?, format!("wronskian n={n} I={i} r={r}"), &mut out);
            }
        }
    }
    for r in 1..=p.r_max.max(12) {
        for a in -(r as i64)..=(r as i64) {
            for m in 0..=p.t_m_max {
                let ok = pade::integrality_t(a, r, m).is_ok();
                note(ok, format!("t({m}) integral for a={a} r={r}"), &mut out);
            }
        }
    }
    Ok(out)
}

/// Everything a `verify` run produces.
#[derive(Clone, Debug)]
pub struct Report {
    pub cells: Vec<CellReport>,
    pub pade: Option<PadeSummary>,
    pub json: Value,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub cells: usize,
    pub cells_with_errors: usize,
    pub verdicts: usize,
    pub hypotheses_met: usize,
    pub verdict_failures: usize,
    pub audit_checks: usize,
    pub audit_failures: usize,
    pub audit_undecided: usize,
    pub multi_element_cells: usize,
    pub pairs: usize,
    pub pair_failures: usize,
    pub pairs_undecided: usize,
    pub pade_checks: usize,
    pub pade_failures: usize,
    pub max_bits_used: u32,
}

impl Summary {
    pub fn falsifications(&self) -> usize {
        self.verdict_failures + self.audit_failures + self.pair_failures + self.pade_failures
    }

    pub fn undecided_rate(&self) -> f64 {
        if self.pairs == 0 {
            0.0
        } else {
            self.pairs_undecided as f64 / self.pairs as f64
        }
    }

    /// Something was actually tested.
    pub fn checked_anything(&self) -> bool {
        self.hypotheses_met + self.audit_checks + self.pairs + self.pade_checks > 0
    }

    /// Undecided outcomes that prevent a clean pass: any cell error or
    /// audit left open, or more than 5% of pairs undecided.
    pub fn undecided_critical(&self) -> bool {
        self.cells_with_errors > 0 || self.audit_undecided > 0 || self.undecided_rate() > 0.05
    }

    /// 0 pass, 1 falsification, 2 nothing conclusively checked.
    pub fn exit_code(&self) -> i32 {
        if self.falsifications() > 0 {
            1
        } else if !self.checked_anything() || self.undecided_critical() {
            2
        } else {
            0
        }
    }

    fn to_json(&self) -> Value {
        json!({
            "cells": self.cells,
            "cells_with_errors": self.cells_with_errors,
            "verdicts": self.verdicts,
            "hypotheses_met": self.hypotheses_met,
            "verdict_failures": self.verdict_failures,
            "audit_checks": self.audit_checks,
            "audit_failures": self.audit_failures,
            "audit_undecided": self.audit_undecided,
            "multi_element_cells": self.multi_element_cells,
            "pairs": self.pairs,
            "pair_failures": self.pair_failures,
            "pairs_undecided": self.pairs_undecided,
            "pair_undecided_rate": format!("{:.4}", self.undecided_rate()),
            "pade_checks": self.pade_checks,
            "pade_failures": self.pade_failures,
            "falsifications": self.falsifications(),
            "max_bits_used": self.max_bits_used,
            "exit_code": self.exit_code(),
        })
    }
}

impl Report {
    pub fn summary(&self) -> Summary {
        let mut s = Summary {
            cells: self.cells.len(),
            ..Summary::default()
        };
        for c in &self.cells {
            s.cells_with_errors += usize::from(!c.errors.is_empty());
            s.verdicts += c.verdicts.len();
            s.hypotheses_met += c.verdicts.iter().filter(|v| v.hypothesis_holds).count();
            s.verdict_failures += c.verdicts.iter().filter(|v| v.falsified()).count();
            if let Some(a) = &c.audit {
                s.audit_checks += a.checks.len();
                s.audit_failures += a.falsifications();
                s.audit_undecided += a.undecided();
            }
            s.multi_element_cells += usize::from(c.multi_element_classes);
            s.pairs += c.pairs.len();
            s.pair_failures += c.pairs.iter().filter(|p| p.falsified()).count();
            s.pairs_undecided += c.pairs.iter().filter(|p| p.undecided()).count();
            for p in &c.pairs {
                for l in &p.lambdas {
                    s.max_bits_used = s.max_bits_used.max(l.bits);
                }
            }
        }
        if let Some(p) = &self.pade {
            s.pade_checks = p.checks;
            s.pade_failures = p.failures.len();
        }
        s
    }

    pub fn exit_code(&self) -> i32 {
        self.summary().exit_code()
    }

    /// Pretty-printed JSON with a trailing newline.
    pub fn to_string_pretty(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.json).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Run a sweep.
pub fn run(spec: &SweepSpec) -> Result<Report> {
    let cells = spec.cells();
    let reports: Vec<CellReport> = cells
        .par_iter()
        .enumerate()
        .map(|(i, c)| run_cell(spec, i, c))
        .collect();
    let pade = spec.pade.as_ref().map(|p| pade_suite(p, spec.seed)).transpose()?;
    let mut rep = Report {
        cells: reports,
        pade,
        json: Value::Null,
    };
    let summary = rep.summary();
    rep.json = json!({
        "schema_version": SCHEMA_VERSION,
        "tool_version": env!("CARGO_PKG_VERSION"),
        "name": spec.name,
        "seed": spec.seed,
        "spec": spec.source,
        "faults": fault::active_names(),
        "summary": summary.to_json(),
        "pade": rep.pade.as_ref().map(|p| json!({ "checks": p.checks, "failures": p.failures })),
        "cells": rep.cells.iter().map(|c| c.json.clone()).collect::<Vec<_>>(),
    });
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(s: &str) -> SweepSpec {
        SweepSpec::parse(s).unwrap()
    }

    #[test]
    fn parses_values_and_powers() {
        assert_eq!(parse_power("10^3").unwrap(), BigInt::from(1000));
        assert_eq!(parse_power("-2^5").unwrap(), BigInt::from(-32));
        assert!(parse_power("2^x").is_err());
        let v = parse_values(&json!({"range": [2, 4]}), "a").unwrap();
        assert_eq!(v, vec![BigInt::from(2), BigInt::from(3), BigInt::from(4)]);
        assert!(parse_values(&json!([]), "a").is_err());
    }

    #[test]
    fn rejects_bad_specs() {
        for bad in [
            r#"{}"#,
            r#"{"families": [{"kind": "nope", "h": 1}]}"#,
            r#"{"families": [{"kind": "binomial", "a": 1, "b": 1, "r": 5, "h": 0}]}"#,
            r#"{"families": [{"kind": "xi_random", "seed": 1, "d": [4], "coeff_bound": 2, "count": 1, "r": 5, "h": 1}]}"#,
            r#"{"families": [{"kind": "binomial", "a": 1, "b": 1, "r": 5, "h": 1}], "theorems": ["T1_4"]}"#,
        ] {
            assert!(SweepSpec::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn random_family_is_deterministic() {
        let s = spec(r#"{"seed": 3, "families": [{"kind": "xi_random", "seed": 9, "d": [-3, -7, 5], "coeff_bound": 3, "count": 12, "r": [5, 6], "h": [10]}]}"#);
        let a: Vec<_> = s.cells().into_iter().map(|c| c.form.unwrap().coeffs().to_vec()).collect();
        let b: Vec<_> = s.cells().into_iter().map(|c| c.form.unwrap().coeffs().to_vec()).collect();
        assert_eq!(a.len(), 12);
        assert_eq!(a, b);
    }

    #[test]
    fn small_sweep_passes_and_is_reproducible() {
        let s = spec(
            r#"{"name": "t", "families": [
                {"kind": "binomial", "a": ["10^26"], "b": [3, -5], "r": [5, 6], "h": [1, 2]},
                {"kind": "xi_random", "seed": 1, "d": [-3, 5], "coeff_bound": 2, "count": 4, "r": [5], "h": [50]}
               ],
               "theorems": ["T1_1", "C1_5", {"id": "T1_4", "m": 4}, "T1_9", {"id": "T2_1", "l": 3}],
               "search": {"box": [20, 20]}, "gap_audit": true}"#,
        );
        let r1 = run(&s).unwrap();
        let r2 = run(&s).unwrap();
        assert_eq!(r1.to_string_pretty(), r2.to_string_pretty());
        let sum = r1.summary();
        assert_eq!(sum.falsifications(), 0, "{}", r1.to_string_pretty());
        assert!(sum.hypotheses_met > 0);
        assert_eq!(sum.exit_code(), 0);
    }

    #[test]
    fn nothing_applicable_gives_exit_two() {
        let s = spec(r#"{"families": [{"kind": "binomial", "a": [2], "b": [3], "r": [5], "h": [1]}], "theorems": ["C1_5"]}"#);
        assert_eq!(run(&s).unwrap().exit_code(), 2);
    }

    #[test]
    fn pade_suite_runs() {
        let s = spec(r#"{"families": [], "pade": {"n_max": 2, "r_min": 5, "r_max": 6, "samples": 4, "t_m_max": 5}}"#);
        let r = run(&s).unwrap();
        let sum = r.summary();
        assert!(sum.pade_checks > 0);
        assert_eq!(sum.pade_failures, 0);
        assert_eq!(sum.exit_code(), 0);
    }
}
