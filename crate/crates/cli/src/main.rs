//! `diagthue`: analyze diagonalizable binary forms, enumerate solutions of
//! `0 < |F(x, y)| <= h`, dump Padé data and run verification sweeps.
//!
//! Exit codes: 0 pass, 1 falsification, 2 nothing conclusively checked,
//! 3 input error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};

use diagthue::criteria::{self, TheoremId, TheoremVerdict};
use diagthue::exactnum::{fmt_rational, Precision};
use diagthue::fault::{self, Fault};
use diagthue::pade::{self, PadePair};
use diagthue::solver::{classify, enumerate_binomial_convergents, enumerate_box, gap_audit, SolutionRecord, TieRule};
use diagthue::sweep::{self, parse_power, SweepSpec};
use diagthue::{DiagForm, Error};

#[derive(Parser)]
#[command(name = "diagthue", version, about = "Exact verification harness for diagonalizable Thue inequalities")]
struct Cli {
    /// Largest working precision, in bits, for certified comparisons.
    #[arg(long, global = true, env = "DIAGTHUE_BITS_BUDGET", default_value_t = 4096)]
    bits_budget: u32,
    /// Deliberately corrupt a check (gap-flip, bound-off-by-one).
    #[arg(long, global = true, hide = true)]
    inject_fault: Vec<String>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Invariants, solutions, classification, gap audit and theorem checks for one form.
    Analyze(AnalyzeArgs),
    /// Run a sweep specification and report.
    Verify(VerifyArgs),
    /// Padé coefficients, remainder series and Wronskian value.
    Pade(PadeArgs),
    /// List the primitive solutions of 0 < |F(x, y)| <= h.
    Enumerate(EnumerateArgs),
}

#[derive(Args)]
struct FormArgs {
    /// The binomial a x^r - b y^r (a, b nonzero; accepts 10^k notation).
    #[arg(long, num_args = 3, value_names = ["A", "B", "R"], allow_negative_numbers = true)]
    binomial: Option<Vec<String>>,
    /// A form in the JSON layout printed by `analyze --json`.
    #[arg(long, conflicts_with = "binomial")]
    form: Option<PathBuf>,
    #[arg(long, default_value = "1")]
    h: String,
}

#[derive(Args)]
struct SearchArgs {
    /// Search |x| <= X, 0 <= y <= Y (one value sets both).
    #[arg(long = "box", num_args = 1..=2, value_names = ["X", "Y"], default_values_t = [60u64])]
    bbox: Vec<u64>,
    /// Continued-fraction search up to this y (positive binomials only).
    #[arg(long)]
    ymax: Option<String>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    form: FormArgs,
    #[command(flatten)]
    search: SearchArgs,
    /// Theorem to check (T1_1 ... T2_1); repeatable.
    #[arg(long)]
    theorem: Vec<String>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    l: Option<u32>,
    /// Rational epsilon as "p/q".
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Sweep specification (JSON).
    spec: PathBuf,
    /// Override the sweep seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Write the full report here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the full report to stdout instead of the summary.
    #[arg(long)]
    json: bool,
    /// Print one JSON line per theorem verdict.
    #[arg(long)]
    jsonl: bool,
}

#[derive(Args)]
struct PadeArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    g: u32,
    #[arg(long)]
    r: u32,
    /// Number of remainder-series coefficients to print.
    #[arg(long, default_value_t = 8)]
    order: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct EnumerateArgs {
    #[command(flatten)]
    form: FormArgs,
    #[command(flatten)]
    search: SearchArgs,
    #[arg(long)]
    json: bool,
}

/// Anything that ends the run early with a given exit code.
struct Exit(u8, String);

impl From<Error> for Exit {
    fn from(e: Error) -> Exit {
        Exit(3, e.to_string())
    }
}

fn input(msg: impl Into<String>) -> Exit {
    Exit(3, msg.into())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Exit(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Exit> {
    for f in &cli.inject_fault {
        fault::enable(Fault::parse(f).ok_or_else(|| input(format!("unknown fault {f:?}")))?);
    }
    let bits = cli.bits_budget.max(64);
    match cli.cmd {
        Cmd::Analyze(a) => analyze(a, bits),
        Cmd::Verify(v) => verify(v, bits),
        Cmd::Pade(p) => pade_cmd(p),
        Cmd::Enumerate(e) => enumerate(e, bits),
    }
}

struct Subject {
    form: DiagForm,
    binomial: Option<(BigInt, BigInt)>,
    h: BigInt,
}

fn load_form(f: &FormArgs) -> Result<Subject, Exit> {
    let h = parse_power(&f.h)?;
    if h <= 0.into() {
        return Err(input("h must be positive"));
    }
    if let Some(b) = &f.binomial {
        let a = parse_power(&b[0])?;
        let bb = parse_power(&b[1])?;
        let r: u32 = b[2].parse().map_err(|_| input(format!("bad degree {:?}", b[2])))?;
        let form = DiagForm::binomial_signed(&a, &bb, r)?;
        return Ok(Subject { form, binomial: Some((a, bb)), h });
    }
    if let Some(p) = &f.form {
        let text = std::fs::read_to_string(p).map_err(|e| input(format!("{}: {e}", p.display())))?;
        let v: Value = serde_json::from_str(&text).map_err(|e| input(format!("{}: {e}", p.display())))?;
        let v = v.get("form").cloned().unwrap_or(v);
        return Ok(Subject { form: DiagForm::from_json(&v)?, binomial: None, h });
    }
    Err(input("give --binomial A B R or --form FILE"))
}

fn solutions(s: &Subject, search: &SearchArgs, bits: u32) -> Result<(Vec<SolutionRecord>, Value), Exit> {
    if let Some(y) = &search.ymax {
        let y = parse_power(y)?;
        let (a, b) = s
            .binomial
            .as_ref()
            .ok_or_else(|| input("--ymax needs --binomial"))?;
        let (sols, cert) = enumerate_binomial_convergents(a, b, s.form.r(), &s.h, &y, bits)?;
        Ok((sols, json!({ "convergents": y.to_string(), "certificate": cert.to_json() })))
    } else {
        let x = search.bbox[0];
        let y = *search.bbox.get(1).unwrap_or(&x);
        Ok((enumerate_box(&s.form, &s.h, x, y)?, json!({ "box": [x, y] })))
    }
}

fn print(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json"));
}

fn analyze(a: AnalyzeArgs, bits: u32) -> Result<u8, Exit> {
    let s = load_form(&a.form)?;
    let f = &s.form;
    let disc = f.discriminant()?;
    let dprime = criteria::delta_prime(f, &s.h)?;
    let (sols, search) = solutions(&s, &a.search, bits)?;
    let cls = classify(f, &sols, TieRule::Low, bits)?;
    let audit = gap_audit(f, &s.h, &cls, bits)?;
    let prec = Precision::with_budget(bits);
    let mut verdicts: Vec<TheoremVerdict> = Vec::new();
    for t in &a.theorem {
        let id = TheoremId::from_parts(t, a.m, a.l, a.epsilon.as_deref())?;
        let v = match &s.binomial {
            Some((x, y)) if id.is_binomial_only() => {
                criteria::skip_scope(&id, criteria::check_binomial(&id, x, y, &s.h, f.r(), &sols, &prec))?
            }
            _ => criteria::check_or_skip(&id, f, &s.h, &sols, &prec)?,
        };
        verdicts.push(v);
    }
    let (qa, qb, qc) = f.quad();
    let report = json!({
        "form": f.to_json(),
        "h": s.h.to_string(),
        "invariants": {
            "r": f.r(),
            "A": qa.to_string(), "B": qb.to_string(), "C": qc.to_string(),
            "D": f.d().to_string(),
            "class": f.class().label(),
            "reduced": f.is_reduced(),
            "discriminant_resultant": disc.resultant.to_string(),
            "discriminant_identity": fmt_rational(&disc.via_identity),
            "discriminant_sign_agrees": disc.sign_agrees,
            "delta_prime": fmt_rational(&dprime),
        },
        "search": search,
        "solutions": sols.iter().map(SolutionRecord::to_json).collect::<Vec<_>>(),
        "classes": cls.groups.iter().map(|(k, g)| json!({
            "k": k,
            "members": g.iter().map(|r| [r.x.to_string(), r.y.to_string()]).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "gap_audit": audit.to_json(),
        "verdicts": verdicts.iter().map(TheoremVerdict::to_json).collect::<Vec<_>>(),
        "faults": fault::active_names(),
    });
    if a.json {
        print(&report);
    } else {
        println!("form        {}", f.provenance());
        println!("coeffs      {}", f.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" "));
        println!("quadratic   A={qa} B={qb} C={qc} D={}", f.d());
        println!("class       {}{}", f.class().label(), if f.is_reduced() { ", reduced" } else { "" });
        println!("|Delta|     {}", disc.resultant.magnitude());
        println!("Delta'      {}", fmt_rational(&dprime));
        println!("solutions   {}", sols.len());
        for r in &sols {
            println!("  ({}, {})  F={}  k={}{}", r.x, r.y, r.f_value, r.related_index, if r.tie { " tie" } else { "" });
        }
        println!(
            "gap audit   {} checks, {} failed, {} undecided",
            audit.checks.len(),
            audit.falsifications(),
            audit.undecided()
        );
        for v in &verdicts {
            println!("{}", verdict_line(v));
        }
    }
    let failed = audit.falsifications() > 0 || verdicts.iter().any(TheoremVerdict::falsified);
    let undecided = audit.undecided() > 0;
    let unmet = !verdicts.is_empty() && verdicts.iter().all(|v| !v.hypothesis_holds);
    Ok(if failed {
        1
    } else if undecided || unmet {
        2
    } else {
        0
    })
}

fn verdict_line(v: &TheoremVerdict) -> String {
    let status = match (v.pass, &v.out_of_scope) {
        (_, Some(why)) => format!("out of scope ({why})"),
        (Some(true), _) => "pass".into(),
        (Some(false), _) => "FAIL".into(),
        (None, _) => "hypothesis unmet".into(),
    };
    let bound = v.bound.as_ref().map_or("-".to_string(), |b| b.to_string());
    format!("{:<22} observed {:>4}  bound {:>6}  {status}", v.theorem.to_string(), v.observed, bound)
}

fn verify(v: VerifyArgs, bits: u32) -> Result<u8, Exit> {
    let text = std::fs::read_to_string(&v.spec).map_err(|e| input(format!("{}: {e}", v.spec.display())))?;
    let mut raw: Value =
        serde_json::from_str(&text).map_err(|e| input(format!("{}: {e}", v.spec.display())))?;
    if let Some(seed) = v.seed {
        raw["seed"] = json!(seed);
    }
    if raw.get("bits_budget").is_none() {
        raw["bits_budget"] = json!(bits);
    }
    let spec = SweepSpec::from_json(&raw)?;
    let report = sweep::run(&spec).map_err(|e| Exit(3, e.to_string()))?;
    let text = report.to_string_pretty();
    if let Some(out) = &v.out {
        std::fs::write(out, &text).map_err(|e| input(format!("{}: {e}", out.display())))?;
    }
    if v.jsonl {
        for c in &report.cells {
            for verdict in &c.verdicts {
                let mut line = verdict.to_json();
                line["cell"] = json!(c.index);
                println!("{}", serde_json::to_string(&line).expect("json"));
            }
        }
    }
    if v.json {
        print!("{text}");
    } else if !v.jsonl {
        let s = report.summary();
        println!("sweep {:?}: {} cells", spec.name, s.cells);
        println!("  theorem verdicts   {} ({} with hypotheses met, {} failed)", s.verdicts, s.hypotheses_met, s.verdict_failures);
        println!("  gap audit checks   {} ({} failed, {} undecided)", s.audit_checks, s.audit_failures, s.audit_undecided);
        println!("  multi-class cells  {}", s.multi_element_cells);
        println!(
            "  solution pairs     {} ({} failed, {} undecided, rate {:.4})",
            s.pairs,
            s.pair_failures,
            s.pairs_undecided,
            s.undecided_rate()
        );
        println!("  pade checks        {} ({} failed)", s.pade_checks, s.pade_failures);
        println!("  cells with errors  {}", s.cells_with_errors);
        println!("  max bits used      {}", s.max_bits_used);
        println!("exit {}", s.exit_code());
    }
    Ok(report.exit_code() as u8)
}

fn pade_cmd(p: PadeArgs) -> Result<u8, Exit> {
    let pair = PadePair::build(p.n, p.g, p.r)?;
    let series = pair.remainder_series(p.order)?;
    let w = pade::wronskian_at_one(p.n, p.g, p.r)?;
    let out = json!({
        "n": p.n, "g": p.g, "r": p.r,
        "A": pair.a_coeffs().iter().map(fmt_rational).collect::<Vec<_>>(),
        "B": pair.b_coeffs().iter().map(fmt_rational).collect::<Vec<_>>(),
        "remainder_head": series.iter().map(fmt_rational).collect::<Vec<_>>(),
        "wronskian_at_one": fmt_rational(&w),
        "vanishing_order_holds": pade::vanishing_order_holds(&pair)?,
    });
    if p.json {
        print(&out);
    } else {
        println!("A  {}", out["A"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect::<Vec<_>>().join(" "));
        println!("B  {}", out["B"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect::<Vec<_>>().join(" "));
        println!(
            "remainder  {}",
            out["remainder_head"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect::<Vec<_>>().join(" ")
        );
        println!("W(1)  {}", fmt_rational(&w));
    }
    Ok(0)
}

fn enumerate(e: EnumerateArgs, bits: u32) -> Result<u8, Exit> {
    let s = load_form(&e.form)?;
    let (sols, search) = solutions(&s, &e.search, bits)?;
    if e.json {
        print(&json!({
            "form": s.form.to_json(),
            "h": s.h.to_string(),
            "search": search,
            "solutions": sols.iter().map(SolutionRecord::to_json).collect::<Vec<_>>(),
        }));
    } else {
        for r in &sols {
            println!("{} {} {}", r.x, r.y, r.f_value);
        }
    }
    Ok(0)
}
