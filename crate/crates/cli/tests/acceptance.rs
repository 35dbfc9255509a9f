//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails. Time limits are pinned below and checked alongside the
//! mathematical conditions.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use diagthue::exactnum::rint;
use diagthue::solver::enumerate_binomial_convergents;
use diagthue::sweep::{random_trace_form, run, SweepSpec};
use diagthue::DiagForm;

const BITS: u32 = 4096;
const MAX_UNDECIDED_RATE: f64 = 0.05;

type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn repo(path: &str) -> String {
    format!("{}/../../{path}", env!("CARGO_MANIFEST_DIR"))
}

fn sweep(name: &str) -> SweepSpec {
    let text = std::fs::read_to_string(repo(&format!("sweeps/{name}.json"))).expect("sweep file");
    SweepSpec::parse(&text).expect("sweep parses")
}

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

fn random_forms(seed: u64, count: usize) -> Vec<DiagForm> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ds = [-3, -4, -7, -11, -23, 2, 3, 5, 6, 13].map(big);
    (0..count)
        .map(|_| random_trace_form(&mut rng, &ds, 4, &[3, 4, 5, 6, 7, 8]).expect("random form"))
        .collect()
}

fn bennett_anchor() -> Outcome {
    let y_max = big(10_000);
    let mut bad = Vec::new();
    for a in 1..=50i64 {
        for r in [5, 7, 9] {
            match enumerate_binomial_convergents(&big(a + 1), &big(a), r, &big(1), &y_max, BITS) {
                Ok((sols, _)) => {
                    let pts: Vec<_> = sols.iter().map(|s| (s.x.clone(), s.y.clone())).collect();
                    if pts != [(big(1), big(1))] {
                        bad.push(format!("a={a} r={r}: {pts:?}"));
                    }
                }
                Err(e) => bad.push(format!("a={a} r={r}: {e}")),
            }
        }
    }
    outcome(bad.is_empty(), format!("150 equations, exceptions {bad:?}"))
}

fn discriminant_identity() -> Outcome {
    let mut forms = random_forms(20, 160);
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut binomials = Vec::new();
    for _ in 0..40 {
        let a = rng.gen_range(1..=1000i64);
        let b = rng.gen_range(-1000..=1000i64);
        let b = if b == 0 { 1 } else { b };
        let r = rng.gen_range(3..=9u32);
        forms.push(DiagForm::binomial_signed(&big(a), &big(b), r).expect("binomial"));
        binomials.push((forms.len() - 1, a, b, r));
    }
    let mut bad = 0;
    for f in &forms {
        match f.discriminant() {
            Ok(d) if rint(d.resultant.clone()).abs() == d.via_identity.abs() => {}
            _ => bad += 1,
        }
    }
    for &(i, a, b, r) in &binomials {
        let expect = num_traits::pow(big(r as i64), r as usize) * num_traits::pow(big((a * b).abs()), r as usize - 1);
        if forms[i].abs_discriminant() != expect {
            bad += 1;
        }
    }
    outcome(bad == 0 && forms.len() == 200, format!("{} forms, {bad} mismatches", forms.len()))
}

fn hessian_jacobian() -> Outcome {
    let forms = random_forms(30, 50);
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let (mut checks, mut bad) = (0, 0);
    for f in &forms {
        for _ in 0..100 {
            let x = big(rng.gen_range(-1000..=1000));
            let y = big(rng.gen_range(-1000..=1000));
            checks += 2;
            bad += usize::from(!f.hessian_check(&x, &y).agrees());
            bad += usize::from(!f.jacobian_check(&x, &y).map(|c| c.agrees()).unwrap_or(false));
        }
    }
    outcome(bad == 0 && checks == 10_000, format!("{checks} point checks, {bad} disagreements"))
}

fn pade_suite() -> Outcome {
    let r = run(&sweep("pade")).expect("pade sweep");
    let p = r.pade.as_ref().expect("pade results");
    outcome(
        p.checks > 0 && p.failures.is_empty(),
        format!("{} checks, failures {:?}", p.checks, p.failures),
    )
}

fn gap_audit() -> Outcome {
    let s = run(&sweep("gap")).expect("gap sweep").summary();
    outcome(
        s.multi_element_cells >= 500 && s.audit_failures == 0 && s.audit_undecided == 0 && s.cells_with_errors == 0,
        format!(
            "{} cells with multi-element classes, {} checks, {} failed, {} undecided",
            s.multi_element_cells, s.audit_checks, s.audit_failures, s.audit_undecided
        ),
    )
}

fn theorem_sweep() -> Outcome {
    let report = run(&sweep("standard")).expect("standard sweep");
    let s = report.summary();
    let mut met: BTreeMap<&'static str, usize> = BTreeMap::new();
    for c in &report.cells {
        for v in &c.verdicts {
            *met.entry(v.theorem.name()).or_default() += usize::from(v.hypothesis_holds);
        }
    }
    let unmet: Vec<_> = met.iter().filter(|(_, n)| **n == 0).map(|(t, _)| *t).collect();
    outcome(
        s.verdict_failures == 0 && s.cells_with_errors == 0 && unmet.is_empty() && met.len() == 10,
        format!(
            "{} verdicts, {} with hypotheses met, {} falsified; theorems never applicable {unmet:?}",
            s.verdicts, s.hypotheses_met, s.verdict_failures
        ),
    )
}

fn lambda_pairs() -> Outcome {
    let r = run(&sweep("lambda")).expect("lambda sweep");
    let s = r.summary();
    let tilde_only = r
        .cells
        .iter()
        .flat_map(|c| &c.pairs)
        .flat_map(|p| &p.lambdas)
        .filter(|l| l.tilde_zero)
        .count();
    let rate = s.undecided_rate();
    outcome(
        s.pairs >= 100 && s.pair_failures == 0 && rate <= MAX_UNDECIDED_RATE,
        format!(
            "{} pairs, {} failed, undecided rate {rate:.4} (limit {MAX_UNDECIDED_RATE}), one-sided vanishing {tilde_only}, max bits {}",
            s.pairs, s.pair_failures, s.max_bits_used
        ),
    )
}

fn verify_cli(extra: &[&str], out: &std::path::Path) -> i32 {
    let spec = repo("sweeps/standard.json");
    Command::new(env!("CARGO_BIN_EXE_diagthue"))
        .args(["verify", &spec, "--out", out.to_str().unwrap()])
        .args(extra)
        .env_remove("DIAGTHUE_BITS_BUDGET")
        .output()
        .expect("binary runs")
        .status
        .code()
        .unwrap_or(-1)
}

fn negative_controls(dir: &std::path::Path) -> Outcome {
    let codes: Vec<(String, i32)> = ["gap-flip", "bound-off-by-one"]
        .iter()
        .map(|f| (f.to_string(), verify_cli(&["--inject-fault", f], &dir.join(format!("{f}.json")))))
        .collect();
    outcome(codes.iter().all(|(_, c)| *c == 1), format!("exit codes {codes:?}"))
}

fn determinism(dir: &std::path::Path) -> Outcome {
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    let ca = verify_cli(&[], &a);
    let cb = verify_cli(&[], &b);
    let same = std::fs::read(&a).ok().zip(std::fs::read(&b).ok()).is_some_and(|(x, y)| x == y);
    outcome(ca == 0 && cb == 0 && same, format!("exit codes {ca}/{cb}, byte-identical {same}"))
}

fn main() {
    let dir = tempfile::tempdir().expect("temp dir");
    let criteria: Vec<(u32, &str, Option<u64>, Check)> = vec![
        (1, "Bennett family has only (1, 1)", Some(60), Box::new(bennett_anchor)),
        (2, "discriminant identity on 200 forms", Some(60), Box::new(discriminant_identity)),
        (3, "Hessian and Jacobian identities", Some(60), Box::new(hessian_jacobian)),
        (4, "Pade property suite", Some(120), Box::new(pade_suite)),
        (5, "gap-principle audit", Some(600), Box::new(gap_audit)),
        (6, "theorem verdict sweep", Some(900), Box::new(theorem_sweep)),
        (7, "Lambda verification", Some(600), Box::new(lambda_pairs)),
        (8, "fault injection is detected", None, Box::new(|| negative_controls(dir.path()))),
        (9, "verify output is deterministic", None, Box::new(|| determinism(dir.path()))),
    ];
    let mut failed = 0;
    for (n, name, limit, check) in criteria {
        let t = Instant::now();
        let o = check();
        let took = t.elapsed();
        let in_time = limit.is_none_or(|s| took <= Duration::from_secs(s));
        let ok = o.ok && in_time;
        failed += usize::from(!ok);
        let limit = limit.map_or(String::new(), |s| format!(" / {s}s"));
        println!(
            "criterion {n}: {} {name}: {} [{:.1}s{limit}]",
            if ok { "PASS" } else { "FAIL" },
            o.detail,
            took.as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 9 criteria pass");
}
