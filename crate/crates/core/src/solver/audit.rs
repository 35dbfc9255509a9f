use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use super::classify::{root_of_unity, uv_ratio};
use super::magnitude::{compare, two_pow, QPow};
use super::{RelatedClassification, SolutionRecord};
use crate::exactnum::{
    compare_products, rat, rint, transcend, PowerTerm, Precision, QuadElem, Rational,
    RealInterval,
};
use crate::fault::{self, Fault};
use crate::forms::DiagForm;
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    Undecided,
}

impl Outcome {
    fn from_holds(h: Option<bool>) -> Outcome {
        match h {
            Some(true) => Outcome::Pass,
            Some(false) => Outcome::Fail,
            None => Outcome::Undecided,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Undecided => "undecided",
        }
    }
}

/// One inequality checked on concrete solutions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditCheck {
    pub name: &'static str,
    pub class: Option<u32>,
    pub points: Vec<(BigInt, BigInt)>,
    pub outcome: Outcome,
    pub method: String,
    /// The comparands after clearing fractional exponents.
    pub lhs: String,
    pub rhs: String,
}

impl AuditCheck {
    pub fn to_json(&self) -> Value {
        json!({
            "check": self.name,
            "class": self.class,
            "points": self.points.iter().map(|(x, y)| [x.to_string(), y.to_string()]).collect::<Vec<_>>(),
            "outcome": self.outcome.label(),
            "method": self.method,
            "lhs": self.lhs,
            "rhs": self.rhs,
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AuditReport {
    pub checks: Vec<AuditCheck>,
}

impl AuditReport {
    pub fn count(&self, o: Outcome) -> usize {
        self.checks.iter().filter(|c| c.outcome == o).count()
    }

    pub fn falsifications(&self) -> usize {
        self.count(Outcome::Fail)
    }

    pub fn undecided(&self) -> usize {
        self.count(Outcome::Undecided)
    }

    pub fn of(&self, name: &str) -> impl Iterator<Item = &AuditCheck> + '_ {
        let name = name.to_string();
        self.checks.iter().filter(move |c| c.name == name)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "checks": self.checks.iter().map(AuditCheck::to_json).collect::<Vec<_>>(),
            "passed": self.count(Outcome::Pass),
            "failed": self.falsifications(),
            "undecided": self.undecided(),
        })
    }
}

fn show(side: &[QPow]) -> String {
    if side.is_empty() {
        return "1".into();
    }
    side.iter()
        .map(|p| {
            if p.exp == 1 {
                format!("({})", p.base)
            } else {
                format!("({})^{}", p.base, p.exp)
            }
        })
        .collect::<Vec<_>>()
        .join(" * ")
}

fn pt(s: &SolutionRecord) -> (BigInt, BigInt) {
    (s.x.clone(), s.y.clone())
}

struct Ctx<'a> {
    form: &'a DiagForm,
    d: BigInt,
    r: u64,
    h: BigInt,
    j2: Rational,
    max_bits: u32,
    out: Vec<AuditCheck>,
}

impl Ctx<'_> {
    /// Record `Π lhs ≥ Π rhs` (or `>` when `strict`).
    fn ge(
        &mut self,
        name: &'static str,
        class: Option<u32>,
        points: Vec<(BigInt, BigInt)>,
        lhs: Vec<QPow>,
        rhs: Vec<QPow>,
        strict: bool,
    ) -> Result<Option<bool>> {
        let s = compare(&lhs, &rhs, self.max_bits)?;
        let holds = s.ordering.map(|o| {
            if strict {
                o == Ordering::Greater
            } else {
                o != Ordering::Less
            }
        });
        let holds = if name == "gap_principle" && fault::is_active(Fault::GapFlip) {
            holds.map(|h| !h)
        } else {
            holds
        };
        self.out.push(AuditCheck {
            name,
            class,
            points,
            outcome: Outcome::from_holds(holds),
            method: s.method,
            lhs: show(&lhs),
            rhs: show(&rhs),
        });
        Ok(holds)
    }

    #[allow(clippy::too_many_arguments)]
    fn push(&mut self, name: &'static str, class: Option<u32>, points: Vec<(BigInt, BigInt)>, holds: Option<bool>, method: &str, lhs: String, rhs: String) {
        self.out.push(AuditCheck {
            name,
            class,
            points,
            outcome: Outcome::from_holds(holds),
            method: method.into(),
            lhs,
            rhs,
        });
    }

    fn two_h_pow(&self, e: u64) -> QPow {
        QPow::rational(rint(&self.h * 2u32), &self.d, e)
    }

    fn j2_pow(&self, e: u64) -> QPow {
        QPow::rational(self.j2.clone(), &self.d, e)
    }
}

/// Exact audit of the gap principles on a classified, box-complete solution
/// set. Every check is a comparison of products of powers of `Z^{2r}`,
/// `|j|^{2r}`, `h` and `2`, obtained by raising the stated inequality to a
/// power that clears all fractional exponents.
pub fn gap_audit(
    form: &DiagForm,
    h: &BigInt,
    cls: &RelatedClassification,
    max_bits: u32,
) -> Result<AuditReport> {
    let mut c = Ctx {
        form,
        d: form.d().clone(),
        r: form.r() as u64,
        h: h.clone(),
        j2: form.j_abs_pow_2r(),
        max_bits,
        out: Vec::new(),
    };
    gap_principle(&mut c, cls)?;
    chained(&mut c, cls)?;
    far_from_best(&mut c, cls)?;
    class_bounds(&mut c, cls)?;
    proximity(&mut c, cls)?;
    real_field(&mut c, cls)?;
    negative_field(&mut c, cls)?;
    Ok(AuditReport { checks: c.out })
}

/// `Z_i >= (|j|/2h) Z_{i-1}^{r-1}` for consecutive elements of `S'_ω` with
/// `ζ_{i-1} < 1`, raised to the power `2r(r-1)`.
fn gap_principle(c: &mut Ctx, cls: &RelatedClassification) -> Result<()> {
    let r = c.r;
    for &k in cls.groups.keys() {
        let sp = cls.s_prime(k).to_vec();
        if sp.len() < 2 {
            continue;
        }
        for w in sp.windows(2) {
            let (prev, cur) = (&w[0], &w[1]);
            if !prev.zeta_below_one() || prev.degenerate() || cur.degenerate() {
                continue;
            }
            let lhs = vec![QPow::new(cur.z_pow_2r.clone(), r - 1), c.two_h_pow(2 * r * (r - 1))];
            let rhs = vec![c.j2_pow(r - 1), QPow::new(prev.z_pow_2r.clone(), (r - 1) * (r - 1))];
            c.ge("gap_principle", Some(k), vec![pt(prev), pt(cur)], lhs, rhs, false)?;
        }
    }
    Ok(())
}

/// `Z_m >= (|j|/2h)^{(R(m)-1)/(r-2)} Z_1^{R(m)}` with `R(m) = (r-1)^{m-1}`,
/// whenever `ζ_1, ..., ζ_{m-1} < 1`; raised to the power `2r(r-2)`.
fn chained(c: &mut Ctx, cls: &RelatedClassification) -> Result<()> {
    let r = c.r;
    for &k in cls.groups.keys() {
        let sp = cls.s_prime(k).to_vec();
        if sp.len() < 2 {
            continue;
        }
        let first = &sp[0];
        for m in 2..=sp.len() {
            let prefix = &sp[..m - 1];
            if prefix.iter().any(|s| !s.zeta_below_one() || s.degenerate()) || sp[m - 1].degenerate() {
                break;
            }
            let rr = (r - 1).pow(m as u32 - 1);
            let lhs = vec![
                QPow::new(sp[m - 1].z_pow_2r.clone(), r - 2),
                c.two_h_pow(2 * r * (rr - 1)),
            ];
            let rhs = vec![c.j2_pow(rr - 1), QPow::new(first.z_pow_2r.clone(), rr * (r - 2))];
            c.ge("chained_gap", Some(k), vec![pt(first), pt(&sp[m - 1])], lhs, rhs, false)?;
        }
    }
    Ok(())
}

/// Lower bounds for every solution other than the one of largest `ζ`.
fn far_from_best(c: &mut Ctx, cls: &RelatedClassification) -> Result<()> {
    let Some(best) = cls.best().cloned() else {
        return Ok(());
    };
    let r = c.r;
    let one = QuadElem::one(&c.d);
    let best_ge_one = best.zeta_sq.cmp_real(&one)? != Ordering::Less;
    let h4 = rint(num_traits::pow(c.h.clone(), 4));
    let h2 = rint(&c.h * &c.h);
    // largest integer ν with |j| > 2^{1+ν/r} h^{2/r}, i.e. J2 > 4^{r+ν} h⁴
    let nu = if best_ge_one {
        let q = &c.j2 / (&h4 * two_pow(2 * r));
        let est = (q.numer().bits() as i64 - q.denom().bits() as i64) / 2;
        let mut nu = est + 2;
        while rational_four_pow(nu) >= q {
            nu -= 1;
        }
        Some(nu)
    } else {
        None
    };
    for s in cls.records() {
        if s == &best {
            continue;
        }
        let m = QPow::new(s.z_pow_2r.clone(), 1);
        // Z >= |j|^{1/2} / (2^{1/2} h^{1/r}), to the power 4r
        c.ge(
            "far_from_best_i",
            None,
            vec![pt(s)],
            vec![QPow::new(s.z_pow_2r.clone(), 2), QPow::rational(two_pow(2 * r) * &h4, &c.d, 1)],
            vec![c.j2_pow(1)],
            false,
        )?;
        if best_ge_one {
            // Z >= |j| / (2 h^{1/r}), to the power 2r
            c.ge(
                "far_from_best_ii",
                None,
                vec![pt(s)],
                vec![m.clone(), QPow::rational(two_pow(2 * r) * &h2, &c.d, 1)],
                vec![c.j2_pow(1)],
                false,
            )?;
            let nu = nu.expect("set when ζ₀ >= 1");
            // ζ < 2^{-ν}, squared: F² 4^ν < Z^{2r}
            let f2 = rint(&s.f_value * &s.f_value) * rational_four_pow(nu);
            let lhs = vec![m.clone()];
            let rhs = vec![QPow::rational(f2, &c.d, 1)];
            c.ge("far_from_best_iii", None, vec![pt(s)], lhs, rhs, true)?;
        }
    }
    Ok(())
}

fn rational_four_pow(nu: i64) -> Rational {
    if nu >= 0 {
        two_pow(2 * nu as u64)
    } else {
        two_pow(2 * (-nu) as u64).recip()
    }
}

/// Within a class: `Z >= |j|/(2h^{1/r})` on `S'_ω` when `|S'_ω| >= 2`, and
/// the second-smallest-`ζ` bound for chains of `t >= 3` solutions.
fn class_bounds(c: &mut Ctx, cls: &RelatedClassification) -> Result<()> {
    let r = c.r;
    let h2 = rint(&c.h * &c.h);
    for (&k, group) in &cls.groups {
        let sp = cls.s_prime(k);
        if sp.len() >= 2 {
            for s in sp {
                c.ge(
                    "class_lower_bound",
                    Some(k),
                    vec![pt(s)],
                    vec![QPow::new(s.z_pow_2r.clone(), 1), QPow::rational(two_pow(2 * r) * &h2, &c.d, 1)],
                    vec![c.j2_pow(1)],
                    false,
                )?;
            }
        }
        let small: Vec<&SolutionRecord> = group.iter().filter(|s| s.zeta_below_one()).collect();
        for t in 3..=small.len() {
            let rr = (r - 1).pow(t as u32 - 2);
            if rr > 1 << 20 {
                break;
            }
            // |j| > 2^{1+(r-2)/(r(R-1))} h^{2/r}, to the power 2r(R-1)
            let e = rint(rr - 1);
            let hyp = compare_products(
                &[PowerTerm::new(c.j2.clone(), e.clone())],
                &[
                    PowerTerm::int(2, rint(2 * r) * &e + rint(2 * (r - 2))),
                    PowerTerm::new(rint(c.h.clone()), rint(4) * &e),
                ],
                &Precision::with_budget(c.max_bits.max(64)),
            );
            let holds = match hyp {
                Ok(cmp) => cmp.ordering == Ordering::Greater,
                Err(_) => false,
            };
            if !holds {
                continue;
            }
            let s = small[t - 2];
            // ζ < 1/2, squared: 4F² < Z^{2r}
            let f2 = rint(&s.f_value * &s.f_value) * rint(4);
            c.ge(
                "class_second_zeta_half",
                Some(k),
                small[..t].iter().map(|s| pt(s)).collect(),
                vec![QPow::new(s.z_pow_2r.clone(), 1)],
                vec![QPow::rational(f2, &c.d, 1)],
                true,
            )?;
        }
    }
    Ok(())
}

/// `|ω - u/v|` against `π ζ/(2r)` and `π ζ/(3r)` for `D < 0`, and against
/// `(Z/|v|) ζ` for `D > 0`, `ζ < 1`; certified by intervals.
fn proximity(c: &mut Ctx, cls: &RelatedClassification) -> Result<()> {
    let r = c.r as u32;
    let negative = c.d.is_negative();
    for s in cls.records() {
        if s.degenerate() {
            continue;
        }
        let below = s.zeta_below_one();
        if !negative && !below {
            continue;
        }
        let mut bits = 64u32;
        let mut decided: Vec<(&'static str, Option<bool>, String)> = Vec::new();
        loop {
            decided.clear();
            let w = bits + 16;
            let dist = root_of_unity(s.related_index, r, w)
                .sub(&uv_ratio(c.form, &s.x, &s.y, w)?)
                .abs_sq();
            let zeta_sq = s.zeta_sq.to_interval(w)?;
            let pi = transcend::pi(w);
            if negative {
                let b1 = pi.sqr().mul(&zeta_sq).scale(&rat(1, 4 * (r as i64).pow(2)));
                decided.push(("root_proximity", le(&dist, &b1, false), format!("pi^2 zeta^2/(4r^2) = {b1}")));
                if below {
                    let b2 = pi.sqr().mul(&zeta_sq).scale(&rat(1, 9 * (r as i64).pow(2)));
                    decided.push(("root_proximity_strict", le(&dist, &b2, true), format!("pi^2 zeta^2/(9r^2) = {b2}")));
                }
            } else {
                // (Z/|v|)² = (Z^{2r}/|η|²)^{1/r}
                let ratio = s.z_pow_2r.checked_div(&s.eta_abs_sq)?.to_interval(w)?;
                let b = ratio.root(r, w)?.mul(&zeta_sq);
                decided.push(("root_proximity", le(&dist, &b, false), format!("(Z/|v|)^2 zeta^2 = {b}")));
            }
            if decided.iter().all(|d| d.1.is_some()) || bits >= c.max_bits {
                for (name, holds, rhs) in decided.drain(..) {
                    c.push(
                        name,
                        Some(s.related_index),
                        vec![pt(s)],
                        holds,
                        &format!("interval at {bits} bits"),
                        format!("|omega - u/v|^2 = {dist}"),
                        rhs,
                    );
                }
                break;
            }
            bits = (bits * 2).min(c.max_bits);
        }
    }
    Ok(())
}

fn le(a: &RealInterval, b: &RealInterval, strict: bool) -> Option<bool> {
    if a.hi() < b.lo() || (!strict && a.hi() == b.lo()) {
        Some(true)
    } else if a.lo() > b.hi() || (strict && a.lo() == b.hi() && a.is_point() && b.is_point()) {
        Some(false)
    } else {
        None
    }
}

/// Statements specific to `D > 0`: definite forms have `ζ >= 1` and at most
/// one solution once `|j| > 2h^{2/r}`; small-`ζ` solutions use at most one
/// or two opposite classes.
fn real_field(c: &mut Ctx, cls: &RelatedClassification) -> Result<()> {
    if !c.d.is_positive() {
        return Ok(());
    }
    let r = c.r;
    if c.form.class().definite {
        let one = QuadElem::one(&c.d);
        for s in cls.records() {
            let holds = s.zeta_sq.cmp_real(&one)? != Ordering::Less;
            c.push("definite_zeta_at_least_one", None, vec![pt(s)], Some(holds), "exact", format!("zeta^2 = {}", s.zeta_sq), "1".into());
        }
        let h4 = rint(num_traits::pow(c.h.clone(), 4));
        let big_j = c.j2 > two_pow(2 * r) * &h4;
        if big_j {
            let n = cls.len();
            c.push(
                "definite_at_most_one",
                None,
                cls.records().map(pt).collect(),
                Some(n <= 1),
                "exact",
                format!("solutions = {n}"),
                "1".into(),
            );
        }
    }
    if let Some(ok) = cls.positive_d_consistent {
        let classes: Vec<String> = cls
            .records()
            .filter(|s| s.zeta_below_one())
            .map(|s| s.related_index.to_string())
            .collect();
        c.push(
            "positive_d_classes",
            None,
            Vec::new(),
            Some(ok),
            "exact",
            format!("classes of zeta < 1 solutions: [{}]", classes.join(", ")),
            if r.is_multiple_of(2) { "two opposite" } else { "one" }.into(),
        );
    }
    Ok(())
}

/// Statements specific to `D < 0`: `|ξ| = |η|`, and the lower bound for
/// reduced forms.
fn negative_field(c: &mut Ctx, cls: &RelatedClassification) -> Result<()> {
    if !c.d.is_negative() {
        return Ok(());
    }
    let reduced = c.form.is_reduced();
    for s in cls.records() {
        c.push(
            "equal_moduli",
            None,
            vec![pt(s)],
            Some(s.xi_abs_sq == s.eta_abs_sq),
            "exact",
            format!("|xi|^2 = {}", s.xi_abs_sq),
            format!("|eta|^2 = {}", s.eta_abs_sq),
        );
        if reduced && !s.y.is_zero() {
            let holds = c.form.reduced_lower_bound_holds(&s.x, &s.y);
            c.push(
                "reduced_lower_bound",
                None,
                vec![pt(s)],
                holds,
                "exact",
                format!("|xi|^4 = {}", &s.xi_abs_sq * &s.xi_abs_sq),
                "(chi^r)^2 y^(4r) (3|D|)^r / 16^r".into(),
            );
        }
    }
    Ok(())
}
