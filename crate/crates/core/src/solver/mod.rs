//! Primitive solutions of `0 < |F(x, y)| <= h`, their analytic data, the
//! partition by related roots of unity and audits of the gap principles.
//!
//! Completeness is always relative to a search region: a box for general
//! forms, or `y <= y_max` for binomial forms searched through continued
//! fractions.

mod audit;
mod classify;
mod magnitude;

pub use audit::{gap_audit, AuditCheck, AuditReport, Outcome};
pub use classify::{
    classify, principal_root, related_index, root_of_unity, uv_ratio, RelatedClassification,
    RelatedIndex, TieRule,
};
pub use magnitude::{compare as compare_magnitudes, two_pow, QPow, Settled};

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::exactnum::{fmt_rational, root_bounds, QuadElem, Rational};
use crate::forms::DiagForm;
use crate::{Error, Result};

/// A primitive solution with the quantities attached to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionRecord {
    pub x: BigInt,
    pub y: BigInt,
    pub f_value: BigInt,
    pub xi: QuadElem,
    pub eta: QuadElem,
    /// `|ξ|²`: the norm when `D < 0`, the square when `D > 0`.
    pub xi_abs_sq: QuadElem,
    pub eta_abs_sq: QuadElem,
    /// `Z^{2r} = max(|ξ|², |η|²)`.
    pub z_pow_2r: QuadElem,
    /// `ζ² = F² / Z^{2r}`.
    pub zeta_sq: QuadElem,
    pub hessian: BigInt,
    /// Index `k` of the related root `e^{2πik/r}`; set by [`classify`].
    pub related_index: u32,
    /// The minimum defining the related root was attained twice (or the
    /// record has `u = 0` or `v = 0`) and a convention chose the index.
    pub tie: bool,
    /// Precision used to certify `related_index` (0 when decided exactly).
    pub decided_bits: u32,
}

/// `(x, y)` and `(-x, -y)` are identified by requiring `y > 0`, or `x > 0`
/// when `y = 0`.
pub fn canonical_sign(x: &BigInt, y: &BigInt) -> (BigInt, BigInt) {
    if y.is_negative() || (y.is_zero() && x.is_negative()) {
        (-x, -y)
    } else {
        (x.clone(), y.clone())
    }
}

impl SolutionRecord {
    pub fn new(form: &DiagForm, x: &BigInt, y: &BigInt) -> Result<SolutionRecord> {
        let (x, y) = canonical_sign(x, y);
        if !x.gcd(&y).is_one() {
            return Err(Error::Precondition(format!("({x}, {y}) is not primitive")));
        }
        let f_value = form.eval(&x, &y);
        if f_value.is_zero() {
            return Err(Error::Precondition(format!("F({x}, {y}) = 0")));
        }
        let (xi, eta) = form.xi_eta(&x, &y);
        if &xi - &eta != QuadElem::from_int(f_value.clone(), form.d()) {
            return Err(Error::Inconsistent(format!("ξ - η ≠ F at ({x}, {y})")));
        }
        let xi_abs_sq = xi.abs_sq();
        let eta_abs_sq = eta.abs_sq();
        let z_pow_2r = if xi_abs_sq.cmp_real(&eta_abs_sq)? == Ordering::Less {
            eta_abs_sq.clone()
        } else {
            xi_abs_sq.clone()
        };
        let f_sq = QuadElem::from_int(&f_value * &f_value, form.d());
        let zeta_sq = f_sq.checked_div(&z_pow_2r)?;
        let hessian = form.hessian_value(&x, &y)?;
        Ok(SolutionRecord {
            x,
            y,
            f_value,
            xi,
            eta,
            xi_abs_sq,
            eta_abs_sq,
            z_pow_2r,
            zeta_sq,
            hessian,
            related_index: 0,
            tie: false,
            decided_bits: 0,
        })
    }

    /// `ζ < 1`.
    pub fn zeta_below_one(&self) -> bool {
        self.zeta_sq.cmp_real(&QuadElem::one(self.zeta_sq.d())) == Ok(Ordering::Less)
    }

    /// `uv = 0`, i.e. one of `ξ`, `η` vanishes.
    pub fn degenerate(&self) -> bool {
        self.xi.is_zero() || self.eta.is_zero()
    }

    /// Order by decreasing `ζ`, ties by `(|y|, |x|, sign of x)`.
    pub fn zeta_order(&self, other: &SolutionRecord) -> Ordering {
        other
            .zeta_sq
            .cmp_real(&self.zeta_sq)
            .expect("ζ² is real")
            .then_with(|| self.y.abs().cmp(&other.y.abs()))
            .then_with(|| self.x.abs().cmp(&other.x.abs()))
            .then_with(|| self.x.sign().cmp(&other.x.sign()))
    }

    pub fn to_json(&self) -> Value {
        let q = |v: &QuadElem| match v.as_rational() {
            Some(r) => fmt_rational(r),
            None => v.to_string(),
        };
        json!({
            "x": self.x.to_string(),
            "y": self.y.to_string(),
            "F": self.f_value.to_string(),
            "zeta_sq": q(&self.zeta_sq),
            "related_index": self.related_index,
            "tie": self.tie,
            "hessian": self.hessian.to_string(),
        })
    }
}

/// Homogeneous Horner evaluation in `i128`, `None` on overflow.
fn eval_i128(coeffs: &[i128], x: i128, ypow: &[i128]) -> Option<i128> {
    let mut acc = coeffs[0];
    for (c, yp) in coeffs[1..].iter().zip(&ypow[1..]) {
        acc = acc.checked_mul(x)?.checked_add(c.checked_mul(*yp)?)?;
    }
    Some(acc)
}

/// All primitive `(x, y)` with `|x| <= x_bound`, `0 <= y <= y_bound` (in
/// canonical sign) and `0 < |F(x, y)| <= h`, sorted by `(y, x)`.
pub fn enumerate_box(
    form: &DiagForm,
    h: &BigInt,
    x_bound: u64,
    y_bound: u64,
) -> Result<Vec<SolutionRecord>> {
    if x_bound < 1 || y_bound < 1 || !h.is_positive() {
        return Err(Error::Parameter("box bounds and h must be positive".into()));
    }
    let xb = x_bound as i64;
    let small: Option<Vec<i128>> = form.coeffs().iter().map(|c| c.to_i128()).collect();
    let h128 = h.to_i128();
    let r = form.r() as usize;
    let rows: Vec<Vec<(i64, i64)>> = (0..=y_bound as i64)
        .into_par_iter()
        .map(|y| {
            let mut out = Vec::new();
            let ypow: Option<Vec<i128>> = (0..=r)
                .map(|k| (y as i128).checked_pow(k as u32))
                .collect();
            let (lo, hi) = if y == 0 { (1, 1) } else { (-xb, xb) };
            for x in lo..=hi {
                if x.gcd(&y) != 1 {
                    continue;
                }
                let fast = match (&small, &ypow, h128) {
                    (Some(c), Some(yp), Some(hh)) => {
                        eval_i128(c, x as i128, yp).map(|v| v != 0 && v.abs() <= hh)
                    }
                    _ => None,
                };
                let hit = fast.unwrap_or_else(|| {
                    let v = form.eval(&BigInt::from(x), &BigInt::from(y));
                    !v.is_zero() && &v.abs() <= h
                });
                if hit {
                    out.push((x, y));
                }
            }
            out
        })
        .collect();
    rows.into_iter()
        .flatten()
        .map(|(x, y)| SolutionRecord::new(form, &BigInt::from(x), &BigInt::from(y)))
        .collect()
}

/// Exhaustive double loop over the full box (both signs), folded to
/// canonical sign afterwards. Slow; used as an independent check.
pub fn enumerate_box_naive(
    form: &DiagForm,
    h: &BigInt,
    x_bound: i64,
    y_bound: i64,
) -> Vec<(BigInt, BigInt)> {
    let mut out = std::collections::BTreeSet::new();
    for y in -y_bound..=y_bound {
        for x in -x_bound..=x_bound {
            let (bx, by) = (BigInt::from(x), BigInt::from(y));
            if !bx.gcd(&by).is_one() {
                continue;
            }
            let v = form.binary_form().eval(&bx, &by);
            if !v.is_zero() && &v.abs() <= h {
                let (cx, cy) = canonical_sign(&bx, &by);
                out.insert((cy, cx));
            }
        }
    }
    out.into_iter().map(|(y, x)| (x, y)).collect()
}

/// What the continued-fraction search covered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergentCertificate {
    pub y_max: BigInt,
    /// Rows `1 <= y < crossover` were scanned exhaustively; above it every
    /// solution is a convergent of `(b/a)^{1/r}`.
    pub crossover: BigInt,
    pub convergents_checked: usize,
    /// Precision at which the expansion was certified (0 if not needed).
    pub cf_bits: u32,
}

impl ConvergentCertificate {
    pub fn to_json(&self) -> Value {
        json!({
            "y_max": self.y_max.to_string(),
            "crossover": self.crossover.to_string(),
            "convergents_checked": self.convergents_checked,
            "cf_bits": self.cf_bits,
        })
    }
}

/// Smallest `y >= 1` with `y^{r(r-2)} a b^{r-1} 2^{r(r-2)} > h^r r^{r(r-1)}`.
/// For such `y` a positive solution has `|x/y - θ| < 1/(2y²)`, using
/// `|x - θζy| >= θy·(2/r)` for every nontrivial `r`-th root of unity `ζ`.
fn crossover(a: &BigInt, b: &BigInt, r: u32, h: &BigInt) -> BigInt {
    let e = (r * (r - 2)) as usize;
    let k = a * num_traits::pow(b.clone(), (r - 1) as usize) * (BigInt::one() << e);
    let t = num_traits::pow(h.clone(), r as usize)
        * num_traits::pow(BigInt::from(r), (r * (r - 1)) as usize);
    let mut y = (&t / &k).nth_root(e as u32).max(BigInt::one());
    while num_traits::pow(y.clone(), e) * &k <= t {
        y += 1;
    }
    while y > BigInt::one() && num_traits::pow(&y - 1u32, e) * &k > t {
        y -= 1;
    }
    y
}

fn ceil_root(n: &BigInt, k: u32) -> BigInt {
    if !n.is_positive() {
        return BigInt::zero();
    }
    let t = n.nth_root(k);
    if &num_traits::pow(t.clone(), k as usize) < n {
        t + 1
    } else {
        t
    }
}

/// Positive solutions in row `y`, found from integer roots.
fn scan_row(a: &BigInt, b: &BigInt, r: u32, h: &BigInt, y: &BigInt, out: &mut Vec<(BigInt, BigInt)>) {
    let byr = b * num_traits::pow(y.clone(), r as usize);
    let hi = (&byr + h).div_floor(a).nth_root(r);
    let lo_num = &byr - h;
    let lo = if lo_num.is_positive() {
        ceil_root(&-((-lo_num).div_floor(a)), r)
    } else {
        BigInt::one()
    }
    .max(BigInt::one());
    let mut x = lo;
    while x <= hi {
        if x.gcd(y).is_one() {
            let v = a * num_traits::pow(x.clone(), r as usize) - &byr;
            if !v.is_zero() && &v.abs() <= h {
                out.push((x.clone(), y.clone()));
            }
        }
        x += 1;
    }
}

/// Partial quotients of `p/q` (with `q > 0`), up to `limit` terms.
fn cf_terms(q: &Rational, limit: usize) -> Vec<BigInt> {
    let (mut n, mut d) = (q.numer().clone(), q.denom().clone());
    let mut out = Vec::new();
    while !d.is_zero() && out.len() < limit {
        let (a, rem) = n.div_mod_floor(&d);
        out.push(a);
        n = d;
        d = rem;
    }
    out
}

/// All positive primitive solutions of `0 < |a x^r - b y^r| <= h` with
/// `y <= y_max`. Rows below an explicit crossover are scanned with integer
/// roots; above it only convergents of `(b/a)^{1/r}` can occur, and those
/// are generated from a certified enclosure refined up to `max_bits`.
pub fn enumerate_binomial_convergents(
    a: &BigInt,
    b: &BigInt,
    r: u32,
    h: &BigInt,
    y_max: &BigInt,
    max_bits: u32,
) -> Result<(Vec<SolutionRecord>, ConvergentCertificate)> {
    if !a.is_positive() || !b.is_positive() || !h.is_positive() || !y_max.is_positive() {
        return Err(Error::Parameter("a, b, h and y_max must be positive".into()));
    }
    let form = DiagForm::binomial(a, b, r)?;
    let ratio = Rational::new(b.clone(), a.clone());
    let rational_root = crate::exactnum::exact_rational_root(&ratio, r).is_some();
    // a rational θ gives no convergent shortcut; scan every row
    let y0 = if rational_root {
        y_max + 1
    } else {
        crossover(a, b, r, h)
    };
    let mut found = Vec::new();
    let mut y = BigInt::one();
    while y < y0 && &y <= y_max {
        scan_row(a, b, r, h, &y, &mut found);
        y += 1;
    }
    let mut checked = 0usize;
    let mut cf_bits = 0u32;
    if &y0 <= y_max {
        let mut bits = 64u32;
        let convergents = loop {
            let (lo, hi) = root_bounds(&ratio, r, bits);
            let tl = cf_terms(&lo, usize::MAX);
            let th = cf_terms(&hi, usize::MAX);
            let common: Vec<BigInt> = tl
                .iter()
                .zip(&th)
                .take_while(|(p, q)| p == q)
                .map(|(p, _)| p.clone())
                .collect();
            // drop the last common term: it can be the final term of a
            // terminating expansion rather than a term of θ
            let usable = common.len().saturating_sub(1);
            let mut convs = Vec::new();
            let (mut p0, mut q0, mut p1, mut q1) =
                (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
            let mut complete = false;
            for t in &common[..usable] {
                let p2 = t * &p1 + &p0;
                let q2 = t * &q1 + &q0;
                if &q2 > y_max {
                    complete = true;
                    break;
                }
                convs.push((p2.clone(), q2.clone()));
                p0 = std::mem::replace(&mut p1, p2);
                q0 = std::mem::replace(&mut q1, q2);
            }
            if complete {
                cf_bits = bits;
                break convs;
            }
            if bits >= max_bits {
                return Err(Error::PrecisionExhausted {
                    bits,
                    what: format!(
                        "continued fraction of ({ratio})^(1/{r}) certified to {} terms, last denominator {q1}",
                        usable
                    ),
                });
            }
            bits = (bits * 2).min(max_bits);
        };
        for (p, q) in convergents {
            if q < y0 || !p.is_positive() {
                continue;
            }
            checked += 1;
            let v = a * num_traits::pow(p.clone(), r as usize) - b * num_traits::pow(q.clone(), r as usize);
            if !v.is_zero() && &v.abs() <= h {
                found.push((p, q));
            }
        }
    }
    found.sort_by(|l, r| (&l.1, &l.0).cmp(&(&r.1, &r.0)));
    found.dedup();
    let records = found
        .iter()
        .map(|(x, y)| SolutionRecord::new(&form, x, y))
        .collect::<Result<Vec<_>>>()?;
    Ok((
        records,
        ConvergentCertificate {
            y_max: y_max.clone(),
            crossover: y0,
            convergents_checked: checked,
            cf_bits,
        },
    ))
}
