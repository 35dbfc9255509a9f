use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use super::SolutionRecord;
use crate::exactnum::{floor_rational, rat, rint, transcend, ComplexInterval, QuadElem};
use crate::forms::DiagForm;
use crate::{Error, Result};

/// Which index a tied minimum receives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TieRule {
    #[default]
    Low,
    High,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RelatedIndex {
    pub index: u32,
    pub tie: bool,
    pub bits: u32,
}

/// `q^{1/r}` on the principal branch, with `arg q` taken in `(-π, 3π/2)`
/// so that negative reals sit inside the branch.
pub fn principal_root(q: &QuadElem, r: u32, bits: u32) -> Result<ComplexInterval> {
    if q.is_zero() {
        return Ok(ComplexInterval::point(rint(0), rint(0)));
    }
    let modulus = q.abs_sq().to_interval(bits + 8)?.root(2 * r, bits + 8)?;
    let theta = transcend::arg(&q.to_complex(bits + 8), bits + 8)?.scale(&rat(1, r as i64));
    Ok(transcend::cis(&theta, bits + 8)
        .mul_real(&modulus)
        .rounded(bits + 4))
}

/// `e^{2πik/r}`.
pub fn root_of_unity(k: u32, r: u32, bits: u32) -> ComplexInterval {
    let theta = transcend::pi(bits + 8).scale(&rat(2 * k as i64, r as i64));
    transcend::cis(&theta, bits + 8).rounded(bits + 4)
}

/// `u/v` with `u = (scale_ξ)^{1/r}(s₁x + t₁y)` and `v` likewise, both roots
/// principal. Requires `v ≠ 0`.
pub fn uv_ratio(form: &DiagForm, x: &BigInt, y: &BigInt, bits: u32) -> Result<ComplexInterval> {
    let (xf, ef) = (form.xi_factor(), form.eta_factor());
    let t = xf.linear_at(x, y).checked_div(&ef.linear_at(x, y))?;
    let rho = principal_root(&xf.scale, form.r(), bits)?
        .div(&principal_root(&ef.scale, form.r(), bits)?)?;
    Ok(rho.mul(&t.to_complex(bits + 8)).rounded(bits + 4))
}

fn negative(q: &QuadElem) -> bool {
    q.sign() == Ok(Ordering::Less)
}

fn resolve_tie(lower: i64, r: u32, rule: TieRule) -> u32 {
    let a = lower.rem_euclid(r as i64) as u32;
    let b = (lower + 1).rem_euclid(r as i64) as u32;
    match rule {
        TieRule::Low => a.min(b),
        TieRule::High => a.max(b),
    }
}

/// The index `k` minimising `|u - v e^{2πik/r}|`, which is the integer
/// nearest to `ψ = r·arg(u/v)/(2π)`. A tie (`ψ` a half-integer) happens
/// exactly when `ξ/η` is a negative real, which is decided in the field.
pub fn related_index(
    form: &DiagForm,
    rec: &SolutionRecord,
    rule: TieRule,
    max_bits: u32,
) -> Result<RelatedIndex> {
    let r = form.r();
    if rec.degenerate() {
        // v = 0 by convention, u = 0 ties every root
        return Ok(RelatedIndex {
            index: 0,
            tie: true,
            bits: 0,
        });
    }
    let (xf, ef) = (form.xi_factor(), form.eta_factor());
    let t = xf
        .linear_at(&rec.x, &rec.y)
        .checked_div(&ef.linear_at(&rec.x, &rec.y))?;
    if form.d().is_positive() {
        // real data: every argument is 0 or π
        let psi2 = negative(&xf.scale) as i64 - negative(&ef.scale) as i64
            + r as i64 * negative(&t) as i64;
        let psi2 = psi2.rem_euclid(2 * r as i64);
        return Ok(if psi2.is_even() {
            RelatedIndex {
                index: (psi2 / 2) as u32 % r,
                tie: false,
                bits: 0,
            }
        } else {
            RelatedIndex {
                index: resolve_tie((psi2 - 1) / 2, r, rule),
                tie: true,
                bits: 0,
            }
        });
    }
    let q = rec.xi.checked_div(&rec.eta)?;
    let tie = q.is_rational() && negative(&q);
    let half = rat(1, 2);
    let mut bits = 64u32;
    loop {
        let w = bits + 16;
        let a_xi = transcend::arg(&xf.scale.to_complex(w), w)?;
        let a_eta = transcend::arg(&ef.scale.to_complex(w), w)?;
        let a_t = transcend::arg(&t.to_complex(w), w)?;
        let two_pi = transcend::pi(w).scale(&rint(2));
        let psi = a_xi
            .sub(&a_eta)
            .add(&a_t.scale(&rint(r)))
            .div(&two_pi)?;
        if tie {
            let c = floor_rational(&psi.mid());
            // the half-integer c + 1/2 must be the only one in reach
            let cand = rint(c.clone()) + &half;
            if psi.contains(&cand) && psi.width() < half {
                let lower = c.to_string().parse::<i64>().map_err(|_| {
                    Error::Domain("related-root argument out of range".into())
                })?;
                return Ok(RelatedIndex {
                    index: resolve_tie(lower, r, rule),
                    tie: true,
                    bits,
                });
            }
        } else {
            let k = floor_rational(&(psi.lo() + &half));
            let lo_ok = psi.lo() + &half > rint(k.clone());
            let hi_ok = psi.hi() + &half < rint(&k + BigInt::one());
            if lo_ok && hi_ok {
                let k = k.mod_floor(&BigInt::from(r));
                return Ok(RelatedIndex {
                    index: k.to_string().parse::<u32>().expect("index below r"),
                    tie: false,
                    bits,
                });
            }
        }
        if bits >= max_bits {
            return Err(Error::PrecisionExhausted {
                bits,
                what: format!("related root of ({}, {})", rec.x, rec.y),
            });
        }
        bits = (bits * 2).min(max_bits);
    }
}

/// Solutions grouped by related root, each group sorted by decreasing `ζ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelatedClassification {
    pub r: u32,
    pub groups: BTreeMap<u32, Vec<SolutionRecord>>,
    pub tie_rule: TieRule,
    pub ties: usize,
    pub max_bits_used: u32,
    /// For `D > 0`: the records with `ζ < 1` use one class (`r` odd) or two
    /// opposite classes (`r` even). `None` when `D < 0`.
    pub positive_d_consistent: Option<bool>,
}

impl RelatedClassification {
    /// The element of largest `ζ` in a group, removed to form `S'_ω`.
    pub fn excluded_max(&self, k: u32) -> Option<&SolutionRecord> {
        self.groups.get(&k).and_then(|g| g.first())
    }

    /// `S'_ω` for `ω = e^{2πik/r}`.
    pub fn s_prime(&self, k: u32) -> &[SolutionRecord] {
        self.groups.get(&k).map(|g| &g[1.min(g.len())..]).unwrap_or(&[])
    }

    pub fn len(&self) -> usize {
        self.groups.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn records(&self) -> impl Iterator<Item = &SolutionRecord> {
        self.groups.values().flatten()
    }

    /// The solution of largest `ζ` overall.
    pub fn best(&self) -> Option<&SolutionRecord> {
        self.records().min_by(|a, b| a.zeta_order(b))
    }
}

pub fn classify(
    form: &DiagForm,
    sols: &[SolutionRecord],
    rule: TieRule,
    max_bits: u32,
) -> Result<RelatedClassification> {
    let r = form.r();
    let mut groups: BTreeMap<u32, Vec<SolutionRecord>> = BTreeMap::new();
    let mut ties = 0;
    let mut max_bits_used = 0;
    for s in sols {
        let ri = related_index(form, s, rule, max_bits)?;
        let mut rec = s.clone();
        rec.related_index = ri.index;
        rec.tie = ri.tie;
        rec.decided_bits = ri.bits;
        ties += ri.tie as usize;
        max_bits_used = max_bits_used.max(ri.bits);
        groups.entry(ri.index).or_default().push(rec);
    }
    for g in groups.values_mut() {
        g.sort_by(|a, b| a.zeta_order(b));
    }
    let positive_d_consistent = form.d().is_positive().then(|| {
        let mut ks: Vec<u32> = groups
            .values()
            .flatten()
            .filter(|s| s.zeta_below_one())
            .map(|s| s.related_index)
            .collect();
        ks.sort_unstable();
        ks.dedup();
        match ks.len() {
            0 | 1 => true,
            2 => r.is_multiple_of(2) && ks[1] - ks[0] == r / 2,
            _ => false,
        }
    });
    Ok(RelatedClassification {
        r,
        groups,
        tie_rule: rule,
        ties,
        max_bits_used,
        positive_d_consistent,
    })
}
