use std::cmp::Ordering;

use num_traits::{One, Signed};

use crate::exactnum::{
    compare_products, rint, transcend, PowerTerm, Precision, QuadElem, Rational, RealInterval,
};
use crate::{Error, Result};

/// Products whose exact expansion stays below this many bits are compared
/// exactly in the field.
const EXACT_BITS: u64 = 1 << 22;

/// `base^exp` with a positive real base in `Q(√D)`.
#[derive(Clone, Debug)]
pub struct QPow {
    pub base: QuadElem,
    pub exp: u64,
}

impl QPow {
    pub fn new(base: QuadElem, exp: u64) -> Self {
        QPow { base, exp }
    }

    pub fn rational(q: Rational, d: &num_bigint::BigInt, exp: u64) -> Self {
        QPow::new(QuadElem::rational(q, d), exp)
    }

    fn bits(&self) -> u64 {
        let b = self.base.a().numer().bits()
            + self.base.a().denom().bits()
            + self.base.b().numer().bits()
            + self.base.b().denom().bits()
            + self.base.d().bits();
        b.saturating_mul(self.exp.max(1))
    }
}

/// How a magnitude comparison was settled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Settled {
    pub ordering: Option<Ordering>,
    pub method: String,
}

/// Compare `Π lhs` with `Π rhs`. Rational data goes through the power
/// comparison of `exactnum`; field elements are multiplied out when small
/// and otherwise compared through certified logarithms. `None` means the
/// budget ran out.
pub fn compare(lhs: &[QPow], rhs: &[QPow], max_bits: u32) -> Result<Settled> {
    for p in lhs.iter().chain(rhs) {
        if p.base.sign()? != Ordering::Greater {
            return Err(Error::Domain(format!("non-positive base {}", p.base)));
        }
    }
    if lhs.iter().chain(rhs).all(|p| p.base.is_rational()) {
        let terms = |s: &[QPow]| -> Vec<PowerTerm> {
            s.iter()
                .map(|p| PowerTerm::new(p.base.as_rational().unwrap().clone(), rint(p.exp)))
                .collect()
        };
        let prec = Precision {
            exact_bits: EXACT_BITS,
            max_interval_bits: max_bits.max(64),
        };
        return match compare_products(&terms(lhs), &terms(rhs), &prec) {
            Ok(c) => Ok(Settled {
                ordering: Some(c.ordering),
                method: c.method.label(),
            }),
            Err(Error::PrecisionExhausted { bits, .. }) => Ok(Settled {
                ordering: None,
                method: format!("undecided at {bits} bits"),
            }),
            Err(e) => Err(e),
        };
    }
    let size: u64 = lhs.iter().chain(rhs).map(QPow::bits).sum();
    if size <= EXACT_BITS {
        let prod = |s: &[QPow]| {
            s.iter().fold(QuadElem::one(lhs.iter().chain(rhs).next().unwrap().base.d()), |acc, p| {
                &acc * &p.base.pow(p.exp)
            })
        };
        let (a, b) = (prod(lhs), prod(rhs));
        return Ok(Settled {
            ordering: Some(a.cmp_real(&b)?),
            method: "exact".into(),
        });
    }
    let mut bits = 64u32;
    let max_exp = lhs.iter().chain(rhs).map(|p| p.exp).max().unwrap_or(1);
    let exp_bits = 64 - max_exp.leading_zeros();
    loop {
        let work = bits + exp_bits + 8;
        let side = |s: &[QPow]| -> Result<RealInterval> {
            let mut acc = RealInterval::point(Rational::from_integer(0.into()));
            for p in s {
                let iv = p.base.to_interval(work)?;
                if !iv.lo().is_positive() {
                    return Err(Error::PrecisionExhausted {
                        bits: work,
                        what: "base enclosure touches zero".into(),
                    });
                }
                let lo = transcend::ln(iv.lo(), work)?;
                let hi = transcend::ln(iv.hi(), work)?;
                let l = RealInterval::new(lo.lo().clone(), hi.hi().clone());
                acc = acc.add(&l.scale(&rint(p.exp))).rounded(work + 8);
            }
            Ok(acc)
        };
        let attempt = side(lhs).and_then(|l| Ok((l, side(rhs)?)));
        if let Ok((l, r)) = attempt {
            if let Some(o) = l.cmp_certified(&r) {
                if o != Ordering::Equal {
                    return Ok(Settled {
                        ordering: Some(o),
                        method: format!("logarithm at {bits} bits"),
                    });
                }
            }
        }
        if bits >= max_bits {
            return Ok(Settled {
                ordering: None,
                method: format!("undecided at {bits} bits"),
            });
        }
        bits = (bits * 2).min(max_bits);
    }
}

/// `2^k` as a rational, for assembling cleared bounds.
pub fn two_pow(k: u64) -> Rational {
    Rational::from_integer(num_bigint::BigInt::one() << k as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn rational_and_field_routes() {
        let d = BigInt::from(5);
        let q = |a: i64, b: i64| QuadElem::new(rint(a), rint(b), d.clone());
        // (1+√5)^2 = 6 + 2√5 > 10
        let s = compare(&[QPow::new(q(1, 1), 2)], &[QPow::new(q(10, 0), 1)], 256).unwrap();
        assert_eq!(s.ordering, Some(Ordering::Greater));
        let s = compare(&[QPow::new(q(3, 0), 4)], &[QPow::new(q(9, 0), 2)], 256).unwrap();
        assert_eq!(s.ordering, Some(Ordering::Equal));
        // (2+√5)^(3·10^6) vs 4^(3.15·10^6) resolved by logarithms
        let s = compare(
            &[QPow::new(q(2, 1), 3_000_000)],
            &[QPow::new(q(4, 0), 3_150_000)],
            1024,
        )
        .unwrap();
        assert_eq!(s.ordering, Some(Ordering::Less));
        assert!(s.method.starts_with("logarithm"));
        assert!(compare(&[QPow::new(q(-1, 0), 1)], &[], 64).is_err());
    }
}
