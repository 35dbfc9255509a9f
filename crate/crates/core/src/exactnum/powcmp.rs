use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::transcend;
use super::{fmt_rational, rint, Rational};
use crate::{Error, Result};

/// `base^exp` with a positive rational base and rational exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerTerm {
    pub base: Rational,
    pub exp: Rational,
}

impl PowerTerm {
    pub fn new(base: Rational, exp: Rational) -> Self {
        PowerTerm { base, exp }
    }

    pub fn int<T: Into<BigInt>>(base: T, exp: Rational) -> Self {
        PowerTerm::new(rint(base), exp)
    }

    /// `base^1`.
    pub fn plain(base: Rational) -> Self {
        PowerTerm::new(base, Rational::one())
    }
}

impl fmt::Display for PowerTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = fmt_rational(&self.base);
        let b = if b.len() > 48 {
            format!("<{}-bit>", self.base.numer().bits() + self.base.denom().bits())
        } else {
            b
        };
        if self.exp.is_one() {
            write!(f, "{b}")
        } else {
            write!(f, "{b}^({})", fmt_rational(&self.exp))
        }
    }
}

/// How a comparison was settled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompareMethod {
    /// Both sides raised to a common integer power and compared as integers.
    Exact,
    /// Exponents cancel completely over a coprime base: the sides are equal.
    CoprimeBase,
    /// Certified logarithm enclosures separated the sides.
    Logarithm { bits: u32 },
}

impl CompareMethod {
    pub fn label(&self) -> String {
        match self {
            CompareMethod::Exact => "exact".into(),
            CompareMethod::CoprimeBase => "coprime-base".into(),
            CompareMethod::Logarithm { bits } => format!("log-interval@{bits}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub ordering: Ordering,
    pub method: CompareMethod,
}

/// Work limits for product comparisons.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Precision {
    /// Largest cleared integer (in bits) built for an exact comparison.
    pub exact_bits: u64,
    /// Largest working precision for logarithm enclosures.
    pub max_interval_bits: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Precision {
            exact_bits: 1 << 22,
            max_interval_bits: 4096,
        }
    }
}

impl Precision {
    pub fn with_budget(bits: u32) -> Self {
        Precision {
            max_interval_bits: bits.max(64),
            ..Precision::default()
        }
    }

    /// Always clear exponents, however large the integers get.
    pub fn exact_only() -> Self {
        Precision {
            exact_bits: u64::MAX,
            max_interval_bits: 64,
        }
    }
}

/// Refine a list of integers `> 1` into pairwise coprime factors that
/// multiplicatively generate every input.
fn coprime_base(inputs: impl IntoIterator<Item = BigInt>) -> Vec<BigInt> {
    let mut base: Vec<BigInt> = Vec::new();
    let mut stack: Vec<BigInt> = inputs.into_iter().collect();
    'outer: while let Some(x) = stack.pop() {
        if x <= BigInt::one() {
            continue;
        }
        for i in 0..base.len() {
            let g = base[i].gcd(&x);
            if g.is_one() {
                continue;
            }
            if g == base[i] && g == x {
                continue 'outer;
            }
            let c = base.swap_remove(i);
            stack.push(&c / &g);
            stack.push(&x / &g);
            stack.push(g);
            continue 'outer;
        }
        base.push(x);
    }
    base.sort();
    base
}

fn valuation(n: &mut BigInt, c: &BigInt) -> u64 {
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(c);
        if !r.is_zero() {
            return v;
        }
        *n = q;
        v += 1;
    }
}

/// Exponent vector of `Π lhs / Π rhs` over a coprime base.
fn reduce(lhs: &[PowerTerm], rhs: &[PowerTerm]) -> Result<Vec<(BigInt, Rational)>> {
    let mut parts = Vec::new();
    for (t, side) in lhs.iter().map(|t| (t, 1)).chain(rhs.iter().map(|t| (t, -1))) {
        if !t.base.is_positive() {
            return Err(Error::Domain(format!(
                "power comparison needs positive bases, got {}",
                fmt_rational(&t.base)
            )));
        }
        if t.exp.is_zero() || t.base.is_one() {
            continue;
        }
        parts.push((t, side));
    }
    let base = coprime_base(
        parts
            .iter()
            .flat_map(|(t, _)| [t.base.numer().clone(), t.base.denom().clone()]),
    );
    let mut exps = vec![Rational::zero(); base.len()];
    for (t, side) in parts {
        let e = &t.exp * rint(side);
        for (part, sign) in [(t.base.numer(), 1), (t.base.denom(), -1)] {
            let mut n = part.clone();
            for (i, c) in base.iter().enumerate() {
                let v = valuation(&mut n, c);
                if v > 0 {
                    exps[i] += &e * rint(v as i64 * sign);
                }
            }
            debug_assert!(n.is_one());
        }
    }
    Ok(base
        .into_iter()
        .zip(exps)
        .filter(|(_, e)| !e.is_zero())
        .collect())
}

/// Compare `Π lhs` with `Π rhs`.
///
/// Exponents are first collected over a coprime base, which detects exact
/// equality outright. The remaining comparison clears exponent denominators
/// and compares integers when the result fits in `prec.exact_bits`;
/// otherwise certified logarithms are refined up to
/// `prec.max_interval_bits`, and exhausting that budget is an error.
pub fn compare_products(
    lhs: &[PowerTerm],
    rhs: &[PowerTerm],
    prec: &Precision,
) -> Result<Comparison> {
    let terms = reduce(lhs, rhs)?;
    if terms.is_empty() {
        return Ok(Comparison {
            ordering: Ordering::Equal,
            method: CompareMethod::CoprimeBase,
        });
    }
    let l = terms
        .iter()
        .fold(BigInt::one(), |acc, (_, e)| acc.lcm(e.denom()));
    let mut size: f64 = 0.0;
    for (c, e) in &terms {
        let n = (e * Rational::from_integer(l.clone())).to_integer();
        size += n.abs().to_f64().unwrap_or(f64::INFINITY) * c.bits() as f64;
    }
    if size <= prec.exact_bits as f64 {
        let (mut num, mut den) = (BigInt::one(), BigInt::one());
        for (c, e) in &terms {
            let n = (e * Rational::from_integer(l.clone())).to_integer();
            let k = n.abs().to_usize().expect("exponent within exact budget");
            let p = num_traits::pow(c.clone(), k);
            if n.is_positive() {
                num *= p;
            } else {
                den *= p;
            }
        }
        return Ok(Comparison {
            ordering: num.cmp(&den),
            method: CompareMethod::Exact,
        });
    }
    let max_exp_bits = terms
        .iter()
        .map(|(_, e)| e.numer().bits().saturating_sub(e.denom().bits()))
        .max()
        .unwrap_or(0) as u32;
    let mut bits = 64u32;
    loop {
        let work = bits + max_exp_bits + 8;
        let mut sum = super::RealInterval::point(Rational::zero());
        for (c, e) in &terms {
            let lc = transcend::ln(&Rational::from_integer(c.clone()), work)?;
            sum = sum.add(&lc.scale(e)).rounded(work + 8);
        }
        if let Some(ordering) = sum.sign() {
            if ordering != Ordering::Equal {
                return Ok(Comparison {
                    ordering,
                    method: CompareMethod::Logarithm { bits },
                });
            }
        }
        if bits >= prec.max_interval_bits {
            return Err(Error::PrecisionExhausted {
                bits,
                what: "power-product comparison".into(),
            });
        }
        bits = (bits * 2).min(prec.max_interval_bits);
    }
}

/// Exact comparison of `base^(exp_num/exp_den)` with
/// `rhs^(rhs_exp_num/rhs_exp_den)` by clearing denominators.
pub fn pow_compare(
    base: &Rational,
    exp_num: i64,
    exp_den: u64,
    rhs: &Rational,
    rhs_exp_num: i64,
    rhs_exp_den: u64,
) -> Result<Ordering> {
    if exp_den == 0 || rhs_exp_den == 0 {
        return Err(Error::Domain("zero exponent denominator".into()));
    }
    let lhs = [PowerTerm::new(
        base.clone(),
        Rational::new(exp_num.into(), exp_den.into()),
    )];
    let rhs = [PowerTerm::new(
        rhs.clone(),
        Rational::new(rhs_exp_num.into(), rhs_exp_den.into()),
    )];
    Ok(compare_products(&lhs, &rhs, &Precision::exact_only())?.ordering)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, rint};

    #[test]
    fn spec_examples() {
        assert_eq!(pow_compare(&rint(2), 3, 2, &rint(3), 1, 1).unwrap(), Ordering::Less);
        assert_eq!(pow_compare(&rint(4), 1, 2, &rint(2), 1, 1).unwrap(), Ordering::Equal);
        assert_eq!(pow_compare(&rint(5), 35, 1, &rint(10), 24, 1).unwrap(), Ordering::Greater);
        assert!(pow_compare(&rint(0), 1, 1, &rint(2), 1, 1).is_err());
        assert!(pow_compare(&rint(-3), 1, 1, &rint(2), 1, 1).is_err());
    }

    #[test]
    fn coprime_base_refines() {
        let b = coprime_base([BigInt::from(12), BigInt::from(18), BigInt::from(35)]);
        for i in 0..b.len() {
            for j in 0..i {
                assert!(b[i].gcd(&b[j]).is_one());
            }
        }
        assert_eq!(b.iter().product::<BigInt>() % BigInt::from(105), BigInt::zero());
    }

    #[test]
    fn huge_exponents_use_logarithms() {
        // 2^(10^9) vs 3^(6 * 10^8): log2(3) * 0.6 < 1
        let lhs = [PowerTerm::int(2, rint(1_000_000_000))];
        let rhs = [PowerTerm::int(3, rint(600_000_000))];
        let c = compare_products(&lhs, &rhs, &Precision::default()).unwrap();
        assert_eq!(c.ordering, Ordering::Greater);
        assert!(matches!(c.method, CompareMethod::Logarithm { .. }));
        // equal sides are detected without logarithms: 6^N = 2^N 3^N
        let lhs = [PowerTerm::int(6, rint(1_000_000_007))];
        let rhs = [
            PowerTerm::int(2, rint(1_000_000_007)),
            PowerTerm::int(3, rint(1_000_000_007)),
        ];
        let c = compare_products(&lhs, &rhs, &Precision::default()).unwrap();
        assert_eq!(c.ordering, Ordering::Equal);
        assert_eq!(c.method, CompareMethod::CoprimeBase);
    }

    #[test]
    fn rational_bases() {
        // (9/4)^(1/2) = 3/2
        let c = compare_products(
            &[PowerTerm::new(rat(9, 4), rat(1, 2))],
            &[PowerTerm::plain(rat(3, 2))],
            &Precision::default(),
        )
        .unwrap();
        assert_eq!(c.ordering, Ordering::Equal);
    }
}
