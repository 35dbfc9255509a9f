//! Exact scalar arithmetic.
//!
//! Every order decision that can be settled by integer arithmetic is settled
//! that way: signs in `Q(√D)` by comparing `a²` with `b²D`, fractional powers
//! by clearing denominators. Intervals are reserved for genuinely
//! transcendental quantities (arguments of complex numbers, logarithms) and
//! always carry rigorous outward-rounded endpoints.

mod interval;
mod powcmp;
mod quad;
pub mod transcend;

pub use interval::{embed_root, root_bounds, ComplexInterval, RealInterval};
pub use powcmp::{
    compare_products, pow_compare, CompareMethod, Comparison, PowerTerm, Precision,
};
pub use quad::{quad_add, quad_conj, quad_mul, quad_norm, quad_sign, QuadElem};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational in canonical form (positive denominator,
/// coprime parts); canonicalisation is maintained by `num-rational`.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rint<T: Into<BigInt>>(n: T) -> Rational {
    Rational::from_integer(n.into())
}

/// Exact square root of an integer, if it is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    (&s * &s == *n).then_some(s)
}

/// Exact k-th root of a non-negative integer, if it exists.
pub fn exact_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if n.is_negative() {
        if k % 2 == 1 {
            return exact_root(&-n, k).map(|r| -r);
        }
        return None;
    }
    let s = n.nth_root(k);
    (num_traits::pow(s.clone(), k as usize) == *n).then_some(s)
}

/// Exact k-th root of a rational, if it exists.
pub fn exact_rational_root(q: &Rational, k: u32) -> Option<Rational> {
    let n = exact_root(q.numer(), k)?;
    let d = exact_root(q.denom(), k)?;
    Some(Rational::new(n, d))
}

pub fn rational_pow(q: &Rational, e: i64) -> Rational {
    if e >= 0 {
        Rational::new(
            num_traits::pow(q.numer().clone(), e as usize),
            num_traits::pow(q.denom().clone(), e as usize),
        )
    } else {
        assert!(!q.is_zero(), "zero to a negative power");
        rational_pow(&q.recip(), -e)
    }
}

/// Number of bits needed to write a rational (numerator plus denominator).
pub fn rational_bits(q: &Rational) -> u64 {
    q.numer().bits() + q.denom().bits()
}

/// Approximate `log2 |q|` (exact up to ±1); `None` for zero.
pub fn rational_log2_estimate(q: &Rational) -> Option<i64> {
    if q.is_zero() {
        return None;
    }
    Some(q.numer().bits() as i64 - q.denom().bits() as i64)
}

pub fn floor_rational(q: &Rational) -> BigInt {
    q.numer().div_floor(q.denom())
}

pub fn ceil_rational(q: &Rational) -> BigInt {
    -((-q.numer()).div_floor(q.denom()))
}

/// Multiply a rational by `2^k` for a possibly negative `k`.
pub fn mul_pow2(q: &Rational, k: i64) -> Rational {
    if k >= 0 {
        Rational::new(q.numer() << (k as usize), q.denom().clone())
    } else {
        Rational::new(q.numer().clone(), q.denom() << ((-k) as usize))
    }
}

/// Generalised binomial coefficient `q (q-1) ... (q-m+1) / m!` over the rationals.
pub fn gen_binomial(q: &Rational, m: u64) -> Rational {
    let mut acc = Rational::one();
    for i in 0..m {
        acc = acc * (q - rint(i)) / rint(i + 1);
    }
    acc
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Least common multiple of the denominators of a set of rationals.
pub fn lcm_denominators<'a>(qs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    qs.into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

pub fn to_u64_checked(n: &BigInt) -> Option<u64> {
    if n.sign() == Sign::Minus {
        None
    } else {
        n.to_u64()
    }
}

/// Format a rational as `"p/q"` (or `"p"` for integers).
pub fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> crate::Result<Rational> {
    let s = s.trim();
    let parse_int = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|e| crate::Error::Parse(format!("bad integer {t:?}: {e}")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(crate::Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(parse_int(n)?, d))
        }
        None => Ok(Rational::from_integer(parse_int(s)?)),
    }
}

pub fn parse_bigint(s: &str) -> crate::Result<BigInt> {
    s.trim()
        .parse::<BigInt>()
        .map_err(|e| crate::Error::Parse(format!("bad integer {s:?}: {e}")))
}
