//! Certified enclosures of `atan`, `π`, `ln`, `sin`, `cos` and `arg`.
//!
//! Series are summed in fixed point with `p` fractional bits; every rounding
//! step contributes at most a few units in the last place, and the enclosure
//! radius accounts for those plus the truncated tail.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::interval::{ComplexInterval, RealInterval};
use super::{mul_pow2, rat, rint, Rational};
use crate::{Error, Result};

const GUARD: u32 = 24;

fn to_fixed(x: &Rational, p: u32) -> BigInt {
    (x.numer() << p as usize).div_floor(x.denom())
}

fn from_fixed(v: BigInt, err: u64, p: u32) -> RealInterval {
    let e = BigInt::from(err);
    let lo = mul_pow2(&Rational::from_integer(&v - &e), -(p as i64));
    let hi = mul_pow2(&Rational::from_integer(v + e), -(p as i64));
    RealInterval::new(lo, hi)
}

fn shr_floor(v: BigInt, p: u32) -> BigInt {
    v.div_floor(&(BigInt::one() << p as usize))
}

/// `Σ (±1)^k x^(2k+1)/(2k+1)` for `|x| <= 1/2`; alternating for atan,
/// all-positive for atanh.
fn odd_series(x: &Rational, p: u32, alternating: bool) -> (BigInt, u64) {
    let xf = to_fixed(x, p);
    let x2 = shr_floor(&xf * &xf, p);
    let mut term = xf;
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    // |x| <= 1/2, so x^(2k+1) drops below one ulp after about p/2 terms
    while !term.is_zero() {
        let t = &term / BigInt::from(2 * k + 1);
        if alternating && k % 2 == 1 {
            sum -= t;
        } else {
            sum += t;
        }
        term = shr_floor(&term * &x2, p);
        k += 1;
    }
    // per term: at most 5 ulps of accumulated rounding; the tail after the
    // fixed-point term vanishes is below 2 ulps
    (sum, 6 * (k + 1) + 4)
}

fn atan_reduced(x: &Rational, bits: u32) -> RealInterval {
    let p = bits + GUARD;
    let (v, e) = odd_series(x, p, true);
    from_fixed(v, e, p)
}

fn atanh_reduced(x: &Rational, bits: u32) -> RealInterval {
    let p = bits + GUARD;
    let (v, e) = odd_series(x, p, false);
    from_fixed(v, e, p)
}

/// Enclosure of `π` (Machin's formula).
pub fn pi(bits: u32) -> RealInterval {
    let a = atan_reduced(&rat(1, 5), bits + 8).scale(&rint(16));
    let b = atan_reduced(&rat(1, 239), bits + 8).scale(&rint(4));
    a.sub(&b).rounded(bits + 8).with_bits(bits)
}

/// Enclosure of `atan(x)` for a rational `x`.
pub fn atan(x: &Rational, bits: u32) -> RealInterval {
    if x.is_negative() {
        return atan(&-x, bits).neg();
    }
    let half = rat(1, 2);
    let res = if x > &Rational::one() {
        pi(bits + 4).scale(&half).sub(&atan(&x.recip(), bits + 4))
    } else if x > &half {
        // atan x = atan(1/2) + atan((x - 1/2) / (1 + x/2))
        let y = (x - &half) / (Rational::one() + x * &half);
        atan_reduced(&half, bits + 4).add(&atan_reduced(&y, bits + 4))
    } else {
        atan_reduced(x, bits + 4)
    };
    res.rounded(bits + 8).with_bits(bits)
}

/// Enclosure of `ln 2 = 2 atanh(1/3)`.
pub fn ln2(bits: u32) -> RealInterval {
    atanh_reduced(&rat(1, 3), bits + 4)
        .scale(&rint(2))
        .rounded(bits + 8)
        .with_bits(bits)
}

/// Enclosure of `ln x` for rational `x > 0`.
pub fn ln(x: &Rational, bits: u32) -> Result<RealInterval> {
    if !x.is_positive() {
        return Err(Error::Domain("logarithm of a non-positive number".into()));
    }
    if x.is_one() {
        return Ok(RealInterval::point(Rational::zero()));
    }
    // x = 2^e m with 1 <= m < 2
    let mut e = x.numer().bits() as i64 - x.denom().bits() as i64;
    let mut m = mul_pow2(x, -e);
    if m < Rational::one() {
        e -= 1;
        m = mul_pow2(&m, 1);
    }
    let extra = 64 - (e.unsigned_abs().max(1)).leading_zeros();
    let p = bits + extra + 4;
    let y = (&m - Rational::one()) / (&m + Rational::one());
    let lm = atanh_reduced(&y, p).scale(&rint(2));
    let res = ln2(p).scale(&rint(e)).add(&lm);
    Ok(res.rounded(bits + 8).with_bits(bits))
}

/// Enclosures of `(sin θ, cos θ)` for rational `|θ| <= 8`.
fn sin_cos_point(theta: &Rational, bits: u32) -> (RealInterval, RealInterval) {
    assert!(theta.abs() <= rint(8), "sin/cos argument not reduced");
    let p = bits + GUARD + 8;
    let tf = to_fixed(theta, p);
    let mut term = BigInt::one() << p as usize; // θ^k / k!
    let mut sin = BigInt::zero();
    let mut cos = BigInt::zero();
    let mut k: u64 = 0;
    // running bound on the error of `term`, in ulps
    let tmag = theta.abs().ceil().to_integer();
    let tmag: f64 = num_traits::ToPrimitive::to_f64(&tmag).unwrap() + 1.0;
    let mut term_err = 0f64;
    let mut err = 0f64;
    loop {
        match k % 4 {
            0 => cos += &term,
            1 => sin += &term,
            2 => cos -= &term,
            _ => sin -= &term,
        }
        err += term_err;
        k += 1;
        let size = num_traits::ToPrimitive::to_f64(&(term.abs() >> p as usize)).unwrap() + 1.0;
        term = shr_floor(&term * &tf, p) / BigInt::from(k);
        term_err = (term_err * tmag + size + 1.0) / k as f64 + 1.0;
        if k as f64 > 2.0 * tmag && term.abs() <= BigInt::one() {
            break;
        }
    }
    // the remaining tail is dominated by a geometric series of ratio 1/2
    let err = (err + 2.0 * (term_err + 2.0)).ceil() as u64 + 4;
    (from_fixed(sin, err, p), from_fixed(cos, err, p))
}

/// Enclosures of `(sin θ, cos θ)` over an interval `θ` with `|θ| <= 8`,
/// using the Lipschitz bound 1 around the midpoint.
pub fn sin_cos(theta: &RealInterval, bits: u32) -> (RealInterval, RealInterval) {
    let m = theta.rounded(bits + 16).mid();
    let r = theta.width();
    let (s, c) = sin_cos_point(&m, bits);
    let widen = |iv: RealInterval| {
        RealInterval::new(iv.lo() - &r, iv.hi() + &r)
            .rounded(bits + 8)
            .with_bits(bits)
    };
    (widen(s), widen(c))
}

/// `e^(iθ)` as a complex rectangle.
pub fn cis(theta: &RealInterval, bits: u32) -> ComplexInterval {
    let (s, c) = sin_cos(theta, bits);
    ComplexInterval::new(c, s)
}

/// Enclosure of `atan` over a real interval (monotone).
pub fn atan_interval(x: &RealInterval, bits: u32) -> RealInterval {
    let lo = atan(&x.rounded(bits + 16).lo().clone(), bits);
    let hi = atan(&x.rounded(bits + 16).hi().clone(), bits);
    RealInterval::new(lo.lo().clone(), hi.hi().clone()).with_bits(bits)
}

/// Enclosure of `arg z` for a rectangle not containing the origin.
///
/// The value lies in `(-π, 3π/2)`: rectangles crossing the negative real
/// axis are reported on the branch `(π/2, 3π/2)` so that the result stays a
/// single interval.
pub fn arg(z: &ComplexInterval, bits: u32) -> Result<RealInterval> {
    let (re, im) = (&z.re, &z.im);
    let half_pi = pi(bits + 8).scale(&rat(1, 2));
    let res = if re.lo().is_positive() {
        atan_interval(&im.div(re)?, bits + 8)
    } else if im.lo().is_positive() {
        half_pi.sub(&atan_interval(&re.div(im)?, bits + 8))
    } else if im.hi().is_negative() {
        half_pi.neg().sub(&atan_interval(&re.div(im)?, bits + 8))
    } else if re.hi().is_negative() {
        pi(bits + 8).add(&atan_interval(&im.div(re)?, bits + 8))
    } else {
        return Err(Error::Precondition(
            "argument of an enclosure containing zero".into(),
        ));
    };
    Ok(res.rounded(bits + 8).with_bits(bits))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dec(s: &str) -> Rational {
        let (i, f) = s.split_once('.').unwrap();
        let den = num_traits::pow(BigInt::from(10), f.len());
        let num: BigInt = format!("{i}{f}").parse().unwrap();
        Rational::new(num, den)
    }

    #[test]
    fn pi_digits() {
        let iv = pi(200);
        let lo = dec("3.14159265358979323846264338327950288419716939937510");
        let hi = dec("3.14159265358979323846264338327950288419716939937511");
        assert!(iv.lo() <= &hi && iv.hi() >= &lo);
        assert!(iv.width() < mul_pow2(&rint(1), -190));
    }

    #[test]
    fn ln_values() {
        let l2 = ln2(128);
        assert!(l2.contains(&dec("0.693147180559945309417232121458")) || l2.overlaps(
            &RealInterval::new(
                dec("0.693147180559945309417232121458"),
                dec("0.693147180559945309417232121459")
            )
        ));
        let l10 = ln(&rint(10), 100).unwrap();
        assert!(l10.overlaps(&RealInterval::new(
            dec("2.302585092994045684017991454684"),
            dec("2.302585092994045684017991454685")
        )));
        let inv = ln(&rat(1, 10), 100).unwrap();
        assert!(inv.overlaps(&l10.neg()));
        assert!(ln(&rint(0), 10).is_err());
    }

    #[test]
    fn atan_identities() {
        // atan 1 = π/4
        let a = atan(&rint(1), 120);
        assert!(a.overlaps(&pi(120).scale(&rat(1, 4))));
        assert!(a.width() < mul_pow2(&rint(1), -110));
        let b = atan(&rint(-7), 80);
        assert!(b.sign() == Some(std::cmp::Ordering::Less));
    }

    #[test]
    fn sin_cos_values() {
        let (s, c) = sin_cos(&pi(100).scale(&rat(1, 6)), 100);
        assert!(s.overlaps(&RealInterval::point(rat(1, 2))));
        assert!(c.sqr().overlaps(&RealInterval::point(rat(3, 4))));
        assert!(s.width() < mul_pow2(&rint(1), -90));
        let (s8, c8) = sin_cos(&RealInterval::point(rint(8)), 64);
        assert!(s8.sqr().add(&c8.sqr()).contains(&rint(1)));
    }

    #[test]
    fn arg_quadrants() {
        let p = pi(80);
        let z = |a: i64, b: i64| ComplexInterval::point(rint(a), rint(b));
        assert!(arg(&z(1, 1), 80).unwrap().overlaps(&p.scale(&rat(1, 4))));
        assert!(arg(&z(-1, 1), 80).unwrap().overlaps(&p.scale(&rat(3, 4))));
        assert!(arg(&z(-1, -1), 80).unwrap().overlaps(&p.scale(&rat(-3, 4))));
        assert!(arg(&z(-1, 0), 80).unwrap().overlaps(&p));
        assert!(arg(&z(0, 0), 80).is_err());
    }
}
