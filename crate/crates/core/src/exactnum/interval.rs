use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::{exact_rational_root, fmt_rational, mul_pow2, Rational};
use crate::{Error, Result};

/// A closed real interval `[lo, hi]` with exact rational endpoints.
///
/// `precision_bits` records the working precision the enclosure was produced
/// at; it is informational and never affects containment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealInterval {
    lo: Rational,
    hi: Rational,
    precision_bits: u32,
}

impl RealInterval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        RealInterval {
            lo,
            hi,
            precision_bits: u32::MAX,
        }
    }

    pub fn point(q: Rational) -> Self {
        RealInterval {
            lo: q.clone(),
            hi: q,
            precision_bits: u32::MAX,
        }
    }

    pub fn from_int<T: Into<BigInt>>(n: T) -> Self {
        Self::point(Rational::from_integer(n.into()))
    }

    /// `[q - e, q + e]`.
    pub fn ball(q: Rational, e: Rational) -> Self {
        let e = e.abs();
        Self::new(&q - &e, q + e)
    }

    pub fn with_bits(mut self, bits: u32) -> Self {
        self.precision_bits = bits;
        self
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, q: &Rational) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&Rational::zero())
    }

    pub fn is_subset_of(&self, other: &RealInterval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn overlaps(&self, other: &RealInterval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(BigInt::from(2))
    }

    pub fn radius(&self) -> Rational {
        self.width() / Rational::from_integer(BigInt::from(2))
    }

    /// Certified sign, or `None` when the interval straddles zero.
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Certified comparison, or `None` when the enclosures overlap (and are
    /// not the same point).
    pub fn cmp_certified(&self, other: &RealInterval) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if self.lo > other.hi {
            Some(Ordering::Greater)
        } else if self.is_point() && other.is_point() && self.lo == other.lo {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    fn bits_of(&self, other: &RealInterval) -> u32 {
        self.precision_bits.min(other.precision_bits)
    }

    pub fn add(&self, other: &RealInterval) -> RealInterval {
        RealInterval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
            precision_bits: self.bits_of(other),
        }
    }

    pub fn sub(&self, other: &RealInterval) -> RealInterval {
        RealInterval {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
            precision_bits: self.bits_of(other),
        }
    }

    pub fn neg(&self) -> RealInterval {
        RealInterval {
            lo: -&self.hi,
            hi: -&self.lo,
            precision_bits: self.precision_bits,
        }
    }

    pub fn mul(&self, other: &RealInterval) -> RealInterval {
        let c = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        RealInterval {
            lo,
            hi,
            precision_bits: self.bits_of(other),
        }
    }

    pub fn scale(&self, q: &Rational) -> RealInterval {
        let (a, b) = (&self.lo * q, &self.hi * q);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        RealInterval {
            lo,
            hi,
            precision_bits: self.precision_bits,
        }
    }

    pub fn add_rational(&self, q: &Rational) -> RealInterval {
        RealInterval {
            lo: &self.lo + q,
            hi: &self.hi + q,
            precision_bits: self.precision_bits,
        }
    }

    pub fn recip(&self) -> Result<RealInterval> {
        if self.contains_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RealInterval {
            lo: self.hi.recip(),
            hi: self.lo.recip(),
            precision_bits: self.precision_bits,
        })
    }

    pub fn div(&self, other: &RealInterval) -> Result<RealInterval> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn abs(&self) -> RealInterval {
        if self.lo.is_negative() && self.hi.is_positive() {
            let hi = (-&self.lo).max(self.hi.clone());
            RealInterval {
                lo: Rational::zero(),
                hi,
                precision_bits: self.precision_bits,
            }
        } else if self.hi <= Rational::zero() {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn sqr(&self) -> RealInterval {
        let a = self.abs();
        RealInterval {
            lo: &a.lo * &a.lo,
            hi: &a.hi * &a.hi,
            precision_bits: self.precision_bits,
        }
    }

    pub fn powu(&self, e: u32) -> RealInterval {
        if e == 0 {
            return RealInterval::point(Rational::one());
        }
        if e.is_multiple_of(2) {
            let a = self.abs();
            RealInterval {
                lo: super::rational_pow(&a.lo, e as i64),
                hi: super::rational_pow(&a.hi, e as i64),
                precision_bits: self.precision_bits,
            }
        } else {
            RealInterval {
                lo: super::rational_pow(&self.lo, e as i64),
                hi: super::rational_pow(&self.hi, e as i64),
                precision_bits: self.precision_bits,
            }
        }
    }

    pub fn hull(&self, other: &RealInterval) -> RealInterval {
        RealInterval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
            precision_bits: self.bits_of(other),
        }
    }

    pub fn max(&self, other: &RealInterval) -> RealInterval {
        RealInterval {
            lo: self.lo.clone().max(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
            precision_bits: self.bits_of(other),
        }
    }

    /// Positive `k`-th root of a non-negative interval (any real root for odd
    /// `k`), enclosing each endpoint root at `bits` of precision.
    pub fn root(&self, k: u32, bits: u32) -> Result<RealInterval> {
        if k.is_multiple_of(2) && self.lo.is_negative() {
            return Err(Error::Domain("even root of a negative interval".into()));
        }
        let (lo, _) = signed_root_bounds(&self.lo, k, bits);
        let (_, hi) = signed_root_bounds(&self.hi, k, bits);
        Ok(RealInterval {
            lo,
            hi,
            precision_bits: bits.min(self.precision_bits),
        })
    }

    /// Outward rounding of both endpoints to `bits` significant bits, which
    /// keeps endpoint sizes bounded in long computations.
    pub fn rounded(&self, bits: u32) -> RealInterval {
        if self.lo.is_integer() && self.hi.is_integer() {
            return self.clone().with_bits(self.precision_bits.min(bits));
        }
        let mag = self.lo.abs().max(self.hi.abs());
        let e = if mag.is_zero() {
            0
        } else {
            mag.numer().bits() as i64 - mag.denom().bits() as i64 + 1
        };
        // grid spacing 2^(e - bits)
        let shift = bits as i64 - e;
        let scaled_lo = mul_pow2(&self.lo, shift);
        let scaled_hi = mul_pow2(&self.hi, shift);
        let lo = mul_pow2(&Rational::from_integer(scaled_lo.floor().to_integer()), -shift);
        let hi = mul_pow2(&Rational::from_integer(scaled_hi.ceil().to_integer()), -shift);
        RealInterval {
            lo,
            hi,
            precision_bits: self.precision_bits.min(bits),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "lo": fmt_rational(&self.lo), "hi": fmt_rational(&self.hi) })
    }

    /// Rough `f64` midpoint, for display only.
    pub fn approx_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.mid().to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for RealInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.6e}, {:.6e}]", self.lo_f64(), self.hi_f64())
    }
}

impl RealInterval {
    fn lo_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.lo.to_f64().unwrap_or(f64::NAN)
    }

    fn hi_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.hi.to_f64().unwrap_or(f64::NAN)
    }
}

fn signed_root_bounds(q: &Rational, k: u32, bits: u32) -> (Rational, Rational) {
    if q.is_negative() {
        let (lo, hi) = root_bounds(&-q, k, bits);
        (-hi, -lo)
    } else {
        root_bounds(q, k, bits)
    }
}

/// Dyadic bounds `lo <= q^(1/k) <= hi` for `q >= 0`.
///
/// The bounds collapse to the exact root when `q` is a `k`-th power;
/// otherwise `hi - lo <= 2^(-bits) * max(1, q^(1/k))`. Increasing `bits`
/// yields nested enclosures because the grid refines dyadically.
pub fn root_bounds(q: &Rational, k: u32, bits: u32) -> (Rational, Rational) {
    assert!(k >= 1 && !q.is_negative(), "root of a negative rational");
    if let Some(r) = exact_rational_root(q, k) {
        return (r.clone(), r);
    }
    // extra fractional bits for values below one keep the error relative
    let small = (q.denom().bits() as i64 - q.numer().bits() as i64).max(0) as u64;
    let s = bits as u64 + small / k as u64 + 2;
    let scaled = (q.numer() << (s * k as u64) as usize).div_floor(q.denom());
    let r0 = scaled.nth_root(k);
    let denom = BigInt::one() << s as usize;
    (
        Rational::new(r0.clone(), denom.clone()),
        Rational::new(r0 + 1, denom),
    )
}

/// Certified enclosure of `value^(1/degree)`.
pub fn embed_root(value: &Rational, degree: u32, bits: u32) -> Result<RealInterval> {
    if degree == 0 {
        return Err(Error::Domain("root of degree zero".into()));
    }
    if value.is_negative() && degree.is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "even root of negative rational {}",
            fmt_rational(value)
        )));
    }
    let (lo, hi) = signed_root_bounds(value, degree, bits);
    Ok(RealInterval::new(lo, hi).with_bits(bits))
}

/// An axis-aligned rectangle in the complex plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexInterval {
    pub re: RealInterval,
    pub im: RealInterval,
}

impl ComplexInterval {
    pub fn new(re: RealInterval, im: RealInterval) -> Self {
        ComplexInterval { re, im }
    }

    pub fn real(re: RealInterval) -> Self {
        ComplexInterval {
            re,
            im: RealInterval::point(Rational::zero()),
        }
    }

    pub fn point(re: Rational, im: Rational) -> Self {
        ComplexInterval::new(RealInterval::point(re), RealInterval::point(im))
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn add(&self, o: &ComplexInterval) -> ComplexInterval {
        ComplexInterval::new(self.re.add(&o.re), self.im.add(&o.im))
    }

    pub fn sub(&self, o: &ComplexInterval) -> ComplexInterval {
        ComplexInterval::new(self.re.sub(&o.re), self.im.sub(&o.im))
    }

    pub fn neg(&self) -> ComplexInterval {
        ComplexInterval::new(self.re.neg(), self.im.neg())
    }

    pub fn conj(&self) -> ComplexInterval {
        ComplexInterval::new(self.re.clone(), self.im.neg())
    }

    pub fn mul(&self, o: &ComplexInterval) -> ComplexInterval {
        let re = self.re.mul(&o.re).sub(&self.im.mul(&o.im));
        let im = self.re.mul(&o.im).add(&self.im.mul(&o.re));
        ComplexInterval::new(re, im)
    }

    pub fn mul_real(&self, x: &RealInterval) -> ComplexInterval {
        ComplexInterval::new(self.re.mul(x), self.im.mul(x))
    }

    pub fn scale(&self, q: &Rational) -> ComplexInterval {
        ComplexInterval::new(self.re.scale(q), self.im.scale(q))
    }

    /// `|z|²` as a real interval.
    pub fn abs_sq(&self) -> RealInterval {
        self.re.sqr().add(&self.im.sqr())
    }

    pub fn recip(&self) -> Result<ComplexInterval> {
        let n = self.abs_sq();
        let inv = n.recip()?;
        Ok(self.conj().mul_real(&inv))
    }

    pub fn div(&self, o: &ComplexInterval) -> Result<ComplexInterval> {
        Ok(self.mul(&o.recip()?))
    }

    pub fn powu(&self, mut e: u64) -> ComplexInterval {
        let mut base = self.clone();
        let mut acc = ComplexInterval::point(Rational::one(), Rational::zero());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Like [`powu`](Self::powu), but rounding outward to `bits` after each
    /// product so endpoint sizes stay bounded.
    pub fn powu_rounded(&self, mut e: u64, bits: u32) -> ComplexInterval {
        let mut base = self.rounded(bits);
        let mut acc = ComplexInterval::point(Rational::one(), Rational::zero());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rounded(bits);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).rounded(bits);
            }
        }
        acc
    }

    pub fn rounded(&self, bits: u32) -> ComplexInterval {
        ComplexInterval::new(self.re.rounded(bits), self.im.rounded(bits))
    }

    pub fn overlaps(&self, o: &ComplexInterval) -> bool {
        self.re.overlaps(&o.re) && self.im.overlaps(&o.im)
    }

    pub fn to_json(&self) -> Value {
        json!({ "re": self.re.to_json(), "im": self.im.to_json() })
    }
}
