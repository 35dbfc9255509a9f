use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::interval::{root_bounds, ComplexInterval, RealInterval};
use super::{exact_sqrt, fmt_rational, parse_bigint, parse_rational, Rational};
use crate::{Error, Result};

/// An element `a + b√d` of `Q(√d)`.
///
/// `d` is kept exactly as supplied (no squarefree reduction). When `d` is a
/// perfect square the element is collapsed to the rational `a + b·√d`, so
/// `b != 0` implies `d` is not a square. A rational element (`b = 0`) may be
/// combined with an element of any field; two irrational elements must share
/// `d`.
#[derive(Clone, Debug)]
pub struct QuadElem {
    a: Rational,
    b: Rational,
    d: BigInt,
}

impl QuadElem {
    pub fn new(a: Rational, b: Rational, d: BigInt) -> Self {
        if b.is_zero() {
            return QuadElem { a, b, d };
        }
        match exact_sqrt(&d) {
            Some(s) => QuadElem {
                a: a + b * Rational::from_integer(s),
                b: Rational::zero(),
                d,
            },
            None => QuadElem { a, b, d },
        }
    }

    pub fn rational(a: Rational, d: &BigInt) -> Self {
        QuadElem {
            a,
            b: Rational::zero(),
            d: d.clone(),
        }
    }

    pub fn from_int<T: Into<BigInt>>(n: T, d: &BigInt) -> Self {
        Self::rational(Rational::from_integer(n.into()), d)
    }

    pub fn zero(d: &BigInt) -> Self {
        Self::rational(Rational::zero(), d)
    }

    pub fn one(d: &BigInt) -> Self {
        Self::rational(Rational::one(), d)
    }

    /// `√d` itself (rational when `d` is a perfect square).
    pub fn sqrt_d(d: &BigInt) -> Self {
        Self::new(Rational::zero(), Rational::one(), d.clone())
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    /// True when the element is a real number under the fixed embedding.
    pub fn is_real(&self) -> bool {
        self.b.is_zero() || self.d.is_positive()
    }

    fn field_of(&self, other: &QuadElem) -> Result<BigInt> {
        if self.d == other.d || other.b.is_zero() {
            Ok(self.d.clone())
        } else if self.b.is_zero() {
            Ok(other.d.clone())
        } else {
            Err(Error::FieldMismatch(self.d.clone(), other.d.clone()))
        }
    }

    pub fn checked_add(&self, other: &QuadElem) -> Result<QuadElem> {
        let d = self.field_of(other)?;
        Ok(QuadElem::new(&self.a + &other.a, &self.b + &other.b, d))
    }

    pub fn checked_sub(&self, other: &QuadElem) -> Result<QuadElem> {
        let d = self.field_of(other)?;
        Ok(QuadElem::new(&self.a - &other.a, &self.b - &other.b, d))
    }

    pub fn checked_mul(&self, other: &QuadElem) -> Result<QuadElem> {
        let d = self.field_of(other)?;
        let dd = Rational::from_integer(d.clone());
        let a = &self.a * &other.a + &self.b * &other.b * dd;
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(QuadElem::new(a, b, d))
    }

    pub fn checked_div(&self, other: &QuadElem) -> Result<QuadElem> {
        self.checked_mul(&other.inv()?)
    }

    /// The Galois conjugate `a - b√d`.
    pub fn conj(&self) -> QuadElem {
        QuadElem {
            a: self.a.clone(),
            b: -&self.b,
            d: self.d.clone(),
        }
    }

    /// `a² - b²d`, i.e. `x · conj(x)`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * Rational::from_integer(self.d.clone())
    }

    /// `x + conj(x) = 2a`.
    pub fn trace(&self) -> Rational {
        &self.a + &self.a
    }

    pub fn inv(&self) -> Result<QuadElem> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(QuadElem::new(&self.a / &n, -&self.b / &n, self.d.clone()))
    }

    pub fn scale(&self, q: &Rational) -> QuadElem {
        QuadElem::new(&self.a * q, &self.b * q, self.d.clone())
    }

    pub fn pow(&self, mut e: u64) -> QuadElem {
        let mut base = self.clone();
        let mut acc = QuadElem::one(&self.d);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn powi(&self, e: i64) -> Result<QuadElem> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs()))
        }
    }

    /// Exact sign of a real element; `√d` is embedded as the positive root.
    pub fn sign(&self) -> Result<Ordering> {
        let sa = self.a.cmp(&Rational::zero());
        let sb = self.b.cmp(&Rational::zero());
        if sb == Ordering::Equal {
            return Ok(sa);
        }
        if !self.d.is_positive() {
            return Err(Error::Domain(format!("{self} is not real")));
        }
        if sa == Ordering::Equal || sa == sb {
            return Ok(sb);
        }
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * Rational::from_integer(self.d.clone());
        // a² = b²d is impossible here since d is not a perfect square
        Ok(if a2 > b2d { sa } else { sb })
    }

    /// Exact comparison of two real elements.
    pub fn cmp_real(&self, other: &QuadElem) -> Result<Ordering> {
        self.checked_sub(other)?.sign()
    }

    pub fn abs_real(&self) -> Result<QuadElem> {
        Ok(if self.sign()? == Ordering::Less {
            -self
        } else {
            self.clone()
        })
    }

    /// `|x|²` as an element of the field: the norm when `d < 0`, the square
    /// when the element is real.
    pub fn abs_sq(&self) -> QuadElem {
        if self.is_real() {
            self * self
        } else {
            QuadElem::rational(self.norm(), &self.d)
        }
    }

    /// Membership in the ring of integers of `Q(√d)`: an irrational element is
    /// integral iff its trace and norm are rational integers.
    pub fn is_algebraic_integer(&self) -> bool {
        if self.b.is_zero() {
            self.a.is_integer()
        } else {
            self.trace().is_integer() && self.norm().is_integer()
        }
    }

    /// Re-express the element in `Q(√new_d)`. Requires `d / new_d` to be the
    /// square of a rational whenever the element is irrational.
    pub fn rebase(&self, new_d: &BigInt) -> Result<QuadElem> {
        if self.b.is_zero() {
            return Ok(QuadElem::rational(self.a.clone(), new_d));
        }
        if new_d.is_zero() {
            return Err(Error::FieldMismatch(self.d.clone(), new_d.clone()));
        }
        // √d = m √new_d with m² = d / new_d
        let ratio = Rational::new(self.d.clone(), new_d.clone());
        let m = super::exact_rational_root(&ratio, 2)
            .ok_or_else(|| Error::FieldMismatch(self.d.clone(), new_d.clone()))?;
        Ok(QuadElem::new(self.a.clone(), &self.b * m, new_d.clone()))
    }

    /// Certified real enclosure; requires a real element.
    pub fn to_interval(&self, bits: u32) -> Result<RealInterval> {
        if self.b.is_zero() {
            return Ok(RealInterval::point(self.a.clone()));
        }
        if !self.d.is_positive() {
            return Err(Error::Domain(format!("{self} is not real")));
        }
        let s = sqrt_interval(&self.d, bits);
        Ok(RealInterval::point(self.a.clone())
            .add(&s.scale(&self.b))
            .rounded(bits))
    }

    /// Certified complex enclosure (`√d = i√|d|` when `d < 0`).
    pub fn to_complex(&self, bits: u32) -> ComplexInterval {
        if self.b.is_zero() || self.d.is_positive() {
            let re = self
                .to_interval(bits)
                .expect("real element always embeds");
            return ComplexInterval::real(re);
        }
        let s = sqrt_interval(&-&self.d, bits);
        ComplexInterval::new(
            RealInterval::point(self.a.clone()),
            s.scale(&self.b).rounded(bits),
        )
    }

    pub fn to_json(&self) -> Value {
        json!({
            "a": fmt_rational(&self.a),
            "b": fmt_rational(&self.b),
            "d": self.d.to_string(),
        })
    }

    pub fn from_json(v: &Value) -> Result<QuadElem> {
        let field = |k: &str| {
            v.get(k)
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Parse(format!("quadratic element missing string field {k:?}")))
        };
        Ok(QuadElem::new(
            parse_rational(field("a")?)?,
            parse_rational(field("b")?)?,
            parse_bigint(field("d")?)?,
        ))
    }
}

fn sqrt_interval(n: &BigInt, bits: u32) -> RealInterval {
    let (lo, hi) = root_bounds(&Rational::from_integer(n.clone()), 2, bits + 8);
    RealInterval::new(lo, hi)
}

impl PartialEq for QuadElem {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b && (self.b.is_zero() || self.d == other.d)
    }
}

impl Eq for QuadElem {}

impl Hash for QuadElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.a.hash(state);
        self.b.hash(state);
        if !self.b.is_zero() {
            self.d.hash(state);
        }
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", fmt_rational(&self.a))
        } else {
            write!(
                f,
                "{} + {}*sqrt({})",
                fmt_rational(&self.a),
                fmt_rational(&self.b),
                self.d
            )
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<'a> $tr<&'a QuadElem> for &'a QuadElem {
            type Output = QuadElem;
            fn $method(self, rhs: &'a QuadElem) -> QuadElem {
                self.$checked(rhs).expect("quadratic field mismatch")
            }
        }
        impl $tr<QuadElem> for QuadElem {
            type Output = QuadElem;
            fn $method(self, rhs: QuadElem) -> QuadElem {
                (&self).$checked(&rhs).expect("quadratic field mismatch")
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        QuadElem {
            a: -&self.a,
            b: -&self.b,
            d: self.d.clone(),
        }
    }
}

impl Neg for QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        -&self
    }
}

pub fn quad_add(x: &QuadElem, y: &QuadElem) -> Result<QuadElem> {
    x.checked_add(y)
}

pub fn quad_mul(x: &QuadElem, y: &QuadElem) -> Result<QuadElem> {
    x.checked_mul(y)
}

pub fn quad_conj(x: &QuadElem) -> QuadElem {
    x.conj()
}

pub fn quad_norm(x: &QuadElem) -> Rational {
    x.norm()
}

pub fn quad_sign(x: &QuadElem) -> Result<Ordering> {
    x.sign()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, rint};

    fn q(a: i64, b: i64, d: i64) -> QuadElem {
        QuadElem::new(rint(a), rint(b), BigInt::from(d))
    }

    #[test]
    fn norm_conj_mul_examples() {
        assert_eq!(quad_norm(&q(1, 2, -3)), rint(13));
        assert_eq!(quad_conj(&q(5, 0, 8)), q(5, 0, 8));
        assert_eq!(quad_mul(&q(1, 1, 5), &q(1, -1, 5)).unwrap(), q(-4, 0, 5));
    }

    #[test]
    fn field_mismatch_is_an_error() {
        assert!(matches!(
            quad_add(&q(1, 1, 5), &q(1, 1, 7)),
            Err(Error::FieldMismatch(_, _))
        ));
        // rationals combine with any field
        assert_eq!(quad_add(&q(1, 0, 7), &q(1, 1, 5)).unwrap(), q(2, 1, 5));
    }

    #[test]
    fn square_parameter_collapses() {
        let x = q(1, 3, 4);
        assert!(x.is_rational());
        assert_eq!(x.a(), &rint(7));
        assert_eq!(QuadElem::sqrt_d(&BigInt::from(9)), q(3, 0, 1));
    }

    #[test]
    fn sign_examples() {
        // integer oracle: a² vs b²d
        assert_eq!(quad_sign(&q(-3, 2, 5)).unwrap(), Ordering::Greater);
        assert_eq!(quad_sign(&q(0, 0, 5)).unwrap(), Ordering::Equal);
        assert_eq!(quad_sign(&q(7, -2, 5)).unwrap(), Ordering::Greater);
        assert_eq!(quad_sign(&q(4, -2, 5)).unwrap(), Ordering::Less);
        assert!(quad_sign(&q(1, 1, -5)).is_err());
    }

    #[test]
    fn integrality_and_rebase() {
        // (1 + √5)/2 is integral, (1 + √3)/2 is not
        let phi = QuadElem::new(rat(1, 2), rat(1, 2), BigInt::from(5));
        assert!(phi.is_algebraic_integer());
        let half = QuadElem::new(rat(1, 2), rat(1, 2), BigInt::from(3));
        assert!(!half.is_algebraic_integer());
        // √5 = (1/2)√20
        let r = q(0, 1, 5).rebase(&BigInt::from(20)).unwrap();
        assert_eq!(r, QuadElem::new(rint(0), rat(1, 2), BigInt::from(20)));
        assert!(q(0, 1, 5).rebase(&BigInt::from(6)).is_err());
    }

    #[test]
    fn inverse_and_powers() {
        let x = q(3, 2, 7);
        assert_eq!(&x * &x.inv().unwrap(), q(1, 0, 7));
        assert_eq!(x.pow(3), &(&x * &x) * &x);
        assert_eq!(x.powi(-2).unwrap(), x.pow(2).inv().unwrap());
        assert!(q(0, 0, 7).inv().is_err());
    }

    #[test]
    fn json_roundtrip() {
        let x = QuadElem::new(rat(-1, 3), rat(5, 2), BigInt::from(-11));
        assert_eq!(QuadElem::from_json(&x.to_json()).unwrap(), x);
    }
}
