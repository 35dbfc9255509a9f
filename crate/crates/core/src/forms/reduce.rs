use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{DiagForm, Mat2};
use crate::{Error, Result};

/// `C >= A >= |B|` for a definite quadratic part (taken with `A > 0`).
pub fn quad_is_reduced(a: &BigInt, b: &BigInt, c: &BigInt) -> bool {
    c >= a && a >= &b.abs()
}

/// Gauss reduction of a positive definite `(A, B, C)`. Returns the reduced
/// triple and a unimodular `m` with `q ∘ m` equal to it.
pub fn gauss_reduce(a: &BigInt, b: &BigInt, c: &BigInt) -> Result<([BigInt; 3], Mat2)> {
    let disc = b * b - BigInt::from(4) * a * c;
    if !disc.is_negative() || !a.is_positive() {
        return Err(Error::Unsupported(
            "Gauss reduction needs a positive definite quadratic part".into(),
        ));
    }
    let (mut a, mut b, mut c) = (a.clone(), b.clone(), c.clone());
    let mut m = Mat2::identity();
    loop {
        if b.abs() > a {
            // (x, y) ↦ (x + ky, y): B ↦ B + 2Ak, C ↦ Ak² + Bk + C
            let two_a = BigInt::from(2) * &a;
            let k = -(&b + &a).div_floor(&two_a);
            c = &a * &k * &k + &b * &k + &c;
            b = &b + &two_a * &k;
            m = m.mul(&Mat2::new(BigInt::from(1), k, BigInt::zero(), BigInt::from(1)));
            continue;
        }
        if a > c {
            // (x, y) ↦ (-y, x): (A, B, C) ↦ (C, -B, A)
            std::mem::swap(&mut a, &mut c);
            b = -b;
            m = m.mul(&Mat2::new(0, -1, 1, 0));
            continue;
        }
        break;
    }
    Ok(([a, b, c], m))
}

impl DiagForm {
    pub fn is_reduced(&self) -> bool {
        self.d.is_negative() && quad_is_reduced(&self.qa, &self.qb, &self.qc)
    }

    /// An equivalent reduced form and the matrix `m` with `self ∘ m` equal
    /// to it. Solutions of the reduced form map back via `m · (x, y)ᵀ`.
    pub fn reduce(&self) -> Result<(DiagForm, Mat2)> {
        if !self.d.is_negative() {
            return Err(Error::Unsupported(
                "reduction is only defined for D < 0".into(),
            ));
        }
        let (_, m) = gauss_reduce(&self.qa, &self.qb, &self.qc)?;
        let g = self.gl2_action(&m)?;
        if !g.is_reduced() {
            return Err(Error::Inconsistent(format!(
                "reduction produced an unreduced quadratic part ({}, {}, {})",
                g.qa, g.qb, g.qc
            )));
        }
        Ok((g, m))
    }
}
