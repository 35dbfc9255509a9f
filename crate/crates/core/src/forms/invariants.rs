use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::DiagForm;
use crate::exactnum::{rational_pow, rint, QuadElem, Rational};
use crate::poly::BinaryForm;
use crate::{Error, Result};

/// `H = F_xx F_yy - F_xy²`.
pub(super) fn hessian_form(f: &BinaryForm) -> BinaryForm {
    let fx = f.dx();
    let fy = f.dy();
    let fxx = fx.dx();
    let fyy = fy.dy();
    let fxy = fx.dy();
    fxx.mul(&fyy).sub(&fxy.mul(&fxy))
}

/// `P = F_x H_y - F_y H_x`.
pub(super) fn jacobian_form(f: &BinaryForm, h: &BinaryForm) -> BinaryForm {
    f.dx().mul(&h.dy()).sub(&f.dy().mul(&h.dx()))
}

/// The discriminant computed from the coefficients and from `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscriminantCheck {
    /// `(-1)^(n(n-1)/2) Res(f, f') / a₀`.
    pub resultant: BigInt,
    /// `(-1)^((r-1)(r+2)/2) r^r j^(r(r-1))`.
    pub via_identity: Rational,
    pub sign_agrees: bool,
}

/// A value computed by differentiation next to the same value assembled
/// from the diagonal data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointCheck {
    pub derivative: BigInt,
    pub identity: Rational,
}

impl PointCheck {
    pub fn agrees(&self) -> bool {
        Rational::from_integer(self.derivative.clone()) == self.identity
    }
}

impl DiagForm {
    /// Discriminant by resultant, checked in absolute value against
    /// `r^r |j|^(r(r-1))`. The sign predicted by the closed formula is
    /// recorded rather than enforced.
    pub fn discriminant(&self) -> Result<DiscriminantCheck> {
        let r = self.r;
        let res = self.form.discriminant();
        let sign_exp = (r - 1) * (r + 2) / 2;
        let rr = rint(num_traits::pow(BigInt::from(r), r as usize));
        let mut via = rr * &self.j_power;
        if sign_exp % 2 == 1 {
            via = -via;
        }
        let resq = Rational::from_integer(res.clone());
        if resq.abs() != via.abs() {
            return Err(Error::Inconsistent(format!(
                "discriminant mismatch: resultant {res}, identity {via}"
            )));
        }
        Ok(DiscriminantCheck {
            sign_agrees: resq == via,
            resultant: res,
            via_identity: via,
        })
    }

    /// `|Δ|` (from the resultant).
    pub fn abs_discriminant(&self) -> BigInt {
        self.form.discriminant().abs()
    }

    /// `H(x, y)` by differentiation and by
    /// `H = -r²(r-1)² χ^r D (Ax² + Bxy + Cy²)^(r-2)`.
    pub fn hessian_check(&self, x: &BigInt, y: &BigInt) -> PointCheck {
        let r = self.r as i64;
        let q = rint(self.quad_value(x, y));
        let c = rint(r * r * (r - 1) * (r - 1));
        let identity = -c * &self.chi_r * rint(self.d.clone()) * rational_pow(&q, r - 2);
        PointCheck {
            derivative: self.hessian.eval(x, y),
            identity,
        }
    }

    pub fn hessian_value(&self, x: &BigInt, y: &BigInt) -> Result<BigInt> {
        let c = self.hessian_check(x, y);
        if !c.agrees() {
            return Err(Error::Inconsistent(format!(
                "Hessian at ({x}, {y}): derivative {} vs identity {}",
                c.derivative, c.identity
            )));
        }
        Ok(c.derivative)
    }

    /// `P(x, y)` by differentiation and by
    /// `P = -r³(r-1)²(r-2) χ^r D (Ax² + Bxy + Cy²)^(r-3) · d₁(ξ + η)`,
    /// where `d₁(ξ + η)` is rational.
    pub fn jacobian_check(&self, x: &BigInt, y: &BigInt) -> Result<PointCheck> {
        let r = self.r as i64;
        let q = rint(self.quad_value(x, y));
        let (xi, eta) = self.xi_eta(x, y);
        let s = &self.d1 * &(&xi + &eta);
        let s = s.as_rational().cloned().ok_or_else(|| {
            Error::Inconsistent(format!("√D(ξ + η) at ({x}, {y}) is irrational: {s}"))
        })?;
        let c = rint(r * r * r * (r - 1) * (r - 1) * (r - 2));
        let identity =
            -c * &self.chi_r * rint(self.d.clone()) * rational_pow(&q, r - 3) * s;
        Ok(PointCheck {
            derivative: self.jacobian.eval(x, y),
            identity,
        })
    }

    pub fn jacobian_value(&self, x: &BigInt, y: &BigInt) -> Result<BigInt> {
        let c = self.jacobian_check(x, y)?;
        if !c.agrees() {
            return Err(Error::Inconsistent(format!(
                "Jacobian at ({x}, {y}): derivative {} vs identity {}",
                c.derivative, c.identity
            )));
        }
        Ok(c.derivative)
    }

    /// `ξη = χ^r (Ax² + Bxy + Cy²)^r` at a point.
    pub fn xi_eta_product_holds(&self, x: &BigInt, y: &BigInt) -> bool {
        let (xi, eta) = self.xi_eta(x, y);
        let q = rint(self.quad_value(x, y));
        let rhs = &self.chi_r * rational_pow(&q, self.r as i64);
        (&xi * &eta) == QuadElem::rational(rhs, &self.d)
    }

    /// Every coefficient of `r(r-1)√D ξ` and `r(r-1)√D η` is an algebraic
    /// integer of `Q(√D)`.
    pub fn sqrt_d_coeffs_integral(&self) -> bool {
        let r = self.r as i64;
        let k = &QuadElem::sqrt_d(&self.d) * &QuadElem::from_int(r * (r - 1), &self.d);
        self.xi_coeffs
            .iter()
            .chain(&self.eta_coeffs)
            .all(|c| (&k * c).is_algebraic_integer())
    }

    /// `(2/χ) u(p₁) v(p₂) = (2/κ) (s₁x₁ + t₁y₁)(s₂x₂ + t₂y₂)`.
    pub fn two_over_chi_uv(&self, p1: (&BigInt, &BigInt), p2: (&BigInt, &BigInt)) -> QuadElem {
        let lu = self.xi.linear_at(p1.0, p1.1);
        let lv = self.eta.linear_at(p2.0, p2.1);
        let two = QuadElem::from_int(2, &self.d);
        (&(&two * &lu) * &lv)
            .checked_div(&self.kappa)
            .expect("κ is nonzero")
    }

    /// `C(r, a) r(r-1) √D u₁^a u₂^(r-a)`, exact because `α^r = α₁`.
    pub fn binomial_u_product(
        &self,
        p1: (&BigInt, &BigInt),
        p2: (&BigInt, &BigInt),
        a: u32,
        use_v: bool,
    ) -> QuadElem {
        let r = self.r;
        let f = if use_v { &self.eta } else { &self.xi };
        let l1 = f.linear_at(p1.0, p1.1);
        let l2 = f.linear_at(p2.0, p2.1);
        let c = crate::exactnum::binomial(r as u64, a as u64) * BigInt::from(r * (r - 1));
        let k = &QuadElem::sqrt_d(&self.d) * &QuadElem::from_int(c, &self.d);
        &(&(&k * &f.scale) * &l1.pow(a as u64)) * &l2.pow((r - a) as u64)
    }

    /// `|ξ|⁴ >= (χ^r)² y^(4r) (3|D|)^r / 16^r`, the fourth power of the lower
    /// bound `|u| >= |χ|^(1/2) |y| |3D|^(1/4) / 2` for reduced forms with
    /// `D < 0`. `None` when the statement does not apply.
    pub fn reduced_lower_bound_holds(&self, x: &BigInt, y: &BigInt) -> Option<bool> {
        if !self.d.is_negative() || !self.is_reduced() || y.is_zero() {
            return None;
        }
        let (xi, _) = self.xi_eta(x, y);
        let n = xi.norm();
        let lhs = &n * &n;
        let r = self.r as i64;
        let y4r = rint(num_traits::pow(y.abs(), 4 * self.r as usize));
        let rhs = &self.chi_r * &self.chi_r
            * y4r
            * rational_pow(&rint(BigInt::from(3) * self.d.abs()), r)
            / rational_pow(&rint(16), r);
        Some(lhs.cmp(&rhs) != Ordering::Less)
    }
}
