//! Diagonalizable binary forms `F = ξ - η` with `ξ = u^r`, `η = v^r`.
//!
//! A form is stored through its two linear factors up to `r`-th roots:
//! `ξ = α₁ (s₁x + t₁y)^r` and `η = γ₁ (s₂x + t₂y)^r` with all data in
//! `Q(√D)`. The classical normalisation `ξ = α₁(x + β₁y)^r` needs `s₁s₂ ≠ 0`;
//! [`DiagForm::siegel`] supplies it after an explicit change of variables
//! whenever that fails (binomials, for instance).

mod invariants;
mod json;
mod reduce;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exactnum::{binomial, exact_sqrt, rational_pow, QuadElem, Rational};
use crate::poly::BinaryForm;
use crate::{Error, Result};

pub use invariants::{DiscriminantCheck, PointCheck};

/// A 2×2 integer matrix `[[a, b], [c, d]]` acting by
/// `F ∘ m (x, y) = F(ax + by, cx + dy)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl Mat2 {
    pub fn new<T: Into<BigInt>>(a: T, b: T, c: T, d: T) -> Self {
        Mat2 {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        }
    }

    pub fn identity() -> Self {
        Mat2::new(1, 0, 0, 1)
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2 {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    /// Inverse of a unimodular matrix.
    pub fn inverse(&self) -> Result<Mat2> {
        let det = self.det();
        if det.abs() != BigInt::one() {
            return Err(Error::NotUnimodular(det));
        }
        Ok(Mat2 {
            a: &self.d * &det,
            b: -&self.b * &det,
            c: -&self.c * &det,
            d: &self.a * &det,
        })
    }

    /// `m · (x, y)ᵀ`.
    pub fn apply(&self, x: &BigInt, y: &BigInt) -> (BigInt, BigInt) {
        (&self.a * x + &self.b * y, &self.c * x + &self.d * y)
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// `scale · (s x + t y)^r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerFactor {
    pub scale: QuadElem,
    pub s: QuadElem,
    pub t: QuadElem,
}

impl PowerFactor {
    fn rebase(&self, d: &BigInt) -> Result<PowerFactor> {
        Ok(PowerFactor {
            scale: self.scale.rebase(d)?,
            s: self.s.rebase(d)?,
            t: self.t.rebase(d)?,
        })
    }

    /// Coefficients of `scale·(s x + t y)^r`, `x^(r-i) y^i` at index `i`.
    fn expand(&self, r: u32) -> Vec<QuadElem> {
        (0..=r)
            .map(|i| {
                let c = QuadElem::from_int(binomial(r as u64, i as u64), self.s.d());
                &(&(&self.scale * &c) * &self.s.pow((r - i) as u64)) * &self.t.pow(i as u64)
            })
            .collect()
    }

    /// The linear part `s x + t y` at an integer point.
    pub fn linear_at(&self, x: &BigInt, y: &BigInt) -> QuadElem {
        let d = self.s.d().clone();
        &(&self.s * &QuadElem::from_int(x.clone(), &d)) + &(&self.t * &QuadElem::from_int(y.clone(), &d))
    }

    /// `scale · (s x + t y)^r`.
    pub fn value_at(&self, r: u32, x: &BigInt, y: &BigInt) -> QuadElem {
        &self.scale * &self.linear_at(x, y).pow(r as u64)
    }

    /// Substitute `(x, y) ↦ (ax + by, cx + dy)` into the linear part.
    fn act(&self, m: &Mat2) -> PowerFactor {
        let d = self.s.d().clone();
        let q = |n: &BigInt| QuadElem::from_int(n.clone(), &d);
        PowerFactor {
            scale: self.scale.clone(),
            s: &(&self.s * &q(&m.a)) + &(&self.t * &q(&m.c)),
            t: &(&self.s * &q(&m.b)) + &(&self.t * &q(&m.d)),
        }
    }
}

/// Classical data `ξ = α₁(x + β₁y)^r`, `η = γ₁(x + δ₁y)^r` describing
/// `F ∘ frame`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SiegelData {
    pub alpha1: QuadElem,
    pub beta1: QuadElem,
    pub gamma1: QuadElem,
    pub delta1: QuadElem,
    pub frame: Mat2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DSign {
    Negative,
    Positive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Odd,
    Even,
}

/// The case split used by the counting theorems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormClass {
    pub definite: bool,
    pub d_sign: DSign,
    pub parity: Parity,
}

impl FormClass {
    pub fn label(&self) -> &'static str {
        match (self.d_sign, self.parity, self.definite) {
            (DSign::Negative, _, _) => "D<0",
            (DSign::Positive, Parity::Odd, _) => "D>0, r odd",
            (DSign::Positive, Parity::Even, false) => "D>0, r even, indefinite",
            (DSign::Positive, Parity::Even, true) => "D>0, definite",
        }
    }
}

/// A validated diagonalizable form of degree `r >= 3`.
#[derive(Clone, Debug)]
pub struct DiagForm {
    r: u32,
    form: BinaryForm,
    qa: BigInt,
    qb: BigInt,
    qc: BigInt,
    d: BigInt,
    xi: PowerFactor,
    eta: PowerFactor,
    xi_coeffs: Vec<QuadElem>,
    eta_coeffs: Vec<QuadElem>,
    /// `(s₁s₂, s₁t₂ + t₁s₂, t₁t₂) = κ (A, B, C)`.
    kappa: QuadElem,
    chi_r: Rational,
    /// `j/χ = (s₁t₂ - t₁s₂)/κ`, a square root of `D`.
    d1: QuadElem,
    /// `j^r = α₁γ₁(s₁t₂ - t₁s₂)^r`.
    j_r: QuadElem,
    j_power: Rational,
    hessian: BinaryForm,
    jacobian: BinaryForm,
    provenance: String,
}

impl PartialEq for DiagForm {
    fn eq(&self, other: &Self) -> bool {
        self.r == other.r
            && self.form == other.form
            && self.xi == other.xi
            && self.eta == other.eta
    }
}

impl DiagForm {
    /// `a x^r - b y^r`.
    pub fn binomial(a: &BigInt, b: &BigInt, r: u32) -> Result<DiagForm> {
        if !a.is_positive() || !b.is_positive() {
            return Err(Error::InvalidForm(format!(
                "binomial coefficients must be positive, got a={a}, b={b}"
            )));
        }
        DiagForm::binomial_signed(a, b, r)
    }

    pub fn binomial_u64(a: u64, b: u64, r: u32) -> Result<DiagForm> {
        DiagForm::binomial(&BigInt::from(a), &BigInt::from(b), r)
    }

    /// `a x^r - b y^r` with any nonzero `a`, `b`; for even `r` and
    /// `ab < 0` the form is definite.
    pub fn binomial_signed(a: &BigInt, b: &BigInt, r: u32) -> Result<DiagForm> {
        if a.is_zero() || b.is_zero() {
            return Err(Error::InvalidForm("binomial coefficients must be nonzero".into()));
        }
        let one = BigInt::one();
        let q = |n: &BigInt| QuadElem::from_int(n.clone(), &one);
        DiagForm::from_factors(
            r,
            PowerFactor {
                scale: q(a),
                s: q(&one),
                t: q(&BigInt::zero()),
            },
            PowerFactor {
                scale: q(b),
                s: q(&BigInt::zero()),
                t: q(&one),
            },
            format!("binomial({a},{b},{r})"),
        )
    }

    /// `Tr(α (x + βy)^r) = α(x + βy)^r + ᾱ(x + β̄y)^r`, integral whenever
    /// `α, β` have integral coordinates; `β` must be irrational.
    pub fn trace_form(alpha: &QuadElem, beta: &QuadElem, r: u32) -> Result<DiagForm> {
        let f = DiagForm::from_xi(alpha, beta, &-&alpha.conj(), &beta.conj(), r)?;
        Ok(f.with_provenance(format!("trace({alpha}; {beta}; r={r})")))
    }

    /// `α₁(x + β₁y)^r - γ₁(x + δ₁y)^r`.
    pub fn from_xi(
        alpha1: &QuadElem,
        beta1: &QuadElem,
        gamma1: &QuadElem,
        delta1: &QuadElem,
        r: u32,
    ) -> Result<DiagForm> {
        if beta1 == delta1 {
            return Err(Error::Degenerate("δ₁ = β₁, so j = 0".into()));
        }
        let d0 = common_field(&[alpha1, beta1, gamma1, delta1])?;
        let one = QuadElem::one(&d0);
        let re = |x: &QuadElem| x.rebase(&d0);
        DiagForm::from_factors(
            r,
            PowerFactor {
                scale: re(alpha1)?,
                s: one.clone(),
                t: re(beta1)?,
            },
            PowerFactor {
                scale: re(gamma1)?,
                s: one,
                t: re(delta1)?,
            },
            format!("xi({alpha1}; {beta1}; {gamma1}; {delta1}; r={r})"),
        )
    }

    /// General constructor from `ξ = α₁(s₁x + t₁y)^r`, `η = γ₁(s₂x + t₂y)^r`.
    pub fn from_factors(
        r: u32,
        xi: PowerFactor,
        eta: PowerFactor,
        provenance: String,
    ) -> Result<DiagForm> {
        if r < 3 {
            return Err(Error::InvalidForm(format!("degree must be at least 3, got {r}")));
        }
        let all = [&xi.scale, &xi.s, &xi.t, &eta.scale, &eta.s, &eta.t];
        let d0 = common_field(&all)?;
        let xi = xi.rebase(&d0)?;
        let eta = eta.rebase(&d0)?;
        if xi.scale.is_zero() || eta.scale.is_zero() {
            return Err(Error::Degenerate("a leading scalar vanishes".into()));
        }
        let det = &(&xi.s * &eta.t) - &(&xi.t * &eta.s);
        if det.is_zero() {
            return Err(Error::Degenerate("the linear factors are proportional (j = 0)".into()));
        }

        let xi_c = xi.expand(r);
        let eta_c = eta.expand(r);
        let mut coeffs = Vec::with_capacity(r as usize + 1);
        for (a, b) in xi_c.iter().zip(&eta_c) {
            let c = a - b;
            match c.as_rational() {
                Some(q) if q.is_integer() => coeffs.push(q.to_integer()),
                _ => {
                    return Err(Error::NotIntegral);
                }
            }
        }

        // uv = αγ · (s₁s₂ x² + (s₁t₂ + t₁s₂) xy + t₁t₂ y²)
        let triple = [
            &xi.s * &eta.s,
            &(&xi.s * &eta.t) + &(&xi.t * &eta.s),
            &xi.t * &eta.t,
        ];
        let (abc, kappa) = primitive_triple(&triple)?;
        let [qa, qb, qc] = abc;
        let d = &qb * &qb - BigInt::from(4) * &qa * &qc;
        debug_assert!(!d.is_zero());

        let rebase = |x: &QuadElem| {
            x.rebase(&d).map_err(|_| {
                Error::InvalidForm(format!(
                    "data lies outside Q(√{d}), the field of the quadratic part"
                ))
            })
        };
        let xi = PowerFactor {
            scale: rebase(&xi.scale)?,
            s: rebase(&xi.s)?,
            t: rebase(&xi.t)?,
        };
        let eta = PowerFactor {
            scale: rebase(&eta.scale)?,
            s: rebase(&eta.s)?,
            t: rebase(&eta.t)?,
        };
        let kappa = rebase(&kappa)?;
        let det = rebase(&det)?;
        let xi_c: Vec<QuadElem> = xi_c.iter().map(rebase).collect::<Result<_>>()?;
        let eta_c: Vec<QuadElem> = eta_c.iter().map(rebase).collect::<Result<_>>()?;

        if exact_sqrt(&d).is_none() {
            for (a, b) in xi_c.iter().zip(&eta_c) {
                if *b != -a.conj() {
                    return Err(Error::InvalidForm(
                        "ξ and -η are not conjugate over Q(√D)".into(),
                    ));
                }
            }
        }

        let chi_r_q = &(&xi.scale * &eta.scale) * &kappa.pow(r as u64);
        let chi_r = chi_r_q
            .as_rational()
            .cloned()
            .ok_or_else(|| Error::InvalidForm(format!("χ^r = {chi_r_q} is not rational")))?;
        let d1 = det.checked_div(&kappa)?;
        if &d1 * &d1 != QuadElem::from_int(d.clone(), &d) {
            return Err(Error::Inconsistent("(j/χ)² differs from D".into()));
        }
        let j_r = &(&xi.scale * &eta.scale) * &det.pow(r as u64);
        let j_power_q = j_r.pow(r as u64 - 1);
        let j_power = j_power_q
            .as_rational()
            .cloned()
            .ok_or_else(|| Error::Inconsistent("j^(r(r-1)) is not rational".into()))?;
        let expected =
            rational_pow(&chi_r, r as i64 - 1)
                * Rational::from_integer(num_traits::pow(d.clone(), (r * (r - 1) / 2) as usize));
        if expected != j_power {
            return Err(Error::Inconsistent(
                "j^(r(r-1)) differs from (χ^r)^(r-1) D^(r(r-1)/2)".into(),
            ));
        }

        let form = BinaryForm::new(coeffs);
        let hessian = invariants::hessian_form(&form);
        let jacobian = invariants::jacobian_form(&form, &hessian);
        Ok(DiagForm {
            r,
            form,
            qa,
            qb,
            qc,
            d,
            xi,
            eta,
            xi_coeffs: xi_c,
            eta_coeffs: eta_c,
            kappa,
            chi_r,
            d1,
            j_r,
            j_power,
            hessian,
            jacobian,
            provenance,
        })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn binary_form(&self) -> &BinaryForm {
        &self.form
    }

    pub fn coeffs(&self) -> &[BigInt] {
        self.form.coeffs()
    }

    /// `(A, B, C)` with `uv = χ (Ax² + Bxy + Cy²)`.
    pub fn quad(&self) -> (&BigInt, &BigInt, &BigInt) {
        (&self.qa, &self.qb, &self.qc)
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn d_is_square(&self) -> bool {
        exact_sqrt(&self.d).is_some()
    }

    pub fn xi_factor(&self) -> &PowerFactor {
        &self.xi
    }

    pub fn eta_factor(&self) -> &PowerFactor {
        &self.eta
    }

    /// Coefficients of `ξ` and `η` as forms over `Q(√D)`.
    pub fn xi_eta_coeffs(&self) -> (&[QuadElem], &[QuadElem]) {
        (&self.xi_coeffs, &self.eta_coeffs)
    }

    pub fn kappa(&self) -> &QuadElem {
        &self.kappa
    }

    pub fn chi_r(&self) -> &Rational {
        &self.chi_r
    }

    pub fn d1(&self) -> &QuadElem {
        &self.d1
    }

    pub fn j_r(&self) -> &QuadElem {
        &self.j_r
    }

    /// `j^(r(r-1))`, always rational.
    pub fn j_power(&self) -> &Rational {
        &self.j_power
    }

    /// `|j|^(2r) = (χ^r)² |D|^r`.
    pub fn j_abs_pow_2r(&self) -> Rational {
        let dd = Rational::from_integer(num_traits::pow(self.d.abs(), self.r as usize));
        &self.chi_r * &self.chi_r * dd
    }

    /// `|j|^(r(r-1)) = |Δ| / r^r`.
    pub fn j_abs_power(&self) -> Rational {
        self.j_power.abs()
    }

    pub fn hessian_form(&self) -> &BinaryForm {
        &self.hessian
    }

    pub fn jacobian_form(&self) -> &BinaryForm {
        &self.jacobian
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn with_provenance(mut self, p: String) -> Self {
        self.provenance = p;
        self
    }

    pub fn class(&self) -> FormClass {
        let parity = if self.r.is_multiple_of(2) { Parity::Even } else { Parity::Odd };
        let d_sign = if self.d.is_negative() {
            DSign::Negative
        } else {
            DSign::Positive
        };
        let definite = d_sign == DSign::Positive
            && parity == Parity::Even
            && (&self.xi.scale * &self.eta.scale).sign() == Ok(Ordering::Less);
        FormClass {
            definite,
            d_sign,
            parity,
        }
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        self.form.eval(x, y)
    }

    pub fn eval_i64(&self, x: i64, y: i64) -> BigInt {
        self.form.eval_i64(x, y)
    }

    /// `Ax² + Bxy + Cy²`.
    pub fn quad_value(&self, x: &BigInt, y: &BigInt) -> BigInt {
        &self.qa * x * x + &self.qb * x * y + &self.qc * y * y
    }

    /// `(ξ(x, y), η(x, y))` in `Q(√D)`.
    pub fn xi_eta(&self, x: &BigInt, y: &BigInt) -> (QuadElem, QuadElem) {
        (
            self.xi.value_at(self.r, x, y),
            self.eta.value_at(self.r, x, y),
        )
    }

    /// The classical normalisation, valid for `F ∘ frame`.
    pub fn siegel(&self) -> SiegelData {
        let frame = if !self.xi.s.is_zero() && !self.eta.s.is_zero() {
            Mat2::identity()
        } else {
            // y ↦ kx + y moves s to s + kt; t ≠ 0 wherever s = 0
            let ok = |k: i64| {
                let kk = QuadElem::from_int(k, &self.d);
                !(&self.xi.s + &(&self.xi.t * &kk)).is_zero()
                    && !(&self.eta.s + &(&self.eta.t * &kk)).is_zero()
            };
            let k = (1i64..).find(|&k| ok(k)).expect("some shift separates the factors");
            Mat2::new(1, 0, k, 1)
        };
        let xi = self.xi.act(&frame);
        let eta = self.eta.act(&frame);
        let r = self.r as u64;
        SiegelData {
            alpha1: &xi.scale * &xi.s.pow(r),
            beta1: xi.t.checked_div(&xi.s).expect("nonzero after framing"),
            gamma1: &eta.scale * &eta.s.pow(r),
            delta1: eta.t.checked_div(&eta.s).expect("nonzero after framing"),
            frame,
        }
    }

    /// `F ∘ m` for a unimodular `m`.
    pub fn gl2_action(&self, m: &Mat2) -> Result<DiagForm> {
        let det = m.det();
        if det.abs() != BigInt::one() {
            return Err(Error::NotUnimodular(det));
        }
        let g = DiagForm::from_factors(
            self.r,
            self.xi.act(m),
            self.eta.act(m),
            format!("gl2({m}) of {}", self.provenance),
        )?;
        let direct = self.form.substitute(&m.a, &m.b, &m.c, &m.d);
        if g.form != direct {
            return Err(Error::Inconsistent(
                "substituted coefficients differ from transformed linear data".into(),
            ));
        }
        Ok(g)
    }
}

impl fmt::Display for DiagForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.form)
    }
}

fn common_field(xs: &[&QuadElem]) -> Result<BigInt> {
    let mut d: Option<&BigInt> = None;
    for x in xs {
        if x.is_rational() {
            continue;
        }
        match d {
            None => d = Some(x.d()),
            Some(d0) if d0 != x.d() => {
                return Err(Error::FieldMismatch(d0.clone(), x.d().clone()));
            }
            _ => {}
        }
    }
    Ok(d.cloned().unwrap_or_else(BigInt::one))
}

/// Write `triple = κ · (A, B, C)` with `(A, B, C)` a primitive integer
/// triple, normalised so that `A > 0` for definite quadratic parts and the
/// first nonzero entry is positive otherwise.
fn primitive_triple(triple: &[QuadElem; 3]) -> Result<([BigInt; 3], QuadElem)> {
    let k = triple
        .iter()
        .position(|t| !t.is_zero())
        .ok_or_else(|| Error::Degenerate("vanishing quadratic part".into()))?;
    let mut ratios = Vec::with_capacity(3);
    for t in triple {
        let q = t.checked_div(&triple[k])?;
        let q = q.as_rational().cloned().ok_or_else(|| {
            Error::InvalidForm("the product uv is not a multiple of a rational quadratic form".into())
        })?;
        ratios.push(q);
    }
    let l = ratios.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let mut ints: Vec<BigInt> = ratios
        .iter()
        .map(|q| (q * Rational::from_integer(l.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, n| acc.gcd(n));
    for n in ints.iter_mut() {
        *n /= &g;
    }
    let disc = &ints[1] * &ints[1] - BigInt::from(4) * &ints[0] * &ints[2];
    let lead = if disc.is_negative() {
        &ints[0]
    } else {
        ints.iter().find(|n| !n.is_zero()).unwrap()
    };
    if lead.is_negative() {
        for n in ints.iter_mut() {
            *n = -&*n;
        }
    }
    let kappa = triple[k].scale(&Rational::from_integer(ints[k].clone()).recip());
    let [a, b, c]: [BigInt; 3] = ints.try_into().unwrap();
    Ok(([a, b, c], kappa))
}

#[cfg(test)]
mod tests;
