//! The algebraic numbers `Σ_{n,g}`, `Λ_{n,g}` attached to two solutions
//! related to the same root of unity, and checks of the statements made
//! about them.
//!
//! The roots `u = ρ_ξ L_ξ(x, y)` and `v = ρ_η L_η(x, y)` use one fixed
//! choice `ρ^r = scale` per factor, and `χ = ρ_ξ ρ_η κ`. With these
//! choices `Λ_{n,0}` lies in `Q(√D)` and `Λ_{n,1} = ρ·E` with `E` in
//! `Q(√D)`, so vanishing, integrality and `|ΛΛ̃| >= 1` are decided
//! exactly. Intervals are only used for `Λ'` and for cross-checks.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde_json::{json, Value};

use crate::exactnum::{
    compare_products, rint, ComplexInterval, PowerTerm, Precision, QuadElem, Rational,
    RealInterval,
};
use crate::forms::{DiagForm, PowerFactor};
use crate::pade::PadePair;
use crate::solver::{compare_magnitudes, principal_root, two_pow, QPow, RelatedClassification, SolutionRecord};
use crate::{Error, Result};

/// Two solutions with the `(X, Y)` assignment: `(X_1, Y_1) = (u_1, v_1)`
/// when `Z_1 = |u_1|`, otherwise `(v_1, u_1)`; the second solution follows
/// the first.
#[derive(Clone, Debug)]
pub struct PairContext<'a> {
    pub form: &'a DiagForm,
    pub sol1: SolutionRecord,
    pub sol2: SolutionRecord,
    /// `(X, Y) = (v, u)`.
    pub swapped: bool,
}

/// `Λ = ρ^g · exact`, where `ρ^r = root_of` when `g = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaValue {
    pub n: u32,
    pub g: u32,
    pub exact: QuadElem,
    pub root_of: Option<QuadElem>,
}

impl LambdaValue {
    pub fn is_zero(&self) -> bool {
        self.exact.is_zero()
    }

    /// `Λ^r`, an element of `Q(√D)` in both cases.
    pub fn pow_r(&self, r: u32) -> QuadElem {
        let e = self.exact.pow(r as u64);
        match &self.root_of {
            Some(s) => s * &e,
            None => e,
        }
    }

    /// `|Λ|^{2r}`.
    pub fn abs_pow_2r(&self, r: u32) -> QuadElem {
        self.pow_r(r).abs_sq()
    }

    /// `Λ` itself lies in the ring of integers (`g = 0`), or `Λ^r` does.
    pub fn integral(&self, r: u32) -> bool {
        match self.root_of {
            None => self.exact.is_algebraic_integer(),
            Some(_) => self.pow_r(r).is_algebraic_integer(),
        }
    }

    pub fn to_complex(&self, r: u32, bits: u32) -> Result<ComplexInterval> {
        let e = self.exact.to_complex(bits + 8);
        Ok(match &self.root_of {
            Some(s) => principal_root(s, r, bits)?.mul(&e).rounded(bits + 4),
            None => e,
        })
    }
}

impl<'a> PairContext<'a> {
    pub fn new(form: &'a DiagForm, sol1: &SolutionRecord, sol2: &SolutionRecord) -> Result<Self> {
        for s in [sol1, sol2] {
            if s.degenerate() {
                return Err(Error::Precondition(format!(
                    "uv = 0 at ({}, {})",
                    s.x, s.y
                )));
            }
        }
        let swapped = sol1.xi_abs_sq.cmp_real(&sol1.eta_abs_sq)? == Ordering::Less;
        Ok(PairContext {
            form,
            sol1: sol1.clone(),
            sol2: sol2.clone(),
            swapped,
        })
    }

    fn r(&self) -> u32 {
        self.form.r()
    }

    fn d(&self) -> &BigInt {
        self.form.d()
    }

    fn fx(&self) -> &PowerFactor {
        if self.swapped {
            self.form.eta_factor()
        } else {
            self.form.xi_factor()
        }
    }

    fn fy(&self) -> &PowerFactor {
        if self.swapped {
            self.form.xi_factor()
        } else {
            self.form.eta_factor()
        }
    }

    fn sol(&self, i: usize) -> &SolutionRecord {
        if i == 1 {
            &self.sol1
        } else {
            &self.sol2
        }
    }

    fn lx(&self, i: usize) -> QuadElem {
        let s = self.sol(i);
        self.fx().linear_at(&s.x, &s.y)
    }

    fn ly(&self, i: usize) -> QuadElem {
        let s = self.sol(i);
        self.fy().linear_at(&s.x, &s.y)
    }

    /// `X_i^r`.
    pub fn x_pow_r(&self, i: usize) -> &QuadElem {
        let s = self.sol(i);
        if self.swapped {
            &s.eta
        } else {
            &s.xi
        }
    }

    /// `Y_i^r`.
    pub fn y_pow_r(&self, i: usize) -> &QuadElem {
        let s = self.sol(i);
        if self.swapped {
            &s.xi
        } else {
            &s.eta
        }
    }

    /// `z_1 = 1 - Y_1^r / X_1^r`.
    pub fn z1(&self) -> Result<QuadElem> {
        let (x, y) = (self.x_pow_r(1), self.y_pow_r(1));
        (x - y).checked_div(x)
    }

    /// `z̃_1 = 1 - X_1^r / Y_1^r`.
    pub fn z1_tilde(&self) -> Result<QuadElem> {
        let (x, y) = (self.x_pow_r(1), self.y_pow_r(1));
        (y - x).checked_div(y)
    }

    /// `(2/χ) X_a Y_b = 2 L_X(a) L_Y(b) / κ`; symmetric in the roles since
    /// `X_a Y_b` is always one `u` times one `v`.
    fn two_over_chi(&self, a: usize, b: usize) -> Result<QuadElem> {
        let two = QuadElem::from_int(2, self.d());
        (&(&two * &self.lx(a)) * &self.ly(b)).checked_div(self.form.kappa())
    }

    /// `r²(r-1)√D`.
    fn k(&self) -> QuadElem {
        let r = self.r() as i64;
        &QuadElem::sqrt_d(self.d()) * &QuadElem::from_int(r * r * (r - 1), self.d())
    }

    /// `r(r-1)√D`.
    fn k1(&self) -> QuadElem {
        let r = self.r() as i64;
        &QuadElem::sqrt_d(self.d()) * &QuadElem::from_int(r * (r - 1), self.d())
    }

    /// Exact `Λ_{n,g}` (`tilde = false`) or `Λ̃_{n,g}`.
    fn lambda_generic(&self, n: u32, g: u32, tilde: bool) -> Result<LambdaValue> {
        let p = PadePair::build(n, g, self.r())?;
        let k = self.k();
        // for Λ̃ the roles of X and Y are exchanged throughout
        let (lam, mu) = if tilde {
            let y = self.y_pow_r(1);
            (&k * y, &k * &(y - self.x_pow_r(1)))
        } else {
            let x = self.x_pow_r(1);
            (&k * x, &k * &(x - self.y_pow_r(1)))
        };
        let a = p.a_star(&lam, &mu);
        let b = p.b_star(&lam, &mu);
        if g == 0 {
            // (2/χ)(X_1 Y_2 𝒜 - X_2 Y_1 ℬ), or (2/χ)(Y_1 X_2 𝒜̃ - Y_2 X_1 ℬ̃)
            let (c_a, c_b) = if tilde {
                (self.two_over_chi(2, 1)?, self.two_over_chi(1, 2)?)
            } else {
                (self.two_over_chi(1, 2)?, self.two_over_chi(2, 1)?)
            };
            return Ok(LambdaValue {
                n,
                g,
                exact: &(&c_a * &a) - &(&c_b * &b),
                root_of: None,
            });
        }
        // r(r-1)√D (Y_2 𝒜 - k X_1^{r-1} X_2 Y_1 ℬ) = ρ_Y · E
        let r = self.r() as u64;
        let (near, far_scale, l_near2, l_far1, l_far2, l_near1) = if tilde {
            (self.fx(), &self.fy().scale, self.lx(2), self.ly(1), self.ly(2), self.lx(1))
        } else {
            (self.fy(), &self.fx().scale, self.ly(2), self.lx(1), self.lx(2), self.ly(1))
        };
        let second = &(&(&(&k * far_scale) * &l_far1.pow(r - 1)) * &l_far2) * &l_near1;
        let e = &self.k1() * &(&(&l_near2 * &a) - &(&second * &b));
        Ok(LambdaValue {
            n,
            g,
            exact: e,
            root_of: Some(near.scale.clone()),
        })
    }

    pub fn lambda(&self, n: u32, g: u32) -> Result<LambdaValue> {
        self.lambda_generic(n, g, false)
    }

    pub fn lambda_tilde(&self, n: u32, g: u32) -> Result<LambdaValue> {
        self.lambda_generic(n, g, true)
    }

    /// `(ρ_X, ρ_Y)` on the principal branch.
    fn rhos(&self, w: u32) -> Result<(ComplexInterval, ComplexInterval)> {
        Ok((
            principal_root(&self.fx().scale, self.r(), w)?,
            principal_root(&self.fy().scale, self.r(), w)?,
        ))
    }

    /// `Y_i / X_i` as an interval, or `X_i / Y_i` when `tilde`.
    fn ratio(&self, i: usize, tilde: bool, rho: &ComplexInterval, w: u32) -> Result<ComplexInterval> {
        let (ln, ld) = if tilde {
            (self.lx(i), self.ly(i))
        } else {
            (self.ly(i), self.lx(i))
        };
        Ok(rho.mul(&ln.checked_div(&ld)?.to_complex(w)).rounded(w))
    }

    fn sigma_generic(
        &self,
        n: u32,
        g: u32,
        tilde: bool,
        rhos: &(ComplexInterval, ComplexInterval),
        bits: u32,
    ) -> Result<ComplexInterval> {
        let p = PadePair::build(n, g, self.r())?;
        let z = if tilde { self.z1_tilde()? } else { self.z1()? };
        let w = bits + 8;
        let rho = if tilde {
            rhos.0.div(&rhos.1)?
        } else {
            rhos.1.div(&rhos.0)?
        };
        let a = p.a().eval_quad(&z).to_complex(w).rounded(w);
        let b = p.b().eval_quad(&z).to_complex(w).rounded(w);
        Ok(self
            .ratio(2, tilde, &rho, w)?
            .mul(&a)
            .sub(&self.ratio(1, tilde, &rho, w)?.mul(&b))
            .rounded(bits + 4))
    }

    /// Certified enclosure of `Σ_{n,g}`, evaluated directly from its
    /// definition.
    pub fn sigma(&self, n: u32, g: u32, bits: u32) -> Result<ComplexInterval> {
        self.sigma_generic(n, g, false, &self.rhos(bits + 16)?, bits)
    }

    /// Certified enclosure of `Σ̃_{n,g}`.
    pub fn sigma_tilde(&self, n: u32, g: u32, bits: u32) -> Result<ComplexInterval> {
        self.sigma_generic(n, g, true, &self.rhos(bits + 16)?, bits)
    }

    /// `c_{n,g} X_1^{rn+1-g} X_2 Σ_{n,g}` (or `c_{n,g} Y_1^{rn+1-g} Y_2 Σ̃_{n,g}`)
    /// from intervals, independent of the exact assembly used by
    /// [`PairContext::lambda`].
    pub fn lambda_interval(&self, n: u32, g: u32, tilde: bool, bits: u32) -> Result<ComplexInterval> {
        let r = self.r();
        let w = bits + 16;
        let rhos = self.rhos(w + 16)?;
        let (rho_x, rho_y) = (&rhos.0, &rhos.1);
        let (first, second) = if tilde {
            (rho_y.mul(&self.ly(1).to_complex(w)), rho_y.mul(&self.ly(2).to_complex(w)))
        } else {
            (rho_x.mul(&self.lx(1).to_complex(w)), rho_x.mul(&self.lx(2).to_complex(w)))
        };
        let mut c = self.k1().pow((n + g) as u64).to_complex(w).scale(&rint(BigInt::from(r).pow(n)));
        if g == 0 {
            let chi = rho_x.mul(rho_y).mul(&self.form.kappa().to_complex(w));
            c = c.scale(&rint(2)).div(&chi)?;
        }
        let c = c.rounded(w);
        let lead = first.powu_rounded((r * n + 1 - g) as u64, w);
        Ok(c
            .mul(&lead)
            .rounded(w)
            .mul(&second.rounded(w))
            .rounded(w)
            .mul(&self.sigma_generic(n, g, tilde, &rhos, w)?)
            .rounded(bits + 4))
    }
}

/// Outcome of the two-sequence nonvanishing statement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Vanishing {
    BothNonzero,
    FirstZero,
    SecondZero,
    /// Both vanish: the statement is falsified.
    BothZero,
}

impl Vanishing {
    pub fn label(self) -> &'static str {
        match self {
            Vanishing::BothNonzero => "both_nonzero",
            Vanishing::FirstZero => "first_zero",
            Vanishing::SecondZero => "second_zero",
            Vanishing::BothZero => "both_zero",
        }
    }
}

/// Which of `Σ_{n,0}`, `Σ_{n+I,1}` vanish, decided exactly through `Λ`.
pub fn nonvanishing_check(ctx: &PairContext, n: u32, i: u32) -> Result<Vanishing> {
    if i > 1 {
        return Err(Error::Parameter(format!("I must be 0 or 1, got {i}")));
    }
    let first = ctx.lambda(n, 0)?.is_zero();
    let second = ctx.lambda(n + i, 1)?.is_zero();
    Ok(match (first, second) {
        (false, false) => Vanishing::BothNonzero,
        (true, false) => Vanishing::FirstZero,
        (false, true) => Vanishing::SecondZero,
        (true, true) => Vanishing::BothZero,
    })
}

/// `|Λ Λ̃| >= 1`, exactly: `|Λ Λ̃|^{2r} >= 1`. `None` when `Σ = 0`.
///
/// For square `D` the two sequences are not conjugate and `Λ̃` may vanish on
/// its own; then `Λ^r` is a nonzero rational integer and `|Λ| >= 1` is
/// checked instead. For non-square `D` a vanishing `Λ̃` is a falsification.
pub fn lambda_product_bound(ctx: &PairContext, n: u32, g: u32) -> Result<Option<bool>> {
    let r = ctx.r();
    let l = ctx.lambda(n, g)?;
    if l.is_zero() {
        return Ok(None);
    }
    let lt = ctx.lambda_tilde(n, g)?;
    let one = QuadElem::one(ctx.d());
    if lt.is_zero() {
        if !ctx.form.d_is_square() {
            return Ok(Some(false));
        }
        return Ok(Some(l.abs_pow_2r(r).cmp_real(&one)? != Ordering::Less));
    }
    let prod = &l.abs_pow_2r(r) * &lt.abs_pow_2r(r);
    Ok(Some(prod.cmp_real(&one)? != Ordering::Less))
}

/// `|Λ| = |Λ̃|` when `D < 0`, exactly. `None` when `D > 0`.
pub fn conjugate_moduli(ctx: &PairContext, n: u32, g: u32) -> Result<Option<bool>> {
    if !ctx.d().is_negative() {
        return Ok(None);
    }
    let r = ctx.r();
    Ok(Some(
        ctx.lambda(n, g)?.abs_pow_2r(r) == ctx.lambda_tilde(n, g)?.abs_pow_2r(r),
    ))
}

fn pow_i(x: &RealInterval, e: i64) -> Result<RealInterval> {
    let p = x.powu(e.unsigned_abs() as u32);
    if e < 0 {
        p.recip()
    } else {
        Ok(p)
    }
}

/// `Z_1^r > 2h`, exactly.
pub fn large_first(ctx: &PairContext, h: &BigInt) -> Result<bool> {
    let four_h2 = QuadElem::from_int(h * h * 4u32, ctx.d());
    Ok(ctx.sol1.z_pow_2r.cmp_real(&four_h2)? == Ordering::Greater)
}

/// The enclosure of `Λ'_{n,g}` at working precision `bits`.
pub fn lambda_prime(ctx: &PairContext, h: &BigInt, n: u32, g: u32, bits: u32) -> Result<RealInterval> {
    let r = ctx.r();
    let ri = r as i64;
    let (ni, gi) = (n as i64, g as i64);
    let w = bits + 16;
    let z1 = ctx.sol1.z_pow_2r.to_interval(w)?.root(2 * r, w)?;
    let z2 = ctx.sol2.z_pow_2r.to_interval(w)?.root(2 * r, w)?;
    let d_abs = rint(ctx.d().abs());
    let mut c = RealInterval::point(
        rint(BigInt::from(r).pow(n)) * rint(BigInt::from(r * (r - 1)).pow(n + g)),
    );
    c = c.mul(&RealInterval::point(d_abs.clone()).powu(n + g).root(2, w)?);
    if g == 0 {
        let chi = RealInterval::point(ctx.form.chi_r().abs()).root(r, w)?;
        c = c.mul(&chi.recip()?.scale(&rint(2)));
    }
    let hq = rint(h.clone());
    let term1 = c
        .scale(&two_pow((3 * n + 2) as u64))
        .scale(&hq)
        .mul(&pow_i(&z1, ni * ri + 1 - gi)?)
        .mul(&pow_i(&z2, 1 - ri)?);
    let frac = PadePair::build(n, g, r)?.remainder_constant().abs();
    let one_minus = RealInterval::point(Rational::one())
        .sub(&pow_i(&z1, -ri)?.scale(&(rint(2) * &hq)));
    let damp = one_minus.powu(2 * n + 1 - g).root(2, w)?.recip()?;
    let term2 = c
        .scale(&two_pow((n + 1 - g) as u64))
        .mul(&damp)
        .scale(&frac)
        .scale(&crate::exactnum::rational_pow(&hq, 2 * ni + 1 - gi))
        .mul(&pow_i(&z1, -ri * (ni + 1 - gi) + 1 - gi)?)
        .mul(&z2);
    Ok(term1.add(&term2))
}

/// Results for one pair and one `(n, g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaCheck {
    pub n: u32,
    pub g: u32,
    pub sigma_zero: bool,
    /// `Λ̃ = 0` while `Λ != 0`, possible only for square `D`.
    pub tilde_zero: bool,
    pub integral: bool,
    /// `|ΛΛ̃| >= 1`; `None` when `Σ = 0`.
    pub product_at_least_one: Option<bool>,
    /// `Λ' >= 1`; `None` when undecided or `Σ = 0`.
    pub lambda_prime_at_least_one: Option<bool>,
    /// `max(|Λ|, |Λ̃|) <= Λ'`; `None` when undecided or `Σ = 0`.
    pub upper_bound: Option<bool>,
    pub conjugate_moduli: Option<bool>,
    pub bits: u32,
}

impl LambdaCheck {
    /// Something that should hold was shown false.
    pub fn falsified(&self) -> bool {
        !self.integral
            || self.product_at_least_one == Some(false)
            || self.lambda_prime_at_least_one == Some(false)
            || self.upper_bound == Some(false)
            || self.conjugate_moduli == Some(false)
    }

    pub fn undecided(&self) -> bool {
        !self.sigma_zero && (self.lambda_prime_at_least_one.is_none() || self.upper_bound.is_none())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "g": self.g,
            "sigma_zero": self.sigma_zero,
            "tilde_zero": self.tilde_zero,
            "integral": self.integral,
            "product_at_least_one": self.product_at_least_one,
            "lambda_prime_at_least_one": self.lambda_prime_at_least_one,
            "upper_bound": self.upper_bound,
            "conjugate_moduli": self.conjugate_moduli,
            "bits": self.bits,
        })
    }
}

fn at_least(x: &RealInterval, q: &Rational) -> Option<bool> {
    if x.lo() >= q {
        Some(true)
    } else if x.hi() < q {
        Some(false)
    } else {
        None
    }
}

/// All checks on `Λ_{n,g}` for a pair with `Z_1^r > 2h`, escalating the
/// interval precision up to `max_bits`.
pub fn check_lambda(ctx: &PairContext, h: &BigInt, n: u32, g: u32, max_bits: u32) -> Result<LambdaCheck> {
    let r = ctx.r();
    let l = ctx.lambda(n, g)?;
    let lt = ctx.lambda_tilde(n, g)?;
    let sigma_zero = l.is_zero();
    let integral = l.integral(r) && lt.integral(r);
    let product = lambda_product_bound(ctx, n, g)?;
    let conj = conjugate_moduli(ctx, n, g)?;
    let mut out = LambdaCheck {
        n,
        g,
        sigma_zero,
        tilde_zero: !sigma_zero && lt.is_zero(),
        integral,
        product_at_least_one: product,
        lambda_prime_at_least_one: None,
        upper_bound: None,
        conjugate_moduli: conj,
        bits: 0,
    };
    if sigma_zero {
        return Ok(out);
    }
    let big = l.abs_pow_2r(r).cmp_real(&lt.abs_pow_2r(r))?;
    let larger = if big == Ordering::Less { &lt } else { &l };
    let mut bits = 64u32;
    loop {
        let lp = lambda_prime(ctx, h, n, g, bits)?;
        out.lambda_prime_at_least_one = at_least(&lp, &Rational::one());
        // |Λ|^{2r} <= Λ'^{2r}
        let top = larger.abs_pow_2r(r).to_interval(bits + 16)?;
        let lp2r = lp.powu(2 * r);
        out.upper_bound = if lp2r.lo() >= top.hi() {
            Some(true)
        } else if lp2r.hi() < top.lo() {
            Some(false)
        } else {
            None
        };
        out.bits = bits;
        if (out.lambda_prime_at_least_one.is_some() && out.upper_bound.is_some()) || bits >= max_bits {
            return Ok(out);
        }
        bits = (bits * 2).min(max_bits);
    }
}

/// Everything checked on one ordered pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairReport {
    pub first: (BigInt, BigInt),
    pub second: (BigInt, BigInt),
    pub class: u32,
    pub lambdas: Vec<LambdaCheck>,
    /// `(n, I, outcome)`.
    pub vanishing: Vec<(u32, u32, Vanishing)>,
}

impl PairReport {
    pub fn falsified(&self) -> bool {
        self.lambdas.iter().any(LambdaCheck::falsified)
            || self.vanishing.iter().any(|v| v.2 == Vanishing::BothZero)
    }

    pub fn undecided(&self) -> bool {
        self.lambdas.iter().any(LambdaCheck::undecided)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "first": [self.first.0.to_string(), self.first.1.to_string()],
            "second": [self.second.0.to_string(), self.second.1.to_string()],
            "class": self.class,
            "lambdas": self.lambdas.iter().map(LambdaCheck::to_json).collect::<Vec<_>>(),
            "vanishing": self.vanishing.iter().map(|(n, i, v)| json!({"n": n, "I": i, "outcome": v.label()})).collect::<Vec<_>>(),
        })
    }
}

/// Ordered pairs `(s_i, s_j)`, `i < j`, within one related class (so
/// `ζ_j <= ζ_i`) and with `Z_i^r > 2h`, up to `limit` pairs.
pub fn eligible_pairs<'c>(
    cls: &'c RelatedClassification,
    h: &BigInt,
    limit: usize,
) -> Result<Vec<(u32, &'c SolutionRecord, &'c SolutionRecord)>> {
    let four_h2 = rint(h * h * 4u32);
    let mut out = Vec::new();
    for (&k, group) in &cls.groups {
        for i in 0..group.len() {
            let a = &group[i];
            if a.degenerate() {
                continue;
            }
            let q = QuadElem::rational(four_h2.clone(), a.z_pow_2r.d());
            if a.z_pow_2r.cmp_real(&q)? != Ordering::Greater {
                continue;
            }
            for b in &group[i + 1..] {
                if b.degenerate() {
                    continue;
                }
                if out.len() >= limit {
                    return Ok(out);
                }
                out.push((k, a, b));
            }
        }
    }
    Ok(out)
}

/// Run every check for `n = 1..=n_max`, `g ∈ {0, 1}` and the vanishing
/// statement for `I ∈ {0, 1}`.
pub fn verify_pair(
    form: &DiagForm,
    h: &BigInt,
    class: u32,
    s1: &SolutionRecord,
    s2: &SolutionRecord,
    n_max: u32,
    max_bits: u32,
) -> Result<PairReport> {
    let ctx = PairContext::new(form, s1, s2)?;
    let mut lambdas = Vec::new();
    let mut vanishing = Vec::new();
    for n in 1..=n_max {
        for g in 0..=1 {
            lambdas.push(check_lambda(&ctx, h, n, g, max_bits)?);
        }
        for i in 0..=1 {
            vanishing.push((n, i, nonvanishing_check(&ctx, n, i)?));
        }
    }
    Ok(PairReport {
        first: (s1.x.clone(), s1.y.clone()),
        second: (s2.x.clone(), s2.y.clone()),
        class,
        lambdas,
        vanishing,
    })
}

/// `R(k) = (r-1)^{k-1}`.
pub fn growth_r(r: u32, k: u32) -> BigInt {
    BigInt::from(r - 1).pow(k - 1)
}

/// `|j| >= 2 r^{i₇/r} h^{i₈/r}` with `i₇ = 7r²/(R(k)-2r-1)` and
/// `i₈ = (2R(k)+r²-3r)/(R(k)-2r-1)`, decided exactly from
/// `|j|^{r(r-1)} = |Δ|/r^r`.
pub fn chain_hypothesis(form: &DiagForm, h: &BigInt, k: u32) -> Result<bool> {
    let r = form.r();
    if k < 3 {
        return Err(Error::Parameter(format!("k must be at least 3, got {k}")));
    }
    let rr = rint(growth_r(r, k));
    let ri = rint(r as u64);
    let den = &rr - rint(2 * r as u64 + 1);
    if !den.is_positive() {
        return Err(Error::Parameter(format!("R(k) - 2r - 1 <= 0 for r = {r}, k = {k}")));
    }
    let i7 = rint(7 * (r as u64).pow(2)) / &den;
    let i8 = (rint(2) * &rr + rint((r * r) as u64) - rint(3 * r as u64)) / &den;
    let jr = form.j_power().abs();
    let lhs = [PowerTerm::new(jr, Rational::new(BigInt::one(), BigInt::from(r * (r - 1))))];
    let mut rhs = vec![
        PowerTerm::int(2, Rational::one()),
        PowerTerm::int(r, &i7 / &ri),
    ];
    if !h.is_one() {
        rhs.push(PowerTerm::new(rint(h.clone()), &i8 / &ri));
    }
    let c = compare_products(&lhs, &rhs, &Precision::default())?;
    Ok(c.ordering != Ordering::Less)
}

/// `Z_k >= Z_{k-1}^{(n+1)r-1} / (2^{n+4} r^{(3nr+2)/(r-2)} |j|^{(nr+2)/(r-2)} h^{2n+1})`
/// for the last two entries of `sols` (sorted by decreasing `ζ`), raised
/// to the power `2r(r-1)(r-2)`. A list shorter than two holds vacuously.
/// `None` when the comparison could not be settled within `max_bits`.
pub fn chain_conclusion_check(
    form: &DiagForm,
    h: &BigInt,
    sols: &[SolutionRecord],
    n: u32,
    max_bits: u32,
) -> Result<Option<bool>> {
    if sols.len() < 2 {
        return Ok(Some(true));
    }
    let r = form.r() as u64;
    let n = n as u64;
    let d = form.d();
    let zk = &sols[sols.len() - 1].z_pow_2r;
    let zk1 = &sols[sols.len() - 2].z_pow_2r;
    let q = |v: Rational, e: u64| QPow::rational(v, d, e);
    let jsq = form.j_power() * form.j_power();
    let lhs = vec![
        QPow::new(zk.clone(), (r - 1) * (r - 2)),
        q(rint(2), (n + 4) * 2 * r * (r - 1) * (r - 2)),
        q(rint(r), (3 * n * r + 2) * 2 * r * (r - 1)),
        q(jsq, n * r + 2),
        q(rint(h.clone()), (2 * n + 1) * 2 * r * (r - 1) * (r - 2)),
    ];
    let rhs = vec![QPow::new(zk1.clone(), ((n + 1) * r - 1) * (r - 1) * (r - 2))];
    let lhs: Vec<QPow> = lhs.into_iter().filter(|p| !p.base.is_one()).collect();
    let s = compare_magnitudes(&lhs, &rhs, max_bits)?;
    Ok(s.ordering.map(|o| o != Ordering::Less))
}

/// `j^{r(r-1)}` as a rational, for reports.
pub fn j_power_string(form: &DiagForm) -> String {
    crate::exactnum::fmt_rational(form.j_power())
}
