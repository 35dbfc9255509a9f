//! Hypergeometric Padé approximants to `(1 - z)^{1/r}`.
//!
//! `A_{n,g}(z) = Σ_{m<=n} C(n-g+1/r, m) C(2n-g-m, n-g) (-z)^m` and
//! `B_{n,g}(z) = Σ_{m<=n-g} C(n-1/r, m) C(2n-g-m, n) (-z)^m`, with
//! `A - (1-z)^{1/r} B` vanishing to order `2n+1-g` at the origin.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::exactnum::{
    binomial, fmt_rational, gen_binomial, rational_pow, rint, QuadElem, Rational, RealInterval,
};
use crate::poly::Poly;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadePair {
    pub n: u32,
    pub g: u32,
    pub r: u32,
    a: Poly,
    b: Poly,
}

fn check_params(n: u32, g: u32, r: u32) -> Result<()> {
    if n < 1 {
        return Err(Error::Parameter(format!("n must be positive, got {n}")));
    }
    if g > 1 {
        return Err(Error::Parameter(format!("g must be 0 or 1, got {g}")));
    }
    if r < 3 {
        return Err(Error::Parameter(format!("r must be at least 3, got {r}")));
    }
    Ok(())
}

fn inv_r(r: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(r))
}

fn signed(m: usize, q: Rational) -> Rational {
    if m % 2 == 1 {
        -q
    } else {
        q
    }
}

impl PadePair {
    pub fn build(n: u32, g: u32, r: u32) -> Result<PadePair> {
        check_params(n, g, r)?;
        let (n64, g64) = (n as u64, g as u64);
        let qa = rint(n - g) + inv_r(r);
        let qb = rint(n) - inv_r(r);
        let a = (0..=n64)
            .map(|m| {
                let c = gen_binomial(&qa, m) * rint(binomial(2 * n64 - g64 - m, n64 - g64));
                signed(m as usize, c)
            })
            .collect();
        let b = (0..=n64 - g64)
            .map(|m| {
                let c = gen_binomial(&qb, m) * rint(binomial(2 * n64 - g64 - m, n64));
                signed(m as usize, c)
            })
            .collect();
        Ok(PadePair {
            n,
            g,
            r,
            a: Poly::new(a),
            b: Poly::new(b),
        })
    }

    pub fn a(&self) -> &Poly {
        &self.a
    }

    pub fn b(&self) -> &Poly {
        &self.b
    }

    pub fn a_coeffs(&self) -> &[Rational] {
        self.a.coeffs()
    }

    pub fn b_coeffs(&self) -> &[Rational] {
        self.b.coeffs()
    }

    /// Order of vanishing of the remainder, `2n + 1 - g`.
    pub fn order(&self) -> usize {
        (2 * self.n + 1 - self.g) as usize
    }

    /// `C(2n - g, n)`, the common value of `A(0)`, `B(0)` and `C_{n,g}(1)`.
    pub fn central(&self) -> BigInt {
        binomial((2 * self.n - self.g) as u64, self.n as u64)
    }

    /// Coefficients of `z^0 .. z^order` of `A(z) - (1-z)^{1/r} B(z)`.
    pub fn remainder_series(&self, order: usize) -> Result<Vec<Rational>> {
        if order < self.order() + 1 {
            return Err(Error::Parameter(format!(
                "order {order} is below {}",
                self.order() + 1
            )));
        }
        let root = Poly::new(root_series(self.r, order + 1));
        let rem = self.a.sub(&root.mul_trunc(&self.b, order + 1));
        Ok((0..=order).map(|i| rem.coeff(i)).collect())
    }

    /// Closed form of the first nonzero remainder coefficient,
    /// `C(n-g+1/r, n+1-g) C(n-1/r, n) / C(2n+1-g, n)`, which is also the
    /// constant in the remainder bound.
    pub fn remainder_constant(&self) -> Rational {
        let (n, g) = (self.n as u64, self.g as u64);
        gen_binomial(&(rint(n - g) + inv_r(self.r)), n + 1 - g)
            * gen_binomial(&(rint(n) - inv_r(self.r)), n)
            / rint(binomial(2 * n + 1 - g, n))
    }

    /// `C_{n,g}(z) = Σ C(n-1/r, n-m) C(n-g+1/r, m) z^m`.
    pub fn c_poly(&self) -> Poly {
        let (n, g) = (self.n as u64, self.g as u64);
        let p = rint(n) - inv_r(self.r);
        let q = rint(n - g) + inv_r(self.r);
        Poly::new(
            (0..=n)
                .map(|m| gen_binomial(&p, n - m) * gen_binomial(&q, m))
                .collect(),
        )
    }

    /// `D_{n,g}(z) = Σ C(n-1/r, m) C(n-g+1/r, n-g-m) z^m`.
    pub fn d_poly(&self) -> Poly {
        let (n, g) = (self.n as u64, self.g as u64);
        let p = rint(n) - inv_r(self.r);
        let q = rint(n - g) + inv_r(self.r);
        Poly::new(
            (0..=n - g)
                .map(|m| gen_binomial(&p, m) * gen_binomial(&q, n - g - m))
                .collect(),
        )
    }

    /// `A*(x, y) = x^n A(y/x)` at `x = λ`, `y = μ` in `Q(√D)`.
    pub fn a_star(&self, lambda: &QuadElem, mu: &QuadElem) -> QuadElem {
        homogenize(&self.a, self.n as usize, lambda, mu)
    }

    /// `B*(x, y) = x^(n-g) B(y/x)`.
    pub fn b_star(&self, lambda: &QuadElem, mu: &QuadElem) -> QuadElem {
        homogenize(&self.b, (self.n - self.g) as usize, lambda, mu)
    }

    pub fn to_json(&self) -> Value {
        let f = |p: &Poly| p.coeffs().iter().map(fmt_rational).collect::<Vec<_>>();
        json!({ "n": self.n, "g": self.g, "r": self.r, "A": f(&self.a), "B": f(&self.b) })
    }
}

/// Coefficients `0 .. len` of the binomial series of `(1 - z)^{1/r}`,
/// via `c_{k+1} = c_k (k - 1/r) / (k + 1)`.
pub fn root_series(r: u32, len: usize) -> Vec<Rational> {
    let ir = inv_r(r);
    let mut out = Vec::with_capacity(len);
    let mut c = Rational::one();
    for k in 0..len {
        out.push(c.clone());
        c = c * (rint(k as u64) - &ir) / rint(k as u64 + 1);
    }
    out
}

fn homogenize(p: &Poly, deg: usize, x: &QuadElem, y: &QuadElem) -> QuadElem {
    let d = x.d().clone();
    let mut acc = QuadElem::zero(&d);
    for m in 0..=deg {
        let term = &(&x.pow((deg - m) as u64) * &y.pow(m as u64))
            .scale(&p.coeff(m));
        acc = &acc + term;
    }
    acc
}

/// Verify that the remainder vanishes through `z^{2n-g}` and that the next
/// coefficient equals [`PadePair::remainder_constant`].
pub fn vanishing_order_holds(p: &PadePair) -> Result<bool> {
    let e = p.order();
    let s = p.remainder_series(e + 1)?;
    Ok(s[..e].iter().all(Zero::is_zero) && s[e] == p.remainder_constant() && !s[e].is_zero())
}

/// `C_{n,g}(z) = A_{n,g}(1-z)` and `D_{n,g}(z) = B_{n,g}(1-z)` as polynomial
/// identities, plus pointwise agreement at the sample points.
pub fn contiguity_check(n: u32, g: u32, r: u32, samples: &[Rational]) -> Result<bool> {
    let p = PadePair::build(n, g, r)?;
    let c = p.c_poly();
    let d = p.d_poly();
    let shifted_a = p.a.compose(&Poly::one_minus_z());
    let shifted_b = p.b.compose(&Poly::one_minus_z());
    if c != shifted_a || d != shifted_b {
        return Ok(false);
    }
    if c.eval(&Rational::one()) != rint(p.central()) {
        return Ok(false);
    }
    Ok(samples.iter().all(|z| {
        let w = Rational::one() - z;
        c.eval(z) == p.a.eval(&w) && d.eval(z) == p.b.eval(&w)
    }))
}

/// Every coefficient of `C_{n,g}` is positive.
pub fn c_coefficients_positive(p: &PadePair) -> bool {
    p.c_poly().coeffs().iter().all(|c| c.is_positive())
}

/// Outcome of one sup-norm sample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SupSample {
    /// `|1 - z| <= 1`, checked against `C(2n-g, n)`.
    InnerDisk(bool),
    /// `1 < |1 - z| <= 2`, checked against `2^{3n+2}`.
    OuterDisk(bool),
    /// Outside both disks; not checked.
    Skipped,
}

impl SupSample {
    pub fn passed(&self) -> bool {
        !matches!(self, SupSample::InnerDisk(false) | SupSample::OuterDisk(false))
    }
}

/// Exact sup-norm checks of `A_{n,g}` at Gaussian rational samples `re + i·im`.
pub fn sup_bound_samples(p: &PadePair, samples: &[(Rational, Rational)]) -> Vec<SupSample> {
    let inner = rint(p.central());
    let inner_sq = &inner * &inner;
    let outer_sq = rint(BigInt::one() << (2 * (3 * p.n + 2)) as usize);
    samples
        .iter()
        .map(|(re, im)| {
            let w_re = Rational::one() - re;
            let dist_sq = &w_re * &w_re + im * im;
            let (a, b) = p.a.eval_gaussian(re, im);
            let abs_sq = &a * &a + &b * &b;
            if dist_sq <= Rational::one() {
                SupSample::InnerDisk(abs_sq <= inner_sq)
            } else if dist_sq <= rint(4) {
                SupSample::OuterDisk(abs_sq <= outer_sq)
            } else {
                SupSample::Skipped
            }
        })
        .collect()
}

/// True when every in-disk sample satisfies its bound.
pub fn sup_bound_check(p: &PadePair, samples: &[(Rational, Rational)]) -> bool {
    sup_bound_samples(p, samples).iter().all(SupSample::passed)
}

/// `|A(z) - (1-z)^{1/r} B(z)| <= K |z|^e (1 - |z|)^{-e/2}` for a rational
/// `|z| <= 1/2`, with `e = 2n+1-g` and `K` the remainder constant. Starts at
/// `bits` of precision and doubles up to `max_bits`; `None` if undecided.
pub fn remainder_bound_holds(
    p: &PadePair,
    z: &Rational,
    bits: u32,
    max_bits: u32,
) -> Result<Option<bool>> {
    if z.abs() > Rational::new(BigInt::one(), BigInt::from(2)) {
        return Err(Error::Precondition("remainder bound needs |z| <= 1/2".into()));
    }
    if z.is_zero() {
        return Ok(Some(true));
    }
    let e = p.order() as i64;
    let k = p.remainder_constant().abs();
    let a = RealInterval::point(p.a.eval(z));
    let b = RealInterval::point(p.b.eval(z));
    let base = rational_pow(&(Rational::one() - z.abs()), e);
    let zpow = rational_pow(&z.abs(), e);
    let mut prec = bits.max(16);
    loop {
        let root = RealInterval::point(Rational::one() - z).root(p.r, prec)?;
        let lhs = a.sub(&root.mul(&b)).abs();
        let rhs = RealInterval::point(base.clone())
            .root(2, prec)?
            .recip()?
            .scale(&(&k * &zpow));
        if lhs.hi() <= rhs.lo() {
            return Ok(Some(true));
        }
        if lhs.lo() > rhs.hi() {
            return Ok(Some(false));
        }
        if prec >= max_bits {
            return Ok(None);
        }
        prec = (prec * 2).min(max_bits);
    }
}

/// `P_{n,I}(1) = C(n-1/r, n) C(n+I-1+1/r, n+I-1) - C(n+I-1/r, n+I) C(n+1/r, n)`.
pub fn wronskian_at_one(n: u32, i: u32, r: u32) -> Result<Rational> {
    check_params(n, i, r)?;
    let (n, i) = (n as u64, i as u64);
    let ir = inv_r(r);
    Ok(gen_binomial(&(rint(n) - &ir), n)
        * gen_binomial(&(rint(n + i - 1) + &ir), n + i - 1)
        - gen_binomial(&(rint(n + i) - &ir), n + i)
            * gen_binomial(&(rint(n) + &ir), n))
}

/// `A_{n,0} B_{n+I,1} - A_{n+I,1} B_{n,0}` expanded in full.
pub fn wronskian_poly(n: u32, i: u32, r: u32) -> Result<Poly> {
    let a0 = PadePair::build(n, 0, r)?;
    let a1 = PadePair::build(n + i, 1, r)?;
    Ok(a0.a.mul(&a1.b).sub(&a1.a.mul(&a0.b)))
}

/// The Wronskian expands to `P z^{2n+I}` with `P` the closed-form value,
/// and `P ≠ 0`.
pub fn wronskian_check(n: u32, i: u32, r: u32) -> Result<bool> {
    let w = wronskian_poly(n, i, r)?;
    let p = wronskian_at_one(n, i, r)?;
    let k = (2 * n + i) as usize;
    let expect = Poly::constant(p.clone()).shift(k);
    Ok(!p.is_zero() && w == expect)
}

/// `t(m) = C(a/r, m) r^{2m}`, which must be an integer.
pub fn integrality_t(a: i64, r: u32, m: u32) -> Result<BigInt> {
    if r == 0 {
        return Err(Error::Parameter("r must be positive".into()));
    }
    let q = Rational::new(BigInt::from(a), BigInt::from(r));
    let t = gen_binomial(&q, m as u64) * rint(num_traits::pow(BigInt::from(r), 2 * m as usize));
    if !t.is_integer() {
        return Err(Error::TheoremViolation(format!(
            "t({m}) = {} is not an integer for a = {a}, r = {r}",
            fmt_rational(&t)
        )));
    }
    Ok(t.to_integer())
}

/// `A*(λ, r²√D c)` and `B*(λ, r²√D c)` both lie in the ring of integers.
pub fn homogenized_integrality(p: &PadePair, lambda: &QuadElem, c: &BigInt) -> bool {
    let d = lambda.d().clone();
    let r2 = BigInt::from(p.r) * BigInt::from(p.r);
    let mu = QuadElem::sqrt_d(&d).scale(&rint(r2 * c));
    p.a_star(lambda, &mu).is_algebraic_integer() && p.b_star(lambda, &mu).is_algebraic_integer()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    #[test]
    fn small_pairs() {
        let p = PadePair::build(1, 0, 5).unwrap();
        assert_eq!(p.a_coeffs(), &[rint(2), rat(-6, 5)]);
        assert_eq!(p.b_coeffs(), &[rint(2), rat(-4, 5)]);
        let q = PadePair::build(1, 1, 5).unwrap();
        assert_eq!(q.a().degree(), Some(1));
        assert_eq!(q.b().degree(), Some(0));
        for (n, g) in [(1, 0), (3, 1), (5, 0)] {
            let p = PadePair::build(n, g, 7).unwrap();
            assert_eq!(p.a_coeffs()[0], rint(p.central()));
            assert_eq!(p.b_coeffs()[0], rint(p.central()));
        }
        assert!(PadePair::build(1, 2, 5).is_err());
        assert!(PadePair::build(0, 0, 5).is_err());
    }

    #[test]
    fn remainder_heads() {
        let p = PadePair::build(1, 0, 5).unwrap();
        let s = p.remainder_series(4).unwrap();
        assert_eq!(s.len(), 5);
        assert!(s[..3].iter().all(Zero::is_zero));
        assert!(!s[3].is_zero());
        let q = PadePair::build(1, 1, 5).unwrap();
        let s = q.remainder_series(3).unwrap();
        assert!(s[0].is_zero() && s[1].is_zero() && !s[2].is_zero());
        assert!(p.remainder_series(3).is_err());
        // 2 - 6z/5 - (1 - z/5 - 2z²/25 - 6z³/125)(2 - 4z/5) has z³ coefficient
        // -(4/5)(2/25) + 2(6/125) = 4/125
        assert_eq!(p.remainder_series(4).unwrap()[3], rat(4, 125));
        assert!(vanishing_order_holds(&p).unwrap());
    }

    #[test]
    fn contiguity_and_positivity() {
        let pts = [rat(1, 3), rat(-2, 7), rint(2)];
        assert!(contiguity_check(1, 0, 5, &pts).unwrap());
        assert!(contiguity_check(3, 1, 7, &pts).unwrap());
        assert!(c_coefficients_positive(&PadePair::build(4, 1, 9).unwrap()));
    }

    #[test]
    fn sup_bounds() {
        let p = PadePair::build(2, 0, 5).unwrap();
        let s = sup_bound_samples(
            &p,
            &[(rint(1), rint(0)), (rint(0), rint(0)), (rint(-1), rint(0)), (rint(5), rint(0))],
        );
        assert_eq!(s[0], SupSample::InnerDisk(true));
        assert_eq!(s[1], SupSample::InnerDisk(true));
        assert_eq!(p.a().eval(&rint(0)), rint(p.central()));
        assert_eq!(s[2], SupSample::OuterDisk(true));
        assert_eq!(s[3], SupSample::Skipped);
    }

    #[test]
    fn wronskian_values() {
        assert_eq!(wronskian_at_one(1, 0, 5).unwrap(), rat(-4, 25));
        assert!(!wronskian_at_one(1, 1, 5).unwrap().is_zero());
        let w = wronskian_poly(1, 1, 5).unwrap();
        assert!((0..3).all(|i| w.coeff(i).is_zero()));
        assert!(wronskian_check(1, 0, 5).unwrap());
        assert!(wronskian_check(3, 1, 8).unwrap());
    }

    #[test]
    fn t_values() {
        assert_eq!(integrality_t(1, 5, 2).unwrap(), BigInt::from(-50));
        assert_eq!(integrality_t(1, 5, 1).unwrap(), BigInt::from(5));
        assert_eq!(integrality_t(-7, 3, 0).unwrap(), BigInt::one());
    }

    #[test]
    fn remainder_bound_at_rational_points() {
        let p = PadePair::build(2, 1, 5).unwrap();
        for z in [rat(1, 2), rat(-1, 2), rat(1, 10), rat(-3, 7)] {
            assert_eq!(remainder_bound_holds(&p, &z, 64, 4096).unwrap(), Some(true));
        }
        assert!(remainder_bound_holds(&p, &rat(3, 4), 64, 4096).is_err());
    }

    #[test]
    fn homogenized_values_are_integral() {
        let p = PadePair::build(3, 0, 5).unwrap();
        for d in [-3i64, 5, 12] {
            let d = BigInt::from(d);
            let lam = QuadElem::new(rint(2), rint(-1), d.clone());
            assert!(homogenized_integrality(&p, &lam, &BigInt::from(3)));
        }
        // without the r² factor the values are not integral
        let lam = QuadElem::from_int(1, &BigInt::from(5));
        let mu = QuadElem::sqrt_d(&BigInt::from(5));
        assert!(!p.a_star(&lam, &mu).is_algebraic_integer());
    }
}
