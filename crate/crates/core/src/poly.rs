//! Univariate rational polynomials and integral binary forms.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::exactnum::{rint, QuadElem, Rational};

/// A polynomial with rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    /// `1 - z`.
    pub fn one_minus_z() -> Self {
        Poly::new(vec![rint(1), rint(-1)])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `z^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn scale(&self, q: &Rational) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * q).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        self.mul_trunc(o, usize::MAX)
    }

    /// Product truncated to terms of degree `< len`.
    pub fn mul_trunc(&self, o: &Poly, len: usize) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let n = (self.coeffs.len() + o.coeffs.len() - 1).min(len);
        let mut out = vec![Rational::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if i + j >= n {
                    break;
                }
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::constant(Rational::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `p(q(z))`.
    pub fn compose(&self, q: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(q).add(&Poly::constant(c.clone()));
        }
        acc
    }

    pub fn eval(&self, z: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * z + c)
    }

    pub fn eval_quad(&self, z: &QuadElem) -> QuadElem {
        self.coeffs
            .iter()
            .rev()
            .fold(QuadElem::zero(z.d()), |acc, c| {
                &(&acc * z) + &QuadElem::rational(c.clone(), z.d())
            })
    }

    /// Evaluate at a Gaussian rational `re + i·im`.
    pub fn eval_gaussian(&self, re: &Rational, im: &Rational) -> (Rational, Rational) {
        let mut a = Rational::zero();
        let mut b = Rational::zero();
        for c in self.coeffs.iter().rev() {
            let na = &a * re - &b * im + c;
            let nb = &a * im + &b * re;
            a = na;
            b = nb;
        }
        (a, b)
    }

    /// `z^k p(z)`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![Rational::zero(); k];
        c.extend(self.coeffs.iter().cloned());
        Poly::new(c)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("({c})z"),
                _ => format!("({c})z^{i}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A homogeneous binary form `Σ c_i x^(n-i) y^i` with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    coeffs: Vec<BigInt>,
}

impl BinaryForm {
    /// Coefficients `c_0..=c_n`, where `c_i` multiplies `x^(n-i) y^i`.
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty(), "a binary form needs a degree");
        BinaryForm { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        BinaryForm::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        let mut acc = self.coeffs[0].clone();
        let mut ypow = BigInt::one();
        for c in &self.coeffs[1..] {
            ypow *= y;
            acc = acc * x + c * &ypow;
        }
        acc
    }

    pub fn eval_i64(&self, x: i64, y: i64) -> BigInt {
        self.eval(&BigInt::from(x), &BigInt::from(y))
    }

    /// `∂/∂x`.
    pub fn dx(&self) -> BinaryForm {
        let n = self.degree();
        if n == 0 {
            return BinaryForm::new(vec![BigInt::zero()]);
        }
        BinaryForm::new(
            (0..n)
                .map(|i| &self.coeffs[i] * BigInt::from(n - i))
                .collect(),
        )
    }

    /// `∂/∂y`.
    pub fn dy(&self) -> BinaryForm {
        let n = self.degree();
        if n == 0 {
            return BinaryForm::new(vec![BigInt::zero()]);
        }
        BinaryForm::new(
            (1..=n)
                .map(|i| &self.coeffs[i] * BigInt::from(i))
                .collect(),
        )
    }

    pub fn mul(&self, o: &BinaryForm) -> BinaryForm {
        let mut out = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        BinaryForm::new(out)
    }

    fn zip(&self, o: &BinaryForm, f: impl Fn(&BigInt, &BigInt) -> BigInt) -> BinaryForm {
        assert_eq!(self.degree(), o.degree(), "adding forms of different degree");
        BinaryForm::new(
            self.coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| f(a, b))
                .collect(),
        )
    }

    pub fn add(&self, o: &BinaryForm) -> BinaryForm {
        self.zip(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &BinaryForm) -> BinaryForm {
        self.zip(o, |a, b| a - b)
    }

    pub fn scale(&self, k: &BigInt) -> BinaryForm {
        BinaryForm::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn pow(&self, e: u32) -> BinaryForm {
        let mut acc = BinaryForm::new(vec![BigInt::one()]);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `F(a x + b y, c x + d y)`.
    pub fn substitute(&self, a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) -> BinaryForm {
        let n = self.degree();
        let lx = BinaryForm::new(vec![a.clone(), b.clone()]);
        let ly = BinaryForm::new(vec![c.clone(), d.clone()]);
        let mut out = BinaryForm::new(vec![BigInt::zero(); n + 1]);
        for (i, coef) in self.coeffs.iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            let term = lx.pow((n - i) as u32).mul(&ly.pow(i as u32)).scale(coef);
            out = out.add(&term);
        }
        out
    }

    /// Discriminant `a_0^(2n-2) Π_{i<j} (θ_i - θ_j)²`, computed from the
    /// resultant of `f(x) = F(x, 1)` and `f'`. When the leading coefficient
    /// vanishes the form is first moved by a unimodular substitution, which
    /// leaves the discriminant unchanged.
    pub fn discriminant(&self) -> BigInt {
        let n = self.degree();
        assert!(n >= 1, "discriminant of a constant");
        if self.coeffs[0].is_zero() {
            for k in 1i64.. {
                let g = self.substitute(
                    &BigInt::one(),
                    &BigInt::zero(),
                    &BigInt::from(k),
                    &BigInt::one(),
                );
                if !g.coeffs[0].is_zero() {
                    return g.discriminant();
                }
                if k > n as i64 + 2 {
                    // F vanishes at more than n points of P^1: F = 0
                    return BigInt::zero();
                }
            }
        }
        if n == 1 {
            return BigInt::one();
        }
        // f = Σ c_i x^(n-i), descending powers of x
        let f: Vec<BigInt> = self.coeffs.clone();
        let fp: Vec<BigInt> = (0..n)
            .map(|i| &self.coeffs[i] * BigInt::from(n - i))
            .collect();
        let res = resultant(&f, &fp);
        let sign = if (n * (n - 1) / 2).is_multiple_of(2) { 1 } else { -1 };
        res * BigInt::from(sign) / &self.coeffs[0]
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.degree();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (xe, ye) = (n - i, i);
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            let a = c.abs();
            let mono = match (xe, ye) {
                (0, 0) => String::new(),
                (xe, 0) => pow_str("x", xe),
                (0, ye) => pow_str("y", ye),
                (xe, ye) => format!("{}*{}", pow_str("x", xe), pow_str("y", ye)),
            };
            if mono.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{a}*{mono}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn pow_str(v: &str, e: usize) -> String {
    if e == 1 {
        v.to_string()
    } else {
        format!("{v}^{e}")
    }
}

/// Resultant of two polynomials given by descending coefficient lists, as
/// the determinant of their Sylvester matrix.
pub fn resultant(f: &[BigInt], g: &[BigInt]) -> BigInt {
    let m = f.len() - 1;
    let n = g.len() - 1;
    let size = m + n;
    if size == 0 {
        return BigInt::one();
    }
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    for row in 0..n {
        for (j, c) in f.iter().enumerate() {
            mat[row][row + j] = c.clone();
        }
    }
    for row in 0..m {
        for (j, c) in g.iter().enumerate() {
            mat[n + row][row + j] = c.clone();
        }
    }
    determinant(mat)
}

/// Fraction-free (Bareiss) determinant of a square integer matrix.
pub fn determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    #[test]
    fn evaluation_and_partials() {
        let f = BinaryForm::from_i64(&[1, 0, 0, 0, 0, -1]);
        assert_eq!(f.eval_i64(1, 0), BigInt::from(1));
        assert_eq!(f.eval_i64(2, 1), BigInt::from(31));
        assert_eq!(f.dx(), BinaryForm::from_i64(&[5, 0, 0, 0, 0]));
        assert_eq!(f.dy(), BinaryForm::from_i64(&[0, 0, 0, 0, -5]));
        assert_eq!(f.to_string(), "x^5 - y^5");
    }

    #[test]
    fn discriminants_of_small_forms() {
        // x² + bxy + cy²: b² - 4c
        assert_eq!(BinaryForm::from_i64(&[1, 3, 1]).discriminant(), BigInt::from(5));
        assert_eq!(BinaryForm::from_i64(&[0, 1, 0]).discriminant(), BigInt::from(1));
        // cubic x³ + p x y² + q y³: -4p³ - 27q²
        assert_eq!(
            BinaryForm::from_i64(&[1, 0, -2, 1]).discriminant(),
            BigInt::from(-4 * -8 - 27)
        );
        assert_eq!(
            BinaryForm::from_i64(&[1, 0, 0, 0, 0, -1]).discriminant().abs(),
            BigInt::from(3125)
        );
    }

    #[test]
    fn substitution_is_composition() {
        let f = BinaryForm::from_i64(&[2, -1, 0, 3]);
        let g = f.substitute(&BigInt::from(1), &BigInt::from(2), &BigInt::from(3), &BigInt::from(7));
        for (x, y) in [(1, 1), (-2, 5), (3, 0)] {
            assert_eq!(g.eval_i64(x, y), f.eval_i64(x + 2 * y, 3 * x + 7 * y));
        }
    }

    #[test]
    fn univariate_algebra() {
        let p = Poly::new(vec![rat(2, 1), rat(-6, 5)]);
        let q = p.compose(&Poly::one_minus_z());
        assert_eq!(q, Poly::new(vec![rat(4, 5), rat(6, 5)]));
        assert_eq!(p.eval(&rat(1, 2)), rat(7, 5));
        assert_eq!(p.eval_gaussian(&rat(0, 1), &rat(1, 1)), (rat(2, 1), rat(-6, 5)));
        assert_eq!(p.mul(&p).coeff(2), rat(36, 25));
        assert_eq!(p.mul_trunc(&p, 1).degree(), Some(0));
    }

    #[test]
    fn bareiss_determinant() {
        let m = vec![
            vec![BigInt::from(2), BigInt::from(0), BigInt::from(1)],
            vec![BigInt::from(1), BigInt::from(3), BigInt::from(2)],
            vec![BigInt::from(1), BigInt::from(1), BigInt::from(2)],
        ];
        assert_eq!(determinant(m), BigInt::from(6));
    }
}
