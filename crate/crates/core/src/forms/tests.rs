use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::Signed;

use super::*;
use crate::exactnum::{rat, rint};

fn b(n: i64) -> BigInt {
    BigInt::from(n)
}

fn q(a: i64, bb: i64, d: i64) -> QuadElem {
    QuadElem::new(rint(a), rint(bb), b(d))
}

fn golden_form() -> DiagForm {
    // α₁ = 1 + √5, β₁ = √5 and their conjugates
    DiagForm::from_xi(&q(1, 1, 5), &q(0, 1, 5), &q(-1, 1, 5), &q(0, -1, 5), 5).unwrap()
}

fn eisenstein_form() -> DiagForm {
    DiagForm::from_xi(&q(1, 1, -3), &q(1, 1, -3), &q(-1, 1, -3), &q(1, -1, -3), 5).unwrap()
}

#[test]
fn binomial_invariants() {
    let f = DiagForm::binomial_u64(1, 1, 5).unwrap();
    assert_eq!(f.quad(), (&b(0), &b(1), &b(0)));
    assert_eq!(f.d(), &b(1));
    assert_eq!(f.discriminant().unwrap().resultant.abs(), b(3125));

    let g = DiagForm::binomial_u64(3, 2, 5).unwrap();
    let expect = b(3125) * b(6).pow(4);
    assert_eq!(g.discriminant().unwrap().resultant.abs(), expect);

    let h = DiagForm::binomial_u64(2, 3, 6).unwrap();
    let c = h.class();
    assert_eq!(c.d_sign, DSign::Positive);
    assert!(!c.definite);
}

#[test]
fn xi_constructor_examples() {
    let f = DiagForm::from_xi(&q(1, 0, 1), &q(0, 0, 1), &q(1, 0, 1), &q(1, 0, 1), 5).unwrap();
    assert_eq!(f.coeffs(), &[b(0), b(-5), b(-10), b(-10), b(-5), b(-1)]);
    let bad = DiagForm::from_xi(
        &q(1, 0, 1),
        &QuadElem::rational(rat(1, 2), &b(1)),
        &q(1, 0, 1),
        &q(0, 0, 1),
        5,
    );
    assert_eq!(bad.unwrap_err(), Error::NotIntegral);
    let same = DiagForm::from_xi(&q(1, 0, 1), &q(2, 0, 1), &q(3, 0, 1), &q(2, 0, 1), 5);
    assert!(matches!(same, Err(Error::Degenerate(_))));
    assert!(matches!(
        DiagForm::binomial_u64(1, 1, 2),
        Err(Error::InvalidForm(_))
    ));
}

#[test]
fn conjugate_pair_over_sqrt5() {
    let f = golden_form();
    assert_eq!(f.quad(), (&b(1), &b(0), &b(-5)));
    assert_eq!(f.d(), &b(20));
    assert!(f.discriminant().is_ok());
    assert!(f.sqrt_d_coeffs_integral());
    for (x, y) in [(1, 0), (2, -1), (7, 3)] {
        let (xi, eta) = f.xi_eta(&b(x), &b(y));
        assert_eq!(&xi - &eta, QuadElem::from_int(f.eval_i64(x, y), f.d()));
        assert!(f.xi_eta_product_holds(&b(x), &b(y)));
    }
}

#[test]
fn negative_discriminant_form() {
    let f = eisenstein_form();
    assert!(f.d().is_negative());
    assert!(!f.class().definite);
    for (x, y) in [(1, 0), (1, 1), (-3, 2), (5, 7)] {
        let (xi, eta) = f.xi_eta(&b(x), &b(y));
        assert_eq!(xi.norm(), eta.norm());
        assert_eq!(eta, -xi.conj());
        assert_eq!(&xi - &eta, QuadElem::from_int(f.eval_i64(x, y), f.d()));
    }
    assert!(f.sqrt_d_coeffs_integral());
}

#[test]
fn evaluation_examples() {
    let f = DiagForm::binomial_u64(1, 1, 5).unwrap();
    assert_eq!(f.eval_i64(1, 0), b(1));
    let (xi, eta) = f.xi_eta(&b(1), &b(0));
    assert!(xi.is_one() && eta.is_zero());
    assert_eq!(DiagForm::binomial_u64(3, 2, 5).unwrap().eval_i64(1, 1), b(1));
    assert_eq!(DiagForm::binomial_u64(2, 3, 5).unwrap().eval_i64(2, 1), b(61));
}

#[test]
fn hessian_and_jacobian_examples() {
    let f = DiagForm::binomial_u64(1, 1, 5).unwrap();
    assert_eq!(f.hessian_value(&b(1), &b(1)).unwrap(), b(-400));
    assert_eq!(f.hessian_value(&b(0), &b(0)).unwrap(), b(0));
    assert_eq!(f.jacobian_value(&b(0), &b(0)).unwrap(), b(0));
    assert_eq!(f.jacobian_value(&b(1), &b(0)).unwrap(), b(0));
    // P = -6000 x^7 y^2 - 6000 x^2 y^7
    assert_eq!(f.jacobian_value(&b(1), &b(1)).unwrap(), b(-12000));
    assert_eq!(f.jacobian_value(&b(2), &b(1)).unwrap(), b(-6000 * 128 - 6000 * 4));
    for g in [golden_form(), eisenstein_form()] {
        for (x, y) in [(3, -2), (1, 4), (-5, 1)] {
            assert!(g.hessian_check(&b(x), &b(y)).agrees());
            assert!(g.jacobian_check(&b(x), &b(y)).unwrap().agrees());
        }
    }
}

#[test]
fn gl2_action_examples() {
    let f = DiagForm::binomial_u64(1, 1, 5).unwrap();
    assert_eq!(f.gl2_action(&Mat2::identity()).unwrap().coeffs(), f.coeffs());
    let swapped = f.gl2_action(&Mat2::new(0, 1, 1, 0)).unwrap();
    let rev: Vec<BigInt> = f.coeffs().iter().rev().cloned().collect();
    assert_eq!(swapped.coeffs(), rev.as_slice());
    assert!(matches!(
        f.gl2_action(&Mat2::new(2, 0, 0, 1)),
        Err(Error::NotUnimodular(_))
    ));
    let g = golden_form();
    let m = Mat2::new(2, 3, 1, 2);
    let gm = g.gl2_action(&m).unwrap();
    assert_eq!(
        gm.discriminant().unwrap().resultant.abs(),
        g.discriminant().unwrap().resultant.abs()
    );
}

#[test]
fn siegel_normalisation_of_binomial() {
    let f = DiagForm::binomial_u64(3, 2, 5).unwrap();
    let s = f.siegel();
    assert_eq!(s.frame, Mat2::new(1, 0, 1, 1));
    assert_eq!(s.alpha1, QuadElem::from_int(3, &b(1)));
    assert!(s.beta1.is_zero());
    assert_eq!(s.gamma1, QuadElem::from_int(2, &b(1)));
    assert!(s.delta1.is_one());
    // F ∘ frame = 3x^5 - 2(x + y)^5
    let framed = f.gl2_action(&s.frame).unwrap();
    let direct = DiagForm::from_xi(&s.alpha1, &s.beta1, &s.gamma1, &s.delta1, 5).unwrap();
    assert_eq!(framed.coeffs(), direct.coeffs());
}

#[test]
fn reduction_of_definite_quadratic_part() {
    let f = eisenstein_form();
    let moved = f.gl2_action(&Mat2::new(3, 7, 2, 5)).unwrap();
    assert!(!moved.is_reduced());
    let (red, m) = moved.reduce().unwrap();
    assert!(red.is_reduced());
    let (a, bb, c) = red.quad();
    assert!(c >= a && a >= &bb.abs());
    assert_eq!(red.d(), f.d());
    for (x, y) in [(1, 0), (2, -1), (4, 9)] {
        let (px, py) = m.apply(&b(x), &b(y));
        assert_eq!(red.eval_i64(x, y), moved.eval(&px, &py));
    }
    assert!(DiagForm::binomial_u64(1, 1, 5).unwrap().reduce().is_err());
}

#[test]
fn reduced_lower_bound() {
    let (red, _) = eisenstein_form().reduce().unwrap();
    for (x, y) in [(1, 1), (-2, 3), (7, -1), (0, 1)] {
        assert_eq!(red.reduced_lower_bound_holds(&b(x), &b(y)), Some(true));
    }
    assert_eq!(red.reduced_lower_bound_holds(&b(1), &b(0)), None);
}

#[test]
fn definite_even_form() {
    // x^6 + 2(x + y)^6 has α₁γ₁ < 0 and D = 1
    let f = DiagForm::from_xi(&q(1, 0, 1), &q(0, 0, 1), &q(-2, 0, 1), &q(1, 0, 1), 6).unwrap();
    assert!(f.class().definite);
    assert_eq!(f.eval_i64(1, 0), b(3));
    assert_eq!((&f.xi.scale * &f.eta.scale).sign().unwrap(), Ordering::Less);
}

#[test]
fn two_over_chi_products_are_integral() {
    for f in [golden_form(), eisenstein_form(), DiagForm::binomial_u64(3, 2, 7).unwrap()] {
        let p1 = (b(2), b(-1));
        let p2 = (b(5), b(3));
        assert!(f
            .two_over_chi_uv((&p1.0, &p1.1), (&p2.0, &p2.1))
            .is_algebraic_integer());
        for a in 1..f.r() {
            for use_v in [false, true] {
                assert!(f
                    .binomial_u_product((&p1.0, &p1.1), (&p2.0, &p2.1), a, use_v)
                    .is_algebraic_integer());
            }
        }
    }
}

#[test]
fn json_roundtrip() {
    for f in [golden_form(), eisenstein_form(), DiagForm::binomial_u64(3, 2, 5).unwrap()] {
        let v = f.to_json();
        let g = DiagForm::from_json(&v).unwrap();
        assert_eq!(f, g);
        assert!(v["D"].is_string());
    }
}
