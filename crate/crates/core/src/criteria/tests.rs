use num_bigint::BigInt;
use proptest::prelude::*;

use super::*;
use crate::exactnum::QuadElem;
use crate::solver::{enumerate_binomial_convergents, enumerate_box};

fn b(n: i64) -> BigInt {
    BigInt::from(n)
}

fn q(a: i64, bb: i64, d: i64) -> QuadElem {
    QuadElem::new(rint(a), rint(bb), b(d))
}

fn prec() -> Precision {
    Precision::default()
}

fn pow(base: i64, e: usize) -> BigInt {
    num_traits::pow(b(base), e)
}

/// A reduced sextic with `D = -3`.
fn negative_sextic() -> DiagForm {
    let f = DiagForm::from_xi(&q(1, 1, -3), &q(1, 1, -3), &q(-1, 1, -3), &q(1, -1, -3), 6).unwrap();
    f.reduce().unwrap().0
}

#[test]
fn delta_prime_examples() {
    let f = DiagForm::binomial_u64(1, 1, 5).unwrap();
    // 5^5 / (2^20 5^5)
    assert_eq!(delta_prime(&f, &b(1)).unwrap(), Rational::new(b(3125), pow(2, 20) * b(3125)));
    let g = DiagForm::binomial_u64(7, 11, 5).unwrap();
    let d1 = delta_prime(&g, &b(3)).unwrap();
    let d2 = delta_prime(&g, &b(6)).unwrap();
    assert_eq!(d1, d2 * rint(pow(2, 8)));
    // (ab)^{r-1} / 2^{r²-r} for binomials at h = 1
    assert_eq!(delta_prime(&g, &b(1)).unwrap(), Rational::new(pow(77, 4), pow(2, 20)));
    assert!(delta_prime(&g, &b(0)).is_err());
}

#[test]
fn discriminant_agrees_with_resultant() {
    for f in [
        DiagForm::binomial_u64(3, 2, 5).unwrap(),
        DiagForm::binomial_u64(5, 9, 7).unwrap(),
        negative_sextic(),
    ] {
        assert_eq!(abs_discriminant(&f).unwrap(), f.abs_discriminant());
    }
}

#[test]
fn omega_examples() {
    assert_eq!(omega_int(&b(1)).unwrap(), 0);
    assert_eq!(omega_int(&b(12)).unwrap(), 2);
    assert_eq!(omega_int(&b(30)).unwrap(), 3);
    assert!(omega_int(&b(0)).is_err());
}

#[test]
fn m_three_matches_the_corollary() {
    for (a, bb, r, h) in [(1u64, 1u64, 5u32, 1i64), (10u64.pow(15), 3, 5, 1), (10u64.pow(18), 7, 7, 2), (5, 6, 6, 1)] {
        let f = DiagForm::binomial_u64(a, bb, r).unwrap();
        let t = check_t1_4(&f, &b(h), 3, &[], &prec()).unwrap();
        let c = check_c1_5(&f, &b(h), &[], &prec()).unwrap();
        assert_eq!(t.hypothesis_holds, c.hypothesis_holds);
        assert_eq!(t.bound, c.bound);
        assert_eq!(t.trace[0].rhs, c.trace[0].rhs);
    }
    // the exponents reduce to 7r(r-1)/(r-4) and (r-1)(r²+r+2)/(r(r-4))
    for r in 5..12u32 {
        let den = m_denominator(r, 3);
        assert_eq!(den, BigInt::from(r * (r - 4)));
    }
}

#[test]
fn huge_binomial_meets_the_hypothesis() {
    // Δ' = (ab)^4 / 2^20 must exceed 5^35: ab >= 2^5 5^35 suffices
    let a = pow(10, 26);
    let f = DiagForm::binomial(&a, &b(3), 5).unwrap();
    let recs = enumerate_box(&f, &b(1), 40, 40).unwrap();
    let v = check_c1_5(&f, &b(1), &recs, &prec()).unwrap();
    assert!(v.hypothesis_holds);
    assert_eq!(v.bound, Some(b(3)));
    assert_eq!(v.pass, Some(true));
    assert!(v.observed <= 3);
}

#[test]
fn unit_binomial_fails_the_hypothesis() {
    let f = DiagForm::binomial_u64(1, 1, 5).unwrap();
    let recs = enumerate_box(&f, &b(1), 10, 10).unwrap();
    let v = check_t1_4(&f, &b(1), 3, &recs, &prec()).unwrap();
    assert!(!v.hypothesis_holds);
    assert_eq!(v.pass, None);
    assert_eq!(v.observed, 2);
}

#[test]
fn parameter_ranges() {
    let f5 = DiagForm::binomial_u64(2, 3, 5).unwrap();
    assert!(matches!(check_t1_3(&f5, &b(1), &[], &prec()), Err(Error::Parameter(_))));
    assert!(matches!(check_t1_4(&f5, &b(1), 2, &[], &prec()), Err(Error::Parameter(_))));
    assert!(matches!(check_t2_1(&f5, &b(1), 4, &[], &prec()), Err(Error::Parameter(_))));
    // l = 1 needs r >= 5, fine; l = 3 allows r >= 3
    assert!(check_t2_1(&f5, &b(1), 1, &[], &prec()).is_ok());
    let f4 = DiagForm::binomial_u64(2, 3, 4).unwrap();
    assert!(check_t2_1(&f4, &b(1), 1, &[], &prec()).is_err());
    assert!(check_t2_1(&f4, &b(1), 3, &[], &prec()).is_ok());
    let v = check_or_skip(&TheoremId::T1_3, &f5, &b(1), &[], &prec()).unwrap();
    assert!(v.out_of_scope.is_some() && v.pass.is_none());
}

#[test]
fn bound_table_rows() {
    let one = BigInt::one();
    let row = |t: &TheoremId, r: u32, m: u32| -> Vec<BigInt> {
        Case::ALL.iter().map(|&c| BoundTable::entry(t, c, r, m, &one).0).collect()
    };
    assert_eq!(row(&TheoremId::T1_3, 7, 0), vec![b(15), b(5), b(3), b(1)]);
    assert_eq!(row(&TheoremId::T1_4(4), 7, 4), vec![b(28), b(8), b(4), b(1)]);
    assert_eq!(row(&TheoremId::C1_5, 5, 3), vec![b(15), b(6), b(3), b(1)]);
    assert_eq!(row(&TheoremId::T2_1(2), 6, 0), vec![b(24), b(8), b(4), b(1)]);
    let w2 = b(25);
    let t19: Vec<BigInt> = Case::ALL.iter().map(|&c| BoundTable::entry(&TheoremId::T1_9, c, 5, 0, &w2).0).collect();
    assert_eq!(t19, vec![b(375), b(150), b(75), b(25)]);
    assert_eq!(BoundTable::to_json(&TheoremId::T1_3, 7, 0).as_array().unwrap().len(), 4);
}

#[test]
fn binomial_small_example_is_out_of_range() {
    let (sols, _) = enumerate_binomial_convergents(&b(3), &b(2), 5, &b(1), &b(10_000), 1 << 14).unwrap();
    let v = check_t1_1(&b(3), &b(2), &b(1), 5, &sols, &prec()).unwrap();
    assert!(!v.hypothesis_holds);
    assert_eq!(v.observed, 1);
    assert_eq!(v.pass, None);
}

#[test]
fn binomial_threshold_edge() {
    // r = 5, c = 1: ab >= 2^5 5^35
    let edge = pow(2, 5) * pow(5, 35);
    let at = check_t1_1(&edge, &b(1), &b(1), 5, &[], &prec()).unwrap();
    assert!(at.hypothesis_holds);
    let below = check_t1_1(&(edge - 1), &b(1), &b(1), 5, &[], &prec()).unwrap();
    assert!(!below.hypothesis_holds);
}

#[test]
fn binomial_equation_bound_uses_omega() {
    // gcd(12, 5ab) = 1 and ab far above 2^5 5^{228.25}
    let a = pow(7, 200);
    let v = check_t1_2(&a, &b(1), &b(12), 5, &[], &prec()).unwrap();
    assert!(v.hypothesis_holds);
    assert_eq!(v.bound, Some(b(50)));
    // only the weaker threshold: 3 r^ω(c)
    let a = pow(7, 40);
    let v = check_t1_2(&a, &b(1), &b(12), 5, &[], &prec()).unwrap();
    assert!(v.hypothesis_holds);
    assert_eq!(v.bound, Some(b(75)));
    // gcd(c, rab) > 1
    let v = check_t1_2(&pow(7, 200), &b(1), &b(10), 5, &[], &prec()).unwrap();
    assert!(!v.hypothesis_holds);
}

#[test]
fn epsilon_window_and_ceiling() {
    let r = 5;
    let eps = rat(1, 4 * (r - 1));
    let m = epsilon_m(r as u32, &eps).unwrap();
    assert!(epsilon_lower(r as u32, m) < eps);
    assert!(m == 3 || epsilon_lower(r as u32, m - 1) >= eps);
    assert!(epsilon_m(5, &rat(1, 8)).is_err());
    assert!(epsilon_m(5, &rint(0)).is_err());
    assert_eq!(ceil_log(&rint(8), 2).unwrap(), 3);
    assert_eq!(ceil_log(&rint(9), 2).unwrap(), 4);
    assert_eq!(ceil_log(&rat(1, 4), 2).unwrap(), -2);
    assert_eq!(ceil_log(&rat(1, 3), 2).unwrap(), -1);
    // ε = 1/16, r = 5: log_4(4) = 1, so (4 + 1) 5
    assert_eq!(c1_6_negative_bound(5, &rat(1, 16)).unwrap(), b(25));
}

#[test]
fn large_solution_filters() {
    let f = negative_sextic();
    assert!(f.is_reduced() && f.d().is_negative());
    let v = check_t1_7(&f, &b(10), 2, &[], &prec()).unwrap();
    assert_eq!((v.observed, v.pass), (0, Some(true)));
    let recs = enumerate_box(&f, &b(500), 30, 30).unwrap();
    let v = check_t1_7(&f, &b(500), 2, &recs, &prec()).unwrap();
    assert_eq!(v.pass, Some(true));
    assert_eq!(v.trace[0].what, "|j|^(r(r-1)) >= 1");
    let pos = DiagForm::binomial_u64(2, 3, 6).unwrap();
    assert!(matches!(check_t1_7(&pos, &b(1), 2, &[], &prec()), Err(Error::Precondition(_))));

    // H vanishes where uv = 0, so axis solutions never pass the Hessian filter
    let g = DiagForm::binomial_u64(1, 1, 5).unwrap();
    let axis = enumerate_box(&g, &b(1), 5, 5).unwrap();
    assert!(axis.iter().all(|s| s.hessian.is_zero()));
    let v = check_t1_8(&g, &b(1), 3, &axis, &prec()).unwrap();
    assert_eq!(v.observed, 0);
    assert_eq!(v.trace.len(), 1);
}

#[test]
fn equation_statement_cases() {
    // h = 1: ω = 0 and the bounds are 3r, 6, 3, 1
    let a = pow(10, 30);
    let f = DiagForm::binomial(&(&a + 1), &a, 5).unwrap();
    let recs = enumerate_box(&f, &b(1), 5, 5).unwrap();
    let v = check_t1_9(&f, &b(1), &recs, &prec()).unwrap();
    assert!(v.hypothesis_holds);
    assert_eq!(v.bound, Some(b(3)));
    assert_eq!(v.observed, 1);
    // 5 divides Δ, so h = 5 is excluded
    let v = check_t1_9(&f, &b(5), &[], &prec()).unwrap();
    assert!(!v.hypothesis_holds);
}

#[test]
fn trace_replays_identically() {
    let f = DiagForm::binomial(&pow(10, 20), &b(3), 5).unwrap();
    let recs = enumerate_box(&f, &b(2), 10, 10).unwrap();
    let run = || {
        [
            check_c1_5(&f, &b(2), &recs, &prec()).unwrap(),
            check_t1_8(&f, &b(2), 4, &recs, &prec()).unwrap(),
            check_c1_6(&f, &b(2), &rat(1, 20), None, &recs, &prec()).unwrap(),
        ]
    };
    assert_eq!(run(), run());
}

#[test]
fn theorem_ids_round_trip() {
    let t = TheoremId::from_parts("C1_6", None, None, Some("1/20")).unwrap();
    assert_eq!(t.to_string(), "C1_6(eps=1/20)");
    assert!(TheoremId::from_parts("T1_4", None, None, None).is_err());
    assert!(TheoremId::from_parts("T9", None, None, None).is_err());
    assert_eq!(TheoremId::from_parts("T2_1", None, Some(2), None).unwrap(), TheoremId::T2_1(2));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn hypotheses_shrink_as_h_grows(e in 10u32..40, bb in 1u64..50, h in 1i64..30, r in 5u32..8) {
        let f = DiagForm::binomial(&pow(10, e as usize), &b(bb as i64), r).unwrap();
        let hyp = |h: i64, t: &TheoremId| check_or_skip(t, &f, &b(h), &[], &prec()).unwrap().hypothesis_holds;
        for t in [TheoremId::T1_3, TheoremId::T1_4(3), TheoremId::T1_4(5)] {
            if hyp(h + 1, &t) {
                prop_assert!(hyp(h, &t));
            }
        }
    }

    #[test]
    fn binomial_hypothesis_shrinks_as_c_grows(e in 20u32..40, c in 1i64..40) {
        let a = pow(10, e as usize);
        let hyp = |c: i64| check_t1_1(&a, &b(1), &b(c), 5, &[], &prec()).unwrap().hypothesis_holds;
        if hyp(c + 1) {
            prop_assert!(hyp(c));
        }
    }

    #[test]
    fn c1_6_bound_nonincreasing_in_epsilon(n in 9i64..400, k in 1i64..50) {
        // ε ranges over (0, 1/8) for r = 5
        let e1 = rat(1, n);
        let e2 = rat(1, n + k);
        prop_assert!(c1_6_negative_bound(5, &e1).unwrap() <= c1_6_negative_bound(5, &e2).unwrap());
    }

    #[test]
    fn ceil_log_matches_floating_point(num in 1u64..1_000_000, den in 1u64..1000, base in 2u32..12) {
        let q = Rational::new(b(num as i64), b(den as i64));
        let x = ((num as f64) / (den as f64)).ln() / (base as f64).ln();
        let k = ceil_log(&q, base).unwrap();
        // skip values too close to an integer for f64 to decide
        if (x - x.round()).abs() > 1e-9 {
            prop_assert_eq!(k, x.ceil() as i64);
        }
    }

    #[test]
    fn omega_matches_trial_division(n in 1u64..200_000) {
        let mut m = n;
        let mut w = 0;
        let mut p = 2;
        while p * p <= m {
            if m % p == 0 {
                w += 1;
                while m % p == 0 {
                    m /= p;
                }
            }
            p += 1;
        }
        if m > 1 {
            w += 1;
        }
        prop_assert_eq!(omega_u64(n).unwrap(), w);
    }
}
