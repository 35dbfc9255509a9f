use diagthue::exactnum::rint;
use diagthue::solver::enumerate_binomial_convergents;
use diagthue::sweep::random_trace_form;
use diagthue::DiagForm;
use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

fn random_forms(seed: u64, count: usize) -> Vec<DiagForm> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ds = [-3, -7, -15, 2, 5, 13].map(big);
    (0..count)
        .map(|_| random_trace_form(&mut rng, &ds, 3, &[3, 4, 5, 6, 7]).unwrap())
        .collect()
}

#[test]
fn resultant_discriminant_matches_j_identity_on_random_forms() {
    for f in random_forms(1, 40) {
        let d = f.discriminant().unwrap();
        assert_eq!(rint(d.resultant.clone()).abs(), d.via_identity.abs(), "{}", f.provenance());
    }
}

#[test]
fn binomial_discriminant_is_r_to_r_times_ab_power() {
    for (a, b, r) in [(2, 3, 5), (7, 1, 6), (5, 11, 7), (1, -4, 8)] {
        let f = DiagForm::binomial_signed(&big(a), &big(b), r).unwrap();
        let expect = num_traits::pow(big(r as i64), r as usize) * num_traits::pow(big((a * b).abs()), r as usize - 1);
        assert_eq!(f.abs_discriminant(), expect);
    }
}

#[test]
fn hessian_and_jacobian_agree_with_diagonal_data() {
    for f in random_forms(2, 10) {
        for (x, y) in [(1, 0), (0, 1), (3, -2), (-5, 7), (11, 4)] {
            let (x, y) = (big(x), big(y));
            assert!(f.hessian_check(&x, &y).agrees());
            assert!(f.jacobian_check(&x, &y).unwrap().agrees());
        }
    }
}

#[test]
fn bennett_family_has_only_the_trivial_solution() {
    for a in 1..=6u32 {
        for r in [5, 7] {
            let (sols, _) =
                enumerate_binomial_convergents(&big(a as i64 + 1), &big(a as i64), r, &big(1), &big(2000), 4096).unwrap();
            let pts: Vec<_> = sols.iter().map(|s| (s.x.clone(), s.y.clone())).collect();
            assert_eq!(pts, vec![(big(1), big(1))], "a={a} r={r}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_forms_have_integral_coefficients_and_consistent_values(seed in 0u64..10_000, x in -20i64..20, y in -20i64..20) {
        let f = &random_forms(seed, 1)[0];
        let (xb, yb) = (big(x), big(y));
        let (xi, eta) = f.xi_eta(&xb, &yb);
        let diff = xi.checked_sub(&eta).unwrap();
        prop_assert_eq!(diff.as_rational().cloned(), Some(rint(f.eval(&xb, &yb))));
        prop_assert!(f.xi_eta_product_holds(&xb, &yb));
    }
}
