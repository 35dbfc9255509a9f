//! Distinct prime divisors: trial division, Miller–Rabin and Pollard's rho.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::exactnum::exact_root;
use crate::{Error, Result};

const TRIAL_LIMIT: u32 = 1 << 16;
/// Deterministic for every n < 3.3 * 10^24.
const MR_BASES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
/// Extra bases used above 2^64, where the test is only probabilistic.
const MR_EXTRA: [u32; 8] = [41, 43, 47, 53, 59, 61, 67, 71];

/// Default number of rho iterations allowed across one factorization.
pub const DEFAULT_RHO_BUDGET: u64 = 2_000_000;

/// `ω(n)`: the number of distinct primes dividing `n`.
pub fn omega(n: &BigUint) -> Result<u32> {
    Ok(distinct_prime_factors(n, DEFAULT_RHO_BUDGET)?.len() as u32)
}

pub fn omega_u64(n: u64) -> Result<u32> {
    omega(&BigUint::from(n))
}

/// Sorted distinct prime factors of `n >= 1`.
///
/// Fails with [`Error::FactorizationBudget`] once `rho_budget` rho
/// iterations have been spent, reporting the primes found so far.
pub fn distinct_prime_factors(n: &BigUint, rho_budget: u64) -> Result<Vec<BigUint>> {
    if n.is_zero() {
        return Err(Error::Domain("ω(0) is undefined".into()));
    }
    let mut found = Vec::new();
    let mut m = n.clone();
    let mut p = 2u32;
    while p < TRIAL_LIMIT {
        let bp = BigUint::from(p);
        if &bp * &bp > m {
            break;
        }
        if (&m % &bp).is_zero() {
            found.push(bp.clone());
            while (&m % &bp).is_zero() {
                m /= &bp;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !m.is_one() {
        let mut budget = rho_budget;
        let mut stack = vec![m];
        while let Some(c) = stack.pop() {
            if c.is_one() {
                continue;
            }
            if is_prime(&c) {
                found.push(c);
                continue;
            }
            if let Some(root) = perfect_power_root(&c) {
                stack.push(root);
                continue;
            }
            match rho_split(&c, &mut budget) {
                Some(d) => {
                    let e = &c / &d;
                    stack.push(d);
                    stack.push(e);
                }
                None => {
                    found.sort();
                    found.dedup();
                    return Err(Error::FactorizationBudget { found, cofactor: c });
                }
            }
        }
    }
    found.sort();
    found.dedup();
    Ok(found)
}

/// Called after trial division, so every prime factor exceeds `2^16` and
/// exponents above `bits / 16` are impossible.
fn perfect_power_root(n: &BigUint) -> Option<BigUint> {
    let nn = n.clone().into();
    let top = (n.bits() / 16).max(2) as u32;
    (2..=top).find_map(|k| exact_root(&nn, k).and_then(|r| r.to_biguint()))
}

/// Strong probable-prime test; deterministic below `3.3 * 10^24`.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(v) = n.to_u64() {
        if v < 2 {
            return false;
        }
        for p in MR_BASES {
            if v == p as u64 {
                return true;
            }
            if v % p as u64 == 0 {
                return false;
            }
        }
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    let bases = MR_BASES.iter().chain(if n.bits() > 64 { &MR_EXTRA[..] } else { &[] });
    'base: for &a in bases {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x.is_one() || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == nm1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

/// Brent's variant of Pollard's rho. Returns a nontrivial divisor.
fn rho_split(n: &BigUint, budget: &mut u64) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    let one = BigUint::one();
    for c in 1u32.. {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r = 1u64;
        let mut q = one.clone();
        let m = 128u64;
        let mut g = one.clone();
        let mut x = y.clone();
        let mut ys = y.clone();
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                let steps = m.min(r - k);
                for _ in 0..steps {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = q * diff % n;
                }
                if *budget < steps {
                    return None;
                }
                *budget -= steps;
                g = q.gcd(n);
                k += steps;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return Some(g);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(omega_u64(1).unwrap(), 0);
        assert_eq!(omega_u64(12).unwrap(), 2);
        assert_eq!(omega_u64(30).unwrap(), 3);
        assert_eq!(omega_u64(2u64.pow(40)).unwrap(), 1);
        assert!(omega(&BigUint::zero()).is_err());
    }

    #[test]
    fn large_semiprimes_and_powers() {
        // 1000003 * 1000033 survives trial division and needs rho
        let n = BigUint::from(1_000_003u64) * BigUint::from(1_000_033u64);
        assert_eq!(omega(&n).unwrap(), 2);
        let p = BigUint::from(4_294_967_311u64);
        assert!(is_prime(&p));
        assert_eq!(omega(&(&p * &p * &p)).unwrap(), 1);
        let big = BigUint::from(2u32).pow(89) - 1u32;
        assert!(is_prime(&big));
        assert_eq!(omega(&(big * 3u32)).unwrap(), 2);
    }

    #[test]
    fn budget_exhaustion_reports_partial_factorization() {
        let p = BigUint::from(1_000_000_007u64);
        let q = BigUint::from(998_244_353u64);
        let n = BigUint::from(6u32) * &p * &q;
        match distinct_prime_factors(&n, 1) {
            Err(Error::FactorizationBudget { found, cofactor }) => {
                assert_eq!(found, vec![BigUint::from(2u32), BigUint::from(3u32)]);
                assert_eq!(cofactor, p * q);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn carmichael_numbers_are_composite() {
        for n in [561u64, 1105, 1729, 3_215_031_751] {
            assert!(!is_prime(&BigUint::from(n)));
        }
    }
}
