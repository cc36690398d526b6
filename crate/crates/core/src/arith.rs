//! Small exact integer helpers shared across modules.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return false;
    }
    let mut d = 5u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

/// Trial-division factorization, returning (prime, exponent) pairs in
/// ascending order.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Prime divisors of a positive big integer, by trial division.
pub fn prime_divisors(n: &BigInt) -> BTreeSet<u64> {
    let mut n = n.abs();
    let mut out = BTreeSet::new();
    let mut d = 2u64;
    loop {
        let dd = BigInt::from(d) * d;
        if dd > n {
            break;
        }
        let bd = BigInt::from(d);
        if (&n % &bd).is_zero() {
            out.insert(d);
            while (&n % &bd).is_zero() {
                n /= &bd;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > BigInt::one() {
        out.insert(n.to_u64().expect("prime factor exceeds u64"));
    }
    out
}

/// Exponent of the prime `ell` in `n` (`n` nonzero).
pub fn valuation(n: &BigInt, ell: u64) -> u32 {
    let l = BigInt::from(ell);
    let mut n = n.abs();
    let mut v = 0;
    while !n.is_zero() && (&n % &l).is_zero() {
        n /= &l;
        v += 1;
    }
    v
}

/// The `ell`-primary part of `n`.
pub fn ell_part(n: &BigInt, ell: u64) -> BigInt {
    num_traits::pow(BigInt::from(ell), valuation(n, ell) as usize)
}

/// Remove every prime in `primes` from `n`.
pub fn strip_primes(n: &BigInt, primes: &BTreeSet<u64>) -> BigInt {
    let mut n = n.abs();
    for &p in primes {
        let bp = BigInt::from(p);
        while !n.is_zero() && (&n % &bp).is_zero() {
            n /= &bp;
        }
    }
    n
}

pub fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

/// Legendre symbol (p/3) for p not divisible by 3.
pub fn legendre_mod3(p: u64) -> i8 {
    match p % 3 {
        1 => 1,
        2 => -1,
        _ => 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_small() {
        let ps: Vec<u64> = (0..30).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn factor_and_parts() {
        assert_eq!(factor_u64(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factor_u64(105), vec![(3, 1), (5, 1), (7, 1)]);
        let n = BigInt::from(120);
        assert_eq!(ell_part(&n, 2), BigInt::from(8));
        assert_eq!(ell_part(&n, 7), BigInt::from(1));
        let s: BTreeSet<u64> = [2, 3].into_iter().collect();
        assert_eq!(strip_primes(&n, &s), BigInt::from(5));
        assert_eq!(prime_divisors(&n).into_iter().collect::<Vec<_>>(), vec![2, 3, 5]);
    }

    #[test]
    fn legendre() {
        assert_eq!(legendre_mod3(11), -1);
        assert_eq!(legendre_mod3(7), 1);
        assert_eq!(legendre_mod3(2), -1);
    }
}
