//! Small integer helpers shared by every module: base-p digits, digit sums,
//! p-adic valuations and exact integer logarithms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Base-`p` digits of `n`, least significant first. Zero has no digits.
pub fn digits(mut n: u64, p: u64) -> Vec<u64> {
    let mut out = Vec::new();
    while n > 0 {
        out.push(n % p);
        n /= p;
    }
    out
}

/// `s_p(n)`, the sum of the base-`p` digits of `n`.
pub fn digit_sum(mut n: u64, p: u64) -> u64 {
    let mut s = 0;
    while n > 0 {
        s += n % p;
        n /= p;
    }
    s
}

/// Digit sum extended with the convention `s_p(-1) = -1`.
pub fn digit_sum_signed(n: i64, p: u64) -> i64 {
    if n == -1 {
        -1
    } else {
        assert!(n >= 0, "digit sum of {n}");
        digit_sum(n as u64, p) as i64
    }
}

/// `ord_p(n)` for a machine integer; `None` stands for the valuation of zero.
pub fn ord_p_u64(mut n: u64, p: u64) -> Option<u32> {
    if n == 0 {
        return None;
    }
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    Some(v)
}

/// `ord_p(n)` for an arbitrary-precision integer; `None` for zero.
pub fn ord_p(n: &BigInt, p: u64) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut m = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        m = q;
        v += 1;
    }
}

/// Whether `p^e` divides `n` (zero is divisible by everything).
pub fn divisible_by_power(n: &BigInt, p: u64, e: u32) -> bool {
    match ord_p(n, p) {
        None => true,
        Some(v) => v >= e,
    }
}

/// `⌈a / b⌉` for nonnegative `a` and positive `b`.
pub fn ceil_div(a: u64, b: u64) -> u64 {
    a.div_ceil(b)
}

/// `⌈log_p d⌉` for `d ≥ 1`, by comparison against powers of `p`.
pub fn ceil_log(d: u64, p: u64) -> u32 {
    assert!(d >= 1 && p >= 2);
    let mut k = 0;
    let mut pk: u128 = 1;
    while pk < d as u128 {
        pk *= p as u128;
        k += 1;
    }
    k
}

/// Smallest prime divisor of `n ≥ 2`, by trial division.
pub fn smallest_divisor(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut i = 3;
    while i * i <= n {
        if n.is_multiple_of(i) {
            return i;
        }
        i += 2;
    }
    n
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && smallest_divisor(n) == n
}

/// Checks that `p` is prime, reporting the smallest divisor otherwise.
pub fn require_prime(p: u64) -> Result<()> {
    if p < 2 {
        return Err(Error::NotPrime { p, divisor: p });
    }
    let d = smallest_divisor(p);
    if d != p {
        return Err(Error::NotPrime { p, divisor: d });
    }
    Ok(())
}

/// Splits a prime power `n = p^k` into `(p, k)`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let p = smallest_divisor(n);
    let mut m = n;
    let mut k = 0;
    while m.is_multiple_of(p) {
        m /= p;
        k += 1;
    }
    (m == 1).then_some((p, k))
}

pub fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digit_sums() {
        assert_eq!(digit_sum(5, 2), 2);
        assert_eq!(digit_sum(104, 3), 6);
        assert_eq!(digits(104, 3), vec![2, 1, 2, 0, 1]);
        assert_eq!(digit_sum(0, 7), 0);
        assert_eq!(digit_sum_signed(-1, 3), -1);
    }

    #[test]
    fn valuations() {
        assert_eq!(ord_p(&BigInt::from(0), 2), None);
        assert_eq!(ord_p(&BigInt::from(-12), 2), Some(2));
        assert_eq!(ord_p(&BigInt::from(81), 3), Some(4));
        assert!(divisible_by_power(&BigInt::from(0), 5, 100));
        assert_eq!(ord_p_u64(48, 2), Some(4));
    }

    #[test]
    fn integer_logs() {
        assert_eq!(ceil_log(15, 2), 4);
        assert_eq!(ceil_log(16, 2), 4);
        assert_eq!(ceil_log(17, 2), 5);
        assert_eq!(ceil_log(83, 2), 7);
        assert_eq!(ceil_log(104, 3), 5);
        assert_eq!(ceil_log(1, 5), 0);
    }

    #[test]
    fn primes() {
        assert!(require_prime(2).is_ok());
        assert_eq!(require_prime(4), Err(Error::NotPrime { p: 4, divisor: 2 }));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(7), Some((7, 1)));
    }
}
