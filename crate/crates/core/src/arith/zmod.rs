//! Integer helpers for Z/m with m < 2^63.

/// Largest modulus accepted anywhere in the crate.
pub const MAX_MODULUS: u64 = 1 << 62;

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let s = a + b;
    if s >= m {
        s - m
    } else {
        s
    }
}

#[inline]
pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + m - b
    }
}

pub fn pow_mod(mut a: u64, mut k: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while k > 0 {
        if k & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        k >>= 1;
    }
    r
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(m as i128) as u64)
}

/// Reduce a signed integer into [0, m).
pub fn from_i64(x: i64, m: u64) -> u64 {
    (x as i128).rem_euclid(m as i128) as u64
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `p^k` if it stays below [`MAX_MODULUS`].
pub fn checked_pow(p: u64, k: u32) -> Option<u64> {
    let mut r: u64 = 1;
    for _ in 0..k {
        r = r.checked_mul(p)?;
        if r >= MAX_MODULUS {
            return None;
        }
    }
    Some(r)
}

/// p-adic valuation of a nonzero integer.
pub fn vp(mut x: u64, p: u64) -> u32 {
    debug_assert!(x != 0);
    let mut v = 0;
    while x.is_multiple_of(p) {
        x /= p;
        v += 1;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverses() {
        assert_eq!(inv_mod(2, 9), Some(5));
        assert_eq!(inv_mod(3, 9), None);
        assert_eq!(mul_mod(inv_mod(7, 625).unwrap(), 7, 625), 1);
    }

    #[test]
    fn primes_and_powers() {
        assert!(is_prime(3) && is_prime(5) && is_prime(7919));
        assert!(!is_prime(1) && !is_prime(9) && !is_prime(0));
        assert_eq!(checked_pow(3, 2), Some(9));
        assert_eq!(checked_pow(2, 62), None);
        assert_eq!(vp(18, 3), 2);
        assert_eq!(from_i64(-1, 9), 8);
    }
}
