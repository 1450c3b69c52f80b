//! Dense polynomials over F_p, little-endian coefficients, used to pick moduli.

use super::zmod::{add_mod, inv_mod, mul_mod, sub_mod};

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p).expect("nonzero leading coefficient");
    while r.len() > dm {
        let k = r.len() - 1;
        let c = mul_mod(r[k], lead_inv, p);
        for j in 0..=dm {
            let t = mul_mod(c, m[j], p);
            r[k - dm + j] = sub_mod(r[k - dm + j], t, p);
        }
        r = trim(r);
    }
    r
}

fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = add_mod(out[i + j], mul_mod(x, y, p), p);
        }
    }
    trim(out)
}

fn pow_mod_poly(base: &[u64], mut k: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut r = vec![1];
    let mut b = rem(base, m, p);
    while k > 0 {
        if k & 1 == 1 {
            r = rem(&mul(&r, &b, p), m, p);
        }
        b = rem(&mul(&b, &b, p), m, p);
        k >>= 1;
    }
    r
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Ben-Or irreducibility test for a monic polynomial of degree >= 1.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let d = f.len() - 1;
    let x = vec![0, 1];
    let mut xp = x.clone();
    for _ in 0..d / 2 {
        xp = pow_mod_poly(&xp, p, f, p);
        let mut h = xp.clone();
        h.resize(h.len().max(2), 0);
        h[1] = sub_mod(h[1], 1, p);
        if gcd(f, &h, p).len() > 1 {
            return false;
        }
    }
    true
}

/// Smallest monic irreducible polynomial of degree `d` with nonzero constant term.
///
/// Candidates are ordered by the integer whose base-p digits are the lower
/// coefficients, the coefficient of `T^(d-1)` being most significant.
pub fn smallest_irreducible(p: u64, d: usize) -> Option<Vec<u64>> {
    let total = p.checked_pow(d as u32)?;
    for n in 0..total {
        let mut f = Vec::with_capacity(d + 1);
        let mut k = n;
        for _ in 0..d {
            f.push(k % p);
            k /= p;
        }
        f.push(1);
        if f[0] != 0 && is_irreducible(&f, p) {
            return Some(f);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_moduli() {
        assert_eq!(smallest_irreducible(3, 2), Some(vec![1, 0, 1]));
        assert_eq!(smallest_irreducible(5, 1), Some(vec![1, 1]));
        assert_eq!(smallest_irreducible(2, 3), Some(vec![1, 1, 0, 1]));
        assert!(!is_irreducible(&[2, 0, 1], 3));
        assert!(is_irreducible(&[2, 2, 1], 3));
    }

    #[test]
    fn count_irreducible_quadratics() {
        // (p^2 - p) / 2 monic irreducible quadratics over F_p
        for p in [3u64, 5, 7] {
            let mut n = 0;
            for a in 0..p {
                for b in 0..p {
                    if is_irreducible(&[a, b, 1], p) {
                        n += 1;
                    }
                }
            }
            assert_eq!(n, (p * p - p) / 2);
        }
    }
}
