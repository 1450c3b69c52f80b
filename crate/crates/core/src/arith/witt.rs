//! W_N(F_q) presented as (Z/p^N)[T]/(m(T)) with T a Teichmuller element.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::fp_poly;
use super::zmod::{self, add_mod, checked_pow, mul_mod, sub_mod};
use crate::error::{Error, Result};

/// Element of a [`WittRing`]: little-endian coefficients in [0, p^N), length d.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WittElem {
    coeffs: Vec<u64>,
}

impl WittElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }
}

/// Truncated Witt vectors of F_{p^d}. With `n = 1` this is the field F_{p^d} itself.
#[derive(Clone, Debug)]
pub struct WittRing {
    p: u64,
    d: usize,
    n: u32,
    pn: u64,
    q: u64,
    /// monic, length d + 1
    modulus: Vec<u64>,
    /// frob[k][j] = sigma^k(T^j)
    frob: Vec<Vec<WittElem>>,
}

impl WittRing {
    /// Ring with the canonical modulus: the Teichmuller lift of the smallest
    /// irreducible polynomial of degree `d` over F_p.
    pub fn new(p: u64, d: usize, n: u32) -> Result<Self> {
        if !zmod::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if d == 0 || n == 0 {
            return Err(Error::InvalidParameter("degree and precision must be positive".into()));
        }
        checked_pow(p, d as u32)
            .ok_or_else(|| Error::Unsupported(format!("{p}^{d} exceeds the 62-bit field size limit")))?;
        let mu = fp_poly::smallest_irreducible(p, d)
            .ok_or_else(|| Error::Internal("no irreducible polynomial found".into()))?;
        let modulus = lift_modulus(p, n, &mu)?;
        Self::with_modulus(p, n, modulus)
    }

    /// Ring with a caller-supplied monic modulus, validated.
    pub fn with_modulus(p: u64, n: u32, modulus: Vec<u64>) -> Result<Self> {
        let mut r = Self::raw(p, n, modulus)?;
        let mu: Vec<u64> = r.modulus.iter().map(|&c| c % p).collect();
        if !fp_poly::is_irreducible(&mu, p) {
            return Err(Error::InvalidParameter("modulus is not irreducible mod p".into()));
        }
        let t = r.gen();
        if r.pow(&t, r.q - 1) != r.one() {
            return Err(Error::InvalidParameter("modulus does not divide T^(q-1) - 1".into()));
        }
        r.build_frobenius();
        Ok(r)
    }

    /// Arithmetic only; no Frobenius tables and no validation of the modulus.
    fn raw(p: u64, n: u32, modulus: Vec<u64>) -> Result<Self> {
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidParameter("modulus must be monic of positive degree".into()));
        }
        let d = modulus.len() - 1;
        let pn = checked_pow(p, n)
            .ok_or_else(|| Error::Unsupported(format!("{p}^{n} exceeds the 62-bit precision limit")))?;
        let q = checked_pow(p, d as u32)
            .ok_or_else(|| Error::Unsupported(format!("{p}^{d} exceeds the 62-bit field size limit")))?;
        let modulus = modulus.iter().map(|&c| c % pn).collect();
        Ok(WittRing { p, d, n, pn, q, modulus, frob: Vec::new() })
    }

    fn build_frobenius(&mut self) {
        let t = self.gen();
        let mut sigma_t = t.clone();
        let mut frob = Vec::with_capacity(self.d);
        for _ in 0..self.d {
            let mut row = Vec::with_capacity(self.d);
            let mut acc = self.one();
            for _ in 0..self.d {
                row.push(acc.clone());
                acc = self.mul(&acc, &sigma_t);
            }
            frob.push(row);
            sigma_t = self.pow(&sigma_t, self.p);
        }
        self.frob = frob;
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn degree(&self) -> usize {
        self.d
    }
    pub fn precision(&self) -> u32 {
        self.n
    }
    /// p^N
    pub fn modulus_int(&self) -> u64 {
        self.pn
    }
    /// Size of the residue field.
    pub fn residue_size(&self) -> u64 {
        self.q
    }
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> WittElem {
        WittElem { coeffs: vec![0; self.d] }
    }

    pub fn one(&self) -> WittElem {
        self.from_int(1)
    }

    pub fn from_int(&self, x: i64) -> WittElem {
        let mut c = vec![0; self.d];
        c[0] = zmod::from_i64(x, self.pn);
        WittElem { coeffs: c }
    }

    /// The class of T.
    pub fn gen(&self) -> WittElem {
        if self.d == 1 {
            return WittElem { coeffs: vec![sub_mod(0, self.modulus[0], self.pn)] };
        }
        let mut c = vec![0; self.d];
        c[1] = 1;
        WittElem { coeffs: c }
    }

    /// Element from arbitrary signed coefficients (reduced mod p^N and mod m(T)).
    pub fn from_coeffs(&self, coeffs: &[i64]) -> WittElem {
        let mut acc: Vec<u64> = coeffs.iter().map(|&c| zmod::from_i64(c, self.pn)).collect();
        acc.resize(acc.len().max(self.d), 0);
        self.reduce(acc)
    }

    /// Element from unsigned coefficients, validated to lie in [0, p^N) with length d.
    pub fn try_from_u64s(&self, coeffs: &[u64]) -> Result<WittElem> {
        if coeffs.len() != self.d || coeffs.iter().any(|&c| c >= self.pn) {
            return Err(Error::Parse(format!(
                "expected {} coefficients in [0, {})",
                self.d, self.pn
            )));
        }
        Ok(WittElem { coeffs: coeffs.to_vec() })
    }

    fn reduce(&self, mut acc: Vec<u64>) -> WittElem {
        let d = self.d;
        let pn = self.pn;
        for k in (d..acc.len()).rev() {
            let c = acc[k];
            if c == 0 {
                continue;
            }
            for j in 0..d {
                let t = mul_mod(c, self.modulus[j], pn);
                acc[k - d + j] = sub_mod(acc[k - d + j], t, pn);
            }
        }
        acc.truncate(d);
        WittElem { coeffs: acc }
    }

    pub fn is_zero(&self, x: &WittElem) -> bool {
        x.coeffs.iter().all(|&c| c == 0)
    }

    pub fn add(&self, x: &WittElem, y: &WittElem) -> WittElem {
        let coeffs = x.coeffs.iter().zip(&y.coeffs).map(|(&a, &b)| add_mod(a, b, self.pn)).collect();
        WittElem { coeffs }
    }

    pub fn sub(&self, x: &WittElem, y: &WittElem) -> WittElem {
        let coeffs = x.coeffs.iter().zip(&y.coeffs).map(|(&a, &b)| sub_mod(a, b, self.pn)).collect();
        WittElem { coeffs }
    }

    pub fn neg(&self, x: &WittElem) -> WittElem {
        let coeffs = x.coeffs.iter().map(|&a| sub_mod(0, a, self.pn)).collect();
        WittElem { coeffs }
    }

    pub fn scale(&self, x: &WittElem, k: u64) -> WittElem {
        let k = k % self.pn;
        let coeffs = x.coeffs.iter().map(|&a| mul_mod(a, k, self.pn)).collect();
        WittElem { coeffs }
    }

    pub fn mul(&self, x: &WittElem, y: &WittElem) -> WittElem {
        let d = self.d;
        let pn = self.pn;
        if d == 1 {
            return WittElem { coeffs: vec![mul_mod(x.coeffs[0], y.coeffs[0], pn)] };
        }
        let mut acc = vec![0u64; 2 * d - 1];
        for (i, &a) in x.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.coeffs.iter().enumerate() {
                acc[i + j] = add_mod(acc[i + j], mul_mod(a, b, pn), pn);
            }
        }
        self.reduce(acc)
    }

    pub fn pow(&self, x: &WittElem, mut k: u64) -> WittElem {
        let mut r = self.one();
        let mut b = x.clone();
        while k > 0 {
            if k & 1 == 1 {
                r = self.mul(&r, &b);
            }
            k >>= 1;
            if k > 0 {
                b = self.mul(&b, &b);
            }
        }
        r
    }

    /// sigma^n, where sigma(T) = T^p; any integer n.
    pub fn frobenius(&self, x: &WittElem, n: i64) -> WittElem {
        let k = n.rem_euclid(self.d as i64) as usize;
        if k == 0 {
            return x.clone();
        }
        let table = &self.frob[k];
        let mut out = vec![0u64; self.d];
        for (j, &c) in x.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (o, &t) in out.iter_mut().zip(&table[j].coeffs) {
                *o = add_mod(*o, mul_mod(c, t, self.pn), self.pn);
            }
        }
        WittElem { coeffs: out }
    }

    /// p-adic valuation, `None` for zero.
    pub fn ord_p(&self, x: &WittElem) -> Option<u32> {
        x.coeffs.iter().filter(|&&c| c != 0).map(|&c| zmod::vp(c, self.p)).min()
    }

    pub fn is_unit(&self, x: &WittElem) -> bool {
        self.ord_p(x) == Some(0)
    }

    /// Divide every coefficient by p; the top p-adic digit becomes 0.
    /// Caller guarantees divisibility.
    pub(crate) fn div_p(&self, x: &WittElem) -> WittElem {
        debug_assert!(x.coeffs.iter().all(|&c| c % self.p == 0));
        WittElem { coeffs: x.coeffs.iter().map(|&c| c / self.p).collect() }
    }

    /// Inverse of a unit.
    pub fn inv(&self, x: &WittElem) -> Option<WittElem> {
        if !self.is_unit(x) {
            return None;
        }
        // residue inverse via x^(q-2) in F_q, then Newton y <- y(2 - xy)
        let xbar = self.reduce_coeffs_mod_p(x);
        let res = WittRing { pn: self.p, n: 1, ..self.clone_arith() };
        let ybar = res.pow(&xbar, self.q - 2);
        let mut y = WittElem { coeffs: ybar.coeffs };
        let two = self.from_int(2);
        let mut prec = 1;
        while prec < self.n {
            let xy = self.mul(x, &y);
            y = self.mul(&y, &self.sub(&two, &xy));
            prec *= 2;
        }
        Some(y)
    }

    fn clone_arith(&self) -> WittRing {
        WittRing {
            p: self.p,
            d: self.d,
            n: self.n,
            pn: self.pn,
            q: self.q,
            modulus: self.modulus.iter().map(|&c| c % self.p).collect(),
            frob: Vec::new(),
        }
    }

    fn reduce_coeffs_mod_p(&self, x: &WittElem) -> WittElem {
        WittElem { coeffs: x.coeffs.iter().map(|&c| c % self.p).collect() }
    }

    /// Image in the residue field `res` (which must have the same p, d and modulus mod p).
    pub fn to_residue(&self, x: &WittElem) -> WittElem {
        self.reduce_coeffs_mod_p(x)
    }

    /// Naive lift of a residue-field element (coefficients read as integers).
    pub fn lift(&self, a: &WittElem) -> WittElem {
        WittElem { coeffs: a.coeffs.clone() }
    }

    /// Teichmuller lift of a residue-field element.
    pub fn teichmuller(&self, a: &WittElem) -> WittElem {
        let mut x = self.lift(a);
        for _ in 0..(self.d as u64) * (self.n as u64 - 1) {
            x = self.pow(&x, self.p);
        }
        x
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> WittElem {
        WittElem { coeffs: (0..self.d).map(|_| rng.gen_range(0..self.pn)).collect() }
    }

    /// Residue class encoded as an integer in [0, q): base-p digits are the coefficients.
    pub fn from_index(&self, mut k: u64) -> WittElem {
        let mut coeffs = Vec::with_capacity(self.d);
        for _ in 0..self.d {
            coeffs.push(k % self.p);
            k /= self.p;
        }
        WittElem { coeffs }
    }
}

/// Monic factor of T^(q-1) - 1 over Z/p^N lifting the irreducible `mu`.
fn lift_modulus(p: u64, n: u32, mu: &[u64]) -> Result<Vec<u64>> {
    let d = mu.len() - 1;
    let r = WittRing::raw(p, n, mu.to_vec())?;
    // omega = T^(q^(N-1)) is the Teichmuller representative of the root T mod p
    let mut omega = r.gen();
    for _ in 0..(d as u64) * (n as u64 - 1) {
        omega = r.pow(&omega, p);
    }
    // prod_j (X - omega^(p^j)), coefficients in R
    let mut poly = vec![r.one()];
    let mut conj = omega;
    for _ in 0..d {
        let mut next = vec![r.zero(); poly.len() + 1];
        for (k, c) in poly.iter().enumerate() {
            next[k + 1] = r.add(&next[k + 1], c);
            next[k] = r.sub(&next[k], &r.mul(&conj, c));
        }
        poly = next;
        conj = r.pow(&conj, p);
    }
    let mut out = Vec::with_capacity(d + 1);
    for c in &poly {
        if c.coeffs[1..].iter().any(|&x| x != 0) {
            return Err(Error::Internal("lifted modulus has non-constant coefficients".into()));
        }
        out.push(c.coeffs[0]);
    }
    if out.iter().zip(mu).any(|(&a, &b)| a % p != b) {
        return Err(Error::Internal("lifted modulus does not reduce to mu".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modulus_t2_plus_1_over_z9() {
        let w = WittRing::new(3, 2, 2).unwrap();
        assert_eq!(w.modulus(), &[1, 0, 1]);
        let t = w.gen();
        // sigma(T) = T^3 = -T
        assert_eq!(w.frobenius(&t, 1), w.neg(&t));
        assert_eq!(w.frobenius(&t, 2), t);
        assert_eq!(w.frobenius(&t, -1), w.neg(&t));
    }

    #[test]
    fn degree_one_is_integers() {
        let w = WittRing::new(5, 1, 4).unwrap();
        assert_eq!(w.modulus_int(), 625);
        let x = w.from_int(7);
        assert_eq!(w.frobenius(&x, 3), x);
        // root of the modulus is a (p-1)-th root of unity
        assert_eq!(w.pow(&w.gen(), 4), w.one());
    }

    #[test]
    fn teichmuller_small() {
        let w = WittRing::new(3, 1, 2).unwrap();
        let res = WittRing::new(3, 1, 1).unwrap();
        assert_eq!(w.teichmuller(&res.from_int(2)).coeffs(), &[8]);
        assert_eq!(w.teichmuller(&res.from_int(1)), w.one());
        assert_eq!(w.teichmuller(&res.zero()), w.zero());
        let w9 = WittRing::new(3, 2, 2).unwrap();
        let r9 = WittRing::new(3, 2, 1).unwrap();
        assert_eq!(w9.teichmuller(&r9.gen()), w9.gen());
    }

    #[test]
    fn inverse_and_bigger_field() {
        let w = WittRing::new(5, 4, 6).unwrap();
        let x = w.from_coeffs(&[3, 1, 4, 1]);
        let y = w.inv(&x).unwrap();
        assert_eq!(w.mul(&x, &y), w.one());
        assert!(w.inv(&w.from_int(5)).is_none());
        assert_eq!(w.frobenius(&x, 4), x);
    }

    #[test]
    fn size_limits() {
        assert!(matches!(WittRing::new(3, 1, 40), Err(Error::Unsupported(_))));
        assert!(matches!(WittRing::new(4, 1, 2), Err(Error::NotPrime(4))));
        assert!(WittRing::with_modulus(3, 2, vec![2, 0, 1]).is_err());
    }
}
