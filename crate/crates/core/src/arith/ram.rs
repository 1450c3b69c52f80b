//! Totally ramified extension W_N[pi]/(P(pi)) of a truncated Witt ring.

use std::cmp::Ordering;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::witt::{WittElem, WittRing};
use super::zmod;
use crate::error::{Error, Result};

/// A pi-adic valuation; `Inf` means "at least the working precision".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Val {
    Fin(u32),
    Inf,
}

impl Val {
    pub fn finite(self) -> Option<u32> {
        match self {
            Val::Fin(v) => Some(v),
            Val::Inf => None,
        }
    }

    pub fn is_inf(self) -> bool {
        self == Val::Inf
    }

    /// min(self, cap) as an integer.
    pub fn cap(self, cap: u32) -> u32 {
        match self {
            Val::Fin(v) => v.min(cap),
            Val::Inf => cap,
        }
    }
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Fin(v) => write!(f, "{v}"),
            Val::Inf => write!(f, "inf"),
        }
    }
}

impl Serialize for Val {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Val::Fin(v) => s.serialize_u32(*v),
            Val::Inf => s.serialize_str("inf"),
        }
    }
}

/// sum_j c_j pi^j with j < e.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RamElem {
    c: Vec<WittElem>,
}

impl RamElem {
    pub fn coeffs(&self) -> &[WittElem] {
        &self.c
    }
}

/// W[pi]/(P) for an Eisenstein polynomial P with coefficients in Z/p^N.
#[derive(Clone, Debug)]
pub struct RamRing {
    w: WittRing,
    e: usize,
    /// lower coefficients a_0..a_{e-1} of P, reduced mod p^N
    eis: Vec<u64>,
    /// inverse of a_0 / p mod p^N
    u0_inv: u64,
}

impl RamRing {
    /// `eisenstein` holds the exact integer coefficients a_0..a_{e-1} of
    /// P(pi) = pi^e + sum a_j pi^j.
    pub fn new(w: WittRing, eisenstein: &[i64]) -> Result<Self> {
        let e = eisenstein.len();
        if e == 0 {
            return Err(Error::InvalidParameter("ramification index must be positive".into()));
        }
        let p = w.p() as i64;
        let a0 = eisenstein[0];
        if a0 % p != 0 || (a0 / p) % p == 0 || eisenstein[1..].iter().any(|a| a % p != 0) {
            return Err(Error::InvalidParameter("polynomial is not Eisenstein".into()));
        }
        let pn = w.modulus_int();
        let u0 = zmod::from_i64(a0 / p, pn);
        let u0_inv = zmod::inv_mod(u0, pn).ok_or_else(|| Error::Internal("a_0/p not a unit".into()))?;
        let eis = eisenstein.iter().map(|&a| zmod::from_i64(a, pn)).collect();
        Ok(RamRing { w, e, eis, u0_inv })
    }

    pub fn witt(&self) -> &WittRing {
        &self.w
    }
    pub fn e(&self) -> usize {
        self.e
    }
    /// pi-adic working precision e*N.
    pub fn pi_precision(&self) -> u32 {
        self.e as u32 * self.w.precision()
    }

    pub fn zero(&self) -> RamElem {
        RamElem { c: vec![self.w.zero(); self.e] }
    }

    pub fn one(&self) -> RamElem {
        self.from_witt(&self.w.one())
    }

    pub fn from_int(&self, x: i64) -> RamElem {
        self.from_witt(&self.w.from_int(x))
    }

    pub fn from_witt(&self, x: &WittElem) -> RamElem {
        let mut c = vec![self.w.zero(); self.e];
        c[0] = x.clone();
        RamElem { c }
    }

    pub fn from_coeffs(&self, c: Vec<WittElem>) -> Result<RamElem> {
        if c.len() != self.e {
            return Err(Error::Parse(format!("expected {} pi-coefficients, got {}", self.e, c.len())));
        }
        Ok(RamElem { c })
    }

    /// pi^k
    pub fn pi_pow(&self, k: u32) -> RamElem {
        let mut x = self.one();
        for _ in 0..k {
            x = self.mul_pi(&x);
        }
        x
    }

    pub fn mul_pi(&self, x: &RamElem) -> RamElem {
        let e = self.e;
        let top = &x.c[e - 1];
        let mut c = Vec::with_capacity(e);
        c.push(self.w.zero());
        c.extend_from_slice(&x.c[..e - 1]);
        if !self.w.is_zero(top) {
            for (j, &a) in self.eis.iter().enumerate() {
                if a != 0 {
                    c[j] = self.w.sub(&c[j], &self.w.scale(top, a));
                }
            }
        }
        RamElem { c }
    }

    pub fn is_zero(&self, x: &RamElem) -> bool {
        x.c.iter().all(|c| self.w.is_zero(c))
    }

    pub fn add(&self, x: &RamElem, y: &RamElem) -> RamElem {
        RamElem { c: x.c.iter().zip(&y.c).map(|(a, b)| self.w.add(a, b)).collect() }
    }

    pub fn sub(&self, x: &RamElem, y: &RamElem) -> RamElem {
        RamElem { c: x.c.iter().zip(&y.c).map(|(a, b)| self.w.sub(a, b)).collect() }
    }

    pub fn neg(&self, x: &RamElem) -> RamElem {
        RamElem { c: x.c.iter().map(|a| self.w.neg(a)).collect() }
    }

    pub fn scale(&self, x: &RamElem, k: &WittElem) -> RamElem {
        RamElem { c: x.c.iter().map(|a| self.w.mul(a, k)).collect() }
    }

    pub fn mul(&self, x: &RamElem, y: &RamElem) -> RamElem {
        let e = self.e;
        if e == 1 {
            return RamElem { c: vec![self.w.mul(&x.c[0], &y.c[0])] };
        }
        let mut acc = vec![self.w.zero(); 2 * e - 1];
        for (i, a) in x.c.iter().enumerate() {
            if self.w.is_zero(a) {
                continue;
            }
            for (j, b) in y.c.iter().enumerate() {
                if self.w.is_zero(b) {
                    continue;
                }
                acc[i + j] = self.w.add(&acc[i + j], &self.w.mul(a, b));
            }
        }
        // pi^k = -pi^(k-e) * sum a_j pi^j
        for k in (e..2 * e - 1).rev() {
            let h = std::mem::replace(&mut acc[k], self.w.zero());
            if self.w.is_zero(&h) {
                continue;
            }
            for (j, &a) in self.eis.iter().enumerate() {
                if a != 0 {
                    acc[k - e + j] = self.w.sub(&acc[k - e + j], &self.w.scale(&h, a));
                }
            }
        }
        acc.truncate(e);
        RamElem { c: acc }
    }

    pub fn pow(&self, x: &RamElem, mut k: u64) -> RamElem {
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

    /// sigma^n on coefficients; sigma(pi) = pi.
    pub fn frobenius(&self, x: &RamElem, n: i64) -> RamElem {
        RamElem { c: x.c.iter().map(|a| self.w.frobenius(a, n)).collect() }
    }

    pub fn ord_pi(&self, x: &RamElem) -> Val {
        let e = self.e as u32;
        x.c.iter()
            .enumerate()
            .filter_map(|(j, c)| self.w.ord_p(c).map(|v| e * v + j as u32))
            .min()
            .map_or(Val::Inf, Val::Fin)
    }

    pub fn is_unit(&self, x: &RamElem) -> bool {
        self.ord_pi(x) == Val::Fin(0)
    }

    /// x / pi for x with ord_pi(x) >= 1. The result is determined modulo
    /// pi^(eN - 1); the missing top digit is set to 0.
    pub fn div_pi(&self, x: &RamElem) -> RamElem {
        let e = self.e;
        let c0 = self.w.div_p(&x.c[0]);
        let mut c: Vec<WittElem> = x.c[1..].to_vec();
        c.push(self.w.zero());
        // 1/pi = -Q(pi)/a_0 with Q = pi^(e-1) + a_{e-1} pi^(e-2) + ... + a_1
        let k = self.w.scale(&c0, self.u0_inv);
        c[e - 1] = self.w.sub(&c[e - 1], &k);
        for j in 0..e - 1 {
            let a = self.eis[j + 1];
            if a != 0 {
                c[j] = self.w.sub(&c[j], &self.w.scale(&k, a));
            }
        }
        RamElem { c }
    }

    pub fn div_pi_pow(&self, x: &RamElem, v: u32) -> RamElem {
        let mut y = x.clone();
        for _ in 0..v {
            y = self.div_pi(&y);
        }
        y
    }

    pub fn inv(&self, x: &RamElem) -> Option<RamElem> {
        if !self.is_unit(x) {
            return None;
        }
        let mut y = self.from_witt(&self.w.inv(&x.c[0])?);
        let two = self.from_int(2);
        let mut prec = 1;
        while prec < self.pi_precision() {
            y = self.mul(&y, &self.sub(&two, &self.mul(x, &y)));
            prec *= 2;
        }
        Some(y)
    }

    /// x / y when ord(x) >= ord(y) = v < inf. Correct modulo pi^(eN - v).
    pub fn div_exact(&self, x: &RamElem, y: &RamElem) -> Option<RamElem> {
        let v = self.ord_pi(y).finite()?;
        if self.ord_pi(x) < Val::Fin(v) {
            return None;
        }
        let u = self.inv(&self.div_pi_pow(y, v))?;
        Some(self.mul(&self.div_pi_pow(x, v), &u))
    }

    /// Compare valuations, treating `Inf` as larger than everything.
    pub fn cmp_ord(&self, x: &RamElem, y: &RamElem) -> Ordering {
        self.ord_pi(x).cmp(&self.ord_pi(y))
    }

    pub fn teichmuller(&self, a: &WittElem) -> RamElem {
        self.from_witt(&self.w.teichmuller(a))
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> RamElem {
        RamElem { c: (0..self.e).map(|_| self.w.random(rng)).collect() }
    }

    /// Random element of exact valuation `v` (a unit times pi^v).
    pub fn random_with_val<R: Rng + ?Sized>(&self, rng: &mut R, v: u32) -> RamElem {
        let mut u = self.random(rng);
        while !self.is_unit(&u) {
            u = self.random(rng);
        }
        self.mul(&u, &self.pi_pow(v))
    }

    /// Coefficientwise reduction into `res` (the same ring at precision 1).
    pub fn reduce_into(&self, x: &RamElem) -> RamElem {
        RamElem { c: x.c.iter().map(|a| self.w.to_residue(a)).collect() }
    }

    /// Coefficientwise naive lift of an element of the precision-1 ring.
    pub fn lift_from(&self, x: &RamElem) -> RamElem {
        RamElem { c: x.c.iter().map(|a| self.w.lift(a)).collect() }
    }
}
