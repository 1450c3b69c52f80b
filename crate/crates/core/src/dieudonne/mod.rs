//! Rank-2 Dieudonne O-modules presented by slot matrices.
//!
//! Convention: for every slot i (indices mod f),
//! `(F X_{i-1}, F Y_{i-1})^T = A[i] (X_i, Y_i)^T`,
//! so row r of `A[i]` expresses F of the r-th basis vector of slot i-1 in
//! the basis of slot i. Example: A[0] = [[0, pi], [pi, 0]] with f = 1, e = 2
//! means F X = pi Y and F Y = pi X; then det A[0] = -pi^2 = -p and
//! V = sigma^-1(p A^-1) = [[0, pi], [pi, 0]] as well.

pub mod mat;
mod serial;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::arith::{CoeffTower, RamElem, RamRing, Val};
use crate::error::{Error, Result};
pub use mat::Mat2;
pub use serial::ModuleJson;

/// A 2x2 matrix over k[pi]/(pi^e), i.e. a [`Mat2`] over [`CoeffTower::res`].
pub type ModMatrix = Mat2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// determinant valuations sum to g
    #[default]
    Separable,
    /// determinant valuations sum to at most 2g
    General,
}

#[derive(Clone, Debug)]
pub struct DModule {
    tower: Arc<CoeffTower>,
    a: Vec<Mat2>,
    delta: Option<Vec<RamElem>>,
    mode: Mode,
    det_ords: Vec<u32>,
}

impl DModule {
    pub fn tower(&self) -> &CoeffTower {
        &self.tower
    }
    pub fn tower_arc(&self) -> &Arc<CoeffTower> {
        &self.tower
    }
    pub fn ring(&self) -> &RamRing {
        self.tower.ram()
    }
    pub fn matrices(&self) -> &[Mat2] {
        &self.a
    }
    /// A[i] with i taken mod f.
    pub fn matrix(&self, i: i64) -> &Mat2 {
        &self.a[i.rem_euclid(self.a.len() as i64) as usize]
    }
    pub fn delta(&self) -> Option<&[RamElem]> {
        self.delta.as_deref()
    }
    pub fn mode(&self) -> Mode {
        self.mode
    }
    /// ord_pi det A[i] per slot.
    pub fn det_ords(&self) -> &[u32] {
        &self.det_ords
    }
    pub fn det_sum(&self) -> u32 {
        self.det_ords.iter().sum()
    }
    pub fn f(&self) -> usize {
        self.a.len()
    }
    pub fn e(&self) -> usize {
        self.tower.e()
    }
    pub fn g(&self) -> u32 {
        self.tower.g()
    }

    /// Same matrices, pairing dropped.
    pub fn without_pairing(&self) -> DModule {
        DModule { delta: None, ..self.clone() }
    }
}

/// Validate slot matrices (and optional pairing scalars) into a module.
pub fn build_module(
    tower: Arc<CoeffTower>,
    a: Vec<Mat2>,
    delta: Option<Vec<RamElem>>,
    mode: Mode,
) -> Result<DModule> {
    build_with_slack(tower, a, delta, mode, 0)
}

/// As [`build_module`], with the pairing identity checked modulo
/// pi^(precision - slack) for data derived by inexact division.
fn build_with_slack(
    tower: Arc<CoeffTower>,
    a: Vec<Mat2>,
    delta: Option<Vec<RamElem>>,
    mode: Mode,
    slack: u32,
) -> Result<DModule> {
    let f = tower.f();
    if a.len() != f {
        return Err(Error::InvalidParameter(format!("expected {f} slot matrices, got {}", a.len())));
    }
    let r = tower.ram();
    let e = tower.e() as u32;
    let prec = r.pi_precision();
    let p = r.from_int(tower.p() as i64);
    let mut det_ords = Vec::with_capacity(f);
    for (slot, m) in a.iter().enumerate() {
        let v = r
            .ord_pi(&mat::det(r, m))
            .finite()
            .ok_or(Error::DegenerateDeterminant { slot })?;
        if v + e > prec {
            return Err(Error::PrecisionExhausted(format!(
                "slot {slot}: det valuation {v} leaves less than e digits of V at precision {prec}"
            )));
        }
        let adj = mat::adjugate(r, m);
        if adj.entries().any(|x| r.ord_pi(&r.mul(&p, x)) < Val::Fin(v)) {
            return Err(Error::VNonIntegral { slot });
        }
        det_ords.push(v);
    }
    let g = tower.g();
    let sum: u32 = det_ords.iter().sum();
    let budget = match mode {
        Mode::Separable => g,
        Mode::General => 2 * g,
    };
    let violated = match mode {
        Mode::Separable => sum != g,
        Mode::General => sum > 2 * g,
    };
    if violated {
        let mut acc = 0;
        let mut slot = f - 1;
        for (i, &v) in det_ords.iter().enumerate() {
            acc += v;
            if acc > budget {
                slot = i;
                break;
            }
        }
        return Err(Error::DetBudget { sum, budget, slot });
    }
    if let Some(d) = &delta {
        if d.len() != f {
            return Err(Error::InvalidParameter(format!("expected {f} pairing scalars")));
        }
        for (slot, x) in d.iter().enumerate() {
            if r.is_zero(x) {
                return Err(Error::DegeneratePairing { slot });
            }
        }
        for slot in 0..f {
            let prev = &d[(slot + f - 1) % f];
            let lhs = r.mul(&mat::det(r, &a[slot]), &d[slot]);
            let rhs = r.mul(&p, &r.frobenius(prev, 1));
            if r.ord_pi(&r.sub(&lhs, &rhs)) < Val::Fin(prec.saturating_sub(slack)) {
                return Err(Error::PairingIncompatible { slot });
            }
        }
    }
    Ok(DModule { tower, a, delta, mode, det_ords })
}

/// Matrix of F^f on slot `b`: A[b+1]^(f-1) A[b+2]^(f-2) ... A[b+f]^(0).
pub fn twisted_power(m: &DModule, b: usize) -> Mat2 {
    let r = m.ring();
    let f = m.f();
    let mut acc = Mat2::identity(r);
    for k in 1..=f {
        let term = mat::frobenius(r, m.matrix((b + k) as i64), (f - k) as i64);
        acc = mat::mul(r, &acc, &term);
    }
    acc
}

/// Successive matrices B_n = B^(f(n-1)) ... B^(f) B of F^(fn) on slot 0.
pub struct TwistedIterates<'a> {
    r: &'a RamRing,
    b: Mat2,
    cur: Option<Mat2>,
    n: u64,
    f: i64,
}

impl<'a> TwistedIterates<'a> {
    pub fn new(m: &'a DModule) -> Self {
        TwistedIterates { r: m.ring(), b: twisted_power(m, 0), cur: None, n: 0, f: m.f() as i64 }
    }
}

impl Iterator for TwistedIterates<'_> {
    /// (n, B_n)
    type Item = (u64, Mat2);

    fn next(&mut self) -> Option<Self::Item> {
        let next = match &self.cur {
            None => self.b.clone(),
            Some(c) => {
                let tw = mat::frobenius(self.r, &self.b, self.f * self.n as i64);
                mat::mul(self.r, &tw, c)
            }
        };
        self.n += 1;
        self.cur = Some(next.clone());
        Some((self.n, next))
    }
}

/// Minimal entry valuation of B_n.
pub fn iterate_twisted(m: &DModule, n: u64) -> Result<u32> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let (_, bn) = TwistedIterates::new(m).nth(n as usize - 1).unwrap();
    mat::min_ord(m.ring(), &bn).finite().ok_or_else(|| {
        Error::PrecisionExhausted(format!(
            "all entries of B_{n} vanish modulo pi^{}",
            m.ring().pi_precision()
        ))
    })
}

/// p A[i]^-1 at full precision (correct modulo pi^(eN - ord det A[i])).
pub fn p_inverse(m: &DModule, i: usize) -> Mat2 {
    let r = m.ring();
    let a = &m.a[i];
    let det = mat::det(r, a);
    let p = r.from_int(m.tower.p() as i64);
    mat::adjugate(r, a).map(|x| r.div_exact(&r.mul(&p, x), &det).expect("V-integral by validation"))
}

/// Matrix of V: M^i -> M^(i-1), sigma^-1(p A[i]^-1).
pub fn v_matrix(m: &DModule, i: usize) -> Mat2 {
    mat::frobenius(m.ring(), &p_inverse(m, i), -1)
}

/// Mod-p reductions of F and V at one slot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModPair {
    pub f: ModMatrix,
    pub v: ModMatrix,
}

/// Per slot i: F-bar[i] = A[i] mod p and V-bar[i] = sigma^-1(p A[i]^-1) mod p.
pub fn reduce_mod_p(m: &DModule) -> Vec<ModPair> {
    let r = m.ring();
    (0..m.f())
        .map(|i| ModPair {
            f: m.a[i].map(|x| r.reduce_into(x)),
            v: v_matrix(m, i).map(|x| r.reduce_into(x)),
        })
        .collect()
}

/// Dual module: A_dual[i] = (p A[i]^-1)^T with pairing pi^s / delta_i.
pub fn dual_module(m: &DModule) -> Result<DModule> {
    let r = m.ring();
    let delta = m
        .delta
        .as_ref()
        .ok_or_else(|| Error::InvalidParameter("dual requires a pairing".into()))?;
    let a: Vec<Mat2> = (0..m.f()).map(|i| p_inverse(m, i).transpose()).collect();
    let s = delta.iter().map(|d| r.ord_pi(d).finite().unwrap()).max().unwrap();
    let pis = r.pi_pow(s);
    let dual_delta = delta
        .iter()
        .map(|d| r.div_exact(&pis, d).ok_or(Error::Internal("pairing scalar not divisible".into())))
        .collect::<Result<Vec<_>>>()?;
    // p A^-1 loses ord det A digits, 1/delta loses ord delta digits
    let slack = m.det_ords.iter().max().unwrap() + s;
    build_with_slack(m.tower.clone(), a, Some(dual_delta), m.mode, slack)
}

/// Pairing scalars with delta_0 a power of pi, satisfying
/// det(A[i]) delta_i = p sigma(delta_(i-1)). A sign mismatch around the cycle
/// is absorbed by a Teichmuller unit when the residue field allows it.
pub fn solve_pairing(tower: &CoeffTower, a: &[Mat2]) -> Option<Vec<RamElem>> {
    let r = tower.ram();
    let f = a.len();
    let e = tower.e() as i64;
    let dets: Vec<RamElem> = a.iter().map(|m| mat::det(r, m)).collect();
    let vs: Vec<i64> = dets.iter().map(|d| r.ord_pi(d).finite().map(|v| v as i64)).collect::<Option<_>>()?;
    if vs.iter().sum::<i64>() != e * f as i64 {
        return None;
    }
    let mut w = 0i64;
    let mut lowest = 0i64;
    for &v in &vs[1..] {
        w += e - v;
        lowest = lowest.min(w);
    }
    let w0 = (-lowest) as u32;
    let p = r.from_int(tower.p() as i64);
    let chain = |d0: RamElem| -> Option<(Vec<RamElem>, bool, bool)> {
        let mut d = vec![d0];
        for i in 1..f {
            let rhs = r.mul(&p, &r.frobenius(&d[i - 1], 1));
            d.push(r.div_exact(&rhs, &dets[i])?);
        }
        let closing = r.mul(&p, &r.frobenius(&d[f - 1], 1));
        let lhs = r.mul(&dets[0], &d[0]);
        let ok = lhs == closing;
        let flipped = r.neg(&lhs) == closing;
        Some((d, ok, flipped))
    };
    let (d, ok, flipped) = chain(r.pi_pow(w0))?;
    if ok {
        return Some(d);
    }
    if !flipped {
        return None;
    }
    let lambda = sign_twist(tower)?;
    let (d, ok, _) = chain(r.mul(&lambda, &r.pi_pow(w0)))?;
    ok.then_some(d)
}

/// Teichmuller unit l with sigma^f(l) = -l, if one exists in the residue field.
fn sign_twist(tower: &CoeffTower) -> Option<RamElem> {
    let k = tower.field();
    let q = k.residue_size();
    let pf = tower.p().checked_pow(tower.f() as u32)?;
    let h = (q - 1) / (pf - 1);
    if h % 2 == 1 {
        return None;
    }
    let minus_one = k.from_int(-1);
    // x^(h/2) has (pf-1)-th power -1 exactly when x is a non-square
    for idx in 2..q {
        let y = k.pow(&k.from_index(idx), h / 2);
        if k.pow(&y, pf - 1) == minus_one {
            return Some(tower.ram().teichmuller(&y));
        }
    }
    None
}

#[cfg(test)]
mod tests;
