use serde::{Deserialize, Serialize};

use crate::arith::{RamElem, RamRing, Val};

/// 2x2 matrix over a ramified ring; rows are images of the old basis vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Mat2 {
    pub m: [[RamElem; 2]; 2],
}

impl Mat2 {
    pub fn new(a: RamElem, b: RamElem, c: RamElem, d: RamElem) -> Self {
        Mat2 { m: [[a, b], [c, d]] }
    }

    pub fn identity(r: &RamRing) -> Self {
        Mat2::new(r.one(), r.zero(), r.zero(), r.one())
    }

    pub fn get(&self, i: usize, j: usize) -> &RamElem {
        &self.m[i][j]
    }

    pub fn entries(&self) -> impl Iterator<Item = &RamElem> {
        self.m.iter().flatten()
    }

    pub fn map(&self, f: impl Fn(&RamElem) -> RamElem) -> Mat2 {
        let [[a, b], [c, d]] = &self.m;
        Mat2::new(f(a), f(b), f(c), f(d))
    }

    pub fn transpose(&self) -> Mat2 {
        let [[a, b], [c, d]] = &self.m;
        Mat2::new(a.clone(), c.clone(), b.clone(), d.clone())
    }
}

pub fn mul(r: &RamRing, x: &Mat2, y: &Mat2) -> Mat2 {
    let e = |i: usize, j: usize| r.add(&r.mul(&x.m[i][0], &y.m[0][j]), &r.mul(&x.m[i][1], &y.m[1][j]));
    Mat2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
}

pub fn frobenius(r: &RamRing, x: &Mat2, n: i64) -> Mat2 {
    x.map(|a| r.frobenius(a, n))
}

pub fn det(r: &RamRing, x: &Mat2) -> RamElem {
    r.sub(&r.mul(&x.m[0][0], &x.m[1][1]), &r.mul(&x.m[0][1], &x.m[1][0]))
}

pub fn trace(r: &RamRing, x: &Mat2) -> RamElem {
    r.add(&x.m[0][0], &x.m[1][1])
}

pub fn adjugate(r: &RamRing, x: &Mat2) -> Mat2 {
    let [[a, b], [c, d]] = &x.m;
    Mat2::new(d.clone(), r.neg(b), r.neg(c), a.clone())
}

pub fn min_ord(r: &RamRing, x: &Mat2) -> Val {
    x.entries().map(|a| r.ord_pi(a)).min().unwrap()
}

pub fn scale(r: &RamRing, x: &Mat2, k: &RamElem) -> Mat2 {
    x.map(|a| r.mul(a, k))
}
