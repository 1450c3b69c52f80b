//! Brute-force enumeration of the planes in the 4-dimensional mod-p
//! Dieudonne space N/pN of the non-Rapoport example that are stable under
//! pi, F, V and isotropic, with comparison against the local equations in
//! the chart around <x1, x2>.
//!
//! Coordinates are (x1, x2, x1', x2'). Mod p the operators are
//! pi: (a, b, c, d) -> (c, d, 0, 0), F: (a, b, c, d) -> (d^p, c^p, 0, 0)
//! and V: (a, b, c, d) -> (d^(1/p), c^(1/p), 0, 0); the pairing has
//! <x1, x2'> = <x1', x2> = 1 and is alternating.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{zmod, WittRing};
use crate::error::{Error, Result};

pub const DEFAULT_SIZE_CAP: u128 = 1_000_000;
const MAX_FIELD: u64 = 1 << 12;

type El = u16;
pub type Vec4 = [El; 4];

/// Table-driven F_q. Element k has base-p digits equal to its coordinates in
/// the polynomial basis of the residue field of the Witt tower.
pub struct Gf {
    q: usize,
    add: Vec<El>,
    neg: Vec<El>,
    exp: Vec<El>,
    log: Vec<u32>,
    frob: Vec<El>,
    frob_inv: Vec<El>,
}

impl Gf {
    pub fn new(p: u64, d: usize) -> Result<Self> {
        let w = WittRing::new(p, d, 1)?;
        let q = w.residue_size();
        if q > MAX_FIELD {
            return Err(Error::Unsupported(format!("field of size {q} exceeds {MAX_FIELD}")));
        }
        let q = q as usize;
        let index = |x: &crate::arith::WittElem| x.coeffs().iter().rev().fold(0usize, |acc, &c| acc * p as usize + c as usize);
        let elems: Vec<_> = (0..q as u64).map(|k| w.from_index(k)).collect();
        let mut add = vec![0; q * q];
        for a in 0..q {
            for b in 0..q {
                add[a * q + b] = index(&w.add(&elems[a], &elems[b])) as El;
            }
        }
        let neg = (0..q).map(|a| index(&w.neg(&elems[a])) as El).collect();
        let n = (q - 1) as u64;
        let primes: Vec<u64> = (2..=n).filter(|&r| n.is_multiple_of(r) && zmod::is_prime(r)).collect();
        let one = w.one();
        let gen = (1..q)
            .find(|&k| primes.iter().all(|r| w.pow(&elems[k], n / r) != one))
            .ok_or_else(|| Error::Internal("no primitive element".into()))?;
        let mut exp = vec![0; q - 1];
        let mut log = vec![0; q];
        let mut x = one;
        for (k, slot) in exp.iter_mut().enumerate() {
            let i = index(&x);
            *slot = i as El;
            log[i] = k as u32;
            x = w.mul(&x, &elems[gen]);
        }
        let mut gf = Gf { q, add, neg, exp, log, frob: vec![], frob_inv: vec![] };
        gf.frob = (0..q).map(|a| gf.pow(a as El, p)).collect();
        gf.frob_inv = (0..q).map(|a| gf.pow(a as El, q as u64 / p)).collect();
        Ok(gf)
    }

    pub fn size(&self) -> usize {
        self.q
    }
    pub fn add(&self, a: El, b: El) -> El {
        self.add[a as usize * self.q + b as usize]
    }
    pub fn sub(&self, a: El, b: El) -> El {
        self.add(a, self.neg[b as usize])
    }
    pub fn neg(&self, a: El) -> El {
        self.neg[a as usize]
    }
    pub fn mul(&self, a: El, b: El) -> El {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.q - 1;
        self.exp[(self.log[a as usize] as usize + self.log[b as usize] as usize) % n]
    }
    pub fn inv(&self, a: El) -> Option<El> {
        (a != 0).then(|| self.exp[(self.q - 1 - self.log[a as usize] as usize) % (self.q - 1)])
    }
    pub fn pow(&self, a: El, k: u64) -> El {
        if k == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = (self.q - 1) as u64;
        self.exp[((self.log[a as usize] as u64 * (k % n)) % n) as usize]
    }
    pub fn frob(&self, a: El) -> El {
        self.frob[a as usize]
    }
    pub fn frob_inv(&self, a: El) -> El {
        self.frob_inv[a as usize]
    }
}

pub struct HeckeSetting {
    pub p: u64,
    pub s: u32,
    pub field: Gf,
}

impl HeckeSetting {
    pub fn new(p: u64, s: u32) -> Result<Self> {
        if !zmod::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p == 2 {
            return Err(Error::InvalidParameter("p must be odd".into()));
        }
        if s == 0 {
            return Err(Error::InvalidParameter("s must be positive".into()));
        }
        let field = Gf::new(p, 2 * s as usize)?;
        let st = HeckeSetting { p, s, field };
        st.self_check()?;
        Ok(st)
    }

    pub fn q(&self) -> usize {
        self.field.size()
    }

    pub fn pi(&self, v: &Vec4) -> Vec4 {
        [v[2], v[3], 0, 0]
    }
    pub fn frob(&self, v: &Vec4) -> Vec4 {
        [self.field.frob(v[3]), self.field.frob(v[2]), 0, 0]
    }
    pub fn ver(&self, v: &Vec4) -> Vec4 {
        [self.field.frob_inv(v[3]), self.field.frob_inv(v[2]), 0, 0]
    }
    pub fn pairing(&self, u: &Vec4, v: &Vec4) -> El {
        let k = &self.field;
        let a = k.sub(k.mul(u[0], v[3]), k.mul(u[3], v[0]));
        let b = k.sub(k.mul(u[2], v[1]), k.mul(u[1], v[2]));
        k.add(a, b)
    }

    /// FV = VF = 0, pi^2 = 0 and pi commuting with F, V on a spanning set
    /// of vectors.
    fn self_check(&self) -> Result<()> {
        let q = self.q() as El;
        let probes: Vec<Vec4> = (0..4)
            .flat_map(|i| (1..q.min(6)).map(move |c| {
                let mut v = [0; 4];
                v[i] = c;
                v
            }))
            .collect();
        for v in &probes {
            let z = [0; 4];
            if self.frob(&self.ver(v)) != z || self.ver(&self.frob(v)) != z {
                return Err(Error::Internal("FV != 0 on N/pN".into()));
            }
            if self.pi(&self.pi(v)) != z {
                return Err(Error::Internal("pi^2 != 0 on N/pN".into()));
            }
            if self.pi(&self.frob(v)) != self.frob(&self.pi(v)) || self.pi(&self.ver(v)) != self.ver(&self.pi(v)) {
                return Err(Error::Internal("pi does not commute with F, V".into()));
            }
        }
        Ok(())
    }

    fn in_span(&self, rows: &[Vec4; 2], piv: (usize, usize), w: &Vec4) -> bool {
        let k = &self.field;
        let (a, b) = (w[piv.0], w[piv.1]);
        (0..4).all(|c| k.add(k.mul(a, rows[0][c]), k.mul(b, rows[1][c])) == w[c])
    }

    /// Raw definition: pi, F, V map the plane into itself and it is isotropic.
    pub fn is_stable(&self, rows: &[Vec4; 2], piv: (usize, usize)) -> bool {
        self.pairing(&rows[0], &rows[1]) == 0
            && rows.iter().all(|r| {
                self.in_span(rows, piv, &self.pi(r))
                    && self.in_span(rows, piv, &self.frob(r))
                    && self.in_span(rows, piv, &self.ver(r))
            })
    }

    fn chart_rows(t: &Vec4) -> [Vec4; 2] {
        [[1, 0, t[0], t[1]], [0, 1, t[2], t[3]]]
    }

    /// t11 + t22 and the equations for pi-, F-stability in the chart.
    pub fn chart_equations(&self, t: &Vec4) -> bool {
        let k = &self.field;
        let p = self.p;
        let [t11, t12, t21, t22] = *t;
        let tr = k.add(t11, t22);
        let pw = |x| k.pow(x, p);
        let pw1 = |x| k.pow(x, p + 1);
        let eqs = [
            tr,
            k.add(k.mul(t11, t11), k.mul(t12, t21)),
            k.mul(t12, tr),
            k.add(k.mul(t22, t22), k.mul(t12, t21)),
            k.mul(t21, tr),
            k.add(k.mul(pw(t11), t21), k.mul(pw(t12), t11)),
            k.add(k.mul(pw(t11), t22), pw1(t12)),
            k.add(pw1(t21), k.mul(pw(t22), t11)),
            k.add(k.mul(pw(t21), t22), k.mul(pw(t22), t12)),
        ];
        eqs.iter().all(|&x| x == 0)
    }

    /// (t1^(p+1) - t2^(p+1), t1^2 + t2 t3)
    pub fn displayed_polynomials(&self, t1: El, t2: El, t3: El) -> bool {
        let k = &self.field;
        k.sub(k.pow(t1, self.p + 1), k.pow(t2, self.p + 1)) == 0 && k.add(k.mul(t1, t1), k.mul(t2, t3)) == 0
    }

    /// {(t, a t, -t / a, -t) : a^(p+1) = 1}
    pub fn parametrized(&self) -> BTreeSet<Vec4> {
        let k = &self.field;
        let q = self.q() as El;
        let roots: Vec<El> = (1..q).filter(|&a| k.pow(a, self.p + 1) == 1).collect();
        let mut set = BTreeSet::new();
        for t in 0..q {
            for &a in &roots {
                set.insert([t, k.mul(a, t), k.neg(k.mul(t, k.inv(a).unwrap())), k.neg(t)]);
            }
        }
        set
    }

    fn chart_scan(&self, pred: impl Fn(&Vec4) -> bool + Sync) -> Vec<Vec4> {
        let q = self.q() as El;
        (0..q)
            .into_par_iter()
            .flat_map_iter(|a| {
                let mut out = vec![];
                for b in 0..q {
                    for c in 0..q {
                        for d in 0..q {
                            let t = [a, b, c, d];
                            if pred(&t) {
                                out.push(t);
                            }
                        }
                    }
                }
                out
            })
            .collect()
    }

    pub fn enumerate_chart(&self) -> Vec<Vec4> {
        self.chart_scan(|t| self.is_stable(&Self::chart_rows(t), (0, 1)))
    }

    /// Every stable plane, as reduced row echelon rows.
    pub fn enumerate_grassmannian(&self) -> Vec<[Vec4; 2]> {
        let q = self.q() as El;
        let mut out = vec![];
        for i in 0..4 {
            for j in i + 1..4 {
                let free0: Vec<usize> = (i + 1..4).filter(|&c| c != j).collect();
                let free1: Vec<usize> = (j + 1..4).collect();
                let n = free0.len() + free1.len();
                let total = (q as usize).pow(n as u32);
                let found: Vec<[Vec4; 2]> = (0..total)
                    .into_par_iter()
                    .filter_map(|mut idx| {
                        let mut rows = [[0; 4]; 2];
                        rows[0][i] = 1;
                        rows[1][j] = 1;
                        for &c in free0.iter() {
                            rows[0][c] = (idx % q as usize) as El;
                            idx /= q as usize;
                        }
                        for &c in free1.iter() {
                            rows[1][c] = (idx % q as usize) as El;
                            idx /= q as usize;
                        }
                        self.is_stable(&rows, (i, j)).then_some(rows)
                    })
                    .collect();
                out.extend(found);
            }
        }
        out.sort_unstable();
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HeckeCounts {
    /// stable isotropic planes in the chart, by the raw definition
    pub chart: usize,
    /// solutions of the local equations in the chart
    pub chart_equations: usize,
    pub parametrized: usize,
    /// 1 + (p + 1)(q - 1)
    pub expected_chart: usize,
    /// F_q-points of the displayed variety in (t1, t2, t3)
    pub variety: usize,
    /// q + (p + 1)(q - 1)
    pub expected_variety: usize,
    pub full_grassmannian: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtraPoints {
    pub count: usize,
    pub all_on_t1_t2_zero: bool,
    pub points: Vec<[El; 3]>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HeckeReport {
    pub p: u64,
    pub s: u32,
    pub q: usize,
    pub counts: HeckeCounts,
    pub lines: usize,
    pub equations_verified: bool,
    pub polynomials_verified: bool,
    pub trace_zero: bool,
    pub enumeration_matches_equations: bool,
    pub enumeration_matches_parametrization: bool,
    pub extra_variety_points: ExtraPoints,
    /// stable planes outside the chart (full pass only), rows of the echelon form
    pub outside_chart: Option<Vec<[Vec4; 2]>>,
    pub ok: bool,
}

/// Field elements are written by their index (base-p digits = coordinates).
pub fn run_probe(p: u64, s: u32, full_grassmannian: bool, cap: u128) -> Result<HeckeReport> {
    let st = HeckeSetting::new(p, s)?;
    let q = st.q();
    let size = (q as u128).pow(4) * if full_grassmannian { 2 } else { 1 };
    if size > cap {
        return Err(Error::SizeGuard { size, cap });
    }
    let chart = st.enumerate_chart();
    let chart_set: BTreeSet<Vec4> = chart.iter().copied().collect();
    let eq_set: BTreeSet<Vec4> = st.chart_scan(|t| st.chart_equations(t)).into_iter().collect();
    let param = st.parametrized();
    let equations_verified = chart.iter().all(|t| st.chart_equations(t));
    let polynomials_verified = chart.iter().all(|t| st.displayed_polynomials(t[0], t[1], t[2]));
    let trace_zero = chart.iter().all(|t| st.field.add(t[0], t[3]) == 0);

    let k = &st.field;
    let lines: BTreeSet<Vec4> = chart
        .iter()
        .filter(|t| **t != [0; 4])
        .map(|t| {
            let lead = k.inv(*t.iter().find(|&&x| x != 0).unwrap()).unwrap();
            t.map(|x| k.mul(x, lead))
        })
        .collect();

    let projected: BTreeSet<[El; 3]> = chart.iter().map(|t| [t[0], t[1], t[2]]).collect();
    let qq = q as El;
    let variety: Vec<[El; 3]> = (0..qq)
        .into_par_iter()
        .flat_map_iter(|a| {
            let st = &st;
            (0..qq).flat_map(move |b| (0..qq).map(move |c| [a, b, c])).filter(move |x| st.displayed_polynomials(x[0], x[1], x[2]))
        })
        .collect();
    let extra: Vec<[El; 3]> = variety.iter().filter(|x| !projected.contains(*x)).copied().collect();

    let outside = full_grassmannian.then(|| {
        st.enumerate_grassmannian().into_iter().filter(|r| !(r[0][..2] == [1, 0] && r[1][..2] == [0, 1])).collect::<Vec<_>>()
    });
    let pq = p as usize;
    let counts = HeckeCounts {
        chart: chart.len(),
        chart_equations: eq_set.len(),
        parametrized: param.len(),
        expected_chart: 1 + (pq + 1) * (q - 1),
        variety: variety.len(),
        expected_variety: q + (pq + 1) * (q - 1),
        full_grassmannian: outside.as_ref().map(|o| o.len() + chart.len()),
    };
    let extra_variety_points =
        ExtraPoints { count: extra.len(), all_on_t1_t2_zero: extra.iter().all(|x| x[0] == 0 && x[1] == 0), points: extra };
    let enumeration_matches_equations = chart_set == eq_set;
    let enumeration_matches_parametrization = chart_set == param;
    let ok = counts.chart == counts.expected_chart
        && counts.variety == counts.expected_variety
        && lines.len() == pq + 1
        && equations_verified
        && polynomials_verified
        && trace_zero
        && enumeration_matches_equations
        && enumeration_matches_parametrization
        && extra_variety_points.all_on_t1_t2_zero;
    Ok(HeckeReport {
        p,
        s,
        q,
        counts,
        lines: lines.len(),
        equations_verified,
        polynomials_verified,
        trace_zero,
        enumeration_matches_equations,
        enumeration_matches_parametrization,
        extra_variety_points,
        outside_chart: outside,
        ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_tables() {
        let k = Gf::new(3, 2).unwrap();
        assert_eq!(k.size(), 9);
        for a in 1..9 {
            assert_eq!(k.mul(a, k.inv(a).unwrap()), 1);
            assert_eq!(k.frob_inv(k.frob(a)), a);
            assert_eq!(k.add(a, k.neg(a)), 0);
        }
    }

    #[test]
    fn probe_p3() {
        let r = run_probe(3, 1, true, DEFAULT_SIZE_CAP).unwrap();
        assert!(r.ok, "{r:?}");
        assert_eq!(r.counts.chart, 33);
        assert_eq!(r.counts.variety, 41);
        assert_eq!(r.extra_variety_points.count, 8);
        assert_eq!(r.lines, 4);
    }

    #[test]
    fn size_guard() {
        assert!(matches!(run_probe(7, 1, false, DEFAULT_SIZE_CAP), Err(Error::SizeGuard { .. })));
        assert!(run_probe(2, 1, false, DEFAULT_SIZE_CAP).is_err());
    }
}
