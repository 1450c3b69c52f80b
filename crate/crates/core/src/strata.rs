//! Combinatorics of the stratifications: S(g), the poset A(e, f) of
//! Rapoport a-types with per-stratum data, dimension and degree formulas,
//! superspecial patterns, and a checker for the determinant expansion used
//! in the Kottwitz comparison.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::zmod;
use crate::error::{Error, Result};
use crate::invariants::{admissible_twice, LieType, NewtonPoint};

pub const DEFAULT_SIZE_CAP: u128 = 1_000_000;

/// S(g) in increasing order.
pub fn admissible_slopes(g: u32) -> Result<Vec<NewtonPoint>> {
    if g == 0 {
        return Err(Error::InvalidParameter("g must be positive".into()));
    }
    Ok(admissible_twice(g).into_iter().map(|t| NewtonPoint::from_twice(g, t).unwrap()).collect())
}

/// a^i a^(i+1) = 0 for all i, indices mod f.
pub fn is_spaced(a: &[u32]) -> bool {
    let f = a.len();
    (0..f).all(|i| a[i] * a[(i + 1) % f] == 0)
}

/// max |b| over spaced b <= a, by walking the whole down-set.
pub fn lambda_exhaustive(a: &[u32]) -> u32 {
    let mut b = vec![0u32; a.len()];
    let mut best = 0;
    loop {
        if is_spaced(&b) {
            best = best.max(b.iter().sum());
        }
        // odometer over the box [0, a]
        let mut i = a.len();
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if b[i] < a[i] {
                b[i] += 1;
                break;
            }
            b[i] = 0;
        }
    }
}

/// Same quantity as a maximum-weight independent set on the f-cycle.
pub fn lambda_dp(a: &[u32]) -> u32 {
    let f = a.len();
    if f == 1 {
        return 0;
    }
    let path = |xs: &[u32]| {
        let (mut take, mut skip) = (0u32, 0u32);
        for &x in xs {
            (take, skip) = (skip + x, take.max(skip));
        }
        take.max(skip)
    };
    let without_0 = path(&a[1..]);
    let with_0 = a[0] + if f > 3 { path(&a[2..f - 1]) } else { 0 };
    without_0.max(with_0)
}

#[derive(Clone, Debug, Serialize)]
pub struct StratumRecord {
    pub a: Vec<u32>,
    pub dim: u32,
    pub spaced: bool,
    pub lambda: u32,
    pub generic_slope_lower: NewtonPoint,
    /// only for spaced a-types; otherwise the lower bound need not be attained
    pub generic_slope_exact: Option<NewtonPoint>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ATypePoset {
    pub e: u32,
    pub f: u32,
    pub g: u32,
    pub nodes: Vec<StratumRecord>,
    /// cover relations (lower, upper) as node indices
    pub edges: Vec<(usize, usize)>,
}

fn slope(g: u32, i: u32) -> NewtonPoint {
    NewtonPoint::from_twice(g, (2 * i).min(g)).unwrap()
}

fn fmt_point(s: &NewtonPoint) -> String {
    match s.index() {
        (n, 1) => format!("s({n})"),
        (n, d) => format!("s({n}/{d})"),
    }
}

pub fn poset_size(e: u32, f: u32) -> u128 {
    (e as u128 + 1).checked_pow(f).unwrap_or(u128::MAX)
}

/// A(e, f) in lexicographic order, annotated.
pub fn atype_poset(e: u32, f: u32, cap: u128) -> Result<ATypePoset> {
    if e == 0 || f == 0 {
        return Err(Error::InvalidParameter("e and f must be positive".into()));
    }
    let size = poset_size(e, f);
    if size > cap {
        return Err(Error::SizeGuard { size, cap });
    }
    let n = size as usize;
    let g = e * f;
    let base = e as usize + 1;
    let decode = |mut k: usize| {
        let mut a = vec![0u32; f as usize];
        for i in (0..f as usize).rev() {
            a[i] = (k % base) as u32;
            k /= base;
        }
        a
    };
    let nodes: Vec<StratumRecord> = (0..n)
        .into_par_iter()
        .map(|k| {
            let a = decode(k);
            let size: u32 = a.iter().sum();
            let spaced = is_spaced(&a);
            let lambda = lambda_exhaustive(&a);
            debug_assert_eq!(lambda, lambda_dp(&a));
            StratumRecord {
                dim: g - size,
                spaced,
                lambda,
                generic_slope_lower: slope(g, lambda),
                generic_slope_exact: spaced.then(|| slope(g, size)),
                a,
            }
        })
        .collect();
    for r in &nodes {
        let dp = lambda_dp(&r.a);
        if dp != r.lambda {
            return Err(Error::Internal(format!("lambda mismatch at {:?}: {} vs {dp}", r.a, r.lambda)));
        }
    }
    let mut edges = Vec::new();
    for (k, r) in nodes.iter().enumerate() {
        let mut stride = 1;
        for i in (0..f as usize).rev() {
            if r.a[i] < e {
                edges.push((k, k + stride));
            }
            stride *= base;
        }
    }
    edges.sort_unstable();
    Ok(ATypePoset { e, f, g, nodes, edges })
}

impl ATypePoset {
    pub fn to_dot(&self) -> String {
        let mut s = format!("digraph \"A({},{})\" {{\n  rankdir=BT;\n", self.e, self.f);
        for (k, r) in self.nodes.iter().enumerate() {
            let a: Vec<String> = r.a.iter().map(|x| x.to_string()).collect();
            let slope = match &r.generic_slope_exact {
                Some(x) => fmt_point(x),
                None => format!(">= {}", fmt_point(&r.generic_slope_lower)),
            };
            let shape = if r.spaced { ", shape=box" } else { "" };
            let _ = writeln!(s, "  n{k} [label=\"({})\\ndim {}\\n{slope}\"{shape}];", a.join(","), r.dim);
        }
        for (u, v) in &self.edges {
            let _ = writeln!(s, "  n{u} -> n{v};");
        }
        s.push_str("}\n");
        s
    }
}

fn check_budget(l: &LieType, e: u32, f: u32) -> Result<()> {
    if l.slots.len() != f as usize {
        return Err(Error::InvalidParameter(format!("Lie type has {} slots, f = {f}", l.slots.len())));
    }
    if l.slots.iter().flatten().any(|&x| x > e) {
        return Err(Error::InvalidParameter(format!("Lie type exponents exceed e = {e}")));
    }
    Ok(())
}

fn check_sum(l: &LieType, e: u32, f: u32) -> Result<()> {
    check_budget(l, e, f)?;
    if l.total() != e * f {
        return Err(Error::DetBudget { sum: l.total(), budget: e * f, slot: f as usize - 1 });
    }
    Ok(())
}

/// Dimension of the Deligne-Pappas stratum of a Lie type: g - 2 sum min.
pub fn dp_stratum_dim(l: &LieType, e: u32, f: u32) -> Result<u32> {
    check_sum(l, e, f)?;
    let m: u32 = l.slots.iter().map(|s| s[0]).sum();
    (e * f).checked_sub(2 * m).ok_or_else(|| Error::Internal("negative dimension".into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DeformationDims {
    pub unrestricted: u32,
    pub dp: u32,
    pub polarized: u32,
    /// every slot has Lie dimension e
    pub dp_condition: bool,
    /// the DP-value agrees with the unrestricted formula
    pub dp_matches_unrestricted: bool,
}

pub fn deformation_dims(l: &LieType, e: u32, f: u32) -> Result<DeformationDims> {
    check_budget(l, e, f)?;
    let mut unrestricted = 0;
    for s in &l.slots {
        for &x in s {
            for &y in s {
                unrestricted += x.min(e - y);
            }
        }
    }
    let m: u32 = l.slots.iter().map(|s| s[0]).sum();
    let dp = e * f + 2 * m;
    Ok(DeformationDims {
        unrestricted,
        dp,
        polarized: e * f + m,
        dp_condition: l.slots.iter().all(|s| s[0] + s[1] == e),
        dp_matches_unrestricted: dp == unrestricted,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DegreeNormalization {
    /// slot 0 is assumed to carry the minimal pairing valuation
    Fixed,
    /// rotate so that a slot of minimal valuation comes first
    Rotated,
}

/// Exponent D with degree p^D of the minimal quasi-polarization.
pub fn polarization_degree_exponent(l: &LieType, e: u32, f: u32, norm: DegreeNormalization) -> Result<i64> {
    check_sum(l, e, f)?;
    // P_i = sum_{k < i} (s_k - e), the pairing valuation on slot i relative to slot 0
    let mut prefix = Vec::with_capacity(f as usize);
    let mut acc = 0i64;
    for s in &l.slots {
        prefix.push(acc);
        acc += (s[0] + s[1]) as i64 - e as i64;
    }
    let min = *prefix.iter().min().unwrap();
    match norm {
        DegreeNormalization::Fixed if min < 0 => Err(Error::InvalidParameter(format!(
            "slot 0 does not carry the minimal pairing valuation (prefix sums {prefix:?})"
        ))),
        DegreeNormalization::Fixed => Ok(2 * prefix.iter().sum::<i64>()),
        DegreeNormalization::Rotated => Ok(2 * prefix.iter().map(|x| x - min).sum::<i64>()),
    }
}

/// ceil(m) for m in S(g), m = twice / 2.
pub fn newton_stratum_codim(g: u32, twice: u32) -> Result<u32> {
    NewtonPoint::from_twice(g, twice)
        .map(|s| s.ceil())
        .ok_or_else(|| Error::InvalidParameter(format!("{twice}/2 is not in S({g})")))
}

/// Lie type patterns of superspecial modules, one representative per class.
/// Odd f: constant {e1, e - e1}. Even f: alternating {x, y}, {e - x, e - y},
/// identified under rotation of the cycle.
pub fn superspecial_types(e: u32, f: u32) -> Vec<Vec<[u32; 2]>> {
    let f = f as usize;
    if f % 2 == 1 {
        return (0..=e / 2).map(|x| vec![[x, e - x]; f]).collect();
    }
    let mut reps = BTreeSet::new();
    for x in 0..=e {
        for y in x..=e {
            let other = [e - y, e - x];
            reps.insert([x, y].min(other));
        }
    }
    reps.into_iter()
        .map(|[x, y]| (0..f).map(|i| if i % 2 == 0 { [x, y] } else { [e - y, e - x] }).collect())
        .collect()
}

/// F_p[eps_1..eps_K] / (eps_i eps_j): a scalar plus a linear part.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Dual {
    c: u64,
    eps: Vec<u64>,
}

struct DualRing {
    p: u64,
    k: usize,
}

impl DualRing {
    fn scalar(&self, c: u64) -> Dual {
        Dual { c: c % self.p, eps: vec![0; self.k] }
    }
    fn add(&self, a: &Dual, b: &Dual) -> Dual {
        Dual {
            c: zmod::add_mod(a.c, b.c, self.p),
            eps: a.eps.iter().zip(&b.eps).map(|(x, y)| zmod::add_mod(*x, *y, self.p)).collect(),
        }
    }
    fn mul(&self, a: &Dual, b: &Dual) -> Dual {
        let p = self.p;
        Dual {
            c: zmod::mul_mod(a.c, b.c, p),
            eps: a
                .eps
                .iter()
                .zip(&b.eps)
                .map(|(x, y)| zmod::add_mod(zmod::mul_mod(a.c, *y, p), zmod::mul_mod(b.c, *x, p), p))
                .collect(),
        }
    }
    fn neg(&self, a: &Dual) -> Dual {
        Dual { c: zmod::sub_mod(0, a.c, self.p), eps: a.eps.iter().map(|x| zmod::sub_mod(0, *x, self.p)).collect() }
    }
    /// Leibniz expansion; fine for n <= 7.
    fn det(&self, m: &[Vec<Dual>]) -> Dual {
        let n = m.len();
        let mut total = self.scalar(0);
        let mut perm: Vec<usize> = (0..n).collect();
        permute(&mut perm, 0, &mut |perm, sign| {
            let mut t = self.scalar(1);
            for (i, &j) in perm.iter().enumerate() {
                t = self.mul(&t, &m[i][j]);
                if t.c == 0 && t.eps.iter().all(|&x| x == 0) {
                    return;
                }
            }
            total = if sign { self.add(&total, &t) } else { self.add(&total, &self.neg(&t)) };
        });
        total
    }
}

fn permute(perm: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize], bool)) {
    fn go(perm: &mut Vec<usize>, k: usize, even: bool, visit: &mut dyn FnMut(&[usize], bool)) {
        if k == perm.len() {
            visit(perm, even);
            return;
        }
        for i in k..perm.len() {
            perm.swap(k, i);
            go(perm, k + 1, if i == k { even } else { !even }, visit);
            perm.swap(k, i);
        }
    }
    go(perm, k, true, visit)
}

fn det_fp(m: &[Vec<u64>], p: u64) -> u64 {
    let r = DualRing { p, k: 0 };
    let dm: Vec<Vec<Dual>> = m.iter().map(|row| row.iter().map(|&x| r.scalar(x)).collect()).collect();
    r.det(&dm).c
}

/// Lower triangular Toeplitz matrix with first column y.
fn toeplitz(y: &[u64], n: usize) -> Vec<Vec<u64>> {
    (0..n).map(|i| (0..n).map(|j| if j <= i { y[i - j] } else { 0 }).collect()).collect()
}

/// (1, k) cofactor (k is 1-based).
fn cofactor_1k(u: &[Vec<u64>], k: usize, p: u64) -> u64 {
    let minor: Vec<Vec<u64>> =
        u[1..].iter().map(|row| row.iter().enumerate().filter(|(j, _)| *j != k - 1).map(|(_, &x)| x).collect()).collect();
    let d = if minor.is_empty() { 1 } else { det_fp(&minor, p) };
    if (1 + k).is_multiple_of(2) {
        d
    } else {
        zmod::sub_mod(0, d, p)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DetIdentityReport {
    pub p: u64,
    pub n: usize,
    pub m1: usize,
    pub m2: usize,
    pub trials: usize,
    pub full_mismatches: usize,
    pub block_mismatches: usize,
    pub ok: bool,
}

/// Random evaluations of det(U + N) = Y_1^n + sum_k Tr_(k-1)(N) U_(1,k) with
/// square-zero entries, and of the block version with N = (N_ab) over
/// U' = diag(U_m1, U_m2). In the block version the cofactors are those of
/// U_n; they agree with the cofactors of U' wherever the latter are nonzero.
pub fn verify_det_identity(p: u64, n: usize, m1: usize, m2: usize, trials: usize, seed: u64) -> Result<DetIdentityReport> {
    if n == 0 || m1 + m2 != n || n > 7 {
        return Err(Error::InvalidParameter(format!("need 1 <= n = m1 + m2 <= 7, got n={n}, m1={m1}, m2={m2}")));
    }
    if !zmod::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let ring = DualRing { p, k: n * n };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut full_mismatches, mut block_mismatches) = (0, 0);
    for _ in 0..trials {
        let y: Vec<u64> = (0..n).map(|_| rng.gen_range(0..p)).collect();
        // N entry (i, j) is r_ij * eps_(n i + j)
        let nent: Vec<Vec<Dual>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut d = ring.scalar(0);
                        d.eps[n * i + j] = rng.gen_range(0..p);
                        d
                    })
                    .collect()
            })
            .collect();
        let u = toeplitz(&y, n);
        let cof: Vec<u64> = (1..=n).map(|k| cofactor_1k(&u, k, p)).collect();
        let y1n = ring.scalar(zmod::pow_mod(y[0], n as u64, p));
        let tr = |blocks: &[(usize, usize)], k: usize| {
            // sum of the (k-1)-th superdiagonal inside each diagonal block
            let mut t = ring.scalar(0);
            for &(lo, hi) in blocks {
                for i in lo..hi {
                    let j = i + k - 1;
                    if j < hi {
                        t = ring.add(&t, &nent[i][j]);
                    }
                }
            }
            t
        };
        let rhs = |blocks: &[(usize, usize)]| {
            let mut s = y1n.clone();
            for k in 1..=n {
                s = ring.add(&s, &ring.mul(&tr(blocks, k), &ring.scalar(cof[k - 1])));
            }
            s
        };
        let lhs_of = |uu: &[Vec<u64>]| {
            let m: Vec<Vec<Dual>> =
                (0..n).map(|i| (0..n).map(|j| ring.add(&ring.scalar(uu[i][j]), &nent[i][j])).collect()).collect();
            ring.det(&m)
        };
        if lhs_of(&u) != rhs(&[(0, n)]) {
            full_mismatches += 1;
        }
        let mut ub = vec![vec![0u64; n]; n];
        for (lo, hi) in [(0, m1), (m1, n)] {
            for i in lo..hi {
                for j in lo..=i {
                    ub[i][j] = y[i - j];
                }
            }
        }
        if lhs_of(&ub) != rhs(&[(0, m1), (m1, n)]) {
            block_mismatches += 1;
        }
    }
    Ok(DetIdentityReport {
        p,
        n,
        m1,
        m2,
        trials,
        full_mismatches,
        block_mismatches,
        ok: full_mismatches == 0 && block_mismatches == 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slopes_and_codims() {
        let twice = |g| admissible_slopes(g).unwrap().iter().map(|s| s.twice()).collect::<Vec<_>>();
        assert_eq!(twice(4), vec![0, 2, 4]);
        assert_eq!(twice(5), vec![0, 2, 4, 5]);
        assert_eq!(twice(1), vec![0, 1]);
        assert_eq!(newton_stratum_codim(5, 5).unwrap(), 3);
        assert_eq!(newton_stratum_codim(4, 4).unwrap(), 2);
        assert_eq!(newton_stratum_codim(4, 0).unwrap(), 0);
        assert!(newton_stratum_codim(5, 3).is_err());
    }

    #[test]
    fn poset_examples() {
        let ps = atype_poset(2, 2, DEFAULT_SIZE_CAP).unwrap();
        assert_eq!(ps.nodes.len(), 9);
        assert_eq!(ps.edges.len(), 12);
        let ps = atype_poset(1, 4, DEFAULT_SIZE_CAP).unwrap();
        let r = ps.nodes.iter().find(|r| r.a == [1, 0, 1, 0]).unwrap();
        assert!(r.spaced);
        assert_eq!((r.lambda, r.dim), (2, 2));
        assert_eq!(r.generic_slope_exact.unwrap().index(), (2, 1));
        let ps = atype_poset(1, 2, DEFAULT_SIZE_CAP).unwrap();
        let r = ps.nodes.iter().find(|r| r.a == [1, 1]).unwrap();
        assert!(!r.spaced && r.generic_slope_exact.is_none());
        assert_eq!(r.lambda, 1);
        assert_eq!(r.generic_slope_lower.index(), (1, 1));
        assert!(matches!(atype_poset(9, 7, DEFAULT_SIZE_CAP), Err(Error::SizeGuard { .. })));
        assert_eq!(atype_poset(1, 4, DEFAULT_SIZE_CAP).unwrap().to_dot().matches("label").count(), 16);
    }

    #[test]
    fn lambda_agrees() {
        for a in [vec![3], vec![2, 5], vec![1, 2, 3], vec![4, 1, 1, 4], vec![2, 2, 2, 2, 2], vec![0, 3, 0, 3, 1]] {
            assert_eq!(lambda_exhaustive(&a), lambda_dp(&a), "{a:?}");
        }
    }

    #[test]
    fn dimension_formulas() {
        let l = |v: Vec<[u32; 2]>| LieType::new(v);
        assert_eq!(dp_stratum_dim(&l(vec![[0, 2]; 3]), 2, 3).unwrap(), 6);
        assert_eq!(dp_stratum_dim(&l(vec![[1, 1]]), 2, 1).unwrap(), 0);
        assert_eq!(dp_stratum_dim(&l(vec![[0, 2], [1, 1]]), 2, 2).unwrap(), 2);
        assert!(dp_stratum_dim(&l(vec![[1, 2]]), 2, 1).is_err());
        let d = deformation_dims(&l(vec![[0, 3]; 2]), 3, 2).unwrap();
        assert_eq!((d.unrestricted, d.dp, d.polarized), (6, 6, 6));
        let d = deformation_dims(&l(vec![[1, 1]]), 2, 1).unwrap();
        assert_eq!((d.unrestricted, d.dp, d.polarized), (4, 4, 3));
        let d = deformation_dims(&l(vec![[0, 1]; 2]), 1, 2).unwrap();
        assert_eq!(d.polarized, 2);
    }

    #[test]
    fn degree_exponent() {
        use DegreeNormalization::*;
        let l = LieType::new(vec![[1, 2], [0, 1]]);
        assert_eq!(polarization_degree_exponent(&l, 2, 2, Fixed).unwrap(), 2);
        let l = LieType::new(vec![[1, 1], [0, 1], [0, 0]]);
        assert_eq!(polarization_degree_exponent(&l, 1, 3, Fixed).unwrap(), 4);
        let l = LieType::new(vec![[0, 1], [1, 2]]);
        assert!(polarization_degree_exponent(&l, 2, 2, Fixed).is_err());
        assert_eq!(polarization_degree_exponent(&l, 2, 2, Rotated).unwrap(), 2);
        let l = LieType::new(vec![[1, 1], [0, 2], [0, 2]]);
        assert_eq!(polarization_degree_exponent(&l, 2, 3, Fixed).unwrap(), 0);
    }

    #[test]
    fn superspecial_tables() {
        assert_eq!(superspecial_types(3, 1), vec![vec![[0, 3]], vec![[1, 2]]]);
        assert_eq!(superspecial_types(2, 1), vec![vec![[0, 2]], vec![[1, 1]]]);
        assert_eq!(superspecial_types(1, 2), vec![vec![[0, 0], [1, 1]], vec![[0, 1], [0, 1]]]);
    }

    #[test]
    fn det_identity_small() {
        for (n, m1) in [(1, 0), (2, 1), (3, 1), (3, 2), (4, 1)] {
            let r = verify_det_identity(101, n, m1, n - m1, 20, 3).unwrap();
            assert!(r.ok, "{r:?}");
        }
    }
}
