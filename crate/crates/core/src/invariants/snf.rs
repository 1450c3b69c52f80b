//! Smith normal form over k[pi]/(pi^e).

use crate::arith::{RamElem, RamRing};

/// Exponents of the cokernel of the row span of `m` inside (k[pi]/pi^e)^cols,
/// sorted ascending; zero divisors count as e.
///
/// Pivot: the entry of least valuation, ties broken by (row, column).
pub fn cokernel_exponents(r: &RamRing, mut m: Vec<Vec<RamElem>>, cols: usize) -> Vec<u32> {
    let e = r.e() as u32;
    let rows = m.len();
    let mut divs = Vec::with_capacity(cols);
    for step in 0..rows.min(cols) {
        let mut best: Option<(crate::arith::Val, usize, usize)> = None;
        for (i, row) in m.iter().enumerate().skip(step) {
            for (j, x) in row.iter().enumerate().skip(step) {
                let v = r.ord_pi(x);
                if best.is_none_or(|(bv, _, _)| v < bv) {
                    best = Some((v, i, j));
                }
            }
        }
        let (v, pi, pj) = best.unwrap();
        let Some(v) = v.finite() else { break };
        m.swap(step, pi);
        for row in m.iter_mut() {
            row.swap(step, pj);
        }
        let piv = m[step][step].clone();
        for i in 0..rows {
            if i == step || r.is_zero(&m[i][step]) {
                continue;
            }
            let k = r.div_exact(&m[i][step], &piv).expect("pivot has least valuation");
            for j in step..cols {
                let t = r.mul(&k, &m[step][j]);
                m[i][j] = r.sub(&m[i][j], &t);
            }
        }
        for j in step + 1..cols {
            if r.is_zero(&m[step][j]) {
                continue;
            }
            let k = r.div_exact(&m[step][j], &piv).expect("pivot has least valuation");
            for row in m.iter_mut() {
                let t = r.mul(&k, &row[step]);
                row[j] = r.sub(&row[j], &t);
            }
        }
        divs.push(v.min(e));
    }
    divs.resize(cols, e);
    divs.sort_unstable();
    divs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::CoeffTower;

    #[test]
    fn simple_spans() {
        let t = CoeffTower::new(3, 1, 3, 1, 3).unwrap();
        let k = t.res();
        let rows = vec![vec![k.pi_pow(1), k.zero()], vec![k.zero(), k.pi_pow(2)]];
        assert_eq!(cokernel_exponents(k, rows, 2), vec![1, 2]);
        let rows = vec![vec![k.pi_pow(2), k.pi_pow(1)], vec![k.pi_pow(1), k.zero()]];
        assert_eq!(cokernel_exponents(k, rows, 2), vec![1, 1]);
        assert_eq!(cokernel_exponents(k, vec![vec![k.zero(), k.zero()]], 2), vec![3, 3]);
        let rows = vec![vec![k.one(), k.one()], vec![k.one(), k.one()]];
        assert_eq!(cokernel_exponents(k, rows, 2), vec![0, 3]);
    }
}
