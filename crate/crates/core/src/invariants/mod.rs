//! Lie type, a-type and Newton point of a module, with the predicates and
//! closed-form bounds built on them.

mod newton;
pub mod snf;

use serde::Serialize;

use crate::arith::RamElem;
use crate::dieudonne::{reduce_mod_p, DModule};
use crate::error::{Error, Result};
pub use newton::{admissible_twice, newton_point, NewtonMethod, NewtonPoint};

/// Per-slot sorted pairs {e^i_1 <= e^i_2}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LieType {
    pub slots: Vec<[u32; 2]>,
}

impl LieType {
    pub fn new(mut slots: Vec<[u32; 2]>) -> Self {
        slots.iter_mut().for_each(|s| s.sort_unstable());
        LieType { slots }
    }

    pub fn total(&self) -> u32 {
        self.slots.iter().map(|s| s[0] + s[1]).sum()
    }

    pub fn is_rapoport(&self, e: u32) -> bool {
        self.slots.iter().all(|s| *s == [0, e])
    }
}

/// Per-slot sorted pairs {a^i_1 <= a^i_2}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct AType {
    pub slots: Vec<[u32; 2]>,
    /// a^i = a^i_2 when every a^i_1 vanishes
    pub rapoport_form: Option<Vec<u32>>,
}

impl AType {
    pub fn new(mut slots: Vec<[u32; 2]>) -> Self {
        slots.iter_mut().for_each(|s| s.sort_unstable());
        let rapoport_form = slots.iter().all(|s| s[0] == 0).then(|| slots.iter().map(|s| s[1]).collect());
        AType { slots, rapoport_form }
    }

    /// |a| = sum of all exponents.
    pub fn a_number(&self) -> u32 {
        self.slots.iter().map(|s| s[0] + s[1]).sum()
    }
}

fn rows_of(m: &crate::dieudonne::Mat2) -> Vec<Vec<RamElem>> {
    vec![vec![m.get(0, 0).clone(), m.get(0, 1).clone()], vec![m.get(1, 0).clone(), m.get(1, 1).clone()]]
}

/// Elementary divisors of M^i / V M^(i+1), per slot.
pub fn lie_type(m: &DModule) -> LieType {
    let k = m.tower().res();
    let red = reduce_mod_p(m);
    let f = m.f();
    let slots = (0..f)
        .map(|i| {
            let d = snf::cokernel_exponents(k, rows_of(&red[(i + 1) % f].v), 2);
            [d[0], d[1]]
        })
        .collect();
    LieType::new(slots)
}

/// Elementary divisors of M^i / (F M^(i-1) + V M^(i+1)), per slot.
pub fn a_type(m: &DModule) -> AType {
    let k = m.tower().res();
    let red = reduce_mod_p(m);
    let f = m.f();
    let slots = (0..f)
        .map(|i| {
            let mut rows = rows_of(&red[i].f);
            rows.extend(rows_of(&red[(i + 1) % f].v));
            let d = snf::cokernel_exponents(k, rows, 2);
            [d[0], d[1]]
        })
        .collect();
    AType::new(slots)
}

/// dim_k M / ((F, V) M + pi M), by a rank computation over k.
pub fn reduced_a_number(m: &DModule) -> u32 {
    let k = m.tower().field();
    let red = reduce_mod_p(m);
    let f = m.f();
    (0..f)
        .map(|i| {
            let mut rows: Vec<[crate::arith::WittElem; 2]> = Vec::new();
            for mm in [&red[i].f, &red[(i + 1) % f].v] {
                for r in 0..2 {
                    rows.push([mm.get(r, 0).coeffs()[0].clone(), mm.get(r, 1).coeffs()[0].clone()]);
                }
            }
            2 - field_rank(k, rows)
        })
        .sum()
}

fn field_rank(k: &crate::arith::WittRing, mut rows: Vec<[crate::arith::WittElem; 2]>) -> u32 {
    let mut rank = 0;
    for col in 0..2 {
        let Some(pos) = (rank..rows.len()).find(|&i| !k.is_zero(&rows[i][col])) else { continue };
        rows.swap(rank, pos);
        let inv = k.inv(&rows[rank][col]).unwrap();
        for i in 0..rows.len() {
            if i != rank && !k.is_zero(&rows[i][col]) {
                let c = k.mul(&rows[i][col], &inv);
                for j in 0..2 {
                    let t = k.mul(&c, &rows[rank][j]);
                    rows[i][j] = k.sub(&rows[i][j], &t);
                }
            }
        }
        rank += 1;
    }
    rank as u32
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AIndex {
    pub tau: Vec<usize>,
    pub t: usize,
    pub reduced_a: u32,
}

/// a-index of a module on the Rapoport locus.
pub fn a_index(m: &DModule) -> Result<AIndex> {
    if !lie_type(m).is_rapoport(m.e() as u32) {
        return Err(Error::NotRapoport);
    }
    let a = a_type(m);
    let form = a.rapoport_form.ok_or_else(|| Error::Inconsistent("Rapoport module without Rapoport-form a-type".into()))?;
    let tau: Vec<usize> = form.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, _)| i).collect();
    Ok(AIndex { t: tau.len(), tau, reduced_a: reduced_a_number(m) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Flags {
    pub rapoport: bool,
    pub dp: bool,
    pub ordinary: bool,
    pub supersingular: bool,
    pub superspecial: bool,
}

/// Classification predicates. The Newton point comes from
/// [`NewtonMethod::Auto`].
pub fn classify(m: &DModule) -> Result<Flags> {
    let lie = lie_type(m);
    let e = m.e() as u32;
    let sums: Vec<u32> = lie.slots.iter().map(|s| s[0] + s[1]).collect();
    let np = newton_point(m, NewtonMethod::Auto)?;
    Ok(Flags {
        rapoport: lie.is_rapoport(e),
        dp: sums.windows(2).all(|w| w[0] == w[1]),
        ordinary: np.twice() == 0,
        supersingular: np.twice() == np.g(),
        superspecial: a_type(m).a_number() == m.g(),
    })
}

/// Forced a^i_1 and the interval [lo, hi] for a^i_2 at one slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SlotBound {
    pub a1: u32,
    pub lo: u32,
    pub hi: u32,
}

/// a-type constraints from the Lie type, using slots i and i-1.
pub fn a_type_bounds(l: &LieType, e: u32) -> Vec<SlotBound> {
    let f = l.slots.len();
    (0..f)
        .map(|i| {
            let [c1, c2] = l.slots[i];
            let [p1, p2] = l.slots[(i + f - 1) % f];
            if c1 <= e - p2 {
                SlotBound { a1: c1, lo: c2.min(e - p2), hi: c2.min(e - p1) }
            } else {
                SlotBound { a1: e - p2, lo: (e - p1).min(c1), hi: (e - p1).min(c2) }
            }
        })
        .collect()
}

/// Lie type and a-type of the dual predicted from those of the module.
pub fn dual_invariants(l: &LieType, a: &AType, e: u32) -> Result<(LieType, AType)> {
    let f = l.slots.len();
    if a.slots.len() != f {
        return Err(Error::Inconsistent("slot counts differ".into()));
    }
    let lie = LieType::new(l.slots.iter().map(|[x, y]| [e - x, e - y]).collect());
    let mut out = Vec::with_capacity(f);
    for i in 0..f {
        let [c1, c2] = l.slots[i];
        let [p1, p2] = l.slots[(i + f - 1) % f];
        let b1 = (e - c1).min(e - c2).min(p1).min(p2);
        let sum = (a.slots[i][0] + a.slots[i][1] + p1 + p2) as i64 - (c1 + c2) as i64;
        let b2 = sum - b1 as i64;
        if b2 < b1 as i64 || b2 > e as i64 {
            return Err(Error::Inconsistent(format!("slot {i}: dual exponent {b2} outside [{b1}, {e}]")));
        }
        out.push([b1, b2 as u32]);
    }
    Ok((lie, AType::new(out)))
}

/// The JSON invariant report.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub lie_type: LieType,
    pub a_type: AType,
    pub a_number: u32,
    pub a_index: Option<AIndex>,
    pub reduced_a_number: u32,
    pub newton: NewtonPoint,
    pub flags: Flags,
}

pub fn report(m: &DModule, method: NewtonMethod) -> Result<Report> {
    let a = a_type(m);
    Ok(Report {
        lie_type: lie_type(m),
        a_number: a.a_number(),
        a_type: a,
        a_index: a_index(m).ok(),
        reduced_a_number: reduced_a_number(m),
        newton: newton_point(m, method)?,
        flags: classify(m)?,
    })
}

#[cfg(test)]
mod tests;
