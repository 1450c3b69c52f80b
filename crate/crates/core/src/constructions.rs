//! Builders for the explicit families: the slope-realizing family, normal
//! forms from an a-index, superspecial modules, specializations of the
//! universal deformation, and the non-Rapoport example with f = 1, e = 2.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{CoeffTower, RamElem, Val, WittElem};
use crate::dieudonne::{build_module, solve_pairing, DModule, Mat2, Mode};
use crate::error::{Error, Result};
use crate::invariants::{newton_point, NewtonMethod};

fn finish(tower: &Arc<CoeffTower>, a: Vec<Mat2>) -> Result<DModule> {
    let delta = solve_pairing(tower, &a);
    build_module(tower.clone(), a, delta, Mode::Separable)
}

/// Module with Newton point s(a). Writing a = d e + r with 0 <= r < e, needs
/// f >= 2d + 1, or f = 2d with r = 0 (then every slot is [[0,1],[-p,0]]).
pub fn slope_family(tower: &Arc<CoeffTower>, a: u32) -> Result<DModule> {
    let (e, f, g) = (tower.e() as u32, tower.f() as u32, tower.g());
    if 2 * a > g {
        return Err(Error::InvalidParameter(format!("a = {a} exceeds g/2 = {g}/2")));
    }
    let (d, rr) = (a / e, a % e);
    let supersingular_edge = f == 2 * d && rr == 0;
    if f < 2 * d + 1 && !supersingular_edge {
        return Err(Error::InvalidParameter(format!(
            "a = {a} = {d}*{e} + {rr} needs f >= {} (f = {f})",
            2 * d + 1
        )));
    }
    let r = tower.ram();
    let mp = r.from_int(-(tower.p() as i64));
    let swap = Mat2::new(r.zero(), r.one(), mp.clone(), r.zero());
    let mut a_mats = Vec::with_capacity(f as usize);
    for i in 0..f {
        let m = if supersingular_edge || (1..=2 * d).contains(&i) {
            swap.clone()
        } else if i == 0 {
            Mat2::new(r.pi_pow(rr), r.one(), mp.clone(), r.zero())
        } else {
            Mat2::new(r.one(), r.one(), mp.clone(), r.zero())
        };
        a_mats.push(m);
    }
    finish(tower, a_mats)
}

/// Rapoport normal form: slot i in `tau` has matrix [[entry_i, 1], [pi^e, 0]]
/// with `entry_i` of positive valuation; other slots diag(1, pi^e).
#[derive(Clone, Debug)]
pub struct NormalForm {
    pub tau: Vec<usize>,
    /// entry_i for i in tau; absent means 0
    pub entries: BTreeMap<usize, RamElem>,
}

impl NormalForm {
    /// a^i = min(e, ord entry_i) on tau, 0 elsewhere.
    pub fn a_type(&self, tower: &CoeffTower) -> Vec<u32> {
        let e = tower.e() as u32;
        let r = tower.ram();
        let mut a = vec![0; tower.f()];
        for &i in &self.tau {
            a[i] = self.entries.get(&i).map_or(e, |x| r.ord_pi(x).cap(e));
        }
        a
    }

    fn entry(&self, tower: &CoeffTower, i: usize) -> RamElem {
        self.entries.get(&i).cloned().unwrap_or_else(|| tower.ram().zero())
    }

    fn validate(&self, tower: &CoeffTower) -> Result<()> {
        let f = tower.f();
        if self.tau.iter().any(|&i| i >= f) || self.tau.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter("tau must be a strictly increasing subset of 0..f".into()));
        }
        for (&i, x) in &self.entries {
            if !self.tau.contains(&i) {
                return Err(Error::InvalidParameter(format!("entry given for slot {i} outside tau")));
            }
            if tower.ram().ord_pi(x) < Val::Fin(1) {
                return Err(Error::InvalidParameter(format!("entry at slot {i} is a unit")));
            }
        }
        Ok(())
    }
}

/// Normal form with entry_i = c_i * pi.
pub fn normal_form(tower: &Arc<CoeffTower>, tau: &[usize], c: &BTreeMap<usize, RamElem>) -> Result<DModule> {
    let r = tower.ram();
    let pi = r.pi_pow(1);
    let nf = NormalForm {
        tau: tau.to_vec(),
        entries: c.iter().map(|(&i, x)| (i, r.mul(x, &pi))).collect(),
    };
    normal_form_module(tower, &nf)
}

pub fn normal_form_module(tower: &Arc<CoeffTower>, nf: &NormalForm) -> Result<DModule> {
    nf.validate(tower)?;
    let r = tower.ram();
    let pie = r.pi_pow(tower.e() as u32);
    let a = (0..tower.f())
        .map(|i| {
            if nf.tau.contains(&i) {
                Mat2::new(nf.entry(tower, i), r.one(), pie.clone(), r.zero())
            } else {
                Mat2::new(r.one(), r.zero(), r.zero(), pie.clone())
            }
        })
        .collect();
    finish(tower, a)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuperspecialVariant {
    /// F X_i = -Y_(i+1), F Y_i = p X_(i+1)
    Rapoport,
    /// exponents (e1, e2); e1 + e2 = e when f is odd
    General,
}

pub fn superspecial(tower: &Arc<CoeffTower>, e1: u32, e2: u32, variant: SuperspecialVariant) -> Result<DModule> {
    let r = tower.ram();
    let (e, f) = (tower.e() as u32, tower.f());
    let p = r.from_int(tower.p() as i64);
    let a = match variant {
        SuperspecialVariant::Rapoport => {
            vec![Mat2::new(r.zero(), r.from_int(-1), p, r.zero()); f]
        }
        SuperspecialVariant::General => {
            if e1 > e || e2 > e {
                return Err(Error::InvalidParameter(format!("exponents must lie in [0, {e}]")));
            }
            if f % 2 == 1 && e1 + e2 != e {
                return Err(Error::InvalidParameter("odd f needs e1 + e2 = e".into()));
            }
            // v = p / pi^e
            let v = r.div_exact(&p, &r.pi_pow(e)).unwrap();
            let block = |x: u32, y: u32| Mat2::new(r.zero(), r.neg(&r.pi_pow(x)), r.mul(&v, &r.pi_pow(y)), r.zero());
            (0..f)
                .map(|i| {
                    // A[i] describes F on slot i - 1
                    if f % 2 == 1 || (i + f - 1) % f % 2 == 1 {
                        block(e1, e2)
                    } else {
                        block(e - e2, e - e1)
                    }
                })
                .collect()
        }
    };
    finish(tower, a)
}

/// F X = pi Y, F Y = pi X with f = 1, e = 2. Any odd p is accepted; the
/// classical setting has p > 3.
pub fn non_rapoport_example(tower: &Arc<CoeffTower>) -> Result<DModule> {
    if tower.f() != 1 || tower.e() != 2 {
        return Err(Error::InvalidParameter("needs f = 1 and e = 2".into()));
    }
    if tower.p() == 2 {
        return Err(Error::InvalidParameter("needs odd p".into()));
    }
    let r = tower.ram();
    let pi = r.pi_pow(1);
    finish(tower, vec![Mat2::new(r.zero(), pi.clone(), pi, r.zero())])
}

/// Keys (i, j) with target^i <= j < e.
pub fn deformation_window(target: &[u32], e: u32) -> Vec<(usize, u32)> {
    target.iter().enumerate().flat_map(|(i, &a)| (a..e).map(move |j| (i, j))).collect()
}

/// Specialization of the universal deformation of `base` over the stratum of
/// a-types >= `target`, with T_(i,j) the Teichmuller lift of assignment (i, j).
pub fn deform_specialize(
    tower: &Arc<CoeffTower>,
    base: &NormalForm,
    target: &[u32],
    assignment: &BTreeMap<(usize, u32), WittElem>,
) -> Result<DModule> {
    base.validate(tower)?;
    let (e, f) = (tower.e() as u32, tower.f());
    if target.len() != f {
        return Err(Error::InvalidParameter(format!("target needs {f} entries")));
    }
    let base_a = base.a_type(tower);
    for i in 0..f {
        if target[i] > base_a[i] {
            return Err(Error::InvalidParameter(format!(
                "target a^{i} = {} exceeds base a^{i} = {}",
                target[i], base_a[i]
            )));
        }
    }
    let window = deformation_window(target, e);
    if assignment.len() != window.len() || window.iter().any(|k| !assignment.contains_key(k)) {
        let extra: Vec<_> = assignment.keys().filter(|k| !window.contains(k)).collect();
        return Err(Error::KeyMismatch(format!("expected {} keys {window:?}, extra {extra:?}", window.len())));
    }
    let r = tower.ram();
    let pie = r.pi_pow(e);
    let a = (0..f)
        .map(|i| {
            let mut t = r.zero();
            for j in target[i]..e {
                let lift = r.teichmuller(&assignment[&(i, j)]);
                t = r.add(&t, &r.mul(&lift, &r.pi_pow(j)));
            }
            if base.tau.contains(&i) {
                Mat2::new(r.add(&base.entry(tower, i), &t), r.one(), pie.clone(), r.zero())
            } else {
                Mat2::new(r.one(), r.zero(), r.mul(&t, &pie), pie.clone())
            }
        })
        .collect();
    finish(tower, a)
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleReport {
    pub trials: usize,
    /// Newton index (as "i" or "g/2" fraction) -> count
    pub slope_histogram: BTreeMap<String, usize>,
    pub failures: usize,
}

/// Random specializations with uniform residue-field values on the window.
pub fn sample_deform(
    tower: &Arc<CoeffTower>,
    base: &NormalForm,
    target: &[u32],
    trials: usize,
    seed: u64,
    method: NewtonMethod,
) -> Result<SampleReport> {
    let window = deformation_window(target, tower.e() as u32);
    let k = tower.field();
    let q = k.residue_size();
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let seeds: Vec<u64> = (0..trials).map(|_| master.gen()).collect();
    let outcomes: Vec<Result<String>> = seeds
        .par_iter()
        .map(|&s| {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let assignment = window.iter().map(|&key| (key, k.from_index(rng.gen_range(0..q)))).collect();
            let m = deform_specialize(tower, base, target, &assignment)?;
            let np = newton_point(&m, method)?;
            let (n, d) = np.index();
            Ok(if d == 1 { n.to_string() } else { format!("{n}/{d}") })
        })
        .collect();
    let mut slope_histogram = BTreeMap::new();
    let mut failures = 0;
    for o in outcomes {
        match o {
            Ok(key) => *slope_histogram.entry(key).or_insert(0) += 1,
            Err(Error::PrecisionExhausted(_)) => failures += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(SampleReport { trials, slope_histogram, failures })
}

#[cfg(test)]
mod tests;
