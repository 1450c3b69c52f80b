use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Check, Tally, VerifyConfig};
use crate::arith::{CoeffTower, RamElem, RamRing, Val};
use crate::constructions::{normal_form_module, slope_family, NormalForm};
use crate::invariants::{a_type, newton_point, NewtonMethod};

pub(crate) fn tower(p: u64, f: usize, e: usize, ext: usize, n: u32) -> Arc<CoeffTower> {
    Arc::new(CoeffTower::new(p, f, e, ext, n).expect("tower parameters"))
}

/// Doubled Newton index min(g, 2v).
pub(crate) fn capped(g: u32, v: Val) -> u32 {
    match v {
        Val::Fin(v) => (2 * v).min(g),
        Val::Inf => g,
    }
}

/// Zero with probability 1/8, otherwise a random unit times pi^v, v in [lo, hi].
pub(crate) fn random_entry(r: &RamRing, rng: &mut ChaCha8Rng, lo: u32, hi: u32) -> RamElem {
    if rng.gen_ratio(1, 8) {
        r.zero()
    } else {
        let v = rng.gen_range(lo..=hi);
        r.random_with_val(rng, v)
    }
}

pub fn slope_family_agreement(_cfg: &VerifyConfig) -> Check {
    let mut t = Tally::new();
    for e in 1..=3usize {
        for f in 1..=4usize {
            let g = (e * f) as u32;
            if g > 8 {
                continue;
            }
            let tw = tower(3, f, e, 1, 16);
            for a in 0..=g / 2 {
                let ctx = || format!("e={e} f={f} a={a}");
                let m = match slope_family(&tw, a) {
                    Ok(m) => m,
                    Err(err) => {
                        t.record(false, || format!("{}: {err}", ctx()));
                        continue;
                    }
                };
                let fast = newton_point(&m, NewtonMethod::Fast);
                let oracle = newton_point(&m, NewtonMethod::Oracle);
                t.record_result(fast.and_then(|x| oracle.map(|y| (x, y))), ctx, |(x, y)| {
                    x == y && x.twice() == 2 * a
                });
            }
        }
    }
    t.finish("slope-family", "explicit family realizing every Newton point s(a)", 28)
}

pub fn t1_formula(cfg: &VerifyConfig) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x41);
    let mut t = Tally::new();
    for p in [3u64, 5] {
        for f in 1..=3usize {
            for e in 1..=3usize {
                let tw = tower(p, f, e, 1, 12);
                let r = tw.ram();
                let g = tw.g();
                for _ in 0..12 {
                    let slot = rng.gen_range(0..f);
                    let c = random_entry(r, &mut rng, 1, g + 1);
                    let expect = capped(g, r.ord_pi(&c));
                    let nf = NormalForm { tau: vec![slot], entries: BTreeMap::from([(slot, c.clone())]) };
                    let ctx = || format!("p={p} f={f} e={e} slot={slot} ord c={:?}", r.ord_pi(&c));
                    t.record_result(
                        normal_form_module(&tw, &nf).and_then(|m| newton_point(&m, NewtonMethod::Auto)),
                        ctx,
                        |np| np.twice() == expect,
                    );
                }
            }
        }
    }
    t.finish("t1-formula", "Newton index min(g/2, ord c) for one nonzero a-slot", 200)
}

pub fn t2_formula(cfg: &VerifyConfig) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x42);
    let mut t = Tally::new();
    for p in [3u64, 5] {
        for f in 2..=4usize {
            for e in 1..=2usize {
                let tw = tower(p, f, e, 1, 12);
                let r = tw.ram();
                let g = tw.g();
                for _ in 0..18 {
                    let l2 = rng.gen_range(1..=f / 2);
                    let c0 = random_entry(r, &mut rng, 1, g);
                    let c2 = random_entry(r, &mut rng, 1, g);
                    let u1 = r.frobenius(&c0, l2 as i64);
                    let x = r.add(&r.mul(&u1, &c2), &r.pi_pow((e * l2) as u32));
                    let expect = capped(g, r.ord_pi(&x));
                    let nf = NormalForm { tau: vec![0, l2], entries: BTreeMap::from([(0, c0.clone()), (l2, c2.clone())]) };
                    let ctx = || format!("p={p} f={f} e={e} l2={l2} ord u1u2+pi^(e l2)={:?}", r.ord_pi(&x));
                    t.record_result(
                        normal_form_module(&tw, &nf).and_then(|m| newton_point(&m, NewtonMethod::Auto)),
                        ctx,
                        |np| np.twice() == expect,
                    );
                }
            }
        }
    }
    t.finish("t2-formula", "Newton index min(g/2, ord(u1 u2 + pi^(e l2))) for two a-slots", 200)
}

/// Gaps l_i = n_i - n_(i-1), with l_1 wrapping around the cycle.
pub(crate) fn gaps(tau: &[usize], f: usize) -> Vec<usize> {
    let t = tau.len();
    (0..t).map(|i| if i == 0 { tau[0] + f - tau[t - 1] } else { tau[i] - tau[i - 1] }).collect()
}

pub fn degenerate_coefficients(_cfg: &VerifyConfig) -> Check {
    let mut t = Tally::new();
    for f in 1..=5usize {
        for e in 1..=2usize {
            let tw = tower(3, f, e, 1, 16);
            let g = tw.g();
            for mask in 0u32..(1 << f) {
                let tau: Vec<usize> = (0..f).filter(|i| mask >> i & 1 == 1).collect();
                let expect = if tau.len() % 2 == 1 {
                    g
                } else if tau.is_empty() {
                    0
                } else {
                    let l = gaps(&tau, f);
                    let (odd, even): (usize, usize) =
                        (l.iter().step_by(2).sum(), l.iter().skip(1).step_by(2).sum());
                    2 * (e * odd.min(even)) as u32
                };
                let nf = NormalForm { tau: tau.clone(), entries: BTreeMap::new() };
                t.record_result(
                    normal_form_module(&tw, &nf).and_then(|m| newton_point(&m, NewtonMethod::Oracle)),
                    || format!("f={f} e={e} tau={tau:?}"),
                    |np| np.twice() == expect,
                );
            }
        }
    }
    t.finish("degenerate-coefficients", "Newton point of normal forms with vanishing coefficients", 124)
}

pub fn spaced_bound(cfg: &VerifyConfig) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x48);
    let mut t = Tally::new();
    let shapes: Vec<(usize, usize)> = (1..=3).flat_map(|e| (2..=4).map(move |f| (e, f))).filter(|(e, f)| e * f <= 8).collect();
    let towers: Vec<_> = shapes.iter().map(|&(e, f)| tower(3, f, e, 1, 14)).collect();
    for k in 0..500 {
        let tw = &towers[k % towers.len()];
        let (e, f, g) = (tw.e() as u32, tw.f(), tw.g());
        let r = tw.ram();
        // random spaced support
        let mut tau = vec![];
        for i in 0..f {
            let free = tau.last().is_none_or(|&j| j + 1 != i) && !(i == f - 1 && tau.first() == Some(&0));
            if free && rng.gen_bool(0.5) {
                tau.push(i);
            }
        }
        let entries: BTreeMap<usize, RamElem> = tau.iter().map(|&i| (i, random_entry(r, &mut rng, 1, e + 1))).collect();
        let nf = NormalForm { tau: tau.clone(), entries };
        let size: u32 = nf.a_type(tw).iter().sum();
        let bound = (2 * size).min(g);
        t.record_result(
            normal_form_module(tw, &nf).and_then(|m| {
                let at = a_type(&m).rapoport_form.unwrap_or_default();
                Ok((newton_point(&m, NewtonMethod::Auto)?, at))
            }),
            || format!("e={e} f={f} tau={tau:?} |a|={size}"),
            |(np, at)| np.twice() >= bound && at == nf.a_type(tw),
        );
    }
    t.finish("spaced-bound", "Newton index at least min(g/2, |a|) for spaced a-types", 500)
}
