use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::slopes::tower;
use super::{Check, Tally, VerifyConfig};
use crate::arith::WittRing;
use crate::constructions::{deform_specialize, deformation_window, sample_deform, NormalForm};
use crate::invariants::{admissible_twice, newton_point, NewtonMethod};
use crate::strata::is_spaced;

fn nonzero(k: &WittRing, rng: &mut ChaCha8Rng) -> crate::arith::WittElem {
    k.from_index(rng.gen_range(1..k.residue_size()))
}

/// One nonzero slot with vanishing coefficient, full window; coordinates
/// flattened as k = e i + j. Killing t_0 .. t_(m-1) and setting t_m = 1 gives
/// Newton index m (and g/2 when no such coordinate exists).
pub fn newton_strata_t1(cfg: &VerifyConfig) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x611);
    let mut t = Tally::new();
    for e in 1..=6usize {
        for f in 1..=6usize {
            if e * f > 6 {
                continue;
            }
            let tw = tower(3, f, e, 1, 16);
            let k = tw.field();
            let g = tw.g();
            let base = NormalForm { tau: vec![0], entries: BTreeMap::new() };
            let target = vec![0; f];
            let window = deformation_window(&target, e as u32);
            for twice in admissible_twice(g) {
                let kstar = twice.div_ceil(2) as usize;
                for tail_random in [false, true] {
                    let assignment: BTreeMap<_, _> = window
                        .iter()
                        .map(|&(i, j)| {
                            let flat = e * i + j as usize;
                            let v = match flat.cmp(&kstar) {
                                std::cmp::Ordering::Less => k.zero(),
                                std::cmp::Ordering::Equal => k.one(),
                                std::cmp::Ordering::Greater if tail_random => k.from_index(rng.gen_range(0..k.residue_size())),
                                std::cmp::Ordering::Greater => k.zero(),
                            };
                            ((i, j), v)
                        })
                        .collect();
                    t.record_result(
                        deform_specialize(&tw, &base, &target, &assignment)
                            .and_then(|m| Ok((newton_point(&m, NewtonMethod::Auto)?, newton_point(&m, NewtonMethod::Fast)?))),
                        || format!("e={e} f={f} m={twice}/2 tail_random={tail_random}"),
                        |(o, fa)| o.twice() == twice && fa == o,
                    );
                }
            }
        }
    }
    t.finish("newton-strata-t1", "Newton strata cut out by t_0 = .. = t_(m-1) = 0", 40)
}

/// Ordinary iff every t_(i,0), i in tau, is nonzero.
pub fn non_ordinary_locus(cfg: &VerifyConfig) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x66);
    let mut t = Tally::new();
    for f in 1..=4usize {
        for e in 1..=2usize {
            let tw = tower(5, f, e, 1, 8);
            let k = tw.field();
            let target = vec![0; f];
            let window = deformation_window(&target, e as u32);
            for mask in 1u32..(1 << f) {
                let tau: Vec<usize> = (0..f).filter(|i| mask >> i & 1 == 1).collect();
                let base = NormalForm { tau: tau.clone(), entries: BTreeMap::new() };
                // None: all t_(i,0) nonzero; Some(i): t_(i,0) = 0
                let killed: Vec<Option<usize>> = std::iter::once(None).chain(tau.iter().map(|&i| Some(i))).collect();
                for kill in killed {
                    for _ in 0..50 {
                        let assignment: BTreeMap<_, _> = window
                            .iter()
                            .map(|&(i, j)| {
                                let v = if j == 0 && tau.contains(&i) {
                                    if kill == Some(i) {
                                        k.zero()
                                    } else {
                                        nonzero(k, &mut rng)
                                    }
                                } else {
                                    k.from_index(rng.gen_range(0..k.residue_size()))
                                };
                                ((i, j), v)
                            })
                            .collect();
                        t.record_result(
                            deform_specialize(&tw, &base, &target, &assignment)
                                .and_then(|m| newton_point(&m, NewtonMethod::Auto)),
                            || format!("f={f} e={e} tau={tau:?} killed={kill:?}"),
                            |np| (np.twice() == 0) == kill.is_none(),
                        );
                    }
                }
            }
        }
    }
    t.finish("non-ordinary-locus", "non-ordinary locus is the product of the t_(i,0)", 50)
}

/// Spaced targets, deformations of the vanishing-coefficient normal form on
/// the same support, sampled over F_(p^(4f)).
pub fn density(cfg: &VerifyConfig) -> Check {
    let mut t = Tally::new();
    let trials = 100;
    let mut worst: Option<(f64, String)> = None;
    for e in 1..=2u32 {
        for f in 1..=4usize {
            let tw = tower(5, f, e as usize, 4, 10);
            let g = tw.g();
            let n = (e as usize + 1).pow(f as u32);
            for code in 0..n {
                let mut target = vec![0u32; f];
                let mut c = code;
                for slot in target.iter_mut().rev() {
                    *slot = (c % (e as usize + 1)) as u32;
                    c /= e as usize + 1;
                }
                if !is_spaced(&target) {
                    continue;
                }
                let tau: Vec<usize> = (0..f).filter(|&i| target[i] > 0).collect();
                let base = NormalForm { tau, entries: BTreeMap::new() };
                let size: u32 = target.iter().sum();
                let want = (2 * size).min(g);
                let key = if want.is_multiple_of(2) { (want / 2).to_string() } else { format!("{want}/2") };
                let seed = cfg.seed ^ ((code as u64) << 8) ^ ((f as u64) << 4) ^ e as u64;
                t.record_result(
                    sample_deform(&tw, &base, &target, trials, seed, NewtonMethod::Linearized),
                    || format!("e={e} f={f} target={target:?}"),
                    |rep| {
                        let hit = rep.slope_histogram.get(&key).copied().unwrap_or(0);
                        let freq = hit as f64 / trials as f64;
                        if worst.as_ref().is_none_or(|w| freq < w.0) {
                            worst = Some((freq, format!("{target:?} (e={e}, f={f})")));
                        }
                        freq >= 0.99
                    },
                );
            }
        }
    }
    if let Some((freq, at)) = worst {
        t.note(format!("lowest frequency {freq:.2} at {at}"));
    }
    t.finish("density", "generic Newton point s(|a|) on spaced strata (sampled)", 30)
}
