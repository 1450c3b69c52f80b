use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::slopes::{random_entry, tower};
use super::{Check, Tally, VerifyConfig};
use crate::constructions::{
    deform_specialize, deformation_window, non_rapoport_example, normal_form_module, slope_family, superspecial, NormalForm,
    SuperspecialVariant,
};
use crate::dieudonne::{dual_module, DModule};
use crate::error::Error;
use crate::invariants::{a_index, a_type, classify, dual_invariants, lie_type, newton_point, Flags, LieType, NewtonMethod};
use crate::strata::{
    admissible_slopes, atype_poset, deformation_dims, dp_stratum_dim, newton_stratum_codim, polarization_degree_exponent,
    superspecial_types, verify_det_identity, DegreeNormalization, DEFAULT_SIZE_CAP,
};

pub fn non_rapoport_check(_cfg: &VerifyConfig) -> Check {
    let mut t = Tally::new();
    let expect = Flags { rapoport: false, dp: true, ordinary: false, supersingular: true, superspecial: true };
    for (p, ext) in [(5u64, 1usize), (5, 2), (7, 2), (11, 1)] {
        let tw = tower(p, 1, 2, ext, 6);
        let ctx = || format!("p={p} ext={ext}");
        let m = match non_rapoport_example(&tw) {
            Ok(m) => m,
            Err(e) => {
                t.record(false, || format!("{}: {e}", ctx()));
                continue;
            }
        };
        t.record_result(classify(&m), ctx, |fl| fl == expect);
        t.record(lie_type(&m).slots == [[1, 1]], ctx);
        t.record(a_type(&m).slots == [[1, 1]] && a_type(&m).a_number() == 2, ctx);
        t.record(a_index(&m) == Err(Error::NotRapoport), ctx);
        t.record(m.delta().is_some() == (ext % 2 == 0), ctx);
        t.record_result(newton_point(&m, NewtonMethod::Oracle), ctx, |np| np.index() == (1, 1));
    }
    t.finish("non-rapoport-example", "invariants of the f = 1, e = 2 non-Rapoport module", 24)
}

pub fn det_identity(cfg: &VerifyConfig) -> Check {
    let mut t = Tally::new();
    for n in 1..=6usize {
        for m1 in 0..=n {
            t.record_result(
                verify_det_identity(101, n, m1, n - m1, 100, cfg.seed ^ (n * 8 + m1) as u64),
                || format!("n={n} m1={m1}"),
                |r| r.ok,
            );
        }
    }
    t.finish("det-identity", "determinant of a Toeplitz matrix plus square-zero perturbation", 27)
}

fn all_lie_types(e: u32, f: usize) -> Vec<LieType> {
    let pairs: Vec<[u32; 2]> = (0..=e).flat_map(|x| (x..=e).map(move |y| [x, y])).collect();
    let mut out = vec![vec![]];
    for _ in 0..f {
        out = out.into_iter().flat_map(|v: Vec<[u32; 2]>| pairs.iter().map(move |p| [v.clone(), vec![*p]].concat())).collect();
    }
    out.into_iter().map(LieType::new).collect()
}

pub fn formula_suite(cfg: &VerifyConfig) -> Check {
    let mut t = Tally::new();
    let l = |v: Vec<[u32; 2]>| LieType::new(v);

    // stratum dimensions and lambda over the poset, cross-checked on modules
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x54);
    for (e, f) in [(1u32, 1u32), (1, 4), (2, 2), (2, 3), (3, 2), (1, 6)] {
        let ps = match atype_poset(e, f, DEFAULT_SIZE_CAP) {
            Ok(ps) => ps,
            Err(err) => {
                t.record(false, || format!("poset ({e},{f}): {err}"));
                continue;
            }
        };
        let g = e * f;
        t.record(ps.nodes.len() == (e as usize + 1).pow(f), || format!("poset ({e},{f}) size"));
        t.record(ps.nodes[0].dim == g && ps.nodes.last().unwrap().dim == 0, || format!("poset ({e},{f}) ends"));
        for n in &ps.nodes {
            let size: u32 = n.a.iter().sum();
            t.record(n.dim == g - size, || format!("dim at {:?}", n.a));
            t.record((n.lambda == size) == n.spaced && n.lambda <= size, || format!("lambda at {:?}", n.a));
        }
        for &(u, v) in &ps.edges {
            let (a, b) = (&ps.nodes[u], &ps.nodes[v]);
            let diff: u32 = a.a.iter().zip(&b.a).map(|(x, y)| y - x).sum();
            t.record(diff == 1 && a.dim == b.dim + 1 && a.lambda <= b.lambda, || format!("edge {:?} -> {:?}", a.a, b.a));
        }
        let tw = tower(3, f as usize, e as usize, 1, 10);
        let r = tw.ram();
        for _ in 0..4 {
            let node = &ps.nodes[rng.gen_range(0..ps.nodes.len())];
            let tau: Vec<usize> = (0..f as usize).filter(|&i| node.a[i] > 0).collect();
            let entries = tau.iter().map(|&i| (i, r.random_with_val(&mut rng, node.a[i]))).collect();
            let nf = NormalForm { tau, entries };
            t.record_result(normal_form_module(&tw, &nf), || format!("module for {:?}", node.a), |m| {
                let at = a_type(&m);
                at.rapoport_form.as_deref() == Some(&node.a[..]) && g - at.a_number() == node.dim
            });
        }
    }

    // DP stratum dimension
    for (lt, e, f, want) in [
        (l(vec![[0, 2]; 3]), 2, 3, 6),
        (l(vec![[1, 1]]), 2, 1, 0),
        (l(vec![[0, 2], [1, 1]]), 2, 2, 2),
        (l(vec![[1, 2]; 2]), 3, 2, 2),
    ] {
        t.record_result(dp_stratum_dim(&lt, e, f), || format!("dp dim {lt:?}"), |d| d == want);
    }

    // deformation dimensions
    for (lt, e, f, want) in [
        (l(vec![[0, 3]; 2]), 3, 2, (6, 6, 6)),
        (l(vec![[1, 1]]), 2, 1, (4, 4, 3)),
        (l(vec![[0, 1]; 2]), 1, 2, (2, 2, 2)),
        (l(vec![[0, 2], [1, 1]]), 2, 2, (6, 6, 5)),
    ] {
        t.record_result(deformation_dims(&lt, e, f), || format!("deformation dims {lt:?}"), |d| {
            (d.unrestricted, d.dp, d.polarized) == want
        });
    }
    for (e, f) in [(1u32, 3usize), (2, 2), (3, 2), (2, 3)] {
        for lt in all_lie_types(e, f) {
            let g = e * f as u32;
            let dp = lt.slots.iter().all(|s| s[0] + s[1] == e);
            if dp {
                t.record_result(deformation_dims(&lt, e, f as u32), || format!("dp deformation {lt:?}"), |d| {
                    d.dp_matches_unrestricted && (d.polarized == g) == lt.is_rapoport(e)
                });
            }
            if lt.total() == g {
                let fixed = polarization_degree_exponent(&lt, e, f as u32, DegreeNormalization::Fixed);
                let rot = polarization_degree_exponent(&lt, e, f as u32, DegreeNormalization::Rotated);
                let mut turned = lt.slots.clone();
                turned.rotate_left(1);
                let rot2 = polarization_degree_exponent(&LieType::new(turned), e, f as u32, DegreeNormalization::Rotated);
                t.record(
                    matches!((&fixed, &rot, &rot2), (_, Ok(x), Ok(y)) if x == y && *x >= 0 && fixed.as_ref().map_or(true, |z| z == x))
                        && (!dp || rot == Ok(0)),
                    || format!("degree exponent {lt:?}"),
                );
            }
        }
    }

    // polarization degree exponent
    for (lt, e, f, want) in [
        (l(vec![[1, 2], [0, 1]]), 2, 2, 2i64),
        (l(vec![[1, 1], [0, 1], [0, 0]]), 1, 3, 4),
        (l(vec![[0, 2], [1, 1], [0, 2]]), 2, 3, 0),
    ] {
        t.record_result(
            polarization_degree_exponent(&lt, e, f, DegreeNormalization::Fixed),
            || format!("degree exponent {lt:?}"),
            |d| d == want,
        );
    }

    // Newton stratum codimensions
    for g in 1..=9u32 {
        for s in admissible_slopes(g).unwrap_or_default() {
            let (num, den) = s.index();
            t.record_result(newton_stratum_codim(g, s.twice()), || format!("codim g={g}"), |c| c == num.div_ceil(den));
        }
    }
    t.record(newton_stratum_codim(5, 5) == Ok(3) && newton_stratum_codim(4, 4) == Ok(2), || "codim examples".into());

    // superspecial tables, realized by modules
    t.record(superspecial_types(3, 1) == vec![vec![[0, 3]], vec![[1, 2]]], || "table e=3 f=1".into());
    t.record(superspecial_types(2, 1) == vec![vec![[0, 2]], vec![[1, 1]]], || "table e=2 f=1".into());
    t.record(superspecial_types(1, 2).len() == 2, || "table e=1 f=2".into());
    for e in 1..=3usize {
        for f in 1..=4usize {
            let tw = tower(5, f, e, 1, 8);
            for pattern in superspecial_types(e as u32, f as u32) {
                let [x, y] = pattern[0];
                t.record_result(
                    superspecial(&tw, x, y, SuperspecialVariant::General),
                    || format!("superspecial e={e} f={f} {pattern:?}"),
                    |m| {
                        let (lt, at) = (lie_type(&m), a_type(&m));
                        lt.slots == pattern && at.slots == pattern && at.a_number() == tw.g()
                    },
                );
            }
        }
    }

    // duality formulas against the dual module
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xd0a1);
    let mut built = 0;
    let mut k = 0usize;
    while built < 120 && k < 1000 {
        k += 1;
        let m = match random_paired_module(&mut rng, k) {
            Some(m) => m,
            None => continue,
        };
        built += 1;
        let (lt, at) = (lie_type(&m), a_type(&m));
        let e = m.e() as u32;
        t.record_result(dual_module(&m), || format!("dual of {lt:?} / {:?}", at.slots), |d| {
            match dual_invariants(&lt, &at, e) {
                Ok((dl, da)) => lie_type(&d) == dl && a_type(&d).slots == da.slots,
                Err(_) => false,
            }
        });
    }
    t.note(format!("{built} random modules dualized"));
    t.finish("formulas", "dimension, degree, codimension, superspecial and duality formulas", 100)
}

/// A random module with a pairing from one of the families.
fn random_paired_module(rng: &mut ChaCha8Rng, k: usize) -> Option<DModule> {
    let e = rng.gen_range(1..=3usize);
    let f = rng.gen_range(1..=3usize);
    let tw = tower(5, f, e, 2, 10);
    let r = tw.ram();
    let m = match k % 4 {
        0 => {
            let x = rng.gen_range(0..=e as u32);
            let y = if f % 2 == 1 { e as u32 - x } else { rng.gen_range(0..=e as u32) };
            superspecial(&tw, x, y, SuperspecialVariant::General)
        }
        1 => slope_family(&tw, rng.gen_range(0..=tw.g() / 2)),
        2 if f == 1 && e == 2 => non_rapoport_example(&tw),
        _ => {
            let tau: Vec<usize> = (0..f).filter(|_| rng.gen_bool(0.6)).collect();
            let entries: BTreeMap<_, _> = tau.iter().map(|&i| (i, random_entry(r, rng, 1, e as u32 + 1))).collect();
            let base = NormalForm { tau, entries };
            let base_a = base.a_type(&tw);
            let target: Vec<u32> = base_a.iter().map(|&a| rng.gen_range(0..=a)).collect();
            let kf = tw.field();
            let assignment = deformation_window(&target, e as u32)
                .into_iter()
                .map(|key| (key, kf.from_index(rng.gen_range(0..kf.residue_size()))))
                .collect();
            deform_specialize(&tw, &base, &target, &assignment)
        }
    };
    m.ok().filter(|m| m.delta().is_some())
}
