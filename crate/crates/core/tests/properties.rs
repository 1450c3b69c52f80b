use std::collections::BTreeMap;
use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dieudonne::arith::{CoeffTower, Val, WittRing};
use dieudonne::constructions::{deform_specialize, deformation_window, superspecial, NormalForm, SuperspecialVariant};
use dieudonne::dieudonne::{build_module, dual_module, mat, DModule, Mat2, Mode};
use dieudonne::invariants::{a_type, a_type_bounds, admissible_twice, classify, dual_invariants, lie_type, newton_point, LieType, NewtonMethod};
use dieudonne::strata::{is_spaced, lambda_dp, lambda_exhaustive, polarization_degree_exponent, DegreeNormalization};

fn tower(p: u64, f: usize, e: usize, ext: usize, n: u32) -> Arc<CoeffTower> {
    Arc::new(CoeffTower::new(p, f, e, ext, n).unwrap())
}

/// U diag(pi^x, pi^y) W with U, W invertible, per-slot exponents x, y <= e
/// summing to e f over all slots.
fn random_module(tw: &Arc<CoeffTower>, rng: &mut ChaCha8Rng) -> DModule {
    let r = tw.ram();
    let (e, f) = (tw.e() as u32, tw.f());
    let mut exps = vec![[0u32; 2]; f];
    let mut left = e * f as u32;
    while left > 0 {
        let (i, j) = (rng.gen_range(0..f), rng.gen_range(0..2));
        if exps[i][j] < e {
            exps[i][j] += 1;
            left -= 1;
        }
    }
    let mut a = Vec::with_capacity(f);
    for &[x, y] in &exps {
        let (b, c) = (rng.gen_range(0..3), rng.gen_range(0..3));
        let u = Mat2::new(r.random_with_val(rng, 0), r.random_with_val(rng, b), r.zero(), r.one());
        let w = Mat2::new(r.one(), r.zero(), r.random_with_val(rng, c), r.one());
        let d = Mat2::new(r.pi_pow(x), r.zero(), r.zero(), r.pi_pow(y));
        a.push(mat::mul(r, &mat::mul(r, &u, &d), &w));
    }
    build_module(tw.clone(), a, None, Mode::Separable).unwrap()
}

fn random_deformation(tw: &Arc<CoeffTower>, rng: &mut ChaCha8Rng) -> DModule {
    let r = tw.ram();
    let (e, f) = (tw.e(), tw.f());
    let tau: Vec<usize> = (0..f).filter(|_| rng.gen_bool(0.6)).collect();
    let mut entries = BTreeMap::new();
    for &i in &tau {
        let v = rng.gen_range(1..=e as u32 + 1);
        entries.insert(i, r.random_with_val(rng, v));
    }
    let base = NormalForm { tau, entries };
    let target: Vec<u32> = base.a_type(tw).iter().map(|&a| rng.gen_range(0..=a)).collect();
    let k = tw.field();
    let assignment: BTreeMap<_, _> = deformation_window(&target, e as u32)
        .into_iter()
        .map(|key| (key, k.from_index(rng.gen_range(0..k.residue_size()))))
        .collect();
    deform_specialize(tw, &base, &target, &assignment).unwrap()
}

fn shape() -> impl Strategy<Value = (usize, usize)> {
    (1..=3usize, 1..=3usize)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn witt_ring_axioms(seed: u64, p in prop::sample::select(vec![2u64, 3, 5, 7]), d in 1..=3usize) {
        let w = WittRing::new(p, d, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y, z) = (w.random(&mut rng), w.random(&mut rng), w.random(&mut rng));
        prop_assert_eq!(w.mul(&x, &w.add(&y, &z)), w.add(&w.mul(&x, &y), &w.mul(&x, &z)));
        prop_assert_eq!(w.mul(&w.mul(&x, &y), &z), w.mul(&x, &w.mul(&y, &z)));
        prop_assert_eq!(w.mul(&x, &y), w.mul(&y, &x));
        prop_assert_eq!(w.frobenius(&w.mul(&x, &y), 1), w.mul(&w.frobenius(&x, 1), &w.frobenius(&y, 1)));
        prop_assert_eq!(w.frobenius(&w.add(&x, &y), 1), w.add(&w.frobenius(&x, 1), &w.frobenius(&y, 1)));
        prop_assert_eq!(w.frobenius(&x, d as i64), x.clone());
        prop_assert_eq!(w.frobenius(&w.frobenius(&x, 1), -1), x.clone());
        let (tx, ty) = (w.teichmuller(&w.to_residue(&x)), w.teichmuller(&w.to_residue(&y)));
        prop_assert_eq!(w.teichmuller(&w.to_residue(&w.mul(&x, &y))), w.mul(&tx, &ty));
        prop_assert_eq!(w.frobenius(&tx, 1), w.pow(&tx, p));
    }

    #[test]
    fn ramified_valuation(seed: u64, e in 1..=4usize, v1 in 0..6u32, v2 in 0..6u32) {
        let tw = tower(3, 2, e, 1, 4);
        let r = tw.ram();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y) = (r.random_with_val(&mut rng, v1), r.random_with_val(&mut rng, v2));
        let prec = r.pi_precision();
        let want = if v1 + v2 < prec { Val::Fin(v1 + v2) } else { Val::Inf };
        prop_assert_eq!(r.ord_pi(&r.mul(&x, &y)), want);
        prop_assert_eq!(r.ord_pi(&r.frobenius(&x, 1)), r.ord_pi(&x));
        prop_assert_eq!(r.ord_pi(&r.from_int(3)), Val::Fin(e as u32));
    }

    #[test]
    fn a_type_within_bounds(seed: u64, (e, f) in shape()) {
        let tw = tower(5, f, e, 1, 8);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_module(&tw, &mut rng);
        let (lt, at) = (lie_type(&m), a_type(&m));
        prop_assert_eq!(lt.total(), tw.g());
        for (b, s) in a_type_bounds(&lt, e as u32).iter().zip(&at.slots) {
            prop_assert_eq!(s[0], b.a1);
            prop_assert!(b.lo <= s[1] && s[1] <= b.hi, "{:?} vs {:?}", s, b);
        }
    }

    #[test]
    fn classification_consistent(seed: u64, (e, f) in shape()) {
        let tw = tower(3, f, e, 1, 12);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = if rng.gen_bool(0.5) { random_module(&tw, &mut rng) } else { random_deformation(&tw, &mut rng) };
        let g = tw.g();
        let np = newton_point(&m, NewtonMethod::Auto);
        prop_assume!(np.is_ok());
        let np = np.unwrap();
        prop_assert!(admissible_twice(g).contains(&np.twice()));
        let fl = classify(&m).unwrap();
        let at = a_type(&m);
        prop_assert_eq!(fl.ordinary, np.twice() == 0);
        prop_assert_eq!(fl.supersingular, np.twice() == g);
        prop_assert_eq!(fl.superspecial, at.a_number() == g);
        prop_assert_eq!(fl.rapoport, lie_type(&m).is_rapoport(e as u32));
        if fl.superspecial {
            prop_assert!(fl.supersingular);
        }
        if fl.ordinary {
            prop_assert_eq!(at.a_number(), 0);
        }
    }

    #[test]
    fn duality_round_trip(seed: u64, (e, f) in shape()) {
        let tw = tower(5, f, e, 2, 10);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = if rng.gen_bool(0.5) {
            let x = rng.gen_range(0..=e as u32);
            let y = if f % 2 == 1 { e as u32 - x } else { rng.gen_range(0..=e as u32) };
            superspecial(&tw, x, y, SuperspecialVariant::General).unwrap()
        } else {
            random_deformation(&tw, &mut rng)
        };
        prop_assume!(m.delta().is_some());
        let (lt, at) = (lie_type(&m), a_type(&m));
        let (dl, da) = dual_invariants(&lt, &at, e as u32).unwrap();
        let d = dual_module(&m).unwrap();
        prop_assert_eq!(&lie_type(&d), &dl);
        prop_assert_eq!(&a_type(&d).slots, &da.slots);
        let (bl, ba) = dual_invariants(&dl, &da, e as u32).unwrap();
        prop_assert_eq!(bl, lt);
        prop_assert_eq!(ba.slots, at.slots);
    }

    #[test]
    fn lambda_dp_matches_exhaustive(a in prop::collection::vec(0..=3u32, 1..=7)) {
        let l = lambda_exhaustive(&a);
        prop_assert_eq!(lambda_dp(&a), l);
        let size: u32 = a.iter().sum();
        prop_assert!(l <= size);
        prop_assert_eq!(l == size, is_spaced(&a));
        // raising one entry never lowers lambda
        let mut b = a.clone();
        b[0] += 1;
        prop_assert!(lambda_exhaustive(&b) >= l);
    }

    #[test]
    fn degree_exponent_rotation_invariant(seed: u64, (e, f) in shape()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = e as u32 * f as u32;
        let mut slots = vec![[0u32; 2]; f];
        let mut left = g;
        while left > 0 {
            let (i, j) = (rng.gen_range(0..f), rng.gen_range(0..2));
            if slots[i][j] < e as u32 {
                slots[i][j] += 1;
                left -= 1;
            }
        }
        let lt = LieType::new(slots.clone());
        let d = polarization_degree_exponent(&lt, e as u32, f as u32, DegreeNormalization::Rotated).unwrap();
        prop_assert!(d >= 0);
        for k in 1..f {
            let mut turned = slots.clone();
            turned.rotate_left(k);
            let dk = polarization_degree_exponent(&LieType::new(turned), e as u32, f as u32, DegreeNormalization::Rotated);
            prop_assert_eq!(dk, Ok(d));
        }
        if let Ok(fixed) = polarization_degree_exponent(&lt, e as u32, f as u32, DegreeNormalization::Fixed) {
            prop_assert!(fixed >= d);
        }
    }
}
