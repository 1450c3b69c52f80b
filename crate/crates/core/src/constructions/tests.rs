use super::*;
use crate::dieudonne::{mat, twisted_power};
use crate::invariants::{a_type, classify, lie_type};

fn tower(p: u64, f: usize, e: usize, ext: usize, n: u32) -> Arc<CoeffTower> {
    Arc::new(CoeffTower::new(p, f, e, ext, n).unwrap())
}

#[test]
fn slope_family_examples() {
    let t = tower(3, 3, 2, 1, 10);
    let m = slope_family(&t, 0).unwrap();
    assert_eq!(newton_point(&m, NewtonMethod::Oracle).unwrap().twice(), 0);
    let m = slope_family(&t, 2).unwrap();
    let r = t.ram();
    let b = twisted_power(&m, 0);
    assert_eq!(r.ord_pi(&mat::trace(r, &b)), Val::Fin(2));
    assert_eq!(newton_point(&m, NewtonMethod::Oracle).unwrap().index(), (2, 1));
    assert!(lie_type(&m).is_rapoport(2));
    assert!(m.delta().is_some());
    let t = tower(3, 2, 2, 1, 10);
    let m = slope_family(&t, 2).unwrap();
    assert_eq!(newton_point(&m, NewtonMethod::Oracle).unwrap().index(), (2, 1));
    assert!(slope_family(&t, 3).is_err());
    let t = tower(3, 2, 3, 1, 12);
    let m = slope_family(&t, 3).unwrap();
    assert_eq!(newton_point(&m, NewtonMethod::Oracle).unwrap().index(), (3, 1));
}

#[test]
fn normal_form_t_even_degenerate() {
    let t = tower(3, 4, 1, 1, 12);
    let m = normal_form(&t, &[0, 2], &BTreeMap::new()).unwrap();
    assert_eq!(newton_point(&m, NewtonMethod::Oracle).unwrap().index(), (2, 1));
    let t = tower(3, 1, 3, 1, 8);
    let r = t.ram();
    let m = normal_form(&t, &[0], &BTreeMap::from([(0, r.pi_pow(1))])).unwrap();
    assert_eq!(newton_point(&m, NewtonMethod::Oracle).unwrap().index(), (3, 2));
    assert!(normal_form(&t, &[1], &BTreeMap::new()).is_err());
}

#[test]
fn superspecial_fm_equals_vm() {
    for (f, e, e1, e2) in [(1, 3, 1, 2), (2, 2, 0, 1), (4, 2, 2, 1), (3, 2, 1, 1)] {
        let t = tower(5, f, e, 1, 8);
        let m = superspecial(&t, e1, e2, SuperspecialVariant::General).unwrap();
        assert_eq!(a_type(&m).a_number(), t.g());
        let red = crate::dieudonne::reduce_mod_p(&m);
        let k = t.res();
        for i in 0..f {
            // F M^(i-1) and V M^(i+1) have the same span in M^i
            let mut fv = vec![];
            for mm in [&red[i].f, &red[(i + 1) % f].v] {
                fv.push((0..2).map(|r| vec![mm.get(r, 0).clone(), mm.get(r, 1).clone()]).collect::<Vec<_>>());
            }
            let span_f = crate::invariants::snf::cokernel_exponents(k, fv[0].clone(), 2);
            let both = crate::invariants::snf::cokernel_exponents(k, [fv[0].clone(), fv[1].clone()].concat(), 2);
            assert_eq!(span_f, both);
        }
        assert!(classify(&m).unwrap().supersingular);
    }
    let t = tower(5, 3, 2, 1, 8);
    assert!(superspecial(&t, 0, 1, SuperspecialVariant::General).is_err());
}

#[test]
fn deformation_keys_and_closed_point() {
    let t = tower(3, 2, 2, 1, 8);
    let r = t.ram();
    let base = NormalForm { tau: vec![0], entries: BTreeMap::from([(0, r.pi_pow(2))]) };
    let target = vec![1, 0];
    let window = deformation_window(&target, 2);
    assert_eq!(window, vec![(0, 1), (1, 0), (1, 1)]);
    let k = t.field();
    let zero: BTreeMap<_, _> = window.iter().map(|&key| (key, k.zero())).collect();
    let m = deform_specialize(&t, &base, &target, &zero).unwrap();
    let m0 = normal_form_module(&t, &base).unwrap();
    assert_eq!(m.matrices(), m0.matrices());
    let mut bad = zero.clone();
    bad.insert((0, 0), k.one());
    assert!(matches!(deform_specialize(&t, &base, &target, &bad), Err(Error::KeyMismatch(_))));
    bad.remove(&(0, 1));
    bad.remove(&(0, 0));
    assert!(matches!(deform_specialize(&t, &base, &target, &bad), Err(Error::KeyMismatch(_))));
    assert!(deform_specialize(&t, &base, &[2, 1], &zero).is_err());
}

#[test]
fn sampling_is_deterministic() {
    let t = tower(5, 2, 1, 2, 8);
    let base = NormalForm { tau: vec![0, 1], entries: BTreeMap::new() };
    let a = sample_deform(&t, &base, &[1, 0], 20, 7, NewtonMethod::Auto).unwrap();
    let b = sample_deform(&t, &base, &[1, 0], 20, 7, NewtonMethod::Auto).unwrap();
    assert_eq!(a.slope_histogram, b.slope_histogram);
    assert_eq!(a.slope_histogram.values().sum::<usize>() + a.failures, 20);
}
