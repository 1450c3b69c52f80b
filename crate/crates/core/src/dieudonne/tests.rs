use super::*;

fn tower(p: u64, f: usize, e: usize, ext: usize, n: u32) -> Arc<CoeffTower> {
    Arc::new(CoeffTower::new(p, f, e, ext, n).unwrap())
}

fn diag(r: &RamRing, a: RamElem, d: RamElem) -> Mat2 {
    Mat2::new(a, r.zero(), r.zero(), d)
}

fn ordinary(t: &Arc<CoeffTower>) -> DModule {
    let r = t.ram();
    let a = vec![diag(r, r.one(), r.pi_pow(t.e() as u32)); t.f()];
    build_module(t.clone(), a, Some(vec![r.one(); t.f()]), Mode::Separable).unwrap()
}

fn non_rapoport(t: &Arc<CoeffTower>) -> Vec<Mat2> {
    let r = t.ram();
    vec![Mat2::new(r.zero(), r.pi_pow(1), r.pi_pow(1), r.zero())]
}

#[test]
fn ordinary_module_is_valid() {
    let t = tower(3, 2, 2, 1, 4);
    let m = ordinary(&t);
    assert_eq!(m.det_sum(), 4);
    let red = reduce_mod_p(&m);
    let k = t.res();
    assert_eq!(red[0].f, diag(k, k.one(), k.zero()));
    assert_eq!(red[0].v, diag(k, k.zero(), k.one()));
    assert_eq!(iterate_twisted(&m, 5).unwrap(), 0);
}

#[test]
fn non_rapoport_pairing_needs_a_sign_twist() {
    let t = tower(5, 1, 2, 1, 4);
    let r = t.ram();
    let a = non_rapoport(&t);
    assert_eq!(
        build_module(t.clone(), a.clone(), Some(vec![r.one()]), Mode::Separable).unwrap_err(),
        Error::PairingIncompatible { slot: 0 }
    );
    // sigma(d) = -d has no solution over F_5, one over F_25
    assert!(solve_pairing(&t, &a).is_none());
    let t2 = tower(5, 1, 2, 2, 4);
    let a2 = non_rapoport(&t2);
    let d = solve_pairing(&t2, &a2).unwrap();
    let m = build_module(t2.clone(), a2, Some(d), Mode::Separable).unwrap();
    assert_eq!(iterate_twisted(&m, 2).unwrap(), 2);
    let red = reduce_mod_p(&m);
    let k = t2.res();
    let anti = Mat2::new(k.zero(), k.pi_pow(1), k.pi_pow(1), k.zero());
    assert_eq!(red[0].f, anti);
    assert_eq!(red[0].v, anti);
}

#[test]
fn etale_module_violates_budget() {
    let t = tower(3, 1, 2, 1, 4);
    let r = t.ram();
    let err = build_module(t.clone(), vec![Mat2::identity(r)], None, Mode::Separable).unwrap_err();
    assert_eq!(err, Error::DetBudget { sum: 0, budget: 2, slot: 0 });
}

#[test]
fn v_integrality_and_degeneracy() {
    let t = tower(3, 1, 1, 1, 4);
    let r = t.ram();
    let bad = diag(r, r.one(), r.pi_pow(2));
    assert_eq!(
        build_module(t.clone(), vec![bad], None, Mode::General).unwrap_err(),
        Error::VNonIntegral { slot: 0 }
    );
    let zero = diag(r, r.one(), r.zero());
    assert_eq!(
        build_module(t.clone(), vec![zero], None, Mode::General).unwrap_err(),
        Error::DegenerateDeterminant { slot: 0 }
    );
}

#[test]
fn twisted_power_f2() {
    let t = tower(3, 2, 1, 1, 4);
    let r = t.ram();
    let x = r.teichmuller(&t.field().gen());
    let a0 = Mat2::new(x.clone(), r.one(), r.from_int(3), r.zero());
    let a1 = diag(r, r.one(), r.pi_pow(1));
    let m = build_module(t.clone(), vec![a0.clone(), a1.clone()], None, Mode::Separable).unwrap();
    let expect = mat::mul(r, &mat::frobenius(r, &a1, 1), &a0);
    assert_eq!(twisted_power(&m, 0), expect);
    // valuations agree across base slots
    let b1 = twisted_power(&m, 1);
    let b0 = twisted_power(&m, 0);
    assert_eq!(r.ord_pi(&mat::trace(r, &b0)), r.ord_pi(&mat::trace(r, &b1)));
    assert_eq!(r.ord_pi(&mat::det(r, &b0)), Val::Fin(2));
}

#[test]
fn dual_of_ordinary_and_round_trip_json() {
    let t = tower(3, 2, 2, 1, 5);
    let m = ordinary(&t);
    let d = dual_module(&m).unwrap();
    assert_eq!(d.det_sum(), 4);
    let s = m.to_json().to_string();
    let back = DModule::from_json_str(&s).unwrap();
    assert_eq!(back.matrices(), m.matrices());
    assert!(DModule::from_json_str("{\"tower\": 1}").is_err());
}
