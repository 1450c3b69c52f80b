use std::collections::BTreeMap;
use std::sync::Arc;

use super::*;
use crate::arith::CoeffTower;
use crate::constructions::{non_rapoport_example, normal_form, superspecial, SuperspecialVariant};

fn tower(p: u64, f: usize, e: usize, ext: usize, n: u32) -> Arc<CoeffTower> {
    Arc::new(CoeffTower::new(p, f, e, ext, n).unwrap())
}

#[test]
fn ordinary_invariants() {
    let t = tower(3, 3, 2, 1, 6);
    let m = normal_form(&t, &[], &BTreeMap::new()).unwrap();
    assert_eq!(lie_type(&m).slots, vec![[0, 2]; 3]);
    assert_eq!(a_type(&m).slots, vec![[0, 0]; 3]);
    assert_eq!(a_index(&m).unwrap(), AIndex { tau: vec![], t: 0, reduced_a: 0 });
    for method in [NewtonMethod::Fast, NewtonMethod::Oracle, NewtonMethod::Linearized] {
        assert_eq!(newton_point(&m, method).unwrap().twice(), 0);
    }
    let fl = classify(&m).unwrap();
    assert!(fl.rapoport && fl.dp && fl.ordinary && !fl.supersingular && !fl.superspecial);
}

#[test]
fn non_rapoport_invariants() {
    let t = tower(5, 1, 2, 2, 4);
    let m = non_rapoport_example(&t).unwrap();
    assert!(m.delta().is_some());
    assert_eq!(lie_type(&m).slots, vec![[1, 1]]);
    assert_eq!(a_type(&m).slots, vec![[1, 1]]);
    assert_eq!(a_type(&m).a_number(), 2);
    assert_eq!(a_index(&m).unwrap_err(), Error::NotRapoport);
    assert_eq!(newton_point(&m, NewtonMethod::Oracle).unwrap().index(), (1, 1));
    assert_eq!(newton_point(&m, NewtonMethod::Fast).unwrap().index(), (1, 1));
    let fl = classify(&m).unwrap();
    assert_eq!(
        fl,
        Flags { rapoport: false, dp: true, ordinary: false, supersingular: true, superspecial: true }
    );
}

#[test]
fn rapoport_form_of_single_slot() {
    let t = tower(3, 1, 3, 1, 4);
    let r = t.ram();
    for a in 1..3u32 {
        let c = BTreeMap::from([(0, r.mul(&r.from_int(2), &r.pi_pow(a - 1)))]);
        let m = normal_form(&t, &[0], &c).unwrap();
        let at = a_type(&m);
        assert_eq!(at.rapoport_form, Some(vec![a]));
        assert_eq!(at.a_number(), a);
    }
}

#[test]
fn a_index_round_trip_and_t2_example() {
    let t = tower(3, 4, 1, 1, 8);
    let r = t.ram();
    let c = BTreeMap::from([(0, r.one()), (2, r.one())]);
    let m = normal_form(&t, &[0, 2], &c).unwrap();
    assert_eq!(a_index(&m).unwrap(), AIndex { tau: vec![0, 2], t: 2, reduced_a: 2 });
    assert_eq!(newton_point(&m, NewtonMethod::Oracle).unwrap().index(), (2, 1));
    assert_eq!(newton_point(&m, NewtonMethod::Fast).unwrap().index(), (2, 1));
}

#[test]
fn superspecial_invariants() {
    let t = tower(3, 1, 3, 1, 4);
    let m = superspecial(&t, 1, 2, SuperspecialVariant::General).unwrap();
    assert_eq!(lie_type(&m).slots, vec![[1, 2]]);
    assert_eq!(a_type(&m).slots, vec![[1, 2]]);
    let t = tower(3, 2, 2, 1, 5);
    let m = superspecial(&t, 0, 1, SuperspecialVariant::General).unwrap();
    assert_eq!(lie_type(&m).slots, vec![[0, 1], [1, 2]]);
    let fl = classify(&m).unwrap();
    assert!(fl.superspecial && fl.supersingular && !fl.rapoport);
    let m = superspecial(&t, 0, 0, SuperspecialVariant::Rapoport).unwrap();
    let fl = classify(&m).unwrap();
    assert!(fl.superspecial && fl.supersingular && fl.rapoport && fl.dp);
}

#[test]
fn bounds_examples() {
    let b = a_type_bounds(&LieType::new(vec![[1, 2]]), 3);
    assert_eq!(b, vec![SlotBound { a1: 1, lo: 1, hi: 2 }]);
    let b = a_type_bounds(&LieType::new(vec![[0, 2]; 3]), 2);
    assert!(b.iter().all(|s| *s == SlotBound { a1: 0, lo: 0, hi: 2 }));
    // superspecial pattern {1, 2}: a-type = Lie type lies inside the bounds
    let b = a_type_bounds(&LieType::new(vec![[1, 2]; 3]), 3);
    assert!(b.iter().all(|s| s.a1 == 1 && s.lo <= 2 && 2 <= s.hi));
}

#[test]
fn dual_formula_examples() {
    let (l, a) = dual_invariants(&LieType::new(vec![[1, 1]]), &AType::new(vec![[1, 1]]), 2).unwrap();
    assert_eq!((l.slots, a.slots), (vec![[1, 1]], vec![[1, 1]]));
    let (l, a) = dual_invariants(&LieType::new(vec![[0, 2]]), &AType::new(vec![[0, 0]]), 2).unwrap();
    assert_eq!((l.slots, a.slots), (vec![[0, 2]], vec![[0, 0]]));
    let (l, a) = dual_invariants(&LieType::new(vec![[1, 2]]), &AType::new(vec![[1, 2]]), 3).unwrap();
    assert_eq!((l.slots, a.slots), (vec![[1, 2]], vec![[1, 2]]));
    assert!(dual_invariants(&LieType::new(vec![[0, 2]]), &AType::new(vec![[2, 2]]), 2).is_err());
}

#[test]
fn newton_point_shapes() {
    assert_eq!(admissible_twice(5), vec![0, 2, 4, 5]);
    assert_eq!(admissible_twice(4), vec![0, 2, 4]);
    assert_eq!(admissible_twice(1), vec![0, 1]);
    let s = NewtonPoint::from_twice(5, 5).unwrap();
    assert_eq!(s.index(), (5, 2));
    assert_eq!(s.ceil(), 3);
    assert_eq!(s.sequence(), vec![(1, 2); 10]);
    let s = NewtonPoint::from_index(4, 1).unwrap();
    assert_eq!(s.sequence()[..4], [(1, 4); 4]);
    assert_eq!(s.sequence()[4..], [(3, 4); 4]);
    assert!(NewtonPoint::from_twice(4, 3).is_none());
    let j = serde_json::to_string(&NewtonPoint::from_twice(1, 1).unwrap()).unwrap();
    assert_eq!(j, r#"{"index_num":1,"index_den":2,"sequence":["1/2","1/2"]}"#);
}
