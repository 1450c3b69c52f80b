use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Check, Tally, VerifyConfig};
use crate::arith::{CoeffTower, Val};

/// Ring axioms, Frobenius, valuations and Teichmuller lifts on random
/// elements of several towers.
pub fn arithmetic_kernel(cfg: &VerifyConfig) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xa7);
    let mut t = Tally::new();
    let towers = [(2u64, 3usize, 2usize, 1usize, 8u32), (3, 2, 1, 1, 6), (3, 1, 3, 2, 5), (5, 3, 2, 1, 4), (7, 2, 2, 2, 4), (13, 1, 1, 3, 3)];
    for &(p, f, e, ext, n) in &towers {
        let tw = match CoeffTower::new(p, f, e, ext, n) {
            Ok(tw) => tw,
            Err(err) => {
                t.record(false, || format!("tower {p},{f},{e},{ext},{n}: {err}"));
                continue;
            }
        };
        let w = tw.witt();
        let r = tw.ram();
        let k = tw.field();
        let d = w.degree() as i64;
        let q = k.residue_size();
        let prec = r.pi_precision();
        let ctx = |what: &'static str| move || format!("p={p} f={f} e={e} ext={ext}: {what}");
        for _ in 0..200 {
            let (x, y, z) = (w.random(&mut rng), w.random(&mut rng), w.random(&mut rng));
            t.record(w.add(&w.add(&x, &y), &z) == w.add(&x, &w.add(&y, &z)), ctx("W additive associativity"));
            t.record(w.mul(&w.mul(&x, &y), &z) == w.mul(&x, &w.mul(&y, &z)), ctx("W associativity"));
            t.record(w.mul(&x, &y) == w.mul(&y, &x), ctx("W commutativity"));
            t.record(w.mul(&x, &w.add(&y, &z)) == w.add(&w.mul(&x, &y), &w.mul(&x, &z)), ctx("W distributivity"));
            t.record(w.add(&x, &w.neg(&x)) == w.zero() && w.mul(&x, &w.one()) == x, ctx("W identities"));
            t.record(w.frobenius(&w.mul(&x, &y), 1) == w.mul(&w.frobenius(&x, 1), &w.frobenius(&y, 1)), ctx("sigma multiplicative"));
            t.record(w.frobenius(&w.add(&x, &y), 1) == w.add(&w.frobenius(&x, 1), &w.frobenius(&y, 1)), ctx("sigma additive"));
            t.record(w.frobenius(&x, d) == x && w.frobenius(&w.frobenius(&x, -1), 1) == x, ctx("sigma order"));
            let (ox, oy, oxy) = (w.ord_p(&x), w.ord_p(&y), w.ord_p(&w.mul(&x, &y)));
            let expect = match (ox, oy) {
                (Some(a), Some(b)) if a + b < n => Some(a + b),
                _ => None,
            };
            let ok = oxy == expect;
            t.record(ok, ctx("ord_p multiplicative"));
            if w.is_unit(&x) {
                t.record(w.inv(&x).map(|i| w.mul(&x, &i)) == Some(w.one()), ctx("W inverse"));
            }

            let a = k.from_index(rng.gen_range(0..q));
            let b = k.from_index(rng.gen_range(0..q));
            let (ta, tb) = (w.teichmuller(&a), w.teichmuller(&b));
            t.record(w.pow(&ta, q) == ta, ctx("Teichmuller fixed by q-th power"));
            t.record(w.mul(&ta, &tb) == w.teichmuller(&k.mul(&a, &b)), ctx("Teichmuller multiplicative"));
            t.record(w.to_residue(&ta) == a, ctx("Teichmuller reduces to its argument"));
            t.record(w.frobenius(&ta, 1) == w.teichmuller(&k.pow(&a, p)), ctx("sigma on Teichmuller"));

            let (u, v, s) = (r.random(&mut rng), r.random(&mut rng), r.random(&mut rng));
            t.record(r.mul(&r.mul(&u, &v), &s) == r.mul(&u, &r.mul(&v, &s)), ctx("O associativity"));
            t.record(r.mul(&u, &v) == r.mul(&v, &u), ctx("O commutativity"));
            t.record(r.mul(&u, &r.add(&v, &s)) == r.add(&r.mul(&u, &v), &r.mul(&u, &s)), ctx("O distributivity"));
            t.record(r.frobenius(&r.mul(&u, &v), 1) == r.mul(&r.frobenius(&u, 1), &r.frobenius(&v, 1)), ctx("sigma on O"));
            let expect = match (r.ord_pi(&u), r.ord_pi(&v)) {
                (Val::Fin(a), Val::Fin(b)) if a + b < prec => Val::Fin(a + b),
                _ => Val::Inf,
            };
            t.record(r.ord_pi(&r.mul(&u, &v)) == expect, ctx("ord_pi multiplicative"));
            let vv = rng.gen_range(0..prec);
            let y = r.random_with_val(&mut rng, vv);
            t.record(r.ord_pi(&y) == Val::Fin(vv), ctx("exact valuation"));
            // (u y) / y agrees with u modulo pi^(prec - v)
            let back = r.div_exact(&r.mul(&u, &y), &y);
            let ok = back.is_some_and(|b| {
                let diff = r.ord_pi(&r.sub(&b, &u));
                diff >= Val::Fin(prec - vv)
            });
            t.record(ok, ctx("exact division"));
            t.record(r.mul_pi(&r.div_pi(&r.mul_pi(&u))) == r.mul_pi(&u), ctx("pi division"));
        }
    }
    t.finish("arith", "ring axioms, Frobenius, valuations and Teichmuller lifts", 10_000)
}
