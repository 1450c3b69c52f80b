use serde::{Serialize, Serializer};

use crate::arith::Val;
use crate::dieudonne::{mat, twisted_power, DModule, TwistedIterates};
use crate::error::{Error, Result};

/// A point of S(g), stored as twice its index (so g/2 is representable).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NewtonPoint {
    g: u32,
    twice: u32,
}

impl NewtonPoint {
    /// s(i) for i = twice/2; `None` unless the index lies in S(g).
    pub fn from_twice(g: u32, twice: u32) -> Option<Self> {
        (twice == g || (twice.is_multiple_of(2) && twice <= g)).then_some(NewtonPoint { g, twice })
    }

    pub fn from_index(g: u32, i: u32) -> Option<Self> {
        Self::from_twice(g, 2 * i)
    }

    pub fn g(&self) -> u32 {
        self.g
    }

    pub fn twice(&self) -> u32 {
        self.twice
    }

    /// (numerator, denominator) of the index, reduced.
    pub fn index(&self) -> (u32, u32) {
        if self.twice.is_multiple_of(2) {
            (self.twice / 2, 1)
        } else {
            (self.twice, 2)
        }
    }

    /// ceil(index)
    pub fn ceil(&self) -> u32 {
        self.twice.div_ceil(2)
    }

    /// The 2g slopes in ascending order, as reduced fractions.
    pub fn sequence(&self) -> Vec<(u32, u32)> {
        let g2 = 2 * self.g;
        let lo = reduce(self.twice, g2);
        let hi = reduce(g2 - self.twice, g2);
        let mut v = vec![lo; self.g as usize];
        v.extend(std::iter::repeat_n(hi, self.g as usize));
        v
    }
}

fn reduce(a: u32, b: u32) -> (u32, u32) {
    let (mut x, mut y) = (a, b);
    while y != 0 {
        (x, y) = (y, x % y);
    }
    (a / x, b / x)
}

impl Serialize for NewtonPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            index_num: u32,
            index_den: u32,
            sequence: Vec<String>,
        }
        let (index_num, index_den) = self.index();
        let sequence = self.sequence().iter().map(|(a, b)| format!("{a}/{b}")).collect();
        Repr { index_num, index_den, sequence }.serialize(s)
    }
}

/// S(g) as doubled indices, ascending.
pub fn admissible_twice(g: u32) -> Vec<u32> {
    let mut v: Vec<u32> = (0..=g / 2).map(|i| 2 * i).collect();
    if g % 2 == 1 {
        v.push(g);
    }
    v
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NewtonMethod {
    /// min(g/2, ord tr B) for B the matrix of F^f on slot 0
    Fast,
    /// rigorous bracketing from valuations of iterated twisted products
    Oracle,
    /// Newton polygon of the characteristic polynomial of the linear map
    /// F^(f * ext)
    Linearized,
    /// oracle, falling back to the linearized method when precision runs out
    Auto,
}

pub fn newton_point(m: &DModule, method: NewtonMethod) -> Result<NewtonPoint> {
    let g = m.g();
    if m.det_sum() != g {
        return Err(Error::DetBudget { sum: m.det_sum(), budget: g, slot: 0 });
    }
    match method {
        NewtonMethod::Fast => fast(m),
        NewtonMethod::Oracle => oracle(m),
        NewtonMethod::Linearized => linearized(m),
        NewtonMethod::Auto => match oracle(m) {
            Err(Error::PrecisionExhausted(_)) => linearized(m),
            other => other,
        },
    }
}

fn fast(m: &DModule) -> Result<NewtonPoint> {
    let r = m.ring();
    let g = m.g();
    let t = r.ord_pi(&mat::trace(r, &twisted_power(m, 0)));
    let twice = match t {
        Val::Fin(v) => (2 * v).min(g),
        Val::Inf => g,
    };
    Ok(NewtonPoint::from_twice(g, twice).expect("integral or g/2"))
}

fn linearized(m: &DModule) -> Result<NewtonPoint> {
    let r = m.ring();
    let g = m.g();
    let ext = m.tower().ext() as u32;
    let prec = r.pi_precision();
    let (_, c) = TwistedIterates::new(m).nth(ext as usize - 1).unwrap();
    // ord det C = ext * g exactly; slopes of C are t and ext*g - t when 2t < ext*g
    let twice = match r.ord_pi(&mat::trace(r, &c)) {
        Val::Fin(t) if 2 * t < ext * g => {
            if t % ext != 0 {
                return Err(Error::Inconsistent(format!("trace valuation {t} not divisible by {ext}")));
            }
            2 * t / ext
        }
        Val::Fin(_) => g,
        Val::Inf if 2 * prec >= ext * g => g,
        Val::Inf => {
            return Err(Error::PrecisionExhausted(format!(
                "trace of F^(f*ext) vanishes modulo pi^{prec}, need 2*{prec} >= {}",
                ext * g
            )))
        }
    };
    Ok(NewtonPoint::from_twice(g, twice).expect("index in S(g)"))
}

/// Lower bound max m_n / n and upper bound min m_{k ext} / ((k-1) ext) on
/// the index; stop once exactly one point of S(g) lies in between.
fn oracle(m: &DModule) -> Result<NewtonPoint> {
    let r = m.ring();
    let g = m.g();
    let ext = m.tower().ext() as u64;
    let prec = r.pi_precision() as u64;
    let cands = admissible_twice(g);
    // fractions num/den
    let mut lo = (0u64, 1u64);
    let mut hi = (g as u64, 2u64);
    let max_n = ext * (4 * g as u64 + 8);
    for (n, bn) in TwistedIterates::new(m) {
        match mat::min_ord(r, &bn) {
            Val::Fin(mn) => {
                let mn = mn as u64;
                if mn * lo.1 > lo.0 * n {
                    lo = (mn, n);
                }
                if n % ext == 0 && n / ext >= 2 {
                    let den = n - ext;
                    if mn * hi.1 < hi.0 * den {
                        hi = (mn, den);
                    }
                }
            }
            Val::Inf => {
                if prec * lo.1 > lo.0 * n {
                    lo = (prec, n);
                }
                let inside = inside(&cands, lo, hi);
                return match inside.as_slice() {
                    [t] => Ok(NewtonPoint::from_twice(g, *t).unwrap()),
                    _ => Err(exhausted(n, prec, &inside)),
                };
            }
        }
        let inside = inside(&cands, lo, hi);
        match inside.as_slice() {
            [t] => return Ok(NewtonPoint::from_twice(g, *t).unwrap()),
            [] => {
                return Err(Error::Inconsistent(format!(
                    "no admissible slope in [{}/{}, {}/{}]",
                    lo.0, lo.1, hi.0, hi.1
                )))
            }
            _ => {}
        }
        if n >= max_n {
            return Err(exhausted(n, prec, &inside));
        }
    }
    unreachable!()
}

fn inside(cands: &[u32], lo: (u64, u64), hi: (u64, u64)) -> Vec<u32> {
    // twice/2 in [lo.0/lo.1, hi.0/hi.1]
    cands
        .iter()
        .copied()
        .filter(|&t| t as u64 * lo.1 >= 2 * lo.0 && t as u64 * hi.1 <= 2 * hi.0)
        .collect()
}

fn exhausted(n: u64, prec: u64, inside: &[u32]) -> Error {
    let c: Vec<String> = inside.iter().map(|t| format!("{t}/2")).collect();
    Error::PrecisionExhausted(format!(
        "after {n} iterates at precision pi^{prec} the index is one of [{}]",
        c.join(", ")
    ))
}
