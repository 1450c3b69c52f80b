use serde::{Deserialize, Serialize};

use super::ram::RamRing;
use super::witt::WittRing;
use crate::error::{Error, Result};

/// F_{p^d} -> W_N(F_{p^d}) -> W_N(F_{p^d})[pi]/(P), with d = f * ext.
#[derive(Clone, Debug)]
pub struct CoeffTower {
    p: u64,
    f: usize,
    e: usize,
    ext: usize,
    n: u32,
    eisenstein: Vec<i64>,
    ram: RamRing,
    /// the same ring at precision 1, i.e. k[pi]/(pi^e)
    res: RamRing,
}

/// Serialized form of a tower.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerSpec {
    pub p: u64,
    pub f: usize,
    pub e: usize,
    #[serde(default = "one")]
    pub ext: usize,
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u64>>,
    /// lower coefficients of P; absent means pi^e - p
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eisenstein: Option<Vec<i64>>,
}

fn one() -> usize {
    1
}

impl CoeffTower {
    /// Tower with the canonical modulus and P = pi^e - p.
    pub fn new(p: u64, f: usize, e: usize, ext: usize, n: u32) -> Result<Self> {
        Self::from_spec(&TowerSpec { p, f, e, ext, n, modulus: None, eisenstein: None })
    }

    pub fn from_spec(spec: &TowerSpec) -> Result<Self> {
        let TowerSpec { p, f, e, ext, n, .. } = *spec;
        if f == 0 || e == 0 || ext == 0 || n == 0 {
            return Err(Error::InvalidParameter("f, e, ext and N must be positive".into()));
        }
        let have = e as u32 * n;
        let need = (e * f) as u32 + 2;
        if have < need {
            return Err(Error::PrecisionPolicy { have, need });
        }
        let d = f * ext;
        let w = match &spec.modulus {
            None => WittRing::new(p, d, n)?,
            Some(m) => {
                if m.len() != d + 1 {
                    return Err(Error::InvalidParameter(format!("modulus must have degree {d}")));
                }
                WittRing::with_modulus(p, n, m.clone())?
            }
        };
        let mu: Vec<u64> = w.modulus().iter().map(|&c| c % p).collect();
        let wres = WittRing::with_modulus(p, 1, mu)?;
        let eisenstein = match &spec.eisenstein {
            None => {
                let mut v = vec![0i64; e];
                v[0] = -(p as i64);
                v
            }
            Some(v) => {
                if v.len() != e {
                    return Err(Error::InvalidParameter(format!("eisenstein needs {e} coefficients")));
                }
                v.clone()
            }
        };
        let ram = RamRing::new(w, &eisenstein)?;
        let res = RamRing::new(wres, &eisenstein)?;
        Ok(CoeffTower { p, f, e, ext, n, eisenstein, ram, res })
    }

    pub fn spec(&self) -> TowerSpec {
        let default = {
            let mut v = vec![0i64; self.e];
            v[0] = -(self.p as i64);
            v
        };
        TowerSpec {
            p: self.p,
            f: self.f,
            e: self.e,
            ext: self.ext,
            n: self.n,
            modulus: Some(self.ram.witt().modulus().to_vec()),
            eisenstein: (self.eisenstein != default).then(|| self.eisenstein.clone()),
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn f(&self) -> usize {
        self.f
    }
    pub fn e(&self) -> usize {
        self.e
    }
    pub fn ext(&self) -> usize {
        self.ext
    }
    pub fn precision(&self) -> u32 {
        self.n
    }
    /// g = e * f
    pub fn g(&self) -> u32 {
        (self.e * self.f) as u32
    }
    /// W_N[pi]/(P)
    pub fn ram(&self) -> &RamRing {
        &self.ram
    }
    /// W_N(F_{p^d})
    pub fn witt(&self) -> &WittRing {
        self.ram.witt()
    }
    /// k[pi]/(pi^e)
    pub fn res(&self) -> &RamRing {
        &self.res
    }
    /// The residue field k = F_{p^d}.
    pub fn field(&self) -> &WittRing {
        self.res.witt()
    }
}
