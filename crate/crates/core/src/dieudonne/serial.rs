//! JSON form of modules: `{tower, matrices, delta, mode}`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{build_module, DModule, Mat2, Mode};
use crate::arith::{CoeffTower, RamElem, RamRing, TowerSpec};
use crate::error::{Error, Result};

type RawElem = Vec<Vec<u64>>;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModuleJson {
    pub tower: TowerSpec,
    pub matrices: Vec<[[RawElem; 2]; 2]>,
    #[serde(default)]
    pub delta: Option<Vec<RawElem>>,
    #[serde(default)]
    pub mode: Mode,
}

fn raw(x: &RamElem) -> RawElem {
    x.coeffs().iter().map(|c| c.coeffs().to_vec()).collect()
}

fn parse(r: &RamRing, x: &RawElem) -> Result<RamElem> {
    let c = x.iter().map(|w| r.witt().try_from_u64s(w)).collect::<Result<Vec<_>>>()?;
    r.from_coeffs(c)
}

impl ModuleJson {
    pub fn from_module(m: &DModule) -> Self {
        ModuleJson {
            tower: m.tower().spec(),
            matrices: m
                .matrices()
                .iter()
                .map(|a| [[raw(a.get(0, 0)), raw(a.get(0, 1))], [raw(a.get(1, 0)), raw(a.get(1, 1))]])
                .collect(),
            delta: m.delta().map(|d| d.iter().map(raw).collect()),
            mode: m.mode(),
        }
    }

    pub fn into_module(self) -> Result<DModule> {
        let tower = Arc::new(CoeffTower::from_spec(&self.tower)?);
        let r = tower.ram();
        let matrices = self
            .matrices
            .iter()
            .map(|[[a, b], [c, d]]| Ok(Mat2::new(parse(r, a)?, parse(r, b)?, parse(r, c)?, parse(r, d)?)))
            .collect::<Result<Vec<_>>>()?;
        let delta = match &self.delta {
            None => None,
            Some(d) => Some(d.iter().map(|x| parse(r, x)).collect::<Result<Vec<_>>>()?),
        };
        build_module(tower, matrices, delta, self.mode)
    }
}

impl DModule {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(ModuleJson::from_module(self)).expect("serializable")
    }

    pub fn from_json_str(s: &str) -> Result<DModule> {
        let j: ModuleJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        j.into_module()
    }
}
