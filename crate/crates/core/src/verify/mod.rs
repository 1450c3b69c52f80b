//! Verification suites. Each check recomputes a closed-form statement with
//! an independent method (oracle Newton points, brute-force enumeration,
//! exhaustive search) and reports the number of cases and any mismatches.

mod arith;
mod deform;
mod formulas;
mod slopes;

use std::fmt::Display;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::heckeprobe;

pub use arith::arithmetic_kernel;
pub use deform::{density, newton_strata_t1, non_ordinary_locus};
pub use formulas::{det_identity, formula_suite, non_rapoport_check};
pub use slopes::{degenerate_coefficients, slope_family_agreement, spaced_bound, t1_formula, t2_formula};

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub id: &'static str,
    pub topic: &'static str,
    pub passed: bool,
    pub cases: usize,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    pub size_cap: u128,
    /// primes for the Hecke enumeration (q = p^2)
    pub hecke_primes: Vec<u64>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { seed: 0x5eed, size_cap: heckeprobe::DEFAULT_SIZE_CAP, hecke_primes: vec![3, 5] }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Arith,
    Slopes,
    Strata,
    Deform,
    Hecke,
    All,
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "arith" => Suite::Arith,
            "slopes" => Suite::Slopes,
            "strata" => Suite::Strata,
            "deform" => Suite::Deform,
            "hecke" => Suite::Hecke,
            "all" => Suite::All,
            _ => return Err(Error::InvalidParameter(format!("unknown suite {s:?}"))),
        })
    }
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> SuiteReport {
    use Suite::*;
    let want = |s: Suite| suite == All || suite == s;
    let mut checks = Vec::new();
    if want(Arith) {
        checks.push(arithmetic_kernel(cfg));
    }
    if want(Slopes) {
        checks.push(slope_family_agreement(cfg));
        checks.push(t1_formula(cfg));
        checks.push(t2_formula(cfg));
        checks.push(degenerate_coefficients(cfg));
        checks.push(spaced_bound(cfg));
    }
    if want(Deform) {
        checks.push(newton_strata_t1(cfg));
        checks.push(non_ordinary_locus(cfg));
        checks.push(density(cfg));
    }
    if want(Hecke) {
        checks.push(hecke(cfg));
    }
    if want(Strata) {
        checks.push(non_rapoport_check(cfg));
        checks.push(formula_suite(cfg));
        checks.push(det_identity(cfg));
    }
    SuiteReport { suite, seed: cfg.seed, passed: checks.iter().all(|c| c.passed), checks }
}

/// Case counter that keeps the first few failures.
pub(crate) struct Tally {
    cases: usize,
    failures: usize,
    notes: Vec<String>,
    extra: Vec<String>,
}

impl Tally {
    pub(crate) fn new() -> Self {
        Tally { cases: 0, failures: 0, notes: vec![], extra: vec![] }
    }

    pub(crate) fn record(&mut self, ok: bool, ctx: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.notes.len() < 5 {
                self.notes.push(ctx());
            }
        }
    }

    /// Count an error as a failed case.
    pub(crate) fn record_result<T>(&mut self, r: Result<T>, ctx: impl FnOnce() -> String, ok: impl FnOnce(T) -> bool) {
        match r {
            Ok(v) => self.record(ok(v), ctx),
            Err(e) => self.record(false, || format!("{}: {e}", ctx())),
        }
    }

    pub(crate) fn note(&mut self, s: impl Display) {
        self.extra.push(s.to_string());
    }

    pub(crate) fn finish(self, id: &'static str, topic: &'static str, min_cases: usize) -> Check {
        let mut detail = format!("{} cases, {} failures", self.cases, self.failures);
        if self.cases < min_cases {
            detail.push_str(&format!(" (needs at least {min_cases} cases)"));
        }
        for s in self.extra.iter().chain(&self.notes) {
            detail.push_str("; ");
            detail.push_str(s);
        }
        Check { id, topic, passed: self.failures == 0 && self.cases >= min_cases, cases: self.cases, detail }
    }
}

pub fn hecke(cfg: &VerifyConfig) -> Check {
    let mut t = Tally::new();
    for &p in &cfg.hecke_primes {
        match heckeprobe::run_probe(p, 1, false, cfg.size_cap) {
            Ok(r) => {
                t.record(r.ok, || format!("p={p}: {}", serde_json::to_string(&r.counts).unwrap_or_default()));
                t.note(format!(
                    "p={p}: {} planes, {} lines, {} extra variety points",
                    r.counts.chart, r.lines, r.extra_variety_points.count
                ));
            }
            Err(e) => t.record(false, || format!("p={p}: {e}")),
        }
    }
    t.finish("hecke", "stable isotropic planes near the non-Rapoport point", 1)
}
