use std::collections::BTreeMap;
use std::io::Read;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use dieudonne::arith::CoeffTower;
use dieudonne::constructions::{
    deform_specialize, non_rapoport_example, normal_form_module, sample_deform, slope_family, superspecial, NormalForm,
    SuperspecialVariant,
};
use dieudonne::dieudonne::DModule;
use dieudonne::invariants::{self, NewtonMethod};
use dieudonne::verify::{run_suite, Suite, VerifyConfig};
use dieudonne::{heckeprobe, strata, Error, Result};

/// Rank-2 Dieudonne O-modules: invariants, explicit families, strata and
/// the Hecke probe. All output is JSON unless stated otherwise.
#[derive(Parser)]
#[command(name = "dieudonne", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    /// indent JSON output
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// residue characteristic
    #[arg(long, global = true)]
    p: Option<u64>,
    /// inertia degree
    #[arg(long, global = true, default_value_t = 1)]
    f: usize,
    /// ramification index
    #[arg(long, global = true, default_value_t = 1)]
    e: usize,
    /// degree of the residue field extension used for coefficients
    #[arg(long, global = true, default_value_t = 1)]
    ext: usize,
    /// Witt precision N (default: smallest allowed plus 6)
    #[arg(long, global = true)]
    precision: Option<u32>,
    #[arg(long, global = true, env = "DIEUDONNE_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 1_000_000)]
    size_cap: u128,
}

impl Global {
    fn p(&self) -> u64 {
        self.p.unwrap_or(3)
    }

    fn tower(&self) -> Result<Arc<CoeffTower>> {
        let n = self.precision.unwrap_or_else(|| (self.e * self.f + 2).div_ceil(self.e) as u32 + 6);
        Ok(Arc::new(CoeffTower::new(self.p(), self.f, self.e, self.ext, n)?))
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Invariant report for a module given as JSON
    Invariants {
        /// path to module JSON, or - for stdin
        #[arg(long)]
        module: String,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
    },
    /// Emit the module JSON of an explicit family
    Construct {
        #[arg(value_enum)]
        family: Family,
        /// index a of the Newton point s(a) (slope family)
        #[arg(long)]
        a: Option<u32>,
        #[command(flatten)]
        nf: NormalFormArgs,
        /// exponents for the superspecial family
        #[arg(long, default_value_t = 0)]
        e1: u32,
        #[arg(long, default_value_t = 0)]
        e2: u32,
        #[arg(long, value_enum, default_value_t = Variant::General)]
        variant: Variant,
        /// target a-type for deformations, comma separated
        #[arg(long)]
        target: Option<String>,
        /// deformation coordinates i:j=k, with k the index of a residue field element
        #[arg(long = "assign", value_delimiter = ',')]
        assign: Vec<String>,
    },
    /// Poset of Rapoport a-types with stratum data
    Poset {
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Stable isotropic planes in the Hecke probe
    Hecke {
        #[arg(long, default_value_t = 1)]
        s: u32,
        /// enumerate only the affine chart (default)
        #[arg(long, conflicts_with = "full_grassmannian")]
        chart_only: bool,
        /// also enumerate the whole Grassmannian
        #[arg(long)]
        full_grassmannian: bool,
    },
    /// Sample random specializations of the universal deformation
    SampleDeform {
        #[command(flatten)]
        nf: NormalFormArgs,
        /// target a-type, comma separated (default: zero)
        #[arg(long)]
        target: Option<String>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
    },
    /// Run a verification suite
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
    },
}

#[derive(Args)]
struct NormalFormArgs {
    /// slots with nonzero a-type, comma separated
    #[arg(long, value_delimiter = ',')]
    tau: Vec<usize>,
    /// normal form entries i=v meaning pi^v at slot i (default 0)
    #[arg(long = "entry", value_delimiter = ',')]
    entries: Vec<String>,
}

impl NormalFormArgs {
    fn build(&self, tower: &CoeffTower) -> Result<NormalForm> {
        let r = tower.ram();
        let mut entries = BTreeMap::new();
        for s in &self.entries {
            let (i, v) = s.split_once('=').ok_or_else(|| Error::Parse(format!("entry {s:?} is not i=v")))?;
            entries.insert(parse::<usize>(i)?, r.pi_pow(parse(v)?));
        }
        Ok(NormalForm { tau: self.tau.clone(), entries })
    }
}

fn parse<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.trim().parse().map_err(|_| Error::Parse(format!("cannot parse {s:?}")))
}

fn parse_list(s: &Option<String>, f: usize) -> Result<Vec<u32>> {
    match s {
        None => Ok(vec![0; f]),
        Some(s) => s.split(',').map(parse).collect(),
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Fast,
    Oracle,
    Linearized,
    Auto,
}

impl From<Method> for NewtonMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Fast => NewtonMethod::Fast,
            Method::Oracle => NewtonMethod::Oracle,
            Method::Linearized => NewtonMethod::Linearized,
            Method::Auto => NewtonMethod::Auto,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Slope,
    NormalForm,
    Superspecial,
    NonRapoport,
    Deform,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Rapoport,
    General,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Arith,
    Slopes,
    Strata,
    Deform,
    Hecke,
    All,
}

enum Output {
    Json(serde_json::Value),
    Text(String),
    /// JSON printed, then exit 1
    Failed(serde_json::Value),
}

fn to_value<T: Serialize>(x: &T) -> serde_json::Value {
    serde_json::to_value(x).expect("serializable")
}

fn read_module(path: &str) -> Result<DModule> {
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Parse(format!("stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))?
    };
    DModule::from_json_str(&text)
}

fn with_pairing_note(m: &DModule) -> serde_json::Value {
    let mut v = m.to_json();
    if m.delta().is_none() {
        v["note"] = json!("no pairing with these coefficients; an even --ext absorbs the sign around the cycle");
    }
    v
}

fn run(cli: Cli) -> Result<Output> {
    let g = &cli.global;
    match cli.cmd {
        Cmd::Invariants { module, method } => {
            let m = read_module(&module)?;
            Ok(Output::Json(to_value(&invariants::report(&m, method.into())?)))
        }
        Cmd::Construct { family, a, nf, e1, e2, variant, target, assign } => {
            let tower = g.tower()?;
            let m = match family {
                Family::Slope => {
                    slope_family(&tower, a.ok_or_else(|| Error::InvalidParameter("--a is required".into()))?)?
                }
                Family::NormalForm => normal_form_module(&tower, &nf.build(&tower)?)?,
                Family::Superspecial => {
                    let v = match variant {
                        Variant::Rapoport => SuperspecialVariant::Rapoport,
                        Variant::General => SuperspecialVariant::General,
                    };
                    superspecial(&tower, e1, e2, v)?
                }
                Family::NonRapoport => non_rapoport_example(&tower)?,
                Family::Deform => {
                    let base = nf.build(&tower)?;
                    let target = parse_list(&target, tower.f())?;
                    let k = tower.field();
                    let mut assignment = BTreeMap::new();
                    for s in &assign {
                        let (key, val) = s.split_once('=').ok_or_else(|| Error::Parse(format!("{s:?} is not i:j=k")))?;
                        let (i, j) = key.split_once(':').ok_or_else(|| Error::Parse(format!("{key:?} is not i:j")))?;
                        let idx: u64 = parse(val)?;
                        if idx >= k.residue_size() {
                            return Err(Error::InvalidParameter(format!("{idx} is not a residue field index")));
                        }
                        assignment.insert((parse(i)?, parse(j)?), k.from_index(idx));
                    }
                    deform_specialize(&tower, &base, &target, &assignment)?
                }
            };
            Ok(Output::Json(with_pairing_note(&m)))
        }
        Cmd::Poset { format } => {
            let ps = strata::atype_poset(g.e as u32, g.f as u32, g.size_cap)?;
            Ok(match format {
                Format::Json => Output::Json(to_value(&ps)),
                Format::Dot => Output::Text(ps.to_dot()),
            })
        }
        Cmd::Hecke { s, chart_only: _, full_grassmannian } => {
            let r = heckeprobe::run_probe(g.p(), s, full_grassmannian, g.size_cap)?;
            Ok(Output::Json(to_value(&r)))
        }
        Cmd::SampleDeform { nf, target, trials, method } => {
            let tower = g.tower()?;
            let base = nf.build(&tower)?;
            let target = parse_list(&target, tower.f())?;
            let r = sample_deform(&tower, &base, &target, trials, g.seed, method.into())?;
            Ok(Output::Json(to_value(&r)))
        }
        Cmd::Verify { suite } => {
            let suite = match suite {
                SuiteArg::Arith => Suite::Arith,
                SuiteArg::Slopes => Suite::Slopes,
                SuiteArg::Strata => Suite::Strata,
                SuiteArg::Deform => Suite::Deform,
                SuiteArg::Hecke => Suite::Hecke,
                SuiteArg::All => Suite::All,
            };
            let mut cfg = VerifyConfig { seed: g.seed, size_cap: g.size_cap, ..VerifyConfig::default() };
            if let Some(p) = g.p {
                cfg.hecke_primes = vec![p];
            }
            let r = run_suite(suite, &cfg);
            let v = to_value(&r);
            Ok(if r.passed { Output::Json(v) } else { Output::Failed(v) })
        }
    }
}

fn print_json(v: &serde_json::Value, pretty: bool) {
    let s = if pretty { serde_json::to_string_pretty(v) } else { serde_json::to_string(v) };
    println!("{}", s.expect("serializable"));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pretty = cli.pretty;
    match run(cli) {
        Ok(Output::Json(v)) => {
            print_json(&v, pretty);
            ExitCode::SUCCESS
        }
        Ok(Output::Text(s)) => {
            print!("{s}");
            ExitCode::SUCCESS
        }
        Ok(Output::Failed(v)) => {
            print_json(&v, pretty);
            ExitCode::from(1)
        }
        Err(e) => {
            print_json(&json!({ "error": { "code": e.code(), "message": e.to_string() } }), pretty);
            ExitCode::from(1)
        }
    }
}
