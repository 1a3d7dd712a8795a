use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use padyn_core::dynamics::MapParams;
use padyn_core::ergodicity::SphereInstance;
use padyn_core::padic::{PadicRational, PrimeContext, DEFAULT_PRECISION};

use crate::CliError;

/// Everything a run depends on. Read from a TOML file, then overridden
/// field by field from the command line.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub p: Option<u32>,
    pub a: Option<String>,
    pub b: Option<String>,
    pub precision: Option<u32>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub iters: Option<usize>,
    pub sphere_exp: Option<i64>,
    pub residue_exp: Option<u32>,
    pub start: Option<String>,
    pub suite: Option<String>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
}

pub const DEFAULT_SAMPLES: usize = 100;
pub const DEFAULT_ITERS: usize = 200;

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Fields set in `over` win.
    pub fn merge(self, over: ExperimentConfig) -> Self {
        Self {
            p: over.p.or(self.p),
            a: over.a.or(self.a),
            b: over.b.or(self.b),
            precision: over.precision.or(self.precision),
            seed: over.seed.or(self.seed),
            samples: over.samples.or(self.samples),
            iters: over.iters.or(self.iters),
            sphere_exp: over.sphere_exp.or(self.sphere_exp),
            residue_exp: over.residue_exp.or(self.residue_exp),
            start: over.start.or(self.start),
            suite: over.suite.or(self.suite),
            out: over.out.or(self.out),
            format: over.format.or(self.format),
        }
    }

    pub fn precision(&self) -> u32 {
        self.precision.unwrap_or(DEFAULT_PRECISION)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn samples(&self) -> usize {
        self.samples.unwrap_or(DEFAULT_SAMPLES)
    }

    pub fn iters(&self) -> usize {
        self.iters.unwrap_or(DEFAULT_ITERS)
    }

    pub fn ctx(&self) -> Result<PrimeContext, CliError> {
        let p = self.p.ok_or_else(|| CliError::Config("missing prime -p".into()))?;
        Ok(PrimeContext::new(p, self.precision())?)
    }

    pub fn has_map(&self) -> bool {
        self.p.is_some() || self.a.is_some() || self.b.is_some()
    }

    pub fn map(&self) -> Result<MapParams, CliError> {
        let ctx = self.ctx()?;
        let a = self.a.as_deref().ok_or_else(|| CliError::Config("missing -a".into()))?;
        let b = self.b.as_deref().ok_or_else(|| CliError::Config("missing -b".into()))?;
        Ok(MapParams::new(
            PadicRational::new(ctx, parse_rational(a)?),
            PadicRational::new(ctx, parse_rational(b)?),
        )?)
    }

    /// The normalized map `a = 1` with sphere exponent `m`. An explicit
    /// `a` other than 1 is rejected.
    pub fn sphere_instance(&self) -> Result<SphereInstance, CliError> {
        let ctx = self.ctx()?;
        if let Some(a) = &self.a {
            if !parse_rational(a)?.is_one() {
                return Err(CliError::Config(format!(
                    "sphere instances need a = 1, got a = {a}"
                )));
            }
        }
        let b = self.b.as_deref().ok_or_else(|| CliError::Config("missing -b".into()))?;
        let m = self
            .sphere_exp
            .ok_or_else(|| CliError::Config("missing sphere exponent -m".into()))?;
        Ok(SphereInstance::new(PadicRational::new(ctx, parse_rational(b)?), m)?)
    }
}

/// Exact rationals as `n`, `n/d`, or `[-]P^V[*U]` with `U` itself `n` or `n/d`.
pub fn parse_rational(s: &str) -> Result<BigRational, CliError> {
    let s = s.trim();
    let bad = || CliError::Config(format!("cannot parse {s:?} as a rational"));
    if let Some((base, rest)) = s.split_once('^') {
        let (neg, base) = match base.strip_prefix('-') {
            Some(b) => (true, b),
            None => (false, base),
        };
        let (exp, unit) = match rest.split_once('*') {
            Some((e, u)) => (e, parse_plain(u).ok_or_else(bad)?),
            None => (rest, BigRational::one()),
        };
        let base: BigInt = base.trim().parse().map_err(|_| bad())?;
        let exp: i32 = exp.trim().parse().map_err(|_| bad())?;
        if base.is_zero() {
            return Err(bad());
        }
        let value = num_traits::pow::Pow::pow(BigRational::from_integer(base), exp) * unit;
        return Ok(if neg { -value } else { value });
    }
    parse_plain(s).ok_or_else(bad)
}

fn parse_plain(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            (!d.is_zero()).then(|| BigRational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}
