//! Experiment descriptions and their config-file form.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use super::ensemble::DEFAULT_BUDGET;
use crate::error::{Error, Result};
use crate::roots::DEFAULT_TOL;

/// Largest denominator accepted for a `nu` value.
const MAX_NU_DENOMINATOR: u32 = 10_000;

/// Exponent parameter `nu`, kept as an exact decimal rational so that the
/// threshold `Q^{2n-2-2nu}` can be rounded without floating-point ambiguity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nu {
    value: BigRational,
    text: String,
}

impl Nu {
    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64().expect("small rational")
    }

    pub fn from_f64(x: f64) -> Result<Self> {
        // Shortest round-trip decimal, so 0.1 means one tenth.
        format!("{x}").parse()
    }

    /// Checks `0 <= nu < n - 1`.
    pub fn check_range(&self, n: usize) -> Result<()> {
        let upper = BigRational::from_integer(BigInt::from(n as i64 - 1));
        if self.value.is_negative() || self.value >= upper {
            return Err(Error::InvalidArgument(format!(
                "nu = {} outside [0, {})",
                self.text,
                n as i64 - 1
            )));
        }
        Ok(())
    }
}

impl FromStr for Nu {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || Error::Parse(format!("nu must be a plain decimal, got {t:?}"));
        let (neg, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{int_part}{frac_part}");
        let mut num: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| bad())? };
        if neg {
            num = -num;
        }
        let den = num_traits::pow(BigInt::from(10), frac_part.len());
        let value = BigRational::new(num, den);
        if value.denom() > &BigInt::from(MAX_NU_DENOMINATOR) {
            return Err(Error::Parse(format!(
                "nu {t:?} has more than four significant fractional digits"
            )));
        }
        Ok(Self {
            value,
            text: t.to_string(),
        })
    }
}

impl fmt::Display for Nu {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl Serialize for Nu {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.text)
    }
}

impl<'de> Deserialize<'de> for Nu {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        let text = match v {
            serde_json::Value::String(s) => s,
            serde_json::Value::Number(n) => n.to_string(),
            other => return Err(de::Error::custom(format!("bad nu: {other}"))),
        };
        text.parse().map_err(de::Error::custom)
    }
}

/// `ceil(Q^{2n-2-2nu})`, exact. For integer `T >= 0`, `|D| < Q^e` holds iff
/// `|D| < ceil(Q^e)`.
pub fn tail_threshold(n: usize, q: u64, nu: &Nu) -> BigInt {
    let e = BigRational::from_integer(BigInt::from(2 * n as i64 - 2))
        - BigRational::from_integer(BigInt::from(2)) * nu.value();
    assert!(e.is_positive(), "exponent must be positive");
    let (p, r) = (e.numer().clone(), e.denom().clone());
    let p_u = p.to_usize().expect("small exponent");
    let r_u = r.to_usize().expect("small denominator");
    let q_pow_p = num_traits::pow(BigInt::from(q), p_u);
    // T >= Q^{p/r}  <=>  T^r >= Q^p
    let at_least = |t: &BigInt| num_traits::pow(t.clone(), r_u) >= q_pow_p;
    let guess = (q as f64).powf(e.to_f64().expect("finite")).ceil();
    let mut t = BigInt::from_f64(guess).unwrap_or_default();
    while t.is_positive() && at_least(&(&t - 1)) {
        t -= 1;
    }
    while !at_least(&t) {
        t += 1;
    }
    t
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    /// `G_Q`: integer coefficients uniform on `{-Q, ..., Q}`.
    Discrete,
    /// `G`: real coefficients uniform on `[-1, 1]`.
    Continuous,
    /// Pair `(G_Q, F_Q)` of degrees `(n, m)`.
    ResultantDiscrete,
    /// Pair `(G, F)` of degrees `(n, m)`.
    ResultantContinuous,
}

impl FromStr for Model {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "discrete" | "G_Q" | "gq" => Ok(Model::Discrete),
            "continuous" | "G" | "g" => Ok(Model::Continuous),
            "resultant-discrete" => Ok(Model::ResultantDiscrete),
            "resultant-continuous" => Ok(Model::ResultantContinuous),
            other => Err(Error::Parse(format!("unknown model {other:?}"))),
        }
    }
}

impl Model {
    pub fn is_discrete(self) -> bool {
        matches!(self, Model::Discrete | Model::ResultantDiscrete)
    }
}

/// Sample count, or a full enumeration of the discrete ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Samples {
    Exhaustive,
    MonteCarlo(u64),
}

impl Samples {
    pub fn mode_name(self) -> &'static str {
        match self {
            Samples::Exhaustive => "exhaustive",
            Samples::MonteCarlo(_) => "montecarlo",
        }
    }
}

impl FromStr for Samples {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "exhaustive" {
            return Ok(Samples::Exhaustive);
        }
        let n = parse_count(s)?;
        if n == 0 {
            return Err(Error::InvalidArgument("sample count must be positive".into()));
        }
        Ok(Samples::MonteCarlo(n))
    }
}

impl fmt::Display for Samples {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Samples::Exhaustive => f.write_str("exhaustive"),
            Samples::MonteCarlo(n) => write!(f, "{n}"),
        }
    }
}

impl Serialize for Samples {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Samples::Exhaustive => s.serialize_str("exhaustive"),
            Samples::MonteCarlo(n) => s.serialize_u64(*n),
        }
    }
}

impl<'de> Deserialize<'de> for Samples {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::String(s) => s.parse().map_err(de::Error::custom),
            serde_json::Value::Number(n) => n
                .as_u64()
                .filter(|&n| n > 0)
                .map(Samples::MonteCarlo)
                .ok_or_else(|| de::Error::custom("sample count must be a positive integer")),
            other => Err(de::Error::custom(format!("bad sample count: {other}"))),
        }
    }
}

/// Accepts plain integers and `1e6`-style powers of ten.
pub fn parse_count(s: &str) -> Result<u64> {
    let s = s.trim().replace('_', "");
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    if let Some((m, e)) = s.split_once(['e', 'E']) {
        if let (Ok(m), Ok(e)) = (m.parse::<u64>(), e.parse::<u32>()) {
            if let Some(v) = 10u64.checked_pow(e).and_then(|p| p.checked_mul(m)) {
                return Ok(v);
            }
        }
    }
    Err(Error::Parse(format!("not a count: {s:?}")))
}

/// Full description of one experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub model: Model,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(rename = "Q", alias = "q")]
    pub q: u64,
    #[serde(rename = "N", alias = "samples")]
    pub samples: Samples,
    #[serde(default)]
    pub nu_grid: Vec<Nu>,
    pub seed: u64,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_budget")]
    pub budget: u128,
}

fn default_tol() -> f64 {
    DEFAULT_TOL
}

fn default_budget() -> u128 {
    DEFAULT_BUDGET
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            model: Model::Discrete,
            n: 2,
            m: None,
            q: 10,
            samples: Samples::Exhaustive,
            nu_grid: Vec::new(),
            seed: 0,
            tol: DEFAULT_TOL,
            budget: DEFAULT_BUDGET,
        }
    }
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.model.is_discrete() && self.q == 0 {
            return Err(Error::InvalidArgument("Q must be >= 1".into()));
        }
        if matches!(self.model, Model::ResultantDiscrete | Model::ResultantContinuous) {
            match self.m {
                Some(m) if m >= 1 && self.n >= 1 => {}
                _ => return Err(Error::InvalidArgument("resultant models need n, m >= 1".into())),
            }
        }
        if self.samples == Samples::Exhaustive {
            if !self.model.is_discrete() {
                return Err(Error::InvalidArgument(
                    "exhaustive mode needs a discrete model".into(),
                ));
            }
            let needed = self.exhaustive_size();
            if needed > self.budget {
                return Err(Error::BudgetExceeded {
                    needed,
                    budget: self.budget,
                });
            }
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::InvalidArgument("tol must be positive".into()));
        }
        for nu in &self.nu_grid {
            nu.check_range(self.n)?;
        }
        Ok(())
    }

    /// `(2Q+1)^{#coefficients}` for the discrete model.
    pub fn exhaustive_size(&self) -> u128 {
        let coeffs = self.n + 1 + self.m.map_or(0, |m| m + 1) * usize::from(self.model == Model::ResultantDiscrete);
        let w = 2 * self.q as u128 + 1;
        (0..coeffs).try_fold(1u128, |a, _| a.checked_mul(w)).unwrap_or(u128::MAX)
    }

    /// Parses either a JSON document or `key = value` lines (`#` comments).
    pub fn from_config_str(text: &str) -> Result<Self> {
        let trimmed = text.trim_start();
        if trimmed.starts_with('{') {
            return serde_json::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")));
        }
        let mut spec = ExperimentSpec::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("config line {}: expected key=value", lineno + 1)))?;
            spec.set(key.trim(), value.trim())?;
        }
        Ok(spec)
    }

    /// Sets one field from its textual form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let int = |v: &str| -> Result<u64> { parse_count(v) };
        match key {
            "model" => self.model = value.parse()?,
            "n" => self.n = int(value)? as usize,
            "m" => self.m = Some(int(value)? as usize),
            "Q" | "q" => self.q = int(value)?,
            "N" | "samples" | "mode" => self.samples = value.parse()?,
            "nu" | "nu_grid" => {
                self.nu_grid = value
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(str::parse)
                    .collect::<Result<_>>()?
            }
            "seed" => {
                self.seed = value
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad seed {value:?}")))?
            }
            "tol" => {
                self.tol = value
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad tol {value:?}")))?
            }
            "budget" => self.budget = int(value)? as u128,
            other => return Err(Error::Parse(format!("unknown config key {other:?}"))),
        }
        Ok(())
    }
}

pub(crate) fn rational_to_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
