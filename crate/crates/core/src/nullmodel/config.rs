use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::motifs::{DEFAULT_CAP, MAX_CAP};

pub const DEFAULT_THETA: f64 = 1.5;
pub const DEFAULT_EPSILON_SECONDS: f64 = 3600.0;
pub const DEFAULT_REALIZATIONS: usize = 100;
pub const DEFAULT_Z_THRESHOLD: f64 = 3.0;

/// Parameters of the latency-biased re-targeting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RewireConfig {
    /// Candidate weight is max(latency, epsilon)^(-theta).
    pub theta: f64,
    pub epsilon_seconds: f64,
    pub realizations: usize,
    pub base_seed: u64,
}

impl Default for RewireConfig {
    fn default() -> Self {
        RewireConfig {
            theta: DEFAULT_THETA,
            epsilon_seconds: DEFAULT_EPSILON_SECONDS,
            realizations: DEFAULT_REALIZATIONS,
            base_seed: 0,
        }
    }
}

impl RewireConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.theta > 0.0 && self.theta.is_finite()) {
            return Err(Error::Config(format!("theta must be positive, got {}", self.theta)));
        }
        if !(self.epsilon_seconds > 0.0 && self.epsilon_seconds.is_finite()) {
            return Err(Error::Config(format!(
                "epsilon_seconds must be positive, got {}",
                self.epsilon_seconds
            )));
        }
        if self.realizations == 0 {
            return Err(Error::Config("realizations must be at least 1".into()));
        }
        Ok(())
    }
}

/// Everything a comparison run needs. Read from `key = value` lines; `#`
/// starts a comment. A missing `theta` means "fit it from the corpus".
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelConfig {
    pub theta: Option<f64>,
    pub epsilon_seconds: f64,
    pub realizations: usize,
    pub base_seed: u64,
    pub z_threshold: f64,
    pub cap: usize,
    /// Upper latency bound (days) for the theta fit.
    pub latency_xmax: Option<u64>,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            theta: None,
            epsilon_seconds: DEFAULT_EPSILON_SECONDS,
            realizations: DEFAULT_REALIZATIONS,
            base_seed: 0,
            z_threshold: DEFAULT_Z_THRESHOLD,
            cap: DEFAULT_CAP,
            latency_xmax: None,
        }
    }
}

impl ModelConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut config = ModelConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
            config.set(key.trim(), value.trim())?;
        }
        config.validate()?;
        Ok(config)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
            value
                .parse()
                .map_err(|_| Error::Config(format!("{key}: cannot parse {value:?}")))
        }
        match key {
            "theta" => self.theta = Some(num(key, value)?),
            "epsilon" | "epsilon_seconds" => self.epsilon_seconds = num(key, value)?,
            "realizations" => self.realizations = num(key, value)?,
            "seed" | "base_seed" => self.base_seed = num(key, value)?,
            "z_threshold" => self.z_threshold = num(key, value)?,
            "cap" => self.cap = num(key, value)?,
            "latency_xmax" => self.latency_xmax = Some(num(key, value)?),
            other => return Err(Error::Config(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.rewire(self.theta.unwrap_or(DEFAULT_THETA)).validate()?;
        if !(self.z_threshold > 0.0) {
            return Err(Error::Config(format!("z_threshold must be positive, got {}", self.z_threshold)));
        }
        if !(2..=MAX_CAP).contains(&self.cap) {
            return Err(Error::Config(format!("cap must be in 2..={MAX_CAP}, got {}", self.cap)));
        }
        Ok(())
    }

    pub fn rewire(&self, theta: f64) -> RewireConfig {
        RewireConfig {
            theta,
            epsilon_seconds: self.epsilon_seconds,
            realizations: self.realizations,
            base_seed: self.base_seed,
        }
    }

    /// Renders the config in the same `key = value` format `parse` reads.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        if let Some(theta) = self.theta {
            writeln!(s, "theta = {theta}").unwrap();
        }
        writeln!(s, "epsilon_seconds = {}", self.epsilon_seconds).unwrap();
        writeln!(s, "realizations = {}", self.realizations).unwrap();
        writeln!(s, "base_seed = {}", self.base_seed).unwrap();
        writeln!(s, "z_threshold = {}", self.z_threshold).unwrap();
        writeln!(s, "cap = {}", self.cap).unwrap();
        if let Some(x) = self.latency_xmax {
            writeln!(s, "latency_xmax = {x}").unwrap();
        }
        s
    }
}
