//! Discrete power-law fitting, p(x) proportional to x^(-a) for integer
//! x >= xmin (optionally x <= xmax).
//!
//! The primary estimate maximizes the discrete likelihood, whose normalizer
//! is a Hurwitz zeta value (or a finite power sum under truncation). The
//! secondary estimate is a least-squares slope on a log-binned histogram,
//! which is closer to what reading a slope off a log-log plot gives.
//! Exponents are reported with a negative sign, as slopes.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::stats::zeta::power_sum;
use crate::stats::EmpiricalDistribution;

pub const MIN_SAMPLES: u64 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitMethod {
    Mle,
    LogBinnedLeastSquares,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerLawFit {
    pub method: FitMethod,
    /// Negative slope, e.g. -1.5.
    pub exponent: f64,
    pub xmin: u64,
    pub xmax: Option<u64>,
    /// KS distance between the fitted and empirical CDFs; `None` when the
    /// fitted law is not normalizable.
    pub ks_statistic: Option<f64>,
    pub sample_size: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerLawFits {
    pub mle: PowerLawFit,
    pub log_binned: Option<PowerLawFit>,
}

pub fn fit_power_law(dist: &EmpiricalDistribution, xmin: u64, xmax: Option<u64>) -> Result<PowerLawFits> {
    let xmin = xmin.max(1);
    let tail = dist.restrict(xmin, xmax);
    if tail.total() < MIN_SAMPLES {
        return Err(Error::TooFewSamples {
            have: tail.total(),
            need: MIN_SAMPLES,
        });
    }
    let mut values = tail.iter();
    let (first, _) = values.next().expect("non-empty");
    if values.next().is_none() {
        return Err(Error::DegenerateSample(first));
    }

    let a = discrete_mle(&tail, xmin, xmax);
    let mle = PowerLawFit {
        method: FitMethod::Mle,
        exponent: -a,
        xmin,
        xmax,
        ks_statistic: Some(ks_statistic(&tail, a, xmin, xmax)),
        sample_size: tail.total(),
    };
    let log_binned = log_binned_slope(&tail, xmin, xmax).map(|slope| {
        let a = -slope;
        let normalizable = a > 1.0 || xmax.is_some_and(|h| h - xmin < 4_096);
        PowerLawFit {
            method: FitMethod::LogBinnedLeastSquares,
            exponent: slope,
            xmin,
            xmax,
            ks_statistic: normalizable.then(|| ks_statistic(&tail, a, xmin, xmax)),
            sample_size: tail.total(),
        }
    });
    Ok(PowerLawFits { mle, log_binned })
}

/// Maximum-likelihood exponent magnitude `a` for samples already restricted
/// to `[xmin, xmax]`.
pub fn discrete_mle(tail: &EmpiricalDistribution, xmin: u64, xmax: Option<u64>) -> f64 {
    let n = tail.total() as f64;
    let mean_log = tail.iter().map(|(v, c)| c as f64 * (v as f64).ln()).sum::<f64>() / n;
    // Per-sample negative log-likelihood; convex in a since ln Z is.
    let nll = |a: f64| a * mean_log + power_sum(a, xmin, xmax).ln();
    let small_range = xmax.is_some_and(|h| h - xmin < 4_096);
    let lo = if small_range { 0.0 } else { 1.0 + 1e-9 };
    golden_section_min(nll, lo, 20.0, 1e-10)
}

fn golden_section_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    (lo + hi) / 2.0
}

/// Largest gap between the empirical CDF and the fitted discrete CDF over
/// all integers in the support.
pub fn ks_statistic(tail: &EmpiricalDistribution, a: f64, xmin: u64, xmax: Option<u64>) -> f64 {
    let z = power_sum(a, xmin, xmax);
    let cdf = |x: u64| {
        if x < xmin {
            0.0
        } else {
            1.0 - power_sum(a, x + 1, xmax) / z
        }
    };
    let n = tail.total() as f64;
    let mut seen = 0u64;
    let mut d: f64 = 0.0;
    for (v, c) in tail.iter() {
        let before = seen as f64 / n;
        // The empirical CDF is flat on [previous value, v - 1]; the model CDF
        // is increasing there, so the gap peaks at v - 1.
        d = d.max((cdf(v.saturating_sub(1)) - before).abs());
        seen += c;
        d = d.max((cdf(v) - seen as f64 / n).abs());
    }
    d.min(1.0)
}

/// Least-squares slope of log density against log bin center, with bins
/// `[xmin * 2^k, xmin * 2^(k+1))`. `None` with fewer than two non-empty bins.
pub fn log_binned_slope(tail: &EmpiricalDistribution, xmin: u64, xmax: Option<u64>) -> Option<f64> {
    let n = tail.total() as f64;
    let mut points = Vec::new();
    let mut lo = xmin.max(1);
    let last = tail.iter().last()?.0;
    while lo <= last {
        let hi = lo.saturating_mul(2);
        let upper = xmax.map_or(hi - 1, |h| (hi - 1).min(h));
        let count: u64 = tail.iter().filter(|&(v, _)| v >= lo && v <= upper).map(|(_, c)| c).sum();
        if count > 0 {
            let width = (upper - lo + 1) as f64;
            let center = ((lo as f64) * (upper as f64)).sqrt();
            points.push((center.ln(), (count as f64 / (n * width)).ln()));
        }
        lo = hi;
    }
    if points.len() < 2 {
        return None;
    }
    let m = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / m;
    let my = points.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}
