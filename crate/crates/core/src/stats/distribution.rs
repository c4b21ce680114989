use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use crate::error::Result;

/// Histogram over non-negative integer values (days, counts, sizes).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct EmpiricalDistribution {
    counts: BTreeMap<u64, u64>,
    total: u64,
}

impl EmpiricalDistribution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: u64) {
        self.add_n(value, 1);
    }

    pub fn add_n(&mut self, value: u64, n: u64) {
        if n > 0 {
            *self.counts.entry(value).or_insert(0) += n;
            self.total += n;
        }
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn count(&self, value: u64) -> u64 {
        self.counts.get(&value).copied().unwrap_or(0)
    }

    /// (value, count) pairs in ascending value order; counts are positive.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.counts.iter().map(|(&v, &c)| (v, c))
    }

    pub fn pdf(&self, value: u64) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.count(value) as f64 / self.total as f64
        }
    }

    /// Restriction to `lo..=hi`.
    pub fn restrict(&self, lo: u64, hi: Option<u64>) -> EmpiricalDistribution {
        let mut out = EmpiricalDistribution::new();
        for (v, c) in self.iter() {
            if v >= lo && hi.is_none_or(|h| v <= h) {
                out.add_n(v, c);
            }
        }
        out
    }

    /// Kolmogorov-Smirnov distance between two histograms on the integers.
    pub fn ks_distance(&self, other: &EmpiricalDistribution) -> f64 {
        if self.total == 0 || other.total == 0 {
            return if self.total == other.total { 0.0 } else { 1.0 };
        }
        let mut values: Vec<u64> = self.counts.keys().chain(other.counts.keys()).copied().collect();
        values.sort_unstable();
        values.dedup();
        let (mut ca, mut cb) = (0u64, 0u64);
        let mut d: f64 = 0.0;
        for v in values {
            ca += self.count(v);
            cb += other.count(v);
            d = d.max((ca as f64 / self.total as f64 - cb as f64 / other.total as f64).abs());
        }
        d
    }

    /// CSV columns: value, count, pdf.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["value", "count", "pdf"])?;
        for (v, c) in self.iter() {
            wtr.write_record([v.to_string(), c.to_string(), self.pdf(v).to_string()])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

impl FromIterator<u64> for EmpiricalDistribution {
    fn from_iter<I: IntoIterator<Item = u64>>(iter: I) -> Self {
        let mut d = EmpiricalDistribution::new();
        for v in iter {
            d.add(v);
        }
        d
    }
}
