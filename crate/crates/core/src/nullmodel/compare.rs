use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::motifs::ShapeCode;
use crate::nullmodel::realizations::{CascadeProfile, MeanStd, ModelAggregate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Representation {
    Over,
    Under,
    Consistent,
}

/// z-score of a real count against the model. A shape the model never
/// varies on gets an infinite sentinel when the real count differs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ZScore {
    Finite(f64),
    PosInf,
    NegInf,
    /// Model dispersion is zero and the real count equals the model mean.
    Undefined,
}

impl ZScore {
    pub fn of(real: f64, model: MeanStd) -> ZScore {
        if model.std > 0.0 {
            ZScore::Finite((real - model.mean) / model.std)
        } else if real > model.mean {
            ZScore::PosInf
        } else if real < model.mean {
            ZScore::NegInf
        } else {
            ZScore::Undefined
        }
    }

    pub fn flag(self, threshold: f64) -> Representation {
        match self {
            ZScore::Finite(z) if z > threshold => Representation::Over,
            ZScore::Finite(z) if z < -threshold => Representation::Under,
            ZScore::PosInf => Representation::Over,
            ZScore::NegInf => Representation::Under,
            _ => Representation::Consistent,
        }
    }
}

/// Finite values as numbers, infinities as `"+inf"` / `"-inf"`, undefined as
/// `null`.
impl Serialize for ZScore {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ZScore::Finite(z) => s.serialize_f64(*z),
            ZScore::PosInf => s.serialize_str("+inf"),
            ZScore::NegInf => s.serialize_str("-inf"),
            ZScore::Undefined => s.serialize_none(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShapeRow {
    pub code: String,
    pub node_count: usize,
    pub arc_count: usize,
    pub sc: Option<f64>,
    pub real: usize,
    pub model_mean: f64,
    pub model_std: f64,
    pub z: ZScore,
    pub flag: Representation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BucketRow {
    pub size: usize,
    pub depth: usize,
    pub real: usize,
    pub model_mean: f64,
    pub model_std: f64,
    pub z: ZScore,
    pub flag: Representation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OverlayRow {
    pub value: u64,
    pub real: u64,
    pub model_mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlagCounts {
    pub over: usize,
    pub under: usize,
    pub consistent: usize,
    /// Share of rows with sc >= 2/3 among flagged rows with a defined sc.
    pub over_high_sc_share: Option<f64>,
    pub under_high_sc_share: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub z_threshold: f64,
    pub realizations: usize,
    pub cap: usize,
    pub real_cascades: u64,
    pub model_cascades: MeanStd,
    pub model_duplicate_citations: MeanStd,
    pub flags: FlagCounts,
    /// Decreasing real frequency, then decreasing model mean, then code.
    pub shapes: Vec<ShapeRow>,
    pub above_cap_buckets: Vec<BucketRow>,
    pub size_overlay: Vec<OverlayRow>,
    pub depth_overlay: Vec<OverlayRow>,
}

impl ComparisonReport {
    pub fn row(&self, code: &ShapeCode) -> Option<&ShapeRow> {
        let hex = code.hex();
        self.shapes
            .iter()
            .find(|r| r.node_count == code.node_count() && r.code == hex)
    }

    pub fn write_json<W: Write>(&self, w: W) -> Result<()> {
        serde_json::to_writer_pretty(w, self)?;
        Ok(())
    }
}

/// Flags every shape seen in either the real census or any realization.
pub fn compare(real: &CascadeProfile, model: &ModelAggregate, z_threshold: f64) -> Result<ComparisonReport> {
    if real.census.cap != model.cap {
        return Err(Error::CapMismatch {
            real: real.census.cap,
            model: model.cap,
        });
    }
    let zero = MeanStd { mean: 0.0, std: 0.0 };

    let mut codes: BTreeSet<&ShapeCode> = real.census.entries.iter().map(|e| &e.code).collect();
    codes.extend(model.shapes.iter().map(|s| &s.code));
    let model_by_code: BTreeMap<&ShapeCode, MeanStd> = model.shapes.iter().map(|s| (&s.code, s.frequency)).collect();
    let mut shapes: Vec<ShapeRow> = codes
        .into_iter()
        .map(|code| {
            let real_n = real.census.frequency(code);
            let m = model_by_code.get(code).copied().unwrap_or(zero);
            let z = ZScore::of(real_n as f64, m);
            ShapeRow {
                code: code.hex(),
                node_count: code.node_count(),
                arc_count: code.arc_count(),
                sc: code.sc().map(|r| r.value()),
                real: real_n,
                model_mean: m.mean,
                model_std: m.std,
                z,
                flag: z.flag(z_threshold),
            }
        })
        .collect();
    shapes.sort_by(|a, b| {
        b.real
            .cmp(&a.real)
            .then_with(|| b.model_mean.total_cmp(&a.model_mean))
            .then_with(|| (a.node_count, &a.code).cmp(&(b.node_count, &b.code)))
    });

    let mut bucket_keys: BTreeSet<(usize, usize)> = real.census.above_cap_buckets.keys().copied().collect();
    bucket_keys.extend(model.above_cap_buckets.keys().copied());
    let above_cap_buckets = bucket_keys
        .into_iter()
        .map(|key| {
            let real_n = real.census.above_cap_buckets.get(&key).copied().unwrap_or(0);
            let m = model.above_cap_buckets.get(&key).copied().unwrap_or(zero);
            let z = ZScore::of(real_n as f64, m);
            BucketRow {
                size: key.0,
                depth: key.1,
                real: real_n,
                model_mean: m.mean,
                model_std: m.std,
                z,
                flag: z.flag(z_threshold),
            }
        })
        .collect();

    Ok(ComparisonReport {
        z_threshold,
        realizations: model.realizations,
        cap: model.cap,
        real_cascades: real.cascade_count(),
        model_cascades: model.cascades,
        model_duplicate_citations: model.duplicate_citations,
        flags: flag_counts(&shapes),
        shapes,
        above_cap_buckets,
        size_overlay: overlay(&real.sizes, &model.sizes),
        depth_overlay: overlay(&real.depths, &model.depths),
    })
}

fn flag_counts(rows: &[ShapeRow]) -> FlagCounts {
    let count = |f: Representation| rows.iter().filter(|r| r.flag == f).count();
    let high_sc_share = |f: Representation| {
        let scs: Vec<f64> = rows.iter().filter(|r| r.flag == f).filter_map(|r| r.sc).collect();
        (!scs.is_empty()).then(|| scs.iter().filter(|&&sc| 3.0 * sc >= 2.0 - 1e-12).count() as f64 / scs.len() as f64)
    };
    FlagCounts {
        over: count(Representation::Over),
        under: count(Representation::Under),
        consistent: count(Representation::Consistent),
        over_high_sc_share: high_sc_share(Representation::Over),
        under_high_sc_share: high_sc_share(Representation::Under),
    }
}

fn overlay(real: &crate::stats::EmpiricalDistribution, model: &BTreeMap<u64, f64>) -> Vec<OverlayRow> {
    let mut values: BTreeSet<u64> = real.iter().map(|(v, _)| v).collect();
    values.extend(model.keys().copied());
    values
        .into_iter()
        .map(|v| OverlayRow {
            value: v,
            real: real.count(v),
            model_mean: model.get(&v).copied().unwrap_or(0.0),
        })
        .collect()
}

/// CSV columns: value, real, model_mean.
pub fn write_overlay<W: Write>(w: W, rows: &[OverlayRow]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["value", "real", "model_mean"])?;
    for r in rows {
        wtr.write_record([r.value.to_string(), r.real.to_string(), r.model_mean.to_string()])?;
    }
    wtr.flush()?;
    Ok(())
}
