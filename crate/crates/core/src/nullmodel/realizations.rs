use std::collections::{BTreeMap, HashSet};
use std::ops::Range;

use rayon::prelude::*;
use serde::Serialize;

use crate::cascade::{cascade_depth, extract_all_cascades, Cascade};
use crate::error::Result;
use crate::graph::CitationGraph;
use crate::ingest::Corpus;
use crate::motifs::{shape_census, ShapeCensus, ShapeCode};
use crate::nullmodel::config::RewireConfig;
use crate::nullmodel::rewire::Rewirer;
use crate::stats::EmpiricalDistribution;

/// Cascade-level summary of one corpus or one model realization.
#[derive(Debug, Clone, PartialEq)]
pub struct CascadeProfile {
    pub census: ShapeCensus,
    pub sizes: EmpiricalDistribution,
    pub depths: EmpiricalDistribution,
}

impl CascadeProfile {
    pub fn cascade_count(&self) -> u64 {
        self.sizes.total()
    }
}

pub fn cascade_profile(cascades: &[Cascade], cap: usize) -> CascadeProfile {
    let depths: Vec<u64> = cascades.par_iter().map(|c| cascade_depth(c) as u64).collect();
    CascadeProfile {
        census: shape_census(cascades, cap),
        sizes: cascades.iter().map(|c| c.size() as u64).collect(),
        depths: depths.into_iter().collect(),
    }
}

pub fn corpus_profile(corpus: &Corpus, cap: usize) -> CascadeProfile {
    cascade_profile(&extract_all_cascades(&corpus.graph()), cap)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RealizationProfile {
    pub index: u64,
    pub profile: CascadeProfile,
    /// Synthetic citations repeating an earlier (source, target) pair.
    pub duplicate_citations: usize,
}

pub fn realization_profile(rewirer: &Rewirer<'_>, index: u64, cap: usize) -> RealizationProfile {
    let arcs = rewirer.rewire(index);
    let mut seen = HashSet::with_capacity(arcs.len());
    let duplicate_citations = arcs.iter().filter(|a| !seen.insert(**a)).count();
    let graph = CitationGraph::new(rewirer.corpus().posts().len(), arcs);
    RealizationProfile {
        index,
        profile: cascade_profile(&extract_all_cascades(&graph), cap),
        duplicate_citations,
    }
}

/// Profiles for a range of realization indices, in index order whether or
/// not the work runs in parallel.
pub fn run_profiles(rewirer: &Rewirer<'_>, indices: Range<u64>, cap: usize, parallel: bool) -> Vec<RealizationProfile> {
    if parallel {
        indices
            .into_par_iter()
            .map(|i| realization_profile(rewirer, i, cap))
            .collect()
    } else {
        indices.map(|i| realization_profile(rewirer, i, cap)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanStd {
    pub mean: f64,
    /// Sample standard deviation; 0 for a single realization.
    pub std: f64,
}

impl MeanStd {
    /// Values are folded in the given order.
    pub fn of(values: &[f64]) -> MeanStd {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let std = if values.len() > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        MeanStd { mean, std }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShapeAggregate {
    pub code: ShapeCode,
    pub frequency: MeanStd,
    /// Realizations in which the shape occurs at least once.
    pub present_in: usize,
}

/// Per-shape and per-distribution statistics across realizations.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelAggregate {
    pub realizations: usize,
    pub cap: usize,
    /// Decreasing mean frequency, ties by code.
    pub shapes: Vec<ShapeAggregate>,
    pub above_cap_buckets: BTreeMap<(usize, usize), MeanStd>,
    /// Mean number of cascades per size value.
    pub sizes: BTreeMap<u64, f64>,
    pub depths: BTreeMap<u64, f64>,
    pub cascades: MeanStd,
    pub duplicate_citations: MeanStd,
}

impl ModelAggregate {
    pub fn shape(&self, code: &ShapeCode) -> Option<&ShapeAggregate> {
        self.shapes.iter().find(|s| &s.code == code)
    }
}

/// Folds realization profiles in the order given.
pub fn aggregate(profiles: &[RealizationProfile], cap: usize) -> ModelAggregate {
    let r = profiles.len();
    assert!(r > 0, "aggregate of zero realizations");

    let mut shapes: BTreeMap<ShapeCode, Vec<f64>> = BTreeMap::new();
    let mut buckets: BTreeMap<(usize, usize), Vec<f64>> = BTreeMap::new();
    let mut sizes: BTreeMap<u64, f64> = BTreeMap::new();
    let mut depths: BTreeMap<u64, f64> = BTreeMap::new();
    for (i, p) in profiles.iter().enumerate() {
        for e in &p.profile.census.entries {
            shapes.entry(e.code.clone()).or_insert_with(|| vec![0.0; r])[i] = e.frequency as f64;
        }
        for (&b, &n) in &p.profile.census.above_cap_buckets {
            buckets.entry(b).or_insert_with(|| vec![0.0; r])[i] = n as f64;
        }
        for (v, c) in p.profile.sizes.iter() {
            *sizes.entry(v).or_insert(0.0) += c as f64;
        }
        for (v, c) in p.profile.depths.iter() {
            *depths.entry(v).or_insert(0.0) += c as f64;
        }
    }
    sizes.values_mut().for_each(|v| *v /= r as f64);
    depths.values_mut().for_each(|v| *v /= r as f64);

    let mut shapes: Vec<ShapeAggregate> = shapes
        .into_iter()
        .map(|(code, counts)| ShapeAggregate {
            present_in: counts.iter().filter(|&&c| c > 0.0).count(),
            frequency: MeanStd::of(&counts),
            code,
        })
        .collect();
    shapes.sort_by(|a, b| {
        b.frequency
            .mean
            .total_cmp(&a.frequency.mean)
            .then_with(|| a.code.cmp(&b.code))
    });

    let cascades: Vec<f64> = profiles.iter().map(|p| p.profile.cascade_count() as f64).collect();
    let duplicates: Vec<f64> = profiles.iter().map(|p| p.duplicate_citations as f64).collect();
    ModelAggregate {
        realizations: r,
        cap,
        shapes,
        above_cap_buckets: buckets.into_iter().map(|(b, v)| (b, MeanStd::of(&v))).collect(),
        sizes,
        depths,
        cascades: MeanStd::of(&cascades),
        duplicate_citations: MeanStd::of(&duplicates),
    }
}

/// Runs `config.realizations` rewirings (indices `0..R`) and aggregates them.
pub fn run_realizations(corpus: &Corpus, config: &RewireConfig, cap: usize, parallel: bool) -> Result<ModelAggregate> {
    let rewirer = Rewirer::new(corpus, *config)?;
    let profiles = run_profiles(&rewirer, 0..config.realizations as u64, cap, parallel);
    Ok(aggregate(&profiles, cap))
}
