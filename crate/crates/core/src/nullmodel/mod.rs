//! Item-free null model: citations are re-targeted to latency-biased random
//! earlier posts of the cited blog, many seeded realizations are run, and the
//! resulting cascade shapes are compared with the real ones.

mod compare;
mod config;
mod realizations;
mod rewire;

pub use compare::{compare, write_overlay, BucketRow, ComparisonReport, FlagCounts, OverlayRow, Representation, ShapeRow, ZScore};
pub use config::{ModelConfig, RewireConfig, DEFAULT_EPSILON_SECONDS, DEFAULT_REALIZATIONS, DEFAULT_THETA, DEFAULT_Z_THRESHOLD};
pub use realizations::{
    aggregate, cascade_profile, corpus_profile, realization_profile, run_profiles, run_realizations, CascadeProfile, MeanStd,
    ModelAggregate, RealizationProfile, ShapeAggregate,
};
pub use rewire::{fit_theta, realization_rng, rewire_citations, Rewirer, ThetaEstimate};
