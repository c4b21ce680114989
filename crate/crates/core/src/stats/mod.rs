//! Distributional statistics: activity, latencies, blog degrees,
//! correlations and power-law fits.

mod activity;
mod correlation;
mod degrees;
mod distribution;
pub mod powerlaw;
pub mod zeta;

pub use activity::{latency_days, latency_distribution, latencies_seconds, weekday_activity, WeekdayActivity, WEEKDAYS};
pub use correlation::{average_ranks, pearson, rank_correlation};
pub use degrees::{degree_distributions, BlogDegree, DegreeStats};
pub use distribution::EmpiricalDistribution;
pub use powerlaw::{fit_power_law, FitMethod, PowerLawFit, PowerLawFits};
