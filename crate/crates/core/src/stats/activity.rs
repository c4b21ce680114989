use serde::Serialize;

use crate::error::{Error, Result};
use crate::ingest::{Corpus, Post, Window};
use crate::stats::EmpiricalDistribution;
use crate::time::SECONDS_PER_DAY;

pub const WEEKDAYS: [&str; 7] = ["Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeekdayActivity {
    /// Mean posts per calendar day, Monday first.
    pub averages: [f64; 7],
    /// 1 - mean(Sat, Sun) / mean(Mon..Fri); `None` when no weekday post exists.
    pub weekend_dip: Option<f64>,
}

/// Average daily post count per day of week, over the UTC calendar days the
/// window touches.
pub fn weekday_activity(posts: &[Post], window: Window) -> Result<WeekdayActivity> {
    let in_window: Vec<&Post> = posts.iter().filter(|p| window.contains(p.published_at)).collect();
    if in_window.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut posted = [0u64; 7];
    for p in in_window {
        posted[p.published_at.weekday_index()] += 1;
    }

    let mut occurrences = [0u64; 7];
    let first = window.start.date();
    let last = window.end.date();
    for day in first.iter_days().take_while(|d| *d <= last) {
        use chrono::Datelike;
        occurrences[day.weekday().num_days_from_monday() as usize] += 1;
    }

    let mut averages = [0.0; 7];
    for i in 0..7 {
        if occurrences[i] > 0 {
            averages[i] = posted[i] as f64 / occurrences[i] as f64;
        }
    }
    let weekday_mean = averages[..5].iter().sum::<f64>() / 5.0;
    let weekend_mean = (averages[5] + averages[6]) / 2.0;
    let weekend_dip = (weekday_mean > 0.0).then(|| 1.0 - weekend_mean / weekday_mean);
    Ok(WeekdayActivity { averages, weekend_dip })
}

/// Citation latencies in seconds (citing minus cited publication time), in
/// citation order.
pub fn latencies_seconds(corpus: &Corpus) -> Vec<i64> {
    corpus
        .arcs()
        .iter()
        .map(|&(s, d)| corpus.published_at(s).secs() - corpus.published_at(d).secs())
        .collect()
}

/// Whole days between a post and a post it cites, floored and clamped at 0.
pub fn latency_days(seconds: i64) -> u64 {
    seconds.max(0).div_euclid(SECONDS_PER_DAY) as u64
}

pub fn latency_distribution(corpus: &Corpus) -> EmpiricalDistribution {
    latencies_seconds(corpus).into_iter().map(latency_days).collect()
}
