//! Seeded synthetic corpora for tests, benchmarks and examples.
//!
//! Each generator returns raw posts and citations plus a window covering
//! them; run them through [`filter_corpus`](crate::ingest::filter_corpus)
//! like real input.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ingest::{Citation, Post, Window};
use crate::time::{Timestamp, SECONDS_PER_DAY};

/// 2010-02-01T00:00:00Z.
pub const EPOCH: i64 = 1_264_982_400;

#[derive(Debug, Clone)]
pub struct RawCorpus {
    pub posts: Vec<Post>,
    pub citations: Vec<Citation>,
    pub window: Window,
}

fn post(id: String, blog: String, secs: i64) -> Post {
    Post {
        post_id: id,
        blog_id: blog,
        published_at: Timestamp(secs),
    }
}

/// Draws an index with probability proportional to `weights[i]`, given the
/// running sums of the weights.
fn draw(rng: &mut impl Rng, cumulative: &[f64]) -> usize {
    let u = rng.random::<f64>() * cumulative[cumulative.len() - 1];
    cumulative.partition_point(|&c| c <= u).min(cumulative.len() - 1)
}

fn running_sum(weights: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut acc = 0.0;
    weights
        .map(|w| {
            acc += w;
            acc
        })
        .collect()
}

fn pareto(rng: &mut impl Rng, shape: f64) -> f64 {
    (1.0 - rng.random::<f64>()).powf(-1.0 / shape)
}

/// Uniformly random corpus: `posts` posts spread over `blogs` blogs within
/// `days` days, and `citations` citations between random posts. Roughly
/// half of the citations violate a filter (same blog, newer target, or
/// repeats), and a few point at unknown posts.
pub fn random_corpus(seed: u64, posts: usize, blogs: usize, citations: usize, days: i64) -> RawCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let span = days * SECONDS_PER_DAY;
    let all: Vec<Post> = (0..posts)
        .map(|i| {
            post(
                format!("p{i:04}"),
                format!("b{:02}", rng.random_range(0..blogs.max(1))),
                EPOCH + rng.random_range(0..span),
            )
        })
        .collect();
    let mut cites = Vec::with_capacity(citations);
    for _ in 0..citations {
        if posts == 0 || rng.random_bool(0.02) {
            cites.push(Citation::new("p0000", "ghost"));
            continue;
        }
        let a = &all[rng.random_range(0..posts)];
        let b = &all[rng.random_range(0..posts)];
        cites.push(Citation::new(&a.post_id, &b.post_id));
    }
    RawCorpus {
        posts: all,
        citations: cites,
        window: Window {
            start: Timestamp(EPOCH),
            end: Timestamp(EPOCH + span),
        },
    }
}

/// Random corpus in which every citation passes the filters: each citation
/// points from a post to an earlier-or-equal post of another blog.
pub fn random_consistent_corpus(seed: u64, posts: usize, blogs: usize, citations: usize, days: i64) -> RawCorpus {
    let mut raw = random_corpus(seed, posts, blogs.max(2), 0, days);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    raw.posts.sort_by_key(|p| p.published_at);
    let mut seen = std::collections::HashSet::new();
    for _ in 0..citations * 4 {
        if raw.citations.len() == citations || raw.posts.len() < 2 {
            break;
        }
        let i = rng.random_range(1..raw.posts.len());
        let j = rng.random_range(0..i);
        let (a, b) = (&raw.posts[i], &raw.posts[j]);
        if a.blog_id != b.blog_id && seen.insert((i, j)) {
            raw.citations.push(Citation::new(&a.post_id, &b.post_id));
        }
    }
    raw
}

#[derive(Debug, Clone)]
pub struct LatencyCorpusParams {
    pub citations: usize,
    /// Exponent `a` of the day latency law, P(d) proportional to d^(-a).
    pub exponent: f64,
    /// Days of history available to every citing post.
    pub history_days: i64,
    pub target_blogs: usize,
    pub source_blogs: usize,
}

impl Default for LatencyCorpusParams {
    fn default() -> Self {
        LatencyCorpusParams {
            citations: 10_000,
            exponent: 1.5,
            history_days: 150,
            target_blogs: 40,
            source_blogs: 100,
        }
    }
}

/// Corpus whose day-binned latencies follow a truncated discrete power law
/// on `1..=history_days`.
///
/// Target blogs post once a day at noon on each of the `history_days` days;
/// every citing post is published at noon on the following day and cites a
/// uniformly chosen target blog at a latency of `d` whole days. Latencies are
/// therefore exact multiples of a day and every target blog offers one
/// candidate per day of history.
pub fn latency_corpus(seed: u64, params: &LatencyCorpusParams) -> RawCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = params.history_days;
    let noon = |day: i64| EPOCH + day * SECONDS_PER_DAY + SECONDS_PER_DAY / 2;
    let mut posts = Vec::new();
    for b in 0..params.target_blogs {
        for day in 0..h {
            posts.push(post(format!("t{b:03}-{day:04}"), format!("target{b:03}"), noon(day)));
        }
    }
    let law = running_sum((1..=h).map(|d| (d as f64).powf(-params.exponent)));
    let mut citations = Vec::with_capacity(params.citations);
    for i in 0..params.citations {
        let id = format!("s{i:06}");
        posts.push(post(id.clone(), format!("source{:03}", i % params.source_blogs.max(1)), noon(h)));
        let d = draw(&mut rng, &law) as i64 + 1;
        let b = rng.random_range(0..params.target_blogs);
        citations.push(Citation::new(id, format!("t{b:03}-{:04}", h - d)));
    }
    RawCorpus {
        posts,
        citations,
        window: Window {
            start: Timestamp(EPOCH),
            end: Timestamp(noon(h) + 1),
        },
    }
}

#[derive(Debug, Clone)]
pub struct BlogosphereParams {
    pub blogs: usize,
    pub days: i64,
    /// Mean posts per blog per day before the heavy-tailed activity factor.
    pub posts_per_blog_day: f64,
    /// Pareto shape of blog activity, popularity and citing propensity.
    pub tail_shape: f64,
    /// Baseline probability that a post cites anything.
    pub citing_probability: f64,
    /// Latency bias exponent used when picking the cited post.
    pub latency_exponent: f64,
    /// Bursts in which several blogs cite the same fresh post within a day,
    /// producing star-shaped cascades.
    pub bursts: usize,
    pub burst_size: usize,
}

impl Default for BlogosphereParams {
    fn default() -> Self {
        BlogosphereParams {
            blogs: 200,
            days: 151,
            posts_per_blog_day: 0.5,
            tail_shape: 1.6,
            citing_probability: 0.12,
            latency_exponent: 1.5,
            bursts: 0,
            burst_size: 4,
        }
    }
}

/// A blog network with heavy-tailed activity and popularity. Posts are
/// spread uniformly over the window; a citing post picks a cited blog in
/// proportion to its popularity, then one of that blog's earlier posts with
/// a latency-biased weight.
pub fn blogosphere(seed: u64, params: &BlogosphereParams) -> RawCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let span = params.days * SECONDS_PER_DAY;
    let nb = params.blogs.max(2);
    let activity: Vec<f64> = (0..nb).map(|_| pareto(&mut rng, params.tail_shape)).collect();
    let popularity: Vec<f64> = (0..nb).map(|_| pareto(&mut rng, params.tail_shape)).collect();
    let propensity: Vec<f64> = (0..nb)
        .map(|_| (params.citing_probability * pareto(&mut rng, params.tail_shape)).min(0.9))
        .collect();

    let mean_activity = activity.iter().sum::<f64>() / nb as f64;
    let mut posts = Vec::new();
    let mut blog_posts: Vec<Vec<(i64, usize)>> = vec![Vec::new(); nb];
    for b in 0..nb {
        let expected = params.posts_per_blog_day * params.days as f64 * activity[b] / mean_activity;
        let n = (expected.round() as usize).max(1);
        for _ in 0..n {
            let t = EPOCH + rng.random_range(0..span);
            blog_posts[b].push((t, posts.len()));
            posts.push(post(String::new(), format!("blog{b:04}"), t));
        }
    }
    for (b, list) in blog_posts.iter_mut().enumerate() {
        list.sort_unstable();
        for (k, &(_, i)) in list.iter().enumerate() {
            posts[i].post_id = format!("blog{b:04}-{k:05}");
        }
    }

    let mut order: Vec<(i64, usize, usize)> = blog_posts
        .iter()
        .enumerate()
        .flat_map(|(b, l)| l.iter().map(move |&(t, i)| (t, b, i)))
        .collect();
    order.sort_unstable();

    let popular = running_sum(popularity.iter().copied());
    let mut citations = Vec::new();
    for &(t, b, i) in &order {
        if !rng.random_bool(propensity[b]) {
            continue;
        }
        let mut k = 1;
        while k < 5 && rng.random_bool(0.35) {
            k += 1;
        }
        for _ in 0..k {
            let target_blog = draw(&mut rng, &popular);
            if target_blog == b {
                continue;
            }
            let candidates = &blog_posts[target_blog];
            let len = candidates.partition_point(|&(ct, _)| ct <= t);
            if len == 0 {
                continue;
            }
            let weights = running_sum(
                candidates[..len]
                    .iter()
                    .map(|&(ct, _)| ((t - ct) as f64 / 3_600.0).max(1.0).powf(-params.latency_exponent)),
            );
            let (_, j) = candidates[draw(&mut rng, &weights)];
            citations.push(Citation::new(&posts[i].post_id, &posts[j].post_id));
        }
    }

    // Bursts: a fresh post of a popular blog is cited by several other blogs
    // within the next day.
    let mut extra = 0usize;
    for _ in 0..params.bursts {
        let hub_blog = draw(&mut rng, &popular);
        let (t0, hub) = blog_posts[hub_blog][rng.random_range(0..blog_posts[hub_blog].len())];
        let mut others: Vec<usize> = (0..nb).filter(|&o| o != hub_blog).collect();
        others.shuffle(&mut rng);
        for &o in others.iter().take(params.burst_size) {
            let t = t0 + rng.random_range(600..SECONDS_PER_DAY);
            let id = format!("burst{extra:05}");
            extra += 1;
            posts.push(post(id.clone(), format!("blog{o:04}"), t.min(EPOCH + span)));
            citations.push(Citation::new(id, &posts[hub].post_id));
        }
    }

    RawCorpus {
        posts,
        citations,
        window: Window {
            start: Timestamp(EPOCH),
            end: Timestamp(EPOCH + span),
        },
    }
}
