//! Item-free re-targeting of citations.
//!
//! Each citation `P_a -> P_b` keeps its citing post and the cited blog, but
//! the cited post is redrawn among the posts of `blog(P_b)` published no
//! later than `P_a`. A candidate at latency `dt` seconds is drawn with weight
//! `max(dt, epsilon)^(-theta)`. The original target is always a candidate,
//! so the pool is never empty.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::graph::PostIdx;
use crate::ingest::{Citation, Corpus};
use crate::nullmodel::config::{RewireConfig, DEFAULT_THETA};
use crate::stats::{fit_power_law, latency_distribution, PowerLawFit};

/// RNG for one realization: ChaCha8 seeded with `base_seed`, on stream
/// `realization_index`. Streams are independent, so realizations can run in
/// any order.
pub fn realization_rng(base_seed: u64, realization_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(base_seed);
    rng.set_stream(realization_index);
    rng
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThetaEstimate {
    pub theta: f64,
    pub fitted: bool,
    pub warning: Option<String>,
    pub fit: Option<PowerLawFit>,
}

/// Latency-bias exponent: the MLE exponent magnitude of the day-binned
/// latency distribution (xmin = 1 day). Falls back to 1.5 with a warning when
/// the fit is impossible.
pub fn fit_theta(corpus: &Corpus, xmax: Option<u64>) -> ThetaEstimate {
    match fit_power_law(&latency_distribution(corpus), 1, xmax) {
        Ok(fits) if -fits.mle.exponent > 0.0 => ThetaEstimate {
            theta: -fits.mle.exponent,
            fitted: true,
            warning: None,
            fit: Some(fits.mle),
        },
        Ok(_) => fallback("fitted exponent is not positive".into()),
        Err(e) => fallback(e.to_string()),
    }
}

fn fallback(reason: String) -> ThetaEstimate {
    ThetaEstimate {
        theta: DEFAULT_THETA,
        fitted: false,
        warning: Some(format!("latency fit unavailable ({reason}); using theta = {DEFAULT_THETA}")),
        fit: None,
    }
}

struct Pool {
    blog: u32,
    /// Cumulative weights over the blog's first `cumulative.len()` posts in
    /// time order.
    cumulative: Vec<f64>,
}

/// Precomputed candidate pools for one corpus and config. Pools are shared
/// by citations with the same cited blog and citing timestamp.
pub struct Rewirer<'c> {
    corpus: &'c Corpus,
    config: RewireConfig,
    blog_posts: Vec<Vec<PostIdx>>,
    pools: Vec<Pool>,
    citation_pool: Vec<u32>,
}

impl<'c> Rewirer<'c> {
    pub fn new(corpus: &'c Corpus, config: RewireConfig) -> Result<Self> {
        config.validate()?;
        let mut blog_posts: Vec<Vec<PostIdx>> = vec![Vec::new(); corpus.blogs().len()];
        for p in 0..corpus.posts().len() as PostIdx {
            blog_posts[corpus.blog_of(p) as usize].push(p);
        }
        for posts in &mut blog_posts {
            posts.sort_by_key(|&p| (corpus.published_at(p), p));
        }

        let mut pools = Vec::new();
        let mut pool_index = HashMap::new();
        let mut citation_pool = Vec::with_capacity(corpus.arcs().len());
        for &(src, dst) in corpus.arcs() {
            let blog = corpus.blog_of(dst);
            let t_src = corpus.published_at(src);
            let id = *pool_index.entry((blog, t_src)).or_insert_with(|| {
                let posts = &blog_posts[blog as usize];
                let len = posts.partition_point(|&p| corpus.published_at(p) <= t_src);
                let latency = |p: PostIdx| ((t_src.secs() - corpus.published_at(p).secs()) as f64).max(config.epsilon_seconds);
                // Normalize by the nearest candidate so large theta cannot
                // underflow every weight to zero.
                let nearest = latency(posts[len - 1]);
                let mut acc = 0.0;
                let cumulative = posts[..len]
                    .iter()
                    .map(|&p| {
                        acc += (latency(p) / nearest).powf(-config.theta);
                        acc
                    })
                    .collect();
                pools.push(Pool { blog, cumulative });
                pools.len() as u32 - 1
            });
            citation_pool.push(id);
        }
        Ok(Rewirer {
            corpus,
            config,
            blog_posts,
            pools,
            citation_pool,
        })
    }

    pub fn corpus(&self) -> &'c Corpus {
        self.corpus
    }

    pub fn config(&self) -> &RewireConfig {
        &self.config
    }

    /// Synthetic arcs for one realization, aligned with `corpus.arcs()`.
    pub fn rewire(&self, realization_index: u64) -> Vec<(PostIdx, PostIdx)> {
        let mut rng = realization_rng(self.config.base_seed, realization_index);
        self.corpus
            .arcs()
            .iter()
            .zip(&self.citation_pool)
            .map(|(&(src, _), &pool)| {
                let pool = &self.pools[pool as usize];
                let total = *pool.cumulative.last().expect("pool holds the original target");
                let u = rng.random::<f64>() * total;
                let pos = pool.cumulative.partition_point(|&c| c <= u).min(pool.cumulative.len() - 1);
                (src, self.blog_posts[pool.blog as usize][pos])
            })
            .collect()
    }
}

/// Synthetic citations for one realization, in the corpus' citation order.
pub fn rewire_citations(corpus: &Corpus, config: RewireConfig, realization_index: u64) -> Result<Vec<Citation>> {
    let rewirer = Rewirer::new(corpus, config)?;
    Ok(rewirer
        .rewire(realization_index)
        .into_iter()
        .map(|(s, d)| Citation::new(corpus.post_id(s), corpus.post_id(d)))
        .collect())
}
