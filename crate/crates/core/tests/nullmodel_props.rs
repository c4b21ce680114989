use std::collections::BTreeMap;

use blogcascade::cascade::extract_all_cascades;
use blogcascade::graph::CitationGraph;
use blogcascade::ingest::{filter_corpus, Citation, Corpus, Post};
use blogcascade::nullmodel::{
    aggregate, cascade_profile, compare, realization_profile, rewire_citations, run_profiles, run_realizations,
    MeanStd, Representation, RewireConfig, Rewirer, ZScore,
};
use blogcascade::synthetic::{blogosphere, random_corpus, BlogosphereParams, EPOCH};
use blogcascade::time::Timestamp;
use proptest::prelude::*;

fn config(theta: f64, seed: u64, realizations: usize) -> RewireConfig {
    RewireConfig {
        theta,
        base_seed: seed,
        realizations,
        ..RewireConfig::default()
    }
}

fn filtered(seed: u64, n: usize, b: usize, l: usize) -> Corpus {
    let raw = random_corpus(seed, n, b, l, 20);
    filter_corpus(&raw.posts, &raw.citations, raw.window).unwrap().0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn rewiring_conserves_sources_target_blogs_and_time(
        seed in any::<u64>(), n in 2usize..120, b in 2usize..8, l in 0usize..300,
        theta in 0.1f64..4.0, idx in 0u64..1000,
    ) {
        let corpus = filtered(seed, n, b, l);
        let synthetic = rewire_citations(&corpus, config(theta, seed, 1), idx).unwrap();
        prop_assert_eq!(synthetic.len(), corpus.citations().len());
        for (orig, new) in corpus.citations().iter().zip(&synthetic) {
            prop_assert_eq!(&orig.src_post_id, &new.src_post_id);
            let o = corpus.post_index(&orig.dst_post_id).unwrap();
            let d = corpus.post_index(&new.dst_post_id).unwrap();
            let s = corpus.post_index(&new.src_post_id).unwrap();
            prop_assert_eq!(corpus.blog_of(o), corpus.blog_of(d));
            prop_assert!(corpus.published_at(d) <= corpus.published_at(s));
        }
    }

    #[test]
    fn realizations_are_reproducible(seed in any::<u64>(), idx in 0u64..1000) {
        let corpus = filtered(seed, 80, 5, 200);
        let rewirer = Rewirer::new(&corpus, config(1.5, seed, 1)).unwrap();
        prop_assert_eq!(rewirer.rewire(idx), rewirer.rewire(idx));
    }
}

#[test]
fn single_post_blog_keeps_its_citation() {
    let posts = vec![
        Post { post_id: "a".into(), blog_id: "A".into(), published_at: Timestamp(EPOCH) },
        Post { post_id: "b".into(), blog_id: "B".into(), published_at: Timestamp(EPOCH + 10) },
        Post { post_id: "c".into(), blog_id: "B".into(), published_at: Timestamp(EPOCH + 20) },
    ];
    let cites = vec![Citation::new("b", "a"), Citation::new("c", "a")];
    let window = blogcascade::ingest::Window::covering(&posts).unwrap();
    let corpus = filter_corpus(&posts, &cites, window).unwrap().0;
    for idx in 0..20 {
        assert_eq!(rewire_citations(&corpus, config(1.5, 1, 1), idx).unwrap(), corpus.citations());
    }
}

#[test]
fn steep_bias_picks_the_recent_candidate() {
    // Blog T has a post a month before the citing post and one an hour before.
    let at = |secs: i64| Timestamp(EPOCH + secs);
    let posts = vec![
        Post { post_id: "old".into(), blog_id: "T".into(), published_at: at(0) },
        Post { post_id: "new".into(), blog_id: "T".into(), published_at: at(30 * 86_400) },
        Post { post_id: "src".into(), blog_id: "S".into(), published_at: at(30 * 86_400 + 3600) },
    ];
    let cites = vec![Citation::new("src", "old")];
    let window = blogcascade::ingest::Window::covering(&posts).unwrap();
    let corpus = filter_corpus(&posts, &cites, window).unwrap().0;
    let hits = (0..500)
        .filter(|&i| rewire_citations(&corpus, config(50.0, 3, 1), i).unwrap()[0].dst_post_id == "new")
        .count();
    assert_eq!(hits, 500);
    let mild = (0..500)
        .filter(|&i| rewire_citations(&corpus, config(0.1, 3, 1), i).unwrap()[0].dst_post_id == "new")
        .count();
    assert!(mild < 450, "{mild}");
}

fn bench_corpus() -> Corpus {
    let raw = blogosphere(5, &BlogosphereParams { blogs: 80, days: 60, ..BlogosphereParams::default() });
    filter_corpus(&raw.posts, &raw.citations, raw.window).unwrap().0
}

#[test]
fn one_realization_aggregate_is_that_realization() {
    let corpus = bench_corpus();
    let rewirer = Rewirer::new(&corpus, config(1.5, 8, 1)).unwrap();
    let single = realization_profile(&rewirer, 0, 8);
    let agg = aggregate(std::slice::from_ref(&single), 8);
    assert_eq!(agg.realizations, 1);
    for e in &single.profile.census.entries {
        let s = agg.shape(&e.code).unwrap();
        assert_eq!(s.frequency, MeanStd { mean: e.frequency as f64, std: 0.0 });
    }
    assert_eq!(agg.shapes.len(), single.profile.census.entries.len());
    for (v, c) in single.profile.sizes.iter() {
        assert_eq!(agg.sizes[&v], c as f64);
    }
}

#[test]
fn many_realizations_disperse() {
    let corpus = bench_corpus();
    let agg = run_realizations(&corpus, &config(1.5, 8, 100), 8, true).unwrap();
    assert_eq!(agg.realizations, 100);
    let top = &agg.shapes[0];
    assert!(top.frequency.std > 0.0, "{top:?}");
    let varying = agg.shapes.iter().filter(|s| s.present_in > 0 && s.present_in < 100).count();
    assert!(agg.shapes.iter().filter(|s| s.present_in < 100).all(|s| s.frequency.std > 0.0));
    assert!(varying > 0);
}

#[test]
fn serial_and_parallel_runs_agree() {
    let corpus = bench_corpus();
    let a = run_realizations(&corpus, &config(1.5, 21, 12), 8, true).unwrap();
    let b = run_realizations(&corpus, &config(1.5, 21, 12), 8, false).unwrap();
    assert_eq!(a, b);
    let rewirer = Rewirer::new(&corpus, config(1.5, 21, 12)).unwrap();
    let forward = run_profiles(&rewirer, 0..12, 8, false);
    let mut reversed: Vec<_> = (0..12).rev().map(|i| realization_profile(&rewirer, i, 8)).collect();
    reversed.reverse();
    assert_eq!(aggregate(&forward, 8), aggregate(&reversed, 8));
}

#[test]
fn duplicate_synthetic_citations_are_counted() {
    let corpus = bench_corpus();
    let rewirer = Rewirer::new(&corpus, config(1.5, 2, 1)).unwrap();
    let arcs = rewirer.rewire(0);
    let distinct: std::collections::HashSet<_> = arcs.iter().collect();
    let p = realization_profile(&rewirer, 0, 8);
    assert_eq!(p.duplicate_citations, arcs.len() - distinct.len());
    let graph = CitationGraph::new(corpus.posts().len(), arcs);
    assert_eq!(p.profile.cascade_count() as usize, extract_all_cascades(&graph).len());
}

#[test]
fn real_equal_to_model_mean_is_consistent_everywhere() {
    let corpus = bench_corpus();
    let real = cascade_profile(&extract_all_cascades(&corpus.graph()), 8);
    let rewirer = Rewirer::new(&corpus, config(1.5, 0, 1)).unwrap();
    let mut as_model = realization_profile(&rewirer, 0, 8);
    as_model.profile = real.clone();
    let report = compare(&real, &aggregate(&[as_model], 8), 3.0).unwrap();
    assert!(report.shapes.iter().all(|r| r.flag == Representation::Consistent));
    assert!(report.shapes.iter().all(|r| r.z == ZScore::Undefined));
    assert_eq!(report.flags.over + report.flags.under, 0);
}

#[test]
fn shape_missing_from_the_model_is_flagged_over_with_infinite_z() {
    let corpus = bench_corpus();
    let real = cascade_profile(&extract_all_cascades(&corpus.graph()), 8);
    let rewirer = Rewirer::new(&corpus, config(1.5, 0, 1)).unwrap();
    let mut empty = realization_profile(&rewirer, 0, 8);
    empty.profile = cascade_profile(&[], 8);
    let report = compare(&real, &aggregate(&[empty], 8), 3.0).unwrap();
    for row in &report.shapes {
        assert_eq!(row.z, ZScore::PosInf);
        assert_eq!(row.flag, Representation::Over);
    }
    let json = serde_json::to_string(&report).unwrap();
    assert!(json.contains("\"+inf\""));
}

#[test]
fn mismatched_caps_are_rejected() {
    let real = cascade_profile(&[], 8);
    let corpus = bench_corpus();
    let rewirer = Rewirer::new(&corpus, config(1.5, 0, 1)).unwrap();
    let p = realization_profile(&rewirer, 0, 6);
    assert!(compare(&real, &aggregate(&[p], 6), 3.0).is_err());
}

#[test]
fn target_blog_in_degrees_are_preserved() {
    let corpus = bench_corpus();
    let rewirer = Rewirer::new(&corpus, config(1.5, 4, 1)).unwrap();
    let count = |arcs: &[(u32, u32)]| {
        let mut m: BTreeMap<u32, usize> = BTreeMap::new();
        for &(_, d) in arcs {
            *m.entry(corpus.blog_of(d)).or_default() += 1;
        }
        m
    };
    for idx in 0..5 {
        assert_eq!(count(&rewirer.rewire(idx)), count(corpus.arcs()));
    }
}
