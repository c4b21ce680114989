use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use blogcascade::cascade::{cascade_metrics, extract_all_cascades, write_cascades, CascadeMetrics};
use blogcascade::ingest::{
    filter_corpus, parse_citations, parse_posts, parse_topics, write_citations, write_posts, Corpus,
    CorpusSummary, Post, Window,
};
use blogcascade::motifs::{shape_census, write_census, write_census_examples, MAX_CAP};
use blogcascade::nullmodel::{
    aggregate, cascade_profile, compare as compare_profiles, fit_theta, run_profiles, write_overlay, ModelConfig,
    Rewirer,
};
use blogcascade::stats::{
    degree_distributions, fit_power_law, latency_distribution, pearson, rank_correlation, weekday_activity,
    EmpiricalDistribution, PowerLawFits, WEEKDAYS,
};
use blogcascade::time::Timestamp;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::output::{sha256_hex, InputFile, Manifest, OutputDir};
use crate::{AnalyzeArgs, CompareArgs, FitArgs, IngestArgs, InputArgs};

/// An input file could not be read. Reported with exit status 2.
#[derive(Debug)]
pub struct InputError {
    path: PathBuf,
    source: std::io::Error,
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cannot read {}", self.path.display())
    }
}

impl std::error::Error for InputError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.source)
    }
}

fn read_input(path: &Path) -> Result<(Vec<u8>, InputFile)> {
    let bytes = fs::read(path).map_err(|source| InputError {
        path: path.to_path_buf(),
        source,
    })?;
    let file = InputFile {
        path: path.display().to_string(),
        sha256: sha256_hex(&bytes),
    };
    Ok((bytes, file))
}

struct Loaded {
    corpus: Corpus,
    summary: CorpusSummary,
    inputs: BTreeMap<&'static str, InputFile>,
}

fn load_raw(
    posts_path: &Path,
    citations_path: &Path,
    start: Option<Timestamp>,
    end: Option<Timestamp>,
) -> Result<Loaded> {
    let (post_bytes, posts_file) = read_input(posts_path)?;
    let (citation_bytes, citations_file) = read_input(citations_path)?;
    let posts = parse_posts(post_bytes.as_slice()).with_context(|| format!("in {}", posts_path.display()))?;
    let citations =
        parse_citations(citation_bytes.as_slice()).with_context(|| format!("in {}", citations_path.display()))?;
    let window = resolve_window(&posts, start, end)?;
    let (corpus, summary) = filter_corpus(&posts, &citations, window)?;
    if summary.posts == 0 {
        eprintln!("warning: no post falls inside the window {} .. {}", window.start, window.end);
    }
    let inputs = BTreeMap::from([("posts", posts_file), ("citations", citations_file)]);
    Ok(Loaded { corpus, summary, inputs })
}

fn load(input: &InputArgs) -> Result<Loaded> {
    let (posts, citations) = match (&input.corpus, &input.posts, &input.citations) {
        (Some(dir), _, _) => (dir.join("posts.jsonl"), dir.join("citations.csv")),
        (None, Some(p), Some(c)) => (p.clone(), c.clone()),
        _ => anyhow::bail!("either --corpus or both --posts and --citations are required"),
    };
    let loaded = load_raw(&posts, &citations, input.window_start, input.window_end)?;
    Ok(loaded)
}

/// Explicit bounds win; missing ones come from the posts. A degenerate or
/// empty post set gets a one-second window so the corpus is still valid.
fn resolve_window(posts: &[Post], start: Option<Timestamp>, end: Option<Timestamp>) -> Result<Window> {
    let earliest = posts.iter().map(|p| p.published_at).min();
    let latest = posts.iter().map(|p| p.published_at).max();
    let (start, end) = match (start, end) {
        (Some(s), Some(e)) => (s, e),
        (Some(s), None) => {
            let e = latest.filter(|&e| e > s).unwrap_or(Timestamp(s.0 + 1));
            (s, e)
        }
        (None, Some(e)) => {
            let s = earliest.filter(|&s| s < e).unwrap_or(Timestamp(e.0 - 1));
            (s, e)
        }
        (None, None) => {
            let s = earliest.unwrap_or(Timestamp(0));
            let e = latest.filter(|&e| e > s).unwrap_or(Timestamp(s.0 + 1));
            (s, e)
        }
    };
    Ok(Window::new(start, end)?)
}

fn manifest(command: &'static str, loaded: &Loaded, base_seed: Option<u64>, config: serde_json::Value) -> Manifest {
    Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command,
        inputs: loaded.inputs.clone(),
        window: Some(loaded.corpus.window()),
        base_seed,
        config,
    }
}

pub fn ingest(args: &IngestArgs) -> Result<()> {
    let loaded = load_raw(&args.posts, &args.citations, args.window_start, args.window_end)?;
    let mut out = OutputDir::create(&args.out_dir)?;
    out.write_with("posts.jsonl", |w| write_posts(w, loaded.corpus.posts()))?;
    out.write_with("citations.csv", |w| write_citations(w, loaded.corpus.citations()))?;
    out.write_json("summary.json", &loaded.summary)?;
    out.finish(manifest("ingest", &loaded, None, json!({})))
}

#[derive(Serialize)]
struct FitOutcome {
    fit: Option<PowerLawFits>,
    error: Option<String>,
}

impl FitOutcome {
    fn of(dist: &EmpiricalDistribution, xmin: u64, xmax: Option<u64>) -> Self {
        match fit_power_law(dist, xmin, xmax) {
            Ok(fit) => FitOutcome { fit: Some(fit), error: None },
            Err(e) => FitOutcome {
                fit: None,
                error: Some(e.to_string()),
            },
        }
    }
}

#[derive(Serialize)]
struct PearsonReport {
    /// Every blog owning a post.
    all_blogs: Option<f64>,
    /// Blogs with at least one incoming or outgoing citation.
    linked_blogs: Option<f64>,
}

/// Corpus-level quantities: B, N, L, the blog degree correlation r and the
/// exponents alpha (blog in-degree), beta (blog out-degree), tau (latency in
/// days) and gamma (cascade size).
#[derive(Serialize)]
struct FitsReport {
    blogs: usize,
    posts: usize,
    citations: usize,
    cascades: usize,
    r: PearsonReport,
    alpha: FitOutcome,
    beta: FitOutcome,
    tau: FitOutcome,
    gamma: FitOutcome,
    weekend_dip: Option<f64>,
    /// Rank correlation between sc and topic-unity over cascades where both
    /// are defined.
    sc_topic_unity_rank_correlation: Option<f64>,
}

#[derive(Serialize)]
struct ActivityReport {
    weekdays: [&'static str; 7],
    averages: Option<[f64; 7]>,
    weekend_dip: Option<f64>,
}

pub fn analyze(args: &AnalyzeArgs) -> Result<()> {
    anyhow::ensure!(
        (2..=MAX_CAP).contains(&args.cap),
        "--cap must be in 2..={MAX_CAP}, got {}",
        args.cap
    );
    let mut loaded = load(&args.input)?;
    let corpus = &loaded.corpus;

    let topics = match &args.topics {
        Some(path) => {
            let (bytes, file) = read_input(path)?;
            let labels = parse_topics(bytes.as_slice()).with_context(|| format!("in {}", path.display()))?;
            loaded.inputs.insert("topics", file);
            Some(labels.resolve(corpus))
        }
        None => None,
    };

    let cascades = extract_all_cascades(&corpus.graph());
    let metrics: Vec<CascadeMetrics> = cascades
        .par_iter()
        .map(|c| cascade_metrics(c, topics.as_ref()))
        .collect();
    let census = shape_census(&cascades, args.cap);
    let sizes: EmpiricalDistribution = metrics.iter().map(|m| m.size as u64).collect();
    let depths: EmpiricalDistribution = metrics.iter().map(|m| m.depth as u64).collect();
    let latency = latency_distribution(corpus);
    let degrees = degree_distributions(corpus);
    let activity = weekday_activity(corpus.posts(), corpus.window()).ok();

    let activity = ActivityReport {
        weekdays: WEEKDAYS,
        averages: activity.as_ref().map(|a| a.averages),
        weekend_dip: activity.as_ref().and_then(|a| a.weekend_dip),
    };
    let fits = FitsReport {
        blogs: loaded.summary.blogs,
        posts: loaded.summary.posts,
        citations: loaded.summary.citations,
        cascades: cascades.len(),
        r: PearsonReport {
            all_blogs: pearson(&degrees.pairs(true)).ok(),
            linked_blogs: pearson(&degrees.pairs(false)).ok(),
        },
        alpha: FitOutcome::of(&degrees.in_degrees, 1, None),
        beta: FitOutcome::of(&degrees.out_degrees, 1, None),
        tau: FitOutcome::of(&latency, 1, args.latency_xmax),
        gamma: FitOutcome::of(&sizes, 1, None),
        weekend_dip: activity.weekend_dip,
        sc_topic_unity_rank_correlation: sc_topic_unity_correlation(&metrics),
    };

    let mut out = OutputDir::create(&args.out_dir)?;
    out.write_json("summary.json", &loaded.summary)?;
    out.write_with("cascades.jsonl", |w| write_cascades(w, corpus, &cascades, &metrics))?;
    out.write_with("census.csv", |w| write_census(w, &census))?;
    out.write_with("census_examples.jsonl", |w| write_census_examples(w, corpus, &cascades, &census))?;
    out.write_with("latency.csv", |w| latency.write_csv(w))?;
    out.write_with("degrees.csv", |w| degrees.write_csv(w))?;
    out.write_with("in_degree.csv", |w| degrees.in_degrees.write_csv(w))?;
    out.write_with("out_degree.csv", |w| degrees.out_degrees.write_csv(w))?;
    out.write_with("sizes.csv", |w| sizes.write_csv(w))?;
    out.write_with("depths.csv", |w| depths.write_csv(w))?;
    out.write_json("activity.json", &activity)?;
    out.write_json("fits.json", &fits)?;
    let config = json!({ "cap": args.cap, "latency_xmax": args.latency_xmax });
    out.finish(manifest("analyze", &loaded, None, config))
}

fn sc_topic_unity_correlation(metrics: &[CascadeMetrics]) -> Option<f64> {
    let (sc, unity): (Vec<f64>, Vec<f64>) = metrics
        .iter()
        .filter_map(|m| Some((m.sc?.value(), m.topic_unity?.value())))
        .unzip();
    rank_correlation(&sc, &unity).ok()
}

pub fn compare(args: &CompareArgs, parallel: bool) -> Result<()> {
    let mut config = match &args.config {
        Some(path) => {
            let (bytes, _) = read_input(path)?;
            let text = String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8", path.display()))?;
            ModelConfig::parse(&text).with_context(|| format!("in {}", path.display()))?
        }
        None => ModelConfig::default(),
    };
    if let Some(v) = args.seed {
        config.base_seed = v;
    }
    if let Some(v) = args.realizations {
        config.realizations = v;
    }
    if let Some(v) = args.theta {
        config.theta = Some(v);
    }
    if let Some(v) = args.epsilon_seconds {
        config.epsilon_seconds = v;
    }
    if let Some(v) = args.z_threshold {
        config.z_threshold = v;
    }
    if let Some(v) = args.cap {
        config.cap = v;
    }
    if let Some(v) = args.latency_xmax {
        config.latency_xmax = Some(v);
    }
    config.validate()?;

    let mut loaded = load(&args.input)?;
    if let Some(path) = &args.config {
        let (_, file) = read_input(path)?;
        loaded.inputs.insert("config", file);
    }
    let corpus = &loaded.corpus;

    let (theta, theta_source) = match config.theta {
        Some(t) => (t, "config"),
        None => {
            let est = fit_theta(corpus, config.latency_xmax);
            if let Some(w) = &est.warning {
                eprintln!("warning: {w}");
            }
            (est.theta, if est.fitted { "fitted" } else { "default" })
        }
    };
    let rewire = config.rewire(theta);
    let rewirer = Rewirer::new(corpus, rewire)?;
    let profiles = run_profiles(&rewirer, 0..rewire.realizations as u64, config.cap, parallel);
    let model = aggregate(&profiles, config.cap);
    let real = cascade_profile(&extract_all_cascades(&corpus.graph()), config.cap);
    let report = compare_profiles(&real, &model, config.z_threshold)?;

    let mut out = OutputDir::create(&args.out_dir)?;
    out.write_json("summary.json", &loaded.summary)?;
    out.write_with("comparison.json", |w| {
        report.write_json(&mut *w)?;
        w.push(b'\n');
        Ok(())
    })?;
    out.write_with("overlay_sizes.csv", |w| write_overlay(w, &report.size_overlay))?;
    out.write_with("overlay_depths.csv", |w| write_overlay(w, &report.depth_overlay))?;
    let config_json = json!({
        "theta": theta,
        "theta_source": theta_source,
        "epsilon_seconds": config.epsilon_seconds,
        "realizations": config.realizations,
        "z_threshold": config.z_threshold,
        "cap": config.cap,
        "latency_xmax": config.latency_xmax,
    });
    out.finish(manifest("compare", &loaded, Some(config.base_seed), config_json))
}

pub fn fit(args: &FitArgs) -> Result<()> {
    let loaded = load(&args.input)?;
    let estimate = fit_theta(&loaded.corpus, args.latency_xmax);
    if let Some(w) = &estimate.warning {
        eprintln!("warning: {w}");
    }
    let latency = latency_distribution(&loaded.corpus);
    let mut out = OutputDir::create(&args.out_dir)?;
    out.write_json("summary.json", &loaded.summary)?;
    out.write_with("latency.csv", |w| latency.write_csv(w))?;
    out.write_json("theta.json", &estimate)?;
    let config = json!({ "latency_xmax": args.latency_xmax });
    out.finish(manifest("fit", &loaded, None, config))
}
