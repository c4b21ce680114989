//! Reading post and citation logs and filtering them into a clean corpus.
//!
//! Parsing and filtering are separate steps: the parsers return every record
//! they read, and [`filter_corpus`] removes citations one reason at a time so
//! the [`CorpusSummary`] accounts for every dropped row.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::io::{BufRead, Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{CitationGraph, PostIdx};
use crate::time::Timestamp;

/// Reserved topic string marking a post whose content could not be inspected.
pub const UNAVAILABLE_TOPIC: &str = "__UNAVAILABLE__";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Post {
    pub post_id: String,
    pub blog_id: String,
    pub published_at: Timestamp,
}

/// A directed link from the citing post to the cited post.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Citation {
    pub src_post_id: String,
    pub dst_post_id: String,
}

impl Citation {
    pub fn new(src: impl Into<String>, dst: impl Into<String>) -> Self {
        Citation {
            src_post_id: src.into(),
            dst_post_id: dst.into(),
        }
    }
}

/// Inclusive crawl window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub start: Timestamp,
    pub end: Timestamp,
}

impl Window {
    pub fn new(start: Timestamp, end: Timestamp) -> Result<Self> {
        if start >= end {
            return Err(Error::InvalidWindow {
                start: start.to_string(),
                end: end.to_string(),
            });
        }
        Ok(Window { start, end })
    }

    /// Smallest window covering every post, or `None` when there are fewer
    /// than two distinct timestamps.
    pub fn covering(posts: &[Post]) -> Option<Self> {
        let start = posts.iter().map(|p| p.published_at).min()?;
        let end = posts.iter().map(|p| p.published_at).max()?;
        Window::new(start, end).ok()
    }

    pub fn contains(&self, t: Timestamp) -> bool {
        self.start <= t && t <= self.end
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RemovalReason {
    OutOfCorpus,
    SelfCitation,
    AnteriorPost,
    Duplicate,
}

impl RemovalReason {
    pub const ALL: [RemovalReason; 4] = [
        RemovalReason::OutOfCorpus,
        RemovalReason::SelfCitation,
        RemovalReason::AnteriorPost,
        RemovalReason::Duplicate,
    ];
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusSummary {
    /// B: blogs owning at least one in-window post.
    pub blogs: usize,
    /// N: in-window posts.
    pub posts: usize,
    /// L: citations surviving the filters.
    pub citations: usize,
    pub raw_citations: usize,
    pub window_start: Timestamp,
    pub window_end: Timestamp,
    pub removed: BTreeMap<RemovalReason, usize>,
}

/// A filtered corpus. Posts are stored sorted by `post_id`, so post indices
/// and post ids order identically.
#[derive(Debug, Clone)]
pub struct Corpus {
    posts: Vec<Post>,
    index: HashMap<String, PostIdx>,
    blogs: Vec<String>,
    post_blog: Vec<u32>,
    citations: Vec<Citation>,
    arcs: Vec<(PostIdx, PostIdx)>,
    window: Window,
}

impl Corpus {
    pub fn posts(&self) -> &[Post] {
        &self.posts
    }

    pub fn citations(&self) -> &[Citation] {
        &self.citations
    }

    /// Citations as (citing, cited) post indices, in citation order.
    pub fn arcs(&self) -> &[(PostIdx, PostIdx)] {
        &self.arcs
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn post(&self, idx: PostIdx) -> &Post {
        &self.posts[idx as usize]
    }

    pub fn post_id(&self, idx: PostIdx) -> &str {
        &self.posts[idx as usize].post_id
    }

    pub fn post_index(&self, post_id: &str) -> Option<PostIdx> {
        self.index.get(post_id).copied()
    }

    pub fn published_at(&self, idx: PostIdx) -> Timestamp {
        self.posts[idx as usize].published_at
    }

    /// Blog ids, sorted.
    pub fn blogs(&self) -> &[String] {
        &self.blogs
    }

    /// Index into [`Corpus::blogs`] of the blog owning `idx`.
    pub fn blog_of(&self, idx: PostIdx) -> u32 {
        self.post_blog[idx as usize]
    }

    pub fn graph(&self) -> CitationGraph {
        CitationGraph::new(self.posts.len(), self.arcs.iter().copied())
    }

    pub fn summary(&self, raw_citations: usize, removed: BTreeMap<RemovalReason, usize>) -> CorpusSummary {
        CorpusSummary {
            blogs: self.blogs.len(),
            posts: self.posts.len(),
            citations: self.citations.len(),
            raw_citations,
            window_start: self.window.start,
            window_end: self.window.end,
            removed,
        }
    }
}

#[derive(Deserialize)]
struct PostRecord {
    post_id: String,
    blog_id: String,
    published_at: String,
}

/// Reads line-delimited JSON post records. Blank lines are skipped; line
/// numbers in errors are 1-based.
pub fn parse_posts<R: BufRead>(reader: R) -> Result<Vec<Post>> {
    let mut posts = Vec::new();
    let mut seen = HashSet::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let record: PostRecord = serde_json::from_str(&line).map_err(|e| Error::MalformedPost {
            line: lineno,
            message: e.to_string(),
        })?;
        let published_at = Timestamp::parse(&record.published_at).ok_or(Error::Timestamp {
            line: lineno,
            value: record.published_at.clone(),
        })?;
        if !seen.insert(record.post_id.clone()) {
            return Err(Error::DuplicatePost(record.post_id));
        }
        posts.push(Post {
            post_id: record.post_id,
            blog_id: record.blog_id,
            published_at,
        });
    }
    Ok(posts)
}

/// Reads the `src_post_id,dst_post_id` CSV. Every row is returned, including
/// self-citations and duplicates. Row numbers count the header as row 1.
pub fn parse_citations<R: Read>(reader: R) -> Result<Vec<Citation>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(reader);
    let mut records = rdr.records();
    let header = match records.next() {
        Some(h) => h?,
        None => return Err(Error::MissingHeader),
    };
    let fields: Vec<&str> = header.iter().map(str::trim).collect();
    if fields != ["src_post_id", "dst_post_id"] {
        return Err(Error::MissingHeader);
    }
    let mut out = Vec::new();
    for (i, record) in records.enumerate() {
        let row = i + 2;
        let record = record.map_err(|e| Error::MalformedCitation {
            row,
            message: e.to_string(),
        })?;
        if record.len() != 2 {
            return Err(Error::ColumnCount {
                row,
                found: record.len(),
            });
        }
        out.push(Citation::new(record[0].trim(), record[1].trim()));
    }
    Ok(out)
}

/// Applies the citation filters in fixed precedence: out-of-corpus, then
/// self-citation, then anterior-post artifacts (cited post strictly newer than
/// the citing one), then duplicate pairs. Posts outside the window are
/// dropped; posts without citations are kept.
pub fn filter_corpus(posts: &[Post], citations: &[Citation], window: Window) -> Result<(Corpus, CorpusSummary)> {
    Window::new(window.start, window.end)?;

    let mut kept: Vec<Post> = posts
        .iter()
        .filter(|p| window.contains(p.published_at))
        .cloned()
        .collect();
    kept.sort_by(|a, b| a.post_id.cmp(&b.post_id));
    if let Some(w) = kept.windows(2).find(|w| w[0].post_id == w[1].post_id) {
        return Err(Error::DuplicatePost(w[0].post_id.clone()));
    }

    let blogs: Vec<String> = kept
        .iter()
        .map(|p| p.blog_id.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let blog_index: HashMap<&str, u32> = blogs
        .iter()
        .enumerate()
        .map(|(i, b)| (b.as_str(), i as u32))
        .collect();
    let post_blog: Vec<u32> = kept.iter().map(|p| blog_index[p.blog_id.as_str()]).collect();
    let index: HashMap<String, PostIdx> = kept
        .iter()
        .enumerate()
        .map(|(i, p)| (p.post_id.clone(), i as PostIdx))
        .collect();

    let mut removed: BTreeMap<RemovalReason, usize> = RemovalReason::ALL.iter().map(|&r| (r, 0)).collect();
    let mut seen = HashSet::new();
    let mut clean = Vec::new();
    let mut arcs = Vec::new();
    for c in citations {
        let reason = match (index.get(&c.src_post_id), index.get(&c.dst_post_id)) {
            (Some(&s), Some(&d)) => {
                if post_blog[s as usize] == post_blog[d as usize] {
                    Some(RemovalReason::SelfCitation)
                } else if kept[d as usize].published_at > kept[s as usize].published_at {
                    Some(RemovalReason::AnteriorPost)
                } else if !seen.insert((s, d)) {
                    Some(RemovalReason::Duplicate)
                } else {
                    clean.push(c.clone());
                    arcs.push((s, d));
                    None
                }
            }
            _ => Some(RemovalReason::OutOfCorpus),
        };
        if let Some(r) = reason {
            *removed.get_mut(&r).expect("all reasons present") += 1;
        }
    }

    let corpus = Corpus {
        posts: kept,
        index,
        blogs,
        post_blog,
        citations: clean,
        arcs,
        window,
    };
    let summary = corpus.summary(citations.len(), removed);
    Ok((corpus, summary))
}

pub fn write_posts<W: Write>(mut w: W, posts: &[Post]) -> Result<()> {
    for p in posts {
        serde_json::to_writer(&mut w, p)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

pub fn write_citations<W: Write>(w: W, citations: &[Citation]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["src_post_id", "dst_post_id"])?;
    for c in citations {
        wtr.write_record([&c.src_post_id, &c.dst_post_id])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Topic annotations for posts, supplied by an external labeling pass.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TopicLabels {
    pub labels: BTreeMap<String, BTreeSet<String>>,
    pub unavailable: BTreeSet<String>,
}

impl TopicLabels {
    pub fn insert(&mut self, post_id: &str, topic: &str) -> Result<()> {
        if topic == UNAVAILABLE_TOPIC {
            if self.labels.contains_key(post_id) {
                return Err(Error::TopicConflict(post_id.to_string()));
            }
            self.unavailable.insert(post_id.to_string());
        } else {
            if self.unavailable.contains(post_id) {
                return Err(Error::TopicConflict(post_id.to_string()));
            }
            self.labels
                .entry(post_id.to_string())
                .or_default()
                .insert(topic.to_string());
        }
        Ok(())
    }

    /// Resolves labels against a corpus' post indices, interning topic strings.
    pub fn resolve(&self, corpus: &Corpus) -> PostTopics {
        let topics: Vec<String> = self
            .labels
            .values()
            .flatten()
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let topic_index: HashMap<&str, u32> = topics
            .iter()
            .enumerate()
            .map(|(i, t)| (t.as_str(), i as u32))
            .collect();
        let mut states = vec![TopicState::Unlabeled; corpus.posts().len()];
        for (post, set) in &self.labels {
            if let Some(idx) = corpus.post_index(post) {
                states[idx as usize] =
                    TopicState::Labeled(set.iter().map(|t| topic_index[t.as_str()]).collect());
            }
        }
        for post in &self.unavailable {
            if let Some(idx) = corpus.post_index(post) {
                states[idx as usize] = TopicState::Unavailable;
            }
        }
        PostTopics { topics, states }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TopicState {
    Unlabeled,
    Unavailable,
    /// Sorted interned topic ids.
    Labeled(Vec<u32>),
}

/// Topic labels indexed by post index.
#[derive(Debug, Clone)]
pub struct PostTopics {
    /// Interned topic strings, sorted; ids order like the strings do.
    pub topics: Vec<String>,
    pub states: Vec<TopicState>,
}

/// Reads `post_id<TAB>topic` lines. A post may appear on several lines.
pub fn parse_topics<R: BufRead>(reader: R) -> Result<TopicLabels> {
    let mut labels = TopicLabels::default();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let (post, topic) = line.split_once('\t').ok_or_else(|| Error::MalformedTopic {
            line: i + 1,
            message: "expected post_id<TAB>topic".into(),
        })?;
        let (post, topic) = (post.trim(), topic.trim());
        if post.is_empty() || topic.is_empty() {
            return Err(Error::MalformedTopic {
                line: i + 1,
                message: "empty post_id or topic".into(),
            });
        }
        labels.insert(post, topic)?;
    }
    Ok(labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ts(s: &str) -> Timestamp {
        Timestamp::parse(s).unwrap()
    }

    fn post(id: &str, blog: &str, at: &str) -> Post {
        Post {
            post_id: id.into(),
            blog_id: blog.into(),
            published_at: ts(at),
        }
    }

    fn window() -> Window {
        Window::new(ts("2010-02-01T00:00:00Z"), ts("2010-07-01T00:00:00Z")).unwrap()
    }

    #[test]
    fn empty_post_stream() {
        assert!(parse_posts("".as_bytes()).unwrap().is_empty());
    }

    #[test]
    fn parses_three_posts() {
        let input = r#"{"post_id":"p1","blog_id":"A","published_at":"2010-02-01T09:30:00Z"}
{"post_id":"p2","blog_id":"B","published_at":"2010-02-02T10:00:00Z"}

{"post_id":"p3","blog_id":"A","published_at":"2010-02-03T11:15:00Z"}
"#;
        let posts = parse_posts(input.as_bytes()).unwrap();
        assert_eq!(posts.len(), 3);
        assert_eq!(posts[1], post("p2", "B", "2010-02-02T10:00:00Z"));
    }

    #[test]
    fn duplicate_post_names_the_id() {
        let input = r#"{"post_id":"p1","blog_id":"A","published_at":"2010-02-01T09:30:00Z"}
{"post_id":"p1","blog_id":"B","published_at":"2010-02-02T10:00:00Z"}"#;
        let err = parse_posts(input.as_bytes()).unwrap_err();
        assert!(matches!(&err, Error::DuplicatePost(id) if id == "p1"));
        assert!(err.to_string().contains("p1"));
    }

    #[test]
    fn malformed_and_bad_timestamp_report_line() {
        let input = "{\"post_id\":\"p1\",\"blog_id\":\"A\",\"published_at\":\"2010-02-01T09:30:00Z\"}\nnot json\n";
        assert!(matches!(parse_posts(input.as_bytes()), Err(Error::MalformedPost { line: 2, .. })));
        let input = r#"{"post_id":"p1","blog_id":"A","published_at":"yesterday"}"#;
        assert!(matches!(parse_posts(input.as_bytes()), Err(Error::Timestamp { line: 1, .. })));
    }

    #[test]
    fn citations_header_only() {
        assert!(parse_citations("src_post_id,dst_post_id\n".as_bytes()).unwrap().is_empty());
    }

    #[test]
    fn citations_keep_file_order() {
        let c = parse_citations("src_post_id,dst_post_id\nb,a\na,b\n".as_bytes()).unwrap();
        assert_eq!(c, vec![Citation::new("b", "a"), Citation::new("a", "b")]);
    }

    #[test]
    fn citations_structural_errors() {
        let err = parse_citations("src_post_id,dst_post_id\nb,a\nx,y,z\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::ColumnCount { row: 3, found: 3 }));
        assert!(matches!(parse_citations("b,a\n".as_bytes()), Err(Error::MissingHeader)));
        assert!(matches!(parse_citations("".as_bytes()), Err(Error::MissingHeader)));
    }

    #[test]
    fn filter_reasons() {
        let posts = vec![
            post("p1", "A", "2010-03-02T00:00:00Z"),
            post("p2", "A", "2010-03-01T00:00:00Z"),
            post("q1", "B", "2010-03-01T12:00:00Z"),
            post("q2", "B", "2010-03-05T00:00:00Z"),
            post("old", "C", "2009-12-01T00:00:00Z"),
            post("lonely", "D", "2010-04-01T00:00:00Z"),
        ];
        let citations = vec![
            Citation::new("p1", "p2"),    // same blog
            Citation::new("p1", "q2"),    // q2 newer than p1
            Citation::new("p1", "q1"),    // kept
            Citation::new("p1", "q1"),    // duplicate
            Citation::new("p1", "old"),   // outside window
            Citation::new("p1", "ghost"), // unknown
            Citation::new("q2", "p1"),    // kept
        ];
        let (corpus, summary) = filter_corpus(&posts, &citations, window()).unwrap();
        assert_eq!(summary.removed[&RemovalReason::SelfCitation], 1);
        assert_eq!(summary.removed[&RemovalReason::AnteriorPost], 1);
        assert_eq!(summary.removed[&RemovalReason::Duplicate], 1);
        assert_eq!(summary.removed[&RemovalReason::OutOfCorpus], 2);
        assert_eq!(corpus.citations(), &[Citation::new("p1", "q1"), Citation::new("q2", "p1")]);
        assert_eq!((summary.blogs, summary.posts, summary.citations), (3, 5, 2));
        assert_eq!(summary.citations + summary.removed.values().sum::<usize>(), citations.len());
    }

    #[test]
    fn same_timestamp_is_kept() {
        let posts = vec![post("a", "A", "2010-03-01T00:00:00Z"), post("b", "B", "2010-03-01T00:00:00Z")];
        let (corpus, _) = filter_corpus(&posts, &[Citation::new("a", "b")], window()).unwrap();
        assert_eq!(corpus.citations().len(), 1);
    }

    #[test]
    fn self_citation_outranks_anterior() {
        let posts = vec![post("a", "A", "2010-03-01T00:00:00Z"), post("b", "A", "2010-03-02T00:00:00Z")];
        let (_, summary) = filter_corpus(&posts, &[Citation::new("a", "b")], window()).unwrap();
        assert_eq!(summary.removed[&RemovalReason::SelfCitation], 1);
        assert_eq!(summary.removed[&RemovalReason::AnteriorPost], 0);
    }

    #[test]
    fn invalid_window() {
        let t = ts("2010-03-01T00:00:00Z");
        assert!(Window::new(t, t).is_err());
    }

    #[test]
    fn topics_parse_and_conflict() {
        let labels = parse_topics("p1\tpolitics\np1\teconomy\np2\t__UNAVAILABLE__\n".as_bytes()).unwrap();
        assert_eq!(labels.labels["p1"].len(), 2);
        assert!(labels.unavailable.contains("p2"));
        assert!(matches!(
            parse_topics("p1\tpolitics\np1\t__UNAVAILABLE__\n".as_bytes()),
            Err(Error::TopicConflict(_))
        ));
        assert!(matches!(parse_topics("p1 politics\n".as_bytes()), Err(Error::MalformedTopic { line: 1, .. })));
    }
}
