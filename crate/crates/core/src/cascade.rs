//! Cascade extraction and per-cascade metrics.
//!
//! A cascade is rooted at an *origin*, a post that cites nothing but is cited
//! at least once. Its nodes are the origin plus every post from which the
//! origin can be reached by following citations, and its arcs are all
//! citations among those nodes (the induced subgraph). Cascades are extracted
//! per origin, so one post may belong to several cascades.

use std::collections::VecDeque;
use std::fmt;
use std::io::Write;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{CitationGraph, PostIdx};
use crate::ingest::{Corpus, PostTopics, TopicState};

/// A non-negative fraction kept in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ratio {
    num: u64,
    den: u64,
}

impl Ratio {
    /// Panics if `den` is zero.
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0, "zero denominator");
        let g = gcd(num, den);
        Ratio {
            num: num / g,
            den: den / g,
        }
    }

    pub fn numer(self) -> u64 {
        self.num
    }

    pub fn denom(self) -> u64 {
        self.den
    }

    pub fn value(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl Serialize for Ratio {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.value())
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

/// The induced citation DAG feeding into one origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cascade {
    origin: PostIdx,
    nodes: Vec<PostIdx>,
    arcs: Vec<(PostIdx, PostIdx)>,
}

impl Cascade {
    /// Builds a cascade from parts without checking the reachability
    /// invariants. `nodes` and `arcs` are sorted and deduplicated.
    pub fn from_parts(origin: PostIdx, mut nodes: Vec<PostIdx>, mut arcs: Vec<(PostIdx, PostIdx)>) -> Self {
        nodes.sort_unstable();
        nodes.dedup();
        arcs.sort_unstable();
        arcs.dedup();
        Cascade { origin, nodes, arcs }
    }

    pub fn origin(&self) -> PostIdx {
        self.origin
    }

    /// Node set, ascending.
    pub fn nodes(&self) -> &[PostIdx] {
        &self.nodes
    }

    /// Arc set `(citing, cited)`, ascending.
    pub fn arcs(&self) -> &[(PostIdx, PostIdx)] {
        &self.arcs
    }

    /// Number of posts, origin excluded.
    pub fn size(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn local_index(&self, p: PostIdx) -> Option<usize> {
        self.nodes.binary_search(&p).ok()
    }

    /// Arcs relabeled to positions in [`Cascade::nodes`].
    pub fn local_arcs(&self) -> Vec<(usize, usize)> {
        self.arcs
            .iter()
            .map(|&(s, d)| (self.local(s), self.local(d)))
            .collect()
    }

    fn local(&self, p: PostIdx) -> usize {
        self.local_index(p).expect("arc endpoint outside node set")
    }

    /// In- and out-degree of each node inside the cascade, by local index.
    pub fn degrees(&self) -> (Vec<usize>, Vec<usize>) {
        let mut indeg = vec![0; self.nodes.len()];
        let mut outdeg = vec![0; self.nodes.len()];
        for (s, d) in self.local_arcs() {
            outdeg[s] += 1;
            indeg[d] += 1;
        }
        (indeg, outdeg)
    }
}

/// Posts with no outgoing citation and at least one incoming citation,
/// ascending (hence ordered by post id for a corpus graph).
pub fn find_origins(graph: &CitationGraph) -> Vec<PostIdx> {
    (0..graph.node_count() as PostIdx)
        .filter(|&p| graph.out_degree(p) == 0 && graph.in_degree(p) > 0)
        .collect()
}

/// Reusable breadth-first extractor; keeps its visit marks between calls so
/// repeated extraction does not reallocate per origin.
pub struct CascadeExtractor<'g> {
    graph: &'g CitationGraph,
    mark: Vec<u32>,
    generation: u32,
    queue: VecDeque<PostIdx>,
}

impl<'g> CascadeExtractor<'g> {
    pub fn new(graph: &'g CitationGraph) -> Self {
        CascadeExtractor {
            graph,
            mark: vec![0; graph.node_count()],
            generation: 0,
            queue: VecDeque::new(),
        }
    }

    pub fn extract(&mut self, origin: PostIdx) -> Result<Cascade> {
        let g = self.graph;
        if origin as usize >= g.node_count() || g.out_degree(origin) != 0 || g.in_degree(origin) == 0 {
            return Err(Error::NotAnOrigin(format!("#{origin}")));
        }
        if self.generation == u32::MAX {
            self.mark.fill(0);
            self.generation = 0;
        }
        self.generation += 1;
        let gen = self.generation;

        let mut nodes = vec![origin];
        self.mark[origin as usize] = gen;
        self.queue.clear();
        self.queue.push_back(origin);
        while let Some(v) = self.queue.pop_front() {
            for &s in g.citing(v) {
                if self.mark[s as usize] != gen {
                    self.mark[s as usize] = gen;
                    nodes.push(s);
                    self.queue.push_back(s);
                }
            }
        }
        nodes.sort_unstable();

        let mut arcs = Vec::new();
        for &v in &nodes {
            for &d in g.cited_by(v) {
                if self.mark[d as usize] == gen {
                    arcs.push((v, d));
                }
            }
        }
        Ok(Cascade { origin, nodes, arcs })
    }
}

pub fn extract_cascade(graph: &CitationGraph, origin: PostIdx) -> Result<Cascade> {
    CascadeExtractor::new(graph).extract(origin)
}

/// One cascade per origin, ordered by origin.
pub fn extract_all_cascades(graph: &CitationGraph) -> Vec<Cascade> {
    find_origins(graph)
        .par_iter()
        .map_init(
            || CascadeExtractor::new(graph),
            |ex, &o| ex.extract(o).expect("find_origins yields origins"),
        )
        .collect()
}

/// Largest shortest-path distance (in arcs) from any node to the origin.
pub fn cascade_depth(c: &Cascade) -> usize {
    let n = c.node_count();
    let mut citing: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (s, d) in c.local_arcs() {
        citing[d].push(s);
    }
    let mut dist = vec![usize::MAX; n];
    let root = c.local(c.origin);
    dist[root] = 0;
    let mut queue = VecDeque::from([root]);
    let mut depth = 0;
    while let Some(v) = queue.pop_front() {
        depth = depth.max(dist[v]);
        for &s in &citing[v] {
            if dist[s] == usize::MAX {
                dist[s] = dist[v] + 1;
                queue.push_back(s);
            }
        }
    }
    depth
}

/// Star/chain coefficient: out-arcs leaving in-degree-0 nodes, minus one,
/// over all arcs minus one. 0 for chains, 1 for stars; `None` when the
/// cascade has fewer than two arcs.
pub fn sc_coefficient(c: &Cascade) -> Option<Ratio> {
    let (indeg, outdeg) = c.degrees();
    sc_from_degrees(&indeg, &outdeg)
}

pub(crate) fn sc_from_degrees(indeg: &[usize], outdeg: &[usize]) -> Option<Ratio> {
    let total: usize = outdeg.iter().sum();
    if total < 2 {
        return None;
    }
    let from_roots: usize = indeg
        .iter()
        .zip(outdeg)
        .filter(|(&i, _)| i == 0)
        .map(|(_, &o)| o)
        .sum();
    Some(Ratio::new(from_roots as u64 - 1, total as u64 - 1))
}

/// The topic carried by the most labeled nodes; ties go to the
/// lexicographically smallest topic string.
pub fn assign_topic(c: &Cascade, topics: &PostTopics) -> Option<u32> {
    let mut counts = vec![0usize; topics.topics.len()];
    for &p in c.nodes() {
        if let Some(TopicState::Labeled(ts)) = topics.states.get(p as usize) {
            for &t in ts {
                counts[t as usize] += 1;
            }
        }
    }
    // Topic ids are ordered like their strings, so the first maximum wins ties.
    let (best, &n) = counts
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))?;
    (n > 0).then_some(best as u32)
}

/// Share of content-available nodes carrying the assigned topic.
pub fn topic_unity(c: &Cascade, topics: &PostTopics) -> Option<Ratio> {
    let topic = assign_topic(c, topics)?;
    let mut with_topic = 0u64;
    let mut available = 0u64;
    for &p in c.nodes() {
        match topics.states.get(p as usize) {
            Some(TopicState::Unavailable) => {}
            Some(TopicState::Labeled(ts)) => {
                available += 1;
                if ts.binary_search(&topic).is_ok() {
                    with_topic += 1;
                }
            }
            _ => available += 1,
        }
    }
    (available > 0).then(|| Ratio::new(with_topic, available))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CascadeMetrics {
    pub size: usize,
    pub depth: usize,
    pub sc: Option<Ratio>,
    pub topic: Option<String>,
    pub topic_unity: Option<Ratio>,
}

pub fn cascade_metrics(c: &Cascade, topics: Option<&PostTopics>) -> CascadeMetrics {
    let (topic, topic_unity) = match topics {
        Some(t) => (
            assign_topic(c, t).map(|id| t.topics[id as usize].clone()),
            topic_unity(c, t),
        ),
        None => (None, None),
    };
    CascadeMetrics {
        size: c.size(),
        depth: cascade_depth(c),
        sc: sc_coefficient(c),
        topic,
        topic_unity,
    }
}

#[derive(Serialize)]
struct CascadeRecord<'a> {
    origin: &'a str,
    nodes: Vec<&'a str>,
    arcs: Vec<[&'a str; 2]>,
    #[serde(flatten)]
    metrics: &'a CascadeMetrics,
}

/// Writes one JSON object per cascade: origin, nodes, arcs, size, depth, sc,
/// topic, topic_unity.
pub fn write_cascades<W: Write>(mut w: W, corpus: &Corpus, cascades: &[Cascade], metrics: &[CascadeMetrics]) -> Result<()> {
    for (c, m) in cascades.iter().zip(metrics) {
        let record = CascadeRecord {
            origin: corpus.post_id(c.origin),
            nodes: c.nodes.iter().map(|&p| corpus.post_id(p)).collect(),
            arcs: c
                .arcs
                .iter()
                .map(|&(s, d)| [corpus.post_id(s), corpus.post_id(d)])
                .collect(),
            metrics: m,
        };
        serde_json::to_writer(&mut w, &record)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

/// Resolves an origin by post id.
pub fn extract_cascade_by_id(corpus: &Corpus, graph: &CitationGraph, origin: &str) -> Result<Cascade> {
    let idx = corpus
        .post_index(origin)
        .ok_or_else(|| Error::NotAnOrigin(origin.to_string()))?;
    extract_cascade(graph, idx).map_err(|_| Error::NotAnOrigin(origin.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    // Node names: o = 0, a = 1, b = 2, c = 3, z = 4.
    fn graph(n: usize, arcs: &[(u32, u32)]) -> CitationGraph {
        CitationGraph::new(n, arcs.iter().copied())
    }

    fn star(leaves: u32) -> Cascade {
        let g = graph(leaves as usize + 1, &(1..=leaves).map(|l| (l, 0)).collect::<Vec<_>>());
        extract_cascade(&g, 0).unwrap()
    }

    fn chain(arcs: u32) -> Cascade {
        let g = graph(arcs as usize + 1, &(1..=arcs).map(|i| (i, i - 1)).collect::<Vec<_>>());
        extract_cascade(&g, 0).unwrap()
    }

    #[test]
    fn origins() {
        assert_eq!(find_origins(&graph(2, &[(0, 1)])), vec![1]);
        // a -> b -> c
        assert_eq!(find_origins(&graph(3, &[(0, 1), (1, 2)])), vec![2]);
        // post 2 is isolated
        assert_eq!(find_origins(&graph(3, &[(0, 1)])), vec![1]);
    }

    #[test]
    fn extraction_examples() {
        let c = extract_cascade(&graph(3, &[(1, 0), (2, 0)]), 0).unwrap();
        assert_eq!(c.nodes(), &[0, 1, 2]);
        assert_eq!(c.arcs().len(), 2);

        // a->o, c->a, c->o: induced arcs give c out-degree 2
        let c = extract_cascade(&graph(4, &[(1, 0), (3, 1), (3, 0)]), 0).unwrap();
        assert_eq!(c.nodes(), &[0, 1, 3]);
        assert_eq!(c.arcs(), &[(1, 0), (3, 0), (3, 1)]);

        // a->o, a->z: z is excluded from o's cascade
        let c = extract_cascade(&graph(5, &[(1, 0), (1, 4)]), 0).unwrap();
        assert_eq!(c.nodes(), &[0, 1]);
        assert_eq!(c.arcs(), &[(1, 0)]);
    }

    #[test]
    fn not_an_origin() {
        let g = graph(3, &[(0, 1), (1, 2)]);
        assert!(matches!(extract_cascade(&g, 1), Err(Error::NotAnOrigin(_))));
        assert!(extract_cascade(&graph(3, &[(0, 1)]), 2).is_err());
    }

    #[test]
    fn all_cascades() {
        let stars = graph(6, &[(1, 0), (2, 0), (4, 3), (5, 3)]);
        assert_eq!(extract_all_cascades(&stars).len(), 2);
        // a -> o1, a -> o2
        let both = extract_all_cascades(&graph(3, &[(0, 1), (0, 2)]));
        assert_eq!(both.len(), 2);
        assert!(both.iter().all(|c| c.nodes().contains(&0)));
        assert!(extract_all_cascades(&graph(4, &[])).is_empty());
    }

    #[test]
    fn depths() {
        assert_eq!(cascade_depth(&star(3)), 1);
        assert_eq!(cascade_depth(&chain(3)), 3);
        // a->o, b->a, b->o: b's shortest route is direct
        let c = extract_cascade(&graph(3, &[(1, 0), (2, 1), (2, 0)]), 0).unwrap();
        assert_eq!(cascade_depth(&c), 1);
    }

    #[test]
    fn sc_examples() {
        assert_eq!(sc_coefficient(&chain(2)), Some(Ratio::new(0, 1)));
        assert_eq!(sc_coefficient(&star(3)), Some(Ratio::new(1, 1)));
        // a->o, b->o, c->a
        let c = extract_cascade(&graph(4, &[(1, 0), (2, 0), (3, 1)]), 0).unwrap();
        assert_eq!(sc_coefficient(&c).unwrap().value(), 0.5);
        assert_eq!(sc_coefficient(&star(1)), None);
    }

    fn topics(states: Vec<TopicState>, names: &[&str]) -> PostTopics {
        PostTopics {
            topics: names.iter().map(|s| s.to_string()).collect(),
            states,
        }
    }

    fn labeled(ids: &[u32]) -> TopicState {
        TopicState::Labeled(ids.to_vec())
    }

    #[test]
    fn topic_assignment() {
        let c = star(3);
        let all_t = topics(vec![labeled(&[0]); 4], &["T"]);
        assert_eq!(assign_topic(&c, &all_t), Some(0));

        let three_a = topics(vec![labeled(&[0]), labeled(&[0]), labeled(&[0]), labeled(&[1])], &["A", "B"]);
        assert_eq!(assign_topic(&c, &three_a), Some(0));

        let tie = topics(vec![labeled(&[1]), labeled(&[0]), labeled(&[1]), labeled(&[0])], &["A", "B"]);
        assert_eq!(assign_topic(&c, &tie), Some(0));

        let none = topics(vec![TopicState::Unlabeled; 4], &[]);
        assert_eq!(assign_topic(&c, &none), None);
        assert_eq!(topic_unity(&c, &none), None);
    }

    #[test]
    fn topic_unity_examples() {
        let five = star(4);
        assert_eq!(topic_unity(&five, &topics(vec![labeled(&[0]); 5], &["T"])), Some(Ratio::new(1, 1)));

        let with_gap = topics(
            vec![labeled(&[0]), labeled(&[0]), labeled(&[0]), labeled(&[1]), TopicState::Unavailable],
            &["T", "U"],
        );
        assert_eq!(topic_unity(&five, &with_gap), Some(Ratio::new(3, 4)));

        let half = topics(
            vec![labeled(&[0]), labeled(&[0]), TopicState::Unlabeled, TopicState::Unlabeled],
            &["T"],
        );
        assert_eq!(topic_unity(&star(3), &half).unwrap().value(), 0.5);
    }

    #[test]
    fn ratio_reduces() {
        assert_eq!(Ratio::new(2, 4), Ratio::new(1, 2));
        assert_eq!(Ratio::new(0, 5), Ratio::new(0, 1));
        assert_eq!(Ratio::new(2, 4).to_string(), "1/2");
    }
}
