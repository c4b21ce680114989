use std::io::Write;

use serde::Serialize;

use crate::error::Result;
use crate::ingest::Corpus;
use crate::stats::EmpiricalDistribution;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlogDegree {
    pub blog_id: String,
    pub out_degree: u64,
    pub in_degree: u64,
}

/// Blog-level citation degrees. Each citation counts once, so repeated
/// citations between the same two blogs add up.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeStats {
    /// Every blog owning a post, including blogs without citations; blog order.
    pub per_blog: Vec<BlogDegree>,
    pub in_degrees: EmpiricalDistribution,
    pub out_degrees: EmpiricalDistribution,
}

impl DegreeStats {
    /// (out, in) pairs; `include_isolated = false` drops blogs with neither
    /// incoming nor outgoing citations.
    pub fn pairs(&self, include_isolated: bool) -> Vec<(f64, f64)> {
        self.per_blog
            .iter()
            .filter(|b| include_isolated || b.out_degree + b.in_degree > 0)
            .map(|b| (b.out_degree as f64, b.in_degree as f64))
            .collect()
    }

    /// CSV columns: blog_id, out_degree, in_degree.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["blog_id", "out_degree", "in_degree"])?;
        for b in &self.per_blog {
            wtr.write_record([b.blog_id.clone(), b.out_degree.to_string(), b.in_degree.to_string()])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

pub fn degree_distributions(corpus: &Corpus) -> DegreeStats {
    let n = corpus.blogs().len();
    let mut out_deg = vec![0u64; n];
    let mut in_deg = vec![0u64; n];
    for &(s, d) in corpus.arcs() {
        out_deg[corpus.blog_of(s) as usize] += 1;
        in_deg[corpus.blog_of(d) as usize] += 1;
    }
    let per_blog = corpus
        .blogs()
        .iter()
        .enumerate()
        .map(|(i, b)| BlogDegree {
            blog_id: b.clone(),
            out_degree: out_deg[i],
            in_degree: in_deg[i],
        })
        .collect();
    DegreeStats {
        per_blog,
        in_degrees: in_deg.iter().copied().collect(),
        out_degrees: out_deg.iter().copied().collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{filter_corpus, Citation, Post, Window};
    use crate::time::Timestamp;

    fn post(id: &str, blog: &str, secs: i64) -> Post {
        Post {
            post_id: id.into(),
            blog_id: blog.into(),
            published_at: Timestamp(1_265_000_000 + secs),
        }
    }

    #[test]
    fn multiplicity_and_isolated_blogs() {
        let posts = vec![
            post("a1", "A", 100),
            post("a2", "A", 200),
            post("a3", "A", 300),
            post("b1", "B", 0),
            post("c1", "C", 0),
        ];
        let citations = vec![Citation::new("a1", "b1"), Citation::new("a2", "b1"), Citation::new("a3", "b1")];
        let window = Window::new(Timestamp(1_265_000_000), Timestamp(1_265_001_000)).unwrap();
        let (corpus, _) = filter_corpus(&posts, &citations, window).unwrap();
        let stats = degree_distributions(&corpus);
        assert_eq!(stats.per_blog[0], BlogDegree { blog_id: "A".into(), out_degree: 3, in_degree: 0 });
        assert_eq!(stats.per_blog[1].in_degree, 3);
        assert_eq!((stats.per_blog[2].out_degree, stats.per_blog[2].in_degree), (0, 0));
        assert_eq!(stats.pairs(true).len(), 3);
        assert_eq!(stats.pairs(false).len(), 2);

        let (empty, _) = filter_corpus(&[], &[], window).unwrap();
        let stats = degree_distributions(&empty);
        assert!(stats.per_blog.is_empty() && stats.in_degrees.is_empty());
    }
}
