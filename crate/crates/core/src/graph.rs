//! Post-level citation graph in compressed adjacency form.

/// Index of a post inside a [`Corpus`](crate::ingest::Corpus).
pub type PostIdx = u32;

/// Directed post graph; an arc `(a, b)` means post `a` cites post `b`.
/// Parallel arcs are collapsed.
#[derive(Debug, Clone)]
pub struct CitationGraph {
    n: usize,
    out_offsets: Vec<usize>,
    out_targets: Vec<PostIdx>,
    in_offsets: Vec<usize>,
    in_sources: Vec<PostIdx>,
}

impl CitationGraph {
    pub fn new(n: usize, arcs: impl IntoIterator<Item = (PostIdx, PostIdx)>) -> Self {
        let mut arcs: Vec<(PostIdx, PostIdx)> = arcs.into_iter().collect();
        arcs.sort_unstable();
        arcs.dedup();
        let (out_offsets, out_targets) = compress(n, arcs.iter().map(|&(s, d)| (s, d)));
        let mut rev: Vec<(PostIdx, PostIdx)> = arcs.iter().map(|&(s, d)| (d, s)).collect();
        rev.sort_unstable();
        let (in_offsets, in_sources) = compress(n, rev.into_iter());
        CitationGraph {
            n,
            out_offsets,
            out_targets,
            in_offsets,
            in_sources,
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        self.out_targets.len()
    }

    /// Posts cited by `p`, ascending.
    pub fn cited_by(&self, p: PostIdx) -> &[PostIdx] {
        let p = p as usize;
        &self.out_targets[self.out_offsets[p]..self.out_offsets[p + 1]]
    }

    /// Posts citing `p`, ascending.
    pub fn citing(&self, p: PostIdx) -> &[PostIdx] {
        let p = p as usize;
        &self.in_sources[self.in_offsets[p]..self.in_offsets[p + 1]]
    }

    pub fn out_degree(&self, p: PostIdx) -> usize {
        self.cited_by(p).len()
    }

    pub fn in_degree(&self, p: PostIdx) -> usize {
        self.citing(p).len()
    }

    pub fn arcs(&self) -> impl Iterator<Item = (PostIdx, PostIdx)> + '_ {
        (0..self.n as PostIdx).flat_map(move |s| self.cited_by(s).iter().map(move |&d| (s, d)))
    }
}

// Input must be sorted by key.
fn compress(n: usize, sorted: impl Iterator<Item = (PostIdx, PostIdx)>) -> (Vec<usize>, Vec<PostIdx>) {
    let mut offsets = vec![0usize; n + 1];
    let mut values = Vec::new();
    for (k, v) in sorted {
        offsets[k as usize + 1] += 1;
        values.push(v);
    }
    for i in 0..n {
        offsets[i + 1] += offsets[i];
    }
    (offsets, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjacency_and_dedup() {
        let g = CitationGraph::new(4, [(1, 0), (2, 0), (2, 1), (2, 1), (3, 2)]);
        assert_eq!(g.arc_count(), 4);
        assert_eq!(g.citing(0), &[1, 2]);
        assert_eq!(g.cited_by(2), &[0, 1]);
        assert_eq!(g.out_degree(0), 0);
        assert_eq!(g.in_degree(3), 0);
        assert_eq!(g.arcs().collect::<Vec<_>>(), vec![(1, 0), (2, 0), (2, 1), (3, 2)]);
    }
}
