//! Canonical shape codes for small cascades and the frequency census built
//! on them.
//!
//! A shape code is a row-major adjacency bit string. Nodes are first sorted
//! into blocks by (out-degree desc, in-degree asc) signature; the code is the
//! lexicographically smallest bit string over every relabeling that permutes
//! nodes within their block. Any isomorphism preserves signatures, so two
//! graphs get the same code exactly when they are isomorphic.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::cascade::{cascade_depth, sc_from_degrees, Cascade, Ratio};
use crate::error::Result;
use crate::ingest::Corpus;

pub const DEFAULT_CAP: usize = 8;
/// Hard ceiling on the configurable cap; adjacency rows are 64-bit masks and
/// the permutation search is factorial.
pub const MAX_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ShapeCode {
    nodes: usize,
    /// n*n adjacency bits, row-major, most significant bit first.
    bits: Vec<u8>,
}

impl ShapeCode {
    pub fn node_count(&self) -> usize {
        self.nodes
    }

    pub fn arc_count(&self) -> usize {
        self.bits.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn bytes(&self) -> &[u8] {
        &self.bits
    }

    pub fn hex(&self) -> String {
        let mut s = String::with_capacity(self.bits.len() * 2);
        for b in &self.bits {
            write!(s, "{b:02x}").unwrap();
        }
        s
    }

    pub fn has_arc(&self, from: usize, to: usize) -> bool {
        let k = from * self.nodes + to;
        self.bits[k / 8] & (0x80 >> (k % 8)) != 0
    }

    /// Arcs of the canonical labeling.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let n = self.nodes;
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.has_arc(i, j))
            .collect()
    }

    /// Star/chain coefficient of the shape; `None` below two arcs.
    pub fn sc(&self) -> Option<Ratio> {
        let mut indeg = vec![0; self.nodes];
        let mut outdeg = vec![0; self.nodes];
        for (s, d) in self.arcs() {
            outdeg[s] += 1;
            indeg[d] += 1;
        }
        sc_from_degrees(&indeg, &outdeg)
    }
}

/// Marker for a cascade too large to canonicalize exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AboveCap {
    pub nodes: usize,
    pub cap: usize,
}

pub fn canonical_code(c: &Cascade, cap: usize) -> Result<ShapeCode, AboveCap> {
    let n = c.node_count();
    if n > cap.min(MAX_CAP) {
        return Err(AboveCap { nodes: n, cap });
    }
    Ok(canonical_code_of(n, &c.local_arcs()))
}

/// Canonical code of an arbitrary directed graph on nodes `0..n`.
/// Self-loops are allowed; parallel arcs collapse.
pub fn canonical_code_of(n: usize, arcs: &[(usize, usize)]) -> ShapeCode {
    assert!(n <= 64, "canonical_code_of supports at most 64 nodes");
    let mut adj = vec![0u64; n];
    for &(s, d) in arcs {
        adj[s] |= 1 << d;
    }
    let mut indeg = vec![0u32; n];
    let mut outdeg = vec![0u32; n];
    for (s, row) in adj.iter().enumerate() {
        outdeg[s] = row.count_ones();
        for (d, deg) in indeg.iter_mut().enumerate() {
            if row & (1 << d) != 0 {
                *deg += 1;
            }
        }
    }

    // Positions are grouped into blocks of equal (out, in) signature, ordered
    // by signature; the search permutes vertices only within a block.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(outdeg[v]), indeg[v]));
    let sig = |v: usize| (outdeg[v], indeg[v]);
    let mut block_of_pos = Vec::with_capacity(n);
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for (i, &v) in order.iter().enumerate() {
        if i == 0 || sig(order[i - 1]) != sig(v) {
            blocks.push(Vec::new());
        }
        blocks.last_mut().unwrap().push(v);
        block_of_pos.push(blocks.len() - 1);
    }

    let mut search = Search {
        n,
        adj: &adj,
        blocks: &blocks,
        block_of_pos: &block_of_pos,
        perm: Vec::with_capacity(n),
        used: vec![false; n],
        scratch: vec![0u8; (n * n).div_ceil(8)],
        best: None,
    };
    search.place(0);
    ShapeCode {
        nodes: n,
        bits: search.best.unwrap_or_default(),
    }
}

struct Search<'a> {
    n: usize,
    adj: &'a [u64],
    blocks: &'a [Vec<usize>],
    block_of_pos: &'a [usize],
    perm: Vec<usize>,
    used: Vec<bool>,
    scratch: Vec<u8>,
    best: Option<Vec<u8>>,
}

impl Search<'_> {
    fn place(&mut self, pos: usize) {
        if pos == self.n {
            self.evaluate();
            return;
        }
        let block = &self.blocks[self.block_of_pos[pos]];
        for i in 0..block.len() {
            let v = block[i];
            if self.used[v] {
                continue;
            }
            self.used[v] = true;
            self.perm.push(v);
            self.place(pos + 1);
            self.perm.pop();
            self.used[v] = false;
        }
    }

    fn evaluate(&mut self) {
        self.scratch.fill(0);
        let n = self.n;
        for (p, &u) in self.perm.iter().enumerate() {
            let row = self.adj[u];
            for (q, &v) in self.perm.iter().enumerate() {
                if row & (1 << v) != 0 {
                    let k = p * n + q;
                    self.scratch[k / 8] |= 0x80 >> (k % 8);
                }
            }
        }
        match &mut self.best {
            Some(best) if *best <= self.scratch => {}
            Some(best) => best.copy_from_slice(&self.scratch),
            None => self.best = Some(self.scratch.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusEntry {
    pub code: ShapeCode,
    pub frequency: usize,
    /// Index into the census input of the first cascade with this shape.
    pub example: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapeCensus {
    pub cap: usize,
    /// Decreasing frequency, ties by code.
    pub entries: Vec<CensusEntry>,
    /// Cascades with more nodes than `cap`.
    pub above_cap: usize,
    /// Above-cap cascades bucketed by (size, depth).
    pub above_cap_buckets: BTreeMap<(usize, usize), usize>,
}

impl ShapeCensus {
    pub fn truncated(&self) -> bool {
        self.above_cap > 0
    }

    pub fn total(&self) -> usize {
        self.entries.iter().map(|e| e.frequency).sum::<usize>() + self.above_cap
    }

    pub fn frequency(&self, code: &ShapeCode) -> usize {
        self.entries
            .iter()
            .find(|e| &e.code == code)
            .map_or(0, |e| e.frequency)
    }
}

pub fn shape_census(cascades: &[Cascade], cap: usize) -> ShapeCensus {
    let codes: Vec<Result<ShapeCode, AboveCap>> = cascades.par_iter().map(|c| canonical_code(c, cap)).collect();

    let mut groups: HashMap<ShapeCode, (usize, usize)> = HashMap::new();
    let mut above_cap = 0;
    let mut above_cap_buckets = BTreeMap::new();
    for (i, code) in codes.into_iter().enumerate() {
        match code {
            Ok(code) => groups.entry(code).or_insert((0, i)).0 += 1,
            Err(_) => {
                above_cap += 1;
                let c = &cascades[i];
                *above_cap_buckets.entry((c.size(), cascade_depth(c))).or_insert(0) += 1;
            }
        }
    }
    let mut entries: Vec<CensusEntry> = groups
        .into_iter()
        .map(|(code, (frequency, example))| CensusEntry {
            code,
            frequency,
            example,
        })
        .collect();
    entries.sort_by(|a, b| b.frequency.cmp(&a.frequency).then_with(|| a.code.cmp(&b.code)));
    ShapeCensus {
        cap,
        entries,
        above_cap,
        above_cap_buckets,
    }
}

/// CSV columns: rank, node_count, arc_count, code (hex), frequency.
pub fn write_census<W: Write>(w: W, census: &ShapeCensus) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["rank", "node_count", "arc_count", "code", "frequency"])?;
    for (rank, e) in census.entries.iter().enumerate() {
        wtr.write_record([
            (rank + 1).to_string(),
            e.code.node_count().to_string(),
            e.code.arc_count().to_string(),
            e.code.hex(),
            e.frequency.to_string(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct ExampleRecord<'a> {
    rank: usize,
    code: String,
    frequency: usize,
    canonical_arcs: Vec<(usize, usize)>,
    origin: &'a str,
    arcs: Vec<[&'a str; 2]>,
}

/// One JSON line per census entry with its canonical arc list and the post
/// ids of an example cascade.
pub fn write_census_examples<W: Write>(mut w: W, corpus: &Corpus, cascades: &[Cascade], census: &ShapeCensus) -> Result<()> {
    for (rank, e) in census.entries.iter().enumerate() {
        let c = &cascades[e.example];
        let record = ExampleRecord {
            rank: rank + 1,
            code: e.code.hex(),
            frequency: e.frequency,
            canonical_arcs: e.code.arcs(),
            origin: corpus.post_id(c.origin()),
            arcs: c
                .arcs()
                .iter()
                .map(|&(s, d)| [corpus.post_id(s), corpus.post_id(d)])
                .collect(),
        };
        serde_json::to_writer(&mut w, &record)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}
