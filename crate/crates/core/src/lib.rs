//! Citation cascades in blog networks.
//!
//! The pipeline reads timestamped posts and post-to-post citations
//! ([`ingest`]), extracts per-origin citation cascades and their metrics
//! ([`cascade`]), groups cascades by shape ([`motifs`]), computes the
//! distributional statistics of the corpus ([`stats`]), and compares the
//! real cascades with an item-free null model that re-targets every citation
//! to a random earlier post of the same cited blog ([`nullmodel`]).
//!
//! ```
//! use blogcascade::cascade::{extract_all_cascades, sc_coefficient};
//! use blogcascade::ingest::{filter_corpus, parse_citations, parse_posts, Window};
//!
//! let posts = parse_posts(
//!     r#"{"post_id":"o","blog_id":"A","published_at":"2010-02-01T09:00:00Z"}
//! {"post_id":"x","blog_id":"B","published_at":"2010-02-01T10:00:00Z"}
//! {"post_id":"y","blog_id":"C","published_at":"2010-02-02T10:00:00Z"}"#
//!         .as_bytes(),
//! )?;
//! let citations = parse_citations("src_post_id,dst_post_id\nx,o\ny,o\n".as_bytes())?;
//! let window = Window::covering(&posts).unwrap();
//! let (corpus, summary) = filter_corpus(&posts, &citations, window)?;
//! assert_eq!((summary.blogs, summary.posts, summary.citations), (3, 3, 2));
//!
//! let cascades = extract_all_cascades(&corpus.graph());
//! assert_eq!(cascades.len(), 1);
//! assert_eq!(sc_coefficient(&cascades[0]).unwrap().value(), 1.0);
//! # Ok::<(), blogcascade::Error>(())
//! ```

pub mod cascade;
mod error;
pub mod graph;
pub mod ingest;
pub mod motifs;
pub mod nullmodel;
pub mod stats;
pub mod synthetic;
pub mod time;

pub use error::{Error, Result};

// The guide under book/ is compiled and run with the doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/corpus.md")]
    pub struct Corpus;
    #[doc = include_str!("../../../book/src/cascades.md")]
    pub struct Cascades;
    #[doc = include_str!("../../../book/src/sc.md")]
    pub struct StarChain;
    #[doc = include_str!("../../../book/src/shapes.md")]
    pub struct Shapes;
    #[doc = include_str!("../../../book/src/statistics.md")]
    pub struct Statistics;
    #[doc = include_str!("../../../book/src/null-model.md")]
    pub struct NullModel;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct Cli;
}
