//! Classical sentence similarity: LCS string measures, taxonomy-based Lin
//! similarity, corpus co-occurrence and LSA word measures, TF-IDF and
//! embedding baselines, and an evaluation harness for paraphrase and
//! relatedness benchmarks.

pub mod corpus;
pub mod datasets;
pub mod eval;
pub mod rng;
pub mod sentsim;
pub mod stringsim;
pub mod taxonomy;
pub mod textprep;
pub mod vectorspace;
