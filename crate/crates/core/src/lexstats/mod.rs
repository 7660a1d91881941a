//! Lexical statistics: n-gram tables, entropy, vocabulary growth and
//! sentence structure.

mod corpus;
mod counts;
mod vocab;

pub use corpus::{corpus_stats, CorpusStats, SUBSENTENCE_SEPARATORS};
pub use counts::{
    ngram_counts, ngram_counts_sections, ngram_counts_sharded, table_entropy, BoundaryPolicy,
    CountTable,
};
pub use vocab::{
    fit_power_law, heaps_curve, heaps_fit, herdan_c, type_token_counts, unigram_entropy,
    zipf_table, CheckpointPolicy, HeapsFit, TypeTokenCounts, ZipfRow, MIN_HEAPS_CHECKPOINTS,
    MIN_HEAPS_TOKENS,
};
