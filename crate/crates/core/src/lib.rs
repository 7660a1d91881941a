//! Corpus comparison toolkit: dump ingestion, text normalization, balanced
//! sampling, lexical and part-of-speech statistics, readability and
//! edit-conflict measures.

pub mod controversy;
pub mod error;
pub mod ingest;
pub mod lexstats;
pub mod posstats;
pub mod readability;
pub mod report;
pub mod sampling;
pub mod text;

pub use error::{Error, Result};
pub use ingest::{Document, PageHistory, RevisionRecord};
pub use lexstats::{BoundaryPolicy, CountTable};
pub use sampling::{ConditionSpec, Sample, SizeUnit};
pub use text::{Sentence, Token, TokenKind};
