//! Article and revision-history ingestion.

mod dump;
mod entities;
mod markup;

pub use dump::{
    parse_article_dump, parse_revision_dump, ArticleReader, Document, DumpFormat, DumpStats,
    ExtractOptions, PageHistory, RevisionReader, RevisionRecord, UNKNOWN_EDITOR,
};
pub use markup::{
    decode_entities, strip_markup, strip_markup_with, MarkupOptions, MarkupStats,
    DEFAULT_MAX_TEMPLATE_DEPTH,
};
