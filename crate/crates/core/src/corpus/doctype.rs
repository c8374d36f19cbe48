use std::fmt;

use serde::{Deserialize, Serialize};

/// Document type of a bibliographic item.
///
/// Ordering follows declaration order, with `Other` labels sorted
/// alphabetically after the named types.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "String", into = "String")]
pub enum DocType {
    Article,
    ProceedingsPaper,
    Review,
    Editorial,
    BookReview,
    /// Any other label, uppercased verbatim.
    Other(String),
}

impl DocType {
    /// Types that make up the research-paper subset.
    pub const RESEARCH: [DocType; 3] =
        [DocType::Article, DocType::ProceedingsPaper, DocType::Review];

    /// Maps one document-type label (case-insensitive) to a type.
    pub fn from_label(label: &str) -> DocType {
        let upper = label
            .split_whitespace()
            .collect::<Vec<_>>()
            .join(" ")
            .to_uppercase();
        match upper.as_str() {
            "ARTICLE" => DocType::Article,
            "PROCEEDINGS PAPER" | "PROCEEDINGS_PAPER" => DocType::ProceedingsPaper,
            "REVIEW" => DocType::Review,
            "EDITORIAL MATERIAL" | "EDITORIAL" => DocType::Editorial,
            "BOOK REVIEW" | "BOOK_REVIEW" => DocType::BookReview,
            _ => DocType::Other(upper),
        }
    }

    pub fn label(&self) -> &str {
        match self {
            DocType::Article => "ARTICLE",
            DocType::ProceedingsPaper => "PROCEEDINGS PAPER",
            DocType::Review => "REVIEW",
            DocType::Editorial => "EDITORIAL MATERIAL",
            DocType::BookReview => "BOOK REVIEW",
            DocType::Other(label) => label,
        }
    }

    pub fn is_research(&self) -> bool {
        DocType::RESEARCH.contains(self)
    }
}

impl fmt::Display for DocType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl From<String> for DocType {
    fn from(value: String) -> Self {
        DocType::from_label(&value)
    }
}

impl From<DocType> for String {
    fn from(value: DocType) -> Self {
        value.label().to_string()
    }
}
