//! Normalized papers built from parsed records.

mod address;
mod doctype;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::{FieldTag, Record};

pub use address::{Address, CountryTable, CountryTableError};
pub use doctype::DocType;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CorpusError {
    #[error("record at line {line}: no UT field")]
    MissingUid { line: usize },
    #[error("record {uid}: publication year {value:?} is not a year >= 1900")]
    BadYear { uid: String, value: String },
    #[error("record {uid}: citation count {value:?} is not a non-negative integer")]
    BadCitationCount { uid: String, value: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Info,
    Warning,
}

/// One normalization finding, written as a JSON line `{uid, severity, message}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub uid: String,
    pub severity: Severity,
    pub message: String,
}

impl Diagnostic {
    fn warning(uid: &str, message: impl Into<String>) -> Self {
        Diagnostic {
            uid: uid.to_string(),
            severity: Severity::Warning,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Paper {
    pub uid: String,
    pub doc_types: BTreeSet<DocType>,
    /// Uppercased source title; the journal identity used for peer sets.
    pub journal: String,
    pub year: Option<i32>,
    pub authors: Vec<String>,
    pub addresses: Vec<Address>,
    pub author_keywords: Vec<String>,
    pub keywords_plus: Vec<String>,
    pub categories: Vec<String>,
    pub citation_count: u64,
}

impl Paper {
    pub fn has_type(&self, doc_type: &DocType) -> bool {
        self.doc_types.contains(doc_type)
    }

    pub fn is_research(&self) -> bool {
        self.doc_types.iter().any(DocType::is_research)
    }
}

/// Output of [`normalize`]: deduplicated papers in input order plus the
/// diagnostics raised on the way.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Normalized {
    pub papers: Vec<Paper>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Builds one paper per record, dropping later records whose UT repeats an
/// earlier one.
pub fn normalize(records: &[Record], countries: &CountryTable) -> Result<Normalized, CorpusError> {
    let mut out = Normalized::default();
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    for record in records {
        let (paper, mut diags) = normalize_record(record, countries)?;
        if let Some(first) = seen.get(&paper.uid) {
            out.diagnostics.push(Diagnostic::warning(
                &paper.uid,
                format!(
                    "duplicate record at line {} dropped (first seen at line {first})",
                    record.source_line()
                ),
            ));
            continue;
        }
        seen.insert(paper.uid.clone(), record.source_line());
        out.diagnostics.append(&mut diags);
        out.papers.push(paper);
    }
    Ok(out)
}

fn normalize_record(
    record: &Record,
    countries: &CountryTable,
) -> Result<(Paper, Vec<Diagnostic>), CorpusError> {
    let mut diags = Vec::new();
    let uid = record
        .joined(FieldTag::UT)
        .filter(|u| !u.is_empty())
        .ok_or(CorpusError::MissingUid {
            line: record.source_line(),
        })?;

    let year = match record.joined(FieldTag::PY) {
        None => None,
        Some(raw) => match raw.parse::<i32>() {
            Ok(y) if y >= 1900 => Some(y),
            _ => return Err(CorpusError::BadYear { uid, value: raw }),
        },
    };
    if year.is_none() {
        diags.push(Diagnostic::warning(&uid, "no publication year (PY)"));
    }

    let citation_count = match record.joined(FieldTag::TC) {
        None => {
            diags.push(Diagnostic::warning(&uid, "no citation count (TC); using 0"));
            0
        }
        Some(raw) => raw
            .parse::<u64>()
            .map_err(|_| CorpusError::BadCitationCount {
                uid: uid.clone(),
                value: raw,
            })?,
    };

    let mut doc_types: BTreeSet<DocType> = record
        .joined(FieldTag::DT)
        .map(|dt| {
            split_list(&dt)
                .iter()
                .map(|l| DocType::from_label(l))
                .collect()
        })
        .unwrap_or_default();
    if doc_types.is_empty() {
        diags.push(Diagnostic::warning(&uid, "no document type (DT)"));
        doc_types.insert(DocType::Other("UNKNOWN".to_string()));
    }

    let journal = record
        .joined(FieldTag::SO)
        .map(|s| address::collapse_ws(&s.to_uppercase()))
        .unwrap_or_default();

    let authors = record
        .get(FieldTag::AU)
        .unwrap_or_default()
        .iter()
        .map(|a| a.trim().to_string())
        .filter(|a| !a.is_empty())
        .collect();

    let addresses = record
        .get(FieldTag::C1)
        .unwrap_or_default()
        .iter()
        .filter(|a| !a.trim().is_empty())
        .map(|a| Address::parse(a, countries))
        .collect();

    let list = |tag| {
        record
            .joined(tag)
            .map(|v| split_list(&v))
            .unwrap_or_default()
    };
    let categories = list(FieldTag::SC)
        .iter()
        .map(|c| normalize_category(c))
        .filter(|c| !c.is_empty())
        .collect();

    let paper = Paper {
        uid,
        doc_types,
        journal,
        year,
        authors,
        addresses,
        author_keywords: list(FieldTag::DE),
        keywords_plus: list(FieldTag::ID),
        categories,
        citation_count,
    };
    Ok((paper, diags))
}

fn split_list(value: &str) -> Vec<String> {
    value
        .split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect()
}

/// Category labels are uppercased with punctuation turned into spaces:
/// `Science & Technology - Other Topics` becomes
/// `SCIENCE TECHNOLOGY OTHER TOPICS`.
fn normalize_category(label: &str) -> String {
    let cleaned: String = label
        .chars()
        .map(|c| if c.is_alphanumeric() { c } else { ' ' })
        .collect();
    address::collapse_ws(&cleaned.to_uppercase())
}

/// Keeps papers with at least one research document type, in input order.
pub fn filter_research(papers: &[Paper]) -> Vec<Paper> {
    papers.iter().filter(|p| p.is_research()).cloned().collect()
}

/// Keeps papers carrying at least one of `types`, in input order.
pub fn filter_types(papers: &[Paper], types: &BTreeSet<DocType>) -> Vec<Paper> {
    papers
        .iter()
        .filter(|p| !p.doc_types.is_disjoint(types))
        .cloned()
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YearRow {
    pub year: i32,
    /// Distinct papers published that year.
    pub total: usize,
    /// Papers per type; a multi-type paper counts under each of its types.
    pub by_type: BTreeMap<DocType, usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct YearTable {
    pub rows: Vec<YearRow>,
    /// Papers without a publication year, left out of `rows`.
    pub undated: usize,
}

/// Papers per publication year, overall and per document type.
///
/// Every year between the first and last observed year gets a row, and
/// every row lists every document type seen anywhere in the corpus.
pub fn output_by_year(papers: &[Paper]) -> YearTable {
    let all_types: BTreeSet<&DocType> = papers.iter().flat_map(|p| &p.doc_types).collect();
    let mut counts: BTreeMap<i32, YearRow> = BTreeMap::new();
    let mut undated = 0;
    for paper in papers {
        let Some(year) = paper.year else {
            undated += 1;
            continue;
        };
        let row = counts.entry(year).or_insert_with(|| YearRow {
            year,
            total: 0,
            by_type: BTreeMap::new(),
        });
        row.total += 1;
        for t in &paper.doc_types {
            *row.by_type.entry(t.clone()).or_default() += 1;
        }
    }

    let (Some(&first), Some(&last)) = (counts.keys().next(), counts.keys().next_back()) else {
        return YearTable {
            rows: Vec::new(),
            undated,
        };
    };
    let rows = (first..=last)
        .map(|year| {
            let mut row = counts.remove(&year).unwrap_or(YearRow {
                year,
                total: 0,
                by_type: BTreeMap::new(),
            });
            for t in &all_types {
                row.by_type.entry((*t).clone()).or_default();
            }
            row
        })
        .collect();
    YearTable { rows, undated }
}
