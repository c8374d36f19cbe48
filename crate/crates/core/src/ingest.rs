//! Reader and writer for the plain-text field-tagged export format.
//!
//! A file looks like this:
//!
//! ```text
//! FN Clarivate Analytics Web of Science
//! VR 1.0
//! PT J
//! AU Doe, J
//!    Roe, K
//! TI A title
//! ER
//!
//! EF
//! ```
//!
//! A two-character tag opens a field, lines indented by exactly three spaces
//! continue the current field, `ER` closes a record and `EF` closes the file.
//! Unknown tags are carried through untouched.

use std::fmt;
use std::io::BufRead;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

const CONTINUATION: &str = "   ";
const RESERVED: [&str; 4] = ["ER", "EF", "FN", "VR"];

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("read failed: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: invalid UTF-8")]
    InvalidUtf8 { line: usize },
    #[error("line {line}: malformed tag line {content:?}")]
    MalformedTag { line: usize, content: String },
    #[error("line {line}: end of input inside a record opened here (missing ER)")]
    UnterminatedRecord { line: usize },
    #[error("line {line}: tag {tag} opened twice in one record")]
    DuplicateTagInRecord { line: usize, tag: FieldTag },
    #[error("invalid field tag {0:?}")]
    InvalidTag(String),
}

impl IngestError {
    /// Input line the error refers to, if any.
    pub fn line(&self) -> Option<usize> {
        match self {
            IngestError::InvalidUtf8 { line }
            | IngestError::MalformedTag { line, .. }
            | IngestError::UnterminatedRecord { line }
            | IngestError::DuplicateTagInRecord { line, .. } => Some(*line),
            IngestError::Io(_) | IngestError::InvalidTag(_) => None,
        }
    }
}

/// Two-character field code such as `AU`, `DE` or `UT`.
///
/// `ER`, `EF`, `FN` and `VR` are structural markers and cannot be used as
/// field tags.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct FieldTag([u8; 2]);

impl FieldTag {
    pub const AU: FieldTag = FieldTag(*b"AU");
    pub const TI: FieldTag = FieldTag(*b"TI");
    pub const SO: FieldTag = FieldTag(*b"SO");
    pub const PY: FieldTag = FieldTag(*b"PY");
    pub const DT: FieldTag = FieldTag(*b"DT");
    pub const DE: FieldTag = FieldTag(*b"DE");
    pub const ID: FieldTag = FieldTag(*b"ID");
    pub const SC: FieldTag = FieldTag(*b"SC");
    pub const C1: FieldTag = FieldTag(*b"C1");
    pub const TC: FieldTag = FieldTag(*b"TC");
    pub const UT: FieldTag = FieldTag(*b"UT");
    pub const PT: FieldTag = FieldTag(*b"PT");

    pub fn new(code: &str) -> Result<Self, IngestError> {
        let bytes = code.as_bytes();
        match bytes {
            [a, b] if is_tag_byte(*a) && is_tag_byte(*b) && !RESERVED.contains(&code) => {
                Ok(FieldTag([*a, *b]))
            }
            _ => Err(IngestError::InvalidTag(code.to_string())),
        }
    }

    pub fn as_str(&self) -> &str {
        // Only ASCII bytes are admitted by the constructor.
        std::str::from_utf8(&self.0).expect("field tags are ASCII")
    }
}

fn is_tag_byte(b: u8) -> bool {
    b.is_ascii_uppercase() || b.is_ascii_digit()
}

impl FromStr for FieldTag {
    type Err = IngestError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FieldTag::new(s)
    }
}

impl TryFrom<String> for FieldTag {
    type Error = IngestError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        FieldTag::new(&value)
    }
}

impl From<FieldTag> for String {
    fn from(tag: FieldTag) -> Self {
        tag.as_str().to_string()
    }
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Debug for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldTag({})", self.as_str())
    }
}

/// One bibliographic entry: its fields in input order, each holding one
/// value per input line.
///
/// Equality is structural and ignores `source_line`.
#[derive(Debug, Clone)]
pub struct Record {
    fields: Vec<(FieldTag, Vec<String>)>,
    source_line: usize,
}

impl PartialEq for Record {
    fn eq(&self, other: &Self) -> bool {
        self.fields == other.fields
    }
}

impl Eq for Record {}

impl Record {
    /// Builds a record from `(tag, lines)` pairs.
    ///
    /// Returns `None` when there are no fields, a tag repeats, a value list
    /// is empty, or a value contains a line break.
    pub fn from_fields(fields: Vec<(FieldTag, Vec<String>)>) -> Option<Self> {
        if fields.is_empty() {
            return None;
        }
        let mut seen = std::collections::BTreeSet::new();
        for (tag, values) in &fields {
            if !seen.insert(*tag) || values.is_empty() {
                return None;
            }
            if values.iter().any(|v| v.contains(['\n', '\r'])) {
                return None;
            }
        }
        Some(Record {
            fields,
            source_line: 1,
        })
    }

    pub fn fields(&self) -> &[(FieldTag, Vec<String>)] {
        &self.fields
    }

    /// Line number of the record's first field in its source file.
    pub fn source_line(&self) -> usize {
        self.source_line
    }

    pub fn get(&self, tag: FieldTag) -> Option<&[String]> {
        self.fields
            .iter()
            .find(|(t, _)| *t == tag)
            .map(|(_, v)| v.as_slice())
    }

    /// All lines of a field joined with a single space.
    pub fn joined(&self, tag: FieldTag) -> Option<String> {
        self.get(tag).map(|lines| {
            lines
                .iter()
                .map(|l| l.trim())
                .filter(|l| !l.is_empty())
                .collect::<Vec<_>>()
                .join(" ")
        })
    }
}

struct OpenRecord {
    fields: Vec<(FieldTag, Vec<String>)>,
    start: usize,
}

/// Parses an export stream into records.
pub fn parse_export<R: BufRead>(mut input: R) -> Result<Vec<Record>, IngestError> {
    let mut records = Vec::new();
    let mut open: Option<OpenRecord> = None;
    let mut buf = Vec::new();
    let mut line_no = 0usize;

    loop {
        buf.clear();
        if input.read_until(b'\n', &mut buf)? == 0 {
            break;
        }
        line_no += 1;
        let mut bytes = buf.as_slice();
        if let Some(rest) = bytes.strip_suffix(b"\n") {
            bytes = rest;
        }
        if let Some(rest) = bytes.strip_suffix(b"\r") {
            bytes = rest;
        }
        if line_no == 1 {
            if let Some(rest) = bytes.strip_prefix(b"\xEF\xBB\xBF") {
                bytes = rest;
            }
        }
        let line =
            std::str::from_utf8(bytes).map_err(|_| IngestError::InvalidUtf8 { line: line_no })?;

        let marker = line.trim_end();
        if marker == "EF" && open.is_none() {
            break;
        }
        if marker == "ER" {
            match open.take() {
                Some(rec) => {
                    records.push(Record {
                        fields: rec.fields,
                        source_line: rec.start,
                    });
                    continue;
                }
                None => return Err(malformed(line_no, line)),
            }
        }

        match open.as_mut() {
            None => {
                if marker.is_empty() {
                    continue;
                }
                let (tag, value) = split_tag_line(line).ok_or_else(|| malformed(line_no, line))?;
                if tag == "FN" || tag == "VR" {
                    continue;
                }
                let tag = FieldTag::new(tag).map_err(|_| malformed(line_no, line))?;
                open = Some(OpenRecord {
                    fields: vec![(tag, vec![value.to_string()])],
                    start: line_no,
                });
            }
            Some(rec) => {
                if let Some(value) = line.strip_prefix(CONTINUATION) {
                    match rec.fields.last_mut() {
                        Some((_, values)) => values.push(value.to_string()),
                        None => return Err(malformed(line_no, line)),
                    }
                    continue;
                }
                let (tag, value) = split_tag_line(line).ok_or_else(|| malformed(line_no, line))?;
                let tag = FieldTag::new(tag).map_err(|_| malformed(line_no, line))?;
                if rec.fields.iter().any(|(t, _)| *t == tag) {
                    return Err(IngestError::DuplicateTagInRecord { line: line_no, tag });
                }
                rec.fields.push((tag, vec![value.to_string()]));
            }
        }
    }

    if let Some(rec) = open {
        return Err(IngestError::UnterminatedRecord { line: rec.start });
    }
    Ok(records)
}

/// Convenience wrapper around [`parse_export`] for in-memory text.
pub fn parse_str(input: &str) -> Result<Vec<Record>, IngestError> {
    parse_export(input.as_bytes())
}

/// Splits `"XX value"` into tag and value. A bare `"XX"` has an empty value.
fn split_tag_line(line: &str) -> Option<(&str, &str)> {
    let tag = line.get(..2)?;
    if !tag.bytes().all(is_tag_byte) {
        return None;
    }
    let rest = &line[2..];
    if rest.is_empty() {
        Some((tag, ""))
    } else {
        rest.strip_prefix(' ').map(|value| (tag, value))
    }
}

fn malformed(line: usize, content: &str) -> IngestError {
    IngestError::MalformedTag {
        line,
        content: content.to_string(),
    }
}

/// Writes records in the export format, LF line endings, no header.
pub fn serialize_records(records: &[Record]) -> String {
    let mut out = String::new();
    for record in records {
        for (tag, values) in &record.fields {
            for (i, value) in values.iter().enumerate() {
                if i == 0 {
                    out.push_str(tag.as_str());
                    if !value.is_empty() {
                        out.push(' ');
                    }
                } else {
                    out.push_str(CONTINUATION);
                }
                out.push_str(value);
                out.push('\n');
            }
        }
        out.push_str("ER\n\n");
    }
    out.push_str("EF\n");
    out
}
