//! Bibliometric analysis of field-tagged bibliographic exports.
//!
//! The crate is organised along the analysis pipeline:
//!
//! * [`ingest`] reads and writes the plain-text export format,
//! * [`corpus`] turns records into normalized [`Paper`]s,
//! * [`citemetrics`] computes percentile rank indexes against journal-year
//!   peer sets,
//! * [`diversity`] computes Shannon diversity of journals, categories and
//!   keywords,
//! * [`collab`] classifies authorship and cooperation,
//! * [`coword`] clusters keywords and places clusters on a strategic
//!   diagram.

pub mod citemetrics;
pub mod collab;
pub mod corpus;
pub mod coword;
pub mod diversity;
pub mod ingest;
pub mod numeric;

pub use citemetrics::{Baseline, PeerSet, PriResult};
pub use collab::{CityTally, CoopClass};
pub use corpus::{Address, CountryTable, Diagnostic, DocType, Paper, Severity};
pub use coword::{Cluster, CowordGraph, KeywordStat, Quadrant};
pub use diversity::{Distribution, DiversityReport};
pub use ingest::{FieldTag, Record};
pub use numeric::Rational;
