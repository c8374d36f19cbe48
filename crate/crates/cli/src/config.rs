//! Run configuration: a flat `key = value` file, overridable from the
//! command line.
//!
//! ```text
//! # scientrix.conf
//! input_paths = corpus.txt
//! peer_set_paths = peers.csv
//! pri_year_cutoff = 2014
//! organization_prefix = UNITED NATIONS UNIV
//! ```
//!
//! List values are comma-separated, and repeating a list key appends to
//! it. Relative paths are resolved against the config file's directory.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use scientrix_core::corpus::DocType;
use scientrix_core::coword::{LinkAggregate, Similarity};
use scientrix_core::numeric::format_half_up;
use scientrix_core::Rational;

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input_paths: Vec<PathBuf>,
    pub peer_set_paths: Vec<PathBuf>,
    /// Document types kept for the research-paper analyses.
    pub doc_types: BTreeSet<DocType>,
    /// Document type of the papers ranked by PRI.
    pub pri_doc_type: DocType,
    /// Only papers published strictly before this year get a PRI.
    pub pri_year_cutoff: Option<i32>,
    /// Range-table thresholds; the baseline row is always appended.
    pub pri_thresholds: Vec<Rational>,
    pub min_keyword_frequency: usize,
    pub min_cosine: f64,
    pub similarity: Similarity,
    pub link_aggregate: LinkAggregate,
    pub min_cluster_size: usize,
    pub max_cluster_size: usize,
    pub city_threshold_pct: Rational,
    pub organization_prefix: String,
    pub top_journal_min: u64,
    pub top_category_min: u64,
    pub impact_factor_path: Option<PathBuf>,
    pub country_table_path: Option<PathBuf>,
    pub output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            input_paths: Vec::new(),
            peer_set_paths: Vec::new(),
            doc_types: DocType::RESEARCH.into_iter().collect(),
            pri_doc_type: DocType::Article,
            pri_year_cutoff: None,
            pri_thresholds: [100, 99, 90, 75].map(Rational::from_integer).to_vec(),
            min_keyword_frequency: 4,
            min_cosine: 0.2,
            similarity: Similarity::Cosine,
            link_aggregate: LinkAggregate::Mean,
            min_cluster_size: 3,
            max_cluster_size: 10,
            city_threshold_pct: Rational::from_integer(1),
            organization_prefix: String::new(),
            top_journal_min: 10,
            top_category_min: 50,
            impact_factor_path: None,
            country_table_path: None,
            output_dir: PathBuf::from("scientrix-out"),
        }
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        let mut config = RunConfig::default();
        let mut seen_lists = BTreeSet::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!(
                    "{}:{}: expected key = value",
                    path.display(),
                    i + 1
                ))
            })?;
            let key = key.trim();
            // A list key replaces the defaults the first time it appears.
            if is_list_key(key) && seen_lists.insert(key.to_string()) {
                config.clear_list(key);
            }
            config
                .set(key, value.trim(), base)
                .map_err(|msg| CliError::Usage(format!("{}:{}: {msg}", path.display(), i + 1)))?;
        }
        Ok(config)
    }

    /// Applies one `key = value` setting. List keys append.
    pub fn set(&mut self, key: &str, value: &str, base: &Path) -> Result<(), String> {
        let path = |v: &str| resolve(base, v);
        let list = |v: &str| {
            v.split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(str::to_string)
                .collect::<Vec<_>>()
        };
        match key {
            "input_paths" => self.input_paths.extend(list(value).iter().map(|v| path(v))),
            "peer_set_paths" => self
                .peer_set_paths
                .extend(list(value).iter().map(|v| path(v))),
            "doc_types" => self
                .doc_types
                .extend(list(value).iter().map(|v| DocType::from_label(v))),
            "pri_doc_type" => self.pri_doc_type = DocType::from_label(value),
            "pri_year_cutoff" => {
                self.pri_year_cutoff = if value.is_empty() {
                    None
                } else {
                    Some(parse_num(key, value)?)
                }
            }
            "pri_thresholds" => {
                for v in list(value) {
                    self.pri_thresholds
                        .push(parse_decimal(&v).ok_or_else(|| bad(key, &v))?);
                }
            }
            "min_keyword_frequency" => self.min_keyword_frequency = parse_num(key, value)?,
            "min_cosine" => self.min_cosine = parse_num(key, value)?,
            "similarity" => {
                self.similarity = match value {
                    "cosine" => Similarity::Cosine,
                    "equivalence" => Similarity::Equivalence,
                    _ => return Err(bad(key, value)),
                }
            }
            "link_aggregate" => {
                self.link_aggregate = match value {
                    "mean" => LinkAggregate::Mean,
                    "sum" => LinkAggregate::Sum,
                    _ => return Err(bad(key, value)),
                }
            }
            "min_cluster_size" => self.min_cluster_size = parse_num(key, value)?,
            "max_cluster_size" => self.max_cluster_size = parse_num(key, value)?,
            "city_threshold_pct" => {
                self.city_threshold_pct = parse_decimal(value).ok_or_else(|| bad(key, value))?
            }
            "organization_prefix" => self.organization_prefix = value.to_uppercase(),
            "top_journal_min" => self.top_journal_min = parse_num(key, value)?,
            "top_category_min" => self.top_category_min = parse_num(key, value)?,
            "impact_factor_path" => self.impact_factor_path = Some(path(value)),
            "country_table_path" => self.country_table_path = Some(path(value)),
            "output_dir" => self.output_dir = path(value),
            _ => return Err(format!("unknown key {key:?}")),
        }
        Ok(())
    }

    fn clear_list(&mut self, key: &str) {
        match key {
            "input_paths" => self.input_paths.clear(),
            "peer_set_paths" => self.peer_set_paths.clear(),
            "doc_types" => self.doc_types.clear(),
            "pri_thresholds" => self.pri_thresholds.clear(),
            _ => {}
        }
    }

    /// Flat key-value view of every setting except `output_dir`, in the
    /// config file syntax.
    pub fn snapshot(&self) -> BTreeMap<String, String> {
        let paths = |ps: &[PathBuf]| {
            ps.iter()
                .map(|p| p.display().to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        let opt_path = |p: &Option<PathBuf>| {
            p.as_ref()
                .map(|p| p.display().to_string())
                .unwrap_or_default()
        };
        let mut m = BTreeMap::new();
        let mut put = |k: &str, v: String| {
            m.insert(k.to_string(), v);
        };
        put("input_paths", paths(&self.input_paths));
        put("peer_set_paths", paths(&self.peer_set_paths));
        put(
            "doc_types",
            self.doc_types
                .iter()
                .map(|d| d.label())
                .collect::<Vec<_>>()
                .join(","),
        );
        put("pri_doc_type", self.pri_doc_type.label().to_string());
        put(
            "pri_year_cutoff",
            self.pri_year_cutoff
                .map(|y| y.to_string())
                .unwrap_or_default(),
        );
        put(
            "pri_thresholds",
            self.pri_thresholds
                .iter()
                .map(|t| format_half_up(*t, 6))
                .collect::<Vec<_>>()
                .join(","),
        );
        put(
            "min_keyword_frequency",
            self.min_keyword_frequency.to_string(),
        );
        put("min_cosine", self.min_cosine.to_string());
        put(
            "similarity",
            match self.similarity {
                Similarity::Cosine => "cosine",
                Similarity::Equivalence => "equivalence",
            }
            .to_string(),
        );
        put(
            "link_aggregate",
            match self.link_aggregate {
                LinkAggregate::Mean => "mean",
                LinkAggregate::Sum => "sum",
            }
            .to_string(),
        );
        put("min_cluster_size", self.min_cluster_size.to_string());
        put("max_cluster_size", self.max_cluster_size.to_string());
        put(
            "city_threshold_pct",
            format_half_up(self.city_threshold_pct, 6),
        );
        put("organization_prefix", self.organization_prefix.clone());
        put("top_journal_min", self.top_journal_min.to_string());
        put("top_category_min", self.top_category_min.to_string());
        put("impact_factor_path", opt_path(&self.impact_factor_path));
        put("country_table_path", opt_path(&self.country_table_path));
        m
    }
}

fn is_list_key(key: &str) -> bool {
    matches!(
        key,
        "input_paths" | "peer_set_paths" | "doc_types" | "pri_thresholds"
    )
}

fn resolve(base: &Path, value: &str) -> PathBuf {
    let p = PathBuf::from(value);
    if p.is_absolute() {
        p
    } else {
        base.join(p)
    }
}

fn bad(key: &str, value: &str) -> String {
    format!("invalid value {value:?} for {key}")
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, String> {
    value.parse().map_err(|_| bad(key, value))
}

/// Parses a plain decimal such as `1`, `0.5` or `-2.25` exactly.
pub fn parse_decimal(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (negative, digits) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.bytes().all(|b| b.is_ascii_digit())
        || !frac.bytes().all(|b| b.is_ascii_digit())
        || frac.len() > 12
    {
        return None;
    }
    let scale = 10i64.checked_pow(frac.len() as u32)?;
    let int: i64 = if int.is_empty() { 0 } else { int.parse().ok()? };
    let frac: i64 = if frac.is_empty() {
        0
    } else {
        frac.parse().ok()?
    };
    let value = Rational::new(int.checked_mul(scale)?.checked_add(frac)?, scale);
    Some(if negative { -value } else { value })
}
