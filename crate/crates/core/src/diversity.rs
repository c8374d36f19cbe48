//! Shannon diversity of categorical distributions.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::corpus::Paper;
use crate::coword::paper_terms;
use crate::numeric::{percent, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiversityError {
    #[error("distribution has no species")]
    EmptyDistribution,
    #[error("species {0:?} has zero abundance")]
    ZeroAbundance(String),
    #[error("species {0:?} listed twice")]
    DuplicateSpecies(String),
}

/// Labelled abundances, kept sorted by label.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Distribution {
    species: Vec<(String, u64)>,
}

impl Distribution {
    pub fn new(species: impl IntoIterator<Item = (String, u64)>) -> Result<Self, DiversityError> {
        let mut map = BTreeMap::new();
        for (label, n) in species {
            if n == 0 {
                return Err(DiversityError::ZeroAbundance(label));
            }
            if map.insert(label.clone(), n).is_some() {
                return Err(DiversityError::DuplicateSpecies(label));
            }
        }
        Ok(Distribution {
            species: map.into_iter().collect(),
        })
    }

    fn from_counts(counts: BTreeMap<String, u64>) -> Self {
        Distribution {
            species: counts.into_iter().filter(|(_, n)| *n > 0).collect(),
        }
    }

    pub fn species(&self) -> &[(String, u64)] {
        &self.species
    }

    pub fn richness(&self) -> usize {
        self.species.len()
    }

    pub fn total(&self) -> u64 {
        self.species.iter().map(|(_, n)| n).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.species.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiversityReport {
    pub richness: usize,
    pub total: u64,
    /// Shannon entropy in nats.
    pub h: f64,
    /// `ln S`.
    pub h_max: f64,
    /// `H / H_max * 100`; 100 for a single species.
    pub pct_of_max: f64,
}

/// `H = -sum p_i ln p_i` with `p_i = n_i / N`.
///
/// Terms are summed in ascending `p_i` order (ties by label) so the result
/// does not depend on species order.
pub fn shannon(dist: &Distribution) -> Result<DiversityReport, DiversityError> {
    if dist.is_empty() {
        return Err(DiversityError::EmptyDistribution);
    }
    let total = dist.total();
    let richness = dist.richness();
    let mut order: Vec<&(String, u64)> = dist.species.iter().collect();
    order.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));

    let n = total as f64;
    let h = if richness == 1 {
        0.0
    } else {
        -order
            .iter()
            .map(|(_, count)| {
                let p = *count as f64 / n;
                p * p.ln()
            })
            .sum::<f64>()
    };
    let h_max = (richness as f64).ln();
    let h = h.clamp(0.0, h_max);
    let pct_of_max = if richness == 1 {
        100.0
    } else {
        h / h_max * 100.0
    };
    Ok(DiversityReport {
        richness,
        total,
        h,
        h_max,
        pct_of_max,
    })
}

/// What a paper is counted under when building a [`Distribution`].
#[derive(Debug, Clone, Copy)]
pub enum Facet<'a> {
    Journal,
    Category,
    /// Normalized author keywords and keywords plus.
    KeywordTotal,
    /// Like `KeywordTotal`, restricted to the given terms.
    KeywordClusterTerms(&'a BTreeSet<String>),
}

/// Abundance of a label is the number of papers carrying it; a paper with
/// `k` labels adds one to each.
pub fn distribution_from_papers(papers: &[Paper], facet: Facet<'_>) -> Distribution {
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    for paper in papers {
        let labels: BTreeSet<String> = match facet {
            Facet::Journal => {
                if paper.journal.is_empty() {
                    BTreeSet::new()
                } else {
                    BTreeSet::from([paper.journal.clone()])
                }
            }
            Facet::Category => paper.categories.iter().cloned().collect(),
            Facet::KeywordTotal => paper_terms(paper),
            Facet::KeywordClusterTerms(keep) => paper_terms(paper)
                .into_iter()
                .filter(|t| keep.contains(t))
                .collect(),
        };
        for label in labels {
            *counts.entry(label).or_default() += 1;
        }
    }
    Distribution::from_counts(counts)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopRow {
    pub label: String,
    pub count: u64,
    /// Share of `distinct_papers`, not of the distribution total.
    pub percent: Rational,
}

/// Species with at least `min_count` papers, most frequent first, ties by
/// label.
pub fn top_table(dist: &Distribution, min_count: u64, distinct_papers: usize) -> Vec<TopRow> {
    let mut rows: Vec<TopRow> = dist
        .species
        .iter()
        .filter(|(_, n)| *n >= min_count)
        .map(|(label, n)| TopRow {
            label: label.clone(),
            count: *n,
            percent: percent(*n as usize, distinct_papers),
        })
        .collect();
    rows.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.label.cmp(&b.label)));
    rows
}
