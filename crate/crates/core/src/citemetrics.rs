//! Percentile rank index (PRI) of papers within journal-year peer sets.
//!
//! Within a peer set of `N` papers ranked by citations (rank 1 = most
//! cited), a paper at rank `R` scores `(N - R + 1) / N * 100`. Tied papers
//! share the mean of the positions they occupy, so ranks and PRIs are exact
//! rationals.

use std::collections::BTreeMap;

use num_traits::One;
use thiserror::Error;

use crate::corpus::{DocType, Paper};
use crate::numeric::{percent, to_f64, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CitemetricsError {
    #[error("rank {rank} outside 1..={set_size}")]
    RankOutOfRange { set_size: u64, rank: Rational },
    #[error("no results to aggregate")]
    EmptyInput,
    #[error("paper {uid}: no peer set for {journal} {year}")]
    MissingPeerSet {
        uid: String,
        journal: String,
        year: i32,
    },
    #[error("paper {uid} is not a member of its peer set {journal} {year}")]
    NotInPeerSet {
        uid: String,
        journal: String,
        year: i32,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeerMember {
    pub uid: String,
    pub citations: u64,
}

/// All papers of one document type published in one journal in one year.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeerSet {
    pub journal: String,
    pub year: i32,
    pub doc_type: DocType,
    pub members: Vec<PeerMember>,
}

impl PeerSet {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PriResult {
    pub uid: String,
    pub journal: String,
    pub year: i32,
    pub rank: Rational,
    pub set_size: u64,
    pub pri: Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Baseline {
    pub median_set_size: Rational,
    pub pri_globav: Rational,
}

/// Groups the papers of `doc_type` by `(journal, year)`.
///
/// Papers without a year are skipped. Sets come out sorted by journal then
/// year; members keep input order.
pub fn build_peer_sets(papers: &[Paper], doc_type: &DocType) -> Vec<PeerSet> {
    let mut groups: BTreeMap<(String, i32), Vec<PeerMember>> = BTreeMap::new();
    for paper in papers.iter().filter(|p| p.has_type(doc_type)) {
        let Some(year) = paper.year else { continue };
        groups
            .entry((paper.journal.clone(), year))
            .or_default()
            .push(PeerMember {
                uid: paper.uid.clone(),
                citations: paper.citation_count,
            });
    }
    groups
        .into_iter()
        .map(|((journal, year), members)| PeerSet {
            journal,
            year,
            doc_type: doc_type.clone(),
            members,
        })
        .collect()
}

/// Tie-averaged citation ranks, most cited first.
///
/// Output is ordered by descending citations, then uid.
pub fn rank_in_set(set: &PeerSet) -> Vec<(String, Rational)> {
    let mut order: Vec<&PeerMember> = set.members.iter().collect();
    order.sort_by(|a, b| {
        b.citations
            .cmp(&a.citations)
            .then_with(|| a.uid.cmp(&b.uid))
    });

    let mut ranks = Vec::with_capacity(order.len());
    let mut start = 0;
    while start < order.len() {
        let citations = order[start].citations;
        let end = start
            + order[start..]
                .iter()
                .take_while(|m| m.citations == citations)
                .count();
        // Positions start+1 ..= end share their mean.
        let rank = Rational::new((start + 1 + end) as i64, 2);
        ranks.extend(order[start..end].iter().map(|m| (m.uid.clone(), rank)));
        start = end;
    }
    ranks
}

/// `(N - R + 1) / N * 100`.
pub fn pri(set_size: u64, rank: Rational) -> Result<Rational, CitemetricsError> {
    let n = Rational::from_integer(set_size as i64);
    if set_size == 0 || rank < Rational::one() || rank > n {
        return Err(CitemetricsError::RankOutOfRange { set_size, rank });
    }
    Ok((n - rank + Rational::one()) / n * Rational::from_integer(100))
}

/// PRI of each target paper within its peer set.
///
/// Every target must appear as a member of the set with its journal and
/// year; the set's citation counts are authoritative. Results are sorted
/// by uid.
pub fn pri_for_targets(
    targets: &[Paper],
    peer_sets: &[PeerSet],
) -> Result<Vec<PriResult>, CitemetricsError> {
    let index: BTreeMap<(&str, i32), &PeerSet> = peer_sets
        .iter()
        .map(|s| ((s.journal.as_str(), s.year), s))
        .collect();
    let mut ranked: BTreeMap<(&str, i32), BTreeMap<String, Rational>> = BTreeMap::new();

    let mut results = Vec::with_capacity(targets.len());
    for paper in targets {
        let Some(year) = paper.year else { continue };
        let key = (paper.journal.as_str(), year);
        let set = index
            .get(&key)
            .ok_or_else(|| CitemetricsError::MissingPeerSet {
                uid: paper.uid.clone(),
                journal: paper.journal.clone(),
                year,
            })?;
        let ranks = ranked
            .entry(key)
            .or_insert_with(|| rank_in_set(set).into_iter().collect());
        let rank = *ranks
            .get(&paper.uid)
            .ok_or_else(|| CitemetricsError::NotInPeerSet {
                uid: paper.uid.clone(),
                journal: paper.journal.clone(),
                year,
            })?;
        let set_size = set.size() as u64;
        results.push(PriResult {
            uid: paper.uid.clone(),
            journal: paper.journal.clone(),
            year,
            rank,
            set_size,
            pri: pri(set_size, rank)?,
        });
    }
    results.sort_by(|a, b| a.uid.cmp(&b.uid));
    Ok(results)
}

/// Expected global average PRI, `50 + 50 / N`, where `N` is the peer-set
/// size at the median position of the targets ordered by set size.
pub fn baseline(results: &[PriResult]) -> Result<Baseline, CitemetricsError> {
    if results.is_empty() {
        return Err(CitemetricsError::EmptyInput);
    }
    let mut sizes: Vec<u64> = results.iter().map(|r| r.set_size).collect();
    sizes.sort_unstable();
    let m = sizes.len();
    let median_set_size = if m % 2 == 1 {
        Rational::from_integer(sizes[m / 2] as i64)
    } else {
        Rational::new((sizes[m / 2 - 1] + sizes[m / 2]) as i64, 2)
    };
    Ok(Baseline {
        median_set_size,
        pri_globav: globav_from_median(median_set_size),
    })
}

pub fn globav_from_median(median_set_size: Rational) -> Rational {
    Rational::from_integer(50) + Rational::from_integer(50) / median_set_size
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RangeRow {
    pub threshold: Rational,
    pub count: usize,
    pub percent: Rational,
}

impl RangeRow {
    /// `true` for the `PRI = 100` row.
    pub fn is_top(&self) -> bool {
        self.threshold == Rational::from_integer(100)
    }
}

/// Number and share of results with `pri >= threshold`, one row per
/// threshold in the given order. A threshold of 100 counts exact hits.
pub fn pri_range_table(results: &[PriResult], thresholds: &[Rational]) -> Vec<RangeRow> {
    thresholds
        .iter()
        .map(|&threshold| {
            let count = results.iter().filter(|r| r.pri >= threshold).count();
            RangeRow {
                threshold,
                count,
                percent: percent(count, results.len()),
            }
        })
        .collect()
}

/// Arithmetic mean of the PRI values.
///
/// Summed in floating point: an exact sum over many peer-set sizes needs a
/// common denominator that outgrows 64 bits.
pub fn mean_pri(results: &[PriResult]) -> Result<f64, CitemetricsError> {
    if results.is_empty() {
        return Err(CitemetricsError::EmptyInput);
    }
    let sum: f64 = results.iter().map(|r| to_f64(r.pri)).sum();
    Ok(sum / results.len() as f64)
}
