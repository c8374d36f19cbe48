//! Authorship and cooperation classes, and output per organization city.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Zero;

use crate::corpus::Paper;
use crate::numeric::{percent, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CoopClass {
    SingleAuthor,
    NationalCoop,
    InternationalCoop,
    /// Multi-author paper without any parseable country, or no authors.
    Unclassifiable,
}

impl CoopClass {
    pub const ALL: [CoopClass; 4] = [
        CoopClass::SingleAuthor,
        CoopClass::NationalCoop,
        CoopClass::InternationalCoop,
        CoopClass::Unclassifiable,
    ];

    pub fn label(self) -> &'static str {
        match self {
            CoopClass::SingleAuthor => "SINGLE_AUTHOR",
            CoopClass::NationalCoop => "NATIONAL_COOP",
            CoopClass::InternationalCoop => "INTERNATIONAL_COOP",
            CoopClass::Unclassifiable => "UNCLASSIFIABLE",
        }
    }
}

impl fmt::Display for CoopClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Class from the author count and the set of address countries.
pub fn classify(paper: &Paper) -> CoopClass {
    match paper.authors.len() {
        0 => CoopClass::Unclassifiable,
        1 => CoopClass::SingleAuthor,
        _ => {
            let countries: BTreeSet<&str> = paper
                .addresses
                .iter()
                .filter_map(|a| a.country.as_deref())
                .collect();
            match countries.len() {
                0 => CoopClass::Unclassifiable,
                1 => CoopClass::NationalCoop,
                _ => CoopClass::InternationalCoop,
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoopRow {
    pub class: CoopClass,
    pub count: usize,
    pub percent: Rational,
    pub mean_citations: Rational,
}

/// Per-class counts, shares and mean citations. Classes without papers are
/// omitted.
pub fn coop_summary(papers: &[Paper]) -> Vec<CoopRow> {
    let mut acc: BTreeMap<CoopClass, (usize, u64)> = BTreeMap::new();
    for paper in papers {
        let entry = acc.entry(classify(paper)).or_default();
        entry.0 += 1;
        entry.1 += paper.citation_count;
    }
    acc.into_iter()
        .map(|(class, (count, cites))| CoopRow {
            class,
            count,
            percent: percent(count, papers.len()),
            mean_citations: if count == 0 {
                Rational::zero()
            } else {
                Rational::new(cites as i64, count as i64)
            },
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CityTally {
    pub city: String,
    pub count: usize,
    /// Share of all papers passed to [`city_tally`].
    pub percent: Rational,
}

/// Papers per city among addresses whose organization starts with
/// `organization_prefix`. A paper counts once per distinct city. Rows below
/// `threshold_pct` are dropped; the rest are sorted by city.
pub fn city_tally(
    papers: &[Paper],
    organization_prefix: &str,
    threshold_pct: Rational,
) -> Vec<CityTally> {
    let prefix = organization_prefix.trim().to_uppercase();
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for paper in papers {
        let cities: BTreeSet<&str> = paper
            .addresses
            .iter()
            .filter(|a| a.organization.starts_with(&prefix))
            .filter_map(|a| a.city.as_deref())
            .collect();
        for city in cities {
            *counts.entry(city).or_default() += 1;
        }
    }
    counts
        .into_iter()
        .map(|(city, count)| CityTally {
            city: city.to_string(),
            count,
            percent: percent(count, papers.len()),
        })
        .filter(|row| row.percent >= threshold_pct)
        .collect()
}
