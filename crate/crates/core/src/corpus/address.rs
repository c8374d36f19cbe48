use serde::{Deserialize, Serialize};
use thiserror::Error;

const DEFAULT_COUNTRIES: &str = include_str!("../../data/countries.csv");

#[derive(Debug, Error)]
#[error("country table line {line}: expected \"raw_pattern,normalized_country\"")]
pub struct CountryTableError {
    pub line: usize,
}

/// Rewrite rules for the country segment of addresses.
///
/// Loaded from CSV lines `raw_pattern,normalized_country`. A pattern matches
/// the whole uppercased segment, or, when it starts with `*`, any segment
/// ending with the rest of the pattern. The first matching rule wins and
/// unmatched segments are kept verbatim.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountryTable {
    rules: Vec<(String, String)>,
}

impl Default for CountryTable {
    fn default() -> Self {
        CountryTable::from_csv(DEFAULT_COUNTRIES).expect("bundled country table is valid")
    }
}

impl CountryTable {
    pub fn empty() -> Self {
        CountryTable { rules: Vec::new() }
    }

    /// Parses the CSV form. Blank lines, `#` comments and a
    /// `raw_pattern,...` header are skipped.
    pub fn from_csv(text: &str) -> Result<Self, CountryTableError> {
        let mut rules = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with("raw_pattern,") {
                continue;
            }
            let (pattern, country) = line
                .split_once(',')
                .ok_or(CountryTableError { line: i + 1 })?;
            let (pattern, country) = (pattern.trim(), country.trim());
            if pattern.is_empty() || country.is_empty() || country.contains(',') {
                return Err(CountryTableError { line: i + 1 });
            }
            rules.push((pattern.to_uppercase(), country.to_uppercase()));
        }
        Ok(CountryTable { rules })
    }

    pub fn normalize(&self, segment: &str) -> String {
        let upper = collapse_ws(&segment.to_uppercase());
        for (pattern, country) in &self.rules {
            let hit = match pattern.strip_prefix('*') {
                Some(suffix) => upper.ends_with(suffix),
                None => upper == *pattern,
            };
            if hit {
                return country.clone();
            }
        }
        upper
    }
}

/// One author address line.
///
/// `city` and `country` are `None` when they could not be extracted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Address {
    pub raw: String,
    pub organization: String,
    pub city: Option<String>,
    pub country: Option<String>,
}

impl Address {
    /// Splits an address of the form
    /// `[Doe, J; Roe, K] Org, Subunit, City, Postcode, COUNTRY.` on commas.
    ///
    /// The organization is the first segment and the country the last one.
    /// The city is the nearest segment before the country that still has
    /// text once postcode tokens are removed.
    pub fn parse(raw: &str, countries: &CountryTable) -> Address {
        let mut text = raw.trim();
        if text.starts_with('[') {
            if let Some(end) = text.find(']') {
                text = &text[end + 1..];
            }
        }
        let text = text.trim().trim_end_matches('.');
        let segments: Vec<&str> = text
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .collect();

        let organization = segments
            .first()
            .map(|s| collapse_ws(&s.to_uppercase()))
            .unwrap_or_default();
        let country = match segments.as_slice() {
            [_, .., last] => Some(countries.normalize(last)).filter(|c| !c.is_empty()),
            _ => None,
        };
        let city = if segments.len() >= 3 {
            segments[1..segments.len() - 1]
                .iter()
                .rev()
                .find_map(|s| city_from_segment(s))
        } else {
            None
        };

        Address {
            raw: raw.trim().to_string(),
            organization,
            city,
            country,
        }
    }
}

/// Drops postcode tokens from a segment. Segments reduced to nothing or to
/// a two-letter region code (US state, Canadian province) carry no city.
fn city_from_segment(segment: &str) -> Option<String> {
    let tokens: Vec<&str> = segment.split_whitespace().collect();
    let mut kept = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let tok = tokens[i];
        if tok.chars().any(|c| c.is_ascii_digit()) {
            // Dutch-style "6211 TC": a short letter group trailing a number.
            if let Some(next) = tokens.get(i + 1) {
                let short = next.len() <= 2 && next.chars().all(|c| c.is_ascii_uppercase());
                if short && i + 2 < tokens.len() {
                    i += 1;
                }
            }
            i += 1;
            continue;
        }
        kept.push(tok);
        i += 1;
    }
    let city = kept.join(" ").to_uppercase();
    let region_code = city.len() <= 2 && city.chars().all(|c| c.is_ascii_alphabetic());
    if city.is_empty() || region_code {
        None
    } else {
        Some(city)
    }
}

pub(crate) fn collapse_ws(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}
