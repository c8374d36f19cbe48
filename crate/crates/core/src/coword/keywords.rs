use std::collections::{BTreeMap, BTreeSet};

use crate::corpus::Paper;

/// A normalized keyword and the papers it occurs in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeywordStat {
    pub term: String,
    pub paper_uids: BTreeSet<String>,
}

impl KeywordStat {
    /// Number of distinct papers containing the term.
    pub fn frequency(&self) -> usize {
        self.paper_uids.len()
    }
}

/// Uppercases, turns hyphens and slashes into spaces, drops trademark marks
/// and punctuation other than `&`, and collapses whitespace.
///
/// `Co-benefits` becomes `CO BENEFITS`, `Cote d'Ivoire` becomes
/// `COTE DIVOIRE`, `R&D` stays `R&D`.
pub fn normalize_keyword(raw: &str) -> String {
    let upper = raw.to_uppercase().replace("(R)", "").replace("(TM)", "");
    let cleaned: String = upper
        .chars()
        .filter_map(|c| match c {
            '-' | '\u{2010}'..='\u{2015}' | '/' => Some(' '),
            '&' => Some('&'),
            c if c.is_alphanumeric() || c.is_whitespace() => Some(c),
            _ => None,
        })
        .collect();
    cleaned.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// The paper's author keywords and keywords plus, normalized and merged.
pub fn paper_terms(paper: &Paper) -> BTreeSet<String> {
    paper
        .author_keywords
        .iter()
        .chain(&paper.keywords_plus)
        .map(|k| normalize_keyword(k))
        .filter(|k| !k.is_empty())
        .collect()
}

/// One entry per distinct term, sorted by term.
pub fn extract_keywords(papers: &[Paper]) -> Vec<KeywordStat> {
    let mut index: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for paper in papers {
        for term in paper_terms(paper) {
            index.entry(term).or_default().insert(paper.uid.clone());
        }
    }
    index
        .into_iter()
        .map(|(term, paper_uids)| KeywordStat { term, paper_uids })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::DocType;

    fn paper(uid: &str, de: &[&str], id: &[&str]) -> Paper {
        Paper {
            uid: uid.into(),
            doc_types: BTreeSet::from([DocType::Article]),
            journal: "J".into(),
            year: None,
            authors: vec![],
            addresses: vec![],
            author_keywords: de.iter().map(|s| s.to_string()).collect(),
            keywords_plus: id.iter().map(|s| s.to_string()).collect(),
            categories: vec![],
            citation_count: 0,
        }
    }

    #[test]
    fn normalization() {
        assert_eq!(normalize_keyword("  climate   change "), "CLIMATE CHANGE");
        assert_eq!(normalize_keyword("Co-benefits"), "CO BENEFITS");
        assert_eq!(normalize_keyword("Cote d'Ivoire"), "COTE DIVOIRE");
        assert_eq!(normalize_keyword("R&D"), "R&D");
        assert_eq!(normalize_keyword("PM2.5"), "PM25");
        assert_eq!(normalize_keyword("Keywords Plus(R)"), "KEYWORDS PLUS");
        assert_eq!(normalize_keyword("Teflon\u{2122}"), "TEFLON");
        assert_eq!(normalize_keyword("input/output"), "INPUT OUTPUT");
        assert_eq!(normalize_keyword("..."), "");
    }

    #[test]
    fn de_and_id_merge_within_a_paper() {
        let stats = extract_keywords(&[paper("1", &["climate change"], &["CLIMATE CHANGE"])]);
        assert_eq!(stats.len(), 1);
        assert_eq!(stats[0].term, "CLIMATE CHANGE");
        assert_eq!(stats[0].frequency(), 1);
    }

    #[test]
    fn frequencies_match_tally() {
        let papers = vec![
            paper("1", &["a", "b"], &["C"]),
            paper("2", &["a"], &["b", "B"]),
            paper("3", &["c"], &[]),
            paper("4", &[], &[]),
            paper("5", &["A-B"], &["a b"]),
            paper("6", &["b", "c", "a"], &[]),
        ];
        let stats = extract_keywords(&papers);
        let got: Vec<_> = stats
            .iter()
            .map(|s| (s.term.as_str(), s.frequency()))
            .collect();
        assert_eq!(got, [("A", 3), ("A B", 1), ("B", 3), ("C", 3)]);
    }
}
