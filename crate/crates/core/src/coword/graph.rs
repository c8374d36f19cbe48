use std::collections::BTreeMap;

use super::{CowordError, KeywordStat};

/// Link strength between two terms from their co-occurrence `c` and
/// frequencies `f_a`, `f_b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Similarity {
    /// `c / sqrt(f_a * f_b)`
    #[default]
    Cosine,
    /// `c^2 / (f_a * f_b)`
    Equivalence,
}

impl Similarity {
    pub fn strength(self, cooccurrence: usize, freq_a: usize, freq_b: usize) -> f64 {
        let c = cooccurrence as f64;
        let product = freq_a as f64 * freq_b as f64;
        match self {
            Similarity::Cosine => c / product.sqrt(),
            Similarity::Equivalence => c * c / product,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphParams {
    pub min_frequency: usize,
    pub min_strength: f64,
    pub similarity: Similarity,
}

impl Default for GraphParams {
    fn default() -> Self {
        GraphParams {
            min_frequency: 4,
            min_strength: 0.2,
            similarity: Similarity::Cosine,
        }
    }
}

impl GraphParams {
    pub fn new(min_frequency: usize, min_strength: f64) -> Self {
        GraphParams {
            min_frequency,
            min_strength,
            ..GraphParams::default()
        }
    }

    fn validate(&self) -> Result<(), CowordError> {
        if self.min_frequency < 1 {
            return Err(CowordError::BadThreshold(format!(
                "min_frequency must be >= 1, got {}",
                self.min_frequency
            )));
        }
        if !(self.min_strength > 0.0 && self.min_strength <= 1.0) {
            return Err(CowordError::BadThreshold(format!(
                "minimum link strength must lie in (0, 1], got {}",
                self.min_strength
            )));
        }
        Ok(())
    }
}

/// Undirected link between two terms, `a < b`.
#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub a: String,
    pub b: String,
    pub cooccurrence: usize,
    pub strength: f64,
}

impl Edge {
    pub fn touches(&self, term: &str) -> bool {
        self.a == term || self.b == term
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CowordGraph {
    /// Retained terms sorted by term.
    pub vertices: Vec<KeywordStat>,
    /// Sorted by `(a, b)`.
    pub edges: Vec<Edge>,
}

impl CowordGraph {
    pub fn vertex(&self, term: &str) -> Option<&KeywordStat> {
        self.vertices
            .binary_search_by(|v| v.term.as_str().cmp(term))
            .ok()
            .map(|i| &self.vertices[i])
    }

    pub fn frequency(&self, term: &str) -> usize {
        self.vertex(term).map_or(0, KeywordStat::frequency)
    }
}

/// Keeps terms with at least `min_frequency` papers and links whose
/// strength reaches `min_strength`. Terms left without links stay in the
/// vertex list.
pub fn build_graph(
    stats: &[KeywordStat],
    params: &GraphParams,
) -> Result<CowordGraph, CowordError> {
    params.validate()?;
    let mut vertices: Vec<KeywordStat> = stats
        .iter()
        .filter(|s| s.frequency() >= params.min_frequency)
        .cloned()
        .collect();
    vertices.sort_by(|a, b| a.term.cmp(&b.term));
    vertices.dedup_by(|a, b| a.term == b.term);

    let mut by_paper: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, v) in vertices.iter().enumerate() {
        for uid in &v.paper_uids {
            by_paper.entry(uid.as_str()).or_default().push(i);
        }
    }
    let mut pairs: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for terms in by_paper.values() {
        for (k, &i) in terms.iter().enumerate() {
            for &j in &terms[k + 1..] {
                *pairs.entry((i.min(j), i.max(j))).or_default() += 1;
            }
        }
    }

    let edges = pairs
        .into_iter()
        .filter_map(|((i, j), c)| {
            let (a, b) = (&vertices[i], &vertices[j]);
            let strength = params.similarity.strength(c, a.frequency(), b.frequency());
            (strength >= params.min_strength).then(|| Edge {
                a: a.term.clone(),
                b: b.term.clone(),
                cooccurrence: c,
                strength,
            })
        })
        .collect();
    Ok(CowordGraph { vertices, edges })
}
