use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{Cluster, KeywordStat};

/// Position relative to the median centrality (left/right) and the median
/// density (lower/upper). Values equal to a median fall left or lower.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Quadrant {
    UpperLeft,
    UpperRight,
    LowerLeft,
    LowerRight,
}

impl Quadrant {
    pub const ALL: [Quadrant; 4] = [
        Quadrant::UpperLeft,
        Quadrant::UpperRight,
        Quadrant::LowerLeft,
        Quadrant::LowerRight,
    ];

    pub fn from_position(above_density: bool, right_of_centrality: bool) -> Quadrant {
        match (above_density, right_of_centrality) {
            (true, false) => Quadrant::UpperLeft,
            (true, true) => Quadrant::UpperRight,
            (false, false) => Quadrant::LowerLeft,
            (false, true) => Quadrant::LowerRight,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Quadrant::UpperLeft => "upper-left",
            Quadrant::UpperRight => "upper-right",
            Quadrant::LowerLeft => "lower-left",
            Quadrant::LowerRight => "lower-right",
        }
    }
}

impl fmt::Display for Quadrant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrategicPoint {
    pub id: u32,
    pub centrality: f64,
    pub density: f64,
    pub quadrant: Quadrant,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct StrategicDiagram {
    pub points: Vec<StrategicPoint>,
    pub median_centrality: f64,
    pub median_density: f64,
}

impl StrategicDiagram {
    pub fn quadrant_of(&self, id: u32) -> Option<Quadrant> {
        self.points.iter().find(|p| p.id == id).map(|p| p.quadrant)
    }
}

pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let m = sorted.len();
    if m % 2 == 1 {
        sorted[m / 2]
    } else {
        (sorted[m / 2 - 1] + sorted[m / 2]) / 2.0
    }
}

/// Places each cluster by its centrality and density and assigns quadrants
/// against the medians over all clusters.
pub fn strategic_coordinates(clusters: &[Cluster]) -> StrategicDiagram {
    let centralities: Vec<f64> = clusters.iter().map(|c| c.centrality).collect();
    let densities: Vec<f64> = clusters.iter().map(|c| c.density).collect();
    let median_centrality = median(&centralities);
    let median_density = median(&densities);
    let points = clusters
        .iter()
        .map(|c| StrategicPoint {
            id: c.id,
            centrality: c.centrality,
            density: c.density,
            quadrant: Quadrant::from_position(
                c.density > median_density,
                c.centrality > median_centrality,
            ),
        })
        .collect();
    StrategicDiagram {
        points,
        median_centrality,
        median_density,
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PaperCounts {
    pub per_cluster: Vec<(u32, usize)>,
    /// Every quadrant is present, empty ones with 0.
    pub per_quadrant: BTreeMap<Quadrant, usize>,
}

/// Distinct papers per cluster, and per quadrant as the union over its
/// clusters.
pub fn cluster_paper_counts(
    clusters: &[Cluster],
    stats: &[KeywordStat],
    diagram: &StrategicDiagram,
) -> PaperCounts {
    let by_term: BTreeMap<&str, &KeywordStat> =
        stats.iter().map(|s| (s.term.as_str(), s)).collect();
    let mut quadrant_papers: BTreeMap<Quadrant, BTreeSet<&str>> = Quadrant::ALL
        .iter()
        .map(|q| (*q, BTreeSet::new()))
        .collect();
    let mut per_cluster = Vec::with_capacity(clusters.len());
    for c in clusters {
        let papers: BTreeSet<&str> = c
            .term_names()
            .filter_map(|t| by_term.get(t))
            .flat_map(|s| s.paper_uids.iter().map(String::as_str))
            .collect();
        per_cluster.push((c.id, papers.len()));
        if let Some(q) = diagram.quadrant_of(c.id) {
            quadrant_papers.entry(q).or_default().extend(papers);
        }
    }
    PaperCounts {
        per_cluster,
        per_quadrant: quadrant_papers
            .into_iter()
            .map(|(q, s)| (q, s.len()))
            .collect(),
    }
}
