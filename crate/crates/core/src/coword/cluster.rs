use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use super::{CowordError, CowordGraph, Edge};

/// How link strengths are combined into density and centrality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LinkAggregate {
    #[default]
    Mean,
    Sum,
}

impl LinkAggregate {
    pub fn apply<'a>(self, links: impl IntoIterator<Item = &'a Edge>) -> f64 {
        let (n, sum) = links
            .into_iter()
            .fold((0usize, 0.0f64), |(n, s), e| (n + 1, s + e.strength));
        match self {
            _ if n == 0 => 0.0,
            LinkAggregate::Mean => sum / n as f64,
            LinkAggregate::Sum => sum,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClusterParams {
    pub min_size: usize,
    pub max_size: usize,
    pub aggregate: LinkAggregate,
}

impl Default for ClusterParams {
    fn default() -> Self {
        ClusterParams {
            min_size: 3,
            max_size: 10,
            aggregate: LinkAggregate::Mean,
        }
    }
}

impl ClusterParams {
    pub fn new(min_size: usize, max_size: usize) -> Result<Self, CowordError> {
        if min_size < 2 || max_size < min_size {
            return Err(CowordError::BadClusterSize { min_size, max_size });
        }
        Ok(ClusterParams {
            min_size,
            max_size,
            aggregate: LinkAggregate::Mean,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterTerm {
    pub term: String,
    pub frequency: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    /// 1-based, in order of creation.
    pub id: u32,
    /// Sorted by term.
    pub terms: Vec<ClusterTerm>,
    pub label: String,
    /// Links between two terms of this cluster.
    pub internal_links: Vec<Edge>,
    /// Links from a term of this cluster to a term of another cluster.
    pub external_links: Vec<Edge>,
    pub density: f64,
    pub centrality: f64,
    /// Papers containing at least one of the terms.
    pub distinct_papers: usize,
}

impl Cluster {
    pub fn contains(&self, term: &str) -> bool {
        self.terms
            .binary_search_by(|t| t.term.as_str().cmp(term))
            .is_ok()
    }

    pub fn term_names(&self) -> impl Iterator<Item = &str> {
        self.terms.iter().map(|t| t.term.as_str())
    }
}

/// Links in processing order: strongest first, ties by `(a, b)`.
pub fn edge_order(edges: &[Edge]) -> Vec<&Edge> {
    let mut order: Vec<&Edge> = edges.iter().collect();
    order.sort_by(|x, y| {
        y.strength
            .partial_cmp(&x.strength)
            .unwrap_or(Ordering::Equal)
            .then_with(|| x.a.cmp(&y.a))
            .then_with(|| x.b.cmp(&y.b))
    });
    order
}

/// Single pass over the links from strongest to weakest.
///
/// A link between two unclustered terms opens a cluster; a link from a
/// cluster to an unclustered term adds the term; a link between two
/// clusters merges them into the older one. Each step happens only if the
/// result has at most `max_size` terms. Clusters left with fewer than
/// `min_size` terms are dropped, and the rest are renumbered 1..K in
/// creation order.
pub fn cluster(graph: &CowordGraph, params: &ClusterParams) -> Vec<Cluster> {
    let index: BTreeMap<&str, usize> = graph
        .vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (v.term.as_str(), i))
        .collect();
    let mut owner: Vec<Option<usize>> = vec![None; graph.vertices.len()];
    // Slots in creation order; a merged-away slot becomes empty.
    let mut slots: Vec<Vec<usize>> = Vec::new();

    for edge in edge_order(&graph.edges) {
        let (Some(&ia), Some(&ib)) = (index.get(edge.a.as_str()), index.get(edge.b.as_str()))
        else {
            continue;
        };
        match (owner[ia], owner[ib]) {
            (None, None) => {
                if params.max_size >= 2 {
                    owner[ia] = Some(slots.len());
                    owner[ib] = Some(slots.len());
                    slots.push(vec![ia, ib]);
                }
            }
            (Some(c), None) | (None, Some(c)) => {
                if slots[c].len() < params.max_size {
                    let free = if owner[ia].is_none() { ia } else { ib };
                    owner[free] = Some(c);
                    slots[c].push(free);
                }
            }
            (Some(c1), Some(c2))
                if c1 != c2 && slots[c1].len() + slots[c2].len() <= params.max_size =>
            {
                let (keep, gone) = (c1.min(c2), c1.max(c2));
                let moved = std::mem::take(&mut slots[gone]);
                for &v in &moved {
                    owner[v] = Some(keep);
                }
                slots[keep].extend(moved);
            }
            _ => {}
        }
    }

    let survivors: Vec<BTreeSet<&str>> = slots
        .iter()
        .filter(|s| s.len() >= params.min_size)
        .map(|s| s.iter().map(|&v| graph.vertices[v].term.as_str()).collect())
        .collect();
    let mut cluster_of: BTreeMap<&str, usize> = BTreeMap::new();
    for (k, terms) in survivors.iter().enumerate() {
        for &t in terms {
            cluster_of.insert(t, k);
        }
    }

    survivors
        .iter()
        .enumerate()
        .map(|(k, terms)| {
            let mut internal = Vec::new();
            let mut external = Vec::new();
            for edge in &graph.edges {
                let side_a = cluster_of.get(edge.a.as_str()).copied();
                let side_b = cluster_of.get(edge.b.as_str()).copied();
                match (side_a, side_b) {
                    (Some(x), Some(y)) if x == k && y == k => internal.push(edge.clone()),
                    (Some(x), Some(_)) | (Some(_), Some(x)) if x == k => {
                        external.push(edge.clone())
                    }
                    _ => {}
                }
            }
            let members: Vec<ClusterTerm> = terms
                .iter()
                .map(|&t| ClusterTerm {
                    term: t.to_string(),
                    frequency: graph.frequency(t),
                })
                .collect();
            let papers: BTreeSet<&str> = terms
                .iter()
                .filter_map(|t| graph.vertex(t))
                .flat_map(|v| v.paper_uids.iter().map(String::as_str))
                .collect();
            let mut c = Cluster {
                id: k as u32 + 1,
                terms: members,
                label: String::new(),
                density: params.aggregate.apply(&internal),
                centrality: params.aggregate.apply(&external),
                internal_links: internal,
                external_links: external,
                distinct_papers: papers.len(),
            };
            c.label = label_cluster(&c);
            c
        })
        .collect()
}

/// Term with the largest `frequency * sum of its internal link strengths`;
/// ties go to the alphabetically first term.
pub fn label_cluster(c: &Cluster) -> String {
    let mut best: Option<(&str, f64)> = None;
    for t in &c.terms {
        let links: f64 = c
            .internal_links
            .iter()
            .filter(|e| e.touches(&t.term))
            .map(|e| e.strength)
            .sum();
        let score = t.frequency as f64 * links;
        best = match best {
            Some((_, s)) if s >= score => best,
            _ => Some((&t.term, score)),
        };
    }
    best.map(|(t, _)| t.to_string()).unwrap_or_default()
}
