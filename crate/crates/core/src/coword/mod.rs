//! Co-word analysis: keyword co-occurrence graph, threshold-constrained
//! clustering and the centrality-density (strategic) diagram.
//!
//! Typical use:
//!
//! ```
//! use scientrix_core::coword::{build_graph, cluster, extract_keywords, strategic_coordinates};
//! use scientrix_core::coword::{ClusterParams, GraphParams};
//!
//! let papers = Vec::new();
//! let stats = extract_keywords(&papers);
//! let graph = build_graph(&stats, &GraphParams::default()).unwrap();
//! let clusters = cluster(&graph, &ClusterParams::default());
//! let diagram = strategic_coordinates(&clusters);
//! assert!(diagram.points.is_empty());
//! ```

mod cluster;
mod graph;
mod keywords;
mod strategic;

use thiserror::Error;

pub use cluster::{
    cluster, edge_order, label_cluster, Cluster, ClusterParams, ClusterTerm, LinkAggregate,
};
pub use graph::{build_graph, CowordGraph, Edge, GraphParams, Similarity};
pub use keywords::{extract_keywords, normalize_keyword, paper_terms, KeywordStat};
pub use strategic::{
    cluster_paper_counts, median, strategic_coordinates, PaperCounts, Quadrant, StrategicDiagram,
    StrategicPoint,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CowordError {
    #[error("bad threshold: {0}")]
    BadThreshold(String),
    #[error("cluster sizes need 2 <= min_size <= max_size, got {min_size}..{max_size}")]
    BadClusterSize { min_size: usize, max_size: usize },
}
