use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use scientrix_core::citemetrics::{
    baseline, build_peer_sets, mean_pri, pri_for_targets, pri_range_table, PriResult,
};
use scientrix_core::collab::{city_tally, coop_summary};
use scientrix_core::corpus::{
    filter_types, normalize, output_by_year, CountryTable, Normalized, Paper,
};
use scientrix_core::coword::{
    build_graph, cluster, cluster_paper_counts, extract_keywords, strategic_coordinates, Cluster,
    ClusterParams, GraphParams,
};
use scientrix_core::diversity::{
    distribution_from_papers, shannon, top_table, Distribution, Facet,
};
use scientrix_core::ingest::{parse_export, Record};
use scientrix_core::numeric::{format_half_up, to_f64};

use crate::manifest::{Manifest, StageRecord};
use crate::output::{json_lines, pretty_json, sha256_hex, write_atomic, Table};
use crate::svg::strategic_svg;
use crate::{present, CliError, RunConfig};

const PAPERS: &str = "papers.jsonl";
const DIAGNOSTICS: &str = "diagnostics.jsonl";
const PAPERS_BY_YEAR: &str = "papers_by_year.csv";
const PRI_RESULTS: &str = "pri_results.csv";
const PRI_SUMMARY: &str = "pri_summary.json";
const COOP_SUMMARY: &str = "coop_summary.csv";
const CITY_TALLY: &str = "city_tally.csv";
const CLUSTERS: &str = "clusters.csv";
const STRATEGIC_COORDS: &str = "strategic_coords.csv";
const STRATEGIC_SVG: &str = "strategic_diagram.svg";
const DIVERSITY: &str = "diversity.csv";
const TOP_JOURNALS: &str = "top_journals.csv";
const TOP_CATEGORIES: &str = "top_categories.csv";

/// Report files of a full run, manifest included.
pub const OUTPUT_FILES: [&str; 12] = [
    PAPERS_BY_YEAR,
    PRI_RESULTS,
    PRI_SUMMARY,
    DIVERSITY,
    COOP_SUMMARY,
    CITY_TALLY,
    TOP_JOURNALS,
    TOP_CATEGORIES,
    CLUSTERS,
    STRATEGIC_SVG,
    STRATEGIC_COORDS,
    crate::manifest::MANIFEST_FILE,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Parse,
    Pri,
    Collab,
    Coword,
    Diversity,
}

impl Stage {
    /// Execution order of a full run.
    pub const ALL: [Stage; 5] = [
        Stage::Parse,
        Stage::Pri,
        Stage::Collab,
        Stage::Coword,
        Stage::Diversity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Parse => "parse",
            Stage::Pri => "pri",
            Stage::Collab => "collab",
            Stage::Coword => "coword",
            Stage::Diversity => "diversity",
        }
    }
}

#[derive(Default)]
struct StageOutput {
    files: Vec<(&'static str, Vec<u8>)>,
    inputs: Vec<(String, String)>,
    record: StageRecord,
}

impl StageOutput {
    fn count(&mut self, key: &str, n: usize) {
        self.record.counts.insert(key.to_string(), n as u64);
    }

    fn warn(&mut self, message: impl Into<String>) {
        self.record.warnings.push(message.into());
    }

    fn file(&mut self, name: &'static str, bytes: Vec<u8>) {
        self.files.push((name, bytes));
    }
}

/// Runs every stage in order into a fresh manifest.
pub fn run_pipeline(config: &RunConfig) -> Result<Manifest, CliError> {
    let mut manifest = Manifest::new(config.snapshot());
    for stage in Stage::ALL {
        execute(stage, config, &mut manifest)?;
    }
    manifest.save(&config.output_dir)?;
    Ok(manifest)
}

/// Runs one stage against the intermediates already in the output
/// directory and merges its results into the manifest there.
pub fn run_stage(stage: Stage, config: &RunConfig) -> Result<Manifest, CliError> {
    let fresh = Manifest::new(config.snapshot());
    let mut manifest = match Manifest::load(&config.output_dir)? {
        Some(old) => Manifest {
            inputs: old.inputs,
            stages: old.stages,
            outputs: old.outputs,
            ..fresh
        },
        None => fresh,
    };
    execute(stage, config, &mut manifest)?;
    manifest.save(&config.output_dir)?;
    Ok(manifest)
}

fn execute(stage: Stage, config: &RunConfig, manifest: &mut Manifest) -> Result<(), CliError> {
    let out = match stage {
        Stage::Parse => parse_stage(config)?,
        Stage::Pri => pri_stage(config)?,
        Stage::Collab => collab_stage(config)?,
        Stage::Coword => coword_stage(config)?,
        Stage::Diversity => diversity_stage(config)?,
    };
    for (name, bytes) in &out.files {
        write_atomic(&config.output_dir.join(name), bytes)?;
        manifest.outputs.insert(name.to_string(), sha256_hex(bytes));
    }
    manifest.inputs.extend(out.inputs);
    manifest.stages.insert(stage.name().to_string(), out.record);
    Ok(())
}

fn read_input(path: &Path, out: &mut StageOutput) -> Result<Vec<u8>, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    out.inputs
        .push((path.display().to_string(), sha256_hex(&bytes)));
    Ok(bytes)
}

fn country_table(
    stage: Stage,
    config: &RunConfig,
    out: &mut StageOutput,
) -> Result<CountryTable, CliError> {
    match &config.country_table_path {
        None => Ok(CountryTable::default()),
        Some(path) => {
            let bytes = read_input(path, out)?;
            let text = String::from_utf8(bytes).map_err(|_| {
                CliError::stage(stage, format!("{}: invalid UTF-8", path.display()))
            })?;
            CountryTable::from_csv(&text)
                .map_err(|e| CliError::stage(stage, format!("{}: {e}", path.display())))
        }
    }
}

/// Parses and normalizes export files. Each file is checked on its own so
/// that errors name it; duplicates are removed across all of them.
fn read_exports(
    stage: Stage,
    paths: &[PathBuf],
    table: &CountryTable,
    out: &mut StageOutput,
) -> Result<(Vec<Record>, Normalized), CliError> {
    let mut all = Vec::new();
    for path in paths {
        let bytes = read_input(path, out)?;
        let records = parse_export(&bytes[..])
            .map_err(|e| CliError::stage(stage, format!("{}: {e}", path.display())))?;
        normalize(&records, table)
            .map_err(|e| CliError::stage(stage, format!("{}: {e}", path.display())))?;
        all.extend(records);
    }
    let normalized = normalize(&all, table).map_err(|e| CliError::stage(stage, e.to_string()))?;
    Ok((all, normalized))
}

fn parse_stage(config: &RunConfig) -> Result<StageOutput, CliError> {
    if config.input_paths.is_empty() {
        return Err(CliError::Usage(
            "no input files (set input_paths or pass --input)".into(),
        ));
    }
    let mut out = StageOutput::default();
    let table = country_table(Stage::Parse, config, &mut out)?;
    let (records, normalized) = read_exports(Stage::Parse, &config.input_paths, &table, &mut out)?;
    let papers = normalized.papers;

    let mut by_year = Table::new(&["year", "doc_type", "count"]);
    let years = output_by_year(&papers);
    for row in &years.rows {
        let year = row.year.to_string();
        by_year.row([year.as_str(), "ALL", &row.total.to_string()]);
        for (doc_type, n) in &row.by_type {
            by_year.row([year.as_str(), doc_type.label(), &n.to_string()]);
        }
    }

    let research = filter_types(&papers, &config.doc_types);
    out.count("records", records.len());
    out.count("papers", papers.len());
    out.count("research_papers", research.len());
    out.count("diagnostics", normalized.diagnostics.len());
    out.count("undated_papers", years.undated);
    if !normalized.diagnostics.is_empty() {
        out.warn(format!(
            "{} normalization warnings, see {DIAGNOSTICS}",
            normalized.diagnostics.len()
        ));
    }
    if years.undated > 0 {
        out.warn(format!(
            "{} papers without a publication year",
            years.undated
        ));
    }
    if research.is_empty() {
        out.warn("corpus is empty after filtering by doc_types");
    }
    out.file(PAPERS, json_lines(&papers));
    out.file(DIAGNOSTICS, json_lines(&normalized.diagnostics));
    out.file(PAPERS_BY_YEAR, by_year.into_bytes());
    Ok(out)
}

fn load_papers(stage: Stage, config: &RunConfig) -> Result<Vec<Paper>, CliError> {
    let path = config.output_dir.join(PAPERS);
    if !path.exists() {
        return Err(CliError::MissingIntermediate {
            stage: stage.name().into(),
            path,
            needs: Stage::Parse.name().into(),
        });
    }
    let text = fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, line)| {
            serde_json::from_str(line).map_err(|e| {
                CliError::stage(stage, format!("{}: line {}: {e}", path.display(), i + 1))
            })
        })
        .collect()
}

fn research_papers(stage: Stage, config: &RunConfig) -> Result<Vec<Paper>, CliError> {
    Ok(filter_types(
        &load_papers(stage, config)?,
        &config.doc_types,
    ))
}

fn journal_key(raw: &str) -> String {
    raw.split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_uppercase()
}

#[derive(Deserialize)]
struct PeerRow {
    journal: String,
    year: i32,
    uid: String,
    citations: u64,
}

/// Peer-set members from a `journal,year,uid,citations` CSV or an export
/// file. CSV members take the configured PRI document type.
fn read_peers(config: &RunConfig, out: &mut StageOutput) -> Result<Vec<Paper>, CliError> {
    let stage = Stage::Pri;
    let table = country_table(stage, config, out)?;
    let mut papers = Vec::new();
    for path in &config.peer_set_paths {
        let is_csv = path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
        if !is_csv {
            let (_, normalized) = read_exports(stage, std::slice::from_ref(path), &table, out)?;
            papers.extend(normalized.papers);
            continue;
        }
        let bytes = read_input(path, out)?;
        let mut reader = csv::Reader::from_reader(&bytes[..]);
        for row in reader.deserialize::<PeerRow>() {
            let row =
                row.map_err(|e| CliError::stage(stage, format!("{}: {e}", path.display())))?;
            papers.push(Paper {
                uid: row.uid,
                doc_types: BTreeSet::from([config.pri_doc_type.clone()]),
                journal: journal_key(&row.journal),
                year: Some(row.year),
                authors: Vec::new(),
                addresses: Vec::new(),
                author_keywords: Vec::new(),
                keywords_plus: Vec::new(),
                categories: Vec::new(),
                citation_count: row.citations,
            });
        }
    }
    let mut seen = BTreeSet::new();
    let before = papers.len();
    papers.retain(|p| seen.insert(p.uid.clone()));
    if papers.len() < before {
        out.warn(format!(
            "{} duplicate peer-set members dropped",
            before - papers.len()
        ));
    }
    Ok(papers)
}

#[derive(Serialize)]
struct RangeJson {
    range: String,
    threshold: f64,
    count: usize,
    percent: f64,
}

#[derive(Serialize)]
struct PriSummary {
    targets: usize,
    peer_sets: usize,
    mean_pri: Option<f64>,
    median_set_size: Option<f64>,
    pri_globav: Option<f64>,
    ranges: Vec<RangeJson>,
}

fn number(rendered: &str) -> f64 {
    rendered.parse().expect("rendered decimal")
}

fn pri_stage(config: &RunConfig) -> Result<StageOutput, CliError> {
    let stage = Stage::Pri;
    let papers = load_papers(stage, config)?;
    let mut out = StageOutput::default();
    let targets: Vec<Paper> = papers
        .into_iter()
        .filter(|p| p.has_type(&config.pri_doc_type))
        .filter(|p| match (p.year, config.pri_year_cutoff) {
            (None, _) => false,
            (Some(y), Some(cutoff)) => y < cutoff,
            (Some(_), None) => true,
        })
        .collect();

    let mut peer_sets = Vec::new();
    let mut results: Vec<PriResult> = Vec::new();
    if config.peer_set_paths.is_empty() {
        out.warn("no peer sets configured; PRI not computed");
    } else {
        let peers = read_peers(config, &mut out)?;
        peer_sets = build_peer_sets(&peers, &config.pri_doc_type);
        results = pri_for_targets(&targets, &peer_sets)
            .map_err(|e| CliError::stage(stage, e.to_string()))?;
    }
    if results.is_empty() {
        out.warn("no target papers for PRI");
    }

    let mut table = Table::new(&["uid", "journal", "year", "N", "R", "PRI"]);
    for r in &results {
        table.row([
            r.uid.clone(),
            r.journal.clone(),
            r.year.to_string(),
            r.set_size.to_string(),
            present::rank(r.rank),
            present::pri(r.pri),
        ]);
    }

    let mut summary = PriSummary {
        targets: results.len(),
        peer_sets: peer_sets.len(),
        mean_pri: None,
        median_set_size: None,
        pri_globav: None,
        ranges: Vec::new(),
    };
    if let (Ok(base), Ok(mean)) = (baseline(&results), mean_pri(&results)) {
        summary.mean_pri = Some(number(&present::fixed(mean, 1)));
        summary.median_set_size = Some(number(&format_half_up(base.median_set_size, 1)));
        summary.pri_globav = Some(number(&present::pri(base.pri_globav)));
        let mut thresholds = config.pri_thresholds.clone();
        thresholds.push(base.pri_globav);
        summary.ranges = pri_range_table(&results, &thresholds)
            .into_iter()
            .map(|row| RangeJson {
                range: if row.is_top() {
                    "PRI = 100".to_string()
                } else {
                    format!("PRI >= {}", present::pri(row.threshold))
                },
                threshold: to_f64(row.threshold),
                count: row.count,
                percent: number(&present::pct(row.percent)),
            })
            .collect();
    }

    out.count("targets", results.len());
    out.count("peer_sets", peer_sets.len());
    out.file(PRI_RESULTS, table.into_bytes());
    out.file(PRI_SUMMARY, pretty_json(&summary));
    Ok(out)
}

fn collab_stage(config: &RunConfig) -> Result<StageOutput, CliError> {
    let papers = research_papers(Stage::Collab, config)?;
    let mut out = StageOutput::default();
    if papers.is_empty() {
        out.warn("no papers to classify");
    }
    let mut coop = Table::new(&["class", "count", "percent", "mean_citations"]);
    for row in coop_summary(&papers) {
        coop.row([
            row.class.label().to_string(),
            row.count.to_string(),
            present::pct(row.percent),
            format_half_up(row.mean_citations, 1),
        ]);
    }
    if config.organization_prefix.is_empty() {
        out.warn("organization_prefix is empty; every organization is counted");
    }
    let cities = city_tally(
        &papers,
        &config.organization_prefix,
        config.city_threshold_pct,
    );
    let mut city = Table::new(&["city", "count", "percent"]);
    for row in &cities {
        city.row([
            row.city.clone(),
            row.count.to_string(),
            present::pct(row.percent),
        ]);
    }
    out.count("papers", papers.len());
    out.count("cities", cities.len());
    out.file(COOP_SUMMARY, coop.into_bytes());
    out.file(CITY_TALLY, city.into_bytes());
    Ok(out)
}

/// Terms of a cluster, label first and the rest alphabetical.
fn ordered_terms(c: &Cluster) -> Vec<&str> {
    let mut rest: Vec<&str> = c.term_names().filter(|t| *t != c.label).collect();
    rest.sort_unstable();
    std::iter::once(c.label.as_str()).chain(rest).collect()
}

fn coword_stage(config: &RunConfig) -> Result<StageOutput, CliError> {
    let papers = research_papers(Stage::Coword, config)?;
    let mut out = StageOutput::default();
    let graph_params = GraphParams {
        min_frequency: config.min_keyword_frequency,
        min_strength: config.min_cosine,
        similarity: config.similarity,
    };
    let mut cluster_params = ClusterParams::new(config.min_cluster_size, config.max_cluster_size)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    cluster_params.aggregate = config.link_aggregate;

    let stats = extract_keywords(&papers);
    let graph = build_graph(&stats, &graph_params).map_err(|e| CliError::Usage(e.to_string()))?;
    let clusters = cluster(&graph, &cluster_params);
    let diagram = strategic_coordinates(&clusters);
    let counts = cluster_paper_counts(&clusters, &stats, &diagram);

    let mut table = Table::new(&[
        "cluster_id",
        "label",
        "n_terms",
        "distinct_papers",
        "density",
        "centrality",
        "quadrant",
        "terms",
    ]);
    let mut coords = Table::new(&["cluster_id", "label", "centrality", "density", "quadrant"]);
    for c in &clusters {
        let quadrant = diagram
            .quadrant_of(c.id)
            .map(|q| q.label())
            .unwrap_or_default();
        table.row([
            c.id.to_string(),
            c.label.clone(),
            c.terms.len().to_string(),
            c.distinct_papers.to_string(),
            present::strength(c.density),
            present::strength(c.centrality),
            quadrant.to_string(),
            ordered_terms(c).join(";"),
        ]);
        coords.row([
            c.id.to_string(),
            c.label.clone(),
            present::strength(c.centrality),
            present::strength(c.density),
            quadrant.to_string(),
        ]);
    }

    out.count("papers", papers.len());
    out.count("keywords", stats.len());
    out.count("vertices", graph.vertices.len());
    out.count("edges", graph.edges.len());
    out.count("clusters", clusters.len());
    for (q, n) in &counts.per_quadrant {
        out.count(&format!("papers_{}", q.label()), *n);
    }
    if clusters.is_empty() {
        out.warn("no clusters formed");
    }
    out.file(CLUSTERS, table.into_bytes());
    out.file(STRATEGIC_COORDS, coords.into_bytes());
    out.file(STRATEGIC_SVG, strategic_svg(&diagram).into_bytes());
    Ok(out)
}

fn cluster_terms(config: &RunConfig) -> Result<BTreeSet<String>, CliError> {
    let stage = Stage::Diversity;
    let path = config.output_dir.join(CLUSTERS);
    if !path.exists() {
        return Err(CliError::MissingIntermediate {
            stage: stage.name().into(),
            path,
            needs: Stage::Coword.name().into(),
        });
    }
    let mut reader = csv::Reader::from_path(&path)
        .map_err(|e| CliError::stage(stage, format!("{}: {e}", path.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| CliError::stage(stage, format!("{}: {e}", path.display())))?
        .clone();
    let col = headers
        .iter()
        .position(|h| h == "terms")
        .ok_or_else(|| CliError::stage(stage, format!("{}: no terms column", path.display())))?;
    let mut terms = BTreeSet::new();
    for row in reader.records() {
        let row = row.map_err(|e| CliError::stage(stage, format!("{}: {e}", path.display())))?;
        terms.extend(
            row.get(col)
                .unwrap_or("")
                .split(';')
                .filter(|t| !t.is_empty())
                .map(String::from),
        );
    }
    Ok(terms)
}

#[derive(Deserialize)]
struct ImpactRow {
    journal: String,
    impact_factor: String,
}

fn impact_factors(
    config: &RunConfig,
    out: &mut StageOutput,
) -> Result<Option<BTreeMap<String, String>>, CliError> {
    let Some(path) = &config.impact_factor_path else {
        return Ok(None);
    };
    let bytes = read_input(path, out)?;
    let mut map = BTreeMap::new();
    for row in csv::Reader::from_reader(&bytes[..]).deserialize::<ImpactRow>() {
        let row =
            row.map_err(|e| CliError::stage(Stage::Diversity, format!("{}: {e}", path.display())))?;
        map.insert(
            journal_key(&row.journal),
            row.impact_factor.trim().to_string(),
        );
    }
    Ok(Some(map))
}

fn diversity_stage(config: &RunConfig) -> Result<StageOutput, CliError> {
    let papers = research_papers(Stage::Diversity, config)?;
    let terms = cluster_terms(config)?;
    let mut out = StageOutput::default();

    let journals = distribution_from_papers(&papers, Facet::Journal);
    let categories = distribution_from_papers(&papers, Facet::Category);
    let facets: [(&str, Distribution); 4] = [
        ("journals", journals.clone()),
        ("subfields", categories.clone()),
        (
            "keywords (total)",
            distribution_from_papers(&papers, Facet::KeywordTotal),
        ),
        (
            "keywords (clusters)",
            distribution_from_papers(&papers, Facet::KeywordClusterTerms(&terms)),
        ),
    ];
    let mut table = Table::new(&["type", "no.", "H", "pct", "H_max"]);
    for (name, dist) in &facets {
        match shannon(dist) {
            Ok(r) => table.row([
                name.to_string(),
                r.richness.to_string(),
                present::entropy(r.h),
                present::share_of_max(r.pct_of_max),
                present::entropy(r.h_max),
            ]),
            Err(_) => {
                out.warn(format!("{name}: empty distribution"));
                table.row([
                    name.to_string(),
                    "0".into(),
                    String::new(),
                    String::new(),
                    String::new(),
                ]);
            }
        }
    }

    let impact = impact_factors(config, &mut out)?;
    let mut header = vec!["journal", "count", "percent"];
    if impact.is_some() {
        header.push("impact_factor");
    }
    let mut top_j = Table::new(&header);
    let journal_rows = top_table(&journals, config.top_journal_min, papers.len());
    for row in &journal_rows {
        let mut fields = vec![
            row.label.clone(),
            row.count.to_string(),
            present::pct(row.percent),
        ];
        if let Some(map) = &impact {
            fields.push(map.get(&row.label).cloned().unwrap_or_default());
        }
        top_j.row(fields);
    }
    let mut top_c = Table::new(&["category", "count", "percent"]);
    let category_rows = top_table(&categories, config.top_category_min, papers.len());
    for row in &category_rows {
        top_c.row([
            row.label.clone(),
            row.count.to_string(),
            present::pct(row.percent),
        ]);
    }

    out.count("papers", papers.len());
    out.count("journals", journals.richness());
    out.count("categories", categories.richness());
    out.count("top_journals", journal_rows.len());
    out.count("top_categories", category_rows.len());
    out.file(DIVERSITY, table.into_bytes());
    out.file(TOP_JOURNALS, top_j.into_bytes());
    out.file(TOP_CATEGORIES, top_c.into_bytes());
    Ok(out)
}
