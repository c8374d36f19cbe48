//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line per
//! criterion and exits nonzero if any failed.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use scientrix_cli::present;
use scientrix_cli::{run_pipeline, RunConfig, OUTPUT_FILES};
use scientrix_core::citemetrics::{
    baseline, globav_from_median, pri, pri_range_table, rank_in_set, PeerMember, PeerSet, PriResult,
};
use scientrix_core::collab::{classify, coop_summary};
use scientrix_core::corpus::{Address, CountryTable, DocType, Paper};
use scientrix_core::coword::{
    build_graph, cluster, ClusterParams, CowordGraph, Edge, GraphParams, KeywordStat, Similarity,
};
use scientrix_core::diversity::{shannon, Distribution};
use scientrix_core::ingest::{parse_str, serialize_records, FieldTag, Record};
use scientrix_core::numeric::{format_half_up, percent, to_f64};
use scientrix_core::Rational;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn r(n: i64) -> Rational {
    Rational::from_integer(n)
}

fn pri_formula() -> Outcome {
    for n in [1, 5, 100] {
        let v = pri(n, r(1)).map_err(|e| e.to_string())?;
        ensure(v == r(100), || format!("pri({n}, 1) = {v}"))?;
    }
    let v = pri(4, r(4)).map_err(|e| e.to_string())?;
    ensure(v == r(25), || format!("pri(4, 4) = {v}"))?;

    let mut rng = StdRng::seed_from_u64(1);
    for trial in 0..1000 {
        let n = rng.gen_range(1..=50usize);
        let spread = rng.gen_range(1..=20u64);
        let set = PeerSet {
            journal: "J".into(),
            year: 2000,
            doc_type: DocType::Article,
            members: (0..n)
                .map(|i| PeerMember {
                    uid: format!("{i:02}"),
                    citations: rng.gen_range(0..spread),
                })
                .collect(),
        };
        let sum = rank_in_set(&set)
            .iter()
            .fold(r(0), |acc, (_, rank)| acc + rank);
        let expected = Rational::new((n * (n + 1)) as i64, 2);
        ensure(sum == expected, || {
            format!("trial {trial}: rank sum {sum} != {expected}")
        })?;
    }
    Ok("pri(N,1)=100 for N in {1,5,100}; pri(4,4)=25; 1000 tied rank sums = N(N+1)/2".into())
}

fn baseline_fixture() -> Outcome {
    let median = Rational::new(141, 2);
    let value = globav_from_median(median);
    let oracle = 50.0 + 50.0 / 70.5;
    let got = to_f64(value);
    ensure((got - oracle).abs() <= 1e-9, || {
        format!("{got} vs formula {oracle}")
    })?;
    let shown = format_half_up(value, 4);
    ensure(shown == "50.7092", || format!("rounds to {shown}"))?;

    // The median is taken over targets ordered by set size.
    let results: Vec<PriResult> = [60u64, 70, 71, 90]
        .iter()
        .map(|&n| PriResult {
            uid: format!("U{n}"),
            journal: "J".into(),
            year: 2000,
            rank: r(1),
            set_size: n,
            pri: r(100),
        })
        .collect();
    let b = baseline(&results).map_err(|e| e.to_string())?;
    ensure(b.median_set_size == median && b.pri_globav == value, || {
        format!("{b:?}")
    })?;
    Ok(format!(
        "median 70.5 -> {got:.9} (= 50 + 50/70.5 within 1e-9, shown {shown})"
    ))
}

fn range_table_oracle() -> Outcome {
    let mut rng = StdRng::seed_from_u64(2);
    for trial in 0..500 {
        let results: Vec<PriResult> = (0..rng.gen_range(0..300))
            .map(|i| {
                let n = rng.gen_range(1..=200i64);
                let rank = Rational::new(rng.gen_range(2..=2 * n), 2);
                PriResult {
                    uid: format!("{i}"),
                    journal: "J".into(),
                    year: 2000,
                    rank,
                    set_size: n as u64,
                    pri: pri(n as u64, rank).unwrap(),
                }
            })
            .collect();
        let mut thresholds = vec![r(100), r(99), r(90), r(75)];
        if let Ok(b) = baseline(&results) {
            thresholds.push(b.pri_globav);
        }
        let rows = pri_range_table(&results, &thresholds);
        for (row, t) in rows.iter().zip(&thresholds) {
            let brute = results.iter().filter(|x| x.pri >= *t).count();
            ensure(row.count == brute, || {
                format!("trial {trial}: threshold {t}: {} != {brute}", row.count)
            })?;
            ensure(row.percent == percent(brute, results.len()), || {
                format!("trial {trial}: percent")
            })?;
        }
        for w in rows.windows(2) {
            ensure(w[0].count <= w[1].count, || {
                format!("trial {trial}: counts increase")
            })?;
        }
    }
    let shown = present::pct(percent(363, 652));
    ensure(shown == "55.7", || format!("363/652 shown as {shown}"))?;
    Ok("500 random result lists match brute force; counts non-increasing; 363/652 -> 55.7".into())
}

fn shannon_fixtures() -> Outcome {
    let uniform = |s: usize| Distribution::new((0..s).map(|i| (format!("{i:04}"), 3))).unwrap();
    let rep = shannon(&uniform(527)).map_err(|e| e.to_string())?;
    ensure((rep.h_max - 6.27).abs() <= 0.005, || {
        format!("H_max(527) = {}", rep.h_max)
    })?;
    ensure(present::entropy(rep.h_max) == "6.27", || {
        present::entropy(rep.h_max)
    })?;
    for s in 1..=1000 {
        let rep = shannon(&uniform(s)).map_err(|e| e.to_string())?;
        let target = (s as f64).ln();
        ensure((rep.h - target).abs() <= 1e-12, || {
            format!("S={s}: H={} ln S={target}", rep.h)
        })?;
    }
    let single = shannon(&Distribution::new([("only".to_string(), 42)]).unwrap())
        .map_err(|e| e.to_string())?;
    ensure(single.h == 0.0, || {
        format!("single species H = {}", single.h)
    })?;
    let shown = present::share_of_max(5.83 / 6.27 * 100.0);
    ensure(shown == "93", || format!("5.83/6.27 shown as {shown}"))?;
    ensure(
        format_half_up(Rational::new(583, 627) * r(100), 0) == "93",
        || "exact 583/627".into(),
    )?;
    Ok(format!(
        "H_max(527) = {:.4}; uniform S<=1000 within 1e-12; single species H = 0; 5.83/6.27 -> 93",
        rep.h_max
    ))
}

fn stat(term: &str, papers: impl IntoIterator<Item = u32>) -> KeywordStat {
    KeywordStat {
        term: term.into(),
        paper_uids: papers.into_iter().map(|p| format!("p{p:03}")).collect(),
    }
}

fn cosine_fixtures() -> Outcome {
    let s = Similarity::Cosine.strength(2, 4, 4);
    ensure(s == 0.5, || format!("cos(2,4,4) = {s}"))?;

    // A and B share one paper, f_A = 4, f_B = 7: strength 1/sqrt(28).
    let stats = [stat("A", 0..4), stat("B", 3..10)];
    let at = |min: f64| {
        build_graph(&stats, &GraphParams::new(4, min))
            .unwrap()
            .edges
    };
    let weak = 1.0 / 28f64.sqrt();
    ensure(at(0.2).is_empty(), || "1/sqrt(28) link kept at 0.2".into())?;
    let kept = at(0.18);
    ensure(
        kept.len() == 1 && (kept[0].strength - weak).abs() < 1e-15,
        || format!("{kept:?}"),
    )?;

    let mut rng = StdRng::seed_from_u64(5);
    for trial in 0..1000 {
        let pick = |rng: &mut StdRng| -> BTreeSet<u32> {
            let k = rng.gen_range(1..40);
            (0..k).map(|_| rng.gen_range(0..60)).collect()
        };
        let (pa, pb) = (pick(&mut rng), pick(&mut rng));
        let c = pa.intersection(&pb).count();
        let oracle = c as f64 / ((pa.len() * pb.len()) as f64).sqrt();
        let forward = [stat("X", pa.iter().copied()), stat("Y", pb.iter().copied())];
        let backward = [stat("X", pb.iter().copied()), stat("Y", pa.iter().copied())];
        let params = GraphParams::new(1, 1e-9);
        let (g1, g2) = (
            build_graph(&forward, &params).unwrap(),
            build_graph(&backward, &params).unwrap(),
        );
        if c == 0 {
            ensure(g1.edges.is_empty() && g2.edges.is_empty(), || {
                format!("trial {trial}: phantom link")
            })?;
            continue;
        }
        let (s1, s2) = (g1.edges[0].strength, g2.edges[0].strength);
        ensure(s1 == s2, || format!("trial {trial}: asymmetric {s1} {s2}"))?;
        ensure(s1 > 0.0 && s1 <= 1.0, || {
            format!("trial {trial}: out of bounds {s1}")
        })?;
        ensure((s1 - oracle).abs() <= 1e-12, || {
            format!("trial {trial}: {s1} vs {oracle}")
        })?;
    }
    Ok(format!(
        "cos(2,4,4)=0.5; 1/sqrt(28)={weak:.4} dropped at 0.2; 1000 random pairs symmetric in (0,1]"
    ))
}

/// Independent re-execution of the joining procedure: edges picked by
/// repeated maximum search, cluster membership as a relabelled array.
fn oracle_clusters(graph: &CowordGraph, min: usize, max: usize) -> Vec<Vec<String>> {
    let terms: Vec<&str> = graph.vertices.iter().map(|v| v.term.as_str()).collect();
    let pos = |t: &str| terms.iter().position(|x| *x == t).unwrap();
    let mut label: Vec<Option<usize>> = vec![None; terms.len()];
    let mut next = 0usize;
    let size = |label: &[Option<usize>], l: usize| label.iter().filter(|x| **x == Some(l)).count();

    let mut remaining: Vec<&Edge> = graph.edges.iter().collect();
    while !remaining.is_empty() {
        let mut best = 0;
        for i in 1..remaining.len() {
            let (e, b) = (remaining[i], remaining[best]);
            let better = e.strength > b.strength
                || (e.strength == b.strength
                    && (e.a.as_str(), e.b.as_str()) < (b.a.as_str(), b.b.as_str()));
            if better {
                best = i;
            }
        }
        let e = remaining.remove(best);
        let (i, j) = (pos(&e.a), pos(&e.b));
        match (label[i], label[j]) {
            (None, None) => {
                label[i] = Some(next);
                label[j] = Some(next);
                next += 1;
            }
            (Some(l), None) => {
                if size(&label, l) < max {
                    label[j] = Some(l);
                }
            }
            (None, Some(l)) => {
                if size(&label, l) < max {
                    label[i] = Some(l);
                }
            }
            (Some(l1), Some(l2)) if l1 != l2 && size(&label, l1) + size(&label, l2) <= max => {
                let (keep, gone) = (l1.min(l2), l1.max(l2));
                for x in label.iter_mut() {
                    if *x == Some(gone) {
                        *x = Some(keep);
                    }
                }
            }
            _ => {}
        }
    }
    (0..next)
        .map(|l| {
            let mut members: Vec<String> = (0..terms.len())
                .filter(|&v| label[v] == Some(l))
                .map(|v| terms[v].to_string())
                .collect();
            members.sort();
            members
        })
        .filter(|m| m.len() >= min)
        .collect()
}

fn random_graph(rng: &mut StdRng) -> CowordGraph {
    let n = rng.gen_range(0..=20usize);
    let vertices: Vec<KeywordStat> = (0..n)
        .map(|i| stat(&format!("T{i:02}"), 0..rng.gen_range(4..30)))
        .collect();
    let density = rng.gen_range(0.1..0.9);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                // Coarse strengths so that ties are common.
                let strength = rng.gen_range(2..=16) as f64 / 16.0;
                edges.push(Edge {
                    a: vertices[i].term.clone(),
                    b: vertices[j].term.clone(),
                    cooccurrence: 1,
                    strength,
                });
            }
        }
    }
    CowordGraph { vertices, edges }
}

fn clustering_oracle() -> Outcome {
    let mut rng = StdRng::seed_from_u64(6);
    let params = ClusterParams::default();
    let mut total = 0;
    for trial in 0..50 {
        let graph = random_graph(&mut rng);
        let got = cluster(&graph, &params);
        let members: Vec<Vec<String>> = got
            .iter()
            .map(|c| c.term_names().map(String::from).collect())
            .collect();
        let expected = oracle_clusters(&graph, 3, 10);
        ensure(members == expected, || {
            format!("trial {trial}: {members:?} != {expected:?}")
        })?;
        let mut seen = BTreeSet::new();
        for m in &members {
            ensure((3..=10).contains(&m.len()), || {
                format!("trial {trial}: size {}", m.len())
            })?;
            for t in m {
                ensure(seen.insert(t.clone()), || {
                    format!("trial {trial}: {t} in two clusters")
                })?;
            }
        }
        let again = cluster(&graph, &params);
        ensure(format!("{got:?}") == format!("{again:?}"), || {
            format!("trial {trial}: rerun differs")
        })?;
        total += got.len();
    }
    Ok(format!("50 random graphs (<=20 terms, {total} clusters) match the brute-force oracle; disjoint, sizes 3..10, reruns identical"))
}

fn random_value(rng: &mut StdRng) -> String {
    const ALPHABET: &[char] = &[
        'a', 'b', 'Z', 'x', '0', '7', ' ', ',', ';', '.', '-', '[', ']', '&', '(', ')', 'é', 'ß',
        '中', '\t',
    ];
    let len = rng.gen_range(0..30);
    (0..len).map(|_| *ALPHABET.choose(rng).unwrap()).collect()
}

fn random_record(rng: &mut StdRng, i: usize) -> Record {
    let tag = |t: &str| FieldTag::new(t).unwrap();
    let lines = |rng: &mut StdRng, lo: usize, hi: usize| -> Vec<String> {
        (0..rng.gen_range(lo..=hi))
            .map(|_| random_value(rng))
            .collect()
    };
    let mut fields = vec![
        (tag("PT"), vec!["J".to_string()]),
        (tag("AU"), lines(rng, 1, 5)),
        (tag("TI"), lines(rng, 1, 2)),
        (tag("SO"), lines(rng, 1, 1)),
        (tag("DE"), lines(rng, 2, 4)),
        (tag("C1"), lines(rng, 2, 4)),
    ];
    if rng.gen_bool(0.5) {
        fields.push((tag("ID"), lines(rng, 1, 3)));
    }
    if rng.gen_bool(0.3) {
        fields.push((tag("Z9"), lines(rng, 1, 1)));
    }
    fields.push((tag("TC"), vec![rng.gen_range(0..500).to_string()]));
    fields.push((tag("PY"), vec![rng.gen_range(1990..2020).to_string()]));
    fields.push((tag("UT"), vec![format!("WOS:{i:015}")]));
    Record::from_fields(fields).unwrap()
}

fn parser_round_trip() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    let records: Vec<Record> = (0..200).map(|i| random_record(&mut rng, i)).collect();
    let text = serialize_records(&records);
    let parsed = parse_str(&text).map_err(|e| e.to_string())?;
    ensure(parsed == records, || "LF round trip differs".into())?;
    let crlf = text.replace('\n', "\r\n");
    let parsed = parse_str(&crlf).map_err(|e| e.to_string())?;
    ensure(parsed == records, || "CRLF round trip differs".into())?;
    ensure(serialize_records(&parsed) == text, || {
        "reserialization differs".into()
    })?;
    let multi = records
        .iter()
        .filter(|r| {
            r.get(FieldTag::DE).unwrap().len() > 1 && r.get(FieldTag::C1).unwrap().len() > 1
        })
        .count();
    Ok(format!(
        "200 records ({multi} with multi-line DE and C1) identical after LF and CRLF round trips"
    ))
}

const ADDRESSES: [&str; 8] = [
    "[Doe, J] United Nations Univ, MERIT, 6211 TC Maastricht, Netherlands.",
    "United Nations Univ, Inst Adv Study Sustainabil, Tokyo 1508925, Japan.",
    "Univ Tokyo, Grad Sch, Kashiwa, Chiba 2778563, Japan.",
    "Harvard Univ, Kennedy Sch, Cambridge, MA 02138 USA.",
    "Univ Oxford, Dept Int Dev, Oxford OX1 3TB, England.",
    "Tsinghua Univ, Sch Publ Policy, Beijing 100084, Peoples R China.",
    "Univ Ghana, Legon, Ghana.",
    "no country here",
];

fn cooperation_partition() -> Outcome {
    let table = CountryTable::default();
    let mut rng = StdRng::seed_from_u64(8);
    let mut worst = 0.0f64;
    for trial in 0..100 {
        let papers: Vec<Paper> = (0..rng.gen_range(1..200))
            .map(|i| Paper {
                uid: format!("P{i}"),
                doc_types: BTreeSet::from([DocType::Article]),
                journal: "J".into(),
                year: Some(2010),
                authors: (0..rng.gen_range(0..6)).map(|a| format!("A{a}")).collect(),
                addresses: (0..rng.gen_range(0..5))
                    .map(|_| Address::parse(ADDRESSES.choose(&mut rng).unwrap(), &table))
                    .collect(),
                author_keywords: vec![],
                keywords_plus: vec![],
                categories: vec![],
                citation_count: rng.gen_range(0..50),
            })
            .collect();
        let rows = coop_summary(&papers);
        let count: usize = rows.iter().map(|r| r.count).sum();
        ensure(count == papers.len(), || {
            format!("trial {trial}: {count} != {}", papers.len())
        })?;
        let pct: f64 = rows.iter().map(|r| to_f64(r.percent)).sum();
        ensure((pct - 100.0).abs() <= 0.1, || {
            format!("trial {trial}: percents sum to {pct}")
        })?;
        worst = worst.max((pct - 100.0).abs());
        for p in &papers {
            let class = classify(p);
            for _ in 0..5 {
                let mut shuffled = p.clone();
                shuffled.addresses.shuffle(&mut rng);
                ensure(classify(&shuffled) == class, || {
                    format!("trial {trial}: {} changed class", p.uid)
                })?;
            }
        }
    }
    Ok(format!("100 random corpora partition exactly (max percent deviation {worst:.1e}); shuffled addresses keep class"))
}

fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn end_to_end_determinism() -> Outcome {
    let base = RunConfig::from_file(&fixture_dir().join("run.conf")).map_err(|e| e.to_string())?;
    let mut digests = Vec::new();
    let mut dirs = Vec::new();
    for _ in 0..2 {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let config = RunConfig {
            output_dir: dir.path().to_path_buf(),
            ..base.clone()
        };
        let manifest = run_pipeline(&config).map_err(|e| e.to_string())?;
        for name in OUTPUT_FILES {
            ensure(dir.path().join(name).is_file(), || {
                format!("{name} missing")
            })?;
        }
        let problems = manifest.verify(dir.path());
        ensure(problems.is_empty(), || {
            format!("manifest mismatch: {problems:?}")
        })?;
        let manifest_bytes =
            std::fs::read(dir.path().join("manifest.json")).map_err(|e| e.to_string())?;
        let mut all: BTreeMap<String, Vec<u8>> = BTreeMap::new();
        for entry in std::fs::read_dir(dir.path()).map_err(|e| e.to_string())? {
            let entry = entry.map_err(|e| e.to_string())?;
            all.insert(
                entry.file_name().to_string_lossy().into_owned(),
                std::fs::read(entry.path()).map_err(|e| e.to_string())?,
            );
        }
        digests.push((manifest.outputs.clone(), manifest_bytes, all));
        dirs.push(dir);
    }
    ensure(digests[0].0 == digests[1].0, || {
        "output digests differ between runs".into()
    })?;
    ensure(digests[0].1 == digests[1].1, || {
        "manifest.json differs between runs".into()
    })?;
    ensure(digests[0].2 == digests[1].2, || {
        "output directories differ".into()
    })?;
    Ok(format!(
        "two runs on the fixture corpus: {} files, identical digests and bytes",
        digests[0].2.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("pri-formula", pri_formula),
        ("pri-baseline", baseline_fixture),
        ("pri-range-table", range_table_oracle),
        ("shannon", shannon_fixtures),
        ("cosine", cosine_fixtures),
        ("clustering-oracle", clustering_oracle),
        ("parser-round-trip", parser_round_trip),
        ("cooperation-partition", cooperation_partition),
        ("end-to-end-determinism", end_to_end_determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
