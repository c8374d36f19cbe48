//! Synthetic corpora for the benchmarks.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use scientrix_core::ingest::{serialize_records, FieldTag, Record};

/// A field-tagged export with `n` records over a small topic vocabulary.
pub fn synthetic_export(n: usize, seed: u64) -> String {
    let mut rng = StdRng::seed_from_u64(seed);
    let countries = [
        "Japan",
        "Germany",
        "Netherlands",
        "Finland",
        "Malaysia",
        "Kenya",
    ];
    let records: Vec<Record> = (0..n)
        .map(|i| {
            let topic = rng.gen_range(0..40);
            let keywords: Vec<String> = (0..rng.gen_range(3..7))
                .map(|_| format!("topic {topic} term {}", rng.gen_range(0..8)))
                .collect();
            let authors: Vec<String> = (0..rng.gen_range(1..5))
                .map(|a| format!("Author{a}, X"))
                .collect();
            let addresses: Vec<String> = (0..authors.len())
                .map(|_| {
                    let c = countries[rng.gen_range(0..countries.len())];
                    format!("United Nations Univ, Inst, City{c}, {c}.")
                })
                .collect();
            let tag = |t: &str| FieldTag::new(t).unwrap();
            Record::from_fields(vec![
                (tag("PT"), vec!["J".into()]),
                (tag("AU"), authors),
                (tag("SO"), vec![format!("JOURNAL {}", rng.gen_range(0..60))]),
                (tag("DT"), vec!["Article".into()]),
                (tag("DE"), vec![keywords.join("; ")]),
                (tag("C1"), addresses),
                (tag("TC"), vec![rng.gen_range(0..200u32).to_string()]),
                (tag("PY"), vec![rng.gen_range(1995..2016).to_string()]),
                (tag("UT"), vec![format!("WOS:{i:012}")]),
            ])
            .expect("generated record is valid")
        })
        .collect();
    serialize_records(&records)
}
