use proptest::collection::{btree_set, vec};
use proptest::prelude::*;

use scientrix_core::ingest::{parse_str, serialize_records, FieldTag, IngestError, Record};

fn tag() -> impl Strategy<Value = FieldTag> {
    "[A-Z][A-Z0-9]"
        .prop_filter("reserved", |t| {
            !["ER", "EF", "FN", "VR"].contains(&t.as_str())
        })
        .prop_map(|t| FieldTag::new(&t).unwrap())
}

fn record() -> impl Strategy<Value = Record> {
    btree_set(tag(), 1..8)
        .prop_flat_map(|tags| {
            let n = tags.len();
            (Just(tags), vec(vec("[^\r\n]{0,24}", 1..4), n))
        })
        .prop_map(|(tags, values)| {
            Record::from_fields(tags.into_iter().zip(values).collect()).unwrap()
        })
}

proptest! {
    #[test]
    fn serialize_then_parse_is_identity(records in vec(record(), 0..12)) {
        let text = serialize_records(&records);
        prop_assert_eq!(parse_str(&text).unwrap(), records.clone());
        let crlf = text.replace('\n', "\r\n");
        prop_assert_eq!(parse_str(&crlf).unwrap(), records);
    }

    #[test]
    fn serialization_is_a_fixed_point(records in vec(record(), 0..6)) {
        let once = serialize_records(&records);
        let twice = serialize_records(&parse_str(&once).unwrap());
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn truncation_never_panics(records in vec(record(), 1..4), cut in 0usize..400) {
        let text = serialize_records(&records);
        let mut end = cut.min(text.len());
        while !text.is_char_boundary(end) {
            end -= 1;
        }
        // Either a clean prefix of records or a located error.
        match parse_str(&text[..end]) {
            Ok(parsed) => prop_assert!(parsed.len() <= records.len()),
            Err(e) => prop_assert!(e.line().is_some()),
        }
    }
}

#[test]
fn header_bom_and_mixed_line_endings() {
    let text = "\u{feff}FN Export\r\nVR 1.0\nPT J\r\nDE a; b;\n   c\r\nUT WOS:1\nER\r\n\nEF\n";
    let records = parse_str(text).unwrap();
    assert_eq!(records.len(), 1);
    let de = FieldTag::new("DE").unwrap();
    assert_eq!(records[0].get(de).unwrap(), ["a; b;", "c"]);
    assert_eq!(records[0].joined(de).unwrap(), "a; b; c");
}

#[test]
fn errors_carry_line_numbers() {
    let cases: [(&str, usize); 4] = [
        ("PT J\n\tbad\nER\n", 2),
        ("PT J\nAU a\nAU b\nER\n", 3),
        ("PT J\nAU a\n", 1),
        ("ER\n", 1),
    ];
    for (text, line) in cases {
        let err = parse_str(text).unwrap_err();
        assert_eq!(err.line(), Some(line), "{text:?}: {err}");
    }
    let bad_utf8 = b"PT J\nAU \xff\nER\n";
    assert!(matches!(
        scientrix_core::ingest::parse_export(&bad_utf8[..]),
        Err(IngestError::InvalidUtf8 { line: 2 })
    ));
}
