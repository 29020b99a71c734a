use pafit::dataio::{
    bundled_isotopologues, bundled_isotopologues_csv, bundled_table1, bundled_table1_csv,
    parse_isotopologues, parse_line_list, read_line_list_file, write_isotopologues, write_line_list,
    IsotopologueSpec, LineRecord, Reading,
};
use proptest::prelude::*;

#[test]
fn bundled_tables_round_trip() {
    let isos = bundled_isotopologues();
    let records = bundled_table1();
    let again = parse_line_list(&write_line_list(&records), &isos).unwrap();
    assert_eq!(again.records, records);
    assert_eq!(parse_isotopologues(&write_isotopologues(&isos)).unwrap(), isos);
    // the bundled files are already in canonical form
    assert_eq!(write_isotopologues(&isos), bundled_isotopologues_csv());
    assert_eq!(
        parse_line_list(bundled_table1_csv(), &isos).unwrap().records,
        records
    );
}

#[test]
fn bundled_table_shape() {
    let records = bundled_table1();
    assert_eq!(records.len(), 20);
    assert_eq!(records.iter().filter(|r| r.observed).count(), 19);
    let gap = records.iter().find(|r| !r.observed).unwrap();
    assert_eq!((gap.isotopologue.as_str(), gap.dv), ("176Yb87Rb", Some(-12)));
    let bounded = records
        .iter()
        .filter(|r| matches!(r.delta_r1_mcm1, Reading::UpperBound(_)))
        .count();
    assert_eq!(bounded, 4);
}

#[test]
fn file_errors_name_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing.csv");
    let err = read_line_list_file(&path, &bundled_isotopologues()).unwrap_err();
    assert!(err.to_string().contains("missing.csv"), "{err}");
}

fn reading() -> impl Strategy<Value = Reading> {
    prop_oneof![
        (0u32..=1000).prop_map(|v| Reading::Value(f64::from(v) / 1000.0)),
        (1u32..=1000).prop_map(|v| Reading::UpperBound(f64::from(v) / 1000.0)),
        Just(Reading::Absent),
    ]
}

fn series() -> impl Strategy<Value = Vec<LineRecord>> {
    prop::collection::vec(
        (
            0.4f64..30.0,
            reading(),
            prop::option::of(0.1f64..10.0),
            reading(),
            any::<bool>(),
        ),
        1..12,
    )
    .prop_map(|rows| {
        let mut rows = rows;
        rows.sort_by(|a, b| a.0.total_cmp(&b.0));
        rows.dedup_by(|a, b| a.0 == b.0);
        rows.into_iter()
            .enumerate()
            .map(|(k, (binding, depth, b_rot, split, observed))| LineRecord {
                isotopologue: "176Yb87Rb".into(),
                delta_pa: Some(-binding),
                dv: Some(-(k as i32) - 1),
                f_prime: 2,
                rel_depth: depth,
                b_rot_mcm1: b_rot,
                delta_r1_mcm1: split,
                observed,
            })
            .collect()
    })
}

fn isotopologue() -> impl Strategy<Value = IsotopologueSpec> {
    ("[A-Za-z0-9]{1,12}", 1.0f64..300.0, 1.0f64..300.0)
        .prop_map(|(id, a, b)| IsotopologueSpec::new(id, a, b).unwrap())
}

proptest! {
    #[test]
    fn line_lists_round_trip(records in series()) {
        let parsed = parse_line_list(&write_line_list(&records), &bundled_isotopologues()).unwrap();
        prop_assert_eq!(parsed.records, records);
    }

    #[test]
    fn isotopologue_tables_round_trip(isos in prop::collection::vec(isotopologue(), 0..5)) {
        prop_assert_eq!(parse_isotopologues(&write_isotopologues(&isos)).unwrap(), isos);
    }
}
