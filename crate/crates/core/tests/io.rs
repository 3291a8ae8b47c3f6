use std::fs;

use gso_core::dcg::DcgConfig;
use gso_core::functions::{synthetic_raw, ReadingsTable};
use gso_core::io::{
    generate_instance, load_instance, parse_instance, read_readings_csv, report_csv_string, report_header,
    write_raw_readings, Caps, InstanceFile, OracleSpec, Parameters, ProblemKind,
};
use gso_core::KPoint;

#[test]
fn generated_instances_survive_a_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for kind in ProblemKind::ALL {
        let file = generate_instance(kind, 6, 3).unwrap();
        let path = dir.path().join(format!("{}.json", kind.as_str()));
        fs::write(&path, file.to_canonical()).unwrap();
        let loaded = load_instance(&path).unwrap();
        assert_eq!(loaded.file, file);
        assert_eq!(loaded.problem.kind(), kind);
        assert_eq!(parse_instance(&loaded.file.to_canonical()).unwrap(), file);
    }
}

#[test]
fn csv_instance_matches_direct_construction() {
    let dir = tempfile::tempdir().unwrap();
    let raw = synthetic_raw(5, 2, 40, 9).unwrap();
    let mut buf = Vec::new();
    write_raw_readings(&raw, &mut buf).unwrap();
    fs::write(dir.path().join("readings.csv"), &buf).unwrap();

    let direct = ReadingsTable::synthetic(5, 2, 40, 6, 9).unwrap();
    let from_csv = read_readings_csv(&dir.path().join("readings.csv"), 6).unwrap();
    let f = direct.entropy_oracle().unwrap();
    let g = from_csv.entropy_oracle().unwrap();
    for codes in [[1, 0, 2, 0, 1], [2, 2, 0, 1, 0], [0, 0, 0, 0, 0], [1, 1, 1, 2, 2]] {
        let p = KPoint::from_codes(2, codes.to_vec()).unwrap();
        assert!((f.value(&p) - g.value(&p)).abs() < 1e-12);
    }

    let mut file = InstanceFile::new(
        ProblemKind::Sensor,
        0,
        OracleSpec::ReadingsCsv {
            path: "readings.csv".into(),
            bins: 6,
        },
    );
    file.parameters = Parameters {
        caps: Some(vec![1, 1]),
        ..Parameters::default()
    };
    let path = dir.path().join("sensor.json");
    fs::write(&path, file.to_canonical()).unwrap();
    let loaded = load_instance(&path).unwrap();
    let solved = loaded.problem.solve(&DcgConfig::default(), &Caps::default()).unwrap();
    let es = loaded.problem.exhaustive(&Caps::default()).unwrap();
    assert!(solved.report.is_optimal());
    assert!((solved.report.value - es.value).abs() < 1e-9);
}

#[test]
fn missing_csv_names_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = InstanceFile::new(
        ProblemKind::Sensor,
        0,
        OracleSpec::ReadingsCsv {
            path: "nowhere.csv".into(),
            bins: 4,
        },
    );
    let path = dir.path().join("x.json");
    fs::write(&path, file.to_canonical()).unwrap();
    let err = load_instance(&path).unwrap_err().to_string();
    assert!(err.contains("nowhere.csv"), "{}", err);
}

#[test]
fn unknown_fields_and_versions_are_rejected() {
    let good = generate_instance(ProblemKind::SubmodMin, 4, 1).unwrap().to_canonical();
    assert!(parse_instance(&good).is_ok());
    let extra = good.replacen("\"kind\"", "\"colour\": 1, \"kind\"", 1);
    assert!(parse_instance(&extra).is_err());
    let future = good.replacen("\"schema_version\": 1", "\"schema_version\": 2", 1);
    let err = parse_instance(&future).unwrap_err().to_string();
    assert!(err.contains("schema_version"), "{}", err);
}

#[test]
fn solve_report_has_one_row_per_run() {
    let loaded = generate_instance(ProblemKind::KsubMax, 5, 2).unwrap();
    let problem = gso_core::io::build_problem(&loaded, None).unwrap();
    let solved = problem.solve(&DcgConfig::default(), &Caps::default()).unwrap();
    let row = gso_core::io::ReportRow::from_report("k", "dcg", &solved.report);
    let csv = report_csv_string(&[row], false);
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap().split(',').count(), report_header().len());
    assert!(lines.next().unwrap().starts_with("k,dcg,optimal,,"));
}

#[test]
fn synthetic_readings_are_seeded_and_k_submodular() {
    use gso_core::oracle::{verify_property, OracleRef, PropertyKind, DEFAULT_DOMAIN_CAP};
    let a = ReadingsTable::synthetic(4, 2, 50, 4, 17).unwrap();
    let b = ReadingsTable::synthetic(4, 2, 50, 4, 17).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, ReadingsTable::synthetic(4, 2, 50, 4, 18).unwrap());
    let f = a.entropy_oracle().unwrap();
    let v = verify_property(OracleRef::KSet(&f), PropertyKind::KSubmodular, DEFAULT_DOMAIN_CAP).unwrap();
    assert!(v.holds, "{:?}", v.witness);
}
