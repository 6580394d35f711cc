use num_bigint::BigInt;
use proptest::prelude::*;
use serde_json::{json, Value};

use qcmod::criterion::{evaluate, RankInput, Verdict};
use qcmod::decomposition::{jacobian_factors, Decomposition, DecompositionSource, IsogenyFactor};
use qcmod::io::{
    decomposition_to_json, emit_report, emit_scan, parse_decomposition_file, parse_rank_source,
    report_to_json, scan, DecompositionCache, Format, ScanOptions,
};
use qcmod::modsym::{genus_formula, ModularSymbolSpace};
use qcmod::poly::{FieldClass, IntPolynomial};
use qcmod::Error;

/// `(degree, class, minimal polynomial)` combinations that validate.
fn templates() -> Vec<(usize, FieldClass, Option<IntPolynomial>)> {
    let real = FieldClass::TotallyReal;
    let cm = |d: usize| FieldClass::Cm { real_subfield_degree: d / 2 };
    let huge = BigInt::from(10).pow(30);
    vec![
        (1, real, None),
        (1, real, Some(IntPolynomial::from_i64(&[3, 1]))),
        (1, real, Some(IntPolynomial::new(vec![-huge, BigInt::from(1)]))),
        (2, real, Some(IntPolynomial::from_i64(&[-1, 1, 1]))),
        (3, real, Some(IntPolynomial::from_i64(&[1, -3, 0, 1]))),
        (5, real, None),
        (2, cm(2), Some(IntPolynomial::from_i64(&[1, 0, 1]))),
        (4, cm(4), Some(IntPolynomial::from_i64(&[1, 0, 0, 0, 1]))),
        (6, cm(6), None),
    ]
}

fn decomposition() -> impl Strategy<Value = Decomposition> {
    let factor = (0..templates().len(), 1usize..=3);
    (
        prop::collection::vec(factor, 1..5),
        prop_oneof![
            (1u64..500).prop_map(|level| DecompositionSource::Computed { level }),
            "[A-Za-z0-9()_.]{1,12}".prop_map(|label| DecompositionSource::Ingested { label }),
        ],
    )
        .prop_map(|(picks, source)| {
            let t = templates();
            let factors = picks
                .into_iter()
                .enumerate()
                .map(|(i, (k, m))| {
                    let (d, c, p) = t[k].clone();
                    IsogenyFactor::new(d, c, m, p, format!("f.{}", i + 1)).unwrap()
                })
                .collect();
            Decomposition::from_factors(source, factors).unwrap()
        })
}

fn rank() -> impl Strategy<Value = RankInput> {
    prop_oneof![
        (0u64..50).prop_map(RankInput::Exact),
        (0u64..50, 0u64..5).prop_map(|(lo, w)| RankInput::Interval { lo, hi: lo + w }),
        Just(RankInput::Unknown),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn report_json_round_trips(d in decomposition(), r in rank()) {
        let text = emit_report(&evaluate(&d, r), Format::Json);
        let (back, back_rank) = parse_decomposition_file(text.as_bytes()).unwrap();
        prop_assert_eq!(&back, &d);
        prop_assert_eq!(back_rank, r);
        let again = emit_report(&evaluate(&back, back_rank), Format::Json);
        prop_assert_eq!(again, text);
    }

    #[test]
    fn decomposition_json_round_trips(d in decomposition()) {
        let text = serde_json::to_string(&decomposition_to_json(&d)).unwrap();
        let (back, rank) = parse_decomposition_file(text.as_bytes()).unwrap();
        prop_assert_eq!(back, d);
        prop_assert_eq!(rank, RankInput::Unknown);
    }
}

#[test]
fn level_23_report() {
    let d = jacobian_factors(23).unwrap();
    let v = report_to_json(&evaluate(&d, RankInput::Exact(0)));
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["source"], json!({"kind": "computed", "level": 23}));
    assert_eq!(v["genus"], 2);
    assert_eq!(v["ns_lower_bound"], 2);
    assert_eq!(v["classical_bound"], 2);
    assert_eq!(v["quadratic_bound"], 3);
    assert_eq!(v["factors"][0]["min_poly"], json!([-1, 1, 1]));
    assert_eq!(v["factors"][0]["label"], "23.1");
    assert_eq!(v["classical_verdict"], "holds");
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(
        keys,
        [
            "schema_version",
            "source",
            "genus",
            "factors",
            "ns_lower_bound",
            "classical_bound",
            "quadratic_bound",
            "rank",
            "classical_verdict",
            "quadratic_verdict",
            "conclusion_scope",
            "sharpness_note"
        ]
    );
}

#[test]
fn text_report_has_one_line_per_verdict() {
    let d = jacobian_factors(37).unwrap();
    let text = emit_report(&evaluate(&d, RankInput::interval(1, 2).unwrap()), Format::Text);
    assert_eq!(text.lines().filter(|l| l.starts_with("classical verdict")).count(), 1);
    assert_eq!(text.lines().filter(|l| l.starts_with("quadratic verdict")).count(), 1);
    assert!(text.contains("[1, 2]"));
}

#[test]
fn ingested_copy_of_a_computed_decomposition_gives_the_same_report() {
    for n in [37u64, 67, 88] {
        let computed = jacobian_factors(n).unwrap();
        let factors: Vec<Value> = computed
            .factors()
            .iter()
            .map(|f| {
                json!({
                    "label": f.label,
                    "degree": f.degree,
                    "class": "real",
                    "multiplicity": f.multiplicity,
                    "min_poly": f.field_poly.as_ref().unwrap().coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                })
            })
            .collect();
        let file = json!({"curve_label": format!("X0({n})"), "factors": factors, "rank": {"exact": 1}});
        let (ingested, rank) = parse_decomposition_file(file.to_string().as_bytes()).unwrap();
        assert_eq!(ingested.factors(), computed.factors());
        let a = evaluate(&computed, rank);
        let b = evaluate(&ingested, rank);
        assert_eq!(a.decomposition.source().name(), b.decomposition.source().name());
        let strip = |r: &qcmod::criterion::CriterionReport| {
            let mut v = report_to_json(r);
            v.as_object_mut().unwrap().remove("source");
            v
        };
        assert_eq!(strip(&a), strip(&b), "N = {n}");
    }
}

#[test]
fn cm_file_from_the_documentation() {
    let file = br#"{"curve_label": "X1(13)", "factors": [{"degree": 2, "class": "cm", "multiplicity": 1}], "rank": {"exact": 0}}"#;
    let (d, rank) = parse_decomposition_file(file).unwrap();
    let r = evaluate(&d, rank);
    assert_eq!((r.genus, r.ns_lower_bound, r.quadratic_bound), (2, 1, 2));
    assert_eq!(r.quadratic_verdict, Verdict::Holds);
}

fn schema_path(bytes: &[u8]) -> String {
    match parse_decomposition_file(bytes) {
        Err(Error::Schema { path, .. }) => path,
        other => panic!("expected a schema error, got {other:?}"),
    }
}

#[test]
fn schema_errors_name_the_offending_field() {
    let cases: [(&[u8], &str); 9] = [
        (br#"{"factors": [{"degree": 1, "class": "real"}]}"#, "curve_label"),
        (br#"{"curve_label": "c", "factors": []}"#, "factors"),
        (br#"{"curve_label": "c", "factors": [{"degree": 3, "class": "cm"}]}"#, "factors[0].class"),
        (br#"{"curve_label": "c", "factors": [{"degree": 1, "class": "odd"}]}"#, "factors[0].class"),
        (br#"{"curve_label": "c", "factors": [{"degree": 0, "class": "real"}]}"#, "factors[0].degree"),
        (
            br#"{"curve_label": "c", "factors": [{"degree": 2, "class": "real", "min_poly": [1, 0, 1]}]}"#,
            "factors[0].min_poly",
        ),
        (
            br#"{"curve_label": "c", "factors": [{"degree": 1, "class": "real"}, {"degree": 1, "class": "real", "multiplicity": 0}]}"#,
            "factors[1].multiplicity",
        ),
        (br#"{"curve_label": "c", "genus": 4, "factors": [{"degree": 1, "class": "real"}]}"#, "genus"),
        (
            br#"{"curve_label": "c", "factors": [{"degree": 1, "class": "real"}], "rank": {"interval": {"lo": 3, "hi": 1}}}"#,
            "rank.interval",
        ),
    ];
    for (bytes, path) in cases {
        assert_eq!(schema_path(bytes), path, "{}", String::from_utf8_lossy(bytes));
    }
    assert!(matches!(parse_decomposition_file(b"{not json"), Err(Error::Json(_))));
    assert_eq!(
        schema_path(br#"{"schema_version": 2, "curve_label": "c", "factors": [{"degree": 1, "class": "real"}]}"#),
        "schema_version"
    );
}

#[test]
fn rank_source_accepts_all_rank_forms() {
    let m = parse_rank_source(br#"{"23": 0, "37": {"exact": 1}, "67": {"interval": {"lo": 0, "hi": 2}}, "88": "unknown"}"#)
        .unwrap();
    assert_eq!(m[&23], RankInput::Exact(0));
    assert_eq!(m[&37], RankInput::Exact(1));
    assert_eq!(m[&67], RankInput::Interval { lo: 0, hi: 2 });
    assert_eq!(m[&88], RankInput::Unknown);
    assert!(parse_rank_source(br#"{"0": 1}"#).is_err());
    assert!(parse_rank_source(br#"{"x": 1}"#).is_err());
}

#[test]
fn scan_rows_are_the_levels_of_genus_at_least_two() {
    let report = scan(1, 60, &ScanOptions::default()).unwrap();
    let levels: Vec<u64> = report.rows.iter().map(|r| r.level).collect();
    // Genus from the dimension of the plus space, independent of the genus formula.
    let expected: Vec<u64> = (1..=60)
        .filter(|&n| ModularSymbolSpace::build(n).unwrap().plus_subspace().dim() >= 2)
        .collect();
    assert_eq!(levels, expected);
    assert!(report.summary.violations.is_empty());
    assert!(scan(10, 9, &ScanOptions::default()).is_err());
    assert!(scan(1, 10, &ScanOptions::default()).unwrap().rows.is_empty());
}

#[test]
fn cache_is_transparent() {
    let dir = tempfile::tempdir().unwrap();
    let plain = ScanOptions::default();
    let cached = ScanOptions {
        cache: Some(DecompositionCache::new(dir.path()).unwrap()),
        ..Default::default()
    };
    let render = |o: &ScanOptions| {
        let r = scan(20, 80, o).unwrap();
        (emit_scan(&r, Format::Text), emit_scan(&r, Format::Json))
    };
    let reference = render(&plain);
    let cold = render(&cached);
    let warm = render(&cached);
    assert_eq!(cold, reference);
    assert_eq!(warm, reference);
    let cache = cached.cache.as_ref().unwrap();
    assert!(cache.path_for(67).exists());
    assert!(!cache.path_for(24).exists(), "genus 1 levels are not scanned");

    // Damaged or mismatched entries are recomputed.
    std::fs::write(cache.path_for(67), b"{ truncated").unwrap();
    std::fs::copy(cache.path_for(37), cache.path_for(43)).unwrap();
    assert_eq!(render(&cached), reference);
    assert_eq!(cache.load(67).unwrap(), jacobian_factors(67).unwrap());
    assert_eq!(cache.load(43).unwrap(), jacobian_factors(43).unwrap());
}

#[test]
fn parallel_scan_matches_serial_scan() {
    let serial = ScanOptions { jobs: 1, ..Default::default() };
    let parallel = ScanOptions { jobs: 4, ..Default::default() };
    assert_eq!(scan(30, 90, &serial).unwrap(), scan(30, 90, &parallel).unwrap());
}

#[test]
fn genus_formula_agrees_with_computed_decompositions() {
    for n in [23u64, 37, 67, 88] {
        assert_eq!(jacobian_factors(n).unwrap().genus(), genus_formula(n));
    }
}
