use slitwave::model::SlitKind;
use slitwave_cli::{parse_config, Output};

const BASE: &str = "\
scenario.name = small
aperture.kind = single, double
aperture.delta = 1e-6
aperture.Delta_plus_delta = 8e-6
beam.k = 1.2566370614359172e11
beam.m = 6.64632e-27
snapshots.y = 0.01
";

fn with(extra: &str) -> String {
    format!("{BASE}{extra}")
}

#[test]
fn consistent_gap_is_accepted() {
    let cfg = parse_config(&with("aperture.Delta = 7e-6\n")).unwrap();
    assert!((cfg.gap - 7e-6).abs() < 1e-18);
    assert_eq!(cfg.kinds, vec![SlitKind::SingleLower, SlitKind::Double]);
    assert_eq!(cfg.snapshots[0].label, "y0.01");
    assert_eq!(cfg.resolved()["grid.x.n"], "8192");
}

#[test]
fn inconsistent_gap_is_rejected_with_its_line() {
    let err = parse_config(&with("aperture.Delta = 6e-6\n")).unwrap_err();
    assert_eq!(err.key, "aperture.Delta_plus_delta");
    assert_eq!(err.line, Some(4));
    assert!(err.to_string().starts_with("line 4: "), "{err}");
}

#[test]
fn gap_from_either_key() {
    let only_sum = parse_config(BASE).unwrap();
    let only_gap = parse_config(&BASE.replace("aperture.Delta_plus_delta = 8e-6", "aperture.Delta = 7e-6")).unwrap();
    assert!((only_sum.gap - only_gap.gap).abs() < 1e-18);
}

#[test]
fn unknown_and_duplicate_keys() {
    let err = parse_config(&with("beam.speed = 3\n")).unwrap_err();
    assert_eq!((err.line, err.key.as_str()), (Some(8), "beam.speed"));
    let err = parse_config(&with("beam.m = 1e-27\n")).unwrap_err();
    assert_eq!(err.line, Some(8));
    assert!(err.message.contains("line 6"), "{err}");
}

#[test]
fn missing_required_key() {
    let err = parse_config(&BASE.replace("beam.m = 6.64632e-27\n", "")).unwrap_err();
    assert_eq!(err.key, "beam.m");
    assert_eq!(err.line, None);
    let err = parse_config(&BASE.replace("snapshots.y = 0.01\n", "")).unwrap_err();
    assert!(err.message.contains("snapshot"));
}

#[test]
fn bad_values() {
    for (extra, key) in [
        ("grid.x.n = many\n", "grid.x.n"),
        ("outputs = intensity, hologram\n", "outputs"),
        ("output.precision = 0\n", "output.precision"),
        ("output.delimiter = pipe\n", "output.delimiter"),
        ("snapshots.t = -1e-5\n", "snapshots.t"),
    ] {
        let err = parse_config(&with(extra)).unwrap_err();
        assert_eq!(err.key, key, "{extra}");
        assert_eq!(err.line, Some(8));
    }
    let err = parse_config(&BASE.replace("snapshots.y = 0.01", "snapshots.y = 0")).unwrap_err();
    assert_eq!(err.key, "snapshots.y");
}

#[test]
fn coarse_momentum_grid_fails_at_load() {
    let err = parse_config(&with("grid.k.n = 101\n")).unwrap_err();
    assert_eq!(err.key, "grid.k.n");
    assert!(err.message.contains("2*pi"), "{err}");
    let err = parse_config(&with("grid.k.hi = 4e8\ngrid.k.lo = -4e8\ngrid.k.n = 80001\n")).unwrap_err();
    assert!(err.message.contains("pi/dx"), "{err}");
}

#[test]
fn map_grids_checked_only_when_needed() {
    let coarse = "map.k.n = 33\n";
    assert!(parse_config(&with(coarse)).is_ok());
    let err = parse_config(&with(&format!("{coarse}outputs = wigner\n"))).unwrap_err();
    assert_eq!(err.key, "map.k.n");
    let cfg = parse_config(&with(coarse)).unwrap();
    assert!(cfg.clone().with_outputs([Output::Intensity].into()).is_ok());
    assert!(cfg.with_outputs([Output::Reports].into()).is_err());
}

#[test]
fn comments_and_blank_lines() {
    let text = format!("# heading\n\n{BASE}# beam.m = 1\noutputs = intensity # trailing\n");
    let cfg = parse_config(&text).unwrap();
    assert!((cfg.beam.mass() - 6.64632e-27).abs() < 1e-40);
    assert!(cfg.wants(Output::Intensity));
}

#[test]
fn shipped_scenarios_validate() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios");
    let mut count = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "cfg") {
            let text = std::fs::read_to_string(&path).unwrap();
            let cfg = parse_config(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            assert!(!cfg.outputs.is_empty());
            count += 1;
        }
    }
    assert_eq!(count, 7);
}
