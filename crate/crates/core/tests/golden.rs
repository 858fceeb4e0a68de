use std::path::PathBuf;

use qhammer_core::{build_circuit, load_device_map, parse_label, ExperimentSpec};

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

fn check_golden(label: &str, honor_neighbor_prep: bool, file: &str) {
    let graph = load_device_map("eagle127").unwrap();
    let spec = ExperimentSpec {
        honor_neighbor_prep,
        ..ExperimentSpec::new(parse_label(label).unwrap())
    };
    let qasm = build_circuit(&spec, &graph).unwrap().emit_qasm();
    let path = golden_path(file);
    if std::env::var_os("QHAMMER_BLESS").is_some() {
        std::fs::write(&path, &qasm).unwrap();
    }
    let expected = std::fs::read_to_string(&path)
        .unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(qasm, expected, "QASM for `{label}` drifted from {file}");
}

#[test]
fn thirty_cx_at_72_with_target_prep() {
    check_golden("cx(-72-0) 30", false, "cx_c72_t1_e0_30.qasm");
}

#[test]
fn cross_at_72_with_both_preps() {
    check_golden("-cx(-72-1) 4 cross", true, "n1_cx_c72_t1_e1_4cross.qasm");
}

#[test]
fn golden_has_thirty_cx_statements() {
    let text = std::fs::read_to_string(golden_path("cx_c72_t1_e0_30.qasm")).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("cx ")).count(), 30);
    assert_eq!(
        text.lines().filter(|l| l.starts_with("measure ")).count(),
        1
    );
}
