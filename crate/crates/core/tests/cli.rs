use mader::cli::{run, EXIT_OK, EXIT_ORACLE_CAP, EXIT_PARSE};
use mader::instance::{validate_packing, Instance, Packing};
use std::path::Path;
use std::process::Command;

fn call(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut full = vec!["mader"];
    full.extend_from_slice(args);
    let code = run(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const PATH_INSTANCE: &str = "3 2 2\n1\n3\n1 2\n2 3\n";

#[test]
fn solve_prints_valid_packing() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "p.txt", PATH_INSTANCE);
    let (code, out, err) = call(&["solve", &f]);
    assert_eq!(code, EXIT_OK, "{err}");
    let inst = Instance::parse(PATH_INSTANCE).unwrap();
    let packing = Packing::from_text(&out).unwrap();
    assert_eq!(packing.len(), 1);
    validate_packing(&inst, &packing).unwrap();
    assert!(err.starts_with("p=1 q=3 "), "{err}");
    let (_, _, quiet_err) = call(&["solve", "--quiet", &f]);
    assert!(quiet_err.is_empty());
}

#[test]
fn stats_report_field_size() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "p.txt", PATH_INSTANCE);
    let (code, out, _) = call(&["stats", &f]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines.contains(&"q=3"));
    assert!(lines.contains(&"packing_size=1"));
    assert!(lines.contains(&"proven=true"));
}

#[test]
fn malformed_input_exits_with_parse_code() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad.txt", "3 2 2\n1\n3\n1 2\n2 9\n");
    let (code, _, err) = call(&["solve", &f]);
    assert_eq!(code, EXIT_PARSE);
    assert!(err.contains("line 5"), "{err}");
    let (code, _, _) = call(&["solve", dir.path().join("missing.txt").to_str().unwrap()]);
    assert_eq!(code, EXIT_PARSE);
    let (code, _, _) = call(&["frobnicate"]);
    assert_eq!(code, EXIT_PARSE);
}

#[test]
fn oracle_respects_cap() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "p.txt", PATH_INSTANCE);
    assert_eq!(call(&["oracle", &f]), (EXIT_OK, "1\n".to_string(), String::new()));
    let (code, _, err) = call(&["oracle", "--cap", "2", &f]);
    assert_eq!(code, EXIT_ORACLE_CAP);
    assert!(err.contains("cap"), "{err}");
}

#[test]
fn generated_instance_solves_to_oracle_value() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("g.txt");
    let f = f.to_str().unwrap();
    assert_eq!(call(&["gen", "9", "14", "6", "3", "7", "-o", f]).0, EXIT_OK);
    let (_, printed, _) = call(&["gen", "9", "14", "6", "3", "7"]);
    assert_eq!(printed, std::fs::read_to_string(f).unwrap());
    let (code, out, _) = call(&["solve", "--verify", f]);
    assert_eq!(code, EXIT_OK);
    let (_, want, _) = call(&["oracle", f]);
    assert_eq!(Packing::from_text(&out).unwrap().len().to_string(), want.trim());
    let (code, _, _) = call(&["gen", "3", "1", "2", "2", "0"]);
    assert_eq!(code, EXIT_PARSE);
}

#[test]
fn seed_dump_writes_base_and_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "p.txt", PATH_INSTANCE);
    let dump = dir.path().join("dump");
    let (code, _, _) = call(&["solve", "--seed-dump", dump.to_str().unwrap(), &f]);
    assert_eq!(code, EXIT_OK);
    let base = std::fs::read_to_string(dump.join("c0_it0_base.txt")).unwrap();
    assert!(base.starts_with("B: "), "{base}");
    assert!(dump.join("c0_it0_dep.csv").exists());
}

#[test]
fn binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "p.txt", PATH_INSTANCE);
    let bad = write(dir.path(), "bad.txt", "not an instance\n");
    let exe = env!("CARGO_BIN_EXE_mader");
    let status = |args: &[&str]| Command::new(exe).args(args).output().unwrap().status.code();
    assert_eq!(status(&["solve", &good]), Some(EXIT_OK));
    assert_eq!(status(&["solve", &bad]), Some(EXIT_PARSE));
    assert_eq!(status(&["oracle", "--cap", "1", &good]), Some(EXIT_ORACLE_CAP));
}
