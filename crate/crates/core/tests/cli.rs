use std::process::{Command, Output};

fn g2gt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_g2gt")).args(args).env_remove("G2GT_OUT_DIR").output().expect("binary runs")
}

fn text(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn rep_build_standard_with_gt_basis() {
    let o = g2gt(&["rep", "build", "--alpha", "1", "--beta", "0", "--gt", "--casimirs", "--matrices", "H1,E12,D-4_-3"]);
    assert_eq!(o.status.code(), Some(0), "{}", text(&o));
    let s = text(&o);
    assert_eq!(s.matches("\ngt ").count(), 7);
    assert!(s.contains("sl3_blocks pass"));
    assert!(s.contains("matrix D-4_-3"));
    assert!(s.ends_with("status pass\n"));
}

#[test]
fn invalid_flags_exit_2() {
    assert_eq!(g2gt(&["rep", "build", "--alpha", "-1", "--beta", "0"]).status.code(), Some(2));
    assert_eq!(g2gt(&["rep", "build", "--alpha", "1"]).status.code(), Some(2));
    assert_eq!(g2gt(&["--jobs", "0", "algebra", "check"]).status.code(), Some(2));
}

#[test]
fn relations_certify_passes() {
    let o = g2gt(&["relations", "certify", "--samples", "20", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", text(&o));
    assert!(text(&o).contains("control_detects pass"));
}

#[test]
fn algebra_check_and_lattice_emit() {
    let o = g2gt(&["algebra", "check"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(text(&o).contains("[basis] 14"));
    let o = g2gt(&["lattice", "emit", "--flavor", "g2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(text(&o).contains("rank: 248"));
}

#[test]
fn series_build_from_file_and_out_dir() {
    let dir = std::env::temp_dir().join(format!("g2gt-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let gamma = dir.join("gamma.txt");
    std::fs::write(&gamma, "{[-3]:1, [-4,-2]:1}\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_g2gt"))
        .args(["series", "build", "--gamma", gamma.to_str().unwrap(), "--flavor", "gl8", "--system", "gamma"])
        .env("G2GT_OUT_DIR", &dir)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", text(&o));
    let report = std::fs::read_to_string(dir.join("series-build.txt")).unwrap();
    assert!(report.contains("solves_system pass"));
    assert!(report.contains("coeff: "));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn corrupted_omega_fails_verification() {
    let o = g2gt(&["verify", "all", "--inject-fault", "omega"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(text(&o).contains("criterion  2 FAIL relation certification"));
}
