//! One test per acceptance criterion. Each runs the same check as `g2gt verify all`
//! and fails with the criterion's detail lines.

use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use g2gt::verify::{self, Criterion, VerifyConfig, Workspace};

fn workspace() -> &'static Workspace {
    static WS: OnceLock<Workspace> = OnceLock::new();
    WS.get_or_init(|| Workspace::new().expect("g2 context and the four builds assemble"))
}

fn judge(c: Criterion, started: Instant, limit: Option<Duration>) {
    let elapsed = started.elapsed();
    let report = verify::render(std::slice::from_ref(&c));
    println!("{report}elapsed {elapsed:.2?}");
    assert!(c.passed, "criterion {} failed:\n{report}", c.id);
    if let Some(limit) = limit {
        assert!(elapsed < limit, "criterion {} took {elapsed:.2?}, limit {limit:?}", c.id);
    }
}

#[test]
fn criterion_01_algebra_construction() {
    let t = Instant::now();
    judge(verify::criterion_1(), t, Some(Duration::from_secs(10)));
}

#[test]
fn criterion_02_relation_certification() {
    let t = Instant::now();
    let ctx = g2gt::representation::G2Context::new().unwrap();
    judge(verify::criterion_2(&ctx, &VerifyConfig::default()), t, Some(Duration::from_secs(60)));
}

#[test]
fn criterion_03_solution_property() {
    let t = Instant::now();
    judge(verify::criterion_3(workspace()), t, Some(Duration::from_secs(600)));
}

#[test]
fn criterion_04_dimension_identities() {
    let t = Instant::now();
    judge(verify::criterion_4(workspace()), t, None);
}

#[test]
fn criterion_05_highest_vectors() {
    let t = Instant::now();
    judge(verify::criterion_5(workspace()), t, None);
}

#[test]
fn criterion_06_invariance_and_adjointness() {
    let t = Instant::now();
    judge(verify::criterion_6(workspace()), t, None);
}

#[test]
fn criterion_07_gelfand_tsetlin_basis() {
    let t = Instant::now();
    judge(verify::criterion_7(workspace()), t, Some(Duration::from_secs(600)));
}

#[test]
fn criterion_08_c6_fast_path() {
    let t = Instant::now();
    judge(verify::criterion_8(workspace()), t, Some(Duration::from_secs(600)));
}

#[test]
fn criterion_09_series_identities() {
    let t = Instant::now();
    judge(verify::criterion_9(workspace(), VerifyConfig::default().seed), t, None);
}

#[test]
fn criterion_10_determinism() {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_g2gt"))
            .args(["verify", "all"])
            .env_remove("G2GT_OUT_DIR")
            .output()
            .expect("binary runs")
    };
    let (a, b) = (run(), run());
    assert!(!a.stdout.is_empty(), "empty report");
    assert_eq!(a.status.code(), b.status.code());
    assert!(a.stdout == b.stdout, "reports differ: {} vs {} bytes", a.stdout.len(), b.stdout.len());
    println!("criterion 10 PASS determinism: {} identical bytes", a.stdout.len());
}
