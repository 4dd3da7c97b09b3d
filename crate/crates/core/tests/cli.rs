use std::path::Path;
use std::process::{Command, Output};

use isostitch::cli::{exit, AnalysisReport};
use isostitch::design_graph::motif_census;
use isostitch::stitcher::{generate_design, Side};
use isostitch::symmetry::WallpaperGroup;

fn isostitch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isostitch"))
        .args(args)
        .output()
        .expect("spawn isostitch")
}

fn code(args: &[&str]) -> i32 {
    isostitch(args).status.code().unwrap()
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = p(dir.path(), "x.svg");
    assert_eq!(
        code(&["render", "--word", "012", "--out", &out]),
        exit::USAGE
    );
    assert_eq!(
        code(&["render", "--word", "0", "--window", "5:1:0:3", "--out", &out]),
        exit::USAGE
    );
    assert_eq!(
        code(&["render", "--word", "0", "--koch-order", "2", "--out", &out]),
        exit::USAGE
    );
    assert_eq!(code(&["render", "--nonsense"]), exit::USAGE);
    let report = p(dir.path(), "r.json");
    assert_eq!(
        code(&["verify-koch", "--order", "0", "--report", &report]),
        exit::USAGE
    );
    assert_eq!(
        code(&["verify-koch", "--order", "5", "--report", &report]),
        exit::USAGE
    );
    assert!(!Path::new(&report).exists());
}

#[test]
fn unwritable_output_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = p(dir.path(), "missing/dir/x.svg");
    assert_eq!(code(&["render", "--word", "0", "--out", &out]), exit::IO);
}

#[test]
fn small_window_analysis_is_inconclusive() {
    let dir = tempfile::tempdir().unwrap();
    let report = p(dir.path(), "r.json");
    let o = isostitch(&[
        "analyze",
        "--word",
        "0001",
        "--window",
        "0:20:0:20",
        "--report",
        &report,
    ]);
    assert_eq!(o.status.code(), Some(exit::INCONCLUSIVE));
    let r = AnalysisReport::from_json(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let wallpaper = r.wallpaper.unwrap();
    assert_eq!(wallpaper.front.group, WallpaperGroup::Unknown);
    assert!(wallpaper.front.error.is_some());
}

#[test]
fn koch_refutation_exits_5() {
    let dir = tempfile::tempdir().unwrap();
    let report = p(dir.path(), "r.json");
    // order 2 at phases (0,0,0) has no snowflake; phase search finds one
    assert_eq!(
        code(&["verify-koch", "--order", "2", "--report", &report]),
        exit::NOT_FOUND
    );
    let r = AnalysisReport::from_json(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert!(!r.koch.unwrap().found);
    assert_eq!(
        code(&[
            "verify-koch",
            "--order",
            "2",
            "--phase-search",
            "--report",
            &report
        ]),
        exit::SUCCESS
    );
    let r = AnalysisReport::from_json(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let k = r.koch.unwrap();
    assert!(k.found);
    assert_eq!(k.matched_cycle.unwrap().len(), 48);
}

#[test]
fn report_roundtrips_and_regenerates() {
    let dir = tempfile::tempdir().unwrap();
    let report = p(dir.path(), "r.json");
    assert_eq!(
        code(&[
            "analyze",
            "--word",
            "01",
            "--phase-b",
            "-3",
            "--report",
            &report
        ]),
        exit::SUCCESS
    );
    let text = std::fs::read_to_string(&report).unwrap();
    let r = AnalysisReport::from_json(&text).unwrap();
    assert_eq!(r.to_json().unwrap(), text);
    // the pattern and window alone reproduce the analysed design
    let d = generate_design(r.window, &r.pattern).unwrap();
    assert_eq!(motif_census(&d, Side::Front), r.census.front);
    assert_eq!(motif_census(&d, Side::Back), r.census.back);
    assert!(r.invariant_results.values().all(|v| v.pass));
}

#[test]
fn hexagram_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = p(dir.path(), "r.json");
    assert_eq!(
        code(&["analyze", "--word", "0", "--report", &report]),
        exit::SUCCESS
    );
    let r = AnalysisReport::from_json(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let w = r.wallpaper.unwrap();
    assert_eq!(
        (w.front.group, w.back.group),
        (WallpaperGroup::p6mm, WallpaperGroup::p6mm)
    );
    assert!(!r.self_dual.unwrap().self_dual);
    assert_eq!(
        r.census.front.lengths().keys().copied().collect::<Vec<_>>(),
        vec![12]
    );
}

#[test]
fn calibrate_prints_accepting_conventions() {
    let o = isostitch(&["calibrate"]);
    assert_eq!(o.status.code(), Some(exit::SUCCESS));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert_eq!(
        stdout.lines().filter(|l| l.starts_with("accept")).count(),
        4
    );
}

#[test]
fn render_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (p(dir.path(), "a.svg"), p(dir.path(), "b.svg"));
    for out in [&a, &b] {
        let args = [
            "render",
            "--koch-order",
            "3",
            "--side",
            "both",
            "--highlight-koch",
            "--out",
            out.as_str(),
        ];
        assert_eq!(code(&args), exit::SUCCESS);
    }
    let svg = std::fs::read(&a).unwrap();
    assert_eq!(svg, std::fs::read(&b).unwrap());
    assert!(String::from_utf8(svg).unwrap().contains("<polygon"));
}
