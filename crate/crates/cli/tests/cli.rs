use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use polrot_cli::{parse_scenario, presets};

fn polrot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polrot"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

const SMALL: &str = "\
medium.chi12 = 0.08i
pulse.lambda0 = 0.5
pulse.sigma_t = 100
pulse.z0 = -600
grid.t_start = 1800
grid.t_end = 3000
grid.t_step = 40
output.observables = intensities
";

#[test]
fn modes_prints_indices() {
    let o = polrot(&["modes", "--chi12", "0.0002i"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("n+ / n- = 1.0000999950 / 0.9998999950"));
}

#[test]
fn interface_reports_surviving_mode() {
    let o = polrot(&["interface", "--chi12", "1.2i"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let line = out
        .lines()
        .find(|l| l.starts_with("surviving-mode transmittance"))
        .unwrap();
    let t: f64 = line.rsplit(' ').next().unwrap().parse().unwrap();
    assert!((t - 0.2406).abs() < 1e-3);
}

#[test]
fn exit_codes() {
    assert_eq!(polrot(&["--help"]).status.code(), Some(0));
    assert_eq!(polrot(&["bogus"]).status.code(), Some(1));
    assert_eq!(polrot(&["figure", "11"]).status.code(), Some(1));
    assert_eq!(polrot(&["preset", "fig99"]).status.code(), Some(1));

    let o = polrot(&["atomic", "--omega", "1e6", "--chi12", "0.5i"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error: NotSmallChi:"));

    let o = polrot(&["intensities", "--scenario", "/nonexistent/scenario.txt"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("/nonexistent/scenario.txt"));
}

#[test]
fn scenario_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    fs::write(&path, "medium.chi12 = 0.1i\nmedium.colour = red\n").unwrap();
    let o = polrot(&["intensities", "--scenario", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(
        stderr(&o).trim(),
        "error: line 2: unknown key `medium.colour`"
    );
}

#[test]
fn printed_presets_parse_back() {
    for name in presets::NAMES {
        let o = polrot(&["preset", name]);
        assert!(o.status.success(), "{name}");
        let cfg = parse_scenario(&stdout(&o)).unwrap();
        assert_eq!(cfg, presets::preset(name).unwrap().unwrap());
    }
}

fn run_into(dir: &Path, scenario: &Path, threads: &str) -> Vec<(String, Vec<u8>)> {
    let o = polrot(&[
        "--threads",
        threads,
        "--out",
        dir.to_str().unwrap(),
        "intensities",
        "--scenario",
        scenario.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().into_string().unwrap(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

#[test]
fn output_is_byte_identical_across_runs_and_threads() {
    let tmp = tempfile::tempdir().unwrap();
    let scenario = tmp.path().join("small.txt");
    fs::write(&scenario, SMALL).unwrap();
    let a = run_into(&tmp.path().join("a"), &scenario, "1");
    let b = run_into(&tmp.path().join("b"), &scenario, "2");
    let c = run_into(&tmp.path().join("c"), &scenario, "1");
    assert_eq!(a.len(), 1);
    assert_eq!(a[0].0, "intensities.csv");
    assert_eq!(a, b);
    assert_eq!(a, c);
    let text = String::from_utf8(a[0].1.clone()).unwrap();
    assert!(text.starts_with("# polrot "));
    assert!(text.contains("# param: medium.chi12 = 0.08i"));
    assert!(text.lines().any(|l| l == "t_fs,I1,I2,I_plus,I_minus"));
}

#[test]
fn figure_writes_tables() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("fig8");
    let o = polrot(&["--out", out.to_str().unwrap(), "figure", "8"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let regions = fs::read_to_string(out.join("regions.csv")).unwrap();
    assert!(regions.contains("# preset: fig8"));
    assert_eq!(
        regions.lines().filter(|l| !l.starts_with('#')).count(),
        1 + 200 * 200
    );
    assert!(out.join("boundary_curves.csv").exists());
}
