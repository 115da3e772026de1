use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use omcool::preset;
use omcool::table::ResultTable;

fn omcool(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_omcool"))
        .args(args)
        .env_remove("OMCOOL_JOBS")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.display().to_string()
}

fn n_type_file(dir: &Path) -> String {
    write(dir, "n_type.json", &preset::n_type().to_json())
}

#[test]
fn solve_prints_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = n_type_file(dir.path());
    let o = omcool(&["solve", "--config", &cfg]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let t = ResultTable::from_csv(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert_eq!(t.rows.len(), 1);
    let n1 = t.column("n_f_1").unwrap()[0].as_f64().unwrap();
    let n2 = t.column("n_f_2").unwrap()[0].as_f64().unwrap();
    assert!(n1 < n2 && n2 < 1.0);
    assert!(t.meta("config_hash").is_some());
}

#[test]
fn unstable_system_exits_5_after_writing_row() {
    let dir = tempfile::tempdir().unwrap();
    let mut doc = preset::n_type();
    doc.set("cavities.a.detuning", -1.0).unwrap();
    doc.set("edges.a-b1.strength", 0.3).unwrap();
    let cfg = write(dir.path(), "hot.json", &doc.to_json());
    let out = dir.path().join("hot.csv");
    let o = omcool(&["solve", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 5, "{}", String::from_utf8_lossy(&o.stderr));
    let t = ResultTable::from_csv(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(t.column("stable").unwrap()[0].as_bool(), Some(false));
}

#[test]
fn missing_field_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let text = preset::n_type()
        .to_json()
        .replace("\"thermal_occupation\": 1000.0,", "");
    let text = text.replace(",\n      \"thermal_occupation\": 1000.0", "");
    assert!(!text.contains("thermal_occupation"));
    let cfg = write(dir.path(), "bad.json", &text);
    let o = omcool(&["solve", "--config", &cfg]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("thermal_occupation"));
}

#[test]
fn semantic_error_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let mut doc = preset::n_type();
    doc.set("cavities.a.decay", -0.1).unwrap();
    let cfg = write(dir.path(), "neg.json", &doc.to_json());
    assert_eq!(code(&omcool(&["solve", "--config", &cfg])), 4);
}

#[test]
fn missing_file_exits_1_and_usage_exits_2() {
    assert_eq!(
        code(&omcool(&["solve", "--config", "/nonexistent/x.json"])),
        1
    );
    assert_eq!(code(&omcool(&["solve"])), 2);
    assert_eq!(
        code(&omcool(&["atomic", "--levels", "5", "--ratio", "0:1:3"])),
        2
    );
}

#[test]
fn sweep_rows_and_bad_paths() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = n_type_file(dir.path());
    let o = omcool(&[
        "sweep",
        "--config",
        &cfg,
        "--axis",
        "cavities.a.decay:0.05:1:4",
        "--axis",
        "mechanicals.b2.frequency:0.9:1.1:3",
        "--jobs",
        "2",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let t = ResultTable::from_csv(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert_eq!(t.rows.len(), 12);
    assert_eq!(t.columns[0], "cavities.a.decay");
    assert_eq!(t.columns[1], "mechanicals.b2.frequency");

    let o = omcool(&[
        "sweep",
        "--config",
        &cfg,
        "--axis",
        "cavities.zz.decay:0:1:3",
    ]);
    assert_eq!(code(&o), 4);
    let o = omcool(&[
        "sweep",
        "--config",
        &cfg,
        "--axis",
        "cavities.a.decay:1:0:3",
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn sweep_output_ignores_job_count() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = n_type_file(dir.path());
    let run = |jobs: &str| {
        omcool(&[
            "sweep",
            "--config",
            &cfg,
            "--axis",
            "cavities.a.detuning:0.5:1.5:9",
            "--axis",
            "cavities.a.decay:0.05:1:5",
            "--jobs",
            jobs,
        ])
        .stdout
    };
    assert_eq!(run("1"), run("6"));
}

#[test]
fn taxonomy_lists_fourteen_variants() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "net.json", &preset::network4().to_json());
    let o = omcool(&["taxonomy", "--config", &cfg]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let t = ResultTable::from_csv(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert_eq!(t.rows.len(), 14);
    let dark = t
        .column("dark")
        .unwrap()
        .iter()
        .filter(|c| c.as_bool() == Some(true))
        .count();
    assert_eq!(dark, 6);

    let o = omcool(&["taxonomy", "--config", &cfg, "--kappa", "0.05:0.5:3"]);
    assert_eq!(code(&o), 0);
    let t = ResultTable::from_csv(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert_eq!(t.rows.len(), 42);
}

#[test]
fn atomic_table() {
    let o = omcool(&["atomic", "--levels", "4", "--ratio", "0:2:3"]);
    assert_eq!(code(&o), 0);
    let t = ResultTable::from_csv(&String::from_utf8(o.stdout).unwrap()).unwrap();
    let dark: Vec<f64> = t
        .column("dark_states")
        .unwrap()
        .iter()
        .map(|c| c.as_f64().unwrap())
        .collect();
    assert_eq!(dark, vec![2.0, 0.0, 0.0]);
}

#[test]
fn preset_dump_and_run() {
    let o = omcool(&["preset", "fig3c", "--dump"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let p = omcool::Preset::from_json(&text).unwrap();
    assert_eq!(p.to_json() + "\n", text);

    let o = omcool(&["preset", "fig3c", "--run", "--points", "3", "--jobs", "2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let t = ResultTable::from_csv(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert_eq!(t.rows.len(), 9);
    assert_eq!(t.meta("preset"), Some("fig3c"));
    assert_eq!(t.meta("plot"), Some("n_f_1"));

    assert_eq!(code(&omcool(&["preset", "fig99"])), 4);
}

#[test]
fn emit_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("fig2a.csv");
    let o = omcool(&[
        "preset",
        "fig2a",
        "--run",
        "--points",
        "4",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let original = fs::read_to_string(&csv).unwrap();

    let o = omcool(&["emit", "--input", csv.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8(o.stdout).unwrap(), original);

    let svg = dir.path().join("fig2a.svg");
    let o = omcool(&[
        "emit",
        "--input",
        csv.to_str().unwrap(),
        "--format",
        "svg",
        "--out",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(svg).unwrap();
    assert!(text.starts_with("<svg") || text.starts_with("<?xml"));
    assert!(text.contains("n_f_1"));

    let junk = write(dir.path(), "junk.csv", "a,b\n1\n");
    let o = omcool(&["emit", "--input", &junk, "--format", "csv"]);
    assert_eq!(code(&o), 3);
}
