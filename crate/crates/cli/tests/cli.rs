use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gaussmap::io::{read_csv, read_model};

fn gaussmap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gaussmap"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

struct Run {
    _dir: tempfile::TempDir,
    root: PathBuf,
}

impl Run {
    fn new() -> Self {
        let dir = tempfile::tempdir().unwrap();
        let root = dir.path().to_path_buf();
        Self { _dir: dir, root }
    }

    fn file(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }
}

fn generate_and_fit(run: &Run) {
    let data = run.file("data.csv");
    let out = gaussmap(&[
        "generate", "--shape", "s-curve", "--n", "120", "--seed", "5", "--out", path_str(&data),
        "--out-color", path_str(&run.file("color.csv")),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = gaussmap(&[
        "fit", "--input", path_str(&data),
        "--out-model", path_str(&run.file("model.json")),
        "--out-embedding", path_str(&run.file("emb.csv")),
        "--units", "12", "--epochs", "60", "--seed", "9", "--k", "15",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn fit_writes_model_embedding_and_report() {
    let run = Run::new();
    generate_and_fit(&run);
    let data = read_csv(run.file("data.csv")).unwrap();
    assert_eq!((data.len(), data.dim()), (120, 3));
    assert_eq!(read_csv(run.file("color.csv")).unwrap().len(), 120);

    let model = read_model(run.file("model.json")).unwrap();
    assert_eq!(model.num_units(), 12);
    let emb = read_csv(run.file("emb.csv")).unwrap();
    assert_eq!((emb.len(), emb.dim()), (120, 2));

    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(run.file("model.report.json")).unwrap()).unwrap();
    let history = report["loss_history"].as_array().unwrap();
    assert_eq!(history.len() as u64, report["epochs_run"].as_u64().unwrap());
    assert!(report["stop_reason"] == "max-epochs" || report["stop_reason"] == "patience");
    assert!(report["reconstruction_error"].as_f64().unwrap() >= 0.0);
    assert_eq!(report["config"]["k_neighbors"], 15);
}

#[test]
fn transform_reproduces_fit_embedding() {
    let run = Run::new();
    generate_and_fit(&run);
    let out = gaussmap(&[
        "transform", "--model", path_str(&run.file("model.json")),
        "--input", path_str(&run.file("data.csv")),
        "--out", path_str(&run.file("again.csv")),
    ]);
    assert!(out.status.success());
    let a = read_csv(run.file("emb.csv")).unwrap();
    let b = read_csv(run.file("again.csv")).unwrap();
    for (x, y) in a.as_flat().iter().zip(b.as_flat()) {
        assert!((x - y).abs() <= 1e-12);
    }
}

#[test]
fn error_prints_six_decimals() {
    let run = Run::new();
    fs::write(run.file("d.csv"), "x,y,z\n0,0,0\n1,0,0\n0,2,0\n").unwrap();
    fs::write(run.file("e.csv"), "0,0\n2,0\n0,4\n").unwrap();
    let out = gaussmap(&[
        "error", "--input", path_str(&run.file("d.csv")),
        "--embedding", path_str(&run.file("e.csv")),
    ]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "1.000000\n");
}

#[test]
fn inspect_writes_grid_and_svg() {
    let run = Run::new();
    generate_and_fit(&run);
    let out = gaussmap(&[
        "inspect", "--model", path_str(&run.file("model.json")),
        "--embedding", path_str(&run.file("emb.csv")),
        "--field", "influence:1", "--resolution", "7", "--margin", "0.05",
        "--out", path_str(&run.file("grid.csv")), "--svg", path_str(&run.file("plot.svg")),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let grid = fs::read_to_string(run.file("grid.csv")).unwrap();
    let mut lines = grid.lines();
    assert_eq!(lines.next().unwrap(), "px,py,w0,w1,w2");
    assert_eq!(lines.count(), 49);
    let svg = fs::read_to_string(run.file("plot.svg")).unwrap();
    assert_eq!(svg.matches("<rect").count(), 49);
    assert_eq!(svg.matches("<circle").count(), 120);

    // a dataset can stand in for the embedding
    let out = gaussmap(&[
        "inspect", "--model", path_str(&run.file("model.json")),
        "--input", path_str(&run.file("data.csv")),
        "--field", "norm", "--resolution", "4",
        "--out", path_str(&run.file("norm.csv")),
    ]);
    assert!(out.status.success());
    assert!(fs::read_to_string(run.file("norm.csv")).unwrap().starts_with("px,py,value\n"));
}

#[test]
fn exit_codes() {
    let run = Run::new();
    let out = gaussmap(&["bogus"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));

    let missing = gaussmap(&["error", "--input", "/no/such.csv", "--embedding", "/no/such.csv"]);
    assert_eq!(missing.status.code(), Some(2));

    fs::write(run.file("ragged.csv"), "1,2,3\n4,5\n").unwrap();
    let ragged = gaussmap(&[
        "fit", "--input", path_str(&run.file("ragged.csv")),
        "--out-model", path_str(&run.file("m.json")),
        "--out-embedding", path_str(&run.file("e.csv")),
    ]);
    assert_eq!(ragged.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&ragged.stderr).contains("row 2"));

    fs::write(run.file("small.csv"), "0,0,0\n1,0,0\n0,1,0\n").unwrap();
    let bad_k = gaussmap(&[
        "fit", "--input", path_str(&run.file("small.csv")),
        "--out-model", path_str(&run.file("m.json")),
        "--out-embedding", path_str(&run.file("e.csv")),
        "--units", "2", "--k", "5",
    ]);
    assert_eq!(bad_k.status.code(), Some(1));

    fs::write(run.file("huge.csv"), "0,0,0\n1e200,0,0\n0,1e200,0\n").unwrap();
    let overflow = gaussmap(&[
        "fit", "--input", path_str(&run.file("huge.csv")),
        "--out-model", path_str(&run.file("m.json")),
        "--out-embedding", path_str(&run.file("e.csv")),
        "--units", "2",
    ]);
    assert_eq!(overflow.status.code(), Some(3));

    fs::write(run.file("bad.json"), r#"{"input_dim": 3}"#).unwrap();
    let schema = gaussmap(&[
        "transform", "--model", path_str(&run.file("bad.json")),
        "--input", path_str(&run.file("small.csv")),
        "--out", path_str(&run.file("o.csv")),
    ]);
    assert_eq!(schema.status.code(), Some(2));

    let field = gaussmap(&[
        "inspect", "--model", path_str(&run.file("bad.json")),
        "--embedding", path_str(&run.file("small.csv")),
        "--field", "norm", "--out", path_str(&run.file("g.csv")),
    ]);
    assert_eq!(field.status.code(), Some(2));
}
