//! CSV datasets and embeddings, model JSON and grid report CSV.
//!
//! Every float is written in its shortest round-trip decimal form, so
//! reading a file back reproduces the values bit for bit.

use std::fmt::Write as _;
use std::fs;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::data::{Dataset, Embedding, Points};
use crate::error::{Error, Result};
use crate::interpret::{Field, GridReport};
use crate::model::ModelParams;

/// Parses comma-separated numeric rows. A first row that does not parse as
/// numbers is treated as a header and skipped.
pub fn parse_csv<R: Read>(reader: R) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut values = Vec::new();
    let mut width: Option<usize> = None;
    for (idx, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| {
            let row = e.position().map_or(idx + 1, |p| p.line() as usize);
            Error::Parse {
                row,
                column: 0,
                message: e.to_string(),
            }
        })?;
        let row = record.position().map_or(idx + 1, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        let parsed: Vec<std::result::Result<f64, _>> =
            record.iter().map(str::parse::<f64>).collect();
        if idx == 0 && parsed.iter().any(|p| p.is_err()) {
            continue;
        }
        match width {
            None => width = Some(record.len()),
            Some(w) if w != record.len() => {
                return Err(Error::RaggedRow {
                    row,
                    expected: w,
                    found: record.len(),
                })
            }
            Some(_) => {}
        }
        for (col, (field, value)) in record.iter().zip(parsed).enumerate() {
            let value = value.map_err(|e| Error::Parse {
                row,
                column: col + 1,
                message: format!("`{field}`: {e}"),
            })?;
            if !value.is_finite() {
                return Err(Error::Parse {
                    row,
                    column: col + 1,
                    message: format!("non-finite value `{field}`"),
                });
            }
            values.push(value);
        }
    }
    let width = width.ok_or_else(|| Error::InsufficientData("no data rows".into()))?;
    Points::from_flat(width, values)
}

pub fn read_csv(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_csv(std::io::BufReader::new(file))
}

/// Headerless CSV, one point per line.
pub fn points_to_csv(points: &Points) -> String {
    let mut out = String::new();
    for row in points.rows() {
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            write!(out, "{v}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn write_embedding_csv(embedding: &Embedding, path: impl AsRef<Path>) -> Result<()> {
    write_text(path.as_ref(), &points_to_csv(embedding))
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

#[derive(Debug, Serialize, Deserialize)]
struct ModelFile {
    input_dim: usize,
    output_dim: usize,
    epsilon: f64,
    centers: Vec<Vec<f64>>,
    sigmas: Vec<f64>,
    matrices: Vec<Vec<Vec<f64>>>,
}

pub fn model_to_json(model: &ModelParams) -> String {
    let file = ModelFile {
        input_dim: model.input_dim(),
        output_dim: model.output_dim(),
        epsilon: model.epsilon(),
        centers: (0..model.num_units()).map(|i| model.center(i).to_vec()).collect(),
        sigmas: model.sigmas().to_vec(),
        matrices: (0..model.num_units()).map(|i| model.matrix_rows(i)).collect(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("model parameters are finite");
    s.push('\n');
    s
}

pub fn model_from_json(text: &str) -> Result<ModelParams> {
    let file: ModelFile = serde_json::from_str(text).map_err(|e| {
        Error::schema(
            format!("line {} column {}", e.line(), e.column()),
            e.to_string(),
        )
    })?;
    let (d1, d2) = (file.input_dim, file.output_dim);
    if d1 == 0 {
        return Err(Error::schema("input_dim", "must be at least 1"));
    }
    if d2 == 0 || d2 >= d1 {
        return Err(Error::schema("output_dim", format!("must be in 1..{d1}, got {d2}")));
    }
    if !(file.epsilon.is_finite() && file.epsilon >= 0.0) {
        return Err(Error::schema("epsilon", "must be finite and >= 0"));
    }
    let m = file.centers.len();
    if m == 0 {
        return Err(Error::schema("centers", "must hold at least one center"));
    }
    if file.sigmas.len() != m {
        return Err(Error::schema(
            "sigmas",
            format!("expected {m} entries, found {}", file.sigmas.len()),
        ));
    }
    if file.matrices.len() != m {
        return Err(Error::schema(
            "matrices",
            format!("expected {m} entries, found {}", file.matrices.len()),
        ));
    }
    for (i, c) in file.centers.iter().enumerate() {
        if c.len() != d1 {
            return Err(Error::schema(
                format!("centers[{i}]"),
                format!("expected {d1} values, found {}", c.len()),
            ));
        }
    }
    for (i, s) in file.sigmas.iter().enumerate() {
        if !(s.is_finite() && *s > 0.0) {
            return Err(Error::schema(format!("sigmas[{i}]"), "must be finite and positive"));
        }
    }
    for (i, mat) in file.matrices.iter().enumerate() {
        if mat.len() != d2 {
            return Err(Error::schema(
                format!("matrices[{i}]"),
                format!("expected {d2} rows, found {}", mat.len()),
            ));
        }
        for (k, row) in mat.iter().enumerate() {
            if row.len() != d1 {
                return Err(Error::schema(
                    format!("matrices[{i}]"),
                    format!("row {k} has {} values, expected {d1}", row.len()),
                ));
            }
        }
    }
    ModelParams::new(file.centers, file.sigmas, file.matrices, file.epsilon)
        .map_err(|e| Error::schema("$", e.to_string()))
}

pub fn write_model(model: &ModelParams, path: impl AsRef<Path>) -> Result<()> {
    write_text(path.as_ref(), &model_to_json(model))
}

pub fn read_model(path: impl AsRef<Path>) -> Result<ModelParams> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    model_from_json(&text)
}

/// `px,py,value` for scalar fields, `px,py,w0,..` for influence fields,
/// one line per grid point in grid order.
pub fn grid_to_csv(report: &GridReport) -> String {
    let mut out = String::from("px,py");
    match report.field {
        Field::Influence(_) => {
            let d1 = report.values.first().map_or(0, Vec::len);
            for j in 0..d1 {
                write!(out, ",w{j}").unwrap();
            }
        }
        Field::Variance | Field::Norm => out.push_str(",value"),
    }
    out.push('\n');
    for (p, values) in report.grid.points.iter().zip(&report.values) {
        write!(out, "{},{}", p[0], p[1]).unwrap();
        for v in values {
            write!(out, ",{v}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn write_grid_csv(report: &GridReport, path: impl AsRef<Path>) -> Result<()> {
    write_text(path.as_ref(), &grid_to_csv(report))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<Dataset> {
        parse_csv(s.as_bytes())
    }

    #[test]
    fn plain_rows() {
        let d = parse("1,2\n3,4\n").unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.row(1), &[3.0, 4.0]);
    }

    #[test]
    fn header_is_skipped() {
        let d = parse("x,y\n1,2\n").unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.row(0), &[1.0, 2.0]);
    }

    #[test]
    fn whitespace_and_blank_lines() {
        let d = parse(" 1 , 2.5\n\n-3e2,4\n").unwrap();
        assert_eq!(d.to_rows(), vec![vec![1.0, 2.5], vec![-300.0, 4.0]]);
    }

    #[test]
    fn ragged_row_reports_line() {
        match parse("1,2\n3\n") {
            Err(Error::RaggedRow { row, expected, found }) => {
                assert_eq!((row, expected, found), (2, 2, 1));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bad_value_reports_location() {
        match parse("1,2\n3,abc\n") {
            Err(Error::Parse { row, column, .. }) => assert_eq!((row, column), (2, 2)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse("1,2\nNaN,1\n"), Err(Error::Parse { row: 2, column: 1, .. })));
        assert!(matches!(parse("1,inf\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse(""), Err(Error::InsufficientData(_))));
        assert!(matches!(parse("a,b\n"), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn missing_file() {
        assert!(matches!(
            read_csv("/nonexistent/definitely/not/here.csv"),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn embedding_csv_layout() {
        let e = Points::from_rows(&[[0.1, -2.0], [3.0, 1e-300], [0.0, 5.5]]).unwrap();
        let text = points_to_csv(&e);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines.iter().all(|l| l.split(',').count() == 2));
        assert_eq!(parse(&text).unwrap(), e);
    }

    fn sample_model() -> ModelParams {
        ModelParams::new(
            vec![vec![0.1, 0.2, 0.3], vec![-1.0 / 3.0, 2.0, 1e-17]],
            vec![1.0, std::f64::consts::PI],
            vec![
                vec![vec![0.1, 0.7, -0.3], vec![1.0 / 7.0, 0.0, 2.5]],
                vec![vec![-0.9, 0.0, 0.0], vec![0.0, 1e10, -1e-10]],
            ],
            1e-8,
        )
        .unwrap()
    }

    #[test]
    fn model_json_round_trip() {
        let model = sample_model();
        let back = model_from_json(&model_to_json(&model)).unwrap();
        assert_eq!(back, model);
    }

    #[test]
    fn model_json_layout() {
        let json: serde_json::Value = serde_json::from_str(&model_to_json(&sample_model())).unwrap();
        assert_eq!(json["input_dim"], 3);
        assert_eq!(json["output_dim"], 2);
        assert_eq!(json["matrices"][1][1][1], 1e10);
        assert_eq!(json["centers"].as_array().unwrap().len(), 2);
    }

    fn schema_path(text: &str) -> String {
        match model_from_json(text) {
            Err(Error::Schema { path, .. }) => path,
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn model_schema_errors_name_the_field() {
        let mut json: serde_json::Value =
            serde_json::from_str(&model_to_json(&sample_model())).unwrap();
        json["matrices"][1] = serde_json::json!([[1.0, 2.0, 3.0]]);
        assert_eq!(schema_path(&json.to_string()), "matrices[1]");

        let mut json: serde_json::Value =
            serde_json::from_str(&model_to_json(&sample_model())).unwrap();
        json["matrices"][0][1] = serde_json::json!([1.0, 2.0]);
        assert_eq!(schema_path(&json.to_string()), "matrices[0]");

        let mut json: serde_json::Value =
            serde_json::from_str(&model_to_json(&sample_model())).unwrap();
        json["sigmas"][1] = serde_json::json!(-1.0);
        assert_eq!(schema_path(&json.to_string()), "sigmas[1]");

        let mut json: serde_json::Value =
            serde_json::from_str(&model_to_json(&sample_model())).unwrap();
        json["centers"][0] = serde_json::json!([1.0]);
        assert_eq!(schema_path(&json.to_string()), "centers[0]");

        let mut json: serde_json::Value =
            serde_json::from_str(&model_to_json(&sample_model())).unwrap();
        json["output_dim"] = serde_json::json!(3);
        assert_eq!(schema_path(&json.to_string()), "output_dim");

        assert!(schema_path("{not json").starts_with("line 1"));
    }
}
