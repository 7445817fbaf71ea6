use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::synth::SynthParams;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::types::{validate_dataset, ClassLabel, DatasetMeta, LabeledDataset};

/// JSON document stored next to the CSV body.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    #[serde(flatten)]
    pub meta: DatasetMeta,
    pub feature_dim: usize,
    /// Present when the dataset came from the synthetic generator.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<SynthParams>,
}

/// `data.csv` -> `data.json`.
pub fn default_sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("json")
}

pub fn read_sidecar(path: &Path) -> Result<Sidecar> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.into(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| Error::Json {
        path: path.into(),
        source,
    })
}

/// Writes the CSV body with `T::TEXT_DECIMALS` digits after the point
/// (17 significant digits for `f64`), which round-trips exactly.
pub fn save_dataset<T: Scalar>(
    ds: &LabeledDataset<T>,
    csv_path: &Path,
    sidecar_path: &Path,
    generator: Option<&SynthParams>,
) -> Result<()> {
    let io_err = |path: &Path| {
        let path = path.to_path_buf();
        move |source| Error::Io { path, source }
    };

    let file = File::create(csv_path).map_err(io_err(csv_path))?;
    let mut out = BufWriter::new(file);
    let mut line = String::new();
    for sample in ds.samples() {
        line.clear();
        line.push_str(&sample.label.code().to_string());
        for v in sample.signal.as_slice() {
            line.push(',');
            line.push_str(&format!("{:.*e}", T::TEXT_DECIMALS, v));
        }
        line.push('\n');
        out.write_all(line.as_bytes()).map_err(io_err(csv_path))?;
    }
    out.flush().map_err(io_err(csv_path))?;

    let sidecar = Sidecar {
        meta: ds.meta().clone(),
        feature_dim: ds.feature_dim(),
        generator: generator.cloned(),
    };
    let json = serde_json::to_string_pretty(&sidecar).map_err(|source| Error::Json {
        path: sidecar_path.into(),
        source,
    })?;
    std::fs::write(sidecar_path, json + "\n").map_err(io_err(sidecar_path))
}

/// Reads and validates a dataset. Row and column numbers in errors are
/// 1-based; column 1 is the label.
pub fn load_dataset<T: Scalar>(csv_path: &Path, sidecar_path: &Path) -> Result<(LabeledDataset<T>, Sidecar)> {
    let sidecar = read_sidecar(sidecar_path)?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(csv_path)
        .map_err(|e| csv_error(csv_path, e))?;

    let mut rows: Vec<(Vec<T>, ClassLabel)> = Vec::new();
    let mut width = None;
    for (r, record) in reader.records().enumerate() {
        let row = r + 1;
        let record = record.map_err(|e| csv_error(csv_path, e))?;
        let expected = *width.get_or_insert(record.len());
        if record.len() != expected {
            return Err(Error::Parse {
                row,
                column: record.len().min(expected) + 1,
                message: format!("expected {expected} columns, found {}", record.len()),
            });
        }
        if record.len() < 2 {
            return Err(Error::Parse {
                row,
                column: 2,
                message: "row has no feature values".into(),
            });
        }

        let label = parse_label(&record[0], row)?;
        let values = record
            .iter()
            .skip(1)
            .enumerate()
            .map(|(c, field)| {
                field.parse::<T>().map_err(|_| Error::Parse {
                    row,
                    column: c + 2,
                    message: format!("'{field}' is not a number"),
                })
            })
            .collect::<Result<Vec<T>>>()?;
        rows.push((values, label));
    }

    let found = width.map_or(0, |w| w - 1);
    if found != sidecar.feature_dim {
        return Err(Error::SidecarMismatch(format!(
            "sidecar declares feature_dim {}, data has {found}",
            sidecar.feature_dim
        )));
    }
    let ds = validate_dataset(rows, sidecar.meta.clone())?;
    Ok((ds, sidecar))
}

fn parse_label(field: &str, row: usize) -> Result<ClassLabel> {
    if let Ok(code) = field.parse::<u8>() {
        if let Some(label) = ClassLabel::from_code(code) {
            return Ok(label);
        }
    }
    if field.parse::<f64>().is_ok() {
        Err(Error::LabelOutOfRange {
            row,
            label: field.to_string(),
        })
    } else {
        Err(Error::Parse {
            row,
            column: 1,
            message: format!("label '{field}' is not an integer"),
        })
    }
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    let row = e.position().map_or(0, |p| p.record() as usize + 1);
    match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::Io {
            path: path.into(),
            source,
        },
        other => Error::Parse {
            row,
            column: 0,
            message: format!("{other:?}"),
        },
    }
}
