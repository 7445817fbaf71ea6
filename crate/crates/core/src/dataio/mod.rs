//! Dataset files, dimension normalization and the synthetic generator.
//!
//! A dataset is a headerless CSV body (one row per sample: label 1 or 2,
//! then the feature values) plus a JSON sidecar carrying subject metadata
//! and the feature dimension. See `docs/FORMAT.md` for the full schema.

mod format;
mod synth;

pub use format::{default_sidecar_path, load_dataset, read_sidecar, save_dataset, Sidecar};
pub use synth::{generate_synthetic, SynthParams, DEFAULT_NOISE_SIGMA};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::types::{LabeledDataset, Signal};

/// Region names used for the StarPlus ROI feature vectors, in
/// concatenation order.
pub const STARPLUS_ROIS: [&str; 7] = ["CALC", "LIPL", "LT", "LTRIA", "LOPER", "LIPS", "LDLPFC"];

/// What [`normalize_dim`] did to the feature vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "snake_case")]
pub enum DimAction {
    Unchanged { dim: usize },
    Truncated { from: usize, to: usize },
}

/// Truncates every sample to its first `target_n` values. Shorter
/// datasets are rejected rather than padded.
pub fn normalize_dim<T: Scalar>(ds: &LabeledDataset<T>, target_n: usize) -> Result<(LabeledDataset<T>, DimAction)> {
    if target_n == 0 {
        return Err(Error::InvalidParams("target dimension must be at least 1".into()));
    }
    let found = ds.feature_dim();
    if found < target_n {
        return Err(Error::DatasetTooSmall {
            found,
            target: target_n,
        });
    }
    if found == target_n {
        return Ok((ds.clone(), DimAction::Unchanged { dim: found }));
    }
    let truncated = ds.map_signals(|s| Signal::new(s.as_slice()[..target_n].to_vec()))?;
    Ok((
        truncated,
        DimAction::Truncated {
            from: found,
            to: target_n,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{validate_dataset, ClassLabel, DatasetMeta};

    fn ds(dim: usize) -> LabeledDataset<f64> {
        let rows = (0..4)
            .map(|i| {
                let label = if i < 2 { ClassLabel::Class1 } else { ClassLabel::Class2 };
                ((0..dim).map(|j| (i * dim + j) as f64).collect(), label)
            })
            .collect();
        validate_dataset(rows, DatasetMeta::default()).unwrap()
    }

    #[test]
    fn truncates_longer_vectors() {
        let (out, action) = normalize_dim(&ds(14500), 14000).unwrap();
        assert_eq!(out.feature_dim(), 14000);
        assert_eq!(action, DimAction::Truncated { from: 14500, to: 14000 });
        assert_eq!(out.samples()[1].signal.as_slice()[..3], [14500.0, 14501.0, 14502.0]);
    }

    #[test]
    fn equal_dimension_is_identity() {
        let d = ds(14000);
        let (out, action) = normalize_dim(&d, 14000).unwrap();
        assert_eq!(out, d);
        assert_eq!(action, DimAction::Unchanged { dim: 14000 });
    }

    #[test]
    fn shorter_vectors_are_rejected() {
        assert!(matches!(
            normalize_dim(&ds(8000), 14000),
            Err(Error::DatasetTooSmall {
                found: 8000,
                target: 14000
            })
        ));
    }
}
