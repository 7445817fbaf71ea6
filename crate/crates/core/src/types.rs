//! Domain types shared across the pipeline.
//!
//! Storage is 0-based throughout. Anything that faces a user (file formats,
//! CLI messages, exported masks) uses 1-based positions, and the accessors
//! that speak that convention say so in their name.

use std::fmt;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Violation};
use crate::scalar::Scalar;

/// One sample's real-valued feature sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal<T> {
    values: Vec<T>,
}

impl<T: Scalar> Signal<T> {
    /// Rejects empty input and non-finite values.
    pub fn new(values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::SignalTooShort { min: 1, len: 0 });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue { index: index + 1 });
        }
        Ok(Self { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.values
    }

    pub fn into_vec(self) -> Vec<T> {
        self.values
    }

    /// Squared Euclidean norm.
    pub fn energy(&self) -> T {
        self.values.iter().map(|&v| v * v).sum()
    }
}

/// Binary sieve vector with its set of zeroed positions.
///
/// `zero_indices` is kept sorted and 0-based; `gamma()[n]` is 0 exactly
/// when `n` is one of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SieveMask {
    n_total: usize,
    zero_indices: Vec<usize>,
    gamma: Vec<u8>,
}

impl SieveMask {
    /// Builds a mask from 0-based positions. Duplicates and positions
    /// `>= n_total` are rejected.
    pub fn from_zero_indices(n_total: usize, mut zero_indices: Vec<usize>) -> Result<Self> {
        if n_total == 0 {
            return Err(Error::InvalidParams("sieve length must be positive".into()));
        }
        zero_indices.sort_unstable();
        if let Some(&bad) = zero_indices.iter().find(|&&i| i >= n_total) {
            return Err(Error::InvalidParams(format!(
                "sieve position {} outside [1, {n_total}]",
                bad + 1
            )));
        }
        if zero_indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParams("sieve positions must be distinct".into()));
        }
        let mut gamma = vec![1u8; n_total];
        for &i in &zero_indices {
            gamma[i] = 0;
        }
        Ok(Self {
            n_total,
            zero_indices,
            gamma,
        })
    }

    /// Same as [`SieveMask::from_zero_indices`] but with 1-based positions.
    pub fn from_one_based(n_total: usize, positions: &[usize]) -> Result<Self> {
        if positions.contains(&0) {
            return Err(Error::InvalidParams("sieve positions are 1-based".into()));
        }
        Self::from_zero_indices(n_total, positions.iter().map(|p| p - 1).collect())
    }

    pub fn n_total(&self) -> usize {
        self.n_total
    }

    pub fn m(&self) -> usize {
        self.zero_indices.len()
    }

    pub fn zero_indices(&self) -> &[usize] {
        &self.zero_indices
    }

    pub fn zero_indices_one_based(&self) -> Vec<usize> {
        self.zero_indices.iter().map(|i| i + 1).collect()
    }

    pub fn gamma(&self) -> &[u8] {
        &self.gamma
    }
}

/// Records which bin holds which frequency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BinConvention {
    /// Bin 0 is DC; the 1-based bin `k` of `sum_n g(n) e^{-i 2 pi k (n-1) / N}`
    /// lives at storage index `k mod N`.
    ZeroBased,
}

/// Complex spectrum of a signal.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T> {
    bins: Vec<Complex<T>>,
    convention: BinConvention,
}

impl<T: Scalar> Spectrum<T> {
    pub fn new(bins: Vec<Complex<T>>, convention: BinConvention) -> Self {
        Self { bins, convention }
    }

    pub fn bins(&self) -> &[Complex<T>] {
        &self.bins
    }

    pub fn into_bins(self) -> Vec<Complex<T>> {
        self.bins
    }

    pub fn len(&self) -> usize {
        self.bins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }

    pub fn convention(&self) -> BinConvention {
        self.convention
    }

    /// Bin `k` in the 1-based `k = 1..=N` numbering, where `k = N` is DC.
    pub fn one_based_bin(&self, k: usize) -> Complex<T> {
        assert!(
            (1..=self.bins.len()).contains(&k),
            "bin {k} outside 1..={}",
            self.bins.len()
        );
        self.bins[k % self.bins.len()]
    }
}

/// Angles in `(-pi, pi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseVector<T> {
    angles: Vec<T>,
}

impl<T: Scalar> PhaseVector<T> {
    pub fn new(angles: Vec<T>) -> Result<Self> {
        let pi = T::PI();
        if let Some(index) = angles.iter().position(|&a| !(a > -pi && a <= pi)) {
            return Err(Error::InvalidParams(format!(
                "angle at position {} outside (-pi, pi]",
                index + 1
            )));
        }
        Ok(Self { angles })
    }

    pub fn as_slice(&self) -> &[T] {
        &self.angles
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    /// Phase angles become ordinary real features.
    pub fn into_signal(self) -> Signal<T> {
        Signal { values: self.angles }
    }
}

/// Binary task label. Class 1 is the picture condition, class 2 the sentence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClassLabel {
    Class1,
    Class2,
}

impl ClassLabel {
    pub const ALL: [ClassLabel; 2] = [ClassLabel::Class1, ClassLabel::Class2];

    /// 1 or 2, as written in dataset files.
    pub fn code(self) -> u8 {
        match self {
            ClassLabel::Class1 => 1,
            ClassLabel::Class2 => 2,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            1 => Some(ClassLabel::Class1),
            2 => Some(ClassLabel::Class2),
            _ => None,
        }
    }

    pub fn index(self) -> usize {
        self.code() as usize - 1
    }

    pub fn name(self) -> &'static str {
        match self {
            ClassLabel::Class1 => "picture",
            ClassLabel::Class2 => "sentence",
        }
    }

    /// SVM target: +1 for class 1, -1 for class 2.
    pub fn sign<T: Scalar>(self) -> T {
        match self {
            ClassLabel::Class1 => T::one(),
            ClassLabel::Class2 => -T::one(),
        }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.code(), self.name())
    }
}

/// Provenance carried alongside a dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetMeta {
    pub subject_id: String,
    pub roi_names: Vec<String>,
    pub sampling_period_s: f64,
    #[serde(default)]
    pub provenance: String,
}

impl Default for DatasetMeta {
    fn default() -> Self {
        Self {
            subject_id: "unknown".into(),
            roi_names: Vec::new(),
            sampling_period_s: 0.5,
            provenance: String::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample<T> {
    pub signal: Signal<T>,
    pub label: ClassLabel,
}

/// Labeled samples sharing one feature dimension, with both classes present.
///
/// Leave-one-out evaluation additionally needs two samples per class; that
/// is checked where the folds are built.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset<T> {
    samples: Vec<Sample<T>>,
    feature_dim: usize,
    meta: DatasetMeta,
}

impl<T: Scalar> LabeledDataset<T> {
    /// Validates samples built from already-checked signals.
    pub fn new(samples: Vec<Sample<T>>, meta: DatasetMeta) -> Result<Self> {
        let feature_dim = samples.first().map_or(0, |s| s.signal.len());
        let mut violations = Vec::new();
        for (i, s) in samples.iter().enumerate() {
            if s.signal.len() != feature_dim {
                violations.push(Violation::DimensionMismatch {
                    sample: i + 1,
                    expected: feature_dim,
                    found: s.signal.len(),
                });
            }
        }
        violations.extend(class_violations(samples.iter().map(|s| s.label)));
        if violations.is_empty() {
            Ok(Self {
                samples,
                feature_dim,
                meta,
            })
        } else {
            Err(Error::InvalidDataset(violations))
        }
    }

    pub fn samples(&self) -> &[Sample<T>] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn feature_dim(&self) -> usize {
        self.feature_dim
    }

    pub fn meta(&self) -> &DatasetMeta {
        &self.meta
    }

    pub fn labels(&self) -> Vec<ClassLabel> {
        self.samples.iter().map(|s| s.label).collect()
    }

    /// Sample counts indexed by [`ClassLabel::index`].
    pub fn class_counts(&self) -> [usize; 2] {
        count_classes(self.samples.iter().map(|s| s.label))
    }

    /// Applies a per-sample transform, keeping labels and metadata.
    pub fn map_signals<F>(&self, mut f: F) -> Result<Self>
    where
        F: FnMut(&Signal<T>) -> Result<Signal<T>>,
    {
        let samples = self
            .samples
            .iter()
            .map(|s| {
                Ok(Sample {
                    signal: f(&s.signal)?,
                    label: s.label,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(samples, self.meta.clone())
    }
}

/// Checks raw rows against every dataset invariant and reports all
/// violations at once.
pub fn validate_dataset<T: Scalar>(rows: Vec<(Vec<T>, ClassLabel)>, meta: DatasetMeta) -> Result<LabeledDataset<T>> {
    let feature_dim = rows.first().map_or(0, |(v, _)| v.len());
    let mut violations = Vec::new();
    for (i, (values, _)) in rows.iter().enumerate() {
        if values.len() != feature_dim || values.is_empty() {
            violations.push(Violation::DimensionMismatch {
                sample: i + 1,
                expected: feature_dim,
                found: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            violations.push(Violation::NonFiniteValue {
                sample: i + 1,
                index: index + 1,
            });
        }
    }
    violations.extend(class_violations(rows.iter().map(|(_, l)| *l)));
    if !violations.is_empty() {
        return Err(Error::InvalidDataset(violations));
    }
    let samples = rows
        .into_iter()
        .map(|(values, label)| Sample {
            signal: Signal { values },
            label,
        })
        .collect();
    Ok(LabeledDataset {
        samples,
        feature_dim,
        meta,
    })
}

fn count_classes(labels: impl Iterator<Item = ClassLabel>) -> [usize; 2] {
    let mut counts = [0usize; 2];
    for l in labels {
        counts[l.index()] += 1;
    }
    counts
}

fn class_violations(labels: impl Iterator<Item = ClassLabel>) -> Vec<Violation> {
    let counts = count_classes(labels);
    ClassLabel::ALL
        .iter()
        .filter(|c| counts[c.index()] == 0)
        .map(|&class| Violation::EmptyClass {
            class,
            count: counts[class.index()],
        })
        .collect()
}
