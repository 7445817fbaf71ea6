//! Two-class quasi-periodic surrogate data.
//!
//! Each sample is `gain * sum_h cos(2 pi b_h (n - 1) / N + phi_{c,h}) + noise(n)`
//! where class 2 offsets every class-1 phase by `delta_phi`. Amplitude
//! spectra are shared by both classes; only phases carry the label.

use std::f64::consts::PI;

use rand::distr::{Distribution, Uniform};
use rand_distr::Normal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngSeed;
use crate::scalar::Scalar;
use crate::types::{ClassLabel, DatasetMeta, LabeledDataset, Sample, Signal};

/// Noise level of the default generator. Chosen so that raw-intensity naive
/// Bayes stays at or below 75% leave-one-out accuracy; see
/// `docs/CALIBRATION.md`.
pub const DEFAULT_NOISE_SIGMA: f64 = 20.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthParams {
    pub n_features: usize,
    pub samples_per_class: usize,
    /// Frequency bins of the shared harmonics; each must be below N/2.
    pub harmonic_bins: Vec<usize>,
    /// Class-1 phase of each harmonic, radians.
    pub base_phases: Vec<f64>,
    /// Class-2 phase offset relative to class 1, in (0, pi].
    pub delta_phi: f64,
    /// Per-sample gain is drawn uniformly from `[gain_min, gain_max]`.
    pub gain_min: f64,
    pub gain_max: f64,
    pub noise_sigma: f64,
    pub seed: u64,
}

impl Default for SynthParams {
    fn default() -> Self {
        Self {
            n_features: 1024,
            samples_per_class: 40,
            harmonic_bins: vec![3, 7, 12],
            base_phases: vec![0.0; 3],
            delta_phi: PI / 2.0,
            gain_min: 0.5,
            gain_max: 2.0,
            noise_sigma: DEFAULT_NOISE_SIGMA,
            seed: 0,
        }
    }
}

impl SynthParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        if self.n_features < 2 {
            return bad(format!("n_features must be at least 2, got {}", self.n_features));
        }
        if self.samples_per_class == 0 {
            return bad("samples_per_class must be positive".into());
        }
        if self.harmonic_bins.is_empty() {
            return bad("at least one harmonic bin is required".into());
        }
        if let Some(&b) = self.harmonic_bins.iter().find(|&&b| 2 * b >= self.n_features) {
            return bad(format!(
                "harmonic bin {b} must be below N/2 = {}",
                self.n_features as f64 / 2.0
            ));
        }
        if self.base_phases.len() != self.harmonic_bins.len() {
            return bad(format!(
                "{} base phases for {} harmonics",
                self.base_phases.len(),
                self.harmonic_bins.len()
            ));
        }
        if self.base_phases.iter().any(|p| !p.is_finite()) {
            return bad("base phases must be finite".into());
        }
        if !(self.delta_phi > 0.0 && self.delta_phi <= PI) {
            return bad(format!("delta_phi must lie in (0, pi], got {}", self.delta_phi));
        }
        if !(self.gain_min.is_finite() && self.gain_max.is_finite() && self.gain_min <= self.gain_max) {
            return bad(format!("gain range [{}, {}] is invalid", self.gain_min, self.gain_max));
        }
        if !(self.noise_sigma.is_finite() && self.noise_sigma >= 0.0) {
            return bad(format!(
                "noise sigma must be finite and non-negative, got {}",
                self.noise_sigma
            ));
        }
        Ok(())
    }

    /// Phase of harmonic `h` for `class`.
    pub fn phase(&self, class: ClassLabel, h: usize) -> f64 {
        match class {
            ClassLabel::Class1 => self.base_phases[h],
            ClassLabel::Class2 => self.base_phases[h] + self.delta_phi,
        }
    }
}

/// Class-1 samples first, then class 2. All randomness comes from stream 0
/// of `params.seed`.
pub fn generate_synthetic<T: Scalar>(params: &SynthParams) -> Result<LabeledDataset<T>> {
    params.validate()?;
    let n = params.n_features;
    let mut rng = RngSeed::new(params.seed).rng();
    let gain = Uniform::new_inclusive(params.gain_min, params.gain_max)
        .map_err(|e| Error::InvalidParams(format!("gain range: {e}")))?;
    let noise = Normal::new(0.0, params.noise_sigma).map_err(|e| Error::InvalidParams(format!("noise: {e}")))?;

    let templates: [Vec<f64>; 2] = ClassLabel::ALL.map(|class| {
        (0..n)
            .map(|i| {
                params
                    .harmonic_bins
                    .iter()
                    .enumerate()
                    .map(|(h, &b)| (2.0 * PI * (b * i) as f64 / n as f64 + params.phase(class, h)).cos())
                    .sum()
            })
            .collect()
    });

    let mut samples = Vec::with_capacity(2 * params.samples_per_class);
    for class in ClassLabel::ALL {
        for _ in 0..params.samples_per_class {
            let g = gain.sample(&mut rng);
            let values = templates[class.index()]
                .iter()
                .map(|&t| {
                    let eps = if params.noise_sigma > 0.0 {
                        noise.sample(&mut rng)
                    } else {
                        0.0
                    };
                    T::of(g * t + eps)
                })
                .collect();
            samples.push(Sample {
                signal: Signal::new(values)?,
                label: class,
            });
        }
    }

    let meta = DatasetMeta {
        subject_id: "synthetic".into(),
        roi_names: Vec::new(),
        sampling_period_s: 0.5,
        provenance: format!(
            "synthetic two-class harmonic surrogate, seed {}, bins {:?}, delta_phi {}, sigma {}",
            params.seed, params.harmonic_bins, params.delta_phi, params.noise_sigma
        ),
    };
    LabeledDataset::new(samples, meta)
}
