//! Cognitive-task decoding from voxel time-series.
//!
//! Samples are optionally thinned by a random sieve, mapped to Fourier or
//! Hilbert phase features, and classified with Gaussian naive Bayes or a
//! hard-margin linear SVM under leave-one-out cross-validation.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix the common `f64` instantiation.

pub mod classifiers;
pub mod dataio;
pub mod error;
pub mod experiment;
pub mod rng;
pub mod scalar;
pub mod sieve;
pub mod spectral;
pub mod types;

pub use error::{Error, Result, Violation};
pub use rng::RngSeed;
pub use scalar::Scalar;
pub use types::{
    validate_dataset, BinConvention, ClassLabel, DatasetMeta, LabeledDataset, PhaseVector, Sample, SieveMask, Signal,
    Spectrum,
};

pub type Signal64 = types::Signal<f64>;
pub type Signal32 = types::Signal<f32>;
pub type Dataset64 = types::LabeledDataset<f64>;
pub type Dataset32 = types::LabeledDataset<f32>;
pub type Spectrum64 = types::Spectrum<f64>;
pub type PhaseVector64 = types::PhaseVector<f64>;
pub type NbModel64 = classifiers::NbModel<f64>;
pub type SvmModel64 = classifiers::SvmModel<f64>;
pub type SpectralPlan64 = spectral::SpectralPlan<f64>;
