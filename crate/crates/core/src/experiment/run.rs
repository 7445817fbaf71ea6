use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{ConfigId, FeatureStage, PipelineConfig, RunOptions};
use super::loocv::{loocv, Classifier, LoocvResult};
use crate::classifiers::ClassifierKind;
use crate::dataio::DimAction;
use crate::error::{Error, Result};
use crate::rng::{RngSeed, RNG_ALGORITHM};
use crate::scalar::Scalar;
use crate::sieve::{apply_sieve, sample_mask};
use crate::spectral::{arg, count_near_zero, phase, DhtMode, SpectralPlan, NEAR_ZERO_RATIO};
use crate::types::{LabeledDataset, PhaseVector, SieveMask, Signal};

/// Outcome of one repetition of one configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepetitionReport {
    /// 1-based; also the RNG stream id of the sieve mask.
    pub repetition: usize,
    pub accuracy: f64,
    pub confusion: [[usize; 2]; 2],
    /// Spectral values below the near-zero threshold, summed over samples.
    pub near_zero_values: usize,
    pub svm_unconverged_folds: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sieve_zero_indices: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigReport {
    pub config: ConfigId,
    pub chain: String,
    pub stage: FeatureStage,
    pub classifier: ClassifierKind,
    pub repetitions: usize,
    pub accuracy_mean: f64,
    /// Sample standard deviation over repetitions; 0 for a single one.
    pub accuracy_std: f64,
    /// Element-wise mean over repetitions, rounded to 2 decimals.
    pub confusion_mean: [[f64; 2]; 2],
    pub runs: Vec<RepetitionReport>,
}

/// Every knob that influenced a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSettings {
    pub scalar: String,
    pub seed: u64,
    pub rng: String,
    pub repetitions: usize,
    pub cross_validation: String,
    pub std_definition: String,
    pub tie_break: String,
    pub sieve: SieveSettings,
    pub spectral: SpectralSettings,
    pub nb: NbSettings,
    pub svm: SvmSettings,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SieveSettings {
    pub n: usize,
    pub m: usize,
    pub replacement: bool,
    pub mask_scope: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralSettings {
    pub convention: String,
    pub dht_mode: DhtMode,
    pub near_zero_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NbSettings {
    pub likelihood: String,
    pub variance: String,
    pub var_floor_factor: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmSettings {
    pub kernel: String,
    pub solver: String,
    pub c_cap: f64,
    pub kkt_tol: f64,
    pub max_passes: usize,
}

impl RunSettings {
    pub fn new<T: Scalar>(seed: RngSeed, options: &RunOptions) -> Self {
        Self {
            scalar: T::NAME.into(),
            seed: seed.seed,
            rng: RNG_ALGORITHM.into(),
            repetitions: options.repetitions,
            cross_validation: "leave_one_out".into(),
            std_definition: "sample (n - 1)".into(),
            tie_break: "class_1".into(),
            sieve: SieveSettings {
                n: options.sieve.n_total,
                m: options.sieve.m,
                replacement: false,
                mask_scope: "one mask per repetition, shared by all samples".into(),
            },
            spectral: SpectralSettings {
                convention: "zero_based".into(),
                dht_mode: options.dht_mode,
                near_zero_ratio: NEAR_ZERO_RATIO,
            },
            nb: NbSettings {
                likelihood: "gaussian".into(),
                variance: "population".into(),
                var_floor_factor: options.nb.var_floor_factor,
            },
            svm: SvmSettings {
                kernel: "linear".into(),
                solver: "smo".into(),
                c_cap: options.svm.c_cap,
                kkt_tol: options.svm.kkt_tol,
                max_passes: options.svm.max_passes,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub subject_id: String,
    pub n_samples: usize,
    pub feature_dim: usize,
    pub class_counts: [usize; 2],
    /// Set by callers that normalized the dimension before running.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalization: Option<DimAction>,
}

impl DatasetSummary {
    pub fn of<T: Scalar>(ds: &LabeledDataset<T>) -> Self {
        Self {
            subject_id: ds.meta().subject_id.clone(),
            n_samples: ds.len(),
            feature_dim: ds.feature_dim(),
            class_counts: ds.class_counts(),
            normalization: None,
        }
    }
}

/// Results of one or more configurations on one subject's dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub settings: RunSettings,
    pub dataset: DatasetSummary,
    pub configs: Vec<ConfigReport>,
}

impl EvalReport {
    pub fn config(&self, id: ConfigId) -> Option<&ConfigReport> {
        self.configs.iter().find(|c| c.config == id)
    }
}

/// Per-sample feature map for one configuration. Spectral stages also
/// return how many near-zero complex values they produced.
pub fn transform_sample<T: Scalar>(
    stage: FeatureStage,
    signal: &Signal<T>,
    mask: Option<&SieveMask>,
    plan: Option<&SpectralPlan<T>>,
    dht_mode: DhtMode,
) -> Result<(Signal<T>, usize)> {
    if stage == FeatureStage::Raw {
        return Ok((signal.clone(), 0));
    }
    let mask = mask.ok_or_else(|| Error::InvalidParams(format!("{stage:?} needs a sieve mask")))?;
    let sieved = apply_sieve(signal, mask)?;
    if stage == FeatureStage::Sieve {
        return Ok((sieved, 0));
    }

    let owned;
    let plan = match plan {
        Some(p) => p,
        None => {
            owned = SpectralPlan::new(sieved.len());
            &owned
        }
    };
    let norm = sieved.energy().sqrt();
    match stage {
        FeatureStage::SieveDftPhase => {
            let spectrum = plan.dft(&sieved)?;
            let near_zero = count_near_zero(spectrum.bins(), norm);
            Ok((phase(&spectrum).into_signal(), near_zero))
        }
        FeatureStage::SieveDhtPhase => {
            let analytic = plan.analytic(&sieved)?;
            let values: Vec<Complex<T>> = match dht_mode {
                DhtMode::Analytic => analytic,
                DhtMode::Literal => analytic.iter().map(|z| Complex::new(z.im, T::zero())).collect(),
            };
            let near_zero = count_near_zero(&values, norm);
            let angles = PhaseVector::new(values.into_iter().map(arg).collect())?;
            Ok((angles.into_signal(), near_zero))
        }
        FeatureStage::Raw | FeatureStage::Sieve => unreachable!(),
    }
}

/// Applies one configuration's feature map to every sample with a single
/// shared mask.
pub fn transform_dataset<T: Scalar>(
    config: &PipelineConfig,
    ds: &LabeledDataset<T>,
    mask: Option<&SieveMask>,
) -> Result<(LabeledDataset<T>, usize)> {
    let stage = config.stage();
    let plan = matches!(stage, FeatureStage::SieveDftPhase | FeatureStage::SieveDhtPhase)
        .then(|| SpectralPlan::new(ds.feature_dim()));
    let mut near_zero = 0;
    let out = ds.map_signals(|s| {
        let (features, nz) = transform_sample(stage, s, mask, plan.as_ref(), config.dht_mode)?;
        near_zero += nz;
        Ok(features)
    })?;
    Ok((out, near_zero))
}

/// The sieve mask used by repetition `repetition` (1-based).
pub fn repetition_mask(config: &PipelineConfig, seed: RngSeed, repetition: usize) -> Result<SieveMask> {
    let mut rng = seed.with_stream(repetition as u64).rng();
    sample_mask(config.sieve.n_total, config.sieve.m, &mut rng)
}

fn classifier_for(config: &PipelineConfig) -> Classifier {
    match config.classifier() {
        ClassifierKind::NaiveBayes => Classifier::NaiveBayes(config.nb),
        ClassifierKind::Svm => Classifier::Svm(config.svm),
    }
}

/// Runs one configuration: per repetition, draw a mask from stream `r`,
/// transform every sample, evaluate with leave-one-out. Configurations
/// without a sieve run once regardless of `repetitions`.
pub fn run_pipeline<T: Scalar>(
    config: &PipelineConfig,
    ds: &LabeledDataset<T>,
    seed: RngSeed,
    repetitions: usize,
    export_masks: bool,
) -> Result<ConfigReport> {
    config.validate()?;
    if repetitions == 0 {
        return Err(Error::InvalidParams("repetitions must be at least 1".into()));
    }
    if config.sieve.n_total != ds.feature_dim() {
        return Err(Error::ConfigDimensionMismatch {
            expected: config.sieve.n_total,
            found: ds.feature_dim(),
        });
    }
    let stage = config.stage();
    let reps = if stage.uses_sieve() { repetitions } else { 1 };
    let classifier = classifier_for(config);

    let runs = (1..=reps)
        .into_par_iter()
        .map(|r| {
            let mask = stage
                .uses_sieve()
                .then(|| repetition_mask(config, seed, r))
                .transpose()?;
            let (features, near_zero_values) = transform_dataset(config, ds, mask.as_ref())?;
            let LoocvResult {
                accuracy,
                confusion,
                folds,
            } = loocv(&features, classifier)?;
            Ok(RepetitionReport {
                repetition: r,
                accuracy,
                confusion: confusion.counts,
                near_zero_values,
                svm_unconverged_folds: folds.iter().filter(|f| !f.converged).count(),
                sieve_zero_indices: if export_masks {
                    mask.map(|m| m.zero_indices_one_based())
                } else {
                    None
                },
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let accuracies: Vec<f64> = runs.iter().map(|r| r.accuracy).collect();
    let (accuracy_mean, accuracy_std) = mean_and_sample_std(&accuracies);
    let mut confusion_mean = [[0.0; 2]; 2];
    for (i, row) in confusion_mean.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let mean = runs.iter().map(|r| r.confusion[i][j] as f64).sum::<f64>() / runs.len() as f64;
            *cell = (mean * 100.0).round() / 100.0;
        }
    }

    Ok(ConfigReport {
        config: config.id,
        chain: config.id.chain(),
        stage,
        classifier: config.classifier(),
        repetitions: reps,
        accuracy_mean,
        accuracy_std,
        confusion_mean,
        runs,
    })
}

/// Mean and (n - 1)-normalized standard deviation; the deviation of a
/// single value is 0.
pub fn mean_and_sample_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Runs the selected configurations on one dataset with shared settings.
/// Configurations run one after another; repetitions and folds inside
/// each run in parallel.
pub fn run_configs<T: Scalar>(
    ids: &[ConfigId],
    ds: &LabeledDataset<T>,
    seed: RngSeed,
    options: &RunOptions,
) -> Result<EvalReport> {
    let configs = ids
        .iter()
        .map(|&id| {
            run_pipeline(
                &options.pipeline(id),
                ds,
                seed,
                options.repetitions,
                options.export_masks,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EvalReport {
        settings: RunSettings::new::<T>(seed, options),
        dataset: DatasetSummary::of(ds),
        configs,
    })
}

/// All eight configurations.
pub fn run_all<T: Scalar>(ds: &LabeledDataset<T>, seed: RngSeed, options: &RunOptions) -> Result<EvalReport> {
    run_configs(&ConfigId::ALL, ds, seed, options)
}

/// Unweighted mean accuracy per configuration across subjects.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubjectMean {
    pub config: ConfigId,
    pub subjects: usize,
    pub accuracy_mean: f64,
}

/// Per-subject reports plus their unweighted average.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiSubjectReport {
    pub subjects: Vec<EvalReport>,
    pub subject_mean: Vec<SubjectMean>,
}

impl MultiSubjectReport {
    pub fn new(subjects: Vec<EvalReport>) -> Self {
        let mut ids: Vec<ConfigId> = subjects
            .iter()
            .flat_map(|s| s.configs.iter().map(|c| c.config))
            .collect();
        ids.sort();
        ids.dedup();
        let subject_mean = ids
            .into_iter()
            .map(|id| {
                let values: Vec<f64> = subjects
                    .iter()
                    .filter_map(|s| s.config(id))
                    .map(|c| c.accuracy_mean)
                    .collect();
                SubjectMean {
                    config: id,
                    subjects: values.len(),
                    accuracy_mean: values.iter().sum::<f64>() / values.len() as f64,
                }
            })
            .collect();
        Self { subjects, subject_mean }
    }
}

/// Plain-text summary with columns `Config | Mean % | Std`.
pub fn format_table(report: &EvalReport) -> String {
    let mut out = String::new();
    out.push_str("Config | Mean % | Std\n");
    out.push_str("-------+--------+------\n");
    for c in &report.configs {
        out.push_str(&format!(
            "{:<6} | {:>6.1} | {:>4.2}\n",
            c.config.to_string(),
            c.accuracy_mean,
            c.accuracy_std
        ));
    }
    out
}

/// Confusion matrix in the same layout as the summary table.
pub fn format_confusion(report: &ConfigReport) -> String {
    let m = &report.confusion_mean;
    format!(
        "{} mean confusion (rows: true, cols: predicted)\n          Class-1  Class-2\nClass-1  {:>7.2}  {:>7.2}\nClass-2  {:>7.2}  {:>7.2}\n",
        report.config, m[0][0], m[0][1], m[1][0], m[1][1]
    )
}
