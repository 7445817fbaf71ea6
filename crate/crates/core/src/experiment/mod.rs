//! The eight pipeline configurations and their evaluation protocol.

mod config;
mod loocv;
mod run;

pub use config::{parse_config_list, ConfigId, FeatureStage, PipelineConfig, RunOptions, SieveParams};
pub use loocv::{loocv, Classifier, ConfusionMatrix, FoldContext, FoldResult, LoocvResult};
pub use run::{
    format_confusion, format_table, mean_and_sample_std, repetition_mask, run_all, run_configs, run_pipeline,
    transform_dataset, transform_sample, ConfigReport, DatasetSummary, EvalReport, MultiSubjectReport, NbSettings,
    RepetitionReport, RunSettings, SieveSettings, SpectralSettings, SubjectMean, SvmSettings,
};
