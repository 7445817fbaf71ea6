//! The two classifiers: Gaussian naive Bayes and a (near) hard-margin
//! linear SVM.

mod naive_bayes;
mod svm;

use serde::{Deserialize, Serialize};

pub use naive_bayes::{nb_train, NbModel, NbParams, NbPrediction};
pub use svm::{svm_train, GramMatrix, Kernel, SupportVector, SvmDiagnostics, SvmModel, SvmParams, SvmPrediction};

use crate::error::Result;
use crate::scalar::Scalar;
use crate::types::ClassLabel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassifierKind {
    NaiveBayes,
    Svm,
}

impl ClassifierKind {
    pub fn short_name(self) -> &'static str {
        match self {
            ClassifierKind::NaiveBayes => "NB",
            ClassifierKind::Svm => "SVM",
        }
    }
}

/// Either trained model, so evaluation code can treat them uniformly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TrainedModel<T> {
    NaiveBayes(NbModel<T>),
    Svm(SvmModel<T>),
}

impl<T: Scalar> TrainedModel<T> {
    pub fn predict(&self, x: &[T]) -> Result<ClassLabel> {
        match self {
            TrainedModel::NaiveBayes(m) => m.predict(x).map(|p| p.label),
            TrainedModel::Svm(m) => m.predict(x).map(|p| p.label),
        }
    }
}
