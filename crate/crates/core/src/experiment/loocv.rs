//! Leave-one-out cross-validation.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classifiers::{ClassifierKind, GramMatrix, NbModel, NbParams, SvmModel, SvmParams, TrainedModel};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::types::{ClassLabel, LabeledDataset};

/// Classifier choice together with its settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Classifier {
    NaiveBayes(NbParams),
    Svm(SvmParams),
}

impl Classifier {
    pub fn kind(&self) -> ClassifierKind {
        match self {
            Classifier::NaiveBayes(_) => ClassifierKind::NaiveBayes,
            Classifier::Svm(_) => ClassifierKind::Svm,
        }
    }
}

/// 2x2 counts; rows are true classes, columns predicted classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub counts: [[usize; 2]; 2],
}

impl ConfusionMatrix {
    pub fn record(&mut self, truth: ClassLabel, predicted: ClassLabel) {
        self.counts[truth.index()][predicted.index()] += 1;
    }

    pub fn total(&self) -> usize {
        self.counts.iter().flatten().sum()
    }

    pub fn correct(&self) -> usize {
        self.counts[0][0] + self.counts[1][1]
    }

    pub fn row_sums(&self) -> [usize; 2] {
        [
            self.counts[0][0] + self.counts[0][1],
            self.counts[1][0] + self.counts[1][1],
        ]
    }

    /// Percentage of correct predictions.
    pub fn accuracy(&self) -> f64 {
        if self.total() == 0 {
            return 0.0;
        }
        100.0 * self.correct() as f64 / self.total() as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldResult {
    /// 0-based position of the held-out sample.
    pub held_out: usize,
    pub truth: ClassLabel,
    pub predicted: ClassLabel,
    /// Training-set size of this fold.
    pub train_size: usize,
    /// SVM folds only: whether the solver met its tolerance.
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoocvResult {
    pub accuracy: f64,
    pub confusion: ConfusionMatrix,
    pub folds: Vec<FoldResult>,
}

impl LoocvResult {
    pub fn unconverged_folds(&self) -> usize {
        self.folds.iter().filter(|f| !f.converged).count()
    }
}

/// Precomputed per-dataset state for repeated fold training.
pub struct FoldContext<'a, T> {
    rows: Vec<&'a [T]>,
    labels: Vec<ClassLabel>,
    gram: Option<GramMatrix<T>>,
    classifier: Classifier,
}

impl<'a, T: Scalar> FoldContext<'a, T> {
    pub fn new(ds: &'a LabeledDataset<T>, classifier: Classifier) -> Self {
        let rows: Vec<&[T]> = ds.samples().iter().map(|s| s.signal.as_slice()).collect();
        let gram = match classifier {
            Classifier::Svm(_) => Some(GramMatrix::linear(&rows)),
            Classifier::NaiveBayes(_) => None,
        };
        Self {
            rows,
            labels: ds.labels(),
            gram,
            classifier,
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Trains on every sample except `held_out`.
    pub fn train_fold(&self, held_out: usize) -> Result<TrainedModel<T>> {
        let subset: Vec<usize> = (0..self.rows.len()).filter(|&i| i != held_out).collect();
        match (&self.classifier, &self.gram) {
            (Classifier::Svm(params), Some(gram)) => {
                SvmModel::fit_subset(&self.rows, &self.labels, gram, &subset, params).map(TrainedModel::Svm)
            }
            (Classifier::NaiveBayes(params), _) => {
                let rows: Vec<&[T]> = subset.iter().map(|&i| self.rows[i]).collect();
                let labels: Vec<ClassLabel> = subset.iter().map(|&i| self.labels[i]).collect();
                NbModel::fit(&rows, &labels, params).map(TrainedModel::NaiveBayes)
            }
            (Classifier::Svm(_), None) => unreachable!("SVM context always holds a Gram matrix"),
        }
    }

    pub fn run_fold(&self, held_out: usize) -> Result<FoldResult> {
        let model = self.train_fold(held_out)?;
        let predicted = model.predict(self.rows[held_out])?;
        let converged = match &model {
            TrainedModel::Svm(m) => m.diagnostics.converged,
            TrainedModel::NaiveBayes(_) => true,
        };
        Ok(FoldResult {
            held_out,
            truth: self.labels[held_out],
            predicted,
            train_size: self.rows.len() - 1,
            converged,
        })
    }
}

/// One fold per sample, each trained on all the others. Folds run in
/// parallel and are gathered in sample order.
pub fn loocv<T: Scalar>(ds: &LabeledDataset<T>, classifier: Classifier) -> Result<LoocvResult> {
    let counts = ds.class_counts();
    for class in ClassLabel::ALL {
        // Holding out the only sample of a class would empty it.
        let n = counts[class.index()];
        if n < 2 {
            return Err(Error::EmptyClass {
                class,
                count: n.saturating_sub(1),
            });
        }
    }
    let ctx = FoldContext::new(ds, classifier);
    let folds = (0..ctx.len())
        .into_par_iter()
        .map(|i| ctx.run_fold(i))
        .collect::<Result<Vec<_>>>()?;
    let mut confusion = ConfusionMatrix::default();
    for f in &folds {
        confusion.record(f.truth, f.predicted);
    }
    Ok(LoocvResult {
        accuracy: confusion.accuracy(),
        confusion,
        folds,
    })
}
