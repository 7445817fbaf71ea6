//! Gaussian naive Bayes with per-class population variances.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::types::{ClassLabel, LabeledDataset};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NbParams {
    /// Variances are floored at `var_floor_factor * max(largest feature
    /// variance over the training set, 1)`.
    pub var_floor_factor: f64,
}

impl Default for NbParams {
    fn default() -> Self {
        Self { var_floor_factor: 1e-9 }
    }
}

/// Trained model. Arrays are indexed by [`ClassLabel::index`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NbModel<T> {
    pub priors: [T; 2],
    pub means: [Vec<T>; 2],
    pub variances: [Vec<T>; 2],
    pub var_floor: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NbPrediction<T> {
    pub label: ClassLabel,
    /// Unnormalized `log prior + sum_j log N(x_j; mean, var)` per class.
    pub log_posteriors: [T; 2],
}

pub fn nb_train<T: Scalar>(train: &LabeledDataset<T>, params: &NbParams) -> Result<NbModel<T>> {
    let rows: Vec<&[T]> = train.samples().iter().map(|s| s.signal.as_slice()).collect();
    NbModel::fit(&rows, &train.labels(), params)
}

impl<T: Scalar> NbModel<T> {
    pub fn fit(rows: &[&[T]], labels: &[ClassLabel], params: &NbParams) -> Result<Self> {
        assert_eq!(rows.len(), labels.len(), "one label per row");
        let dim = rows.first().map_or(0, |r| r.len());
        if let Some(r) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: r.len(),
            });
        }

        let mut counts = [0usize; 2];
        let mut sums = [vec![T::zero(); dim], vec![T::zero(); dim]];
        for (row, label) in rows.iter().zip(labels) {
            let c = label.index();
            counts[c] += 1;
            for (s, &v) in sums[c].iter_mut().zip(row.iter()) {
                *s = *s + v;
            }
        }
        for class in ClassLabel::ALL {
            if counts[class.index()] == 0 {
                return Err(Error::EmptyClass { class, count: 0 });
            }
        }

        let means = [0, 1].map(|c| {
            let n = T::of_usize(counts[c]);
            sums[c].iter().map(|&s| s / n).collect::<Vec<T>>()
        });

        let mut sq = [vec![T::zero(); dim], vec![T::zero(); dim]];
        for (row, label) in rows.iter().zip(labels) {
            let c = label.index();
            for ((acc, &v), &mu) in sq[c].iter_mut().zip(row.iter()).zip(&means[c]) {
                let d = v - mu;
                *acc = *acc + d * d;
            }
        }

        let total = T::of_usize(rows.len());
        let max_var = (0..dim)
            .map(|j| {
                let mean = (sums[0][j] + sums[1][j]) / total;
                rows.iter().map(|r| (r[j] - mean) * (r[j] - mean)).sum::<T>() / total
            })
            .fold(T::zero(), T::max);
        let var_floor = T::of(params.var_floor_factor) * max_var.max(T::one());

        let variances = [0, 1].map(|c| {
            let n = T::of_usize(counts[c]);
            sq[c].iter().map(|&s| (s / n).max(var_floor)).collect::<Vec<T>>()
        });
        let priors = [0, 1].map(|c| T::of_usize(counts[c]) / total);

        Ok(Self {
            priors,
            means,
            variances,
            var_floor,
        })
    }

    pub fn n_features(&self) -> usize {
        self.means[0].len()
    }

    pub fn log_posteriors(&self, x: &[T]) -> Result<[T; 2]> {
        if x.len() != self.n_features() {
            return Err(Error::DimensionMismatch {
                expected: self.n_features(),
                found: x.len(),
            });
        }
        let half = T::of(0.5);
        let log_two_pi = (T::of(2.0) * T::PI()).ln();
        Ok([0, 1].map(|c| {
            let log_lik: T = x
                .iter()
                .zip(&self.means[c])
                .zip(&self.variances[c])
                .map(|((&v, &mu), &var)| {
                    let d = v - mu;
                    -half * (log_two_pi + var.ln()) - d * d / (T::of(2.0) * var)
                })
                .sum();
            self.priors[c].ln() + log_lik
        }))
    }

    /// Equal scores resolve to class 1.
    pub fn predict(&self, x: &[T]) -> Result<NbPrediction<T>> {
        let log_posteriors = self.log_posteriors(x)?;
        let label = if log_posteriors[1] > log_posteriors[0] {
            ClassLabel::Class2
        } else {
            ClassLabel::Class1
        };
        Ok(NbPrediction { label, log_posteriors })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{DatasetMeta, Sample, Signal};
    use proptest::prelude::*;

    use ClassLabel::{Class1, Class2};

    fn dataset(rows: &[(&[f64], ClassLabel)]) -> LabeledDataset<f64> {
        let samples = rows
            .iter()
            .map(|(v, l)| Sample {
                signal: Signal::new(v.to_vec()).unwrap(),
                label: *l,
            })
            .collect();
        LabeledDataset::new(samples, DatasetMeta::default()).unwrap()
    }

    fn four_points() -> LabeledDataset<f64> {
        dataset(&[(&[0.0], Class1), (&[2.0], Class1), (&[10.0], Class2), (&[12.0], Class2)])
    }

    #[test]
    fn hand_computed_statistics() {
        let m = nb_train(&four_points(), &NbParams::default()).unwrap();
        assert_eq!(m.priors, [0.5, 0.5]);
        assert_eq!(m.means, [vec![1.0], vec![11.0]]);
        assert_eq!(m.variances, [vec![1.0], vec![1.0]]);
        // Pooled variance of {0, 2, 10, 12} is 26.
        assert!((m.var_floor - 26e-9).abs() < 1e-20);
    }

    #[test]
    fn hand_computed_posterior() {
        let m = nb_train(&four_points(), &NbParams::default()).unwrap();
        let p = m.predict(&[0.5]).unwrap();
        let base = 0.5f64.ln() - 0.5 * (2.0 * std::f64::consts::PI).ln();
        assert!((p.log_posteriors[0] - (base - 0.125)).abs() < 1e-12);
        assert!((p.log_posteriors[1] - (base - 55.125)).abs() < 1e-12);
        assert_eq!(p.label, Class1);
        assert_eq!(m.predict(&[12.0]).unwrap().label, Class2);
    }

    #[test]
    fn balanced_split_gives_even_priors() {
        let rows: Vec<(Vec<f64>, ClassLabel)> = (0..80)
            .map(|i| (vec![i as f64], if i < 40 { Class1 } else { Class2 }))
            .collect();
        let refs: Vec<(&[f64], ClassLabel)> = rows.iter().map(|(v, l)| (v.as_slice(), *l)).collect();
        let m = nb_train(&dataset(&refs), &NbParams::default()).unwrap();
        assert_eq!(m.priors, [0.5, 0.5]);
    }

    #[test]
    fn constant_feature_is_neutral() {
        let ds = dataset(&[(&[3.0], Class1), (&[3.0], Class1), (&[3.0], Class2)]);
        let m = nb_train(&ds, &NbParams::default()).unwrap();
        assert_eq!(m.variances, [vec![m.var_floor], vec![m.var_floor]]);
        assert_eq!(m.var_floor, 1e-9);
        let p = m.log_posteriors(&[3.0]).unwrap();
        let diff = p[0] - p[1];
        assert!((diff - (m.priors[0].ln() - m.priors[1].ln())).abs() < 1e-12);
        assert!(p.iter().all(|v| v.is_finite()));
    }

    #[test]
    fn tie_goes_to_class_one() {
        let ds = dataset(&[(&[-1.0], Class1), (&[-3.0], Class1), (&[1.0], Class2), (&[3.0], Class2)]);
        let m = nb_train(&ds, &NbParams::default()).unwrap();
        let p = m.predict(&[0.0]).unwrap();
        assert_eq!(p.log_posteriors[0], p.log_posteriors[1]);
        assert_eq!(p.label, Class1);
    }

    #[test]
    fn errors() {
        let m = nb_train(&four_points(), &NbParams::default()).unwrap();
        assert!(matches!(
            m.predict(&[1.0, 2.0]),
            Err(Error::DimensionMismatch { expected: 1, found: 2 })
        ));
        let rows: [&[f64]; 2] = [&[1.0], &[2.0]];
        assert!(matches!(
            NbModel::fit(&rows, &[Class1, Class1], &NbParams::default()),
            Err(Error::EmptyClass { class: Class2, .. })
        ));
    }

    fn labels_for(n: usize) -> Vec<ClassLabel> {
        (0..n).map(|i| if i % 2 == 0 { Class1 } else { Class2 }).collect()
    }

    proptest! {
        #[test]
        fn scaling_all_features_keeps_predictions(
            data in prop::collection::vec(prop::collection::vec(-100.0f64..100.0, 3), 4..12),
            probe in prop::collection::vec(-100.0f64..100.0, 3),
            scale in 0.01f64..100.0,
        ) {
            let labels = labels_for(data.len());
            let rows: Vec<&[f64]> = data.iter().map(|r| r.as_slice()).collect();
            let scaled: Vec<Vec<f64>> = data.iter().map(|r| r.iter().map(|v| v * scale).collect()).collect();
            let srows: Vec<&[f64]> = scaled.iter().map(|r| r.as_slice()).collect();
            let p = NbParams::default();
            let a = NbModel::fit(&rows, &labels, &p).unwrap().log_posteriors(&probe).unwrap();
            let sprobe: Vec<f64> = probe.iter().map(|v| v * scale).collect();
            let b = NbModel::fit(&srows, &labels, &p).unwrap().log_posteriors(&sprobe).unwrap();
            // Scaling adds the same -dim*ln(scale) to both classes.
            let margin_a = a[0] - a[1];
            let margin_b = b[0] - b[1];
            prop_assume!(margin_a.abs() > 1e-6 * (1.0 + a[0].abs()));
            prop_assert_eq!(margin_a > 0.0, margin_b > 0.0);
            prop_assert!(a.iter().chain(b.iter()).all(|v| v.is_finite()));
        }

        #[test]
        fn feature_permutation_keeps_predictions(
            data in prop::collection::vec(prop::collection::vec(-10.0f64..10.0, 4), 4..10),
            probe in prop::collection::vec(-10.0f64..10.0, 4),
        ) {
            let perm = [2usize, 0, 3, 1];
            let labels = labels_for(data.len());
            let permuted: Vec<Vec<f64>> = data.iter().map(|r| perm.iter().map(|&j| r[j]).collect()).collect();
            let rows: Vec<&[f64]> = data.iter().map(|r| r.as_slice()).collect();
            let prows: Vec<&[f64]> = permuted.iter().map(|r| r.as_slice()).collect();
            let pprobe: Vec<f64> = perm.iter().map(|&j| probe[j]).collect();
            let p = NbParams::default();
            let a = NbModel::fit(&rows, &labels, &p).unwrap().predict(&probe).unwrap();
            let b = NbModel::fit(&prows, &labels, &p).unwrap().predict(&pprobe).unwrap();
            prop_assume!((a.log_posteriors[0] - a.log_posteriors[1]).abs() > 1e-9);
            prop_assert_eq!(a.label, b.label);
        }
    }
}
