//! Linear SVM trained by sequential minimal optimization.
//!
//! The dual `max sum(a) - 1/2 sum_ij a_i a_j y_i y_j <x_i, x_j>` subject to
//! `sum(a_i y_i) = 0`, `0 <= a_i <= C` is solved with second-order working
//! set selection (maximal violating pair, curvature-weighted). A very large
//! `C` stands in for the hard-margin problem.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::types::{ClassLabel, LabeledDataset};

const TAU: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SvmParams {
    /// Box bound on the multipliers.
    pub c_cap: f64,
    /// Stop once the maximal KKT violation drops below this.
    pub kkt_tol: f64,
    /// Iteration budget, in multiples of the training-set size.
    pub max_passes: usize,
}

impl Default for SvmParams {
    fn default() -> Self {
        Self {
            c_cap: 1e8,
            kkt_tol: 1e-3,
            max_passes: 10_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kernel {
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupportVector<T> {
    /// Position in the training set, 0-based.
    pub index: usize,
    pub alpha: T,
    pub label: ClassLabel,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SvmDiagnostics {
    pub iterations: usize,
    pub converged: bool,
    /// Maximal KKT violation when the solver stopped.
    pub kkt_violation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel<T> {
    pub kernel: Kernel,
    pub weights: Vec<T>,
    pub bias: T,
    pub support: Vec<SupportVector<T>>,
    pub diagnostics: SvmDiagnostics,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvmPrediction<T> {
    pub label: ClassLabel,
    pub decision: T,
}

/// Dense symmetric matrix of pairwise inner products.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix<T> {
    n: usize,
    values: Vec<T>,
}

impl<T: Scalar> GramMatrix<T> {
    pub fn linear(rows: &[&[T]]) -> Self {
        let n = rows.len();
        let mut values = vec![T::zero(); n * n];
        for i in 0..n {
            for j in i..n {
                let k = dot(rows[i], rows[j]);
                values[i * n + j] = k;
                values[j * n + i] = k;
            }
        }
        Self { n, values }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.values[i * self.n + j]
    }
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

pub fn svm_train<T: Scalar>(train: &LabeledDataset<T>, params: &SvmParams) -> Result<SvmModel<T>> {
    let rows: Vec<&[T]> = train.samples().iter().map(|s| s.signal.as_slice()).collect();
    SvmModel::fit(&rows, &train.labels(), params)
}

impl<T: Scalar> SvmModel<T> {
    pub fn fit(rows: &[&[T]], labels: &[ClassLabel], params: &SvmParams) -> Result<Self> {
        let all: Vec<usize> = (0..rows.len()).collect();
        Self::fit_subset(rows, labels, &GramMatrix::linear(rows), &all, params)
    }

    /// Trains on `subset` of `rows`, reading inner products from a Gram
    /// matrix over all rows. Support-vector indices refer to positions
    /// within `subset`.
    pub fn fit_subset(
        rows: &[&[T]],
        labels: &[ClassLabel],
        gram: &GramMatrix<T>,
        subset: &[usize],
        params: &SvmParams,
    ) -> Result<Self> {
        assert_eq!(rows.len(), labels.len(), "one label per row");
        assert_eq!(gram.len(), rows.len(), "Gram matrix covers every row");
        let dim = subset.first().map_or(0, |&i| rows[i].len());
        if let Some(&i) = subset.iter().find(|&&i| rows[i].len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: rows[i].len(),
            });
        }
        for class in ClassLabel::ALL {
            if !subset.iter().any(|&i| labels[i] == class) {
                return Err(Error::EmptyClass { class, count: 0 });
            }
        }

        let y: Vec<T> = subset.iter().map(|&i| labels[i].sign()).collect();
        let kernel = |a: usize, b: usize| gram.get(subset[a], subset[b]);
        let solution = smo(&y, kernel, params);

        let mut weights = vec![T::zero(); dim];
        let mut support = Vec::new();
        for (a, &alpha) in solution.alpha.iter().enumerate() {
            if alpha > T::zero() {
                let coef = alpha * y[a];
                for (w, &x) in weights.iter_mut().zip(rows[subset[a]]) {
                    *w = *w + coef * x;
                }
                support.push(SupportVector {
                    index: a,
                    alpha,
                    label: labels[subset[a]],
                });
            }
        }

        Ok(Self {
            kernel: Kernel::Linear,
            weights,
            bias: solution.bias,
            support,
            diagnostics: solution.diagnostics,
        })
    }

    pub fn n_features(&self) -> usize {
        self.weights.len()
    }

    pub fn decision(&self, x: &[T]) -> Result<T> {
        if x.len() != self.n_features() {
            return Err(Error::DimensionMismatch {
                expected: self.n_features(),
                found: x.len(),
            });
        }
        Ok(dot(&self.weights, x) + self.bias)
    }

    /// A decision value of exactly 0 resolves to class 1.
    pub fn predict(&self, x: &[T]) -> Result<SvmPrediction<T>> {
        let decision = self.decision(x)?;
        let label = if decision < T::zero() {
            ClassLabel::Class2
        } else {
            ClassLabel::Class1
        };
        Ok(SvmPrediction { label, decision })
    }
}

struct Solution<T> {
    alpha: Vec<T>,
    bias: T,
    diagnostics: SvmDiagnostics,
}

fn smo<T: Scalar, K: Fn(usize, usize) -> T>(y: &[T], k: K, params: &SvmParams) -> Solution<T> {
    let n = y.len();
    let c = T::of(params.c_cap);
    let eps = T::of(params.kkt_tol);
    let tau = T::of(TAU);
    let max_iter = params.max_passes.saturating_mul(n.max(1));

    let diag: Vec<T> = (0..n).map(|i| k(i, i)).collect();
    let mut alpha = vec![T::zero(); n];
    // Gradient of the minimized dual 1/2 a'Qa - sum(a), Q_ij = y_i y_j K_ij.
    let mut grad = vec![-T::one(); n];

    let at_upper = |a: T| a >= c;
    let at_lower = |a: T| a <= T::zero();
    let positive = |yi: T| yi > T::zero();

    let mut iterations = 0usize;
    let mut violation = T::infinity();
    let mut converged = false;

    while iterations < max_iter {
        // i: maximal violator from the "up" set.
        let mut g_max = T::neg_infinity();
        let mut i_sel = None;
        for t in 0..n {
            let score = if positive(y[t]) {
                if at_upper(alpha[t]) {
                    continue;
                }
                -grad[t]
            } else {
                if at_lower(alpha[t]) {
                    continue;
                }
                grad[t]
            };
            if score >= g_max {
                g_max = score;
                i_sel = Some(t);
            }
        }

        // j: best second-order partner from the "low" set.
        let mut g_max2 = T::neg_infinity();
        let mut j_sel = None;
        let mut best_obj = T::infinity();
        if let Some(i) = i_sel {
            for t in 0..n {
                let (score, grad_diff, quad) = if positive(y[t]) {
                    if at_lower(alpha[t]) {
                        continue;
                    }
                    (
                        grad[t],
                        g_max + grad[t],
                        diag[i] + diag[t] - T::of(2.0) * y[i] * k(i, t),
                    )
                } else {
                    if at_upper(alpha[t]) {
                        continue;
                    }
                    (
                        -grad[t],
                        g_max - grad[t],
                        diag[i] + diag[t] + T::of(2.0) * y[i] * k(i, t),
                    )
                };
                if score >= g_max2 {
                    g_max2 = score;
                }
                if grad_diff > T::zero() {
                    let q = if quad > T::zero() { quad } else { tau };
                    let obj = -(grad_diff * grad_diff) / q;
                    if obj <= best_obj {
                        best_obj = obj;
                        j_sel = Some(t);
                    }
                }
            }
        }

        violation = g_max + g_max2;
        let (Some(i), Some(j)) = (i_sel, j_sel) else {
            converged = true;
            break;
        };
        if violation < eps {
            converged = true;
            break;
        }
        iterations += 1;

        let q_ij = y[i] * y[j] * k(i, j);
        let (old_i, old_j) = (alpha[i], alpha[j]);
        if y[i] != y[j] {
            let mut quad = diag[i] + diag[j] + T::of(2.0) * q_ij;
            if quad <= T::zero() {
                quad = tau;
            }
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = alpha[i] - alpha[j];
            alpha[i] = alpha[i] + delta;
            alpha[j] = alpha[j] + delta;
            if diff > T::zero() {
                if alpha[j] < T::zero() {
                    alpha[j] = T::zero();
                    alpha[i] = diff;
                }
            } else if alpha[i] < T::zero() {
                alpha[i] = T::zero();
                alpha[j] = -diff;
            }
            // Both bounds equal C, so `diff > C_i - C_j` reduces to `diff > 0`.
            if diff > T::zero() {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if alpha[j] > c {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            let mut quad = diag[i] + diag[j] - T::of(2.0) * q_ij;
            if quad <= T::zero() {
                quad = tau;
            }
            let delta = (grad[i] - grad[j]) / quad;
            let sum = alpha[i] + alpha[j];
            alpha[i] = alpha[i] - delta;
            alpha[j] = alpha[j] + delta;
            if sum > c {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if alpha[j] < T::zero() {
                alpha[j] = T::zero();
                alpha[i] = sum;
            }
            if sum > c {
                if alpha[j] > c {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if alpha[i] < T::zero() {
                alpha[i] = T::zero();
                alpha[j] = sum;
            }
        }

        let (d_i, d_j) = (alpha[i] - old_i, alpha[j] - old_j);
        for t in 0..n {
            grad[t] = grad[t] + y[t] * (y[i] * k(t, i) * d_i + y[j] * k(t, j) * d_j);
        }
    }

    // Offset from free multipliers, or the midpoint of the feasible range.
    let mut upper = T::infinity();
    let mut lower = T::neg_infinity();
    let mut free_sum = T::zero();
    let mut free = 0usize;
    for t in 0..n {
        let yg = y[t] * grad[t];
        let up = at_upper(alpha[t]);
        let low = at_lower(alpha[t]);
        if up {
            if positive(y[t]) {
                lower = lower.max(yg);
            } else {
                upper = upper.min(yg);
            }
        } else if low {
            if positive(y[t]) {
                upper = upper.min(yg);
            } else {
                lower = lower.max(yg);
            }
        } else {
            free += 1;
            free_sum = free_sum + yg;
        }
    }
    let rho = if free > 0 {
        free_sum / T::of_usize(free)
    } else {
        (upper + lower) / T::of(2.0)
    };

    Solution {
        alpha,
        bias: -rho,
        diagnostics: SvmDiagnostics {
            iterations,
            converged,
            kkt_violation: if converged && !violation.is_finite() {
                0.0
            } else {
                violation.as_f64()
            },
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ClassLabel::{Class1, Class2};

    fn fit(points: &[[f64; 2]], labels: &[ClassLabel]) -> SvmModel<f64> {
        let rows: Vec<&[f64]> = points.iter().map(|p| p.as_slice()).collect();
        SvmModel::fit(&rows, labels, &SvmParams::default()).unwrap()
    }

    #[test]
    fn two_point_problem_has_analytic_solution() {
        let m = fit(&[[1.0, 1.0], [-1.0, -1.0]], &[Class1, Class2]);
        assert!((m.weights[0] - 0.5).abs() < 1e-9 && (m.weights[1] - 0.5).abs() < 1e-9);
        assert!(m.bias.abs() < 1e-9);
        assert_eq!(m.support.len(), 2);
        for sv in &m.support {
            assert!((sv.alpha - 0.25).abs() < 1e-9);
        }
        let norm = (m.weights[0].powi(2) + m.weights[1].powi(2)).sqrt();
        assert!((1.0 / norm - std::f64::consts::SQRT_2).abs() < 1e-9);
        assert!(m.diagnostics.converged);

        assert_eq!(m.predict(&[2.0, 2.0]).unwrap().label, Class1);
        assert_eq!(m.predict(&[-3.0, -3.0]).unwrap().label, Class2);
        let at_origin = m.predict(&[0.0, 0.0]).unwrap();
        assert_eq!(at_origin.decision, 0.0);
        assert_eq!(at_origin.label, Class1);
    }

    #[test]
    fn vertical_pair_gives_horizontal_separator() {
        let m = fit(&[[0.0, 1.0], [0.0, -1.0]], &[Class1, Class2]);
        assert!(m.weights[0].abs() < 1e-12);
        assert!(m.weights[1] > 0.0);
        assert!(m.bias.abs() < 1e-12);
    }

    fn toy() -> (Vec<[f64; 2]>, Vec<ClassLabel>) {
        let pts = vec![
            [2.0, 3.0],
            [3.0, 3.5],
            [2.5, 1.0],
            [4.0, 2.0],
            [3.0, 5.0],
            [-1.0, 0.0],
            [0.0, -1.5],
            [-2.0, 1.0],
            [0.5, -0.5],
            [-1.0, -2.0],
        ];
        let labels = (0..10).map(|i| if i < 5 { Class1 } else { Class2 }).collect();
        (pts, labels)
    }

    #[test]
    fn kkt_and_duality_on_separable_set() {
        let (pts, labels) = toy();
        let params = SvmParams::default();
        let m = fit(&pts, &labels);
        assert!(m.diagnostics.converged);

        let balance: f64 = m.support.iter().map(|sv| sv.alpha * sv.label.sign::<f64>()).sum();
        assert!(balance.abs() < 1e-6);
        assert!(m.support.iter().all(|sv| sv.alpha > 0.0));

        for sv in &m.support {
            let f = m.decision(&pts[sv.index]).unwrap();
            let y = sv.label.sign::<f64>();
            assert!(
                (y * f - 1.0).abs() <= 10.0 * params.kkt_tol,
                "sv {}: {}",
                sv.index,
                y * f
            );
        }
        for (p, l) in pts.iter().zip(&labels) {
            assert!(l.sign::<f64>() * m.decision(p).unwrap() >= 1.0 - 10.0 * params.kkt_tol);
        }

        let w2: f64 = m.weights.iter().map(|w| w * w).sum();
        let primal = 0.5 * w2;
        let dual: f64 = m.support.iter().map(|sv| sv.alpha).sum::<f64>() - 0.5 * w2;
        assert!((primal - dual).abs() / primal <= 1e-3, "primal {primal}, dual {dual}");
    }

    #[test]
    fn training_is_deterministic() {
        let (pts, labels) = toy();
        assert_eq!(fit(&pts, &labels), fit(&pts, &labels));
    }

    #[test]
    fn subset_training_matches_direct_training() {
        let (pts, labels) = toy();
        let rows: Vec<&[f64]> = pts.iter().map(|p| p.as_slice()).collect();
        let gram = GramMatrix::linear(&rows);
        let subset: Vec<usize> = (0..10).filter(|&i| i != 3).collect();
        let via_gram = SvmModel::fit_subset(&rows, &labels, &gram, &subset, &SvmParams::default()).unwrap();
        let sub_rows: Vec<&[f64]> = subset.iter().map(|&i| rows[i]).collect();
        let sub_labels: Vec<ClassLabel> = subset.iter().map(|&i| labels[i]).collect();
        let direct = SvmModel::fit(&sub_rows, &sub_labels, &SvmParams::default()).unwrap();
        assert_eq!(via_gram, direct);
    }

    #[test]
    fn iteration_budget_is_reported() {
        let (pts, labels) = toy();
        let rows: Vec<&[f64]> = pts.iter().map(|p| p.as_slice()).collect();
        let params = SvmParams {
            max_passes: 0,
            ..SvmParams::default()
        };
        let m = SvmModel::fit(&rows, &labels, &params).unwrap();
        assert!(!m.diagnostics.converged);
        assert_eq!(m.diagnostics.iterations, 0);
    }

    #[test]
    fn errors() {
        let rows: [&[f64]; 2] = [&[1.0], &[2.0]];
        assert!(matches!(
            SvmModel::fit(&rows, &[Class2, Class2], &SvmParams::default()),
            Err(Error::EmptyClass { class: Class1, .. })
        ));
        let m = fit(&[[1.0, 1.0], [-1.0, -1.0]], &[Class1, Class2]);
        assert!(matches!(
            m.predict(&[1.0]),
            Err(Error::DimensionMismatch { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn feature_permutation_keeps_predictions() {
        let (pts, labels) = toy();
        let swapped: Vec<[f64; 2]> = pts.iter().map(|p| [p[1], p[0]]).collect();
        let a = fit(&pts, &labels);
        let b = fit(&swapped, &labels);
        for p in [[0.3, 2.0], [1.0, 1.0], [-4.0, 9.0], [2.0, -1.0]] {
            let da = a.decision(&p).unwrap();
            let db = b.decision(&[p[1], p[0]]).unwrap();
            assert!((da - db).abs() < 1e-9);
            assert_eq!(a.predict(&p).unwrap().label, b.predict(&[p[1], p[0]]).unwrap().label);
        }
    }

    #[test]
    fn f32_two_point_problem() {
        let pts: [[f32; 2]; 2] = [[1.0, 1.0], [-1.0, -1.0]];
        let rows: Vec<&[f32]> = pts.iter().map(|p| p.as_slice()).collect();
        let m = SvmModel::fit(&rows, &[Class1, Class2], &SvmParams::default()).unwrap();
        assert!((m.weights[0] - 0.5).abs() < 1e-5);
        assert!(m.bias.abs() < 1e-5);
    }
}
