//! Fourier and discrete Hilbert transforms, and phase extraction.
//!
//! Spectra use the standard 0-based layout (bin 0 is DC). The 1-based
//! `G(k)`, `k = 1..=N`, with exponent `k (n - 1)` is bin `k mod N`; both
//! classifiers are invariant to a fixed feature permutation, so phase
//! features are emitted in storage order.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::types::{BinConvention, PhaseVector, Signal, Spectrum};

/// Magnitudes below `NEAR_ZERO_RATIO * ||g||` are counted as numerically
/// meaningless in reports. They are not altered.
pub const NEAR_ZERO_RATIO: f64 = 1e-12;

/// How the Hilbert-domain phase feature is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DhtMode {
    /// Instantaneous phase `arg(g + i * hilbert(g))`.
    #[default]
    Analytic,
    /// `arg(hilbert(g))` of the real transform, which is 0 or pi.
    Literal,
}

impl fmt::Display for DhtMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DhtMode::Analytic => "analytic",
            DhtMode::Literal => "literal",
        })
    }
}

impl FromStr for DhtMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "analytic" => Ok(DhtMode::Analytic),
            "literal" => Ok(DhtMode::Literal),
            other => Err(Error::InvalidParams(format!("unknown dht mode '{other}'"))),
        }
    }
}

/// Per-bin factors of the asymmetric quarter-turn phase shift: `-i` on
/// positive frequencies, `+i` on negative ones, 0 on DC and (for even
/// lengths) on the Nyquist bin.
#[derive(Debug, Clone, PartialEq)]
pub struct HilbertMultiplier<T> {
    factors: Vec<Complex<T>>,
}

impl<T: Scalar> HilbertMultiplier<T> {
    pub fn new(n: usize) -> Self {
        let minus_i = Complex::new(T::zero(), -T::one());
        let plus_i = Complex::new(T::zero(), T::one());
        let factors = (0..n)
            .map(|k| {
                if k == 0 || 2 * k == n {
                    Complex::new(T::zero(), T::zero())
                } else if 2 * k < n {
                    minus_i
                } else {
                    plus_i
                }
            })
            .collect();
        Self { factors }
    }

    pub fn factors(&self) -> &[Complex<T>] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }
}

/// FFT plans and the Hilbert multiplier for one transform length, reused
/// across every sample of a dataset.
#[derive(Clone)]
pub struct SpectralPlan<T: Scalar> {
    n: usize,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
    multiplier: HilbertMultiplier<T>,
}

impl<T: Scalar> fmt::Debug for SpectralPlan<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralPlan").field("n", &self.n).finish()
    }
}

impl<T: Scalar> SpectralPlan<T> {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
            multiplier: HilbertMultiplier::new(n),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    fn check(&self, g: &Signal<T>, min: usize) -> Result<()> {
        if g.len() < min {
            return Err(Error::SignalTooShort { min, len: g.len() });
        }
        if g.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: g.len(),
            });
        }
        Ok(())
    }

    pub fn dft(&self, g: &Signal<T>) -> Result<Spectrum<T>> {
        self.check(g, 1)?;
        let mut buf: Vec<Complex<T>> = g.as_slice().iter().map(|&v| Complex::new(v, T::zero())).collect();
        self.forward.process(&mut buf);
        Ok(Spectrum::new(buf, BinConvention::ZeroBased))
    }

    /// Normalized inverse transform (`1/N` scaling).
    pub fn idft(&self, spectrum: &Spectrum<T>) -> Result<Vec<Complex<T>>> {
        if spectrum.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: spectrum.len(),
            });
        }
        let mut buf = spectrum.bins().to_vec();
        self.inverse.process(&mut buf);
        let scale = T::one() / T::of_usize(self.n);
        buf.iter_mut().for_each(|z| *z = *z * scale);
        Ok(buf)
    }

    /// Inverse transform of the multiplied spectrum, before discarding the
    /// imaginary part.
    pub fn hilbert_complex(&self, g: &Signal<T>) -> Result<Vec<Complex<T>>> {
        self.check(g, 2)?;
        let spectrum = self.dft(g)?;
        let shifted: Vec<Complex<T>> = spectrum
            .bins()
            .iter()
            .zip(self.multiplier.factors())
            .map(|(&z, &h)| z * h)
            .collect();
        self.idft(&Spectrum::new(shifted, BinConvention::ZeroBased))
    }

    pub fn hilbert(&self, g: &Signal<T>) -> Result<Signal<T>> {
        let raw = self.hilbert_complex(g)?;
        Signal::new(raw.into_iter().map(|z| z.re).collect())
    }

    pub fn dft_phase(&self, g: &Signal<T>) -> Result<PhaseVector<T>> {
        Ok(phase(&self.dft(g)?))
    }

    pub fn dht_phase(&self, g: &Signal<T>, mode: DhtMode) -> Result<PhaseVector<T>> {
        let h = self.hilbert(g)?;
        let angles = match mode {
            DhtMode::Analytic => g
                .as_slice()
                .iter()
                .zip(h.as_slice())
                .map(|(&re, &im)| arg(Complex::new(re, im)))
                .collect(),
            DhtMode::Literal => h
                .as_slice()
                .iter()
                .map(|&re| arg(Complex::new(re, T::zero())))
                .collect(),
        };
        PhaseVector::new(angles)
    }

    /// Analytic signal `g + i * hilbert(g)`.
    pub fn analytic(&self, g: &Signal<T>) -> Result<Vec<Complex<T>>> {
        let h = self.hilbert(g)?;
        Ok(g.as_slice()
            .iter()
            .zip(h.as_slice())
            .map(|(&re, &im)| Complex::new(re, im))
            .collect())
    }
}

/// Angle in `(-pi, pi]`, with `arg(0) = 0`.
pub fn arg<T: Scalar>(z: Complex<T>) -> T {
    if z.re == T::zero() && z.im == T::zero() {
        return T::zero();
    }
    let a = z.im.atan2(z.re);
    if a <= -T::PI() {
        T::PI()
    } else {
        a
    }
}

pub fn phase<T: Scalar>(s: &Spectrum<T>) -> PhaseVector<T> {
    PhaseVector::new(s.bins().iter().map(|&z| arg(z)).collect()).expect("arg always lands in (-pi, pi]")
}

/// Number of complex values whose magnitude is below
/// `NEAR_ZERO_RATIO * reference_norm`.
pub fn count_near_zero<T: Scalar>(values: &[Complex<T>], reference_norm: T) -> usize {
    let threshold = T::of(NEAR_ZERO_RATIO) * reference_norm;
    values.iter().filter(|z| z.norm() < threshold).count()
}

pub fn dft<T: Scalar>(g: &Signal<T>) -> Result<Spectrum<T>> {
    SpectralPlan::new(g.len()).dft(g)
}

pub fn hilbert<T: Scalar>(g: &Signal<T>) -> Result<Signal<T>> {
    SpectralPlan::new(g.len()).hilbert(g)
}

pub fn dht_phase<T: Scalar>(g: &Signal<T>, mode: DhtMode) -> Result<PhaseVector<T>> {
    SpectralPlan::new(g.len()).dht_phase(g, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn sig(v: Vec<f64>) -> Signal<f64> {
        Signal::new(v).unwrap()
    }

    #[test]
    fn constant_signal_has_only_dc() {
        let n = 12;
        let s = dft(&sig(vec![2.5; n])).unwrap();
        for k in 1..n {
            assert_abs_diff_eq!(s.one_based_bin(k).norm(), 0.0, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(s.one_based_bin(n).re, 30.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.one_based_bin(n).im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn delta_at_first_sample_is_flat() {
        let s = dft(&sig(vec![1.0, 0.0, 0.0, 0.0])).unwrap();
        for z in s.bins() {
            assert_abs_diff_eq!(z.re, 1.0, epsilon = 1e-15);
            assert_abs_diff_eq!(z.im, 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn phase_of_basic_values() {
        let real = Spectrum::new(vec![Complex::new(1.0, 0.0); 3], BinConvention::ZeroBased);
        assert!(phase(&real).as_slice().iter().all(|&a| a == 0.0));
        assert_abs_diff_eq!(arg(Complex::new(0.0, 1.0)), FRAC_PI_2);
        assert_eq!(arg(Complex::new(0.0f64, 0.0)), 0.0);
        assert_eq!(arg(Complex::new(-0.0f64, -0.0)), 0.0);
        assert_eq!(arg(Complex::new(-1.0, -0.0)), PI);
        assert_eq!(arg(Complex::new(-1.0, 0.0)), PI);
    }

    #[test]
    fn sine_fundamental_is_minus_i() {
        let n = 32;
        let g = sig((0..n).map(|i| (2.0 * PI * i as f64 / n as f64).sin()).collect());
        let p = phase(&dft(&g).unwrap());
        assert_abs_diff_eq!(p.as_slice()[1], -FRAC_PI_2, epsilon = 1e-12);
    }

    #[test]
    fn multiplier_layout() {
        let even = HilbertMultiplier::<f64>::new(6);
        let im: Vec<f64> = even.factors().iter().map(|z| z.im).collect();
        assert_eq!(im, vec![0.0, -1.0, -1.0, 0.0, 1.0, 1.0]);
        let odd = HilbertMultiplier::<f64>::new(5);
        let im: Vec<f64> = odd.factors().iter().map(|z| z.im).collect();
        assert_eq!(im, vec![0.0, -1.0, -1.0, 1.0, 1.0]);
        for h in [even, odd] {
            let n = h.len();
            for k in 1..n {
                assert_eq!(h.factors()[k], h.factors()[n - k].conj());
                assert!(h.factors()[k].re == 0.0);
            }
        }
    }

    #[test]
    fn hilbert_of_constant_is_zero() {
        let h = hilbert(&sig(vec![3.0; 9])).unwrap();
        assert!(h.as_slice().iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn hilbert_rejects_single_sample() {
        assert!(matches!(
            hilbert(&sig(vec![1.0])),
            Err(Error::SignalTooShort { min: 2, len: 1 })
        ));
    }

    #[test]
    fn literal_mode_is_sign_pattern() {
        // hilbert(-sin) over 4 samples alternates like [1, -1, 1, -1] only
        // for specific inputs, so check the arg rule directly as well.
        let plan = SpectralPlan::<f64>::new(4);
        let g = sig(vec![0.0, -1.0, 0.0, 1.0]);
        let h = plan.hilbert(&g).unwrap();
        let lit = plan.dht_phase(&g, DhtMode::Literal).unwrap();
        for (a, v) in lit.as_slice().iter().zip(h.as_slice()) {
            if *v > 1e-12 {
                assert_eq!(*a, 0.0);
            } else if *v < -1e-12 {
                assert_eq!(*a, PI);
            }
        }
        let pattern: Vec<f64> = [1.0, -1.0, 1.0, -1.0]
            .iter()
            .map(|&v| arg(Complex::new(v, 0.0)))
            .collect();
        assert_eq!(pattern, vec![0.0, PI, 0.0, PI]);
    }

    #[test]
    fn zero_signal_has_zero_analytic_phase() {
        let p = dht_phase(&sig(vec![0.0; 16]), DhtMode::Analytic).unwrap();
        assert!(p.as_slice().iter().all(|&a| a == 0.0));
    }

    #[test]
    fn analytic_phase_of_cosine_tracks_its_argument() {
        let n = 64;
        let g = sig((0..n).map(|i| (2.0 * PI * i as f64 / n as f64).cos()).collect());
        let p = dht_phase(&g, DhtMode::Analytic).unwrap();
        for (i, &a) in p.as_slice().iter().enumerate() {
            let theta = 2.0 * PI * i as f64 / n as f64;
            let expected = arg(Complex::new(theta.cos(), theta.sin()));
            let d = (a - expected).rem_euclid(2.0 * PI);
            assert!(d.min(2.0 * PI - d) < 1e-9, "n={i}: {a} vs {expected}");
        }
    }

    #[test]
    fn dht_mode_parses() {
        assert_eq!("Literal".parse::<DhtMode>().unwrap(), DhtMode::Literal);
        assert!("polar".parse::<DhtMode>().is_err());
        assert_eq!(DhtMode::default().to_string(), "analytic");
    }

    #[test]
    fn f32_transform_runs() {
        let g = Signal::new(vec![1.0f32, 2.0, 3.0, 4.0]).unwrap();
        let s = dft(&g).unwrap();
        assert!((s.bins()[0].re - 10.0).abs() < 1e-5);
        assert_eq!(hilbert(&g).unwrap().len(), 4);
    }

    #[test]
    fn near_zero_counter() {
        let v = [Complex::new(1e-20, 0.0), Complex::new(1.0, 0.0)];
        assert_eq!(count_near_zero(&v, 1.0), 1);
    }
}
