//! Independent reference implementations for the transform tests.

#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;

/// Direct O(N^2) sum, `G[k] = sum_n g[n] exp(-i 2 pi k n / N)`.
pub fn naive_dft(g: &[f64]) -> Vec<Complex64> {
    let n = g.len();
    (0..n)
        .map(|k| {
            g.iter()
                .enumerate()
                .map(|(i, &v)| {
                    // Reduce k*i mod N before scaling to keep the angle small.
                    let a = -2.0 * PI * ((k * i) % n) as f64 / n as f64;
                    Complex64::new(v * a.cos(), v * a.sin())
                })
                .sum()
        })
        .collect()
}

/// Direct O(N^2) inverse with 1/N scaling.
pub fn naive_idft(spec: &[Complex64]) -> Vec<Complex64> {
    let n = spec.len();
    (0..n)
        .map(|i| {
            spec.iter()
                .enumerate()
                .map(|(k, &z)| {
                    let a = 2.0 * PI * ((k * i) % n) as f64 / n as f64;
                    z * Complex64::new(a.cos(), a.sin())
                })
                .sum::<Complex64>()
                / n as f64
        })
        .collect()
}

/// Hilbert transform built from the naive transforms and the textbook
/// -i / +i / 0 frequency response.
pub fn naive_hilbert(g: &[f64]) -> Vec<Complex64> {
    let n = g.len();
    let spec: Vec<Complex64> = naive_dft(g)
        .into_iter()
        .enumerate()
        .map(|(k, z)| {
            if k == 0 || 2 * k == n {
                Complex64::new(0.0, 0.0)
            } else if 2 * k < n {
                z * Complex64::new(0.0, -1.0)
            } else {
                z * Complex64::new(0.0, 1.0)
            }
        })
        .collect();
    naive_idft(&spec)
}

/// Small deterministic generator so oracle inputs do not depend on the
/// crate's own RNG plumbing.
pub struct SplitMix(pub u64);

impl SplitMix {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [-1, 1).
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    }

    pub fn vec(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.unit()).collect()
    }
}
