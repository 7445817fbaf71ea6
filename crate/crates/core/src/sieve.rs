//! Random sieve: zero `m` uniformly chosen positions of a signal.
//!
//! Positions are drawn without replacement, so a mask always has exactly
//! `m` zeros.

use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::types::{SieveMask, Signal};

/// Draws `m` distinct positions uniformly from `0..n_total`.
pub fn sample_mask<R: Rng + ?Sized>(n_total: usize, m: usize, rng: &mut R) -> Result<SieveMask> {
    if n_total == 0 {
        return Err(Error::InvalidParams("sieve length must be positive".into()));
    }
    if m > n_total {
        return Err(Error::MOutOfRange { m, n_total });
    }
    let zeros = rand::seq::index::sample(rng, n_total, m).into_vec();
    SieveMask::from_zero_indices(n_total, zeros)
}

/// Coordinate-wise product `f(n) * gamma(n)`. Kept positions are copied
/// unchanged.
pub fn apply_sieve<T: Scalar>(f: &Signal<T>, mask: &SieveMask) -> Result<Signal<T>> {
    if f.len() != mask.n_total() {
        return Err(Error::DimensionMismatch {
            expected: mask.n_total(),
            found: f.len(),
        });
    }
    let mut out = f.as_slice().to_vec();
    for &i in mask.zero_indices() {
        out[i] = T::zero();
    }
    Signal::new(out)
}

/// Default sieve size: half of the positions.
pub fn default_m(n_total: usize) -> usize {
    n_total / 2
}
