//! Trigonometric-interpolation differentiation of periodic samples.
//!
//! Samples `f_j = f(2πj/N)` are transformed, multiplied by `(im)^order` for
//! wavenumbers `m ∈ [-N/2, N/2)`, and transformed back. The Nyquist mode is
//! dropped for odd orders (its derivative is not real-valued) and kept with
//! weight `-(N/2)^2` for the second derivative.

use std::fmt;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{ensure_finite, Error, Result};

/// Derivative order accepted by [`SpectralDiff::derivative`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    First,
    Second,
}

impl TryFrom<u32> for Order {
    type Error = Error;

    fn try_from(order: u32) -> Result<Self> {
        match order {
            1 => Ok(Order::First),
            2 => Ok(Order::Second),
            other => Err(Error::InvalidConfig(format!(
                "derivative order must be 1 or 2, got {other}"
            ))),
        }
    }
}

/// Planned forward/inverse transforms for one sample count.
#[derive(Clone)]
pub struct SpectralDiff {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for SpectralDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralDiff").field("n", &self.n).finish()
    }
}

impl SpectralDiff {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Checked derivative: rejects non-finite input and length mismatches.
    pub fn derivative(&self, values: &[f64], order: Order) -> Result<Vec<f64>> {
        if values.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: values.len(),
            });
        }
        ensure_finite(values, "periodic samples")?;
        Ok(self.derivative_unchecked(values, order))
    }

    /// Hot-path derivative used by the solvers; the caller guarantees length.
    pub(crate) fn derivative_unchecked(&self, values: &[f64], order: Order) -> Vec<f64> {
        let n = self.n;
        let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.forward.process(&mut buf);
        let half = n / 2;
        let scale = 1.0 / n as f64;
        for (j, c) in buf.iter_mut().enumerate() {
            let m = if j < half {
                j as f64
            } else {
                j as f64 - n as f64
            };
            *c = match order {
                Order::First if j == half => Complex64::new(0.0, 0.0),
                Order::First => Complex64::new(-c.im * m, c.re * m) * scale,
                Order::Second => *c * (-m * m * scale),
            };
        }
        self.inverse.process(&mut buf);
        buf.into_iter().map(|c| c.re).collect()
    }

    /// Both derivatives from a single forward transform.
    pub(crate) fn first_and_second(&self, values: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let n = self.n;
        let mut spec: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.forward.process(&mut spec);
        let half = n / 2;
        let scale = 1.0 / n as f64;
        let mut d1 = spec.clone();
        for (j, (c1, c2)) in d1.iter_mut().zip(spec.iter_mut()).enumerate() {
            let m = if j < half {
                j as f64
            } else {
                j as f64 - n as f64
            };
            let c = *c2;
            *c1 = if j == half {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(-c.im * m, c.re * m) * scale
            };
            *c2 = c * (-m * m * scale);
        }
        self.inverse.process(&mut d1);
        self.inverse.process(&mut spec);
        (
            d1.into_iter().map(|c| c.re).collect(),
            spec.into_iter().map(|c| c.re).collect(),
        )
    }
}

/// Derivative of order 1 or 2 of uniformly sampled periodic data on `[0, 2π)`.
///
/// Plans the transforms on every call; solvers keep a [`SpectralDiff`] instead.
pub fn periodic_derivative(values: &[f64], order: u32) -> Result<Vec<f64>> {
    let order = Order::try_from(order)?;
    if values.len() < 2 || !values.len().is_multiple_of(2) {
        return Err(Error::InvalidGrid(format!(
            "periodic derivative needs an even sample count, got {}",
            values.len()
        )));
    }
    SpectralDiff::new(values.len()).derivative(values, order)
}
