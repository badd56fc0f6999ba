//! Finite complex-valued discrete-time sequences and the index-domain
//! transformations shared by every pipeline in the crate.
//!
//! A [`Signal`] stores its samples densely, an optional sample rate in Hz,
//! and the index `n0` of the first stored sample (`origin_index`), so that
//! truncated two-sided sequences and filter-delay bookkeeping stay explicit.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::TAU;

/// Relative imaginary-part bound under which a signal counts as real.
const REALNESS_TOL: f64 = 1e-12;

/// A finite complex-valued discrete-time sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    samples: Vec<Complex64>,
    sample_rate: Option<f64>,
    origin_index: i64,
}

impl Signal {
    /// Builds a signal from complex samples. Panics if `samples` is empty.
    pub fn from_complex(samples: Vec<Complex64>) -> Self {
        assert!(!samples.is_empty(), "signal must be non-empty");
        Self {
            samples,
            sample_rate: None,
            origin_index: 0,
        }
    }

    /// Builds a real-valued signal. Panics if `samples` is empty.
    pub fn from_real(samples: &[f64]) -> Self {
        Self::from_complex(samples.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Attaches a sample rate in Hz. Panics unless `fs` is strictly positive.
    pub fn with_sample_rate(mut self, fs: f64) -> Self {
        assert!(fs > 0.0, "sample rate must be strictly positive");
        self.sample_rate = Some(fs);
        self
    }

    /// Sets the index of the first stored sample.
    pub fn with_origin(mut self, n0: i64) -> Self {
        self.origin_index = n0;
        self
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        false // non-emptiness is a construction invariant
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn sample_rate(&self) -> Option<f64> {
        self.sample_rate
    }

    pub fn origin_index(&self) -> i64 {
        self.origin_index
    }

    /// Real parts of all samples.
    pub fn real_part(&self) -> Vec<f64> {
        self.samples.iter().map(|c| c.re).collect()
    }

    /// Elementwise magnitudes.
    pub fn magnitudes(&self) -> Vec<f64> {
        self.samples.iter().map(|c| c.norm()).collect()
    }

    /// Cheap realness predicate: max |imag| <= 1e-12 * max |sample|.
    pub fn is_real(&self) -> bool {
        let max_mag = self.samples.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let max_im = self.samples.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
        max_im <= REALNESS_TOL * max_mag
    }

    fn like(&self, samples: Vec<Complex64>) -> Signal {
        Signal {
            samples,
            sample_rate: self.sample_rate,
            origin_index: self.origin_index,
        }
    }

    /// Circular shift by `m` samples: `y[n] = x[((n - m)) mod N]`.
    pub fn circular_shift(&self, m: i64) -> Signal {
        let n = self.len() as i64;
        let samples = (0..n)
            .map(|i| self.samples[(i - m).rem_euclid(n) as usize])
            .collect();
        self.like(samples)
    }

    /// Circular time reversal: `y[n] = x[((-n)) mod N]`.
    pub fn circular_reverse(&self) -> Signal {
        let n = self.len() as i64;
        let samples = (0..n)
            .map(|i| self.samples[(-i).rem_euclid(n) as usize])
            .collect();
        self.like(samples)
    }

    /// Elementwise complex conjugate.
    pub fn conjugate(&self) -> Signal {
        self.like(self.samples.iter().map(|c| c.conj()).collect())
    }

    /// `y[n] = (-1)^n x[n]`. Equals `modulate(N/2)` for even N.
    pub fn alternate_sign(&self) -> Signal {
        let samples = self
            .samples
            .iter()
            .enumerate()
            .map(|(i, &c)| if i % 2 == 0 { c } else { -c })
            .collect();
        self.like(samples)
    }

    /// `y[n] = x[n] * exp(j 2 pi k0 n / N)`.
    pub fn modulate(&self, k0: f64) -> Signal {
        let n = self.len() as f64;
        let samples = self
            .samples
            .iter()
            .enumerate()
            .map(|(i, &c)| c * Complex64::from_polar(1.0, TAU * k0 * i as f64 / n))
            .collect();
        self.like(samples)
    }

    /// Inserts `l - 1` zeros after every sample; output length `N * l`,
    /// origin scaled by `l`.
    pub fn zero_interleave(&self, l: usize) -> Signal {
        assert!(l >= 1, "interleave factor must be >= 1");
        let mut samples = Vec::with_capacity(self.len() * l);
        for &c in &self.samples {
            samples.push(c);
            for _ in 1..l {
                samples.push(Complex64::new(0.0, 0.0));
            }
        }
        Signal {
            samples,
            sample_rate: self.sample_rate,
            origin_index: self.origin_index * l as i64,
        }
    }

    /// Concatenates `r` copies of the sequence.
    pub fn repeat(&self, r: usize) -> Signal {
        assert!(r >= 1, "repeat count must be >= 1");
        let mut samples = Vec::with_capacity(self.len() * r);
        for _ in 0..r {
            samples.extend_from_slice(&self.samples);
        }
        self.like(samples)
    }

    /// Keeps stored samples at positions 0, M, 2M, ... The origin divides by
    /// M (exact when `origin_index` is a multiple of M).
    pub fn decimate(&self, m: usize) -> Signal {
        assert!(m >= 1, "decimation factor must be >= 1");
        let samples = self.samples.iter().step_by(m).copied().collect();
        Signal {
            samples,
            sample_rate: self.sample_rate,
            origin_index: self.origin_index.div_euclid(m as i64),
        }
    }

    /// Sum of squared magnitudes.
    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Subtracts the mean of the real parts (imaginary parts untouched).
    pub fn remove_mean(&self) -> Signal {
        let mean = self.samples.iter().map(|c| c.re).sum::<f64>() / self.len() as f64;
        self.like(
            self.samples
                .iter()
                .map(|&c| Complex64::new(c.re - mean, c.im))
                .collect(),
        )
    }
}

/// Full linear convolution; output length `Nx + Nh - 1`, origins add.
/// The sample rate is taken from `x`.
pub fn linear_convolve(x: &Signal, h: &Signal) -> Signal {
    let (nx, nh) = (x.len(), h.len());
    let mut out = vec![Complex64::new(0.0, 0.0); nx + nh - 1];
    for (i, &a) in x.samples().iter().enumerate() {
        for (j, &b) in h.samples().iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    let mut y = Signal::from_complex(out).with_origin(x.origin_index() + h.origin_index());
    if let Some(fs) = x.sample_rate() {
        y = y.with_sample_rate(fs);
    }
    y
}

/// Biased autocorrelation over non-negative lags:
/// `r[m] = sum_n x[n] x[n+m]` for `m = 0..N-1`.
///
/// Requires a real signal of length >= 2. With `normalized`, divides by
/// `r[0]`; an all-zero input then has no meaningful normalization and yields
/// [`Error::DegenerateSignal`].
pub fn autocorrelation(x: &Signal, normalized: bool) -> Result<Signal> {
    assert!(x.len() >= 2, "autocorrelation needs at least 2 samples");
    assert!(x.is_real(), "autocorrelation is defined for real signals");
    let v = x.real_part();
    let n = v.len();
    let mut r = vec![0.0; n];
    for (m, rm) in r.iter_mut().enumerate() {
        *rm = v[..n - m].iter().zip(&v[m..]).map(|(a, b)| a * b).sum();
    }
    if normalized {
        let r0 = r[0];
        if r0 <= 0.0 {
            return Err(Error::DegenerateSignal(
                "cannot normalize the autocorrelation of an all-zero signal".into(),
            ));
        }
        for rm in &mut r {
            *rm /= r0;
        }
    }
    let mut out = Signal::from_real(&r);
    if let Some(fs) = x.sample_rate() {
        out = out.with_sample_rate(fs);
    }
    Ok(out)
}

/// Unit impulse of length `n` with the 1 at stored position `at`.
pub fn unit_impulse(n: usize, at: usize) -> Signal {
    assert!(at < n);
    let mut samples = vec![Complex64::new(0.0, 0.0); n];
    samples[at] = Complex64::new(1.0, 0.0);
    Signal::from_complex(samples)
}
