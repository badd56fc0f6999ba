//! DFT/IDFT engine, a deliberately naive direct-sum oracle, truncated DTFT
//! evaluation and single-sided magnitude spectra.
//!
//! Power-of-two lengths go through an in-place radix-2 decimation-in-time
//! FFT; every other length uses the direct O(N^2) sum so that the code path
//! stays auditable at the small sequence lengths the exercises use. There is
//! no implicit zero padding anywhere: callers pad explicitly.

use crate::error::{Error, Result};
use crate::signal::Signal;
use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

/// Default plotting grid: 512 evenly spaced omegas over [-pi, pi].
pub const DEFAULT_GRID_LEN: usize = 512;

/// Length-N DFT bin vector paired with its N.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    bins: Vec<Complex64>,
    sample_rate: Option<f64>,
}

impl Spectrum {
    pub fn from_bins(bins: Vec<Complex64>, sample_rate: Option<f64>) -> Self {
        assert!(!bins.is_empty(), "spectrum must be non-empty");
        Self { bins, sample_rate }
    }

    pub fn n(&self) -> usize {
        self.bins.len()
    }

    pub fn bins(&self) -> &[Complex64] {
        &self.bins
    }

    pub fn sample_rate(&self) -> Option<f64> {
        self.sample_rate
    }

    /// Elementwise magnitudes.
    pub fn magnitudes(&self) -> Vec<f64> {
        self.bins.iter().map(|c| c.norm()).collect()
    }
}

/// X(e^{j omega}) evaluated on a finite grid of omegas in [-pi, pi].
#[derive(Debug, Clone)]
pub struct DtftGrid {
    omegas: Vec<f64>,
    values: Vec<Complex64>,
}

impl DtftGrid {
    pub fn new(omegas: Vec<f64>, values: Vec<Complex64>) -> Self {
        assert_eq!(omegas.len(), values.len(), "grid lengths must match");
        assert!(!omegas.is_empty());
        let eps = 1e-12;
        assert!(
            omegas.windows(2).all(|w| w[0] < w[1]),
            "omegas must be strictly increasing"
        );
        assert!(
            omegas[0] >= -PI - eps && *omegas.last().unwrap() <= PI + eps,
            "omegas must lie within [-pi, pi]"
        );
        Self { omegas, values }
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        self.values.iter().map(|c| c.norm()).collect()
    }
}

/// `len` evenly spaced omegas covering [-pi, pi] inclusive.
pub fn omega_grid(len: usize) -> Vec<f64> {
    assert!(len >= 2);
    (0..len)
        .map(|i| -PI + TAU * i as f64 / (len - 1) as f64)
        .collect()
}

/// Radix-2 decimation-in-time transform; `buf.len()` must be a power of two.
fn fft_radix2(buf: &mut [Complex64], inverse: bool) {
    let n = buf.len();
    debug_assert!(n.is_power_of_two());
    if n <= 1 {
        return;
    }

    // bit-reversal permutation
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = (i as u32).reverse_bits() >> (32 - bits);
        let j = j as usize;
        if j > i {
            buf.swap(i, j);
        }
    }

    let sign = if inverse { 1.0 } else { -1.0 };
    let mut len = 2;
    while len <= n {
        let step = sign * TAU / len as f64;
        let w_len = Complex64::from_polar(1.0, step);
        for chunk in buf.chunks_mut(len) {
            let mut w = Complex64::new(1.0, 0.0);
            let half = len / 2;
            for k in 0..half {
                let a = chunk[k];
                let b = chunk[k + half] * w;
                chunk[k] = a + b;
                chunk[k + half] = a - b;
                w *= w_len;
            }
        }
        len <<= 1;
    }
}

fn direct_sum(samples: &[Complex64], inverse: bool) -> Vec<Complex64> {
    let n = samples.len();
    let sign = if inverse { 1.0 } else { -1.0 };
    (0..n)
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, &x) in samples.iter().enumerate() {
                acc += x * Complex64::from_polar(1.0, sign * TAU * (k * i % n) as f64 / n as f64);
            }
            acc
        })
        .collect()
}

/// Forward DFT: `X[k] = sum_n x[n] exp(-j 2 pi k n / N)`.
pub fn dft(x: &Signal) -> Spectrum {
    let n = x.len();
    let bins = if n.is_power_of_two() {
        let mut buf = x.samples().to_vec();
        fft_radix2(&mut buf, false);
        buf
    } else {
        direct_sum(x.samples(), false)
    };
    Spectrum::from_bins(bins, x.sample_rate())
}

/// Literal double-loop DFT, kept free of any optimization; the verification
/// oracle for [`dft`], [`idft`] and the property engine.
pub fn direct_dft(x: &Signal) -> Spectrum {
    let n = x.len();
    let mut bins = vec![Complex64::new(0.0, 0.0); n];
    for (k, bin) in bins.iter_mut().enumerate() {
        for (i, &sample) in x.samples().iter().enumerate() {
            let angle = -TAU * (k as f64) * (i as f64) / n as f64;
            *bin += sample * Complex64::new(angle.cos(), angle.sin());
        }
    }
    Spectrum::from_bins(bins, x.sample_rate())
}

/// Inverse DFT: `x[n] = (1/N) sum_k X[k] exp(+j 2 pi k n / N)`.
pub fn idft(spectrum: &Spectrum) -> Signal {
    let n = spectrum.n();
    let mut samples = if n.is_power_of_two() {
        let mut buf = spectrum.bins().to_vec();
        fft_radix2(&mut buf, true);
        buf
    } else {
        direct_sum(spectrum.bins(), true)
    };
    let scale = 1.0 / n as f64;
    for s in &mut samples {
        *s *= scale;
    }
    let mut out = Signal::from_complex(samples);
    if let Some(fs) = spectrum.sample_rate() {
        out = out.with_sample_rate(fs);
    }
    out
}

/// Evaluates the DTFT of a finite sequence on the given grid, honoring the
/// signal's `origin_index`: `values[i] = sum_n x[n] exp(-j omega n)`.
pub fn dtft_eval(x: &Signal, omegas: &[f64]) -> DtftGrid {
    let n0 = x.origin_index();
    let values = omegas
        .iter()
        .map(|&w| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, &s) in x.samples().iter().enumerate() {
                let n = (n0 + i as i64) as f64;
                acc += s * Complex64::from_polar(1.0, -w * n);
            }
            acc
        })
        .collect();
    DtftGrid::new(omegas.to_vec(), values)
}

/// Single-sided magnitude spectrum of a real signal's DFT.
///
/// `freqs[k] = k fs / N` for `k = 0..=N/2`; interior bins are doubled and
/// everything is scaled by `1/N`, so a unit-amplitude on-bin cosine reads
/// ~1.0 at its peak.
pub fn single_sided(spectrum: &Spectrum) -> Result<(Vec<f64>, Vec<f64>)> {
    let fs = spectrum.sample_rate().ok_or(Error::MissingSampleRate)?;
    let n = spectrum.n();
    let half = n / 2;
    let mut freqs = Vec::with_capacity(half + 1);
    let mut mags = Vec::with_capacity(half + 1);
    for k in 0..=half {
        let doubling = if k == 0 || (n % 2 == 0 && k == half) {
            1.0
        } else {
            2.0
        };
        freqs.push(k as f64 * fs / n as f64);
        mags.push(spectrum.bins()[k].norm() * doubling / n as f64);
    }
    Ok((freqs, mags))
}
