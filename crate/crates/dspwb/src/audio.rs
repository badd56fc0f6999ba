//! Spectral-truncation audio compression, its error/modulation chain, and
//! the two sign-alternation steganography systems.

use crate::error::{Error, Result};
use crate::filters::{self, FirFilter};
use crate::signal::Signal;
use crate::transform::{self, Spectrum};
use num_complex::Complex64;
use std::f64::consts::PI;

/// The leading `K = max(1, round(p * N))` DFT bins of a signal.
#[derive(Debug, Clone)]
pub struct CompressedAudio {
    kept_bins: Vec<Complex64>,
    original_n: usize,
    fraction: f64,
    sample_rate: Option<f64>,
}

impl CompressedAudio {
    pub fn kept_bins(&self) -> &[Complex64] {
        &self.kept_bins
    }

    pub fn k(&self) -> usize {
        self.kept_bins.len()
    }

    pub fn original_n(&self) -> usize {
        self.original_n
    }

    pub fn fraction(&self) -> f64 {
        self.fraction
    }

    pub fn sample_rate(&self) -> Option<f64> {
        self.sample_rate
    }
}

/// Keeps the first `round(p * N)` bins (at least one) of the DFT, discarding
/// the rest. `p` must lie in (0, 1].
pub fn fft_compress(x: &Signal, p: f64) -> Result<CompressedAudio> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::Parameter(format!(
            "compression fraction must lie in (0, 1], got {p}"
        )));
    }
    let n = x.len();
    let k = ((p * n as f64).round() as usize).clamp(1, n);
    let spectrum = transform::dft(x);
    Ok(CompressedAudio {
        kept_bins: spectrum.bins()[..k].to_vec(),
        original_n: n,
        fraction: p,
        sample_rate: x.sample_rate(),
    })
}

/// Zero-pads the kept bins back to the original length and inverts. The
/// result is complex in general; `project_real` keeps only the real part.
pub fn fft_extract(c: &CompressedAudio, project_real: bool) -> Signal {
    let mut bins = c.kept_bins.clone();
    bins.resize(c.original_n, Complex64::new(0.0, 0.0));
    let x = transform::idft(&Spectrum::from_bins(bins, c.sample_rate));
    if project_real {
        let mut out = Signal::from_real(&x.real_part());
        if let Some(fs) = c.sample_rate {
            out = out.with_sample_rate(fs);
        }
        out
    } else {
        x
    }
}

/// `e[n] = x[n] - x1[n]`; with `x1` from [`fft_extract`] (not projected),
/// the error's DFT vanishes on the kept bins.
pub fn error_signal(x: &Signal, x1: &Signal) -> Result<Signal> {
    if x.len() != x1.len() {
        return Err(Error::LengthMismatch {
            expected: x.len(),
            actual: x1.len(),
        });
    }
    let samples = x
        .samples()
        .iter()
        .zip(x1.samples())
        .map(|(a, b)| a - b)
        .collect();
    let mut out = Signal::from_complex(samples);
    if let Some(fs) = x.sample_rate() {
        out = out.with_sample_rate(fs);
    }
    Ok(out)
}

/// Shifts the spectrum left by `k0` bins, realized in time as
/// `x2[n] = e[n] exp(-j 2 pi n k0 / N)`.
pub fn spectral_shift(e: &Signal, k0: usize) -> Signal {
    e.modulate(-(k0 as f64))
}

/// Undoes [`spectral_shift`]: multiplies by `exp(+j 2 pi n k0 / N)`.
pub fn remodulate(x2: &Signal, k0: usize) -> Signal {
    x2.modulate(k0 as f64)
}

/// The default mixing filter: order-100 lowpass, cutoff pi/2.
pub fn default_mix_filter() -> FirFilter {
    filters::design_lowpass(100, PI / 2.0).expect("fixed default design is valid")
}

fn add_signals(a: &Signal, b: &Signal) -> Signal {
    let samples = a
        .samples()
        .iter()
        .zip(b.samples())
        .map(|(x, y)| x + y)
        .collect();
    let mut out = Signal::from_complex(samples);
    if let Some(fs) = a.sample_rate() {
        out = out.with_sample_rate(fs);
    }
    out
}

fn check_equal_len(x1: &Signal, x2: &Signal) -> Result<()> {
    if x1.len() != x2.len() {
        return Err(Error::LengthMismatch {
            expected: x1.len(),
            actual: x2.len(),
        });
    }
    Ok(())
}

/// Mixes the raw inputs: `z = x1 + (-1)^n x2`, then recovers both branches
/// through the default lowpass (both branches filtered symmetrically, delay
/// compensated). Returns `(z, y1, y2)`.
pub fn system1(x1: &Signal, x2: &Signal) -> Result<(Signal, Signal, Signal)> {
    check_equal_len(x1, x2)?;
    let h = default_mix_filter();
    let z = add_signals(x1, &x2.alternate_sign());
    let y1 = filters::apply(&h, &z, true);
    let y2 = filters::apply(&h, &z.alternate_sign(), true);
    Ok((z, y1, y2))
}

/// Like [`system1`] but band-limits both inputs with `h` before mixing, so
/// the recovered channels do not leak into each other. `h` should be a
/// lowpass with cutoff pi/2; it is reused for the receive branches.
pub fn system2(x1: &Signal, x2: &Signal, h: &FirFilter) -> Result<(Signal, Signal, Signal)> {
    check_equal_len(x1, x2)?;
    let z = add_signals(
        &filters::apply(h, x1, true),
        &filters::apply(h, x2, true).alternate_sign(),
    );
    let y1 = filters::apply(h, &z, true);
    let y2 = filters::apply(h, &z.alternate_sign(), true);
    Ok((z, y1, y2))
}
