//! Linear-phase FIR design by the windowed-sinc method, frequency-response
//! evaluation, and delay-compensated filtering.
//!
//! Orders are even so the group delay `order/2` is an integer; taps are
//! mirrored during construction, making the symmetry exact rather than a
//! floating-point coincidence.

use crate::error::{Error, Result};
use crate::signal::{linear_convolve, Signal};
use crate::transform::DtftGrid;
use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

/// Symmetric Hamming window of length `len`.
pub fn hamming_window(len: usize) -> Vec<f64> {
    assert!(len >= 1);
    if len == 1 {
        return vec![1.0];
    }
    (0..len)
        .map(|i| 0.54 - 0.46 * (TAU * i as f64 / (len - 1) as f64).cos())
        .collect()
}

/// What a filter was designed to do, with band edges in rad/sample.
#[derive(Debug, Clone, PartialEq)]
pub enum FilterDesign {
    Lowpass { cutoff: f64 },
    Bandpass { omega_lo: f64, omega_hi: f64 },
}

/// A designed linear-phase FIR filter: `order + 1` exactly symmetric taps.
#[derive(Debug, Clone)]
pub struct FirFilter {
    taps: Vec<f64>,
    order: usize,
    design: FilterDesign,
}

impl FirFilter {
    pub fn taps(&self) -> &[f64] {
        &self.taps
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Integral group delay, `order / 2` samples.
    pub fn group_delay(&self) -> usize {
        self.order / 2
    }

    pub fn design(&self) -> &FilterDesign {
        &self.design
    }

    /// Window used by every design in this crate.
    pub fn window_name(&self) -> &'static str {
        "hamming"
    }
}

/// Raw windowed-sinc lowpass taps (no gain normalization). Symmetry is
/// enforced by computing one half and mirroring it.
fn windowed_sinc(order: usize, cutoff: f64) -> Vec<f64> {
    let m = order / 2;
    let window = hamming_window(order + 1);
    let mut taps = vec![0.0; order + 1];
    for i in 0..=m {
        let k = (m - i) as f64; // distance from center
        let ideal = if i == m {
            cutoff / PI
        } else {
            (cutoff * k).sin() / (PI * k)
        };
        let v = window[i] * ideal;
        taps[i] = v;
        taps[order - i] = v;
    }
    taps
}

fn require_even_order(order: usize) -> Result<()> {
    if order < 2 || order % 2 != 0 {
        return Err(Error::Design(format!(
            "filter order must be even and >= 2, got {order}"
        )));
    }
    Ok(())
}

/// Windowed-sinc lowpass with Hamming window, normalized to unit DC gain.
/// `cutoff` is in rad/sample, strictly inside (0, pi).
pub fn design_lowpass(order: usize, cutoff: f64) -> Result<FirFilter> {
    require_even_order(order)?;
    if !(cutoff > 0.0 && cutoff < PI) {
        return Err(Error::Design(format!(
            "lowpass cutoff must lie in (0, pi), got {cutoff}"
        )));
    }
    let mut taps = windowed_sinc(order, cutoff);
    let sum: f64 = taps.iter().sum();
    for t in &mut taps {
        *t /= sum;
    }
    Ok(FirFilter {
        taps,
        order,
        design: FilterDesign::Lowpass { cutoff },
    })
}

/// Bandpass as the difference of two windowed-sinc lowpass prototypes,
/// normalized to unit gain at the geometric band center.
pub fn design_bandpass(order: usize, f_lo: f64, f_hi: f64, fs: f64) -> Result<FirFilter> {
    require_even_order(order)?;
    if !(f_lo > 0.0 && f_lo < f_hi && f_hi < fs / 2.0) {
        return Err(Error::Design(format!(
            "band edges must satisfy 0 < f_lo < f_hi < fs/2; got ({f_lo}, {f_hi}) at fs={fs}"
        )));
    }
    let omega_lo = TAU * f_lo / fs;
    let omega_hi = TAU * f_hi / fs;
    let hi = windowed_sinc(order, omega_hi);
    let lo = windowed_sinc(order, omega_lo);
    let mut taps: Vec<f64> = hi.iter().zip(&lo).map(|(a, b)| a - b).collect();

    let center = TAU * (f_lo * f_hi).sqrt() / fs;
    let gain = response_at(&taps, center).norm();
    if gain <= 0.0 {
        return Err(Error::Design("bandpass has no gain at its center".into()));
    }
    for t in &mut taps {
        *t /= gain;
    }
    Ok(FirFilter {
        taps,
        order,
        design: FilterDesign::Bandpass { omega_lo, omega_hi },
    })
}

fn response_at(taps: &[f64], omega: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, &t) in taps.iter().enumerate() {
        acc += t * Complex64::from_polar(1.0, -omega * i as f64);
    }
    acc
}

/// `H(e^{j omega}) = sum_i taps[i] exp(-j omega i)` on the grid.
pub fn freq_response(h: &FirFilter, omegas: &[f64]) -> DtftGrid {
    let values = omegas.iter().map(|&w| response_at(&h.taps, w)).collect();
    DtftGrid::new(omegas.to_vec(), values)
}

/// Convolves `x` with the filter taps. With `compensate_delay`, the output
/// is advanced by `order/2` samples and truncated to `len(x)` so it aligns
/// with the input.
pub fn apply(h: &FirFilter, x: &Signal, compensate_delay: bool) -> Signal {
    let taps = Signal::from_real(&h.taps);
    let full = linear_convolve(x, &taps);
    if !compensate_delay {
        return full;
    }
    let m = h.group_delay();
    let samples = full.samples()[m..m + x.len()].to_vec();
    let mut out = Signal::from_complex(samples).with_origin(x.origin_index());
    if let Some(fs) = x.sample_rate() {
        out = out.with_sample_rate(fs);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::{self, omega_grid, Spectrum};

    #[test]
    fn taps_are_exactly_symmetric() {
        for h in [
            design_lowpass(100, PI / 2.0).unwrap(),
            design_lowpass(2, PI / 2.0).unwrap(),
            design_bandpass(400, 8.0, 12.0, 400.0).unwrap(),
        ] {
            let taps = h.taps();
            for i in 0..taps.len() {
                assert_eq!(taps[i], taps[h.order() - i], "asymmetric at {i}");
            }
        }
        assert_eq!(design_lowpass(2, PI / 2.0).unwrap().taps().len(), 3);
    }

    #[test]
    fn lowpass_dc_gain_and_stopband() {
        let h = design_lowpass(100, PI / 2.0).unwrap();
        let sum: f64 = h.taps().iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
        let grid = freq_response(&h, &[0.0, 0.95 * PI]);
        assert!((grid.values()[0].norm() - 1.0).abs() < 1e-12);
        assert!(grid.values()[1].norm() < 0.01);
    }

    #[test]
    fn lowpass_half_gain_at_cutoff() {
        let h = design_lowpass(100, PI / 2.0).unwrap();
        let grid = freq_response(&h, &[PI / 2.0]);
        assert!((grid.values()[0].norm() - 0.5).abs() < 0.02);
    }

    #[test]
    fn invalid_designs_are_rejected() {
        assert!(matches!(design_lowpass(100, 0.0), Err(Error::Design(_))));
        assert!(matches!(design_lowpass(100, PI), Err(Error::Design(_))));
        assert!(matches!(design_lowpass(99, 1.0), Err(Error::Design(_))));
        assert!(matches!(
            design_bandpass(400, 12.0, 8.0, 400.0),
            Err(Error::Design(_))
        ));
        assert!(matches!(
            design_bandpass(400, 8.0, 250.0, 400.0),
            Err(Error::Design(_))
        ));
    }

    #[test]
    fn bandpass_gain_profile() {
        let fs = 400.0;
        let h = design_bandpass(400, 8.0, 12.0, fs).unwrap();
        let at = |f: f64| freq_response(&h, &[TAU * f / fs]).values()[0].norm();
        assert!(at(10.0) >= 0.99, "10 Hz gain {}", at(10.0));
        assert!(at(2.0) <= 0.01, "2 Hz gain {}", at(2.0));
        assert!(at(40.0) <= 0.01, "40 Hz gain {}", at(40.0));
    }

    #[test]
    fn bandpass_passes_midband_sinusoid() {
        // delta band (1, 4) Hz at fs 400: a 2.5 Hz tone keeps its amplitude.
        // The band is narrow, so the filter must be long to be flat there.
        let fs = 400.0;
        let h = design_bandpass(2000, 1.0, 4.0, fs).unwrap();
        let n = 8192;
        let x = Signal::from_real(
            &(0..n)
                .map(|i| (TAU * 2.5 * i as f64 / fs).sin())
                .collect::<Vec<_>>(),
        )
        .with_sample_rate(fs);
        let y = apply(&h, &x, true);
        // RMS over an exact number of periods in the interior
        let period = 160; // 2.5 Hz at 400 Hz
        let start = 1024;
        let span = 36 * period;
        let seg = &y.real_part()[start..start + span];
        let rms = (seg.iter().map(|v| v * v).sum::<f64>() / span as f64).sqrt();
        let amp = rms * std::f64::consts::SQRT_2;
        assert!((amp - 1.0).abs() < 0.05, "amplitude {amp}");
    }

    #[test]
    fn unit_impulse_filter_is_transparent() {
        let h = FirFilter {
            taps: vec![0.0, 1.0, 0.0],
            order: 2,
            design: FilterDesign::Lowpass { cutoff: 1.0 },
        };
        let x = Signal::from_real(&[1.0, -2.0, 3.0, 0.5]);
        let y = apply(&h, &x, true);
        for (a, b) in y.samples().iter().zip(x.samples()) {
            assert!((a - b).norm() < 1e-15);
        }

        let flat = freq_response(
            &FirFilter {
                taps: vec![1.0],
                order: 0,
                design: FilterDesign::Lowpass { cutoff: 1.0 },
            },
            &omega_grid(33),
        );
        for &v in flat.values() {
            assert!((v.norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn linear_phase_identity() {
        let h = design_lowpass(24, 1.1).unwrap();
        let omegas = omega_grid(129);
        let grid = freq_response(&h, &omegas);
        let delay = h.order() as f64 / 2.0;
        for (&w, &v) in omegas.iter().zip(grid.values()) {
            // removing the linear phase must leave a real number
            let unrotated = v * Complex64::from_polar(1.0, w * delay);
            assert!(
                unrotated.im.abs() < 1e-10,
                "residual imaginary part {} at {w}",
                unrotated.im
            );
        }
    }

    #[test]
    fn stopband_tone_is_rejected() {
        let h = design_lowpass(100, PI / 2.0).unwrap();
        let n = 1024;
        let x = Signal::from_real(&(0..n).map(|i| (PI * i as f64).cos()).collect::<Vec<_>>());
        let y = apply(&h, &x, true);
        let mid = &y.real_part()[100..n - 100];
        let peak = mid.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
        assert!(peak < 0.02, "stopband residue {peak}");
    }

    #[test]
    fn passband_cosine_amplitude_preserved() {
        let h = design_lowpass(100, PI / 2.0).unwrap();
        let n = 2048;
        let x = Signal::from_real(
            &(0..n).map(|i| (PI / 8.0 * i as f64).cos()).collect::<Vec<_>>(),
        );
        let y = apply(&h, &x, true);
        let period = 16;
        let seg = &y.real_part()[128..128 + 100 * period];
        let rms = (seg.iter().map(|v| v * v).sum::<f64>() / seg.len() as f64).sqrt();
        let amp = rms * std::f64::consts::SQRT_2;
        assert!((amp - 1.0).abs() < 0.01, "amplitude {amp}");
    }

    #[test]
    fn delay_compensation_aligns_a_slow_ramp() {
        let h = design_lowpass(40, PI / 2.0).unwrap();
        let n = 256;
        let x = Signal::from_real(&(0..n).map(|i| i as f64 / n as f64).collect::<Vec<_>>());
        let y = apply(&h, &x, true);
        for i in 40..n - 40 {
            assert!(
                (y.real_part()[i] - x.real_part()[i]).abs() < 1e-3,
                "misaligned at {i}"
            );
        }
    }

    #[test]
    fn apply_matches_dft_convolution_oracle() {
        let h = design_lowpass(16, 0.8).unwrap();
        let x = Signal::from_real(
            &(0..40).map(|i| (i as f64 * 0.37).sin()).collect::<Vec<_>>(),
        );
        let y = apply(&h, &x, false);
        let padded = y.len();
        let pad = |v: Vec<Complex64>| {
            let mut v = v;
            v.resize(padded, Complex64::new(0.0, 0.0));
            Signal::from_complex(v)
        };
        let xf = transform::dft(&pad(x.samples().to_vec()));
        let hf = transform::dft(&pad(
            h.taps().iter().map(|&t| Complex64::new(t, 0.0)).collect(),
        ));
        let prod: Vec<Complex64> = xf.bins().iter().zip(hf.bins()).map(|(a, b)| a * b).collect();
        let back = transform::idft(&Spectrum::from_bins(prod, None));
        let scale = y.samples().iter().map(|c| c.norm()).fold(1e-300, f64::max);
        for (a, b) in y.samples().iter().zip(back.samples()) {
            assert!((a - b).norm() < 1e-9 * scale);
        }
    }
}
