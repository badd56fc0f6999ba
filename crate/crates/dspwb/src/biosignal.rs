//! Periodicity-rate estimation from a sampled biosignal, by single-sided
//! spectrum peak and by autocorrelation zero-crossing spacing.
//!
//! Both estimators remove the mean first: pulse-shaped recordings ride on a
//! large baseline, and the zero-crossing recipe presupposes an oscillation
//! about zero.

use crate::error::{Error, Result};
use crate::signal::{autocorrelation, Signal};
use crate::transform::{self, single_sided};

/// Which estimator produced a [`RateEstimate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateMethod {
    FftPeak,
    AutocorrZeroCross,
}

/// What the estimator saw.
#[derive(Debug, Clone, PartialEq)]
pub enum RateEvidence {
    /// Index of the winning single-sided bin.
    PeakBin(usize),
    /// Zero-crossing lags of the normalized, mean-removed autocorrelation.
    CrossingLags(Vec<usize>),
}

/// A fundamental-frequency estimate with its beats-per-minute reading.
#[derive(Debug, Clone, PartialEq)]
pub struct RateEstimate {
    pub frequency_hz: f64,
    pub bpm: f64,
    pub method: RateMethod,
    pub evidence: RateEvidence,
}

impl RateEstimate {
    fn new(frequency_hz: f64, method: RateMethod, evidence: RateEvidence) -> Self {
        RateEstimate {
            frequency_hz,
            bpm: 60.0 * frequency_hz,
            method,
            evidence,
        }
    }
}

/// Rate from the highest single-sided spectrum magnitude, DC excluded.
/// Needs a real signal with a sample rate and at least 16 samples.
pub fn rate_from_fft(x: &Signal) -> Result<RateEstimate> {
    assert!(x.is_real(), "rate estimation expects a real signal");
    assert!(x.len() >= 16, "rate estimation needs at least 16 samples");
    let detrended = x.remove_mean();
    let (freqs, mags) = single_sided(&transform::dft(&detrended))?;
    let mut best: Option<(usize, f64)> = None;
    for (k, &m) in mags.iter().enumerate().skip(1) {
        if best.map_or(true, |(_, bm)| m > bm) {
            best = Some((k, m));
        }
    }
    let (bin, peak) = best.ok_or(Error::NoPeak)?;
    if peak <= 1e-12 {
        return Err(Error::NoPeak);
    }
    Ok(RateEstimate::new(
        freqs[bin],
        RateMethod::FftPeak,
        RateEvidence::PeakBin(bin),
    ))
}

/// Rate from the spacing of the first and third zero crossings of the
/// normalized, mean-removed autocorrelation: that spacing is one period.
pub fn rate_from_autocorr(x: &Signal) -> Result<RateEstimate> {
    assert!(x.is_real(), "rate estimation expects a real signal");
    let fs = x.sample_rate().ok_or(Error::MissingSampleRate)?;
    let r = autocorrelation(&x.remove_mean(), true)?;
    let crossings = zero_crossings(&r);
    if crossings.len() < 3 {
        return Err(Error::InsufficientPeriodicity {
            found: crossings.len(),
        });
    }
    let period_samples = crossings[2] - crossings[0];
    Ok(RateEstimate::new(
        fs / period_samples as f64,
        RateMethod::AutocorrZeroCross,
        RateEvidence::CrossingLags(crossings),
    ))
}

/// Lags `m >= 1` where the sequence changes sign. The reported lag is the
/// first sample after the crossing; exact zeros complete their crossing at
/// the next sample whose sign actually differs.
pub fn zero_crossings(r: &Signal) -> Vec<usize> {
    assert!(r.is_real(), "zero crossings are defined for real sequences");
    let v = r.real_part();
    let mut out = Vec::new();
    let mut last_sign = 0i8;
    for (m, &val) in v.iter().enumerate() {
        let sign = if val > 0.0 {
            1
        } else if val < 0.0 {
            -1
        } else {
            0
        };
        if sign == 0 {
            continue;
        }
        if last_sign != 0 && sign != last_sign {
            out.push(m);
        }
        last_sign = sign;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn on_bin_cosine(bin: f64, n: usize, fs: f64) -> Signal {
        Signal::from_real(
            &(0..n)
                .map(|i| (TAU * bin * i as f64 / n as f64).cos())
                .collect::<Vec<_>>(),
        )
        .with_sample_rate(fs)
    }

    #[test]
    fn fft_peak_reads_the_bin_frequency() {
        // bin 11 at fs=100, N=1024: 1.07421875 Hz, 64.45 bpm
        let x = on_bin_cosine(11.0, 1024, 100.0);
        let est = rate_from_fft(&x).unwrap();
        assert!((est.frequency_hz - 1.07421875).abs() < 1e-12);
        assert!((est.bpm - 64.453125).abs() < 1e-9);
        assert_eq!(est.evidence, RateEvidence::PeakBin(11));

        let x20 = on_bin_cosine(20.0, 1024, 100.0);
        let est20 = rate_from_fft(&x20).unwrap();
        assert!((est20.frequency_hz - 1.953125).abs() < 1e-12);
    }

    #[test]
    fn flat_signal_has_no_peak() {
        let x = Signal::from_real(&[2.5; 64]).with_sample_rate(100.0);
        assert!(matches!(rate_from_fft(&x), Err(Error::NoPeak)));
    }

    #[test]
    fn bpm_is_sixty_times_frequency() {
        let x = on_bin_cosine(7.0, 256, 50.0);
        let est = rate_from_fft(&x).unwrap();
        assert_eq!(est.bpm, 60.0 * est.frequency_hz);
    }

    #[test]
    fn autocorr_period_of_a_slow_cosine() {
        // period 100 samples at fs=100 -> 1 Hz -> 60 bpm
        let n = 1024;
        let x = Signal::from_real(
            &(0..n).map(|i| (TAU * i as f64 / 100.0).cos()).collect::<Vec<_>>(),
        )
        .with_sample_rate(100.0);
        let est = rate_from_autocorr(&x).unwrap();
        if let RateEvidence::CrossingLags(lags) = &est.evidence {
            assert!((lags[0] as i64 - 25).abs() <= 1, "first {}", lags[0]);
            assert!((lags[1] as i64 - 75).abs() <= 1, "second {}", lags[1]);
            assert!((lags[2] as i64 - 125).abs() <= 1, "third {}", lags[2]);
        } else {
            panic!("wrong evidence kind");
        }
        assert!((est.bpm - 60.0).abs() < 1.5, "bpm {}", est.bpm);
    }

    #[test]
    fn lag_difference_of_94_reads_63_8_bpm() {
        // 0.94 s period at 100 Hz
        let freq: f64 = 100.0 / 94.0;
        assert!((60.0 * freq - 63.8).abs() < 0.05);
    }

    #[test]
    fn noise_without_three_crossings_errors() {
        // a signal whose mean-removed autocorrelation stays positive long
        // enough to yield fewer than three crossings: a single slow ramp
        let n = 64;
        let x = Signal::from_real(&(0..n).map(|i| i as f64).collect::<Vec<_>>())
            .with_sample_rate(10.0);
        match rate_from_autocorr(&x) {
            Err(Error::InsufficientPeriodicity { found }) => assert!(found < 3),
            other => panic!("expected insufficient periodicity, got {other:?}"),
        }
    }

    #[test]
    fn zero_crossing_scan() {
        let r = Signal::from_real(&[1.0, 0.5, -0.2, -0.8, 0.1]);
        assert_eq!(zero_crossings(&r), vec![2, 4]);

        let mono = Signal::from_real(&[0.1, 0.4, 0.9, 1.3]);
        assert!(zero_crossings(&mono).is_empty());

        // exact zero completes at the next sample of opposite sign
        let z = Signal::from_real(&[1.0, 0.0, -1.0, 0.0, 1.0]);
        assert_eq!(zero_crossings(&z), vec![2, 4]);
        // touching zero without crossing is not a crossing
        let touch = Signal::from_real(&[1.0, 0.0, 1.0]);
        assert!(zero_crossings(&touch).is_empty());
    }

    #[test]
    fn damped_cosine_crossings_near_quarter_periods() {
        let n = 1024usize;
        let r = Signal::from_real(
            &(0..n)
                .map(|m| (TAU * m as f64 / 100.0).cos() * (1.0 - m as f64 / n as f64))
                .collect::<Vec<_>>(),
        );
        let crossings = zero_crossings(&r);
        for (got, want) in crossings.iter().zip([25usize, 75, 125]) {
            assert!(
                (*got as i64 - want as i64).abs() <= 1,
                "crossing {got} vs {want}"
            );
        }
    }

    #[test]
    fn estimators_agree_on_a_pure_tone() {
        let fs = 100.0;
        let n = 1024;
        let x = on_bin_cosine(11.0, n, fs);
        let fft = rate_from_fft(&x).unwrap();
        let ac = rate_from_autocorr(&x).unwrap();
        // fs/N bin quantization plus one-lag crossing quantization
        let tol_hz = fs / n as f64 + fs / (90.0 * 90.0);
        assert!(
            (fft.frequency_hz - ac.frequency_hz).abs() < tol_hz,
            "{} vs {}",
            fft.frequency_hz,
            ac.frequency_hz
        );
    }

    #[test]
    fn offsets_do_not_move_either_estimate() {
        let fs = 100.0;
        let base = on_bin_cosine(11.0, 1024, fs);
        let offset = Signal::from_real(
            &base.real_part().iter().map(|v| v + 7.5).collect::<Vec<_>>(),
        )
        .with_sample_rate(fs);
        let f1 = rate_from_fft(&base).unwrap();
        let f2 = rate_from_fft(&offset).unwrap();
        assert_eq!(f1.frequency_hz, f2.frequency_hz);
        let a1 = rate_from_autocorr(&base).unwrap();
        let a2 = rate_from_autocorr(&offset).unwrap();
        assert_eq!(a1.frequency_hz, a2.frequency_hz);
    }
}
