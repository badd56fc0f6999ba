//! Clip-structured feature extraction for seizure discrimination:
//! time-domain descriptors, Hilbert instantaneous features, spectrogram and
//! Welch spectral estimates, and a rank-sum separability report.

use crate::error::{Error, Result};
use crate::filters::{self, hamming_window};
use crate::signal::Signal;
use crate::transform::{self, Spectrum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use std::f64::consts::TAU;

/// Floor added to squared magnitudes before taking dB.
pub const SPECTROGRAM_EPS: f64 = 1e-20;

/// Clip annotation: recorded during a seizure or during baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Label {
    Ictal,
    Interictal,
}

impl Label {
    pub fn as_str(&self) -> &'static str {
        match self {
            Label::Ictal => "ictal",
            Label::Interictal => "interictal",
        }
    }

    pub fn parse(text: &str) -> Option<Label> {
        match text.trim().to_ascii_lowercase().as_str() {
            "ictal" => Some(Label::Ictal),
            "interictal" => Some(Label::Interictal),
            _ => None,
        }
    }
}

/// One labeled fixed-rate recording.
#[derive(Debug, Clone)]
pub struct Clip {
    pub id: String,
    pub label: Label,
    pub fs: f64,
    pub samples: Vec<f64>,
}

impl Clip {
    pub fn new(id: impl Into<String>, label: Label, fs: f64, samples: Vec<f64>) -> Result<Clip> {
        if fs <= 0.0 {
            return Err(Error::Parameter(format!("clip sample rate must be positive, got {fs}")));
        }
        if samples.len() < 2 {
            return Err(Error::Parameter("clip needs at least 2 samples".into()));
        }
        Ok(Clip {
            id: id.into(),
            label,
            fs,
            samples,
        })
    }

    pub fn to_signal(&self) -> Signal {
        Signal::from_real(&self.samples).with_sample_rate(self.fs)
    }
}

/// An ordered set of clips with uniform sample rate and unique ids.
#[derive(Debug, Clone)]
pub struct ClipSet {
    clips: Vec<Clip>,
}

impl ClipSet {
    pub fn new(clips: Vec<Clip>) -> Result<ClipSet> {
        if clips.is_empty() {
            return Err(Error::Parameter("clip set must not be empty".into()));
        }
        let fs = clips[0].fs;
        if clips.iter().any(|c| c.fs != fs) {
            return Err(Error::Parameter("clips must share one sample rate".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for c in &clips {
            if !seen.insert(c.id.as_str()) {
                return Err(Error::Parameter(format!("duplicate clip id `{}`", c.id)));
            }
        }
        Ok(ClipSet { clips })
    }

    pub fn clips(&self) -> &[Clip] {
        &self.clips
    }

    pub fn fs(&self) -> f64 {
        self.clips[0].fs
    }

    pub fn count(&self, label: Label) -> usize {
        self.clips.iter().filter(|c| c.label == label).count()
    }

    /// Concatenates all clips with `label` into one series.
    pub fn concat(&self, label: Label) -> Option<Signal> {
        let samples: Vec<f64> = self
            .clips
            .iter()
            .filter(|c| c.label == label)
            .flat_map(|c| c.samples.iter().copied())
            .collect();
        if samples.is_empty() {
            None
        } else {
            Some(Signal::from_real(&samples).with_sample_rate(self.fs()))
        }
    }

    /// One long series: every ictal clip, then every interictal clip.
    pub fn concat_ictal_first(&self) -> Signal {
        let mut samples = Vec::new();
        for label in [Label::Ictal, Label::Interictal] {
            for c in self.clips.iter().filter(|c| c.label == label) {
                samples.extend_from_slice(&c.samples);
            }
        }
        Signal::from_real(&samples).with_sample_rate(self.fs())
    }
}

fn mean_of(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn population_variance(v: &[f64]) -> f64 {
    let mu = mean_of(v);
    v.iter().map(|x| (x - mu) * (x - mu)).sum::<f64>() / v.len() as f64
}

/// Arithmetic mean, median (midpoint of the sorted samples, averaging the
/// two central values for even length), and mode (most frequent value after
/// rounding to the nearest integer, ties broken toward the smallest value).
pub fn central_tendency(c: &Clip) -> (f64, f64, f64) {
    let v = &c.samples;
    let mean = mean_of(v);

    let mut sorted = v.clone();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    };

    let mut counts: HashMap<i64, usize> = HashMap::new();
    for &x in v {
        *counts.entry(x.round() as i64).or_insert(0) += 1;
    }
    let mode = counts
        .into_iter()
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
        .map(|(value, _)| value as f64)
        .unwrap_or(0.0);

    (mean, median, mode)
}

/// Sum of squared samples.
pub fn energy(c: &Clip) -> f64 {
    c.samples.iter().map(|x| x * x).sum()
}

/// Total curve length: sum of absolute successive differences.
pub fn curve_length(c: &Clip) -> f64 {
    c.samples.windows(2).map(|w| (w[1] - w[0]).abs()).sum()
}

fn first_difference(v: &[f64]) -> Vec<f64> {
    v.windows(2).map(|w| w[1] - w[0]).collect()
}

/// Hjorth parameters `(activity, mobility, complexity)` with the derivative
/// discretized as a first difference. Zero variance makes mobility
/// undefined; a zero-variance first difference makes complexity undefined.
pub fn hjorth(c: &Clip) -> Result<(f64, f64, f64)> {
    assert!(c.samples.len() >= 3, "hjorth needs at least 3 samples");
    let var_x = population_variance(&c.samples);
    if var_x <= 0.0 {
        return Err(Error::DegenerateSignal(
            "zero variance: mobility undefined".into(),
        ));
    }
    let d = first_difference(&c.samples);
    let var_d = population_variance(&d);
    if var_d <= 0.0 {
        return Err(Error::DegenerateSignal(
            "zero-variance first difference: complexity undefined".into(),
        ));
    }
    let dd = first_difference(&d);
    let var_dd = population_variance(&dd);
    let mobility = (var_d / var_x).sqrt();
    let mobility_d = (var_dd / var_d).sqrt();
    Ok((var_x, mobility, mobility_d / mobility))
}

/// Frequency-domain analytic signal: one-sided doubling of the spectrum so
/// that the real part reproduces the input and the imaginary part is its
/// quadrature. Requires a real signal of length >= 4.
pub fn analytic_signal(x: &Signal) -> Signal {
    assert!(x.is_real(), "analytic signal is defined for real input");
    let n = x.len();
    assert!(n >= 4, "analytic signal needs at least 4 samples");
    let spectrum = transform::dft(x);
    let mut bins = spectrum.bins().to_vec();
    if n % 2 == 0 {
        for (k, b) in bins.iter_mut().enumerate() {
            if k == 0 || k == n / 2 {
                // unchanged
            } else if k < n / 2 {
                *b *= 2.0;
            } else {
                *b = Complex64::new(0.0, 0.0);
            }
        }
    } else {
        for (k, b) in bins.iter_mut().enumerate() {
            if k == 0 {
                // unchanged
            } else if k <= (n - 1) / 2 {
                *b *= 2.0;
            } else {
                *b = Complex64::new(0.0, 0.0);
            }
        }
    }
    transform::idft(&Spectrum::from_bins(bins, x.sample_rate()))
}

fn band_filtered_analytic(
    c: &Clip,
    band: (f64, f64),
    order: usize,
) -> Result<(Signal, usize)> {
    if c.samples.len() <= order {
        return Err(Error::Parameter(format!(
            "clip of {} samples is too short for an order-{order} band filter",
            c.samples.len()
        )));
    }
    let h = filters::design_bandpass(order, band.0, band.1, c.fs)?;
    let filtered = filters::apply(&h, &c.to_signal(), true);
    let analytic = analytic_signal(&Signal::from_real(&filtered.real_part()).with_sample_rate(c.fs));
    Ok((analytic, order / 2))
}

/// Mean instantaneous amplitude in `band` (Hz): band-filter, take the
/// analytic envelope, and average over the central region that excludes
/// half a filter length at each end.
pub fn mean_inst_amplitude(c: &Clip, band: (f64, f64), order: usize) -> Result<f64> {
    let (analytic, margin) = band_filtered_analytic(c, band, order)?;
    let mags = analytic.magnitudes();
    let central = &mags[margin..mags.len() - margin];
    Ok(mean_of(central))
}

/// Mean instantaneous frequency in `band` (Hz): the averaged per-sample
/// phase advance of the band-limited analytic signal, scaled by `fs / 2 pi`.
pub fn mean_inst_frequency(c: &Clip, band: (f64, f64), order: usize) -> Result<f64> {
    if c.samples.len() <= order + 1 {
        return Err(Error::Parameter(format!(
            "clip of {} samples is too short for instantaneous frequency at order {order}",
            c.samples.len()
        )));
    }
    let (analytic, margin) = band_filtered_analytic(c, band, order)?;
    let a = analytic.samples();
    let central = &a[margin..a.len() - margin];
    let peak = central.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if peak <= 1e-30 {
        return Err(Error::DegenerateSignal(
            "zero amplitude: instantaneous frequency undefined".into(),
        ));
    }
    // arg(a[i+1] * conj(a[i])) is the wrapped per-sample phase advance, which
    // equals the unwrapped derivative while the band stays below Nyquist
    let diffs: Vec<f64> = central.windows(2).map(|w| (w[1] * w[0].conj()).arg()).collect();
    Ok(mean_of(&diffs) * c.fs / TAU)
}

/// Short-time spectrum map in dB, one row per frame.
#[derive(Debug, Clone)]
pub struct Spectrogram {
    /// `db[frame][bin] = 10 log10(|X|^2 + eps)`.
    pub db: Vec<Vec<f64>>,
    /// Frame start times in seconds.
    pub times_s: Vec<f64>,
    /// One-sided bin frequencies in Hz.
    pub freqs_hz: Vec<f64>,
}

/// Hamming-windowed short-time transform with `window_len - overlap` hop;
/// one-sided bins.
pub fn spectrogram(x: &Signal, window_len: usize, overlap: usize) -> Result<Spectrogram> {
    let fs = x.sample_rate().ok_or(Error::MissingSampleRate)?;
    if overlap >= window_len {
        return Err(Error::Parameter(format!(
            "overlap {overlap} must be smaller than the window {window_len}"
        )));
    }
    if x.len() < window_len {
        return Err(Error::Parameter(format!(
            "signal of {} samples is shorter than the {window_len}-sample window",
            x.len()
        )));
    }
    let hop = window_len - overlap;
    let frames = (x.len() - window_len) / hop + 1;
    let window = hamming_window(window_len);
    let half = window_len / 2;

    let mut db = Vec::with_capacity(frames);
    let mut times = Vec::with_capacity(frames);
    for f in 0..frames {
        let start = f * hop;
        let frame: Vec<Complex64> = (0..window_len)
            .map(|i| x.samples()[start + i] * window[i])
            .collect();
        let spec = transform::dft(&Signal::from_complex(frame));
        db.push(
            (0..=half)
                .map(|k| 10.0 * (spec.bins()[k].norm_sqr() + SPECTROGRAM_EPS).log10())
                .collect(),
        );
        times.push(start as f64 / fs);
    }
    let freqs = (0..=half).map(|k| k as f64 * fs / window_len as f64).collect();
    Ok(Spectrogram {
        db,
        times_s: times,
        freqs_hz: freqs,
    })
}

/// Welch PSD estimate: averaged one-sided periodograms of Hamming-windowed
/// overlapping segments, normalized by window power and fs so that
/// `sum(psd) * delta_f` approximates the signal variance.
pub fn welch_psd(
    x: &Signal,
    segments: usize,
    overlap_fraction: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let fs = x.sample_rate().ok_or(Error::MissingSampleRate)?;
    if segments < 1 {
        return Err(Error::Parameter("need at least one segment".into()));
    }
    if !(0.0..1.0).contains(&overlap_fraction) {
        return Err(Error::Parameter(format!(
            "overlap fraction must lie in [0, 1), got {overlap_fraction}"
        )));
    }
    let n = x.len();
    let span = 1.0 + (segments as f64 - 1.0) * (1.0 - overlap_fraction);
    let seg_len = (n as f64 / span).floor() as usize;
    if seg_len < 2 {
        return Err(Error::Parameter(format!(
            "signal of {n} samples is too short for {segments} segments"
        )));
    }
    let hop = ((seg_len as f64) * (1.0 - overlap_fraction)).floor().max(1.0) as usize;
    let window = hamming_window(seg_len);
    let window_power: f64 = window.iter().map(|w| w * w).sum();
    let half = seg_len / 2;

    let mut psd = vec![0.0; half + 1];
    let mut count = 0usize;
    let mut start = 0usize;
    while start + seg_len <= n {
        let frame: Vec<Complex64> = (0..seg_len)
            .map(|i| x.samples()[start + i] * window[i])
            .collect();
        let spec = transform::dft(&Signal::from_complex(frame));
        for k in 0..=half {
            let doubling = if k == 0 || (seg_len % 2 == 0 && k == half) {
                1.0
            } else {
                2.0
            };
            psd[k] += doubling * spec.bins()[k].norm_sqr() / (fs * window_power);
        }
        count += 1;
        start += hop;
    }
    for p in &mut psd {
        *p /= count as f64;
    }
    let freqs = (0..=half).map(|k| k as f64 * fs / seg_len as f64).collect();
    Ok((freqs, psd))
}

/// Centered moving average with symmetric shrinking windows at the edges;
/// output length equals input length. `window` must be odd and no longer
/// than the series.
pub fn smooth(series: &[f64], window: usize) -> Result<Vec<f64>> {
    if window % 2 == 0 || window == 0 || window > series.len() {
        return Err(Error::Parameter(format!(
            "smoothing window must be odd and within the series length, got {window} for {}",
            series.len()
        )));
    }
    let half = window / 2;
    let n = series.len();
    Ok((0..n)
        .map(|i| {
            let h = half.min(i).min(n - 1 - i);
            mean_of(&series[i - h..=i + h])
        })
        .collect())
}

/// Features the extractor can compute per clip.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Feature {
    Mean,
    Median,
    Mode,
    Energy,
    CurveLength,
    Activity,
    Mobility,
    Complexity,
    DeltaMeanInstAmplitude,
    AlphaMeanInstFrequency,
    AvgPsd,
}

impl Feature {
    pub fn name(&self) -> &'static str {
        match self {
            Feature::Mean => "mean",
            Feature::Median => "median",
            Feature::Mode => "mode",
            Feature::Energy => "energy",
            Feature::CurveLength => "curve_length",
            Feature::Activity => "hjorth_activity",
            Feature::Mobility => "hjorth_mobility",
            Feature::Complexity => "hjorth_complexity",
            Feature::DeltaMeanInstAmplitude => "delta_mean_inst_amplitude",
            Feature::AlphaMeanInstFrequency => "alpha_mean_inst_frequency",
            Feature::AvgPsd => "avg_psd",
        }
    }

    pub fn all() -> Vec<Feature> {
        vec![
            Feature::Mean,
            Feature::Median,
            Feature::Mode,
            Feature::Energy,
            Feature::CurveLength,
            Feature::Activity,
            Feature::Mobility,
            Feature::Complexity,
            Feature::DeltaMeanInstAmplitude,
            Feature::AlphaMeanInstFrequency,
            Feature::AvgPsd,
        ]
    }

    /// The time-domain subset (no band filters, no spectral estimates).
    pub fn time_domain() -> Vec<Feature> {
        vec![
            Feature::Mean,
            Feature::Median,
            Feature::Mode,
            Feature::Energy,
            Feature::CurveLength,
            Feature::Activity,
            Feature::Mobility,
            Feature::Complexity,
        ]
    }
}

/// Extraction parameters recorded into the table metadata.
#[derive(Debug, Clone)]
pub struct ExtractionParams {
    /// Order of the band filters behind the instantaneous features. Must
    /// stay below the clip length; the default suits one-second clips at a
    /// few hundred Hz.
    pub bandpass_order: usize,
    pub delta_band: (f64, f64),
    pub alpha_band: (f64, f64),
    pub welch_segments: usize,
    pub welch_overlap: f64,
}

impl Default for ExtractionParams {
    fn default() -> Self {
        ExtractionParams {
            bandpass_order: 300,
            delta_band: (1.0, 4.0),
            alpha_band: (8.0, 12.0),
            welch_segments: 8,
            welch_overlap: 0.5,
        }
    }
}

/// One table row: a clip's id, label and feature values (None = undefined).
#[derive(Debug, Clone)]
pub struct FeatureRow {
    pub id: String,
    pub label: Label,
    pub values: Vec<Option<f64>>,
}

/// Per-clip named feature values plus the parameters that produced them.
#[derive(Debug, Clone)]
pub struct FeatureTable {
    feature_names: Vec<String>,
    rows: Vec<FeatureRow>,
    metadata: Vec<(String, String)>,
}

impl FeatureTable {
    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn rows(&self) -> &[FeatureRow] {
        &self.rows
    }

    pub fn metadata(&self) -> &[(String, String)] {
        &self.metadata
    }
}

fn extract_one(c: &Clip, feature: Feature, params: &ExtractionParams) -> Result<Option<f64>> {
    // degenerate clips yield undefined values; configuration problems abort
    let soften = |r: Result<f64>| match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::DegenerateSignal(_)) => Ok(None),
        Err(e) => Err(e),
    };
    match feature {
        Feature::Mean => Ok(Some(central_tendency(c).0)),
        Feature::Median => Ok(Some(central_tendency(c).1)),
        Feature::Mode => Ok(Some(central_tendency(c).2)),
        Feature::Energy => Ok(Some(energy(c))),
        Feature::CurveLength => Ok(Some(curve_length(c))),
        Feature::Activity => Ok(Some(population_variance(&c.samples))),
        Feature::Mobility => soften(hjorth(c).map(|h| h.1)),
        Feature::Complexity => soften(hjorth(c).map(|h| h.2)),
        Feature::DeltaMeanInstAmplitude => {
            soften(mean_inst_amplitude(c, params.delta_band, params.bandpass_order))
        }
        Feature::AlphaMeanInstFrequency => {
            soften(mean_inst_frequency(c, params.alpha_band, params.bandpass_order))
        }
        Feature::AvgPsd => {
            let (_, psd) = welch_psd(&c.to_signal(), params.welch_segments, params.welch_overlap)?;
            Ok(Some(mean_of(&psd)))
        }
    }
}

/// Runs the selected extractors over every clip. An empty selection yields
/// an empty table (rows with no columns).
pub fn feature_table(
    cs: &ClipSet,
    features: &[Feature],
    params: &ExtractionParams,
) -> Result<FeatureTable> {
    let mut rows = Vec::with_capacity(cs.clips().len());
    for clip in cs.clips() {
        let mut values = Vec::with_capacity(features.len());
        for &f in features {
            values.push(extract_one(clip, f, params)?);
        }
        rows.push(FeatureRow {
            id: clip.id.clone(),
            label: clip.label,
            values,
        });
    }
    let metadata = vec![
        ("alpha_band_hz".to_string(), format!("{:?}", params.alpha_band)),
        ("bandpass_order".to_string(), params.bandpass_order.to_string()),
        ("bandpass_window".to_string(), "hamming".to_string()),
        ("delta_band_hz".to_string(), format!("{:?}", params.delta_band)),
        ("fs_hz".to_string(), cs.fs().to_string()),
        ("welch_overlap".to_string(), params.welch_overlap.to_string()),
        ("welch_segments".to_string(), params.welch_segments.to_string()),
        ("welch_window".to_string(), "hamming".to_string()),
    ];
    Ok(FeatureTable {
        feature_names: features.iter().map(|f| f.name().to_string()).collect(),
        rows,
        metadata,
    })
}

/// Per-feature separability between the two label groups.
#[derive(Debug, Clone)]
pub struct FeatureSeparability {
    pub feature: String,
    /// Rank-sum AUC: probability that an ictal value ranks above an
    /// interictal one (ties split). 0.5 is useless; near 0 or 1 is
    /// discriminative. None when a group has no defined values.
    pub auc: Option<f64>,
    pub ictal_mean: Option<f64>,
    pub interictal_mean: Option<f64>,
    pub undefined: usize,
}

#[derive(Debug, Clone)]
pub struct SeparabilityReport {
    pub per_feature: Vec<FeatureSeparability>,
}

fn rank_sum_auc(ictal: &[f64], interictal: &[f64]) -> f64 {
    let mut all: Vec<(f64, bool)> = ictal
        .iter()
        .map(|&v| (v, true))
        .chain(interictal.iter().map(|&v| (v, false)))
        .collect();
    all.sort_by(|a, b| a.0.total_cmp(&b.0));
    let n = all.len();
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && all[j + 1].0 == all[i].0 {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for r in ranks.iter_mut().take(j + 1).skip(i) {
            *r = avg;
        }
        i = j + 1;
    }
    let r_ictal: f64 = all
        .iter()
        .zip(&ranks)
        .filter(|((_, is_ictal), _)| *is_ictal)
        .map(|(_, &r)| r)
        .sum();
    let ni = ictal.len() as f64;
    let ne = interictal.len() as f64;
    let u = r_ictal - ni * (ni + 1.0) / 2.0;
    u / (ni * ne)
}

/// Scores every feature of the table by rank-sum AUC plus group means.
/// The table must contain both labels.
pub fn separability_report(table: &FeatureTable) -> Result<SeparabilityReport> {
    let has_ictal = table.rows().iter().any(|r| r.label == Label::Ictal);
    let has_inter = table.rows().iter().any(|r| r.label == Label::Interictal);
    if !has_ictal || !has_inter {
        return Err(Error::Parameter(
            "separability needs both ictal and interictal clips".into(),
        ));
    }
    let mut per_feature = Vec::with_capacity(table.feature_names().len());
    for (col, name) in table.feature_names().iter().enumerate() {
        let mut ictal = Vec::new();
        let mut interictal = Vec::new();
        let mut undefined = 0usize;
        for row in table.rows() {
            match row.values[col] {
                Some(v) if v.is_finite() => match row.label {
                    Label::Ictal => ictal.push(v),
                    Label::Interictal => interictal.push(v),
                },
                _ => undefined += 1,
            }
        }
        let (auc, i_mean, e_mean) = if ictal.is_empty() || interictal.is_empty() {
            (None, None, None)
        } else {
            (
                Some(rank_sum_auc(&ictal, &interictal)),
                Some(mean_of(&ictal)),
                Some(mean_of(&interictal)),
            )
        };
        per_feature.push(FeatureSeparability {
            feature: name.clone(),
            auc,
            ictal_mean: i_mean,
            interictal_mean: e_mean,
            undefined,
        });
    }
    Ok(SeparabilityReport { per_feature })
}

/// Seeded stand-in data set: band-limited noise clips where ictal clips
/// carry amplified 4-12 Hz power. Ictal clips come first.
pub fn synth_clipset(
    seed: u64,
    clips: usize,
    ictal: usize,
    fs: f64,
    duration_s: f64,
) -> Result<ClipSet> {
    if clips == 0 || ictal > clips {
        return Err(Error::Parameter(format!(
            "need 0 < ictal <= clips, got {ictal}/{clips}"
        )));
    }
    let n = (fs * duration_s).round() as usize;
    if n < 4 {
        return Err(Error::Parameter("clip duration too short".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(clips);
    for idx in 0..clips {
        let label = if idx < ictal {
            Label::Ictal
        } else {
            Label::Interictal
        };
        let jitter = (0.15 * (rng.gen::<f64>() * 2.0 - 1.0)).exp();
        let mut bins = vec![Complex64::new(0.0, 0.0); n];
        for k in 1..n / 2 {
            let f = k as f64 * fs / n as f64;
            if f > 45.0 {
                break;
            }
            let mut amp = jitter / (1.0 + f / 10.0);
            if label == Label::Ictal && (4.0..=12.0).contains(&f) {
                amp *= 3.0;
            }
            let re = rng.gen::<f64>() * 2.0 - 1.0;
            let im = rng.gen::<f64>() * 2.0 - 1.0;
            let bin = Complex64::new(re, im) * amp;
            bins[k] = bin;
            bins[n - k] = bin.conj();
        }
        let time = transform::idft(&Spectrum::from_bins(bins, Some(fs)));
        let samples: Vec<f64> = time.real_part().iter().map(|v| v * 20.0 * n as f64 / 400.0).collect();
        let id = format!("{}_{idx:04}", label.as_str());
        out.push(Clip::new(id, label, fs, samples)?);
    }
    ClipSet::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn clip(samples: Vec<f64>) -> Clip {
        Clip::new("t", Label::Ictal, 100.0, samples).unwrap()
    }

    #[test]
    fn central_tendency_examples() {
        let (mean, median, mode) = central_tendency(&clip(vec![1.0, 2.0, 2.0, 3.0]));
        assert_eq!((mean, median, mode), (2.0, 2.0, 2.0));

        let (_, median, _) = central_tendency(&clip(vec![1.0, 2.0, 3.0, 4.0]));
        assert_eq!(median, 2.5);

        // rounds to 1, 1, 3 -> mode 1
        let (_, _, mode) = central_tendency(&clip(vec![1.2, 1.4, 2.9]));
        assert_eq!(mode, 1.0);

        // tie between 1 and 2 breaks toward the smaller value
        let (_, _, mode) = central_tendency(&clip(vec![1.0, 1.0, 2.0, 2.0]));
        assert_eq!(mode, 1.0);
    }

    #[test]
    fn curve_length_examples() {
        assert_eq!(curve_length(&clip(vec![1.0, 2.0, 4.0, 1.0])), 6.0);
        assert_eq!(curve_length(&clip(vec![3.3; 10])), 0.0);

        let n = 256;
        let sine: Vec<f64> = (0..n).map(|i| (TAU * i as f64 / 64.0).sin()).collect();
        let brute: f64 = (1..n).map(|i| (sine[i] - sine[i - 1]).abs()).sum();
        assert!((curve_length(&clip(sine)) - brute).abs() < 1e-12);
    }

    #[test]
    fn hjorth_degenerate_and_identity() {
        assert!(matches!(
            hjorth(&clip(vec![5.0; 16])),
            Err(Error::DegenerateSignal(_))
        ));

        // activity == energy/N - mean^2
        let v: Vec<f64> = (0..128).map(|i| (i as f64 * 0.37).sin() + 0.4).collect();
        let c = clip(v.clone());
        let (activity, _, _) = hjorth(&c).unwrap();
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let identity = energy(&c) / n - mean * mean;
        assert!((activity - identity).abs() < 1e-9);
    }

    #[test]
    fn hjorth_mobility_of_a_quarter_band_sine() {
        // first-difference gain at omega0: 2 sin(omega0/2); pi/2 -> sqrt(2)
        let n = 8192;
        let v: Vec<f64> = (0..n).map(|i| (PI / 2.0 * i as f64).sin()).collect();
        let (_, mobility, _) = hjorth(&clip(v)).unwrap();
        assert!(
            (mobility - std::f64::consts::SQRT_2).abs() < 1e-3,
            "mobility {mobility}"
        );
    }

    #[test]
    fn hjorth_activity_of_unit_variance_noise() {
        let mut state = 0x1234_5678_9abc_def0u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            ((state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0) * 3f64.sqrt()
        };
        let v: Vec<f64> = (0..20_000).map(|_| next()).collect();
        let (activity, _, _) = hjorth(&clip(v)).unwrap();
        assert!((activity - 1.0).abs() < 0.05, "activity {activity}");
    }

    #[test]
    fn analytic_signal_of_cosine_is_a_unit_phasor() {
        let n = 1024;
        let w0 = TAU * 32.0 / n as f64; // on-bin
        let x = Signal::from_real(&(0..n).map(|i| (w0 * i as f64).cos()).collect::<Vec<_>>());
        let a = analytic_signal(&x);
        for (i, v) in a.samples().iter().enumerate() {
            assert!((v.norm() - 1.0).abs() < 1e-6, "i={i}: |A|={}", v.norm());
            let want = Complex64::from_polar(1.0, w0 * i as f64);
            assert!((v - want).norm() < 1e-6);
        }
        // real part reproduces the input
        for (v, orig) in a.samples().iter().zip(x.samples()) {
            assert!((v.re - orig.re).abs() < 1e-9);
        }
    }

    #[test]
    fn analytic_signal_of_sine_is_quadrature() {
        let n = 512;
        let w0 = TAU * 20.0 / n as f64;
        let x = Signal::from_real(&(0..n).map(|i| (w0 * i as f64).sin()).collect::<Vec<_>>());
        let a = analytic_signal(&x);
        for (i, v) in a.samples().iter().enumerate() {
            let want = Complex64::new(0.0, -1.0) * Complex64::from_polar(1.0, w0 * i as f64);
            assert!((v - want).norm() < 1e-6);
        }
    }

    #[test]
    fn analytic_signal_real_part_identity_odd_length() {
        let x = Signal::from_real(&(0..257).map(|i| (i as f64 * 0.71).sin()).collect::<Vec<_>>());
        let a = analytic_signal(&x);
        for (v, orig) in a.samples().iter().zip(x.samples()) {
            assert!((v.re - orig.re).abs() < 1e-9);
        }
    }

    fn tone_clip(freq: f64, fs: f64, n: usize) -> Clip {
        Clip::new(
            "tone",
            Label::Ictal,
            fs,
            (0..n).map(|i| (TAU * freq * i as f64 / fs).sin()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn instantaneous_features_of_alpha_tone() {
        let c = tone_clip(10.0, 400.0, 8192);
        let amp = mean_inst_amplitude(&c, (8.0, 12.0), 800).unwrap();
        assert!((amp - 1.0).abs() < 0.02, "amplitude {amp}");
        let freq = mean_inst_frequency(&c, (8.0, 12.0), 800).unwrap();
        assert!((freq - 10.0).abs() < 0.2, "frequency {freq}");
    }

    #[test]
    fn instantaneous_frequency_of_delta_tone() {
        let c = tone_clip(2.5, 400.0, 8192);
        let freq = mean_inst_frequency(&c, (1.0, 4.0), 2000).unwrap();
        assert!((freq - 2.5).abs() < 0.2, "frequency {freq}");
    }

    #[test]
    fn zero_clip_has_zero_amplitude_and_no_frequency() {
        let c = Clip::new("z", Label::Ictal, 400.0, vec![0.0; 2048]).unwrap();
        let amp = mean_inst_amplitude(&c, (8.0, 12.0), 400).unwrap();
        assert_eq!(amp, 0.0);
        assert!(matches!(
            mean_inst_frequency(&c, (8.0, 12.0), 400),
            Err(Error::DegenerateSignal(_))
        ));
    }

    #[test]
    fn band_feature_parameter_errors() {
        let c = tone_clip(10.0, 400.0, 300);
        assert!(matches!(
            mean_inst_amplitude(&c, (8.0, 12.0), 400),
            Err(Error::Parameter(_))
        ));
        let c2 = tone_clip(10.0, 400.0, 2048);
        assert!(matches!(
            mean_inst_amplitude(&c2, (12.0, 8.0), 400),
            Err(Error::Design(_))
        ));
    }

    #[test]
    fn spectrogram_shape_and_peaks() {
        let fs = 400.0;
        let n = 2000;
        let x = Signal::from_real(
            &(0..n).map(|i| (TAU * 40.0 * i as f64 / fs).sin()).collect::<Vec<_>>(),
        )
        .with_sample_rate(fs);
        let sg = spectrogram(&x, 100, 80).unwrap();
        let frames = (n - 100) / 20 + 1;
        assert_eq!(sg.db.len(), frames);
        assert_eq!(sg.times_s.len(), frames);
        assert_eq!(sg.freqs_hz.len(), 51);
        // 40 Hz at 4 Hz resolution -> bin 10, every frame
        for row in &sg.db {
            let peak = row
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .unwrap()
                .0;
            assert_eq!(peak, 10);
        }
    }

    #[test]
    fn spectrogram_of_silence_sits_on_the_floor() {
        let x = Signal::from_real(&vec![0.0; 500]).with_sample_rate(100.0);
        let sg = spectrogram(&x, 100, 80).unwrap();
        let floor = 10.0 * SPECTROGRAM_EPS.log10();
        for row in &sg.db {
            for &v in row {
                assert!((v - floor).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn spectrogram_rejects_short_signals() {
        let x = Signal::from_real(&vec![1.0; 50]).with_sample_rate(100.0);
        assert!(matches!(
            spectrogram(&x, 100, 80),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn welch_integrates_to_the_variance() {
        let mut state = 42u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            ((state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0) * 3f64.sqrt()
        };
        let n = 8192;
        let v: Vec<f64> = (0..n).map(|_| next()).collect();
        let var = population_variance(&v);
        let x = Signal::from_real(&v).with_sample_rate(250.0);
        let (freqs, psd) = welch_psd(&x, 8, 0.5).unwrap();
        let df = freqs[1] - freqs[0];
        let integral: f64 = psd.iter().sum::<f64>() * df;
        assert!(
            (integral - var).abs() < 0.1 * var,
            "integral {integral} vs variance {var}"
        );
    }

    #[test]
    fn welch_peaks_at_the_tone() {
        let fs = 100.0;
        let n = 4096;
        let x = Signal::from_real(
            &(0..n).map(|i| (TAU * 12.5 * i as f64 / fs).sin()).collect::<Vec<_>>(),
        )
        .with_sample_rate(fs);
        let (freqs, psd) = welch_psd(&x, 8, 0.5).unwrap();
        let peak = psd
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        assert!((freqs[peak] - 12.5).abs() < 0.5, "peak at {}", freqs[peak]);
    }

    #[test]
    fn welch_of_silence_is_zero_and_short_input_errors() {
        let x = Signal::from_real(&vec![0.0; 1024]).with_sample_rate(100.0);
        let (_, psd) = welch_psd(&x, 8, 0.5).unwrap();
        assert!(psd.iter().all(|&p| p == 0.0));

        let tiny = Signal::from_real(&[1.0; 6]).with_sample_rate(100.0);
        assert!(matches!(
            welch_psd(&tiny, 8, 0.5),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn smooth_examples_and_oracle() {
        assert_eq!(
            smooth(&[2.0; 7], 3).unwrap(),
            vec![2.0; 7]
        );
        assert_eq!(
            smooth(&[0.0, 0.0, 3.0, 0.0, 0.0], 3).unwrap(),
            vec![0.0, 1.0, 1.0, 1.0, 0.0]
        );
        assert!(matches!(smooth(&[1.0, 2.0], 4), Err(Error::Parameter(_))));

        // impulse train against a direct double-loop oracle
        let series: Vec<f64> = (0..40).map(|i| if i % 7 == 0 { 1.0 } else { 0.0 }).collect();
        let window = 5usize;
        let got = smooth(&series, window).unwrap();
        let half = window / 2;
        for i in 0..series.len() {
            let h = half.min(i).min(series.len() - 1 - i);
            let mut acc = 0.0;
            for j in i - h..=i + h {
                acc += series[j];
            }
            let want = acc / (2 * h + 1) as f64;
            assert!((got[i] - want).abs() < 1e-15, "index {i}");
        }
    }

    fn noise_clips(seed: u64, count: usize, amp: f64, label: Label, tag: &str) -> Vec<Clip> {
        let mut state = seed | 1;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        (0..count)
            .map(|i| {
                Clip::new(
                    format!("{tag}_{i}"),
                    label,
                    100.0,
                    (0..200).map(|_| amp * next()).collect(),
                )
                .unwrap()
            })
            .collect()
    }

    #[test]
    fn amplified_ictal_noise_separates_on_energy() {
        let mut clips = noise_clips(1, 40, 5.0, Label::Ictal, "ict");
        clips.extend(noise_clips(2, 40, 1.0, Label::Interictal, "int"));
        let cs = ClipSet::new(clips).unwrap();
        let table = feature_table(
            &cs,
            &[Feature::Energy],
            &ExtractionParams::default(),
        )
        .unwrap();
        let report = separability_report(&table).unwrap();
        let auc = report.per_feature[0].auc.unwrap();
        assert!(auc > 0.95, "energy auc {auc}");
    }

    #[test]
    fn identical_distributions_score_near_half() {
        let mut clips = noise_clips(3, 60, 1.0, Label::Ictal, "ict");
        clips.extend(noise_clips(4, 60, 1.0, Label::Interictal, "int"));
        let cs = ClipSet::new(clips).unwrap();
        let table = feature_table(&cs, &[Feature::Energy], &ExtractionParams::default()).unwrap();
        let report = separability_report(&table).unwrap();
        let auc = report.per_feature[0].auc.unwrap();
        assert!((auc - 0.5).abs() < 0.1, "auc {auc}");
        assert!((0.0..=1.0).contains(&auc));
    }

    #[test]
    fn empty_selection_gives_an_empty_table() {
        let cs = ClipSet::new(noise_clips(5, 3, 1.0, Label::Ictal, "x")).unwrap();
        let table = feature_table(&cs, &[], &ExtractionParams::default()).unwrap();
        assert!(table.feature_names().is_empty());
        assert_eq!(table.rows().len(), 3);
        assert!(table.rows()[0].values.is_empty());
    }

    #[test]
    fn single_label_sets_cannot_be_scored() {
        let cs = ClipSet::new(noise_clips(6, 5, 1.0, Label::Ictal, "x")).unwrap();
        let table = feature_table(&cs, &[Feature::Energy], &ExtractionParams::default()).unwrap();
        assert!(matches!(
            separability_report(&table),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn synthetic_clipset_counts_and_determinism() {
        let a = synth_clipset(9, 30, 10, 400.0, 1.0).unwrap();
        assert_eq!(a.clips().len(), 30);
        assert_eq!(a.count(Label::Ictal), 10);
        assert_eq!(a.count(Label::Interictal), 20);
        assert_eq!(a.clips()[0].samples.len(), 400);
        // ictal first
        assert!(a.clips()[..10].iter().all(|c| c.label == Label::Ictal));

        let b = synth_clipset(9, 30, 10, 400.0, 1.0).unwrap();
        for (ca, cb) in a.clips().iter().zip(b.clips()) {
            assert_eq!(ca.samples, cb.samples);
        }

        assert!(matches!(
            synth_clipset(9, 5, 9, 400.0, 1.0),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn clipset_invariants() {
        let c1 = Clip::new("a", Label::Ictal, 100.0, vec![0.0, 1.0]).unwrap();
        let c2 = Clip::new("a", Label::Interictal, 100.0, vec![0.0, 1.0]).unwrap();
        assert!(matches!(
            ClipSet::new(vec![c1.clone(), c2]),
            Err(Error::Parameter(_))
        ));
        let c3 = Clip::new("b", Label::Interictal, 200.0, vec![0.0, 1.0]).unwrap();
        assert!(matches!(
            ClipSet::new(vec![c1, c3]),
            Err(Error::Parameter(_))
        ));
        assert!(Clip::new("x", Label::Ictal, 0.0, vec![0.0, 1.0]).is_err());
        assert!(Clip::new("x", Label::Ictal, 10.0, vec![0.0]).is_err());
    }
}
