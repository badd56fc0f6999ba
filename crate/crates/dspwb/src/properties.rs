//! Closed-form rule engine for DFT identities, plus a quiz generator and
//! checker built on it.
//!
//! Each [`PropertyRule`] names a structural change to a sequence (circular
//! shift, reversal, conjugation, sign alternation, repetition, zero
//! interleaving, modulation, or transforming the transform itself) together
//! with a closed form for the resulting spectrum. [`verify_rule`] pits that
//! closed form against the literal double-loop transform oracle.

use crate::error::{Error, Result};
use crate::signal::Signal;
use crate::transform::{self, Spectrum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;
use std::fmt;

/// Grading tolerance for quiz answers, relative to the answer's max magnitude.
pub const QUIZ_TOL: f64 = 1e-6;
/// Oracle agreement threshold for [`verify_rule`].
pub const VERIFY_TOL: f64 = 1e-9;

/// A structural transformation with a known closed-form DFT image.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropertyRule {
    /// Treat the DFT of the sequence as a new time sequence.
    DftOfDft,
    /// `y[n] = x[((-n))]`.
    Reverse,
    /// `y[n] = conj(x[n])`.
    Conjugate,
    /// `y[n] = conj(x[((-n))])`.
    ConjugateReverse,
    /// `y[n] = (-1)^n x[n]`; requires even length.
    SignAlternate,
    /// `y[n] = x[((n - m))]`.
    CircularShift(i64),
    /// `r` concatenated copies.
    Repeat(usize),
    /// `l - 1` zeros after every sample.
    ZeroInterleave(usize),
    /// `y[n] = x[n] exp(j 2 pi k0 n / N)` for integer `k0`.
    ModulateBy(i64),
}

impl PropertyRule {
    /// All rule kinds, instantiated with small sample parameters.
    pub fn sample_rules() -> Vec<PropertyRule> {
        vec![
            PropertyRule::DftOfDft,
            PropertyRule::Reverse,
            PropertyRule::Conjugate,
            PropertyRule::ConjugateReverse,
            PropertyRule::SignAlternate,
            PropertyRule::CircularShift(2),
            PropertyRule::Repeat(2),
            PropertyRule::ZeroInterleave(2),
            PropertyRule::ModulateBy(1),
        ]
    }
}

impl fmt::Display for PropertyRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PropertyRule::DftOfDft => write!(f, "dft-of-dft"),
            PropertyRule::Reverse => write!(f, "reverse"),
            PropertyRule::Conjugate => write!(f, "conjugate"),
            PropertyRule::ConjugateReverse => write!(f, "conjugate-reverse"),
            PropertyRule::SignAlternate => write!(f, "sign-alternate"),
            PropertyRule::CircularShift(m) => write!(f, "circular-shift m={m}"),
            PropertyRule::Repeat(r) => write!(f, "repeat r={r}"),
            PropertyRule::ZeroInterleave(l) => write!(f, "zero-interleave l={l}"),
            PropertyRule::ModulateBy(k0) => write!(f, "modulate k0={k0}"),
        }
    }
}

/// A time sequence together with its spectrum; the unit the closed forms
/// operate on. (The transform-of-transform identity is written in terms of
/// the time-side letters, so predicting it needs both halves of the pair.)
#[derive(Debug, Clone)]
pub struct DftPair {
    pub time: Signal,
    pub spectrum: Spectrum,
}

impl DftPair {
    /// Builds the pair by transforming `x` once.
    pub fn from_time(x: &Signal) -> Self {
        Self {
            time: x.clone(),
            spectrum: transform::dft(x),
        }
    }

    /// Applies `rule` to the time side and predicts the new spectrum in
    /// closed form; no transform is computed for the prediction.
    pub fn map(&self, rule: &PropertyRule) -> Result<DftPair> {
        Ok(DftPair {
            time: apply_rule_time(rule, &self.time)?,
            spectrum: predict_spectrum(rule, self)?,
        })
    }

    /// Scales both sides by `c` (DFT linearity).
    pub fn scaled(&self, c: Complex64) -> DftPair {
        DftPair {
            time: Signal::from_complex(self.time.samples().iter().map(|&v| c * v).collect()),
            spectrum: Spectrum::from_bins(
                self.spectrum.bins().iter().map(|&v| c * v).collect(),
                self.spectrum.sample_rate(),
            ),
        }
    }
}

fn require_even(n: usize, rule: &PropertyRule) -> Result<()> {
    if n % 2 != 0 {
        return Err(Error::UnsupportedRule(format!(
            "{rule} needs an even length; got {n} (a half-bin shift has no closed form on the same bin grid)"
        )));
    }
    Ok(())
}

fn validate_factor(f: usize, rule: &PropertyRule) -> Result<()> {
    if f < 1 {
        return Err(Error::UnsupportedRule(format!("{rule}: factor must be >= 1")));
    }
    Ok(())
}

/// Applies the rule's literal time-domain action.
pub fn apply_rule_time(rule: &PropertyRule, x: &Signal) -> Result<Signal> {
    match *rule {
        PropertyRule::DftOfDft => {
            Ok(Signal::from_complex(transform::direct_dft(x).bins().to_vec()))
        }
        PropertyRule::Reverse => Ok(x.circular_reverse()),
        PropertyRule::Conjugate => Ok(x.conjugate()),
        PropertyRule::ConjugateReverse => Ok(x.circular_reverse().conjugate()),
        PropertyRule::SignAlternate => {
            require_even(x.len(), rule)?;
            Ok(x.alternate_sign())
        }
        PropertyRule::CircularShift(m) => Ok(x.circular_shift(m)),
        PropertyRule::Repeat(r) => {
            validate_factor(r, rule)?;
            Ok(x.repeat(r))
        }
        PropertyRule::ZeroInterleave(l) => {
            validate_factor(l, rule)?;
            Ok(x.zero_interleave(l))
        }
        PropertyRule::ModulateBy(k0) => Ok(x.modulate(k0 as f64)),
    }
}

/// Spectrum-side closed form: the image of a spectrum `X` when the rule is
/// applied to its time-domain signal. Defined for every rule except
/// [`PropertyRule::DftOfDft`], whose image lives on the time side.
pub fn spectrum_map(rule: &PropertyRule, spectrum: &Spectrum) -> Result<Spectrum> {
    let n = spectrum.n();
    let x = spectrum.bins();
    let idx = |i: i64| x[i.rem_euclid(n as i64) as usize];
    let bins: Vec<Complex64> = match *rule {
        PropertyRule::DftOfDft => {
            return Err(Error::UnsupportedRule(
                "dft-of-dft has no spectrum-only closed form; use predict_spectrum on a pair"
                    .into(),
            ))
        }
        PropertyRule::Reverse => (0..n as i64).map(|k| idx(-k)).collect(),
        PropertyRule::Conjugate => (0..n as i64).map(|k| idx(-k).conj()).collect(),
        PropertyRule::ConjugateReverse => x.iter().map(|c| c.conj()).collect(),
        PropertyRule::SignAlternate => {
            require_even(n, rule)?;
            (0..n as i64).map(|k| idx(k + n as i64 / 2)).collect()
        }
        PropertyRule::CircularShift(m) => (0..n)
            .map(|k| {
                let phase = -TAU * (k as f64) * (m as f64) / n as f64;
                x[k] * Complex64::from_polar(1.0, phase)
            })
            .collect(),
        PropertyRule::Repeat(r) => {
            validate_factor(r, rule)?;
            (0..n * r)
                .map(|k| {
                    if k % r == 0 {
                        r as f64 * x[k / r]
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect()
        }
        PropertyRule::ZeroInterleave(l) => {
            validate_factor(l, rule)?;
            (0..n * l).map(|k| x[k % n]).collect()
        }
        PropertyRule::ModulateBy(k0) => (0..n as i64).map(|k| idx(k - k0)).collect(),
    };
    Ok(Spectrum::from_bins(bins, spectrum.sample_rate()))
}

/// Predicts the DFT of `apply_rule_time(rule, pair.time)` from the pair's
/// known halves, without computing any transform.
pub fn predict_spectrum(rule: &PropertyRule, pair: &DftPair) -> Result<Spectrum> {
    match *rule {
        PropertyRule::DftOfDft => {
            // DFT of the spectrum-as-sequence is N times the reversed signal.
            let n = pair.time.len();
            let x = pair.time.samples();
            let bins = (0..n as i64)
                .map(|k| n as f64 * x[(-k).rem_euclid(n as i64) as usize])
                .collect();
            Ok(Spectrum::from_bins(bins, pair.spectrum.sample_rate()))
        }
        _ => spectrum_map(rule, &pair.spectrum),
    }
}

/// Outcome of pitting a closed form against the direct-sum oracle.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub rule: PropertyRule,
    pub n: usize,
    pub max_rel_err: f64,
    pub pass: bool,
}

/// Max elementwise deviation relative to the reference's max magnitude.
pub fn max_rel_err(got: &[Complex64], reference: &[Complex64]) -> f64 {
    assert_eq!(got.len(), reference.len());
    let scale = reference
        .iter()
        .map(|c| c.norm())
        .fold(1e-300, f64::max);
    got.iter()
        .zip(reference)
        .map(|(a, b)| (a - b).norm() / scale)
        .fold(0.0, f64::max)
}

/// Cross-checks `rule` on `x`: the direct-sum transform of the rule's time
/// image must match the closed-form prediction within [`VERIFY_TOL`].
pub fn verify_rule(rule: &PropertyRule, x: &Signal) -> Result<VerifyReport> {
    let actual = transform::direct_dft(&apply_rule_time(rule, x)?);
    let pair = DftPair {
        time: x.clone(),
        spectrum: transform::direct_dft(x),
    };
    let predicted = predict_spectrum(rule, &pair)?;
    let err = max_rel_err(predicted.bins(), actual.bins());
    Ok(VerifyReport {
        rule: *rule,
        n: x.len(),
        max_rel_err: err,
        pass: err <= VERIFY_TOL,
    })
}

/// Which domain a quiz item's given sequence lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuizSide {
    Time,
    Frequency,
}

impl fmt::Display for QuizSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuizSide::Time => write!(f, "time"),
            QuizSide::Frequency => write!(f, "frequency"),
        }
    }
}

/// One generated exercise: a sequence, a rule, and the hidden answer.
///
/// Time-side items ask for the rule's literal time-domain image; frequency-
/// side items ask for the spectrum-side image of the given spectrum.
#[derive(Debug, Clone)]
pub struct QuizItem {
    pub given_side: QuizSide,
    pub given_seq: Vec<Complex64>,
    pub rule: PropertyRule,
    pub answer_seq: Vec<Complex64>,
}

fn quiz_answer(side: QuizSide, rule: &PropertyRule, given: &[Complex64]) -> Result<Vec<Complex64>> {
    match side {
        QuizSide::Time => {
            Ok(apply_rule_time(rule, &Signal::from_complex(given.to_vec()))?
                .samples()
                .to_vec())
        }
        QuizSide::Frequency => Ok(spectrum_map(
            rule,
            &Spectrum::from_bins(given.to_vec(), None),
        )?
        .bins()
        .to_vec()),
    }
}

/// Generates `rows` deterministic quiz items over length-`n` sequences.
///
/// The transform-of-transform rule is never drawn (its closed form is not a
/// pure permutation of the given side) and sign alternation is only drawn
/// for even `n`.
pub fn generate_quiz(n: usize, rows: usize, seed: u64) -> Result<Vec<QuizItem>> {
    if n < 2 {
        return Err(Error::Parameter(format!("quiz length must be >= 2, got {n}")));
    }
    if rows < 1 {
        return Err(Error::Parameter("quiz needs at least one row".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut items = Vec::with_capacity(rows);
    for _ in 0..rows {
        let rule = loop {
            let pick = rng.gen_range(0..8u32);
            let candidate = match pick {
                0 => PropertyRule::Reverse,
                1 => PropertyRule::Conjugate,
                2 => PropertyRule::ConjugateReverse,
                3 => PropertyRule::SignAlternate,
                4 => PropertyRule::CircularShift(rng.gen_range(1..n as i64)),
                5 => PropertyRule::Repeat(rng.gen_range(2..=3)),
                6 => PropertyRule::ZeroInterleave(rng.gen_range(2..=3)),
                _ => PropertyRule::ModulateBy(rng.gen_range(1..n as i64)),
            };
            if candidate == PropertyRule::SignAlternate && n % 2 != 0 {
                continue;
            }
            break candidate;
        };
        let given_side = if rng.gen_range(0..2u32) == 0 {
            QuizSide::Time
        } else {
            QuizSide::Frequency
        };
        let given_seq: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0))
            .collect();
        let answer_seq = quiz_answer(given_side, &rule, &given_seq)?;
        items.push(QuizItem {
            given_side,
            given_seq,
            rule,
            answer_seq,
        });
    }
    Ok(items)
}

/// Grading outcome for one quiz item.
#[derive(Debug, Clone)]
pub struct Grade {
    pub correct: bool,
    pub first_mismatch: Option<usize>,
    pub max_rel_err: f64,
}

/// Grades `proposed` against the item's hidden answer, elementwise within
/// [`QUIZ_TOL`] relative to the answer's max magnitude.
pub fn check_answer(item: &QuizItem, proposed: &[Complex64]) -> Result<Grade> {
    if proposed.len() != item.answer_seq.len() {
        return Err(Error::LengthMismatch {
            expected: item.answer_seq.len(),
            actual: proposed.len(),
        });
    }
    let scale = item
        .answer_seq
        .iter()
        .map(|c| c.norm())
        .fold(1e-300, f64::max);
    let mut first_mismatch = None;
    let mut worst = 0.0f64;
    for (i, (p, a)) in proposed.iter().zip(&item.answer_seq).enumerate() {
        let rel = (p - a).norm() / scale;
        worst = worst.max(rel);
        if rel > QUIZ_TOL && first_mismatch.is_none() {
            first_mismatch = Some(i);
        }
    }
    Ok(Grade {
        correct: first_mismatch.is_none(),
        first_mismatch,
        max_rel_err: worst,
    })
}

fn fmt_complex(c: Complex64) -> String {
    format!("{:.16e}:{:.16e}", c.re, c.im)
}

/// `[re:im,re:im,...]` with 17 significant digits per component, so that the
/// text round-trips bit for bit.
pub fn format_vector(values: &[Complex64]) -> String {
    let body: Vec<String> = values.iter().map(|&c| fmt_complex(c)).collect();
    format!("[{}]", body.join(","))
}

/// One sheet line: `side rule params given=[...]`.
pub fn format_sheet_line(item: &QuizItem) -> String {
    format!(
        "{} {} given={}",
        item.given_side,
        item.rule,
        format_vector(&item.given_seq)
    )
}

/// One key line, parallel to the sheet: `answer=[...]`.
pub fn format_key_line(item: &QuizItem) -> String {
    format!("answer={}", format_vector(&item.answer_seq))
}

fn parse_err(path: &str, line_no: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_string(),
        line: line_no,
        msg: msg.into(),
    }
}

/// Parses a `[re:im,...]` literal.
pub fn parse_vector(path: &str, line_no: usize, text: &str) -> Result<Vec<Complex64>> {
    let inner = text
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| parse_err(path, line_no, "expected a [re:im,...] vector literal"))?;
    if inner.is_empty() {
        return Err(parse_err(path, line_no, "empty vector literal"));
    }
    inner
        .split(',')
        .map(|pair| {
            let (re, im) = pair
                .split_once(':')
                .ok_or_else(|| parse_err(path, line_no, format!("bad complex literal `{pair}`")))?;
            let re: f64 = re
                .trim()
                .parse()
                .map_err(|_| parse_err(path, line_no, format!("bad real part `{re}`")))?;
            let im: f64 = im
                .trim()
                .parse()
                .map_err(|_| parse_err(path, line_no, format!("bad imaginary part `{im}`")))?;
            Ok(Complex64::new(re, im))
        })
        .collect()
}

fn parse_rule(path: &str, line_no: usize, name: &str, param: Option<&str>) -> Result<PropertyRule> {
    let int_param = |key: &str| -> Result<i64> {
        let p = param
            .ok_or_else(|| parse_err(path, line_no, format!("rule `{name}` needs {key}=<int>")))?;
        let (k, v) = p
            .split_once('=')
            .ok_or_else(|| parse_err(path, line_no, format!("bad parameter `{p}`")))?;
        if k != key {
            return Err(parse_err(path, line_no, format!("expected {key}=, got {k}=")));
        }
        v.parse()
            .map_err(|_| parse_err(path, line_no, format!("bad integer `{v}`")))
    };
    match name {
        "dft-of-dft" => Ok(PropertyRule::DftOfDft),
        "reverse" => Ok(PropertyRule::Reverse),
        "conjugate" => Ok(PropertyRule::Conjugate),
        "conjugate-reverse" => Ok(PropertyRule::ConjugateReverse),
        "sign-alternate" => Ok(PropertyRule::SignAlternate),
        "circular-shift" => Ok(PropertyRule::CircularShift(int_param("m")?)),
        "repeat" => Ok(PropertyRule::Repeat(int_param("r")? as usize)),
        "zero-interleave" => Ok(PropertyRule::ZeroInterleave(int_param("l")? as usize)),
        "modulate" => Ok(PropertyRule::ModulateBy(int_param("k0")?)),
        other => Err(parse_err(path, line_no, format!("unknown rule `{other}`"))),
    }
}

/// Parses a sheet line back into a [`QuizItem`], recomputing the answer.
pub fn parse_sheet_line(path: &str, line_no: usize, line: &str) -> Result<QuizItem> {
    let mut parts = line.trim().split_whitespace();
    let side = match parts.next() {
        Some("time") => QuizSide::Time,
        Some("frequency") => QuizSide::Frequency,
        other => {
            return Err(parse_err(
                path,
                line_no,
                format!("expected side `time` or `frequency`, got {other:?}"),
            ))
        }
    };
    let name = parts
        .next()
        .ok_or_else(|| parse_err(path, line_no, "missing rule name"))?;
    let rest: Vec<&str> = parts.collect();
    let (param, given_tok) = match rest.len() {
        1 => (None, rest[0]),
        2 => (Some(rest[0]), rest[1]),
        _ => return Err(parse_err(path, line_no, "malformed item line")),
    };
    let rule = parse_rule(path, line_no, name, param)?;
    let given_text = given_tok
        .strip_prefix("given=")
        .ok_or_else(|| parse_err(path, line_no, "missing given=[...] field"))?;
    let given_seq = parse_vector(path, line_no, given_text)?;
    let answer_seq = quiz_answer(side, &rule, &given_seq)?;
    Ok(QuizItem {
        given_side: side,
        given_seq,
        rule,
        answer_seq,
    })
}

/// Parses a key/answers line: `answer=[...]`.
pub fn parse_key_line(path: &str, line_no: usize, line: &str) -> Result<Vec<Complex64>> {
    let text = line
        .trim()
        .strip_prefix("answer=")
        .ok_or_else(|| parse_err(path, line_no, "missing answer=[...] field"))?;
    parse_vector(path, line_no, text)
}
