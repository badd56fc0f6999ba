//! File ingestion and emission: 16-bit PCM WAV, CSV signals, plot-series
//! CSVs, matrix CSVs, and clip manifests.
//!
//! All pipelines are single-channel, so multichannel WAV input is reduced to
//! channel 0 (the channel count is reported back via [`WavFile`]). CSV
//! signals are one value per line, or `re,im` for complex data; an optional
//! single header line is detected by a non-numeric first token. Values are
//! printed with 17 significant digits so text round trips are exact.

use crate::eeg::{Clip, ClipSet, Label};
use crate::error::{Error, Result};
use crate::signal::Signal;
use num_complex::Complex64;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

/// PCM WAV container metadata.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WavFile {
    pub channels: u16,
    pub bits_per_sample: u16,
    pub fs: u32,
    pub frames: usize,
}

fn wav_err(path: &Path, offset: u64, msg: impl Into<String>) -> Error {
    Error::Wav {
        path: path.display().to_string(),
        offset,
        msg: msg.into(),
    }
}

struct ByteReader<'a> {
    data: &'a [u8],
    pos: usize,
    path: &'a Path,
}

impl<'a> ByteReader<'a> {
    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8]> {
        if self.pos + n > self.data.len() {
            return Err(wav_err(
                self.path,
                self.pos as u64,
                format!("unexpected end of file while reading {what}"),
            ));
        }
        let out = &self.data[self.pos..self.pos + n];
        self.pos += n;
        Ok(out)
    }

    fn tag(&mut self, what: &str) -> Result<[u8; 4]> {
        let b = self.take(4, what)?;
        Ok([b[0], b[1], b[2], b[3]])
    }

    fn u32le(&mut self, what: &str) -> Result<u32> {
        let b = self.take(4, what)?;
        Ok(u32::from_le_bytes([b[0], b[1], b[2], b[3]]))
    }
}

/// Reads a 16-bit PCM WAV: channel 0, normalized to [-1, 1) by 1/32768.
pub fn read_wav_with_meta(path: impl AsRef<Path>) -> Result<(WavFile, Signal)> {
    let path = path.as_ref();
    let data = fs::read(path)?;
    let mut r = ByteReader {
        data: &data,
        pos: 0,
        path,
    };

    if &r.tag("RIFF header")? != b"RIFF" {
        return Err(wav_err(path, 0, "missing RIFF magic"));
    }
    r.u32le("RIFF size")?;
    if &r.tag("WAVE tag")? != b"WAVE" {
        return Err(wav_err(path, 8, "missing WAVE form type"));
    }

    let mut fmt: Option<(u16, u16, u32, u16)> = None; // format, channels, fs, bits
    let mut payload: Option<&[u8]> = None;
    while r.pos < data.len() {
        let chunk_start = r.pos as u64;
        let id = r.tag("chunk id")?;
        let size = r.u32le("chunk size")? as usize;
        let body = r.take(size, "chunk body")?;
        if size % 2 == 1 && r.pos < data.len() {
            r.pos += 1; // chunks are word aligned
        }
        match &id {
            b"fmt " => {
                if body.len() < 16 {
                    return Err(wav_err(path, chunk_start, "fmt chunk too short"));
                }
                let format = u16::from_le_bytes([body[0], body[1]]);
                let channels = u16::from_le_bytes([body[2], body[3]]);
                let fs = u32::from_le_bytes([body[4], body[5], body[6], body[7]]);
                let bits = u16::from_le_bytes([body[14], body[15]]);
                if format != 1 {
                    return Err(wav_err(
                        path,
                        chunk_start,
                        format!("unsupported format code {format}; only PCM (1) is handled"),
                    ));
                }
                if bits != 16 {
                    return Err(wav_err(
                        path,
                        chunk_start,
                        format!("unsupported bit depth {bits}; only 16-bit PCM is handled"),
                    ));
                }
                if channels == 0 {
                    return Err(wav_err(path, chunk_start, "zero channels"));
                }
                fmt = Some((format, channels, fs, bits));
            }
            b"data" => payload = Some(body),
            _ => {} // skip ancillary chunks
        }
    }

    let (_, channels, fs, bits) = fmt.ok_or_else(|| wav_err(path, 12, "no fmt chunk"))?;
    let payload = payload.ok_or_else(|| wav_err(path, 12, "no data chunk"))?;
    let frame_bytes = 2 * channels as usize;
    let frames = payload.len() / frame_bytes;
    if frames == 0 {
        return Err(wav_err(path, 12, "empty data chunk"));
    }
    let samples: Vec<f64> = (0..frames)
        .map(|i| {
            let off = i * frame_bytes;
            let v = i16::from_le_bytes([payload[off], payload[off + 1]]);
            v as f64 / 32768.0
        })
        .collect();
    let meta = WavFile {
        channels,
        bits_per_sample: bits,
        fs,
        frames,
    };
    Ok((meta, Signal::from_real(&samples).with_sample_rate(fs as f64)))
}

/// Reads channel 0 of a 16-bit PCM WAV as a real signal.
pub fn read_wav(path: impl AsRef<Path>) -> Result<Signal> {
    read_wav_with_meta(path).map(|(_, x)| x)
}

/// Writes the real part of `x` as mono 16-bit PCM: samples are clipped to
/// [-1, 1) and quantized by rounding. Requires a sample rate.
pub fn write_wav(path: impl AsRef<Path>, x: &Signal) -> Result<()> {
    let fs = x.sample_rate().ok_or(Error::MissingSampleRate)? as u32;
    let n = x.len();
    let data_bytes = 2 * n as u32;

    let mut out = Vec::with_capacity(44 + data_bytes as usize);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&(36 + data_bytes).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes()); // PCM
    out.extend_from_slice(&1u16.to_le_bytes()); // mono
    out.extend_from_slice(&fs.to_le_bytes());
    out.extend_from_slice(&(fs * 2).to_le_bytes()); // byte rate
    out.extend_from_slice(&2u16.to_le_bytes()); // block align
    out.extend_from_slice(&16u16.to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&data_bytes.to_le_bytes());
    for c in x.samples() {
        let q = (c.re * 32768.0).round().clamp(-32768.0, 32767.0) as i16;
        out.extend_from_slice(&q.to_le_bytes());
    }
    fs::write(path, out)?;
    Ok(())
}

fn fmt_value(v: f64) -> String {
    format!("{v:.16e}")
}

fn looks_numeric(token: &str) -> bool {
    token.trim().parse::<f64>().is_ok()
}

fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        line,
        msg: msg.into(),
    }
}

/// Reads a one-column (real) or two-column (`re,im`) CSV signal. A single
/// leading header line is skipped when its first token is not numeric.
pub fn read_csv_signal(path: impl AsRef<Path>, fs: Option<f64>) -> Result<Signal> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    let mut samples: Vec<Complex64> = Vec::new();
    let mut columns: Option<usize> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if samples.is_empty() && columns.is_none() && !looks_numeric(fields[0]) {
            if line_no == 1 {
                continue; // header
            }
            return Err(parse_err(path, line_no, format!("non-numeric value `{}`", fields[0])));
        }
        let ncols = fields.len();
        if !(1..=2).contains(&ncols) {
            return Err(parse_err(
                path,
                line_no,
                format!("expected 1 or 2 columns, found {ncols}"),
            ));
        }
        if let Some(expect) = columns {
            if ncols != expect {
                return Err(parse_err(
                    path,
                    line_no,
                    format!("inconsistent column count: {ncols} after {expect}"),
                ));
            }
        } else {
            columns = Some(ncols);
        }
        let mut parsed = [0.0f64; 2];
        for (i, f) in fields.iter().enumerate() {
            parsed[i] = f
                .parse()
                .map_err(|_| parse_err(path, line_no, format!("bad number `{f}`")))?;
        }
        samples.push(Complex64::new(parsed[0], parsed[1]));
    }
    if samples.is_empty() {
        return Err(parse_err(path, 1, "no data rows"));
    }
    let mut out = Signal::from_complex(samples);
    if let Some(fs) = fs {
        out = out.with_sample_rate(fs);
    }
    Ok(out)
}

/// Writes a signal as CSV: one real value per line, or `re,im` when the
/// signal is not real.
pub fn write_csv_signal(path: impl AsRef<Path>, x: &Signal) -> Result<()> {
    let mut text = String::new();
    if x.is_real() {
        for c in x.samples() {
            text.push_str(&fmt_value(c.re));
            text.push('\n');
        }
    } else {
        for c in x.samples() {
            text.push_str(&fmt_value(c.re));
            text.push(',');
            text.push_str(&fmt_value(c.im));
            text.push('\n');
        }
    }
    fs::write(path, text)?;
    Ok(())
}

/// Writes named equal-length real columns with a header row.
pub fn write_series(path: impl AsRef<Path>, columns: &[(&str, &[f64])]) -> Result<()> {
    if columns.is_empty() {
        return Err(Error::Parameter("no columns to write".into()));
    }
    let rows = columns[0].1.len();
    if columns.iter().any(|(_, v)| v.len() != rows) {
        return Err(Error::Parameter("series columns differ in length".into()));
    }
    let mut text = String::new();
    text.push_str(
        &columns
            .iter()
            .map(|(name, _)| name.to_string())
            .collect::<Vec<_>>()
            .join(","),
    );
    text.push('\n');
    for i in 0..rows {
        let row: Vec<String> = columns.iter().map(|(_, v)| fmt_value(v[i])).collect();
        text.push_str(&row.join(","));
        text.push('\n');
    }
    fs::write(path, text)?;
    Ok(())
}

/// Writes a time-by-frequency matrix: header row of frequencies, then one
/// row per time frame led by its time value.
pub fn write_matrix(
    path: impl AsRef<Path>,
    times: &[f64],
    freqs: &[f64],
    matrix: &[Vec<f64>],
) -> Result<()> {
    if matrix.len() != times.len() || matrix.iter().any(|row| row.len() != freqs.len()) {
        return Err(Error::Parameter("matrix shape does not match its axes".into()));
    }
    let file = fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(file);
    write!(w, "time")?;
    for f in freqs {
        write!(w, ",{}", fmt_value(*f))?;
    }
    writeln!(w)?;
    for (t, row) in times.iter().zip(matrix) {
        write!(w, "{}", fmt_value(*t))?;
        for v in row {
            write!(w, ",{}", fmt_value(*v))?;
        }
        writeln!(w)?;
    }
    Ok(())
}

const MANIFEST_HEADER: &str = "id,path,label,fs";

/// Reads a clip manifest (`id,path,label,fs`, header required; paths
/// resolve relative to the manifest) and every clip CSV it names.
pub fn read_manifest(path: impl AsRef<Path>) -> Result<ClipSet> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim().eq_ignore_ascii_case(MANIFEST_HEADER) => {}
        _ => {
            return Err(parse_err(
                path,
                1,
                format!("manifest must start with `{MANIFEST_HEADER}`"),
            ))
        }
    }
    let mut clips = Vec::new();
    for (idx, raw) in lines {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 4 {
            return Err(parse_err(
                path,
                line_no,
                format!("expected 4 fields, found {}", fields.len()),
            ));
        }
        let label = Label::parse(fields[2])
            .ok_or_else(|| parse_err(path, line_no, format!("unknown label `{}`", fields[2])))?;
        let fs: f64 = fields[3]
            .parse()
            .map_err(|_| parse_err(path, line_no, format!("bad sample rate `{}`", fields[3])))?;
        let clip_path = {
            let p = PathBuf::from(fields[1]);
            if p.is_absolute() {
                p
            } else {
                base.join(p)
            }
        };
        let signal = read_csv_signal(&clip_path, Some(fs))?;
        clips.push(Clip::new(fields[0], label, fs, signal.real_part())?);
    }
    if clips.is_empty() {
        return Err(parse_err(path, 1, "manifest names no clips"));
    }
    ClipSet::new(clips)
}

/// Writes every clip as `clips/<id>.csv` under `dir` plus a `manifest.csv`,
/// and returns the manifest path.
pub fn write_clipset(dir: impl AsRef<Path>, cs: &ClipSet) -> Result<PathBuf> {
    let dir = dir.as_ref();
    let clip_dir = dir.join("clips");
    fs::create_dir_all(&clip_dir)?;
    let mut manifest = String::from(MANIFEST_HEADER);
    manifest.push('\n');
    for clip in cs.clips() {
        let rel = format!("clips/{}.csv", clip.id);
        write_csv_signal(dir.join(&rel), &clip.to_signal())?;
        manifest.push_str(&format!(
            "{},{},{},{}\n",
            clip.id,
            rel,
            clip.label.as_str(),
            clip.fs
        ));
    }
    let manifest_path = dir.join("manifest.csv");
    fs::write(&manifest_path, manifest)?;
    Ok(manifest_path)
}

/// Writes flat key-value metadata as a small JSON object.
pub fn write_metadata(path: impl AsRef<Path>, entries: &[(String, String)]) -> Result<()> {
    let mut text = String::from("{\n");
    for (i, (k, v)) in entries.iter().enumerate() {
        text.push_str(&format!(
            "  \"{}\": \"{}\"{}\n",
            k,
            v.replace('"', "'"),
            if i + 1 < entries.len() { "," } else { "" }
        ));
    }
    text.push_str("}\n");
    fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    fn random_in_range(n: usize, seed: u64) -> Vec<f64> {
        let mut state = seed | 1;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        (0..n).map(|_| next() * 0.999).collect()
    }

    #[test]
    fn wav_round_trip_is_within_one_quantum() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("t.wav");
        let x = Signal::from_real(&random_in_range(500, 3)).with_sample_rate(8000.0);
        write_wav(&path, &x).unwrap();
        let (meta, back) = read_wav_with_meta(&path).unwrap();
        assert_eq!(meta.channels, 1);
        assert_eq!(meta.bits_per_sample, 16);
        assert_eq!(meta.fs, 8000);
        assert_eq!(meta.frames, 500);
        assert_eq!(back.sample_rate(), Some(8000.0));
        for (a, b) in back.samples().iter().zip(x.samples()) {
            assert!((a.re - b.re).abs() <= 1.0 / 32768.0);
        }
    }

    #[test]
    fn out_of_range_samples_clip_deterministically() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("clip.wav");
        let x = Signal::from_real(&[2.0, -3.0, 0.99999]).with_sample_rate(100.0);
        write_wav(&path, &x).unwrap();
        let back = read_wav(&path).unwrap();
        assert!((back.real_part()[0] - 32767.0 / 32768.0).abs() < 1e-12);
        assert!((back.real_part()[1] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn multichannel_reads_channel_zero() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("st.wav");
        // hand-build a 2-channel file: L = 1000, 2000; R = -1, -2
        let mut out = Vec::new();
        out.extend_from_slice(b"RIFF");
        out.extend_from_slice(&(36u32 + 8).to_le_bytes());
        out.extend_from_slice(b"WAVE");
        out.extend_from_slice(b"fmt ");
        out.extend_from_slice(&16u32.to_le_bytes());
        out.extend_from_slice(&1u16.to_le_bytes());
        out.extend_from_slice(&2u16.to_le_bytes());
        out.extend_from_slice(&44100u32.to_le_bytes());
        out.extend_from_slice(&(44100u32 * 4).to_le_bytes());
        out.extend_from_slice(&4u16.to_le_bytes());
        out.extend_from_slice(&16u16.to_le_bytes());
        out.extend_from_slice(b"data");
        out.extend_from_slice(&8u32.to_le_bytes());
        for v in [1000i16, -1, 2000, -2] {
            out.extend_from_slice(&v.to_le_bytes());
        }
        std::fs::write(&path, out).unwrap();
        let (meta, x) = read_wav_with_meta(&path).unwrap();
        assert_eq!(meta.channels, 2);
        assert_eq!(x.len(), 2);
        assert!((x.real_part()[0] - 1000.0 / 32768.0).abs() < 1e-12);
        assert!((x.real_part()[1] - 2000.0 / 32768.0).abs() < 1e-12);
    }

    #[test]
    fn malformed_wav_errors_name_the_offset() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("bad.wav");
        std::fs::write(&path, b"RIFX0000WAVE").unwrap();
        match read_wav(&path) {
            Err(Error::Wav { offset, .. }) => assert_eq!(offset, 0),
            other => panic!("expected wav error, got {other:?}"),
        }

        std::fs::write(&path, b"RIFF\x00\x00\x00\x00WAVEfmt ").unwrap();
        assert!(matches!(read_wav(&path), Err(Error::Wav { .. })));
    }

    #[test]
    fn missing_sample_rate_is_rejected_on_write() {
        let dir = tempdir().unwrap();
        let x = Signal::from_real(&[0.1, 0.2]);
        assert!(matches!(
            write_wav(dir.path().join("x.wav"), &x),
            Err(Error::MissingSampleRate)
        ));
    }

    #[test]
    fn csv_two_lines_at_fs_100() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("s.csv");
        std::fs::write(&path, "0.5\n-0.25\n").unwrap();
        let x = read_csv_signal(&path, Some(100.0)).unwrap();
        assert_eq!(x.len(), 2);
        assert_eq!(x.sample_rate(), Some(100.0));
        assert_eq!(x.real_part(), vec![0.5, -0.25]);
    }

    #[test]
    fn empty_csv_is_a_parse_error_at_line_one() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("e.csv");
        std::fs::write(&path, "").unwrap();
        match read_csv_signal(&path, None) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn header_lines_and_crlf_are_tolerated() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("h.csv");
        std::fs::write(&path, "value\r\n1.5\r\n2.5\r\n").unwrap();
        let x = read_csv_signal(&path, None).unwrap();
        assert_eq!(x.real_part(), vec![1.5, 2.5]);
    }

    #[test]
    fn bad_rows_name_their_line() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("b.csv");
        std::fs::write(&path, "1.0\nnot-a-number\n").unwrap();
        match read_csv_signal(&path, None) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }

        std::fs::write(&path, "1.0\n2.0,3.0\n").unwrap();
        assert!(matches!(
            read_csv_signal(&path, None),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn csv_round_trip_real_and_complex() {
        let dir = tempdir().unwrap();
        let real_path = dir.path().join("r.csv");
        let x = Signal::from_real(&random_in_range(64, 5));
        write_csv_signal(&real_path, &x).unwrap();
        let back = read_csv_signal(&real_path, None).unwrap();
        assert_eq!(back.samples(), x.samples());

        let cplx_path = dir.path().join("c.csv");
        let vals: Vec<Complex64> = random_in_range(64, 6)
            .iter()
            .zip(random_in_range(64, 7))
            .map(|(&a, b)| Complex64::new(a, b))
            .collect();
        let z = Signal::from_complex(vals);
        write_csv_signal(&cplx_path, &z).unwrap();
        let back = read_csv_signal(&cplx_path, None).unwrap();
        assert_eq!(back.samples(), z.samples());
    }

    #[test]
    fn series_and_matrix_writers() {
        let dir = tempdir().unwrap();
        let sp = dir.path().join("series.csv");
        write_series(&sp, &[("freq", &[1.0, 2.0]), ("mag", &[0.5, 0.25])]).unwrap();
        let text = std::fs::read_to_string(&sp).unwrap();
        assert!(text.starts_with("freq,mag\n"));
        assert_eq!(text.lines().count(), 3);

        assert!(matches!(
            write_series(&sp, &[("a", &[1.0]), ("b", &[1.0, 2.0])]),
            Err(Error::Parameter(_))
        ));

        let mp = dir.path().join("m.csv");
        write_matrix(&mp, &[0.0, 0.2], &[0.0, 50.0], &[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let text = std::fs::read_to_string(&mp).unwrap();
        assert!(text.starts_with("time,"));
        assert_eq!(text.lines().count(), 3);
    }

    #[test]
    fn clipset_round_trips_through_manifest() {
        let dir = tempdir().unwrap();
        let cs = crate::eeg::synth_clipset(3, 6, 2, 400.0, 0.5).unwrap();
        let manifest = write_clipset(dir.path(), &cs).unwrap();
        let back = read_manifest(&manifest).unwrap();
        assert_eq!(back.clips().len(), 6);
        assert_eq!(back.count(Label::Ictal), 2);
        for (a, b) in back.clips().iter().zip(cs.clips()) {
            assert_eq!(a.id, b.id);
            assert_eq!(a.label, b.label);
            assert_eq!(a.fs, b.fs);
            assert_eq!(a.samples, b.samples);
        }
    }

    #[test]
    fn manifest_requires_its_header() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("manifest.csv");
        std::fs::write(&path, "id,file,label\n").unwrap();
        assert!(matches!(
            read_manifest(&path),
            Err(Error::Parse { line: 1, .. })
        ));
    }
}
