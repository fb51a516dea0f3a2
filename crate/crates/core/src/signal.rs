//! Audio containers, WAV I/O, framing, STFT/inverse-STFT, and 500 ms
//! segmentation — the substrate every other module consumes.
//!
//! All audio is mono `f64` with a nominal amplitude range of [-1, 1].
//! Framing is non-centered: frame `t` covers samples
//! `[t * hop, t * hop + frame_size)` and the trailing remainder is discarded.

use std::path::Path;
use std::sync::Arc;

use ndarray::Array2;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Duration of one labeled segment, in seconds.
pub const SEGMENT_SECONDS: f64 = 0.5;

/// Mono sample sequence with sample rate and a time origin.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioClip {
    samples: Vec<f64>,
    sample_rate: u32,
    origin: f64,
}

impl AudioClip {
    /// Builds a clip, validating that the sample rate is positive and every
    /// sample is finite.
    pub fn new(samples: Vec<f64>, sample_rate: u32, origin: f64) -> Result<Self> {
        if sample_rate == 0 {
            return Err(Error::InvalidAudio("sample rate must be positive".into()));
        }
        if samples.iter().any(|s| !s.is_finite()) {
            return Err(Error::InvalidAudio(
                "samples contain NaN or infinity".into(),
            ));
        }
        if !origin.is_finite() {
            return Err(Error::InvalidAudio("origin must be finite".into()));
        }
        Ok(AudioClip {
            samples,
            sample_rate,
            origin,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    /// Timestamp of the first sample, in seconds.
    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate as f64
    }
}

/// Analysis window applied to each frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WindowKind {
    Hann,
    Rectangular,
}

/// Frame size, hop, and window shared by the STFT-based stages.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FramingConfig {
    pub frame_size: usize,
    pub hop: usize,
    pub window: WindowKind,
}

impl Default for FramingConfig {
    fn default() -> Self {
        FramingConfig {
            frame_size: 512,
            hop: 256,
            window: WindowKind::Hann,
        }
    }
}

impl FramingConfig {
    pub fn validate(&self) -> Result<()> {
        if self.hop == 0 || self.hop > self.frame_size {
            return Err(Error::InvalidConfig(format!(
                "hop must satisfy 0 < hop <= frame_size (got hop={}, frame_size={})",
                self.hop, self.frame_size
            )));
        }
        Ok(())
    }

    /// Number of full frames in a signal of `n` samples.
    pub fn frame_count(&self, n: usize) -> usize {
        if n < self.frame_size {
            0
        } else {
            (n - self.frame_size) / self.hop + 1
        }
    }

    /// Window coefficients; the Hann window is periodic so that 50% overlap
    /// sums to exactly one.
    pub fn window_values(&self) -> Vec<f64> {
        match self.window {
            WindowKind::Rectangular => vec![1.0; self.frame_size],
            WindowKind::Hann => {
                let n = self.frame_size as f64;
                (0..self.frame_size)
                    .map(|i| 0.5 - 0.5 * (2.0 * std::f64::consts::PI * i as f64 / n).cos())
                    .collect()
            }
        }
    }
}

/// Complex one-sided STFT matrix (frequency bins x frames).
#[derive(Debug, Clone)]
pub struct Spectrogram {
    /// `frame_size / 2 + 1` rows, one column per frame.
    pub bins: Array2<Complex64>,
    pub frame_size: usize,
    pub hop: usize,
    pub sample_rate: u32,
    pub window: WindowKind,
    pub origin: f64,
}

impl Spectrogram {
    pub fn n_bins(&self) -> usize {
        self.bins.nrows()
    }

    pub fn n_frames(&self) -> usize {
        self.bins.ncols()
    }

    /// Center frequency of bin `n` in Hz.
    pub fn bin_frequency(&self, n: usize) -> f64 {
        n as f64 * self.sample_rate as f64 / self.frame_size as f64
    }

    /// Magnitudes |bins| as a dense matrix.
    pub fn magnitudes(&self) -> Array2<f64> {
        self.bins.map(|c| c.norm())
    }

    /// Natural reconstruction length: every sample covered by some frame.
    pub fn natural_len(&self) -> usize {
        if self.n_frames() == 0 {
            0
        } else {
            self.frame_size + (self.n_frames() - 1) * self.hop
        }
    }
}

/// A 500 ms view into a clip. Borrowed, so corpora can be segmented without
/// copying the audio.
#[derive(Debug, Clone, Copy)]
pub struct Segment<'a> {
    pub samples: &'a [f64],
    pub sample_rate: u32,
    pub index: usize,
    /// Start timestamp in seconds (clip origin + 0.5 * index).
    pub start: f64,
}

impl<'a> Segment<'a> {
    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate as f64
    }

    pub fn to_clip(&self) -> AudioClip {
        AudioClip {
            samples: self.samples.to_vec(),
            sample_rate: self.sample_rate,
            origin: self.start,
        }
    }
}

/// Loads a mono or stereo WAV file (16-bit PCM or 32-bit float) and downmixes
/// to mono by channel mean. Integer samples are scaled by 1/32768.
pub fn load_wav(path: impl AsRef<Path>) -> Result<AudioClip> {
    let path = path.as_ref();
    let mut reader = hound::WavReader::open(path).map_err(|e| wav_err(path, e))?;
    let spec = reader.spec();
    let channels = spec.channels as usize;
    if channels == 0 {
        return Err(Error::UnsupportedWav {
            path: path.into(),
            detail: "zero channels".into(),
        });
    }
    let interleaved: Vec<f64> = match (spec.sample_format, spec.bits_per_sample) {
        (hound::SampleFormat::Int, 16) => reader
            .samples::<i16>()
            .map(|s| s.map(|v| v as f64 / 32768.0))
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| wav_err(path, e))?,
        (hound::SampleFormat::Float, 32) => reader
            .samples::<f32>()
            .map(|s| s.map(|v| v as f64))
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| wav_err(path, e))?,
        (fmt, bits) => {
            return Err(Error::UnsupportedWav {
                path: path.into(),
                detail: format!("{fmt:?} {bits}-bit (only 16-bit PCM and 32-bit float)"),
            });
        }
    };
    if interleaved.is_empty() {
        return Err(Error::UnsupportedWav {
            path: path.into(),
            detail: "zero-length audio".into(),
        });
    }
    let mono: Vec<f64> = if channels == 1 {
        interleaved
    } else {
        interleaved
            .chunks(channels)
            .map(|frame| frame.iter().sum::<f64>() / channels as f64)
            .collect()
    };
    AudioClip::new(mono, spec.sample_rate, 0.0)
}

/// Writes a clip as mono 32-bit IEEE float WAV. Samples are written
/// unclipped; NaN samples are rejected by `AudioClip`'s invariant.
pub fn save_wav(clip: &AudioClip, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let spec = hound::WavSpec {
        channels: 1,
        sample_rate: clip.sample_rate,
        bits_per_sample: 32,
        sample_format: hound::SampleFormat::Float,
    };
    let mut writer = hound::WavWriter::create(path, spec).map_err(|e| wav_err(path, e))?;
    for &s in &clip.samples {
        writer.write_sample(s as f32).map_err(|e| wav_err(path, e))?;
    }
    writer.finalize().map_err(|e| wav_err(path, e))?;
    Ok(())
}

fn wav_err(path: &Path, e: hound::Error) -> Error {
    match e {
        hound::Error::IoError(io) => Error::io(path, io),
        other => Error::UnsupportedWav {
            path: path.into(),
            detail: other.to_string(),
        },
    }
}

/// Splits a clip into non-centered frames. Frame `t` is the slice
/// `[t * hop, t * hop + frame_size)`; the trailing remainder is discarded.
pub fn frame_signal<'a>(clip: &'a AudioClip, cfg: &FramingConfig) -> Result<Vec<&'a [f64]>> {
    cfg.validate()?;
    frame_slices(clip.samples(), cfg)
}

/// Framing over a bare sample slice (used by per-segment feature extraction).
pub fn frame_slices<'a>(samples: &'a [f64], cfg: &FramingConfig) -> Result<Vec<&'a [f64]>> {
    if samples.len() < cfg.frame_size {
        return Err(Error::TooShort {
            needed: cfg.frame_size,
            got: samples.len(),
        });
    }
    let count = cfg.frame_count(samples.len());
    Ok((0..count)
        .map(|t| &samples[t * cfg.hop..t * cfg.hop + cfg.frame_size])
        .collect())
}

/// Shared FFT plans for one frame size. Cheap to clone; plans are reused
/// across frames and across stages.
pub struct FftPair {
    pub size: usize,
    pub forward: Arc<dyn Fft<f64>>,
    pub inverse: Arc<dyn Fft<f64>>,
}

impl FftPair {
    pub fn new(size: usize) -> Self {
        let mut planner = FftPlanner::new();
        FftPair {
            size,
            forward: planner.plan_fft_forward(size),
            inverse: planner.plan_fft_inverse(size),
        }
    }

    /// One-sided spectrum of a windowed frame.
    pub fn forward_frame(&self, frame: &[f64], window: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = frame
            .iter()
            .zip(window)
            .map(|(&x, &w)| Complex64::new(x * w, 0.0))
            .collect();
        self.forward.process(&mut buf);
        buf.truncate(self.size / 2 + 1);
        buf
    }

    /// Real time-domain frame from a one-sided spectrum (scaled by 1/N).
    pub fn inverse_frame(&self, half: &[Complex64]) -> Vec<f64> {
        let n = self.size;
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        buf[..half.len()].copy_from_slice(half);
        for k in 1..n / 2 {
            buf[n - k] = half[k].conj();
        }
        self.inverse.process(&mut buf);
        let scale = 1.0 / n as f64;
        buf.iter().map(|c| c.re * scale).collect()
    }
}

/// Short-time Fourier transform: per-frame windowed real FFT, one-sided.
pub fn stft(clip: &AudioClip, cfg: &FramingConfig) -> Result<Spectrogram> {
    let frames = frame_signal(clip, cfg)?;
    let window = cfg.window_values();
    let fft = FftPair::new(cfg.frame_size);
    let n_bins = cfg.frame_size / 2 + 1;
    let mut bins = Array2::zeros((n_bins, frames.len()));
    for (t, frame) in frames.iter().enumerate() {
        let spec = fft.forward_frame(frame, &window);
        for (n, v) in spec.into_iter().enumerate() {
            bins[(n, t)] = v;
        }
    }
    Ok(Spectrogram {
        bins,
        frame_size: cfg.frame_size,
        hop: cfg.hop,
        sample_rate: clip.sample_rate(),
        window: cfg.window,
        origin: clip.origin(),
    })
}

/// Overlap-add accumulator shared by the batch and streaming inverse STFT so
/// both paths produce bit-identical samples.
pub struct OverlapAdd {
    pub acc: Vec<f64>,
    pub envelope: Vec<f64>,
}

impl OverlapAdd {
    pub fn new() -> Self {
        OverlapAdd {
            acc: Vec::new(),
            envelope: Vec::new(),
        }
    }

    /// Adds the inverse FFT of frame `t` and accumulates the analysis-window
    /// envelope used for normalization.
    pub fn add_frame(&mut self, t: usize, time_frame: &[f64], window: &[f64], hop: usize) {
        let start = t * hop;
        let end = start + time_frame.len();
        if self.acc.len() < end {
            self.acc.resize(end, 0.0);
            self.envelope.resize(end, 0.0);
        }
        for (i, (&x, &w)) in time_frame.iter().zip(window).enumerate() {
            self.acc[start + i] += x;
            self.envelope[start + i] += w;
        }
    }

    /// Normalized output sample at `p`. The envelope is floored so the first
    /// and last window taper cannot blow up the division.
    pub fn sample(&self, p: usize) -> f64 {
        const ENV_FLOOR: f64 = 1e-8;
        if p >= self.acc.len() {
            0.0
        } else {
            self.acc[p] / self.envelope[p].max(ENV_FLOOR)
        }
    }
}

impl Default for OverlapAdd {
    fn default() -> Self {
        Self::new()
    }
}

/// Inverse STFT by overlap-add with analysis-window normalization.
///
/// `target_len`, when given, pads or truncates the reconstruction; the
/// denoising stages use the input length so every stage keeps the clip size.
pub fn istft(spec: &Spectrogram, target_len: Option<usize>) -> Result<AudioClip> {
    let cfg = FramingConfig {
        frame_size: spec.frame_size,
        hop: spec.hop,
        window: spec.window,
    };
    cfg.validate()?;
    if spec.n_bins() != spec.frame_size / 2 + 1 {
        return Err(Error::ShapeMismatch(format!(
            "spectrogram has {} bins, expected {}",
            spec.n_bins(),
            spec.frame_size / 2 + 1
        )));
    }
    let window = cfg.window_values();
    let fft = FftPair::new(spec.frame_size);
    let mut ola = OverlapAdd::new();
    let mut half = vec![Complex64::new(0.0, 0.0); spec.n_bins()];
    for t in 0..spec.n_frames() {
        for n in 0..spec.n_bins() {
            half[n] = spec.bins[(n, t)];
        }
        let time = fft.inverse_frame(&half);
        ola.add_frame(t, &time, &window, spec.hop);
    }
    let out_len = target_len.unwrap_or_else(|| spec.natural_len());
    let samples: Vec<f64> = (0..out_len).map(|p| ola.sample(p)).collect();
    AudioClip::new(samples, spec.sample_rate, spec.origin)
}

/// Cuts a clip into consecutive non-overlapping segments of `seconds`;
/// the partial tail is discarded.
pub fn segment_clip(clip: &AudioClip, seconds: f64) -> Result<Vec<Segment<'_>>> {
    if !(seconds > 0.0) {
        return Err(Error::InvalidConfig("segment duration must be > 0".into()));
    }
    let seg_len = (seconds * clip.sample_rate() as f64).round() as usize;
    if clip.len() < seg_len || seg_len == 0 {
        return Err(Error::TooShort {
            needed: seg_len,
            got: clip.len(),
        });
    }
    let count = clip.len() / seg_len;
    Ok((0..count)
        .map(|i| Segment {
            samples: &clip.samples()[i * seg_len..(i + 1) * seg_len],
            sample_rate: clip.sample_rate(),
            index: i,
            start: clip.origin() + i as f64 * seconds,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn noise_clip(n: usize, seed: u64) -> AudioClip {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let samples: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        AudioClip::new(samples, 44_100, 0.0).unwrap()
    }

    #[test]
    fn clip_rejects_nan() {
        assert!(AudioClip::new(vec![0.0, f64::NAN], 44_100, 0.0).is_err());
        assert!(AudioClip::new(vec![0.0], 0, 0.0).is_err());
    }

    #[test]
    fn framing_count_matches_arithmetic() {
        // floor((22050 - 512) / 256) + 1 = 85
        let clip = noise_clip(22_050, 1);
        let frames = frame_signal(&clip, &FramingConfig::default()).unwrap();
        assert_eq!(frames.len(), 85);

        let clip = noise_clip(512, 2);
        assert_eq!(frame_signal(&clip, &FramingConfig::default()).unwrap().len(), 1);

        let clip = noise_clip(511, 3);
        assert!(frame_signal(&clip, &FramingConfig::default()).is_err());
    }

    #[test]
    fn framing_covers_in_bounds_only() {
        let clip = noise_clip(2000, 4);
        let cfg = FramingConfig::default();
        let frames = frame_signal(&clip, &cfg).unwrap();
        let last_end = (frames.len() - 1) * cfg.hop + cfg.frame_size;
        assert!(last_end <= clip.len());
        assert!(last_end + cfg.hop > clip.len());
    }

    #[test]
    fn stft_zero_signal_is_zero() {
        let clip = AudioClip::new(vec![0.0; 4096], 44_100, 0.0).unwrap();
        let spec = stft(&clip, &FramingConfig::default()).unwrap();
        assert!(spec.bins.iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn stft_pure_tone_hits_single_bin_with_rectangular_window() {
        // Bin 8 of a 512-point frame at 44.1 kHz is 8 * 86.13 Hz; a tone at
        // exactly that frequency with a rectangular window excites only bin 8.
        let cfg = FramingConfig {
            window: WindowKind::Rectangular,
            ..FramingConfig::default()
        };
        let sr = 44_100u32;
        let k = 8usize;
        let f = k as f64 * sr as f64 / 512.0;
        let samples: Vec<f64> = (0..2048)
            .map(|i| (2.0 * std::f64::consts::PI * f * i as f64 / sr as f64).sin())
            .collect();
        let clip = AudioClip::new(samples, sr, 0.0).unwrap();
        let spec = stft(&clip, &cfg).unwrap();
        for t in 0..spec.n_frames() {
            for n in 0..spec.n_bins() {
                let mag = spec.bins[(n, t)].norm();
                if n == k {
                    assert!(mag > 200.0, "tone bin should carry the energy, got {mag}");
                } else {
                    assert!(mag < 1e-8, "leakage at bin {n}: {mag}");
                }
            }
        }
    }

    #[test]
    fn stft_windowed_parseval() {
        // Sum |X[n]|^2 over the full spectrum equals N * sum (w x)^2; the
        // one-sided spectrum double-counts every bin except DC and Nyquist.
        let cfg = FramingConfig::default();
        let clip = noise_clip(4096, 5);
        let spec = stft(&clip, &cfg).unwrap();
        let window = cfg.window_values();
        let frames = frame_signal(&clip, &cfg).unwrap();
        for (t, frame) in frames.iter().enumerate() {
            let time_energy: f64 = frame
                .iter()
                .zip(&window)
                .map(|(&x, &w)| (x * w) * (x * w))
                .sum();
            let mut spec_energy = 0.0;
            for n in 0..spec.n_bins() {
                let m2 = spec.bins[(n, t)].norm_sqr();
                if n == 0 || n == spec.n_bins() - 1 {
                    spec_energy += m2;
                } else {
                    spec_energy += 2.0 * m2;
                }
            }
            let expected = time_energy * cfg.frame_size as f64;
            assert!(
                (spec_energy - expected).abs() <= 1e-6 * expected.max(1.0),
                "frame {t}: {spec_energy} vs {expected}"
            );
        }
    }

    #[test]
    fn istft_round_trip_interior() {
        let cfg = FramingConfig::default();
        let clip = noise_clip(8192, 6);
        let spec = stft(&clip, &cfg).unwrap();
        let rec = istft(&spec, Some(clip.len())).unwrap();
        // Interior: skip one frame at each edge where the window taper is partial.
        for p in cfg.frame_size..clip.len() - 2 * cfg.frame_size {
            let err = (rec.samples()[p] - clip.samples()[p]).abs();
            assert!(err < 1e-6, "sample {p}: err {err}");
        }
    }

    #[test]
    fn istft_zero_and_linearity() {
        let cfg = FramingConfig::default();
        let a = noise_clip(4096, 7);
        let b = noise_clip(4096, 8);
        let sa = stft(&a, &cfg).unwrap();
        let sb = stft(&b, &cfg).unwrap();
        let mut sum = sa.clone();
        sum.bins = &sa.bins + &sb.bins;
        let rec_sum = istft(&sum, None).unwrap();
        let ra = istft(&sa, None).unwrap();
        let rb = istft(&sb, None).unwrap();
        for p in 0..rec_sum.len() {
            let lin = ra.samples()[p] + rb.samples()[p];
            assert!((rec_sum.samples()[p] - lin).abs() < 1e-9);
        }

        let mut zero = sa.clone();
        zero.bins.fill(Complex64::new(0.0, 0.0));
        let rz = istft(&zero, Some(4096)).unwrap();
        assert!(rz.samples().iter().all(|&s| s == 0.0));
    }

    #[test]
    fn segmentation_partitions_clip() {
        let clip = noise_clip(4 * 44_100, 9);
        let segs = segment_clip(&clip, 0.5).unwrap();
        assert_eq!(segs.len(), 8);
        assert!(segs.iter().all(|s| s.samples.len() == 22_050));
        for (i, s) in segs.iter().enumerate() {
            assert_eq!(s.index, i);
            assert!((s.start - 0.5 * i as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn segmentation_drops_partial_tail() {
        let n = (4.3 * 44_100.0) as usize;
        let clip = noise_clip(n, 10);
        let segs = segment_clip(&clip, 0.5).unwrap();
        assert_eq!(segs.len(), 8);
        let clip = noise_clip(22_049, 11);
        assert!(segment_clip(&clip, 0.5).is_err());
    }

    #[test]
    fn segment_start_respects_origin() {
        let mut clip = noise_clip(44_100, 12);
        clip.origin = 3.0;
        let segs = segment_clip(&clip, 0.5).unwrap();
        assert!((segs[1].start - 3.5).abs() < 1e-12);
    }

    #[test]
    fn wav_round_trip_float_is_bit_identical() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rt.wav");
        // Samples chosen representable in f32 so the 32-bit float container
        // stores them exactly.
        let samples: Vec<f64> = (0..1000).map(|i| (i as f32 / 999.0 - 0.5) as f64).collect();
        let clip = AudioClip::new(samples, 44_100, 0.0).unwrap();
        save_wav(&clip, &path).unwrap();
        let back = load_wav(&path).unwrap();
        assert_eq!(back.sample_rate(), 44_100);
        assert_eq!(back.samples(), clip.samples());
    }

    #[test]
    fn wav_zero_clip_writes_zero_data_chunk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("zero.wav");
        let clip = AudioClip::new(vec![0.0; 64], 44_100, 0.0).unwrap();
        save_wav(&clip, &path).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        let pos = bytes.windows(4).position(|w| w == b"data").unwrap();
        assert!(bytes[pos + 8..].iter().all(|&b| b == 0));
    }

    #[test]
    fn wav_int16_scaling_and_stereo_downmix() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("i16.wav");
        let spec = hound::WavSpec {
            channels: 1,
            sample_rate: 44_100,
            bits_per_sample: 16,
            sample_format: hound::SampleFormat::Int,
        };
        let mut w = hound::WavWriter::create(&path, spec).unwrap();
        for _ in 0..100 {
            w.write_sample(32767i16).unwrap();
        }
        w.finalize().unwrap();
        let clip = load_wav(&path).unwrap();
        assert!(clip.samples().iter().all(|&s| (s - 32767.0 / 32768.0).abs() < 1e-12));

        let path2 = dir.path().join("stereo.wav");
        let spec2 = hound::WavSpec {
            channels: 2,
            ..spec
        };
        let mut w = hound::WavWriter::create(&path2, spec2).unwrap();
        for _ in 0..100 {
            w.write_sample(16384i16).unwrap();
            w.write_sample(-16384i16).unwrap();
        }
        w.finalize().unwrap();
        let clip = load_wav(&path2).unwrap();
        assert!(clip.samples().iter().all(|&s| s == 0.0));
    }

    #[test]
    fn wav_unclipped_floats_survive() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("hot.wav");
        let clip = AudioClip::new(vec![1.5, -2.0, 0.25], 48_000, 0.0).unwrap();
        save_wav(&clip, &path).unwrap();
        let back = load_wav(&path).unwrap();
        assert_eq!(back.samples(), clip.samples());
    }

    #[test]
    fn missing_file_errors() {
        assert!(load_wav("/nonexistent/nope.wav").is_err());
    }

    #[test]
    fn bin_frequency_mapping_is_exact() {
        let clip = noise_clip(1024, 13);
        let spec = stft(&clip, &FramingConfig::default()).unwrap();
        for n in [0usize, 1, 128, 256] {
            let f = spec.bin_frequency(n);
            assert!((f - n as f64 * 44_100.0 / 512.0).abs() < 1e-12);
        }
    }
}
