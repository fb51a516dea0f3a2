//! Three-stage denoising chain: multi-band equalizer, Butterworth bandpass,
//! and harmonic-percussive source separation (HPSS). Each stage output is
//! retained so models can be trained on any ablation stage.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::{istft, stft, AudioClip, FramingConfig, Spectrogram};

/// Mask denominator guard; also the threshold below which masks are defined
/// as zero.
pub const HPSS_EPS: f64 = 1e-10;

/// One equalizer band: gain applied to STFT bins whose center frequency
/// falls in `[low_hz, high_hz)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct EqBand {
    pub low_hz: f64,
    pub high_hz: f64,
    pub gain_db: f64,
}

impl From<[f64; 3]> for EqBand {
    fn from(v: [f64; 3]) -> Self {
        EqBand {
            low_hz: v[0],
            high_hz: v[1],
            gain_db: v[2],
        }
    }
}

impl From<EqBand> for [f64; 3] {
    fn from(b: EqBand) -> Self {
        [b.low_hz, b.high_hz, b.gain_db]
    }
}

/// Ordered, non-overlapping bands covering DC through Nyquist.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EqualizerProfile {
    pub bands: Vec<EqBand>,
}

impl Default for EqualizerProfile {
    /// Mutes below 1 kHz and above 20 kHz, boosts the process band by 6 dB.
    /// The top band extends far past any realistic Nyquist so the profile is
    /// valid at any sample rate.
    fn default() -> Self {
        EqualizerProfile {
            bands: vec![
                EqBand::from([0.0, 1_000.0, -60.0]),
                EqBand::from([1_000.0, 20_000.0, 6.0]),
                EqBand::from([20_000.0, 1e9, -60.0]),
            ],
        }
    }
}

impl EqualizerProfile {
    /// A flat 0 dB profile (identity up to STFT round-trip error).
    pub fn identity() -> Self {
        EqualizerProfile {
            bands: vec![EqBand::from([0.0, 1e9, 0.0])],
        }
    }

    pub fn validate(&self, nyquist: f64) -> Result<()> {
        if self.bands.is_empty() {
            return Err(Error::InvalidConfig("equalizer has no bands".into()));
        }
        if self.bands[0].low_hz > 0.0 {
            return Err(Error::InvalidConfig(
                "equalizer bands must start at 0 Hz".into(),
            ));
        }
        for pair in self.bands.windows(2) {
            if (pair[0].high_hz - pair[1].low_hz).abs() > 1e-9 {
                return Err(Error::InvalidConfig(format!(
                    "equalizer bands must be contiguous: {} Hz vs {} Hz",
                    pair[0].high_hz, pair[1].low_hz
                )));
            }
        }
        for b in &self.bands {
            if !(b.low_hz < b.high_hz) || !b.gain_db.is_finite() {
                return Err(Error::InvalidConfig(format!(
                    "bad equalizer band [{}, {}, {}]",
                    b.low_hz, b.high_hz, b.gain_db
                )));
            }
        }
        if self.bands.last().unwrap().high_hz < nyquist {
            return Err(Error::InvalidConfig(format!(
                "equalizer bands end at {} Hz, below Nyquist {} Hz",
                self.bands.last().unwrap().high_hz,
                nyquist
            )));
        }
        Ok(())
    }

    /// Linear gain for a bin center frequency. The final band is inclusive at
    /// its upper edge so the Nyquist bin is always covered.
    pub fn linear_gain_at(&self, freq_hz: f64) -> f64 {
        for (i, b) in self.bands.iter().enumerate() {
            let last = i + 1 == self.bands.len();
            if freq_hz >= b.low_hz && (freq_hz < b.high_hz || (last && freq_hz <= b.high_hz)) {
                return 10f64.powf(b.gain_db / 20.0);
            }
        }
        1.0
    }

    /// Per-bin linear gains for a given STFT geometry.
    pub fn bin_gains(&self, frame_size: usize, sample_rate: u32) -> Vec<f64> {
        let n_bins = frame_size / 2 + 1;
        (0..n_bins)
            .map(|n| self.linear_gain_at(n as f64 * sample_rate as f64 / frame_size as f64))
            .collect()
    }
}

/// Applies per-band gains in the STFT domain (phase preserved) and
/// reconstructs to the input length.
pub fn equalize(
    clip: &AudioClip,
    profile: &EqualizerProfile,
    framing: &FramingConfig,
) -> Result<AudioClip> {
    profile.validate(clip.sample_rate() as f64 / 2.0)?;
    let mut spec = stft(clip, framing)?;
    let gains = profile.bin_gains(framing.frame_size, clip.sample_rate());
    for (n, &g) in gains.iter().enumerate() {
        for t in 0..spec.n_frames() {
            spec.bins[(n, t)] *= g;
        }
    }
    istft(&spec, Some(clip.len()))
}

/// Butterworth bandpass specification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandpassSpec {
    #[serde(rename = "low")]
    pub low_hz: f64,
    #[serde(rename = "high")]
    pub high_hz: f64,
    pub order: usize,
    #[serde(default)]
    pub mode: FilterMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FilterMode {
    /// Single forward pass; streaming-safe.
    #[default]
    Causal,
    /// Forward-backward pass; offline analysis only.
    ZeroPhase,
}

impl Default for BandpassSpec {
    fn default() -> Self {
        BandpassSpec {
            low_hz: 1_000.0,
            high_hz: 21_000.0,
            order: 3,
            mode: FilterMode::Causal,
        }
    }
}

impl BandpassSpec {
    pub fn validate(&self, sample_rate: u32) -> Result<()> {
        let nyq = sample_rate as f64 / 2.0;
        if !(self.low_hz > 0.0 && self.low_hz < self.high_hz && self.high_hz < nyq) {
            return Err(Error::InvalidConfig(format!(
                "bandpass edges must satisfy 0 < {} < {} < Nyquist {}",
                self.low_hz, self.high_hz, nyq
            )));
        }
        if self.order == 0 {
            return Err(Error::InvalidConfig("filter order must be >= 1".into()));
        }
        Ok(())
    }
}

/// One second-order section, coefficients normalized so a0 = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sos {
    pub b: [f64; 3],
    pub a: [f64; 2],
}

impl Sos {
    /// Poles of this section (roots of z^2 + a1 z + a2).
    pub fn poles(&self) -> [Complex64; 2] {
        let a1 = Complex64::new(self.a[0], 0.0);
        let disc = (a1 * a1 - 4.0 * Complex64::new(self.a[1], 0.0)).sqrt();
        [(-a1 + disc) / 2.0, (-a1 - disc) / 2.0]
    }
}

/// Designs an order-N Butterworth bandpass as N second-order sections via the
/// analog prototype, lowpass-to-bandpass transform, and bilinear transform
/// with frequency prewarping. Gain is normalized to unity at the warped
/// center frequency and distributed evenly across sections.
pub fn butterworth_bandpass_sos(spec: &BandpassSpec, sample_rate: u32) -> Result<Vec<Sos>> {
    spec.validate(sample_rate)?;
    let fs = sample_rate as f64;
    let two_fs = 2.0 * fs;
    let w1 = two_fs * (std::f64::consts::PI * spec.low_hz / fs).tan();
    let w2 = two_fs * (std::f64::consts::PI * spec.high_hz / fs).tan();
    let w0 = (w1 * w2).sqrt();
    let bw = w2 - w1;

    let order = spec.order;
    let mut sections = Vec::with_capacity(order);
    for k in 0..order {
        let theta =
            std::f64::consts::FRAC_PI_2 + std::f64::consts::PI * (2 * k + 1) as f64 / (2 * order) as f64;
        let proto = Complex64::new(theta.cos(), theta.sin());
        if proto.im < -1e-12 {
            continue; // conjugate of an earlier prototype pole
        }
        // Lowpass-to-bandpass: each prototype pole becomes a pair.
        let bp = bw * proto;
        let disc = (bp * bp - Complex64::new(4.0 * w0 * w0, 0.0)).sqrt();
        let s_pair = [(bp + disc) / 2.0, (bp - disc) / 2.0];
        if proto.im.abs() <= 1e-12 {
            // Real prototype pole: its two bandpass poles form one section
            // (either a conjugate pair or two real poles).
            sections.push(section_from_pair(s_pair[0], s_pair[1], two_fs));
        } else {
            // Complex prototype pole: each bandpass pole pairs with its own
            // conjugate (contributed by the conjugate prototype pole).
            for s in s_pair {
                sections.push(section_from_pair(s, s.conj(), two_fs));
            }
        }
    }
    debug_assert_eq!(sections.len(), order);

    // Normalize: unit gain at the digital frequency the analog center maps to.
    let f_center = fs / std::f64::consts::PI * (w0 / two_fs).atan();
    let gain = cascade_response(&sections, f_center, sample_rate).norm();
    if !(gain.is_finite() && gain > 0.0) {
        return Err(Error::InvalidConfig(
            "bandpass design degenerate at center frequency".into(),
        ));
    }
    let per_section = (1.0 / gain).powf(1.0 / sections.len() as f64);
    for s in &mut sections {
        for b in &mut s.b {
            *b *= per_section;
        }
    }
    Ok(sections)
}

fn section_from_pair(s1: Complex64, s2: Complex64, two_fs: f64) -> Sos {
    // Bilinear transform of each analog pole, then expand (z - z1)(z - z2).
    let z1 = (Complex64::new(two_fs, 0.0) + s1) / (Complex64::new(two_fs, 0.0) - s1);
    let z2 = (Complex64::new(two_fs, 0.0) + s2) / (Complex64::new(two_fs, 0.0) - s2);
    let a1 = -(z1 + z2).re;
    let a2 = (z1 * z2).re;
    // Zeros at z = +1 and z = -1 (one of each per section).
    Sos {
        b: [1.0, 0.0, -1.0],
        a: [a1, a2],
    }
}

/// Cascade transfer function H(e^{j 2 pi f / fs}) evaluated at `freq_hz`.
pub fn cascade_response(sections: &[Sos], freq_hz: f64, sample_rate: u32) -> Complex64 {
    let w = 2.0 * std::f64::consts::PI * freq_hz / sample_rate as f64;
    let z1 = Complex64::new(w.cos(), -w.sin()); // z^-1
    let z2 = z1 * z1;
    let mut h = Complex64::new(1.0, 0.0);
    for s in sections {
        let num = s.b[0] + s.b[1] * z1 + s.b[2] * z2;
        let den = Complex64::new(1.0, 0.0) + s.a[0] * z1 + s.a[1] * z2;
        h *= num / den;
    }
    h
}

/// Stateful second-order-section cascade (direct form II transposed).
/// State persists across `process` calls so block streaming and whole-clip
/// filtering follow the identical recurrence.
#[derive(Debug, Clone)]
pub struct SosChain {
    sections: Vec<Sos>,
    state: Vec<[f64; 2]>,
}

impl SosChain {
    pub fn new(sections: Vec<Sos>) -> Self {
        let state = vec![[0.0; 2]; sections.len()];
        SosChain { sections, state }
    }

    pub fn sections(&self) -> &[Sos] {
        &self.sections
    }

    pub fn reset(&mut self) {
        for s in &mut self.state {
            *s = [0.0; 2];
        }
    }

    #[inline]
    pub fn process_sample(&mut self, x: f64) -> f64 {
        let mut v = x;
        for (sec, st) in self.sections.iter().zip(self.state.iter_mut()) {
            let y = sec.b[0] * v + st[0];
            st[0] = sec.b[1] * v - sec.a[0] * y + st[1];
            st[1] = sec.b[2] * v - sec.a[1] * y;
            v = y;
        }
        v
    }

    pub fn process(&mut self, input: &[f64]) -> Vec<f64> {
        input.iter().map(|&x| self.process_sample(x)).collect()
    }
}

/// Order-3 (by default) Butterworth bandpass. `Causal` is a single pass;
/// `ZeroPhase` runs forward-backward with fresh state each way.
pub fn bandpass(clip: &AudioClip, spec: &BandpassSpec) -> Result<AudioClip> {
    let sections = butterworth_bandpass_sos(spec, clip.sample_rate())?;
    let mut chain = SosChain::new(sections);
    let out = match spec.mode {
        FilterMode::Causal => chain.process(clip.samples()),
        FilterMode::ZeroPhase => {
            let fwd = chain.process(clip.samples());
            chain.reset();
            let mut rev: Vec<f64> = fwd.into_iter().rev().collect();
            rev = chain.process(&rev);
            rev.reverse();
            rev
        }
    };
    AudioClip::new(out, clip.sample_rate(), clip.origin())
}

/// HPSS parameters: median kernel lengths (odd), soft-mask exponent, and the
/// STFT geometry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HpssConfig {
    /// Median kernel along the time axis, in frames.
    pub kernel_time: usize,
    /// Median kernel along the frequency axis, in bins.
    pub kernel_freq: usize,
    #[serde(rename = "power")]
    pub mask_power: f64,
    #[serde(default, skip_serializing)]
    pub framing: FramingConfig,
}

impl Default for HpssConfig {
    fn default() -> Self {
        HpssConfig {
            kernel_time: 17,
            kernel_freq: 17,
            mask_power: 2.0,
            framing: FramingConfig::default(),
        }
    }
}

impl HpssConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, k) in [("kernel_time", self.kernel_time), ("kernel_freq", self.kernel_freq)] {
            if k < 3 || k % 2 == 0 {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be odd and >= 3, got {k}"
                )));
            }
        }
        if !(self.mask_power > 0.0) {
            return Err(Error::InvalidConfig("mask power must be > 0".into()));
        }
        self.framing.validate()
    }
}

/// Median of an odd-length scratch buffer (reordered in place).
#[inline]
pub(crate) fn median_inplace(buf: &mut [f64]) -> f64 {
    let mid = buf.len() / 2;
    *buf.select_nth_unstable_by(mid, |a, b| a.partial_cmp(b).unwrap())
        .1
}

/// Harmonic/percussive soft masks for one frame.
///
/// `context` holds magnitude columns for the clamped time window
/// (`kernel_time` entries, edge frames replicated by the caller) and
/// `center` indexes the column of the frame being masked. Used verbatim by
/// both the batch and streaming paths so they agree bit-for-bit.
pub(crate) fn hpss_masks_for_frame(
    context: &[&[f64]],
    center: usize,
    cfg: &HpssConfig,
) -> (Vec<f64>, Vec<f64>) {
    let n_bins = context[center].len();
    let half_f = cfg.kernel_freq / 2;
    let mut mask_h = vec![0.0; n_bins];
    let mut mask_p = vec![0.0; n_bins];
    let mut tbuf = vec![0.0; cfg.kernel_time];
    let mut fbuf = vec![0.0; cfg.kernel_freq];
    for n in 0..n_bins {
        for (i, col) in context.iter().enumerate() {
            tbuf[i] = col[n];
        }
        let harm = median_inplace(&mut tbuf);
        for i in 0..cfg.kernel_freq {
            let idx = (n + i).saturating_sub(half_f).min(n_bins - 1);
            fbuf[i] = context[center][idx];
        }
        let perc = median_inplace(&mut fbuf);
        let hp = harm.powf(cfg.mask_power);
        let pp = perc.powf(cfg.mask_power);
        let denom = hp + pp + HPSS_EPS;
        mask_h[n] = hp / denom;
        mask_p[n] = pp / denom;
    }
    (mask_h, mask_p)
}

/// Clamped window of column indices centered on `t`.
pub(crate) fn clamped_window(t: usize, total: usize, kernel: usize) -> Vec<usize> {
    let half = (kernel / 2) as isize;
    (0..kernel as isize)
        .map(|i| (t as isize - half + i).clamp(0, total as isize - 1) as usize)
        .collect()
}

/// Median-filtering HPSS. Returns `(harmonic, percussive)` clips, both the
/// length of the input.
pub fn hpss(clip: &AudioClip, cfg: &HpssConfig) -> Result<(AudioClip, AudioClip)> {
    cfg.validate()?;
    let spec = stft(clip, &cfg.framing)?;
    let mags = spec.magnitudes();
    let t_frames = spec.n_frames();
    let mag_cols: Vec<Vec<f64>> = (0..t_frames)
        .map(|t| mags.column(t).to_vec())
        .collect();

    let mut harm_spec = Spectrogram {
        bins: spec.bins.clone(),
        ..spec.clone()
    };
    let mut perc_spec = Spectrogram {
        bins: spec.bins.clone(),
        ..spec.clone()
    };
    for t in 0..t_frames {
        let window = clamped_window(t, t_frames, cfg.kernel_time);
        let context: Vec<&[f64]> = window.iter().map(|&i| mag_cols[i].as_slice()).collect();
        let center = window.iter().position(|&i| i == t).unwrap();
        let (mh, mp) = hpss_masks_for_frame(&context, center, cfg);
        for n in 0..spec.n_bins() {
            harm_spec.bins[(n, t)] = spec.bins[(n, t)] * mh[n];
            perc_spec.bins[(n, t)] = spec.bins[(n, t)] * mp[n];
        }
    }
    let harmonic = istft(&harm_spec, Some(clip.len()))?;
    let percussive = istft(&perc_spec, Some(clip.len()))?;
    Ok((harmonic, percussive))
}

/// Output of the full chain, one clip per stage. `denoised` is the percussive
/// component of the bandpassed signal.
#[derive(Debug, Clone)]
pub struct DenoiseStages {
    pub raw: AudioClip,
    pub equalized: AudioClip,
    pub bandpassed: AudioClip,
    pub denoised: AudioClip,
}

/// Names the four ablation stages of the denoise chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Raw,
    Eq,
    Bp,
    Dn,
}

impl Stage {
    pub fn suffix(&self) -> &'static str {
        match self {
            Stage::Raw => "raw",
            Stage::Eq => "eq",
            Stage::Bp => "bp",
            Stage::Dn => "dn",
        }
    }
}

impl DenoiseStages {
    pub fn stage(&self, stage: Stage) -> &AudioClip {
        match stage {
            Stage::Raw => &self.raw,
            Stage::Eq => &self.equalized,
            Stage::Bp => &self.bandpassed,
            Stage::Dn => &self.denoised,
        }
    }
}

/// Runs equalize -> bandpass -> HPSS in order and retains every stage.
pub fn denoise_pipeline(
    clip: &AudioClip,
    eq: &EqualizerProfile,
    bp: &BandpassSpec,
    hp: &HpssConfig,
) -> Result<DenoiseStages> {
    let equalized = equalize(clip, eq, &hp.framing)?;
    let bandpassed = bandpass(&equalized, bp)?;
    let (_harmonic, percussive) = hpss(&bandpassed, hp)?;
    Ok(DenoiseStages {
        raw: clip.clone(),
        equalized,
        bandpassed,
        denoised: percussive,
    })
}
