//! Diversity-order estimation: local slopes of `log Pe` against SNR and
//! against `log SNR`, with a per-window decay classification.
//!
//! Slope conventions: `slope_semilog = -d(log Pe)/d(eta)` and
//! `slope_loglog = -d(log Pe)/d(ln eta)`, both from central differences on
//! interior samples, so decaying curves produce positive slopes and
//! `slope_loglog = eta * slope_semilog` up to differencing error. A window of
//! near-constant semilog slope is exponential decay, near-constant loglog
//! slope is polynomial decay, and a window where both slopes are small
//! relative to the block length is the sub-linear plateau of the mid-rate
//! bound at high SNR.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Decay classification of one slope window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecayClass {
    Exponential,
    Polynomial,
    SublinearPlateau,
    Transitional,
}

impl core::fmt::Display for DecayClass {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let s = match self {
            DecayClass::Exponential => "exponential",
            DecayClass::Polynomial => "polynomial",
            DecayClass::SublinearPlateau => "sublinear_plateau",
            DecayClass::Transitional => "transitional",
        };
        write!(f, "{s}")
    }
}

/// Classification thresholds. The coefficient-of-variation limits and the
/// plateau level are declared conventions, sized so that the analytic
/// prototypes (pure exponential, pure polynomial, constant) classify
/// correctly under 10% multiplicative noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileOptions {
    /// Sliding-window length over the slope samples; at least 3.
    pub window: usize,
    /// CV limit for calling a window exponential (on the semilog slope).
    pub cv_exponential: f64,
    /// CV limit for calling a window polynomial (on the loglog slope).
    pub cv_polynomial: f64,
    /// Both mean slope magnitudes below this level classify as plateau.
    /// Scale it with the block length: 0.05 * n.
    pub plateau_threshold: f64,
}

impl ProfileOptions {
    /// Defaults for a block length `n`: window 7, CV limits 0.1 and 0.15,
    /// plateau level `0.05 n`.
    pub fn for_block_length(n: u32) -> Self {
        ProfileOptions {
            window: 7,
            cv_exponential: 0.1,
            cv_polynomial: 0.15,
            plateau_threshold: 0.05 * n as f64,
        }
    }

    pub fn with_window(mut self, window: usize) -> Self {
        self.window = window;
        self
    }
}

/// Slopes and window classifications of a `(eta, log Pe)` curve.
#[derive(Debug, Clone, PartialEq)]
pub struct DiversityProfile {
    /// The input samples.
    pub samples: Vec<(f64, f64)>,
    /// SNR values of the interior points carrying slopes.
    pub etas: Vec<f64>,
    /// `-d(log Pe)/d(eta)` at each interior point.
    pub slope_semilog: Vec<f64>,
    /// `-d(log Pe)/d(ln eta)` at each interior point.
    pub slope_loglog: Vec<f64>,
    /// One label per sliding window of `window` consecutive slope samples;
    /// window `w` covers slope indices `w .. w + window`.
    pub classes: Vec<DecayClass>,
    pub window: usize,
}

impl DiversityProfile {
    /// Index of the slope sample at the center of window `w`.
    pub fn window_center(&self, w: usize) -> usize {
        w + self.window / 2
    }
}

/// Computes slopes and per-window classifications for a curve of
/// `(eta, log_pe)` samples with strictly increasing positive `eta`.
pub fn profile(samples: &[(f64, f64)], opts: &ProfileOptions) -> Result<DiversityProfile> {
    if opts.window < 3 {
        return Err(Error::Invalid(format!("window must be >= 3, got {}", opts.window)));
    }
    if samples.len() < opts.window + 2 {
        return Err(Error::Invalid(format!(
            "need at least window + 2 = {} samples, got {}",
            opts.window + 2,
            samples.len()
        )));
    }
    for (i, &(eta, log_pe)) in samples.iter().enumerate() {
        if !(eta > 0.0) || !eta.is_finite() {
            return Err(Error::Invalid(format!("eta must be positive and finite, got {eta}")));
        }
        if !log_pe.is_finite() {
            return Err(Error::Invalid(format!("log_pe must be finite, got {log_pe}")));
        }
        if i > 0 && eta <= samples[i - 1].0 {
            return Err(Error::Invalid("eta samples must be strictly increasing".into()));
        }
    }

    let interior = samples.len() - 2;
    let mut etas = Vec::with_capacity(interior);
    let mut slope_semilog = Vec::with_capacity(interior);
    let mut slope_loglog = Vec::with_capacity(interior);
    for i in 1..samples.len() - 1 {
        let (e_prev, lp_prev) = samples[i - 1];
        let (e_mid, _) = samples[i];
        let (e_next, lp_next) = samples[i + 1];
        let dlp = lp_next - lp_prev;
        etas.push(e_mid);
        slope_semilog.push(-dlp / (e_next - e_prev));
        slope_loglog.push(-dlp / (libm::log(e_next) - libm::log(e_prev)));
    }

    let windows = interior - opts.window + 1;
    let mut classes = Vec::with_capacity(windows);
    for w in 0..windows {
        let semi = &slope_semilog[w..w + opts.window];
        let loglog = &slope_loglog[w..w + opts.window];
        classes.push(classify(semi, loglog, opts));
    }

    Ok(DiversityProfile {
        samples: samples.to_vec(),
        etas,
        slope_semilog,
        slope_loglog,
        classes,
        window: opts.window,
    })
}

fn classify(semi: &[f64], loglog: &[f64], opts: &ProfileOptions) -> DecayClass {
    let (semi_mean, semi_cv) = mean_and_cv(semi);
    let (loglog_mean, loglog_cv) = mean_and_cv(loglog);
    let plateau = opts.plateau_threshold;
    // The plateau test runs first: a flat window has near-zero slopes whose
    // CV is meaningless.
    if semi_mean.abs() < plateau && loglog_mean.abs() < plateau {
        return DecayClass::SublinearPlateau;
    }
    let exponential = semi_cv < opts.cv_exponential && semi_mean.abs() >= plateau;
    let polynomial = loglog_cv < opts.cv_polynomial;
    // On a fine grid both slope families look locally constant; the decay
    // type is whichever is the more constant of the two.
    if exponential && (!polynomial || semi_cv <= loglog_cv) {
        DecayClass::Exponential
    } else if polynomial {
        DecayClass::Polynomial
    } else {
        DecayClass::Transitional
    }
}

fn mean_and_cv(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    let cv = if mean == 0.0 { f64::INFINITY } else { libm::sqrt(var) / mean.abs() };
    (mean, cv)
}

/// The region-3 exponent density of the linearized Gaussian bound:
/// `delta3 = (a + b eta)^2 / [(1 + a + b eta)^2 (eta/(1 + a + b eta) + 1)]`,
/// so that `log Pe ~ -n eta delta3`. Requires `1 + a + b eta > 0`.
pub fn delta3(eta: f64, a: f64, b: f64) -> Result<f64> {
    let u = 1.0 + a + b * eta;
    if !(u > 0.0) {
        return Err(Error::Invalid(format!(
            "1 + a + b*eta must be positive (pole at zero), got {u}"
        )));
    }
    let rho = a + b * eta;
    Ok(rho * rho / (u * u * (eta / u + 1.0)))
}
