//! Desk-scale random-coding Monte Carlo oracle.
//!
//! Draws random codebooks with i.i.d. symbols from a pmf over a discrete
//! constellation, transmits uniformly random messages over the AWGN channel
//! and decodes by exhaustive minimum distance. The estimated ensemble-average
//! block error probability validates the random-coding upper bound (ties
//! count as errors, matching the union-bound derivation of the bound).
//!
//! Randomness is split into one ChaCha stream pair per codebook: stream `2k`
//! generates codebook `k`, stream `2k + 1` its message picks and noise. Trials
//! are therefore reproducible bit for bit for a fixed seed regardless of
//! evaluation order, and error counts are integers, so accumulation is
//! order-independent.

use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::channel::{ChannelPoint, Constellation};
use crate::error::{Error, Result};
use crate::numerics::validate_pmf;

/// Monte Carlo configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    /// Block length; exhaustive decoding keeps this at 16 or below.
    pub n: u32,
    /// Codebook size, at most 64 and at least `ceil(e^{n R})` for the rate
    /// being validated.
    pub num_messages: u32,
    /// Number of independently drawn codebooks.
    pub codebooks: u32,
    /// Noise realizations per codebook.
    pub noise_draws_per_codebook: u32,
    pub seed: u64,
    /// Cap on `num_messages^2 * noise_draws * codebooks`.
    pub budget: u64,
}

impl SimConfig {
    pub fn new(n: u32, num_messages: u32, codebooks: u32, noise_draws_per_codebook: u32, seed: u64) -> Self {
        SimConfig {
            n,
            num_messages,
            codebooks,
            noise_draws_per_codebook,
            seed,
            budget: 1_000_000_000,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n > 16 {
            return Err(Error::Invalid(format!("block length must be in 1..=16, got {}", self.n)));
        }
        if self.num_messages < 2 || self.num_messages > 64 {
            return Err(Error::Invalid(format!(
                "num_messages must be in 2..=64, got {}",
                self.num_messages
            )));
        }
        if self.codebooks == 0 || self.noise_draws_per_codebook == 0 {
            return Err(Error::Invalid("codebooks and noise draws must be positive".into()));
        }
        let required = self.num_messages as u64
            * self.num_messages as u64
            * self.noise_draws_per_codebook as u64
            * self.codebooks as u64;
        if required > self.budget {
            return Err(Error::BudgetExceeded { required, budget: self.budget });
        }
        Ok(())
    }
}

/// Estimate of the ensemble block error probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimResult {
    pub pe_hat: f64,
    /// Half-width of the 95% confidence interval (normal approximation;
    /// Wilson score when fewer than 30 errors were seen).
    pub ci95_halfwidth: f64,
    pub trials: u64,
    pub errors: u64,
}

/// Runs the ensemble simulation for pmf `q` over the points of `c` at the
/// operating point. `point.rate` must be consistent with the codebook size:
/// `e^{n R} <= num_messages`.
pub fn simulate_ensemble(
    c: &Constellation,
    q: &[f64],
    point: &ChannelPoint,
    cfg: &SimConfig,
) -> Result<SimResult> {
    cfg.validate()?;
    let d = c.discrete()?;
    validate_pmf(q, d.coords.len())?;
    if cfg.n != point.n {
        return Err(Error::Invalid(format!(
            "config block length {} disagrees with operating point {}",
            cfg.n, point.n
        )));
    }
    let messages_needed = libm::exp(point.n as f64 * point.rate);
    if messages_needed > cfg.num_messages as f64 * (1.0 + 1e-12) {
        return Err(Error::Invalid(format!(
            "rate {} needs ceil(e^(nR)) = {} messages, config has {}",
            point.rate,
            libm::ceil(messages_needed),
            cfg.num_messages
        )));
    }

    let cum = cumulative(q);
    let sigma = libm::sqrt(point.sigma2);
    let dim = d.effective_dim();
    let mut errors = 0u64;
    for k in 0..cfg.codebooks {
        let codebook = draw_codebook(&d.coords, &cum, cfg, codebook_rng(cfg.seed, k));
        errors += run_codebook(&codebook, dim, sigma, cfg.noise_draws_per_codebook, noise_rng(cfg.seed, k));
    }
    let trials = cfg.codebooks as u64 * cfg.noise_draws_per_codebook as u64;
    let (pe_hat, ci95_halfwidth) = estimate_with_ci(errors, trials);
    Ok(SimResult { pe_hat, ci95_halfwidth, trials, errors })
}

fn codebook_rng(seed: u64, codebook: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(2 * codebook as u64);
    rng
}

fn noise_rng(seed: u64, codebook: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(2 * codebook as u64 + 1);
    rng
}

fn cumulative(q: &[f64]) -> Vec<f64> {
    let mut cum = Vec::with_capacity(q.len());
    let mut acc = 0.0;
    for &p in q {
        acc += p;
        cum.push(acc);
    }
    cum
}

/// Draws `num_messages` codewords of `n` symbols i.i.d. from the pmf.
fn draw_codebook(
    coords: &[[f64; 2]],
    cum: &[f64],
    cfg: &SimConfig,
    mut rng: ChaCha8Rng,
) -> Vec<Vec<[f64; 2]>> {
    (0..cfg.num_messages)
        .map(|_| {
            (0..cfg.n)
                .map(|_| {
                    let u: f64 = rng.random();
                    let idx = cum.iter().position(|&c| u < c).unwrap_or(cum.len() - 1);
                    coords[idx]
                })
                .collect()
        })
        .collect()
}

/// Transmits uniformly random messages over the given codebook and counts
/// minimum-distance decoding errors; a distance tie with another codeword
/// counts as an error.
fn run_codebook(codebook: &[Vec<[f64; 2]>], dim: usize, sigma: f64, draws: u32, mut rng: ChaCha8Rng) -> u64 {
    let m = codebook.len();
    let n = codebook[0].len();
    let mut y = alloc::vec![[0.0_f64; 2]; n];
    let mut errors = 0u64;
    for _ in 0..draws {
        let msg = rng.random_range(0..m);
        for (yi, xi) in y.iter_mut().zip(&codebook[msg]) {
            let w0: f64 = rng.sample(StandardNormal);
            yi[0] = xi[0] + sigma * w0;
            if dim == 2 {
                let w1: f64 = rng.sample(StandardNormal);
                yi[1] = xi[1] + sigma * w1;
            } else {
                yi[1] = xi[1];
            }
        }
        let d_msg = distance2(&y, &codebook[msg], dim);
        let mut decoded_wrong = false;
        for (j, cw) in codebook.iter().enumerate() {
            if j != msg && distance2(&y, cw, dim) <= d_msg {
                decoded_wrong = true;
                break;
            }
        }
        if decoded_wrong {
            errors += 1;
        }
    }
    errors
}

fn distance2(y: &[[f64; 2]], x: &[[f64; 2]], dim: usize) -> f64 {
    let mut acc = 0.0;
    for (yi, xi) in y.iter().zip(x) {
        let d0 = yi[0] - xi[0];
        acc += d0 * d0;
        if dim == 2 {
            let d1 = yi[1] - xi[1];
            acc += d1 * d1;
        }
    }
    acc
}

fn estimate_with_ci(errors: u64, trials: u64) -> (f64, f64) {
    let n = trials as f64;
    let p = errors as f64 / n;
    let z = 1.959_963_984_540_054_4; // 97.5% normal quantile
    let halfwidth = if errors >= 30 && trials - errors >= 30 {
        z * libm::sqrt(p * (1.0 - p) / n)
    } else {
        // Wilson score half-width, stable at low counts.
        let z2 = z * z;
        z * libm::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / (1.0 + z2 / n)
    };
    (p, halfwidth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::e0;
    use crate::numerics::maximize_concave;

    fn bpsk() -> Constellation {
        Constellation::psk(2).unwrap()
    }

    #[test]
    fn config_validation_and_budget() {
        assert!(SimConfig::new(0, 4, 1, 1, 0).validate().is_err());
        assert!(SimConfig::new(17, 4, 1, 1, 0).validate().is_err());
        assert!(SimConfig::new(8, 1, 1, 1, 0).validate().is_err());
        assert!(SimConfig::new(8, 65, 1, 1, 0).validate().is_err());
        let mut cfg = SimConfig::new(8, 64, 1000, 1000, 0);
        cfg.budget = 1_000_000;
        assert!(matches!(cfg.validate(), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn rate_message_consistency_enforced() {
        // 16 messages support nR up to ln 16.
        let point = ChannelPoint::unit_energy(8, libm::log(20.0) / 8.0, 4.0).unwrap();
        let cfg = SimConfig::new(8, 16, 2, 2, 1);
        let q = alloc::vec![0.5, 0.5];
        assert!(simulate_ensemble(&bpsk(), &q, &point, &cfg).is_err());
    }

    #[test]
    fn noiseless_channel_never_errs() {
        let point = ChannelPoint::unit_energy(6, libm::log(4.0) / 6.0, 1e9).unwrap();
        let cfg = SimConfig::new(6, 4, 20, 50, 7);
        let q = alloc::vec![0.5, 0.5];
        let r = simulate_ensemble(&bpsk(), &q, &point, &cfg).unwrap();
        // Distinct codewords decode perfectly; identical codewords (drawn by
        // chance) tie and count as errors, so allow the collision floor:
        // P(two specific 6-symbol words collide) = 2^-6, and with 4 messages
        // the union bound gives ~3/32 per trial.
        assert!(r.pe_hat < 0.15, "pe {}", r.pe_hat);
    }

    #[test]
    fn antipodal_pair_matches_q_function() {
        // A fixed two-word codebook of opposite signs at n = 1 is the binary
        // antipodal channel: Pe = Q(d / (2 sigma)) with d = 2.
        let sigma2 = 0.25_f64;
        let sigma = libm::sqrt(sigma2);
        let codebook = alloc::vec![alloc::vec![[1.0, 0.0]], alloc::vec![[-1.0, 0.0]]];
        let draws = 400_000u32;
        let errors = run_codebook(&codebook, 1, sigma, draws, noise_rng(42, 0));
        let (pe, ci) = estimate_with_ci(errors, draws as u64);
        let q_fn = 0.5 * libm::erfc(1.0 / sigma / core::f64::consts::SQRT_2);
        assert!(
            (pe - q_fn).abs() <= 4.0 * ci.max(1e-4),
            "pe {pe} vs Q {q_fn} (ci {ci})"
        );
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let point = ChannelPoint::unit_energy(8, core::f64::consts::LN_2 * 4.0 / 8.0, 4.0).unwrap();
        let cfg = SimConfig::new(8, 16, 20, 50, 12345);
        let q = alloc::vec![0.5, 0.5];
        let a = simulate_ensemble(&bpsk(), &q, &point, &cfg).unwrap();
        let b = simulate_ensemble(&bpsk(), &q, &point, &cfg).unwrap();
        assert_eq!(a, b);
        let mut other = cfg;
        other.seed = 54321;
        let c = simulate_ensemble(&bpsk(), &q, &point, &other).unwrap();
        assert_ne!(a.errors, c.errors);
    }

    #[test]
    fn pe_decreases_with_snr() {
        let q = alloc::vec![0.5, 0.5];
        let rate = core::f64::consts::LN_2 * 4.0 / 8.0;
        let mut prev = f64::INFINITY;
        for eta in [1.0, 4.0, 16.0] {
            let point = ChannelPoint::unit_energy(8, rate, eta).unwrap();
            let cfg = SimConfig::new(8, 16, 50, 200, 99);
            let r = simulate_ensemble(&bpsk(), &q, &point, &cfg).unwrap();
            // Allow confidence-interval overlap.
            assert!(r.pe_hat <= prev + 3.0 * r.ci95_halfwidth, "eta {eta}: {} vs {prev}", r.pe_hat);
            prev = r.pe_hat;
        }
    }

    #[test]
    fn small_case_respects_random_coding_bound() {
        // Quick version of the soundness gate (the acceptance suite runs the
        // full-size one): pe_hat - 3 ci must not exceed the rho in [0,1]
        // random-coding bound.
        let n = 8u32;
        let rate = core::f64::consts::LN_2 * 4.0 / 8.0;
        let point = ChannelPoint::unit_energy(n, rate, 4.0).unwrap();
        let cfg = SimConfig::new(n, 16, 60, 200, 2024);
        let q = alloc::vec![0.5, 0.5];
        let r = simulate_ensemble(&bpsk(), &q, &point, &cfg).unwrap();
        let c = bpsk();
        let (_, exponent) = maximize_concave(
            |rho| e0(&c, point.sigma2, rho).unwrap() - rho * rate,
            0.0,
            1.0,
            1e-10,
        )
        .unwrap();
        let bound = libm::exp(-(n as f64) * exponent);
        assert!(
            r.pe_hat - 3.0 * r.ci95_halfwidth <= bound,
            "pe {} (ci {}) vs bound {bound}",
            r.pe_hat,
            r.ci95_halfwidth
        );
    }
}
