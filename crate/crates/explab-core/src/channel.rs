//! Constellations and channel operating points.
//!
//! A constellation is either M-PSK on the unit circle, an arbitrary discrete
//! point set with a pmf in 1 or 2 real dimensions, or the continuous
//! Gaussian-input marker. The AWGN noise is isotropic with variance `sigma2`
//! per real dimension; for 2-D constellations the channel density is the
//! product of two 1-D Gaussians.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::numerics::validate_pmf;

/// Channel input description.
#[derive(Debug, Clone, PartialEq)]
pub enum Constellation {
    /// M points equally spaced on the unit circle, uniform pmf.
    Psk { order: u32 },
    /// Arbitrary discrete points with a pmf. `dim` is 1 or 2; 1-D points
    /// store 0 in the second coordinate.
    Points { dim: usize, coords: Vec<[f64; 2]>, probs: Vec<f64> },
    /// Continuous Gaussian input of unit power. `dim` records whether the
    /// real-valued model is 1-D or 2-D; the closed forms depend only on SNR,
    /// so the field is informational. Defaults to 1-D real.
    GaussianInput { dim: usize },
}

/// A discrete constellation materialized as plain arrays.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteConstellation {
    pub dim: usize,
    pub coords: Vec<[f64; 2]>,
    pub probs: Vec<f64>,
}

impl DiscreteConstellation {
    /// 1 when every point lies on the first axis, otherwise `dim`. Quadrature
    /// over an axis-embedded set reduces exactly to the 1-D integral.
    pub fn effective_dim(&self) -> usize {
        if self.dim == 2 && self.coords.iter().all(|p| p[1] == 0.0) {
            1
        } else {
            self.dim
        }
    }

    pub fn mean_power(&self) -> f64 {
        self.coords
            .iter()
            .zip(&self.probs)
            .map(|(p, &q)| q * (p[0] * p[0] + p[1] * p[1]))
            .sum()
    }
}

impl Constellation {
    /// M-PSK with points (cos(2 pi k / M), sin(2 pi k / M)), k = 0..M-1.
    pub fn psk(order: u32) -> Result<Self> {
        if order < 2 {
            return Err(Error::Invalid(format!("PSK order must be >= 2, got {order}")));
        }
        Ok(Constellation::Psk { order })
    }

    /// Discrete 1-D constellation from amplitudes and a pmf.
    pub fn points_1d(xs: &[f64], probs: &[f64]) -> Result<Self> {
        validate_pmf(probs, xs.len())?;
        if xs.is_empty() {
            return Err(Error::Invalid("constellation needs at least one point".into()));
        }
        Ok(Constellation::Points {
            dim: 1,
            coords: xs.iter().map(|&x| [x, 0.0]).collect(),
            probs: probs.to_vec(),
        })
    }

    /// Discrete 2-D constellation from coordinates and a pmf.
    pub fn points_2d(coords: &[[f64; 2]], probs: &[f64]) -> Result<Self> {
        validate_pmf(probs, coords.len())?;
        if coords.is_empty() {
            return Err(Error::Invalid("constellation needs at least one point".into()));
        }
        Ok(Constellation::Points { dim: 2, coords: coords.to_vec(), probs: probs.to_vec() })
    }

    /// Gaussian input, 1-D real model.
    pub fn gaussian() -> Self {
        Constellation::GaussianInput { dim: 1 }
    }

    pub fn dimension(&self) -> usize {
        match self {
            Constellation::Psk { .. } => 2,
            Constellation::Points { dim, .. } => *dim,
            Constellation::GaussianInput { dim } => *dim,
        }
    }

    pub fn is_discrete(&self) -> bool {
        !matches!(self, Constellation::GaussianInput { .. })
    }

    /// Materializes the discrete point set; errors for Gaussian input.
    pub fn discrete(&self) -> Result<DiscreteConstellation> {
        match self {
            Constellation::Psk { order } => {
                let m = *order;
                let mut coords = Vec::with_capacity(m as usize);
                for k in 0..m {
                    coords.push(psk_point(k, m));
                }
                let probs = alloc::vec![1.0 / m as f64; m as usize];
                Ok(DiscreteConstellation { dim: 2, coords, probs })
            }
            Constellation::Points { dim, coords, probs } => Ok(DiscreteConstellation {
                dim: *dim,
                coords: coords.clone(),
                probs: probs.clone(),
            }),
            Constellation::GaussianInput { .. } => {
                Err(Error::UnsupportedKind("gaussian input has no discrete point set"))
            }
        }
    }

    /// Mean symbol energy. Gaussian input follows the unit-power convention.
    pub fn mean_power(&self) -> f64 {
        match self {
            Constellation::GaussianInput { .. } => 1.0,
            _ => self.discrete().expect("discrete by construction").mean_power(),
        }
    }
}

/// PSK point with axis values snapped exactly, so that BPSK is {(1,0),(-1,0)}
/// and QPSK is {(1,0),(0,1),(-1,0),(0,-1)} without trigonometric residue.
fn psk_point(k: u32, m: u32) -> [f64; 2] {
    let four_k = 4 * k;
    if four_k % m == 0 {
        // Multiples of a quarter turn.
        return match four_k / m {
            0 => [1.0, 0.0],
            1 => [0.0, 1.0],
            2 => [-1.0, 0.0],
            _ => [0.0, -1.0],
        };
    }
    let theta = 2.0 * core::f64::consts::PI * k as f64 / m as f64;
    [libm::cos(theta), libm::sin(theta)]
}

/// Alias for [`Constellation::psk`].
pub fn make_psk(order: u32) -> Result<Constellation> {
    Constellation::psk(order)
}

/// Pairwise Bhattacharyya matrix: entry (i, j) is
/// `Int sqrt(p(y|x_i) p(y|x_j)) dy = exp(-|x_i - x_j|^2 / (8 sigma2))`.
pub fn pairwise_bhattacharyya(c: &Constellation, sigma2: f64) -> Result<Vec<Vec<f64>>> {
    if !(sigma2 > 0.0) {
        return Err(Error::Invalid(format!("sigma2 must be positive, got {sigma2}")));
    }
    let d = c.discrete()?;
    let m = d.coords.len();
    let mut out = alloc::vec![alloc::vec![0.0; m]; m];
    for i in 0..m {
        for j in 0..=i {
            let dx = d.coords[i][0] - d.coords[j][0];
            let dy = d.coords[i][1] - d.coords[j][1];
            let b = libm::exp(-(dx * dx + dy * dy) / (8.0 * sigma2));
            out[i][j] = b;
            out[j][i] = b;
        }
    }
    Ok(out)
}

/// A channel operating point: block length, rate in nats/symbol, SNR and the
/// per-dimension noise variance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelPoint {
    pub n: u32,
    /// Rate in nats/symbol.
    pub rate: f64,
    /// SNR `eta` (linear).
    pub eta: f64,
    /// Per-dimension noise variance.
    pub sigma2: f64,
}

impl ChannelPoint {
    /// Operating point for a unit-energy constellation: `sigma2 = 1/eta`.
    pub fn unit_energy(n: u32, rate: f64, eta: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("block length must be positive".into()));
        }
        if !(rate > 0.0) {
            return Err(Error::Invalid(format!("rate must be positive, got {rate}")));
        }
        if !(eta > 0.0) {
            return Err(Error::Invalid(format!("snr must be positive, got {eta}")));
        }
        Ok(ChannelPoint { n, rate, eta, sigma2: 1.0 / eta })
    }

    pub fn snr_db(&self) -> f64 {
        10.0 * libm::log10(self.eta)
    }
}

/// Average and peak power constraints for input optimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerConstraint {
    /// Average power budget (second moment of the input).
    pub avg_power: f64,
    /// Peak amplitude; `f64::INFINITY` when unconstrained.
    pub peak_amplitude: f64,
}

impl PowerConstraint {
    pub fn average(avg_power: f64) -> Result<Self> {
        Self::new(avg_power, f64::INFINITY)
    }

    pub fn new(avg_power: f64, peak_amplitude: f64) -> Result<Self> {
        if !(avg_power > 0.0) {
            return Err(Error::Invalid(format!("avg_power must be positive, got {avg_power}")));
        }
        if !(peak_amplitude > 0.0) {
            return Err(Error::Invalid(format!(
                "peak_amplitude must be positive, got {peak_amplitude}"
            )));
        }
        if peak_amplitude.is_finite() && avg_power > peak_amplitude * peak_amplitude {
            return Err(Error::Invalid(format!(
                "avg_power {avg_power} exceeds peak_amplitude^2 = {}",
                peak_amplitude * peak_amplitude
            )));
        }
        Ok(PowerConstraint { avg_power, peak_amplitude })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{integrate_gaussian_mixture_power, QuadratureSpec};

    #[test]
    fn bpsk_points_are_exact() {
        let d = Constellation::psk(2).unwrap().discrete().unwrap();
        assert_eq!(d.coords, alloc::vec![[1.0, 0.0], [-1.0, 0.0]]);
        assert_eq!(d.probs, alloc::vec![0.5, 0.5]);
        assert_eq!(d.effective_dim(), 1);
    }

    #[test]
    fn qpsk_points_are_exact() {
        let d = Constellation::psk(4).unwrap().discrete().unwrap();
        assert_eq!(
            d.coords,
            alloc::vec![[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]]
        );
    }

    #[test]
    fn psk_unit_energy_for_all_orders() {
        for m in [2u32, 3, 4, 8, 16, 17] {
            let c = Constellation::psk(m).unwrap();
            let d = c.discrete().unwrap();
            for p in &d.coords {
                let r = libm::sqrt(p[0] * p[0] + p[1] * p[1]);
                assert!((r - 1.0).abs() <= 1e-15, "M = {m}: radius {r}");
            }
            assert!((c.mean_power() - 1.0).abs() <= 1e-15, "M = {m}");
        }
    }

    #[test]
    fn psk_order_below_two_rejected() {
        assert!(Constellation::psk(1).is_err());
    }

    #[test]
    fn bhattacharyya_diagonal_and_bpsk_value() {
        let c = Constellation::psk(2).unwrap();
        let b = pairwise_bhattacharyya(&c, 0.5).unwrap();
        assert_eq!(b[0][0], 1.0);
        assert_eq!(b[1][1], 1.0);
        // |x - x'|^2 = 4, so the off-diagonal is exp(-1).
        let expect = libm::exp(-1.0);
        assert!((b[0][1] - expect).abs() < 1e-15);
        assert_eq!(b[0][1], b[1][0]);
    }

    #[test]
    fn bhattacharyya_qpsk_adjacent_matches_quadrature() {
        let c = Constellation::psk(4).unwrap();
        let b = pairwise_bhattacharyya(&c, 1.0).unwrap();
        // Adjacent points are sqrt(2) apart: exp(-2/8) = exp(-0.25).
        let expect = libm::exp(-0.25);
        assert!((b[0][1] - expect).abs() < 1e-15, "got {}", b[0][1]);

        // Cross-check one entry against quadrature: Int sqrt(p p') dy is the
        // rho = 1 mixture-power integral of a two-point uniform set, minus the
        // self terms: I = (1 + B)/2 => B = 2 I - 1.
        let pts = alloc::vec![[1.0, 0.0], [0.0, 1.0]];
        let q = alloc::vec![0.5, 0.5];
        let i = integrate_gaussian_mixture_power(&pts, 2, &q, 1.0, 1.0, &QuadratureSpec::default())
            .unwrap();
        assert!(((2.0 * i - 1.0) - expect).abs() < 1e-9);
    }

    #[test]
    fn bhattacharyya_rejects_gaussian() {
        let err = pairwise_bhattacharyya(&Constellation::gaussian(), 1.0);
        assert!(matches!(err, Err(Error::UnsupportedKind(_))));
    }

    #[test]
    fn bhattacharyya_translation_invariance() {
        let pts = alloc::vec![[0.3, -0.2], [-0.9, 0.5], [0.0, 1.0]];
        let shifted: Vec<[f64; 2]> = pts.iter().map(|p| [p[0] + 2.0, p[1] - 1.5]).collect();
        let q = alloc::vec![0.25, 0.5, 0.25];
        let a = pairwise_bhattacharyya(&Constellation::points_2d(&pts, &q).unwrap(), 0.7).unwrap();
        let b =
            pairwise_bhattacharyya(&Constellation::points_2d(&shifted, &q).unwrap(), 0.7).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((a[i][j] - b[i][j]).abs() < 1e-15);
                assert!(a[i][j] > 0.0 && a[i][j] <= 1.0);
            }
        }
    }

    #[test]
    fn channel_point_unit_energy_invariant() {
        let p = ChannelPoint::unit_energy(255, 0.671, 5.0).unwrap();
        assert!((p.eta * p.sigma2 - 1.0).abs() < 1e-12);
        assert!(ChannelPoint::unit_energy(0, 0.5, 1.0).is_err());
        assert!(ChannelPoint::unit_energy(10, -0.5, 1.0).is_err());
        assert!(ChannelPoint::unit_energy(10, 0.5, 0.0).is_err());
    }

    #[test]
    fn power_constraint_validation() {
        assert!(PowerConstraint::new(4.0, 2.0).is_ok());
        assert!(PowerConstraint::new(4.1, 2.0).is_err());
        assert!(PowerConstraint::average(1.0).is_ok());
    }
}
