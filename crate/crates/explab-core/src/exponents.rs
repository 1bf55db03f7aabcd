//! Gallager exponents `E_o`, `E_x`, their rho-derivatives and the three
//! critical rates demarcating the bound's rate regions.
//!
//! Discrete constellations evaluate `E_o` through the mixture-power quadrature
//! and `E_x` through the closed-form Bhattacharyya matrix; the two paths meet
//! at `E_o(1) = E_x(1)`, which doubles as a cross-validation of the quadrature.
//! Gaussian input (unit power, `eta = 1/sigma2`) uses the closed forms
//! `E_o(rho) = rho ln(1 + eta/(1+rho))` and `E_x(rho) = rho ln(1 + eta/(2 rho))`.

use alloc::format;

use crate::channel::{pairwise_bhattacharyya, ChannelPoint, Constellation};
use crate::error::{Error, Result};
use crate::numerics::{integrate_gaussian_mixture_power, QuadratureSpec};

/// Natural log of 4; the expurgated-bound rate offset is `ln 4 / n`.
pub const LN_4: f64 = 1.386_294_361_119_890_6;

/// Random-coding exponent `E_o(rho, q)` in nats, with the crate-default
/// quadrature. `rho` may exceed 1 (needed when differencing at the boundary).
pub fn e0(c: &Constellation, sigma2: f64, rho: f64) -> Result<f64> {
    e0_with(c, sigma2, rho, &QuadratureSpec::default())
}

/// `E_o` with an explicit quadrature spec.
pub fn e0_with(c: &Constellation, sigma2: f64, rho: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(rho >= 0.0) || !rho.is_finite() {
        return Err(Error::Invalid(format!("rho must be finite and >= 0, got {rho}")));
    }
    if rho == 0.0 {
        // The integrand reduces to the mixture density, which integrates to 1.
        return Ok(0.0);
    }
    match c {
        Constellation::GaussianInput { .. } => {
            let eta = gaussian_eta(sigma2)?;
            Ok(rho * libm::log1p(eta / (1.0 + rho)))
        }
        _ => {
            let d = c.discrete()?;
            let dim = d.effective_dim();
            let i = integrate_gaussian_mixture_power(&d.coords, dim, &d.probs, sigma2, rho, spec)?;
            Ok(-libm::log(i))
        }
    }
}

/// Expurgated exponent `E_x(rho, q)` in nats. The natural domain is
/// `rho >= 1`; evaluation on (0, 1) is permitted (used for differencing and
/// the `E_o(1) = E_x(1)` identity).
pub fn ex(c: &Constellation, sigma2: f64, rho: f64) -> Result<f64> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::Invalid(format!("rho must be finite and > 0, got {rho}")));
    }
    match c {
        Constellation::GaussianInput { .. } => {
            let eta = gaussian_eta(sigma2)?;
            Ok(rho * libm::log1p(eta / (2.0 * rho)))
        }
        _ => {
            let b = pairwise_bhattacharyya(c, sigma2)?;
            let d = c.discrete()?;
            let m = d.probs.len();
            let mut s = 0.0;
            for i in 0..m {
                for j in 0..m {
                    s += d.probs[i] * d.probs[j] * libm::pow(b[i][j], 1.0 / rho);
                }
            }
            Ok(-rho * libm::log(s))
        }
    }
}

/// `dE_o/drho`. Gaussian input uses the analytic derivative
/// `ln(1 + eta/(1+rho)) - eta rho / ((1+rho)^2 + eta (1+rho))`; discrete
/// constellations use Richardson-extrapolated finite differences
/// (steps 1e-3 and 5e-4, one-sided at the rho = 0 boundary).
pub fn e0_derivative(c: &Constellation, sigma2: f64, rho: f64) -> Result<f64> {
    if !(rho >= 0.0) || !rho.is_finite() {
        return Err(Error::Invalid(format!("rho must be finite and >= 0, got {rho}")));
    }
    match c {
        Constellation::GaussianInput { .. } => {
            let eta = gaussian_eta(sigma2)?;
            Ok(gaussian_e0_derivative(eta, rho))
        }
        _ => {
            let spec = QuadratureSpec::default();
            let f = |r: f64| e0_with(c, sigma2, r, &spec);
            richardson_derivative(f, rho, 1e-3, rho == 0.0)
        }
    }
}

/// `dE_x/drho`. Gaussian input uses `ln(1 + eta/(2 rho)) - eta/(eta + 2 rho)`;
/// discrete constellations use the same Richardson scheme as `e0_derivative`.
pub fn ex_derivative(c: &Constellation, sigma2: f64, rho: f64) -> Result<f64> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::Invalid(format!("rho must be finite and > 0, got {rho}")));
    }
    match c {
        Constellation::GaussianInput { .. } => {
            let eta = gaussian_eta(sigma2)?;
            Ok(libm::log1p(eta / (2.0 * rho)) - eta / (eta + 2.0 * rho))
        }
        _ => {
            let f = |r: f64| ex(c, sigma2, r);
            richardson_derivative(f, rho, 1e-3, false)
        }
    }
}

pub(crate) fn gaussian_e0_derivative(eta: f64, rho: f64) -> f64 {
    let p = 1.0 + rho;
    libm::log1p(eta / p) - eta * rho / (p * p + eta * p)
}

fn gaussian_eta(sigma2: f64) -> Result<f64> {
    if !(sigma2 > 0.0) {
        return Err(Error::Invalid(format!("sigma2 must be positive, got {sigma2}")));
    }
    Ok(1.0 / sigma2)
}

/// Central (or one-sided at a left boundary) difference with one Richardson
/// extrapolation step: combines estimates at `h` and `h/2`.
fn richardson_derivative<F: Fn(f64) -> Result<f64>>(
    f: F,
    x: f64,
    h: f64,
    one_sided: bool,
) -> Result<f64> {
    let d = |h: f64| -> Result<f64> {
        if one_sided {
            // Second-order forward difference on {x, x+h, x+2h}.
            Ok((-3.0 * f(x)? + 4.0 * f(x + h)? - f(x + 2.0 * h)?) / (2.0 * h))
        } else {
            Ok((f(x + h)? - f(x - h)?) / (2.0 * h))
        }
    };
    let coarse = d(h)?;
    let fine = d(0.5 * h)?;
    // Both stencils have leading error O(h^2).
    Ok((4.0 * fine - coarse) / 3.0)
}

/// Rate-region label for the upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Region1,
    Region2,
    Region3,
    AboveCapacity,
}

impl Region {
    /// Index used for monotonicity checks; larger means higher rate side.
    pub fn index(&self) -> u8 {
        match self {
            Region::Region1 => 1,
            Region::Region2 => 2,
            Region::Region3 => 3,
            Region::AboveCapacity => 4,
        }
    }
}

impl core::fmt::Display for Region {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Region::Region1 => write!(f, "1"),
            Region::Region2 => write!(f, "2"),
            Region::Region3 => write!(f, "3"),
            Region::AboveCapacity => write!(f, "above_capacity"),
        }
    }
}

/// The three critical rates of the bound at one operating point, in nats.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionReport {
    /// Upper edge of region 1: `dE_x/drho at rho=1 - ln(4)/n`.
    pub r1_max: f64,
    /// Critical rate, upper edge of region 2: `dE_o/drho at rho=1`.
    pub r_crit: f64,
    /// Channel capacity for this input: `dE_o/drho at rho=0`.
    pub capacity: f64,
}

impl RegionReport {
    pub fn region_of(&self, rate: f64) -> Region {
        if rate > self.capacity {
            Region::AboveCapacity
        } else if rate > self.r_crit {
            Region::Region3
        } else if rate > self.r1_max {
            Region::Region2
        } else {
            Region::Region1
        }
    }
}

/// Computes the three critical rates for a constellation at an operating point.
pub fn region_report(c: &Constellation, point: &ChannelPoint) -> Result<RegionReport> {
    let r1_max = ex_derivative(c, point.sigma2, 1.0)? - LN_4 / point.n as f64;
    let r_crit = e0_derivative(c, point.sigma2, 1.0)?;
    let capacity = e0_derivative(c, point.sigma2, 0.0)?;
    Ok(RegionReport { r1_max, r_crit, capacity })
}
