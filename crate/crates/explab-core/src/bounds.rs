//! The per-region upper bound on block error probability and the closed-form
//! per-region bounds for M-PSK and Gaussian input.
//!
//! The master bound optimizes the exponent bracket for the region the rate
//! falls in: the expurgated form `sup_{rho >= 1} [E_x(rho) - rho (R + ln4/n)]`
//! in region 1, `E_o(1) - R` in region 2 and
//! `max_{0 <= rho <= 1} [E_o(rho) - rho R]` in region 3. In region 1 the
//! random-coding value at `rho = 1` is a valid bound at every rate, so the
//! reported exponent is the better of the two forms; this keeps `log Pe`
//! continuous across the region-1/2 boundary, where the raw expurgated form
//! pays the `ln 4 / n` expurgation offset.
//!
//! The closed forms are looser envelopes, each valid on a stated window.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::channel::{ChannelPoint, Constellation};
use crate::error::{Error, Result};
use crate::exponents::{
    e0, ex, gaussian_e0_derivative, region_report, Region, LN_4,
};
use crate::numerics::{find_root, maximize_concave, BracketedRoot};

/// Search cap for the expurgated supremum over `rho >= 1`. The bracket decays
/// linearly for large `rho`, so the optimum is finite and modest.
pub const RHO_MAX: f64 = 100.0;

const GOLDEN_TOL: f64 = 1e-10;

/// Result of evaluating the master bound at one operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundResult {
    pub region: Region,
    /// Optimizing `rho` for the reported exponent.
    pub rho_opt: f64,
    /// Maximized exponent bracket, nats per symbol.
    pub exponent: f64,
    /// Natural log of the bound on block error probability: `-n * exponent`.
    pub log_pe: f64,
    /// `min(exp(log_pe), 1)`.
    pub pe_capped: f64,
    /// Set when the region-1 search ran into the `rho` cap; the bound is
    /// still valid but may be improvable at even larger `rho`.
    pub rho_at_cap: bool,
}

fn finish(
    point: &ChannelPoint,
    region: Region,
    rho_opt: f64,
    exponent: f64,
    rho_at_cap: bool,
) -> BoundResult {
    let log_pe = -(point.n as f64) * exponent;
    BoundResult {
        region,
        rho_opt,
        exponent,
        log_pe,
        pe_capped: libm::exp(log_pe).min(1.0),
        rho_at_cap,
    }
}

/// Evaluates the master upper bound for `c` at `point`, selecting the region
/// from the critical rates.
pub fn master_bound(c: &Constellation, point: &ChannelPoint) -> Result<BoundResult> {
    let report = region_report(c, point)?;
    let region = report.region_of(point.rate);
    master_bound_in_region(c, point, region)
}

/// Master bound with the region label supplied by the caller (the sweep
/// computes the report once per point anyway).
pub fn master_bound_in_region(
    c: &Constellation,
    point: &ChannelPoint,
    region: Region,
) -> Result<BoundResult> {
    let rate = point.rate;
    match region {
        Region::Region3 | Region::AboveCapacity => {
            let mut failure = None;
            let (rho, val) = maximize_concave(
                |rho| match e0(c, point.sigma2, rho) {
                    Ok(v) => v - rho * rate,
                    Err(e) => {
                        failure.get_or_insert(e);
                        f64::NEG_INFINITY
                    }
                },
                0.0,
                1.0,
                GOLDEN_TOL,
            )?;
            if let Some(e) = failure {
                return Err(e);
            }
            // At or above capacity the bracket peaks at rho = 0 with value 0.
            let (rho, val) = if val < 0.0 { (0.0, 0.0) } else { (rho, val) };
            Ok(finish(point, region, rho, val, false))
        }
        Region::Region2 => {
            let val = e0(c, point.sigma2, 1.0)? - rate;
            Ok(finish(point, region, 1.0, val, false))
        }
        Region::Region1 => {
            let shifted = rate + LN_4 / point.n as f64;
            let mut failure = None;
            // Log-spaced golden search: a monotone reparametrization keeps the
            // bracket unimodal while resolving small rho finely.
            let (u, expurgated) = maximize_concave(
                |u| {
                    let rho = libm::exp(u);
                    match ex(c, point.sigma2, rho) {
                        Ok(v) => v - rho * shifted,
                        Err(e) => {
                            failure.get_or_insert(e);
                            f64::NEG_INFINITY
                        }
                    }
                },
                0.0,
                libm::log(RHO_MAX),
                GOLDEN_TOL,
            )?;
            if let Some(e) = failure {
                return Err(e);
            }
            let rho = libm::exp(u);
            let random_coding = e0(c, point.sigma2, 1.0)? - rate;
            if expurgated >= random_coding {
                let at_cap = rho > 0.99 * RHO_MAX;
                Ok(finish(point, region, rho, expurgated, at_cap))
            } else {
                Ok(finish(point, region, 1.0, random_coding, false))
            }
        }
    }
}

/// Which closed-form bound a [`ClosedFormBound`] value carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedFormName {
    MaryRegion1,
    MaryRegion2,
    BpskRegion3LowSnr,
    BpskRegion3HighSnr,
    GaussRegion1,
    GaussRegion2,
    GaussRegion3,
    GaussRegion3LinearApprox,
}

impl core::fmt::Display for ClosedFormName {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let s = match self {
            ClosedFormName::MaryRegion1 => "mary_region1",
            ClosedFormName::MaryRegion2 => "mary_region2",
            ClosedFormName::BpskRegion3LowSnr => "bpsk_region3_low_snr",
            ClosedFormName::BpskRegion3HighSnr => "bpsk_region3_high_snr",
            ClosedFormName::GaussRegion1 => "gauss_region1",
            ClosedFormName::GaussRegion2 => "gauss_region2",
            ClosedFormName::GaussRegion3 => "gauss_region3",
            ClosedFormName::GaussRegion3LinearApprox => "gauss_region3_linear_approx",
        };
        write!(f, "{s}")
    }
}

/// Envelope intermediates of the high-SNR BPSK region-3 bound, reported for
/// inspection (the final bound does not consume them).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HighSnrEnvelope {
    /// Crossover ordinate where the scaled mixture component reaches 1/2.
    pub m1: f64,
    /// Lower envelope of `m1` over an SNR window (here a single point).
    pub m_l1: f64,
    /// Upper envelope of `m1`.
    pub m_u1: f64,
    /// Bound on the head integral of the split.
    pub i1_bound: f64,
    /// Bound on the tail integral of the split.
    pub i2_bound: f64,
}

/// A closed-form per-region bound evaluated at one operating point.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormBound {
    pub name: ClosedFormName,
    /// Natural log of the bound.
    pub log_pe: f64,
    /// Human-readable statement of the validity window.
    pub validity: &'static str,
    /// Intermediate `rho` where the form derives one.
    pub rho: Option<f64>,
    /// Intermediate `delta` for the root-based forms.
    pub delta: Option<f64>,
    pub envelope: Option<HighSnrEnvelope>,
}

/// Natural-log binary entropy.
pub fn binary_entropy(d: f64) -> f64 {
    if d == 0.0 || d == 1.0 {
        return 0.0;
    }
    -d * libm::log(d) - (1.0 - d) * libm::log(1.0 - d)
}

/// M-ary region-1 closed form: solves `ln M - H(delta) = R + ln4/n` for
/// `delta` in (0, 1/2] and reports `log Pe = -n delta eta`.
pub fn mary_region1_closed(point: &ChannelPoint, m: u32) -> Result<ClosedFormBound> {
    if m < 2 {
        return Err(Error::Invalid(format!("M must be >= 2, got {m}")));
    }
    let ln_m = libm::log(m as f64);
    let target = point.rate + LN_4 / point.n as f64;
    // H maps (0, 1/2] onto (0, ln 2], so a root exists iff the shifted rate
    // lies in [ln M - ln 2, ln M).
    if target >= ln_m || target < ln_m - core::f64::consts::LN_2 {
        return Err(Error::Validity(format!(
            "R + ln4/n = {target} outside [ln M - ln 2, ln M) = [{}, {ln_m})",
            ln_m - core::f64::consts::LN_2
        )));
    }
    let f = |d: f64| ln_m - binary_entropy(d) - target;
    let delta = if f(0.5) == 0.0 {
        0.5
    } else {
        find_root(f, &BracketedRoot::new(1e-15, 0.5))?
    };
    Ok(ClosedFormBound {
        name: ClosedFormName::MaryRegion1,
        log_pe: -(point.n as f64) * delta * point.eta,
        validity: "root of ln M - H(delta) = R + ln4/n exists in (0, 1/2]",
        rho: None,
        delta: Some(delta),
        envelope: None,
    })
}

/// M-ary region-2 closed form `Pe < e^{nR} M^{-n} (1 + e^{-eta K})^n` with a
/// caller-supplied decay constant `K`.
///
/// With the Bhattacharyya constant `K = |x - x'|^2 / 8` (1/2 for BPSK) this
/// reproduces the exact `rho = 1` random-coding bound for BPSK. See
/// [`paper_kij`] for the alternative quadratic-form constant, reported side
/// by side because the two scalings disagree.
pub fn mary_region2_closed(point: &ChannelPoint, m: u32, k: f64) -> Result<ClosedFormBound> {
    if m < 2 {
        return Err(Error::Invalid(format!("M must be >= 2, got {m}")));
    }
    if !(k > 0.0) {
        return Err(Error::Invalid(format!("K must be positive, got {k}")));
    }
    let n = point.n as f64;
    let log_pe =
        n * (point.rate - libm::log(m as f64) + libm::log1p(libm::exp(-point.eta * k)));
    Ok(ClosedFormBound {
        name: ClosedFormName::MaryRegion2,
        log_pe,
        validity: "region 2; exact for BPSK with the Bhattacharyya K = 1/2",
        rho: Some(1.0),
        delta: None,
        envelope: None,
    })
}

/// The quadratic-form constant `K_{i,j} = 4(b1^2 + b2^2) - (a1^2 + a2^2)`
/// for M-PSK, reported verbatim for inspection.
///
/// Its scale is inconsistent with the Bhattacharyya exponent
/// `|x_i - x_j|^2 / 8` (for BPSK the cross term gives 4 against 1/2), so
/// bound evaluation never consumes it; use [`bhattacharyya_k_min`] instead.
pub fn paper_kij(m: u32, i: u32, j: u32) -> f64 {
    let ti = 2.0 * core::f64::consts::PI * i as f64 / m as f64;
    let tj = 2.0 * core::f64::consts::PI * j as f64 / m as f64;
    let (ci, si) = (libm::cos(ti), libm::sin(ti));
    let (cj, sj) = (libm::cos(tj), libm::sin(tj));
    let a1 = ci + cj;
    let a2 = si + sj;
    let b1 = 0.5 * (ci * ci + cj * cj);
    let b2 = 0.5 * (si * si + sj * sj);
    4.0 * (b1 * b1 + b2 * b2) - (a1 * a1 + a2 * a2)
}

/// Minimum of [`paper_kij`] over i, j = 1..M-1.
pub fn paper_k_min(m: u32) -> f64 {
    let mut k = f64::INFINITY;
    for i in 1..m {
        for j in 1..m {
            k = k.min(paper_kij(m, i, j));
        }
    }
    k
}

/// Minimum Bhattacharyya decay constant over distinct M-PSK point pairs:
/// `min |x_i - x_j|^2 / 8`, the K that makes the region-2 form tight.
pub fn bhattacharyya_k_min(m: u32) -> f64 {
    // Adjacent points minimize the distance: d^2 = |e^{i 2pi/M} - 1|^2.
    let theta = 2.0 * core::f64::consts::PI / m as f64;
    let d2 = (libm::cos(theta) - 1.0) * (libm::cos(theta) - 1.0)
        + libm::sin(theta) * libm::sin(theta);
    d2 / 8.0
}

/// BPSK region-3 closed forms. The optimizing
/// `rho = 2 e^{-2R-1} eta / pi - 1` must land in [0, 1]; the branch is chosen
/// by `eta` against `pi`. The high-SNR branch also reports the envelope
/// intermediates of its derivation.
pub fn bpsk_region3_closed(point: &ChannelPoint) -> Result<ClosedFormBound> {
    let eta = point.eta;
    let r = point.rate;
    let n = point.n as f64;
    let pi = core::f64::consts::PI;
    let low_snr = eta <= pi;
    let branch = if low_snr { "low-snr (eta <= pi)" } else { "high-snr (eta > pi)" };
    let mut rho = 2.0 * libm::exp(-2.0 * r - 1.0) * eta / pi - 1.0;
    // Snap roundoff at the window endpoints.
    if (-1e-9..0.0).contains(&rho) {
        rho = 0.0;
    } else if (1.0..1.0 + 1e-9).contains(&rho) {
        rho = 1.0;
    }
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::Validity(format!(
            "{branch} branch: derived rho = {rho} outside [0, 1]"
        )));
    }
    if low_snr {
        let log_pe = 0.5 * n * libm::log(eta / (2.0 * pi))
            - n * (eta * libm::exp(-2.0 * r - 1.0) / pi + r);
        Ok(ClosedFormBound {
            name: ClosedFormName::BpskRegion3LowSnr,
            log_pe,
            validity: "eta <= pi and derived rho in [0, 1]",
            rho: Some(rho),
            delta: None,
            envelope: None,
        })
    } else {
        let log_pe = 0.5 * n * libm::log(2.0 * pi * libm::exp(-2.0 * r - 2.0) * eta)
            - n * libm::exp(-2.0 * r - 1.0) * eta / pi;
        let m1 =
            1.0 + libm::sqrt((rho + 1.0) / eta * libm::log(2.0 * eta / (pi * (rho + 1.0))));
        // Single-point window: eta1 = eta2 = eta.
        let m_l1 = 1.0 + libm::sqrt(libm::log(eta / pi) / eta);
        let m_u1 = 1.0 + libm::sqrt(2.0 / eta * libm::log(2.0 * eta / pi));
        let i1_bound = 4.0 * core::f64::consts::SQRT_2 * m_u1 * eta / pi;
        let i2_bound =
            libm::sqrt(eta / (4.0 * pi)) * libm::exp(-eta * (m_l1 - 1.0) * (m_l1 - 1.0) / 2.0);
        Ok(ClosedFormBound {
            name: ClosedFormName::BpskRegion3HighSnr,
            log_pe,
            validity: "eta > pi and derived rho in [0, 1]",
            rho: Some(rho),
            delta: None,
            envelope: Some(HighSnrEnvelope { m1, m_l1, m_u1, i1_bound, i2_bound }),
        })
    }
}

/// Gaussian-input region-1 closed form: solves
/// `R + ln4/n = ln(1 + delta/2) - delta/(delta + 2)` and reports
/// `log Pe = -eta n / (delta + 2)`. At the optimizing `rho`, `delta = eta/rho`
/// depends on the rate only.
pub fn gauss_region1_closed(point: &ChannelPoint) -> Result<ClosedFormBound> {
    let target = point.rate + LN_4 / point.n as f64;
    let g = |d: f64| libm::log1p(0.5 * d) - d / (d + 2.0) - target;
    let delta = if target < 1e-14 {
        0.0
    } else {
        let mut hi = 1.0;
        while g(hi) < 0.0 {
            hi *= 2.0;
            if hi > 1e12 {
                return Err(Error::Validity(format!(
                    "no delta solves the region-1 rate equation for R + ln4/n = {target}"
                )));
            }
        }
        find_root(g, &BracketedRoot::new(0.0, hi))?
    };
    Ok(ClosedFormBound {
        name: ClosedFormName::GaussRegion1,
        log_pe: -point.eta * point.n as f64 / (delta + 2.0),
        validity: "gaussian input, R in region 1 (implied rho = eta/delta >= 1)",
        rho: Some(if delta > 0.0 { point.eta / delta } else { f64::INFINITY }),
        delta: Some(delta),
        envelope: None,
    })
}

/// Gaussian-input region-2 closed form `log Pe = -n [ln(1 + eta/2) - R]`,
/// identical to the master bound in region 2.
pub fn gauss_region2_closed(point: &ChannelPoint) -> ClosedFormBound {
    ClosedFormBound {
        name: ClosedFormName::GaussRegion2,
        log_pe: -(point.n as f64) * (libm::log1p(0.5 * point.eta) - point.rate),
        validity: "gaussian input, R in region 2",
        rho: Some(1.0),
        delta: None,
        envelope: None,
    }
}

/// Gaussian-input region-3 closed form: finds the stationary `rho*` of the
/// random-coding bracket and reports
/// `log Pe = -n eta rho*^2 / ((1 + rho*)^2 (eta/(1+rho*) + 1))`.
pub fn gauss_region3_closed(point: &ChannelPoint) -> Result<ClosedFormBound> {
    let rho = gauss_region3_rho(point.eta, point.rate)?;
    Ok(ClosedFormBound {
        name: ClosedFormName::GaussRegion3,
        log_pe: gauss_region3_log_pe(point, rho),
        validity: "gaussian input, r_crit <= R <= capacity",
        rho: Some(rho),
        delta: None,
        envelope: None,
    })
}

/// Stationary `rho*` of `E_o(rho) - rho R` for Gaussian input:
/// the root of `dE_o/drho = R` in [0, 1].
pub fn gauss_region3_rho(eta: f64, rate: f64) -> Result<f64> {
    let f = |rho: f64| gaussian_e0_derivative(eta, rho) - rate;
    let (f0, f1) = (f(0.0), f(1.0));
    if f0 < 0.0 || f1 > 0.0 {
        return Err(Error::Validity(format!(
            "rate {rate} outside region 3 for eta = {eta}: derivative range [{f1}, {f0}]"
        )));
    }
    if f0 == 0.0 {
        return Ok(0.0);
    }
    if f1 == 0.0 {
        return Ok(1.0);
    }
    find_root(f, &BracketedRoot::new(0.0, 1.0))
}

fn gauss_region3_log_pe(point: &ChannelPoint, rho: f64) -> f64 {
    let p = 1.0 + rho;
    -(point.n as f64) * point.eta * rho * rho / (p * p * (point.eta / p + 1.0))
}

/// Region-3 bound with the linear approximation `rho* ~ a + b eta`
/// substituted into the closed form. The default calibration
/// `(a, b) = (-0.37, 0.23)` is for `R = 1` only.
pub fn gauss_region3_linear(point: &ChannelPoint, a: f64, b: f64) -> Result<ClosedFormBound> {
    let d3 = crate::diversity::delta3(point.eta, a, b)?;
    Ok(ClosedFormBound {
        name: ClosedFormName::GaussRegion3LinearApprox,
        log_pe: -(point.n as f64) * point.eta * d3,
        validity: "gaussian input, region 3; (a, b) calibrated per rate",
        rho: Some(a + b * point.eta),
        delta: None,
        envelope: None,
    })
}

/// Default linear-approximation coefficients, calibrated for `R = 1`.
pub const GAUSS_REGION3_LINEAR_DEFAULT: (f64, f64) = (-0.37, 0.23);

/// Evaluates the Gaussian closed form for whichever region `point.rate`
/// falls in.
pub fn gauss_region_bounds(point: &ChannelPoint) -> Result<ClosedFormBound> {
    let gauss = Constellation::gaussian();
    let report = region_report(&gauss, point)?;
    match report.region_of(point.rate) {
        Region::Region1 => gauss_region1_closed(point),
        Region::Region2 => Ok(gauss_region2_closed(point)),
        Region::Region3 => gauss_region3_closed(point),
        Region::AboveCapacity => Err(Error::Validity(format!(
            "rate {} exceeds capacity {} at eta = {}",
            point.rate, report.capacity, point.eta
        ))),
    }
}

/// One sweep entry: the SNR and either a bound or the per-point failure.
#[derive(Debug, Clone)]
pub struct SweepEntry {
    pub eta: f64,
    pub outcome: core::result::Result<BoundResult, Error>,
}

/// A bound sweep over an SNR grid plus the indices where the region label
/// moved the wrong way (the region index must not increase with SNR at fixed
/// rate).
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub entries: Vec<SweepEntry>,
    pub region_violations: Vec<usize>,
}

/// Evaluates the master bound across a strictly increasing SNR grid.
/// Per-point failures are recorded in place and the sweep continues.
pub fn bound_sweep(c: &Constellation, n: u32, rate: f64, snr_grid: &[f64]) -> Result<SweepResult> {
    validate_snr_grid(snr_grid)?;
    let mut entries = Vec::with_capacity(snr_grid.len());
    for &eta in snr_grid {
        let outcome =
            ChannelPoint::unit_energy(n, rate, eta).and_then(|point| master_bound(c, &point));
        entries.push(SweepEntry { eta, outcome });
    }
    let region_violations = region_monotonicity_violations(&entries);
    Ok(SweepResult { entries, region_violations })
}

/// Validates that an SNR grid is strictly increasing and positive. Empty
/// grids are allowed and sweep to an empty result.
pub fn validate_snr_grid(snr_grid: &[f64]) -> Result<()> {
    for (i, &eta) in snr_grid.iter().enumerate() {
        if !(eta > 0.0) || !eta.is_finite() {
            return Err(Error::Invalid(format!(
                "snr grid entries must be positive, got {eta}"
            )));
        }
        if i > 0 && eta <= snr_grid[i - 1] {
            return Err(Error::Invalid(String::from("snr grid must be strictly increasing")));
        }
    }
    Ok(())
}

/// Indices whose region index increased relative to the previous successful
/// entry (growing SNR must walk regions 3 -> 2 -> 1 at fixed rate).
pub fn region_monotonicity_violations(entries: &[SweepEntry]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut prev: Option<u8> = None;
    for (i, entry) in entries.iter().enumerate() {
        if let Ok(bound) = &entry.outcome {
            let idx = bound.region.index();
            if let Some(p) = prev {
                if idx > p {
                    out.push(i);
                }
            }
            prev = Some(idx);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const GAUSS: Constellation = Constellation::GaussianInput { dim: 1 };

    #[test]
    fn gaussian_region2_master_value() {
        // eta = 2, R = 0.2 sits in region 2 for n = 50.
        let point = ChannelPoint::unit_energy(50, 0.2, 2.0).unwrap();
        let b = master_bound(&GAUSS, &point).unwrap();
        assert_eq!(b.region, Region::Region2);
        let expect = core::f64::consts::LN_2 - 0.2;
        assert!((b.exponent - expect).abs() < 1e-12, "exponent {}", b.exponent);
        assert!((b.log_pe + 50.0 * expect).abs() < 1e-9, "log_pe {}", b.log_pe);
        assert!((b.log_pe + 24.657).abs() < 1e-3);
        assert_eq!(b.rho_opt, 1.0);
        // The region-2 closed form is the same number.
        let cf = gauss_region2_closed(&point);
        assert!((cf.log_pe - b.log_pe).abs() < 1e-12);
    }

    #[test]
    fn region2_and_region3_forms_agree_at_r_crit() {
        let point0 = ChannelPoint::unit_energy(50, 0.2, 2.0).unwrap();
        let rep = region_report(&GAUSS, &point0).unwrap();
        let eps = 1e-9;
        let above = ChannelPoint::unit_energy(50, rep.r_crit + eps, 2.0).unwrap();
        let below = ChannelPoint::unit_energy(50, rep.r_crit - eps, 2.0).unwrap();
        let ba = master_bound(&GAUSS, &above).unwrap();
        let bb = master_bound(&GAUSS, &below).unwrap();
        assert_eq!(ba.region, Region::Region3);
        assert_eq!(bb.region, Region::Region2);
        assert!((ba.log_pe - bb.log_pe).abs() < 1e-6 * 50.0, "{} vs {}", ba.log_pe, bb.log_pe);
        assert!((ba.rho_opt - 1.0).abs() < 1e-4);
    }

    #[test]
    fn region1_and_region2_forms_agree_at_r1_max() {
        let point0 = ChannelPoint::unit_energy(50, 0.2, 2.0).unwrap();
        let rep = region_report(&GAUSS, &point0).unwrap();
        let eps = 1e-9;
        let above = ChannelPoint::unit_energy(50, rep.r1_max + eps, 2.0).unwrap();
        let below = ChannelPoint::unit_energy(50, rep.r1_max - eps, 2.0).unwrap();
        let ba = master_bound(&GAUSS, &above).unwrap();
        let bb = master_bound(&GAUSS, &below).unwrap();
        assert_eq!(ba.region, Region::Region2);
        assert_eq!(bb.region, Region::Region1);
        assert!((ba.log_pe - bb.log_pe).abs() < 1e-6 * 50.0, "{} vs {}", ba.log_pe, bb.log_pe);
    }

    #[test]
    fn exponent_nonnegative_below_capacity_and_zero_above() {
        let point = ChannelPoint::unit_energy(50, 1.2, 2.0).unwrap();
        let b = master_bound(&GAUSS, &point).unwrap();
        assert_eq!(b.region, Region::AboveCapacity);
        assert_eq!(b.exponent, 0.0);
        assert_eq!(b.pe_capped, 1.0);

        for rate in [0.05, 0.3, 0.8] {
            let point = ChannelPoint::unit_energy(50, rate, 2.0).unwrap();
            let b = master_bound(&GAUSS, &point).unwrap();
            assert!(b.exponent >= 0.0, "rate {rate}: exponent {}", b.exponent);
        }
    }

    #[test]
    fn mary_region1_bpsk_values() {
        // Huge n, R -> 0: delta -> 1/2 and log_pe -> -n eta / 2.
        let point = ChannelPoint::unit_energy(2_000_000_000, 1e-12, 2.0).unwrap();
        let cf = mary_region1_closed(&point, 2).unwrap();
        let delta = cf.delta.unwrap();
        assert!((delta - 0.5).abs() < 1e-4, "delta {delta}");

        // n = 255, R = 0.1: independent 60-step bisection oracle.
        let point = ChannelPoint::unit_energy(255, 0.1, 2.0).unwrap();
        let cf = mary_region1_closed(&point, 2).unwrap();
        let target = 0.1 + LN_4 / 255.0;
        let f = |d: f64| core::f64::consts::LN_2 - binary_entropy(d) - target;
        let (mut lo, mut hi) = (1e-9, 0.5);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if f(lo) * f(mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let oracle = 0.5 * (lo + hi);
        assert!(
            (cf.delta.unwrap() - oracle).abs() < 1e-9,
            "{} vs {oracle}",
            cf.delta.unwrap()
        );
        assert!((cf.log_pe + 255.0 * oracle * 2.0).abs() < 1e-6);
    }

    #[test]
    fn mary_region1_qpsk_delta_tends_to_half() {
        // M = 4, R = ln 2: ln 4 - H(delta) = ln 2 + ln4/n, so delta -> 1/2
        // as n grows.
        let point =
            ChannelPoint::unit_energy(1_000_000_000, core::f64::consts::LN_2, 2.0).unwrap();
        let cf = mary_region1_closed(&point, 4).unwrap();
        assert!((cf.delta.unwrap() - 0.5).abs() < 1e-4, "delta {}", cf.delta.unwrap());
    }

    #[test]
    fn mary_region1_out_of_window() {
        // R too large: no root.
        let point = ChannelPoint::unit_energy(255, 0.7, 2.0).unwrap();
        assert!(matches!(mary_region1_closed(&point, 2), Err(Error::Validity(_))));
    }

    #[test]
    fn mary_region2_value_and_master_equality_for_bpsk() {
        let point = ChannelPoint::unit_energy(50, 0.3, 2.0).unwrap();
        let cf = mary_region2_closed(&point, 2, 0.5).unwrap();
        let expect =
            50.0 * (0.3 - core::f64::consts::LN_2 + libm::log1p(libm::exp(-1.0)));
        assert!((cf.log_pe - expect).abs() < 1e-9, "{} vs {expect}", cf.log_pe);

        // With K = 1/2 the form equals n (R - E_o(1)) computed by quadrature.
        let c = Constellation::psk(2).unwrap();
        let e01 = e0(&c, point.sigma2, 1.0).unwrap();
        let master_region2 = -(point.n as f64) * (e01 - point.rate);
        assert!(
            (cf.log_pe - master_region2).abs() < 1e-9,
            "{} vs {master_region2}",
            cf.log_pe
        );
    }

    #[test]
    fn mary_region2_limits() {
        let n = 50.0;
        let m = 2u32;
        let r = 0.3;
        // eta -> infinity: log_pe -> n (R - ln M).
        let hi = ChannelPoint::unit_energy(50, r, 1e9).unwrap();
        let cf = mary_region2_closed(&hi, m, 0.5).unwrap();
        assert!((cf.log_pe - n * (r - core::f64::consts::LN_2)).abs() < 1e-9);
        // eta -> 0: log_pe -> n (R - ln M + ln 2) = n R.
        let lo = ChannelPoint::unit_energy(50, r, 1e-9).unwrap();
        let cf = mary_region2_closed(&lo, m, 0.5).unwrap();
        assert!((cf.log_pe - n * r).abs() < 1e-6, "{}", cf.log_pe);
    }

    #[test]
    fn paper_kij_bpsk_values() {
        // Cross term (0, 1) evaluates to 4; the (1, 1) term to 0. Both are
        // reported verbatim; neither feeds the master bound.
        assert!((paper_kij(2, 0, 1) - 4.0).abs() < 1e-12);
        assert!(paper_kij(2, 1, 1).abs() < 1e-12);
        assert!(paper_k_min(2).abs() < 1e-12);
        assert!((bhattacharyya_k_min(2) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn bpsk_region3_rho_window_endpoints() {
        let pi = core::f64::consts::PI;
        let r = 0.2;
        // eta = pi e^{2R+1}/2: rho = 0.
        let eta0 = 0.5 * pi * libm::exp(2.0 * r + 1.0);
        let cf = bpsk_region3_closed(&ChannelPoint::unit_energy(50, r, eta0).unwrap()).unwrap();
        assert!(cf.rho.unwrap().abs() < 1e-12, "rho {}", cf.rho.unwrap());
        // eta = pi e^{2R+1}: rho = 1.
        let eta1 = pi * libm::exp(2.0 * r + 1.0);
        let cf = bpsk_region3_closed(&ChannelPoint::unit_energy(50, r, eta1).unwrap()).unwrap();
        assert!((cf.rho.unwrap() - 1.0).abs() < 1e-12, "rho {}", cf.rho.unwrap());
    }

    #[test]
    fn bpsk_region3_low_branch_never_admits_positive_rates() {
        // For R > 0 the derived rho is negative whenever eta <= pi, so the
        // low-SNR branch reports a validity error naming itself.
        let point = ChannelPoint::unit_energy(50, 0.2, 2.0).unwrap();
        match bpsk_region3_closed(&point) {
            Err(Error::Validity(msg)) => assert!(msg.contains("low-snr"), "{msg}"),
            other => panic!("expected validity error, got {other:?}"),
        }
    }

    #[test]
    fn bpsk_region3_high_branch_dominates_master() {
        // Pick eta inside the validity window: derived rho = 0.5 at
        // eta = (pi/2)(1 + 0.5) e^{2R+1}, which exceeds pi.
        let r = 0.2;
        let eta = 0.5 * core::f64::consts::PI * 1.5 * libm::exp(2.0 * r + 1.0);
        assert!(eta > core::f64::consts::PI);
        let point = ChannelPoint::unit_energy(50, r, eta).unwrap();
        let cf = bpsk_region3_closed(&point).unwrap();
        assert_eq!(cf.name, ClosedFormName::BpskRegion3HighSnr);
        let env = cf.envelope.unwrap();
        assert!(env.m_l1 >= 1.0 && env.m_u1 >= env.m_l1 && env.m1 >= 1.0);
        let c = Constellation::psk(2).unwrap();
        let mb = master_bound(&c, &point).unwrap();
        assert!(
            cf.log_pe >= mb.log_pe - 1e-7,
            "closed {} vs master {}",
            cf.log_pe,
            mb.log_pe
        );
    }

    #[test]
    fn gauss_region1_closed_form() {
        // R -> 0, n -> infinity: delta -> 0 and log_pe -> -eta n / 2. At
        // n = 1e9 the ln4/n offset still drives delta to about 1e-4.
        let point = ChannelPoint::unit_energy(1_000_000_000, 1e-15, 4.0).unwrap();
        let cf = gauss_region1_closed(&point).unwrap();
        let delta = cf.delta.unwrap();
        assert!(delta < 1e-3, "delta {delta}");
        assert!((cf.log_pe - (-4.0e9 / (delta + 2.0))).abs() < 1e-3);
        let rel = (cf.log_pe - (-4.0 * 1e9 / 2.0)).abs() / 2e9;
        assert!(rel < 1e-4, "rel {rel}");

        // Independent 60-step bisection oracle at an ordinary point.
        let point = ChannelPoint::unit_energy(50, 0.1, 4.0).unwrap();
        let cf = gauss_region1_closed(&point).unwrap();
        let target = 0.1 + LN_4 / 50.0;
        let g = |d: f64| libm::log1p(0.5 * d) - d / (d + 2.0) - target;
        let (mut lo, mut hi) = (0.0, 8.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if g(lo) * g(mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let oracle = 0.5 * (lo + hi);
        assert!((cf.delta.unwrap() - oracle).abs() < 1e-9, "{} vs {oracle}", cf.delta.unwrap());
    }

    #[test]
    fn gauss_region3_matches_master() {
        let point = ChannelPoint::unit_energy(50, 0.8, 2.0).unwrap();
        let rep = region_report(&GAUSS, &point).unwrap();
        assert_eq!(rep.region_of(point.rate), Region::Region3);
        let cf = gauss_region3_closed(&point).unwrap();
        let mb = master_bound(&GAUSS, &point).unwrap();
        assert!((cf.log_pe - mb.log_pe).abs() < 1e-7, "{} vs {}", cf.log_pe, mb.log_pe);
        assert!((cf.rho.unwrap() - mb.rho_opt).abs() < 1e-6);
    }

    #[test]
    fn gauss_dispatch_follows_region() {
        for (rate, expect) in [
            (0.10, ClosedFormName::GaussRegion1),
            (0.30, ClosedFormName::GaussRegion2),
            (0.80, ClosedFormName::GaussRegion3),
        ] {
            let point = ChannelPoint::unit_energy(50, rate, 2.0).unwrap();
            let cf = gauss_region_bounds(&point).unwrap();
            assert_eq!(cf.name, expect, "rate {rate}");
        }
        let above = ChannelPoint::unit_energy(50, 1.2, 2.0).unwrap();
        assert!(matches!(gauss_region_bounds(&above), Err(Error::Validity(_))));
    }

    #[test]
    fn sweep_walks_regions_downward() {
        let c = Constellation::psk(2).unwrap();
        let grid: Vec<f64> =
            (0..24).map(|k| libm::pow(10.0, (5.0 + 0.25 * k as f64) / 10.0)).collect();
        let sweep = bound_sweep(&c, 255, 0.968 * core::f64::consts::LN_2, &grid).unwrap();
        assert_eq!(sweep.entries.len(), grid.len());
        assert!(sweep.region_violations.is_empty(), "violations {:?}", sweep.region_violations);
        assert!(sweep.entries.iter().all(|e| e.outcome.is_ok()));
    }

    #[test]
    fn sweep_rejects_bad_grid_and_accepts_empty() {
        let c = Constellation::psk(2).unwrap();
        assert!(bound_sweep(&c, 50, 0.3, &[1.0, 1.0]).is_err());
        assert!(bound_sweep(&c, 50, 0.3, &[2.0, 1.0]).is_err());
        assert!(bound_sweep(&c, 50, 0.3, &[-1.0]).is_err());
        let empty = bound_sweep(&c, 50, 0.3, &[]).unwrap();
        assert!(empty.entries.is_empty());
        assert!(empty.region_violations.is_empty());
    }
}
