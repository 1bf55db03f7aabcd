//! Shared numerical kernels: quadrature of powered Gaussian mixtures, bracketed
//! root finding and concave maximization on an interval.
//!
//! The central object is [`MixtureQuadrature`], a frozen linear rule for
//! integrals of the form
//!
//! ```text
//!   I(rho) = (2 pi s2)^(-d/2) * Int [ sum_x q(x) exp(-|y-x|^2 / (2 s2 (1+rho))) ]^(1+rho) dy
//! ```
//!
//! which is `Int [ sum_x q(x) p(y|x)^(1/(1+rho)) ]^(1+rho) dy` for an isotropic
//! Gaussian channel density with per-dimension variance `s2`. The default rule
//! is tensor Gauss-Hermite re-centered at the constellation centroid and scaled
//! by `sqrt(s2 (1+rho))`; a node-doubling self-check switches to a refined
//! composite rule on a truncated interval when Gauss-Hermite is inadequate
//! (wide constellations relative to the noise scale).

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Quadrature scheme selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureScheme {
    /// Tensor-product Gauss-Hermite, recentered and rescaled to the integrand.
    GaussHermiteTensor,
    /// Composite Simpson refinement on a truncated interval per dimension.
    AdaptiveInterval,
}

/// Parameters controlling mixture-power quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub scheme: QuadratureScheme,
    /// Nodes per dimension for the Gauss-Hermite rule (the self-check doubles this).
    pub nodes_per_dim: usize,
    /// Relative tolerance for the doubling self-check and interval refinement.
    pub rel_tol: f64,
    /// Truncation radius of the fallback interval, in noise standard deviations.
    pub domain_sigma_radius: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            scheme: QuadratureScheme::GaussHermiteTensor,
            nodes_per_dim: 96,
            rel_tol: 1e-9,
            domain_sigma_radius: 8.0,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.nodes_per_dim < 16 {
            return Err(Error::Invalid(alloc::format!(
                "nodes_per_dim must be >= 16, got {}",
                self.nodes_per_dim
            )));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-4) {
            return Err(Error::Invalid(alloc::format!(
                "rel_tol must lie in (0, 1e-4], got {}",
                self.rel_tol
            )));
        }
        if !(self.domain_sigma_radius >= 6.0) {
            return Err(Error::Invalid(alloc::format!(
                "domain_sigma_radius must be >= 6, got {}",
                self.domain_sigma_radius
            )));
        }
        Ok(())
    }
}

/// Gauss-Hermite rule for weight exp(-t^2): physicists' nodes and weights.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussHermite {
    /// Computes the `n`-point rule by Newton iteration on the orthonormal
    /// Hermite recurrence, seeding each root from its neighbours.
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Invalid(alloc::format!(
                "Gauss-Hermite order must be >= 2, got {n}"
            )));
        }
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        let nf = n as f64;
        let mut z = 0.0;
        for i in 0..m {
            // Initial guesses follow the classical recipe: asymptotics for the
            // outermost root, then extrapolation from previously found roots.
            z = match i {
                0 => {
                    let c = 2.0 * nf + 1.0;
                    libm::sqrt(c) - 1.85575 * libm::pow(c, -1.0 / 6.0)
                }
                1 => z - 1.14 * libm::pow(nf, 0.426) / z,
                2 => 1.86 * z - 0.86 * nodes[0],
                3 => 1.91 * z - 0.91 * nodes[1],
                _ => 2.0 * z - nodes[i - 2],
            };
            let mut pp = 0.0;
            let mut converged = false;
            for _ in 0..200 {
                // Orthonormal recurrence: p1 ends as H~_n(z), p2 as H~_{n-1}(z).
                let mut p1 = 0.751_125_544_464_942_9_f64; // pi^(-1/4)
                let mut p2 = 0.0;
                for j in 1..=n {
                    let p3 = p2;
                    p2 = p1;
                    let jf = j as f64;
                    p1 = z * libm::sqrt(2.0 / jf) * p2 - libm::sqrt((jf - 1.0) / jf) * p3;
                }
                pp = libm::sqrt(2.0 * nf) * p2;
                let z1 = z;
                z = z1 - p1 / pp;
                if (z - z1).abs() <= 1e-15 * (1.0 + z.abs()) {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return Err(Error::Invalid(alloc::format!(
                    "Gauss-Hermite root iteration failed to converge for order {n}"
                )));
            }
            nodes[i] = z;
            nodes[n - 1 - i] = -z;
            weights[i] = 2.0 / (pp * pp);
            weights[n - 1 - i] = weights[i];
        }
        if n % 2 == 1 {
            nodes[m - 1] = 0.0;
        }
        Ok(GaussHermite { nodes, weights })
    }
}

/// One-dimensional linear rule: positions and total weights.
#[derive(Debug, Clone)]
struct AxisRule {
    positions: Vec<f64>,
    weights: Vec<f64>,
}

impl AxisRule {
    /// Gauss-Hermite rule recentered at `center` with Gaussian scale `tau`,
    /// with the weight function divided back out so that plain sums
    /// approximate an unweighted integral.
    fn gauss_hermite(gh: &GaussHermite, center: f64, tau: f64) -> AxisRule {
        let scale = core::f64::consts::SQRT_2 * tau;
        let positions: Vec<f64> = gh.nodes.iter().map(|&t| center + scale * t).collect();
        let weights: Vec<f64> = gh
            .nodes
            .iter()
            .zip(&gh.weights)
            .map(|(&t, &w)| scale * w * libm::exp(t * t))
            .collect();
        AxisRule { positions, weights }
    }

    /// Composite Simpson rule with `segments` (even) subintervals on [lo, hi].
    fn simpson(lo: f64, hi: f64, segments: usize) -> AxisRule {
        debug_assert!(segments >= 2 && segments % 2 == 0);
        let n = segments + 1;
        let h = (hi - lo) / segments as f64;
        let mut positions = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for i in 0..n {
            positions.push(lo + h * i as f64);
            let w = if i == 0 || i == segments {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            weights.push(w * h / 3.0);
        }
        AxisRule { positions, weights }
    }
}

/// A frozen quadrature rule for powered-Gaussian-mixture integrals over a
/// fixed point geometry, noise variance and `rho`.
///
/// Freezing the rule matters for the callers that difference or optimize over
/// the integral (finite-difference derivatives, distribution optimization):
/// every evaluation sees the same nodes, so the discretized functional is
/// smooth in its parameters.
#[derive(Debug, Clone)]
pub struct MixtureQuadrature {
    dim: usize,
    rho: f64,
    inv_two_tau2: f64,
    norm: f64,
    /// Flattened tensor nodes; the second coordinate is 0 for 1-D rules.
    nodes: Vec<[f64; 2]>,
    weights: Vec<f64>,
}

impl MixtureQuadrature {
    /// Builds a rule for the given geometry, running the doubling self-check
    /// (and the adaptive-interval fallback) against the reference pmf `probs`.
    pub fn build(
        points: &[[f64; 2]],
        dim: usize,
        probs: &[f64],
        sigma2: f64,
        rho: f64,
        spec: &QuadratureSpec,
    ) -> Result<Self> {
        spec.validate()?;
        validate_geometry(points, dim, probs, sigma2, rho)?;
        let tau = libm::sqrt(sigma2 * (1.0 + rho));

        if spec.scheme == QuadratureScheme::GaussHermiteTensor {
            let centroid = weighted_centroid(points, probs, dim);
            let coarse = Self::from_gh(dim, sigma2, rho, tau, centroid, spec.nodes_per_dim)?;
            let fine = Self::from_gh(dim, sigma2, rho, tau, centroid, 2 * spec.nodes_per_dim)?;
            let i_coarse = coarse.value(points, probs);
            let i_fine = fine.value(points, probs);
            if rel_diff(i_fine, i_coarse) <= spec.rel_tol {
                return Ok(fine);
            }
            // Gauss-Hermite failed its self-check: the constellation is wide
            // relative to the noise scale. Fall through to the interval rule.
        }
        Self::adaptive_interval(points, dim, probs, sigma2, rho, tau, spec)
    }

    fn from_gh(
        dim: usize,
        sigma2: f64,
        rho: f64,
        tau: f64,
        centroid: [f64; 2],
        nodes_per_dim: usize,
    ) -> Result<Self> {
        let gh = GaussHermite::new(nodes_per_dim)?;
        let axes: Vec<AxisRule> = (0..dim)
            .map(|k| AxisRule::gauss_hermite(&gh, centroid[k], tau))
            .collect();
        Ok(Self::from_axes(&axes, dim, sigma2, rho, tau))
    }

    fn adaptive_interval(
        points: &[[f64; 2]],
        dim: usize,
        probs: &[f64],
        sigma2: f64,
        rho: f64,
        tau: f64,
        spec: &QuadratureSpec,
    ) -> Result<Self> {
        let margin = spec.domain_sigma_radius * tau;
        let mut bounds = [[0.0_f64; 2]; 2];
        for k in 0..dim {
            let lo = points.iter().map(|p| p[k]).fold(f64::INFINITY, f64::min);
            let hi = points.iter().map(|p| p[k]).fold(f64::NEG_INFINITY, f64::max);
            bounds[k] = [lo - margin, hi + margin];
        }
        let max_segments = if dim == 1 { 1 << 18 } else { 1 << 11 };
        let mut segments = 64usize;
        let mut prev = Self::from_simpson(&bounds, dim, sigma2, rho, tau, segments).value(points, probs);
        loop {
            segments *= 2;
            let rule = Self::from_simpson(&bounds, dim, sigma2, rho, tau, segments);
            let cur = rule.value(points, probs);
            if rel_diff(cur, prev) <= spec.rel_tol {
                return Ok(rule);
            }
            if segments >= max_segments {
                return Err(Error::QuadratureStall { last: cur, previous: prev });
            }
            prev = cur;
        }
    }

    fn from_simpson(
        bounds: &[[f64; 2]; 2],
        dim: usize,
        sigma2: f64,
        rho: f64,
        tau: f64,
        segments: usize,
    ) -> Self {
        let axes: Vec<AxisRule> = (0..dim)
            .map(|k| AxisRule::simpson(bounds[k][0], bounds[k][1], segments))
            .collect();
        Self::from_axes(&axes, dim, sigma2, rho, tau)
    }

    fn from_axes(axes: &[AxisRule], dim: usize, sigma2: f64, rho: f64, tau: f64) -> Self {
        let norm = libm::pow(2.0 * core::f64::consts::PI * sigma2, -(dim as f64) / 2.0);
        let (nodes, weights) = match dim {
            1 => {
                let a = &axes[0];
                (
                    a.positions.iter().map(|&x| [x, 0.0]).collect::<Vec<_>>(),
                    a.weights.clone(),
                )
            }
            _ => {
                let (a, b) = (&axes[0], &axes[1]);
                let mut nodes = Vec::with_capacity(a.positions.len() * b.positions.len());
                let mut weights = Vec::with_capacity(nodes.capacity());
                for (i, &x) in a.positions.iter().enumerate() {
                    for (j, &y) in b.positions.iter().enumerate() {
                        nodes.push([x, y]);
                        weights.push(a.weights[i] * b.weights[j]);
                    }
                }
                (nodes, weights)
            }
        };
        MixtureQuadrature {
            dim,
            rho,
            inv_two_tau2: 1.0 / (2.0 * tau * tau),
            norm,
            nodes,
            weights,
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Kernel value exp(-|y - x|^2 / (2 tau^2)) for node `y` and point `x`.
    #[inline]
    fn kernel(&self, y: [f64; 2], x: [f64; 2]) -> f64 {
        let dx = y[0] - x[0];
        let mut r2 = dx * dx;
        if self.dim == 2 {
            let dy = y[1] - x[1];
            r2 += dy * dy;
        }
        libm::exp(-r2 * self.inv_two_tau2)
    }

    /// The kernel matrix in node-major order (`node * m + j`), for callers
    /// that re-evaluate the functional many times over the same geometry.
    pub fn kernel_matrix(&self, points: &[[f64; 2]]) -> Vec<f64> {
        let m = points.len();
        let mut g = Vec::with_capacity(self.nodes.len() * m);
        for &y in &self.nodes {
            for &x in points {
                g.push(self.kernel(y, x));
            }
        }
        g
    }

    /// Integral value for the pmf `probs` over `points`.
    pub fn value(&self, points: &[[f64; 2]], probs: &[f64]) -> f64 {
        let one_plus_rho = 1.0 + self.rho;
        let mut acc = 0.0;
        for (&y, &w) in self.nodes.iter().zip(&self.weights) {
            let mut s = 0.0;
            for (&x, &q) in points.iter().zip(probs) {
                s += q * self.kernel(y, x);
            }
            if s > 0.0 {
                acc += w * libm::pow(s, one_plus_rho);
            }
        }
        self.norm * acc
    }

    /// Integral value from a precomputed kernel matrix.
    pub fn value_from_kernel(&self, kernel: &[f64], probs: &[f64]) -> f64 {
        let m = probs.len();
        let one_plus_rho = 1.0 + self.rho;
        let mut acc = 0.0;
        for (node, &w) in self.weights.iter().enumerate() {
            let row = &kernel[node * m..(node + 1) * m];
            let s: f64 = row.iter().zip(probs).map(|(&g, &q)| g * q).sum();
            if s > 0.0 {
                acc += w * libm::pow(s, one_plus_rho);
            }
        }
        self.norm * acc
    }

    /// Mixture values `S(y_k) = sum_j coeffs[j] * kernel[k][j]` at every node.
    /// Coefficients may be signed (search directions as well as pmfs).
    pub fn mixture_at_nodes(&self, kernel: &[f64], coeffs: &[f64]) -> Vec<f64> {
        let m = coeffs.len();
        self.weights
            .iter()
            .enumerate()
            .map(|(node, _)| {
                kernel[node * m..(node + 1) * m]
                    .iter()
                    .zip(coeffs)
                    .map(|(&g, &c)| g * c)
                    .sum()
            })
            .collect()
    }

    /// Integral value at `base + gamma * dir`, where `base` and `dir` are
    /// node-space mixtures from [`Self::mixture_at_nodes`]. Tiny negative
    /// mixture values from roundoff at segment endpoints clamp to zero.
    pub fn segment_value(&self, base: &[f64], dir: &[f64], gamma: f64) -> f64 {
        let one_plus_rho = 1.0 + self.rho;
        let mut acc = 0.0;
        for ((&b, &d), &w) in base.iter().zip(dir).zip(&self.weights) {
            let s = b + gamma * d;
            if s > 0.0 {
                acc += w * libm::pow(s, one_plus_rho);
            }
        }
        self.norm * acc
    }

    /// Integral value of a node-space mixture `s`.
    pub fn mixture_value(&self, s: &[f64]) -> f64 {
        let one_plus_rho = 1.0 + self.rho;
        let mut acc = 0.0;
        for (&si, &w) in s.iter().zip(&self.weights) {
            if si > 0.0 {
                acc += w * libm::pow(si, one_plus_rho);
            }
        }
        self.norm * acc
    }

    /// Gradient of the integral with respect to mixing weights over the given
    /// atom node-mixtures: `g_a = norm (1+rho) sum_k w_k s_k^rho Z_a[k]`.
    pub fn mixture_weight_gradient(&self, s: &[f64], atom_nodes: &[&[f64]], out: &mut [f64]) {
        let one_plus_rho = 1.0 + self.rho;
        out.fill(0.0);
        for (k, (&sk, &w)) in s.iter().zip(&self.weights).enumerate() {
            if sk <= 0.0 {
                continue;
            }
            let coef = w * libm::pow(sk, self.rho);
            for (o, z) in out.iter_mut().zip(atom_nodes) {
                *o += coef * z[k];
            }
        }
        for o in out.iter_mut() {
            *o *= self.norm * one_plus_rho;
        }
    }

    /// Hessian of the integral with respect to mixing weights, row-major over
    /// the given atoms: `H_ab = norm (1+rho) rho sum_k w_k s_k^(rho-1) Z_a Z_b`.
    pub fn mixture_weight_hessian(&self, s: &[f64], atom_nodes: &[&[f64]]) -> Vec<f64> {
        let k = atom_nodes.len();
        let mut h = vec![0.0; k * k];
        if self.rho == 0.0 {
            return h;
        }
        for (node, (&sk, &w)) in s.iter().zip(&self.weights).enumerate() {
            if sk <= 0.0 {
                continue;
            }
            let coef = w * libm::pow(sk, self.rho - 1.0);
            for a in 0..k {
                let za = atom_nodes[a][node];
                if za == 0.0 {
                    continue;
                }
                for b in a..k {
                    h[a * k + b] += coef * za * atom_nodes[b][node];
                }
            }
        }
        let scale = self.norm * (1.0 + self.rho) * self.rho;
        for a in 0..k {
            for b in a..k {
                h[a * k + b] *= scale;
                h[b * k + a] = h[a * k + b];
            }
        }
        h
    }

    /// Integral value and its gradient with respect to the pmf, from a
    /// precomputed kernel matrix. `grad` must have length `probs.len()`.
    pub fn value_and_gradient_from_kernel(
        &self,
        kernel: &[f64],
        probs: &[f64],
        grad: &mut [f64],
    ) -> f64 {
        let m = probs.len();
        let one_plus_rho = 1.0 + self.rho;
        grad.fill(0.0);
        let mut acc = 0.0;
        for (node, &w) in self.weights.iter().enumerate() {
            let row = &kernel[node * m..(node + 1) * m];
            let s: f64 = row.iter().zip(probs).map(|(&g, &q)| g * q).sum();
            if s <= 0.0 {
                continue;
            }
            acc += w * libm::pow(s, one_plus_rho);
            let coef = w * one_plus_rho * libm::pow(s, self.rho);
            for (g_j, &g) in grad.iter_mut().zip(row) {
                *g_j += coef * g;
            }
        }
        for g_j in grad.iter_mut() {
            *g_j *= self.norm;
        }
        self.norm * acc
    }
}

fn weighted_centroid(points: &[[f64; 2]], probs: &[f64], dim: usize) -> [f64; 2] {
    let mut c = [0.0; 2];
    for (&x, &q) in points.iter().zip(probs) {
        c[0] += q * x[0];
        if dim == 2 {
            c[1] += q * x[1];
        }
    }
    c
}

fn validate_geometry(
    points: &[[f64; 2]],
    dim: usize,
    probs: &[f64],
    sigma2: f64,
    rho: f64,
) -> Result<()> {
    if !(dim == 1 || dim == 2) {
        return Err(Error::Invalid(alloc::format!("dimension must be 1 or 2, got {dim}")));
    }
    if points.is_empty() {
        return Err(Error::Invalid("point set must be non-empty".into()));
    }
    if !(sigma2 > 0.0) {
        return Err(Error::Invalid(alloc::format!("sigma2 must be positive, got {sigma2}")));
    }
    if !(rho >= 0.0) || !rho.is_finite() {
        return Err(Error::Invalid(alloc::format!("rho must be finite and >= 0, got {rho}")));
    }
    validate_pmf(probs, points.len())
}

/// Checks that `probs` is a pmf of the expected length (non-negative entries
/// summing to 1 within 1e-12).
pub fn validate_pmf(probs: &[f64], expected_len: usize) -> Result<()> {
    if probs.len() != expected_len {
        return Err(Error::Invalid(alloc::format!(
            "pmf length {} does not match point count {expected_len}",
            probs.len()
        )));
    }
    let mut sum = 0.0;
    for &q in probs {
        if !(q >= 0.0) {
            return Err(Error::Invalid(alloc::format!("pmf entries must be >= 0, got {q}")));
        }
        sum += q;
    }
    if (sum - 1.0).abs() > 1e-12 {
        return Err(Error::Invalid(alloc::format!("pmf must sum to 1 within 1e-12, sums to {sum}")));
    }
    Ok(())
}

fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

/// Integrates `Int [ sum_x q(x) p(y|x)^(1/(1+rho)) ]^(1+rho) dy` for the
/// isotropic Gaussian channel density with per-dimension variance `sigma2`.
pub fn integrate_gaussian_mixture_power(
    points: &[[f64; 2]],
    dim: usize,
    probs: &[f64],
    sigma2: f64,
    rho: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let rule = MixtureQuadrature::build(points, dim, probs, sigma2, rho, spec)?;
    Ok(rule.value(points, probs))
}

/// A bracket for scalar root finding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketedRoot {
    pub lo: f64,
    pub hi: f64,
    /// Absolute tolerance on the bracket width.
    pub tol: f64,
}

impl BracketedRoot {
    pub fn new(lo: f64, hi: f64) -> Self {
        BracketedRoot { lo, hi, tol: 1e-10 }
    }

    pub fn with_tol(lo: f64, hi: f64, tol: f64) -> Self {
        BracketedRoot { lo, hi, tol }
    }

    fn validate(&self) -> Result<()> {
        if !(self.hi > self.lo) {
            return Err(Error::Invalid(alloc::format!(
                "bracket requires hi > lo, got [{}, {}]",
                self.lo,
                self.hi
            )));
        }
        if !(self.tol > 0.0) {
            return Err(Error::Invalid(alloc::format!("tolerance must be positive, got {}", self.tol)));
        }
        Ok(())
    }
}

/// Finds a root of `f` inside `bracket` by Brent's method.
///
/// Inverse quadratic interpolation and secant steps are guarded by bisection,
/// so convergence is guaranteed for any continuous `f` with a sign change.
pub fn find_root<F: FnMut(f64) -> f64>(mut f: F, bracket: &BracketedRoot) -> Result<f64> {
    bracket.validate()?;
    let (mut a, mut b) = (bracket.lo, bracket.hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoSignChange { lo: a, hi: b, f_lo: fa, f_hi: fb });
    }
    let (mut c, mut fc) = (a, fa);
    let (mut d, mut e) = (b - a, b - a);
    for _ in 0..200 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * bracket.tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let q0 = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * q0 * (q0 - r) - (b - a) * (r - 1.0));
                q = (q0 - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b);
    }
    Ok(b)
}

/// Maximizes a unimodal (concave) function on `[lo, hi]` by golden-section
/// search; returns `(argmax, f(argmax))` with the argmax located within `tol`.
pub fn maximize_concave<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<(f64, f64)> {
    if !(hi > lo) {
        return Err(Error::Invalid(alloc::format!(
            "maximize_concave requires lo < hi, got [{lo}, {hi}]"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::Invalid(alloc::format!("tolerance must be positive, got {tol}")));
    }
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    let x = 0.5 * (a + b);
    Ok((x, f(x)))
}
