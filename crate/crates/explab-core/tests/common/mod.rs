//! Shared helpers and independent oracles for the integration suites.
//!
//! Everything here is deliberately decoupled from the library's own numeric
//! paths: plain Simpson grids, hand-rolled bisection and least squares.

#![allow(dead_code)]

use explab_core::Constellation;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn lin_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

pub fn db_grid(lo_db: f64, hi_db: f64, step_db: f64) -> Vec<f64> {
    let count = ((hi_db - lo_db) / step_db).round() as usize + 1;
    (0..count).map(|k| 10f64.powf((lo_db + step_db * k as f64) / 10.0)).collect()
}

pub fn total_variation(a: &[f64], b: &[f64]) -> f64 {
    0.5 * a.iter().zip(b).map(|(&x, &y)| (x - y).abs()).sum::<f64>()
}

/// Random discrete constellation: `m` points in [-1.2, 1.2]^2 with a generic
/// pmf (entries bounded away from zero, exact unit sum).
pub fn random_constellation(rng: &mut ChaCha8Rng, m: usize) -> Constellation {
    let coords: Vec<[f64; 2]> = (0..m)
        .map(|_| [rng.random_range(-1.2..1.2), rng.random_range(-1.2..1.2)])
        .collect();
    let mut probs: Vec<f64> = (0..m).map(|_| rng.random_range(0.05..1.0)).collect();
    let sum: f64 = probs.iter().sum();
    for p in probs.iter_mut() {
        *p /= sum;
    }
    let head: f64 = probs[..m - 1].iter().sum();
    probs[m - 1] = 1.0 - head;
    Constellation::points_2d(&coords, &probs).unwrap()
}

/// 60-step bisection, the independent root oracle.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if f(lo) * f(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Ordinary least squares fit y = intercept + slope * x.
pub fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(&x, &y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|&x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    (my - slope * mx, slope)
}

/// Mutual information I(X;Y) in nats for a discrete constellation over the
/// isotropic Gaussian channel, by plain tensor Simpson quadrature. Fully
/// independent of the library's quadrature machinery.
pub fn mutual_information_oracle(c: &Constellation, sigma2: f64) -> f64 {
    let d = c.discrete().unwrap();
    let dim = if d.coords.iter().all(|p| p[1] == 0.0) { 1 } else { d.dim };
    let sigma = sigma2.sqrt();
    let reach = 10.0 * sigma;
    let lo: Vec<f64> = (0..dim)
        .map(|k| d.coords.iter().map(|p| p[k]).fold(f64::INFINITY, f64::min) - reach)
        .collect();
    let hi: Vec<f64> = (0..dim)
        .map(|k| d.coords.iter().map(|p| p[k]).fold(f64::NEG_INFINITY, f64::max) + reach)
        .collect();
    let segments = if dim == 1 { 8000 } else { 600 };

    let weight = |i: usize| -> f64 {
        if i == 0 || i == segments {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        }
    };
    let norm = (2.0 * std::f64::consts::PI * sigma2).powf(-(dim as f64) / 2.0);
    let density_exponent = |y: &[f64; 2], x: &[f64; 2]| -> f64 {
        let mut r2 = (y[0] - x[0]) * (y[0] - x[0]);
        if dim == 2 {
            r2 += (y[1] - x[1]) * (y[1] - x[1]);
        }
        -r2 / (2.0 * sigma2)
    };

    // Integrand: sum_x q p(y|x) ln(p(y|x) / p_Y(y)).
    let contribution = |y: [f64; 2]| -> f64 {
        let mut p_y = 0.0;
        let mut terms = Vec::with_capacity(d.coords.len());
        for (x, &q) in d.coords.iter().zip(&d.probs) {
            let p = norm * density_exponent(&y, x).exp();
            p_y += q * p;
            terms.push((q, p));
        }
        if p_y <= 0.0 {
            return 0.0;
        }
        terms
            .into_iter()
            .filter(|&(_, p)| p > 0.0)
            .map(|(q, p)| q * p * (p / p_y).ln())
            .sum()
    };

    if dim == 1 {
        let h = (hi[0] - lo[0]) / segments as f64;
        let mut acc = 0.0;
        for i in 0..=segments {
            acc += weight(i) * contribution([lo[0] + h * i as f64, 0.0]);
        }
        acc * h / 3.0
    } else {
        let hx = (hi[0] - lo[0]) / segments as f64;
        let hy = (hi[1] - lo[1]) / segments as f64;
        let mut acc = 0.0;
        for i in 0..=segments {
            let mut row = 0.0;
            for j in 0..=segments {
                row += weight(j) * contribution([lo[0] + hx * i as f64, lo[1] + hy * j as f64]);
            }
            acc += weight(i) * row;
        }
        acc * hx * hy / 9.0
    }
}
