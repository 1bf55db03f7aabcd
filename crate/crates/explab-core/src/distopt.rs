//! Input-distribution optimization: maximizes the random-coding exponent over
//! pmfs on a fixed candidate grid under average and peak power constraints.
//!
//! Maximizing `E_o(rho, q) = -ln f(q)` is equivalent to minimizing the convex
//! integral functional `f(q)` of the mixture-power quadrature over the
//! polytope `{q >= 0, sum q = 1, sum q |x|^2 <= avg_power}` (the peak
//! constraint is enforced by grid membership). The solver is Frank-Wolfe with
//! away steps and exact line search; the linear subproblem over two linear
//! constraints is solved by direct vertex enumeration. When several vertices
//! tie, the oracle returns their barycenter, which keeps iterates exactly
//! symmetric for symmetric problems instead of converging to symmetry only in
//! the limit.
//!
//! The convergence certificate is the Frank-Wolfe gap expressed as a
//! directional derivative of `E_o`: `max_s <-grad E_o, s - q>` over feasible
//! `s`, which upper-bounds the suboptimality of a convex problem.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::channel::PowerConstraint;
use crate::error::{Error, Result};
use crate::numerics::{maximize_concave, MixtureQuadrature, QuadratureSpec};

/// A grid-constrained exponent-maximization problem.
#[derive(Debug, Clone)]
pub struct OptimizationProblem {
    /// Candidate mass points; 1-D points carry 0 in the second coordinate.
    pub grid: Vec<[f64; 2]>,
    pub dim: usize,
    pub constraint: PowerConstraint,
    /// Rate in nats/symbol (used by the outer `E_r` maximization).
    pub rate: f64,
    /// Per-dimension noise variance.
    pub sigma2: f64,
    /// Candidate `rho` values for the outer maximization, within [0, 1].
    pub rho_grid: Vec<f64>,
    pub quad: QuadratureSpec,
    /// Iteration cap per inner solve.
    pub max_iterations: usize,
    /// Convergence threshold on the directional-derivative residual.
    pub kkt_tol: f64,
}

impl OptimizationProblem {
    /// 1-D problem with default quadrature, iteration cap 5000 and residual
    /// tolerance 1e-7.
    pub fn new_1d(
        xs: &[f64],
        constraint: PowerConstraint,
        rate: f64,
        sigma2: f64,
        rho_grid: &[f64],
    ) -> Result<Self> {
        let p = OptimizationProblem {
            grid: xs.iter().map(|&x| [x, 0.0]).collect(),
            dim: 1,
            constraint,
            rate,
            sigma2,
            rho_grid: rho_grid.to_vec(),
            quad: QuadratureSpec::default(),
            max_iterations: 5000,
            kkt_tol: 1e-7,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid.is_empty() {
            return Err(Error::Invalid("grid must be non-empty".into()));
        }
        if !(self.dim == 1 || self.dim == 2) {
            return Err(Error::Invalid(format!("dimension must be 1 or 2, got {}", self.dim)));
        }
        if !(self.sigma2 > 0.0) {
            return Err(Error::Invalid(format!("sigma2 must be positive, got {}", self.sigma2)));
        }
        if !(self.rate > 0.0) {
            return Err(Error::Invalid(format!("rate must be positive, got {}", self.rate)));
        }
        if self.rho_grid.is_empty() {
            return Err(Error::Invalid("rho_grid must be non-empty".into()));
        }
        for &rho in &self.rho_grid {
            if !(0.0..=1.0).contains(&rho) {
                return Err(Error::Invalid(format!("rho_grid entries must lie in [0, 1], got {rho}")));
            }
        }
        let peak2 = self.constraint.peak_amplitude * self.constraint.peak_amplitude;
        for p in &self.grid {
            let pw = p[0] * p[0] + p[1] * p[1];
            if pw > peak2 * (1.0 + 1e-12) {
                return Err(Error::Invalid(format!(
                    "grid point ({}, {}) exceeds the peak amplitude {}",
                    p[0], p[1], self.constraint.peak_amplitude
                )));
            }
        }
        let min_power = self.powers().into_iter().fold(f64::INFINITY, f64::min);
        if min_power > self.constraint.avg_power + 1e-12 {
            return Err(Error::Invalid(format!(
                "no feasible pmf: smallest grid power {min_power} exceeds avg_power {}",
                self.constraint.avg_power
            )));
        }
        Ok(())
    }

    fn powers(&self) -> Vec<f64> {
        self.grid.iter().map(|p| p[0] * p[0] + p[1] * p[1]).collect()
    }

    /// Feasible symmetric starting pmf: uniform over the grid, truncating the
    /// outermost points until the average-power constraint holds.
    pub fn initial_distribution(&self) -> Vec<f64> {
        let powers = self.powers();
        let m = self.grid.len();
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| powers[a].partial_cmp(&powers[b]).unwrap());
        // Keep the k lowest-power points (ties kept together so symmetric
        // grids stay symmetric), largest k whose uniform pmf is feasible.
        let mut keep = m;
        loop {
            let kept = &order[..keep];
            let avg: f64 = kept.iter().map(|&j| powers[j]).sum::<f64>() / keep as f64;
            if avg <= self.constraint.avg_power + 1e-12 {
                let mut q = vec![0.0; m];
                for &j in kept {
                    q[j] = 1.0 / keep as f64;
                }
                return q;
            }
            // Drop every point tied with the current outermost power.
            let worst = powers[order[keep - 1]];
            while keep > 1 && powers[order[keep - 1]] == worst {
                keep -= 1;
            }
        }
    }
}

/// Result of optimizing the pmf at a fixed `rho`.
#[derive(Debug, Clone)]
pub struct QForRho {
    pub probs: Vec<f64>,
    /// `E_o(rho, probs)` under the frozen quadrature rule.
    pub e_o: f64,
    /// Final directional-derivative residual.
    pub kkt_residual: f64,
    pub converged: bool,
    pub iterations: usize,
    /// `E_o` value after each iteration; nondecreasing by construction.
    pub objective_trace: Vec<f64>,
}

/// Maximizes `E_o(rho, q)` over the power-constrained simplex.
pub fn optimize_q_for_rho(problem: &OptimizationProblem, rho: f64) -> Result<QForRho> {
    problem.validate()?;
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::Invalid(format!("rho must lie in [0, 1], got {rho}")));
    }
    solve(problem, rho)
}

/// Jointly optimal `(rho, q)` and the exponent value `E_r(R)`.
#[derive(Debug, Clone)]
pub struct OptimizedDistribution {
    pub probs: Vec<f64>,
    pub rho_opt: f64,
    /// `E_r(R) = max_rho [ sup_q E_o(rho, q) - rho R ]`.
    pub er_value: f64,
    pub kkt_residual: f64,
    pub converged: bool,
    /// Set when `er_value <= 0`, i.e. the rate is at or above the capacity of
    /// the best achievable input on this grid.
    pub above_capacity: bool,
}

/// Maximizes `E_r(R)`: evaluates the inner problem on `rho_grid`, then
/// refines around the best grid point by golden search.
pub fn optimize_er(problem: &OptimizationProblem) -> Result<OptimizedDistribution> {
    problem.validate()?;
    let mut rhos = problem.rho_grid.clone();
    rhos.sort_by(|a, b| a.partial_cmp(b).unwrap());
    rhos.dedup();

    let mut best_idx = 0;
    let mut best_val = f64::NEG_INFINITY;
    for (i, &rho) in rhos.iter().enumerate() {
        let sol = solve(problem, rho)?;
        let val = sol.e_o - rho * problem.rate;
        if val > best_val {
            best_val = val;
            best_idx = i;
        }
    }

    let lo = if best_idx > 0 { rhos[best_idx - 1] } else { rhos[best_idx] };
    let hi = if best_idx + 1 < rhos.len() { rhos[best_idx + 1] } else { rhos[best_idx] };
    let rho_opt = if hi > lo {
        let mut failure = None;
        let (rho, _) = maximize_concave(
            |rho| match solve(problem, rho) {
                Ok(sol) => sol.e_o - rho * problem.rate,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::NEG_INFINITY
                }
            },
            lo,
            hi,
            1e-5,
        )?;
        if let Some(e) = failure {
            return Err(e);
        }
        rho
    } else {
        rhos[best_idx]
    };

    let sol = solve(problem, rho_opt)?;
    let er_value = sol.e_o - rho_opt * problem.rate;
    Ok(OptimizedDistribution {
        probs: sol.probs,
        rho_opt,
        er_value,
        kkt_residual: sol.kkt_residual,
        converged: sol.converged,
        above_capacity: er_value <= 0.0,
    })
}

/// One vertex (or barycenter of tied vertices) with its cached node mixture.
struct Atom {
    vertex: Vec<f64>,
    /// Kernel mixture of `vertex` at the quadrature nodes.
    nodes: Vec<f64>,
}

fn solve(problem: &OptimizationProblem, rho: f64) -> Result<QForRho> {
    let m = problem.grid.len();
    let powers = problem.powers();
    let budget = problem.constraint.avg_power;
    let q0 = problem.initial_distribution();
    // Freeze the rule against the widest-support pmf so every iteration sees
    // the same discretized functional.
    let rule =
        MixtureQuadrature::build(&problem.grid, problem.dim, &q0, problem.sigma2, rho, &problem.quad)?;
    let kernel = rule.kernel_matrix(&problem.grid);

    let mut atoms = alloc::vec![Atom { nodes: rule.mixture_at_nodes(&kernel, &q0), vertex: q0.clone() }];
    let mut weights = alloc::vec![1.0_f64];
    let mut q = q0;
    let mut grad = alloc::vec![0.0; m];
    let mut f = rule.value_and_gradient_from_kernel(&kernel, &q, &mut grad);
    let mut trace = Vec::new();
    let mut residual = f64::INFINITY;
    let mut converged = false;
    let mut iterations = 0;

    for it in 0..problem.max_iterations {
        iterations = it;
        let (s, lmo_val) = lmo(&grad, &powers, budget);
        let dot_q: f64 = grad.iter().zip(&q).map(|(&g, &x)| g * x).sum();
        residual = (dot_q - lmo_val) / f;
        if residual <= problem.kkt_tol {
            converged = true;
            break;
        }

        match atoms.iter().position(|a| same_vertex(&a.vertex, &s)) {
            Some(_) => {
                // The oracle re-proposed a known atom while the gap is still
                // open: the correction has hit its numerical floor.
                break;
            }
            None => {
                atoms.push(Atom { nodes: rule.mixture_at_nodes(&kernel, &s), vertex: s });
                weights.push(0.0);
            }
        }

        correct_weights(&rule, &atoms, &mut weights);

        // Drop atoms the correction zeroed out.
        let mut i = 0;
        while i < atoms.len() {
            if weights[i] <= 0.0 {
                atoms.swap_remove(i);
                weights.swap_remove(i);
            } else {
                i += 1;
            }
        }

        for qi in q.iter_mut() {
            *qi = 0.0;
        }
        for (a, &w) in atoms.iter().zip(&weights) {
            for (qi, &vi) in q.iter_mut().zip(&a.vertex) {
                *qi += w * vi;
            }
        }
        f = rule.value_and_gradient_from_kernel(&kernel, &q, &mut grad);
        trace.push(-libm::log(f));
    }

    Ok(QForRho {
        probs: q,
        e_o: -libm::log(f),
        kkt_residual: residual,
        converged,
        iterations,
        objective_trace: trace,
    })
}

/// Minimizes the integral functional over the simplex of atom weights by an
/// active-set Newton iteration. Any convex
/// combination of the atoms is feasible for the original problem, so no other
/// constraint enters.
fn correct_weights(rule: &MixtureQuadrature, atoms: &[Atom], weights: &mut [f64]) {
    let k = atoms.len();
    let nodes = atoms[0].nodes.len();
    let mut s_nodes = alloc::vec![0.0_f64; nodes];
    let mix = |weights: &[f64], out: &mut [f64]| {
        out.fill(0.0);
        for (a, &w) in atoms.iter().zip(weights.iter()) {
            if w != 0.0 {
                for (o, &z) in out.iter_mut().zip(&a.nodes) {
                    *o += w * z;
                }
            }
        }
    };
    mix(weights, &mut s_nodes);
    let mut f = rule.mixture_value(&s_nodes);

    let mut grad = alloc::vec![0.0_f64; k];
    let mut active: Vec<bool> = weights.iter().map(|&w| w > 0.0).collect();
    // The newly added atom enters the working set with weight zero.
    if let Some(last) = active.last_mut() {
        *last = true;
    }
    let mut dir = alloc::vec![0.0_f64; k];
    let mut dir_nodes = alloc::vec![0.0_f64; nodes];
    let all_nodes: Vec<&[f64]> = atoms.iter().map(|a| a.nodes.as_slice()).collect();

    for _ in 0..120 {
        rule.mixture_weight_gradient(&s_nodes, &all_nodes, &mut grad);

        // Newton step on the working set, with the sum-to-one constraint
        // folded in by bordering.
        let idx: Vec<usize> = (0..k).filter(|&a| active[a]).collect();
        let ks = idx.len();
        if ks == 0 {
            break;
        }
        let sub_nodes: Vec<&[f64]> = idx.iter().map(|&a| atoms[a].nodes.as_slice()).collect();
        let mut h = rule.mixture_weight_hessian(&s_nodes, &sub_nodes);
        let mut rhs = alloc::vec![0.0_f64; ks + 1];
        for (row, &a) in idx.iter().enumerate() {
            rhs[row] = -grad[a];
        }
        // Bordered KKT system: [H 1; 1^T 0] [d; nu] = [-g; 0].
        let dim = ks + 1;
        let build = |h: &[f64]| {
            let mut msys = alloc::vec![0.0_f64; dim * dim];
            for r in 0..ks {
                for c in 0..ks {
                    msys[r * dim + c] = h[r * ks + c];
                }
                msys[r * dim + ks] = 1.0;
                msys[ks * dim + r] = 1.0;
            }
            msys
        };
        let solved = solve_dense(&mut build(&h), &rhs).or_else(|| {
            // Dependent atoms make the system singular; ridge and retry.
            let scale = (0..ks).map(|r| h[r * ks + r].abs()).fold(1e-30, f64::max);
            for r in 0..ks {
                h[r * ks + r] += 1e-10 * scale;
            }
            solve_dense(&mut build(&h), &rhs)
        });
        let Some(sol) = solved else { break };
        dir.fill(0.0);
        let mut step_norm = 0.0_f64;
        for (row, &a) in idx.iter().enumerate() {
            dir[a] = sol[row];
            step_norm = step_norm.max(sol[row].abs());
        }
        let nu = sol[ks];

        if step_norm <= 1e-14 {
            // Interior optimum on the working set; check for an entering atom
            // whose derivative beats the common multiplier.
            let mut entered = false;
            for a in 0..k {
                if !active[a] && grad[a] < nu - 1e-13 * (1.0 + nu.abs()) {
                    active[a] = true;
                    entered = true;
                }
            }
            if entered {
                continue;
            }
            break;
        }

        // Longest feasible step, then backtrack until the value decreases.
        let mut t_max = 1.0_f64;
        for &a in &idx {
            if dir[a] < 0.0 {
                t_max = t_max.min(-weights[a] / dir[a]);
            }
        }
        mix(&dir, &mut dir_nodes);
        let mut t = t_max.min(1.0);
        let mut accepted = false;
        for _ in 0..60 {
            let trial = rule.segment_value(&s_nodes, &dir_nodes, t);
            if trial <= f {
                f = trial;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
        for &a in &idx {
            weights[a] += t * dir[a];
            if weights[a] <= 1e-15 {
                weights[a] = 0.0;
                active[a] = false;
            }
        }
        // Renormalize against drift and refresh the node mixture.
        let total: f64 = weights.iter().sum();
        for w in weights.iter_mut() {
            *w /= total;
        }
        mix(weights, &mut s_nodes);
        f = rule.mixture_value(&s_nodes);
    }
    let _ = f;
}

/// Gaussian elimination with partial pivoting on a dense row-major system.
/// Returns `None` for a singular matrix. `m` is consumed as scratch.
fn solve_dense(m: &mut [f64], rhs: &[f64]) -> Option<Vec<f64>> {
    let n = rhs.len();
    let mut b = rhs.to_vec();
    for col in 0..n {
        let mut pivot = col;
        for row in col + 1..n {
            if m[row * n + col].abs() > m[pivot * n + col].abs() {
                pivot = row;
            }
        }
        if m[pivot * n + col].abs() < 1e-300 {
            return None;
        }
        if pivot != col {
            for c in 0..n {
                m.swap(col * n + c, pivot * n + c);
            }
            b.swap(col, pivot);
        }
        let inv = 1.0 / m[col * n + col];
        for row in col + 1..n {
            let factor = m[row * n + col] * inv;
            if factor == 0.0 {
                continue;
            }
            for c in col..n {
                m[row * n + c] -= factor * m[col * n + c];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = alloc::vec![0.0_f64; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for c in row + 1..n {
            acc -= m[row * n + c] * x[c];
        }
        x[row] = acc / m[row * n + row];
    }
    Some(x)
}

fn same_vertex(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(&x, &y)| (x - y).abs() <= 1e-12)
}

/// Linear minimization oracle over `{s >= 0, sum s = 1, <powers, s> <= budget}`:
/// returns the barycenter of the optimal vertices and the optimal value.
///
/// The polytope's vertices are the feasible coordinate points plus the
/// two-point mixes where an infeasible coordinate is pulled onto the power
/// plane by a feasible one; enumerating both families solves the LP exactly.
fn lmo(grad: &[f64], powers: &[f64], budget: f64) -> (Vec<f64>, f64) {
    let m = grad.len();
    let feasible = |j: usize| powers[j] <= budget * (1.0 + 1e-12) + 1e-12;

    let mut best = f64::INFINITY;
    for j in 0..m {
        if feasible(j) && grad[j] < best {
            best = grad[j];
        }
    }
    for i in 0..m {
        if !feasible(i) {
            continue;
        }
        for j in 0..m {
            if feasible(j) || powers[i] == powers[j] {
                continue;
            }
            let lambda = (budget - powers[j]) / (powers[i] - powers[j]);
            if (0.0..=1.0).contains(&lambda) {
                let val = lambda * grad[i] + (1.0 - lambda) * grad[j];
                if val < best {
                    best = val;
                }
            }
        }
    }

    // Collect every vertex within tie tolerance of the optimum and average.
    let tie = 1e-12 * (1.0 + best.abs());
    let mut s = vec![0.0; m];
    let mut count = 0.0;
    for j in 0..m {
        if feasible(j) && grad[j] <= best + tie {
            s[j] += 1.0;
            count += 1.0;
        }
    }
    for i in 0..m {
        if !feasible(i) {
            continue;
        }
        for j in 0..m {
            if feasible(j) || powers[i] == powers[j] {
                continue;
            }
            let lambda = (budget - powers[j]) / (powers[i] - powers[j]);
            if (0.0..=1.0).contains(&lambda)
                && lambda * grad[i] + (1.0 - lambda) * grad[j] <= best + tie
            {
                s[i] += lambda;
                s[j] += 1.0 - lambda;
                count += 1.0;
            }
        }
    }
    for si in s.iter_mut() {
        *si /= count;
    }
    (s, best)
}
