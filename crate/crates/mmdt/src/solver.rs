//! Deterministic convex solver for weighted, regularized hinge-loss
//! minimization with an optional unregularized offset.
//!
//! The problem solved is
//!
//! ```text
//!   min_{w,b}  1/2 ||w||^2 + sum_i c_i * max{0, rho_i - s_i (x_i . w + v_i b)}
//! ```
//!
//! with per-example penalty weights `c_i > 0`, signs `s_i in {+1,-1}`,
//! target margins `rho_i` (1 unless overridden) and bias multipliers `v_i`
//! (1 unless overridden; only meaningful when `fit_bias` is set). The bias
//! `b` is not regularized.
//!
//! Without a bias the dual is a box-constrained QP solved by coordinate
//! descent in fixed index order. With a bias the dual carries one linear
//! equality constraint `sum_i s_i v_i alpha_i = 0`, handled by deterministic
//! maximal-violating-pair updates. Both paths report a certified
//! suboptimality bound: the gap between the best primal iterate seen and the
//! final dual objective, which upper-bounds the distance to the optimum by
//! weak duality. Identical inputs produce bit-identical outputs: there is no
//! shuffling, no randomized pivoting, and ties break on the lowest index.

use crate::error::{MmdtError, Result};
use crate::linalg::{axpy, dot, norm_sq, DenseMatrix};

/// Largest row count for which the with-bias path precomputes the Gram
/// matrix (about 130 MB of f64 at the limit). Above it, gradients are
/// refreshed with matrix-vector products instead.
const GRAM_LIMIT: usize = 4096;

/// Pair/coordinate violations below this are treated as converged-in-place.
const STALL_EPS: f64 = 1e-12;

/// One-vs-all sign: +1 if the example's label equals the classifier index.
#[inline]
pub fn delta_sign(y: usize, k: usize) -> f64 {
    if y == k {
        1.0
    } else {
        -1.0
    }
}

/// Hinge loss `max{0, 1 - delta(y,k) * score}`.
#[inline]
pub fn hinge_loss(y: usize, k: usize, score: f64) -> f64 {
    (1.0 - delta_sign(y, k) * score).max(0.0)
}

/// A weighted hinge minimization instance.
#[derive(Debug, Clone, PartialEq)]
pub struct HingeProblem {
    examples: DenseMatrix,
    signs: Vec<f64>,
    weights: Vec<f64>,
    fit_bias: bool,
    bias_mult: Vec<f64>,
    margins: Vec<f64>,
}

impl HingeProblem {
    pub fn new(
        examples: DenseMatrix,
        signs: Vec<f64>,
        weights: Vec<f64>,
        fit_bias: bool,
    ) -> Result<Self> {
        let m = examples.rows();
        if m == 0 {
            return Err(MmdtError::validation("hinge problem needs at least one example"));
        }
        if signs.len() != m || weights.len() != m {
            return Err(MmdtError::validation(format!(
                "{} signs / {} weights for {m} examples",
                signs.len(),
                weights.len()
            )));
        }
        if !examples.is_finite() {
            return Err(MmdtError::validation("examples contain non-finite values"));
        }
        if signs.iter().any(|&s| s != 1.0 && s != -1.0) {
            return Err(MmdtError::validation("signs must be exactly +1 or -1"));
        }
        if weights.iter().any(|&c| !(c > 0.0) || !c.is_finite()) {
            return Err(MmdtError::validation("weights must be positive and finite"));
        }
        Ok(HingeProblem {
            examples,
            signs,
            weights,
            fit_bias,
            bias_mult: vec![1.0; m],
            margins: vec![1.0; m],
        })
    }

    /// Per-example bias multipliers: the score becomes `x_i . w + v_i * b`.
    pub fn with_bias_multipliers(mut self, v: Vec<f64>) -> Result<Self> {
        if v.len() != self.len() {
            return Err(MmdtError::validation("bias multiplier length mismatch"));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(MmdtError::validation("non-finite bias multiplier"));
        }
        self.bias_mult = v;
        Ok(self)
    }

    /// Per-example target margins replacing the constant 1.
    pub fn with_margins(mut self, rho: Vec<f64>) -> Result<Self> {
        if rho.len() != self.len() {
            return Err(MmdtError::validation("margin length mismatch"));
        }
        if rho.iter().any(|x| !x.is_finite()) {
            return Err(MmdtError::validation("non-finite margin"));
        }
        self.margins = rho;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.examples.rows()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.examples.cols()
    }

    pub fn examples(&self) -> &DenseMatrix {
        &self.examples
    }

    pub fn signs(&self) -> &[f64] {
        &self.signs
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn fit_bias(&self) -> bool {
        self.fit_bias
    }

    pub fn bias_multipliers(&self) -> &[f64] {
        &self.bias_mult
    }

    pub fn margins(&self) -> &[f64] {
        &self.margins
    }
}

/// Solver output. `suboptimality_bound` is a certified upper bound on
/// `objective - optimum` obtained from the dual; `converged` records whether
/// the bound reached the requested tolerance within the pass budget.
#[derive(Debug, Clone, PartialEq)]
pub struct HingeSolution {
    pub w: Vec<f64>,
    pub b: f64,
    pub objective: f64,
    pub suboptimality_bound: f64,
    pub converged: bool,
    pub passes_run: usize,
}

/// Exact primal objective at `(w, b)`.
pub fn objective(problem: &HingeProblem, w: &[f64], b: f64) -> Result<f64> {
    if w.len() != problem.dim() {
        return Err(MmdtError::validation(format!(
            "w has {} components, problem dimension is {}",
            w.len(),
            problem.dim()
        )));
    }
    let mut loss = 0.0;
    for i in 0..problem.len() {
        let score = dot(problem.examples.row(i), w) + problem.bias_mult[i] * b;
        loss += problem.weights[i] * (problem.margins[i] - problem.signs[i] * score).max(0.0);
    }
    Ok(0.5 * norm_sq(w) + loss)
}

/// Exact minimizer of the piecewise-linear bias slice
/// `b -> sum_i c_i max{0, rho_i - s_i r_i - kappa_i b}` with
/// `kappa_i = s_i v_i`. Flat optimal intervals resolve to their midpoint;
/// half-open intervals resolve to the finite endpoint.
fn optimal_bias(scores: &[f64], problem: &HingeProblem) -> f64 {
    let mut events: Vec<(f64, f64)> = Vec::new(); // (breakpoint, slope gain)
    let mut base_slope = 0.0;
    for i in 0..problem.len() {
        let kappa = problem.signs[i] * problem.bias_mult[i];
        if kappa == 0.0 {
            continue;
        }
        let t = (problem.margins[i] - problem.signs[i] * scores[i]) / kappa;
        let gain = problem.weights[i] * kappa.abs();
        if kappa > 0.0 {
            base_slope -= gain;
        }
        events.push((t, gain));
    }
    if events.is_empty() {
        return 0.0;
    }
    events.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

    if base_slope >= 0.0 {
        // Non-decreasing everywhere: the minimum extends to -inf, ending at
        // the first breakpoint. Take the finite endpoint.
        return events[0].0;
    }
    let mut slope = base_slope;
    for (k, &(t, gain)) in events.iter().enumerate() {
        slope += gain;
        if slope > 0.0 {
            return t;
        }
        if slope == 0.0 {
            return match events.get(k + 1) {
                Some(&(t_next, _)) => 0.5 * (t + t_next),
                None => t,
            };
        }
    }
    // Slope stays negative past the last breakpoint: cannot happen because
    // positive-kappa terms go flat there, but return the last breakpoint.
    events.last().unwrap().0
}

struct PrimalBest {
    w: Vec<f64>,
    b: f64,
    objective: f64,
}

/// Solves `problem` to a certified primal suboptimality of `tol` if the pass
/// budget allows. Deterministic.
pub fn solve(problem: &HingeProblem, tol: f64, max_passes: usize) -> Result<HingeSolution> {
    if !(tol > 0.0) {
        return Err(MmdtError::validation("tol must be positive"));
    }
    if max_passes == 0 {
        return Err(MmdtError::validation("max_passes must be at least 1"));
    }
    if problem.fit_bias {
        solve_with_bias(problem, tol, max_passes)
    } else {
        solve_no_bias(problem, tol, max_passes)
    }
}

fn primal_value(problem: &HingeProblem, w: &[f64], scores: &[f64], b: f64) -> f64 {
    let mut loss = 0.0;
    for i in 0..problem.len() {
        let s = problem.signs[i] * (scores[i] + problem.bias_mult[i] * b);
        loss += problem.weights[i] * (problem.margins[i] - s).max(0.0);
    }
    0.5 * norm_sq(w) + loss
}

fn dual_value(problem: &HingeProblem, alpha: &[f64], w: &[f64]) -> f64 {
    let mut v = 0.0;
    for i in 0..problem.len() {
        v += problem.margins[i] * alpha[i];
    }
    v - 0.5 * norm_sq(w)
}

fn rebuild_w(problem: &HingeProblem, alpha: &[f64]) -> Vec<f64> {
    let mut w = vec![0.0; problem.dim()];
    for i in 0..problem.len() {
        if alpha[i] != 0.0 {
            axpy(alpha[i] * problem.signs[i], problem.examples.row(i), &mut w);
        }
    }
    w
}

fn solve_no_bias(problem: &HingeProblem, tol: f64, max_passes: usize) -> Result<HingeSolution> {
    let m = problem.len();
    let x = &problem.examples;
    let qd: Vec<f64> = (0..m).map(|i| norm_sq(x.row(i))).collect();

    let mut alpha = vec![0.0; m];
    let mut w = vec![0.0; problem.dim()];

    let scores0 = vec![0.0; m];
    let mut best = PrimalBest {
        w: w.clone(),
        b: 0.0,
        objective: primal_value(problem, &w, &scores0, 0.0),
    };
    let mut dual = 0.0;
    let mut passes = 0;
    let mut converged = best.objective - dual <= tol;

    while !converged && passes < max_passes {
        passes += 1;
        let mut moved = false;
        for i in 0..m {
            let g = problem.signs[i] * dot(x.row(i), &w) - problem.margins[i];
            let pg = if alpha[i] <= 0.0 {
                g.min(0.0)
            } else if alpha[i] >= problem.weights[i] {
                g.max(0.0)
            } else {
                g
            };
            if pg.abs() <= STALL_EPS {
                continue;
            }
            let new = if qd[i] > 0.0 {
                (alpha[i] - g / qd[i]).clamp(0.0, problem.weights[i])
            } else if g < 0.0 {
                problem.weights[i]
            } else {
                0.0
            };
            if new != alpha[i] {
                axpy((new - alpha[i]) * problem.signs[i], x.row(i), &mut w);
                alpha[i] = new;
                moved = true;
            }
        }

        w = rebuild_w(problem, &alpha);
        let scores: Vec<f64> = (0..m).map(|i| dot(x.row(i), &w)).collect();
        let primal = primal_value(problem, &w, &scores, 0.0);
        if primal < best.objective {
            best = PrimalBest {
                w: w.clone(),
                b: 0.0,
                objective: primal,
            };
        }
        dual = dual_value(problem, &alpha, &w);
        if best.objective - dual <= tol {
            converged = true;
        } else if !moved {
            break;
        }
    }

    Ok(HingeSolution {
        objective: best.objective,
        suboptimality_bound: (best.objective - dual).max(0.0),
        w: best.w,
        b: 0.0,
        converged,
        passes_run: passes,
    })
}

/// Gradient bookkeeping for the with-bias path.
enum GradRefresh {
    /// Raw Gram matrix `x_i . x_j` (signs applied at use sites).
    Gram(Vec<f64>),
    /// Refresh through `delta_w` matrix-vector products.
    Matvec,
}

fn solve_with_bias(problem: &HingeProblem, tol: f64, max_passes: usize) -> Result<HingeSolution> {
    let m = problem.len();
    let x = &problem.examples;
    let s = &problem.signs;
    let qd: Vec<f64> = (0..m).map(|i| norm_sq(x.row(i))).collect();
    // Constraint coefficients of the dual equality sum_i a_i alpha_i = 0.
    let a: Vec<f64> = (0..m).map(|i| s[i] * problem.bias_mult[i]).collect();
    let unconstrained: Vec<usize> = (0..m).filter(|&i| a[i] == 0.0).collect();
    let constrained: Vec<usize> = (0..m).filter(|&i| a[i] != 0.0).collect();

    let refresh = if m <= GRAM_LIMIT {
        let mut gram = vec![0.0; m * m];
        for i in 0..m {
            for j in i..m {
                let v = dot(x.row(i), x.row(j));
                gram[i * m + j] = v;
                gram[j * m + i] = v;
            }
        }
        GradRefresh::Gram(gram)
    } else {
        GradRefresh::Matvec
    };

    let mut alpha = vec![0.0; m];
    let mut w = vec![0.0; problem.dim()];
    // g_i = s_i (x_i . w) - rho_i, the gradient of the dual objective's
    // negation; kept exact by periodic rebuilds.
    let mut g: Vec<f64> = (0..m).map(|i| -problem.margins[i]).collect();

    let scores0 = vec![0.0; m];
    let b0 = optimal_bias(&scores0, problem);
    let mut best = PrimalBest {
        w: w.clone(),
        b: b0,
        objective: primal_value(problem, &w, &scores0, b0),
    };
    let mut dual = 0.0;
    let mut passes = 0;
    let mut converged = best.objective - dual <= tol;

    while !converged && passes < max_passes {
        passes += 1;
        let mut moved = false;

        // Plain coordinate steps for examples outside the equality constraint.
        for &i in &unconstrained {
            let gi = g[i];
            let pg = if alpha[i] <= 0.0 {
                gi.min(0.0)
            } else if alpha[i] >= problem.weights[i] {
                gi.max(0.0)
            } else {
                gi
            };
            if pg.abs() <= STALL_EPS {
                continue;
            }
            let new = if qd[i] > 0.0 {
                (alpha[i] - gi / qd[i]).clamp(0.0, problem.weights[i])
            } else if gi < 0.0 {
                problem.weights[i]
            } else {
                0.0
            };
            let d = new - alpha[i];
            if d != 0.0 {
                alpha[i] = new;
                axpy(d * s[i], x.row(i), &mut w);
                match &refresh {
                    GradRefresh::Gram(gram) => {
                        for t in 0..m {
                            g[t] += d * s[t] * s[i] * gram[t * m + i];
                        }
                    }
                    GradRefresh::Matvec => {
                        for t in 0..m {
                            g[t] = s[t] * dot(x.row(t), &w) - problem.margins[t];
                        }
                    }
                }
                moved = true;
            }
        }

        // Maximal-violating-pair updates on the constrained set.
        let budget = constrained.len().max(1);
        for _ in 0..budget {
            let mut lmax = f64::NEG_INFINITY;
            let mut umin = f64::INFINITY;
            let mut pick_i = usize::MAX;
            let mut pick_j = usize::MAX;
            for &t in &constrained {
                let ratio = -g[t] / a[t];
                let at_lower = alpha[t] <= 0.0;
                let at_upper = alpha[t] >= problem.weights[t];
                let gives_lower =
                    (a[t] > 0.0 && !at_upper) || (a[t] < 0.0 && !at_lower);
                let gives_upper =
                    (a[t] > 0.0 && !at_lower) || (a[t] < 0.0 && !at_upper);
                if gives_lower && ratio > lmax {
                    lmax = ratio;
                    pick_i = t;
                }
                if gives_upper && ratio < umin {
                    umin = ratio;
                    pick_j = t;
                }
            }
            if pick_i == usize::MAX || pick_j == usize::MAX || lmax - umin <= STALL_EPS {
                break;
            }
            let (i, j) = (pick_i, pick_j);

            let qij = match &refresh {
                GradRefresh::Gram(gram) => gram[i * m + j],
                GradRefresh::Matvec => dot(x.row(i), x.row(j)),
            };
            // Direction alpha_i += a_j t, alpha_j -= a_i t stays feasible.
            let curvature =
                (a[j] * a[j] * qd[i] - 2.0 * a[i] * a[j] * s[i] * s[j] * qij
                    + a[i] * a[i] * qd[j])
                    .max(1e-12);
            let slope = g[i] * a[j] - g[j] * a[i];
            let mut t_step = -slope / curvature;

            let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
            if a[j] > 0.0 {
                lo = lo.max(-alpha[i] / a[j]);
                hi = hi.min((problem.weights[i] - alpha[i]) / a[j]);
            } else {
                lo = lo.max((problem.weights[i] - alpha[i]) / a[j]);
                hi = hi.min(-alpha[i] / a[j]);
            }
            if a[i] > 0.0 {
                lo = lo.max((alpha[j] - problem.weights[j]) / a[i]);
                hi = hi.min(alpha[j] / a[i]);
            } else {
                lo = lo.max(alpha[j] / a[i]);
                hi = hi.min((alpha[j] - problem.weights[j]) / a[i]);
            }
            t_step = t_step.clamp(lo, hi);
            if t_step == 0.0 {
                break;
            }

            let di = a[j] * t_step;
            let dj = -a[i] * t_step;
            alpha[i] = (alpha[i] + di).clamp(0.0, problem.weights[i]);
            alpha[j] = (alpha[j] + dj).clamp(0.0, problem.weights[j]);
            axpy(di * s[i], x.row(i), &mut w);
            axpy(dj * s[j], x.row(j), &mut w);
            match &refresh {
                GradRefresh::Gram(gram) => {
                    for t in 0..m {
                        g[t] += s[t] * (di * s[i] * gram[t * m + i] + dj * s[j] * gram[t * m + j]);
                    }
                }
                GradRefresh::Matvec => {
                    for t in 0..m {
                        g[t] = s[t] * dot(x.row(t), &w) - problem.margins[t];
                    }
                }
            }
            moved = true;
        }

        // Exact bookkeeping at the pass boundary, then the certified gap.
        w = rebuild_w(problem, &alpha);
        let scores: Vec<f64> = (0..m).map(|i| dot(x.row(i), &w)).collect();
        for t in 0..m {
            g[t] = s[t] * scores[t] - problem.margins[t];
        }
        let b = optimal_bias(&scores, problem);
        let primal = primal_value(problem, &w, &scores, b);
        if primal < best.objective {
            best = PrimalBest {
                w: w.clone(),
                b,
                objective: primal,
            };
        }
        dual = dual_value(problem, &alpha, &w);
        if best.objective - dual <= tol {
            converged = true;
        } else if !moved {
            break;
        }
    }

    Ok(HingeSolution {
        objective: best.objective,
        suboptimality_bound: (best.objective - dual).max(0.0),
        w: best.w,
        b: best.b,
        converged,
        passes_run: passes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DenseMatrix;

    fn problem(
        rows: &[Vec<f64>],
        signs: &[f64],
        weights: &[f64],
        fit_bias: bool,
    ) -> HingeProblem {
        HingeProblem::new(
            DenseMatrix::from_rows(rows).unwrap(),
            signs.to_vec(),
            weights.to_vec(),
            fit_bias,
        )
        .unwrap()
    }

    #[test]
    fn hinge_loss_formula() {
        assert_eq!(hinge_loss(2, 2, 1.0), 0.0);
        assert_eq!(hinge_loss(2, 2, 0.0), 1.0);
        assert_eq!(hinge_loss(1, 0, -3.0), 0.0);
        assert_eq!(hinge_loss(1, 0, 3.0), 4.0);
    }

    #[test]
    fn hinge_loss_zero_iff_margin_met() {
        for &(y, k) in &[(0usize, 0usize), (0, 1)] {
            for score in [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0] {
                let l = hinge_loss(y, k, score);
                assert!(l >= 0.0);
                let met = delta_sign(y, k) * score >= 1.0;
                assert_eq!(l == 0.0, met, "y={y} k={k} score={score}");
            }
        }
    }

    #[test]
    fn single_example_large_weight() {
        // min 1/2 w^2 + 1000 max{0, 1-w}: optimum at w = 1, objective 0.5.
        let p = problem(&[vec![1.0]], &[1.0], &[1000.0], false);
        let sol = solve(&p, 1e-6, 10_000).unwrap();
        assert!(sol.converged);
        assert!((sol.w[0] - 1.0).abs() < 1e-3, "w = {:?}", sol.w);
        assert!((sol.objective - 0.5).abs() < 1e-3);
    }

    #[test]
    fn symmetric_pair_with_bias() {
        let p = problem(&[vec![1.0], vec![-1.0]], &[1.0, -1.0], &[1000.0, 1000.0], true);
        let sol = solve(&p, 1e-8, 10_000).unwrap();
        assert!(sol.converged);
        assert!((sol.w[0] - 1.0).abs() < 1e-4, "w = {:?}", sol.w);
        assert!(sol.b.abs() < 1e-6, "b = {}", sol.b);
        assert!((sol.objective - 0.5).abs() < 1e-4);
    }

    #[test]
    fn vanishing_weights_shrink_w() {
        for fit_bias in [false, true] {
            let p = problem(
                &[vec![1.0, 2.0], vec![-0.5, 1.0]],
                &[1.0, -1.0],
                &[1e-9, 1e-9],
                fit_bias,
            );
            let sol = solve(&p, 1e-12, 1000).unwrap();
            assert!(norm_sq(&sol.w) < 1e-8, "w = {:?}", sol.w);
        }
    }

    #[test]
    fn all_negative_problem_is_valid() {
        let p = problem(&[vec![2.0], vec![1.0]], &[-1.0, -1.0], &[5.0, 5.0], true);
        let sol = solve(&p, 1e-9, 1000).unwrap();
        assert!(sol.converged);
        assert!(norm_sq(&sol.w) < 1e-12);
        // Losses vanish once b <= -1; the finite endpoint is chosen.
        assert!((sol.b + 1.0).abs() < 1e-9, "b = {}", sol.b);
        assert!(sol.objective.abs() < 1e-12);
    }

    #[test]
    fn objective_all_margins_violated_by_one() {
        let p = problem(
            &[vec![0.0, 0.0], vec![0.0, 0.0], vec![0.0, 0.0]],
            &[1.0, -1.0, 1.0],
            &[2.5, 2.5, 2.5],
            false,
        );
        let obj = objective(&p, &[0.0, 0.0], 0.0).unwrap();
        assert_eq!(obj, 3.0 * 2.5);
    }

    #[test]
    fn objective_bias_clears_margin() {
        let p = problem(&[vec![0.0]], &[1.0], &[1.0], true);
        assert_eq!(objective(&p, &[0.0], 1.0).unwrap(), 0.0);
    }

    #[test]
    fn objective_dimension_mismatch() {
        let p = problem(&[vec![1.0, 2.0]], &[1.0], &[1.0], false);
        assert!(objective(&p, &[1.0], 0.0).is_err());
    }

    // Independent re-evaluation written in a deliberately different style.
    fn reference_objective(p: &HingeProblem, w: &[f64], b: f64) -> f64 {
        let mut total = 0.0;
        for k in 0..w.len() {
            total += w[k] * w[k] / 2.0;
        }
        for i in 0..p.len() {
            let mut score = p.bias_multipliers()[i] * b;
            for k in 0..w.len() {
                score += p.examples().get(i, k) * w[k];
            }
            let slack = p.margins()[i] - p.signs()[i] * score;
            if slack > 0.0 {
                total += p.weights()[i] * slack;
            }
        }
        total
    }

    #[test]
    fn objective_matches_reference_evaluator() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..50 {
            let m = rng.gen_range(1..8);
            let d = rng.gen_range(1..5);
            let rows: Vec<Vec<f64>> = (0..m)
                .map(|_| (0..d).map(|_| rng.gen_range(-3.0..3.0)).collect())
                .collect();
            let signs: Vec<f64> = (0..m)
                .map(|_| if rng.gen_bool(0.5) { 1.0 } else { -1.0 })
                .collect();
            let weights: Vec<f64> = (0..m).map(|_| rng.gen_range(0.1..5.0)).collect();
            let p = problem(&rows, &signs, &weights, true);
            let w: Vec<f64> = (0..d).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let b = rng.gen_range(-2.0..2.0);
            let got = objective(&p, &w, b).unwrap();
            let want = reference_objective(&p, &w, b);
            assert!((got - want).abs() <= 1e-12 * (1.0 + want.abs()));
        }
    }

    #[test]
    fn solve_is_bit_deterministic() {
        let p = problem(
            &[vec![1.0, 0.5], vec![-0.25, 1.5], vec![2.0, -1.0], vec![0.1, 0.1]],
            &[1.0, -1.0, 1.0, -1.0],
            &[2.0, 1.0, 0.5, 3.0],
            true,
        );
        let a = solve(&p, 1e-8, 5000).unwrap();
        let b = solve(&p, 1e-8, 5000).unwrap();
        assert_eq!(a.w.iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
                   b.w.iter().map(|v| v.to_bits()).collect::<Vec<_>>());
        assert_eq!(a.b.to_bits(), b.b.to_bits());
        assert_eq!(a.objective.to_bits(), b.objective.to_bits());
    }

    #[test]
    fn solution_objective_is_consistent() {
        let p = problem(
            &[vec![1.0, 0.0], vec![0.0, 1.0], vec![-1.0, -1.0]],
            &[1.0, 1.0, -1.0],
            &[2.0, 2.0, 2.0],
            true,
        );
        let sol = solve(&p, 1e-8, 5000).unwrap();
        let re = objective(&p, &sol.w, sol.b).unwrap();
        assert!((re - sol.objective).abs() <= 1e-10 * (1.0 + re.abs()));
        assert!(sol.suboptimality_bound >= 0.0);
        assert!(sol.suboptimality_bound <= 1e-8);
    }

    #[test]
    fn bias_multiplier_scales_offset_effect() {
        // Single example with v = 2: min 1000 max{0, 1 - 2b} over b alone
        // (w pinned at 0 by zero features) -> b = 1/2 exactly.
        let p = problem(&[vec![0.0]], &[1.0], &[1000.0], true)
            .with_bias_multipliers(vec![2.0])
            .unwrap();
        let sol = solve(&p, 1e-9, 100).unwrap();
        assert!((sol.b - 0.5).abs() < 1e-9, "b = {}", sol.b);
        assert!(sol.objective.abs() < 1e-12);
    }

    #[test]
    fn margin_override_moves_target() {
        // min 1/2 w^2 + 1000 max{0, 2 - w}: optimum near w = 2.
        let p = problem(&[vec![1.0]], &[1.0], &[1000.0], false)
            .with_margins(vec![2.0])
            .unwrap();
        let sol = solve(&p, 1e-6, 10_000).unwrap();
        assert!((sol.w[0] - 2.0).abs() < 1e-2, "w = {:?}", sol.w);
    }

    #[test]
    fn zero_bias_multipliers_leave_bias_free() {
        let p = problem(&[vec![1.0]], &[1.0], &[10.0], true)
            .with_bias_multipliers(vec![0.0])
            .unwrap();
        let sol = solve(&p, 1e-9, 1000).unwrap();
        // Bias slice is constant; convention picks 0.
        assert_eq!(sol.b, 0.0);
        assert!((sol.w[0] - 1.0).abs() < 1e-4);
    }

    #[test]
    fn rejects_invalid_problems() {
        assert!(HingeProblem::new(
            DenseMatrix::from_rows(&[vec![1.0]]).unwrap(),
            vec![0.5],
            vec![1.0],
            false
        )
        .is_err());
        assert!(HingeProblem::new(
            DenseMatrix::from_rows(&[vec![1.0]]).unwrap(),
            vec![1.0],
            vec![0.0],
            false
        )
        .is_err());
        let p = problem(&[vec![1.0]], &[1.0], &[1.0], false);
        assert!(solve(&p, 0.0, 10).is_err());
        assert!(solve(&p, 1e-6, 0).is_err());
    }
}
