use nalgebra::{DMatrix, DVector};

use crate::cs::{Dictionary, SamplingMatrix};
use crate::error::{Result, VsaError};

/// Configuration for the sparse inference solver.
#[derive(Debug, Clone, Copy)]
pub struct LassoConfig {
    /// L1 penalty weight.
    pub lambda: f64,
    pub max_iterations: usize,
    /// Relative objective-decrease threshold for convergence.
    pub tolerance: f64,
    /// Constrain coefficients to be nonnegative (binary ground truth).
    pub nonnegative: bool,
}

impl Default for LassoConfig {
    fn default() -> Self {
        Self { lambda: 1e-2, max_iterations: 5000, tolerance: 1e-8, nonnegative: false }
    }
}

#[derive(Debug, Clone)]
pub struct LassoResult {
    pub coefficients: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub objective: f64,
}

fn objective(xi: &SamplingMatrix, x: &[f64], a: &[f64], lambda: f64) -> f64 {
    let xa = xi.matvec(a).expect("checked shapes");
    let resid: f64 = xa.iter().zip(x).map(|(p, t)| (p - t) * (p - t)).sum();
    0.5 * resid + lambda * a.iter().map(|v| v.abs()).sum::<f64>()
}

/// Largest eigenvalue of `Xi^T Xi` by power iteration.
fn lipschitz(xi: &SamplingMatrix, iterations: usize) -> f64 {
    let m = xi.n_cols;
    let mut v: Vec<f64> = (0..m).map(|i| ((i * 2654435761 + 1) % 1000) as f64 / 1000.0 + 0.1).collect();
    let mut eig = 1.0;
    for _ in 0..iterations {
        let w = xi.tr_matvec(&xi.matvec(&v).unwrap()).unwrap();
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 1.0;
        }
        eig = norm;
        v = w.into_iter().map(|x| x / norm).collect();
    }
    eig
}

fn prox(v: f64, threshold: f64, nonnegative: bool) -> f64 {
    if nonnegative {
        (v - threshold).max(0.0)
    } else if v > threshold {
        v - threshold
    } else if v < -threshold {
        v + threshold
    } else {
        0.0
    }
}

/// Sparse inference: minimize `0.5 ||x - Xi a||^2 + lambda ||a||_1` by
/// accelerated proximal gradient (FISTA) with soft-thresholding and adaptive
/// restart, step 1/L with L from power iteration.
///
/// Non-convergence within `max_iterations` is reported in the result, not
/// fatal.
pub fn lasso_solve(xi: &SamplingMatrix, x: &[f64], config: &LassoConfig) -> Result<LassoResult> {
    if x.len() != xi.n_rows {
        return Err(VsaError::DimensionMismatch { left: xi.n_rows, right: x.len() });
    }
    if config.lambda < 0.0 || config.tolerance <= 0.0 {
        return Err(VsaError::InvalidParameter("lambda >= 0 and tolerance > 0 required".into()));
    }
    let m = xi.n_cols;
    let step = 1.0 / (lipschitz(xi, 50) * 1.01);
    let mut a = vec![0.0; m];
    let mut y = a.clone();
    let mut t = 1.0f64;
    let mut prev_obj = objective(xi, x, &a, config.lambda);
    let mut converged = false;
    let mut iterations = 0;

    for iter in 1..=config.max_iterations {
        iterations = iter;
        let resid: Vec<f64> = xi
            .matvec(&y)?
            .iter()
            .zip(x)
            .map(|(p, t)| p - t)
            .collect();
        let grad = xi.tr_matvec(&resid)?;
        let a_new: Vec<f64> = y
            .iter()
            .zip(&grad)
            .map(|(yi, gi)| prox(yi - step * gi, config.lambda * step, config.nonnegative))
            .collect();
        let obj = objective(xi, x, &a_new, config.lambda);
        if obj > prev_obj {
            // Adaptive restart keeps the objective nonincreasing.
            t = 1.0;
            y = a.clone();
            continue;
        }
        let t_new = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
        y = a_new
            .iter()
            .zip(&a)
            .map(|(an, ao)| an + (t - 1.0) / t_new * (an - ao))
            .collect();
        t = t_new;
        a = a_new;
        if (prev_obj - obj).abs() <= config.tolerance * prev_obj.max(1e-12) {
            prev_obj = obj;
            converged = true;
            break;
        }
        prev_obj = obj;
    }

    Ok(LassoResult { coefficients: a, iterations, converged, objective: prev_obj })
}

/// Unpenalized least-squares refit restricted to a recovered support;
/// removes the lasso shrinkage bias from the coefficients.
pub fn least_squares_refit(
    xi: &SamplingMatrix,
    x: &[f64],
    support: &[usize],
) -> Result<Vec<(usize, f64)>> {
    if support.is_empty() {
        return Ok(Vec::new());
    }
    let n = xi.n_rows;
    let sub = DMatrix::from_fn(n, support.len(), |r, c| xi.column(support[c])[r]);
    let gram = sub.transpose() * &sub;
    let target = sub.transpose() * DVector::from_column_slice(x);
    let coef = gram
        .cholesky()
        .map(|ch| ch.solve(&target))
        .ok_or_else(|| VsaError::Numerical("singular support submatrix".into()))?;
    Ok(support.iter().copied().zip(coef.iter().copied()).collect())
}

/// The log grid used when tuning lambda for recovery experiments:
/// 13 points spanning 1e-4 to 1.
pub fn lambda_grid() -> Vec<f64> {
    (0..13)
        .map(|i| 10f64.powf(-4.0 + 4.0 * i as f64 / 12.0))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cs::compress;

    #[test]
    fn huge_lambda_gives_zero_solution() {
        let xi = SamplingMatrix::random_bipolar(32, 64, 1);
        let x: Vec<f64> = xi.column(3);
        let res = lasso_solve(
            &xi,
            &x,
            &LassoConfig { lambda: 1e6, ..Default::default() },
        )
        .unwrap();
        assert!(res.coefficients.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn zero_lambda_orthogonal_matrix_recovers_least_squares() {
        // Sylvester-Hadamard columns are mutually orthogonal, so the
        // least-squares solution is Xi^T x / N.
        let n = 8;
        let mut h = vec![vec![1.0f64]];
        while h.len() < n {
            let size = h.len();
            let mut next = vec![vec![0.0; 2 * size]; 2 * size];
            for r in 0..size {
                for c in 0..size {
                    next[r][c] = h[r][c];
                    next[r][c + size] = h[r][c];
                    next[r + size][c] = h[r][c];
                    next[r + size][c + size] = -h[r][c];
                }
            }
            h = next;
        }
        let cols: Vec<Vec<f64>> = (0..n).map(|c| (0..n).map(|r| h[r][c]).collect()).collect();
        let xi = SamplingMatrix::from_columns(&cols).unwrap();
        let x: Vec<f64> = (0..n).map(|i| i as f64 - 3.5).collect();
        let res = lasso_solve(
            &xi,
            &x,
            &LassoConfig { lambda: 0.0, tolerance: 1e-14, ..Default::default() },
        )
        .unwrap();
        let expect: Vec<f64> = xi.tr_matvec(&x).unwrap().iter().map(|v| v / n as f64).collect();
        for (got, want) in res.coefficients.iter().zip(&expect) {
            assert!((got - want).abs() < 1e-6, "{got} vs {want}");
        }
    }

    #[test]
    fn recovers_sparse_support_with_tuned_lambda() {
        // N=150, M=500, K=5: pick lambda on the log grid, refit on the
        // recovered support, check exact support and small coefficient error.
        let (n, m, k) = (150, 500, 5);
        let xi = SamplingMatrix::random_bipolar(n, m, 7);
        let truth: Vec<(usize, f64)> = (0..k).map(|i| (i * 97 + 11, 1.0 + 0.2 * i as f64)).collect();
        let x = compress(&xi, &truth).unwrap();

        let mut best: Option<(usize, Vec<(usize, f64)>)> = None;
        for (gi, lambda) in lambda_grid().into_iter().enumerate() {
            let res = lasso_solve(
                &xi,
                &x,
                &LassoConfig { lambda: lambda * n as f64, ..Default::default() },
            )
            .unwrap();
            let mut support: Vec<usize> = res
                .coefficients
                .iter()
                .enumerate()
                .filter(|(_, &v)| v.abs() > 1e-3)
                .map(|(i, _)| i)
                .collect();
            support.sort_unstable();
            let want: Vec<usize> = truth.iter().map(|&(i, _)| i).collect();
            if support == want {
                let refit = least_squares_refit(&xi, &x, &support).unwrap();
                best = Some((gi, refit));
                break;
            }
        }
        let (_, refit) = best.expect("no lambda on the grid recovered the support");
        for (&(i, v), &(ti, tv)) in refit.iter().zip(&truth) {
            assert_eq!(i, ti);
            assert!((v - tv).abs() < 1e-3, "coef {v} vs {tv}");
        }
    }
}
