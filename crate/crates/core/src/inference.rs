//! Maximum-likelihood estimation: stratified conditional logit with
//! Breslow ties for the rate model, plain logistic regression for the
//! type model.
//!
//! Both fits use Newton-Raphson from beta = 0 with step-halving and
//! log-sum-exp stabilization. Per-stratum contributions are computed in
//! parallel but reduced in stratum order, so results are bit-identical
//! for any thread count.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::FitError;

/// One stratum of the rate-model dataset: one row per distinct candidate
/// at risk, `y[i]` = how many of the stratum's events chose row i (0 for
/// null rows, > 1 when the same candidate fired repeatedly that day).
/// The risk-set denominator counts every row exactly once.
#[derive(Debug, Clone)]
pub struct ClogitStratum {
    pub x: Vec<Vec<f64>>,
    pub y: Vec<u32>,
}

impl ClogitStratum {
    pub fn n_true(&self) -> usize {
        self.y.iter().map(|&v| v as usize).sum()
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FitOptions {
    pub max_iter: usize,
    pub grad_tol: f64,
    pub ll_rel_tol: f64,
    /// Coefficient norm above which a diverging fit is reported as separation.
    pub separation_norm: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            max_iter: 200,
            grad_tol: 1e-8,
            ll_rel_tol: 1e-12,
            separation_norm: 1e3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convergence {
    Converged,
    MaxIter,
    /// Hessian singular at the optimum; covariance is a pseudo-inverse.
    Singular,
    /// Diverging coefficient norm, typically complete separation.
    Separation,
}

/// Fitted model with standard errors and fit metrics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelFit {
    pub names: Vec<String>,
    pub coefficients: Vec<f64>,
    pub covariance: Vec<Vec<f64>>,
    pub std_errors: Vec<f64>,
    pub log_likelihood: f64,
    pub null_log_likelihood: f64,
    pub aic: f64,
    pub bic: f64,
    pub mcfadden_r2: f64,
    pub n_events: usize,
    pub n_obs: usize,
    pub convergence: Convergence,
    pub n_dropped_strata: usize,
}

impl ModelFit {
    pub fn z_values(&self) -> Vec<f64> {
        self.coefficients
            .iter()
            .zip(&self.std_errors)
            .map(|(&c, &se)| if se > 0.0 { c / se } else { f64::NAN })
            .collect()
    }

    pub fn p_values(&self) -> Vec<f64> {
        self.z_values()
            .iter()
            .map(|&z| {
                if z.is_nan() {
                    f64::NAN
                } else {
                    2.0 * normal_sf(z.abs())
                }
            })
            .collect()
    }
}

/// Upper tail of the standard normal via the complementary error function.
pub fn normal_sf(z: f64) -> f64 {
    0.5 * erfc(z / std::f64::consts::SQRT_2)
}

// Abramowitz & Stegun 7.1.26 rational approximation, |error| < 1.5e-7,
// refined by one halving step on the symmetry relation for z < 0.
fn erfc(x: f64) -> f64 {
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    let t = 1.0 / (1.0 + 0.3275911 * x);
    let poly = t
        * (0.254829592
            + t * (-0.284496736 + t * (1.421413741 + t * (-1.453152027 + t * 1.061405429))));
    poly * (-x * x).exp()
}

fn logsumexp(values: &[f64]) -> f64 {
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    let sum: f64 = values.iter().map(|&v| (v - max).exp()).sum();
    max + sum.ln()
}

struct Contribution {
    ll: f64,
    grad: DVector<f64>,
    neg_hess: DMatrix<f64>,
}

/// Breslow-tie conditional-logit contribution of one stratum.
fn clogit_contribution(stratum: &ClogitStratum, beta: &DVector<f64>, k: usize) -> Contribution {
    let scores: Vec<f64> = stratum
        .x
        .iter()
        .map(|row| row.iter().zip(beta.iter()).map(|(x, b)| x * b).sum())
        .collect();
    let lse = logsumexp(&scores);
    let d = stratum.n_true() as f64;

    let mut ll = -d * lse;
    let mut grad = DVector::zeros(k);
    let mut mean = DVector::zeros(k);
    let mut second = DMatrix::zeros(k, k);
    for (row, (&score, &count)) in stratum.x.iter().zip(scores.iter().zip(&stratum.y)) {
        let p = (score - lse).exp();
        let xr = DVector::from_column_slice(row);
        mean += p * &xr;
        second += p * &xr * xr.transpose();
        if count > 0 {
            ll += count as f64 * score;
            grad += count as f64 * xr;
        }
    }
    grad -= d * &mean;
    let neg_hess = d * (second - &mean * mean.transpose());
    Contribution { ll, grad, neg_hess }
}

/// Log-likelihood, gradient, and negative Hessian of the Breslow
/// conditional-logit objective at `beta`.
pub fn clogit_objective(
    strata: &[ClogitStratum],
    beta: &[f64],
) -> (f64, Vec<f64>, Vec<Vec<f64>>) {
    let k = beta.len();
    let bv = DVector::from_column_slice(beta);
    let parts: Vec<Contribution> = strata
        .par_iter()
        .map(|s| clogit_contribution(s, &bv, k))
        .collect();
    let mut ll = 0.0;
    let mut grad = DVector::zeros(k);
    let mut neg_hess = DMatrix::zeros(k, k);
    for p in parts {
        ll += p.ll;
        grad += p.grad;
        neg_hess += p.neg_hess;
    }
    (
        ll,
        grad.iter().cloned().collect(),
        matrix_rows(&neg_hess),
    )
}

fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| m[(r, c)]).collect())
        .collect()
}

fn solve_newton_step(
    neg_hess: &DMatrix<f64>,
    grad: &DVector<f64>,
) -> Option<DVector<f64>> {
    // Damped Cholesky: add ridge until positive definite if needed.
    let k = neg_hess.nrows();
    let mut lambda = 0.0;
    let scale = neg_hess.diagonal().amax().max(1e-12);
    for _ in 0..20 {
        let m = neg_hess + DMatrix::identity(k, k) * lambda;
        if let Some(chol) = m.clone().cholesky() {
            return Some(chol.solve(grad));
        }
        lambda = if lambda == 0.0 { scale * 1e-8 } else { lambda * 10.0 };
    }
    None
}

fn pseudo_inverse(m: &DMatrix<f64>) -> DMatrix<f64> {
    m.clone()
        .svd(true, true)
        .pseudo_inverse(1e-10)
        .unwrap_or_else(|_| DMatrix::zeros(m.nrows(), m.ncols()))
}

/// Re-inflate a fit on a column subset to the full column list. Aliased
/// columns get coefficient 0, NaN variance, and zero covariance with the
/// estimated ones.
fn expand_aliased(fit: ModelFit, names: &[String], kept: &[usize]) -> ModelFit {
    let k = names.len();
    let mut coefficients = vec![0.0; k];
    let mut std_errors = vec![f64::NAN; k];
    let mut covariance = vec![vec![0.0; k]; k];
    for row in covariance.iter_mut().enumerate().filter(|(j, _)| !kept.contains(j)) {
        row.1[row.0] = f64::NAN;
    }
    for (r, &j) in kept.iter().enumerate() {
        coefficients[j] = fit.coefficients[r];
        std_errors[j] = fit.std_errors[r];
        for (c, &m) in kept.iter().enumerate() {
            covariance[j][m] = fit.covariance[r][c];
        }
    }
    ModelFit {
        names: names.to_vec(),
        coefficients,
        covariance,
        std_errors,
        ..fit
    }
}

struct NewtonResult {
    beta: DVector<f64>,
    ll: f64,
    covariance: DMatrix<f64>,
    convergence: Convergence,
}

fn newton<F>(k: usize, options: &FitOptions, objective: F) -> Result<NewtonResult, FitError>
where
    F: Fn(&DVector<f64>) -> (f64, DVector<f64>, DMatrix<f64>),
{
    let mut beta = DVector::zeros(k);
    let (mut ll, mut grad, mut neg_hess) = objective(&beta);
    if !ll.is_finite() {
        return Err(FitError::NonFiniteLikelihood { iteration: 0 });
    }
    let mut convergence = Convergence::MaxIter;
    for iter in 0..options.max_iter {
        if grad.amax() < options.grad_tol {
            convergence = Convergence::Converged;
            break;
        }
        let step = solve_newton_step(&neg_hess, &grad)
            .unwrap_or_else(|| grad.clone() / neg_hess.diagonal().amax().max(1.0));
        let mut scale = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let trial = &beta + scale * &step;
            let (trial_ll, trial_grad, trial_hess) = objective(&trial);
            if trial_ll.is_finite() && trial_ll >= ll - 1e-14 {
                let rel_change = (trial_ll - ll).abs() / (ll.abs() + 1.0);
                beta = trial;
                ll = trial_ll;
                grad = trial_grad;
                neg_hess = trial_hess;
                accepted = true;
                if rel_change < options.ll_rel_tol {
                    convergence = if grad.amax() < options.grad_tol * 1e4 {
                        Convergence::Converged
                    } else {
                        Convergence::MaxIter
                    };
                }
                break;
            }
            scale *= 0.5;
        }
        if !accepted {
            // No improving step found; treat the current point as optimum.
            convergence = Convergence::Converged;
            break;
        }
        if beta.amax() > options.separation_norm {
            convergence = Convergence::Separation;
            break;
        }
        if convergence == Convergence::Converged {
            break;
        }
        if !ll.is_finite() {
            return Err(FitError::NonFiniteLikelihood { iteration: iter + 1 });
        }
    }
    if grad.amax() < options.grad_tol && convergence == Convergence::MaxIter {
        convergence = Convergence::Converged;
    }

    let covariance = match neg_hess.clone().cholesky() {
        Some(chol) => chol.inverse(),
        None => {
            if convergence == Convergence::Converged {
                convergence = Convergence::Singular;
            }
            pseudo_inverse(&neg_hess)
        }
    };
    Ok(NewtonResult {
        beta,
        ll,
        covariance,
        convergence,
    })
}

fn finish_fit(
    names: Vec<String>,
    result: NewtonResult,
    null_ll: f64,
    n_events: usize,
    n_obs: usize,
    n_for_bic: usize,
    n_dropped: usize,
) -> ModelFit {
    let k = result.beta.len() as f64;
    let std_errors: Vec<f64> = result
        .covariance
        .diagonal()
        .iter()
        .map(|&v| if v >= 0.0 { v.sqrt() } else { f64::NAN })
        .collect();
    let mcfadden = if null_ll < 0.0 {
        1.0 - result.ll / null_ll
    } else {
        0.0
    };
    ModelFit {
        names,
        coefficients: result.beta.iter().cloned().collect(),
        covariance: matrix_rows(&result.covariance),
        std_errors,
        log_likelihood: result.ll,
        null_log_likelihood: null_ll,
        aic: 2.0 * k - 2.0 * result.ll,
        bic: k * (n_for_bic as f64).ln() - 2.0 * result.ll,
        mcfadden_r2: mcfadden,
        n_events,
        n_obs,
        convergence: result.convergence,
        n_dropped_strata: n_dropped,
    }
}

/// Fit the stratified conditional logit (Breslow ties) by Newton-Raphson.
/// Strata without any null row contribute nothing and are dropped.
/// Columns constant within every stratum (e.g. day-level dummies under
/// day strata) cancel out of the conditional likelihood entirely; they
/// are excluded from the optimization and reported with coefficient 0
/// and NaN standard error.
pub fn fit_conditional_logit(
    strata: &[ClogitStratum],
    names: &[String],
    options: &FitOptions,
) -> Result<ModelFit, FitError> {
    let k = names.len();
    let usable: Vec<&ClogitStratum> = strata
        .iter()
        .filter(|s| s.n_true() >= 1 && s.y.iter().any(|&v| v == 0))
        .collect();
    let n_dropped = strata.len() - usable.len();
    if usable.is_empty() {
        return Err(FitError::NoStrata);
    }
    for s in &usable {
        if s.x.iter().any(|row| row.len() != k) {
            return Err(FitError::Dimension(format!(
                "covariate rows must have {k} entries"
            )));
        }
    }

    let kept: Vec<usize> = (0..k)
        .filter(|&j| {
            usable
                .iter()
                .any(|s| s.x.iter().any(|row| row[j] != s.x[0][j]))
        })
        .collect();
    if kept.is_empty() {
        // every column cancels out of the conditional likelihood: the
        // fit is the null model
        let null_ll: f64 = usable
            .iter()
            .map(|s| -(s.n_true() as f64) * (s.y.len() as f64).ln())
            .sum();
        let n_events: usize = usable.iter().map(|s| s.n_true()).sum();
        let n_obs: usize = usable.iter().map(|s| s.y.len()).sum();
        let result = NewtonResult {
            beta: DVector::zeros(k),
            ll: null_ll,
            covariance: DMatrix::from_element(k, k, f64::NAN),
            convergence: Convergence::Converged,
        };
        return Ok(finish_fit(
            names.to_vec(),
            result,
            null_ll,
            n_events,
            n_obs,
            n_obs,
            n_dropped,
        ));
    }
    if kept.len() < k {
        let reduced: Vec<ClogitStratum> = strata
            .iter()
            .map(|s| ClogitStratum {
                x: s
                    .x
                    .iter()
                    .map(|row| kept.iter().map(|&j| row[j]).collect())
                    .collect(),
                y: s.y.clone(),
            })
            .collect();
        let reduced_names: Vec<String> = kept.iter().map(|&j| names[j].clone()).collect();
        let fit = fit_conditional_logit(&reduced, &reduced_names, options)?;
        return Ok(expand_aliased(fit, names, &kept));
    }

    let null_ll: f64 = usable
        .iter()
        .map(|s| -(s.n_true() as f64) * (s.y.len() as f64).ln())
        .sum();
    let n_events: usize = usable.iter().map(|s| s.n_true()).sum();
    let n_obs: usize = usable.iter().map(|s| s.y.len()).sum();

    let result = newton(k, options, |beta| {
        let parts: Vec<Contribution> = usable
            .par_iter()
            .map(|s| clogit_contribution(s, beta, k))
            .collect();
        let mut ll = 0.0;
        let mut grad = DVector::zeros(k);
        let mut neg_hess = DMatrix::zeros(k, k);
        for p in parts {
            ll += p.ll;
            grad += p.grad;
            neg_hess += p.neg_hess;
        }
        (ll, grad, neg_hess)
    })?;

    Ok(finish_fit(
        names.to_vec(),
        result,
        null_ll,
        n_events,
        n_obs,
        n_obs,
        n_dropped,
    ))
}

/// Log-likelihood, gradient, and negative Hessian of the Bernoulli-logit
/// objective at `beta`. Covariate rows must already contain any intercept.
pub fn logistic_objective(
    x: &[Vec<f64>],
    y: &[bool],
    beta: &[f64],
) -> (f64, Vec<f64>, Vec<Vec<f64>>) {
    let (ll, grad, neg_hess) = logistic_parts(x, y, &DVector::from_column_slice(beta));
    (ll, grad.iter().cloned().collect(), matrix_rows(&neg_hess))
}

fn logistic_parts(
    x: &[Vec<f64>],
    y: &[bool],
    beta: &DVector<f64>,
) -> (f64, DVector<f64>, DMatrix<f64>) {
    let k = beta.len();
    let mut ll = 0.0;
    let mut grad = DVector::zeros(k);
    let mut neg_hess = DMatrix::zeros(k, k);
    for (row, &yi) in x.iter().zip(y) {
        let score: f64 = row.iter().zip(beta.iter()).map(|(x, b)| x * b).sum();
        // log(1 + e^s) computed stably
        let log1pexp = if score > 0.0 {
            score + (-score).exp().ln_1p()
        } else {
            score.exp().ln_1p()
        };
        let p = 1.0 / (1.0 + (-score).exp());
        ll += if yi { score - log1pexp } else { -log1pexp };
        let xr = DVector::from_column_slice(row);
        grad += ((yi as u8 as f64) - p) * &xr;
        neg_hess += p * (1.0 - p) * &xr * xr.transpose();
    }
    (ll, grad, neg_hess)
}

/// Fit a logistic regression by Newton-Raphson. The null model is the
/// intercept-only fit, which has the closed form ln(k/(n-k)).
pub fn fit_logistic(
    x: &[Vec<f64>],
    y: &[bool],
    names: &[String],
    options: &FitOptions,
) -> Result<ModelFit, FitError> {
    let k = names.len();
    let n = y.len();
    let n_pos = y.iter().filter(|&&v| v).count();
    if n_pos == 0 || n_pos == n {
        return Err(FitError::ConstantOutcome);
    }
    if x.iter().any(|row| row.len() != k) {
        return Err(FitError::Dimension(format!(
            "covariate rows must have {k} entries"
        )));
    }

    let p0 = n_pos as f64 / n as f64;
    let null_ll = n_pos as f64 * p0.ln() + (n - n_pos) as f64 * (1.0 - p0).ln();

    let result = newton(k, options, |beta| logistic_parts(x, y, beta))?;
    Ok(finish_fit(
        names.to_vec(),
        result,
        null_ll,
        n_pos,
        n,
        n,
        0,
    ))
}

/// Overall likelihood of the temporal topology: the two maximized
/// log-likelihoods added together.
pub fn combined_log_likelihood(rate_fit: &ModelFit, type_fit: &ModelFit) -> f64 {
    rate_fit.log_likelihood + type_fit.log_likelihood
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn names(k: usize) -> Vec<String> {
        (0..k).map(|i| format!("x{i}")).collect()
    }

    #[test]
    fn zero_covariates_give_null_fit() {
        let strata = vec![
            ClogitStratum {
                x: vec![vec![0.0], vec![0.0], vec![0.0]],
                y: vec![1, 0, 0],
            },
            ClogitStratum {
                x: vec![vec![0.0], vec![0.0]],
                y: vec![1, 0],
            },
        ];
        let fit = fit_conditional_logit(&strata, &names(1), &FitOptions::default()).unwrap();
        assert_eq!(fit.coefficients[0], 0.0);
        assert_relative_eq!(fit.log_likelihood, fit.null_log_likelihood, epsilon = 1e-12);
        assert_relative_eq!(fit.null_log_likelihood, -(3.0f64.ln() + 2.0f64.ln()), epsilon = 1e-12);
    }

    #[test]
    fn clogit_matches_explicit_scalar_maximum() {
        // Two strata, one covariate; the likelihood enumerated explicitly
        // and maximized by the grid/golden oracle.
        let strata = vec![
            ClogitStratum {
                x: vec![vec![1.0], vec![0.2], vec![-0.5]],
                y: vec![1, 0, 0],
            },
            // opposite orientation so the maximizer is finite
            ClogitStratum {
                x: vec![vec![-0.3], vec![0.9]],
                y: vec![1, 0],
            },
        ];
        let explicit = |b: f64| -> f64 {
            let s1 = [1.0, 0.2, -0.5].map(|x| (x * b) as f64);
            let s2 = [-0.3, 0.9].map(|x| (x * b) as f64);
            let lse1 = s1.iter().map(|v| v.exp()).sum::<f64>().ln();
            let lse2 = s2.iter().map(|v| v.exp()).sum::<f64>().ln();
            (s1[0] - lse1) + (s2[0] - lse2)
        };
        let oracle =
            crate::oracle::grid_mle(|p| explicit(p[0]), &[(-10.0, 10.0)], 2000).unwrap();
        let fit = fit_conditional_logit(&strata, &names(1), &FitOptions::default()).unwrap();
        assert_eq!(fit.convergence, Convergence::Converged);
        assert!((fit.coefficients[0] - oracle.argmax[0]).abs() < 1e-4);
        assert_relative_eq!(fit.log_likelihood, explicit(fit.coefficients[0]), epsilon = 1e-12);
    }

    #[test]
    fn strata_without_nulls_are_dropped() {
        let strata = vec![
            ClogitStratum {
                x: vec![vec![1.0]],
                y: vec![1],
            },
            ClogitStratum {
                x: vec![vec![0.4], vec![-0.4]],
                y: vec![1, 0],
            },
        ];
        let fit = fit_conditional_logit(&strata, &names(1), &FitOptions::default()).unwrap();
        assert_eq!(fit.n_dropped_strata, 1);
        assert_eq!(fit.n_obs, 2);
        assert_eq!(fit.n_events, 1);
    }

    #[test]
    fn stratum_constant_shift_invariance() {
        let strata = vec![ClogitStratum {
            x: vec![vec![0.3], vec![-0.2], vec![0.8]],
            y: vec![1, 0, 0],
        }];
        let shifted = vec![ClogitStratum {
            x: vec![vec![0.3 + 5.0], vec![-0.2 + 5.0], vec![0.8 + 5.0]],
            y: vec![1, 0, 0],
        }];
        let beta = [0.7];
        let (ll1, g1, _) = clogit_objective(&strata, &beta);
        let (ll2, g2, _) = clogit_objective(&shifted, &beta);
        assert_relative_eq!(ll1, ll2, epsilon = 1e-10);
        assert_relative_eq!(g1[0], g2[0], epsilon = 1e-10);
    }

    #[test]
    fn clogit_gradient_matches_finite_differences() {
        let strata = vec![
            ClogitStratum {
                x: vec![vec![1.0, 0.3], vec![0.2, -0.7], vec![-0.5, 0.1]],
                y: vec![1, 0, 0],
            },
            ClogitStratum {
                x: vec![vec![-0.3, 0.9], vec![0.9, 0.5], vec![0.0, -1.0]],
                y: vec![0, 1, 1],
            },
        ];
        let beta = [0.37, -0.61];
        let (_, grad, neg_hess) = clogit_objective(&strata, &beta);
        let eps = 1e-6;
        for k in 0..2 {
            let mut up = beta;
            let mut dn = beta;
            up[k] += eps;
            dn[k] -= eps;
            let (ll_up, g_up, _) = clogit_objective(&strata, &up);
            let (ll_dn, g_dn, _) = clogit_objective(&strata, &dn);
            let fd = (ll_up - ll_dn) / (2.0 * eps);
            assert_relative_eq!(grad[k], fd, max_relative = 1e-6, epsilon = 1e-9);
            for m in 0..2 {
                // the finite difference of the gradient is the Hessian,
                // i.e. minus the returned negative Hessian
                let fd_h = -(g_up[m] - g_dn[m]) / (2.0 * eps);
                assert_relative_eq!(neg_hess[k][m], fd_h, max_relative = 1e-4, epsilon = 1e-7);
            }
        }
    }

    #[test]
    fn logistic_intercept_only_closed_form() {
        let x: Vec<Vec<f64>> = (0..10).map(|_| vec![1.0]).collect();
        let y: Vec<bool> = (0..10).map(|i| i < 3).collect();
        let fit = fit_logistic(&x, &y, &["intercept".into()], &FitOptions::default()).unwrap();
        assert_relative_eq!(fit.coefficients[0], (3.0f64 / 7.0).ln(), epsilon = 1e-8);
        assert_relative_eq!(fit.log_likelihood, fit.null_log_likelihood, epsilon = 1e-10);
    }

    #[test]
    fn logistic_antisymmetric_covariate() {
        let x = vec![vec![1.0, 1.0], vec![1.0, -1.0], vec![1.0, 2.0], vec![1.0, -2.0]];
        let y = vec![true, false, true, false];
        let fit = fit_logistic(
            &x,
            &y,
            &["intercept".into(), "x".into()],
            &FitOptions {
                separation_norm: 1e6,
                ..FitOptions::default()
            },
        )
        .unwrap();
        // perfectly separated in fact, but the intercept stays at 0 by symmetry
        assert!(fit.coefficients[1] > 0.0);
        assert!(fit.coefficients[0].abs() < 1e-6);
    }

    #[test]
    fn logistic_separation_detected() {
        // covariate magnitudes so small that the coefficient must pass
        // the divergence threshold before the likelihood saturates
        let x = vec![
            vec![1.0, -0.001],
            vec![1.0, -0.002],
            vec![1.0, 0.001],
            vec![1.0, 0.002],
        ];
        let y = vec![false, false, true, true];
        let fit = fit_logistic(
            &x,
            &y,
            &["intercept".into(), "x".into()],
            &FitOptions::default(),
        )
        .unwrap();
        assert_eq!(fit.convergence, Convergence::Separation);
    }

    #[test]
    fn logistic_constant_outcome_rejected() {
        let x = vec![vec![1.0], vec![1.0]];
        let y = vec![true, true];
        assert!(matches!(
            fit_logistic(&x, &y, &["intercept".into()], &FitOptions::default()),
            Err(FitError::ConstantOutcome)
        ));
    }

    #[test]
    fn combined_likelihood_is_additive() {
        let strata = vec![ClogitStratum {
            x: vec![vec![0.5], vec![-0.5]],
            y: vec![1, 0],
        }];
        let rate = fit_conditional_logit(&strata, &names(1), &FitOptions::default()).unwrap();
        let x = vec![vec![1.0], vec![1.0], vec![1.0]];
        let y = vec![true, true, false];
        let ty = fit_logistic(&x, &y, &["intercept".into()], &FitOptions::default()).unwrap();
        assert_eq!(
            combined_log_likelihood(&rate, &ty),
            rate.log_likelihood + ty.log_likelihood
        );
    }

    #[test]
    fn reparameterization_scales_coefficient() {
        let strata = vec![
            ClogitStratum {
                x: vec![vec![1.0], vec![0.2], vec![-0.5]],
                y: vec![1, 0, 0],
            },
            ClogitStratum {
                x: vec![vec![-0.3], vec![0.9]],
                y: vec![1, 0],
            },
        ];
        let scaled: Vec<ClogitStratum> = strata
            .iter()
            .map(|s| ClogitStratum {
                x: s.x.iter().map(|r| vec![r[0] * 4.0]).collect(),
                y: s.y.clone(),
            })
            .collect();
        let f1 = fit_conditional_logit(&strata, &names(1), &FitOptions::default()).unwrap();
        let f2 = fit_conditional_logit(&scaled, &names(1), &FitOptions::default()).unwrap();
        assert_relative_eq!(f2.coefficients[0], f1.coefficients[0] / 4.0, max_relative = 1e-6);
        assert_relative_eq!(f2.log_likelihood, f1.log_likelihood, epsilon = 1e-8);
    }
}
