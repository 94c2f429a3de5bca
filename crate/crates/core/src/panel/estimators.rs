use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use super::linalg::{ols, OlsFit};
use super::{
    Coefficient, Design, Estimator, PanelSample, RegressionResult, RegressionSpec, ResidualSummary,
    VarianceComponents, INTERCEPT,
};
use crate::dist;
use crate::error::{Error, Result};
use crate::warning::{emit, Warning};

/// Relative sum of squares below which a transformed column counts as zero.
const ZERO_COLUMN_TOL: f64 = 1e-12;

fn coefficients(names: &[String], beta: &DVector<f64>, cov: &DMatrix<f64>, df: usize) -> Vec<Coefficient> {
    names
        .iter()
        .enumerate()
        .map(|(j, name)| {
            let se = libm::sqrt(cov[(j, j)].max(0.0));
            let estimate = beta[j];
            let t_value = if se > 0.0 {
                estimate / se
            } else if estimate == 0.0 {
                0.0
            } else {
                f64::INFINITY.copysign(estimate)
            };
            Coefficient {
                name: name.clone(),
                estimate,
                std_error: se,
                t_value,
                p_value: dist::t_two_sided(t_value, df as f64),
            }
        })
        .collect()
}

fn centered_ss(y: &DVector<f64>) -> f64 {
    let m = y.mean();
    y.iter().map(|v| (v - m) * (v - m)).sum()
}

struct Fit {
    r_squared: f64,
    adj_r_squared: f64,
    f_statistic: Option<f64>,
    f_p_value: Option<f64>,
}

/// R², adjusted R², and the F test of `model_df` restrictions.
fn fit_stats(tss: f64, rss: f64, n: usize, model_df: usize, df_resid: usize) -> Fit {
    let r2 = if tss > 0.0 { 1.0 - rss / tss } else { 0.0 };
    let adj = 1.0 - (1.0 - r2) * (n - 1) as f64 / df_resid as f64;
    let (f, p) = if model_df == 0 || tss <= 0.0 {
        (None, None)
    } else if rss == 0.0 {
        (Some(f64::INFINITY), Some(0.0))
    } else {
        let f = ((tss - rss) / model_df as f64) / (rss / df_resid as f64);
        (Some(f), Some(dist::f_sf(f, model_df as f64, df_resid as f64)))
    };
    Fit {
        r_squared: r2,
        adj_r_squared: adj,
        f_statistic: f,
        f_p_value: p,
    }
}

fn with_intercept(x: &DMatrix<f64>) -> DMatrix<f64> {
    x.clone().insert_column(x.ncols(), 1.0)
}

/// `v - θ_g · mean_g(v)` for every row.
fn quasi_demean(d: &Design, v: &DVector<f64>, theta: &[f64]) -> DVector<f64> {
    let means = d.group_means(v);
    DVector::from_iterator(
        v.len(),
        v.iter().zip(&d.group).map(|(x, &g)| x - theta[g] * means[g]),
    )
}

fn transform_columns(d: &Design, x: &DMatrix<f64>, theta: &[f64]) -> DMatrix<f64> {
    let mut out = x.clone();
    for j in 0..x.ncols() {
        let col = quasi_demean(d, &x.column(j).into_owned(), theta);
        out.set_column(j, &col);
    }
    out
}

/// Keeps columns whose transformed sum of squares is not negligible
/// relative to the untransformed one.
fn nonzero_columns(orig: &DMatrix<f64>, transformed: &DMatrix<f64>) -> Vec<usize> {
    (0..orig.ncols())
        .filter(|&j| {
            let raw = orig.column(j).norm_squared();
            raw > 0.0 && transformed.column(j).norm_squared() > ZERO_COLUMN_TOL * raw
        })
        .collect()
}

fn select_columns(x: &DMatrix<f64>, keep: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(x.nrows(), keep.len(), |i, j| x[(i, keep[j])])
}

/// Pooled OLS with an intercept and classical standard errors.
pub fn pooled_ols(sample: &PanelSample, spec: &RegressionSpec) -> Result<RegressionResult> {
    let d = Design::build(sample, spec)?;
    let x = with_intercept(&d.x);
    let mut names = d.names.clone();
    names.push(INTERCEPT.to_string());
    let OlsFit {
        beta,
        resid,
        rss,
        xtx_inv,
    } = ols(&x, &d.y, &names)?;
    let (n, k) = (x.nrows(), x.ncols());
    let df = n - k;
    let cov = xtx_inv * (rss / df as f64);
    let fit = fit_stats(centered_ss(&d.y), rss, n, k - 1, df);
    Ok(RegressionResult {
        estimator: Estimator::Pooled,
        coefficients: coefficients(&names, &beta, &cov, df),
        covariance: cov,
        r_squared: fit.r_squared,
        adj_r_squared: fit.adj_r_squared,
        f_statistic: fit.f_statistic,
        f_p_value: fit.f_p_value,
        n_obs: n,
        n_groups: d.n_groups(),
        df_resid: df,
        effects: Vec::new(),
        variance_components: None,
        residuals: ResidualSummary::of(resid.as_slice()),
        dropped: Vec::new(),
    })
}

struct Within {
    kept: Vec<usize>,
    names: Vec<String>,
    fit: OlsFit,
    df: usize,
}

/// Within (group-demeaned) regression on the columns that vary within groups.
fn within(d: &Design) -> Result<Within> {
    let ones = vec![1.0; d.n_groups()];
    let xw = transform_columns(d, &d.x, &ones);
    let yw = quasi_demean(d, &d.y, &ones);
    let kept = nonzero_columns(&d.x, &xw);
    if kept.is_empty() {
        return Err(Error::InsufficientData("no regressor varies within groups".into()));
    }
    let n = d.x.nrows();
    let dof = n as isize - d.n_groups() as isize - kept.len() as isize;
    if dof < 1 {
        return Err(Error::InsufficientData("no residual degrees of freedom after absorbing effects".into()));
    }
    let names: Vec<String> = kept.iter().map(|&j| d.names[j].clone()).collect();
    let fit = ols(&select_columns(&xw, &kept), &yw, &names)?;
    Ok(Within {
        kept,
        names,
        fit,
        df: dof as usize,
    })
}

/// Fixed-effects (within) estimator.
///
/// Regressors without within-group variation are dropped with a warning.
/// The reported intercept is `ȳ - x̄ᵀβ`; `effects` hold each group's
/// deviation from it. R² and F refer to the model including the effects.
pub fn fixed_effects(sample: &PanelSample, spec: &RegressionSpec, warnings: &mut Vec<Warning>) -> Result<RegressionResult> {
    let d = Design::build(sample, spec)?;
    let w = within(&d)?;
    for j in (0..d.x.ncols()).filter(|j| !w.kept.contains(j)) {
        emit(
            warnings,
            Warning::DroppedNoWithinVariation {
                column: d.names[j].clone(),
            },
        );
    }
    let (n, k, g) = (d.x.nrows(), w.kept.len(), d.n_groups());
    let s2 = w.fit.rss / w.df as f64;
    let v = &w.fit.xtx_inv * s2;

    let x_kept = select_columns(&d.x, &w.kept);
    let xbar = DVector::from_iterator(k, (0..k).map(|j| x_kept.column(j).mean()));
    let intercept = d.y.mean() - xbar.dot(&w.fit.beta);
    let y_means = d.group_means(&d.y);
    let x_means: Vec<Vec<f64>> = (0..k).map(|j| d.group_means(&x_kept.column(j).into_owned())).collect();
    let effects = (0..g)
        .map(|gi| {
            let fitted: f64 = (0..k).map(|j| x_means[j][gi] * w.fit.beta[j]).sum();
            (d.group_labels[gi].clone(), y_means[gi] - fitted - intercept)
        })
        .collect();

    let mut cov = DMatrix::zeros(k + 1, k + 1);
    cov.view_mut((0, 0), (k, k)).copy_from(&v);
    let v_xbar = &v * &xbar;
    for j in 0..k {
        cov[(j, k)] = -v_xbar[j];
        cov[(k, j)] = -v_xbar[j];
    }
    cov[(k, k)] = s2 / n as f64 + xbar.dot(&v_xbar);
    let mut beta = w.fit.beta.clone().resize_vertically(k + 1, 0.0);
    beta[k] = intercept;
    let mut names = w.names.clone();
    names.push(INTERCEPT.to_string());

    let fit = fit_stats(centered_ss(&d.y), w.fit.rss, n, g - 1 + k, w.df);
    let dropped = (0..d.x.ncols())
        .filter(|j| !w.kept.contains(j))
        .map(|j| d.names[j].clone())
        .collect();
    Ok(RegressionResult {
        estimator: Estimator::FixedEffects,
        coefficients: coefficients(&names, &beta, &cov, w.df),
        covariance: cov,
        r_squared: fit.r_squared,
        adj_r_squared: fit.adj_r_squared,
        f_statistic: fit.f_statistic,
        f_p_value: fit.f_p_value,
        n_obs: n,
        n_groups: g,
        df_resid: w.df,
        effects,
        variance_components: None,
        residuals: ResidualSummary::of(w.fit.resid.as_slice()),
        dropped,
    })
}

/// Options for [`random_effects`].
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RandomEffectsOptions {
    /// Force the quasi-demeaning weight for every group instead of
    /// estimating it. `0` gives pooled OLS, `1` the within estimator.
    pub theta: Option<f64>,
}

/// Random-effects FGLS.
///
/// σ²_ε comes from the within regression and σ²_u from the between
/// regression on group means (Swamy–Arora), using the harmonic mean group
/// size for unbalanced panels. A negative σ²_u is clamped to zero with a
/// warning. Fit statistics refer to the quasi-demeaned regression.
pub fn random_effects(
    sample: &PanelSample,
    spec: &RegressionSpec,
    opts: RandomEffectsOptions,
    warnings: &mut Vec<Warning>,
) -> Result<RegressionResult> {
    let d = Design::build(sample, spec)?;
    let g = d.n_groups();
    let w = within(&d)?;
    let sigma2_e = w.fit.rss / w.df as f64;

    let x_full = with_intercept(&d.x);
    let mut names = d.names.clone();
    names.push(INTERCEPT.to_string());

    let (sigma2_u, theta) = match opts.theta {
        Some(t) => (None, vec![t; g]),
        None => {
            let kb = x_full.ncols();
            if g <= kb {
                return Err(Error::VarianceComponents(alloc::format!(
                    "between regression needs more than {kb} groups (got {g})"
                )));
            }
            let xb = DMatrix::from_fn(g, kb, |gi, j| {
                if j == kb - 1 {
                    1.0
                } else {
                    d.group_means(&d.x.column(j).into_owned())[gi]
                }
            });
            let yb = DVector::from_vec(d.group_means(&d.y));
            let between = ols(&xb, &yb, &names)?;
            let sigma2_b = between.rss / (g - kb) as f64;
            let t_harmonic = g as f64 / d.group_sizes.iter().map(|&t| 1.0 / t as f64).sum::<f64>();
            let mut s2u = sigma2_b - sigma2_e / t_harmonic;
            if s2u < 0.0 {
                emit(warnings, Warning::NegativeVarianceComponent { value: s2u });
                s2u = 0.0;
            }
            let theta = d
                .group_sizes
                .iter()
                .map(|&t| {
                    let denom = t as f64 * s2u + sigma2_e;
                    if denom > 0.0 {
                        1.0 - libm::sqrt(sigma2_e / denom)
                    } else {
                        0.0
                    }
                })
                .collect();
            (Some(s2u), theta)
        }
    };

    let xs = transform_columns(&d, &x_full, &theta);
    let ys = quasi_demean(&d, &d.y, &theta);
    let kept = nonzero_columns(&x_full, &xs);
    let mut dropped = Vec::new();
    for j in (0..x_full.ncols()).filter(|j| !kept.contains(j)) {
        if names[j] != INTERCEPT {
            emit(
                warnings,
                Warning::DroppedNoWithinVariation {
                    column: names[j].clone(),
                },
            );
        }
        dropped.push(names[j].clone());
    }
    let kept_names: Vec<String> = kept.iter().map(|&j| names[j].clone()).collect();
    let fit = ols(&select_columns(&xs, &kept), &ys, &kept_names)?;
    let (n, k) = (d.x.nrows(), kept.len());
    let df = n - k;
    let cov = &fit.xtx_inv * sigma2_e;
    let has_intercept = kept_names.last().is_some_and(|s| s == INTERCEPT);
    let stats = fit_stats(centered_ss(&ys), fit.rss, n, k - usize::from(has_intercept), df);

    Ok(RegressionResult {
        estimator: Estimator::RandomEffects,
        coefficients: coefficients(&kept_names, &fit.beta, &cov, df),
        covariance: cov,
        r_squared: stats.r_squared,
        adj_r_squared: stats.adj_r_squared,
        f_statistic: stats.f_statistic,
        f_p_value: stats.f_p_value,
        n_obs: n,
        n_groups: g,
        df_resid: df,
        effects: Vec::new(),
        variance_components: Some(VarianceComponents {
            sigma2_e,
            sigma2_u,
            theta,
        }),
        residuals: ResidualSummary::of(fit.resid.as_slice()),
        dropped,
    })
}
