//! Least-squares helpers on top of nalgebra.

use alloc::string::String;
use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Relative residual norm below which a column counts as collinear.
const COLLINEAR_TOL: f64 = 1e-9;

/// Indices of columns lying (numerically) in the span of earlier columns,
/// found by modified Gram–Schmidt.
pub(crate) fn collinear_columns(x: &DMatrix<f64>) -> Vec<usize> {
    let mut basis: Vec<DVector<f64>> = Vec::new();
    let mut out = Vec::new();
    for j in 0..x.ncols() {
        let orig = x.column(j).into_owned();
        let scale = orig.norm();
        let mut v = orig;
        for q in &basis {
            let c = q.dot(&v);
            v.axpy(-c, q, 1.0);
        }
        let r = v.norm();
        if scale == 0.0 || r <= COLLINEAR_TOL * scale {
            out.push(j);
        } else {
            basis.push(v / r);
        }
    }
    out
}

pub(crate) struct OlsFit {
    pub beta: DVector<f64>,
    pub resid: DVector<f64>,
    pub rss: f64,
    /// `(XᵀX)⁻¹`
    pub xtx_inv: DMatrix<f64>,
}

/// Least squares via thin QR. Fails with the names of collinear columns.
pub(crate) fn ols(x: &DMatrix<f64>, y: &DVector<f64>, names: &[String]) -> Result<OlsFit> {
    let bad = collinear_columns(x);
    if !bad.is_empty() {
        return Err(Error::RankDeficient(bad.into_iter().map(|j| names[j].clone()).collect()));
    }
    let k = x.ncols();
    let qr = x.clone().qr();
    let r = qr.r();
    let qty = qr.q().transpose() * y;
    let beta = r
        .solve_upper_triangular(&qty)
        .ok_or_else(|| Error::RankDeficient(names.to_vec()))?;
    let r_inv = r
        .solve_upper_triangular(&DMatrix::identity(k, k))
        .ok_or_else(|| Error::RankDeficient(names.to_vec()))?;
    let xtx_inv = &r_inv * r_inv.transpose();
    let resid = y - x * &beta;
    let rss = resid.norm_squared();
    Ok(OlsFit {
        beta,
        resid,
        rss,
        xtx_inv,
    })
}

/// Inverse of a symmetric positive-definite matrix, or `None`.
pub(crate) fn spd_inverse(a: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    a.clone().cholesky().map(|c| c.inverse())
}

/// Moore–Penrose pseudo-inverse of a symmetric matrix, discarding
/// eigenvalues that are non-positive or negligible relative to the largest.
pub(crate) fn sym_pinv(a: &DMatrix<f64>) -> DMatrix<f64> {
    let eig = nalgebra::SymmetricEigen::new(a.clone());
    let top = eig.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = top * 1e-12 * a.nrows() as f64;
    let inv = eig.eigenvalues.map(|l| if l > tol { 1.0 / l } else { 0.0 });
    &eig.eigenvectors * DMatrix::from_diagonal(&inv) * eig.eigenvectors.transpose()
}
