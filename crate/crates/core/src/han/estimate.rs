//! Randomized error estimators from sampled Schur-complement columns.

use crate::error::{Error, Result};
use crate::linalg::{norm2, Mat, Scalar};

/// `theta = (n - k) / b * ||S(:, L)||_F^2`, an unbiased estimate of the
/// squared Frobenius residual when `L` is a uniform sample of size `b`.
pub fn estimate_theta<T: Scalar>(s_cols: &Mat<T>, n: usize, k: usize) -> Result<f64> {
    let b = s_cols.ncols();
    check(b, n, k)?;
    Ok((n - k) as f64 / b as f64 * s_cols.norm_fro_sq())
}

/// `phi = sqrt((n - k) / b) * ||S(:, L)||_2 / ||A11||_2`, an estimate of the
/// relative spectral residual.
pub fn estimate_phi<T: Scalar>(s_cols: &Mat<T>, a11: &Mat<T>, n: usize, k: usize) -> Result<f64> {
    let b = s_cols.ncols();
    check(b, n, k)?;
    if a11.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    let den = norm2(a11)?;
    if den == 0.0 {
        return Err(Error::ZeroNorm("A11"));
    }
    let num = if s_cols.is_empty() { 0.0 } else { norm2(s_cols)? };
    Ok(((n - k) as f64 / b as f64).sqrt() * num / den)
}

fn check(b: usize, n: usize, k: usize) -> Result<()> {
    if b == 0 {
        return Err(Error::Config("estimator needs at least one sampled column".into()));
    }
    if k >= n {
        return Err(Error::Config(format!("estimator needs k < n, got k = {k}, n = {n}")));
    }
    Ok(())
}
