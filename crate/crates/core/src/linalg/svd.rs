//! One-sided Jacobi SVD for desk-scale oracles.

use super::qr::cpqr;
use super::{Mat, Scalar};
use crate::error::{Error, Result};

/// Default cap on `min(m, n)` accepted by [`svd_dense`].
pub const SVD_ORACLE_CAP: usize = 4096;

const MAX_SWEEPS: usize = 80;

/// Thin SVD `M = U * diag(sigma) * V^H` with `sigma` sorted descending.
#[derive(Debug, Clone)]
pub struct Svd<T: Scalar> {
    pub u: Mat<T>,
    pub sigma: Vec<f64>,
    pub v: Mat<T>,
}

impl<T: Scalar> Svd<T> {
    pub fn reconstruct(&self) -> Mat<T> {
        let mut us = self.u.clone();
        for (j, &s) in self.sigma.iter().enumerate() {
            for v in us.col_mut(j) {
                *v = v.scale(s);
            }
        }
        us.matmul(&self.v.adjoint())
    }
}

pub fn svd_dense<T: Scalar>(m: &Mat<T>) -> Result<Svd<T>> {
    svd_dense_capped(m, SVD_ORACLE_CAP)
}

pub fn svd_dense_capped<T: Scalar>(m: &Mat<T>, cap: usize) -> Result<Svd<T>> {
    check(m, cap)?;
    if m.nrows() < m.ncols() {
        let t = tall_svd(&m.adjoint(), true);
        return Ok(Svd {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
        });
    }
    Ok(tall_svd(m, true))
}

/// Singular values only, descending.
pub fn singular_values<T: Scalar>(m: &Mat<T>) -> Result<Vec<f64>> {
    check(m, SVD_ORACLE_CAP)?;
    if m.nrows() < m.ncols() {
        return Ok(tall_svd(&m.adjoint(), false).sigma);
    }
    Ok(tall_svd(m, false).sigma)
}

/// Largest singular value; zero for an empty matrix.
pub fn norm2<T: Scalar>(m: &Mat<T>) -> Result<f64> {
    if m.is_empty() {
        return Ok(0.0);
    }
    Ok(singular_values(m)?.first().copied().unwrap_or(0.0))
}

fn check<T: Scalar>(m: &Mat<T>, cap: usize) -> Result<()> {
    if m.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    let k = m.nrows().min(m.ncols());
    if k > cap {
        return Err(Error::OracleCap { size: k, cap });
    }
    if !m.is_finite() {
        for j in 0..m.ncols() {
            if let Some(i) = m.col(j).iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite { row: i, col: j });
            }
        }
    }
    Ok(())
}

/// `m` has at least as many rows as columns.
fn tall_svd<T: Scalar>(m: &Mat<T>, vectors: bool) -> Svd<T> {
    let (rows, n) = m.shape();
    // Pivoted QR first: Jacobi then works on the n x n triangle.
    let scale = m.max_abs();
    let unit = if scale > 0.0 { m.scaled(T::from_f64(1.0 / scale)) } else { m.clone() };
    let qr = cpqr(&unit).expect("checked input");
    let mut b = qr.r();
    let mut w = if vectors { Some(Mat::identity(n)) } else { None };
    jacobi(&mut b, w.as_mut());

    let mut sigma: Vec<f64> = (0..n).map(|j| b.col(j).iter().map(|v| v.modulus_sq()).sum::<f64>().sqrt()).collect();
    let unscale = if scale > 0.0 { scale } else { 1.0 };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &c| sigma[c].partial_cmp(&sigma[a]).unwrap().then(a.cmp(&c)));
    sigma = order.iter().map(|&j| sigma[j]).collect();

    if !vectors {
        return Svd {
            u: Mat::zeros(0, 0),
            sigma: sigma.iter().map(|s| s * unscale).collect(),
            v: Mat::zeros(0, 0),
        };
    }
    let w = w.expect("vectors requested");

    // Left vectors of the triangle, completed to an orthonormal set.
    let mut ur = Mat::zeros(n, n);
    let smax = sigma.first().copied().unwrap_or(0.0);
    let tiny = smax * f64::EPSILON * (n as f64);
    let mut filled = Vec::with_capacity(n);
    for (dst, &j) in order.iter().enumerate() {
        let s = sigma[dst];
        if s > tiny && s > 0.0 {
            let col: Vec<T> = b.col(j).iter().map(|v| v.scale(1.0 / s)).collect();
            ur.col_mut(dst).copy_from_slice(&col);
            filled.push(dst);
        }
    }
    complete_orthonormal(&mut ur, &filled);

    let mut u = Mat::zeros(rows, n);
    for j in 0..n {
        u.col_mut(j)[..n].copy_from_slice(ur.col(j));
    }
    qr.apply_q(&mut u);

    // V = P * W, columns reordered by sigma.
    let perm = qr.perm();
    let mut v = Mat::zeros(n, n);
    for (dst, &j) in order.iter().enumerate() {
        for i in 0..n {
            v[(perm[i], dst)] = w[(i, j)];
        }
    }
    Svd { u, sigma: sigma.iter().map(|s| s * unscale).collect(), v }
}

/// Orthogonalizes the columns of `b` in place, accumulating rotations in `w`.
fn jacobi<T: Scalar>(b: &mut Mat<T>, mut w: Option<&mut Mat<T>>) {
    let n = b.ncols();
    let mut norms: Vec<f64> = (0..n).map(|j| b.col(j).iter().map(|v| v.modulus_sq()).sum()).collect();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = norms[p];
                let beta = norms[q];
                // Columns this small would underflow the rotation; they are zero for our purposes.
                if alpha < f64::MIN_POSITIVE || beta < f64::MIN_POSITIVE {
                    continue;
                }
                let gamma: T = b.col(p).iter().zip(b.col(q)).map(|(&x, &y)| x.conj() * y).sum();
                let g = gamma.modulus();
                if g <= f64::EPSILON * (alpha * beta).sqrt() || g < f64::MIN_POSITIVE {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let e = gamma.scale(1.0 / g);
                rotate(b, p, q, c, s, e);
                if let Some(w) = w.as_deref_mut() {
                    rotate(w, p, q, c, s, e);
                }
                norms[p] = b.col(p).iter().map(|v| v.modulus_sq()).sum();
                norms[q] = b.col(q).iter().map(|v| v.modulus_sq()).sum();
            }
        }
        if !rotated {
            break;
        }
    }
}

/// `[x_p, x_q] <- [c x_p - s conj(e) x_q, s e x_p + c x_q]`.
fn rotate<T: Scalar>(m: &mut Mat<T>, p: usize, q: usize, c: f64, s: f64, e: T) {
    let rows = m.nrows();
    let ec = e.conj();
    for i in 0..rows {
        let xp = m[(i, p)];
        let xq = m[(i, q)];
        m[(i, p)] = xp.scale(c) - ec * xq.scale(s);
        m[(i, q)] = e * xp.scale(s) + xq.scale(c);
    }
}

/// Fills the columns not listed in `filled` with unit vectors orthogonal to
/// everything already present (Gram-Schmidt over the standard basis).
fn complete_orthonormal<T: Scalar>(u: &mut Mat<T>, filled: &[usize]) {
    let n = u.ncols();
    let rows = u.nrows();
    let mut done: Vec<usize> = filled.to_vec();
    let mut candidate = 0;
    for dst in 0..n {
        if filled.contains(&dst) {
            continue;
        }
        loop {
            assert!(candidate < rows, "orthonormal completion ran out of candidates");
            let mut v = vec![T::zero(); rows];
            v[candidate] = T::one();
            candidate += 1;
            for _ in 0..2 {
                for &k in &done {
                    let d: T = u.col(k).iter().zip(&v).map(|(&a, &b)| a.conj() * b).sum();
                    for (vi, &a) in v.iter_mut().zip(u.col(k)) {
                        *vi -= a * d;
                    }
                }
            }
            let nrm = v.iter().map(|x| x.modulus_sq()).sum::<f64>().sqrt();
            if nrm > 0.5 {
                for x in &mut v {
                    *x = x.scale(1.0 / nrm);
                }
                u.col_mut(dst).copy_from_slice(&v);
                done.push(dst);
                break;
            }
        }
    }
}
