use super::qr::{back_substitute, cpqr, cpqr_truncated};
use super::{Mat, Scalar};
use crate::error::{Error, Result};

/// Solves `A X = B` for square `A` through pivoted QR.
///
/// A pivoted diagonal below `k * eps * |R[0,0]|` is treated as a
/// numerical zero and reported as [`Error::Singular`] with the detected rank.
pub fn solve_square<T: Scalar>(a: &Mat<T>, b: &Mat<T>) -> Result<Mat<T>> {
    let k = a.nrows();
    if k == 0 {
        return Err(Error::EmptyMatrix);
    }
    if a.ncols() != k || b.nrows() != k {
        return Err(Error::DimensionMismatch(format!(
            "solve_square: A is {}x{}, B is {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    let qr = cpqr(a)?;
    let d = qr.diag_moduli();
    let tol = (k as f64) * f64::EPSILON * d[0];
    let rank = d.iter().take_while(|&&v| v > tol).count();
    if rank < k {
        return Err(Error::Singular { rank, size: k });
    }
    let mut y = b.clone();
    qr.apply_qh(&mut y);
    let r = qr.r();
    let perm = qr.perm();
    let mut x = Mat::zeros(k, b.ncols());
    for j in 0..b.ncols() {
        let mut col = y.col(j).to_vec();
        back_substitute(&r, k, &mut col);
        for (t, &p) in perm.iter().enumerate() {
            x[(p, j)] = col[t];
        }
    }
    Ok(x)
}

/// Pseudoinverse of the rank-truncated matrix, via a complete orthogonal
/// decomposition built from two pivoted QR factorizations.
///
/// `W P = Q [R11 R12]` (rank `r`), then `[R11 R12]^H P2 = Z L`, so that
/// `W ~ (Q1 P2) L^H Z^H P^T` and `W^+ = P Z L^{-H} P2^T Q1^H`.
pub fn pseudo_inverse<T: Scalar>(w: &Mat<T>, rank_tol: f64) -> Result<(Mat<T>, usize)> {
    let (m, n) = w.shape();
    let qr = cpqr_truncated(w, rank_tol, 0.0)?;
    let r = qr.rank();
    if r == 0 {
        return Ok((Mat::zeros(n, m), 0));
    }
    let top = qr.r(); // r x n, in permuted column order
    let second = cpqr(&top.adjoint())?; // n x r
    let l = second.r(); // r x r upper triangular
    let p2 = second.perm();

    // Q1^H as r x m.
    let mut qh = Mat::zeros(m, m);
    for i in 0..m {
        qh[(i, i)] = T::one();
    }
    qr.apply_qh(&mut qh);
    let q1h = Mat::from_fn(r, m, |i, j| qh[(i, j)]);

    // Y = P2^T Q1^H, then solve L^H X = Y (forward substitution).
    let mut y = Mat::from_fn(r, m, |i, j| q1h[(p2[i], j)]);
    for j in 0..m {
        let col = y.col_mut(j);
        for i in 0..r {
            let mut s = col[i];
            for t in 0..i {
                s -= l[(t, i)].conj() * col[t];
            }
            col[i] = s / l[(i, i)].conj();
        }
    }

    // Z X with Z the thin Q of the second factorization (n x r).
    let mut zx = Mat::zeros(n, m);
    for j in 0..m {
        zx.col_mut(j)[..r].copy_from_slice(y.col(j));
    }
    second.apply_q(&mut zx);

    let perm = qr.perm();
    let mut out = Mat::zeros(n, m);
    for (t, &p) in perm.iter().enumerate() {
        for j in 0..m {
            out[(p, j)] = zx[(t, j)];
        }
    }
    Ok((out, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_and_scaled_identity() {
        let b = Mat::from_fn(3, 2, |i, j| (i + 2 * j) as f64);
        let x = solve_square(&Mat::identity(3), &b).unwrap();
        assert!(x.sub(&b).max_abs() < 1e-15);
        let x = solve_square(&Mat::<f64>::identity(4).scaled(2.0), &Mat::identity(4)).unwrap();
        assert!(x.sub(&Mat::identity(4).scaled(0.5)).max_abs() < 1e-15);
    }

    #[test]
    fn seeded_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a: Mat<f64> = Mat::random_normal(8, 8, &mut rng).add(&Mat::identity(8).scaled(6.0));
        let b: Mat<f64> = Mat::random_normal(8, 3, &mut rng);
        let x = solve_square(&a, &b).unwrap();
        assert!(a.matmul(&x).sub(&b).norm_fro() <= 1e-10 * a.norm_fro() * x.norm_fro());
    }

    #[test]
    fn singular_reports_rank() {
        let a = Mat::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        match solve_square(&a, &Mat::identity(2)) {
            Err(Error::Singular { rank, size }) => assert_eq!((rank, size), (1, 2)),
            other => panic!("expected singular, got {other:?}"),
        }
    }

    #[test]
    fn pseudo_inverse_penrose_conditions() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let u: Mat<Complex64> = Mat::random_normal(7, 3, &mut rng);
        let v: Mat<Complex64> = Mat::random_normal(3, 5, &mut rng);
        let w = u.matmul(&v);
        let (p, r) = pseudo_inverse(&w, 1e-12).unwrap();
        assert_eq!(r, 3);
        let scale = w.norm_fro();
        assert!(w.matmul(&p).matmul(&w).sub(&w).norm_fro() < 1e-10 * scale);
        assert!(p.matmul(&w).matmul(&p).sub(&p).norm_fro() < 1e-10 * p.norm_fro());
        let wp = w.matmul(&p);
        assert!(wp.sub(&wp.adjoint()).norm_fro() < 1e-10);
        let pw = p.matmul(&w);
        assert!(pw.sub(&pw.adjoint()).norm_fro() < 1e-10);
    }
}
