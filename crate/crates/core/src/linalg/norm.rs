use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Mat, Scalar};
use crate::error::{Error, Result};

/// Matrix-free access through `y = M x` and `x = M^H y`.
pub trait LinearOperator<T: Scalar> {
    fn nrows(&self) -> usize;
    fn ncols(&self) -> usize;
    fn apply(&self, x: &[T]) -> Vec<T>;
    fn apply_adjoint(&self, y: &[T]) -> Vec<T>;
}

impl<T: Scalar> LinearOperator<T> for Mat<T> {
    fn nrows(&self) -> usize {
        Mat::nrows(self)
    }
    fn ncols(&self) -> usize {
        Mat::ncols(self)
    }
    fn apply(&self, x: &[T]) -> Vec<T> {
        self.mul_vec(x)
    }
    fn apply_adjoint(&self, y: &[T]) -> Vec<T> {
        self.adjoint_mul_vec(y)
    }
}

fn norm<T: Scalar>(v: &[T]) -> f64 {
    v.iter().map(|x| x.modulus_sq()).sum::<f64>().sqrt()
}

/// Power iteration on `M^H M` from a seeded Gaussian start.
///
/// Returns the largest `||M x||` seen over unit iterates, which never
/// exceeds `sigma_1` beyond rounding.
pub fn spectral_norm_est<T: Scalar, Op: LinearOperator<T> + ?Sized>(
    op: &Op,
    iters: usize,
    seed: u64,
) -> Result<f64> {
    if iters < 10 {
        return Err(Error::Config(format!("spectral_norm_est needs iters >= 10, got {iters}")));
    }
    let n = op.ncols();
    if n == 0 || op.nrows() == 0 {
        return Ok(0.0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x: Vec<T> = (0..n).map(|_| T::sample_normal(&mut rng)).collect();
    let nx = norm(&x);
    x.iter_mut().for_each(|v| *v = v.scale(1.0 / nx));

    let mut best = 0.0f64;
    for _ in 0..iters {
        let y = op.apply(&x);
        let ny = norm(&y);
        if !ny.is_finite() {
            return Ok(ny);
        }
        best = best.max(ny);
        if ny == 0.0 {
            break;
        }
        let z = op.apply_adjoint(&y);
        let nz = norm(&z);
        if nz == 0.0 {
            break;
        }
        x = z.into_iter().map(|v| v.scale(1.0 / nz)).collect();
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_norm() {
        let est = spectral_norm_est(&Mat::<f64>::identity(10), 10, 1).unwrap();
        assert!((est - 1.0).abs() < 1e-10);
    }

    #[test]
    fn diagonal_dominant_value() {
        let mut d = vec![1.0; 20];
        d[0] = 5.0;
        let est = spectral_norm_est(&Mat::from_diag(&d), 100, 4).unwrap();
        assert!((est - 5.0).abs() < 0.05);
        assert!(est <= 5.0 + 1e-12);
    }

    #[test]
    fn too_few_iterations() {
        assert!(spectral_norm_est(&Mat::<f64>::identity(3), 9, 0).is_err());
    }

    #[test]
    fn zero_operator() {
        assert_eq!(spectral_norm_est(&Mat::<f64>::zeros(4, 4), 10, 0).unwrap(), 0.0);
    }
}
