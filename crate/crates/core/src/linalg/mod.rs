//! Dense, scalar-generic linear algebra used by every other module.

mod mat;
mod norm;
mod qr;
mod scalar;
mod solve;
mod srr;
mod svd;

pub use mat::Mat;
pub use norm::{spectral_norm_est, LinearOperator};
pub use qr::{cpqr, cpqr_truncated, Cpqr};
pub use scalar::Scalar;
pub use solve::{pseudo_inverse, solve_square};
pub use srr::{srr, srr_with_floor, SrrConfig, SrrResult};
pub use svd::{norm2, singular_values, svd_dense, svd_dense_capped, Svd, SVD_ORACLE_CAP};

/// `{0..m} \ idx` in increasing order.
pub fn complement(idx: &[usize], m: usize) -> Vec<usize> {
    let mut taken = vec![false; m];
    for &i in idx {
        taken[i] = true;
    }
    (0..m).filter(|&i| !taken[i]).collect()
}
