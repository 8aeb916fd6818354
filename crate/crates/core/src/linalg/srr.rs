//! Skinny rank-revealing factorization of a tall block.
//!
//! For a tall `m x k` block `M` this selects pivot rows `I` and a
//! coefficient matrix `E` with `M(comp(I), :) = E * M(I, :)` (up to the
//! truncated part) and `max |E_ij| <= c`. Row selection is a column-pivoted
//! QR of `M^T`, followed by pairwise exchanges of pivot and non-pivot rows
//! until every interpolation coefficient is bounded by `c`. Each exchange
//! multiplies the pivot-block volume by more than `c`, so the loop
//! terminates.

use super::qr::{back_substitute, cpqr_truncated};
use super::{complement, Mat, Scalar};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SrrConfig {
    /// Bound target for `max |E_ij|`; at least 1.
    pub c: f64,
    /// Relative threshold on pivoted diagonals for declaring rank deficiency.
    pub rank_tol: f64,
    /// Cap on exchange iterations; `None` means `3 * m * k`.
    pub max_swaps: Option<usize>,
}

impl Default for SrrConfig {
    fn default() -> Self {
        Self {
            c: 2.0,
            rank_tol: 1e-15,
            max_swaps: None,
        }
    }
}

impl SrrConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.c >= 1.0) {
            return Err(Error::Config(format!("srr c must be >= 1, got {}", self.c)));
        }
        if !(self.rank_tol > 0.0 && self.rank_tol < 1.0) {
            return Err(Error::Config(format!(
                "srr rank_tol must lie in (0, 1), got {}",
                self.rank_tol
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SrrResult<T: Scalar> {
    /// Pivot rows in discovery order.
    pub pivots: Vec<usize>,
    /// `(m - rank) x rank`; row `t` belongs to the `t`-th smallest non-pivot index.
    pub coeff: Mat<T>,
    pub rank: usize,
    /// Exchanges performed after the pivoted QR.
    pub swaps: usize,
}

impl<T: Scalar> SrrResult<T> {
    /// Non-pivot rows in increasing order (the row order of `coeff`).
    pub fn complement(&self, m: usize) -> Vec<usize> {
        complement(&self.pivots, m)
    }

    /// Dense `m x rank` interpolation matrix `U` with `M ~ U * M(I, :)`.
    pub fn interpolation_matrix(&self, m: usize) -> Mat<T> {
        let mut u = Mat::zeros(m, self.rank);
        for (t, &p) in self.pivots.iter().enumerate() {
            u[(p, t)] = T::one();
        }
        for (r, &i) in self.complement(m).iter().enumerate() {
            for t in 0..self.rank {
                u[(i, t)] = self.coeff[(r, t)];
            }
        }
        u
    }
}

/// Skinny rank-revealing factorization with the default noise floor of zero.
pub fn srr<T: Scalar>(m: &Mat<T>, cfg: &SrrConfig) -> Result<SrrResult<T>> {
    srr_with_floor(m, cfg, 0.0)
}

/// As [`srr`], but rows whose residual norm falls to `abs_floor` or below
/// are never pivoted. Used when `M` is itself a computed quantity carrying
/// rounding noise of known size.
pub fn srr_with_floor<T: Scalar>(m: &Mat<T>, cfg: &SrrConfig, abs_floor: f64) -> Result<SrrResult<T>> {
    cfg.validate()?;
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return Err(Error::EmptyMatrix);
    }
    let qr = cpqr_truncated(&m.transpose(), cfg.rank_tol, abs_floor).map_err(|e| match e {
        Error::NonFinite { row, col } => Error::NonFinite { row: col, col: row },
        other => other,
    })?;
    let rank = qr.rank();
    let perm = qr.perm();
    let mut pivots: Vec<usize> = perm[..rank].to_vec();
    let mut others: Vec<usize> = perm[rank..].to_vec();

    // W = R11^{-1} R12, stored column-per-non-pivot: w[(t, q)].
    let r = qr.r();
    let mut w = Mat::zeros(rank, others.len());
    for q in 0..others.len() {
        let mut b: Vec<T> = (0..rank).map(|t| r[(t, rank + q)]).collect();
        back_substitute(&r, rank, &mut b);
        w.col_mut(q).copy_from_slice(&b);
    }

    let limit = cfg.max_swaps.unwrap_or(3 * rows * cols);
    let mut swaps = 0;
    while rank > 0 && !others.is_empty() {
        let (mut bp, mut bq, mut best) = (0, 0, 0.0f64);
        for q in 0..others.len() {
            for (p, v) in w.col(q).iter().enumerate() {
                let a = v.modulus();
                if a > best {
                    best = a;
                    bp = p;
                    bq = q;
                }
            }
        }
        if best <= cfg.c {
            break;
        }
        if swaps == limit {
            return Err(Error::SwapLimit { limit });
        }
        exchange(&mut w, bp, bq);
        std::mem::swap(&mut pivots[bp], &mut others[bq]);
        swaps += 1;
    }

    // Reorder coefficient rows by increasing non-pivot index.
    let mut order: Vec<usize> = (0..others.len()).collect();
    order.sort_by_key(|&q| others[q]);
    let coeff = Mat::from_fn(others.len(), rank, |i, t| w[(t, order[i])]);

    Ok(SrrResult {
        pivots,
        coeff,
        rank,
        swaps,
    })
}

/// Basis exchange: pivot `p` leaves, non-pivot `q` enters.
///
/// Columns of `w` give each non-pivot in the pivot basis; after the
/// exchange column `q` describes the departed pivot.
fn exchange<T: Scalar>(w: &mut Mat<T>, p: usize, q: usize) {
    let (k, nq) = w.shape();
    let piv = w[(p, q)];
    let inv = T::one() / piv;
    let colq: Vec<T> = w.col(q).to_vec();
    for j in 0..nq {
        if j == q {
            continue;
        }
        let f = w[(p, j)] * inv;
        if f == T::zero() {
            continue;
        }
        let col = w.col_mut(j);
        for (t, v) in col.iter_mut().enumerate() {
            if t != p {
                *v -= colq[t] * f;
            }
        }
        col[p] = f;
    }
    let col = w.col_mut(q);
    for t in 0..k {
        col[t] = if t == p { inv } else { -colq[t] * inv };
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn residual<T: Scalar>(m: &Mat<T>, s: &SrrResult<T>) -> f64 {
        let comp = s.complement(m.nrows());
        let approx = s.coeff.matmul(&m.select_rows(&s.pivots));
        m.select_rows(&comp).sub(&approx).norm_fro()
    }

    #[test]
    fn identity_block() {
        let m = Mat::from_fn(25, 5, |i, j| if i == j { 1.0 } else { 0.0 });
        let s = srr(&m, &SrrConfig::default()).unwrap();
        let mut p = s.pivots.clone();
        p.sort();
        assert_eq!(p, vec![0, 1, 2, 3, 4]);
        assert_eq!(s.rank, 5);
        assert_eq!(s.coeff.shape(), (20, 5));
        assert_eq!(s.coeff.max_abs(), 0.0);
    }

    #[test]
    fn duplicate_row_gets_unit_coefficients() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut m: Mat<f64> = Mat::random_normal(12, 4, &mut rng);
        for j in 0..4 {
            m[(7, j)] = m[(2, j)];
        }
        let s = srr(&m, &SrrConfig::default()).unwrap();
        let comp = s.complement(12);
        if let Some(r) = comp.iter().position(|&i| i == 7) {
            let pos2 = s.pivots.iter().position(|&i| i == 2).expect("row 2 pivoted");
            for t in 0..s.rank {
                let expect = if t == pos2 { 1.0 } else { 0.0 };
                assert!((s.coeff[(r, t)] - expect).abs() < 1e-12);
            }
        } else {
            let pos7 = s.pivots.iter().position(|&i| i == 7).unwrap();
            let r = comp.iter().position(|&i| i == 2).unwrap();
            assert!((s.coeff[(r, pos7)] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn seeded_gaussian_residual_and_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(50);
        let m: Mat<f64> = Mat::random_normal(50, 5, &mut rng);
        let cfg = SrrConfig::default();
        let s = srr(&m, &cfg).unwrap();
        assert_eq!(s.rank, 5);
        assert!(residual(&m, &s) <= 1e-10 * m.norm_fro());
        assert!(s.coeff.max_abs() <= cfg.c);
    }

    #[test]
    fn swaps_enforce_tight_bound() {
        // c = 1 forces a maximum-volume style pivot set.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let cfg = SrrConfig { c: 1.0, ..SrrConfig::default() };
        for _ in 0..20 {
            let m: Mat<Complex64> = Mat::random_normal(80, 6, &mut rng);
            let s = srr(&m, &cfg).unwrap();
            assert!(s.coeff.max_abs() <= 1.0);
            assert!(residual(&m, &s) <= 1e-10 * m.norm_fro());
        }
    }

    #[test]
    fn wide_input_has_rank_at_most_rows() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let m: Mat<f64> = Mat::random_normal(2, 6, &mut rng);
        let s = srr(&m, &SrrConfig::default()).unwrap();
        assert_eq!(s.rank, 2);
        assert_eq!(s.coeff.shape(), (0, 2));
    }

    #[test]
    fn errors() {
        let cfg = SrrConfig::default();
        assert!(matches!(srr(&Mat::<f64>::zeros(0, 2), &cfg), Err(Error::EmptyMatrix)));
        let mut m = Mat::<f64>::zeros(3, 2);
        m[(2, 1)] = f64::INFINITY;
        assert!(matches!(srr(&m, &cfg), Err(Error::NonFinite { row: 2, col: 1 })));
        let bad = SrrConfig { c: 0.5, ..cfg };
        assert!(srr(&Mat::<f64>::identity(2), &bad).is_err());
    }

    #[test]
    fn swap_limit_is_an_error() {
        // Rows chosen so the pivoted QR picks a poor pair: large first row,
        // then two nearly parallel rows that interpolate badly.
        let m = Mat::from_rows(&[
            vec![10.0, 0.0],
            vec![9.0, 0.1],
            vec![1.0, 3.0],
            vec![-8.0, 3.0],
        ])
        .unwrap();
        let cfg = SrrConfig { c: 1.0, max_swaps: Some(0), ..SrrConfig::default() };
        let res = srr(&m, &cfg);
        let relaxed = srr(&m, &SrrConfig { c: 1.0, ..SrrConfig::default() }).unwrap();
        if relaxed.swaps > 0 {
            assert!(matches!(res, Err(Error::SwapLimit { limit: 0 })));
        } else {
            assert!(res.is_ok());
        }
    }
}
