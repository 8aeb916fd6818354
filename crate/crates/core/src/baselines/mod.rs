//! Classical Nystrom schemes used as baselines: uniform CUR, one-shot row
//! pivoting, and alternating refinement.

mod approx;

pub use approx::{LowRankApprox, Residual};

use rand::Rng;

use crate::error::{Error, Result};
use crate::kernel::{MatrixAccess, Transposed};
use crate::linalg::{pseudo_inverse, srr, Scalar, SrrConfig, SrrResult};
use crate::sampling::uniform_subset;

/// `A(:, J) A(I, J)^+ A(I, :)` with `I`, `J` uniform of size `s`.
pub fn nys_basic<T, A, R>(src: &A, s: usize, rank_tol: f64, rng: &mut R) -> Result<LowRankApprox<T>>
where
    T: Scalar,
    A: MatrixAccess<T> + ?Sized,
    R: Rng + ?Sized,
{
    let (m, n) = (src.nrows(), src.ncols());
    if s == 0 || s > m.min(n) {
        return Err(Error::Config(format!("sample size {s} must lie in 1..={}", m.min(n))));
    }
    let rows = uniform_subset(rng, m, s);
    let cols = uniform_subset(rng, n, s);
    let c = src.cols(&cols)?;
    let r = src.rows(&rows)?;
    let w = c.select_rows(&rows);
    let (core, rank) = pseudo_inverse(&w, rank_tol)?;
    Ok(LowRankApprox::Cur { rows, cols, c, core, r, rank })
}

/// Row skeleton `U A(I, :)` with `I` from one SRR of `A(:, J)`, `J` uniform.
pub fn nys_pivot<T, A, R>(src: &A, s: usize, cfg: &SrrConfig, rng: &mut R) -> Result<LowRankApprox<T>>
where
    T: Scalar,
    A: MatrixAccess<T> + ?Sized,
    R: Rng + ?Sized,
{
    check_sample(src, s)?;
    let cols = uniform_subset(rng, src.ncols(), s);
    let piv = srr(&src.cols(&cols)?, cfg)?;
    row_skeleton(src, &piv)
}

/// Alternating refinement started from [`nys_pivot`]'s column sample.
///
/// Each round takes `J` from an SRR of `A(I, :)^T` and then `I` from an SRR
/// of `A(:, J)`; it stops after `steps` rounds or once `I` comes back
/// unchanged. Returns the row skeleton and the number of rounds run.
pub fn nys_refine<T, A, R>(
    src: &A,
    s: usize,
    steps: usize,
    cfg: &SrrConfig,
    rng: &mut R,
) -> Result<(LowRankApprox<T>, usize)>
where
    T: Scalar,
    A: MatrixAccess<T> + ?Sized,
    R: Rng + ?Sized,
{
    if steps == 0 {
        return Err(Error::Config("refinement needs at least one step".into()));
    }
    check_sample(src, s)?;
    let cols = uniform_subset(rng, src.ncols(), s);
    let mut piv = srr(&src.cols(&cols)?, cfg)?;
    let mut skel = src.rows(&piv.pivots)?;
    let mut rounds = 0;
    while rounds < steps {
        rounds += 1;
        let cols = srr(&skel.transpose(), cfg)?.pivots;
        let next = srr(&src.cols(&cols)?, cfg)?;
        let unchanged = same_set(&next.pivots, &piv.pivots);
        skel = if unchanged {
            let pos: Vec<usize> = next
                .pivots
                .iter()
                .map(|i| piv.pivots.iter().position(|p| p == i).unwrap())
                .collect();
            skel.select_rows(&pos)
        } else {
            src.rows(&next.pivots)?
        };
        piv = next;
        if unchanged {
            break;
        }
    }
    let u = piv.interpolation_matrix(src.nrows());
    Ok((LowRankApprox::row_skeleton(piv.pivots, u, skel)?, rounds))
}

fn check_sample<T: Scalar, A: MatrixAccess<T> + ?Sized>(src: &A, s: usize) -> Result<()> {
    if s == 0 || s > src.ncols() {
        return Err(Error::Config(format!("sample size {s} must lie in 1..={}", src.ncols())));
    }
    Ok(())
}

pub(crate) fn same_set(a: &[usize], b: &[usize]) -> bool {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_unstable();
    b.sort_unstable();
    a == b
}

/// `U A(I, :)` from a row SRR of some column block of `src`.
pub fn row_skeleton<T, A>(src: &A, piv: &SrrResult<T>) -> Result<LowRankApprox<T>>
where
    T: Scalar,
    A: MatrixAccess<T> + ?Sized,
{
    let skel = src.rows(&piv.pivots)?;
    LowRankApprox::row_skeleton(piv.pivots.clone(), piv.interpolation_matrix(src.nrows()), skel)
}

/// `A(:, J) V^T` from an SRR of `A(I, :)^T` (pivots are columns of `src`).
pub fn col_skeleton<T, A>(src: &A, piv: &SrrResult<T>) -> Result<LowRankApprox<T>>
where
    T: Scalar,
    A: MatrixAccess<T> + ?Sized,
{
    let skel = Transposed(src).rows(&piv.pivots)?.transpose();
    LowRankApprox::col_skeleton(piv.pivots.clone(), piv.interpolation_matrix(src.ncols()), skel)
}
