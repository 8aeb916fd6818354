//! Expanding a row skeleton by sampling the Schur complement.

use crate::error::{Error, Result};
use crate::kernel::MatrixAccess;
use crate::linalg::{complement, srr_with_floor, Mat, Scalar, SrrConfig};

/// Intermediate quantities of one subset update.
#[derive(Debug, Clone)]
pub struct SchurUpdate<T: Scalar> {
    /// Pivot positions within the non-pivot rows (indices into `comp(I)`).
    pub k: Vec<usize>,
    /// The sampled columns (global indices).
    pub l: Vec<usize>,
    /// Coefficients of the remaining non-pivot rows in terms of the rows `k`.
    pub e_hat: Mat<T>,
    /// `E2 - E_hat * E1`.
    pub e_bar: Mat<T>,
    /// New global row indices, `comp(I)[k]`.
    pub i_hat: Vec<usize>,
    /// `S(k, :)`.
    pub s22: Mat<T>,
    /// The sampled Schur-complement columns `S(:, l)`, rows in `comp(I)` order.
    pub s_cols: Mat<T>,
}

/// Result of [`set_upd`].
#[derive(Debug, Clone)]
pub struct SetUpd<T: Scalar> {
    /// `I ++ I_hat`.
    pub pivots: Vec<usize>,
    /// `(E_bar  E_hat)`, rows in increasing order of `comp(pivots)`.
    pub coeff: Mat<T>,
    pub update: SchurUpdate<T>,
    /// The sampled Schur complement was numerically zero; `pivots` and
    /// `coeff` are the inputs unchanged.
    pub no_update: bool,
}

/// Expands `(I, E)` with new rows chosen from the Schur complement sampled
/// at columns `sample`.
///
/// `coeff` is `(m - |I|) x |I|` with rows in increasing order of `comp(I)`,
/// as produced by [`crate::linalg::srr`]. `sampled` may carry the already
/// fetched block `A(:, sample)`; otherwise it is fetched from `src`.
pub fn set_upd<T, A>(
    src: &A,
    pivots: &[usize],
    coeff: &Mat<T>,
    sample: &[usize],
    sampled: Option<Mat<T>>,
    cfg: &SrrConfig,
) -> Result<SetUpd<T>>
where
    T: Scalar,
    A: MatrixAccess<T> + ?Sized,
{
    let m = src.nrows();
    let k = pivots.len();
    if sample.is_empty() {
        return Err(Error::Config("subset update needs at least one sampled column".into()));
    }
    if coeff.shape() != (m - k, k) {
        return Err(Error::DimensionMismatch(format!(
            "coefficients are {}x{}, expected {}x{}",
            coeff.nrows(),
            coeff.ncols(),
            m - k,
            k
        )));
    }
    let block = match sampled {
        Some(b) if b.shape() == (m, sample.len()) => b,
        Some(b) => {
            return Err(Error::DimensionMismatch(format!(
                "sampled block is {}x{}, expected {}x{}",
                b.nrows(),
                b.ncols(),
                m,
                sample.len()
            )))
        }
        None => src.cols(sample)?,
    };
    let comp = complement(pivots, m);
    if comp.is_empty() {
        return Ok(unchanged(pivots, coeff, sample, Mat::zeros(0, sample.len())));
    }
    let a_piv = block.select_rows(pivots);
    let a_rest = block.select_rows(&comp);
    let s = a_rest.sub(&coeff.matmul(&a_piv));

    let floor = rounding_floor(coeff, &a_piv, &a_rest);
    let piv = srr_with_floor(&s, cfg, floor)?;
    if piv.rank == 0 {
        return Ok(unchanged(pivots, coeff, sample, s));
    }

    let rest: Vec<usize> = piv.complement(comp.len());
    let e1 = coeff.select_rows(&piv.pivots);
    let e2 = coeff.select_rows(&rest);
    let e_bar = e2.sub(&piv.coeff.matmul(&e1));
    let i_hat: Vec<usize> = piv.pivots.iter().map(|&t| comp[t]).collect();
    let mut new_pivots = pivots.to_vec();
    new_pivots.extend_from_slice(&i_hat);
    let coeff_new = e_bar.hstack(&piv.coeff);
    let s22 = s.select_rows(&piv.pivots);
    Ok(SetUpd {
        pivots: new_pivots,
        coeff: coeff_new,
        update: SchurUpdate {
            k: piv.pivots,
            l: sample.to_vec(),
            e_hat: piv.coeff,
            e_bar,
            i_hat,
            s22,
            s_cols: s,
        },
        no_update: false,
    })
}

fn unchanged<T: Scalar>(pivots: &[usize], coeff: &Mat<T>, sample: &[usize], s: Mat<T>) -> SetUpd<T> {
    let k = pivots.len();
    SetUpd {
        pivots: pivots.to_vec(),
        coeff: coeff.clone(),
        update: SchurUpdate {
            k: Vec::new(),
            l: sample.to_vec(),
            e_hat: Mat::zeros(s.nrows(), 0),
            e_bar: Mat::zeros(s.nrows(), k),
            i_hat: Vec::new(),
            s22: Mat::zeros(0, sample.len()),
            s_cols: s,
        },
        no_update: true,
    }
}

/// Largest row norm of the rounding-error bound
/// `(k + 2) eps (|A_rest| + |E| |A_piv|)` on the computed Schur complement.
pub(crate) fn rounding_floor<T: Scalar>(coeff: &Mat<T>, a_piv: &Mat<T>, a_rest: &Mat<T>) -> f64 {
    let (rows, cols) = a_rest.shape();
    let k = coeff.ncols();
    let gamma = (k + 2) as f64 * f64::EPSILON;
    let abs_e = coeff.map(|v| v.modulus());
    let abs_a = a_piv.map(|v| v.modulus());
    let prod = abs_e.matmul(&abs_a);
    let mut worst = 0.0f64;
    for i in 0..rows {
        let mut sq = 0.0;
        for j in 0..cols {
            let b = a_rest[(i, j)].modulus() + if k > 0 { prod[(i, j)] } else { 0.0 };
            sq += b * b;
        }
        worst = worst.max(sq);
    }
    gamma * worst.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{MatrixSource, Transposed};
    use crate::linalg::srr;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_coefficients_single_nonzero_row() {
        // Pivot row 0 spans column 0; row 3 only has weight in column 1.
        let mut a = Mat::<f64>::zeros(5, 2);
        a[(0, 0)] = 1.0;
        a[(3, 1)] = 2.0;
        let src = MatrixSource::dense(a).unwrap();
        let e = Mat::zeros(4, 1);
        let up = set_upd(&src, &[0], &e, &[1], None, &SrrConfig::default()).unwrap();
        assert!(!up.no_update);
        assert_eq!(up.update.i_hat, vec![3]);
        assert_eq!(up.pivots, vec![0, 3]);
        assert_eq!(up.update.e_bar.max_abs(), 0.0);
        assert_eq!(up.coeff.shape(), (3, 2));
    }

    #[test]
    fn rank_two_completion() {
        let u = [1.0, 2.0, -1.0, 0.5, 3.0, 1.5];
        let w = [0.5, -1.0, 2.0, 1.0, 0.0, -2.0];
        let a = Mat::from_fn(6, 4, |i, j| u[i] * (1.0 + j as f64) + w[i] * ((j * j) as f64));
        let src = MatrixSource::dense(a.clone()).unwrap();
        let cfg = SrrConfig::default();
        let first = srr(&a.select_cols(&[0]), &cfg).unwrap();
        let up = set_upd(&src, &first.pivots, &first.coeff, &[2], None, &cfg).unwrap();
        assert_eq!(up.pivots.len(), 2);
        let comp = complement(&up.pivots, 6);
        let approx = up.coeff.matmul(&a.select_rows(&up.pivots));
        assert!(a.select_rows(&comp).sub(&approx).norm_fro() <= 1e-12 * a.norm_fro());
    }

    #[test]
    fn converged_input_flags_no_update() {
        let a = Mat::from_fn(8, 6, |i, j| (1.0 + i as f64) * (1.0 + 0.1 * j as f64));
        let src = MatrixSource::dense(a.clone()).unwrap();
        let cfg = SrrConfig::default();
        let first = srr(&a.select_cols(&[0, 1]), &cfg).unwrap();
        assert_eq!(first.rank, 1);
        let up = set_upd(&src, &first.pivots, &first.coeff, &[3, 5], None, &cfg).unwrap();
        assert!(up.no_update);
        assert_eq!(up.pivots, first.pivots);
    }

    #[test]
    fn expanded_skeleton_on_kernel_block() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let x: Vec<f64> = (0..60).map(|i| i as f64 / 60.0).collect();
        let y: Vec<f64> = (0..80).map(|j| 2.0 + j as f64 / 40.0).collect();
        let src: MatrixSource<f64> = MatrixSource::kernel(
            crate::kernel::KernelSpec::InvDist,
            crate::kernel::PointSet::new(1, x).unwrap(),
            crate::kernel::PointSet::new(1, y).unwrap(),
            false,
        )
        .unwrap();
        let cfg = SrrConfig::default();
        let j0 = crate::sampling::uniform_subset(&mut rng, 80, 5);
        let first = srr(&src.cols(&j0).unwrap(), &cfg).unwrap();
        let rest: Vec<usize> = crate::sampling::sample_new(&mut rng, 80, &j0, 5).0;
        let up = set_upd(&src, &first.pivots, &first.coeff, &rest, None, &cfg).unwrap();
        let mut jt = j0.clone();
        jt.extend_from_slice(&rest);
        let block = src.cols(&jt).unwrap();
        let comp = complement(&up.pivots, 60);
        let lhs = block.select_rows(&comp);
        let rhs = up.coeff.matmul(&block.select_rows(&up.pivots));
        assert!(lhs.sub(&rhs).norm_fro() <= 1e-10 * block.norm_fro());
        let bound = 5.0 * cfg.c * cfg.c + cfg.c;
        assert!(up.coeff.max_abs() <= bound);

        // The same routine on the transposed view expands a column set.
        let t = Transposed(&src);
        let i0 = crate::sampling::uniform_subset(&mut rng, 60, 4);
        let cols = srr(&t.cols(&i0).unwrap(), &cfg).unwrap();
        let new_rows = crate::sampling::sample_new(&mut rng, 60, &i0, 3).0;
        let upc = set_upd(&t, &cols.pivots, &cols.coeff, &new_rows, None, &cfg).unwrap();
        assert!(upc.pivots.len() >= cols.pivots.len());
    }

    #[test]
    fn shape_errors() {
        let src = MatrixSource::dense(Mat::<f64>::identity(4)).unwrap();
        let cfg = SrrConfig::default();
        assert!(set_upd(&src, &[0], &Mat::zeros(2, 1), &[1], None, &cfg).is_err());
        assert!(set_upd(&src, &[0], &Mat::zeros(3, 1), &[], None, &cfg).is_err());
        assert!(set_upd(&src, &[0], &Mat::zeros(3, 1), &[1], Some(Mat::zeros(3, 1)), &cfg).is_err());
    }
}
