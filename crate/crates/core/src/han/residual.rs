//! Reference residual norms `||A - A~||` for reporting and acceptance checks.

use crate::baselines::{LowRankApprox, Residual};
use crate::error::{Error, Result};
use crate::kernel::{MatrixAccess, DEFAULT_MATERIALIZE_CAP};
use crate::linalg::{norm2, spectral_norm_est, Mat, Scalar};

/// Default cap on `m * n` for dense (SVD-based) residual norms.
pub const DEFAULT_ORACLE_CAP: usize = 1 << 18;

const POWER_ITERS: usize = 30;
const POWER_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResidualMode {
    /// Dense when `m * n` is within the oracle cap, operator otherwise.
    Auto,
    /// Exact 2-norms by SVD; fails above the oracle cap.
    Dense,
    /// Power iteration on the residual operator; Frobenius norms stay exact.
    Operator,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualNorms {
    pub abs_spectral: f64,
    pub rel_spectral: f64,
    pub abs_frob: Option<f64>,
    pub rel_frob: Option<f64>,
}

/// Holds `A` and its norms so many approximations of the same matrix can be
/// scored without re-evaluating it.
#[derive(Debug, Clone)]
pub struct Evaluator<T: Scalar> {
    a: Mat<T>,
    norm2: f64,
    norm_fro: f64,
    dense: bool,
    power_iters: usize,
}

impl<T: Scalar> Evaluator<T> {
    pub fn new<A: MatrixAccess<T> + ?Sized>(src: &A, oracle_cap: usize, mode: ResidualMode) -> Result<Self> {
        let (m, n) = (src.nrows(), src.ncols());
        if m == 0 || n == 0 {
            return Err(Error::EmptyMatrix);
        }
        let size = m.saturating_mul(n);
        let dense = match mode {
            ResidualMode::Dense if size > oracle_cap => return Err(Error::OracleCap { size, cap: oracle_cap }),
            ResidualMode::Dense => true,
            ResidualMode::Operator => false,
            ResidualMode::Auto => size <= oracle_cap,
        };
        if size > DEFAULT_MATERIALIZE_CAP {
            return Err(Error::OracleCap { size, cap: DEFAULT_MATERIALIZE_CAP });
        }
        let rows: Vec<usize> = (0..m).collect();
        let cols: Vec<usize> = (0..n).collect();
        let a = src.block(&rows, &cols)?;
        let norm2 = if dense { norm2(&a)? } else { spectral_norm_est(&a, 2 * POWER_ITERS, POWER_SEED)? };
        if norm2 == 0.0 {
            return Err(Error::ZeroNorm("A"));
        }
        let norm_fro = a.norm_fro();
        Ok(Self { a, norm2, norm_fro, dense, power_iters: POWER_ITERS })
    }

    /// Power iterations per operator-mode evaluation (at least 10).
    pub fn with_power_iters(mut self, iters: usize) -> Self {
        self.power_iters = iters.max(10);
        self
    }

    pub fn matrix(&self) -> &Mat<T> {
        &self.a
    }

    pub fn norm2(&self) -> f64 {
        self.norm2
    }

    pub fn norm_fro(&self) -> f64 {
        self.norm_fro
    }

    pub fn is_dense(&self) -> bool {
        self.dense
    }

    fn check(&self, approx: &LowRankApprox<T>) -> Result<()> {
        if approx.shape() != self.a.shape() {
            return Err(Error::DimensionMismatch(format!(
                "approximation is {:?}, matrix is {:?}",
                approx.shape(),
                self.a.shape()
            )));
        }
        Ok(())
    }

    /// `||A - A~||_F`, formed a column block at a time. Divided by
    /// [`Self::norm2`] it bounds the relative spectral error from above.
    pub fn residual_frob(&self, approx: &LowRankApprox<T>) -> Result<f64> {
        const CHUNK: usize = 256;
        self.check(approx)?;
        let (m, n) = self.a.shape();
        let mut sq = 0.0;
        for c0 in (0..n).step_by(CHUNK) {
            let nc = CHUNK.min(n - c0);
            sq += self.a.block(0, c0, m, nc).sub(&approx.dense_cols(c0, nc)).norm_fro_sq();
        }
        Ok(sq.sqrt())
    }

    pub fn eval(&self, approx: &LowRankApprox<T>) -> Result<ResidualNorms> {
        self.check(approx)?;
        if self.dense {
            let r = self.a.sub(&approx.to_dense());
            let s = norm2(&r)?;
            let f = r.norm_fro();
            Ok(ResidualNorms {
                abs_spectral: s,
                rel_spectral: s / self.norm2,
                abs_frob: Some(f),
                rel_frob: Some(f / self.norm_fro),
            })
        } else {
            let op = Residual { a: &self.a, approx };
            let s = spectral_norm_est(&op, self.power_iters, POWER_SEED)?;
            let f = self.residual_frob(approx)?;
            Ok(ResidualNorms {
                abs_spectral: s,
                rel_spectral: s / self.norm2,
                abs_frob: Some(f),
                rel_frob: Some(f / self.norm_fro),
            })
        }
    }
}

/// One-off residual norms; see [`Evaluator`] for repeated use.
pub fn residual_norms<T, A>(src: &A, approx: &LowRankApprox<T>, oracle_cap: usize, mode: ResidualMode) -> Result<ResidualNorms>
where
    T: Scalar,
    A: MatrixAccess<T> + ?Sized,
{
    Evaluator::new(src, oracle_cap, mode)?.eval(approx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::MatrixSource;
    use crate::sampling::seeded_rng;

    fn setup() -> (MatrixSource<f64>, LowRankApprox<f64>) {
        let mut rng = seeded_rng(8);
        let a: Mat<f64> = Mat::random_normal(30, 40, &mut rng);
        let rows: Vec<usize> = (0..5).collect();
        let mut u = Mat::zeros(30, 5);
        for t in 0..5 {
            u[(t, t)] = 1.0;
        }
        let approx = LowRankApprox::row_skeleton(rows.clone(), u, a.select_rows(&rows)).unwrap();
        (MatrixSource::dense(a).unwrap(), approx)
    }

    #[test]
    fn dense_and_operator_agree() {
        let (src, approx) = setup();
        let d = residual_norms(&src, &approx, 1 << 20, ResidualMode::Dense).unwrap();
        let o = residual_norms(&src, &approx, 1 << 20, ResidualMode::Operator).unwrap();
        assert!((d.rel_spectral - o.rel_spectral).abs() <= 0.05 * d.rel_spectral);
        let f = d.abs_frob.unwrap();
        assert!((o.abs_frob.unwrap() - f).abs() <= 1e-12 * f);
        let direct = src.materialize(1 << 20).unwrap().block(5, 0, 25, 40).norm_fro();
        assert!((f - direct).abs() <= 1e-12 * direct);
    }

    #[test]
    fn cap_and_shape_errors() {
        let (src, approx) = setup();
        assert!(matches!(
            residual_norms(&src, &approx, 100, ResidualMode::Dense),
            Err(Error::OracleCap { .. })
        ));
        let ev = Evaluator::new(&src, 100, ResidualMode::Auto).unwrap();
        assert!(!ev.is_dense());
        let wrong = LowRankApprox::row_skeleton(vec![0], Mat::zeros(3, 1), Mat::zeros(1, 40)).unwrap();
        assert!(ev.eval(&wrong).is_err());
    }

    #[test]
    fn exact_approximation_has_zero_residual() {
        let (src, _) = setup();
        let a = src.materialize(1 << 20).unwrap();
        let rows: Vec<usize> = (0..30).collect();
        let full = LowRankApprox::row_skeleton(rows, Mat::identity(30), a).unwrap();
        let r = residual_norms(&src, &full, 1 << 20, ResidualMode::Auto).unwrap();
        assert_eq!(r.abs_spectral, 0.0);
    }
}
