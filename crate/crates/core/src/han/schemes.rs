use std::time::Instant;

use super::estimate::{estimate_phi, estimate_theta};
use super::update::{rounding_floor, set_upd};
use super::{HanConfig, HanTrace, IterRecord, StopReason, Stopper};
use crate::baselines::LowRankApprox;
use crate::error::{Error, Result};
use crate::kernel::{Cached, Counted, MatrixAccess, Transposed};
use crate::linalg::{complement, norm2, srr, Mat, Scalar, SrrResult};
use crate::sampling::{sample_new, seeded_rng, SeededRng};

/// Output of one HAN run.
#[derive(Debug, Clone)]
pub struct HanRun<T: Scalar> {
    pub approx: LowRankApprox<T>,
    /// HAN-U with `effective` set: the row skeleton from one extra row pivoting step.
    pub effective: Option<LowRankApprox<T>>,
    pub trace: HanTrace<T>,
}

/// Row skeleton `(I, E)` and column skeleton `(J, F)` of the current iterate.
struct Skeletons<T: Scalar> {
    i: Vec<usize>,
    e: Mat<T>,
    j: Vec<usize>,
    f: Mat<T>,
}

impl<T: Scalar> Skeletons<T> {
    fn new(m: usize, n: usize) -> Self {
        Self { i: Vec::new(), e: Mat::zeros(m, 0), j: Vec::new(), f: Mat::zeros(n, 0) }
    }
}

/// Slack over the rounding floor when confirming an empty HAN-U update.
const CONFIRM_MARGIN: f64 = 10.0;

#[derive(Default)]
struct Estimate {
    theta: Option<f64>,
    phi: Option<f64>,
    /// The sampled residual is at rounding level.
    zero: bool,
}

struct Tracker<'c> {
    cfg: &'c HanConfig,
    start: Instant,
    stopper: Stopper,
    iteration: usize,
    total: usize,
}

impl<'c> Tracker<'c> {
    fn new(cfg: &'c HanConfig, n: usize) -> Self {
        Self { cfg, start: Instant::now(), stopper: Stopper::new(cfg, n), iteration: 0, total: 0 }
    }

    /// Records the iteration and returns the stop reason, if any.
    #[allow(clippy::too_many_arguments)]
    fn record<T: Scalar>(
        &mut self,
        records: &mut Vec<IterRecord<T>>,
        rank_i: usize,
        rank_j: usize,
        est: &Estimate,
        evals: u64,
        converged: bool,
        exhausted: bool,
        snapshot: impl FnOnce() -> Result<LowRankApprox<T>>,
    ) -> Result<Option<StopReason>> {
        let elapsed_ns = self.start.elapsed().as_nanos() as u64;
        let snapshot = if self.cfg.snapshots { Some(snapshot()?) } else { None };
        records.push(IterRecord {
            iteration: self.iteration,
            total_samples: self.total,
            rank_i,
            rank_j,
            theta: est.theta,
            phi: est.phi,
            kernel_evals: evals,
            elapsed_ns,
            snapshot,
        });
        let rank = rank_i.min(rank_j);
        // A residual sample at rounding level means a subset update would
        // leave the row set unchanged.
        Ok(self.stopper.check(est.phi, rank, self.total, converged || est.zero, exhausted))
    }
}

fn check_input<T: Scalar, A: MatrixAccess<T> + ?Sized>(src: &A, cfg: &HanConfig) -> Result<(usize, usize)> {
    cfg.validate()?;
    let (m, n) = (src.nrows(), src.ncols());
    if m == 0 || n == 0 {
        return Err(Error::EmptyMatrix);
    }
    Ok((m, n))
}

/// Residual `A(comp(I), L) - E A(I, L)` of the row skeleton at the columns
/// held in `block`, with the size of its rounding error.
fn schur_sample<T: Scalar>(block: &Mat<T>, pivots: &[usize], coeff: &Mat<T>) -> (Mat<T>, f64) {
    let comp = complement(pivots, block.nrows());
    let a_piv = block.select_rows(pivots);
    let a_rest = block.select_rows(&comp);
    let s = a_rest.sub(&coeff.matmul(&a_piv));
    let floor = rounding_floor(coeff, &a_piv, &a_rest);
    (s, floor)
}

fn max_row_norm<T: Scalar>(s: &Mat<T>) -> f64 {
    let mut sq = vec![0.0f64; s.nrows()];
    for j in 0..s.ncols() {
        for (acc, v) in sq.iter_mut().zip(s.col(j)) {
            *acc += v.modulus_sq();
        }
    }
    sq.into_iter().fold(0.0, f64::max).sqrt()
}

fn estimate<T: Scalar>(s: &Mat<T>, floor: f64, a11: &Mat<T>, n: usize, cfg: &HanConfig) -> Result<Estimate> {
    let k = a11.nrows();
    let zero = s.nrows() == 0 || max_row_norm(s) <= floor;
    if s.ncols() == 0 || k >= n {
        return Ok(Estimate { zero, ..Estimate::default() });
    }
    let theta = Some(estimate_theta(s, n, k)?);
    let phi = if a11.is_empty() || norm2(a11)? == 0.0 {
        None
    } else if s.nrows() > cfg.phi_row_limit {
        let sk = s.select_rows(&srr(s, &cfg.srr)?.pivots);
        Some(estimate_phi(&sk, a11, n, k)?)
    } else {
        Some(estimate_phi(s, a11, n, k)?)
    };
    Ok(Estimate { theta, phi, zero })
}

/// Draws `b` estimation-only columns and evaluates the row skeleton on them.
fn extra_estimate<T, A>(
    src: &A,
    sk: &Skeletons<T>,
    a11: &Mat<T>,
    excluded: &[usize],
    rng: &mut SeededRng,
    cfg: &HanConfig,
) -> Result<Estimate>
where
    T: Scalar,
    A: MatrixAccess<T> + ?Sized,
{
    let (m, n) = (src.nrows(), src.ncols());
    if sk.i.is_empty() || sk.i.len() >= m || sk.j.len() >= n {
        return Ok(Estimate::default());
    }
    let (l, _) = sample_new(rng, n, excluded, cfg.b);
    if l.is_empty() {
        return Ok(Estimate::default());
    }
    let (s, floor) = schur_sample(&src.cols(&l)?, &sk.i, &sk.e);
    estimate(&s, floor, a11, n, cfg)
}

fn union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut u = a.to_vec();
    u.extend_from_slice(b);
    u.sort_unstable();
    u.dedup();
    u
}

fn has_new(new: &[usize], old: &[usize]) -> bool {
    new.iter().any(|i| !old.contains(i))
}

fn row_approx<T, A>(src: &A, i: &[usize], e: &Mat<T>) -> Result<LowRankApprox<T>>
where
    T: Scalar,
    A: MatrixAccess<T> + ?Sized,
{
    LowRankApprox::row_skeleton(i.to_vec(), interpolation(i, e, src.nrows()), src.rows(i)?)
}

fn col_approx<T, A>(src: &A, j: &[usize], f: &Mat<T>) -> Result<LowRankApprox<T>>
where
    T: Scalar,
    A: MatrixAccess<T> + ?Sized,
{
    LowRankApprox::col_skeleton(j.to_vec(), interpolation(j, f, src.ncols()), src.cols(j)?)
}

fn interpolation<T: Scalar>(pivots: &[usize], coeff: &Mat<T>, m: usize) -> Mat<T> {
    SrrResult { pivots: pivots.to_vec(), coeff: coeff.clone(), rank: pivots.len(), swaps: 0 }.interpolation_matrix(m)
}

/// Row pivoting on `A(:, cols)` followed by column pivoting on the chosen rows.
fn alternate<T, A>(src: &A, cols: &[usize], cfg: &HanConfig) -> Result<(Skeletons<T>, Mat<T>)>
where
    T: Scalar,
    A: MatrixAccess<T> + ?Sized,
{
    let (m, n) = (src.nrows(), src.ncols());
    let piv = srr(&src.cols(cols)?, &cfg.srr)?;
    if piv.rank == 0 {
        return Ok((Skeletons::new(m, n), Mat::zeros(0, n)));
    }
    let rows = src.rows(&piv.pivots)?;
    let cp = srr(&rows.transpose(), &cfg.srr)?;
    Ok((Skeletons { i: piv.pivots, e: piv.coeff, j: cp.pivots, f: cp.coeff }, rows))
}

/// Basic scheme: progressive column sampling with alternating row and column
/// pivoting, stopped by a randomized estimate on fresh columns.
///
/// Returns the column skeleton `A(:, J) V^T`.
pub fn han_b<T, A>(src: &A, cfg: &HanConfig) -> Result<HanRun<T>>
where
    T: Scalar,
    A: MatrixAccess<T> + ?Sized,
{
    let (m, n) = check_input(src, cfg)?;
    let counted = Counted::new(src);
    let cached = Cached::new(&counted);
    let mut rng = seeded_rng(cfg.seed);
    let mut tr = Tracker::new(cfg, n);
    let mut records = Vec::new();
    let mut sk = Skeletons::new(m, n);

    let stop = loop {
        let (jhat, _) = sample_new(&mut rng, n, &sk.j, cfg.b);
        if jhat.is_empty() {
            break StopReason::Saturated;
        }
        tr.iteration += 1;
        tr.total += jhat.len();
        let mut jt = sk.j.clone();
        jt.extend_from_slice(&jhat);

        let (next, rows) = alternate(&cached, &jt, cfg)?;
        let grew = has_new(&next.i, &sk.i);
        sk = next;
        let a11 = rows.select_cols(&sk.j);
        let est = extra_estimate(&cached, &sk, &a11, &union(&jt, &sk.j), &mut rng, cfg)?;

        let exhausted = sk.i.len() == m || sk.j.len() == n;
        let reason = tr.record(&mut records, sk.i.len(), sk.j.len(), &est, counted.evals(), !grew, exhausted, || {
            col_approx(src, &sk.j, &sk.f)
        })?;
        if let Some(r) = reason {
            break r;
        }
    };
    let approx = col_approx(&cached, &sk.j, &sk.f)?;
    Ok(HanRun { approx, effective: None, trace: HanTrace { records, stop } })
}

/// Fast-update scheme: after a basic first step, both index sets grow by
/// subset updates driven by sampled Schur-complement columns and rows.
///
/// Returns the column skeleton `A(:, J) V^T`; with `cfg.effective` also the
/// row skeleton from pivoting `A(:, J)`, which then fills the snapshots.
///
/// An empty row update is checked on `b` further estimation-only columns
/// before the run stops as converged; if their residual is clearly above
/// rounding level they become the next iteration's sample.
pub fn han_u<T, A>(src: &A, cfg: &HanConfig) -> Result<HanRun<T>>
where
    T: Scalar,
    A: MatrixAccess<T> + ?Sized,
{
    let (m, n) = check_input(src, cfg)?;
    let counted = Counted::new(src);
    let cached = Cached::new(&counted);
    let mut rng = seeded_rng(cfg.seed);
    let mut tr = Tracker::new(cfg, n);
    let mut records = Vec::new();
    let mut sk = Skeletons::new(m, n);
    // Every column that has entered the row skeleton's construction.
    let mut row_cols: Vec<usize> = Vec::new();

    let snapshot = |sk: &Skeletons<T>| {
        if cfg.effective {
            effective(src, &sk.j, cfg)
        } else {
            col_approx(src, &sk.j, &sk.f)
        }
    };

    // Columns that showed a nonzero residual while confirming an empty update.
    let mut pending: Option<Vec<usize>> = None;

    let stop = loop {
        let jhat = match pending.take() {
            Some(p) => p,
            None => sample_new(&mut rng, n, &union(&sk.j, &row_cols), cfg.b).0,
        };
        if jhat.is_empty() {
            break StopReason::Saturated;
        }
        tr.iteration += 1;
        tr.total += jhat.len();
        row_cols.extend_from_slice(&jhat);

        let (est, converged) = if tr.iteration == 1 {
            let (next, rows) = alternate(&cached, &jhat, cfg)?;
            sk = next;
            let a11 = rows.select_cols(&sk.j);
            let est = extra_estimate(&cached, &sk, &a11, &union(&row_cols, &sk.j), &mut rng, cfg)?;
            (est, sk.i.is_empty())
        } else {
            let a11 = cached.block(&sk.i, &sk.j)?;
            let up = set_upd(&cached, &sk.i, &sk.e, &jhat, None, &cfg.srr)?;
            let est = estimate(&up.update.s_cols, 0.0, &a11, n, cfg)?;
            let mut converged = false;
            if up.no_update {
                let (check, _) = sample_new(&mut rng, n, &union(&sk.j, &row_cols), cfg.b);
                converged = check.is_empty() || {
                    let (s, floor) = schur_sample(&cached.cols(&check)?, &sk.i, &sk.e);
                    let phi = estimate(&s, floor, &a11, n, cfg)?.phi;
                    max_row_norm(&s) <= CONFIRM_MARGIN * floor || phi.is_some_and(|p| p < cfg.tau)
                };
                if !converged {
                    pending = Some(check);
                }
            } else {
                let col = set_upd(&Transposed(&cached), &sk.j, &sk.f, &up.update.i_hat, None, &cfg.srr)?;
                sk.i = up.pivots;
                sk.e = up.coeff;
                sk.j = col.pivots;
                sk.f = col.coeff;
            }
            (Estimate { zero: false, ..est }, converged)
        };

        let exhausted = sk.i.len() == m || sk.j.len() == n;
        let reason = tr.record(&mut records, sk.i.len(), sk.j.len(), &est, counted.evals(), converged, exhausted, || {
            snapshot(&sk)
        })?;
        if let Some(r) = reason {
            break r;
        }
    };
    let approx = col_approx(&cached, &sk.j, &sk.f)?;
    let effective = if cfg.effective { Some(effective(&cached, &sk.j, cfg)?) } else { None };
    Ok(HanRun { approx, effective, trace: HanTrace { records, stop } })
}

fn effective<T, A>(src: &A, j: &[usize], cfg: &HanConfig) -> Result<LowRankApprox<T>>
where
    T: Scalar,
    A: MatrixAccess<T> + ?Sized,
{
    let m = src.nrows();
    if j.is_empty() {
        return LowRankApprox::row_skeleton(Vec::new(), Mat::zeros(m, 0), Mat::zeros(0, src.ncols()));
    }
    let piv = srr(&src.cols(j)?, &cfg.srr)?;
    row_approx(src, &piv.pivots, &piv.coeff)
}

/// Aggressive scheme: rows are re-pivoted on the whole sampled block each
/// step, and the column set grows by a subset update driven by every newly
/// selected row.
///
/// Returns the row skeleton `U A(I, :)`.
pub fn han_a<T, A>(src: &A, cfg: &HanConfig) -> Result<HanRun<T>>
where
    T: Scalar,
    A: MatrixAccess<T> + ?Sized,
{
    let (m, n) = check_input(src, cfg)?;
    let counted = Counted::new(src);
    let cached = Cached::new(&counted);
    let mut rng = seeded_rng(cfg.seed);
    let mut tr = Tracker::new(cfg, n);
    let mut records = Vec::new();
    let mut sk = Skeletons::new(m, n);
    // Rows that have driven the column skeleton.
    let mut used_rows: Vec<usize> = Vec::new();
    let mut prev_jt: Vec<usize> = Vec::new();

    let stop = loop {
        let (jhat, _) = sample_new(&mut rng, n, &union(&sk.j, &prev_jt), cfg.b);
        if jhat.is_empty() {
            break StopReason::Saturated;
        }
        tr.iteration += 1;
        tr.total += jhat.len();

        let (est, converged) = if tr.iteration == 1 {
            let (next, rows) = alternate(&cached, &jhat, cfg)?;
            sk = next;
            used_rows = sk.i.clone();
            prev_jt = jhat.clone();
            let a11 = rows.select_cols(&sk.j);
            let est = extra_estimate(&cached, &sk, &a11, &union(&prev_jt, &sk.j), &mut rng, cfg)?;
            (est, sk.i.is_empty())
        } else {
            let mut jt = sk.j.clone();
            jt.extend_from_slice(&jhat);
            let block = cached.cols(&jt)?;
            let a11 = block.block(0, 0, m, sk.j.len()).select_rows(&sk.i);
            let (s, floor) = schur_sample(&block.block(0, sk.j.len(), m, jhat.len()), &sk.i, &sk.e);
            let est = estimate(&s, floor, &a11, n, cfg)?;
            prev_jt = jt;
            let piv = srr(&block, &cfg.srr)?;
            let ihat: Vec<usize> = piv.pivots.iter().copied().filter(|i| !sk.i.contains(i)).collect();
            let converged = ihat.is_empty();
            let fresh: Vec<usize> = ihat.iter().copied().filter(|i| !used_rows.contains(i)).collect();
            if !fresh.is_empty() && sk.j.len() < n {
                let col = set_upd(&Transposed(&cached), &sk.j, &sk.f, &fresh, None, &cfg.srr)?;
                sk.j = col.pivots;
                sk.f = col.coeff;
                used_rows.extend_from_slice(&fresh);
            }
            sk.i = piv.pivots;
            sk.e = piv.coeff;
            (est, converged)
        };

        let exhausted = sk.i.len() == m || sk.j.len() == n;
        let reason = tr.record(&mut records, sk.i.len(), sk.j.len(), &est, counted.evals(), converged, exhausted, || {
            row_approx(src, &sk.i, &sk.e)
        })?;
        if let Some(r) = reason {
            break r;
        }
    };
    let approx = row_approx(&cached, &sk.i, &sk.e)?;
    Ok(HanRun { approx, effective: None, trace: HanTrace { records, stop } })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{KernelSpec, MatrixSource, PointSet};

    fn low_rank(m: usize, n: usize, r: usize, seed: u64) -> MatrixSource<f64> {
        let mut rng = seeded_rng(seed);
        let u: Mat<f64> = Mat::random_normal(m, r, &mut rng);
        let v: Mat<f64> = Mat::random_normal(r, n, &mut rng);
        MatrixSource::dense(u.matmul(&v)).unwrap()
    }

    fn rel_err(src: &MatrixSource<f64>, a: &LowRankApprox<f64>) -> f64 {
        let d = src.materialize(1 << 22).unwrap();
        norm2(&d.sub(&a.to_dense())).unwrap() / norm2(&d).unwrap()
    }

    type Scheme = fn(&MatrixSource<f64>, &HanConfig) -> Result<HanRun<f64>>;
    const SCHEMES: [(&str, Scheme); 3] = [("b", han_b), ("u", han_u), ("a", han_a)];

    #[test]
    fn exact_rank_eight() {
        let src = low_rank(60, 80, 8, 1);
        for (name, f) in SCHEMES {
            let run = f(&src, &HanConfig::default()).unwrap();
            assert_eq!(run.approx.rank(), 8, "{name}");
            assert!(rel_err(&src, &run.approx) <= 1e-12, "{name}");
            assert!(run.trace.last().unwrap().total_samples <= 18, "{name}");
        }
    }

    #[test]
    fn exact_rank_b_is_found_in_one_iteration() {
        let src = low_rank(40, 50, 5, 2);
        for (name, f) in SCHEMES {
            let run = f(&src, &HanConfig::default()).unwrap();
            assert_eq!(run.trace.records[0].rank_i, 5, "{name}");
            assert!(run.trace.records[0].phi.unwrap() < 1e-14, "{name}");
            assert_eq!(run.trace.records.len(), 1, "{name}");
            assert_eq!(run.trace.stop, StopReason::Converged, "{name}");
            assert_eq!(run.approx.rank(), 5, "{name}");
        }
    }

    #[test]
    fn single_row() {
        let src = MatrixSource::dense(Mat::from_fn(1, 30, |_, j| 1.0 + j as f64)).unwrap();
        for (name, f) in SCHEMES {
            let run = f(&src, &HanConfig::default()).unwrap();
            assert_eq!(run.approx.rank(), 1, "{name}");
            assert_eq!(run.trace.records.len(), 1, "{name}");
        }
    }

    #[test]
    fn zero_matrix() {
        let src = MatrixSource::dense(Mat::<f64>::zeros(10, 12)).unwrap();
        for (name, f) in SCHEMES {
            let run = f(&src, &HanConfig::default()).unwrap();
            assert_eq!(run.approx.rank(), 0, "{name}");
            assert_eq!(run.approx.to_dense().max_abs(), 0.0, "{name}");
        }
    }

    #[test]
    fn kernel_matrix_reaches_high_accuracy() {
        let x = PointSet::new(1, (0..150).map(|i| i as f64 / 150.0).collect()).unwrap();
        let y = PointSet::new(1, (0..400).map(|j| 1.2 + j as f64 / 200.0).collect()).unwrap();
        let src = MatrixSource::kernel(KernelSpec::InvDiff, x, y, false).unwrap();
        for (name, f) in SCHEMES {
            let run = f(&src, &HanConfig::default()).unwrap();
            assert!(rel_err(&src, &run.approx) <= 1e-11, "{name}: {:?}", run.trace.stop);
        }
    }

    #[test]
    fn han_u_advances_by_b() {
        let src = low_rank(100, 120, 30, 4);
        let cfg = HanConfig { max_rank: Some(20), ..HanConfig::default() };
        let run = han_u(&src, &cfg).unwrap();
        assert_eq!(run.trace.stop, StopReason::MaxRank);
        for (t, r) in run.trace.records.iter().enumerate() {
            assert_eq!(r.rank_i, (t + 1) * cfg.b);
            assert_eq!(r.rank_j, (t + 1) * cfg.b);
            assert_eq!(r.total_samples, (t + 1) * cfg.b);
        }
    }

    #[test]
    fn han_u_effective_form() {
        let x = PointSet::new(1, (0..200).map(|i| i as f64 / 200.0).collect()).unwrap();
        let y = PointSet::new(1, (0..300).map(|j| 1.5 + j as f64 / 100.0).collect()).unwrap();
        let src = MatrixSource::kernel(KernelSpec::InvDiff, x, y, false).unwrap();
        let cfg = HanConfig { effective: true, max_rank: Some(8), ..HanConfig::default() };
        let run = han_u(&src, &cfg).unwrap();
        let eff = run.effective.unwrap();
        assert_eq!(eff.form_name(), "row-skeleton");
        assert!(rel_err(&src, &eff) <= 10.0 * rel_err(&src, &run.approx));
    }

    #[test]
    fn snapshots_and_determinism() {
        let src = low_rank(30, 40, 12, 3);
        let cfg = HanConfig { snapshots: true, seed: 9, ..HanConfig::default() };
        for (name, f) in SCHEMES {
            let a = f(&src, &cfg).unwrap();
            let b = f(&src, &cfg).unwrap();
            assert_eq!(a.approx.to_dense(), b.approx.to_dense(), "{name}");
            assert!(a.trace.records.iter().all(|r| r.snapshot.is_some()), "{name}");
            let evals: Vec<u64> = a.trace.records.iter().map(|r| r.kernel_evals).collect();
            assert!(evals.windows(2).all(|w| w[0] <= w[1]), "{name}");
        }
    }

    #[test]
    fn max_samples_caps_the_run() {
        let x = PointSet::new(1, (0..100).map(|i| i as f64 / 100.0).collect()).unwrap();
        let y = PointSet::new(1, (0..120).map(|j| 1.05 + j as f64 / 100.0).collect()).unwrap();
        let src = MatrixSource::kernel(KernelSpec::InvDiff, x, y, false).unwrap();
        let cfg = HanConfig { max_samples: Some(10), ..HanConfig::default() };
        for (name, f) in SCHEMES {
            let run = f(&src, &cfg).unwrap();
            assert_eq!(run.trace.stop, StopReason::MaxSamples, "{name}");
            assert_eq!(run.trace.last().unwrap().total_samples, 10, "{name}");
        }
    }
}
