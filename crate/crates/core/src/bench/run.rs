use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{ErrorReport, ExperimentConfig, Method, Row};
use crate::baselines::{nys_basic, nys_pivot, nys_refine, LowRankApprox};
use crate::datasets::{gen_circulant_corner, DatasetKind};
use crate::error::Result;
use crate::han::{han_a, han_b, han_u, Evaluator, HanRun, ResidualMode};
use crate::kernel::{Counted, MatrixAccess, MatrixSource};
use crate::linalg::{singular_values, Scalar, SVD_ORACLE_CAP};
use crate::sampling::seeded_rng;

/// The matrix of an experiment, real or complex depending on the data.
#[derive(Debug)]
pub enum Source {
    Real(MatrixSource<f64>),
    Complex(MatrixSource<Complex64>),
}

impl Source {
    pub fn shape(&self) -> (usize, usize) {
        match self {
            Self::Real(s) => (s.nrows(), s.ncols()),
            Self::Complex(s) => (s.nrows(), s.ncols()),
        }
    }
}

/// Builds the matrix for `cfg`. Two-dimensional points are read as complex
/// numbers, so `1/(x-y)` kernels on planar data are complex-valued.
pub fn build_source(cfg: &ExperimentConfig) -> Result<Source> {
    cfg.validate()?;
    if cfg.dataset.kind == DatasetKind::CirculantCorner {
        return Ok(Source::Complex(gen_circulant_corner(cfg.dataset.m, cfg.dataset.params.symbol)?));
    }
    let (x, y) = cfg.dataset.points()?;
    let complex_plane = x.dim() == 2;
    if cfg.kernel.is_complex_valued(x.dim(), complex_plane) {
        Ok(Source::Complex(MatrixSource::kernel(cfg.kernel, x, y, complex_plane)?))
    } else {
        Ok(Source::Real(MatrixSource::kernel(cfg.kernel, x, y, complex_plane)?))
    }
}

/// Runs every (method, repeat, sample size) job and returns the rows in
/// sorted order. All configuration checks happen before any job starts.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<Row>> {
    match build_source(cfg)? {
        Source::Real(src) => run_on(cfg, &src),
        Source::Complex(src) => run_on(cfg, &src),
    }
}

/// [`run_experiment`] on an already built source.
pub fn run_on<T: Scalar>(cfg: &ExperimentConfig, src: &MatrixSource<T>) -> Result<Vec<Row>> {
    cfg.validate()?;
    let (m, n) = (src.nrows(), src.ncols());
    if cfg.methods.iter().any(|meth| meth.is_baseline()) {
        let limit = m.min(n);
        if let Some(&s) = cfg.sample_sizes.iter().find(|&&s| s > limit) {
            return Err(crate::Error::Config(format!("sample size {s} exceeds min(m, n) = {limit}")));
        }
    }
    let eval = match cfg.errors {
        ErrorReport::None => None,
        _ => Some(Evaluator::new(src, cfg.oracle_cap, ResidualMode::Auto)?.with_power_iters(cfg.power_iters)),
    };
    let ctx = Ctx { cfg, src, eval: eval.as_ref(), dataset: cfg.dataset_label(), kernel: cfg.kernel_label() };

    let mut jobs = Vec::new();
    for &method in &cfg.methods {
        for repeat in 0..cfg.repeats {
            if method.is_baseline() {
                jobs.extend(cfg.sample_sizes.iter().map(|&s| (method, repeat, s)));
            } else {
                jobs.push((method, repeat, 0));
            }
        }
    }
    let parts: Vec<Result<Vec<Row>>> = jobs
        .par_iter()
        .map(|&(method, repeat, s)| {
            if method.is_baseline() {
                ctx.baseline(method, repeat, s).map(|r| vec![r])
            } else {
                ctx.han(method, repeat)
            }
        })
        .collect();
    let mut rows = Vec::new();
    for p in parts {
        rows.extend(p?);
    }
    rows.sort_by_key(Row::sort_key);
    Ok(rows)
}

struct Ctx<'a, T: Scalar> {
    cfg: &'a ExperimentConfig,
    src: &'a MatrixSource<T>,
    eval: Option<&'a Evaluator<T>>,
    dataset: String,
    kernel: String,
}

impl<T: Scalar> Ctx<'_, T> {
    fn errors(&self, approx: &LowRankApprox<T>) -> Result<(Option<f64>, Option<f64>)> {
        match self.eval {
            Some(ev) => {
                let r = ev.eval(approx)?;
                Ok((Some(r.rel_spectral), r.rel_frob))
            }
            None => Ok((None, None)),
        }
    }

    fn row(&self, method: Method, repeat: usize) -> Row {
        Row {
            method,
            dataset: self.dataset.clone(),
            kernel: self.kernel.clone(),
            repeat,
            seed: self.cfg.seed + repeat as u64,
            iteration: 1,
            total_samples: 0,
            rank_i: 0,
            rank_j: 0,
            theta: None,
            phi: None,
            rel_err_spectral: None,
            rel_err_frob: None,
            kernel_evals: 0,
            elapsed_ns: None,
        }
    }

    /// One baseline at sample size `s`. The source is counted but not
    /// memoized: refinement re-forms its row and column blocks every round.
    fn baseline(&self, method: Method, repeat: usize, s: usize) -> Result<Row> {
        let mut row = self.row(method, repeat);
        let mut rng = seeded_rng(row.seed);
        let counted = Counted::new(self.src);
        let srr = &self.cfg.han.srr;
        let start = Instant::now();
        let (approx, rounds) = match method {
            Method::NysB => (nys_basic(&counted, s, srr.rank_tol, &mut rng)?, 1),
            Method::NysP => (nys_pivot(&counted, s, srr, &mut rng)?, 1),
            _ => nys_refine(&counted, s, self.cfg.refine_steps, srr, &mut rng)?,
        };
        let elapsed = start.elapsed().as_nanos() as u64;
        let (spec, frob) = self.errors(&approx)?;
        row.iteration = rounds;
        row.total_samples = s;
        row.rank_i = approx.row_indices().map_or(approx.rank(), <[usize]>::len);
        row.rank_j = approx.col_indices().map_or(approx.rank(), <[usize]>::len);
        row.rel_err_spectral = spec;
        row.rel_err_frob = frob;
        row.kernel_evals = counted.evals();
        row.elapsed_ns = self.cfg.timing.then_some(elapsed);
        Ok(row)
    }

    /// One HAN run, one row per iteration.
    fn han(&self, method: Method, repeat: usize) -> Result<Vec<Row>> {
        let mut hc = self.cfg.han.clone();
        hc.seed = self.cfg.seed + repeat as u64;
        hc.snapshots = self.cfg.errors == ErrorReport::All;
        hc.effective = method == Method::HanUEff;
        let run: HanRun<T> = match method {
            Method::HanB => han_b(self.src, &hc)?,
            Method::HanA => han_a(self.src, &hc)?,
            _ => han_u(self.src, &hc)?,
        };
        let last = run.trace.records.len().saturating_sub(1);
        let mut rows = Vec::with_capacity(run.trace.records.len());
        for (k, rec) in run.trace.records.iter().enumerate() {
            let mut row = self.row(method, repeat);
            let (spec, frob) = match (self.cfg.errors, &rec.snapshot) {
                (ErrorReport::All, Some(snap)) => self.errors(snap)?,
                (ErrorReport::Final, _) if k == last => {
                    let approx = if method == Method::HanUEff { run.effective.as_ref() } else { None };
                    self.errors(approx.unwrap_or(&run.approx))?
                }
                _ => (None, None),
            };
            row.iteration = rec.iteration;
            row.total_samples = rec.total_samples;
            row.rank_i = rec.rank_i;
            row.rank_j = rec.rank_j;
            row.theta = rec.theta;
            row.phi = rec.phi;
            row.rel_err_spectral = spec;
            row.rel_err_frob = frob;
            row.kernel_evals = rec.kernel_evals;
            row.elapsed_ns = self.cfg.timing.then_some(rec.elapsed_ns);
            rows.push(row);
        }
        Ok(rows)
    }
}

/// `sigma_{k+1} / sigma_1` for `k = 0, 1, ...`, or `None` when `m * n`
/// exceeds `oracle_cap` (or the SVD size limit).
pub fn reference_svd(src: &Source, oracle_cap: usize) -> Result<Option<Vec<f64>>> {
    let (m, n) = src.shape();
    if m.saturating_mul(n) > oracle_cap || m.min(n) > SVD_ORACLE_CAP {
        return Ok(None);
    }
    let sigma = match src {
        Source::Real(s) => singular_values(&s.materialize(oracle_cap)?)?,
        Source::Complex(s) => singular_values(&s.materialize(oracle_cap)?)?,
    };
    let top = sigma.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return Ok(Some(vec![0.0; sigma.len()]));
    }
    Ok(Some(sigma.iter().map(|s| s / top).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets::DatasetSpec;
    use crate::kernel::KernelSpec;

    fn small(methods: Vec<Method>) -> ExperimentConfig {
        ExperimentConfig {
            dataset: DatasetSpec::new(DatasetKind::FemGrid).with_sizes(60, 90),
            kernel: KernelSpec::LogDist,
            methods,
            sample_sizes: vec![10, 20],
            repeats: 2,
            timing: false,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn rows_are_sorted_and_complete() {
        let rows = run_experiment(&small(Method::ALL.to_vec())).unwrap();
        for m in Method::ALL {
            assert!(rows.iter().any(|r| r.method == m), "{m}");
        }
        let baseline_rows = rows.iter().filter(|r| r.method.is_baseline()).count();
        assert_eq!(baseline_rows, 3 * 2 * 2);
        assert!(rows.windows(2).all(|w| w[0].sort_key() <= w[1].sort_key()));
        assert!(rows.iter().all(|r| r.rel_err_spectral.is_some() && r.elapsed_ns.is_none()));
        let han = rows.iter().filter(|r| r.method == Method::HanA).last().unwrap();
        assert!(han.rel_err_spectral.unwrap() < 1e-10);
    }

    #[test]
    fn deterministic() {
        let cfg = small(vec![Method::NysR, Method::HanU]);
        assert_eq!(run_experiment(&cfg).unwrap(), run_experiment(&cfg).unwrap());
    }

    #[test]
    fn final_only_errors() {
        let mut cfg = small(vec![Method::HanB]);
        cfg.errors = ErrorReport::Final;
        let rows = run_experiment(&cfg).unwrap();
        for r in &rows {
            let last = rows.iter().filter(|q| q.repeat == r.repeat).map(|q| q.iteration).max().unwrap();
            assert_eq!(r.rel_err_spectral.is_some(), r.iteration == last);
        }
    }

    #[test]
    fn config_errors_before_compute() {
        let mut cfg = small(vec![Method::NysB]);
        cfg.sample_sizes = vec![61];
        assert!(matches!(run_experiment(&cfg), Err(crate::Error::Config(_))));
        let mut cfg = small(vec![Method::HanA]);
        cfg.kernel = KernelSpec::InvDiff;
        cfg.dataset = DatasetSpec::new(DatasetKind::Set3D).with_sizes(8, 8);
        assert!(matches!(run_experiment(&cfg), Err(crate::Error::Config(_))));
    }

    #[test]
    fn circulant_source_is_complex() {
        let mut cfg = small(vec![Method::HanA]);
        cfg.dataset = DatasetSpec::new(DatasetKind::CirculantCorner).with_sizes(64, 64);
        assert!(matches!(build_source(&cfg).unwrap(), Source::Complex(_)));
        let rows = run_experiment(&cfg).unwrap();
        assert_eq!(rows[0].kernel, "symbol:t");
        let svd = reference_svd(&build_source(&cfg).unwrap(), cfg.oracle_cap).unwrap().unwrap();
        assert_eq!(svd[0], 1.0);
        assert_eq!(reference_svd(&build_source(&cfg).unwrap(), 100).unwrap(), None);
    }
}
