use han_nystrom::han::{
    han_a, han_b, han_u, set_upd, Evaluator, HanConfig, HanRun, ResidualMode, StopReason,
};
use han_nystrom::datasets::{gen_fem_grid, gen_flower};
use han_nystrom::kernel::{KernelSpec, MatrixAccess, MatrixSource, PointSet};
use han_nystrom::linalg::{complement, srr, Mat, SrrConfig};
use han_nystrom::sampling::{seeded_rng, uniform_subset};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

type Scheme = fn(&MatrixSource<f64>, &HanConfig) -> han_nystrom::Result<HanRun<f64>>;

const SCHEMES: [(&str, Scheme); 3] = [("han-b", han_b), ("han-u", han_u), ("han-a", han_a)];

fn rank_source(seed: u64, m: usize, n: usize, r: usize) -> MatrixSource<f64> {
    let mut rng = seeded_rng(seed);
    let a: Mat<f64> = Mat::random_normal(m, r, &mut rng).matmul(&Mat::random_normal(r, n, &mut rng));
    MatrixSource::dense(a).unwrap()
}

fn kernel_source(seed: u64, m: usize, n: usize, gap: f64) -> MatrixSource<f64> {
    let mut rng = seeded_rng(seed);
    let mut pts = |count: usize, shift: f64| {
        let c: Vec<f64> = (0..2 * count).map(|t| rng.random::<f64>() + if t % 2 == 0 { shift } else { 0.0 }).collect();
        PointSet::new(2, c).unwrap()
    };
    let (x, y) = (pts(m, 0.0), pts(n, gap));
    MatrixSource::kernel(KernelSpec::ExpDist, x, y, false).unwrap()
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|i| b.contains(i))
}

#[test]
fn exact_rank_is_recovered_with_progressive_samples() {
    for r in [1, 4, 9, 17] {
        for seed in 0..4 {
            let src = rank_source(seed + 10 * r as u64, 80, 120, r);
            let ev = Evaluator::new(&src, 1 << 20, ResidualMode::Dense).unwrap();
            let cfg = HanConfig { seed, snapshots: true, ..HanConfig::default() };
            for (name, scheme) in SCHEMES {
                let run = scheme(&src, &cfg).unwrap();
                for rec in &run.trace.records {
                    assert_eq!(rec.total_samples, rec.iteration * cfg.b, "{name}");
                }
                let last = run.trace.last().unwrap();
                assert_eq!(run.approx.rank(), r, "{name} r={r}");
                assert!(last.total_samples <= r + 2 * cfg.b, "{name} r={r}: S = {}", last.total_samples);
                let e = ev.eval(&run.approx).unwrap();
                assert!(e.rel_spectral <= 1e-12, "{name} r={r}: {}", e.rel_spectral);
            }
        }
    }
}

#[test]
fn index_sets_grow_monotonically() {
    for seed in 0..5 {
        let src = kernel_source(seed, 70, 140, 1.5);
        let cfg = HanConfig { seed, snapshots: true, tau: 1e-10, ..HanConfig::default() };
        for (name, scheme) in SCHEMES {
            let run = scheme(&src, &cfg).unwrap();
            let recs = &run.trace.records;
            for w in recs.windows(2) {
                assert!(w[1].rank_j >= w[0].rank_j, "{name}: |J| shrank");
                assert!(w[1].total_samples > w[0].total_samples, "{name}");
                assert!(w[1].kernel_evals >= w[0].kernel_evals, "{name}");
            }
            if name == "han-u" {
                for w in recs.windows(2) {
                    assert!(w[1].rank_i >= w[0].rank_i, "han-u: |I| shrank");
                    let (a, b) = (w[0].snapshot.as_ref().unwrap(), w[1].snapshot.as_ref().unwrap());
                    assert!(is_subset(a.col_indices().unwrap(), b.col_indices().unwrap()), "han-u: J lost columns");
                }
            }
        }
    }
}

#[test]
fn skeleton_interpolates_its_rows() {
    let src = kernel_source(3, 90, 160, 1.2);
    let a = src.materialize(90 * 160).unwrap();
    for (name, scheme) in SCHEMES {
        let run = scheme(&src, &HanConfig { seed: 3, ..HanConfig::default() }).unwrap();
        let approx = run.approx.to_dense();
        let diff = match (run.approx.row_indices(), run.approx.col_indices()) {
            (Some(rows), _) => approx.select_rows(rows).sub(&a.select_rows(rows)),
            (_, Some(cols)) => approx.select_cols(cols).sub(&a.select_cols(cols)),
            _ => unreachable!("{name} returns a skeleton"),
        };
        assert!(diff.norm_fro() <= 1e-12 * a.norm_fro(), "{name}");
    }
}

#[test]
fn traces_are_deterministic() {
    let src = kernel_source(5, 60, 100, 1.0);
    let cfg = HanConfig { seed: 42, ..HanConfig::default() };
    for (name, scheme) in SCHEMES {
        let key = |run: HanRun<f64>| -> Vec<_> {
            run.trace.records.iter().map(|r| (r.total_samples, r.rank_i, r.rank_j, r.theta, r.phi, r.kernel_evals)).collect()
        };
        let (a, b) = (scheme(&src, &cfg).unwrap(), scheme(&src, &cfg).unwrap());
        assert_eq!(a.approx.to_dense(), b.approx.to_dense(), "{name}");
        assert_eq!(key(a), key(b), "{name}");
    }
}

#[test]
fn final_estimate_tracks_the_true_error() {
    let (x, y) = gen_flower(300, 2000, 1).unwrap();
    let src: MatrixSource<Complex64> = MatrixSource::kernel(KernelSpec::InvDiff, x, y, true).unwrap();
    let ev = Evaluator::new(&src, 1 << 20, ResidualMode::Dense).unwrap();
    for seed in 0..5 {
        let cfg = HanConfig { seed, tau: 1e-10, ..HanConfig::default() };
        for (name, run) in [("han-b", han_b(&src, &cfg).unwrap()), ("han-a", han_a(&src, &cfg).unwrap())] {
            assert_eq!(run.trace.stop, StopReason::Tolerance, "{name}");
            let phi = run.trace.last().unwrap().phi.unwrap();
            let e = ev.eval(&run.approx).unwrap().rel_spectral;
            assert!(phi <= 1e2 * e && e <= 1e2 * phi, "{name} seed {seed}: phi {phi:.2e} err {e:.2e}");
        }
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    0.5 * (v[(v.len() - 1) / 2] + v[v.len() / 2])
}

#[test]
fn effective_variant_stays_near_basic_scheme() {
    let (x, y) = gen_fem_grid(120, 600, 0).unwrap();
    let src: MatrixSource<f64> = MatrixSource::kernel(KernelSpec::LogDist, x, y, false).unwrap();
    let ev = Evaluator::new(&src, 1 << 20, ResidualMode::Dense).unwrap();
    let (mut basic, mut eff) = (Vec::new(), Vec::new());
    for seed in 0..100 {
        let cfg = HanConfig { seed, effective: true, ..HanConfig::default() };
        basic.push(ev.eval(&han_b(&src, &cfg).unwrap().approx).unwrap().rel_spectral);
        eff.push(ev.eval(han_u(&src, &cfg).unwrap().effective.as_ref().unwrap()).unwrap().rel_spectral);
    }
    let (b, e) = (median(basic), median(eff));
    eprintln!("median han-b {b:.2e}, han-u effective {e:.2e}");
    assert!(e <= 1e4 * b && b <= 10.0 * e, "median han-b {b:.2e}, han-u effective {e:.2e}");
}

#[test]
fn stop_rules_are_honoured() {
    let src = kernel_source(9, 60, 200, 0.5);
    let run = han_a(&src, &HanConfig { max_rank: Some(6), ..HanConfig::default() }).unwrap();
    assert_eq!(run.trace.stop, StopReason::MaxRank);
    assert!(run.approx.rank() >= 6);
    let run = han_u(&src, &HanConfig { max_samples: Some(12), ..HanConfig::default() }).unwrap();
    assert_eq!(run.trace.stop, StopReason::MaxSamples);
    assert_eq!(run.trace.last().unwrap().total_samples, 15);
    assert!(han_b(&src, &HanConfig { b: 0, ..HanConfig::default() }).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn subset_update_bounds_coefficients(seed in 0u64..10_000, k in 1usize..12, b in 1usize..8, gap in 0.3f64..2.0) {
        let src = kernel_source(seed, 80, 100, gap);
        let cfg = SrrConfig::default();
        let mut rng = seeded_rng(seed);
        let cols = uniform_subset(&mut rng, 100, k + b);
        let (j, l) = cols.split_at(k);
        let piv = srr(&src.cols(j).unwrap(), &cfg).unwrap();
        let up = set_upd(&src, &piv.pivots, &piv.coeff, l, None, &cfg).unwrap();
        prop_assert!(up.coeff.max_abs() <= b as f64 * cfg.c * cfg.c + cfg.c);
        prop_assert!(is_subset(&piv.pivots, &up.pivots));
        prop_assert_eq!(up.coeff.shape(), (80 - up.pivots.len(), up.pivots.len()));
        let block = src.cols(&cols).unwrap();
        let rest = complement(&up.pivots, 80);
        let res = block.select_rows(&rest).sub(&up.coeff.matmul(&block.select_rows(&up.pivots)));
        prop_assert!(res.norm_fro() <= 1e-10 * block.norm_fro());
    }

    #[test]
    fn complex_runs_are_exact_on_low_rank(seed in 0u64..10_000, r in 1usize..10) {
        let mut rng = seeded_rng(seed);
        let a: Mat<Complex64> = Mat::random_normal(40, r, &mut rng).matmul(&Mat::random_normal(r, 70, &mut rng));
        let src = MatrixSource::dense(a.clone()).unwrap();
        let run = han_a(&src, &HanConfig { seed, ..HanConfig::default() }).unwrap();
        prop_assert_eq!(run.approx.rank(), r);
        prop_assert!(run.approx.to_dense().sub(&a).norm_fro() <= 1e-12 * a.norm_fro());
    }
}
