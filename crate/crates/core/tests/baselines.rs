use han_nystrom::baselines::{nys_basic, nys_pivot, nys_refine, LowRankApprox};
use han_nystrom::kernel::{KernelSpec, MatrixSource, PointSet};
use han_nystrom::linalg::{complement, Mat, Scalar, SrrConfig};
use han_nystrom::sampling::seeded_rng;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

fn low_rank<T: Scalar>(seed: u64, m: usize, n: usize, r: usize) -> Mat<T> {
    let mut rng = seeded_rng(seed);
    Mat::<T>::random_normal(m, r, &mut rng).matmul(&Mat::random_normal(r, n, &mut rng))
}

fn smooth_kernel(seed: u64, m: usize, n: usize) -> MatrixSource<f64> {
    let mut rng = seeded_rng(seed);
    let mut pts = |count: usize, shift: f64| {
        let c: Vec<f64> = (0..2 * count).map(|t| rng.random::<f64>() + if t % 2 == 0 { shift } else { 0.0 }).collect();
        PointSet::new(2, c).unwrap()
    };
    let (x, y) = (pts(m, 0.0), pts(n, 2.5));
    MatrixSource::kernel(KernelSpec::InvDist, x, y, false).unwrap()
}

fn legal<T: Scalar>(a: &LowRankApprox<T>, m: usize, n: usize) -> Result<(), TestCaseError> {
    prop_assert_eq!(a.shape(), (m, n));
    for (idx, bound) in [(a.row_indices(), m), (a.col_indices(), n)] {
        if let Some(idx) = idx {
            let mut s = idx.to_vec();
            s.sort_unstable();
            s.dedup();
            prop_assert_eq!(s.len(), idx.len());
            prop_assert!(idx.iter().all(|&i| i < bound));
        }
    }
    Ok(())
}

/// A row skeleton reproduces its own rows up to rounding.
fn interpolates_rows<T: Scalar>(a: &LowRankApprox<T>, dense: &Mat<T>) -> Result<(), TestCaseError> {
    let rows = a.row_indices().unwrap();
    let diff = a.to_dense().select_rows(rows).sub(&dense.select_rows(rows));
    prop_assert!(diff.norm_fro() <= 1e-12 * dense.norm_fro());
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn baselines_are_legal_and_interpolate(seed in 0u64..5000, m in 8usize..60, n in 8usize..60, frac in 0.1f64..1.0) {
        let src = smooth_kernel(seed, m, n);
        let dense = src.materialize(m * n).unwrap();
        let s = ((m.min(n) as f64 * frac) as usize).max(1);
        let cfg = SrrConfig::default();
        let mut rng = seeded_rng(seed);
        let b = nys_basic(&src, s, cfg.rank_tol, &mut rng).unwrap();
        legal(&b, m, n)?;
        prop_assert_eq!(b.row_indices().unwrap().len(), s);
        let p = nys_pivot(&src, s, &cfg, &mut rng).unwrap();
        legal(&p, m, n)?;
        interpolates_rows(&p, &dense)?;
        let (r, rounds) = nys_refine(&src, s, 10, &cfg, &mut rng).unwrap();
        legal(&r, m, n)?;
        interpolates_rows(&r, &dense)?;
        prop_assert!((1..=10).contains(&rounds));
        prop_assert!(r.rank() <= s);
        let u = match &r {
            LowRankApprox::RowSkeleton { u, .. } => u,
            _ => unreachable!(),
        };
        let rest = complement(r.row_indices().unwrap(), m);
        prop_assert!(u.select_rows(&rest).max_abs() <= cfg.c);
    }

    #[test]
    fn baselines_are_seed_deterministic(seed in 0u64..5000) {
        let src = smooth_kernel(seed, 30, 40);
        let cfg = SrrConfig::default();
        let run = || {
            let mut rng = seeded_rng(seed);
            let b = nys_basic(&src, 10, cfg.rank_tol, &mut rng).unwrap().to_dense();
            let p = nys_pivot(&src, 10, &cfg, &mut rng).unwrap().to_dense();
            let (r, k) = nys_refine(&src, 10, 5, &cfg, &mut rng).unwrap();
            (b, p, r.to_dense(), k)
        };
        prop_assert_eq!(run(), run());
    }

    #[test]
    fn exact_on_low_rank(seed in 0u64..5000, r in 1usize..8, extra in 0usize..6) {
        let (m, n) = (50, 45);
        let a: Mat<Complex64> = low_rank(seed, m, n, r);
        let src = MatrixSource::dense(a.clone()).unwrap();
        let s = r + extra;
        let mut rng = seeded_rng(seed);
        let cfg = SrrConfig::default();
        let (refined, _) = nys_refine(&src, s, 10, &cfg, &mut rng).unwrap();
        let approx = [
            nys_basic(&src, s, 1e-12, &mut rng).unwrap(),
            nys_pivot(&src, s, &cfg, &mut rng).unwrap(),
            refined,
        ];
        for x in &approx {
            prop_assert_eq!(x.rank(), r);
            prop_assert!(x.to_dense().sub(&a).norm_fro() <= 1e-10 * a.norm_fro());
        }
    }
}

#[test]
fn sample_size_is_checked() {
    let src = smooth_kernel(1, 10, 20);
    let mut rng = seeded_rng(0);
    let cfg = SrrConfig::default();
    assert!(nys_basic(&src, 0, 1e-15, &mut rng).is_err());
    assert!(nys_basic(&src, 11, 1e-15, &mut rng).is_err());
    assert!(nys_pivot(&src, 21, &cfg, &mut rng).is_err());
    assert!(nys_refine(&src, 5, 0, &cfg, &mut rng).is_err());
}
