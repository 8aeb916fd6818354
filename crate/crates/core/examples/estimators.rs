//! Randomized residual estimates from a few sampled Schur-complement
//! columns, compared with the exact residual of a row skeleton.

use han_nystrom::han::{estimate_phi, estimate_theta};
use han_nystrom::kernel::{KernelSpec, MatrixAccess, MatrixSource, PointSet};
use han_nystrom::linalg::{complement, norm2, srr, SrrConfig};
use han_nystrom::sampling::{seeded_rng, uniform_subset};
use rand::Rng;

fn main() -> han_nystrom::Result<()> {
    let mut rng = seeded_rng(11);
    let mut cloud = |count: usize, shift: f64| {
        let c: Vec<f64> = (0..2 * count).map(|t| rng.random::<f64>() + if t % 2 == 0 { shift } else { 0.0 }).collect();
        PointSet::new(2, c)
    };
    let (x, y) = (cloud(300, 0.0)?, cloud(800, 1.5)?);
    let src: MatrixSource<f64> = MatrixSource::kernel(KernelSpec::ExpDist, x, y, false)?;
    let a = src.materialize(300 * 800)?;
    let n = src.ncols();

    let mut rng = seeded_rng(3);
    let j = uniform_subset(&mut rng, n, 12);
    let piv = srr(&src.cols(&j)?, &SrrConfig::default())?;
    let rest = complement(&piv.pivots, src.nrows());
    // Schur complement S = A(comp I, :) - E A(I, :).
    let schur = a.select_rows(&rest).sub(&piv.coeff.matmul(&a.select_rows(&piv.pivots)));
    let a11 = a.select_rows(&piv.pivots).select_cols(&j[..piv.rank]);
    let k = piv.rank;
    println!("rank {k}; exact ||S||_F^2 = {:.4e}, ||S||_2/||A11||_2 = {:.4e}", schur.norm_fro_sq(), norm2(&schur)? / norm2(&a11)?);

    let mut thetas = Vec::new();
    for b in [5, 10, 20] {
        for _ in 0..3 {
            let l = uniform_subset(&mut rng, n, b);
            let s_cols = schur.select_cols(&l);
            let theta = estimate_theta(&s_cols, n, k)?;
            let phi = estimate_phi(&s_cols, &a11, n, k)?;
            thetas.push(theta);
            println!("b = {b:>2}: theta {theta:.4e}, phi {phi:.4e}");
        }
    }
    println!("mean theta {:.4e}", thetas.iter().sum::<f64>() / thetas.len() as f64);
    Ok(())
}
