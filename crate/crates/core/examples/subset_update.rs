//! Growing a row skeleton by pivoting sampled Schur-complement columns
//! instead of re-pivoting the whole sampled block.

use han_nystrom::han::set_upd;
use han_nystrom::kernel::{KernelSpec, MatrixAccess, MatrixSource, PointSet};
use han_nystrom::linalg::{complement, srr, SrrConfig};
use han_nystrom::sampling::{seeded_rng, uniform_subset};
use rand::Rng;

fn main() -> han_nystrom::Result<()> {
    let mut rng = seeded_rng(5);
    let mut cloud = |count: usize, shift: f64| {
        let c: Vec<f64> = (0..2 * count).map(|t| rng.random::<f64>() + if t % 2 == 0 { shift } else { 0.0 }).collect();
        PointSet::new(2, c)
    };
    let (x, y) = (cloud(400, 0.0)?, cloud(600, 1.0)?);
    let src: MatrixSource<f64> = MatrixSource::kernel(KernelSpec::InvSqrtDistSqPlus1, x, y, false)?;
    let cfg = SrrConfig::default();
    let b = 5;

    let mut rng = seeded_rng(9);
    let mut sampled = uniform_subset(&mut rng, src.ncols(), b);
    let piv = srr(&src.cols(&sampled)?, &cfg)?;
    let (mut pivots, mut coeff) = (piv.pivots, piv.coeff);
    for step in 1..=6 {
        let fresh: Vec<usize> =
            uniform_subset(&mut rng, src.ncols(), src.ncols()).into_iter().filter(|j| !sampled.contains(j)).take(b).collect();
        let up = set_upd(&src, &pivots, &coeff, &fresh, None, &cfg)?;
        sampled.extend_from_slice(&fresh);
        pivots = up.pivots;
        coeff = up.coeff;

        let block = src.cols(&sampled)?;
        let rest = complement(&pivots, src.nrows());
        let res = block.select_rows(&rest).sub(&coeff.matmul(&block.select_rows(&pivots)));
        println!(
            "step {step}: |I| = {:>2}, new rows {:?}, max |E| = {:.3} (bound {}), sampled-block residual {:.2e}{}",
            pivots.len(),
            up.update.i_hat,
            coeff.max_abs(),
            b as f64 * cfg.c * cfg.c + cfg.c,
            res.norm_fro() / block.norm_fro(),
            if up.no_update { " (no update)" } else { "" }
        );
    }
    Ok(())
}
