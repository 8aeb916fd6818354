//! Strong rank-revealing row selection on a tall block, and the resulting
//! interpolative decomposition.

use han_nystrom::linalg::{srr, Mat, SrrConfig};
use han_nystrom::sampling::seeded_rng;

fn main() -> han_nystrom::Result<()> {
    let mut rng = seeded_rng(1);
    // 200 x 12 block of numerical rank 8 plus a tiny perturbation.
    let low: Mat<f64> = Mat::random_normal(200, 8, &mut rng).matmul(&Mat::random_normal(8, 12, &mut rng));
    let noise: Mat<f64> = Mat::random_normal(200, 12, &mut rng).scaled(1e-13);
    let block = low.add(&noise);

    let cfg = SrrConfig { c: 2.0, rank_tol: 1e-10, ..SrrConfig::default() };
    let r = srr(&block, &cfg)?;
    let u = r.interpolation_matrix(block.nrows());
    let resid = block.sub(&u.matmul(&block.select_rows(&r.pivots)));

    println!("rank           {}", r.rank);
    println!("pivot rows     {:?}", r.pivots);
    println!("swaps          {}", r.swaps);
    println!("max |E|        {:.4} (bound {})", r.coeff.max_abs(), cfg.c);
    println!("rel residual   {:.2e}", resid.norm_fro() / block.norm_fro());
    Ok(())
}
