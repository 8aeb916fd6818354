//! The three classical Nystrom baselines on the same kernel matrix:
//! uniform CUR, one-shot row pivoting, and alternating refinement.

use han_nystrom::baselines::{nys_basic, nys_pivot, nys_refine};
use han_nystrom::datasets::gen_fem_grid;
use han_nystrom::han::{Evaluator, ResidualMode, DEFAULT_ORACLE_CAP};
use han_nystrom::kernel::{Counted, KernelSpec, MatrixSource};
use han_nystrom::linalg::SrrConfig;
use han_nystrom::sampling::seeded_rng;

fn main() -> han_nystrom::Result<()> {
    let (x, y) = gen_fem_grid(821, 4125, 0)?;
    let src: MatrixSource<f64> = MatrixSource::kernel(KernelSpec::LogDist, x, y, false)?;
    let ev = Evaluator::new(&src, DEFAULT_ORACLE_CAP, ResidualMode::Auto)?;
    let cfg = SrrConfig::default();

    println!("{:>4} {:>8} {:>12} {:>12}", "S", "method", "rel error", "evals");
    for s in [20, 40, 80] {
        let mut rng = seeded_rng(s as u64);
        let c = Counted::new(&src);
        let a = nys_basic(&c, s, cfg.rank_tol, &mut rng)?;
        println!("{s:>4} {:>8} {:>12.3e} {:>12}", "nys-b", ev.eval(&a)?.rel_spectral, c.evals());
        let c = Counted::new(&src);
        let a = nys_pivot(&c, s, &cfg, &mut rng)?;
        println!("{s:>4} {:>8} {:>12.3e} {:>12}", "nys-p", ev.eval(&a)?.rel_spectral, c.evals());
        let c = Counted::new(&src);
        let (a, rounds) = nys_refine(&c, s, 10, &cfg, &mut rng)?;
        println!("{s:>4} {:>8} {:>12.3e} {:>12}  ({rounds} rounds)", "nys-r", ev.eval(&a)?.rel_spectral, c.evals());
    }
    Ok(())
}
