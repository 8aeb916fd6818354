//! The three progressive schemes on the Flower problem, printing the
//! per-iteration trace of the last one.

use han_nystrom::datasets::gen_flower;
use han_nystrom::han::{han_a, han_b, han_u, Evaluator, HanConfig, ResidualMode};
use han_nystrom::kernel::{KernelSpec, MatrixSource};
use num_complex::Complex64;

fn main() -> han_nystrom::Result<()> {
    let (x, y) = gen_flower(1018, 13965, 0)?;
    let src: MatrixSource<Complex64> = MatrixSource::kernel(KernelSpec::InvDiff, x, y, true)?;
    let ev = Evaluator::new(&src, 0, ResidualMode::Operator)?.with_power_iters(20);
    let cfg = HanConfig { b: 5, tau: 1e-14, seed: 7, ..HanConfig::default() };

    let runs = [("han-b", han_b(&src, &cfg)?), ("han-u", han_u(&src, &cfg)?), ("han-a", han_a(&src, &cfg)?)];
    for (name, run) in &runs {
        let last = run.trace.last().expect("at least one iteration");
        println!(
            "{name}: stop {}, S = {}, rank {}, evals {}, rel error {:.2e}",
            run.trace.stop,
            last.total_samples,
            run.approx.rank(),
            last.kernel_evals,
            ev.eval(&run.approx)?.rel_spectral
        );
    }

    println!("\nhan-a trace");
    println!("{:>4} {:>5} {:>5} {:>5} {:>10} {:>10}", "it", "S", "|I|", "|J|", "theta", "phi");
    for r in &runs[2].1.trace.records {
        let f = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.2e}"));
        println!("{:>4} {:>5} {:>5} {:>5} {:>10} {:>10}", r.iteration, r.total_samples, r.rank_i, r.rank_j, f(r.theta), f(r.phi));
    }
    Ok(())
}
