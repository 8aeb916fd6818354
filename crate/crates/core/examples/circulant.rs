//! Corner blocks of circulant matrices: rank grows slowly with the order, and
//! the progressive schemes find it from a handful of columns.

use han_nystrom::datasets::{gen_circulant_corner, Symbol};
use han_nystrom::han::{han_a, HanConfig};

fn main() -> han_nystrom::Result<()> {
    for symbol in [Symbol::Linear, Symbol::AbsSin] {
        println!("symbol f(t) = {symbol}");
        for n in [256, 512, 1024, 2048] {
            let src = gen_circulant_corner(n, symbol)?;
            let run = han_a(&src, &HanConfig { seed: 1, ..HanConfig::default() })?;
            let last = run.trace.last().expect("at least one iteration");
            println!(
                "  n = {n:>5}: rank {:>3}, S = {:>4}, evals {:>9}, stop {}",
                run.approx.rank(),
                last.total_samples,
                last.kernel_evals,
                run.trace.stop
            );
        }
    }
    Ok(())
}
