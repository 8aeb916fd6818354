//! A kernel matrix that is never formed: rows and columns are evaluated on
//! request and every entry is counted.

use han_nystrom::datasets::gen_flower;
use han_nystrom::kernel::{Cached, Counted, KernelSpec, MatrixAccess, MatrixSource};
use num_complex::Complex64;

fn main() -> han_nystrom::Result<()> {
    let (x, y) = gen_flower(1018, 13965, 0)?;
    // Planar points read as complex numbers, so 1/(x - y) is complex.
    let src: MatrixSource<Complex64> = MatrixSource::kernel(KernelSpec::InvDiff, x, y, true)?;
    println!("A is {} x {}", src.nrows(), src.ncols());

    let rows = src.rows(&[0, 500])?;
    let cols = src.cols(&[3, 4, 5])?;
    println!("A(0, 3) = {:.6}", rows[(0, 3)]);
    println!("A(500, 4) = {:.6}", cols[(500, 1)]);
    println!("entries evaluated: {} (2 n + 3 m)", src.evals());

    let counted = Counted::new(&src);
    let cached = Cached::<_, Complex64>::new(&counted);
    for _ in 0..3 {
        cached.cols(&[10, 11])?;
    }
    cached.block(&[7, 8], &[10])?;
    println!("with memoization, three requests for two columns cost {} evaluations", counted.evals());
    Ok(())
}
