//! The point-set generators, their sizes and separations, and a CSV dump
//! of one of them.

use han_nystrom::datasets::{gen_airfoil_like, gen_fem_grid, gen_flower, gen_set3d};
use han_nystrom::kernel::PointSet;

fn describe(name: &str, (x, y): &(PointSet, PointSet)) {
    let (d, _, _) = x.min_cross_distance(y);
    let (lo, hi) = y.bounding_box();
    println!("{name:>8}: dim {}, |x| = {:>4}, |y| = {:>5}, min |x - y| = {d:.3e}, y box {lo:.2?}..{hi:.2?}", x.dim(), x.len(), y.len());
}

fn main() -> han_nystrom::Result<()> {
    describe("flower", &gen_flower(1018, 13965, 0)?);
    describe("fem", &gen_fem_grid(821, 4125, 0)?);
    describe("airfoil", &gen_airfoil_like(617, 11078, 0)?);
    describe("set3d", &gen_set3d(717, 6650, 0, 1.0)?);

    let (x, _) = gen_flower(8, 8, 0)?;
    print!("\nfirst flower points as CSV:\n{}", x.to_csv());
    Ok(())
}
