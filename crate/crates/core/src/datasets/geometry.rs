use std::f64::consts::PI;

use rand::Rng;

use crate::error::{Error, Result};
use crate::kernel::PointSet;
use crate::sampling::{seeded_rng, uniform_subset};

/// Half-width of the `x` arc on the flower curve, in radians (a 25 degree arc).
pub const FLOWER_HALF_ARC: f64 = 12.5 * PI / 180.0;
/// Angular gap between the `x` arc and the `y` points on either side.
pub const FLOWER_GAP: f64 = 12.5 * PI / 180.0;

fn flower_radius(t: f64) -> f64 {
    1.0 + 0.3 * (8.0 * t).cos()
}

/// `count` jittered angles spread over `[lo, hi]`.
fn spread<R: Rng>(rng: &mut R, count: usize, lo: f64, hi: f64) -> Vec<f64> {
    let h = (hi - lo) / count as f64;
    (0..count)
        .map(|i| lo + h * (i as f64 + 0.5 + rng.random_range(-0.4..0.4)))
        .collect()
}

fn check_sizes(m: usize, n: usize) -> Result<()> {
    if m == 0 || n == 0 {
        return Err(Error::Config(format!("dataset sizes must be positive, got m = {m}, n = {n}")));
    }
    Ok(())
}

/// Points on the closed curve `r = 1 + 0.3 cos(8t)`: `x` on a 25 degree arc
/// around a petal tip, `y` on the rest of the curve beyond a guard gap.
pub fn gen_flower(m: usize, n: usize, seed: u64) -> Result<(PointSet, PointSet)> {
    check_sizes(m, n)?;
    let mut rng = seeded_rng(seed);
    let on_curve = |t: f64| {
        let r = flower_radius(t);
        [r * t.cos(), r * t.sin()]
    };
    let xs = spread(&mut rng, m, -FLOWER_HALF_ARC, FLOWER_HALF_ARC);
    let lo = FLOWER_HALF_ARC + FLOWER_GAP;
    let ys = spread(&mut rng, n, lo, 2.0 * PI - lo);
    let x = xs.into_iter().flat_map(on_curve).collect();
    let y = ys.into_iter().flat_map(on_curve).collect();
    Ok((PointSet::new(2, x)?, PointSet::new(2, y)?))
}

/// Golden-angle (Vogel) spiral points with uniform density between radii.
fn vogel(count: usize, r0: f64, r1: f64, phase: f64) -> Vec<f64> {
    let golden = PI * (3.0 - 5.0f64.sqrt());
    let mut out = Vec::with_capacity(2 * count);
    for i in 0..count {
        let u = (i as f64 + 0.5) / count as f64;
        let r = (r0 * r0 + u * (r1 * r1 - r0 * r0)).sqrt();
        let t = phase + golden * i as f64;
        out.push(r * t.cos());
        out.push(r * t.sin());
    }
    out
}

/// Near-uniform mesh-like points: `x` fills the unit disk, `y` a
/// surrounding annulus of the same density beyond a gap of one mesh width.
pub fn gen_fem_grid(m: usize, n: usize, seed: u64) -> Result<(PointSet, PointSet)> {
    check_sizes(m, n)?;
    let mut rng = seeded_rng(seed);
    let h = (PI / m as f64).sqrt();
    let inner = 1.0 + h;
    let outer = (inner * inner + n as f64 / m as f64).sqrt();
    let x = vogel(m, 0.0, 1.0, rng.random_range(0.0..2.0 * PI));
    let y = vogel(n, inner, outer, rng.random_range(0.0..2.0 * PI));
    Ok((PointSet::new(2, x)?, PointSet::new(2, y)?))
}

/// Half thickness of a symmetric 12% airfoil of unit chord at `s` in `[0, 1]`.
fn thickness(s: f64) -> f64 {
    0.6 * (0.2969 * s.sqrt() - 0.126 * s - 0.3516 * s * s + 0.2843 * s.powi(3) - 0.1015 * s.powi(4))
}

/// Bounds of the `x` rectangle and of the excluded region around it.
const AIRFOIL_X: [f64; 4] = [0.3, 0.6, 0.08, 0.2];
const AIRFOIL_GUARD: f64 = 0.03;

/// Scattered unstructured-mesh-like cloud around an airfoil: density decays
/// away from the body, a wake strip trails the body, and `x` is a
/// rectangular patch above the upper surface.
pub fn gen_airfoil_like(m: usize, n: usize, seed: u64) -> Result<(PointSet, PointSet)> {
    check_sizes(m, n)?;
    let mut rng = seeded_rng(seed);
    let [x0, x1, y0, y1] = AIRFOIL_X;
    let mut x = Vec::with_capacity(2 * m);
    while x.len() < 2 * m {
        let px = rng.random_range(x0..x1);
        // Denser toward the body, as in a boundary-layer mesh.
        let py = y0 + (y1 - y0) * rng.random::<f64>().powi(2);
        if py > thickness(px) {
            x.push(px);
            x.push(py);
        }
    }
    let g = AIRFOIL_GUARD;
    let mut y = Vec::with_capacity(2 * n);
    while y.len() < 2 * n {
        let (px, py) = if rng.random::<f64>() < 0.2 {
            let px = rng.random_range(1.0..3.0);
            let w = 0.02 + 0.05 * (px - 1.0);
            (px, rng.random_range(-w..w))
        } else {
            let s = rng.random_range(0.0..1.0f64);
            let d = (0.002f64.ln() + rng.random::<f64>() * (2.0f64.ln() - 0.002f64.ln())).exp();
            let t = thickness(s);
            let a = rng.random_range(0.0..2.0 * PI);
            let sign = if a.sin() >= 0.0 { 1.0 } else { -1.0 };
            (s + d * a.cos(), sign * (t + d * a.sin().abs()))
        };
        let in_guard = px > x0 - g && px < x1 + g && py > y0 - g && py < y1 + g;
        let in_body = (0.0..=1.0).contains(&px) && py.abs() <= thickness(px);
        if !in_guard && !in_body {
            y.push(px);
            y.push(py);
        }
    }
    Ok((PointSet::new(2, x)?, PointSet::new(2, y)?))
}

/// Structured 3D block `x` and a jittered lattice cloud `y` around it.
///
/// `x` is a cubic grid of spacing `h` inside `[0, 1]^3`; `y` is drawn from a
/// lattice of the same spacing covering a larger cube, keeping two grid
/// layers clear of `x`, with each point moved uniformly within
/// `[-jitter h / 2, jitter h / 2]^3`.
pub fn gen_set3d(m: usize, n: usize, seed: u64, jitter: f64) -> Result<(PointSet, PointSet)> {
    check_sizes(m, n)?;
    if !(0.0..=1.0).contains(&jitter) {
        return Err(Error::Config(format!("jitter must lie in [0, 1], got {jitter}")));
    }
    let mut rng = seeded_rng(seed);
    let side = (m as f64).cbrt().ceil() as usize;
    let h = 1.0 / side as f64;
    let mut x = Vec::with_capacity(3 * m);
    'outer: for i in 0..side {
        for j in 0..side {
            for k in 0..side {
                if x.len() == 3 * m {
                    break 'outer;
                }
                x.extend_from_slice(&[(i as f64 + 0.5) * h, (j as f64 + 0.5) * h, (k as f64 + 0.5) * h]);
            }
        }
    }
    // Lattice cells at integer offsets from the x grid, excluding a shell of two layers.
    let clear = 2i64;
    let mut reach = side as i64 + clear;
    let lattice = loop {
        let mut cells = Vec::new();
        for i in -reach..side as i64 + reach {
            for j in -reach..side as i64 + reach {
                for k in -reach..side as i64 + reach {
                    let inside = |c: i64| c >= -clear && c < side as i64 + clear;
                    if !(inside(i) && inside(j) && inside(k)) {
                        cells.push([i, j, k]);
                    }
                }
            }
        }
        if cells.len() >= n {
            break cells;
        }
        reach += 1;
    };
    let pick = uniform_subset(&mut rng, lattice.len(), n);
    let mut y = Vec::with_capacity(3 * n);
    for p in pick {
        for c in lattice[p] {
            let jit = if jitter > 0.0 { rng.random_range(-0.5..0.5) * jitter * h } else { 0.0 };
            y.push((c as f64 + 0.5) * h + jit);
        }
    }
    Ok((PointSet::new(3, x)?, PointSet::new(3, y)?))
}
