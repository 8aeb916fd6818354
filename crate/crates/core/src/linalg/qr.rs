//! Householder QR with column pivoting.

use super::{Mat, Scalar};
use crate::error::{Error, Result};

/// `H = I - beta * u * u^H`, acting on rows `offset..`.
#[derive(Debug, Clone)]
struct Reflector<T: Scalar> {
    offset: usize,
    u: Vec<T>,
    beta: f64,
}

impl<T: Scalar> Reflector<T> {
    fn apply(&self, y: &mut [T]) {
        if self.beta == 0.0 {
            return;
        }
        let seg = &mut y[self.offset..];
        let dot: T = self.u.iter().zip(seg.iter()).map(|(&u, &v)| u.conj() * v).sum();
        let s = dot.scale(self.beta);
        for (v, &u) in seg.iter_mut().zip(&self.u) {
            *v -= u * s;
        }
    }
}

/// Column-pivoted QR: `M * P = Q * R` with `|R[0,0]| >= |R[1,1]| >= ...`.
///
/// When built with [`cpqr_truncated`], only the first `rank` Householder
/// steps are taken; rows `rank..` of the stored factor then hold the
/// untouched trailing block.
#[derive(Debug, Clone)]
pub struct Cpqr<T: Scalar> {
    factors: Mat<T>,
    reflectors: Vec<Reflector<T>>,
    perm: Vec<usize>,
    rank: usize,
}

impl<T: Scalar> Cpqr<T> {
    /// `perm[j]` is the original column placed at position `j`.
    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    /// Number of Householder steps taken (the detected rank when truncated).
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn nrows(&self) -> usize {
        self.factors.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.factors.ncols()
    }

    /// Upper-trapezoidal `R` of size `rank x n`.
    pub fn r(&self) -> Mat<T> {
        Mat::from_fn(self.rank, self.factors.ncols(), |i, j| {
            if i <= j {
                self.factors[(i, j)]
            } else {
                T::zero()
            }
        })
    }

    /// `|R[k,k]|` for `k < rank`.
    pub fn diag_moduli(&self) -> Vec<f64> {
        (0..self.rank).map(|k| self.factors[(k, k)].modulus()).collect()
    }

    /// Overwrites `x` (m x p) with `Q * x`.
    pub fn apply_q(&self, x: &mut Mat<T>) {
        assert_eq!(x.nrows(), self.nrows());
        for j in 0..x.ncols() {
            let col = x.col_mut(j);
            for h in self.reflectors.iter().rev() {
                h.apply(col);
            }
        }
    }

    /// Overwrites `x` (m x p) with `Q^H * x`.
    pub fn apply_qh(&self, x: &mut Mat<T>) {
        assert_eq!(x.nrows(), self.nrows());
        for j in 0..x.ncols() {
            let col = x.col_mut(j);
            for h in &self.reflectors {
                h.apply(col);
            }
        }
    }

    /// First `rank` columns of `Q`.
    pub fn q_thin(&self) -> Mat<T> {
        let m = self.nrows();
        let mut q = Mat::from_fn(m, self.rank, |i, j| if i == j { T::one() } else { T::zero() });
        self.apply_q(&mut q);
        q
    }
}

fn check_input<T: Scalar>(m: &Mat<T>) -> Result<()> {
    if m.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    for j in 0..m.ncols() {
        if let Some(i) = m.col(j).iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row: i, col: j });
        }
    }
    Ok(())
}

/// Full column-pivoted QR (`min(m, n)` steps).
pub fn cpqr<T: Scalar>(m: &Mat<T>) -> Result<Cpqr<T>> {
    check_input(m)?;
    Ok(factorize(m.clone(), 0.0, 0.0, false))
}

/// Column-pivoted QR that stops once the largest remaining column norm is
/// at most `max(rel_tol * |R[0,0]|, abs_floor)`.
pub fn cpqr_truncated<T: Scalar>(m: &Mat<T>, rel_tol: f64, abs_floor: f64) -> Result<Cpqr<T>> {
    check_input(m)?;
    Ok(factorize(m.clone(), rel_tol, abs_floor, true))
}

/// 2-norm without underflow for tiny entries.
fn scaled_norm<T: Scalar>(x: &[T]) -> f64 {
    let big = x.iter().map(|v| v.modulus()).fold(0.0, f64::max);
    if big == 0.0 || !big.is_finite() {
        return big;
    }
    big * x.iter().map(|v| (v.modulus() / big).powi(2)).sum::<f64>().sqrt()
}

fn factorize<T: Scalar>(mut a: Mat<T>, rel_tol: f64, abs_floor: f64, truncate: bool) -> Cpqr<T> {
    let (m, n) = a.shape();
    let steps = m.min(n);
    let mut perm: Vec<usize> = (0..n).collect();
    let mut reflectors = Vec::with_capacity(steps);
    let mut norms_sq = vec![0.0f64; n];
    let mut threshold = 0.0f64;
    let mut rank = steps;

    for k in 0..steps {
        // Recompute trailing column norms exactly; no downdating drift.
        let mut best = k;
        for j in k..n {
            norms_sq[j] = a.col(j)[k..].iter().map(|v| v.modulus_sq()).sum();
            let better = norms_sq[j] > norms_sq[best]
                || (norms_sq[j] == norms_sq[best] && perm[j] < perm[best]);
            if better {
                best = j;
            }
        }
        let best_norm = norms_sq[best].sqrt();
        if k == 0 {
            threshold = (rel_tol * best_norm).max(abs_floor);
        }
        if truncate && (best_norm <= threshold || best_norm == 0.0) {
            rank = k;
            break;
        }
        if best != k {
            perm.swap(k, best);
            norms_sq.swap(k, best);
            for i in 0..m {
                let t = a[(i, k)];
                a[(i, k)] = a[(i, best)];
                a[(i, best)] = t;
            }
        }

        let x = &a.col(k)[k..];
        let xnorm = scaled_norm(x);
        let reflector = if xnorm < f64::MIN_POSITIVE {
            Reflector {
                offset: k,
                u: vec![T::zero(); m - k],
                beta: 0.0,
            }
        } else {
            let x0 = x[0];
            let alpha = -(x0.phase().scale(xnorm));
            let mut u = x.to_vec();
            u[0] = x0 - alpha;
            // |u[0]| = xnorm + |x0| is the largest entry; unit scale keeps beta finite.
            let inv = 1.0 / (xnorm + x0.modulus());
            u.iter_mut().for_each(|v| *v = v.scale(inv));
            let beta = 2.0 / u.iter().map(|v| v.modulus_sq()).sum::<f64>();
            Reflector { offset: k, u, beta }
        };
        if reflector.beta != 0.0 {
            let alpha = -(a[(k, k)].phase().scale(xnorm));
            a[(k, k)] = alpha;
            for v in &mut a.col_mut(k)[k + 1..] {
                *v = T::zero();
            }
            for j in k + 1..n {
                reflector.apply(a.col_mut(j));
            }
        }
        reflectors.push(reflector);
    }

    Cpqr {
        factors: a,
        reflectors,
        perm,
        rank,
    }
}

/// Solves `R x = b` in place for upper-triangular `R` (k x k prefix of `r`).
pub(crate) fn back_substitute<T: Scalar>(r: &Mat<T>, k: usize, b: &mut [T]) {
    for i in (0..k).rev() {
        let mut s = b[i];
        for j in i + 1..k {
            s -= r[(i, j)] * b[j];
        }
        b[i] = s / r[(i, i)];
    }
}
