use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use rayon::prelude::*;

use super::{KernelSpec, PointSet};
use crate::error::{Error, Result};
use crate::linalg::{Mat, Scalar};

/// Default cap on `m * n` for [`MatrixSource::materialize`].
pub const DEFAULT_MATERIALIZE_CAP: usize = 1 << 25;

/// Entry access to an `m x n` matrix that may never be formed.
pub trait MatrixAccess<T: Scalar>: Sync {
    fn nrows(&self) -> usize;
    fn ncols(&self) -> usize;

    /// `A(rows, cols)` without index checks.
    fn fill_block(&self, rows: &[usize], cols: &[usize]) -> Mat<T>;

    fn block(&self, rows: &[usize], cols: &[usize]) -> Result<Mat<T>> {
        check_indices(rows, self.nrows())?;
        check_indices(cols, self.ncols())?;
        Ok(self.fill_block(rows, cols))
    }

    /// `A(rows, :)`
    fn rows(&self, rows: &[usize]) -> Result<Mat<T>> {
        let all: Vec<usize> = (0..self.ncols()).collect();
        self.block(rows, &all)
    }

    /// `A(:, cols)`
    fn cols(&self, cols: &[usize]) -> Result<Mat<T>> {
        let all: Vec<usize> = (0..self.nrows()).collect();
        self.block(&all, cols)
    }

    fn entry(&self, i: usize, j: usize) -> Result<T> {
        Ok(self.block(&[i], &[j])?[(0, 0)])
    }
}

fn check_indices(idx: &[usize], bound: usize) -> Result<()> {
    match idx.iter().find(|&&i| i >= bound) {
        Some(&index) => Err(Error::IndexOutOfRange { index, bound }),
        None => Ok(()),
    }
}

impl<T: Scalar, A: MatrixAccess<T> + ?Sized> MatrixAccess<T> for &A {
    fn nrows(&self) -> usize {
        (**self).nrows()
    }
    fn ncols(&self) -> usize {
        (**self).ncols()
    }
    fn fill_block(&self, rows: &[usize], cols: &[usize]) -> Mat<T> {
        (**self).fill_block(rows, cols)
    }
}

/// Plain (non-conjugating) transpose view.
pub struct Transposed<'a, A: ?Sized>(pub &'a A);

impl<T: Scalar, A: MatrixAccess<T> + ?Sized> MatrixAccess<T> for Transposed<'_, A> {
    fn nrows(&self) -> usize {
        self.0.ncols()
    }
    fn ncols(&self) -> usize {
        self.0.nrows()
    }
    fn fill_block(&self, rows: &[usize], cols: &[usize]) -> Mat<T> {
        self.0.fill_block(cols, rows).transpose()
    }
}

/// Wrapper with its own evaluation counter, for per-run accounting on a
/// shared source.
pub struct Counted<A> {
    inner: A,
    evals: AtomicU64,
}

impl<A> Counted<A> {
    pub fn new(inner: A) -> Self {
        Self { inner, evals: AtomicU64::new(0) }
    }

    pub fn evals(&self) -> u64 {
        self.evals.load(Ordering::Relaxed)
    }

    pub fn inner(&self) -> &A {
        &self.inner
    }
}

impl<T: Scalar, A: MatrixAccess<T>> MatrixAccess<T> for Counted<A> {
    fn nrows(&self) -> usize {
        self.inner.nrows()
    }
    fn ncols(&self) -> usize {
        self.inner.ncols()
    }
    fn fill_block(&self, rows: &[usize], cols: &[usize]) -> Mat<T> {
        self.evals.fetch_add((rows.len() * cols.len()) as u64, Ordering::Relaxed);
        self.inner.fill_block(rows, cols)
    }
}

/// Memoizes whole rows and whole columns so repeated requests cost no
/// further evaluations. Partial blocks are served from the cache when they
/// lie inside cached rows or columns, and evaluated directly otherwise.
pub struct Cached<A, T: Scalar> {
    inner: A,
    rows: Mutex<HashMap<usize, Vec<T>>>,
    cols: Mutex<HashMap<usize, Vec<T>>>,
}

impl<A, T: Scalar> Cached<A, T> {
    pub fn new(inner: A) -> Self {
        Self { inner, rows: Mutex::new(HashMap::new()), cols: Mutex::new(HashMap::new()) }
    }

    pub fn inner(&self) -> &A {
        &self.inner
    }
}

impl<T: Scalar, A: MatrixAccess<T>> Cached<A, T> {
    /// Ensures `idx` are cached along one axis, fetching the missing ones in one block.
    fn fetch(&self, idx: &[usize], by_row: bool) {
        let cache = if by_row { &self.rows } else { &self.cols };
        let mut missing: Vec<usize> = {
            let c = cache.lock().unwrap();
            idx.iter().copied().filter(|i| !c.contains_key(i)).collect()
        };
        missing.sort_unstable();
        missing.dedup();
        if missing.is_empty() {
            return;
        }
        let mut c = cache.lock().unwrap();
        if by_row {
            let all: Vec<usize> = (0..self.inner.ncols()).collect();
            let b = self.inner.fill_block(&missing, &all);
            for (t, &i) in missing.iter().enumerate() {
                c.insert(i, b.row(t));
            }
        } else {
            let all: Vec<usize> = (0..self.inner.nrows()).collect();
            let b = self.inner.fill_block(&all, &missing);
            for (t, &j) in missing.iter().enumerate() {
                c.insert(j, b.col(t).to_vec());
            }
        }
    }
}

impl<T: Scalar, A: MatrixAccess<T>> MatrixAccess<T> for Cached<A, T> {
    fn nrows(&self) -> usize {
        self.inner.nrows()
    }
    fn ncols(&self) -> usize {
        self.inner.ncols()
    }
    fn fill_block(&self, rows: &[usize], cols: &[usize]) -> Mat<T> {
        let full_cols = rows.len() == self.nrows() && rows.iter().enumerate().all(|(t, &i)| t == i);
        let full_rows = cols.len() == self.ncols() && cols.iter().enumerate().all(|(t, &j)| t == j);
        if full_cols {
            self.fetch(cols, false);
        } else if full_rows {
            self.fetch(rows, true);
        }
        {
            let c = self.cols.lock().unwrap();
            if cols.iter().all(|j| c.contains_key(j)) {
                return Mat::from_fn(rows.len(), cols.len(), |a, b| c[&cols[b]][rows[a]]);
            }
        }
        {
            let r = self.rows.lock().unwrap();
            if rows.iter().all(|i| r.contains_key(i)) {
                return Mat::from_fn(rows.len(), cols.len(), |a, b| r[&rows[a]][cols[b]]);
            }
        }
        self.inner.fill_block(rows, cols)
    }
}

#[derive(Debug, Clone)]
enum Backing<T: Scalar> {
    Dense(Mat<T>),
    Kernel {
        spec: KernelSpec,
        x: PointSet,
        y: PointSet,
        complex_plane: bool,
    },
    /// First column of a `2n x 2n` circulant; the source is its upper-right `n x n` block.
    CirculantCorner { first_col: Vec<T>, n: usize },
}

/// A matrix given by a dense array, a kernel over two point sets, or the
/// corner block of a circulant. Every entry produced is counted.
#[derive(Debug)]
pub struct MatrixSource<T: Scalar> {
    backing: Backing<T>,
    evals: AtomicU64,
}

impl<T: Scalar> MatrixSource<T> {
    fn with(backing: Backing<T>) -> Self {
        Self { backing, evals: AtomicU64::new(0) }
    }

    pub fn dense(a: Mat<T>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::EmptyMatrix);
        }
        Ok(Self::with(Backing::Dense(a)))
    }

    /// `A = (kappa(x_i, y_j))`. Singular kernels require `min |x_i - y_j| > 0`.
    pub fn kernel(spec: KernelSpec, x: PointSet, y: PointSet, complex_plane: bool) -> Result<Self> {
        if x.dim() != y.dim() {
            return Err(Error::DimensionMismatch(format!(
                "x has dimension {}, y has dimension {}",
                x.dim(),
                y.dim()
            )));
        }
        spec.validate(x.dim(), complex_plane)?;
        if spec.is_complex_valued(x.dim(), complex_plane) && !T::IS_COMPLEX {
            return Err(Error::Config(format!("kernel {spec} is complex-valued; use a complex source")));
        }
        if spec.is_singular() {
            let (d, i, j) = x.min_cross_distance(&y);
            if !(d > 0.0) {
                return Err(Error::CoincidentPoints { x: i, y: j });
            }
        }
        Ok(Self::with(Backing::Kernel { spec, x, y, complex_plane }))
    }

    /// Upper-right `n x n` block of the circulant with first column `first_col`
    /// (length `2n`): `A(i, j) = first_col[(i - j - n) mod 2n]`.
    pub fn circulant_corner(first_col: Vec<T>) -> Result<Self> {
        if first_col.len() < 2 || first_col.len() % 2 != 0 {
            return Err(Error::Config(format!(
                "circulant first column must have even length >= 2, got {}",
                first_col.len()
            )));
        }
        if let Some(p) = first_col.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row: p, col: 0 });
        }
        let n = first_col.len() / 2;
        Ok(Self::with(Backing::CirculantCorner { first_col, n }))
    }

    /// Total entries produced since construction or the last reset.
    pub fn evals(&self) -> u64 {
        self.evals.load(Ordering::Relaxed)
    }

    pub fn reset_evals(&self) {
        self.evals.store(0, Ordering::Relaxed);
    }

    pub fn kernel_spec(&self) -> Option<&KernelSpec> {
        match &self.backing {
            Backing::Kernel { spec, .. } => Some(spec),
            _ => None,
        }
    }

    /// The whole matrix, if `m * n <= cap`.
    pub fn materialize(&self, cap: usize) -> Result<Mat<T>> {
        let (m, n) = (self.nrows(), self.ncols());
        let size = m.checked_mul(n).unwrap_or(usize::MAX);
        if size > cap {
            return Err(Error::OracleCap { size, cap });
        }
        if let Backing::Dense(a) = &self.backing {
            self.evals.fetch_add(size as u64, Ordering::Relaxed);
            return Ok(a.clone());
        }
        let all_rows: Vec<usize> = (0..m).collect();
        let all_cols: Vec<usize> = (0..n).collect();
        Ok(self.fill_block(&all_rows, &all_cols))
    }
}

impl<T: Scalar> MatrixAccess<T> for MatrixSource<T> {
    fn nrows(&self) -> usize {
        match &self.backing {
            Backing::Dense(a) => a.nrows(),
            Backing::Kernel { x, .. } => x.len(),
            Backing::CirculantCorner { n, .. } => *n,
        }
    }

    fn ncols(&self) -> usize {
        match &self.backing {
            Backing::Dense(a) => a.ncols(),
            Backing::Kernel { y, .. } => y.len(),
            Backing::CirculantCorner { n, .. } => *n,
        }
    }

    fn fill_block(&self, rows: &[usize], cols: &[usize]) -> Mat<T> {
        self.evals.fetch_add((rows.len() * cols.len()) as u64, Ordering::Relaxed);
        let mut out = Mat::zeros(rows.len(), cols.len());
        if rows.is_empty() || cols.is_empty() {
            return out;
        }
        let height = rows.len();
        let data = out.as_mut_slice();
        match &self.backing {
            Backing::Dense(a) => {
                for (c, &j) in cols.iter().enumerate() {
                    let src = a.col(j);
                    for (dst, &i) in data[c * height..(c + 1) * height].iter_mut().zip(rows) {
                        *dst = src[i];
                    }
                }
            }
            Backing::Kernel { spec, x, y, complex_plane } => {
                let fill = |(c, col): (usize, &mut [T])| {
                    let yj = y.point(cols[c]);
                    for (dst, &i) in col.iter_mut().zip(rows) {
                        *dst = T::from_c64(spec.eval(x.point(i), yj, *complex_plane));
                    }
                };
                if rows.len() * cols.len() >= 1 << 16 {
                    data.par_chunks_mut(height).enumerate().for_each(fill);
                } else {
                    data.chunks_mut(height).enumerate().for_each(fill);
                }
            }
            Backing::CirculantCorner { first_col, n } => {
                let len = 2 * n;
                for (c, &j) in cols.iter().enumerate() {
                    for (dst, &i) in data[c * height..(c + 1) * height].iter_mut().zip(rows) {
                        *dst = first_col[(i + len - j - n) % len];
                    }
                }
            }
        }
        out
    }
}
