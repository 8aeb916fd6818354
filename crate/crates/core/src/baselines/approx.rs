use crate::error::{Error, Result};
use crate::linalg::{LinearOperator, Mat, Scalar};

/// A low-rank approximation built from actual rows and/or columns of `A`.
#[derive(Debug, Clone)]
pub enum LowRankApprox<T: Scalar> {
    /// `U * A(I, :)`; `u` is `m x k` with an identity block on the rows `I`.
    RowSkeleton { rows: Vec<usize>, u: Mat<T>, skeleton: Mat<T> },
    /// `A(:, J) * V^T`; `v` is `n x k` with an identity block on the columns `J`.
    ColSkeleton { cols: Vec<usize>, v: Mat<T>, skeleton: Mat<T> },
    /// `A(:, J) * core * A(I, :)`, with `core` of size `|J| x |I|`.
    Cur {
        rows: Vec<usize>,
        cols: Vec<usize>,
        c: Mat<T>,
        core: Mat<T>,
        r: Mat<T>,
        rank: usize,
    },
}

impl<T: Scalar> LowRankApprox<T> {
    pub fn row_skeleton(rows: Vec<usize>, u: Mat<T>, skeleton: Mat<T>) -> Result<Self> {
        if u.ncols() != rows.len() || skeleton.nrows() != rows.len() {
            return Err(Error::DimensionMismatch(format!(
                "row skeleton: |I| = {}, U is {}x{}, A(I,:) is {}x{}",
                rows.len(),
                u.nrows(),
                u.ncols(),
                skeleton.nrows(),
                skeleton.ncols()
            )));
        }
        Ok(Self::RowSkeleton { rows, u, skeleton })
    }

    pub fn col_skeleton(cols: Vec<usize>, v: Mat<T>, skeleton: Mat<T>) -> Result<Self> {
        if v.ncols() != cols.len() || skeleton.ncols() != cols.len() {
            return Err(Error::DimensionMismatch(format!(
                "column skeleton: |J| = {}, V is {}x{}, A(:,J) is {}x{}",
                cols.len(),
                v.nrows(),
                v.ncols(),
                skeleton.nrows(),
                skeleton.ncols()
            )));
        }
        Ok(Self::ColSkeleton { cols, v, skeleton })
    }

    pub fn shape(&self) -> (usize, usize) {
        match self {
            Self::RowSkeleton { u, skeleton, .. } => (u.nrows(), skeleton.ncols()),
            Self::ColSkeleton { v, skeleton, .. } => (skeleton.nrows(), v.nrows()),
            Self::Cur { c, r, .. } => (c.nrows(), r.ncols()),
        }
    }

    /// `|I|` for row skeletons, `|J|` for column skeletons, numerical rank of the core for CUR.
    pub fn rank(&self) -> usize {
        match self {
            Self::RowSkeleton { rows, .. } => rows.len(),
            Self::ColSkeleton { cols, .. } => cols.len(),
            Self::Cur { rank, .. } => *rank,
        }
    }

    pub fn row_indices(&self) -> Option<&[usize]> {
        match self {
            Self::RowSkeleton { rows, .. } | Self::Cur { rows, .. } => Some(rows),
            Self::ColSkeleton { .. } => None,
        }
    }

    pub fn col_indices(&self) -> Option<&[usize]> {
        match self {
            Self::ColSkeleton { cols, .. } | Self::Cur { cols, .. } => Some(cols),
            Self::RowSkeleton { .. } => None,
        }
    }

    pub fn form_name(&self) -> &'static str {
        match self {
            Self::RowSkeleton { .. } => "row-skeleton",
            Self::ColSkeleton { .. } => "col-skeleton",
            Self::Cur { .. } => "cur",
        }
    }

    /// `x -> A~ x`
    pub fn apply(&self, x: &[T]) -> Vec<T> {
        match self {
            Self::RowSkeleton { u, skeleton, .. } => u.mul_vec(&skeleton.mul_vec(x)),
            Self::ColSkeleton { v, skeleton, .. } => skeleton.mul_vec(&transpose_mul_vec(v, x)),
            Self::Cur { c, core, r, .. } => c.mul_vec(&core.mul_vec(&r.mul_vec(x))),
        }
    }

    /// `y -> A~^H y`
    pub fn apply_adjoint(&self, y: &[T]) -> Vec<T> {
        match self {
            Self::RowSkeleton { u, skeleton, .. } => skeleton.adjoint_mul_vec(&u.adjoint_mul_vec(y)),
            Self::ColSkeleton { v, skeleton, .. } => {
                // (A_J V^T)^H = conj(V) A_J^H
                let t = skeleton.adjoint_mul_vec(y);
                v.mul_vec(&t.iter().map(|z| z.conj()).collect::<Vec<_>>())
                    .into_iter()
                    .map(|z| z.conj())
                    .collect()
            }
            Self::Cur { c, core, r, .. } => r.adjoint_mul_vec(&core.adjoint_mul_vec(&c.adjoint_mul_vec(y))),
        }
    }

    /// Columns `c0..c0 + nc` of the dense approximation.
    pub fn dense_cols(&self, c0: usize, nc: usize) -> Mat<T> {
        match self {
            Self::RowSkeleton { u, skeleton, .. } => u.matmul(&skeleton.block(0, c0, skeleton.nrows(), nc)),
            Self::ColSkeleton { v, skeleton, .. } => skeleton.matmul(&v.block(c0, 0, nc, v.ncols()).transpose()),
            Self::Cur { c, core, r, .. } => c.matmul(&core.matmul(&r.block(0, c0, r.nrows(), nc))),
        }
    }

    pub fn to_dense(&self) -> Mat<T> {
        match self {
            Self::RowSkeleton { u, skeleton, .. } => u.matmul(skeleton),
            Self::ColSkeleton { v, skeleton, .. } => skeleton.matmul(&v.transpose()),
            Self::Cur { c, core, r, .. } => c.matmul(&core.matmul(r)),
        }
    }
}

/// `V^T x` without forming the transpose.
fn transpose_mul_vec<T: Scalar>(v: &Mat<T>, x: &[T]) -> Vec<T> {
    (0..v.ncols())
        .map(|j| v.col(j).iter().zip(x).map(|(&a, &b)| a * b).sum())
        .collect()
}

/// `A - A~` as an operator, for spectral-norm estimation.
pub struct Residual<'a, T: Scalar> {
    pub a: &'a Mat<T>,
    pub approx: &'a LowRankApprox<T>,
}

impl<T: Scalar> LinearOperator<T> for Residual<'_, T> {
    fn nrows(&self) -> usize {
        self.a.nrows()
    }
    fn ncols(&self) -> usize {
        self.a.ncols()
    }
    fn apply(&self, x: &[T]) -> Vec<T> {
        let mut y = self.a.mul_vec(x);
        for (yi, ai) in y.iter_mut().zip(self.approx.apply(x)) {
            *yi -= ai;
        }
        y
    }
    fn apply_adjoint(&self, y: &[T]) -> Vec<T> {
        let mut x = self.a.adjoint_mul_vec(y);
        for (xi, ai) in x.iter_mut().zip(self.approx.apply_adjoint(y)) {
            *xi -= ai;
        }
        x
    }
}
