//! Point sets, the kernel catalog, and lazily evaluated matrix sources.

mod points;
mod source;
mod spec;

pub use points::PointSet;
pub use source::{Cached, Counted, MatrixAccess, MatrixSource, Transposed, DEFAULT_MATERIALIZE_CAP};
pub use spec::{eval_kernel, KernelSpec};
