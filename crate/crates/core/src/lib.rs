//! Adaptive Nystrom-type low-rank approximation of kernel matrices.
//!
//! [`han`] holds the progressive-sampling schemes HAN-B, HAN-U and HAN-A,
//! [`baselines`] the fixed-sample Nystrom methods they are compared with,
//! and [`bench`] the experiment runner behind the `han-bench` binary.
//! [`linalg`] supplies the strong rank-revealing factorizations everything
//! is built on, [`kernel`] lazy matrix access, and [`datasets`] the test
//! geometries.

pub mod baselines;
pub mod bench;
pub mod datasets;
pub mod error;
pub mod han;
pub mod kernel;
pub mod linalg;
pub mod sampling;

pub use error::{Error, Result};
