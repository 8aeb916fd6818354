use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Kernel functions `kappa(x, y)`; `r = |x - y|` throughout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelSpec {
    /// `1 / (x - y)`, complex-valued in the complex plane.
    InvDiff,
    /// `1 / (x - y)^2`, complex-valued in the complex plane.
    InvDiffSq,
    /// `1 / r`
    InvDist,
    /// `sqrt(r + 1)`
    SqrtDistPlus1,
    /// `1 / sqrt(r^2 + 1)`
    InvSqrtDistSqPlus1,
    /// `exp(-r)`
    ExpDist,
    /// `exp(-alpha r^2)`
    Gaussian(f64),
    /// `log r`
    LogDist,
    /// `tan(x . y + 1)` with the real dot product.
    TanDot,
    /// `exp(-r^2 / sigma^2)`
    GaussianSigma(f64),
    /// `sqrt(r^2 / sigma^2 + 1)`
    SqrtScaledPlus1(f64),
}

impl KernelSpec {
    /// Kernels that blow up at `x == y`.
    pub fn is_singular(&self) -> bool {
        matches!(self, Self::InvDiff | Self::InvDiffSq | Self::InvDist | Self::LogDist)
    }

    /// Whether entries are genuinely complex under the given convention.
    pub fn is_complex_valued(&self, dim: usize, complex_plane: bool) -> bool {
        complex_plane && dim == 2 && matches!(self, Self::InvDiff | Self::InvDiffSq)
    }

    pub fn validate(&self, dim: usize, complex_plane: bool) -> Result<()> {
        match *self {
            Self::Gaussian(p) | Self::GaussianSigma(p) | Self::SqrtScaledPlus1(p) if !(p > 0.0 && p.is_finite()) => {
                return Err(Error::Config(format!("kernel {self} needs a positive parameter")));
            }
            _ => {}
        }
        if complex_plane && dim != 2 {
            return Err(Error::Config(format!("complex-plane points must be 2D, got dimension {dim}")));
        }
        if matches!(self, Self::InvDiff | Self::InvDiffSq) && !(dim == 1 || complex_plane) {
            return Err(Error::Config(format!(
                "kernel {self} needs 1D points or 2D points in the complex plane"
            )));
        }
        Ok(())
    }

    /// Evaluates without argument checks; see [`eval_kernel`].
    pub fn eval(&self, x: &[f64], y: &[f64], complex_plane: bool) -> Complex64 {
        let dist2 = || x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
        let diff = || {
            if complex_plane {
                Complex64::new(x[0] - y[0], x[1] - y[1])
            } else {
                Complex64::new(x[0] - y[0], 0.0)
            }
        };
        let re = |v: f64| Complex64::new(v, 0.0);
        match *self {
            Self::InvDiff => diff().inv(),
            Self::InvDiffSq => {
                let d = diff();
                (d * d).inv()
            }
            Self::InvDist => re(1.0 / dist2().sqrt()),
            Self::SqrtDistPlus1 => re((dist2().sqrt() + 1.0).sqrt()),
            Self::InvSqrtDistSqPlus1 => re(1.0 / (dist2() + 1.0).sqrt()),
            Self::ExpDist => re((-dist2().sqrt()).exp()),
            Self::Gaussian(alpha) => re((-alpha * dist2()).exp()),
            Self::LogDist => re(0.5 * dist2().ln()),
            Self::TanDot => re((x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>() + 1.0).tan()),
            Self::GaussianSigma(s) => re((-dist2() / (s * s)).exp()),
            Self::SqrtScaledPlus1(s) => re((dist2() / (s * s) + 1.0).sqrt()),
        }
    }
}

/// `kappa(x, y)`, checking dimensions, parameters and coincident points.
pub fn eval_kernel(spec: &KernelSpec, x: &[f64], y: &[f64], complex_plane: bool) -> Result<Complex64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch(format!("points of dimension {} and {}", x.len(), y.len())));
    }
    spec.validate(x.len(), complex_plane)?;
    if spec.is_singular() && x == y {
        return Err(Error::CoincidentPoints { x: 0, y: 0 });
    }
    Ok(spec.eval(x, y, complex_plane))
}

impl fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::InvDiff => write!(f, "inv-diff"),
            Self::InvDiffSq => write!(f, "inv-diff-sq"),
            Self::InvDist => write!(f, "inv-dist"),
            Self::SqrtDistPlus1 => write!(f, "sqrt-dist-plus1"),
            Self::InvSqrtDistSqPlus1 => write!(f, "inv-sqrt-dist-sq-plus1"),
            Self::ExpDist => write!(f, "exp-dist"),
            Self::Gaussian(a) => write!(f, "gaussian:{a}"),
            Self::LogDist => write!(f, "log-dist"),
            Self::TanDot => write!(f, "tan-dot"),
            Self::GaussianSigma(s) => write!(f, "gaussian-sigma:{s}"),
            Self::SqrtScaledPlus1(s) => write!(f, "sqrt-scaled-plus1:{s}"),
        }
    }
}

impl FromStr for KernelSpec {
    type Err = Error;

    /// Accepts the [`Display`](fmt::Display) names; parameterized kernels
    /// take `name:value`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, param) = match s.split_once(':') {
            Some((n, p)) => {
                let v: f64 = p
                    .trim()
                    .parse()
                    .map_err(|_| Error::Config(format!("bad kernel parameter in {s:?}")))?;
                (n.trim(), Some(v))
            }
            None => (s.trim(), None),
        };
        let need = |p: Option<f64>| p.ok_or_else(|| Error::Config(format!("kernel {name} needs a parameter (name:value)")));
        let spec = match name {
            "inv-diff" => Self::InvDiff,
            "inv-diff-sq" => Self::InvDiffSq,
            "inv-dist" => Self::InvDist,
            "sqrt-dist-plus1" => Self::SqrtDistPlus1,
            "inv-sqrt-dist-sq-plus1" => Self::InvSqrtDistSqPlus1,
            "exp-dist" => Self::ExpDist,
            "gaussian" => Self::Gaussian(need(param)?),
            "log-dist" => Self::LogDist,
            "tan-dot" => Self::TanDot,
            "gaussian-sigma" => Self::GaussianSigma(need(param)?),
            "sqrt-scaled-plus1" => Self::SqrtScaledPlus1(need(param)?),
            _ => return Err(Error::Config(format!("unknown kernel {name:?}"))),
        };
        if param.is_some() && !matches!(spec, Self::Gaussian(_) | Self::GaussianSigma(_) | Self::SqrtScaledPlus1(_)) {
            return Err(Error::Config(format!("kernel {name} takes no parameter")));
        }
        Ok(spec)
    }
}
